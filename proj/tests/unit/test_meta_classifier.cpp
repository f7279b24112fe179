#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "metades/errors.hpp"
#include "metades/meta_classifier.hpp"
#include "metades/rng.hpp"

using namespace metades;

namespace {

// Direct (not log-space) Gaussian density product.
double density(const GaussianNB& m, std::size_t c, const std::vector<double>& v) {
    double p = m.priors[c];
    for (std::size_t d = 0; d < v.size(); ++d) {
        const double var = m.variances[c][d];
        const double z = v[d] - m.means[c][d];
        p *= std::exp(-z * z / (2 * var)) / std::sqrt(2 * 3.141592653589793 * var);
    }
    return p;
}

}  // namespace

TEST_CASE("priors follow class frequencies") {
    std::vector<std::vector<double>> v;
    std::vector<int> a;
    for (int i = 0; i < 100; ++i) {
        v.push_back({double(i % 7), double(i % 3)});
        a.push_back(i < 60 ? 0 : 1);
    }
    const auto nb = fit_gaussian_nb(v, a);
    CHECK(nb.priors[0] == doctest::Approx(0.6));
    CHECK(nb.priors[1] == doctest::Approx(0.4));
    CHECK(nb.dimension() == 2);
}

TEST_CASE("four-sample hand set") {
    // Class 0: (0,1), (2,1). Class 1: (1,0), (1,4).
    const std::vector<std::vector<double>> v = {{0, 1}, {2, 1}, {1, 0}, {1, 4}};
    const std::vector<int> a = {0, 0, 1, 1};
    const auto nb = fit_gaussian_nb(v, a);
    CHECK(nb.means[0] == std::vector<double>{1.0, 1.0});
    CHECK(nb.means[1] == std::vector<double>{1.0, 2.0});
    CHECK(nb.variances[0][0] == doctest::Approx(1.0 + kVarianceFloor));
    CHECK(nb.variances[0][1] == doctest::Approx(kVarianceFloor));
    CHECK(nb.variances[1][0] == doctest::Approx(kVarianceFloor));
    CHECK(nb.variances[1][1] == doctest::Approx(4.0 + kVarianceFloor));
    CHECK(nb.priors[0] == 0.5);
}

TEST_CASE("constant dimension hits the variance floor") {
    const std::vector<std::vector<double>> v = {{1, 0.3}, {1, 0.5}, {1, 0.2}, {1, 0.9}};
    const auto nb = fit_gaussian_nb(v, std::vector<int>{0, 1, 0, 1});
    CHECK(nb.variances[0][0] == kVarianceFloor);
    const auto p = meta_posteriors(nb, std::vector<double>{1.0, 0.4});
    CHECK(std::isfinite(p[0]));
    CHECK(std::isfinite(p[1]));
}

TEST_CASE("missing meta-class is an error") {
    const std::vector<std::vector<double>> v = {{1}, {2}};
    CHECK_THROWS_AS(fit_gaussian_nb(v, std::vector<int>{1, 1}), TrainingError);
    CHECK_THROWS_AS(fit_gaussian_nb(v, std::vector<int>{1}), TrainingError);
    CHECK_THROWS_AS(fit_gaussian_nb({}, {}), TrainingError);
}

TEST_CASE("posteriors normalize and match the direct density ratio") {
    Rng rng(1);
    const std::size_t dim = 6;
    std::vector<std::vector<double>> v;
    std::vector<int> a;
    for (int i = 0; i < 200; ++i) {
        std::vector<double> x(dim);
        const int c = i % 2;
        for (auto& e : x) e = uniform01(rng) + 0.3 * c;
        v.push_back(x);
        a.push_back(c);
    }
    const auto nb = fit_gaussian_nb(v, a);
    for (int t = 0; t < 1000; ++t) {
        std::vector<double> x(dim);
        for (auto& e : x) e = uniform01(rng) * 1.4 - 0.1;
        const auto p = meta_posteriors(nb, x);
        CHECK(std::abs(p[0] + p[1] - 1.0) <= 1e-12);
        const double d0 = density(nb, 0, x), d1 = density(nb, 1, x);
        CHECK(p[1] == doctest::Approx(d1 / (d0 + d1)).epsilon(1e-9));
    }
    CHECK_THROWS_AS(meta_posteriors(nb, std::vector<double>(3)), DomainError);
}

TEST_CASE("symmetric model gives one half midway") {
    GaussianNB nb;
    nb.means = {std::vector<double>{0.0, 0.0}, std::vector<double>{1.0, 1.0}};
    nb.variances = {std::vector<double>{0.5, 0.5}, std::vector<double>{0.5, 0.5}};
    CHECK(competence(nb, std::vector<double>{0.5, 0.5}) == doctest::Approx(0.5));
}

TEST_CASE("class mean of a well-separated model") {
    GaussianNB nb;
    nb.means = {std::vector<double>{0.0}, std::vector<double>{1.0}};
    nb.variances = {std::vector<double>{0.04}, std::vector<double>{0.04}};
    // Ratio of densities at x = 1: exp(1 / (2 * 0.04)) for class 1 against 0.
    const double ratio = std::exp(1.0 / 0.08);
    const double want = ratio / (1.0 + ratio);
    const double got = competence(nb, std::vector<double>{1.0});
    CHECK(got > 0.99);
    CHECK(got == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("far-out vectors do not underflow") {
    GaussianNB nb;
    nb.means = {std::vector<double>(21, 0.0), std::vector<double>(21, 1.0)};
    nb.variances = {std::vector<double>(21, kVarianceFloor), std::vector<double>(21, kVarianceFloor)};
    const auto p = meta_posteriors(nb, std::vector<double>(21, 0.7));
    CHECK(p[1] == doctest::Approx(1.0));
    CHECK(p[0] + p[1] == doctest::Approx(1.0));
}
