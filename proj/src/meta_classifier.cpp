#include "metades/meta_classifier.hpp"

#include <cmath>
#include <string>

#include "metades/errors.hpp"

namespace metades {

GaussianNB fit_gaussian_nb(std::span<const std::vector<double>> vectors, std::span<const int> alphas) {
    if (vectors.size() != alphas.size() || vectors.empty())
        throw TrainingError("meta_training", "meta-training set is empty or inconsistent");
    const std::size_t dim = vectors.front().size();
    std::array<std::size_t, 2> count{0, 0};
    GaussianNB nb;
    for (auto& m : nb.means) m.assign(dim, 0.0);
    for (auto& v : nb.variances) v.assign(dim, 0.0);

    for (std::size_t s = 0; s < vectors.size(); ++s) {
        if (vectors[s].size() != dim) throw TrainingError("meta_training", "meta-vectors differ in length");
        if (alphas[s] != 0 && alphas[s] != 1) throw TrainingError("meta_training", "alpha must be 0 or 1");
        const auto c = static_cast<std::size_t>(alphas[s]);
        ++count[c];
        for (std::size_t d = 0; d < dim; ++d) nb.means[c][d] += vectors[s][d];
    }
    for (std::size_t c = 0; c < 2; ++c) {
        if (count[c] == 0)
            throw TrainingError("meta_training", std::string("meta-training set has no '") +
                                                     (c == 0 ? "incompetent" : "competent") + "' samples");
        for (auto& m : nb.means[c]) m /= static_cast<double>(count[c]);
    }
    for (std::size_t s = 0; s < vectors.size(); ++s) {
        const auto c = static_cast<std::size_t>(alphas[s]);
        for (std::size_t d = 0; d < dim; ++d) {
            const double diff = vectors[s][d] - nb.means[c][d];
            nb.variances[c][d] += diff * diff;
        }
    }
    const double total = static_cast<double>(count[0] + count[1]);
    for (std::size_t c = 0; c < 2; ++c) {
        for (auto& v : nb.variances[c]) v = v / static_cast<double>(count[c]) + kVarianceFloor;
        nb.priors[c] = static_cast<double>(count[c]) / total;
    }
    return nb;
}

GaussianNB fit_gaussian_nb(const MetaTrainingSet& set) {
    std::vector<std::vector<double>> vectors;
    std::vector<int> alphas;
    vectors.reserve(set.samples.size());
    alphas.reserve(set.samples.size());
    for (const auto& s : set.samples) {
        vectors.push_back(s.v);
        alphas.push_back(s.alpha);
    }
    return fit_gaussian_nb(vectors, alphas);
}

std::array<double, 2> meta_posteriors(const GaussianNB& model, std::span<const double> v) {
    if (v.size() != model.dimension())
        throw DomainError("generalization", "meta-vector has length " + std::to_string(v.size()) + ", model expects " +
                                                std::to_string(model.dimension()));
    constexpr double log_2pi = 1.8378770664093454835606594728112;  // ln(2 pi)
    std::array<double, 2> ll{};
    for (std::size_t c = 0; c < 2; ++c) {
        double acc = std::log(model.priors[c]);
        for (std::size_t d = 0; d < v.size(); ++d) {
            const double var = model.variances[c][d];
            const double diff = v[d] - model.means[c][d];
            acc -= 0.5 * (log_2pi + std::log(var) + diff * diff / var);
        }
        ll[c] = acc;
    }
    // Two-class softmax, each side as a logistic of the log-likelihood gap.
    const double gap = ll[0] - ll[1];
    return {1.0 / (1.0 + std::exp(-gap)), 1.0 / (1.0 + std::exp(gap))};
}

double competence(const GaussianNB& model, std::span<const double> v) { return meta_posteriors(model, v)[1]; }

}  // namespace metades
