#pragma once

#include <array>
#include <span>
#include <vector>

#include "metades/meta_feature.hpp"

namespace metades {

/// Absolute floor added to every per-class, per-dimension variance.
inline constexpr double kVarianceFloor = 1e-6;

/// Gaussian Naive Bayes over meta-feature vectors. Index 0 is the
/// "incompetent" meta-class, index 1 "competent".
struct GaussianNB {
    std::array<double, 2> priors{0.5, 0.5};
    std::array<std::vector<double>, 2> means;
    std::array<std::vector<double>, 2> variances;

    std::size_t dimension() const { return means[0].size(); }

    friend bool operator==(const GaussianNB&, const GaussianNB&) = default;
};

/// Maximum-likelihood fit (population variance plus kVarianceFloor).
/// Throws TrainingError naming the missing meta-class if one is absent.
GaussianNB fit_gaussian_nb(const MetaTrainingSet& set);
GaussianNB fit_gaussian_nb(std::span<const std::vector<double>> vectors, std::span<const int> alphas);

/// Normalized posteriors (P(alpha=0|v), P(alpha=1|v)), evaluated in log space.
std::array<double, 2> meta_posteriors(const GaussianNB& model, std::span<const double> v);

/// delta = P(competent | v).
double competence(const GaussianNB& model, std::span<const double> v);

}  // namespace metades
