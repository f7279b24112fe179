#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <variant>

#include "metades/types.hpp"

namespace metades {

/// Linear threshold unit. w.x + b >= 0 is class 1.
struct Perceptron {
    std::array<double, 2> w{};
    double b = 0.0;

    friend bool operator==(const Perceptron&, const Perceptron&) = default;
};

/// Axis-aligned split. Samples with x[feature] < threshold fall on the left
/// side; polarity +1 labels the left side class 1, polarity -1 labels it
/// class 2. side_posteriors[s][c] is P(class c+1 | side s), s = 0 left.
struct DecisionStump {
    int feature = 0;
    double threshold = 0.0;
    int polarity = 1;
    std::array<std::array<double, 2>, 2> side_posteriors{{{0.5, 0.5}, {0.5, 0.5}}};

    friend bool operator==(const DecisionStump&, const DecisionStump&) = default;
};

enum class BaseKind { Perceptron, Stump };

std::string_view base_kind_name(BaseKind k);
BaseKind parse_base_kind(std::string_view s);

struct BaseClassifier {
    std::variant<Perceptron, DecisionStump> model;
    int id = 1;

    friend bool operator==(const BaseClassifier&, const BaseClassifier&) = default;
};

/// Logistic steepness for perceptron posteriors, in units of
/// unit-square distance to the hyperplane.
inline constexpr double kPerceptronPosteriorScale = 4.0;

struct PerceptronOptions {
    int epochs = 20;
    double learning_rate = 1.0;
};

/// Online perceptron trained on z-scored inputs (the returned weights are
/// mapped back to the original coordinates). Visits the samples in a freshly
/// shuffled order every epoch and returns the final iterate. When `weights`
/// is given the training set is first resampled with replacement in
/// proportion to the weights. Throws TrainingError on single-class data.
Perceptron train_perceptron(const Dataset& data, std::optional<std::span<const double>> weights,
                            std::uint64_t seed, const PerceptronOptions& opt = {});

/// Exhaustive minimum weighted 0-1 error stump over both features, every
/// midpoint between consecutive distinct values and both polarities. Ties keep
/// the first candidate in (feature, threshold, polarity +1 before -1) order.
/// Side posteriors are Laplace-smoothed sample counts.
DecisionStump train_stump(const Dataset& data, std::span<const double> weights);

/// Uniform weights convenience overload.
DecisionStump train_stump(const Dataset& data);

Label predict(const Perceptron& p, const Point& x);
Label predict(const DecisionStump& s, const Point& x);
Label predict(const BaseClassifier& c, const Point& x);

double posterior(const Perceptron& p, const Point& x, Label l);
double posterior(const DecisionStump& s, const Point& x, Label l);
double posterior(const BaseClassifier& c, const Point& x, Label l);

double boundary_distance(const Perceptron& p, const Point& x);
double boundary_distance(const DecisionStump& s, const Point& x);
double boundary_distance(const BaseClassifier& c, const Point& x);

/// Signed distance to the hyperplane, positive on the class-1 side.
double signed_distance(const Perceptron& p, const Point& x);

/// Weighted 0-1 error; weights need not be normalized.
double weighted_error(const BaseClassifier& c, const Dataset& data, std::span<const double> weights);

}  // namespace metades
