#pragma once

#include <cstdint>
#include <vector>

#include "metades/pool.hpp"

namespace metades {

// Static combiners: every member votes on every query. Ties go to class 1.
Label majority_vote(const Pool& pool, const Point& x);
Label majority_vote(std::span<const Label> votes);
Label average_rule(const Pool& pool, const Point& x);
Label product_rule(const Pool& pool, const Point& x);
Label maximum_rule(const Pool& pool, const Point& x);

struct AdaBoostStage {
    BaseClassifier learner;
    double alpha = 0.0;

    friend bool operator==(const AdaBoostStage&, const AdaBoostStage&) = default;
};

struct AdaBoostModel {
    BaseKind kind = BaseKind::Stump;
    int rounds = 0;  // requested budget T; stages.size() <= rounds
    std::vector<AdaBoostStage> stages;

    friend bool operator==(const AdaBoostModel&, const AdaBoostModel&) = default;
};

/// Per-round diagnostics, filled when requested.
struct AdaBoostLog {
    std::vector<double> errors;                // weighted error of each accepted round
    std::vector<std::vector<double>> weights;  // sample weights each round was trained under
    std::vector<double> final_weights;         // weights after the last update
};

struct AdaBoostOptions {
    PerceptronOptions perceptron;
    int perceptron_attempts = 10;  // fresh weighted resamples before a round gives up
};

/// Two-class AdaBoost.M1. Stumps consume the weights directly; perceptrons
/// are trained on a weighted bootstrap resample. Stops early when a round's
/// weighted error reaches 0.5 (round discarded) or hits 0 (round kept).
/// Throws TrainingError if not even the first round can be accepted.
AdaBoostModel adaboost_train(const Dataset& train, int rounds, BaseKind kind, std::uint64_t seed,
                             const AdaBoostOptions& opt = {}, AdaBoostLog* log = nullptr);

/// Sign of sum_t alpha_t * h_t(x) with class 1 as +1; zero goes to class 1.
Label adaboost_predict(const AdaBoostModel& model, const Point& x);

/// Stage weight for a weighted error, with the error clipped to [1e-10, 1 - 1e-10].
double adaboost_alpha(double error);

}  // namespace metades
