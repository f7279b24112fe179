#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "metades/base_classifiers.hpp"
#include "metades/types.hpp"

namespace metades {

/// The pool C = {c_1, ..., c_M}; classifier ids run 1..M in order.
struct Pool {
    std::vector<BaseClassifier> classifiers;

    std::size_t size() const { return classifiers.size(); }
    const BaseClassifier& operator[](std::size_t i) const { return classifiers[i]; }

    friend bool operator==(const Pool&, const Pool&) = default;
};

struct BaggingOptions {
    PerceptronOptions perceptron;
    int max_redraws = 10;
};

/// M bootstrap replicates of `train` (|train| draws with replacement each),
/// one base classifier per replicate. Replicate i uses seed
/// derive_seed(seed, i), so a pool of size M is a prefix of any larger pool
/// built from the same seed. Members train concurrently.
Pool bagging_generate(const Dataset& train, std::size_t m, BaseKind kind, std::uint64_t seed,
                      const BaggingOptions& opt = {});

/// Crisp pool decisions, one row per sample (the output profiles).
class DecisionMatrix {
public:
    DecisionMatrix() = default;
    DecisionMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, Label::One) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Label operator()(std::size_t row, std::size_t col) const { return data_[row * cols_ + col]; }
    Label& operator()(std::size_t row, std::size_t col) { return data_[row * cols_ + col]; }

    std::span<const Label> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    friend bool operator==(const DecisionMatrix&, const DecisionMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Label> data_;
};

std::vector<Label> output_profile(const Point& x, const Pool& pool);

DecisionMatrix decision_matrix(const Pool& pool, const Dataset& data);

double oracle_accuracy(const Pool& pool, const Dataset& data);
double oracle_accuracy(const DecisionMatrix& m, const Dataset& data);

double accuracy(const BaseClassifier& c, const Dataset& data);

struct SingleBest {
    int id = 1;
    double accuracy = 0.0;
};

/// Highest individual accuracy on `validation`; ties go to the lowest id.
SingleBest single_best(const Pool& pool, const Dataset& validation);

}  // namespace metades
