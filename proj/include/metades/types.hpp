#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace metades {

/// Two-class label. The numeric values match the CSV encoding.
enum class Label : int { One = 1, Two = 2 };

constexpr int to_int(Label l) { return static_cast<int>(l); }
constexpr Label other(Label l) { return l == Label::One ? Label::Two : Label::One; }
/// Index 0 for class 1, 1 for class 2.
constexpr std::size_t label_index(Label l) { return l == Label::One ? 0 : 1; }

/// Throws DomainError for anything outside {1, 2}.
Label label_from_int(int v);

using Point = std::array<double, 2>;

struct Sample {
    Point x{};
    Label label = Label::One;

    friend bool operator==(const Sample&, const Sample&) = default;
};

enum class Split { Train, MetaTrain, Dsel, Test };

std::string_view split_name(Split s);

struct Dataset {
    std::vector<Sample> samples;
    Split split = Split::Train;

    std::size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }
    const Sample& operator[](std::size_t i) const { return samples[i]; }

    friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// The four-way partition every experiment works on.
struct SplitSet {
    Dataset train;       // T, overproduction
    Dataset meta_train;  // T_lambda, meta-training
    Dataset dsel;        // dynamic selection dataset
    Dataset test;        // G, generalization
};

}  // namespace metades
