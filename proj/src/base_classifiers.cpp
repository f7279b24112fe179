#include "metades/base_classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "metades/errors.hpp"
#include "metades/rng.hpp"

namespace metades {

std::string_view base_kind_name(BaseKind k) { return k == BaseKind::Perceptron ? "perceptron" : "stump"; }

BaseKind parse_base_kind(std::string_view s) {
    if (s == "perceptron") return BaseKind::Perceptron;
    if (s == "stump") return BaseKind::Stump;
    throw ConfigError("config", "unknown base classifier '" + std::string(s) + "'");
}

namespace {

bool has_both_classes(const Dataset& data) {
    bool seen[2] = {false, false};
    for (const auto& s : data.samples) seen[label_index(s.label)] = true;
    return seen[0] && seen[1];
}

// Draws |data| samples with replacement, P(i) proportional to weights[i].
Dataset weighted_resample(const Dataset& data, std::span<const double> weights, Rng& rng) {
    std::vector<double> cdf(weights.size());
    std::partial_sum(weights.begin(), weights.end(), cdf.begin());
    const double total = cdf.back();
    Dataset out;
    out.split = data.split;
    out.samples.reserve(data.size());
    for (std::size_t k = 0; k < data.size(); ++k) {
        const double u = uniform01(rng) * total;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        if (it == cdf.end()) --it;
        out.samples.push_back(data[static_cast<std::size_t>(it - cdf.begin())]);
    }
    return out;
}

Perceptron fit_perceptron(const Dataset& data, Rng& rng, const PerceptronOptions& opt) {
    const std::size_t n = data.size();
    double mean[2] = {0, 0}, sd[2] = {0, 0};
    for (const auto& s : data.samples)
        for (int f = 0; f < 2; ++f) mean[f] += s.x[f];
    for (double& m : mean) m /= static_cast<double>(n);
    for (const auto& s : data.samples)
        for (int f = 0; f < 2; ++f) sd[f] += (s.x[f] - mean[f]) * (s.x[f] - mean[f]);
    for (double& v : sd) {
        v = std::sqrt(v / static_cast<double>(n));
        if (v == 0.0) v = 1.0;
    }

    std::vector<std::array<double, 3>> z(n);  // standardized x1, x2, target +-1
    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = data[i];
        z[i] = {(s.x[0] - mean[0]) / sd[0], (s.x[1] - mean[1]) / sd[1], s.label == Label::One ? 1.0 : -1.0};
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    double w[2] = {0, 0}, b = 0;
    double last_w[2] = {0, 0}, last_b = 0;
    for (int epoch = 0; epoch < opt.epochs; ++epoch) {
        shuffle(order.begin(), order.end(), rng);
        bool mistakes = false;
        for (const auto i : order) {
            const auto& [z1, z2, t] = z[i];
            if (t * (w[0] * z1 + w[1] * z2 + b) <= 0.0) {
                w[0] += opt.learning_rate * t * z1;
                w[1] += opt.learning_rate * t * z2;
                b += opt.learning_rate * t;
                mistakes = true;
                if (w[0] != 0.0 || w[1] != 0.0) {
                    last_w[0] = w[0];
                    last_w[1] = w[1];
                    last_b = b;
                }
            }
        }
        if (!mistakes) break;
    }

    // Undo the standardization: w.(x - mean)/sd + b.
    Perceptron p;
    p.w = {last_w[0] / sd[0], last_w[1] / sd[1]};
    p.b = last_b - p.w[0] * mean[0] - p.w[1] * mean[1];
    if (p.w[0] == 0.0 && p.w[1] == 0.0)
        throw TrainingError("train_perceptron", "perceptron never left the zero vector");
    return p;
}

}  // namespace

Perceptron train_perceptron(const Dataset& data, std::optional<std::span<const double>> weights,
                            std::uint64_t seed, const PerceptronOptions& opt) {
    if (data.empty() || !has_both_classes(data))
        throw TrainingError("train_perceptron", "training data must contain both classes");
    Rng rng(seed);
    if (!weights) return fit_perceptron(data, rng, opt);
    if (weights->size() != data.size())
        throw DomainError("train_perceptron", "weight vector length differs from dataset size");
    for (int attempt = 0; attempt < 10; ++attempt) {
        auto resampled = weighted_resample(data, *weights, rng);
        if (has_both_classes(resampled)) return fit_perceptron(resampled, rng, opt);
    }
    throw TrainingError("train_perceptron", "weighted resample kept drawing a single class");
}

namespace {

constexpr double kTieEps = 1e-12;

struct Candidate {
    int feature;
    double threshold;
    int polarity;
    double error;
};

}  // namespace

DecisionStump train_stump(const Dataset& data, std::span<const double> weights) {
    const std::size_t n = data.size();
    if (n == 0 || weights.size() != n) throw DomainError("train_stump", "weights must match dataset size");
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw DomainError("train_stump", "weights must be non-negative");
        total += w;
    }
    if (total <= 0.0) throw DomainError("train_stump", "weights are all zero");

    std::optional<Candidate> best;
    std::vector<std::size_t> order(n);
    for (int f = 0; f < 2; ++f) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return data[a].x[f] < data[b].x[f]; });
        // Weighted class mass strictly to the left of the current threshold.
        double left[2] = {0.0, 0.0};
        double all[2] = {0.0, 0.0};
        for (std::size_t i = 0; i < n; ++i) all[label_index(data[i].label)] += weights[i];
        std::size_t k = 0;
        while (k < n) {
            const double v = data[order[k]].x[f];
            while (k < n && data[order[k]].x[f] == v) {
                left[label_index(data[order[k]].label)] += weights[order[k]];
                ++k;
            }
            if (k == n) break;
            const double next = data[order[k]].x[f];
            const double threshold = v + (next - v) / 2.0;
            // polarity +1: left -> class 1, right -> class 2.
            const double err_pos = left[1] + (all[0] - left[0]);
            const double err_neg = left[0] + (all[1] - left[1]);
            for (const auto& [pol, err] : {std::pair{1, err_pos}, std::pair{-1, err_neg}}) {
                if (!best || err < best->error - kTieEps) best = Candidate{f, threshold, pol, err};
            }
        }
    }
    if (!best) throw TrainingError("train_stump", "all samples identical; no candidate threshold");

    DecisionStump s;
    s.feature = best->feature;
    s.threshold = best->threshold;
    s.polarity = best->polarity;
    double counts[2][2] = {{0, 0}, {0, 0}};
    for (const auto& smp : data.samples) {
        const int side = smp.x[s.feature] < s.threshold ? 0 : 1;
        counts[side][label_index(smp.label)] += 1.0;
    }
    for (int side = 0; side < 2; ++side) {
        const double tot = counts[side][0] + counts[side][1];
        s.side_posteriors[side] = {(counts[side][0] + 1.0) / (tot + 2.0), (counts[side][1] + 1.0) / (tot + 2.0)};
    }
    return s;
}

DecisionStump train_stump(const Dataset& data) {
    std::vector<double> w(data.size(), 1.0 / static_cast<double>(std::max<std::size_t>(data.size(), 1)));
    return train_stump(data, w);
}

double signed_distance(const Perceptron& p, const Point& x) {
    return (p.w[0] * x[0] + p.w[1] * x[1] + p.b) / std::hypot(p.w[0], p.w[1]);
}

Label predict(const Perceptron& p, const Point& x) {
    return p.w[0] * x[0] + p.w[1] * x[1] + p.b >= 0.0 ? Label::One : Label::Two;
}

Label predict(const DecisionStump& s, const Point& x) {
    const double v = x[s.feature];
    if (v == s.threshold) return Label::One;
    const bool left = v < s.threshold;
    return (left == (s.polarity > 0)) ? Label::One : Label::Two;
}

Label predict(const BaseClassifier& c, const Point& x) {
    return std::visit([&](const auto& m) { return predict(m, x); }, c.model);
}

double posterior(const Perceptron& p, const Point& x, Label l) {
    const double p1 = 1.0 / (1.0 + std::exp(-kPerceptronPosteriorScale * signed_distance(p, x)));
    return l == Label::One ? p1 : 1.0 - p1;
}

double posterior(const DecisionStump& s, const Point& x, Label l) {
    const double v = x[s.feature];
    if (v == s.threshold) return 0.5;
    return s.side_posteriors[v < s.threshold ? 0 : 1][label_index(l)];
}

double posterior(const BaseClassifier& c, const Point& x, Label l) {
    return std::visit([&](const auto& m) { return posterior(m, x, l); }, c.model);
}

double boundary_distance(const Perceptron& p, const Point& x) { return std::abs(signed_distance(p, x)); }

double boundary_distance(const DecisionStump& s, const Point& x) { return std::abs(x[s.feature] - s.threshold); }

double boundary_distance(const BaseClassifier& c, const Point& x) {
    return std::visit([&](const auto& m) { return boundary_distance(m, x); }, c.model);
}

double weighted_error(const BaseClassifier& c, const Dataset& data, std::span<const double> weights) {
    double err = 0.0, total = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        total += weights[i];
        if (predict(c, data[i].x) != data[i].label) err += weights[i];
    }
    return total > 0.0 ? err / total : 0.0;
}

}  // namespace metades
