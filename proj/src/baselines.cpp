#include "metades/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "metades/errors.hpp"
#include "metades/rng.hpp"

namespace metades {

namespace {

Label argmax2(double s1, double s2) { return s1 >= s2 ? Label::One : Label::Two; }

}  // namespace

Label majority_vote(std::span<const Label> votes) {
    std::size_t ones = 0;
    for (const auto v : votes) ones += v == Label::One;
    return ones * 2 >= votes.size() ? Label::One : Label::Two;
}

Label majority_vote(const Pool& pool, const Point& x) { return majority_vote(output_profile(x, pool)); }

Label average_rule(const Pool& pool, const Point& x) {
    double s1 = 0.0, s2 = 0.0;
    for (const auto& c : pool.classifiers) {
        s1 += posterior(c, x, Label::One);
        s2 += posterior(c, x, Label::Two);
    }
    return argmax2(s1, s2);
}

Label product_rule(const Pool& pool, const Point& x) {
    double p1 = 1.0, p2 = 1.0;
    for (const auto& c : pool.classifiers) {
        p1 *= posterior(c, x, Label::One);
        p2 *= posterior(c, x, Label::Two);
    }
    return argmax2(p1, p2);
}

Label maximum_rule(const Pool& pool, const Point& x) {
    double m1 = 0.0, m2 = 0.0;
    for (const auto& c : pool.classifiers) {
        m1 = std::max(m1, posterior(c, x, Label::One));
        m2 = std::max(m2, posterior(c, x, Label::Two));
    }
    return argmax2(m1, m2);
}

double adaboost_alpha(double error) {
    const double e = std::clamp(error, 1e-10, 1.0 - 1e-10);
    return 0.5 * std::log((1.0 - e) / e);
}

AdaBoostModel adaboost_train(const Dataset& train, int rounds, BaseKind kind, std::uint64_t seed,
                             const AdaBoostOptions& opt, AdaBoostLog* log) {
    if (rounds < 1) throw ConfigError("adaboost", "at least one boosting round required");
    if (train.empty()) throw TrainingError("adaboost", "empty training set");
    const std::size_t n = train.size();
    std::vector<double> w(n, 1.0 / static_cast<double>(n));
    AdaBoostModel model;
    model.kind = kind;
    model.rounds = rounds;

    for (int t = 0; t < rounds; ++t) {
        BaseClassifier h;
        h.id = t + 1;
        double err = std::numeric_limits<double>::infinity();
        const int attempts = kind == BaseKind::Stump ? 1 : std::max(1, opt.perceptron_attempts);
        for (int a = 0; a < attempts; ++a) {
            if (kind == BaseKind::Stump)
                h.model = train_stump(train, w);
            else
                h.model = train_perceptron(train, std::span<const double>(w),
                                           derive_seed(seed, static_cast<std::uint64_t>(t) * 1024 + a),
                                           opt.perceptron);
            err = weighted_error(h, train, w);
            if (err < 0.5) break;
        }
        if (err >= 0.5) {
            if (model.stages.empty())
                throw TrainingError("adaboost", "first round could not reach weighted error below 0.5");
            break;
        }
        const double alpha = adaboost_alpha(err);
        if (log) {
            log->errors.push_back(err);
            log->weights.push_back(w);
        }
        model.stages.push_back({h, alpha});
        if (err == 0.0) break;

        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const bool correct = predict(h, train[i].x) == train[i].label;
            w[i] *= std::exp(correct ? -alpha : alpha);
            total += w[i];
        }
        for (auto& v : w) v /= total;
    }
    if (log) log->final_weights = w;
    return model;
}

Label adaboost_predict(const AdaBoostModel& model, const Point& x) {
    double score = 0.0;
    for (const auto& s : model.stages) score += s.alpha * (predict(s.learner, x) == Label::One ? 1.0 : -1.0);
    return score >= 0.0 ? Label::One : Label::Two;
}

}  // namespace metades
