#include "metades/pool.hpp"

#include <string>

#include "metades/errors.hpp"
#include "metades/parallel.hpp"
#include "metades/rng.hpp"

namespace metades {

namespace {

BaseClassifier train_member(const Dataset& train, BaseKind kind, std::uint64_t seed, int id,
                            const BaggingOptions& opt) {
    Rng rng(seed);
    const std::size_t n = train.size();
    Dataset boot;
    boot.split = train.split;
    for (int attempt = 0; attempt < opt.max_redraws; ++attempt) {
        boot.samples.clear();
        boot.samples.reserve(n);
        bool seen[2] = {false, false};
        for (std::size_t k = 0; k < n; ++k) {
            const auto& s = train[uniform_index(rng, n)];
            seen[label_index(s.label)] = true;
            boot.samples.push_back(s);
        }
        if (!(seen[0] && seen[1])) continue;
        BaseClassifier c;
        c.id = id;
        if (kind == BaseKind::Perceptron)
            c.model = train_perceptron(boot, std::nullopt, rng(), opt.perceptron);
        else
            c.model = train_stump(boot);
        return c;
    }
    throw TrainingError("overproduction", "bootstrap " + std::to_string(id) + " drew a single class " +
                                              std::to_string(opt.max_redraws) + " times");
}

}  // namespace

Pool bagging_generate(const Dataset& train, std::size_t m, BaseKind kind, std::uint64_t seed,
                      const BaggingOptions& opt) {
    if (m == 0) throw ConfigError("overproduction", "pool size must be at least 1");
    if (train.empty()) throw TrainingError("overproduction", "empty training set");
    Pool pool;
    pool.classifiers.resize(m);
    parallel_for(m, [&](std::size_t i) {
        pool.classifiers[i] = train_member(train, kind, derive_seed(seed, i), static_cast<int>(i + 1), opt);
    });
    return pool;
}

std::vector<Label> output_profile(const Point& x, const Pool& pool) {
    std::vector<Label> out;
    out.reserve(pool.size());
    for (const auto& c : pool.classifiers) out.push_back(predict(c, x));
    return out;
}

DecisionMatrix decision_matrix(const Pool& pool, const Dataset& data) {
    DecisionMatrix m(data.size(), pool.size());
    for (std::size_t j = 0; j < data.size(); ++j)
        for (std::size_t i = 0; i < pool.size(); ++i) m(j, i) = predict(pool[i], data[j].x);
    return m;
}

double oracle_accuracy(const DecisionMatrix& m, const Dataset& data) {
    if (data.empty()) return 0.0;
    std::size_t hit = 0;
    for (std::size_t j = 0; j < m.rows(); ++j) {
        for (const auto l : m.row(j)) {
            if (l == data[j].label) {
                ++hit;
                break;
            }
        }
    }
    return static_cast<double>(hit) / static_cast<double>(data.size());
}

double oracle_accuracy(const Pool& pool, const Dataset& data) { return oracle_accuracy(decision_matrix(pool, data), data); }

double accuracy(const BaseClassifier& c, const Dataset& data) {
    if (data.empty()) return 0.0;
    std::size_t hit = 0;
    for (const auto& s : data.samples) hit += predict(c, s.x) == s.label;
    return static_cast<double>(hit) / static_cast<double>(data.size());
}

SingleBest single_best(const Pool& pool, const Dataset& validation) {
    SingleBest best{1, -1.0};
    for (const auto& c : pool.classifiers) {
        const double acc = accuracy(c, validation);
        if (acc > best.accuracy) best = {c.id, acc};
    }
    return best;
}

}  // namespace metades
