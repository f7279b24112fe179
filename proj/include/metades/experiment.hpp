#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "metades/datagen.hpp"
#include "metades/des_core.hpp"

namespace metades {

struct ExperimentConfig {
    Problem problem = Problem::P2;
    BaseKind base = BaseKind::Perceptron;
    std::size_t pool_size = 5;
    SplitSizes sizes;
    Hyperparameters hyper;
    std::vector<Method> methods = {Method::MetaDesH, Method::Oracle, Method::SingleBest, Method::Voting};
    std::vector<std::uint64_t> seeds = {1};
    // Sweep grid. Empty means "the single value above".
    std::vector<std::size_t> pool_points;
    std::vector<std::size_t> dsel_points;
    std::filesystem::path out = ".";
    std::size_t resolution = 100;

    /// Throws ConfigError naming the offending key.
    void validate() const;
};

/// 5, 10, ..., 100.
std::vector<std::size_t> pool_axis();
/// 50, 100, ..., 1000.
std::vector<std::size_t> dsel_axis();

/// Applies one `key = value` assignment. Keys: problem, base, pool, k, kp,
/// hc, upsilon, train_size, meta_train_size, dsel_size, test_size, methods,
/// seed, seeds, sweep (none|pool|dsel|both), out, resolution.
/// `seeds = N` expands to seed..seed+N-1, whichever of the two comes first.
void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value);

/// Flat key=value text; '#' starts a comment, blank lines are ignored.
void apply_config_text(ExperimentConfig& cfg, std::string_view text);
void apply_config_file(ExperimentConfig& cfg, const std::filesystem::path& path);

/// What happened during training, for the training log.
struct TrainReport {
    std::size_t pool_size = 0;
    std::size_t meta_train_size = 0;
    std::size_t selected = 0;
    std::size_t meta_samples = 0;
    std::size_t competent = 0;
    double meta_train_oracle = 0.0;
    SingleBest single_best;
    std::size_t adaboost_stages = 0;
};

/// Seeds for the random parts of training, all derived from the run seed.
std::uint64_t pool_seed(std::uint64_t seed, std::size_t point_index);
std::uint64_t adaboost_seed(std::uint64_t seed, std::size_t point_index);

struct TrainOptions {
    Hyperparameters hyper;
    BaseKind base = BaseKind::Perceptron;
    std::size_t pool_size = 5;
    bool with_adaboost = false;
    std::uint64_t pool_seed = 0;
    std::uint64_t adaboost_seed = 0;
    PerceptronOptions perceptron;
};

/// Overproduction, sample selection, meta-feature extraction and the NB fit,
/// then the DSEL-side state for generalization. Errors carry the stage name.
TrainedSystem train_system(const SplitSet& data, const TrainOptions& opt, TrainReport* report = nullptr);

/// Training options at a config's single point for `seed`.
TrainOptions train_options(const ExperimentConfig& cfg, std::uint64_t seed, std::size_t point_index = 0);

std::string format_train_log(const ExperimentConfig& cfg, std::uint64_t seed, const TrainReport& r);

struct ResultRow {
    std::string method;
    std::size_t pool_size = 0;
    std::size_t dsel_size = 0;
    std::uint64_t seed = 0;
    std::optional<double> accuracy;  // empty when the point failed
    std::string status = "ok";       // "ok" or "error [stage]: message"
    double wall_time = 0.0;          // seconds; kept out of results.csv
};

struct ResultTable {
    std::vector<ResultRow> rows;

    /// method, pool_size, dsel_size, seed order (methods in enum order).
    void sort();
    /// results.csv: deterministic, no timings.
    std::string to_csv(bool header = true) const;
    /// timings.csv: same keys plus wall_time_s.
    std::string timings_csv() const;
    /// Median accuracy across seeds for every (method, point).
    std::string summary_csv() const;
};

/// Trains from the config's first seed, writes model.json, train.log,
/// meta_training.csv and the four splits into cfg.out.
TrainedSystem run_train(const ExperimentConfig& cfg);

/// One row per requested method; `seed` only labels the rows.
ResultTable run_eval(const std::filesystem::path& model, const std::filesystem::path& test,
                     const std::vector<Method>& methods, std::uint64_t seed = 0);
ResultTable evaluate_methods(const TrainedSystem& sys, const Dataset& test, const std::vector<Method>& methods,
                             std::uint64_t seed);

/// Every (seed, pool point, dsel point) is an independent job. A failed job
/// yields rows with an error status instead of aborting the sweep.
ResultTable run_sweep(const ExperimentConfig& cfg);

struct BoundaryGrid {
    std::size_t resolution = 0;
    std::vector<Point> points;  // row-major, y outer, x inner
    std::vector<Label> labels;
};

/// resolution^2 points equally spaced over [0,1]^2, corners included.
BoundaryGrid boundary_grid(const TrainedSystem& sys, Method method, std::size_t resolution);
std::string boundary_csv(const BoundaryGrid& g);
/// Two-color cells; `overlay` samples drawn as circles when given.
std::string boundary_svg(const BoundaryGrid& g, const Dataset* overlay = nullptr, int pixels = 500);

/// Writes boundary.csv and boundary.svg into `out`.
BoundaryGrid run_boundary(const std::filesystem::path& model, Method method, std::size_t resolution,
                          const std::filesystem::path& out, const std::filesystem::path* overlay = nullptr);

/// Writes trace.jsonl (one JSON object per query) into `out`; `limit` caps
/// the number of traced queries (0 = all). Returns the number written.
std::size_t run_trace(const std::filesystem::path& model, const std::filesystem::path& queries,
                      const std::filesystem::path& out, std::size_t limit = 0);

void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace metades
