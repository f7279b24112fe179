// Command-line front end for data generation, training, evaluation, sweeps,
// decision-boundary grids and per-query traces.
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "metades/errors.hpp"
#include "metades/experiment.hpp"
#include "metades/persistence.hpp"

namespace {

using namespace metades;

// Config-backed flags: collected as raw strings so a config file can be
// applied first and the flags on top of it.
struct ConfigFlags {
    std::optional<std::string> config;
    std::map<std::string, std::optional<std::string>> values;

    void add(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
        app->add_option(flag, values[key], help);
    }

    ExperimentConfig build() const {
        ExperimentConfig cfg;
        if (config) apply_config_file(cfg, *config);
        for (const auto& [key, value] : values)
            if (value) apply_setting(cfg, key, *value);
        cfg.validate();
        return cfg;
    }
};

void add_experiment_flags(CLI::App* app, ConfigFlags& f) {
    app->add_option("--config", f.config, "key=value config file; flags override it");
    f.add(app, "--problem", "problem", "p2 or xor");
    f.add(app, "--base", "base", "perceptron or stump");
    f.add(app, "--pool", "pool", "pool size M");
    f.add(app, "--k", "k", "region of competence size K");
    f.add(app, "--kp", "kp", "output-profile neighbours Kp");
    f.add(app, "--hc", "hc", "consensus threshold h_C");
    f.add(app, "--upsilon", "upsilon", "competence cutoff");
    f.add(app, "--train-size", "train_size", "|T|");
    f.add(app, "--meta-train-size", "meta_train_size", "|T_lambda|");
    f.add(app, "--dsel-size", "dsel_size", "|DSEL|");
    f.add(app, "--test-size", "test_size", "|G|");
    f.add(app, "--seed", "seed", "base seed");
    f.add(app, "--seeds", "seeds", "number of consecutive seeds");
    f.add(app, "--methods", "methods", "comma-separated method list");
    f.add(app, "--out", "out", "output directory");
}

Dataset gen_split_for(const SplitSet& s, Split which) {
    switch (which) {
        case Split::Train: return s.train;
        case Split::MetaTrain: return s.meta_train;
        case Split::Dsel: return s.dsel;
        case Split::Test: return s.test;
    }
    return s.test;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"META-DES dynamic ensemble selection experiments"};
    app.require_subcommand(1);

    ConfigFlags gen_flags, train_flags, sweep_flags;
    bool header = false;

    auto* gen = app.add_subcommand("gen-data", "Write the four splits as CSV");
    add_experiment_flags(gen, gen_flags);
    gen->add_flag("--header", header, "write an x1,x2,label header row");

    auto* train = app.add_subcommand("train", "Train a system; writes model.json and train.log");
    add_experiment_flags(train, train_flags);

    auto* sweep = app.add_subcommand("sweep", "Retrain and evaluate over seeds and sweep points");
    add_experiment_flags(sweep, sweep_flags);
    sweep->add_option("--sweep", sweep_flags.values["sweep"], "none, pool, dsel or both");

    std::string model_path = "model.json", test_path = "test.csv", methods = "metades_h,oracle,single_best,voting";
    std::string out_dir = ".";
    std::uint64_t eval_seed = 0;
    bool append = false;
    auto* eval = app.add_subcommand("eval", "Evaluate a saved model on a test CSV");
    eval->add_option("--model", model_path, "model file")->capture_default_str();
    eval->add_option("--test", test_path, "test CSV (x1,x2,label)")->capture_default_str();
    eval->add_option("--methods", methods, "comma-separated method list")->capture_default_str();
    eval->add_option("--seed", eval_seed, "seed recorded in the result rows");
    eval->add_option("--out", out_dir, "output directory")->capture_default_str();
    eval->add_flag("--append", append, "append to an existing results.csv");

    std::string method = "metades_h";
    std::size_t resolution = 100;
    std::optional<std::string> overlay;
    auto* boundary = app.add_subcommand("boundary", "Label a grid over the unit square");
    boundary->add_option("--model", model_path, "model file")->capture_default_str();
    boundary->add_option("--method", method, "method to draw")->capture_default_str();
    boundary->add_option("--resolution", resolution, "points per axis")->capture_default_str();
    boundary->add_option("--overlay", overlay, "CSV of samples drawn on the SVG");
    boundary->add_option("--out", out_dir, "output directory")->capture_default_str();

    std::size_t limit = 0;
    auto* trace = app.add_subcommand("trace", "Dump per-query neighbourhoods, meta-features and competences");
    trace->add_option("--model", model_path, "model file")->capture_default_str();
    trace->add_option("--queries", test_path, "query CSV (x1,x2,label)")->capture_default_str();
    trace->add_option("--limit", limit, "trace at most this many queries (0 = all)")->capture_default_str();
    trace->add_option("--out", out_dir, "output directory")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            const auto cfg = gen_flags.build();
            const auto data = generate({cfg.problem, cfg.sizes, cfg.seeds.front()});
            std::filesystem::create_directories(cfg.out);
            for (const auto s : {Split::Train, Split::MetaTrain, Split::Dsel, Split::Test}) {
                static const std::map<Split, std::string> names = {
                    {Split::Train, "train.csv"}, {Split::MetaTrain, "meta_train.csv"},
                    {Split::Dsel, "dsel.csv"},   {Split::Test, "test.csv"}};
                write_csv(gen_split_for(data, s), cfg.out / names.at(s), header);
            }
            std::cout << "wrote splits to " << cfg.out.string() << "\n";
        } else if (*train) {
            const auto cfg = train_flags.build();
            const auto sys = run_train(cfg);
            std::cout << "model: " << (cfg.out / "model.json").string() << " (pool " << sys.pool.size()
                      << ", meta-vector length " << sys.meta.dimension() << ")\n";
        } else if (*sweep) {
            const auto cfg = sweep_flags.build();
            const auto table = run_sweep(cfg);
            write_text(cfg.out / "results.csv", table.to_csv());
            write_text(cfg.out / "timings.csv", table.timings_csv());
            write_text(cfg.out / "summary.csv", table.summary_csv());
            std::size_t failed = 0;
            for (const auto& r : table.rows) failed += !r.accuracy;
            std::cout << table.rows.size() << " rows (" << failed << " failed) in "
                      << (cfg.out / "results.csv").string() << "\n";
        } else if (*eval) {
            const auto table = run_eval(model_path, test_path, parse_method_list(methods), eval_seed);
            const std::filesystem::path out = std::filesystem::path(out_dir) / "results.csv";
            const bool exists = std::filesystem::exists(out);
            if (append && exists) {
                std::ofstream(out, std::ios::app | std::ios::binary) << table.to_csv(false);
            } else {
                write_text(out, table.to_csv());
            }
            std::cout << table.to_csv();
        } else if (*boundary) {
            const std::filesystem::path ov = overlay ? *overlay : std::string();
            const auto g = run_boundary(model_path, parse_method(method), resolution, out_dir, overlay ? &ov : nullptr);
            std::cout << g.points.size() << " grid points in " << (std::filesystem::path(out_dir) / "boundary.csv").string()
                      << "\n";
        } else if (*trace) {
            const auto n = run_trace(model_path, test_path, out_dir, limit);
            std::cout << n << " queries traced in " << (std::filesystem::path(out_dir) / "trace.jsonl").string() << "\n";
        }
    } catch (const Error& e) {
        std::cerr << "error [" << e.stage() << "]: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error [io]: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
