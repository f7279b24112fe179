#include "metades/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "metades/errors.hpp"
#include "metades/parallel.hpp"
#include "metades/persistence.hpp"
#include "metades/rng.hpp"

namespace metades {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

template <typename T>
T parse_number(std::string_view key, std::string_view v) {
    T out{};
    const auto* end = v.data() + v.size();
    const auto [p, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || p != end)
        throw ConfigError("config", "bad value '" + std::string(v) + "' for " + std::string(key));
    return out;
}

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::size_t method_rank(const std::string& name) {
    const auto& all = all_methods();
    for (std::size_t i = 0; i < all.size(); ++i)
        if (method_name(all[i]) == name) return i;
    return all.size();
}

}  // namespace

std::vector<std::size_t> pool_axis() {
    std::vector<std::size_t> v;
    for (std::size_t m = 5; m <= 100; m += 5) v.push_back(m);
    return v;
}

std::vector<std::size_t> dsel_axis() {
    std::vector<std::size_t> v;
    for (std::size_t n = 50; n <= 1000; n += 50) v.push_back(n);
    return v;
}

void ExperimentConfig::validate() const {
    if (pool_size < 1) throw ConfigError("config", "pool must be at least 1");
    if (methods.empty()) throw ConfigError("config", "at least one method required");
    if (seeds.empty()) throw ConfigError("config", "at least one seed required");
    if (hyper.k < 1) throw ConfigError("config", "k must be at least 1");
    if (hyper.kp < 1) throw ConfigError("config", "kp must be at least 1");
    if (!(hyper.h_c > 0.5 && hyper.h_c <= 1.0)) throw ConfigError("config", "hc must lie in (0.5, 1]");
    if (!(hyper.upsilon > 0.0 && hyper.upsilon < 1.0)) throw ConfigError("config", "upsilon must lie in (0, 1)");
    if (sizes.train < 2) throw ConfigError("config", "train_size must be at least 2");
    if (sizes.meta_train <= std::max(hyper.k, hyper.kp))
        throw ConfigError("config", "meta_train_size must exceed max(k, kp)");
    auto dsel_ok = [&](std::size_t n) { return n >= std::max(hyper.k, hyper.kp); };
    if (!dsel_ok(sizes.dsel)) throw ConfigError("config", "dsel_size must be at least max(k, kp)");
    for (const auto n : dsel_points)
        if (!dsel_ok(n)) throw ConfigError("config", "sweep dsel point below max(k, kp)");
    for (const auto m : pool_points)
        if (m < 1) throw ConfigError("config", "sweep pool point must be at least 1");
    if (sizes.test < 1) throw ConfigError("config", "test_size must be at least 1");
    if (resolution < 2) throw ConfigError("config", "resolution must be at least 2");
}

void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value) {
    key = trim(key);
    value = trim(value);
    if (key == "problem") {
        try {
            cfg.problem = parse_problem(value);
        } catch (const Error& e) {
            throw ConfigError("config", e.what());
        }
    } else if (key == "base") {
        try {
            cfg.base = parse_base_kind(value);
        } catch (const Error& e) {
            throw ConfigError("config", e.what());
        }
    } else if (key == "pool") {
        cfg.pool_size = parse_number<std::size_t>(key, value);
    } else if (key == "k") {
        cfg.hyper.k = parse_number<std::size_t>(key, value);
    } else if (key == "kp") {
        cfg.hyper.kp = parse_number<std::size_t>(key, value);
    } else if (key == "hc") {
        cfg.hyper.h_c = parse_number<double>(key, value);
    } else if (key == "upsilon") {
        cfg.hyper.upsilon = parse_number<double>(key, value);
    } else if (key == "train_size") {
        cfg.sizes.train = parse_number<std::size_t>(key, value);
    } else if (key == "meta_train_size") {
        cfg.sizes.meta_train = parse_number<std::size_t>(key, value);
    } else if (key == "dsel_size") {
        cfg.sizes.dsel = parse_number<std::size_t>(key, value);
    } else if (key == "test_size") {
        cfg.sizes.test = parse_number<std::size_t>(key, value);
    } else if (key == "methods") {
        cfg.methods = parse_method_list(value);
    } else if (key == "seed") {
        const auto n = cfg.seeds.size();
        const auto base = parse_number<std::uint64_t>(key, value);
        cfg.seeds.clear();
        for (std::size_t i = 0; i < std::max<std::size_t>(n, 1); ++i) cfg.seeds.push_back(base + i);
    } else if (key == "seeds") {
        const auto n = parse_number<std::size_t>(key, value);
        if (n < 1) throw ConfigError("config", "seeds must be at least 1");
        const auto base = cfg.seeds.empty() ? 1 : cfg.seeds.front();
        cfg.seeds.clear();
        for (std::size_t i = 0; i < n; ++i) cfg.seeds.push_back(base + i);
    } else if (key == "sweep") {
        cfg.pool_points.clear();
        cfg.dsel_points.clear();
        if (value == "pool" || value == "both") cfg.pool_points = pool_axis();
        if (value == "dsel" || value == "both") cfg.dsel_points = dsel_axis();
        if (value != "none" && value != "pool" && value != "dsel" && value != "both")
            throw ConfigError("config", "sweep must be none, pool, dsel or both");
    } else if (key == "out") {
        cfg.out = std::string(value);
    } else if (key == "resolution") {
        cfg.resolution = parse_number<std::size_t>(key, value);
    } else {
        throw ConfigError("config", "unknown key '" + std::string(key) + "'");
    }
}

void apply_config_text(ExperimentConfig& cfg, std::string_view text) {
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        auto line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("config", "line " + std::to_string(line_no) + ": expected key = value");
        apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1));
    }
}

void apply_config_file(ExperimentConfig& cfg, const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config", "cannot open config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    apply_config_text(cfg, ss.str());
}

std::uint64_t pool_seed(std::uint64_t seed, std::size_t point_index) {
    return derive_seed(derive_seed(seed, 0xB0015EEDull), point_index);
}

std::uint64_t adaboost_seed(std::uint64_t seed, std::size_t point_index) {
    return derive_seed(derive_seed(seed, 0xADAB0057ull), point_index);
}

TrainOptions train_options(const ExperimentConfig& cfg, std::uint64_t seed, std::size_t point_index) {
    TrainOptions opt;
    opt.hyper = cfg.hyper;
    opt.base = cfg.base;
    opt.pool_size = cfg.pool_size;
    opt.with_adaboost = std::find(cfg.methods.begin(), cfg.methods.end(), Method::AdaBoost) != cfg.methods.end();
    opt.pool_seed = pool_seed(seed, point_index);
    opt.adaboost_seed = adaboost_seed(seed, point_index);
    return opt;
}

TrainedSystem train_system(const SplitSet& data, const TrainOptions& opt, TrainReport* report) {
    TrainedSystem sys;
    sys.hyper = opt.hyper;
    sys.kind = opt.base;
    const auto layout = opt.hyper.layout();

    BaggingOptions bag;
    bag.perceptron = opt.perceptron;
    sys.pool = bagging_generate(data.train, opt.pool_size, opt.base, opt.pool_seed, bag);

    // f5 is normalised by the widest margin each member shows on T_lambda.
    sys.f5_norms = f5_norms(sys.pool, data.meta_train);
    const auto meta = build_meta_training_set(data.meta_train, sys.pool, layout, opt.hyper.h_c, sys.f5_norms);
    sys.meta = fit_gaussian_nb(meta);

    sys.dsel = data.dsel;
    sys.dsel.split = Split::Dsel;
    if (layout.k > sys.dsel.size() || layout.kp > sys.dsel.size())
        throw DomainError("generalization", "K and Kp must not exceed |DSEL|");
    sys.dsel_profiles = decision_matrix(sys.pool, sys.dsel);
    sys.single_best = single_best(sys.pool, sys.dsel);

    if (opt.with_adaboost)
        {
        AdaBoostOptions boost;
        boost.perceptron = opt.perceptron;
        sys.adaboost = adaboost_train(data.train, static_cast<int>(opt.pool_size), opt.base, opt.adaboost_seed, boost);
    }

    validate(sys);

    if (report) {
        report->pool_size = sys.pool.size();
        report->meta_train_size = data.meta_train.size();
        report->selected = meta.selected;
        report->meta_samples = meta.samples.size();
        report->competent = static_cast<std::size_t>(
            std::count_if(meta.samples.begin(), meta.samples.end(), [](const MetaSample& s) { return s.alpha == 1; }));
        report->meta_train_oracle = oracle_accuracy(sys.pool, data.meta_train);
        report->single_best = sys.single_best;
        report->adaboost_stages = sys.adaboost ? sys.adaboost->stages.size() : 0;
    }
    return sys;
}

std::string format_train_log(const ExperimentConfig& cfg, std::uint64_t seed, const TrainReport& r) {
    std::ostringstream o;
    o << "problem " << problem_name(cfg.problem) << "\n"
      << "base " << base_kind_name(cfg.base) << "\n"
      << "seed " << seed << "\n"
      << "splits train=" << cfg.sizes.train << " meta_train=" << cfg.sizes.meta_train << " dsel=" << cfg.sizes.dsel
      << " test=" << cfg.sizes.test << "\n"
      << "hyper K=" << cfg.hyper.k << " Kp=" << cfg.hyper.kp << " h_c=" << cfg.hyper.h_c
      << " upsilon=" << cfg.hyper.upsilon << "\n"
      << "overproduction pool=" << r.pool_size << "\n"
      << "sample_selection selected=" << r.selected << "/" << r.meta_train_size
      << " oracle_on_meta_train=" << fmt_double(r.meta_train_oracle) << "\n"
      << "meta_features vectors=" << r.meta_samples << " competent=" << r.competent
      << " length=" << cfg.hyper.layout().length() << "\n"
      << "single_best id=" << r.single_best.id << " dsel_accuracy=" << fmt_double(r.single_best.accuracy) << "\n";
    if (r.adaboost_stages) o << "adaboost stages=" << r.adaboost_stages << "\n";
    return o.str();
}

void ResultTable::sort() {
    std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
        return std::make_tuple(method_rank(a.method), a.method, a.pool_size, a.dsel_size, a.seed) <
               std::make_tuple(method_rank(b.method), b.method, b.pool_size, b.dsel_size, b.seed);
    });
}

std::string ResultTable::to_csv(bool header) const {
    std::ostringstream o;
    if (header) o << "method,pool_size,dsel_size,seed,accuracy,status\n";
    for (const auto& r : rows) {
        o << r.method << ',' << r.pool_size << ',' << r.dsel_size << ',' << r.seed << ','
          << (r.accuracy ? fmt_double(*r.accuracy) : std::string()) << ',';
        // Quote statuses; error messages may contain commas.
        if (r.status == "ok") {
            o << "ok";
        } else {
            o << '"';
            for (const char c : r.status) o << (c == '"' ? std::string("\"\"") : std::string(1, c));
            o << '"';
        }
        o << '\n';
    }
    return o.str();
}

std::string ResultTable::timings_csv() const {
    std::ostringstream o;
    o << "method,pool_size,dsel_size,seed,wall_time_s\n";
    for (const auto& r : rows)
        o << r.method << ',' << r.pool_size << ',' << r.dsel_size << ',' << r.seed << ',' << fmt_double(r.wall_time)
          << '\n';
    return o.str();
}

std::string ResultTable::summary_csv() const {
    std::map<std::tuple<std::size_t, std::string, std::size_t, std::size_t>, std::vector<double>> groups;
    for (const auto& r : rows) {
        auto& g = groups[{method_rank(r.method), r.method, r.pool_size, r.dsel_size}];
        if (r.accuracy) g.push_back(*r.accuracy);
    }
    std::ostringstream o;
    o << "method,pool_size,dsel_size,runs,median_accuracy\n";
    for (auto& [key, acc] : groups) {
        o << std::get<1>(key) << ',' << std::get<2>(key) << ',' << std::get<3>(key) << ',' << acc.size() << ',';
        if (!acc.empty()) {
            std::sort(acc.begin(), acc.end());
            const auto n = acc.size();
            o << fmt_double(n % 2 ? acc[n / 2] : 0.5 * (acc[n / 2 - 1] + acc[n / 2]));
        }
        o << '\n';
    }
    return o.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("output", "cannot write " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

TrainedSystem run_train(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto seed = cfg.seeds.front();
    const auto data = generate({cfg.problem, cfg.sizes, seed});
    TrainReport report;
    auto sys = train_system(data, train_options(cfg, seed), &report);

    std::filesystem::create_directories(cfg.out);
    save_system(sys, cfg.out / "model.json");
    write_text(cfg.out / "train.log", format_train_log(cfg, seed, report));
    write_meta_training_csv(build_meta_training_set(data.meta_train, sys.pool, sys.hyper.layout(), sys.hyper.h_c,
                                                    sys.f5_norms),
                            cfg.out / "meta_training.csv");
    write_csv(data.train, cfg.out / "train.csv");
    write_csv(data.meta_train, cfg.out / "meta_train.csv");
    write_csv(data.dsel, cfg.out / "dsel.csv");
    write_csv(data.test, cfg.out / "test.csv");
    return sys;
}

ResultTable evaluate_methods(const TrainedSystem& sys, const Dataset& test, const std::vector<Method>& methods,
                             std::uint64_t seed) {
    ResultTable t;
    for (const auto m : methods) {
        ResultRow row;
        row.method = std::string(method_name(m));
        row.pool_size = sys.pool.size();
        row.dsel_size = sys.dsel.size();
        row.seed = seed;
        const auto t0 = std::chrono::steady_clock::now();
        row.accuracy = evaluate(sys, m, test);
        row.wall_time = seconds_since(t0);
        t.rows.push_back(std::move(row));
    }
    return t;
}

ResultTable run_eval(const std::filesystem::path& model, const std::filesystem::path& test,
                     const std::vector<Method>& methods, std::uint64_t seed) {
    if (!std::filesystem::exists(model)) throw ParseError("eval", "model file not found: " + model.string());
    if (!std::filesystem::exists(test)) throw ParseError("eval", "test file not found: " + test.string());
    const auto sys = load_system(model);
    return evaluate_methods(sys, read_csv(test, Split::Test), methods, seed);
}

ResultTable run_sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto pools = cfg.pool_points.empty() ? std::vector<std::size_t>{cfg.pool_size} : cfg.pool_points;
    const auto dsels = cfg.dsel_points.empty() ? std::vector<std::size_t>{cfg.sizes.dsel} : cfg.dsel_points;

    struct Job {
        std::uint64_t seed;
        std::size_t pool, dsel, point;
    };
    std::vector<Job> jobs;
    for (const auto seed : cfg.seeds)
        for (std::size_t pi = 0; pi < pools.size(); ++pi)
            for (std::size_t di = 0; di < dsels.size(); ++di)
                jobs.push_back({seed, pools[pi], dsels[di], pi * dsels.size() + di});

    std::vector<ResultTable> partial(jobs.size());
    parallel_for(jobs.size(), [&](std::size_t j) {
        const auto& job = jobs[j];
        ExperimentConfig point = cfg;
        point.pool_size = job.pool;
        point.sizes.dsel = job.dsel;
        try {
            const auto data = generate({point.problem, point.sizes, job.seed});
            const auto t0 = std::chrono::steady_clock::now();
            const auto sys = train_system(data, train_options(point, job.seed, job.point));
            const double train_time = seconds_since(t0);
            partial[j] = evaluate_methods(sys, data.test, point.methods, job.seed);
            for (auto& r : partial[j].rows) r.wall_time += train_time;
        } catch (const Error& e) {
            for (const auto m : point.methods)
                partial[j].rows.push_back({std::string(method_name(m)), job.pool, job.dsel, job.seed, std::nullopt,
                                           "error [" + e.stage() + "]: " + e.what(), 0.0});
        }
    });

    ResultTable out;
    for (auto& p : partial)
        for (auto& r : p.rows) out.rows.push_back(std::move(r));
    out.sort();
    return out;
}

BoundaryGrid boundary_grid(const TrainedSystem& sys, Method method, std::size_t resolution) {
    if (resolution < 2) throw ConfigError("boundary", "resolution must be at least 2");
    if (method == Method::Oracle) throw ConfigError("boundary", "the oracle has no decision boundary");
    BoundaryGrid g;
    g.resolution = resolution;
    const double step = 1.0 / static_cast<double>(resolution - 1);
    for (std::size_t iy = 0; iy < resolution; ++iy)
        for (std::size_t ix = 0; ix < resolution; ++ix)
            g.points.push_back({static_cast<double>(ix) * step, static_cast<double>(iy) * step});
    g.labels.assign(g.points.size(), Label::One);
    parallel_for(g.points.size(), [&](std::size_t i) { g.labels[i] = classify_point(sys, method, g.points[i]); });
    return g;
}

std::string boundary_csv(const BoundaryGrid& g) {
    std::ostringstream o;
    for (std::size_t i = 0; i < g.points.size(); ++i)
        o << fmt_double(g.points[i][0]) << ',' << fmt_double(g.points[i][1]) << ',' << to_int(g.labels[i]) << '\n';
    return o.str();
}

std::string boundary_svg(const BoundaryGrid& g, const Dataset* overlay, int pixels) {
    constexpr const char* kFill[2] = {"#9ecae1", "#fdae6b"};
    constexpr const char* kDot[2] = {"#08519c", "#a63603"};
    const double px = static_cast<double>(pixels);
    const double cell = px / static_cast<double>(g.resolution);
    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << pixels << "\" height=\"" << pixels
      << "\" viewBox=\"0 0 " << pixels << ' ' << pixels << "\" shape-rendering=\"crispEdges\">\n";
    for (std::size_t i = 0; i < g.points.size(); ++i) {
        const auto ix = i % g.resolution, iy = i / g.resolution;
        // y grows upwards in the data, downwards in SVG.
        o << "<rect x=\"" << fmt_double(static_cast<double>(ix) * cell) << "\" y=\""
          << fmt_double(px - static_cast<double>(iy + 1) * cell) << "\" width=\"" << fmt_double(cell)
          << "\" height=\"" << fmt_double(cell) << "\" fill=\"" << kFill[label_index(g.labels[i])] << "\"/>\n";
    }
    if (overlay) {
        for (const auto& s : overlay->samples)
            o << "<circle cx=\"" << fmt_double(s.x[0] * px) << "\" cy=\"" << fmt_double(px - s.x[1] * px)
              << "\" r=\"2\" fill=\"" << kDot[label_index(s.label)] << "\"/>\n";
    }
    o << "</svg>\n";
    return o.str();
}

BoundaryGrid run_boundary(const std::filesystem::path& model, Method method, std::size_t resolution,
                          const std::filesystem::path& out, const std::filesystem::path* overlay) {
    if (!std::filesystem::exists(model)) throw ParseError("boundary", "model file not found: " + model.string());
    const auto sys = load_system(model);
    auto g = boundary_grid(sys, method, resolution);
    std::optional<Dataset> samples;
    if (overlay) samples = read_csv(*overlay, Split::Test);
    std::filesystem::create_directories(out);
    write_text(out / "boundary.csv", boundary_csv(g));
    write_text(out / "boundary.svg", boundary_svg(g, samples ? &*samples : nullptr));
    return g;
}

std::size_t run_trace(const std::filesystem::path& model, const std::filesystem::path& queries,
                      const std::filesystem::path& out, std::size_t limit) {
    if (!std::filesystem::exists(model)) throw ParseError("trace", "model file not found: " + model.string());
    const auto sys = load_system(model);
    const auto data = read_csv(queries, Split::Test);
    const std::size_t n = limit == 0 ? data.size() : std::min(limit, data.size());
    std::vector<std::string> lines(n);
    parallel_for(n, [&](std::size_t i) { lines[i] = trace_query(sys, data[i], i).dump(); });
    std::string text;
    for (const auto& l : lines) text += l + "\n";
    std::filesystem::create_directories(out);
    write_text(out / "trace.jsonl", text);
    return n;
}

}  // namespace metades
