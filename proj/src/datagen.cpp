#include "metades/datagen.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "metades/errors.hpp"

namespace metades {

Label label_from_int(int v) {
    if (v == 1) return Label::One;
    if (v == 2) return Label::Two;
    throw DomainError("datagen", "label must be 1 or 2, got " + std::to_string(v));
}

std::string_view split_name(Split s) {
    switch (s) {
        case Split::Train: return "T";
        case Split::MetaTrain: return "T_lambda";
        case Split::Dsel: return "DSEL";
        case Split::Test: return "G";
    }
    return "?";
}

std::string_view problem_name(Problem p) { return p == Problem::P2 ? "p2" : "xor"; }

Problem parse_problem(std::string_view s) {
    if (s == "p2" || s == "P2") return Problem::P2;
    if (s == "xor" || s == "XOR") return Problem::Xor;
    throw ConfigError("config", "unknown problem '" + std::string(s) + "'");
}

P2Curves p2_boundary_values(double x) {
    return {
        std::sin(x) + 5.0,
        (x - 2.0) * (x - 2.0) + 1.0,
        -0.1 * x * x + 0.6 * std::sin(4.0 * x) + 8.0,
        (x - 10.0) * (x - 10.0) / 2.0 + 7.902,
    };
}

Label p2_label(const Point& native) {
    const auto [x, y] = native;
    if (!std::isfinite(x) || !std::isfinite(y) || x < 0.0 || x > 10.0 || y < 0.0 || y > 10.0)
        throw DomainError("datagen", "P2 point outside [0,10]^2");
    const auto e = p2_boundary_values(x);
    const int above = (y > e.e1) + (y > e.e2) + (y > e.e3) + (y > e.e4);
    return above % 2 == 1 ? Label::One : Label::Two;
}

Label p2_label_unit(const Point& unit) { return p2_label({unit[0] * 10.0, unit[1] * 10.0}); }

Label xor_label(const Point& p) {
    const double prod = (p[0] - 0.5) * (p[1] - 0.5);
    if (prod == 0.0) throw DomainError("datagen", "XOR point on a quadrant axis");
    return prod > 0.0 ? Label::One : Label::Two;
}

Dataset generate_split(Problem problem, std::size_t n, Split tag, Rng& rng) {
    if (n == 0) throw ConfigError("datagen", "split sizes must be positive");
    const std::size_t quota[2] = {n / 2 + n % 2, n / 2};
    std::size_t have[2] = {0, 0};
    Dataset out;
    out.split = tag;
    out.samples.reserve(n);
    while (out.samples.size() < n) {
        const Point p{uniform01(rng), uniform01(rng)};
        Label l;
        if (problem == Problem::P2) {
            l = p2_label_unit(p);
        } else {
            if ((p[0] - 0.5) * (p[1] - 0.5) == 0.0) continue;
            l = xor_label(p);
        }
        const auto k = label_index(l);
        if (have[k] == quota[k]) continue;
        ++have[k];
        out.samples.push_back({p, l});
    }
    return out;
}

std::uint64_t split_seed(std::uint64_t seed, Split s) {
    return derive_seed(seed, 0x5100 + static_cast<std::uint64_t>(s));
}

namespace {

SplitSet generate_all(Problem problem, const GenSpec& spec) {
    auto one = [&](std::size_t n, Split s) {
        Rng rng(split_seed(spec.seed, s));
        return generate_split(problem, n, s, rng);
    };
    return {
        one(spec.sizes.train, Split::Train),
        one(spec.sizes.meta_train, Split::MetaTrain),
        one(spec.sizes.dsel, Split::Dsel),
        one(spec.sizes.test, Split::Test),
    };
}

}  // namespace

SplitSet gen_p2(const GenSpec& spec) { return generate_all(Problem::P2, spec); }
SplitSet gen_xor(const GenSpec& spec) { return generate_all(Problem::Xor, spec); }
SplitSet generate(const GenSpec& spec) { return generate_all(spec.problem, spec); }

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

template <typename T>
T parse_number(std::string_view field, std::string_view row) {
    field = trim(field);
    T value{};
    const auto* end = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (ec != std::errc{} || ptr != end || field.empty())
        throw ParseError("csv", "malformed row '" + std::string(row) + "'");
    return value;
}

}  // namespace

Sample parse_csv_row(std::string_view row) {
    const auto c1 = row.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : row.find(',', c1 + 1);
    if (c2 == std::string_view::npos || row.find(',', c2 + 1) != std::string_view::npos)
        throw ParseError("csv", "expected 3 fields in row '" + std::string(row) + "'");
    const double x1 = parse_number<double>(row.substr(0, c1), row);
    const double x2 = parse_number<double>(row.substr(c1 + 1, c2 - c1 - 1), row);
    const int label = parse_number<int>(row.substr(c2 + 1), row);
    if (!std::isfinite(x1) || !std::isfinite(x2))
        throw ParseError("csv", "non-finite coordinate in row '" + std::string(row) + "'");
    return {{x1, x2}, label_from_int(label)};
}

Dataset read_csv(const std::filesystem::path& path, Split tag, bool header) {
    std::ifstream in(path);
    if (!in) throw ParseError("csv", "cannot open " + path.string());
    Dataset out;
    out.split = tag;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (header && line_no == 1) continue;
        if (trim(line).empty()) continue;
        try {
            out.samples.push_back(parse_csv_row(line));
        } catch (const ParseError& e) {
            throw ParseError("csv", path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (out.empty()) throw ParseError("csv", path.string() + " contains no samples");
    return out;
}

void write_csv(const Dataset& data, const std::filesystem::path& path, bool header) {
    std::ofstream out(path);
    if (!out) throw ParseError("csv", "cannot write " + path.string());
    if (header) out << "x1,x2,label\n";
    char buf[64];
    for (const auto& s : data.samples) {
        // %.17g round-trips doubles exactly.
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d\n", s.x[0], s.x[1], to_int(s.label));
        out << buf;
    }
}

}  // namespace metades
