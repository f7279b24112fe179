#pragma once

#include <cstdint>
#include <filesystem>
#include <string_view>

#include "metades/rng.hpp"
#include "metades/types.hpp"

namespace metades {

enum class Problem { P2, Xor };

std::string_view problem_name(Problem p);
Problem parse_problem(std::string_view s);

struct SplitSizes {
    std::size_t train = 500;
    std::size_t meta_train = 500;
    std::size_t dsel = 500;
    std::size_t test = 2000;
};

struct GenSpec {
    Problem problem = Problem::P2;
    SplitSizes sizes;
    std::uint64_t seed = 0;
};

/// Heights of the four curves delimiting the P2 regions, native domain [0,10].
struct P2Curves {
    double e1, e2, e3, e4;
};

P2Curves p2_boundary_values(double x);

/// Label of a point in the native [0,10]^2 P2 domain: class 1 when the point
/// lies above an odd number of the four curves, class 2 otherwise.
Label p2_label(const Point& native);

/// Label of a point in the unit square (the scaled P2 domain).
Label p2_label_unit(const Point& unit);

/// Quadrant XOR on the unit square: class 1 iff (x-0.5)(y-0.5) > 0.
/// Throws DomainError on the quadrant axes.
Label xor_label(const Point& p);

/// Draws one split. Both generators sample uniformly over the unit square and
/// fill each class to exactly half the requested size (rejection by class),
/// so every split has equal class priors.
Dataset generate_split(Problem problem, std::size_t n, Split tag, Rng& rng);

/// T, T_lambda, DSEL and G, each drawn from its own seed stream derived from
/// `spec.seed`, so changing one split's size leaves the others untouched.
SplitSet gen_p2(const GenSpec& spec);
SplitSet gen_xor(const GenSpec& spec);
SplitSet generate(const GenSpec& spec);

/// Child seed used for split `s` of a dataset generated with `seed`.
std::uint64_t split_seed(std::uint64_t seed, Split s);

/// CSV `x1,x2,label`, one sample per line.
Dataset read_csv(const std::filesystem::path& path, Split tag = Split::Test, bool header = false);
void write_csv(const Dataset& data, const std::filesystem::path& path, bool header = false);

/// Parses one `x1,x2,label` row. Throws ParseError / DomainError.
Sample parse_csv_row(std::string_view row);

}  // namespace metades
