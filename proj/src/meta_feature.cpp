#include "metades/meta_feature.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <string>

#include "metades/errors.hpp"
#include "metades/parallel.hpp"

namespace metades {

double consensus_degree(std::span<const Label> votes) {
    if (votes.empty()) throw DomainError("sample_selection", "consensus of an empty vote");
    std::size_t ones = 0;
    for (const auto v : votes) ones += v == Label::One;
    const std::size_t majority = std::max(ones, votes.size() - ones);
    return static_cast<double>(majority) / static_cast<double>(votes.size());
}

std::vector<std::size_t> select_meta_training(const DecisionMatrix& profiles, double h_c) {
    if (!(h_c > 0.5 && h_c <= 1.0)) throw DomainError("sample_selection", "h_C must lie in (0.5, 1]");
    std::vector<std::size_t> kept;
    for (std::size_t j = 0; j < profiles.rows(); ++j)
        if (consensus_degree(profiles.row(j)) < h_c) kept.push_back(j);
    return kept;
}

std::vector<std::size_t> select_meta_training(const Dataset& meta_train, const Pool& pool, double h_c) {
    return select_meta_training(decision_matrix(pool, meta_train), h_c);
}

namespace {

// Sorts candidate indices by (distance, index) and keeps the first k.
template <typename Dist>
std::vector<std::size_t> nearest(std::size_t n, std::size_t k, std::optional<std::size_t> exclude, Dist&& dist,
                                 const char* what) {
    const std::size_t available = n - (exclude && *exclude < n ? 1 : 0);
    if (k == 0 || k > available)
        throw DomainError("meta_features", std::string(what) + ": need 1 <= k <= " + std::to_string(available) +
                                               ", got " + std::to_string(k));
    using Key = std::pair<decltype(dist(std::size_t{0})), std::size_t>;
    std::vector<Key> keys;
    keys.reserve(available);
    for (std::size_t i = 0; i < n; ++i)
        if (!exclude || *exclude != i) keys.emplace_back(dist(i), i);
    std::partial_sort(keys.begin(), keys.begin() + static_cast<std::ptrdiff_t>(k), keys.end());
    std::vector<std::size_t> out(k);
    for (std::size_t i = 0; i < k; ++i) out[i] = keys[i].second;
    return out;
}

}  // namespace

RegionOfCompetence region_of_competence(const Point& query, const Dataset& ref, std::size_t k,
                                        std::optional<std::size_t> exclude) {
    auto dist = [&](std::size_t i) {
        const double dx = ref[i].x[0] - query[0];
        const double dy = ref[i].x[1] - query[1];
        return dx * dx + dy * dy;
    };
    return {nearest(ref.size(), k, exclude, dist, "region of competence")};
}

OutputProfileNeighbors profile_neighbors(std::span<const Label> profile, const DecisionMatrix& ref, std::size_t kp,
                                         std::optional<std::size_t> exclude) {
    if (profile.size() != ref.cols()) throw DomainError("meta_features", "profile length differs from pool size");
    auto dist = [&](std::size_t j) {
        const auto row = ref.row(j);
        std::size_t mismatches = 0;
        for (std::size_t i = 0; i < row.size(); ++i) mismatches += row[i] != profile[i];
        return mismatches;
    };
    return {nearest(ref.rows(), kp, exclude, dist, "output profile neighbors")};
}

std::vector<double> extract_f1(std::size_t member, const RegionOfCompetence& roc, const ReferenceSet& ref) {
    std::vector<double> bits;
    bits.reserve(roc.indices.size());
    for (const auto k : roc.indices) bits.push_back(ref.profiles(k, member) == ref.data[k].label ? 1.0 : 0.0);
    return bits;
}

std::vector<double> extract_f2(const BaseClassifier& c, const RegionOfCompetence& roc, const Dataset& ref) {
    std::vector<double> p;
    p.reserve(roc.indices.size());
    for (const auto k : roc.indices) p.push_back(posterior(c, ref[k].x, ref[k].label));
    return p;
}

double extract_f3(std::span<const double> f1) {
    if (f1.empty()) return 0.0;
    return std::accumulate(f1.begin(), f1.end(), 0.0) / static_cast<double>(f1.size());
}

std::vector<double> extract_f4(std::size_t member, const OutputProfileNeighbors& nbrs, const ReferenceSet& ref) {
    std::vector<double> bits;
    bits.reserve(nbrs.indices.size());
    for (const auto k : nbrs.indices) bits.push_back(ref.profiles(k, member) == ref.data[k].label ? 1.0 : 0.0);
    return bits;
}

double extract_f5(const BaseClassifier& c, const Point& query, double norm) {
    if (!(norm > 0.0)) throw DomainError("meta_features", "f5 normalizer must be positive");
    return std::min(boundary_distance(c, query) / norm, 1.0);
}

std::vector<double> f5_norms(const Pool& pool, const Dataset& data) {
    std::vector<double> norms(pool.size(), 0.0);
    for (std::size_t i = 0; i < pool.size(); ++i) {
        for (const auto& s : data.samples) norms[i] = std::max(norms[i], boundary_distance(pool[i], s.x));
        if (!(norms[i] > 0.0)) norms[i] = 1.0;
    }
    return norms;
}

QueryNeighborhood query_neighborhood(const Point& query, std::span<const Label> query_profile, const ReferenceSet& ref,
                                     const MetaLayout& layout, std::optional<std::size_t> exclude) {
    return {region_of_competence(query, ref.data, layout.k, exclude),
            profile_neighbors(query_profile, ref.profiles, layout.kp, exclude)};
}

std::vector<double> build_meta_vector(const Pool& pool, std::size_t member, const Point& query,
                                      const QueryNeighborhood& hood, const ReferenceSet& ref,
                                      const MetaLayout& layout, double f5_norm) {
    std::vector<double> v;
    v.reserve(layout.length());
    const auto f1 = extract_f1(member, hood.roc, ref);
    const auto f2 = extract_f2(pool[member], hood.roc, ref.data);
    const auto f4 = extract_f4(member, hood.profile_nbrs, ref);
    v.insert(v.end(), f1.begin(), f1.end());
    v.insert(v.end(), f2.begin(), f2.end());
    v.push_back(extract_f3(f1));
    v.insert(v.end(), f4.begin(), f4.end());
    v.push_back(extract_f5(pool[member], query, f5_norm));
    return v;
}

MetaTrainingSet build_meta_training_set(const Dataset& meta_train, const Pool& pool, const MetaLayout& layout,
                                        double h_c, std::span<const double> norms) {
    if (norms.size() != pool.size()) throw DomainError("meta_features", "one f5 norm per classifier required");
    const auto profiles = decision_matrix(pool, meta_train);
    const auto kept = select_meta_training(profiles, h_c);
    if (kept.empty())
        throw TrainingError("sample_selection", "no T_lambda sample has consensus below h_C; nothing to meta-train on");

    const ReferenceSet ref{meta_train, profiles};
    const std::size_t m = pool.size();
    MetaTrainingSet set;
    set.layout = layout;
    set.selected = kept.size();
    set.samples.resize(kept.size() * m);
    parallel_for(kept.size(), [&](std::size_t s) {
        const std::size_t j = kept[s];
        const auto& x = meta_train[j];
        const auto hood = query_neighborhood(x.x, profiles.row(j), ref, layout, j);
        for (std::size_t i = 0; i < m; ++i) {
            auto& out = set.samples[s * m + i];
            out.v = build_meta_vector(pool, i, x.x, hood, ref, layout, norms[i]);
            out.alpha = profiles(j, i) == x.label ? 1 : 0;
            out.classifier_id = pool[i].id;
            out.sample_id = j;
        }
    });
    return set;
}

void write_meta_training_csv(const MetaTrainingSet& set, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("meta_features", "cannot write " + path.string());
    const auto& l = set.layout;
    for (std::size_t k = 1; k <= l.k; ++k) out << "f1_" << k << ',';
    for (std::size_t k = 1; k <= l.k; ++k) out << "f2_" << k << ',';
    out << "f3,";
    for (std::size_t k = 1; k <= l.kp; ++k) out << "f4_" << k << ',';
    out << "f5,alpha,classifier_id,sample_id\n";
    char buf[32];
    for (const auto& s : set.samples) {
        for (const double v : s.v) {
            std::snprintf(buf, sizeof buf, "%.17g,", v);
            out << buf;
        }
        out << s.alpha << ',' << s.classifier_id << ',' << s.sample_id << '\n';
    }
}

}  // namespace metades
