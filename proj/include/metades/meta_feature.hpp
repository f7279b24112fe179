#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "metades/pool.hpp"
#include "metades/types.hpp"

namespace metades {

/// Labeled samples plus their cached pool decisions. Meta-training uses
/// T_lambda here; generalization uses DSEL.
struct ReferenceSet {
    const Dataset& data;
    const DecisionMatrix& profiles;
};

/// Share of votes going to the majority class, in [ceil(M/2)/M, 1].
double consensus_degree(std::span<const Label> votes);

/// Indices of the rows whose consensus degree is strictly below h_c.
std::vector<std::size_t> select_meta_training(const DecisionMatrix& profiles, double h_c);
std::vector<std::size_t> select_meta_training(const Dataset& meta_train, const Pool& pool, double h_c);

/// K nearest reference samples in feature space (Euclidean), nearest first,
/// ties to the lower index.
struct RegionOfCompetence {
    std::vector<std::size_t> indices;
};

/// Kp reference samples with the closest output profiles, nearest first,
/// ties to the lower index.
struct OutputProfileNeighbors {
    std::vector<std::size_t> indices;
};

/// `exclude` drops one reference index from consideration (the query itself
/// during meta-training). Throws DomainError if fewer than k candidates remain.
RegionOfCompetence region_of_competence(const Point& query, const Dataset& ref, std::size_t k,
                                        std::optional<std::size_t> exclude = std::nullopt);

/// Profiles are compared as 0/1 vectors under Euclidean distance, which for
/// crisp two-class outputs orders exactly like the mismatch count.
OutputProfileNeighbors profile_neighbors(std::span<const Label> profile, const DecisionMatrix& ref, std::size_t kp,
                                         std::optional<std::size_t> exclude = std::nullopt);

struct MetaLayout {
    std::size_t k = 7;
    std::size_t kp = 5;

    std::size_t length() const { return 2 * k + kp + 2; }
    std::size_t f1() const { return 0; }
    std::size_t f2() const { return k; }
    std::size_t f3() const { return 2 * k; }
    std::size_t f4() const { return 2 * k + 1; }
    std::size_t f5() const { return 2 * k + 1 + kp; }
};

/// Column `member` of the reference profiles against the true labels.
std::vector<double> extract_f1(std::size_t member, const RegionOfCompetence& roc, const ReferenceSet& ref);
std::vector<double> extract_f2(const BaseClassifier& c, const RegionOfCompetence& roc, const Dataset& ref);
double extract_f3(std::span<const double> f1);
std::vector<double> extract_f4(std::size_t member, const OutputProfileNeighbors& nbrs, const ReferenceSet& ref);
double extract_f5(const BaseClassifier& c, const Point& query, double norm);

/// Per-classifier f5 scale: the largest boundary distance over `data`
/// (1 if every sample sits on the boundary).
std::vector<double> f5_norms(const Pool& pool, const Dataset& data);

/// Both neighborhoods of one query; shared by all pool members.
struct QueryNeighborhood {
    RegionOfCompetence roc;
    OutputProfileNeighbors profile_nbrs;
};

QueryNeighborhood query_neighborhood(const Point& query, std::span<const Label> query_profile, const ReferenceSet& ref,
                                     const MetaLayout& layout, std::optional<std::size_t> exclude = std::nullopt);

/// v_{i,j} laid out [f1 (K) | f2 (K) | f3 | f4 (Kp) | f5].
std::vector<double> build_meta_vector(const Pool& pool, std::size_t member, const Point& query,
                                      const QueryNeighborhood& hood, const ReferenceSet& ref,
                                      const MetaLayout& layout, double f5_norm);

struct MetaSample {
    std::vector<double> v;
    int alpha = 0;  // 1: classifier was correct on the sample
    int classifier_id = 1;
    std::size_t sample_id = 0;
};

struct MetaTrainingSet {
    MetaLayout layout;
    std::vector<MetaSample> samples;
    std::size_t selected = 0;  // number of T_lambda samples that passed the consensus filter
};

/// Meta-training data from T_lambda. Neighborhoods are taken in T_lambda with
/// the sample itself excluded. Output is sample-major, classifier-minor.
/// Throws TrainingError when no sample passes the consensus filter.
MetaTrainingSet build_meta_training_set(const Dataset& meta_train, const Pool& pool, const MetaLayout& layout,
                                        double h_c, std::span<const double> norms);

void write_meta_training_csv(const MetaTrainingSet& set, const std::filesystem::path& path);

}  // namespace metades
