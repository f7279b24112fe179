#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "metades/baselines.hpp"
#include "metades/meta_classifier.hpp"
#include "metades/meta_feature.hpp"
#include "metades/pool.hpp"

namespace metades {

struct Hyperparameters {
    std::size_t k = 7;
    std::size_t kp = 5;
    double h_c = 0.7;
    double upsilon = 0.5;

    MetaLayout layout() const { return {k, kp}; }

    friend bool operator==(const Hyperparameters&, const Hyperparameters&) = default;
};

/// Everything the generalization phase needs. Immutable once built; all
/// classification entry points are const and thread-safe.
struct TrainedSystem {
    Hyperparameters hyper;
    BaseKind kind = BaseKind::Perceptron;
    Pool pool;
    GaussianNB meta;
    Dataset dsel;
    DecisionMatrix dsel_profiles;  // decision_matrix(pool, dsel)
    std::vector<double> f5_norms;  // frozen at meta-training
    SingleBest single_best;        // measured on DSEL
    std::optional<AdaBoostModel> adaboost;

    ReferenceSet reference() const { return {dsel, dsel_profiles}; }
};

/// Throws DomainError if the hyper-parameters or component shapes disagree.
void validate(const TrainedSystem& sys);

struct CompetenceVector {
    std::vector<double> delta;
    std::vector<char> selected;  // 1 if c_i joins the ensemble
    bool fallback = false;       // no delta exceeded upsilon; argmax member selected
};

/// delta_i > upsilon selects c_i; when nothing qualifies only the argmax
/// (lowest id on ties) is selected.
CompetenceVector select_competent(std::vector<double> delta, double upsilon);

/// Intermediate state for one query: profile, neighborhoods, meta-vectors
/// and competences.
struct QueryAnalysis {
    std::vector<Label> profile;
    QueryNeighborhood hood;
    std::vector<std::vector<double>> meta_vectors;
    CompetenceVector competence;
};

QueryAnalysis analyze_query(const TrainedSystem& sys, const Point& x);
CompetenceVector estimate_competences(const TrainedSystem& sys, const Point& x);

// Combiners over a precomputed competence vector and output profile.
Label combine_selected_weighted(const CompetenceVector& c, std::span<const Label> profile);  // META-DES.H
Label combine_selected_vote(const CompetenceVector& c, std::span<const Label> profile);      // META-DES.S
Label combine_weighted(std::span<const double> delta, std::span<const Label> profile);       // META-DES.W

Label classify_h(const TrainedSystem& sys, const Point& x);
Label classify_s(const TrainedSystem& sys, const Point& x);
Label classify_w(const TrainedSystem& sys, const Point& x);

/// Local accuracy of every member over the K DSEL neighbours of x.
std::vector<double> ola_competences(const TrainedSystem& sys, const RegionOfCompetence& roc);
/// Per member: accuracy on the neighbours whose true label equals the
/// member's prediction for x; 0 when there are none.
std::vector<double> lca_competences(const TrainedSystem& sys, const Point& x, const RegionOfCompetence& roc);

Label ola_classify(const TrainedSystem& sys, const Point& x);
Label lca_classify(const TrainedSystem& sys, const Point& x);

enum class Method {
    MetaDesH,
    MetaDesS,
    MetaDesW,
    Ola,
    Lca,
    Oracle,
    SingleBest,
    Voting,
    Average,
    Product,
    Maximum,
    AdaBoost,
};

std::string_view method_name(Method m);
Method parse_method(std::string_view s);
std::vector<Method> parse_method_list(std::string_view comma_list);
const std::vector<Method>& all_methods();

/// Oracle needs the true label, hence a Sample. For the oracle the returned
/// label is the truth when any member predicts it, else member 1's vote.
Label classify(const TrainedSystem& sys, Method method, const Sample& s);

/// Label at a point with no ground truth; throws ConfigError for the oracle.
Label classify_point(const TrainedSystem& sys, Method method, const Point& x);

/// Mean 0-1 accuracy over `test`, computed in parallel across queries.
double evaluate(const TrainedSystem& sys, Method method, const Dataset& test);

}  // namespace metades
