#include "metades/des_core.hpp"

#include <algorithm>
#include <atomic>
#include <string>

#include "metades/errors.hpp"
#include "metades/parallel.hpp"

namespace metades {

void validate(const TrainedSystem& sys) {
    const auto& h = sys.hyper;
    const std::size_t m = sys.pool.size();
    if (m == 0) throw DomainError("system", "empty pool");
    if (h.k == 0 || h.k > sys.dsel.size()) throw DomainError("system", "K must satisfy 1 <= K <= |DSEL|");
    if (h.kp == 0 || h.kp > sys.dsel.size()) throw DomainError("system", "Kp must satisfy 1 <= Kp <= |DSEL|");
    if (!(h.upsilon > 0.0 && h.upsilon < 1.0)) throw DomainError("system", "upsilon must lie in (0, 1)");
    if (!(h.h_c > 0.5 && h.h_c <= 1.0)) throw DomainError("system", "h_C must lie in (0.5, 1]");
    if (sys.f5_norms.size() != m) throw DomainError("system", "one f5 norm per classifier required");
    if (sys.meta.dimension() != h.layout().length())
        throw DomainError("system", "meta-classifier dimension does not match 2K + Kp + 2");
    if (sys.dsel_profiles.rows() != sys.dsel.size() || sys.dsel_profiles.cols() != m)
        throw DomainError("system", "DSEL decision matrix has the wrong shape");
    if (sys.single_best.id < 1 || static_cast<std::size_t>(sys.single_best.id) > m)
        throw DomainError("system", "single-best id out of range");
}

CompetenceVector select_competent(std::vector<double> delta, double upsilon) {
    CompetenceVector out;
    out.selected.assign(delta.size(), 0);
    bool any = false;
    for (std::size_t i = 0; i < delta.size(); ++i) {
        if (delta[i] > upsilon) {
            out.selected[i] = 1;
            any = true;
        }
    }
    if (!any && !delta.empty()) {
        const auto best = std::max_element(delta.begin(), delta.end()) - delta.begin();
        out.selected[static_cast<std::size_t>(best)] = 1;
        out.fallback = true;
    }
    out.delta = std::move(delta);
    return out;
}

QueryAnalysis analyze_query(const TrainedSystem& sys, const Point& x) {
    QueryAnalysis a;
    const auto ref = sys.reference();
    const auto layout = sys.hyper.layout();
    a.profile = output_profile(x, sys.pool);
    a.hood = query_neighborhood(x, a.profile, ref, layout);
    std::vector<double> delta(sys.pool.size());
    a.meta_vectors.resize(sys.pool.size());
    for (std::size_t i = 0; i < sys.pool.size(); ++i) {
        a.meta_vectors[i] = build_meta_vector(sys.pool, i, x, a.hood, ref, layout, sys.f5_norms[i]);
        delta[i] = competence(sys.meta, a.meta_vectors[i]);
    }
    a.competence = select_competent(std::move(delta), sys.hyper.upsilon);
    return a;
}

CompetenceVector estimate_competences(const TrainedSystem& sys, const Point& x) {
    return analyze_query(sys, x).competence;
}

Label combine_selected_weighted(const CompetenceVector& c, std::span<const Label> profile) {
    double s[2] = {0.0, 0.0};
    for (std::size_t i = 0; i < profile.size(); ++i)
        if (c.selected[i]) s[label_index(profile[i])] += c.delta[i];
    return s[0] >= s[1] ? Label::One : Label::Two;
}

Label combine_selected_vote(const CompetenceVector& c, std::span<const Label> profile) {
    std::size_t s[2] = {0, 0};
    for (std::size_t i = 0; i < profile.size(); ++i)
        if (c.selected[i]) ++s[label_index(profile[i])];
    return s[0] >= s[1] ? Label::One : Label::Two;
}

Label combine_weighted(std::span<const double> delta, std::span<const Label> profile) {
    double s[2] = {0.0, 0.0};
    for (std::size_t i = 0; i < profile.size(); ++i) s[label_index(profile[i])] += delta[i];
    return s[0] >= s[1] ? Label::One : Label::Two;
}

Label classify_h(const TrainedSystem& sys, const Point& x) {
    const auto a = analyze_query(sys, x);
    return combine_selected_weighted(a.competence, a.profile);
}

Label classify_s(const TrainedSystem& sys, const Point& x) {
    const auto a = analyze_query(sys, x);
    return combine_selected_vote(a.competence, a.profile);
}

Label classify_w(const TrainedSystem& sys, const Point& x) {
    const auto a = analyze_query(sys, x);
    return combine_weighted(a.competence.delta, a.profile);
}

std::vector<double> ola_competences(const TrainedSystem& sys, const RegionOfCompetence& roc) {
    const auto ref = sys.reference();
    std::vector<double> out(sys.pool.size());
    for (std::size_t i = 0; i < sys.pool.size(); ++i) out[i] = extract_f3(extract_f1(i, roc, ref));
    return out;
}

std::vector<double> lca_competences(const TrainedSystem& sys, const Point& x, const RegionOfCompetence& roc) {
    std::vector<double> out(sys.pool.size(), 0.0);
    for (std::size_t i = 0; i < sys.pool.size(); ++i) {
        const Label claimed = predict(sys.pool[i], x);
        std::size_t total = 0, correct = 0;
        for (const auto k : roc.indices) {
            if (sys.dsel[k].label != claimed) continue;
            ++total;
            correct += sys.dsel_profiles(k, i) == claimed;
        }
        out[i] = total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
    }
    return out;
}

namespace {

std::size_t argmax_lowest(const std::vector<double>& v) {
    return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

Label ola_classify(const TrainedSystem& sys, const Point& x) {
    const auto roc = region_of_competence(x, sys.dsel, sys.hyper.k);
    return predict(sys.pool[argmax_lowest(ola_competences(sys, roc))], x);
}

Label lca_classify(const TrainedSystem& sys, const Point& x) {
    const auto roc = region_of_competence(x, sys.dsel, sys.hyper.k);
    return predict(sys.pool[argmax_lowest(lca_competences(sys, x, roc))], x);
}

namespace {

struct MethodName {
    Method method;
    std::string_view name;
};

constexpr MethodName kMethodNames[] = {
    {Method::MetaDesH, "metades_h"}, {Method::MetaDesS, "metades_s"},     {Method::MetaDesW, "metades_w"},
    {Method::Ola, "ola"},            {Method::Lca, "lca"},                {Method::Oracle, "oracle"},
    {Method::SingleBest, "single_best"}, {Method::Voting, "voting"},      {Method::Average, "average"},
    {Method::Product, "product"},    {Method::Maximum, "maximum"},        {Method::AdaBoost, "adaboost"},
};

}  // namespace

std::string_view method_name(Method m) {
    for (const auto& e : kMethodNames)
        if (e.method == m) return e.name;
    return "?";
}

Method parse_method(std::string_view s) {
    for (const auto& e : kMethodNames)
        if (e.name == s) return e.method;
    throw ConfigError("config", "unknown method '" + std::string(s) + "'");
}

std::vector<Method> parse_method_list(std::string_view list) {
    std::vector<Method> out;
    while (!list.empty()) {
        const auto comma = list.find(',');
        const auto item = list.substr(0, comma);
        if (!item.empty()) out.push_back(parse_method(item));
        if (comma == std::string_view::npos) break;
        list.remove_prefix(comma + 1);
    }
    if (out.empty()) throw ConfigError("config", "method list is empty");
    return out;
}

const std::vector<Method>& all_methods() {
    static const std::vector<Method> all = [] {
        std::vector<Method> v;
        for (const auto& e : kMethodNames) v.push_back(e.method);
        return v;
    }();
    return all;
}

Label classify(const TrainedSystem& sys, Method method, const Sample& s) {
    if (method == Method::Oracle) {
        for (const auto& c : sys.pool.classifiers)
            if (predict(c, s.x) == s.label) return s.label;
        return predict(sys.pool[0], s.x);
    }
    return classify_point(sys, method, s.x);
}

Label classify_point(const TrainedSystem& sys, Method method, const Point& x) {
    switch (method) {
        case Method::MetaDesH: return classify_h(sys, x);
        case Method::MetaDesS: return classify_s(sys, x);
        case Method::MetaDesW: return classify_w(sys, x);
        case Method::Ola: return ola_classify(sys, x);
        case Method::Lca: return lca_classify(sys, x);
        case Method::SingleBest: return predict(sys.pool[static_cast<std::size_t>(sys.single_best.id - 1)], x);
        case Method::Voting: return majority_vote(sys.pool, x);
        case Method::Average: return average_rule(sys.pool, x);
        case Method::Product: return product_rule(sys.pool, x);
        case Method::Maximum: return maximum_rule(sys.pool, x);
        case Method::AdaBoost:
            if (!sys.adaboost) throw ConfigError("evaluate", "model was trained without an AdaBoost baseline");
            return adaboost_predict(*sys.adaboost, x);
        case Method::Oracle: throw ConfigError("evaluate", "the oracle needs ground-truth labels");
    }
    throw ConfigError("evaluate", "unhandled method");
}

double evaluate(const TrainedSystem& sys, Method method, const Dataset& test) {
    if (test.empty()) return 0.0;
    if (method == Method::Oracle) return oracle_accuracy(sys.pool, test);
    if (method == Method::AdaBoost && !sys.adaboost)
        throw ConfigError("evaluate", "model was trained without an AdaBoost baseline");
    std::vector<char> hit(test.size(), 0);
    parallel_for(test.size(), [&](std::size_t j) { hit[j] = classify(sys, method, test[j]) == test[j].label; });
    std::size_t correct = 0;
    for (const char h : hit) correct += static_cast<std::size_t>(h);
    return static_cast<double>(correct) / static_cast<double>(test.size());
}

}  // namespace metades
