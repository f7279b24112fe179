#include "metades/persistence.hpp"

#include <fstream>
#include <sstream>

#include "metades/errors.hpp"

namespace metades {

using nlohmann::json;

namespace {

json label_json(Label l) { return to_int(l); }

json profile_json(std::span<const Label> p) {
    json a = json::array();
    for (const auto l : p) a.push_back(to_int(l));
    return a;
}

json stump_json(const DecisionStump& s) {
    return {{"type", "stump"},
            {"feature", s.feature},
            {"threshold", s.threshold},
            {"polarity", s.polarity},
            {"side_posteriors", {{s.side_posteriors[0][0], s.side_posteriors[0][1]},
                                 {s.side_posteriors[1][0], s.side_posteriors[1][1]}}}};
}

json perceptron_json(const Perceptron& p) { return {{"type", "perceptron"}, {"w", {p.w[0], p.w[1]}}, {"b", p.b}}; }

template <typename T>
T get(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw SchemaError("load_system", std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw SchemaError("load_system", std::string("field '") + key + "': " + e.what());
    }
}

json adaboost_json(const AdaBoostModel& m) {
    json stages = json::array();
    for (const auto& s : m.stages) stages.push_back({{"alpha", s.alpha}, {"learner", to_json(s.learner)}});
    return {{"base_kind", std::string(base_kind_name(m.kind))}, {"rounds", m.rounds}, {"stages", stages}};
}

AdaBoostModel adaboost_from_json(const json& j) {
    AdaBoostModel m;
    m.kind = parse_base_kind(get<std::string>(j, "base_kind"));
    m.rounds = get<int>(j, "rounds");
    for (const auto& s : get<json>(j, "stages")) m.stages.push_back({classifier_from_json(get<json>(s, "learner")),
                                                                     get<double>(s, "alpha")});
    return m;
}

}  // namespace

json to_json(const BaseClassifier& c) {
    json j = std::visit(
        [](const auto& m) {
            if constexpr (std::is_same_v<std::decay_t<decltype(m)>, Perceptron>)
                return perceptron_json(m);
            else
                return stump_json(m);
        },
        c.model);
    j["id"] = c.id;
    return j;
}

BaseClassifier classifier_from_json(const json& j) {
    BaseClassifier c;
    c.id = get<int>(j, "id");
    const auto type = get<std::string>(j, "type");
    if (type == "perceptron") {
        Perceptron p;
        const auto w = get<std::vector<double>>(j, "w");
        if (w.size() != 2) throw SchemaError("load_system", "perceptron weight vector must have 2 entries");
        p.w = {w[0], w[1]};
        p.b = get<double>(j, "b");
        c.model = p;
    } else if (type == "stump") {
        DecisionStump s;
        s.feature = get<int>(j, "feature");
        s.threshold = get<double>(j, "threshold");
        s.polarity = get<int>(j, "polarity");
        const auto post = get<std::vector<std::vector<double>>>(j, "side_posteriors");
        if (post.size() != 2 || post[0].size() != 2 || post[1].size() != 2)
            throw SchemaError("load_system", "stump side_posteriors must be 2x2");
        if ((s.feature != 0 && s.feature != 1) || (s.polarity != 1 && s.polarity != -1))
            throw SchemaError("load_system", "stump feature/polarity out of range");
        s.side_posteriors = {{{post[0][0], post[0][1]}, {post[1][0], post[1][1]}}};
        c.model = s;
    } else {
        throw SchemaError("load_system", "unknown classifier type '" + type + "'");
    }
    return c;
}

json to_json(const TrainedSystem& sys) {
    json pool = json::array();
    for (const auto& c : sys.pool.classifiers) pool.push_back(to_json(c));
    json dsel = json::array();
    for (const auto& s : sys.dsel.samples) dsel.push_back({s.x[0], s.x[1], to_int(s.label)});
    json j = {
        {"version", kModelFormatVersion},
        {"hyperparameters",
         {{"K", sys.hyper.k}, {"Kp", sys.hyper.kp}, {"h_c", sys.hyper.h_c}, {"upsilon", sys.hyper.upsilon}}},
        {"base_kind", std::string(base_kind_name(sys.kind))},
        {"pool", pool},
        {"meta_classifier",
         {{"priors", sys.meta.priors}, {"means", sys.meta.means}, {"variances", sys.meta.variances}}},
        {"dsel", dsel},
        {"f5_norms", sys.f5_norms},
        {"single_best", {{"id", sys.single_best.id}, {"accuracy", sys.single_best.accuracy}}},
    };
    if (sys.adaboost) j["adaboost"] = adaboost_json(*sys.adaboost);
    return j;
}

TrainedSystem system_from_json(const json& j) {
    if (!j.is_object()) throw SchemaError("load_system", "model file is not a JSON object");
    if (!j.contains("version")) throw SchemaError("load_system", "missing field 'version'");
    if (!j.at("version").is_string() || j.at("version").get<std::string>() != kModelFormatVersion)
        throw SchemaError("load_system", std::string("unsupported model version ") + j.at("version").dump() +
                                             ", expected \"" + kModelFormatVersion + "\"");
    TrainedSystem sys;
    const auto hp = get<json>(j, "hyperparameters");
    sys.hyper.k = get<std::size_t>(hp, "K");
    sys.hyper.kp = get<std::size_t>(hp, "Kp");
    sys.hyper.h_c = get<double>(hp, "h_c");
    sys.hyper.upsilon = get<double>(hp, "upsilon");
    sys.kind = parse_base_kind(get<std::string>(j, "base_kind"));
    for (const auto& c : get<json>(j, "pool")) sys.pool.classifiers.push_back(classifier_from_json(c));

    const auto meta = get<json>(j, "meta_classifier");
    const auto priors = get<std::vector<double>>(meta, "priors");
    const auto means = get<std::vector<std::vector<double>>>(meta, "means");
    const auto vars = get<std::vector<std::vector<double>>>(meta, "variances");
    if (priors.size() != 2 || means.size() != 2 || vars.size() != 2)
        throw SchemaError("load_system", "meta_classifier must describe exactly two meta-classes");
    sys.meta.priors = {priors[0], priors[1]};
    sys.meta.means = {means[0], means[1]};
    sys.meta.variances = {vars[0], vars[1]};
    for (std::size_t c = 0; c < 2; ++c)
        if (means[c].size() != means[0].size() || vars[c].size() != means[0].size())
            throw SchemaError("load_system", "meta_classifier parameter vectors differ in length");

    sys.dsel.split = Split::Dsel;
    for (const auto& row : get<json>(j, "dsel")) {
        if (!row.is_array() || row.size() != 3) throw SchemaError("load_system", "DSEL rows must be [x1, x2, label]");
        try {
            sys.dsel.samples.push_back({{row[0].get<double>(), row[1].get<double>()}, label_from_int(row[2].get<int>())});
        } catch (const json::exception& e) {
            throw SchemaError("load_system", std::string("DSEL row: ") + e.what());
        } catch (const DomainError& e) {
            throw SchemaError("load_system", std::string("DSEL row: ") + e.what());
        }
    }
    sys.f5_norms = get<std::vector<double>>(j, "f5_norms");
    const auto sb = get<json>(j, "single_best");
    sys.single_best = {get<int>(sb, "id"), get<double>(sb, "accuracy")};
    if (j.contains("adaboost")) sys.adaboost = adaboost_from_json(j.at("adaboost"));

    sys.dsel_profiles = decision_matrix(sys.pool, sys.dsel);
    try {
        validate(sys);
    } catch (const DomainError& e) {
        throw SchemaError("load_system", e.what());
    }
    return sys;
}

std::string serialize_system(const TrainedSystem& sys) { return to_json(sys).dump(1) + "\n"; }

void save_system(const TrainedSystem& sys, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SchemaError("save_system", "cannot write " + path.string());
    out << serialize_system(sys);
}

TrainedSystem load_system(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError("load_system", "cannot open " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError("load_system", path.string() + " is not valid JSON: " + e.what());
    }
    return system_from_json(j);
}

json trace_query(const TrainedSystem& sys, const Sample& query, std::size_t query_id) {
    const auto a = analyze_query(sys, query.x);
    const auto layout = sys.hyper.layout();
    json classifiers = json::array();
    for (std::size_t i = 0; i < sys.pool.size(); ++i) {
        const auto& v = a.meta_vectors[i];
        auto slice = [&](std::size_t from, std::size_t n) { return std::vector<double>(v.begin() + from, v.begin() + from + n); };
        classifiers.push_back({{"id", sys.pool[i].id},
                               {"prediction", to_int(a.profile[i])},
                               {"f1", slice(layout.f1(), layout.k)},
                               {"f2", slice(layout.f2(), layout.k)},
                               {"f3", v[layout.f3()]},
                               {"f4", slice(layout.f4(), layout.kp)},
                               {"f5", v[layout.f5()]},
                               {"delta", a.competence.delta[i]},
                               {"selected", a.competence.selected[i] != 0}});
    }
    json selected = json::array();
    for (std::size_t i = 0; i < sys.pool.size(); ++i)
        if (a.competence.selected[i]) selected.push_back(sys.pool[i].id);
    return {{"query", query_id},
            {"x", {query.x[0], query.x[1]}},
            {"label", label_json(query.label)},
            {"profile", profile_json(a.profile)},
            {"region_of_competence", a.hood.roc.indices},
            {"profile_neighbors", a.hood.profile_nbrs.indices},
            {"classifiers", classifiers},
            {"delta", a.competence.delta},
            {"selected", selected},
            {"fallback", a.competence.fallback},
            {"decision", to_int(combine_selected_weighted(a.competence, a.profile))}};
}

}  // namespace metades
