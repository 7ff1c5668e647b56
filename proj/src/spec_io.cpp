#include "logitpath/spec_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "logitpath/error.hpp"

namespace logitpath {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw Error(ErrorKind::parse, where + ": " + what);
}

void allow_only(const json& obj, std::initializer_list<const char*> keys, const std::string& where) {
    if (!obj.is_object()) fail(where, "expected an object");
    for (const auto& [key, value] : obj.items()) {
        if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; })) {
            fail(where, "unknown field '" + key + "'");
        }
    }
}

double number(const json& v, const std::string& where) {
    if (!v.is_number()) fail(where, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(where, "value is not finite");
    return d;
}

double number_or_zero(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    return it == obj.end() ? 0.0 : number(*it, where + "." + key);
}

std::vector<double> numbers(const json& v, const std::string& where) {
    if (!v.is_array()) fail(where, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

int integer(const json& v, const std::string& where) {
    if (!v.is_number_integer()) fail(where, "expected an integer");
    return v.get<int>();
}

int mediator_key(const std::string& s, const std::string& where) {
    std::size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) fail(where, "mediator key '" + s + "' is not an integer index");
    return v;
}

class CovariateNames {
public:
    explicit CovariateNames(const std::vector<std::string>& names) : names_(names) {}

    int operator()(const json& v, const std::string& where) const {
        if (!v.is_string()) fail(where, "expected a covariate name");
        const auto name = v.get<std::string>();
        auto it = std::find(names_.begin(), names_.end(), name);
        if (it == names_.end()) fail(where, "unknown covariate '" + name + "'");
        return static_cast<int>(it - names_.begin());
    }
    std::size_t size() const { return names_.size(); }

private:
    const std::vector<std::string>& names_;
};

std::map<int, double> mediator_map(const json& v, const std::string& where) {
    if (!v.is_object()) fail(where, "expected an object keyed by mediator index");
    std::map<int, double> out;
    for (const auto& [key, value] : v.items()) out[mediator_key(key, where)] = number(value, where + "." + key);
    return out;
}

std::vector<double> covariate_vector(const json& v, const CovariateNames& names, const std::string& where) {
    if (!v.is_object()) fail(where, "expected an object keyed by covariate name");
    std::vector<double> out(names.size(), 0.0);
    for (const auto& [key, value] : v.items()) {
        out[static_cast<std::size_t>(names(json(key), where))] = number(value, where + "." + key);
    }
    return out;
}

IndexPair ordered_pair(int a, int b, const std::string& where) {
    if (a == b) fail(where, "pair refers to the same variable twice");
    return {std::min(a, b), std::max(a, b)};
}

void insert_unique(std::map<IndexPair, double>& m, IndexPair key, double value, const std::string& where) {
    if (!m.emplace(key, value).second) fail(where, "duplicate pair");
}

std::map<IndexPair, double> mediator_pairs(const json& v, const std::string& where) {
    if (!v.is_array()) fail(where, "expected an array of {w, value}");
    std::map<IndexPair, double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto at = where + "[" + std::to_string(i) + "]";
        allow_only(v[i], {"w", "value"}, at);
        const auto& w = v[i].at("w");
        if (!w.is_array() || w.size() != 2) fail(at, "'w' must list two mediator indices");
        insert_unique(out, ordered_pair(integer(w[0], at), integer(w[1], at), at), number(v[i].at("value"), at), at);
    }
    return out;
}

std::map<IndexPair, double> covariate_pairs(const json& v, const CovariateNames& names, const std::string& where) {
    if (!v.is_array()) fail(where, "expected an array of {c, value}");
    std::map<IndexPair, double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto at = where + "[" + std::to_string(i) + "]";
        allow_only(v[i], {"c", "value"}, at);
        const auto& c = v[i].at("c");
        if (!c.is_array() || c.size() != 2) fail(at, "'c' must list two covariate names");
        insert_unique(out, ordered_pair(names(c[0], at), names(c[1], at), at), number(v[i].at("value"), at), at);
    }
    return out;
}

std::map<IndexPair, double> mixed_pairs(const json& v, const CovariateNames& names, const std::string& where) {
    if (!v.is_array()) fail(where, "expected an array of {w, c, value}");
    std::map<IndexPair, double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto at = where + "[" + std::to_string(i) + "]";
        allow_only(v[i], {"w", "c", "value"}, at);
        insert_unique(out, {integer(v[i].at("w"), at), names(v[i].at("c"), at)}, number(v[i].at("value"), at), at);
    }
    return out;
}

OutcomeModel parse_outcome(const json& v, const CovariateNames& names) {
    const std::string where = "outcome";
    allow_only(v, {"beta0", "beta_x", "beta_w", "beta_xw", "beta_ww", "beta_c", "beta_xc", "beta_cc", "beta_wc", "beta_higher"},
               where);
    OutcomeModel o;
    o.beta0 = number_or_zero(v, "beta0", where);
    o.beta_x = number_or_zero(v, "beta_x", where);
    if (v.contains("beta_w")) o.beta_w = mediator_map(v["beta_w"], where + ".beta_w");
    if (v.contains("beta_xw")) o.beta_xw = mediator_map(v["beta_xw"], where + ".beta_xw");
    if (v.contains("beta_ww")) o.beta_ww = mediator_pairs(v["beta_ww"], where + ".beta_ww");
    if (v.contains("beta_c")) o.beta_c = covariate_vector(v["beta_c"], names, where + ".beta_c");
    if (v.contains("beta_xc")) o.beta_xc = covariate_vector(v["beta_xc"], names, where + ".beta_xc");
    if (v.contains("beta_cc")) o.beta_cc = covariate_pairs(v["beta_cc"], names, where + ".beta_cc");
    if (v.contains("beta_wc")) o.beta_wc = mixed_pairs(v["beta_wc"], names, where + ".beta_wc");
    if (v.contains("beta_higher")) {
        const auto& h = v["beta_higher"];
        if (!h.is_array()) fail(where + ".beta_higher", "expected an array of {x, w, value}");
        for (std::size_t i = 0; i < h.size(); ++i) {
            const auto at = where + ".beta_higher[" + std::to_string(i) + "]";
            allow_only(h[i], {"x", "w", "value"}, at);
            BinaryTerm term;
            if (h[i].contains("x")) {
                if (!h[i]["x"].is_boolean()) fail(at, "'x' must be a boolean");
                term.x = h[i]["x"].get<bool>();
            }
            if (!h[i].contains("w") || !h[i]["w"].is_array()) fail(at, "'w' must list mediator indices");
            for (const auto& j : h[i]["w"]) term.mediators.push_back(integer(j, at));
            std::sort(term.mediators.begin(), term.mediators.end());
            add_binary_term(o, term, number(h[i].at("value"), at));
        }
    }
    return o;
}

MediatorModel parse_mediator(const json& v, const CovariateNames& names, std::size_t i) {
    const std::string where = "mediators[" + std::to_string(i) + "]";
    allow_only(v, {"index", "gamma0", "gamma_x", "gamma_w", "gamma_xw", "gamma_ww", "gamma_c", "gamma_xc", "gamma_cc", "gamma_wc"},
               where);
    if (!v.contains("index")) fail(where, "missing 'index'");
    MediatorModel m;
    m.index = integer(v["index"], where + ".index");
    m.gamma0 = number_or_zero(v, "gamma0", where);
    m.gamma_x = number_or_zero(v, "gamma_x", where);
    if (v.contains("gamma_w")) m.gamma_w = mediator_map(v["gamma_w"], where + ".gamma_w");
    if (v.contains("gamma_xw")) m.gamma_xw = mediator_map(v["gamma_xw"], where + ".gamma_xw");
    if (v.contains("gamma_ww")) m.gamma_ww = mediator_pairs(v["gamma_ww"], where + ".gamma_ww");
    if (v.contains("gamma_c")) m.gamma_c = covariate_vector(v["gamma_c"], names, where + ".gamma_c");
    if (v.contains("gamma_xc")) m.gamma_xc = covariate_vector(v["gamma_xc"], names, where + ".gamma_xc");
    if (v.contains("gamma_cc")) m.gamma_cc = covariate_pairs(v["gamma_cc"], names, where + ".gamma_cc");
    if (v.contains("gamma_wc")) m.gamma_wc = mixed_pairs(v["gamma_wc"], names, where + ".gamma_wc");
    return m;
}

RunOptions parse_options(const json& v) {
    allow_only(v, {"tolerance", "taylor_x0", "sweep"}, "options");
    RunOptions o;
    if (v.contains("tolerance")) {
        o.tolerance = number(v["tolerance"], "options.tolerance");
        if (*o.tolerance <= 0.0) fail("options.tolerance", "must be positive");
    }
    if (v.contains("taylor_x0")) o.taylor_x0 = number(v["taylor_x0"], "options.taylor_x0");
    if (v.contains("sweep")) {
        const auto& s = v["sweep"];
        allow_only(s, {"beta_w", "beta_xw", "gamma_x"}, "options.sweep");
        if (s.contains("beta_w")) o.sweep.beta_w = numbers(s["beta_w"], "options.sweep.beta_w");
        if (s.contains("beta_xw")) o.sweep.beta_xw = numbers(s["beta_xw"], "options.sweep.beta_xw");
        if (s.contains("gamma_x")) o.sweep.gamma_x = numbers(s["gamma_x"], "options.sweep.gamma_x");
    }
    return o;
}

void put_mediator_map(ojson& out, const char* key, const std::map<int, double>& m) {
    if (m.empty()) return;
    ojson obj = ojson::object();
    for (const auto& [j, v] : m) obj[std::to_string(j)] = v;
    out[key] = obj;
}

void put_mediator_pairs(ojson& out, const char* key, const std::map<IndexPair, double>& m) {
    if (m.empty()) return;
    ojson arr = ojson::array();
    for (const auto& [k, v] : m) arr.push_back({{"w", {k.first, k.second}}, {"value", v}});
    out[key] = arr;
}

const std::string& covariate_name(const SystemSpec& s, int i) { return s.covariates->names[static_cast<std::size_t>(i)]; }

void put_covariate_vector(ojson& out, const char* key, const std::vector<double>& v, const SystemSpec& s) {
    if (v.empty()) return;
    ojson obj = ojson::object();
    for (std::size_t i = 0; i < v.size(); ++i) obj[covariate_name(s, static_cast<int>(i))] = v[i];
    out[key] = obj;
}

void put_covariate_pairs(ojson& out, const char* key, const std::map<IndexPair, double>& m, const SystemSpec& s) {
    if (m.empty()) return;
    ojson arr = ojson::array();
    for (const auto& [k, v] : m) {
        arr.push_back({{"c", {covariate_name(s, k.first), covariate_name(s, k.second)}}, {"value", v}});
    }
    out[key] = arr;
}

void put_mixed_pairs(ojson& out, const char* key, const std::map<IndexPair, double>& m, const SystemSpec& s) {
    if (m.empty()) return;
    ojson arr = ojson::array();
    for (const auto& [k, v] : m) arr.push_back({{"w", k.first}, {"c", covariate_name(s, k.second)}, {"value", v}});
    out[key] = arr;
}

SpecFile parse_document(const json& doc) {
    allow_only(doc, {"schema_version", "treatment", "covariates", "mediators", "outcome", "confounder_view", "options"},
               "spec");
    SpecFile file;
    if (!doc.contains("schema_version") || !doc["schema_version"].is_string()) {
        fail("spec", "missing string field 'schema_version'");
    }
    file.schema_version = doc["schema_version"].get<std::string>();
    if (file.schema_version != schema_version) {
        fail("spec", "unsupported schema_version '" + file.schema_version + "' (expected '" + schema_version + "')");
    }

    if (!doc.contains("treatment")) fail("spec", "missing 'treatment'");
    const auto& t = doc["treatment"];
    allow_only(t, {"kind", "x"}, "treatment");
    if (!t.contains("kind") || !t["kind"].is_string()) fail("treatment", "missing string field 'kind'");
    const auto kind = t["kind"].get<std::string>();
    if (kind == "continuous") {
        file.system.treatment = TreatmentKind::continuous;
        if (t.contains("x")) file.x_grid = numbers(t["x"], "treatment.x");
    } else if (kind == "binary") {
        file.system.treatment = TreatmentKind::binary;
        if (t.contains("x")) fail("treatment", "a binary treatment takes no evaluation grid");
    } else {
        fail("treatment.kind", "expected 'continuous' or 'binary', got '" + kind + "'");
    }

    static const std::vector<std::string> no_names;
    if (doc.contains("covariates")) {
        const auto& c = doc["covariates"];
        allow_only(c, {"names", "values"}, "covariates");
        CovariateBlock block;
        if (!c.contains("names") || !c["names"].is_array()) fail("covariates", "missing array 'names'");
        for (const auto& n : c["names"]) {
            if (!n.is_string()) fail("covariates.names", "expected strings");
            block.names.push_back(n.get<std::string>());
        }
        if (!c.contains("values")) fail("covariates", "missing 'values'");
        block.values = numbers(c["values"], "covariates.values");
        if (block.values.size() != block.names.size()) fail("covariates", "names and values differ in length");
        file.system.covariates = std::move(block);
    }
    const CovariateNames names(file.system.covariates ? file.system.covariates->names : no_names);

    if (doc.contains("mediators")) {
        const auto& ms = doc["mediators"];
        if (!ms.is_array()) fail("mediators", "expected an array");
        for (std::size_t i = 0; i < ms.size(); ++i) file.system.mediators.push_back(parse_mediator(ms[i], names, i));
        std::sort(file.system.mediators.begin(), file.system.mediators.end(),
                  [](const MediatorModel& a, const MediatorModel& b) { return a.index < b.index; });
        if (!file.system.mediators.empty() && file.system.mediators.front().index != 1) {
            fail("mediators", "indices must run from 1 to k");
        }
    }

    if (!doc.contains("outcome")) fail("spec", "missing 'outcome'");
    file.system.outcome = parse_outcome(doc["outcome"], names);

    if (doc.contains("confounder_view")) {
        const auto& c = doc["confounder_view"];
        allow_only(c, {"delta0", "delta_w"}, "confounder_view");
        file.system.confounder_view = ConfounderModel{number_or_zero(c, "delta0", "confounder_view"),
                                                      number_or_zero(c, "delta_w", "confounder_view")};
    }
    if (doc.contains("options")) file.options = parse_options(doc["options"]);

    validate(file.system);
    return file;
}

}  // namespace

SpecFile parse_spec(const json& doc) {
    try {
        return parse_document(doc);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::parse, std::string("spec: ") + e.what());
    }
}

SpecFile load_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::parse, "cannot open spec file '" + path.string() + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::parse, path.string() + ": " + e.what());
    }
    return parse_spec(doc);
}

ojson outcome_to_json(const OutcomeModel& o, const SystemSpec& s) {
    ojson out;
    out["beta0"] = o.beta0;
    out["beta_x"] = o.beta_x;
    put_mediator_map(out, "beta_w", o.beta_w);
    put_mediator_map(out, "beta_xw", o.beta_xw);
    put_mediator_pairs(out, "beta_ww", o.beta_ww);
    put_covariate_vector(out, "beta_c", o.beta_c, s);
    put_covariate_vector(out, "beta_xc", o.beta_xc, s);
    put_covariate_pairs(out, "beta_cc", o.beta_cc, s);
    put_mixed_pairs(out, "beta_wc", o.beta_wc, s);
    if (!o.beta_higher.empty()) {
        ojson arr = ojson::array();
        for (const auto& [term, v] : o.beta_higher) arr.push_back({{"x", term.x}, {"w", term.mediators}, {"value", v}});
        out["beta_higher"] = arr;
    }
    return out;
}

ojson mediator_to_json(const MediatorModel& m, const SystemSpec& s) {
    ojson out;
    out["index"] = m.index;
    out["gamma0"] = m.gamma0;
    out["gamma_x"] = m.gamma_x;
    put_mediator_map(out, "gamma_w", m.gamma_w);
    put_mediator_map(out, "gamma_xw", m.gamma_xw);
    put_mediator_pairs(out, "gamma_ww", m.gamma_ww);
    put_covariate_vector(out, "gamma_c", m.gamma_c, s);
    put_covariate_vector(out, "gamma_xc", m.gamma_xc, s);
    put_covariate_pairs(out, "gamma_cc", m.gamma_cc, s);
    put_mixed_pairs(out, "gamma_wc", m.gamma_wc, s);
    return out;
}

ojson spec_to_json(const SpecFile& file) {
    const auto& s = file.system;
    ojson out;
    out["schema_version"] = file.schema_version.empty() ? std::string(schema_version) : file.schema_version;
    ojson t;
    t["kind"] = s.treatment == TreatmentKind::binary ? "binary" : "continuous";
    if (s.treatment == TreatmentKind::continuous && !file.x_grid.empty()) t["x"] = file.x_grid;
    out["treatment"] = t;
    if (s.covariates) out["covariates"] = {{"names", s.covariates->names}, {"values", s.covariates->values}};
    ojson ms = ojson::array();
    for (const auto& m : s.mediators) ms.push_back(mediator_to_json(m, s));
    out["mediators"] = ms;
    out["outcome"] = outcome_to_json(s.outcome, s);
    if (s.confounder_view) {
        out["confounder_view"] = {{"delta0", s.confounder_view->delta0}, {"delta_w", s.confounder_view->delta_w}};
    }
    ojson opts = ojson::object();
    if (file.options.tolerance) opts["tolerance"] = *file.options.tolerance;
    if (file.options.taylor_x0) opts["taylor_x0"] = *file.options.taylor_x0;
    const auto& sw = file.options.sweep;
    if (!sw.empty()) {
        ojson sweep = ojson::object();
        if (!sw.beta_w.empty()) sweep["beta_w"] = sw.beta_w;
        if (!sw.beta_xw.empty()) sweep["beta_xw"] = sw.beta_xw;
        if (!sw.gamma_x.empty()) sweep["gamma_x"] = sw.gamma_x;
        opts["sweep"] = sweep;
    }
    if (!opts.empty()) out["options"] = opts;
    return out;
}

}  // namespace logitpath
