#include "logitpath/model.hpp"

#include <cmath>
#include <set>

#include "logitpath/error.hpp"
#include "logitpath/logistic.hpp"

namespace logitpath {

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorKind::parse, what); }

[[noreturn]] void mismatch(const std::string& what) { throw Error(ErrorKind::dimension, what); }

double coef_at(const std::vector<double>& v, std::size_t i) { return i < v.size() ? v[i] : 0.0; }

void check_finite(double v, const std::string& name) {
    if (!std::isfinite(v)) invalid("coefficient " + name + " is not finite");
}

void check_covariate_vector(const std::vector<double>& v, std::size_t p, const std::string& name) {
    if (!v.empty() && v.size() != p) {
        invalid(name + " has " + std::to_string(v.size()) + " entries, expected " + std::to_string(p));
    }
    for (double e : v) check_finite(e, name);
}

void check_covariate_pairs(const std::map<IndexPair, double>& m, std::size_t p,
                           const std::string& name) {
    for (const auto& [key, v] : m) {
        if (key.first < 0 || key.first >= key.second || key.second >= static_cast<int>(p)) {
            invalid(name + " references an invalid covariate pair");
        }
        check_finite(v, name);
    }
}

void check_binary(std::span<const int> w) {
    for (int v : w) {
        if (v != 0 && v != 1) mismatch("mediator values must be 0 or 1");
    }
}

void check_treatment_value(const SystemSpec& spec, double x) {
    if (spec.treatment == TreatmentKind::binary && x != 0.0 && x != 1.0) {
        mismatch("binary treatment takes values 0 or 1, got " + std::to_string(x));
    }
}

bool depends_on_mediator(const OutcomeModel& o, int index) {
    auto nonzero = [](double v) { return v != 0.0; };
    if (auto it = o.beta_w.find(index); it != o.beta_w.end() && nonzero(it->second)) return true;
    if (auto it = o.beta_xw.find(index); it != o.beta_xw.end() && nonzero(it->second)) return true;
    for (const auto& [key, v] : o.beta_ww) {
        if ((key.first == index || key.second == index) && nonzero(v)) return true;
    }
    for (const auto& [key, v] : o.beta_wc) {
        if (key.first == index && nonzero(v)) return true;
    }
    for (const auto& [term, v] : o.beta_higher) {
        for (int m : term.mediators) {
            if (m == index && nonzero(v)) return true;
        }
    }
    return false;
}

OutcomeModel fold_outcome_mediators(const OutcomeModel& o, const std::map<int, int>& fixed) {
    OutcomeModel r;
    r.beta0 = o.beta0;
    r.beta_x = o.beta_x;
    r.beta_c = o.beta_c;
    r.beta_xc = o.beta_xc;
    r.beta_cc = o.beta_cc;
    auto held = [&](int j) { return fixed.find(j); };

    for (const auto& [j, b] : o.beta_w) {
        if (auto it = held(j); it != fixed.end()) r.beta0 += b * it->second;
        else r.beta_w[j] += b;
    }
    for (const auto& [j, b] : o.beta_xw) {
        if (auto it = held(j); it != fixed.end()) r.beta_x += b * it->second;
        else r.beta_xw[j] += b;
    }
    for (const auto& [key, b] : o.beta_ww) {
        auto a = held(key.first);
        auto c = held(key.second);
        if (a != fixed.end() && c != fixed.end()) r.beta0 += b * a->second * c->second;
        else if (a != fixed.end()) r.beta_w[key.second] += b * a->second;
        else if (c != fixed.end()) r.beta_w[key.first] += b * c->second;
        else r.beta_ww[key] += b;
    }
    for (const auto& [key, b] : o.beta_wc) {
        if (auto it = held(key.first); it != fixed.end()) {
            const auto i = static_cast<std::size_t>(key.second);
            if (r.beta_c.size() <= i) r.beta_c.resize(i + 1, 0.0);
            r.beta_c[i] += b * it->second;
        } else {
            r.beta_wc[key] += b;
        }
    }
    for (const auto& [term, b] : o.beta_higher) {
        BinaryTerm rest{term.x, {}};
        bool vanishes = false;
        for (int m : term.mediators) {
            if (auto it = held(m); it != fixed.end()) {
                vanishes = vanishes || it->second == 0;
            } else {
                rest.mediators.push_back(m);
            }
        }
        if (!vanishes) add_binary_term(r, rest, b);
    }
    return r;
}

MediatorModel fold_mediator_outer(const MediatorModel& m, const std::map<int, int>& fixed) {
    MediatorModel r;
    r.index = m.index;
    r.gamma0 = m.gamma0;
    r.gamma_x = m.gamma_x;
    r.gamma_c = m.gamma_c;
    r.gamma_xc = m.gamma_xc;
    r.gamma_cc = m.gamma_cc;
    auto held = [&](int j) { return fixed.find(j); };

    for (const auto& [j, g] : m.gamma_w) {
        if (auto it = held(j); it != fixed.end()) r.gamma0 += g * it->second;
        else r.gamma_w[j] += g;
    }
    for (const auto& [j, g] : m.gamma_xw) {
        if (auto it = held(j); it != fixed.end()) r.gamma_x += g * it->second;
        else r.gamma_xw[j] += g;
    }
    for (const auto& [key, g] : m.gamma_ww) {
        auto a = held(key.first);
        auto b = held(key.second);
        if (a != fixed.end() && b != fixed.end()) r.gamma0 += g * a->second * b->second;
        else if (a != fixed.end()) r.gamma_w[key.second] += g * a->second;
        else if (b != fixed.end()) r.gamma_w[key.first] += g * b->second;
        else r.gamma_ww[key] += g;
    }
    for (const auto& [key, g] : m.gamma_wc) {
        if (auto it = held(key.first); it != fixed.end()) {
            const auto i = static_cast<std::size_t>(key.second);
            if (r.gamma_c.size() <= i) r.gamma_c.resize(i + 1, 0.0);
            r.gamma_c[i] += g * it->second;
        } else {
            r.gamma_wc[key] += g;
        }
    }
    return r;
}

}  // namespace

std::size_t SystemSpec::position_of(int index) const {
    if (!mediators.empty()) {
        const long pos = static_cast<long>(index) - mediators.front().index;
        if (pos >= 0 && pos < static_cast<long>(mediators.size()) &&
            mediators[static_cast<std::size_t>(pos)].index == index) {
            return static_cast<std::size_t>(pos);
        }
    }
    mismatch("mediator W" + std::to_string(index) + " is not declared");
}

void validate(const SystemSpec& spec) {
    const std::size_t p = spec.num_covariates();
    if (spec.covariates) {
        const auto& block = *spec.covariates;
        if (block.names.size() != block.values.size()) {
            invalid("covariate names and values differ in length");
        }
        std::set<std::string> seen;
        for (const auto& n : block.names) {
            if (!seen.insert(n).second) invalid("duplicate covariate name '" + n + "'");
        }
        for (double v : block.values) {
            if (!std::isfinite(v)) invalid("covariate value is not finite");
        }
    }

    int lo = 0;
    int hi = -1;
    if (!spec.mediators.empty()) {
        lo = spec.mediators.front().index;
        hi = spec.mediators.back().index;
        if (lo < 1) invalid("mediator indices start at 1");
        for (std::size_t i = 0; i < spec.mediators.size(); ++i) {
            if (spec.mediators[i].index != lo + static_cast<int>(i)) {
                invalid("mediator indices must be contiguous and increasing (innermost first)");
            }
        }
    }
    auto declared = [&](int j) { return j >= lo && j <= hi; };

    for (const auto& m : spec.mediators) {
        const std::string tag = "W" + std::to_string(m.index);
        auto outer = [&](int j) { return j > m.index && j <= hi; };
        check_finite(m.gamma0, tag + ".gamma0");
        check_finite(m.gamma_x, tag + ".gamma_x");
        for (const auto* mp : {&m.gamma_w, &m.gamma_xw}) {
            for (const auto& [j, g] : *mp) {
                if (!outer(j)) {
                    invalid(tag + " may only depend on mediators with a larger index, got W" +
                            std::to_string(j));
                }
                check_finite(g, tag);
            }
        }
        for (const auto& [key, g] : m.gamma_ww) {
            if (key.first >= key.second || !outer(key.first) || !outer(key.second)) {
                invalid(tag + ".gamma_ww references an invalid mediator pair");
            }
            check_finite(g, tag + ".gamma_ww");
        }
        check_covariate_vector(m.gamma_c, p, tag + ".gamma_c");
        check_covariate_vector(m.gamma_xc, p, tag + ".gamma_xc");
        check_covariate_pairs(m.gamma_cc, p, tag + ".gamma_cc");
        for (const auto& [key, g] : m.gamma_wc) {
            if (!outer(key.first) || key.second < 0 || key.second >= static_cast<int>(p)) {
                invalid(tag + ".gamma_wc references an invalid mediator or covariate");
            }
            check_finite(g, tag + ".gamma_wc");
        }
    }

    const auto& o = spec.outcome;
    check_finite(o.beta0, "beta0");
    check_finite(o.beta_x, "beta_x");
    for (const auto* mp : {&o.beta_w, &o.beta_xw}) {
        for (const auto& [j, b] : *mp) {
            if (!declared(j)) invalid("outcome references undeclared mediator W" + std::to_string(j));
            check_finite(b, "outcome");
        }
    }
    for (const auto& [key, b] : o.beta_ww) {
        if (key.first >= key.second || !declared(key.first) || !declared(key.second)) {
            invalid("beta_ww references an invalid mediator pair");
        }
        check_finite(b, "beta_ww");
    }
    check_covariate_vector(o.beta_c, p, "beta_c");
    check_covariate_vector(o.beta_xc, p, "beta_xc");
    check_covariate_pairs(o.beta_cc, p, "beta_cc");
    for (const auto& [key, b] : o.beta_wc) {
        if (!declared(key.first) || key.second < 0 || key.second >= static_cast<int>(p)) {
            invalid("beta_wc references an invalid mediator or covariate");
        }
        check_finite(b, "beta_wc");
    }
    for (const auto& [term, b] : o.beta_higher) {
        for (std::size_t i = 0; i < term.mediators.size(); ++i) {
            if (!declared(term.mediators[i]) || (i > 0 && term.mediators[i] <= term.mediators[i - 1])) {
                invalid("higher-order outcome term references invalid mediators");
            }
        }
        check_finite(b, "beta_higher");
    }

    if (spec.confounder_view) {
        check_finite(spec.confounder_view->delta0, "delta0");
        check_finite(spec.confounder_view->delta_w, "delta_w");
    }
}

void require_covariates(const SystemSpec& spec, std::span<const double> c) {
    if (c.size() != spec.num_covariates()) {
        mismatch("expected " + std::to_string(spec.num_covariates()) + " covariate values, got " +
                 std::to_string(c.size()));
    }
}

void require_single_mediator(const SystemSpec& spec, const char* op) {
    if (spec.num_mediators() > 1) {
        mismatch(std::string(op) + " needs a single-mediator spec, got " +
                 std::to_string(spec.num_mediators()) + " mediators");
    }
}

void require_treatment(const SystemSpec& spec, TreatmentKind kind, const char* op) {
    if (spec.treatment != kind) {
        mismatch(std::string(op) + " needs a " +
                 (kind == TreatmentKind::binary ? "binary" : "continuous") + " treatment");
    }
}

double outcome_logit(const SystemSpec& spec, double x, std::span<const int> w,
                     std::span<const double> c) {
    if (w.size() != spec.num_mediators()) {
        mismatch("expected " + std::to_string(spec.num_mediators()) + " mediator values, got " +
                 std::to_string(w.size()));
    }
    require_covariates(spec, c);
    check_binary(w);
    check_treatment_value(spec, x);

    const auto& o = spec.outcome;
    auto wv = [&](int j) { return static_cast<double>(w[spec.position_of(j)]); };

    double eta = o.beta0 + o.beta_x * x;
    for (const auto& [j, b] : o.beta_w) eta += b * wv(j);
    for (const auto& [j, b] : o.beta_xw) eta += b * x * wv(j);
    for (const auto& [key, b] : o.beta_ww) eta += b * wv(key.first) * wv(key.second);
    for (std::size_t i = 0; i < c.size(); ++i) {
        eta += coef_at(o.beta_c, i) * c[i] + coef_at(o.beta_xc, i) * x * c[i];
    }
    for (const auto& [key, b] : o.beta_cc) eta += b * c[key.first] * c[key.second];
    for (const auto& [key, b] : o.beta_wc) eta += b * wv(key.first) * c[key.second];
    for (const auto& [term, b] : o.beta_higher) {
        double prod = term.x ? x : 1.0;
        for (int m : term.mediators) prod *= wv(m);
        eta += b * prod;
    }
    return eta;
}

double mediator_logit(const SystemSpec& spec, int index, double x, std::span<const int> w_outer,
                      std::span<const double> c) {
    const std::size_t pos = spec.position_of(index);
    const std::size_t n_outer = spec.num_mediators() - pos - 1;
    if (w_outer.size() != n_outer) {
        mismatch("W" + std::to_string(index) + " needs " + std::to_string(n_outer) +
                 " outer mediator values, got " + std::to_string(w_outer.size()));
    }
    require_covariates(spec, c);
    check_binary(w_outer);
    check_treatment_value(spec, x);

    const auto& m = spec.mediators[pos];
    auto wv = [&](int j) {
        return static_cast<double>(w_outer[spec.position_of(j) - pos - 1]);
    };

    double eta = m.gamma0 + m.gamma_x * x;
    for (const auto& [j, g] : m.gamma_w) eta += g * wv(j);
    for (const auto& [j, g] : m.gamma_xw) eta += g * x * wv(j);
    for (const auto& [key, g] : m.gamma_ww) eta += g * wv(key.first) * wv(key.second);
    for (std::size_t i = 0; i < c.size(); ++i) {
        eta += coef_at(m.gamma_c, i) * c[i] + coef_at(m.gamma_xc, i) * x * c[i];
    }
    for (const auto& [key, g] : m.gamma_cc) eta += g * c[key.first] * c[key.second];
    for (const auto& [key, g] : m.gamma_wc) eta += g * wv(key.first) * c[key.second];
    return eta;
}

double InnerPredictors::g(int y) const {
    if (decoupled) return mediator;
    return y * (eta1 - eta0) + softplus(eta0) - softplus(eta1) + mediator;
}

InnerPredictors inner_predictors(const SystemSpec& spec, double x, std::span<const int> w_outer,
                                 std::span<const double> c) {
    if (spec.mediators.empty()) mismatch("spec has no mediator");
    const int inner = spec.mediators.front().index;

    std::vector<int> w(spec.num_mediators(), 0);
    if (w_outer.size() + 1 != w.size()) {
        mismatch("expected " + std::to_string(w.size() - 1) + " outer mediator values, got " +
                 std::to_string(w_outer.size()));
    }
    std::copy(w_outer.begin(), w_outer.end(), w.begin() + 1);

    InnerPredictors r;
    r.eta0 = outcome_logit(spec, x, w, c);
    r.decoupled = !depends_on_mediator(spec.outcome, inner);
    if (r.decoupled) {
        r.eta1 = r.eta0;
    } else {
        w[0] = 1;
        r.eta1 = outcome_logit(spec, x, w, c);
    }
    r.mediator = mediator_logit(spec, inner, x, w_outer, c);
    return r;
}

double g_y(const SystemSpec& spec, int y, double x, std::span<const double> c) {
    if (spec.num_mediators() != 1) {
        mismatch("g_y needs exactly one unreduced mediator, got " +
                 std::to_string(spec.num_mediators()));
    }
    if (y != 0 && y != 1) mismatch("y must be 0 or 1");
    return inner_predictors(spec, x, {}, c).g(y);
}

ConfounderCheck check_confounder_consistency(const SystemSpec& spec) {
    ConfounderCheck r;
    if (!spec.confounder_view) {
        r.note = "no confounder view declared";
        return r;
    }
    r.delta_w = spec.confounder_view->delta_w;
    if (spec.num_mediators() != 1 || spec.treatment != TreatmentKind::binary) {
        r.note = "confounder view needs a binary treatment and exactly one mediator";
        return r;
    }
    r.applicable = true;
    // Slope of the mediator logit at the covariate point, so that treatment by
    // covariate terms are part of the comparison.
    const auto c = spec.covariate_point();
    const int index = spec.mediators.front().index;
    r.gamma_x = mediator_logit(spec, index, 1.0, {}, c) - mediator_logit(spec, index, 0.0, {}, c);
    r.consistent = std::abs(r.delta_w - r.gamma_x) <= confounder_tolerance;
    r.note = r.consistent ? "delta_w matches gamma_x" : "delta_w differs from gamma_x";
    return r;
}

bool outcome_depends_on(const OutcomeModel& model, int index) { return depends_on_mediator(model, index); }

void add_binary_term(OutcomeModel& model, const BinaryTerm& term, double value) {
    const auto& ms = term.mediators;
    if (!term.x && ms.empty()) {
        model.beta0 += value;
    } else if (term.x && ms.empty()) {
        model.beta_x += value;
    } else if (!term.x && ms.size() == 1) {
        model.beta_w[ms[0]] += value;
    } else if (term.x && ms.size() == 1) {
        model.beta_xw[ms[0]] += value;
    } else if (!term.x && ms.size() == 2) {
        model.beta_ww[{ms[0], ms[1]}] += value;
    } else {
        model.beta_higher[term] += value;
    }
}

OutcomeModel fold_covariates(const OutcomeModel& model, std::span<const double> c) {
    OutcomeModel r = model;
    r.beta_c.clear();
    r.beta_xc.clear();
    r.beta_cc.clear();
    r.beta_wc.clear();
    for (std::size_t i = 0; i < c.size(); ++i) {
        r.beta0 += coef_at(model.beta_c, i) * c[i];
        r.beta_x += coef_at(model.beta_xc, i) * c[i];
    }
    for (const auto& [key, b] : model.beta_cc) r.beta0 += b * c[key.first] * c[key.second];
    for (const auto& [key, b] : model.beta_wc) r.beta_w[key.first] += b * c[key.second];
    return r;
}

SystemSpec condition_on_outer(const SystemSpec& spec, std::span<const int> w_outer) {
    if (spec.mediators.empty()) mismatch("spec has no mediator");
    if (w_outer.size() + 1 != spec.num_mediators()) {
        mismatch("expected " + std::to_string(spec.num_mediators() - 1) +
                 " outer mediator values, got " + std::to_string(w_outer.size()));
    }
    check_binary(w_outer);

    std::map<int, int> fixed;
    for (std::size_t i = 0; i < w_outer.size(); ++i) fixed[spec.mediators[i + 1].index] = w_outer[i];

    SystemSpec view;
    view.treatment = spec.treatment;
    view.covariates = spec.covariates;
    view.outcome = fold_outcome_mediators(spec.outcome, fixed);
    view.mediators.push_back(fold_mediator_outer(spec.mediators.front(), fixed));
    const std::size_t p = spec.num_covariates();
    if (!view.outcome.beta_c.empty()) view.outcome.beta_c.resize(p, 0.0);
    if (!view.mediators.front().gamma_c.empty()) view.mediators.front().gamma_c.resize(p, 0.0);
    return view;
}

}  // namespace logitpath
