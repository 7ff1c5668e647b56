#include "logitpath/decomp.hpp"

#include <algorithm>
#include <cmath>

#include "logitpath/error.hpp"
#include "logitpath/logistic.hpp"

namespace logitpath {

namespace {

// x-slopes of the (linear in x) predictors of a single-mediator spec.
struct TreatmentSlopes {
    double outcome = 0.0;      // d eta_0 / dx, covariate part excluded
    double covariate = 0.0;    // sum beta_xc c
    double interaction = 0.0;  // d (eta_1 - eta_0) / dx
    double mediator = 0.0;     // gamma_x + sum gamma_xc c
};

TreatmentSlopes treatment_slopes(const SystemSpec& spec, std::span<const double> c) {
    const auto& o = spec.outcome;
    TreatmentSlopes s;
    s.outcome = o.beta_x;
    for (std::size_t i = 0; i < c.size() && i < o.beta_xc.size(); ++i) s.covariate += o.beta_xc[i] * c[i];
    if (spec.mediators.empty()) return s;

    const auto& m = spec.mediators.front();
    if (auto it = o.beta_xw.find(m.index); it != o.beta_xw.end()) s.interaction = it->second;
    for (const auto& [term, b] : o.beta_higher) {
        if (!term.x) continue;
        if (term.mediators.empty()) s.outcome += b;
        else if (term.mediators.size() == 1 && term.mediators[0] == m.index) s.interaction += b;
    }
    s.mediator = m.gamma_x;
    for (std::size_t i = 0; i < c.size() && i < m.gamma_xc.size(); ++i) s.mediator += m.gamma_xc[i] * c[i];
    return s;
}

void require_one_mediator(const SystemSpec& spec, const char* op) {
    if (spec.num_mediators() != 1) {
        throw Error(ErrorKind::dimension, std::string(op) + " needs exactly one mediator, got " +
                                              std::to_string(spec.num_mediators()));
    }
}

void require_nonempty(const Interval& v, const char* name) {
    if (!(v.lower <= v.upper) || !std::isfinite(v.lower) || !std::isfinite(v.upper)) {
        throw Error(ErrorKind::dimension, std::string("empty or non-finite interval for ") + name);
    }
}

}  // namespace

double delta_y(const SystemSpec& spec, double x, std::span<const double> c) {
    require_one_mediator(spec, "delta_y");
    const auto p = inner_predictors(spec, x, {}, c);
    if (p.decoupled) return 0.0;
    return logistic(p.eta1) - logistic(p.eta0);
}

double delta_w(const SystemSpec& spec, double x, std::span<const double> c) {
    require_one_mediator(spec, "delta_w");
    const auto p = inner_predictors(spec, x, {}, c);
    if (p.decoupled) return 0.0;
    return logistic(p.g(1)) - logistic(p.g(0));
}

double gamma_of_x(const SystemSpec& spec, double x, std::span<const double> c) {
    require_one_mediator(spec, "gamma_of_x");
    const auto p = inner_predictors(spec, x, {}, c);
    const auto s = treatment_slopes(spec, c);
    if (p.decoupled) return s.mediator;
    const double dy = logistic(p.eta1) - logistic(p.eta0);
    return s.mediator - (s.outcome + s.covariate) * dy - s.interaction * logistic(p.eta1);
}

SlopeDecomposition marginal_slope(const SystemSpec& spec, double x, std::span<const double> c) {
    require_treatment(spec, TreatmentKind::continuous, "marginal_slope");
    require_single_mediator(spec, "marginal_slope");
    require_covariates(spec, c);

    SlopeDecomposition d;
    d.at_x = x;
    d.at_c.assign(c.begin(), c.end());
    const auto s = treatment_slopes(spec, c);

    if (spec.mediators.empty()) {
        d.direct = s.outcome;
        d.covariate_treatment = s.covariate;
        d.total = d.direct + d.covariate_treatment;
        return d;
    }

    const auto p = inner_predictors(spec, x, {}, c);
    const double p_w1_y1 = logistic(p.g(1));
    const double p_y1_w1 = logistic(p.eta1);
    if (!p.decoupled) {
        d.delta_y = p_y1_w1 - logistic(p.eta0);
        d.delta_w = p_w1_y1 - logistic(p.g(0));
    }
    d.attenuation = 1.0 - d.delta_y * d.delta_w;
    d.weighted_mean = p_w1_y1 - d.delta_w * p_y1_w1;

    d.direct = s.outcome * d.attenuation;
    d.covariate_treatment = s.covariate * d.attenuation;
    d.interaction = s.interaction * d.weighted_mean;
    d.indirect = s.mediator * d.delta_w;
    d.total = d.direct + d.interaction + d.indirect + d.covariate_treatment;
    return d;
}

EffectBounds slope_bounds(Interval beta_x, Interval beta_xw, Interval gamma_x) {
    require_nonempty(beta_x, "beta_x");
    require_nonempty(beta_xw, "beta_xw");
    require_nonempty(gamma_x, "gamma_x");

    // coefficient times a factor ranging over [0, 1]
    auto unit_scaled = [](Interval a) { return Interval{std::min(a.lower, 0.0), std::max(a.upper, 0.0)}; };
    // coefficient times a factor ranging over [-1, 1]
    auto sign_scaled = [](Interval a) {
        const double m = std::max(std::abs(a.lower), std::abs(a.upper));
        return Interval{-m, m};
    };

    const Interval t1 = unit_scaled(beta_x);
    const Interval t2 = unit_scaled(beta_xw);
    const Interval t3 = sign_scaled(gamma_x);

    EffectBounds b;
    b.lower = t1.lower + t2.lower + t3.lower;
    b.upper = t1.upper + t2.upper + t3.upper;
    auto tag = [](const char* name, const Interval& v) {
        return std::string(name) + (v.is_point() ? "=point" : "=interval");
    };
    b.assumptions = {tag("beta_x", beta_x), tag("beta_xw", beta_xw), tag("gamma_x", gamma_x)};
    return b;
}

}  // namespace logitpath
