#include "logitpath/binary.hpp"

#include <cmath>

#include "logitpath/error.hpp"
#include "logitpath/logistic.hpp"

namespace logitpath {

namespace {

// Coefficient of X in the outcome predictor with the innermost mediator at 1
// and the outer mediators held, split into named parts.
struct TreatmentContrast {
    double beta_x = 0.0;
    double beta_xw = 0.0;
    double other = 0.0;
};

TreatmentContrast treatment_contrast(const SystemSpec& spec, std::span<const int> w_outer,
                                     std::span<const double> c) {
    const auto& o = spec.outcome;
    TreatmentContrast t;
    t.beta_x = o.beta_x;
    for (std::size_t i = 0; i < c.size() && i < o.beta_xc.size(); ++i) t.other += o.beta_xc[i] * c[i];
    if (spec.mediators.empty()) {
        for (const auto& [term, b] : o.beta_higher) {
            if (term.x && term.mediators.empty()) t.other += b;
        }
        return t;
    }

    const int inner = spec.mediators.front().index;
    auto value = [&](int j) {
        return j == inner ? 1 : w_outer[spec.position_of(j) - 1];
    };
    for (const auto& [j, b] : o.beta_xw) {
        if (j == inner) t.beta_xw += b;
        else t.other += b * value(j);
    }
    for (const auto& [term, b] : o.beta_higher) {
        if (!term.x) continue;
        int prod = 1;
        for (int m : term.mediators) prod *= value(m);
        t.other += b * prod;
    }
    return t;
}

}  // namespace

double log_rr_w_given(const SystemSpec& spec, double x, std::span<const int> w_outer,
                      std::span<const double> c) {
    const auto p = inner_predictors(spec, x, w_outer, c);
    if (p.decoupled) return 0.0;
    return log_logistic(p.g(1)) - log_logistic(p.g(0));
}

double log_rr_w(const SystemSpec& spec, double x, std::span<const double> c) {
    require_treatment(spec, TreatmentKind::binary, "log_rr_w");
    if (spec.num_mediators() != 1) {
        throw Error(ErrorKind::dimension, "log_rr_w needs exactly one mediator");
    }
    return log_rr_w_given(spec, x, {}, c);
}

CprDecomposition marginal_log_cpr_given(const SystemSpec& spec, std::span<const int> w_outer,
                                        std::span<const double> c) {
    require_treatment(spec, TreatmentKind::binary, "marginal_log_cpr");
    require_covariates(spec, c);
    const std::size_t n_outer = spec.mediators.empty() ? 0 : spec.num_mediators() - 1;
    if (w_outer.size() != n_outer) {
        throw Error(ErrorKind::dimension, "expected " + std::to_string(n_outer) +
                                              " held mediator values, got " +
                                              std::to_string(w_outer.size()));
    }

    const auto t = treatment_contrast(spec, w_outer, c);
    CprDecomposition d;
    d.beta_x = t.beta_x;
    d.beta_xw = t.beta_xw;
    d.covariate_treatment = t.other;
    if (!spec.mediators.empty()) {
        d.log_rr_at_x0 = log_rr_w_given(spec, 0.0, w_outer, c);
        d.log_rr_at_x1 = log_rr_w_given(spec, 1.0, w_outer, c);
    }
    d.total = d.beta_x + d.covariate_treatment + d.beta_xw + d.log_rr_at_x0 - d.log_rr_at_x1;
    return d;
}

CprDecomposition marginal_log_cpr(const SystemSpec& spec, std::span<const double> c) {
    require_single_mediator(spec, "marginal_log_cpr");
    return marginal_log_cpr_given(spec, {}, c);
}

InteractionIdentity beta_xw_identity_check(const SystemSpec& spec) {
    require_treatment(spec, TreatmentKind::binary, "beta_xw_identity_check");
    if (spec.num_mediators() != 1) {
        throw Error(ErrorKind::dimension, "beta_xw_identity_check needs exactly one mediator");
    }
    const auto c = spec.covariate_point();

    double rr_w[2];
    double rr_wbar[2];
    for (int x = 0; x <= 1; ++x) {
        const auto p = inner_predictors(spec, x, {}, c);
        const double g1 = p.g(1);
        const double g0 = p.g(0);
        rr_w[x] = log_logistic(g1) - log_logistic(g0);
        rr_wbar[x] = log_logistic(-g1) - log_logistic(-g0);
    }

    InteractionIdentity r;
    r.beta_xw = treatment_contrast(spec, {}, c).beta_xw;
    r.from_relative_risks = rr_w[1] - rr_w[0] - rr_wbar[1] + rr_wbar[0];
    r.residual = std::abs(r.from_relative_risks - r.beta_xw);
    r.holds = r.residual <= identity_tolerance;
    return r;
}

}  // namespace logitpath
