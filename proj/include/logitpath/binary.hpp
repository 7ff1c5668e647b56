#pragma once

// Binary treatment: the marginal log cross-product ratio of the (Y, X) table
// expressed through conditional coefficients and relative risks of the
// mediator across outcome levels.

#include <span>

#include "logitpath/model.hpp"

namespace logitpath {

struct CprDecomposition {
    double beta_x = 0.0;
    double beta_xw = 0.0;
    // sum beta_xc c, plus X-interactions with any outer mediators held fixed
    double covariate_treatment = 0.0;
    double log_rr_at_x0 = 0.0;  // log RR_{W|Y, X=0}
    double log_rr_at_x1 = 0.0;  // log RR_{W|Y, X=1}
    double total = 0.0;
};

// log[P(W=1|Y=1,X=x,C=c) / P(W=1|Y=0,X=x,C=c)] for a single-mediator spec.
double log_rr_w(const SystemSpec& spec, double x, std::span<const double> c);

// Same, for the innermost mediator with the outer ones held at `w_outer`.
double log_rr_w_given(const SystemSpec& spec, double x, std::span<const int> w_outer,
                      std::span<const double> c);

CprDecomposition marginal_log_cpr(const SystemSpec& spec, std::span<const double> c);

// log cpr(Y, X | W_outer = w_outer, C = c) with the innermost mediator summed
// out; the held mediators play the role of covariates.
CprDecomposition marginal_log_cpr_given(const SystemSpec& spec, std::span<const int> w_outer,
                                        std::span<const double> c);

inline constexpr double identity_tolerance = 1e-9;

struct InteractionIdentity {
    double beta_xw = 0.0;
    double from_relative_risks = 0.0;  // four-term RR combination
    double residual = 0.0;
    bool holds = false;
};

// beta_xw = logRR_W(1) - logRR_W(0) - logRR_Wbar(1) + logRR_Wbar(0), Wbar = 1 - W,
// evaluated at the spec's covariate point.
InteractionIdentity beta_xw_identity_check(const SystemSpec& spec);

}  // namespace logitpath
