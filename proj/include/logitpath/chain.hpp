#pragma once

// Chains of k binary mediators: exact marginalization of the innermost
// mediator (binary treatment), effect accounting across all mediators, mixed
// conditioning on an ancestral set, and first-order linearization for a
// continuous treatment with two mediators.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "logitpath/decomp.hpp"
#include "logitpath/model.hpp"

namespace logitpath {

struct MarginalizationStep {
    int removed_index = 0;
    // Outcome coefficients over the remaining mediators. Saturated in the
    // binary arguments, so terms beyond second order land in beta_higher.
    OutcomeModel starred;
    bool exact = true;
};

struct EffectComponent {
    std::string label;
    double value = 0.0;
};

struct DecompositionReport {
    // Direct and interaction terms of the outcome model at the reference
    // configuration (marginalized mediators at 1, kept ones at their held
    // value), then one relative-risk contrast per marginalized mediator.
    std::vector<EffectComponent> components;
    double total = 0.0;
    std::vector<MarginalizationStep> steps;
    std::map<int, int> held;  // kept mediators -> value
    bool exact = true;
    // Two-mediator closed form, evaluated when k = 2 and nothing is held.
    std::optional<double> closed_form_total;
    // |sum(components) - total|
    double components_residual = 0.0;
};

// Removes mediator W_j with the smallest index. Binary treatment, k >= 2.
// Covariates are folded into the reduced outcome at the spec's covariate
// point; every outer mediator model is copied unchanged.
std::pair<SystemSpec, MarginalizationStep> reduce_inner_mediator(const SystemSpec& spec);

// log cpr(Y, X | C=c) after summing out every mediator, innermost first.
DecompositionReport total_log_cpr(const SystemSpec& spec);

// log cpr(Y, X | W_S = w_S, C = c) where S = keys of `keep`. S must be an
// ancestral set of the chain, i.e. closed upward in the mediator index.
DecompositionReport conditional_and_marginal_mix(const SystemSpec& spec,
                                                 const std::map<int, int>& keep,
                                                 std::span<const double> c);

struct TaylorModel {
    int outer_index = 2;
    double x0 = 0.0;
    double tilde0 = 0.0;
    double tilde_x = 0.0;
    double tilde_w2 = 0.0;
    double tilde_xw2 = 0.0;

    double logit(double x, int w2) const { return tilde0 + tilde_x * x + (tilde_w2 + tilde_xw2 * x) * w2; }
};

// logit P(Y=1 | X=x, W_outer=w2, C=c) of a continuous two-mediator chain,
// summing the inner mediator exactly. Uses the spec's covariate point.
double exact_reduced_logit(const SystemSpec& spec, double x, int w2);
// x-derivative of exact_reduced_logit, in closed form.
double exact_reduced_slope(const SystemSpec& spec, double x, int w2);

// Linearizes the reduced outcome logit around x0 (continuous treatment, k = 2)
// and returns a single-mediator spec carrying the linear coefficients; apply
// marginal_slope to it for the approximate marginal effect near x0.
std::pair<SystemSpec, TaylorModel> taylor_reduce(const SystemSpec& spec, double x0);

}  // namespace logitpath
