#include "logitpath/chain.hpp"

#include <cmath>

#include "logitpath/binary.hpp"
#include "logitpath/error.hpp"
#include "logitpath/logistic.hpp"

namespace logitpath {

namespace {

// logit P(Y=1 | ...) with the innermost mediator summed out:
// eta_0 - log[P(W=0|Y=1) / P(W=0|Y=0)].
double summed_inner_logit(const InnerPredictors& p) {
    if (p.decoupled) return p.eta0;
    return p.eta0 + softplus(p.g(1)) - softplus(p.g(0));
}

void drop_mediator(OutcomeModel& o, int index) {
    o.beta_w.erase(index);
    o.beta_xw.erase(index);
    std::erase_if(o.beta_ww, [&](const auto& e) { return e.first.first == index || e.first.second == index; });
    std::erase_if(o.beta_wc, [&](const auto& e) { return e.first.first == index; });
    std::erase_if(o.beta_higher, [&](const auto& e) {
        for (int m : e.first.mediators) {
            if (m == index) return true;
        }
        return false;
    });
}

void check_ancestral(const SystemSpec& spec, const std::map<int, int>& keep) {
    for (const auto& [index, value] : keep) {
        spec.position_of(index);
        if (value != 0 && value != 1) {
            throw Error(ErrorKind::dimension, "held mediator values must be 0 or 1");
        }
    }
    if (keep.empty()) return;
    const int hi = spec.mediators.back().index;
    for (int j = keep.begin()->first; j <= hi; ++j) {
        if (!keep.contains(j)) {
            throw Error(ErrorKind::non_ancestral,
                        "kept mediators must form an ancestral set: W" + std::to_string(keep.begin()->first) +
                            " is kept but its parent W" + std::to_string(j) +
                            " is marginalized (non-ancestral sets need a summary graph)");
        }
    }
}

}  // namespace

std::pair<SystemSpec, MarginalizationStep> reduce_inner_mediator(const SystemSpec& spec) {
    require_treatment(spec, TreatmentKind::binary, "reduce_inner_mediator");
    if (spec.num_mediators() < 2) {
        throw Error(ErrorKind::dimension, "reduce_inner_mediator needs at least two mediators");
    }
    const auto c = spec.covariate_point();
    const int inner = spec.mediators.front().index;

    MarginalizationStep step;
    step.removed_index = inner;

    if (!outcome_depends_on(spec.outcome, inner)) {
        step.starred = fold_covariates(spec.outcome, c);
        drop_mediator(step.starred, inner);
    } else {
        // Exact reduced logit at every configuration of (x, w_outer), then
        // Moebius inversion to the saturated coefficients.
        const std::size_t n_outer = spec.num_mediators() - 1;
        const std::size_t n = std::size_t{1} << (n_outer + 1);
        std::vector<double> coef(n);
        std::vector<int> w_outer(n_outer);
        for (std::size_t mask = 0; mask < n; ++mask) {
            for (std::size_t i = 0; i < n_outer; ++i) w_outer[i] = static_cast<int>((mask >> (i + 1)) & 1u);
            const double x = static_cast<double>(mask & 1u);
            coef[mask] = summed_inner_logit(inner_predictors(spec, x, w_outer, c));
        }
        for (std::size_t bit = 1; bit < n; bit <<= 1) {
            for (std::size_t mask = 0; mask < n; ++mask) {
                if (mask & bit) coef[mask] -= coef[mask ^ bit];
            }
        }
        for (std::size_t mask = 0; mask < n; ++mask) {
            BinaryTerm term{(mask & 1u) != 0, {}};
            for (std::size_t i = 0; i < n_outer; ++i) {
                if ((mask >> (i + 1)) & 1u) term.mediators.push_back(spec.mediators[i + 1].index);
            }
            if (term.x + term.mediators.size() > 2 && coef[mask] == 0.0) continue;
            add_binary_term(step.starred, term, coef[mask]);
        }
    }

    SystemSpec reduced;
    reduced.treatment = spec.treatment;
    reduced.covariates = spec.covariates;
    reduced.mediators.assign(spec.mediators.begin() + 1, spec.mediators.end());
    reduced.outcome = step.starred;
    return {std::move(reduced), std::move(step)};
}

DecompositionReport conditional_and_marginal_mix(const SystemSpec& spec, const std::map<int, int>& keep,
                                                 std::span<const double> c) {
    require_treatment(spec, TreatmentKind::binary, "conditional_and_marginal_mix");
    require_covariates(spec, c);
    check_ancestral(spec, keep);

    SystemSpec cur = spec;
    cur.confounder_view.reset();
    if (cur.covariates) cur.covariates->values.assign(c.begin(), c.end());

    auto reference = [&](int j) {
        auto it = keep.find(j);
        return it == keep.end() ? 1 : it->second;
    };

    DecompositionReport report;
    report.held = keep;

    const auto& o = spec.outcome;
    report.components.push_back({"beta_x", o.beta_x});
    for (const auto& [j, b] : o.beta_xw) {
        report.components.push_back({"beta_xw" + std::to_string(j), b * reference(j)});
    }
    if (spec.num_covariates() > 0) {
        double s = 0.0;
        for (std::size_t i = 0; i < c.size() && i < o.beta_xc.size(); ++i) s += o.beta_xc[i] * c[i];
        report.components.push_back({"covariate_treatment", s});
    }
    {
        double s = 0.0;
        bool any = false;
        for (const auto& [term, b] : o.beta_higher) {
            if (!term.x) continue;
            any = true;
            int prod = 1;
            for (int m : term.mediators) prod *= reference(m);
            s += b * prod;
        }
        if (any) report.components.push_back({"higher_order_x", s});
    }

    const int first_kept = keep.empty() ? (spec.mediators.empty() ? 0 : spec.mediators.back().index + 1)
                                        : keep.begin()->first;
    bool final_set = false;
    while (!cur.mediators.empty() && cur.mediators.front().index < first_kept) {
        const int index = cur.mediators.front().index;
        std::vector<int> w_outer;
        for (std::size_t i = 1; i < cur.mediators.size(); ++i) w_outer.push_back(reference(cur.mediators[i].index));

        const double contrast = log_rr_w_given(cur, 0.0, w_outer, c) - log_rr_w_given(cur, 1.0, w_outer, c);
        report.components.push_back({"rr_contrast_w" + std::to_string(index), contrast});

        if (index + 1 == first_kept) {
            report.total = marginal_log_cpr_given(cur, w_outer, c).total;
            final_set = true;
            break;
        }
        auto [next, step] = reduce_inner_mediator(cur);
        report.steps.push_back(std::move(step));
        cur = std::move(next);
    }

    double sum = 0.0;
    for (const auto& comp : report.components) sum += comp.value;
    if (!final_set) report.total = sum;
    report.components_residual = std::abs(sum - report.total);
    if (spec.num_mediators() == 2 && keep.empty()) report.closed_form_total = sum;
    return report;
}

DecompositionReport total_log_cpr(const SystemSpec& spec) {
    return conditional_and_marginal_mix(spec, {}, spec.covariate_point());
}

double exact_reduced_logit(const SystemSpec& spec, double x, int w2) {
    if (spec.num_mediators() != 2) {
        throw Error(ErrorKind::taylor_unsupported, "reduced logit needs exactly two mediators");
    }
    const auto c = spec.covariate_point();
    const int outer[1] = {w2};
    const auto view = condition_on_outer(spec, outer);
    return summed_inner_logit(inner_predictors(view, x, {}, c));
}

double exact_reduced_slope(const SystemSpec& spec, double x, int w2) {
    if (spec.num_mediators() != 2) {
        throw Error(ErrorKind::taylor_unsupported, "reduced slope needs exactly two mediators");
    }
    const auto c = spec.covariate_point();
    const int outer[1] = {w2};
    return marginal_slope(condition_on_outer(spec, outer), x, c).total;
}

std::pair<SystemSpec, TaylorModel> taylor_reduce(const SystemSpec& spec, double x0) {
    require_treatment(spec, TreatmentKind::continuous, "taylor_reduce");
    if (spec.num_mediators() != 2) {
        throw Error(ErrorKind::taylor_unsupported,
                    "linearization is supported for exactly two mediators, got " +
                        std::to_string(spec.num_mediators()));
    }
    if (!std::isfinite(x0)) throw Error(ErrorKind::dimension, "expansion point must be finite");

    const double l0 = exact_reduced_logit(spec, x0, 0);
    const double l1 = exact_reduced_logit(spec, x0, 1);
    const double b0 = exact_reduced_slope(spec, x0, 0);
    const double b1 = exact_reduced_slope(spec, x0, 1);

    TaylorModel t;
    t.outer_index = spec.mediators[1].index;
    t.x0 = x0;
    t.tilde0 = l0 - b0 * x0;
    t.tilde_x = b0;
    // Anchored so that the linear form reproduces the exact logit at x0 for w2 = 1.
    t.tilde_w2 = l1 - l0 - x0 * (b1 - b0);
    t.tilde_xw2 = b1 - b0;

    SystemSpec reduced;
    reduced.treatment = spec.treatment;
    reduced.covariates = spec.covariates;
    reduced.mediators.push_back(spec.mediators[1]);
    reduced.outcome.beta0 = t.tilde0;
    reduced.outcome.beta_x = t.tilde_x;
    reduced.outcome.beta_w[t.outer_index] = t.tilde_w2;
    reduced.outcome.beta_xw[t.outer_index] = t.tilde_xw2;
    return {std::move(reduced), t};
}

}  // namespace logitpath
