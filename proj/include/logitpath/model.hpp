#pragma once

// Conditional logistic models over a chain of binary mediators.
//
// Mediators are numbered from the inside out: W_1 is the mediator closest to
// the outcome, W_k the outermost. W_j may depend on the treatment X, on the
// covariates C, and on any W_l with l > j. The outcome Y depends on all of
// them. Every coefficient map keyed by a mediator uses its ordinal index, so
// a model stays valid when inner mediators are marginalized away.

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace logitpath {

enum class TreatmentKind { continuous, binary };

// (lower, upper) with lower < upper.
using IndexPair = std::pair<int, int>;

// Product of binary arguments: optionally X times a set of mediators.
// Only produced by exact marginalization, which yields saturated models.
struct BinaryTerm {
    bool x = false;
    std::vector<int> mediators;  // ascending

    auto operator<=>(const BinaryTerm&) const = default;
};

struct OutcomeModel {
    double beta0 = 0.0;
    double beta_x = 0.0;
    std::map<int, double> beta_w;
    std::map<int, double> beta_xw;
    std::map<IndexPair, double> beta_ww;
    // Covariate coefficients are positional; an empty vector means all zero.
    std::vector<double> beta_c;
    std::vector<double> beta_xc;
    std::map<IndexPair, double> beta_cc;  // (covariate, covariate)
    std::map<IndexPair, double> beta_wc;  // (mediator index, covariate)
    std::map<BinaryTerm, double> beta_higher;
};

struct MediatorModel {
    int index = 1;
    double gamma0 = 0.0;
    double gamma_x = 0.0;
    std::map<int, double> gamma_w;   // outer mediator index -> coefficient
    std::map<int, double> gamma_xw;
    std::map<IndexPair, double> gamma_ww;
    std::vector<double> gamma_c;
    std::vector<double> gamma_xc;
    std::map<IndexPair, double> gamma_cc;
    std::map<IndexPair, double> gamma_wc;  // (outer mediator index, covariate)
};

// Reversed-arrow view of a single mediator: logit P(X=1 | W=w) = delta0 + delta_w w.
struct ConfounderModel {
    double delta0 = 0.0;
    double delta_w = 0.0;
};

struct CovariateBlock {
    std::vector<std::string> names;
    std::vector<double> values;
};

struct SystemSpec {
    TreatmentKind treatment = TreatmentKind::continuous;
    std::vector<MediatorModel> mediators;  // innermost first, contiguous indices
    OutcomeModel outcome;
    std::optional<CovariateBlock> covariates;
    std::optional<ConfounderModel> confounder_view;

    std::size_t num_mediators() const { return mediators.size(); }
    std::size_t num_covariates() const { return covariates ? covariates->names.size() : 0; }
    // The covariate point stored with the spec (empty when p = 0).
    std::vector<double> covariate_point() const {
        return covariates ? covariates->values : std::vector<double>{};
    }
    // Position of mediator `index` in `mediators`; throws if undeclared.
    std::size_t position_of(int index) const;
    const MediatorModel& mediator(int index) const { return mediators[position_of(index)]; }
};

// Throws Error(parse) on structural violations: non-finite coefficients,
// references to undeclared mediators or covariates, non-contiguous indices,
// a mediator depending on an inner one, malformed pair keys.
void validate(const SystemSpec& spec);

// Linear predictor of Y. `w` is aligned with spec.mediators (innermost first).
double outcome_logit(const SystemSpec& spec, double x, std::span<const int> w,
                     std::span<const double> c);

// Linear predictor of mediator `index`. `w_outer` holds the values of the
// mediators with larger index, in increasing index order.
double mediator_logit(const SystemSpec& spec, int index, double x,
                      std::span<const int> w_outer, std::span<const double> c);

// Predictors that enter every single-mediator closed form: the outcome
// predictor with the innermost mediator at 0 and 1, and the innermost
// mediator's own predictor. Outer mediators are held at `w_outer`.
struct InnerPredictors {
    double eta0 = 0.0;
    double eta1 = 0.0;
    double mediator = 0.0;
    bool decoupled = false;  // eta1 == eta0 identically (no W-Y coupling)

    // logit P(W = 1 | Y = y, X = x, ...)
    double g(int y) const;
};

InnerPredictors inner_predictors(const SystemSpec& spec, double x, std::span<const int> w_outer,
                                 std::span<const double> c);

// logit P(W=1 | Y=y, X=x, C=c) for a single-mediator spec, in closed form.
double g_y(const SystemSpec& spec, int y, double x, std::span<const double> c);

struct ConfounderCheck {
    bool applicable = false;
    bool consistent = false;
    double delta_w = 0.0;
    double gamma_x = 0.0;
    std::string note;
};

inline constexpr double confounder_tolerance = 1e-12;

ConfounderCheck check_confounder_consistency(const SystemSpec& spec);

// True when some nonzero outcome term involves mediator `index`.
bool outcome_depends_on(const OutcomeModel& model, int index);

// Routes a product term to the matching named coefficient (or beta_higher).
void add_binary_term(OutcomeModel& model, const BinaryTerm& term, double value);

// Outcome model evaluated at covariate point `c`: covariate terms are folded
// into intercept, treatment and mediator coefficients; the result has none.
OutcomeModel fold_covariates(const OutcomeModel& model, std::span<const double> c);

// Single-mediator view of a chain with every mediator except the innermost
// held at a fixed value (`w_outer`, increasing index order). Exact: the
// view's joint law of (W_1, Y) given X, C equals the conditional law given
// the outer values.
SystemSpec condition_on_outer(const SystemSpec& spec, std::span<const int> w_outer);

// Throws Error(dimension) unless spec has at most one mediator.
void require_single_mediator(const SystemSpec& spec, const char* op);
void require_treatment(const SystemSpec& spec, TreatmentKind kind, const char* op);
void require_covariates(const SystemSpec& spec, std::span<const double> c);

}  // namespace logitpath
