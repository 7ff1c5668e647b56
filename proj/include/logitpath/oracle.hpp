#pragma once

// Brute-force ground truth. Everything here is computed by enumerating the
// joint law of (Y, W_1, ..., W_k) given (X, C) implied by the DAG factorization
// P(Y | X, W, C) * prod_j P(W_j | X, W_{>j}, C); no closed form is consulted.

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "logitpath/model.hpp"

namespace logitpath::oracle {

inline constexpr std::size_t max_mediators = 20;
inline constexpr double default_step = 1e-5;

// Cell index bit 0 is Y, bit j (1-based) is the j-th mediator of the spec
// in innermost-first order.
struct ConditionalTable {
    double x = 0.0;
    std::vector<double> c;
    std::size_t k = 0;
    std::vector<double> log_cells;
    std::vector<double> cells;

    // Values of (y, w_1..w_k) for a cell index.
    int y_of(std::size_t cell) const { return static_cast<int>(cell & 1u); }
    int w_of(std::size_t cell, std::size_t pos) const {
        return static_cast<int>((cell >> (pos + 1)) & 1u);
    }
};

// Selects the cells where (cell & mask) == value.
struct Event {
    std::uint64_t mask = 0;
    std::uint64_t value = 0;

    static Event y_is(int y) { return {1u, static_cast<std::uint64_t>(y)}; }
    // `pos` is the 0-based position of the mediator in spec.mediators.
    static Event w_is(std::size_t pos, int v) {
        return {1ull << (pos + 1), static_cast<std::uint64_t>(v) << (pos + 1)};
    }
    Event operator&(const Event& o) const { return {mask | o.mask, value | o.value}; }
};

ConditionalTable enumerate(const SystemSpec& spec, double x, std::span<const double> c);

double log_probability(const ConditionalTable& table, const Event& event);
// log P(a | b)
double log_conditional(const ConditionalTable& table, const Event& a, const Event& b);
// logit P(a | b)
double conditional_logit(const ConditionalTable& table, const Event& a, const Event& b);

// logit P(Y=1 | X=x, C=c), summing over every mediator configuration.
double marginal_logit_numeric(const SystemSpec& spec, double x, std::span<const double> c);

// Central difference of marginal_logit_numeric.
double marginal_slope_numeric(const SystemSpec& spec, double x, std::span<const double> c,
                              double h = default_step);

// log cross-product ratio of the (Y, X) table given C=c, binary treatment.
double log_cpr_numeric(const SystemSpec& spec, std::span<const double> c);

// logit P(Y=1 | X=x, W_S = w_S, C=c) where `held` maps mediator index -> value
// and the remaining mediators are summed out.
double reduced_logit_numeric(const SystemSpec& spec, double x, const std::map<int, int>& held,
                             std::span<const double> c);

// log cpr(Y, X | W_S = w_S, C=c), binary treatment.
double conditional_log_cpr_numeric(const SystemSpec& spec, const std::map<int, int>& held,
                                   std::span<const double> c);

// The single-mediator system with the X-W arrow reversed: W is exogenous with
// logit P(W=1) = w_logit and X depends on W through `view`. The 2x2 joint of
// (X, W) is built cell by cell.
struct ReversedJoint {
    double cells[2][2] = {};  // [x][w]

    // logit P(W=1 | X=x), read off the table.
    double mediator_logit_at(int x) const;
    // logit P(X=1 | W=1) - logit P(X=1 | W=0), read off the table.
    double delta_w() const;
};

ReversedJoint reversed_joint(const ConfounderModel& view, double w_logit);

// log cpr(Y, X | C=c) under the reversed joint; the outcome model is taken
// from a single-mediator spec (its mediator model is ignored).
double log_cpr_reversed(const SystemSpec& spec, const ConfounderModel& view, double w_logit,
                        std::span<const double> c);

}  // namespace logitpath::oracle
