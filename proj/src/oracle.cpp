#include "logitpath/oracle.hpp"

#include <cmath>
#include <string>

#include "logitpath/error.hpp"
#include "logitpath/logistic.hpp"

namespace logitpath::oracle {

namespace {

Event held_event(const SystemSpec& spec, const std::map<int, int>& held) {
    Event e;
    for (const auto& [index, v] : held) {
        if (v != 0 && v != 1) throw Error(ErrorKind::dimension, "held mediator values must be 0 or 1");
        e = e & Event::w_is(spec.position_of(index), v);
    }
    return e;
}

}  // namespace

ConditionalTable enumerate(const SystemSpec& spec, double x, std::span<const double> c) {
    const std::size_t k = spec.num_mediators();
    if (k > max_mediators) {
        throw Error(ErrorKind::dimension, "enumeration supports at most " +
                                              std::to_string(max_mediators) + " mediators, got " +
                                              std::to_string(k));
    }
    require_covariates(spec, c);

    ConditionalTable t;
    t.x = x;
    t.c.assign(c.begin(), c.end());
    t.k = k;
    const std::size_t n = std::size_t{1} << (k + 1);
    t.log_cells.resize(n);
    t.cells.resize(n);

    std::vector<int> w(k);
    double total = -INFINITY;
    for (std::size_t cell = 0; cell < n; ++cell) {
        for (std::size_t j = 0; j < k; ++j) w[j] = t.w_of(cell, j);
        const double eta = outcome_logit(spec, x, w, c);
        double lp = log_logistic(t.y_of(cell) ? eta : -eta);
        for (std::size_t j = 0; j < k; ++j) {
            const std::span<const int> outer(w.data() + j + 1, k - j - 1);
            const double m = mediator_logit(spec, spec.mediators[j].index, x, outer, c);
            lp += log_logistic(w[j] ? m : -m);
        }
        t.log_cells[cell] = lp;
        total = log_add(total, lp);
    }
    for (std::size_t cell = 0; cell < n; ++cell) {
        t.log_cells[cell] -= total;
        t.cells[cell] = std::exp(t.log_cells[cell]);
    }
    return t;
}

double log_probability(const ConditionalTable& table, const Event& event) {
    double acc = -INFINITY;
    for (std::size_t cell = 0; cell < table.log_cells.size(); ++cell) {
        if ((cell & event.mask) == event.value) acc = log_add(acc, table.log_cells[cell]);
    }
    return acc;
}

double log_conditional(const ConditionalTable& table, const Event& a, const Event& b) {
    return log_probability(table, a & b) - log_probability(table, b);
}

double conditional_logit(const ConditionalTable& table, const Event& a, const Event& b) {
    // a is a single-bit event here; its complement flips that bit.
    const Event not_a{a.mask, a.mask & ~a.value};
    return log_probability(table, a & b) - log_probability(table, not_a & b);
}

double marginal_logit_numeric(const SystemSpec& spec, double x, std::span<const double> c) {
    const auto t = enumerate(spec, x, c);
    return conditional_logit(t, Event::y_is(1), Event{});
}

double marginal_slope_numeric(const SystemSpec& spec, double x, std::span<const double> c, double h) {
    require_treatment(spec, TreatmentKind::continuous, "marginal_slope_numeric");
    return (marginal_logit_numeric(spec, x + h, c) - marginal_logit_numeric(spec, x - h, c)) / (2.0 * h);
}

double log_cpr_numeric(const SystemSpec& spec, std::span<const double> c) {
    require_treatment(spec, TreatmentKind::binary, "log_cpr_numeric");
    return marginal_logit_numeric(spec, 1.0, c) - marginal_logit_numeric(spec, 0.0, c);
}

double reduced_logit_numeric(const SystemSpec& spec, double x, const std::map<int, int>& held,
                             std::span<const double> c) {
    const Event given = held_event(spec, held);
    const auto t = enumerate(spec, x, c);
    return conditional_logit(t, Event::y_is(1), given);
}

double conditional_log_cpr_numeric(const SystemSpec& spec, const std::map<int, int>& held,
                                   std::span<const double> c) {
    require_treatment(spec, TreatmentKind::binary, "conditional_log_cpr_numeric");
    return reduced_logit_numeric(spec, 1.0, held, c) - reduced_logit_numeric(spec, 0.0, held, c);
}

double ReversedJoint::mediator_logit_at(int x) const {
    return std::log(cells[x][1]) - std::log(cells[x][0]);
}

double ReversedJoint::delta_w() const {
    return (std::log(cells[1][1]) - std::log(cells[0][1])) -
           (std::log(cells[1][0]) - std::log(cells[0][0]));
}

ReversedJoint reversed_joint(const ConfounderModel& view, double w_logit) {
    ReversedJoint j;
    for (int w = 0; w <= 1; ++w) {
        const double pw = logistic(w ? w_logit : -w_logit);
        const double eta = view.delta0 + view.delta_w * w;
        j.cells[1][w] = pw * logistic(eta);
        j.cells[0][w] = pw * logistic(-eta);
    }
    return j;
}

double log_cpr_reversed(const SystemSpec& spec, const ConfounderModel& view, double w_logit,
                        std::span<const double> c) {
    if (spec.num_mediators() != 1) {
        throw Error(ErrorKind::dimension, "reversed joint needs exactly one mediator");
    }
    const auto joint = reversed_joint(view, w_logit);
    double logit_y[2];
    for (int x = 0; x <= 1; ++x) {
        const double log_px = std::log(joint.cells[x][0] + joint.cells[x][1]);
        double log_y1 = -INFINITY;
        double log_y0 = -INFINITY;
        for (int w = 0; w <= 1; ++w) {
            const int wv[1] = {w};
            const double eta = outcome_logit(spec, x, wv, c);
            const double log_pw_given_x = std::log(joint.cells[x][w]) - log_px;
            log_y1 = log_add(log_y1, log_logistic(eta) + log_pw_given_x);
            log_y0 = log_add(log_y0, log_logistic(-eta) + log_pw_given_x);
        }
        logit_y[x] = log_y1 - log_y0;
    }
    return logit_y[1] - logit_y[0];
}

}  // namespace logitpath::oracle
