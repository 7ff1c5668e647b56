#pragma once

// Marginal slope of the treatment on the outcome logit after summing out a
// single binary mediator, split into additive components.

#include <span>
#include <string>
#include <vector>

#include "logitpath/model.hpp"

namespace logitpath {

struct SlopeDecomposition {
    double direct = 0.0;               // beta_x * {1 - dy*dw}
    double interaction = 0.0;          // beta_xw * {P(W=1|Y=1) - dw * P(Y=1|W=1)}
    double indirect = 0.0;             // (gamma_x + sum gamma_xc c) * dw
    double covariate_treatment = 0.0;  // {1 - dy*dw} * sum beta_xc c
    double total = 0.0;
    double at_x = 0.0;
    std::vector<double> at_c;

    // Bracket factors, kept for auditing the [0, 1] bounds.
    double attenuation = 1.0;  // 1 - dy*dw
    double weighted_mean = 0.0;
    double delta_y = 0.0;
    double delta_w = 0.0;
};

// P(Y=1|W=1,X=x,C=c) - P(Y=1|W=0,X=x,C=c)
double delta_y(const SystemSpec& spec, double x, std::span<const double> c);
// P(W=1|Y=1,X=x,C=c) - P(W=1|Y=0,X=x,C=c)
double delta_w(const SystemSpec& spec, double x, std::span<const double> c);
// d g_0(x) / dx in closed form.
double gamma_of_x(const SystemSpec& spec, double x, std::span<const double> c);

SlopeDecomposition marginal_slope(const SystemSpec& spec, double x, std::span<const double> c);

struct Interval {
    double lower = 0.0;
    double upper = 0.0;

    static Interval point(double v) { return {v, v}; }
    bool is_point() const { return lower == upper; }
    bool contains(double v) const { return lower <= v && v <= upper; }
};

struct EffectBounds {
    double lower = 0.0;
    double upper = 0.0;
    // One entry per coefficient, e.g. "beta_x=point", "gamma_x=interval".
    std::vector<std::string> assumptions;

    bool contains(double v) const { return lower <= v && v <= upper; }
};

// Envelope of the slope decomposition over every admissible value of the
// bracket factors: both brackets in [0, 1], dw in [-1, 1], taken as
// independent. Holds for every x. No covariate interactions with X.
EffectBounds slope_bounds(Interval beta_x, Interval beta_xw, Interval gamma_x);

}  // namespace logitpath
