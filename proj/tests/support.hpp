#pragma once

// Random specs for property tests. All coefficients uniform in [-3, 3].

#include <cstdint>
#include <random>
#include <string>

#include "logitpath/model.hpp"

namespace logitpath::testing {

struct Draw {
    explicit Draw(std::uint64_t seed) : rng(seed) {}

    double coef(double range = 3.0) { return std::uniform_real_distribution<double>(-range, range)(rng); }
    double unit() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

    std::mt19937_64 rng;
};

struct ChainShape {
    std::size_t k = 1;
    std::size_t p = 0;
    TreatmentKind treatment = TreatmentKind::continuous;
    bool mediator_interactions = true;  // gamma_xw, gamma_ww, beta_ww
    bool covariate_interactions = false;  // beta_xc, beta_cc, beta_wc, gamma_xc, gamma_cc, gamma_wc
};

inline SystemSpec random_spec(Draw& d, const ChainShape& shape) {
    SystemSpec s;
    s.treatment = shape.treatment;
    const std::size_t p = shape.p;
    if (p > 0) {
        CovariateBlock block;
        for (std::size_t i = 0; i < p; ++i) {
            block.names.push_back("c" + std::to_string(i + 1));
            block.values.push_back(d.coef(1.5));
        }
        s.covariates = block;
    }
    const int k = static_cast<int>(shape.k);
    for (int j = 1; j <= k; ++j) {
        MediatorModel m;
        m.index = j;
        m.gamma0 = d.coef();
        m.gamma_x = d.coef();
        for (int l = j + 1; l <= k; ++l) {
            m.gamma_w[l] = d.coef();
            if (shape.mediator_interactions) m.gamma_xw[l] = d.coef();
            for (int q = l + 1; q <= k && shape.mediator_interactions; ++q) m.gamma_ww[{l, q}] = d.coef();
        }
        for (std::size_t i = 0; i < p; ++i) {
            m.gamma_c.push_back(d.coef());
            if (shape.covariate_interactions) {
                m.gamma_xc.push_back(d.coef());
                for (int l = j + 1; l <= k; ++l) m.gamma_wc[{l, static_cast<int>(i)}] = d.coef();
            }
        }
        if (shape.covariate_interactions && p >= 2) m.gamma_cc[{0, 1}] = d.coef();
        s.mediators.push_back(m);
    }
    auto& o = s.outcome;
    o.beta0 = d.coef();
    o.beta_x = d.coef();
    for (int j = 1; j <= k; ++j) {
        o.beta_w[j] = d.coef();
        o.beta_xw[j] = d.coef();
        for (int l = j + 1; l <= k && shape.mediator_interactions; ++l) o.beta_ww[{j, l}] = d.coef();
    }
    for (std::size_t i = 0; i < p; ++i) {
        o.beta_c.push_back(d.coef());
        if (shape.covariate_interactions) {
            o.beta_xc.push_back(d.coef());
            for (int j = 1; j <= k; ++j) o.beta_wc[{j, static_cast<int>(i)}] = d.coef();
        }
    }
    if (shape.covariate_interactions && p >= 2) o.beta_cc[{0, 1}] = d.coef();
    validate(s);
    return s;
}

inline SystemSpec random_single(Draw& d, TreatmentKind t = TreatmentKind::continuous) {
    return random_spec(d, {1, 0, t, true, false});
}

inline SystemSpec single(double beta0, double beta_x, double beta_w, double beta_xw, double gamma0, double gamma_x,
                         TreatmentKind t = TreatmentKind::continuous) {
    SystemSpec s;
    s.treatment = t;
    MediatorModel m;
    m.index = 1;
    m.gamma0 = gamma0;
    m.gamma_x = gamma_x;
    s.mediators.push_back(m);
    s.outcome.beta0 = beta0;
    s.outcome.beta_x = beta_x;
    s.outcome.beta_w[1] = beta_w;
    s.outcome.beta_xw[1] = beta_xw;
    return s;
}

}  // namespace logitpath::testing
