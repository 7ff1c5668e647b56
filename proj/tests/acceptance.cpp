// Acceptance suite: one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "golden_cases.hpp"
#include "logitpath/binary.hpp"
#include "logitpath/chain.hpp"
#include "logitpath/cli.hpp"
#include "logitpath/decomp.hpp"
#include "logitpath/logistic.hpp"
#include "logitpath/oracle.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using namespace logitpath;
using logitpath::testing::ChainShape;
using logitpath::testing::Draw;
using logitpath::testing::random_spec;

namespace {

constexpr auto continuous = TreatmentKind::continuous;
constexpr auto binary = TreatmentKind::binary;

struct Verdict {
    bool pass = true;
    std::string detail;
};

struct Worst {
    double value = 0.0;
    void add(double v) {
        if (!(v <= value)) value = v;  // NaN sticks
    }
};

std::string fmt(const char* f, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// 1. Marginal slope against the finite-difference oracle.
Verdict slope_equivalence() {
    Draw d(1001);
    Worst w;
    int cases = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto s = random_spec(d, {1, 0, continuous, true, false});
        for (double x : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
            w.add(std::abs(marginal_slope(s, x, {}).total - oracle::marginal_slope_numeric(s, x, {})));
            ++cases;
        }
    }
    return {w.value <= 1e-6, fmt("worst |closed form - oracle| = %.3g over %d cases (tol 1e-6)", w.value, cases)};
}

// 2. Same with two covariates and every interaction type, plus specs whose
// only covariate interactions are mediator-by-covariate.
Verdict covariate_equivalence() {
    Draw d(1002);
    Worst full;
    for (int i = 0; i < 500; ++i) {
        const auto s = random_spec(d, {1, 2, continuous, true, true});
        const auto c = s.covariate_point();
        const double x = d.coef(2.0);
        full.add(std::abs(marginal_slope(s, x, c).total - oracle::marginal_slope_numeric(s, x, c)));
    }
    Worst wc_only;
    Worst wc_split;
    for (int i = 0; i < 500; ++i) {
        auto s = random_spec(d, {1, 2, continuous, true, false});
        s.outcome.beta_wc[{1, 0}] = d.coef();
        s.outcome.beta_wc[{1, 1}] = d.coef();
        const auto c = s.covariate_point();
        const double x = d.coef(2.0);
        const auto r = marginal_slope(s, x, c);
        wc_only.add(std::abs(r.total - oracle::marginal_slope_numeric(s, x, c)));
        // No component of their own: the remaining terms carry the whole slope.
        wc_split.add(std::abs(r.direct + r.interaction + r.indirect - r.total) + std::abs(r.covariate_treatment));
    }
    const bool pass = full.value <= 1e-6 && wc_only.value <= 1e-6 && wc_split.value <= 1e-12;
    return {pass, fmt("worst residual %.3g (all interactions, 500), %.3g (beta_wc only, 500); "
                      "beta_wc-only split residual %.3g (tol 1e-6)",
                      full.value, wc_only.value, wc_split.value)};
}

// 3. Binary treatment: closed-form log cpr against enumeration.
Verdict cpr_exactness() {
    Draw d(1003);
    Worst w;
    for (int i = 0; i < 1000; ++i) {
        const bool with_c = i % 2 == 1;
        const auto s = random_spec(d, {1, with_c ? 1u : 0u, binary, true, with_c});
        const auto c = s.covariate_point();
        w.add(std::abs(marginal_log_cpr(s, c).total - oracle::log_cpr_numeric(s, c)));
    }
    return {w.value <= 1e-9, fmt("worst |closed form - oracle| = %.3g over 1000 specs (tol 1e-9)", w.value)};
}

// 4. Special cases.
Verdict special_cases() {
    Draw d(1004);
    const int n = 200;
    int collapsible = 0, attenuation = 0, no_reversal = 0, dw_range = 0, brackets = 0, consistent = 0;
    Worst identity;
    for (int i = 0; i < n; ++i) {
        auto s = random_spec(d, {1, 0, continuous, true, false});
        const double x = d.coef(2.0);

        auto col = s;
        col.outcome.beta_w[1] = 0.0;
        col.outcome.beta_xw[1] = 0.0;
        auto colb = col;
        colb.treatment = binary;
        if (marginal_slope(col, x, {}).total == col.outcome.beta_x &&
            marginal_log_cpr(colb, {}).total == col.outcome.beta_x) {
            ++collapsible;
        }

        auto att = s;
        att.mediators[0].gamma_x = 0.0;
        att.outcome.beta_xw[1] = 0.0;
        if (std::abs(marginal_slope(att, x, {}).total) <= std::abs(att.outcome.beta_x)) ++attenuation;

        auto nr = s;
        nr.mediators[0].gamma_x = 0.0;
        nr.outcome.beta_x = std::abs(nr.outcome.beta_x) + 1e-3;
        nr.outcome.beta_xw[1] = std::abs(nr.outcome.beta_xw[1]) + 1e-3;
        if (marginal_slope(nr, x, {}).total > 0.0) ++no_reversal;

        const auto r = marginal_slope(s, x, {});
        if (r.delta_w >= -1.0 && r.delta_w <= 1.0) ++dw_range;
        if (r.attenuation >= 0.0 && r.attenuation <= 1.0 && r.weighted_mean >= 0.0 && r.weighted_mean <= 1.0) {
            ++brackets;
        }

        auto sb = random_spec(d, {1, 0, binary, true, false});
        identity.add(beta_xw_identity_check(sb).residual);

        // Reversed joint built by the oracle as P(W) P(X | W); the implied
        // mediator model must carry gamma_x = delta_w.
        const ConfounderModel view{d.coef(), d.coef()};
        const auto joint = oracle::reversed_joint(view, d.coef());
        sb.mediators[0].gamma0 = joint.mediator_logit_at(0);
        sb.mediators[0].gamma_x = joint.mediator_logit_at(1) - joint.mediator_logit_at(0);
        sb.confounder_view = view;
        if (check_confounder_consistency(sb).consistent) ++consistent;
    }
    const bool pass = collapsible == n && attenuation == n && no_reversal == n && dw_range == n && brackets == n &&
                      identity.value <= 1e-9 && consistent == n;
    return {pass, fmt("collapsible %d/%d, attenuation %d/%d, no reversal %d/%d, delta_w range %d/%d, "
                      "brackets %d/%d, beta_xw identity worst %.3g (tol 1e-9), reversed joints %d/%d",
                      collapsible, n, attenuation, n, no_reversal, n, dw_range, n, brackets, n, identity.value,
                      consistent, n)};
}

double starred_gap(const SystemSpec& original, const SystemSpec& reduced) {
    const auto c = original.covariate_point();
    const std::size_t m = reduced.num_mediators();
    double worst = 0.0;
    for (std::size_t mask = 0; mask < (std::size_t{2} << m); ++mask) {
        std::vector<int> w(m);
        std::map<int, int> held;
        for (std::size_t i = 0; i < m; ++i) {
            w[i] = static_cast<int>((mask >> (i + 1)) & 1u);
            held[reduced.mediators[i].index] = w[i];
        }
        const double x = static_cast<double>(mask & 1u);
        const double gap = std::abs(outcome_logit(reduced, x, w, c) - oracle::reduced_logit_numeric(original, x, held, c));
        if (!(gap <= worst)) worst = gap;
    }
    return worst;
}

// 5. Exact reduction of chains.
Verdict reduction_exactness() {
    Draw d(1005);
    Worst starred2, total2, chained;
    for (int i = 0; i < 500; ++i) {
        const auto s = random_spec(d, {2, 0, binary, true, false});
        starred2.add(starred_gap(s, reduce_inner_mediator(s).first));
        total2.add(std::abs(total_log_cpr(s).total - oracle::log_cpr_numeric(s, {})));
    }
    for (std::size_t k = 3; k <= 6; ++k) {
        for (int i = 0; i < 50; ++i) {
            const auto s = random_spec(d, {k, 0, binary, true, false});
            auto cur = s;
            while (cur.num_mediators() > 1) {
                cur = reduce_inner_mediator(cur).first;
                chained.add(starred_gap(s, cur));
            }
            chained.add(std::abs(total_log_cpr(s).total - oracle::log_cpr_numeric(s, {})));
        }
    }
    const bool pass = starred2.value <= 1e-9 && total2.value <= 1e-9 && chained.value <= 1e-9;
    return {pass, fmt("k=2 starred logit worst %.3g, k=2 total worst %.3g, k=3..6 worst %.3g (tol 1e-9)",
                      starred2.value, total2.value, chained.value)};
}

// 6. Linearization: anchored at x0, quadratic remainder of the reduced logit.
Verdict taylor_behaviour() {
    Draw d(1006);
    Worst anchor;
    int nondegenerate = 0;
    int in_window = 0;
    for (int i = 0; i < 100; ++i) {
        const auto s = random_spec(d, {2, 0, continuous, true, false});
        const double x0 = d.coef(1.0);
        const auto t = taylor_reduce(s, x0).second;
        auto exact = [&](double x, int w2) { return oracle::reduced_logit_numeric(s, x, {{2, w2}}, {}); };
        double curvature = 0.0;
        for (int w2 = 0; w2 <= 1; ++w2) {
            anchor.add(std::abs(t.logit(x0, w2) - exact(x0, w2)));
            const double h = 1e-3;
            curvature += std::abs((exact(x0 + h, w2) - 2 * exact(x0, w2) + exact(x0 - h, w2)) / (h * h));
        }
        // A vanishing second derivative leaves nothing quadratic to measure.
        if (curvature < 1e-3) continue;
        ++nondegenerate;
        auto err = [&](double step) {
            double e = 0.0;
            for (int w2 = 0; w2 <= 1; ++w2) {
                for (double sign : {-1.0, 1.0}) {
                    const double x = x0 + sign * step;
                    e += std::abs(t.logit(x, w2) - exact(x, w2));
                }
            }
            return e;
        };
        const double ratio = err(0.2) / err(0.1);
        if (ratio >= 3.0 && ratio <= 5.0) ++in_window;
    }
    const bool pass = anchor.value <= 1e-9 && nondegenerate > 0 && in_window * 10 >= nondegenerate * 9;
    return {pass, fmt("anchoring worst %.3g (tol 1e-9); remainder ratio in [3, 5] for %d/%d non-degenerate draws "
                      "(need 90%%)",
                      anchor.value, in_window, nondegenerate)};
}

// 7. Bounds hold the true slope.
Verdict bounds_soundness() {
    Draw d(1007);
    int inside = 0;
    const int n = 1000;
    for (int i = 0; i < n; ++i) {
        const auto s = random_spec(d, {1, 0, continuous, true, false});
        const double x = d.coef(2.0);
        const auto b = slope_bounds(Interval::point(s.outcome.beta_x), Interval::point(s.outcome.beta_xw.at(1)),
                                    Interval::point(s.mediators[0].gamma_x));
        if (b.contains(oracle::marginal_slope_numeric(s, x, {}))) ++inside;
    }
    return {inside == n, fmt("oracle slope inside the envelope in %d/%d draws", inside, n)};
}

// 8. CLI goldens and the --verify exit contract.
Verdict cli_contract(const fs::path& tests_dir) {
    const auto cwd = fs::current_path();
    fs::current_path(tests_dir);
    auto run = [](const std::vector<std::string>& args, std::string& out_text, std::string& err_text) {
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        out_text = out.str();
        err_text = err.str();
        return code;
    };
    int matched = 0;
    int total = 0;
    std::string first_mismatch;
    for (const auto& c : logitpath::testing::golden_cases()) {
        ++total;
        std::string out, err;
        const int code = run(c.args, out, err);
        std::string got = "$ logitpath";
        for (const auto& a : c.args) got += " " + a;
        got += "\nexit: " + std::to_string(code) + "\n--- stdout\n" + out + "--- stderr\n" + err;
        std::ifstream in(fs::path("golden") / (c.name + ".txt"), std::ios::binary);
        const std::string want{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
        if (got == want) ++matched;
        else if (first_mismatch.empty()) first_mismatch = c.name;
    }
    int contract = 0;
    int contract_total = 0;
    for (auto args : logitpath::testing::verify_cases()) {
        ++contract_total;
        std::string out, err;
        args.push_back("--verify");
        const int clean = run(args, out, err);
        args.insert(args.end(), {logitpath::testing::seam_flag, "1e-4"});
        const int corrupt = run(args, out, err);
        if (clean == 0 && corrupt == 4) ++contract;
    }
    fs::current_path(cwd);
    const bool pass = matched == total && contract == contract_total;
    std::string detail = fmt("goldens byte-identical %d/%d; --verify exit 0 clean and 4 when corrupted %d/%d",
                             matched, total, contract, contract_total);
    if (!first_mismatch.empty()) detail += "; first mismatch: " + first_mismatch;
    return {pass, detail};
}

}  // namespace

int main(int argc, char** argv) {
    const fs::path tests_dir = argc > 1 ? fs::path(argv[1]) : fs::path(LOGITPATH_TEST_DATA).parent_path();
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
        {"marginal slope matches the oracle, single mediator", slope_equivalence},
        {"marginal slope matches the oracle with covariates", covariate_equivalence},
        {"binary treatment log cpr is exact", cpr_exactness},
        {"special-case identities", special_cases},
        {"chain reductions are exact", reduction_exactness},
        {"linearization anchoring and quadratic remainder", taylor_behaviour},
        {"slope bounds contain the true slope", bounds_soundness},
        {"command line contract", [&] { return cli_contract(tests_dir); }},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s %zu %s: %s [%.2fs]\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    v.detail.c_str(), secs);
        if (!v.pass) ++failed;
    }
    std::fflush(stdout);
    return failed == 0 ? 0 : 1;
}
