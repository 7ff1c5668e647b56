#include "logitpath/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "logitpath/binary.hpp"
#include "logitpath/chain.hpp"
#include "logitpath/decomp.hpp"
#include "logitpath/error.hpp"
#include "logitpath/logistic.hpp"
#include "logitpath/oracle.hpp"
#include "logitpath/spec_io.hpp"

namespace logitpath::cli {

namespace {

using ojson = nlohmann::ordered_json;

constexpr double default_tolerance = 1e-6;

struct Invocation {
    std::string command;
    std::string spec_path;
    std::string x_arg;
    bool verify = false;
    bool json = false;
    std::optional<double> tolerance;
    std::string keep_arg;
    std::optional<double> taylor_x0;
    std::string sweep_beta_w;
    std::string sweep_beta_xw;
    std::string sweep_gamma_x;
    // Test seam: added to every closed-form total before verification.
    double closed_form_offset = 0.0;
};

// Result of a subcommand: the report plus the verification outcome.
struct Outcome {
    ojson report;
    bool verification_failed = false;
    std::string failure;
};

double parse_real(const std::string& s, const std::string& what) {
    const char* begin = s.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (s.empty() || end != begin + s.size() || !std::isfinite(v)) {
        throw Error(ErrorKind::parse, what + ": '" + s + "' is not a finite number");
    }
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

std::vector<double> parse_grid(const std::string& s, const std::string& what) {
    std::vector<double> out;
    if (s.empty()) return out;
    for (const auto& part : split(s, ',')) out.push_back(parse_real(part, what));
    return out;
}

// "2=1,3" -> {2: 1, 3: 1}; a bare index holds the mediator at 1.
std::map<int, int> parse_keep(const std::string& s) {
    std::map<int, int> out;
    if (s.empty()) return out;
    for (const auto& part : split(s, ',')) {
        const auto eq = part.find('=');
        const std::string idx = part.substr(0, eq);
        const std::string val = eq == std::string::npos ? "1" : part.substr(eq + 1);
        int index = 0;
        int value = 0;
        try {
            std::size_t used = 0;
            index = std::stoi(idx, &used);
            if (used != idx.size()) throw std::invalid_argument(idx);
            value = std::stoi(val, &used);
            if (used != val.size()) throw std::invalid_argument(val);
        } catch (const std::exception&) {
            throw Error(ErrorKind::parse, "--keep: cannot parse '" + part + "'");
        }
        if (value != 0 && value != 1) throw Error(ErrorKind::parse, "--keep: mediator values are 0 or 1");
        if (!out.emplace(index, value).second) throw Error(ErrorKind::parse, "--keep: W" + idx + " listed twice");
    }
    return out;
}

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const char* kind_name(TreatmentKind k) { return k == TreatmentKind::binary ? "binary" : "continuous"; }

ojson base_report(const Invocation& inv, const SpecFile& file, double tolerance) {
    ojson r;
    r["tool"] = "logitpath";
    r["version"] = version;
    r["command"] = inv.command;
    ojson req;
    req["spec"] = inv.spec_path;
    req["treatment"] = kind_name(file.system.treatment);
    req["mediators"] = file.system.num_mediators();
    if (file.system.covariates) {
        ojson c = ojson::object();
        for (std::size_t i = 0; i < file.system.covariates->names.size(); ++i) {
            c[file.system.covariates->names[i]] = file.system.covariates->values[i];
        }
        req["covariates"] = c;
    }
    req["verify"] = inv.verify;
    req["tolerance"] = tolerance;
    r["request"] = req;
    return r;
}

std::vector<double> x_grid(const Invocation& inv, const SpecFile& file) {
    auto grid = inv.x_arg.empty() ? file.x_grid : parse_grid(inv.x_arg, "--x");
    if (grid.empty()) grid.push_back(0.0);
    return grid;
}

ojson slope_row(const SlopeDecomposition& d) {
    ojson row;
    row["x"] = d.at_x;
    row["direct"] = d.direct;
    row["interaction"] = d.interaction;
    row["indirect"] = d.indirect;
    row["covariate_treatment"] = d.covariate_treatment;
    row["total"] = d.total;
    row["delta_y"] = d.delta_y;
    row["delta_w"] = d.delta_w;
    row["attenuation"] = d.attenuation;
    row["weighted_mean"] = d.weighted_mean;
    return row;
}

ojson cpr_row(const CprDecomposition& d) {
    ojson row;
    row["beta_x"] = d.beta_x;
    row["beta_xw"] = d.beta_xw;
    row["covariate_treatment"] = d.covariate_treatment;
    row["log_rr_at_x0"] = d.log_rr_at_x0;
    row["log_rr_at_x1"] = d.log_rr_at_x1;
    row["total"] = d.total;
    return row;
}

// Adds oracle and residual columns; records the first breach.
void verify_value(ojson& row, double closed, double oracle_value, double tolerance, Outcome& out,
                  const std::string& what) {
    const double residual = std::abs(closed - oracle_value);
    row["oracle"] = oracle_value;
    row["residual"] = residual;
    if (!(residual <= tolerance) && !out.verification_failed) {
        out.verification_failed = true;
        char buf[160];
        std::snprintf(buf, sizeof buf, "residual %.17g exceeds tolerance %.17g", residual, tolerance);
        out.failure = what + ": " + buf;
    }
}

ojson held_json(const std::map<int, int>& held) {
    ojson h = ojson::object();
    for (const auto& [j, v] : held) h[std::to_string(j)] = v;
    return h;
}

void chain_sections(const SpecFile& file, const std::map<int, int>& keep, const Invocation& inv, double tolerance,
                    Outcome& out) {
    const auto& spec = file.system;
    const auto c = spec.covariate_point();
    const auto report = conditional_and_marginal_mix(spec, keep, c);

    ojson steps = ojson::array();
    for (std::size_t s = 0; s < report.steps.size(); ++s) {
        const auto& step = report.steps[s];
        ojson row;
        row["removed"] = step.removed_index;
        row["exact"] = step.exact;
        row["starred"] = outcome_to_json(step.starred, spec);
        if (inv.verify) {
            // Starred logit against the oracle at every configuration of the
            // remaining binary arguments.
            std::vector<int> remaining;
            for (const auto& m : spec.mediators) {
                if (m.index > step.removed_index) remaining.push_back(m.index);
            }
            SystemSpec reduced;
            reduced.treatment = spec.treatment;
            reduced.covariates = spec.covariates;
            for (const auto& m : spec.mediators) {
                if (m.index > step.removed_index) reduced.mediators.push_back(m);
            }
            reduced.outcome = step.starred;
            double worst = 0.0;
            const std::size_t n = std::size_t{1} << (remaining.size() + 1);
            for (std::size_t mask = 0; mask < n; ++mask) {
                const double x = static_cast<double>(mask & 1u);
                std::vector<int> w(remaining.size());
                std::map<int, int> held;
                for (std::size_t i = 0; i < remaining.size(); ++i) {
                    w[i] = static_cast<int>((mask >> (i + 1)) & 1u);
                    held[remaining[i]] = w[i];
                }
                const double starred = outcome_logit(reduced, x, w, c);
                worst = std::max(worst, std::abs(starred - oracle::reduced_logit_numeric(spec, x, held, c)));
            }
            verify_value(row, worst, 0.0, tolerance, out, "starred coefficients after removing W" +
                                                              std::to_string(step.removed_index));
            row.erase("oracle");
        }
        steps.push_back(row);
    }
    if (!steps.empty()) out.report["steps"] = steps;

    ojson comps = ojson::array();
    for (const auto& comp : report.components) comps.push_back({{"component", comp.label}, {"value", comp.value}});
    out.report["components"] = comps;

    ojson result;
    result["held"] = held_json(report.held);
    result["exact"] = report.exact;
    const double total = report.total + inv.closed_form_offset;
    result["total"] = total;
    if (report.closed_form_total) result["closed_form_total"] = *report.closed_form_total;
    result["components_residual"] = report.components_residual;
    if (inv.verify) {
        const double expected = keep.empty() ? oracle::log_cpr_numeric(spec, c)
                                             : oracle::conditional_log_cpr_numeric(spec, keep, c);
        verify_value(result, total, expected, tolerance, out, "effect of X on Y");
        if (report.components_residual > tolerance && !out.verification_failed) {
            out.verification_failed = true;
            out.failure = "components do not add up to the total";
        }
    }
    out.report["result"] = result;
}

Outcome run_decompose(const Invocation& inv, const SpecFile& file, double tolerance) {
    Outcome out;
    out.report = base_report(inv, file, tolerance);
    const auto& spec = file.system;
    const auto c = spec.covariate_point();

    if (spec.treatment == TreatmentKind::continuous) {
        if (spec.num_mediators() > 1) {
            throw Error(ErrorKind::dimension,
                        "decompose handles at most one mediator for a continuous treatment; "
                        "use 'reduce --taylor-x0' for longer chains");
        }
        const auto grid = x_grid(inv, file);
        out.report["request"]["x"] = grid;
        ojson rows = ojson::array();
        for (double x : grid) {
            auto d = marginal_slope(spec, x, c);
            d.total += inv.closed_form_offset;
            ojson row = slope_row(d);
            if (inv.verify) {
                verify_value(row, d.total, oracle::marginal_slope_numeric(spec, x, c), tolerance, out,
                             "marginal slope at x=" + format_number(x));
            }
            rows.push_back(row);
        }
        out.report["rows"] = rows;
        return out;
    }

    if (!inv.x_arg.empty()) throw Error(ErrorKind::dimension, "--x applies to a continuous treatment only");
    if (spec.num_mediators() <= 1) {
        auto d = marginal_log_cpr(spec, c);
        d.total += inv.closed_form_offset;
        ojson row = cpr_row(d);
        if (inv.verify) verify_value(row, d.total, oracle::log_cpr_numeric(spec, c), tolerance, out, "log cpr");
        out.report["rows"] = ojson::array({row});
        return out;
    }
    chain_sections(file, {}, inv, tolerance, out);
    return out;
}

Outcome run_reduce(const Invocation& inv, const SpecFile& file, double tolerance) {
    Outcome out;
    out.report = base_report(inv, file, tolerance);
    const auto& spec = file.system;
    const auto c = spec.covariate_point();
    const auto x0 = inv.taylor_x0 ? inv.taylor_x0 : file.options.taylor_x0;

    if (spec.treatment == TreatmentKind::binary) {
        if (inv.taylor_x0) {
            throw Error(ErrorKind::taylor_unsupported, "linearization applies to a continuous treatment only");
        }
        if (spec.num_mediators() < 2) throw Error(ErrorKind::dimension, "reduce needs at least two mediators");
        const auto keep = parse_keep(inv.keep_arg);
        out.report["request"]["keep"] = held_json(keep);
        chain_sections(file, keep, inv, tolerance, out);
        return out;
    }

    if (!inv.keep_arg.empty()) throw Error(ErrorKind::dimension, "--keep applies to a binary treatment only");
    if (!x0) throw Error(ErrorKind::taylor_unsupported, "a continuous treatment needs --taylor-x0");
    const auto [reduced, taylor] = taylor_reduce(spec, *x0);

    ojson t;
    t["x0"] = taylor.x0;
    t["outer_index"] = taylor.outer_index;
    t["tilde0"] = taylor.tilde0;
    t["tilde_x"] = taylor.tilde_x;
    t["tilde_w2"] = taylor.tilde_w2;
    t["tilde_xw2"] = taylor.tilde_xw2;
    t["exact"] = false;
    out.report["taylor"] = t;
    out.report["reduced_outcome"] = outcome_to_json(reduced.outcome, reduced);

    if (inv.verify) {
        ojson anchors = ojson::array();
        for (int w2 = 0; w2 <= 1; ++w2) {
            ojson row;
            row["w2"] = w2;
            const double lin = taylor.logit(*x0, w2) + inv.closed_form_offset;
            row["linearized"] = lin;
            verify_value(row, lin, oracle::reduced_logit_numeric(spec, *x0, {{taylor.outer_index, w2}}, c),
                         tolerance, out, "linearized logit at x0");
            anchors.push_back(row);
        }
        out.report["anchoring"] = anchors;
    }

    auto grid = inv.x_arg.empty() ? std::vector<double>{*x0} : parse_grid(inv.x_arg, "--x");
    out.report["request"]["x"] = grid;
    ojson rows = ojson::array();
    for (double x : grid) {
        const auto d = marginal_slope(reduced, x, c);
        ojson row = slope_row(d);
        row["exact"] = false;
        if (inv.verify) {
            const double exact = oracle::marginal_slope_numeric(spec, x, c);
            row["oracle"] = exact;
            row["approx_error"] = std::abs(d.total - exact);
        }
        rows.push_back(row);
    }
    out.report["rows"] = rows;
    return out;
}

Outcome run_sensitivity(const Invocation& inv, const SpecFile& file, double tolerance) {
    Outcome out;
    out.report = base_report(inv, file, tolerance);
    const auto& base = file.system;
    if (base.num_mediators() != 1) throw Error(ErrorKind::dimension, "sensitivity needs exactly one mediator");
    const auto c = base.covariate_point();
    const int index = base.mediators.front().index;

    SweepGrid sweep = file.options.sweep;
    if (!inv.sweep_beta_w.empty()) sweep.beta_w = parse_grid(inv.sweep_beta_w, "--sweep-beta-w");
    if (!inv.sweep_beta_xw.empty()) sweep.beta_xw = parse_grid(inv.sweep_beta_xw, "--sweep-beta-xw");
    if (!inv.sweep_gamma_x.empty()) sweep.gamma_x = parse_grid(inv.sweep_gamma_x, "--sweep-gamma-x");
    if (sweep.empty()) throw Error(ErrorKind::empty_sweep, "nothing to sweep: give beta_w, beta_xw or gamma_x values");

    auto value_or = [](const std::map<int, double>& m, int j) {
        auto it = m.find(j);
        return it == m.end() ? 0.0 : it->second;
    };
    const auto bw = sweep.beta_w.empty() ? std::vector{value_or(base.outcome.beta_w, index)} : sweep.beta_w;
    const auto bxw = sweep.beta_xw.empty() ? std::vector{value_or(base.outcome.beta_xw, index)} : sweep.beta_xw;
    const auto gx = sweep.gamma_x.empty() ? std::vector{base.mediators.front().gamma_x} : sweep.gamma_x;
    out.report["sweep"] = {{"beta_w", bw}, {"beta_xw", bxw}, {"gamma_x", gx}};

    const bool continuous = base.treatment == TreatmentKind::continuous;
    std::vector<double> grid;
    if (continuous) {
        grid = x_grid(inv, file);
        out.report["request"]["x"] = grid;
    } else if (!inv.x_arg.empty()) {
        throw Error(ErrorKind::dimension, "--x applies to a continuous treatment only");
    }

    ojson rows = ojson::array();
    double lo = INFINITY;
    double hi = -INFINITY;
    for (double a : bw) {
        for (double b : bxw) {
            for (double g : gx) {
                SystemSpec spec = base;
                spec.outcome.beta_w[index] = a;
                spec.outcome.beta_xw[index] = b;
                spec.mediators.front().gamma_x = g;
                auto emit = [&](ojson row, double total, double oracle_value) {
                    if (inv.verify) verify_value(row, total, oracle_value, tolerance, out, "sweep point");
                    rows.push_back(row);
                };
                if (continuous) {
                    for (double x : grid) {
                        auto d = marginal_slope(spec, x, c);
                        d.total += inv.closed_form_offset;
                        lo = std::min(lo, d.total);
                        hi = std::max(hi, d.total);
                        ojson row{{"beta_w", a}, {"beta_xw", b}, {"gamma_x", g}, {"x", x}, {"direct", d.direct},
                                  {"interaction", d.interaction}, {"indirect", d.indirect},
                                  {"covariate_treatment", d.covariate_treatment}, {"total", d.total}};
                        emit(row, d.total, inv.verify ? oracle::marginal_slope_numeric(spec, x, c) : 0.0);
                    }
                } else {
                    auto d = marginal_log_cpr(spec, c);
                    d.total += inv.closed_form_offset;
                    ojson row{{"beta_w", a}, {"beta_xw", b}, {"gamma_x", g}, {"log_rr_at_x0", d.log_rr_at_x0},
                              {"log_rr_at_x1", d.log_rr_at_x1}, {"total", d.total}};
                    emit(row, d.total, inv.verify ? oracle::log_cpr_numeric(spec, c) : 0.0);
                }
            }
        }
    }
    out.report["rows"] = rows;

    if (continuous) {
        // Covariate interactions with X share the direct and indirect brackets,
        // so they fold into the effective coefficients.
        double bx = base.outcome.beta_x;
        double gxc = 0.0;
        for (std::size_t i = 0; i < c.size() && i < base.outcome.beta_xc.size(); ++i) bx += base.outcome.beta_xc[i] * c[i];
        const auto& m = base.mediators.front();
        for (std::size_t i = 0; i < c.size() && i < m.gamma_xc.size(); ++i) gxc += m.gamma_xc[i] * c[i];
        auto hull = [](const std::vector<double>& v, double shift) {
            const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
            return Interval{*mn + shift, *mx + shift};
        };
        const auto b = slope_bounds(Interval::point(bx), hull(bxw, 0.0), hull(gx, gxc));
        ojson bounds;
        bounds["lower"] = b.lower;
        bounds["upper"] = b.upper;
        bounds["assumptions"] = b.assumptions;
        bounds["contains_all_rows"] = b.lower <= lo && hi <= b.upper;
        out.report["bounds"] = bounds;
    }
    return out;
}

Outcome run_check(const Invocation& inv, const SpecFile& file, double tolerance) {
    Outcome out;
    out.report = base_report(inv, file, tolerance);
    const auto& spec = file.system;
    const auto c = spec.covariate_point();
    ojson checks = ojson::array();

    const auto conf = check_confounder_consistency(spec);
    {
        ojson row;
        row["check"] = "confounder_consistency";
        row["applicable"] = conf.applicable;
        if (conf.applicable) {
            row["passed"] = conf.consistent;
            row["delta_w"] = conf.delta_w;
            row["gamma_x"] = conf.gamma_x;
            if (!conf.consistent && !out.verification_failed) {
                out.verification_failed = true;
                out.failure = "confounder view: " + conf.note;
            }
        }
        row["note"] = conf.note;
        checks.push_back(row);
    }

    const bool single_binary = spec.treatment == TreatmentKind::binary && spec.num_mediators() == 1;
    {
        ojson row;
        row["check"] = "beta_xw_identity";
        row["applicable"] = single_binary;
        if (single_binary) {
            const auto id = beta_xw_identity_check(spec);
            row["passed"] = id.holds;
            row["beta_xw"] = id.beta_xw;
            row["from_relative_risks"] = id.from_relative_risks;
            row["residual"] = id.residual;
            if (!id.holds && !out.verification_failed) {
                out.verification_failed = true;
                out.failure = "beta_xw identity does not hold";
            }
        } else {
            row["note"] = "needs a binary treatment and exactly one mediator";
        }
        checks.push_back(row);
    }

    if (inv.verify && single_binary && conf.applicable && conf.consistent) {
        // The same joint law written with the arrow reversed must give the
        // same cross-product ratio; P(W=1) is implied by the two views.
        const auto& view = *spec.confounder_view;
        const double intercept = mediator_logit(spec, spec.mediators.front().index, 0.0, {}, c);
        const double w_logit = intercept - softplus(view.delta0) + softplus(view.delta0 + view.delta_w);
        ojson row;
        row["check"] = "arrow_reversal";
        row["applicable"] = true;
        const double total = marginal_log_cpr(spec, c).total + inv.closed_form_offset;
        verify_value(row, total, oracle::log_cpr_reversed(spec, view, w_logit, c), tolerance, out,
                     "arrow reversal");
        row["passed"] = row["residual"].get<double>() <= tolerance;
        checks.push_back(row);
    }
    out.report["checks"] = checks;
    return out;
}

std::string format_value(const ojson& v) {
    if (v.is_number_float()) return format_number(v.get<double>());
    if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_string()) return v.get<std::string>();
    if (v.is_null()) return "-";
    std::string s;
    if (v.is_array()) {
        s = "[";
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_value(v[i]);
        return s + "]";
    }
    s = "{";
    bool first = true;
    for (const auto& [key, value] : v.items()) {
        s += (first ? "" : ", ") + key + ": " + format_value(value);
        first = false;
    }
    return s + "}";
}

void render_rows(const ojson& rows, std::ostream& out) {
    std::vector<std::string> columns;
    for (const auto& row : rows) {
        for (const auto& [key, value] : row.items()) {
            if (std::find(columns.begin(), columns.end(), key) == columns.end()) columns.push_back(key);
        }
    }
    std::vector<std::vector<std::string>> cells;
    std::vector<std::size_t> width(columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) width[j] = columns[j].size();
    for (const auto& row : rows) {
        std::vector<std::string> line;
        for (std::size_t j = 0; j < columns.size(); ++j) {
            line.push_back(row.contains(columns[j]) ? format_value(row[columns[j]]) : "-");
            width[j] = std::max(width[j], line.back().size());
        }
        cells.push_back(std::move(line));
    }
    auto emit = [&](const std::vector<std::string>& line) {
        std::string s;
        for (std::size_t j = 0; j < line.size(); ++j) {
            s += line[j];
            if (j + 1 < line.size()) s += std::string(width[j] - line[j].size() + 2, ' ');
        }
        out << s << '\n';
    };
    emit(columns);
    for (const auto& line : cells) emit(line);
}

}  // namespace

void render_table(const ojson& report, std::ostream& out) {
    out << "# " << report.value("tool", "logitpath") << ' ' << report.value("version", "") << ' '
        << report.value("command", "") << '\n';
    for (const auto& [key, value] : report.items()) {
        if (key == "tool" || key == "version" || key == "command") continue;
        const bool table = value.is_array() && !value.empty() &&
                           std::all_of(value.begin(), value.end(), [](const ojson& e) { return e.is_object(); });
        if (table) {
            out << '[' << key << "]\n";
            render_rows(value, out);
        } else if (value.is_object()) {
            out << '[' << key << "]\n";
            for (const auto& [k, v] : value.items()) out << "  " << k << ": " << format_value(v) << '\n';
        } else {
            out << key << ": " << format_value(value) << '\n';
        }
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Marginal and conditional effects in logistic models with binary mediators", "logitpath"};
    app.require_subcommand(1);
    app.set_version_flag("--version", version);

    Invocation inv;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--spec", inv.spec_path, "Spec file (JSON)")->required();
        sub->add_option("--x", inv.x_arg, "Comma-separated treatment values (continuous treatment)");
        sub->add_flag("--verify", inv.verify, "Check every closed form against the enumeration oracle");
        sub->add_flag("--json", inv.json, "Emit the full JSON report");
        sub->add_option("--tolerance", inv.tolerance, "Verification tolerance (default 1e-6)");
        sub->add_option("--test-closed-form-offset", inv.closed_form_offset)->group("");
    };

    auto* decompose = app.add_subcommand("decompose", "Additive decomposition of the marginal effect");
    common(decompose);
    auto* reduce = app.add_subcommand("reduce", "Marginalize mediators innermost first");
    common(reduce);
    reduce->add_option("--keep", inv.keep_arg, "Mediators held fixed, e.g. 2=1,3=0 (ancestral set)");
    reduce->add_option("--taylor-x0", inv.taylor_x0, "Expansion point for a continuous treatment");
    auto* sensitivity = app.add_subcommand("sensitivity", "Sweep unobserved coefficients");
    common(sensitivity);
    sensitivity->add_option("--sweep-beta-w", inv.sweep_beta_w, "Comma-separated beta_w values");
    sensitivity->add_option("--sweep-beta-xw", inv.sweep_beta_xw, "Comma-separated beta_xw values");
    sensitivity->add_option("--sweep-gamma-x", inv.sweep_gamma_x, "Comma-separated gamma_x values");
    auto* check = app.add_subcommand("check", "Confounder-view and interaction identity audits");
    common(check);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForVersion& e) {
        out << version << '\n';
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "logitpath: " << e.what() << '\n';
        return static_cast<int>(ErrorKind::parse);
    }
    inv.command = app.get_subcommands().front()->get_name();

    try {
        const auto file = load_spec(inv.spec_path);
        if (inv.tolerance && !(*inv.tolerance > 0.0)) throw Error(ErrorKind::parse, "--tolerance must be positive");
        const double tolerance = inv.tolerance.value_or(file.options.tolerance.value_or(default_tolerance));

        Outcome result;
        if (inv.command == "decompose") result = run_decompose(inv, file, tolerance);
        else if (inv.command == "reduce") result = run_reduce(inv, file, tolerance);
        else if (inv.command == "sensitivity") result = run_sensitivity(inv, file, tolerance);
        else result = run_check(inv, file, tolerance);

        if (inv.verify || inv.command == "check") {
            result.report["status"] = result.verification_failed ? "failed" : "passed";
        }
        if (inv.json) out << result.report.dump(2) << '\n';
        else render_table(result.report, out);

        if (result.verification_failed) {
            err << "logitpath: verification failed: " << result.failure << '\n';
            return static_cast<int>(ErrorKind::tolerance);
        }
        return 0;
    } catch (const Error& e) {
        err << "logitpath: " << e.what() << '\n';
        return static_cast<int>(e.kind());
    } catch (const std::exception& e) {
        err << "logitpath: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace logitpath::cli
