#include "multspec/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "multspec/multipliers.hpp"
#include "multspec/numerics.hpp"
#include "multspec/peaks.hpp"
#include "multspec/series.hpp"
#include "multspec/spaces.hpp"
#include "multspec/spectra.hpp"
#include "multspec/symbols.hpp"

namespace multspec {

namespace {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 8);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

std::string pair_json(cplx v) {
    return "[" + fmt17(v.real()) + "," + fmt17(v.imag()) + "]";
}

cplx parse_complex_arg(const std::string& text, const char* what) {
    try {
        Symbol s = parse_symbol("C(" + text + ")");
        if (s.kind() != Symbol::Kind::Constant)
            throw std::invalid_argument("not a constant");
        return s.constant_value();
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string(what) +
                                    ": expected a complex number like 1, -0.5, or 1+2i");
    }
}

SpaceSpec parse_space_arg(const std::string& text) {
    try {
        return space_from_json(nlohmann::json::parse(text));
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("--space: ") + e.what());
    }
}

std::string space_json_text(const SpaceSpec& s) { return space_to_json(s).dump(); }

std::string family_slug(SpaceFamily f) {
    switch (f) {
        case SpaceFamily::BoundedMultipliers: return "bounded";
        case SpaceFamily::DiskAlgebraMultipliers: return "disk_algebra";
        case SpaceFamily::SufficiencyOnly: return "sufficiency_only";
        case SpaceFamily::Unsupported: return "unsupported";
    }
    return "unsupported";
}

// ---------------------------------------------------------------- commands

int cmd_norm(const std::string& u_text, const SpaceSpec& space) {
    Symbol u = parse_symbol(u_text);
    if (u.dim() != 1)
        throw std::invalid_argument("norm: only one-variable symbols have norms here");
    PowerSeries f = to_series(u, 2 * kDefaultTruncation);
    NormReport nr = norm_report(space, f);
    std::string out = "{\"schema_version\":1,\"command\":\"norm\",\"symbol\":\"" +
                      json_escape(render(u)) + "\",\"space\":" + space_json_text(space) +
                      ",\"value\":" + fmt17(nr.value) + ",\"lower\":" + fmt17(nr.lower) +
                      ",\"upper\":" + fmt17(nr.upper) + ",\"truncated_estimate\":" +
                      (nr.truncated_estimate ? "true" : "false") + "}";
    std::printf("%s\n", out.c_str());
    return 0;
}

void maybe_write_svg(const SpectrumEstimate& est, const std::string& path) {
    if (path.empty()) return;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("--svg: cannot open " + path);
    out << spectrum_to_svg(est);
}

int cmd_spectrum(const std::string& u_text, const std::string& svg_path) {
    SpectrumEstimate est = spectrum(parse_symbol(u_text));
    maybe_write_svg(est, svg_path);
    std::printf("%s\n", spectrum_to_json(est).c_str());
    return 0;
}

int cmd_ess_spectrum(const std::string& u_text, const SpaceSpec& space, bool annulus,
                     const std::string& svg_path) {
    SpectrumEstimate est = essential_spectrum(parse_symbol(u_text), space, annulus);
    if (est.hypotheses_met) maybe_write_svg(est, svg_path);
    std::printf("%s\n", spectrum_to_json(est).c_str());
    return est.hypotheses_met ? 0 : 3;
}

int cmd_fredholm(const std::string& u_text, cplx lambda, const SpaceSpec& space) {
    Symbol u = parse_symbol(u_text);
    FredholmReport fr = fredholm_analysis(u, lambda, space);
    std::string out = "{\"schema_version\":1,\"command\":\"fredholm\",\"symbol\":\"" +
                      json_escape(render(u)) + "\",\"space\":" + space_json_text(space) +
                      ",\"lambda\":" + pair_json(fr.lambda) +
                      ",\"family\":\"" + family_slug(fr.family) +
                      "\",\"boundary_delta\":" + fmt17(fr.boundary_delta) +
                      ",\"fredholm\":" + (fr.fredholm ? "true" : "false") +
                      ",\"index_defined\":" + (fr.index_defined ? "true" : "false") +
                      ",\"index\":" + std::to_string(fr.index) +
                      ",\"annulus_radius\":" + fmt17(fr.annulus_radius) +
                      ",\"interior_zeros\":[";
    for (std::size_t k = 0; k < fr.zeros.zeros.size(); ++k) {
        if (k) out += ',';
        out += "{\"location\":" + pair_json(fr.zeros.zeros[k].location) +
               ",\"multiplicity\":" + std::to_string(fr.zeros.zeros[k].multiplicity) + "}";
    }
    out += std::string("],\"boundary_zero\":") +
           (fr.zeros.boundary_zero ? "true" : "false") + ",\"status\":\"" +
           json_escape(fr.status) + "\"}";
    std::printf("%s\n", out.c_str());
    return 0;
}

int cmd_multiplier(const std::string& u_text, const SpaceSpec& space) {
    Symbol u = parse_symbol(u_text);
    MultiplierReport rep = is_multiplier(space, u);
    std::string out = "{\"schema_version\":1,\"command\":\"multiplier\",\"symbol\":\"" +
                      json_escape(render(u)) + "\",\"space\":" + space_json_text(space) +
                      ",\"verdict\":\"" + verdict_name(rep.verdict) +
                      "\",\"criterion\":\"" + json_escape(rep.criterion) +
                      "\",\"growth_slope\":" + fmt17(rep.growth_slope) +
                      ",\"witnesses\":[";
    for (std::size_t k = 0; k < rep.witnesses.size(); ++k) {
        if (k) out += ',';
        out += "[" + fmt17(rep.witnesses[k].first) + "," +
               fmt17(rep.witnesses[k].second) + "]";
    }
    out += "],\"detail\":\"" + json_escape(rep.detail) + "\"}";
    std::printf("%s\n", out.c_str());
    return 0;
}

int cmd_peak_scan(const std::string& u_text, cplx xi, const SpaceSpec& space, int kmax) {
    if (kmax < 8) throw std::invalid_argument("--kmax: need at least 8");
    std::vector<int> k_grid;
    for (int k = 8; k <= kmax; k *= 2) k_grid.push_back(k);
    auto rows = peak_refutation_scan(parse_symbol(u_text), xi, space, k_grid);
    std::fputs(scan_to_csv(rows, "norm_ratio").c_str(), stdout);
    return 0;
}

// ------------------------------------------------------------ verify suites

void suite_stirling(std::vector<VerifyRow>& rows) {
    const double pairs[3][2] = {{0.5, 0.5}, {2.0, 1.0}, {3.0, 0.0}};
    for (auto& lm : pairs) {
        char name[96];
        GammaRatioCheck mid = gamma_ratio_check(1000.0, lm[0], lm[1]);
        double err_mid = std::max(mid.ratio1_error, mid.ratio2_error);
        std::snprintf(name, sizeof name, "ratio errors at K=1000, L=%g, M=%g", lm[0],
                      lm[1]);
        rows.push_back({"stirling", name, err_mid, 1e-2, err_mid <= 1e-2});

        GammaRatioCheck lo = gamma_ratio_check(100.0, lm[0], lm[1]);
        GammaRatioCheck hi = gamma_ratio_check(1600.0, lm[0], lm[1]);
        double factor = std::max(lo.ratio1_error, lo.ratio2_error) /
                        std::max(hi.ratio1_error, hi.ratio2_error);
        std::snprintf(name, sizeof name,
                      "error decrease K=100 -> K=1600, L=%g, M=%g (pass if >= 2)",
                      lm[0], lm[1]);
        rows.push_back({"stirling", name, factor, 2.0, factor >= 2.0});
    }
}

void suite_parseval(std::vector<VerifyRow>& rows) {
    for (double r : {0.0, 0.5, 0.9}) {
        double worst = 0.0;
        for (int K = 0; K <= 30; ++K)
            worst = std::max(worst, parseval_check(K, r).rel_diff);
        char name[96];
        std::snprintf(name, sizeof name,
                      "circle power integral vs squared coefficients, K <= 30, r=%g", r);
        rows.push_back({"parseval", name, worst, 1e-10, worst <= 1e-10});
    }
}

void suite_chu(std::vector<VerifyRow>& rows) {
    for (double g : {-0.5, 0.0, 1.7}) {
        double worst = 0.0;
        for (int K = 0; K <= 40; ++K)
            worst = std::max(worst, chu_vandermonde_check(K, g).rel_diff);
        char name[96];
        std::snprintf(name, sizeof name,
                      "binomial moment sum vs closed form, K <= 40, weight %g", g);
        rows.push_back({"chu", name, worst, 1e-11, worst <= 1e-11});
    }
}

void suite_exponents(std::vector<VerifyRow>& rows) {
    char name[96];
    PeakFamily fam;
    fam.xi = cplx(1.0);
    fam.k_grid = {64, 128, 256, 512, 1024, 2048, 4096};
    for (double beta : {0.75, 1.0, 2.0}) {
        auto ec = peak_norm_exponent(SpaceSpec::hardy_sobolev(beta), fam,
                                     ToleranceConfig());
        double err = std::abs(ec.fitted_slope - ec.predicted_slope);
        std::snprintf(name, sizeof name,
                      "coefficient-norm growth exponent, smoothness beta=%g", beta);
        rows.push_back({"exponents", name, err, 0.025, err <= 0.025});
    }
    PeakFamily small = fam;
    small.k_grid = {64, 128, 256, 512, 1024};
    for (double alpha : {0.25, 0.5, 1.0}) {
        auto ec =
            peak_norm_exponent(SpaceSpec::bloch(alpha), small, ToleranceConfig());
        double err = std::abs(ec.fitted_slope - ec.predicted_slope);
        std::snprintf(name, sizeof name,
                      "weighted-derivative sup growth exponent, alpha=%g", alpha);
        rows.push_back({"exponents", name, err, 0.05, err <= 0.05});
    }
    auto ec = peak_norm_exponent(SpaceSpec::bergman_sobolev(2.0, 0.0, 2.0), small,
                                 ToleranceConfig());
    double err = std::abs(ec.fitted_slope - ec.predicted_slope);
    rows.push_back({"exponents",
                    "area-quadrature norm growth exponent, (p,alpha,beta)=(2,0,2)", err,
                    0.05, err <= 0.05});
}

void suite_decay(std::vector<VerifyRow>& rows) {
    char name[96];
    for (int m : {0, 1}) {
        for (int variant = 0; variant < 2; ++variant) {
            PeakFamily fam;
            fam.xi = cplx(1.0);
            fam.k_grid = {8, 32, 128, 256};
            fam.space = variant == 0 ? SpaceSpec::bloch(0.5) : SpaceSpec::hardy_sobolev(1.0);
            auto rows_kv = uniform_decay_check(fam, 1.0, m, ToleranceConfig());
            double ratio = rows_kv.back().second / rows_kv.front().second;
            std::snprintf(name, sizeof name,
                          "normalized peak family vanishes off the peak point, %s, "
                          "derivative order %d",
                          variant == 0 ? "derivative-sup scale" : "coefficient scale", m);
            rows.push_back({"decay", name, ratio, 1e-2, ratio <= 1e-2});
        }
    }
}

void suite_quotient(std::vector<VerifyRow>& rows) {
    Rng rng(20240811u);
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<cplx> fc(7);
        for (auto& c : fc) c = rng.uniform_disk();
        PowerSeries f(fc);
        std::vector<cplx> uc(5);
        uc[0] = 1.0;
        for (std::size_t k = 1; k < uc.size(); ++k) uc[k] = 0.15 * rng.uniform_disk();
        PowerSeries u(uc);
        int N = 1 + static_cast<int>(rng.next_u64() % 4);
        std::vector<cplx> points(50);
        for (auto& z : points) z = rng.uniform_disk(0.9);
        std::vector<cplx> got = quotient_radial_derivative(f, u, N, points);
        PowerSeries oracle = radial_derivative(divide(f, u, kDefaultTruncation),
                                               static_cast<double>(N));
        for (std::size_t i = 0; i < points.size(); ++i) {
            cplx want = evaluate(oracle, points[i]);
            double scale = std::max(1.0, std::abs(want));
            worst = std::max(worst, std::abs(got[i] - want) / scale);
        }
    }
    rows.push_back({"quotient",
                    "explicit quotient-derivative formula vs series division, 10 "
                    "symbols x 50 points",
                    worst, 1e-9, worst <= 1e-9});

    bool rejected = false;
    try {
        PowerSeries one({cplx(1.0)});
        quotient_radial_derivative(one, one, 0, {cplx(0.5)});
    } catch (const std::exception&) {
        rejected = true;
    }
    rows.push_back({"quotient", "derivative order 0 rejected (identity fails there)",
                    rejected ? 0.0 : 1.0, 0.0, rejected});
}

int cmd_verify(const std::string& suite) {
    std::vector<VerifyRow> rows = run_verify_suite(suite);
    std::printf("%-10s %-72s %12s %12s %s\n", "suite", "check", "measure", "limit",
                "result");
    int failures = 0;
    for (const auto& row : rows) {
        if (!row.pass) ++failures;
        std::printf("%-10s %-72s %12.3g %12.3g %s\n", row.suite.c_str(),
                    row.name.c_str(), row.measure, row.limit,
                    row.pass ? "pass" : "FAIL");
    }
    std::printf("%zu checks, %d failure%s\n", rows.size(), failures,
                failures == 1 ? "" : "s");
    return failures == 0 ? 0 : 1;
}

// --------------------------------------------------------------- run_cli

nlohmann::json load_config(const std::string& path) {
    if (path.empty()) return nlohmann::json::object();
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("--config: cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    nlohmann::json j = nlohmann::json::parse(buf.str());
    if (!j.is_object()) throw std::invalid_argument("--config: expected a JSON object");
    return j;
}

}  // namespace

std::vector<VerifyRow> run_verify_suite(const std::string& suite) {
    std::vector<VerifyRow> rows;
    bool all = suite == "all";
    bool known = all;
    auto want = [&](const char* name) { return all || suite == name; };
    if (want("stirling")) known = true, suite_stirling(rows);
    if (want("parseval")) known = true, suite_parseval(rows);
    if (want("chu")) known = true, suite_chu(rows);
    if (want("exponents")) known = true, suite_exponents(rows);
    if (want("decay")) known = true, suite_decay(rows);
    if (want("quotient")) known = true, suite_quotient(rows);
    if (!known)
        throw std::invalid_argument(
            "--suite: expected stirling|parseval|chu|exponents|decay|quotient|all");
    return rows;
}

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"spectra, norms, and multiplier analysis for analytic symbols on "
                 "the unit ball"};
    app.require_subcommand(1);

    std::string arg_u, arg_space, arg_config, arg_lambda, arg_xi, arg_svg;
    std::string arg_suite;
    int arg_kmax = 0;
    bool arg_annulus = false;

    struct Sub {
        CLI::App* cmd = nullptr;
        CLI::Option *u = nullptr, *space = nullptr, *lambda = nullptr, *xi = nullptr,
                    *svg = nullptr, *kmax = nullptr, *annulus = nullptr,
                    *suite = nullptr;
    };
    auto add_common = [&](CLI::App* cmd, Sub& sub, bool with_space) {
        sub.cmd = cmd;
        sub.u = cmd->add_option("-u,--symbol", arg_u, "symbol expression, e.g. \"(1+z)/2\"");
        if (with_space)
            sub.space = cmd->add_option("--space", arg_space, "space spec as JSON");
        cmd->add_option("--config", arg_config, "JSON file supplying any of the flags");
    };

    Sub s_norm, s_spec, s_ess, s_fred, s_mult, s_scan, s_verify;
    add_common(app.add_subcommand("norm", "norm with a certified bracket"), s_norm, true);
    add_common(app.add_subcommand("spectrum", "spectrum of the multiplication operator"),
               s_spec, false);
    s_spec.svg = s_spec.cmd->add_option("--svg", arg_svg, "write an SVG picture here");
    add_common(app.add_subcommand("ess-spectrum", "essential spectrum (theorem-gated)"),
               s_ess, true);
    s_ess.annulus = s_ess.cmd->add_flag("--annulus", arg_annulus,
                                        "occupancy intersection of annulus images");
    s_ess.svg = s_ess.cmd->add_option("--svg", arg_svg, "write an SVG picture here");
    add_common(app.add_subcommand("fredholm", "Fredholm verdict and index at lambda"),
               s_fred, true);
    s_fred.lambda = s_fred.cmd->add_option("--lambda", arg_lambda,
                                           "spectral parameter, e.g. 0.5+0.1i");
    add_common(app.add_subcommand("multiplier", "multiplier membership verdict"),
               s_mult, true);
    add_common(app.add_subcommand("peak-scan",
                                  "peak-family norm-ratio refutation scan (CSV)"),
               s_scan, true);
    s_scan.xi = s_scan.cmd->add_option("--xi", arg_xi, "unimodular peak point");
    s_scan.kmax = s_scan.cmd->add_option("--kmax", arg_kmax,
                                         "largest peak degree (grid 8,16,...,kmax)");
    Sub& sv = s_verify;
    sv.cmd = app.add_subcommand("verify", "run named invariant suites");
    sv.suite = sv.cmd->add_option("--suite", arg_suite,
                                  "stirling|parseval|chu|exponents|decay|quotient|all");
    sv.cmd->add_option("--config", arg_config, "JSON file supplying any of the flags");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        nlohmann::json cfg = load_config(arg_config);
        auto eff_str = [&](CLI::Option* opt, std::string& value, const char* key) {
            if ((opt == nullptr || opt->count() == 0) && cfg.contains(key)) {
                const auto& v = cfg.at(key);
                value = v.is_string() ? v.get<std::string>() : v.dump();
            }
        };
        auto require = [](const std::string& value, const char* what) {
            if (value.empty())
                throw std::invalid_argument(std::string("missing ") + what);
        };

        auto symbol_of = [&](Sub& sub) {
            eff_str(sub.u, arg_u, "symbol");
            require(arg_u, "--symbol");
            return arg_u;
        };
        auto space_of = [&](Sub& sub) {
            eff_str(sub.space, arg_space, "space");
            require(arg_space, "--space");
            return parse_space_arg(arg_space);
        };

        if (s_norm.cmd->parsed()) return cmd_norm(symbol_of(s_norm), space_of(s_norm));
        if (s_spec.cmd->parsed()) {
            eff_str(s_spec.svg, arg_svg, "svg");
            return cmd_spectrum(symbol_of(s_spec), arg_svg);
        }
        if (s_ess.cmd->parsed()) {
            eff_str(s_ess.svg, arg_svg, "svg");
            if (s_ess.annulus->count() == 0 && cfg.contains("annulus"))
                arg_annulus = cfg.at("annulus").get<bool>();
            return cmd_ess_spectrum(symbol_of(s_ess), space_of(s_ess), arg_annulus,
                                    arg_svg);
        }
        if (s_fred.cmd->parsed()) {
            eff_str(s_fred.lambda, arg_lambda, "lambda");
            require(arg_lambda, "--lambda");
            return cmd_fredholm(symbol_of(s_fred),
                                parse_complex_arg(arg_lambda, "--lambda"),
                                space_of(s_fred));
        }
        if (s_mult.cmd->parsed())
            return cmd_multiplier(symbol_of(s_mult), space_of(s_mult));
        if (s_scan.cmd->parsed()) {
            eff_str(s_scan.xi, arg_xi, "xi");
            require(arg_xi, "--xi");
            if (s_scan.kmax->count() == 0 && cfg.contains("kmax"))
                arg_kmax = cfg.at("kmax").get<int>();
            if (arg_kmax == 0) arg_kmax = 1024;
            return cmd_peak_scan(symbol_of(s_scan),
                                 parse_complex_arg(arg_xi, "--xi"), space_of(s_scan),
                                 arg_kmax);
        }
        if (sv.cmd->parsed()) {
            eff_str(sv.suite, arg_suite, "suite");
            if (arg_suite.empty()) arg_suite = "all";
            return cmd_verify(arg_suite);
        }
        return 2;
    } catch (const HypothesisError& e) {
        std::printf("{\"schema_version\":1,\"error\":\"hypothesis_not_met\","
                    "\"detail\":\"%s\"}\n",
                    json_escape(e.what()).c_str());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}

}  // namespace multspec
