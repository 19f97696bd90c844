// End-to-end acceptance harness: each check prints exactly one PASS/FAIL
// line and the process exit code is the number of failures.
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include "multspec/multipliers.hpp"
#include "multspec/numerics.hpp"
#include "multspec/peaks.hpp"
#include "multspec/series.hpp"
#include "multspec/spaces.hpp"
#include "multspec/spectra.hpp"
#include "multspec/symbols.hpp"

using namespace multspec;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* pattern, ...) {
    char buf[256];
    va_list args;
    va_start(args, pattern);
    std::vsnprintf(buf, sizeof buf, pattern, args);
    va_end(args);
    return buf;
}

// Membership over a 41 x 41 grid of side 3 centered at `center` compared
// with the indicator of the disk |lambda - disk_center| <= 1; boundary
// answers are accepted either way.
int grid_mismatches(const SpectrumEstimate& est, cplx center, cplx disk_center) {
    int bad = 0;
    for (int iy = 0; iy <= 40; ++iy) {
        for (int ix = 0; ix <= 40; ++ix) {
            cplx lam = center + cplx(-1.5 + 0.075 * ix, -1.5 + 0.075 * iy);
            Membership m = membership(est, lam);
            if (m == Membership::Boundary) continue;
            bool inside = std::abs(lam - disk_center) <= 1.0;
            if (inside != (m == Membership::Inside)) ++bad;
        }
    }
    return bad;
}

bool check01(std::string& note) {
    auto t0 = std::chrono::steady_clock::now();
    SpectrumEstimate s1 = spectrum(Symbol::coordinate(1));
    int bad1 = grid_mismatches(s1, cplx(0.0), cplx(0.0));
    double secs1 = seconds_since(t0);

    auto t1 = std::chrono::steady_clock::now();
    SpectrumEstimate s2 = spectrum(Symbol::poly({cplx(-2.0), cplx(1.0)}));
    int bad2 = grid_mismatches(s2, cplx(-2.0), cplx(-2.0));
    double secs2 = seconds_since(t1);

    double band = std::max(s1.resolution.boundary_band, s2.resolution.boundary_band);
    note = fmt("mismatches %d + %d of 1681, band %.3g, %.2fs + %.2fs", bad1, bad2, band,
               secs1, secs2);
    return bad1 == 0 && bad2 == 0 && band <= 0.01 && secs1 < 1.0 && secs2 < 1.0;
}

bool check02(std::string& note) {
    SpectrumEstimate ess =
        essential_spectrum(Symbol::coordinate(1), SpaceSpec::bloch(0.5));
    double worst = 0.0;
    std::size_t points = 0;
    for (const auto& curve : ess.boundary_curves)
        for (cplx p : curve) {
            worst = std::max(worst, std::abs(std::abs(p) - 1.0));
            ++points;
        }
    Membership m_ess = membership(ess, cplx(0.0));
    Membership m_full = membership(spectrum(Symbol::coordinate(1)), cplx(0.0));
    note = fmt("max ||point|-1| = %.3g over %zu points, 0 is %s/%s", worst, points,
               membership_name(m_ess).c_str(), membership_name(m_full).c_str());
    return ess.hypotheses_met && points > 0 && worst <= 1e-6 &&
           m_ess == Membership::Outside && m_full == Membership::Inside;
}

bool check03(std::string& note) {
    Symbol u = Symbol::sum({Symbol::coordinate(1),
                            Symbol::product({Symbol::constant(0.0), Symbol::coordinate(2)})});
    SpectrumEstimate s = spectrum(u);
    SpectrumEstimate e = essential_spectrum(u, SpaceSpec::hardy(2.0));
    bool same_shape = s.grid.nx == 64 && s.grid.ny == 64 && e.grid.nx == 64 &&
                      e.grid.ny == 64 && s.resolution.grid_size == 64;
    bool same_cells = same_shape && s.grid.cells == e.grid.cells;

    // every cell center in the unit disk is occupied within one cell
    bool covered = true;
    double diag = std::hypot(s.grid.dx, s.grid.dy);
    for (int j = 0; j < s.grid.ny && covered; ++j)
        for (int i = 0; i < s.grid.nx && covered; ++i) {
            double cx = s.grid.x0 + (i + 0.5) * s.grid.dx;
            double cy = s.grid.y0 + (j + 0.5) * s.grid.dy;
            if (std::hypot(cx, cy) > 1.0 - diag) continue;
            bool near = false;
            for (int dj = -1; dj <= 1 && !near; ++dj)
                for (int di = -1; di <= 1 && !near; ++di)
                    near = s.grid.occupied(i + di, j + dj);
            covered = near;
        }
    note = fmt("64x64 masks %s, disk coverage %s", same_cells ? "identical" : "DIFFER",
               covered ? "within one cell" : "INCOMPLETE");
    return e.hypotheses_met && same_cells && covered;
}

bool check04(std::string& note) {
    PeakFamily fam;
    fam.xi = cplx(1.0);
    fam.k_grid = {64, 128, 256, 512, 1024, 2048, 4096};
    double worst = 0.0, worst_secs = 0.0;
    for (double beta : {0.75, 1.0, 2.0}) {
        auto t0 = std::chrono::steady_clock::now();
        ExponentCheck ec = peak_norm_exponent(SpaceSpec::hardy_sobolev(beta), fam);
        worst_secs = std::max(worst_secs, seconds_since(t0));
        double squared_err = std::abs(2.0 * ec.fitted_slope - (2.0 * beta - 0.5));
        worst = std::max(worst, squared_err);
    }
    note = fmt("max |squared-norm slope - (2b - 1/2)| = %.4f, slowest fit %.2fs", worst,
               worst_secs);
    return worst <= 0.05 && worst_secs < 10.0;
}

bool check05(std::string& note) {
    PeakFamily fam;
    fam.xi = cplx(1.0);
    fam.k_grid = {64, 128, 256, 512, 1024};
    ExponentCheck ec = peak_norm_exponent(SpaceSpec::bergman_sobolev(2.0, 0.0, 2.0), fam);
    double quad_err = std::abs(2.0 * ec.fitted_slope - 2.5);

    double worst_bloch = 0.0;
    for (double alpha : {0.25, 0.5, 1.0}) {
        ExponentCheck bc = peak_norm_exponent(SpaceSpec::bloch(alpha), fam);
        worst_bloch = std::max(worst_bloch, std::abs(bc.fitted_slope - (1.0 - alpha)));
    }
    note = fmt("quadrature squared-slope err %.4f (<= 0.1), sup-slope err %.4f (<= 0.05)",
               quad_err, worst_bloch);
    return quad_err <= 0.1 && worst_bloch <= 0.05;
}

bool check06(std::string& note) {
    double r0 = exact_asymptote_check(2, 0.0, 0, {4096}).ratios[0].second;
    double r1 = exact_asymptote_check(2, 0.0, 1, {4096}).ratios[0].second;
    note = fmt("quadrature/asymptote ratios %.4f and %.4f at k=4096", r0, r1);
    return 0.9 <= r0 && r0 <= 1.1 && 0.9 <= r1 && r1 <= 1.1;
}

bool check07(std::string& note) {
    double worst_p = 0.0;
    for (double r : {0.0, 0.5, 0.9})
        for (int K = 0; K <= 30; ++K)
            worst_p = std::max(worst_p, parseval_check(K, r).rel_diff);
    double worst_c = 0.0;
    for (double g : {-0.5, 0.0, 1.7})
        for (int K = 0; K <= 40; ++K)
            worst_c = std::max(worst_c, chu_vandermonde_check(K, g).rel_diff);
    note = fmt("circle-mean identity %.2e (<= 1e-10), moment identity %.2e (<= 1e-11)",
               worst_p, worst_c);
    return worst_p <= 1e-10 && worst_c <= 1e-11;
}

bool check08(std::string& note) {
    const double pairs[3][2] = {{0.5, 0.5}, {2.0, 1.0}, {3.0, 0.0}};
    double worst_err = 0.0, worst_factor = 1e300;
    for (auto& lm : pairs) {
        GammaRatioCheck mid = gamma_ratio_check(1000.0, lm[0], lm[1]);
        worst_err = std::max({worst_err, mid.ratio1_error, mid.ratio2_error});
        GammaRatioCheck lo = gamma_ratio_check(100.0, lm[0], lm[1]);
        GammaRatioCheck hi = gamma_ratio_check(1600.0, lm[0], lm[1]);
        worst_factor = std::min(worst_factor, lo.ratio1_error / hi.ratio1_error);
        worst_factor = std::min(worst_factor, lo.ratio2_error / hi.ratio2_error);
    }
    note = fmt("max error %.2e at K=1000, min decrease factor %.1fx (K=100 -> 1600)",
               worst_err, worst_factor);
    return worst_err <= 1e-2 && worst_factor >= 2.0;
}

bool check09(std::string& note) {
    SpaceSpec h2 = SpaceSpec::hardy(2.0);
    FredholmReport fr =
        fredholm_analysis(Symbol::poly({cplx(1.0), cplx(-2.5), cplx(1.0)}), cplx(0.0), h2);
    bool ok = fr.fredholm && fr.index_defined && fr.index == -1;

    for (int m = 1; m <= 3 && ok; ++m) {
        FredholmReport fm = fredholm_analysis(
            Symbol::integer_power(Symbol::coordinate(1), m), cplx(0.0), h2);
        ok = fm.fredholm && fm.index_defined && fm.index == -m;
    }

    // the index flips exactly where the ray crosses the boundary image
    cplx dir = std::polar(1.0, kPi / 7.0);
    for (double t : {0.5, 0.9, 0.99}) {
        FredholmReport f = fredholm_analysis(Symbol::coordinate(1), t * dir, h2);
        ok = ok && f.fredholm && f.index == -1;
    }
    for (double t : {1.01, 1.1, 2.0}) {
        FredholmReport f = fredholm_analysis(Symbol::coordinate(1), t * dir, h2);
        ok = ok && f.fredholm && f.index == 0;
    }
    note = ok ? "indices -1, -1, -2, -3; ray sweep flips -1 -> 0 across the boundary"
              : "an index or verdict disagrees with the zero count";
    return ok;
}

bool check10(std::string& note) {
    Rng rng(20240814u);
    int compared = 0, disagreements = 0, attempts = 0;
    while (compared < 30 && attempts < 400) {
        ++attempts;
        int pdeg = 1 + static_cast<int>(rng.next_u64() % 4);
        std::vector<cplx> pc(static_cast<std::size_t>(pdeg) + 1);
        for (auto& c : pc) c = rng.uniform_disk(1.2);
        if (compared % 2 == 0) pc[0] += cplx(2.0, 0.0);  // half the draws invertible
        std::vector<cplx> qc(4);
        qc[0] = 1.0;
        for (std::size_t k = 1; k < qc.size(); ++k) qc[k] = 0.15 * rng.uniform_disk();
        Symbol u = Symbol::quotient(Symbol::poly(pc), Symbol::poly(qc));

        SpectrumEstimate est = spectrum(u);
        double dist0 = 1e300;
        for (const auto& curve : est.boundary_curves)
            for (cplx p : curve) dist0 = std::min(dist0, std::abs(p));
        if (dist0 <= 2.0 * est.resolution.boundary_band) continue;  // too close to call

        bool outside = membership(est, cplx(0.0)) == Membership::Outside;
        if (is_invertible(u).invertible != outside) ++disagreements;
        ++compared;
    }
    note = fmt("%d rational symbols compared, %d disagreements", compared, disagreements);
    return compared == 30 && disagreements == 0;
}

bool check11(std::string& note) {
    std::vector<int> grid;
    for (int k = 8; k <= 1024; k *= 2) grid.push_back(k);
    Symbol u = Symbol::poly({cplx(0.5), cplx(0.5)});
    Symbol z = Symbol::coordinate(1);
    bool ok = true;
    double worst_drop = 0.0, control_min = 1e300;
    for (const SpaceSpec& space : {SpaceSpec::bloch(0.5), SpaceSpec::hardy_sobolev(1.0)}) {
        auto rows = peak_refutation_scan(u, cplx(-1.0), space, grid);
        double drop = rows.back().second / rows.front().second;
        worst_drop = std::max(worst_drop, drop);
        ok = ok && rows.back().second < 0.5 * rows.front().second;

        auto ctrl = peak_refutation_scan(z, cplx(1.0), space, grid);
        for (const auto& kv : ctrl) control_min = std::min(control_min, kv.second);
    }
    note = fmt("worst decay ratio %.3f (< 0.5), nonvanishing control min %.3f (> 0.2)",
               worst_drop, control_min);
    return ok && control_min > 0.2;
}

bool check12(std::string& note) {
    Rng rng(20240814u);
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
        std::vector<cplx> points(100);
        for (auto& z : points) z = rng.uniform_disk(0.9);
        std::vector<cplx> got = quotient_radial_derivative(f, u, N, points);
        PowerSeries oracle =
            radial_derivative(divide(f, u, kDefaultTruncation), static_cast<double>(N));
        for (std::size_t i = 0; i < points.size(); ++i) {
            cplx want = evaluate(oracle, points[i]);
            worst = std::max(worst,
                             std::abs(got[i] - want) / std::max(1.0, std::abs(want)));
        }
    }
    bool rejected = false;
    try {
        PowerSeries one({cplx(1.0)});
        quotient_radial_derivative(one, one, 0, {cplx(0.5)});
    } catch (const std::exception&) {
        rejected = true;
    }
    note = fmt("max relative error %.2e over 10 symbols x 100 points, order 0 %s", worst,
               rejected ? "rejected" : "ACCEPTED");
    return worst <= 1e-9 && rejected;
}

bool check13(std::string& note) {
    double worst = 0.0;
    for (const Symbol& u : {Symbol::coordinate(1), Symbol::poly({cplx(3.0), cplx(0.0), cplx(1.0)}),
                            Symbol::poly({cplx(0.5), cplx(0.5)})}) {
        SpectralRadiusReport rep = spectral_radius_report(u, SpaceSpec::bloch(0.5));
        worst = std::max({worst, std::abs(rep.sup_spectrum - rep.sup_essential),
                          std::abs(rep.sup_spectrum - rep.sup_norm_u),
                          std::abs(rep.sup_essential - rep.sup_norm_u)});
    }
    note = fmt("max pairwise gap between the three suprema %.2e (<= 1e-6)", worst);
    return worst <= 1e-6;
}

struct Check {
    const char* label;
    bool (*run)(std::string&);
};

}  // namespace

int main() {
    const Check checks[] = {
        {"spectrum membership matches the analytic disk indicator", check01},
        {"essential spectrum of the coordinate collapses to the unit circle", check02},
        {"two-variable essential spectrum coincides with the full spectrum", check03},
        {"coefficient-norm growth exponent of the peak family", check04},
        {"quadrature and weighted-sup growth exponents of the peak family", check05},
        {"sharp asymptotic constant for peak-function area norms", check06},
        {"circle-mean and binomial-moment identities", check07},
        {"large-argument gamma-ratio asymptotics", check08},
        {"Fredholm index counts interior zeros and flips at the boundary", check09},
        {"invertibility agrees with spectrum membership of the origin", check10},
        {"peak-family scan separates boundary zeros from nonvanishing symbols", check11},
        {"explicit quotient-derivative formula matches series division", check12},
        {"spectral, essential-spectral, and symbol suprema coincide", check13},
    };

    int failures = 0;
    int id = 0;
    for (const Check& c : checks) {
        ++id;
        std::string note;
        bool pass = false;
        try {
            pass = c.run(note);
        } catch (const std::exception& e) {
            note = std::string("exception: ") + e.what();
        }
        if (!pass) ++failures;
        std::printf("%02d %s  %s (%s)\n", id, pass ? "PASS" : "FAIL", c.label,
                    note.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of 13 checks passed\n", 13 - failures);
    return failures;
}
