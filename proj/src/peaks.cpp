#include "multspec/peaks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "multspec/spaces.hpp"

namespace multspec {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

void require_unimodular(cplx xi) {
    if (std::abs(std::abs(xi) - 1.0) > 1e-9)
        throw std::domain_error("peak function: xi must lie on the unit circle");
}

// Falling factorial k (k-1) ... (k-i+1) = k! / (k-i)!.
double falling_factorial(int k, int i) {
    double v = 1.0;
    for (int t = 0; t < i; ++t) v *= static_cast<double>(k - t);
    return v;
}

// Stirling numbers of the second kind S(m, i) for i = 0..m; R^m = sum_i
// S(m, i) z^i D^i on analytic functions.
std::vector<double> stirling_row(int m) {
    std::vector<double> row{1.0};  // S(0,0)
    for (int n = 1; n <= m; ++n) {
        std::vector<double> next(n + 1, 0.0);
        for (int i = 1; i <= n; ++i)
            next[i] = static_cast<double>(i) * (i < static_cast<int>(row.size()) ? row[i] : 0.0) +
                      row[i - 1];
        row = std::move(next);
    }
    return row;
}

}  // namespace

std::vector<int> default_k_grid() {
    std::vector<int> ks;
    for (int k = 8; k <= 4096; k *= 2) ks.push_back(k);
    return ks;
}

PowerSeries peak_function(cplx xi, int k) {
    require_unimodular(xi);
    if (k < 0) throw std::domain_error("peak function: k must be >= 0");
    std::vector<cplx> coeffs(static_cast<std::size_t>(k) + 1);
    cplx xibar_pow = 1.0;
    const cplx xibar = std::conj(xi);
    for (int m = 0; m <= k; ++m) {
        double mag = std::exp(log_binomial(k, m) - k * kLn2);
        coeffs[static_cast<std::size_t>(m)] = mag * xibar_pow;
        xibar_pow *= xibar;
    }
    return PowerSeries(std::move(coeffs));
}

double peak_norm_exact_H2beta(int k, double beta) {
    if (k < 0) throw std::domain_error("peak norm: k must be >= 0");
    KahanSum sum;
    for (int m = 0; m <= k; ++m)
        sum.add(std::exp(2.0 * (log_binomial(k, m) - k * kLn2) +
                         2.0 * beta * std::log1p(static_cast<double>(m))));
    return std::sqrt(sum.value());
}

ParsevalCheck parseval_check(int K, double r) {
    if (K < 0) throw std::domain_error("parseval check: K must be >= 0");
    if (r < 0.0 || r >= 1.0) throw std::domain_error("parseval check: r must lie in [0, 1)");
    ParsevalCheck out;
    const int count = std::max(4 * K + 4, 64);
    out.quadrature = circle_mean(
        [&](double t) {
            double mod2 = 1.0 + 2.0 * r * std::cos(t) + r * r;
            return std::pow(mod2, static_cast<double>(K));
        },
        count);
    KahanSum sum;
    for (int m = 0; m <= K; ++m) {
        if (r == 0.0 && m > 0) break;  // only the constant term survives
        sum.add(std::exp(2.0 * log_binomial(K, m) + (m > 0 ? 2.0 * m * std::log(r) : 0.0)));
    }
    out.coefficient_sum = sum.value();
    out.rel_diff = std::abs(out.quadrature - out.coefficient_sum) /
                   std::max(1.0, std::abs(out.coefficient_sum));
    return out;
}

ChuVandermondeCheck chu_vandermonde_check(int K, double g) {
    if (K < 0) throw std::domain_error("binomial moment check: K must be >= 0");
    if (g <= -1.0) throw std::domain_error("binomial moment check: needs g > -1");
    ChuVandermondeCheck out;
    const double lg_g1 = log_gamma(g + 1.0);
    KahanSum lhs;
    for (int m = 0; m <= K; ++m)
        lhs.add(std::exp(2.0 * log_binomial(K, m) + lg_g1 + log_gamma(m + 1.0) -
                         log_gamma(m + g + 2.0)));
    out.lhs = lhs.value();
    out.rhs = std::exp(lg_g1 + log_gamma(2.0 * K + g + 2.0) - 2.0 * log_gamma(K + g + 2.0));
    out.rel_diff = std::abs(out.lhs - out.rhs) / std::abs(out.rhs);
    return out;
}

ExponentCheck peak_norm_exponent(const SpaceSpec& space, const PeakFamily& family,
                                 const ToleranceConfig& cfg) {
    if (space.n != 1)
        throw std::invalid_argument("peak norm exponent: implemented for n = 1 only");
    double predicted = 0.0;
    switch (space.variant) {
        case SpaceVariant::Bloch:
            predicted = 1.0 - space.alpha;
            break;
        case SpaceVariant::BergmanSobolev:
        case SpaceVariant::HardySobolev:
            predicted = (space.beta * space.p - space.alpha - 1.5) / space.p;
            break;
        default:
            throw std::invalid_argument(
                "peak norm exponent: supported scales are Bloch, Bergman-Sobolev and "
                "Hardy-Sobolev");
    }
    require_unimodular(family.xi);
    if (family.k_grid.size() < 3)
        throw std::invalid_argument("peak norm exponent: need at least 3 grid points");

    ExponentCheck out;
    out.predicted_slope = predicted;
    out.points.resize(family.k_grid.size());
    for (std::size_t i = 0; i < family.k_grid.size(); ++i) {
        int k = family.k_grid[i];
        if (k < 1) throw std::invalid_argument("peak norm exponent: k grid must be positive");
        double value = norm(space, peak_function(family.xi, k), cfg);
        out.points[i] = {static_cast<double>(k) + 1.0, value};
    }
    out.fitted_slope = fit_loglog_slope(out.points).slope;
    out.difference = std::abs(out.fitted_slope - out.predicted_slope);
    return out;
}

AsymptoteCheck exact_asymptote_check(int p, double gamma, int j,
                                     const std::vector<int>& k_grid) {
    if (p < 1) throw std::domain_error("asymptote check: p must be a positive integer");
    if (gamma <= -1.0) throw std::domain_error("asymptote check: needs gamma > -1");
    if (j < 0) throw std::domain_error("asymptote check: j must be >= 0");

    AsymptoteCheck out;
    out.constant = std::exp(log_gamma(gamma + 2.0) + (2.0 * gamma + 2.5 - j * p) * kLn2 -
                            0.5 * std::log(kPi) - (gamma + 1.5) * std::log(double(p)));
    const SpaceSpec bergman = SpaceSpec::bergman_sobolev(double(p), gamma, 0.0);
    out.ratios.reserve(k_grid.size());
    for (int k : k_grid) {
        if (k <= j) throw std::domain_error("asymptote check: k grid must exceed j");
        // D^j f_{1,k} = (k!/(k-j)!) 2^{-j} ((1+z)/2)^{k-j}.
        PowerSeries djf = scale(peak_function(cplx(1.0), k - j),
                                std::exp(log_gamma(k + 1.0) - log_gamma(k - j + 1.0)) /
                                    std::pow(2.0, j));
        double value = norm(bergman, djf);
        double quadrature_power = std::pow(value, double(p));
        double formula = out.constant *
                         std::pow(static_cast<double>(k) + 1.0, j * p - gamma - 1.5);
        out.ratios.emplace_back(k, quadrature_power / formula);
    }
    return out;
}

std::vector<std::pair<int, double>> uniform_decay_check(const PeakFamily& family,
                                                        double delta, int m,
                                                        const ToleranceConfig& cfg) {
    require_unimodular(family.xi);
    if (delta <= 0.0 || delta >= 2.0)
        throw std::domain_error("uniform decay check: delta must lie in (0, 2)");
    if (m < 0) throw std::domain_error("uniform decay check: m must be >= 0");

    const cplx xi = family.xi;
    const cplx xibar = std::conj(xi);
    const std::vector<double> stirling = stirling_row(m);
    const int radial = 64, angular = 512;

    std::vector<std::pair<int, double>> out(family.k_grid.size());
    for (std::size_t idx = 0; idx < family.k_grid.size(); ++idx) {
        int k = family.k_grid[idx];
        if (k < 1) throw std::invalid_argument("uniform decay check: k grid must be positive");
        double nrm = norm(family.space, peak_function(xi, k), cfg);
        double best = 0.0;
        for (int t = 0; t <= radial; ++t) {
            double r = static_cast<double>(t) / radial;
            for (int a = 0; a < angular; ++a) {
                cplx z = std::polar(r, kTwoPi * a / angular);
                if (std::abs(z - xi) < delta) continue;
                // R^m f = sum_i S(m,i) z^i (k)_i (xibar/2)^i w^{k-i},
                // w = (1 + xibar z)/2.
                cplx w = 0.5 * (1.0 + xibar * z);
                cplx acc = 0.0;
                for (int i = 0; i <= m && i <= k; ++i) {
                    cplx term = stirling[static_cast<std::size_t>(i)] *
                                falling_factorial(k, i) * std::pow(0.5 * xibar, i) *
                                std::pow(z, i) * std::pow(w, k - i);
                    acc += term;
                }
                best = std::max(best, std::abs(acc) / nrm);
            }
        }
        out[idx] = {k, best};
    }
    return out;
}

DivideBoundCheck bloch_divide_bound_check(const PowerSeries& f, cplx z0, int N,
                                          double alpha) {
    if (alpha < 0.0)
        throw std::domain_error("divide bound check: weight exponent must be >= 0");
    if (std::abs(z0) >= 1.0)
        throw std::domain_error("divide bound check: z0 must lie in the open disk");
    if (N < 0) throw std::domain_error("divide bound check: N must be >= 0");
    double scale0 = std::max(1.0, f.coeff_scale());
    if (std::abs(evaluate(f, z0)) > 1e-8 * scale0)
        throw std::domain_error("divide bound check: f(z0) must vanish");

    PowerSeries g = divide_by_root(f, z0, 1e-7);
    PowerSeries dNg = g;
    for (int t = 0; t < N; ++t) dNg = complex_derivative(dNg);
    PowerSeries dNf = f;
    for (int t = 0; t < N; ++t) dNf = complex_derivative(dNf);

    DivideBoundCheck out;
    const double a = 0.5 * (1.0 + std::abs(z0));
    const int radial = 64, angular = 1024;
    for (int t = 1; t <= radial; ++t) {
        double r = a + (1.0 - a) * static_cast<double>(t) / radial;
        double w = std::pow(std::max(0.0, 1.0 - r * r), alpha);
        if (w == 0.0) continue;
        for (int j = 0; j < angular; ++j) {
            cplx z = std::polar(r, kTwoPi * j / angular);
            out.measured = std::max(out.measured, w * std::abs(evaluate(dNg, z)));
        }
    }

    // M = sup_D v |D^N f| + (sup v) sum_{j<N} |D^j f(0)|, sup v = 1 at 0.
    double M = weighted_sup(dNf, alpha).upper;
    double fact = 1.0;
    for (int j = 0; j < N; ++j) {
        M += fact * std::abs(f.coeff(j));
        fact *= static_cast<double>(j + 1);
    }
    double factN = 1.0;
    for (int j = 2; j <= N; ++j) factN *= static_cast<double>(j);
    KahanSum tail;
    for (int j = 0; j <= N; ++j)
        tail.add(factN * std::pow(2.0 / (1.0 - std::abs(z0)), N - j + 1));
    out.proof_bound = M * tail.value();
    return out;
}

std::string scan_to_csv(const std::vector<std::pair<int, double>>& rows,
                        const std::string& value_label) {
    std::string out = "k," + value_label + "\n";
    char buf[64];
    for (const auto& [k, v] : rows) {
        std::snprintf(buf, sizeof buf, "%d,%.17g\n", k, v);
        out += buf;
    }
    return out;
}

}  // namespace multspec
