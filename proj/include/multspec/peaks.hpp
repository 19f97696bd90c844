#pragma once

#include <string>
#include <utility>
#include <vector>

#include "multspec/numerics.hpp"
#include "multspec/series.hpp"
#include "multspec/spaces.hpp"

namespace multspec {

// Boundary-peaking polynomial family ((1 + conj(xi) z) / 2)^k: value 1 at
// z = xi, modulus < 1 everywhere else on the closed disk, so powers
// concentrate at xi.  The checks in this header quantify how the norms of
// these functions grow or decay with k on each space scale.
struct PeakFamily {
    cplx xi{1.0, 0.0};        // unimodular peak point
    std::vector<int> k_grid;  // strictly increasing, all >= 1
    SpaceSpec space;
};

// {8, 16, ..., 4096}: two decades in k, enough for slope fits at the
// default slope_fit_tol.
std::vector<int> default_k_grid();

// Coefficients binom(k, m) conj(xi)^m / 2^k for m = 0..k, computed with
// log-space binomials so k = 4096 stays finite.  |xi| must be 1 (1e-9).
PowerSeries peak_function(cplx xi, int k);

// Coefficient-exact Hardy-Sobolev norm of the peak function:
// sqrt( sum_{m=0}^k (1+m)^{2 beta} binom(k,m)^2 4^{-k} ).
double peak_norm_exact_H2beta(int k, double beta);

struct ParsevalCheck {
    double quadrature = 0.0;       // (1/2pi) angular quadrature of |1+r e^{it}|^{2K}
    double coefficient_sum = 0.0;  // sum_m binom(K,m)^2 r^{2m}
    double rel_diff = 0.0;
};
// Both sides of the circle-mean identity for (1 + r e^{it})^K; the angular
// rule uses at least 4K + 4 nodes so the trigonometric sum is exact.
ParsevalCheck parseval_check(int K, double r);

struct ChuVandermondeCheck {
    double lhs = 0.0;  // sum_m binom(K,m)^2 Gamma(g+1) Gamma(m+1) / Gamma(m+g+2)
    double rhs = 0.0;  // Gamma(g+1) Gamma(2K+g+2) / Gamma(K+g+2)^2
    double rel_diff = 0.0;
};
// Binomial-moment identity used to evaluate radial integrals of peak
// functions in closed form; g > -1 required.
ChuVandermondeCheck chu_vandermonde_check(int K, double g);

struct ExponentCheck {
    double fitted_slope = 0.0;
    double predicted_slope = 0.0;
    double difference = 0.0;
    std::vector<std::pair<double, double>> points;  // (k + 1, computed norm)
};
// Fits ln ||f_{xi,k}|| against ln(k+1) over the family's grid and compares
// with the closed-form exponent of the scale:
//   Bergman-Sobolev / Hardy-Sobolev:  (beta p - alpha - 3/2) / p
//   Bloch:                            1 - alpha
ExponentCheck peak_norm_exponent(const SpaceSpec& space, const PeakFamily& family,
                                 const ToleranceConfig& cfg = ToleranceConfig());

struct AsymptoteCheck {
    double constant = 0.0;                       // the closed-form prefactor
    std::vector<std::pair<int, double>> ratios;  // (k, quadrature / formula)
};
// Quadrature value of ||D^j f_{1,k}||_{A^p_gamma}^p against the sharp
// asymptote Gamma(gamma+2) 2^(2 gamma + 5/2 - j p) / (sqrt(pi) p^(gamma+3/2))
// * (k+1)^(j p - gamma - 3/2).  The prefactor is exact for integer p only,
// so non-integer p is rejected.
AsymptoteCheck exact_asymptote_check(int p, double gamma, int j,
                                     const std::vector<int>& k_grid);

// sup over {|z| <= 1, |z - xi| >= delta} of |R^m g_{xi,k}| where g is the
// peak function normalized in family.space; the values tend to 0 along k.
std::vector<std::pair<int, double>> uniform_decay_check(
    const PeakFamily& family, double delta, int m,
    const ToleranceConfig& cfg = ToleranceConfig());

struct DivideBoundCheck {
    double measured = 0.0;     // grid sup over T of (1-|z|^2)^alpha |D^N (f/(z-z0))|
    double proof_bound = 0.0;  // M_{f,N} sum_{j=0}^N N! 2^(N-j+1) / (1-|z0|)^(N-j+1)
};
// Checks the explicit constant in the weighted-sup bound for dividing out a
// zero: on T = {|z| > (1 + |z0|)/2} the weighted N-th derivative of
// f / (z - z0) is controlled by the weighted N-th derivative data of f.
// Requires |f(z0)| ~ 0 and alpha >= 0.
DivideBoundCheck bloch_divide_bound_check(const PowerSeries& f, cplx z0, int N,
                                          double alpha);

// "k,value" CSV rows (17 significant digits), one per pair, with a header.
std::string scan_to_csv(const std::vector<std::pair<int, double>>& rows,
                        const std::string& value_label = "value");

}  // namespace multspec
