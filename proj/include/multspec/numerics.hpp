#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace multspec {

using cplx = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

// Global numeric knobs. rel_tol drives certified-bound refinement and
// "is this a zero" style decisions; boundary_refine_depth controls how far
// the geometric radius grid 1 - 2^-j is pushed toward the unit circle.
struct ToleranceConfig {
    double rel_tol = 1e-9;
    int boundary_refine_depth = 14;
    double slope_fit_tol = 0.05;
};

// Product rule on the unit disk for integrals against the normalized measure
// dA_alpha = (alpha+1)(1-|z|^2)^alpha dA.  Radial nodes are (radius, weight)
// pairs in s = r^2 with the weight (alpha+1)(1-s)^alpha already folded in,
// so the weights of a rule sum to 1.  Angles are equispaced (trapezoid rule).
struct QuadratureRule {
    double alpha = 0.0;
    std::vector<std::pair<double, double>> radial_nodes;
    int angular_count = 64;
};

// Gauss rule with `radial_count` nodes in s = r^2 against (alpha+1)(1-s)^alpha,
// exact for radial polynomials in s up to degree 2*radial_count - 1.
QuadratureRule make_disk_rule(double alpha, int radial_count, int angular_count);

// Rule sized so that integrands polynomial in z, conj(z) of total degree
// <= degree integrate exactly (degree/2 + 1 radial nodes, degree+1 angles,
// padded a little).
QuadratureRule disk_rule_for_degree(double alpha, int degree);

// Log of the Gamma function via a fixed-coefficient Lanczos approximation
// (g = 671/128, 14 terms) with the reflection formula below 1/2.
// Throws std::domain_error for x <= 0.
double log_gamma(double x);

// log C(k, n) for real arguments with k >= n >= 0.
double log_binomial(double k, double n);

struct GammaRatioCheck {
    double ratio1_error = 0.0;  // | Gamma(K+L) / (K^L Gamma(K)) - 1 |
    double ratio2_error = 0.0;  // rel. err of Gamma(2K+L)/(Gamma(K+L)Gamma(K+M))
                                // against 2^(2K+L-1) K^(1/2-M) / sqrt(pi)
};
GammaRatioCheck gamma_ratio_check(double K, double L, double M);

// Integral of a real-valued integrand over the unit disk against dA_alpha.
double disk_integral(const std::function<double(cplx)>& values,
                     const QuadratureRule& rule);

// Trapezoid mean (1/count) sum f(2 pi j / count) over equispaced angles.
// Exact for trigonometric polynomials of degree < count.
double circle_mean(const std::function<double(double)>& values, int count);

struct WindingResult {
    bool on_curve = false;  // lambda within rel_tol * diameter of the curve
    int winding = 0;        // defined only when !on_curve
};

// Winding number of a closed polyline around lambda, accumulated via
// per-segment argument increments (each below pi by construction).
WindingResult winding_number(const std::vector<cplx>& curve, cplx lambda,
                             double rel_tol = 1e-9);

// Distance from a point to the polyline (closing segment included).
double curve_distance(const std::vector<cplx>& curve, cplx lambda);
double curve_diameter(const std::vector<cplx>& curve);

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double max_residual = 0.0;  // max |log y - (slope log x + intercept)|
};

// Least-squares line through (log x, log y); needs >= 3 positive pairs.
SlopeFit fit_loglog_slope(const std::vector<std::pair<double, double>>& xy);

// Neumaier compensated accumulator for long coefficient sums.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double v) {
        double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            carry += (sum - t) + v;
        else
            carry += (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + carry; }
};

// Deterministic across platforms (splitmix64 core); std:: distributions are
// implementation-defined, so uniforms are derived from the raw bits directly.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next_u64();
    double uniform();                       // [0, 1)
    double uniform(double lo, double hi);   // [lo, hi)
    cplx uniform_disk(double radius = 1.0); // |z| < radius, rejection-free
  private:
    std::uint64_t state_;
};

// Halton low-discrepancy sequence value, index >= 0, dimension picks the base.
double halton(std::uint64_t index, int dimension);

// Runs fn(i) for i in [0, n) across worker threads; the MULTSPEC_THREADS
// environment variable caps the pool.  Each index is handled exactly once, so
// results written per-slot are deterministic regardless of thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);
int worker_thread_count();

}  // namespace multspec
