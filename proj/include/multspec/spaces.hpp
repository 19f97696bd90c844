#pragma once

#include <string>

#include <json.hpp>

#include "multspec/numerics.hpp"
#include "multspec/series.hpp"

namespace multspec {

// Families of Banach spaces of analytic functions on the unit ball that the
// multiplier machinery understands.  Parameters live in SpaceSpec; the
// admissible ranges are enforced by the factories:
//   Bloch(alpha > 0)            |f(0)| + sup (1-|z|^2)^alpha |f'|
//   Growth(alpha > 0)           sup (1-|z|^2)^alpha |f|
//   BergmanSobolev(p>=1, alpha>-1, beta>=0)   ||(I+R)^beta f||_{A^p_alpha}
//   HardySobolev(beta>=0)       (sum (1+k)^{2 beta} |a_k|^2)^{1/2}   [p=2]
//   Hardy(p>=1)                 boundary p-mean (l^2 of coefficients at p=2)
enum class SpaceVariant { Bloch, Growth, BergmanSobolev, HardySobolev, Hardy };

struct SpaceSpec {
    SpaceVariant variant = SpaceVariant::Hardy;
    double p = 2.0;
    double alpha = 0.0;   // weight exponent; -1 by convention for HardySobolev
    double beta = 0.0;    // smoothness order
    int n = 1;            // ball dimension

    static SpaceSpec bloch(double alpha, int n = 1);
    static SpaceSpec growth(double alpha, int n = 1);
    static SpaceSpec bergman_sobolev(double p, double alpha, double beta, int n = 1);
    static SpaceSpec hardy_sobolev(double beta, int n = 1);
    static SpaceSpec hardy(double p, int n = 1);

    std::string describe() const;
};

// {"variant": "bloch"|"growth"|"bergman_sobolev"|"hardy_sobolev"|"hardy",
//  "p":..., "alpha":..., "beta":..., "n":...}; parsing is strict: unknown or
// irrelevant keys are rejected.
nlohmann::json space_to_json(const SpaceSpec& s);
SpaceSpec space_from_json(const nlohmann::json& j);

struct NormReport {
    double value = 0.0;   // reported norm (grid / quadrature value)
    double lower = 0.0;   // attained lower bound for the true norm
    double upper = 0.0;   // certified upper bound (sup-type spaces add
                          // Lipschitz slack; integral/coefficient norms are
                          // reported with lower == upper == value)
    bool truncated_estimate = false;  // set when the input looks like a
                                      // truncation at the series budget and
                                      // the norm is not coefficient-exact
};

// Norm of a univariate polynomial/truncated series in the given space.
NormReport norm_report(const SpaceSpec& s, const PowerSeries& f,
                       const ToleranceConfig& cfg = ToleranceConfig());
double norm(const SpaceSpec& s, const PowerSeries& f,
            const ToleranceConfig& cfg = ToleranceConfig());

// |f(0)| + ||R^beta f|| in the base space; equivalent to norm() on the
// Sobolev scales (BergmanSobolev and HardySobolev only).
double equivalent_norm_R(const SpaceSpec& s, const PowerSeries& f,
                         const ToleranceConfig& cfg = ToleranceConfig());

// sum_{j<N} |D^j f(0)| + ||D^N f||_{A^p_alpha} for integer beta = N >= 1
// (BergmanSobolev only).
double equivalent_norm_D(const SpaceSpec& s, const PowerSeries& f,
                         const ToleranceConfig& cfg = ToleranceConfig());

// The isomorphic Bergman-Sobolev descriptor with smoothness new_beta and
// weight alpha - p (beta - new_beta).  Landing on alpha = -1 with p = 2
// yields the HardySobolev descriptor; any other alpha <= -1 throws with
// "leaves admissible scale".
SpaceSpec shift_parameters(const SpaceSpec& s, double new_beta);

// Smallest integer N >= 1 with N > beta - (alpha + 1/2)/p; the derivative
// order for which the space embeds into a growth space of order
// (N - beta) p + alpha.
int representative_order(const SpaceSpec& s);

// Weighted sup estimation shared with the multiplier criteria: value is the
// refined grid maximum of (1-|z|^2)^alpha |g(z)|, upper adds the rigorous
// Lipschitz slack, and per-radius maxima are exposed for trend fitting.
struct SupEstimate {
    double value = 0.0;
    double upper = 0.0;
    double witness_radius = 0.0;
    double witness_angle = 0.0;
    std::vector<std::pair<double, double>> radius_profile;  // (radius, ring max)
};
SupEstimate weighted_sup(const PowerSeries& g, double alpha,
                         const ToleranceConfig& cfg = ToleranceConfig());

// |g| evaluated at count equally spaced points of the circle of radius r
// (count a power of two; exact polynomial evaluation via an FFT).
std::vector<double> ring_moduli(const PowerSeries& g, double r, int count);

// Mean of |g|^p over the circle of radius r (exact trigonometric sums for
// the sampled polynomial; count must be a power of two >= degree + 1).
double ring_power_mean(const PowerSeries& g, double r, double p, int count);

}  // namespace multspec
