#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "multspec/numerics.hpp"
#include "multspec/spaces.hpp"
#include "multspec/symbols.hpp"

namespace multspec {

// Raised when an operation is asked about a space/symbol combination that
// the implemented operator theory does not cover (as opposed to malformed
// input); the command line maps it to its own exit code.
struct HypothesisError : std::runtime_error {
    explicit HypothesisError(const std::string& what) : std::runtime_error(what) {}
};

enum class Verdict { Yes, No, Indeterminate };
std::string verdict_name(Verdict v);

// Which operator-theoretic regime a space falls into; shared by the
// Fredholm analysis and the essential-spectrum computation.
//   BoundedMultipliers:     every bounded analytic function multiplies the
//                           space and nothing else does; the essential
//                           spectrum is the shrinking-annulus image
//                           intersection and Fredholmness at a point is
//                           equivalent to a boundary modulus bound.
//   DiskAlgebraMultipliers: the multiplier space embeds in the disk
//                           algebra, so the essential spectrum collapses to
//                           the boundary image u(dD).
enum class SpaceFamily {
    BoundedMultipliers,       // M(X) = H^inf; two-sided Fredholm criterion
    DiskAlgebraMultipliers,   // M(X) inside the disk algebra; essential
                              // spectrum equals the boundary image u(dD)
    SufficiencyOnly,          // boundary bound implies Fredholm, converse open
    Unsupported               // outside the implemented theory
};
SpaceFamily classify_space_family(const SpaceSpec& space);
// One-line description of the criterion backing the family.
std::string family_description(SpaceFamily family);

struct MultiplierReport {
    Verdict verdict = Verdict::Indeterminate;
    std::string criterion;   // the characterization branch that applies
    // (radius, criterion quantity on that circle) along 1 - 2^-j.
    std::vector<std::pair<double, double>> witnesses;
    double growth_slope = 0.0;  // log-log trend of the quantity vs 1/(1-r)
    std::string detail;
};

// Does u multiply the space into itself?  Dispatches on the space
// parameters: weighted-derivative criteria on the Bloch scale, boundedness
// alone where bounded functions are exactly the multipliers, membership of
// u in the space itself on the algebra ranges, and an honest indeterminate
// verdict on parameter ranges with no implemented characterization.
// n = 1 only.
MultiplierReport is_multiplier(const SpaceSpec& space, const Symbol& u,
                               const ToleranceConfig& cfg = ToleranceConfig());

struct InvertibilityReport {
    bool invertible = false;
    double inf_modulus = 0.0;     // inf |u| over the closed ball (best sample)
    double certified_lower = 0.0; // rigorous lower bound (n = 1 only)
    bool certified = false;       // false for the sampled n > 1 path
};

// M_u is invertible iff 1/u is bounded iff u has no zero in the closed
// ball.  For n = 1 this is decided rigorously: a certified boundary
// modulus bound plus a winding count for interior zeros.  For n > 1 the
// infimum is sampled on a low-discrepancy fill and flagged uncertified.
InvertibilityReport is_invertible(const Symbol& u,
                                  const ToleranceConfig& cfg = ToleranceConfig());

struct FredholmReport {
    cplx lambda{0.0, 0.0};
    double boundary_delta = 0.0;  // certified min |u - lambda| on the circle
    ZeroSet zeros;                // interior zeros of u - lambda
    bool fredholm = false;
    bool index_defined = false;
    int index = 0;                // -(sum of interior multiplicities)
    double annulus_radius = 0.0;  // |u - lambda| >= delta on annulus_radius <= |z| < 1
    SpaceFamily family = SpaceFamily::Unsupported;
    std::string status;           // conclusion strength, see classify_space_family
};

// Fredholm analysis of M_u - lambda on the space: certified boundary
// modulus, interior zero set, index -(sum of multiplicities) (the kernel is
// trivial and the cokernel is spanned by the derivative point evaluations
// at the zeros).  When only the sufficiency direction is available for the
// space, a failing boundary bound yields fredholm = false with status
// "no conclusion from implemented theory".  n = 1 only.
FredholmReport fredholm_analysis(const Symbol& u, cplx lambda, const SpaceSpec& space,
                                 const ToleranceConfig& cfg = ToleranceConfig());

// Norms ||u * g_{xi,k}|| where g_{xi,k} is the peak function at xi
// normalized in the space, for each k in k_grid (ascending).  When
// u(xi) = 0 the values tend to 0 (the quantitative content of the
// boundary-zero necessity argument); when |u| is bounded below near xi
// they stay bounded away from 0.  Supported spaces: Bloch alpha in (0,1],
// Bergman-Sobolev beta > (2+alpha)/p, Hardy-Sobolev beta > 1/2.
std::vector<std::pair<int, double>> peak_refutation_scan(
    const Symbol& u, cplx xi, const SpaceSpec& space, const std::vector<int>& k_grid,
    const ToleranceConfig& cfg = ToleranceConfig());

}  // namespace multspec
