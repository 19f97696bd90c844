#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "multspec/multipliers.hpp"
#include "multspec/numerics.hpp"
#include "multspec/spaces.hpp"
#include "multspec/symbols.hpp"

namespace multspec {

enum class SpectrumKind { Spectrum, Essential };
enum class MembershipMode { Winding, CurveDistance, GridOccupancy };
enum class Membership { Inside, Boundary, Outside };

std::string membership_name(Membership m);

// Cell mask over an axis-aligned box; cell (i, j) covers
// [x0 + i dx, x0 + (i+1) dx) x [y0 + j dy, y0 + (j+1) dy), row-major j*nx+i.
struct OccupancyGrid {
    int nx = 0;
    int ny = 0;
    double x0 = 0.0;
    double y0 = 0.0;
    double dx = 0.0;
    double dy = 0.0;
    std::vector<std::uint8_t> cells;

    bool empty() const { return cells.empty(); }
    bool in_range(int i, int j) const { return i >= 0 && i < nx && j >= 0 && j < ny; }
    bool occupied(int i, int j) const {
        return in_range(i, j) && cells[static_cast<std::size_t>(j) * nx + i] != 0;
    }
    void mark(double x, double y);
    // Cell indices of a point; false when the point falls outside the box.
    bool locate(double x, double y, int& i, int& j) const;
};

struct SpectrumResolution {
    int angular_count = 0;    // boundary-circle samples per curve (n = 1)
    int cloud_count = 0;      // quasi-random ball samples (n > 1)
    int grid_size = 0;        // occupancy cells per side (grid modes)
    int annulus_levels = 0;   // depth of the shrinking-annulus intersection
    double boundary_band = 0.0;  // distance tolerance for the "boundary" answer
};

// Region estimate for the spectrum or essential spectrum of the
// multiplication operator f -> u f.  The represented set is either a union
// of closed image curves (with a winding-number interior test for the full
// spectrum) or an occupancy mask built from a sample cloud.
struct SpectrumEstimate {
    SpectrumKind kind = SpectrumKind::Spectrum;
    std::vector<std::vector<cplx>> boundary_curves;
    std::vector<cplx> sample_cloud;
    MembershipMode membership_mode = MembershipMode::Winding;
    double spectral_radius = 0.0;
    cplx radius_witness;  // point of the represented set attaining the radius
    SpectrumResolution resolution;
    OccupancyGrid grid;   // populated in GridOccupancy mode
    // False when no implemented theorem covers the symbol/space pair; the
    // estimate then carries no set data, only an explanatory status.
    bool hypotheses_met = true;
    std::string status;
};

// Spectrum = closure of the image of the open unit ball.  For n = 1 the
// image boundary curve u(unit circle) is sampled densely and interior
// membership is the argument-principle winding test; for n > 1 (polynomial
// symbols) a low-discrepancy ball fill feeds an occupancy grid.
SpectrumEstimate spectrum(const Symbol& u, const ToleranceConfig& cfg = ToleranceConfig());

// Essential spectrum under the implemented multiplier theory.  For scales
// whose multiplier space embeds in the disk algebra, and for scales whose
// multipliers are exactly the bounded functions, it is the boundary image
// curve (symbols here extend continuously to the closed disk, collapsing
// the shrinking-annulus intersection onto the circle image).  annulus_mode
// requests the literal occupancy intersection of the annulus images
// instead (bounded-multiplier scales only).  For n > 1 the essential
// spectrum coincides with the whole spectrum (coordinates are multipliers).
// Pairs outside every implemented theorem yield hypotheses_met = false
// with an explanatory status, never a guessed set.
SpectrumEstimate essential_spectrum(const Symbol& u, const SpaceSpec& space,
                                    bool annulus_mode = false,
                                    const ToleranceConfig& cfg = ToleranceConfig());

// The spectral radius, the essential spectral radius, and the sup norm of
// the symbol coincide (all attained on the boundary); the report carries
// the three values with attaining witnesses.
struct SpectralRadiusReport {
    double sup_spectrum = 0.0;
    double sup_essential = 0.0;
    double sup_norm_u = 0.0;
    cplx spectrum_witness;            // spectrum point attaining sup_spectrum
    cplx essential_witness;           // essential-spectrum point attaining sup_essential
    double norm_witness_angle = 0.0;  // theta with |u(e^{i theta})| = sup_norm_u
};

// Throws HypothesisError when essential_spectrum reports hypotheses_met
// = false (the essential radius would otherwise be a guess).
SpectralRadiusReport spectral_radius_report(const Symbol& u, const SpaceSpec& space,
                                            const ToleranceConfig& cfg = ToleranceConfig());

// Region membership with a resolution-derived boundary band (reported in
// resolution.boundary_band).  Curve modes: distance to the sampled curve
// decides "boundary", then (full spectrum only) the winding number decides
// inside/outside.  Grid mode: the cell containing lambda and its
// 8-neighborhood decide.
Membership membership(const SpectrumEstimate& est, cplx lambda);

// The spectrum and essential spectrum of a multiplication operator are
// connected; checked as: the occupancy mask of the represented set, dilated
// by one cell, has exactly one connected component.
bool connectedness_check(const SpectrumEstimate& est, int grid_size = 128);

// {"schema_version":…,"kind":…,"curves":[[[re,im],…],…],"cloud":[[re,im],…],
//  "radius":…,"radius_witness":[re,im],"resolution":{…},"hypotheses_met":…,
//  "status":…} with numbers at 17 significant digits.
std::string spectrum_to_json(const SpectrumEstimate& est);

// 800x800 picture, auto-fit with a 5% margin: estimate curves solid 1px,
// cloud as dots, the unit circle dashed for reference.
std::string spectrum_to_svg(const SpectrumEstimate& est);

}  // namespace multspec
