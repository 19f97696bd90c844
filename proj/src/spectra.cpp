#include "multspec/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <queue>
#include <stdexcept>
#include <utility>

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

bool is_polynomial(const Symbol& u) {
    switch (u.kind()) {
        case Symbol::Kind::Constant:
        case Symbol::Kind::Coordinate:
        case Symbol::Kind::Poly: return true;
        case Symbol::Kind::Sum:
        case Symbol::Kind::Product: {
            for (const Symbol& c : u.children())
                if (!is_polynomial(c)) return false;
            return true;
        }
        case Symbol::Kind::IntegerPower: return is_polynomial(u.power_base());
        case Symbol::Kind::Quotient:
        case Symbol::Kind::Blaschke: return false;
    }
    return false;
}

// Sample count for the boundary image: enough angular resolution that the
// image advances by a small arc per step (the derivative bound caps the
// arc speed), never below 4096 and always a power of two.
int curve_sample_count(const Symbol& u) {
    double dbound = 0.0;
    try {
        dbound = boundary_derivative_bound(u);
    } catch (const std::exception&) {
        dbound = 0.0;  // out-of-contract symbol; fall back to the floor
    }
    int count = 4096;
    while (count < (1 << 17) && static_cast<double>(count) < 16.0 * dbound) count *= 2;
    return count;
}

// Shared n = 1 construction: the image curve of the unit circle plus the
// attained circle maximum as the spectral radius.
void fill_circle_estimate(SpectrumEstimate& est, const Symbol& u,
                          const ToleranceConfig& cfg) {
    const int count = curve_sample_count(u);
    est.boundary_curves.push_back(boundary_samples(u, count));
    CertifiedBound sup = sup_norm(u, cfg);
    est.spectral_radius = sup.lower;
    est.radius_witness = eval(u, std::polar(1.0, sup.witness_angle));
    double dbound = 0.0;
    try {
        dbound = boundary_derivative_bound(u);
    } catch (const std::exception&) {
    }
    est.resolution.angular_count = count;
    est.resolution.boundary_band =
        std::max(2.0 * kPi * dbound / count, 1e-9 * (1.0 + est.spectral_radius));
}

void fill_singleton_estimate(SpectrumEstimate& est, cplx c) {
    est.boundary_curves.push_back({c});
    est.spectral_radius = std::abs(c);
    est.radius_witness = c;
    est.resolution.angular_count = 1;
    est.resolution.boundary_band = 1e-9 * (1.0 + std::abs(c));
}

struct Box {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    void add(cplx p) {
        xmin = std::min(xmin, p.real());
        xmax = std::max(xmax, p.real());
        ymin = std::min(ymin, p.imag());
        ymax = std::max(ymax, p.imag());
    }
    bool valid() const { return xmin <= xmax; }
};

OccupancyGrid make_grid(const Box& box, int cells_per_side) {
    OccupancyGrid g;
    double spanx = std::max(box.xmax - box.xmin, 1e-6);
    double spany = std::max(box.ymax - box.ymin, 1e-6);
    double padx = 0.02 * spanx;
    double pady = 0.02 * spany;
    g.nx = cells_per_side;
    g.ny = cells_per_side;
    g.x0 = box.xmin - padx;
    g.y0 = box.ymin - pady;
    g.dx = (spanx + 2.0 * padx) / g.nx;
    g.dy = (spany + 2.0 * pady) / g.ny;
    g.cells.assign(static_cast<std::size_t>(g.nx) * g.ny, 0);
    return g;
}

// n > 1: low-discrepancy fill of the ball, image cloud, occupancy mask.
void fill_ball_estimate(SpectrumEstimate& est, const Symbol& u) {
    if (!is_polynomial(u))
        throw std::invalid_argument(
            "spectrum: symbols in several variables must be polynomial");
    const int n = u.dim();
    const int count = 1 << 16;
    std::vector<std::vector<cplx>> pts = ball_fill(n, count);
    std::vector<cplx> values(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) { values[i] = eval(u, pts[i]); });

    Box box;
    for (cplx v : values) box.add(v);
    est.grid = make_grid(box, 64);
    double best = -1.0;
    cplx witness = 0.0;
    for (cplx v : values) {
        est.grid.mark(v.real(), v.imag());
        if (std::abs(v) > best) {
            best = std::abs(v);
            witness = v;
        }
    }
    est.sample_cloud = std::move(values);
    est.membership_mode = MembershipMode::GridOccupancy;
    est.spectral_radius = best;
    est.radius_witness = witness;
    est.resolution.cloud_count = count;
    est.resolution.grid_size = 64;
    est.resolution.boundary_band = std::hypot(est.grid.dx, est.grid.dy);
}

// Occupancy intersection of the images of the shrinking annuli
// {r_j <= |z| <= 1}, r_j = 1 - 2^-j: the literal decreasing-intersection
// description of the essential spectrum on bounded-multiplier scales.
void fill_annulus_estimate(SpectrumEstimate& est, const Symbol& u,
                           const ToleranceConfig& cfg) {
    const int levels = std::clamp(cfg.boundary_refine_depth, 1, 10);
    const int rings = 9;       // radii per annulus, innermost to the circle itself
    const int angles = 8192;
    RationalForm rf = rational_form(u);

    std::vector<std::vector<cplx>> level_values(levels);
    Box box;
    for (int j = 1; j <= levels; ++j) {
        double rj = 1.0 - std::ldexp(1.0, -j);
        auto& vals = level_values[j - 1];
        vals.resize(static_cast<std::size_t>(rings) * angles);
        parallel_for(vals.size(), [&](std::size_t idx) {
            int m = static_cast<int>(idx) / angles;
            int a = static_cast<int>(idx) % angles;
            double r = rj + (1.0 - rj) * m / (rings - 1);
            double t = 2.0 * kPi * a / angles;
            vals[idx] = eval_rational(rf, std::polar(r, t));
        });
        for (cplx v : vals) box.add(v);
    }

    OccupancyGrid final_grid = make_grid(box, 256);
    std::vector<std::uint8_t> meet(final_grid.cells.size(), 1);
    for (const auto& vals : level_values) {
        OccupancyGrid level = final_grid;
        std::fill(level.cells.begin(), level.cells.end(), 0);
        for (cplx v : vals) level.mark(v.real(), v.imag());
        for (std::size_t i = 0; i < meet.size(); ++i) meet[i] &= level.cells[i];
    }
    final_grid.cells = std::move(meet);

    // Radius and cloud from the deepest-level samples surviving the meet.
    double best = -1.0;
    cplx witness = 0.0;
    for (cplx v : level_values.back()) {
        int i = 0, j = 0;
        if (final_grid.locate(v.real(), v.imag(), i, j) && final_grid.occupied(i, j) &&
            std::abs(v) > best) {
            best = std::abs(v);
            witness = v;
        }
    }
    for (int j = 0; j < final_grid.ny; ++j)
        for (int i = 0; i < final_grid.nx; ++i)
            if (final_grid.occupied(i, j))
                est.sample_cloud.emplace_back(final_grid.x0 + (i + 0.5) * final_grid.dx,
                                              final_grid.y0 + (j + 0.5) * final_grid.dy);
    est.grid = std::move(final_grid);
    est.membership_mode = MembershipMode::GridOccupancy;
    est.spectral_radius = best;
    est.radius_witness = witness;
    est.resolution.angular_count = angles;
    est.resolution.grid_size = 256;
    est.resolution.annulus_levels = levels;
    est.resolution.boundary_band = std::hypot(est.grid.dx, est.grid.dy);
}

int count_components_after_dilation(const OccupancyGrid& g) {
    const int nx = g.nx, ny = g.ny;
    std::vector<std::uint8_t> fat(g.cells.size(), 0);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            if (!g.occupied(i, j)) continue;
            for (int dj = -1; dj <= 1; ++dj)
                for (int di = -1; di <= 1; ++di) {
                    int ii = i + di, jj = j + dj;
                    if (ii >= 0 && ii < nx && jj >= 0 && jj < ny)
                        fat[static_cast<std::size_t>(jj) * nx + ii] = 1;
                }
        }
    int components = 0;
    std::vector<std::uint8_t> seen(fat.size(), 0);
    for (std::size_t start = 0; start < fat.size(); ++start) {
        if (!fat[start] || seen[start]) continue;
        ++components;
        std::queue<std::size_t> bfs;
        bfs.push(start);
        seen[start] = 1;
        while (!bfs.empty()) {
            std::size_t cur = bfs.front();
            bfs.pop();
            int i = static_cast<int>(cur % nx);
            int j = static_cast<int>(cur / nx);
            for (int dj = -1; dj <= 1; ++dj)
                for (int di = -1; di <= 1; ++di) {
                    int ii = i + di, jj = j + dj;
                    if (ii < 0 || ii >= nx || jj < 0 || jj >= ny) continue;
                    std::size_t nxt = static_cast<std::size_t>(jj) * nx + ii;
                    if (fat[nxt] && !seen[nxt]) {
                        seen[nxt] = 1;
                        bfs.push(nxt);
                    }
                }
        }
    }
    return components;
}

}  // namespace

std::string membership_name(Membership m) {
    switch (m) {
        case Membership::Inside: return "inside";
        case Membership::Boundary: return "boundary";
        case Membership::Outside: return "outside";
    }
    return "outside";
}

void OccupancyGrid::mark(double x, double y) {
    int i = static_cast<int>(std::floor((x - x0) / dx));
    int j = static_cast<int>(std::floor((y - y0) / dy));
    i = std::clamp(i, 0, nx - 1);
    j = std::clamp(j, 0, ny - 1);
    cells[static_cast<std::size_t>(j) * nx + i] = 1;
}

bool OccupancyGrid::locate(double x, double y, int& i, int& j) const {
    i = static_cast<int>(std::floor((x - x0) / dx));
    j = static_cast<int>(std::floor((y - y0) / dy));
    return in_range(i, j);
}

SpectrumEstimate spectrum(const Symbol& u, const ToleranceConfig& cfg) {
    SpectrumEstimate est;
    est.kind = SpectrumKind::Spectrum;
    if (u.kind() == Symbol::Kind::Constant) {
        fill_singleton_estimate(est, u.constant_value());
        est.membership_mode = MembershipMode::Winding;
        est.status =
            "constant symbol: the spectrum is the singleton {u}; the operator is a "
            "scalar multiple of the identity (compact only for u = 0)";
        return est;
    }
    if (u.dim() == 1) {
        fill_circle_estimate(est, u, cfg);
        est.membership_mode = MembershipMode::Winding;
        est.status =
            "closure of the disk image: boundary-circle image curve with the "
            "argument-principle interior test";
        return est;
    }
    fill_ball_estimate(est, u);
    est.status = "closure of the polynomial image of the unit ball "
                 "(low-discrepancy fill on an occupancy grid)";
    return est;
}

SpectrumEstimate essential_spectrum(const Symbol& u, const SpaceSpec& space,
                                    bool annulus_mode, const ToleranceConfig& cfg) {
    SpectrumEstimate est;
    est.kind = SpectrumKind::Essential;
    const SpaceFamily family = classify_space_family(space);

    if (u.dim() > 1) {
        if (family == SpaceFamily::Unsupported) {
            est.hypotheses_met = false;
            est.membership_mode = MembershipMode::GridOccupancy;
            est.status = "outside theorem hypotheses: " + family_description(family) +
                         "; the essential spectrum is not computed for " +
                         space.describe();
            return est;
        }
        est = spectrum(u, cfg);
        est.kind = SpectrumKind::Essential;
        est.status =
            "essential spectrum = spectrum in several variables (the coordinate "
            "functions multiply the implemented scales)";
        return est;
    }

    if (u.kind() == Symbol::Kind::Constant) {
        fill_singleton_estimate(est, u.constant_value());
        est.membership_mode = MembershipMode::CurveDistance;
        est.status = "constant symbol: the essential spectrum is the singleton {u}";
        return est;
    }

    switch (family) {
        case SpaceFamily::DiskAlgebraMultipliers:
            fill_circle_estimate(est, u, cfg);
            est.membership_mode = MembershipMode::CurveDistance;
            est.status = "essential spectrum = image of the unit circle (" +
                         family_description(family) + ")";
            return est;
        case SpaceFamily::BoundedMultipliers:
            if (annulus_mode) {
                fill_annulus_estimate(est, u, cfg);
                est.status =
                    "essential spectrum = decreasing intersection of the closed "
                    "annulus images, realized as an occupancy-mask meet (" +
                    family_description(family) + ")";
                return est;
            }
            fill_circle_estimate(est, u, cfg);
            est.membership_mode = MembershipMode::CurveDistance;
            est.status =
                "essential spectrum = image of the unit circle: the symbol extends "
                "continuously to the closed disk, so the decreasing annulus-image "
                "intersection collapses onto the circle image (" +
                family_description(family) + ")";
            return est;
        case SpaceFamily::SufficiencyOnly:
        case SpaceFamily::Unsupported:
            est.hypotheses_met = false;
            est.membership_mode = MembershipMode::CurveDistance;
            est.status = "outside theorem hypotheses: " + family_description(family) +
                         "; no implemented essential-spectrum theorem covers " +
                         space.describe();
            return est;
    }
    throw std::logic_error("essential_spectrum: unhandled space family");
}

SpectralRadiusReport spectral_radius_report(const Symbol& u, const SpaceSpec& space,
                                            const ToleranceConfig& cfg) {
    SpectrumEstimate ess = essential_spectrum(u, space, false, cfg);
    if (!ess.hypotheses_met) throw HypothesisError(ess.status);
    SpectrumEstimate full = spectrum(u, cfg);
    SpectralRadiusReport rep;
    rep.sup_spectrum = full.spectral_radius;
    rep.spectrum_witness = full.radius_witness;
    rep.sup_essential = ess.spectral_radius;
    rep.essential_witness = ess.radius_witness;
    if (u.dim() == 1) {
        CertifiedBound sup = sup_norm(u, cfg);
        rep.sup_norm_u = sup.lower;
        rep.norm_witness_angle = sup.witness_angle;
    } else {
        // |u| is plurisubharmonic, so the closed-ball sup sits on the sphere.
        double best = 0.0;
        double angle = 0.0;
        for (const auto& p : sphere_fill(u.dim(), 1 << 13)) {
            double v = std::abs(eval(u, p));
            if (v > best) {
                best = v;
                angle = std::arg(p[0]);
            }
        }
        rep.sup_norm_u = best;
        rep.norm_witness_angle = angle;
    }
    return rep;
}

Membership membership(const SpectrumEstimate& est, cplx lambda) {
    if (est.membership_mode == MembershipMode::GridOccupancy) {
        if (est.grid.empty()) return Membership::Outside;
        int i = 0, j = 0;
        est.grid.locate(lambda.real(), lambda.imag(), i, j);
        bool center = est.grid.occupied(i, j);
        bool all_n = true, any_n = false;
        for (int dj = -1; dj <= 1; ++dj)
            for (int di = -1; di <= 1; ++di) {
                bool occ = est.grid.occupied(i + di, j + dj);
                all_n = all_n && occ;
                any_n = any_n || occ;
            }
        if (center) return all_n ? Membership::Inside : Membership::Boundary;
        return any_n ? Membership::Boundary : Membership::Outside;
    }
    if (est.boundary_curves.empty()) return Membership::Outside;
    double dist = 1e300;
    for (const auto& curve : est.boundary_curves)
        if (!curve.empty()) dist = std::min(dist, curve_distance(curve, lambda));
    if (dist <= est.resolution.boundary_band) return Membership::Boundary;
    if (est.membership_mode == MembershipMode::Winding) {
        long total = 0;
        for (const auto& curve : est.boundary_curves) {
            if (curve.size() < 3) continue;
            WindingResult w = winding_number(curve, lambda);
            if (w.on_curve) return Membership::Boundary;
            total += w.winding;
        }
        return total >= 1 ? Membership::Inside : Membership::Outside;
    }
    return Membership::Outside;
}

bool connectedness_check(const SpectrumEstimate& est, int grid_size) {
    if (est.membership_mode == MembershipMode::GridOccupancy) {
        if (est.grid.empty()) return false;
        return count_components_after_dilation(est.grid) == 1;
    }
    Box box;
    for (const auto& curve : est.boundary_curves)
        for (cplx p : curve) box.add(p);
    for (cplx p : est.sample_cloud) box.add(p);
    if (!box.valid()) return false;
    OccupancyGrid g = make_grid(box, std::max(grid_size, 2));
    for (const auto& curve : est.boundary_curves)
        for (cplx p : curve) g.mark(p.real(), p.imag());
    for (cplx p : est.sample_cloud) g.mark(p.real(), p.imag());
    return count_components_after_dilation(g) == 1;
}

std::string spectrum_to_json(const SpectrumEstimate& est) {
    std::string out;
    out.reserve(4096);
    out += "{\"schema_version\":1,\"kind\":\"";
    out += est.kind == SpectrumKind::Spectrum ? "spectrum" : "essential";
    out += "\",\"curves\":[";
    for (std::size_t c = 0; c < est.boundary_curves.size(); ++c) {
        if (c) out += ',';
        out += '[';
        const auto& curve = est.boundary_curves[c];
        for (std::size_t k = 0; k < curve.size(); ++k) {
            if (k) out += ',';
            out += '[';
            out += fmt17(curve[k].real());
            out += ',';
            out += fmt17(curve[k].imag());
            out += ']';
        }
        out += ']';
    }
    out += "],\"cloud\":[";
    for (std::size_t k = 0; k < est.sample_cloud.size(); ++k) {
        if (k) out += ',';
        out += '[';
        out += fmt17(est.sample_cloud[k].real());
        out += ',';
        out += fmt17(est.sample_cloud[k].imag());
        out += ']';
    }
    out += "],\"radius\":";
    out += fmt17(est.spectral_radius);
    out += ",\"radius_witness\":[";
    out += fmt17(est.radius_witness.real());
    out += ',';
    out += fmt17(est.radius_witness.imag());
    out += "],\"resolution\":{\"angular_count\":" +
           std::to_string(est.resolution.angular_count) +
           ",\"cloud_count\":" + std::to_string(est.resolution.cloud_count) +
           ",\"grid_size\":" + std::to_string(est.resolution.grid_size) +
           ",\"annulus_levels\":" + std::to_string(est.resolution.annulus_levels) +
           ",\"boundary_band\":" + fmt17(est.resolution.boundary_band) +
           ",\"membership_mode\":\"";
    switch (est.membership_mode) {
        case MembershipMode::Winding: out += "winding"; break;
        case MembershipMode::CurveDistance: out += "curve_distance"; break;
        case MembershipMode::GridOccupancy: out += "grid_occupancy"; break;
    }
    out += "\"},\"hypotheses_met\":";
    out += est.hypotheses_met ? "true" : "false";
    out += ",\"status\":\"";
    out += json_escape(est.status);
    out += "\"}";
    return out;
}

std::string spectrum_to_svg(const SpectrumEstimate& est) {
    Box box;
    for (const auto& curve : est.boundary_curves)
        for (cplx p : curve) box.add(p);
    for (cplx p : est.sample_cloud) box.add(p);
    box.add(cplx(-1.0, -1.0));  // keep the reference unit circle in frame
    box.add(cplx(1.0, 1.0));

    const double view = 800.0;
    const double margin = 0.05 * view;
    double spanx = std::max(box.xmax - box.xmin, 1e-9);
    double spany = std::max(box.ymax - box.ymin, 1e-9);
    double scale = (view - 2.0 * margin) / std::max(spanx, spany);
    double offx = margin + 0.5 * ((view - 2.0 * margin) - scale * spanx);
    double offy = margin + 0.5 * ((view - 2.0 * margin) - scale * spany);
    auto px = [&](double x) { return offx + (x - box.xmin) * scale; };
    auto py = [&](double y) { return view - (offy + (y - box.ymin) * scale); };
    auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", v);
        return std::string(buf);
    };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" "
           "viewBox=\"0 0 800 800\">\n";
    svg += "<rect width=\"800\" height=\"800\" fill=\"white\"/>\n";
    svg += "<circle cx=\"" + num(px(0.0)) + "\" cy=\"" + num(py(0.0)) + "\" r=\"" +
           num(scale) +
           "\" fill=\"none\" stroke=\"#999999\" stroke-width=\"1\" "
           "stroke-dasharray=\"4 4\"/>\n";
    for (const auto& curve : est.boundary_curves) {
        if (curve.size() == 1) {
            svg += "<circle cx=\"" + num(px(curve[0].real())) + "\" cy=\"" +
                   num(py(curve[0].imag())) + "\" r=\"2\" fill=\"#000000\"/>\n";
            continue;
        }
        svg += "<polyline fill=\"none\" stroke=\"#000000\" stroke-width=\"1\" points=\"";
        for (cplx p : curve)
            svg += num(px(p.real())) + "," + num(py(p.imag())) + " ";
        if (!curve.empty())
            svg += num(px(curve[0].real())) + "," + num(py(curve[0].imag()));
        svg += "\"/>\n";
    }
    const std::size_t max_dots = 4096;
    std::size_t stride =
        est.sample_cloud.empty() ? 1 : std::max<std::size_t>(1, est.sample_cloud.size() / max_dots);
    for (std::size_t k = 0; k < est.sample_cloud.size(); k += stride) {
        cplx p = est.sample_cloud[k];
        svg += "<circle cx=\"" + num(px(p.real())) + "\" cy=\"" + num(py(p.imag())) +
               "\" r=\"1.5\" fill=\"#1f77b4\"/>\n";
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace multspec
