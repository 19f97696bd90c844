#include "multspec/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

namespace multspec {

// ---------------------------------------------------------------------------
// descriptors

SpaceSpec SpaceSpec::bloch(double alpha, int n) {
    if (!(alpha > 0.0)) throw std::invalid_argument("bloch: requires alpha > 0");
    if (n < 1) throw std::invalid_argument("space: requires n >= 1");
    SpaceSpec s;
    s.variant = SpaceVariant::Bloch;
    s.p = 0.0;
    s.alpha = alpha;
    s.n = n;
    return s;
}

SpaceSpec SpaceSpec::growth(double alpha, int n) {
    if (!(alpha > 0.0)) throw std::invalid_argument("growth: requires alpha > 0");
    if (n < 1) throw std::invalid_argument("space: requires n >= 1");
    SpaceSpec s;
    s.variant = SpaceVariant::Growth;
    s.p = 0.0;
    s.alpha = alpha;
    s.n = n;
    return s;
}

SpaceSpec SpaceSpec::bergman_sobolev(double p, double alpha, double beta, int n) {
    if (!(p >= 1.0)) throw std::invalid_argument("bergman_sobolev: requires p >= 1");
    if (!(alpha > -1.0)) throw std::invalid_argument("bergman_sobolev: requires alpha > -1");
    if (!(beta >= 0.0)) throw std::invalid_argument("bergman_sobolev: requires beta >= 0");
    if (n < 1) throw std::invalid_argument("space: requires n >= 1");
    SpaceSpec s;
    s.variant = SpaceVariant::BergmanSobolev;
    s.p = p;
    s.alpha = alpha;
    s.beta = beta;
    s.n = n;
    return s;
}

SpaceSpec SpaceSpec::hardy_sobolev(double beta, int n) {
    if (!(beta >= 0.0)) throw std::invalid_argument("hardy_sobolev: requires beta >= 0");
    if (n < 1) throw std::invalid_argument("space: requires n >= 1");
    SpaceSpec s;
    s.variant = SpaceVariant::HardySobolev;
    s.p = 2.0;
    s.alpha = -1.0;  // the weight this scale degenerates to
    s.beta = beta;
    s.n = n;
    return s;
}

SpaceSpec SpaceSpec::hardy(double p, int n) {
    if (!(p >= 1.0)) throw std::invalid_argument("hardy: requires p >= 1");
    if (n < 1) throw std::invalid_argument("space: requires n >= 1");
    SpaceSpec s;
    s.variant = SpaceVariant::Hardy;
    s.p = p;
    s.n = n;
    return s;
}

namespace {

std::string fmt_param(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

const char* variant_name(SpaceVariant v) {
    switch (v) {
        case SpaceVariant::Bloch: return "bloch";
        case SpaceVariant::Growth: return "growth";
        case SpaceVariant::BergmanSobolev: return "bergman_sobolev";
        case SpaceVariant::HardySobolev: return "hardy_sobolev";
        case SpaceVariant::Hardy: return "hardy";
    }
    return "?";
}

}  // namespace

std::string SpaceSpec::describe() const {
    std::string out = variant_name(variant);
    out += "(";
    switch (variant) {
        case SpaceVariant::Bloch:
        case SpaceVariant::Growth:
            out += "alpha=" + fmt_param(alpha);
            break;
        case SpaceVariant::BergmanSobolev:
            out += "p=" + fmt_param(p) + ", alpha=" + fmt_param(alpha) +
                   ", beta=" + fmt_param(beta);
            break;
        case SpaceVariant::HardySobolev:
            out += "beta=" + fmt_param(beta);
            break;
        case SpaceVariant::Hardy:
            out += "p=" + fmt_param(p);
            break;
    }
    if (n != 1) out += ", n=" + std::to_string(n);
    out += ")";
    return out;
}

nlohmann::json space_to_json(const SpaceSpec& s) {
    nlohmann::json j;
    j["variant"] = variant_name(s.variant);
    switch (s.variant) {
        case SpaceVariant::Bloch:
        case SpaceVariant::Growth:
            j["alpha"] = s.alpha;
            break;
        case SpaceVariant::BergmanSobolev:
            j["p"] = s.p;
            j["alpha"] = s.alpha;
            j["beta"] = s.beta;
            break;
        case SpaceVariant::HardySobolev:
            j["beta"] = s.beta;
            break;
        case SpaceVariant::Hardy:
            j["p"] = s.p;
            break;
    }
    j["n"] = s.n;
    return j;
}

SpaceSpec space_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw std::invalid_argument("space: expected a JSON object");
    if (!j.contains("variant") || !j["variant"].is_string())
        throw std::invalid_argument("space: missing \"variant\"");
    std::string v = j["variant"].get<std::string>();

    std::set<std::string> allowed = {"variant", "n"};
    if (v == "bloch" || v == "growth") {
        allowed.insert("alpha");
    } else if (v == "bergman_sobolev") {
        allowed.insert({"p", "alpha", "beta"});
    } else if (v == "hardy_sobolev") {
        allowed.insert("beta");
    } else if (v == "hardy") {
        allowed.insert("p");
    } else {
        throw std::invalid_argument("space: unknown variant \"" + v + "\"");
    }
    for (const auto& item : j.items())
        if (!allowed.count(item.key()))
            throw std::invalid_argument("space: unexpected key \"" + item.key() +
                                        "\" for variant \"" + v + "\"");

    auto need = [&](const char* key) -> double {
        if (!j.contains(key) || !j[key].is_number())
            throw std::invalid_argument(std::string("space: variant \"") + v +
                                        "\" requires numeric \"" + key + "\"");
        return j[key].get<double>();
    };
    int n = 1;
    if (j.contains("n")) {
        if (!j["n"].is_number_integer())
            throw std::invalid_argument("space: \"n\" must be an integer");
        n = j["n"].get<int>();
    }

    if (v == "bloch") return SpaceSpec::bloch(need("alpha"), n);
    if (v == "growth") return SpaceSpec::growth(need("alpha"), n);
    if (v == "bergman_sobolev")
        return SpaceSpec::bergman_sobolev(need("p"), need("alpha"), need("beta"), n);
    if (v == "hardy_sobolev") return SpaceSpec::hardy_sobolev(need("beta"), n);
    return SpaceSpec::hardy(need("p"), n);
}

// ---------------------------------------------------------------------------
// ring evaluation (FFT)

namespace {

int next_pow2(int v) {
    int p = 1;
    while (p < v) p <<= 1;
    return p;
}

// In-place radix-2 DFT: a[j] <- sum_k a[k] exp(-2 pi i j k / n).  Twiddles
// are refreshed from cos/sin every 32 steps to keep the recurrence error at
// the 1e-15 level for the transform sizes used here.
void fft_inplace(std::vector<cplx>& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -kTwoPi / static_cast<double>(len);
        const cplx step(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                if ((k & 31u) == 0u)
                    w = cplx(std::cos(ang * static_cast<double>(k)),
                             std::sin(ang * static_cast<double>(k)));
                cplx u = a[i + k], t = a[i + k + len / 2] * w;
                a[i + k] = u + t;
                a[i + k + len / 2] = u - t;
                w *= step;
            }
        }
    }
}

// Values of g on the circle of radius r at `count` equispaced points
// (angle of entry j is -2 pi j / count; only the set of points matters to
// the ring statistics).
std::vector<cplx> ring_values(const PowerSeries& g, double r, int count) {
    if (count < g.degree() + 1 || (count & (count - 1)) != 0)
        throw std::invalid_argument("ring evaluation: count must be a power of two >= degree+1");
    std::vector<cplx> a(static_cast<std::size_t>(count), cplx(0.0));
    double rk = 1.0;
    for (int k = 0; k <= g.degree(); ++k) {
        a[static_cast<std::size_t>(k)] = g.coeff(k) * rk;
        rk *= r;
    }
    fft_inplace(a);
    return a;
}

}  // namespace

std::vector<double> ring_moduli(const PowerSeries& g, double r, int count) {
    auto vals = ring_values(g, r, count);
    std::vector<double> out(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i) out[i] = std::abs(vals[i]);
    return out;
}

double ring_power_mean(const PowerSeries& g, double r, double p, int count) {
    auto vals = ring_values(g, r, count);
    KahanSum acc;
    if (p == 2.0) {
        for (const cplx& v : vals) acc.add(std::norm(v));
    } else {
        for (const cplx& v : vals) acc.add(std::pow(std::abs(v), p));
    }
    return acc.value() / static_cast<double>(count);
}

// ---------------------------------------------------------------------------
// weighted sup over the disk

namespace {

double golden_max_1d(const std::function<double(double)>& h, double a, double b,
                     double* arg) {
    const double phi = 0.6180339887498949;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = h(x1), f2 = h(x2);
    for (int it = 0; it < 80 && (b - a) > 1e-13; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = h(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = h(x1);
        }
    }
    double xm = 0.5 * (a + b), fm = h(xm);
    double bestx = xm, bestf = fm;
    if (f1 > bestf) { bestf = f1; bestx = x1; }
    if (f2 > bestf) { bestf = f2; bestx = x2; }
    if (arg) *arg = bestx;
    return bestf;
}

std::vector<double> sup_grid_radii(const ToleranceConfig& cfg) {
    std::vector<double> rs;
    for (int j = 0; j < 16; ++j) rs.push_back(j / 32.0);
    for (int j = 1; j <= cfg.boundary_refine_depth; ++j)
        rs.push_back(1.0 - std::pow(2.0, -j));
    std::sort(rs.begin(), rs.end());
    rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
    return rs;
}

}  // namespace

SupEstimate weighted_sup(const PowerSeries& g, double alpha,
                         const ToleranceConfig& cfg) {
    SupEstimate out;
    PowerSeries gt = g;
    gt.trim();
    if (gt.coeff_scale() == 0.0) return out;

    const std::vector<double> rs = sup_grid_radii(cfg);
    const int N = std::max(512, next_pow2(gt.degree() + 1));
    auto w = [&](double r) { return std::pow(1.0 - r * r, alpha); };

    struct Ring {
        double max_mod = 0.0;
        int argmax = 0;
    };
    std::vector<Ring> rings(rs.size());
    parallel_for(rs.size(), [&](std::size_t i) {
        auto mods = ring_moduli(gt, rs[i], N);
        for (int j = 0; j < N; ++j)
            if (mods[static_cast<std::size_t>(j)] > rings[i].max_mod) {
                rings[i].max_mod = mods[static_cast<std::size_t>(j)];
                rings[i].argmax = j;
            }
    });

    out.radius_profile.reserve(rs.size());
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < rs.size(); ++i) {
        double v = w(rs[i]) * rings[i].max_mod;
        out.radius_profile.emplace_back(rs[i], v);
        if (v > out.value) {
            out.value = v;
            best_i = i;
        }
    }
    double r_star = rs[best_i];
    double t_star = -kTwoPi * rings[best_i].argmax / N;

    // local polish, alternating angle and radius
    auto F = [&](double r, double t) {
        return w(r) * std::abs(evaluate(gt, r * cplx(std::cos(t), std::sin(t))));
    };
    double r_lo = best_i > 0 ? rs[best_i - 1] : 0.0;
    double r_hi = best_i + 1 < rs.size() ? rs[best_i + 1] : 0.5 * (1.0 + rs.back());
    for (int round = 0; round < 2; ++round) {
        golden_max_1d([&](double t) { return F(r_star, t); },
                      t_star - kTwoPi / N, t_star + kTwoPi / N, &t_star);
        golden_max_1d([&](double r) { return F(r, t_star); }, r_lo, r_hi, &r_star);
    }
    double refined = F(r_star, t_star);
    if (refined > out.value) out.value = refined;
    out.witness_radius = r_star;
    out.witness_angle = t_star;

    // certified upper bound: per-cell Lipschitz slack on the sampled grid
    double G0 = 0.0, G1 = 0.0;
    for (int k = 0; k <= gt.degree(); ++k) {
        G0 += std::abs(gt.coeff(k));
        G1 += k * std::abs(gt.coeff(k));
    }
    out.upper = out.value;
    for (std::size_t i = 0; i + 1 < rs.size(); ++i) {
        double a = rs[i], b = rs[i + 1];
        double wd = 2.0 * std::abs(alpha) * b *
                    std::max(std::pow(1.0 - a * a, alpha - 1.0),
                             std::pow(1.0 - b * b, alpha - 1.0));
        double dr = b - a;
        double dist = 0.5 * dr + kPi * b / N;
        double sampled = std::max(w(a) * rings[i].max_mod, w(b) * rings[i + 1].max_mod);
        double slack = wd * 0.5 * dr * G0 + w(a) * G1 * dist;
        out.upper = std::max(out.upper, sampled + slack);
    }
    // annulus beyond the last grid radius: the weight is decreasing, |g| <= G0
    out.upper = std::max(out.upper, w(rs.back()) * G0);
    return out;
}

// ---------------------------------------------------------------------------
// norms

namespace {

// || h ||_{A^p_alpha}^p with the normalized weighted area measure,
// dA_alpha = (alpha+1) (1-|z|^2)^alpha dA/pi.
double bergman_power(const PowerSeries& h, double p, double alpha) {
    PowerSeries ht = h;
    ht.trim();
    if (ht.coeff_scale() == 0.0) return 0.0;
    int d = ht.degree();
    bool even_integer_p =
        p == std::floor(p) && (static_cast<long>(p) % 2 == 0);
    int radial, angular;
    if (even_integer_p) {
        // |h|^p is a polynomial of degree d*p in z, conj z: exact rule
        int total = d * static_cast<int>(p);
        radial = total / 2 + 1;
        angular = next_pow2(total + 1);
    } else {
        radial = d + 24;
        angular = std::max(512, next_pow2(4 * (d + 1)));
    }
    QuadratureRule rule = make_disk_rule(alpha, radial, angular);
    const std::size_t nr = rule.radial_nodes.size();
    std::vector<double> partial(nr, 0.0);
    parallel_for(nr, [&](std::size_t i) {
        partial[i] = rule.radial_nodes[i].second *
                     ring_power_mean(ht, rule.radial_nodes[i].first, p, angular);
    });
    KahanSum acc;
    for (double v : partial) acc.add(v);
    return acc.value();
}

double coefficient_norm(const PowerSeries& f, double shift_base, double beta) {
    // sqrt(sum (shift_base + k)^{2 beta} |a_k|^2); shift_base 1 gives the
    // (I+R)^beta scale, 0 the R^beta scale (constant term then dropped)
    KahanSum acc;
    for (int k = 0; k <= f.degree(); ++k) {
        double base = shift_base + k;
        if (base <= 0.0) continue;
        double factor = (beta == 0.0) ? 1.0 : std::pow(base, 2.0 * beta);
        acc.add(factor * std::norm(f.coeff(k)));
    }
    return std::sqrt(acc.value());
}

}  // namespace

NormReport norm_report(const SpaceSpec& s, const PowerSeries& f,
                       const ToleranceConfig& cfg) {
    if (s.n != 1)
        throw std::invalid_argument(
            "norm: power-series norms are univariate; use n = 1 descriptors");
    NormReport rep;
    // An input whose degree reaches the series budget is usually a truncated
    // expansion of a non-polynomial symbol; norms that are not exact on the
    // supplied coefficients flag the value as truncation-limited.
    const bool at_budget = f.degree() + 1 >= kDefaultTruncation;
    switch (s.variant) {
        case SpaceVariant::Bloch: {
            SupEstimate sup = weighted_sup(complex_derivative(f), s.alpha, cfg);
            double head = std::abs(f.coeff(0));
            rep.value = head + sup.value;
            rep.lower = rep.value;
            rep.upper = head + sup.upper;
            rep.truncated_estimate = at_budget;
            return rep;
        }
        case SpaceVariant::Growth: {
            SupEstimate sup = weighted_sup(f, s.alpha, cfg);
            rep.value = sup.value;
            rep.lower = sup.value;
            rep.upper = sup.upper;
            rep.truncated_estimate = at_budget;
            return rep;
        }
        case SpaceVariant::BergmanSobolev: {
            PowerSeries g = shifted_radial_derivative(f, s.beta);
            rep.value = std::pow(bergman_power(g, s.p, s.alpha), 1.0 / s.p);
            rep.lower = rep.upper = rep.value;
            bool exact_rule = s.p == std::floor(s.p) && static_cast<long>(s.p) % 2 == 0;
            rep.truncated_estimate = at_budget && !exact_rule;
            return rep;
        }
        case SpaceVariant::HardySobolev: {
            rep.value = coefficient_norm(f, 1.0, s.beta);
            rep.lower = rep.upper = rep.value;
            return rep;
        }
        case SpaceVariant::Hardy: {
            if (s.p == 2.0) {
                rep.value = coefficient_norm(f, 1.0, 0.0);
            } else {
                PowerSeries ft = f;
                ft.trim();
                int N = std::max(1024, next_pow2(4 * (ft.degree() + 1)));
                rep.value = std::pow(ring_power_mean(ft, 1.0, s.p, N), 1.0 / s.p);
                rep.truncated_estimate = at_budget;
            }
            rep.lower = rep.upper = rep.value;
            return rep;
        }
    }
    throw std::logic_error("norm: unknown variant");
}

double norm(const SpaceSpec& s, const PowerSeries& f, const ToleranceConfig& cfg) {
    return norm_report(s, f, cfg).value;
}

double equivalent_norm_R(const SpaceSpec& s, const PowerSeries& f,
                         const ToleranceConfig& cfg) {
    (void)cfg;
    if (s.n != 1)
        throw std::invalid_argument("equivalent_norm_R: n = 1 descriptors only");
    double head = std::abs(f.coeff(0));
    if (s.variant == SpaceVariant::BergmanSobolev)
        return head + std::pow(bergman_power(radial_derivative(f, s.beta), s.p, s.alpha),
                               1.0 / s.p);
    if (s.variant == SpaceVariant::HardySobolev)
        return head + coefficient_norm(f, 0.0, s.beta);
    throw std::invalid_argument(
        "equivalent_norm_R: applies to the Bergman-Sobolev and Hardy-Sobolev scales");
}

double equivalent_norm_D(const SpaceSpec& s, const PowerSeries& f,
                         const ToleranceConfig& cfg) {
    (void)cfg;
    if (s.variant != SpaceVariant::BergmanSobolev || s.n != 1)
        throw std::invalid_argument(
            "equivalent_norm_D: applies to univariate Bergman-Sobolev descriptors");
    double rounded = std::round(s.beta);
    if (std::abs(s.beta - rounded) > 1e-12 || rounded < 1.0)
        throw std::invalid_argument(
            "equivalent_norm_D: requires a positive integer smoothness order");
    int N = static_cast<int>(rounded);
    KahanSum head;
    PowerSeries d = f;
    for (int j = 0; j < N; ++j) {
        head.add(std::abs(d.coeff(0)));  // |D^j f(0)|
        d = complex_derivative(d);
    }
    return head.value() + std::pow(bergman_power(d, s.p, s.alpha), 1.0 / s.p);
}

SpaceSpec shift_parameters(const SpaceSpec& s, double new_beta) {
    if (s.variant != SpaceVariant::BergmanSobolev)
        throw std::invalid_argument(
            "shift_parameters: applies to Bergman-Sobolev descriptors");
    double alpha2 = s.alpha - s.p * (s.beta - new_beta);
    if (alpha2 > -1.0 + 1e-12)
        return SpaceSpec::bergman_sobolev(s.p, alpha2, new_beta, s.n);
    if (s.p == 2.0 && std::abs(alpha2 + 1.0) <= 1e-9)
        return SpaceSpec::hardy_sobolev(new_beta, s.n);
    throw std::invalid_argument(
        "shift_parameters: target weight " + fmt_param(alpha2) +
        " leaves admissible scale (needs alpha > -1, or alpha = -1 with p = 2)");
}

int representative_order(const SpaceSpec& s) {
    if (s.variant != SpaceVariant::BergmanSobolev &&
        s.variant != SpaceVariant::HardySobolev)
        throw std::invalid_argument(
            "representative_order: defined for the Sobolev scales");
    double threshold = s.beta - (s.alpha + 0.5) / s.p;
    int N = static_cast<int>(std::floor(threshold)) + 1;
    return std::max(1, N);
}

}  // namespace multspec
