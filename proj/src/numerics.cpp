#include "multspec/numerics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace multspec {

namespace {

// Lanczos coefficients, g = 671/128.  Gives full double precision for the
// log on [1/2, inf); values below 1/2 go through the reflection formula.
constexpr double kLanczosG = 5.24218750000000000;
constexpr double kLanczosC0 = 0.999999999999997092;
constexpr double kLanczosC[14] = {
    57.1562356658629235,     -59.5979603554754912,
    14.1360979747417471,     -0.491913816097620199,
    0.339946499848118887e-4, 0.465236289270485756e-4,
    -0.983744753048795646e-4, 0.158088703224912494e-3,
    -0.210264441724104883e-3, 0.217439618115212643e-3,
    -0.164318106536763890e-3, 0.844182239838527433e-4,
    -0.261908384015814087e-4, 0.368991826595316234e-5};
constexpr double kSqrtTwoPi = 2.5066282746310005;

double log_gamma_lanczos(double x) {
    double t = x + kLanczosG;
    double acc = kLanczosC0;
    double y = x;
    for (double c : kLanczosC) acc += c / ++y;
    return (x + 0.5) * std::log(t) - t + std::log(kSqrtTwoPi * acc / x);
}

}  // namespace

double log_gamma(double x) {
    if (!(x > 0.0)) throw std::domain_error("log_gamma: requires x > 0");
    if (x >= 0.5) return log_gamma_lanczos(x);
    // Gamma(x) Gamma(1-x) = pi / sin(pi x)
    return std::log(kPi / std::sin(kPi * x)) - log_gamma_lanczos(1.0 - x);
}

double log_binomial(double k, double n) {
    if (n < 0.0 || n > k) throw std::domain_error("log_binomial: need 0 <= n <= k");
    if (n == 0.0 || n == k) return 0.0;
    return log_gamma(k + 1.0) - log_gamma(n + 1.0) - log_gamma(k - n + 1.0);
}

GammaRatioCheck gamma_ratio_check(double K, double L, double M) {
    if (!(K > 0.0)) throw std::domain_error("gamma_ratio_check: requires K > 0");
    GammaRatioCheck out;
    double r1 = log_gamma(K + L) - log_gamma(K) - L * std::log(K);
    out.ratio1_error = std::abs(std::expm1(r1));
    double lhs = log_gamma(2.0 * K + L) - log_gamma(K + L) - log_gamma(K + M);
    double rhs = (2.0 * K + L - 1.0) * std::log(2.0) +
                 (0.5 - M) * std::log(K) - 0.5 * std::log(kPi);
    out.ratio2_error = std::abs(std::expm1(lhs - rhs));
    return out;
}

namespace {

// Nodes and weights for int_0^1 h(s) (alpha+1)(1-s)^alpha ds via Golub-Welsch
// on the monic Jacobi recurrence (weight (1-x)^alpha on [-1,1], then mapped
// to [0,1]).  Symmetric tridiagonal QL with implicit shifts, tracking the
// first eigenvector component for the weights.
void gauss_jacobi01(double alpha, int n, std::vector<double>& node,
                    std::vector<double>& weight) {
    if (n < 1) throw std::invalid_argument("gauss_jacobi01: need >= 1 node");
    std::vector<double> d(n), e(n, 0.0), z(n, 0.0);
    const double a = alpha;
    d[0] = -a / (a + 2.0);
    for (int k = 1; k < n; ++k) {
        double two_k_a = 2.0 * k + a;
        d[k] = -a * a / (two_k_a * (two_k_a + 2.0));
        double b2 = 4.0 * k * k * (k + a) * (k + a) /
                    (two_k_a * two_k_a * (two_k_a + 1.0) * (two_k_a - 1.0));
        e[k - 1] = std::sqrt(b2);
    }
    z[0] = 1.0;

    const double eps = 1e-15;
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (++iter > 60)
                    throw std::runtime_error("gauss_jacobi01: QL failed to converge");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                for (int i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    f = z[i + 1];
                    z[i + 1] = s * z[i] + c * f;
                    z[i] = c * z[i] - s * f;
                }
                if (r == 0.0 && m - 1 >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }

    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](int i, int j) { return d[i] < d[j]; });
    node.resize(n);
    weight.resize(n);
    for (int i = 0; i < n; ++i) {
        node[i] = 0.5 * (d[idx[i]] + 1.0);          // [-1,1] -> [0,1]
        weight[i] = z[idx[i]] * z[idx[i]];          // mass normalized to 1
    }
}

}  // namespace

QuadratureRule make_disk_rule(double alpha, int radial_count, int angular_count) {
    if (!(alpha > -1.0)) throw std::domain_error("make_disk_rule: requires alpha > -1");
    if (angular_count < 4) angular_count = 4;
    QuadratureRule rule;
    rule.alpha = alpha;
    rule.angular_count = angular_count;
    std::vector<double> s, w;
    gauss_jacobi01(alpha, radial_count, s, w);
    rule.radial_nodes.reserve(radial_count);
    for (int i = 0; i < radial_count; ++i)
        rule.radial_nodes.emplace_back(std::sqrt(std::max(0.0, s[i])), w[i]);
    return rule;
}

QuadratureRule disk_rule_for_degree(double alpha, int degree) {
    if (degree < 0) degree = 0;
    int radial = degree / 2 + 2;
    int angular = std::max(16, degree + 4);
    return make_disk_rule(alpha, radial, angular);
}

double disk_integral(const std::function<double(cplx)>& values,
                     const QuadratureRule& rule) {
    const int na = rule.angular_count;
    const std::size_t nr = rule.radial_nodes.size();
    std::vector<double> partial(nr, 0.0);
    parallel_for(nr, [&](std::size_t i) {
        double r = rule.radial_nodes[i].first;
        KahanSum ring;
        for (int j = 0; j < na; ++j) {
            double t = kTwoPi * j / na;
            ring.add(values(cplx(r * std::cos(t), r * std::sin(t))));
        }
        partial[i] = rule.radial_nodes[i].second * ring.value() / na;
    });
    KahanSum total;
    for (double p : partial) total.add(p);
    return total.value();
}

double circle_mean(const std::function<double(double)>& values, int count) {
    if (count < 1) throw std::invalid_argument("circle_mean: need count >= 1");
    KahanSum acc;
    for (int j = 0; j < count; ++j) acc.add(values(kTwoPi * j / count));
    return acc.value() / count;
}

double curve_distance(const std::vector<cplx>& curve, cplx lambda) {
    const std::size_t n = curve.size();
    if (n == 0) throw std::invalid_argument("curve_distance: empty curve");
    double best = std::abs(lambda - curve[0]);
    for (std::size_t k = 0; k < n; ++k) {
        cplx a = curve[k];
        cplx b = curve[(k + 1) % n];
        cplx ab = b - a;
        double len2 = std::norm(ab);
        double t = 0.0;
        if (len2 > 0.0) {
            t = ((lambda.real() - a.real()) * ab.real() +
                 (lambda.imag() - a.imag()) * ab.imag()) / len2;
            t = std::clamp(t, 0.0, 1.0);
        }
        best = std::min(best, std::abs(lambda - (a + t * ab)));
    }
    return best;
}

double curve_diameter(const std::vector<cplx>& curve) {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (cplx p : curve) {
        xmin = std::min(xmin, p.real());
        xmax = std::max(xmax, p.real());
        ymin = std::min(ymin, p.imag());
        ymax = std::max(ymax, p.imag());
    }
    if (curve.empty()) return 0.0;
    return std::hypot(xmax - xmin, ymax - ymin);
}

WindingResult winding_number(const std::vector<cplx>& curve, cplx lambda,
                             double rel_tol) {
    if (curve.size() < 3)
        throw std::invalid_argument("winding_number: need a closed curve (>= 3 points)");
    WindingResult out;
    double diam = curve_diameter(curve);
    double guard = rel_tol * std::max(diam, 1e-300);
    if (curve_distance(curve, lambda) <= guard) {
        out.on_curve = true;
        return out;
    }
    double total = 0.0;
    const std::size_t n = curve.size();
    for (std::size_t k = 0; k < n; ++k) {
        cplx a = curve[k] - lambda;
        cplx b = curve[(k + 1) % n] - lambda;
        total += std::arg(b / a);  // |increment| < pi since neither leg is 0
    }
    out.winding = static_cast<int>(std::lround(total / kTwoPi));
    return out;
}

SlopeFit fit_loglog_slope(const std::vector<std::pair<double, double>>& xy) {
    if (xy.size() < 3)
        throw std::invalid_argument("fit_loglog_slope: need at least 3 pairs");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::vector<std::pair<double, double>> logs;
    logs.reserve(xy.size());
    for (auto [x, y] : xy) {
        if (!(x > 0.0) || !(y > 0.0))
            throw std::domain_error("fit_loglog_slope: requires positive pairs");
        double lx = std::log(x), ly = std::log(y);
        logs.emplace_back(lx, ly);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    double n = static_cast<double>(xy.size());
    double denom = n * sxx - sx * sx;
    if (std::abs(denom) < 1e-14 * std::max(1.0, n * sxx))
        throw std::domain_error("fit_loglog_slope: abscissae are degenerate");
    SlopeFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    for (auto [lx, ly] : logs)
        fit.max_residual =
            std::max(fit.max_residual, std::abs(ly - (fit.slope * lx + fit.intercept)));
    return fit;
}

std::uint64_t Rng::next_u64() {
    // splitmix64
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double Rng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

cplx Rng::uniform_disk(double radius) {
    double r = radius * std::sqrt(uniform());
    double t = kTwoPi * uniform();
    return cplx(r * std::cos(t), r * std::sin(t));
}

double halton(std::uint64_t index, int dimension) {
    static const int bases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29};
    if (dimension < 0 || dimension >= 10)
        throw std::invalid_argument("halton: dimension out of range");
    const int b = bases[dimension];
    double f = 1.0, x = 0.0;
    std::uint64_t i = index + 1;  // skip the origin
    while (i > 0) {
        f /= b;
        x += f * static_cast<double>(i % b);
        i /= b;
    }
    return x;
}

int worker_thread_count() {
    static int cached = [] {
        int n = static_cast<int>(std::thread::hardware_concurrency());
        if (n <= 0) n = 1;
        n = std::min(n, 8);
        if (const char* env = std::getenv("MULTSPEC_THREADS")) {
            char* end = nullptr;
            long v = std::strtol(env, &end, 10);
            if (end != env && v >= 1 && v <= 256) n = static_cast<int>(v);
        }
        return n;
    }();
    return cached;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    int workers = worker_thread_count();
    if (workers <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    workers = static_cast<int>(std::min<std::size_t>(workers, n));
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                fn(i);
            }
        });
    for (auto& t : pool) t.join();
}

}  // namespace multspec
