#include "multspec/series.hpp"

#include <algorithm>
#include <cmath>

namespace multspec {

void PowerSeries::trim() {
    while (coeffs.size() > 1 && std::abs(coeffs.back()) == 0.0) coeffs.pop_back();
}

void PowerSeries::truncate(int max_degree) {
    if (max_degree < 0) max_degree = 0;
    if (degree() > max_degree) coeffs.resize(static_cast<std::size_t>(max_degree) + 1);
}

double PowerSeries::coeff_scale() const {
    double m = 0.0;
    for (cplx c : coeffs) m = std::max(m, std::abs(c));
    return m;
}

PowerSeries add(const PowerSeries& f, const PowerSeries& g) {
    PowerSeries out;
    out.coeffs.resize(std::max(f.coeffs.size(), g.coeffs.size()), cplx(0.0));
    for (std::size_t k = 0; k < out.coeffs.size(); ++k)
        out.coeffs[k] = f.coeff(static_cast<int>(k)) + g.coeff(static_cast<int>(k));
    return out;
}

PowerSeries subtract(const PowerSeries& f, const PowerSeries& g) {
    return add(f, scale(g, cplx(-1.0)));
}

PowerSeries scale(const PowerSeries& f, cplx c) {
    PowerSeries out = f;
    for (cplx& a : out.coeffs) a *= c;
    return out;
}

PowerSeries multiply(const PowerSeries& f, const PowerSeries& g, int max_degree) {
    if (f.coeffs.empty() || g.coeffs.empty()) return PowerSeries({cplx(0.0)});
    int full = f.degree() + g.degree();
    int out_deg = (max_degree < 0) ? full : std::min(full, max_degree);
    PowerSeries out;
    out.coeffs.assign(static_cast<std::size_t>(out_deg) + 1, cplx(0.0));
    for (int i = 0; i <= f.degree(); ++i) {
        cplx a = f.coeffs[i];
        if (a == cplx(0.0)) continue;
        int jmax = std::min(g.degree(), out_deg - i);
        for (int j = 0; j <= jmax; ++j) out.coeffs[i + j] += a * g.coeffs[j];
    }
    return out;
}

cplx evaluate(const PowerSeries& f, cplx z) {
    cplx acc(0.0);
    for (auto it = f.coeffs.rbegin(); it != f.coeffs.rend(); ++it) acc = acc * z + *it;
    return acc;
}

PowerSeries radial_derivative(const PowerSeries& f, double beta) {
    PowerSeries out = f;
    if (!out.coeffs.empty()) out.coeffs[0] = cplx(0.0);
    for (int k = 1; k <= out.degree(); ++k)
        out.coeffs[k] *= std::pow(static_cast<double>(k), beta);
    return out;
}

PowerSeries shifted_radial_derivative(const PowerSeries& f, double beta) {
    PowerSeries out = f;
    for (int k = 0; k <= out.degree(); ++k)
        out.coeffs[k] *= std::pow(1.0 + k, beta);
    return out;
}

PowerSeries complex_derivative(const PowerSeries& f) {
    PowerSeries out;
    if (f.degree() < 1) {
        out.coeffs = {cplx(0.0)};
        return out;
    }
    out.coeffs.resize(f.coeffs.size() - 1);
    for (int k = 1; k <= f.degree(); ++k)
        out.coeffs[k - 1] = static_cast<double>(k) * f.coeffs[k];
    return out;
}

PowerSeries divide_by_root(const PowerSeries& f, cplx z0, double rel_tol) {
    double scale0 = f.coeff_scale();
    cplx residual = evaluate(f, z0);
    if (std::abs(residual) > rel_tol * std::max(scale0, 1e-300))
        throw NotAZeroError("divide_by_root: point is not a zero of the series",
                            std::abs(residual));
    int d = f.degree();
    PowerSeries out;
    if (d < 1) {
        out.coeffs = {cplx(0.0)};
        return out;
    }
    out.coeffs.assign(static_cast<std::size_t>(d), cplx(0.0));
    cplx carry = f.coeffs[d];
    for (int k = d - 1; k >= 0; --k) {
        out.coeffs[k] = carry;
        carry = f.coeffs[k] + z0 * carry;
    }
    return out;
}

PowerSeries divide(const PowerSeries& f, const PowerSeries& g, int max_degree,
                   double rel_tol) {
    if (g.coeffs.empty() || std::abs(g.coeffs[0]) <= rel_tol * std::max(g.coeff_scale(), 1e-300))
        throw std::domain_error("divide: denominator constant term is (numerically) zero");
    if (max_degree < 0) max_degree = kDefaultTruncation;
    PowerSeries out;
    out.coeffs.assign(static_cast<std::size_t>(max_degree) + 1, cplx(0.0));
    cplx g0 = g.coeffs[0];
    for (int k = 0; k <= max_degree; ++k) {
        cplx acc = f.coeff(k);
        int jmax = std::min(k, g.degree());
        for (int j = 1; j <= jmax; ++j) acc -= g.coeffs[j] * out.coeffs[k - j];
        out.coeffs[k] = acc / g0;
    }
    return out;
}

std::vector<cplx> quotient_radial_derivative(const PowerSeries& f,
                                             const PowerSeries& u, int N,
                                             const std::vector<cplx>& points,
                                             double rel_tol) {
    if (N < 1)
        throw std::invalid_argument(
            "quotient_radial_derivative: N must be a positive integer "
            "(the combination identity fails at N = 0)");
    // R^N(u^{N-k} f) for k = 0..N, exact since the inputs are polynomials.
    std::vector<PowerSeries> rn(static_cast<std::size_t>(N) + 1);
    PowerSeries upow({cplx(1.0)});
    std::vector<PowerSeries> upowers(static_cast<std::size_t>(N) + 1);
    for (int j = 0; j <= N; ++j) {
        upowers[j] = upow;
        if (j < N) upow = multiply(upow, u);
    }
    for (int k = 0; k <= N; ++k)
        rn[k] = radial_derivative(multiply(upowers[N - k], f), static_cast<double>(N));

    std::vector<double> binom(static_cast<std::size_t>(N) + 1);
    for (int k = 0; k <= N; ++k)
        binom[k] = std::exp(log_binomial(N + 1.0, static_cast<double>(k)));

    double sign_n = (N % 2 == 0) ? 1.0 : -1.0;
    std::vector<cplx> out;
    out.reserve(points.size());
    for (cplx z : points) {
        cplx uz = evaluate(u, z);
        if (std::abs(uz) <= rel_tol)
            throw std::domain_error(
                "quotient_radial_derivative: |u| lower bound violated at a sample point");
        cplx acc(0.0);
        cplx uk(1.0);
        for (int k = 0; k <= N; ++k) {
            double sign_k = (k % 2 == 0) ? 1.0 : -1.0;
            acc += sign_k * binom[k] * uk * evaluate(rn[k], z);
            uk *= uz;
        }
        cplx denom = std::pow(uz, N + 1);
        out.push_back(sign_n * acc / denom);
    }
    return out;
}

void MultiPoly::set(std::array<int, 3> idx, cplx c) {
    for (int j = dim; j < 3; ++j)
        if (idx[j] != 0)
            throw std::invalid_argument("MultiPoly::set: exponent beyond dimension");
    if (c == cplx(0.0))
        coeffs.erase(idx);
    else
        coeffs[idx] = c;
}

int MultiPoly::total_degree() const {
    int d = 0;
    for (const auto& [idx, c] : coeffs) d = std::max(d, idx[0] + idx[1] + idx[2]);
    return d;
}

MultiPoly add(const MultiPoly& f, const MultiPoly& g) {
    if (f.dim != g.dim) throw std::invalid_argument("MultiPoly add: dimension mismatch");
    MultiPoly out = f;
    for (const auto& [idx, c] : g.coeffs) {
        auto it = out.coeffs.find(idx);
        if (it == out.coeffs.end())
            out.coeffs[idx] = c;
        else if ((it->second += c) == cplx(0.0))
            out.coeffs.erase(it);
    }
    return out;
}

MultiPoly multiply(const MultiPoly& f, const MultiPoly& g) {
    if (f.dim != g.dim) throw std::invalid_argument("MultiPoly multiply: dimension mismatch");
    MultiPoly out(f.dim);
    for (const auto& [ia, ca] : f.coeffs)
        for (const auto& [ib, cb] : g.coeffs) {
            std::array<int, 3> idx = {ia[0] + ib[0], ia[1] + ib[1], ia[2] + ib[2]};
            out.coeffs[idx] += ca * cb;
        }
    for (auto it = out.coeffs.begin(); it != out.coeffs.end();)
        it = (it->second == cplx(0.0)) ? out.coeffs.erase(it) : std::next(it);
    return out;
}

MultiPoly scale(const MultiPoly& f, cplx c) {
    MultiPoly out(f.dim);
    if (c == cplx(0.0)) return out;
    for (const auto& [idx, a] : f.coeffs) out.coeffs[idx] = a * c;
    return out;
}

cplx evaluate(const MultiPoly& f, const std::vector<cplx>& z) {
    if (static_cast<int>(z.size()) != f.dim)
        throw std::invalid_argument("MultiPoly evaluate: point dimension mismatch");
    cplx acc(0.0);
    for (const auto& [idx, c] : f.coeffs) {
        cplx term = c;
        for (int j = 0; j < f.dim; ++j)
            for (int e = 0; e < idx[j]; ++e) term *= z[j];
        acc += term;
    }
    return acc;
}

MultiPoly radial_derivative(const MultiPoly& f, double beta) {
    MultiPoly out(f.dim);
    for (const auto& [idx, c] : f.coeffs) {
        int k = idx[0] + idx[1] + idx[2];
        if (k == 0) continue;
        out.coeffs[idx] = c * std::pow(static_cast<double>(k), beta);
    }
    return out;
}

MultiPoly shifted_radial_derivative(const MultiPoly& f, double beta) {
    MultiPoly out(f.dim);
    for (const auto& [idx, c] : f.coeffs) {
        int k = idx[0] + idx[1] + idx[2];
        out.coeffs[idx] = c * std::pow(1.0 + k, beta);
    }
    return out;
}

}  // namespace multspec
