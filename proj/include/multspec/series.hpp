#pragma once

#include <array>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "multspec/numerics.hpp"

namespace multspec {

// Truncation budget used when expanding closed-form symbols into series.
constexpr int kDefaultTruncation = 256;

// Truncated power series sum a_k z^k, k = 0..coeffs.size()-1.  Polynomials
// are represented exactly; operations that can only be correct up to a
// truncation degree take it explicitly.
struct PowerSeries {
    std::vector<cplx> coeffs;

    PowerSeries() = default;
    explicit PowerSeries(std::vector<cplx> c) : coeffs(std::move(c)) {}

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    cplx coeff(int k) const {
        return (k >= 0 && k < static_cast<int>(coeffs.size())) ? coeffs[k] : cplx(0.0);
    }
    void trim();                      // drop trailing zeros (keeps >= 1 coeff)
    void truncate(int max_degree);    // keep coefficients up to max_degree
    double coeff_scale() const;       // max |a_k|, 0 for the empty series
};

struct NotAZeroError : std::runtime_error {
    double residual;
    NotAZeroError(const std::string& what, double res)
        : std::runtime_error(what), residual(res) {}
};

PowerSeries add(const PowerSeries& f, const PowerSeries& g);
PowerSeries subtract(const PowerSeries& f, const PowerSeries& g);
PowerSeries scale(const PowerSeries& f, cplx c);

// Cauchy product.  max_degree < 0 keeps the full product (exact for
// polynomials); otherwise the result is truncated, which is the honest
// degree when the inputs are themselves truncations.
PowerSeries multiply(const PowerSeries& f, const PowerSeries& g, int max_degree = -1);

cplx evaluate(const PowerSeries& f, cplx z);

// R^beta f = sum_{k>=1} k^beta a_k z^k; the constant term is annihilated.
PowerSeries radial_derivative(const PowerSeries& f, double beta);

// (I+R)^beta f = sum_{k>=0} (1+k)^beta a_k z^k.
PowerSeries shifted_radial_derivative(const PowerSeries& f, double beta);

// Ordinary derivative f'.
PowerSeries complex_derivative(const PowerSeries& f);

// Synthetic division by (z - z0) for a series with f(z0) = 0 (up to
// rel_tol * coeff_scale).  Throws NotAZeroError with the residual otherwise.
PowerSeries divide_by_root(const PowerSeries& f, cplx z0, double rel_tol = 1e-9);

// Series long division f/g up to max_degree; requires |g(0)| > rel_tol * scale.
PowerSeries divide(const PowerSeries& f, const PowerSeries& g, int max_degree,
                   double rel_tol = 1e-9);

// Values of R^N (f/u) at the given points via the finite combination
//   (-1)^N u^-(N+1) sum_{k=0}^N (-1)^k C(N+1,k) u^k R^N(u^{N-k} f),
// which avoids dividing series.  N must be a positive integer (the identity
// fails at N = 0), and |u| must stay above rel_tol at every sample point.
std::vector<cplx> quotient_radial_derivative(const PowerSeries& f,
                                             const PowerSeries& u, int N,
                                             const std::vector<cplx>& points,
                                             double rel_tol = 1e-9);

// Polynomial in z_1..z_n, n in {2,3}, sparse coefficient map keyed by the
// exponent multi-index (unused slots stay 0).
struct MultiPoly {
    int dim = 2;
    std::map<std::array<int, 3>, cplx> coeffs;

    explicit MultiPoly(int n = 2) : dim(n) {
        if (n < 2 || n > 3) throw std::invalid_argument("MultiPoly: dim must be 2 or 3");
    }
    void set(std::array<int, 3> idx, cplx c);
    int total_degree() const;
};

MultiPoly add(const MultiPoly& f, const MultiPoly& g);
MultiPoly multiply(const MultiPoly& f, const MultiPoly& g);
MultiPoly scale(const MultiPoly& f, cplx c);
cplx evaluate(const MultiPoly& f, const std::vector<cplx>& z);
MultiPoly radial_derivative(const MultiPoly& f, double beta);
MultiPoly shifted_radial_derivative(const MultiPoly& f, double beta);

}  // namespace multspec
