#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "multspec/numerics.hpp"
#include "multspec/series.hpp"

namespace multspec {

struct ParseError : std::runtime_error {
    std::size_t position;
    ParseError(const std::string& what, std::size_t pos)
        : std::runtime_error(what), position(pos) {}
};

// Closed-form analytic symbol on the unit ball.  Value-semantic immutable
// tree; construction validates structural preconditions (quotient
// denominators zero-free on the closed ball, Blaschke parameters inside the
// disk), so every Symbol in existence is analytic on a neighbourhood of the
// closed ball and in particular continuous up to the boundary.
class Symbol {
  public:
    enum class Kind { Constant, Coordinate, Poly, Sum, Product, Quotient, Blaschke, IntegerPower };

    Symbol() : Symbol(constant(cplx(0.0))) {}

    static Symbol constant(cplx c);
    static Symbol coordinate(int j);            // 1-based; j = 1 is z (or z1)
    static Symbol poly(std::vector<cplx> coeffs);  // univariate in z
    static Symbol sum(std::vector<Symbol> terms);
    static Symbol product(std::vector<Symbol> factors);
    static Symbol quotient(Symbol num, Symbol den);  // validates the denominator
    static Symbol blaschke(cplx a);             // (a - z) / (1 - conj(a) z), |a| < 1
    static Symbol integer_power(Symbol base, int m);  // m >= 0

    Kind kind() const;
    int dim() const;  // highest coordinate index appearing (>= 1)

    // Payload accessors (valid for the matching kind only).
    cplx constant_value() const;
    int coordinate_index() const;
    const std::vector<cplx>& poly_coeffs() const;
    const std::vector<Symbol>& children() const;   // Sum / Product
    const Symbol& quotient_num() const;
    const Symbol& quotient_den() const;
    cplx blaschke_parameter() const;
    const Symbol& power_base() const;
    int power_exponent() const;

    struct Node;

  private:
    explicit Symbol(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
    friend Symbol make_unchecked_quotient(Symbol, Symbol);
};

// expr := term (('+'|'-') term)*
// term := factor (('*'|'/') factor)*
// factor := base ('^' uint)?
// base := number | 'z' | 'z1'..'z3' | 'B(' complex ')' | 'C(' complex ')' | '(' expr ')'
// complex := number (('+'|'-') number 'i')? | number 'i'   (signs allowed inside)
// C(complex) wraps a complex literal (e.g. C(1.5-2i)) so that programmatically
// built complex constants render to parseable text.
Symbol parse_symbol(const std::string& text);

// Parseable rendering; eval(parse_symbol(render(u)), p) == eval(u, p).
std::string render(const Symbol& u);

// Exact closed-form evaluation; the point must lie in the closed unit ball
// (Euclidean norm <= 1 + 1e-9).  point.size() may exceed dim().
cplx eval(const Symbol& u, const std::vector<cplx>& point);
cplx eval(const Symbol& u, cplx z);  // n = 1 convenience

// Numerator/denominator polynomials with den zero-free on the closed disk
// (guaranteed by construction validation).  n = 1 only.
struct RationalForm {
    PowerSeries num;
    PowerSeries den;
};
RationalForm rational_form(const Symbol& u);

cplx eval_rational(const RationalForm& r, cplx z);
// Derivative (num' den - num den') / den^2 evaluated pointwise.
cplx eval_rational_derivative(const RationalForm& r, cplx z);

// Taylor expansion through degree max_degree (n = 1).
PowerSeries to_series(const Symbol& u, int max_degree = kDefaultTruncation);

// Polynomial symbols only (any quotient or Blaschke factor throws); n >= 2.
MultiPoly to_multipoly(const Symbol& u, int dim);

struct Zero {
    cplx location;
    int multiplicity = 1;
};

struct ZeroSet {
    std::vector<Zero> zeros;      // strictly inside the open disk
    int total_multiplicity = 0;
    bool boundary_zero = false;   // a zero lies within rel_tol of the circle
};

// Zeros of u - lambda in the open unit disk with multiplicities, certified
// against the boundary winding number.  n = 1 only.
ZeroSet zeros_in_disk(const Symbol& u, cplx lambda,
                      const ToleranceConfig& cfg = ToleranceConfig());

struct CertifiedBound {
    double lower = 0.0;   // certified bound (min side) or best sample (max side)
    double upper = 0.0;   // best sample (min side) or certified bound (max side)
    double witness_angle = 0.0;
};

// Certified min of |u(e^it) - lambda| over the circle: branch-and-bound on
// angle intervals with a rigorous Lipschitz constant derived from the
// rational form.  n = 1 only.
CertifiedBound boundary_min_modulus(const Symbol& u, cplx lambda,
                                    const ToleranceConfig& cfg = ToleranceConfig());

// Certified max of |u| over the circle (equals sup over the closed disk by
// the maximum principle).  For n > 1 the value is a dense-sample maximum
// over the sphere (2^16 low-discrepancy points) and lower == upper.
CertifiedBound sup_norm(const Symbol& u, const ToleranceConfig& cfg = ToleranceConfig());

// Rigorous upper bound for sup |u'| on the unit circle (n = 1).
double boundary_derivative_bound(const Symbol& u);

// u(e^{2 pi i j / count}) for j = 0..count-1.
std::vector<cplx> boundary_samples(const Symbol& u, int count);

// Low-discrepancy fill of the ball/sphere in C^n used by sampling ops.
std::vector<std::vector<cplx>> ball_fill(int n, int count);
std::vector<std::vector<cplx>> sphere_fill(int n, int count);

}  // namespace multspec
