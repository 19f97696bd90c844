#include "multspec/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <queue>
#include <sstream>

namespace multspec {

struct Symbol::Node {
    Kind kind;
    cplx value;                    // Constant / Blaschke parameter
    int index = 0;                 // Coordinate index / power exponent
    std::vector<cplx> coeffs;      // Poly
    std::vector<Symbol> children;  // Sum, Product, Quotient (num, den), IntegerPower (base)
    int dim = 1;
};

namespace {

int max_child_dim(const std::vector<Symbol>& cs) {
    int d = 1;
    for (const auto& c : cs) d = std::max(d, c.dim());
    return d;
}

}  // namespace

// Bypasses denominator validation; for building known-good trees internally
// and for exercising failure paths in tests.
Symbol make_unchecked_quotient(Symbol num, Symbol den) {
    Symbol::Node n;
    n.kind = Symbol::Kind::Quotient;
    n.dim = std::max(num.dim(), den.dim());
    n.children.push_back(std::move(num));
    n.children.push_back(std::move(den));
    return Symbol(std::make_shared<const Symbol::Node>(std::move(n)));
}

Symbol Symbol::constant(cplx c) {
    Node n;
    n.kind = Kind::Constant;
    n.value = c;
    return Symbol(std::make_shared<const Node>(std::move(n)));
}

Symbol Symbol::coordinate(int j) {
    if (j < 1 || j > 3) throw std::invalid_argument("coordinate: index must be 1..3");
    Node n;
    n.kind = Kind::Coordinate;
    n.index = j;
    n.dim = j;
    return Symbol(std::make_shared<const Node>(std::move(n)));
}

Symbol Symbol::poly(std::vector<cplx> coeffs) {
    if (coeffs.empty()) coeffs.push_back(cplx(0.0));
    Node n;
    n.kind = Kind::Poly;
    n.coeffs = std::move(coeffs);
    return Symbol(std::make_shared<const Node>(std::move(n)));
}

Symbol Symbol::sum(std::vector<Symbol> terms) {
    if (terms.empty()) return constant(cplx(0.0));
    if (terms.size() == 1) return terms[0];
    Node n;
    n.kind = Kind::Sum;
    n.dim = max_child_dim(terms);
    n.children = std::move(terms);
    return Symbol(std::make_shared<const Node>(std::move(n)));
}

Symbol Symbol::product(std::vector<Symbol> factors) {
    if (factors.empty()) return constant(cplx(1.0));
    if (factors.size() == 1) return factors[0];
    Node n;
    n.kind = Kind::Product;
    n.dim = max_child_dim(factors);
    n.children = std::move(factors);
    return Symbol(std::make_shared<const Node>(std::move(n)));
}

Symbol Symbol::blaschke(cplx a) {
    if (!(std::abs(a) < 1.0))
        throw std::domain_error("blaschke: parameter must satisfy |a| < 1");
    Node n;
    n.kind = Kind::Blaschke;
    n.value = a;
    return Symbol(std::make_shared<const Node>(std::move(n)));
}

Symbol Symbol::integer_power(Symbol base, int m) {
    if (m < 0) throw std::invalid_argument("integer_power: exponent must be >= 0");
    if (m > 4096) throw std::invalid_argument("integer_power: exponent too large");
    if (m == 0) return constant(cplx(1.0));
    if (m == 1) return base;
    Node n;
    n.kind = Kind::IntegerPower;
    n.index = m;
    n.dim = base.dim();
    n.children.push_back(std::move(base));
    return Symbol(std::make_shared<const Node>(std::move(n)));
}

Symbol::Kind Symbol::kind() const { return node_->kind; }
int Symbol::dim() const { return node_->dim; }
cplx Symbol::constant_value() const { return node_->value; }
int Symbol::coordinate_index() const { return node_->index; }
const std::vector<cplx>& Symbol::poly_coeffs() const { return node_->coeffs; }
const std::vector<Symbol>& Symbol::children() const { return node_->children; }
const Symbol& Symbol::quotient_num() const { return node_->children[0]; }
const Symbol& Symbol::quotient_den() const { return node_->children[1]; }
cplx Symbol::blaschke_parameter() const { return node_->value; }
const Symbol& Symbol::power_base() const { return node_->children[0]; }
int Symbol::power_exponent() const { return node_->index; }

namespace {

// ---------------------------------------------------------------------------
// evaluation

cplx eval_impl(const Symbol& u, const std::vector<cplx>& p) {
    switch (u.kind()) {
        case Symbol::Kind::Constant:
            return u.constant_value();
        case Symbol::Kind::Coordinate:
            return p[static_cast<std::size_t>(u.coordinate_index()) - 1];
        case Symbol::Kind::Poly: {
            cplx z = p[0];
            cplx acc(0.0);
            const auto& c = u.poly_coeffs();
            for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
            return acc;
        }
        case Symbol::Kind::Sum: {
            cplx acc(0.0);
            for (const auto& t : u.children()) acc += eval_impl(t, p);
            return acc;
        }
        case Symbol::Kind::Product: {
            cplx acc(1.0);
            for (const auto& t : u.children()) acc *= eval_impl(t, p);
            return acc;
        }
        case Symbol::Kind::Quotient: {
            cplx den = eval_impl(u.quotient_den(), p);
            if (std::abs(den) < 1e-300)
                throw std::domain_error("eval: denominator vanished");
            return eval_impl(u.quotient_num(), p) / den;
        }
        case Symbol::Kind::Blaschke: {
            cplx a = u.blaschke_parameter();
            cplx z = p[0];
            return (a - z) / (cplx(1.0) - std::conj(a) * z);
        }
        case Symbol::Kind::IntegerPower: {
            cplx b = eval_impl(u.power_base(), p);
            cplx acc(1.0);
            int m = u.power_exponent();
            while (m > 0) {
                if (m & 1) acc *= b;
                b *= b;
                m >>= 1;
            }
            return acc;
        }
    }
    throw std::logic_error("eval: unknown node");
}

double point_norm(const std::vector<cplx>& p) {
    double s = 0.0;
    for (cplx z : p) s += std::norm(z);
    return std::sqrt(s);
}

}  // namespace

cplx eval(const Symbol& u, const std::vector<cplx>& point) {
    if (static_cast<int>(point.size()) < u.dim())
        throw std::invalid_argument("eval: point dimension below symbol dimension");
    if (point_norm(point) > 1.0 + 1e-9)
        throw std::domain_error("eval: point outside the closed unit ball");
    return eval_impl(u, point);
}

cplx eval(const Symbol& u, cplx z) { return eval(u, std::vector<cplx>{z}); }

// ---------------------------------------------------------------------------
// rational form (n = 1)

RationalForm rational_form(const Symbol& u) {
    if (u.dim() != 1)
        throw std::domain_error("rational_form: univariate symbols only");
    switch (u.kind()) {
        case Symbol::Kind::Constant:
            return {PowerSeries({u.constant_value()}), PowerSeries({cplx(1.0)})};
        case Symbol::Kind::Coordinate:
            return {PowerSeries({cplx(0.0), cplx(1.0)}), PowerSeries({cplx(1.0)})};
        case Symbol::Kind::Poly:
            return {PowerSeries(u.poly_coeffs()), PowerSeries({cplx(1.0)})};
        case Symbol::Kind::Sum: {
            RationalForm acc = rational_form(u.children()[0]);
            for (std::size_t i = 1; i < u.children().size(); ++i) {
                RationalForm t = rational_form(u.children()[i]);
                acc.num = add(multiply(acc.num, t.den), multiply(t.num, acc.den));
                acc.den = multiply(acc.den, t.den);
            }
            acc.num.trim();
            acc.den.trim();
            return acc;
        }
        case Symbol::Kind::Product: {
            RationalForm acc = rational_form(u.children()[0]);
            for (std::size_t i = 1; i < u.children().size(); ++i) {
                RationalForm t = rational_form(u.children()[i]);
                acc.num = multiply(acc.num, t.num);
                acc.den = multiply(acc.den, t.den);
            }
            acc.num.trim();
            acc.den.trim();
            return acc;
        }
        case Symbol::Kind::Quotient: {
            RationalForm a = rational_form(u.quotient_num());
            RationalForm b = rational_form(u.quotient_den());
            RationalForm out;
            out.num = multiply(a.num, b.den);
            out.den = multiply(a.den, b.num);
            out.num.trim();
            out.den.trim();
            return out;
        }
        case Symbol::Kind::Blaschke: {
            cplx a = u.blaschke_parameter();
            return {PowerSeries({a, cplx(-1.0)}),
                    PowerSeries({cplx(1.0), -std::conj(a)})};
        }
        case Symbol::Kind::IntegerPower: {
            RationalForm b = rational_form(u.power_base());
            RationalForm out{PowerSeries({cplx(1.0)}), PowerSeries({cplx(1.0)})};
            int m = u.power_exponent();
            while (m > 0) {
                if (m & 1) {
                    out.num = multiply(out.num, b.num);
                    out.den = multiply(out.den, b.den);
                }
                m >>= 1;
                if (m) {
                    b.num = multiply(b.num, b.num);
                    b.den = multiply(b.den, b.den);
                }
            }
            return out;
        }
    }
    throw std::logic_error("rational_form: unknown node");
}

cplx eval_rational(const RationalForm& r, cplx z) {
    return evaluate(r.num, z) / evaluate(r.den, z);
}

cplx eval_rational_derivative(const RationalForm& r, cplx z) {
    cplx p = evaluate(r.num, z), q = evaluate(r.den, z);
    cplx dp = evaluate(complex_derivative(r.num), z);
    cplx dq = evaluate(complex_derivative(r.den), z);
    return (dp * q - p * dq) / (q * q);
}

// ---------------------------------------------------------------------------
// series / multipoly expansion

PowerSeries to_series(const Symbol& u, int max_degree) {
    if (u.dim() != 1) throw std::domain_error("to_series: univariate symbols only");
    const int K = max_degree;
    switch (u.kind()) {
        case Symbol::Kind::Constant:
            return PowerSeries({u.constant_value()});
        case Symbol::Kind::Coordinate:
            return PowerSeries({cplx(0.0), cplx(1.0)});
        case Symbol::Kind::Poly: {
            PowerSeries f(u.poly_coeffs());
            f.truncate(K);
            return f;
        }
        case Symbol::Kind::Sum: {
            PowerSeries acc({cplx(0.0)});
            for (const auto& t : u.children()) acc = add(acc, to_series(t, K));
            return acc;
        }
        case Symbol::Kind::Product: {
            PowerSeries acc({cplx(1.0)});
            for (const auto& t : u.children()) acc = multiply(acc, to_series(t, K), K);
            return acc;
        }
        case Symbol::Kind::Quotient:
            return divide(to_series(u.quotient_num(), K), to_series(u.quotient_den(), K), K);
        case Symbol::Kind::Blaschke: {
            cplx a = u.blaschke_parameter();
            return divide(PowerSeries({a, cplx(-1.0)}),
                          PowerSeries({cplx(1.0), -std::conj(a)}), K);
        }
        case Symbol::Kind::IntegerPower: {
            PowerSeries b = to_series(u.power_base(), K);
            PowerSeries acc({cplx(1.0)});
            int m = u.power_exponent();
            while (m > 0) {
                if (m & 1) acc = multiply(acc, b, K);
                m >>= 1;
                if (m) b = multiply(b, b, K);
            }
            return acc;
        }
    }
    throw std::logic_error("to_series: unknown node");
}

MultiPoly to_multipoly(const Symbol& u, int dim) {
    if (u.dim() > dim) throw std::invalid_argument("to_multipoly: dimension too small");
    switch (u.kind()) {
        case Symbol::Kind::Constant: {
            MultiPoly out(dim);
            out.set({0, 0, 0}, u.constant_value());
            return out;
        }
        case Symbol::Kind::Coordinate: {
            MultiPoly out(dim);
            std::array<int, 3> idx = {0, 0, 0};
            idx[static_cast<std::size_t>(u.coordinate_index()) - 1] = 1;
            out.set(idx, cplx(1.0));
            return out;
        }
        case Symbol::Kind::Poly: {
            MultiPoly out(dim);
            const auto& c = u.poly_coeffs();
            for (int k = 0; k < static_cast<int>(c.size()); ++k)
                if (c[static_cast<std::size_t>(k)] != cplx(0.0))
                    out.set({k, 0, 0}, c[static_cast<std::size_t>(k)]);
            return out;
        }
        case Symbol::Kind::Sum: {
            MultiPoly acc(dim);
            for (const auto& t : u.children()) acc = add(acc, to_multipoly(t, dim));
            return acc;
        }
        case Symbol::Kind::Product: {
            MultiPoly acc(dim);
            acc.set({0, 0, 0}, cplx(1.0));
            for (const auto& t : u.children()) acc = multiply(acc, to_multipoly(t, dim));
            return acc;
        }
        case Symbol::Kind::IntegerPower: {
            MultiPoly b = to_multipoly(u.power_base(), dim);
            MultiPoly acc(dim);
            acc.set({0, 0, 0}, cplx(1.0));
            for (int i = 0; i < u.power_exponent(); ++i) acc = multiply(acc, b);
            return acc;
        }
        default:
            throw std::domain_error(
                "to_multipoly: only polynomial symbols are supported for n > 1");
    }
}

// ---------------------------------------------------------------------------
// certified extrema on the circle

namespace {

struct BnbInterval {
    double lo, hi, mid, mid_val, optimistic;
};

struct OptCompare {
    bool operator()(const BnbInterval& a, const BnbInterval& b) const {
        return a.optimistic > b.optimistic;  // min-heap on the optimistic bound
    }
};

// Golden-section polish of a local extremum of g around t0 (maximizes g).
double golden_polish(const std::function<double(double)>& g, double& t0, double halfwidth) {
    const double phi = 0.6180339887498949;
    double a = t0 - halfwidth, b = t0 + halfwidth;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = g(x1), f2 = g(x2);
    for (int it = 0; it < 90 && (b - a) > 1e-14; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = g(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = g(x1);
        }
    }
    double tm = 0.5 * (a + b), fm = g(tm);
    if (f1 >= f2 && f1 >= fm) { t0 = x1; return f1; }
    if (f2 >= fm) { t0 = x2; return f2; }
    t0 = tm;
    return fm;
}

// Minimizes g over [0, 2pi) given |g(s) - g(t)| <= L |s - t|.  Returns a
// certified lower bound, the best sampled value and its angle.  Refinement
// stops once the gap drops below max(abs_floor, rel_gap * |best_sample|);
// abs_floor > 0 additionally means "values this small count as zero" and
// stops refinement once the best sample is below it.  value_floor is an a
// priori lower bound for g (0 for moduli) used to clip the certificate.
CertifiedBound circle_bnb_min(const std::function<double(double)>& g, double L,
                              double abs_floor, double rel_gap, long eval_cap,
                              double value_floor) {
    std::priority_queue<BnbInterval, std::vector<BnbInterval>, OptCompare> heap;
    double best = 1e300, best_angle = 0.0;
    long evals = 0;
    auto push = [&](double lo, double hi) {
        BnbInterval iv;
        iv.lo = lo;
        iv.hi = hi;
        iv.mid = 0.5 * (lo + hi);
        iv.mid_val = g(iv.mid);
        ++evals;
        if (iv.mid_val < best) {
            best = iv.mid_val;
            best_angle = iv.mid;
        }
        iv.optimistic = iv.mid_val - L * 0.5 * (hi - lo);
        heap.push(iv);
    };
    const int seed = 128;
    for (int j = 0; j < seed; ++j)
        push(kTwoPi * j / seed, kTwoPi * (j + 1) / seed);
    while (!heap.empty() && evals < eval_cap) {
        BnbInterval top = heap.top();
        double gap_target = std::max(abs_floor, rel_gap * std::abs(best));
        if (best - top.optimistic <= gap_target) break;
        if (abs_floor > 0.0 && best <= abs_floor) break;  // numerically vanishing
        heap.pop();
        if (top.mid_val - L * 0.5 * (top.hi - top.lo) >= best) continue;  // stale prune
        push(top.lo, top.mid);
        push(top.mid, top.hi);
    }
    // the sample converges much faster than the certificate; polish it
    double width = heap.empty() ? kTwoPi / seed : (heap.top().hi - heap.top().lo);
    double polished = -golden_polish([&](double t) { return -g(t); }, best_angle,
                                     std::max(width, kTwoPi / seed));
    best = std::min(best, polished);
    CertifiedBound out;
    out.upper = best;
    out.lower = heap.empty() ? best : std::max(value_floor, heap.top().optimistic);
    out.lower = std::min(out.lower, out.upper);
    out.witness_angle = best_angle;
    return out;
}

CertifiedBound circle_bnb_max(const std::function<double(double)>& g, double L,
                              double rel_gap, long eval_cap) {
    CertifiedBound m = circle_bnb_min([&](double t) { return -g(t); }, L,
                                      0.0, rel_gap, eval_cap, -1e300);
    CertifiedBound out;
    out.lower = -m.upper;   // best sample, attained
    out.upper = -m.lower;   // certified bound
    out.witness_angle = m.witness_angle;
    return out;
}

// sum_k k |a_k|, Lipschitz constant of a polynomial along the unit circle.
double poly_circle_lipschitz(const PowerSeries& f) {
    double L = 0.0;
    for (int k = 1; k <= f.degree(); ++k) L += k * std::abs(f.coeff(k));
    return L;
}

CertifiedBound certified_poly_circle_min(const PowerSeries& f, double abs_floor,
                                         double rel_gap = 1e-6) {
    return circle_bnb_min(
        [&](double t) { return std::abs(evaluate(f, cplx(std::cos(t), std::sin(t)))); },
        poly_circle_lipschitz(f), abs_floor, rel_gap, 2000000, 0.0);
}

}  // namespace

double boundary_derivative_bound(const Symbol& u) {
    RationalForm r = rational_form(u);
    PowerSeries d = subtract(multiply(complex_derivative(r.num), r.den),
                             multiply(r.num, complex_derivative(r.den)));
    double num_bound = 0.0;
    for (cplx c : d.coeffs) num_bound += std::abs(c);
    if (num_bound == 0.0) return 0.0;
    PowerSeries q2 = multiply(r.den, r.den);
    CertifiedBound den_min = certified_poly_circle_min(q2, 0.0);
    if (!(den_min.lower > 0.0))
        throw std::runtime_error("boundary_derivative_bound: denominator bound failed");
    return num_bound / den_min.lower;
}

CertifiedBound boundary_min_modulus(const Symbol& u, cplx lambda,
                                    const ToleranceConfig& cfg) {
    if (u.dim() != 1)
        throw std::domain_error("boundary_min_modulus: univariate symbols only");
    RationalForm r = rational_form(u);
    double L = boundary_derivative_bound(u);
    double scale = std::max(1.0, std::abs(lambda));
    return circle_bnb_min(
        [&](double t) {
            return std::abs(eval_rational(r, cplx(std::cos(t), std::sin(t))) - lambda);
        },
        L, cfg.rel_tol * scale, 1e-6, 2000000, 0.0);
}

CertifiedBound sup_norm(const Symbol& u, const ToleranceConfig& cfg) {
    if (u.dim() == 1) {
        RationalForm r = rational_form(u);
        double L = boundary_derivative_bound(u);
        return circle_bnb_max(
            [&](double t) {
                return std::abs(eval_rational(r, cplx(std::cos(t), std::sin(t))));
            },
            L, std::min(1e-6, cfg.rel_tol * 1000.0), 500000);
    }
    // n > 1: dense low-discrepancy sphere sample (sup over the closed ball is
    // attained on the sphere by the maximum principle applied to slices).
    auto pts = sphere_fill(u.dim(), 1 << 16);
    double best = 0.0;
    for (const auto& p : pts) best = std::max(best, std::abs(eval_impl(u, p)));
    CertifiedBound out;
    out.lower = best;
    out.upper = best;  // sample maximum; resolution documented by the caller
    out.witness_angle = 0.0;
    return out;
}

std::vector<cplx> boundary_samples(const Symbol& u, int count) {
    if (u.dim() != 1)
        throw std::domain_error("boundary_samples: univariate symbols only");
    RationalForm r = rational_form(u);
    std::vector<cplx> out(static_cast<std::size_t>(count));
    parallel_for(out.size(), [&](std::size_t j) {
        double t = kTwoPi * static_cast<double>(j) / count;
        out[j] = eval_rational(r, cplx(std::cos(t), std::sin(t)));
    });
    return out;
}

// ---------------------------------------------------------------------------
// quotient validation (needs the machinery above)

namespace {

void validate_denominator(const Symbol& den) {
    if (den.dim() == 1) {
        RationalForm r = rational_form(den);
        r.num.trim();
        double scale = std::max(r.num.coeff_scale(), 1e-300);
        CertifiedBound m = certified_poly_circle_min(r.num, 1e-12 * scale);
        if (!(m.lower > 0.0))
            throw std::domain_error(
                "quotient: denominator vanishes on (or numerically near) the unit circle");
        auto curve = boundary_samples(den, 2048);
        WindingResult w = winding_number(curve, cplx(0.0), 1e-12);
        if (w.on_curve || w.winding != 0) {
            std::ostringstream os;
            os << "quotient: denominator has " << (w.on_curve ? 1 : w.winding)
               << " zero(s) inside the closed unit disk";
            throw std::domain_error(os.str());
        }
        return;
    }
    // n > 1: dense sampling of ball and sphere.
    double lo = 1e300, hi = 0.0;
    std::vector<cplx> witness;
    for (const auto& pts : {ball_fill(den.dim(), 1 << 14), sphere_fill(den.dim(), 1 << 13)}) {
        for (const auto& p : pts) {
            double v = std::abs(eval_impl(den, p));
            hi = std::max(hi, v);
            if (v < lo) {
                lo = v;
                witness = p;
            }
        }
    }
    if (lo <= 1e-9 * std::max(hi, 1.0)) {
        std::ostringstream os;
        os << "quotient: denominator numerically vanishes on the closed ball near (";
        for (std::size_t i = 0; i < witness.size(); ++i)
            os << (i ? ", " : "") << witness[i].real() << (witness[i].imag() < 0 ? "-" : "+")
               << std::abs(witness[i].imag()) << "i";
        os << ")";
        throw std::domain_error(os.str());
    }
}

}  // namespace

Symbol Symbol::quotient(Symbol num, Symbol den) {
    validate_denominator(den);
    Node n;
    n.kind = Kind::Quotient;
    n.dim = std::max(num.dim(), den.dim());
    n.children.push_back(std::move(num));
    n.children.push_back(std::move(den));
    return Symbol(std::make_shared<const Node>(std::move(n)));
}

// ---------------------------------------------------------------------------
// parser

namespace {

struct Token {
    enum Type { Num, Coord, KwB, KwC, KwI, LParen, RParen, Plus, Minus, Star, Slash, Caret, End };
    Type type = End;
    double value = 0.0;
    bool integral = false;
    int coord = 1;
    std::size_t pos = 0;
};

class Lexer {
  public:
    explicit Lexer(const std::string& s) : s_(s) { advance(); }
    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

  private:
    void advance() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
        tok_ = Token{};
        tok_.pos = i_;
        if (i_ >= s_.size()) {
            tok_.type = Token::End;
            return;
        }
        char c = s_[i_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            lex_number();
            return;
        }
        switch (c) {
            case 'z': {
                ++i_;
                tok_.type = Token::Coord;
                tok_.coord = 1;
                if (i_ < s_.size() && s_[i_] >= '1' && s_[i_] <= '3') {
                    tok_.coord = s_[i_] - '0';
                    ++i_;
                }
                return;
            }
            case 'B': ++i_; tok_.type = Token::KwB; return;
            case 'C': ++i_; tok_.type = Token::KwC; return;
            case 'i': ++i_; tok_.type = Token::KwI; return;
            case '(': ++i_; tok_.type = Token::LParen; return;
            case ')': ++i_; tok_.type = Token::RParen; return;
            case '+': ++i_; tok_.type = Token::Plus; return;
            case '-': ++i_; tok_.type = Token::Minus; return;
            case '*': ++i_; tok_.type = Token::Star; return;
            case '/': ++i_; tok_.type = Token::Slash; return;
            case '^': ++i_; tok_.type = Token::Caret; return;
            default:
                throw ParseError(std::string("unexpected character '") + c + "'", i_);
        }
    }

    void lex_number() {
        std::size_t start = i_;
        bool dot = false, exp = false;
        while (i_ < s_.size()) {
            char c = s_[i_];
            if (std::isdigit(static_cast<unsigned char>(c))) {
                ++i_;
            } else if (c == '.' && !dot && !exp) {
                dot = true;
                ++i_;
            } else if ((c == 'e' || c == 'E') && !exp && i_ > start &&
                       std::isdigit(static_cast<unsigned char>(s_[i_ - 1]))) {
                std::size_t j = i_ + 1;
                if (j < s_.size() && (s_[j] == '+' || s_[j] == '-')) ++j;
                if (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) {
                    exp = true;
                    i_ = j + 1;
                    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
                } else {
                    break;
                }
            } else {
                break;
            }
        }
        std::string text = s_.substr(start, i_ - start);
        if (text == "." )
            throw ParseError("malformed number", start);
        tok_.type = Token::Num;
        tok_.value = std::strtod(text.c_str(), nullptr);
        tok_.integral = !dot && !exp;
        tok_.pos = start;
    }

    const std::string& s_;
    std::size_t i_ = 0;
    Token tok_;
};

class Parser {
  public:
    explicit Parser(const std::string& s) : lex_(s) {}

    Symbol parse() {
        Symbol e = parse_expr();
        if (lex_.peek().type != Token::End)
            throw ParseError("trailing input after expression", lex_.peek().pos);
        return e;
    }

  private:
    Symbol parse_expr() {
        std::vector<Symbol> terms;
        terms.push_back(parse_term());
        while (lex_.peek().type == Token::Plus || lex_.peek().type == Token::Minus) {
            bool minus = lex_.take().type == Token::Minus;
            Symbol t = parse_term();
            if (minus)
                t = Symbol::product({Symbol::constant(cplx(-1.0)), t});
            terms.push_back(std::move(t));
        }
        return Symbol::sum(std::move(terms));
    }

    Symbol parse_term() {
        Symbol acc = parse_factor();
        while (lex_.peek().type == Token::Star || lex_.peek().type == Token::Slash) {
            Token op = lex_.take();
            Symbol rhs = parse_factor();
            if (op.type == Token::Star) {
                acc = Symbol::product({std::move(acc), std::move(rhs)});
            } else {
                try {
                    acc = Symbol::quotient(std::move(acc), std::move(rhs));
                } catch (const std::domain_error& e) {
                    throw ParseError(e.what(), op.pos);
                }
            }
        }
        return acc;
    }

    Symbol parse_factor() {
        Symbol base = parse_base();
        if (lex_.peek().type == Token::Caret) {
            Token caret = lex_.take();
            Token e = lex_.take();
            if (e.type != Token::Num || !e.integral)
                throw ParseError("exponent must be a nonnegative integer",
                                 e.type == Token::Num ? e.pos : caret.pos);
            return Symbol::integer_power(std::move(base), static_cast<int>(e.value));
        }
        return base;
    }

    Symbol parse_base() {
        Token t = lex_.take();
        switch (t.type) {
            case Token::Num:
                return Symbol::constant(cplx(t.value));
            case Token::Coord:
                return Symbol::coordinate(t.coord);
            case Token::KwB: {
                expect(Token::LParen, "expected '(' after B");
                cplx a = parse_complex();
                expect(Token::RParen, "expected ')' closing B(");
                try {
                    return Symbol::blaschke(a);
                } catch (const std::domain_error& e) {
                    throw ParseError(e.what(), t.pos);
                }
            }
            case Token::KwC: {
                expect(Token::LParen, "expected '(' after C");
                cplx c = parse_complex();
                expect(Token::RParen, "expected ')' closing C(");
                return Symbol::constant(c);
            }
            case Token::LParen: {
                Symbol e = parse_expr();
                expect(Token::RParen, "expected ')'");
                return e;
            }
            default:
                throw ParseError("expected a number, coordinate, B(...), C(...) or '('", t.pos);
        }
    }

    cplx parse_complex() {
        double sign1 = consume_sign();
        Token a = lex_.take();
        if (a.type != Token::Num) throw ParseError("expected a number", a.pos);
        if (lex_.peek().type == Token::KwI) {
            lex_.take();
            return cplx(0.0, sign1 * a.value);
        }
        if (lex_.peek().type == Token::Plus || lex_.peek().type == Token::Minus) {
            double sign2 = consume_sign();
            Token b = lex_.take();
            if (b.type != Token::Num) throw ParseError("expected a number", b.pos);
            Token im = lex_.take();
            if (im.type != Token::KwI)
                throw ParseError("expected 'i' after the imaginary part", im.pos);
            return cplx(sign1 * a.value, sign2 * b.value);
        }
        return cplx(sign1 * a.value, 0.0);
    }

    double consume_sign() {
        if (lex_.peek().type == Token::Plus) {
            lex_.take();
            return 1.0;
        }
        if (lex_.peek().type == Token::Minus) {
            lex_.take();
            return -1.0;
        }
        return 1.0;
    }

    void expect(Token::Type type, const char* msg) {
        Token t = lex_.take();
        if (t.type != type) throw ParseError(msg, t.pos);
    }

    Lexer lex_;
};

}  // namespace

Symbol parse_symbol(const std::string& text) { return Parser(text).parse(); }

// ---------------------------------------------------------------------------
// rendering

namespace {

std::string fmt_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_complex_literal(cplx c) {
    // body of B(...) / C(...): re, re+imi, re-imi or imi
    if (c.imag() == 0.0) return fmt_real(c.real());
    std::string out;
    if (c.real() != 0.0) {
        out += fmt_real(c.real());
        out += (c.imag() < 0 ? "-" : "+");
        out += fmt_real(std::abs(c.imag()));
    } else {
        if (c.imag() < 0) out += "-";
        out += fmt_real(std::abs(c.imag()));
    }
    out += "i";
    return out;
}

std::string render_node(const Symbol& u, int parent_prec);

// precedence: 0 sum, 1 product, 2 power, 3 atom
std::string maybe_paren(const std::string& s, int prec, int parent_prec) {
    if (prec < parent_prec) return "(" + s + ")";
    return s;
}

std::string render_constant(cplx c) {
    if (c.imag() == 0.0 && c.real() >= 0.0)
        return fmt_real(c.real());
    return std::string("C(") + fmt_complex_literal(c) + ")";
}

std::string render_node(const Symbol& u, int parent_prec) {
    switch (u.kind()) {
        case Symbol::Kind::Constant:
            return render_constant(u.constant_value());
        case Symbol::Kind::Coordinate:
            return u.dim() == 1 && u.coordinate_index() == 1
                       ? "z"
                       : "z" + std::to_string(u.coordinate_index());
        case Symbol::Kind::Poly: {
            const auto& c = u.poly_coeffs();
            std::string body;
            bool first = true;
            for (int k = 0; k < static_cast<int>(c.size()); ++k) {
                cplx a = c[static_cast<std::size_t>(k)];
                if (a == cplx(0.0) && !(c.size() == 1)) continue;
                if (!first) body += "+";
                first = false;
                body += render_constant(a);
                if (k >= 1) body += "*z";
                if (k >= 2) body += "^" + std::to_string(k);
            }
            if (body.empty()) body = "0";
            return maybe_paren(body, 0, parent_prec);
        }
        case Symbol::Kind::Sum: {
            std::string body = render_node(u.children()[0], 0);
            for (std::size_t i = 1; i < u.children().size(); ++i) {
                const Symbol& t = u.children()[i];
                // fold a leading real negative constant factor into a '-'
                if (t.kind() == Symbol::Kind::Product &&
                    t.children()[0].kind() == Symbol::Kind::Constant) {
                    cplx c0 = t.children()[0].constant_value();
                    if (c0.imag() == 0.0 && c0.real() < 0.0) {
                        std::vector<Symbol> rest(t.children().begin() + 1, t.children().end());
                        Symbol pos = (c0 == cplx(-1.0) && !rest.empty())
                                         ? Symbol::product(rest)
                                         : Symbol::product([&] {
                                               std::vector<Symbol> f;
                                               f.push_back(Symbol::constant(-c0));
                                               f.insert(f.end(), rest.begin(), rest.end());
                                               return f;
                                           }());
                        body += "-" + render_node(pos, 1);
                        continue;
                    }
                }
                if (t.kind() == Symbol::Kind::Constant) {
                    cplx c0 = t.constant_value();
                    if (c0.imag() == 0.0 && c0.real() < 0.0) {
                        body += "-" + fmt_real(-c0.real());
                        continue;
                    }
                }
                body += "+" + render_node(t, 0);
            }
            return maybe_paren(body, 0, parent_prec);
        }
        case Symbol::Kind::Product: {
            std::string body;
            for (std::size_t i = 0; i < u.children().size(); ++i) {
                if (i) body += "*";
                body += render_node(u.children()[i], 1);
            }
            return maybe_paren(body, 1, parent_prec);
        }
        case Symbol::Kind::Quotient:
            return maybe_paren(
                "(" + render_node(u.quotient_num(), 0) + ")/(" +
                    render_node(u.quotient_den(), 0) + ")",
                1, parent_prec);
        case Symbol::Kind::Blaschke:
            return "B(" + fmt_complex_literal(u.blaschke_parameter()) + ")";
        case Symbol::Kind::IntegerPower:
            return maybe_paren(render_node(u.power_base(), 3) + "^" +
                                   std::to_string(u.power_exponent()),
                               2, parent_prec);
    }
    throw std::logic_error("render: unknown node");
}

}  // namespace

std::string render(const Symbol& u) { return render_node(u, 0); }

// ---------------------------------------------------------------------------
// zeros in the disk

namespace {

// Counts zeros of T inside the circle |z - c| = rho via the argument
// principle with adaptive sampling; -1 when T passes too close to zero on
// the circle for the count to certify.
int local_zero_count(const PowerSeries& T, cplx c, double rho) {
    for (int N = 128; N <= 32768; N *= 2) {
        std::vector<cplx> vals(static_cast<std::size_t>(N));
        double vmax = 0.0, vmin = 1e300;
        for (int j = 0; j < N; ++j) {
            double t = kTwoPi * j / N;
            vals[static_cast<std::size_t>(j)] =
                evaluate(T, c + rho * cplx(std::cos(t), std::sin(t)));
            double a = std::abs(vals[static_cast<std::size_t>(j)]);
            vmax = std::max(vmax, a);
            vmin = std::min(vmin, a);
        }
        if (vmax == 0.0 || vmin < 1e-11 * vmax) return -1;
        double total = 0.0;
        bool smooth = true;
        for (int j = 0; j < N; ++j) {
            double step = std::arg(vals[static_cast<std::size_t>((j + 1) % N)] /
                                   vals[static_cast<std::size_t>(j)]);
            if (std::abs(step) > 1.5) {
                smooth = false;
                break;
            }
            total += step;
        }
        if (smooth) return static_cast<int>(std::lround(total / kTwoPi));
    }
    return -1;
}

std::vector<cplx> aberth_roots(const PowerSeries& poly) {
    std::vector<cplx> a = poly.coeffs;
    int d = static_cast<int>(a.size()) - 1;
    cplx lead = a[static_cast<std::size_t>(d)];
    for (auto& c : a) c /= lead;
    // initial guesses on a circle of the geometric-mean root radius
    double r0 = std::pow(std::max(std::abs(a[0]), 1e-20), 1.0 / d);
    double cauchy = 0.0;
    for (int k = 0; k < d; ++k) cauchy = std::max(cauchy, std::abs(a[static_cast<std::size_t>(k)]));
    cauchy += 1.0;
    r0 = std::clamp(r0, 0.05, cauchy);
    std::vector<cplx> z(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        double t = kTwoPi * i / d + 0.45;
        z[static_cast<std::size_t>(i)] = r0 * cplx(std::cos(t), std::sin(t));
    }
    std::vector<cplx> p(z.size()), dp(z.size());
    for (int iter = 0; iter < 500; ++iter) {
        double worst = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i) {
            // Horner for T and T'
            cplx v(0.0), dv(0.0);
            for (int k = d; k >= 0; --k) {
                dv = dv * z[i] + v;
                v = v * z[i] + a[static_cast<std::size_t>(k)];
            }
            p[i] = v;
            dp[i] = dv;
        }
        for (std::size_t i = 0; i < z.size(); ++i) {
            if (std::abs(p[i]) < 1e-290) continue;
            cplx w = (dp[i] != cplx(0.0)) ? p[i] / dp[i]
                                          : cplx(1e-8, 1e-8);
            cplx s(0.0);
            for (std::size_t j = 0; j < z.size(); ++j) {
                if (j == i) continue;
                cplx diff = z[i] - z[j];
                if (std::abs(diff) < 1e-300) diff = cplx(1e-12, 1e-12);
                s += cplx(1.0) / diff;
            }
            cplx denom = cplx(1.0) - w * s;
            cplx step = (std::abs(denom) > 1e-12) ? w / denom : w;
            z[i] -= step;
            worst = std::max(worst, std::abs(step) / (1.0 + std::abs(z[i])));
        }
        if (worst < 3e-15) break;
    }
    return z;
}

struct RootCluster {
    cplx center;
    int count = 0;
    double spread = 0.0;
};

std::vector<RootCluster> greedy_cluster(const std::vector<cplx>& roots, double tol) {
    std::vector<std::vector<cplx>> groups;
    for (cplx r : roots) {
        bool placed = false;
        for (auto& g : groups) {
            for (cplx m : g) {
                if (std::abs(r - m) <= tol * std::max(1.0, std::abs(m))) {
                    g.push_back(r);
                    placed = true;
                    break;
                }
            }
            if (placed) break;
        }
        if (!placed) groups.push_back({r});
    }
    std::vector<RootCluster> out;
    for (const auto& g : groups) {
        RootCluster c;
        cplx mean(0.0);
        for (cplx m : g) mean += m;
        c.center = mean / static_cast<double>(g.size());
        c.count = static_cast<int>(g.size());
        for (cplx m : g) c.spread = std::max(c.spread, std::abs(m - c.center));
        out.push_back(c);
    }
    return out;
}

// Newton iteration on the (m-1)-th derivative, the right object for an
// m-fold root; returns the polished location (or the input on failure).
cplx polish_multiple_root(const PowerSeries& T, cplx z0, int m, double trust) {
    PowerSeries g = T;
    for (int j = 0; j < m - 1; ++j) g = complex_derivative(g);
    PowerSeries dg = complex_derivative(g);
    cplx z = z0;
    for (int it = 0; it < 40; ++it) {
        cplx gv = evaluate(g, z);
        cplx dv = evaluate(dg, z);
        if (std::abs(dv) < 1e-280) break;
        cplx step = gv / dv;
        z -= step;
        if (std::abs(z - z0) > trust) return z0;
        if (std::abs(step) < 1e-16 * (1.0 + std::abs(z))) break;
    }
    return (std::abs(evaluate(g, z)) <= std::abs(evaluate(g, z0))) ? z : z0;
}

}  // namespace

ZeroSet zeros_in_disk(const Symbol& u, cplx lambda, const ToleranceConfig& cfg) {
    if (u.dim() != 1) throw std::domain_error("zeros_in_disk: univariate symbols only");
    RationalForm r = rational_form(u);
    PowerSeries T = subtract(r.num, scale(r.den, lambda));
    T.trim();
    double sc = T.coeff_scale();
    ZeroSet out;
    if (sc == 0.0)
        throw std::domain_error("zeros_in_disk: symbol is identically equal to lambda");

    // exact zeros at the origin, then drop negligible leading coefficients
    std::vector<cplx> c = T.coeffs;
    int m0 = 0;
    while (m0 < static_cast<int>(c.size()) - 1 &&
           std::abs(c[static_cast<std::size_t>(m0)]) <= 1e-14 * sc)
        ++m0;
    if (m0 > 0) c.erase(c.begin(), c.begin() + m0);
    while (c.size() > 1 && std::abs(c.back()) <= 1e-14 * sc) c.pop_back();
    if (m0 > 0) {
        out.zeros.push_back({cplx(0.0), m0});
        out.total_multiplicity += m0;
    }

    PowerSeries Td(c);
    if (Td.degree() >= 1) {
        std::vector<cplx> roots = aberth_roots(Td);
        // boundary proximity flag
        for (cplx z : roots)
            if (std::abs(std::abs(z) - 1.0) <= cfg.rel_tol) out.boundary_zero = true;

        bool certified = false;
        double tol = 1e-7;
        for (int attempt = 0; attempt < 5 && !certified; ++attempt, tol *= 10.0) {
            auto clusters = greedy_cluster(roots, tol);
            bool ok = true;
            for (std::size_t i = 0; i < clusters.size() && ok; ++i) {
                double sep = 1e300;
                for (std::size_t j = 0; j < clusters.size(); ++j)
                    if (j != i)
                        sep = std::min(sep, std::abs(clusters[i].center - clusters[j].center));
                double rho = std::max(3.0 * clusters[i].spread + 1e-9, 1e-6);
                if (rho > 0.3 * sep) {
                    ok = false;
                    break;
                }
                int cnt = local_zero_count(Td, clusters[i].center, rho);
                if (cnt != clusters[i].count) ok = false;
            }
            if (!ok) continue;
            certified = true;
            for (auto& cl : clusters) {
                if (cl.count > 1)
                    cl.center = polish_multiple_root(Td, cl.center, cl.count,
                                                     10.0 * cl.spread + 1e-5);
                double dist_to_circle = std::abs(std::abs(cl.center) - 1.0);
                if (dist_to_circle <= cfg.rel_tol) {
                    out.boundary_zero = true;
                } else if (std::abs(cl.center) < 1.0) {
                    out.zeros.push_back({cl.center, cl.count});
                    out.total_multiplicity += cl.count;
                }
            }
        }
        if (!certified)
            throw std::runtime_error("zeros_in_disk: could not certify root clusters");
    }

    if (!out.boundary_zero) {
        int boundary_count = local_zero_count(T, cplx(0.0), 1.0);
        if (boundary_count < 0)
            out.boundary_zero = true;
        else if (boundary_count != out.total_multiplicity)
            throw std::runtime_error(
                "zeros_in_disk: interior count disagrees with the boundary winding number");
    }
    std::sort(out.zeros.begin(), out.zeros.end(), [](const Zero& a, const Zero& b) {
        if (a.location.real() != b.location.real())
            return a.location.real() < b.location.real();
        return a.location.imag() < b.location.imag();
    });
    return out;
}

// ---------------------------------------------------------------------------
// low-discrepancy fills

namespace {

std::vector<cplx> direction_from_uniforms(int n, const double* q) {
    // uniform point of the unit sphere in C^n: moduli^2 uniform on the
    // simplex, phases uniform
    std::vector<double> t(static_cast<std::size_t>(n));
    if (n == 1) {
        t[0] = 1.0;
    } else if (n == 2) {
        t[0] = q[0];
        t[1] = 1.0 - q[0];
    } else {
        double a = std::min(q[0], q[1]), b = std::max(q[0], q[1]);
        t[0] = a;
        t[1] = b - a;
        t[2] = 1.0 - b;
    }
    std::vector<cplx> out(static_cast<std::size_t>(n));
    int phase_base = (n == 1) ? 0 : n - 1;
    for (int j = 0; j < n; ++j) {
        double phi = kTwoPi * q[phase_base + j];
        out[static_cast<std::size_t>(j)] =
            std::sqrt(std::max(0.0, t[static_cast<std::size_t>(j)])) *
            cplx(std::cos(phi), std::sin(phi));
    }
    return out;
}

}  // namespace

std::vector<std::vector<cplx>> sphere_fill(int n, int count) {
    if (n < 1 || n > 3) throw std::invalid_argument("sphere_fill: n must be 1..3");
    std::vector<std::vector<cplx>> out;
    out.reserve(static_cast<std::size_t>(count));
    int dims = (n == 1) ? 1 : 2 * n - 1;
    for (int i = 0; i < count; ++i) {
        double q[5] = {0, 0, 0, 0, 0};
        for (int d = 0; d < dims; ++d) q[d] = halton(static_cast<std::uint64_t>(i), d);
        out.push_back(direction_from_uniforms(n, q));
    }
    return out;
}

std::vector<std::vector<cplx>> ball_fill(int n, int count) {
    if (n < 1 || n > 3) throw std::invalid_argument("ball_fill: n must be 1..3");
    std::vector<std::vector<cplx>> out;
    out.reserve(static_cast<std::size_t>(count));
    int dims = (n == 1) ? 2 : 2 * n;
    for (int i = 0; i < count; ++i) {
        double q[6] = {0, 0, 0, 0, 0, 0};
        for (int d = 0; d < dims; ++d) q[d] = halton(static_cast<std::uint64_t>(i), d);
        double rho = std::pow(q[dims - 1], 1.0 / (2.0 * n));
        auto p = direction_from_uniforms(n, q);
        for (auto& zj : p) zj *= rho;
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace multspec
