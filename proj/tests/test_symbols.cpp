#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "multspec/series.hpp"
#include "multspec/symbols.hpp"

using namespace multspec;

TEST_CASE("parse/render round-trip preserves values") {
    const char* exprs[] = {
        "z",
        "3",
        "C(1.5-2i)",
        "z^3 - 2*z + 1",
        "(1 + z)/2",
        "B(0.3+0.2i)",
        "B(0.5)*B(-0.5)",
        "(z^2 + 3)*(1 - z/4)",
        "z/(2 - z)",
        "1 + z1*z2 - z2^2",
    };
    Rng rng(2024);
    for (const char* text : exprs) {
        Symbol u = parse_symbol(text);
        Symbol v = parse_symbol(render(u));
        for (int trial = 0; trial < 20; ++trial) {
            // stay well inside the ball for any dimension
            std::vector<cplx> pt;
            for (int d = 0; d < u.dim(); ++d) pt.push_back(0.6 * rng.uniform_disk());
            cplx a = eval(u, pt);
            cplx b = eval(v, pt);
            CAPTURE(text);
            CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)));
        }
    }
}

TEST_CASE("parser rejects malformed input") {
    CHECK_THROWS_AS(parse_symbol("z +"), ParseError);
    CHECK_THROWS_AS(parse_symbol("(z"), ParseError);
    CHECK_THROWS_AS(parse_symbol("z^-2"), ParseError);
    CHECK_THROWS_AS(parse_symbol("q"), ParseError);
    CHECK_THROWS_AS(parse_symbol(""), ParseError);
    // Blaschke parameters must be inside the open disk.
    CHECK_THROWS_AS(parse_symbol("B(1.5)"), std::exception);
}

TEST_CASE("symbols must be analytic past the closed disk") {
    // 1/(1-z) has a pole on the boundary: the checked constructor refuses.
    CHECK_THROWS_AS(Symbol::quotient(Symbol::constant(1.0),
                                     parse_symbol("1 - z")),
                    std::exception);
    // 1/(2-z) is fine.
    Symbol ok = Symbol::quotient(Symbol::constant(1.0), parse_symbol("2 - z"));
    CHECK(std::abs(eval(ok, cplx(0.0)) - 0.5) < 1e-15);
    // the unchecked back door exists for stress inputs only
    Symbol bad = make_unchecked_quotient(Symbol::constant(1.0), parse_symbol("1 - z"));
    CHECK(std::abs(eval(bad, cplx(0.5)) - 2.0) < 1e-12);
}

TEST_CASE("blaschke factors are unimodular on the circle") {
    Symbol b = Symbol::blaschke(cplx(0.3, 0.2));
    for (int k = 0; k < 32; ++k) {
        cplx w = eval(b, std::polar(1.0, 2 * kPi * k / 32));
        CHECK(std::abs(std::abs(w) - 1.0) < 1e-12);
    }
}

TEST_CASE("to_series matches closed-form evaluation") {
    Symbol u = parse_symbol("z/(2 - z) + B(0.5)");
    PowerSeries s = to_series(u, 128);
    Rng rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        cplx z = rng.uniform_disk(0.7);
        cplx direct = eval(u, z);
        cplx series = evaluate(s, z);
        CHECK(std::abs(direct - series) <= 1e-10 * std::max(1.0, std::abs(direct)));
    }
}

TEST_CASE("rational_form evaluation and derivative") {
    Symbol u = parse_symbol("(z^2 + 3)/(2 - z)");
    RationalForm rf = rational_form(u);
    Rng rng(88);
    for (int trial = 0; trial < 20; ++trial) {
        cplx z = rng.uniform_disk();
        CHECK(std::abs(eval_rational(rf, z) - eval(u, z)) < 1e-11);
        cplx h(1e-6, 0.0);
        cplx fd = (eval(u, z + h) - eval(u, z - h)) / (2.0 * h);
        CHECK(std::abs(eval_rational_derivative(rf, z) - fd) < 1e-5);
    }
}

TEST_CASE("zeros_in_disk finds interior roots with multiplicity") {
    ZeroSet s = zeros_in_disk(parse_symbol("(z - 0.5)*(z - 2)"), cplx(0.0));
    REQUIRE(s.zeros.size() == 1);
    CHECK(std::abs(s.zeros[0].location - cplx(0.5)) < 1e-9);
    CHECK(s.zeros[0].multiplicity == 1);
    CHECK(s.total_multiplicity == 1);
    CHECK_FALSE(s.boundary_zero);

    ZeroSet cube = zeros_in_disk(parse_symbol("z^3"), cplx(0.0));
    CHECK(cube.total_multiplicity == 3);

    ZeroSet shifted = zeros_in_disk(parse_symbol("z^2"), cplx(-0.25));
    // z^2 = -1/4 at +-i/2
    CHECK(shifted.total_multiplicity == 2);
    CHECK(shifted.zeros.size() == 2);

    ZeroSet blas = zeros_in_disk(Symbol::blaschke(cplx(0.3, 0.1)), cplx(0.0));
    REQUIRE(blas.zeros.size() == 1);
    CHECK(std::abs(blas.zeros[0].location - cplx(0.3, 0.1)) < 1e-9);

    ZeroSet none = zeros_in_disk(parse_symbol("z - 2"), cplx(0.0));
    CHECK(none.total_multiplicity == 0);
    CHECK(none.zeros.empty());

    ZeroSet boundary = zeros_in_disk(parse_symbol("z"), std::polar(1.0, 0.4));
    CHECK(boundary.boundary_zero);
}

TEST_CASE("boundary_min_modulus brackets the exact circle minimum") {
    // |z - 1/2| |z - 2| on the circle is minimized at z = 1: value 0.5.
    Symbol u = parse_symbol("(z - 0.5)*(z - 2)");
    CertifiedBound b = boundary_min_modulus(u, cplx(0.0));
    CHECK(b.lower <= 0.5);
    CHECK(b.upper >= 0.5 - 1e-9);
    CHECK(b.upper - b.lower < 1e-3);
    CHECK(std::abs(b.upper - 0.5) < 1e-6);
    CHECK(std::abs(std::abs(eval(u, std::polar(1.0, b.witness_angle))) - b.upper) <
          1e-9);
}

TEST_CASE("sup_norm brackets the exact circle maximum") {
    // |z^2 + 3| peaks at z = +-1 with value 4.
    CertifiedBound s = sup_norm(parse_symbol("z^2 + 3"));
    CHECK(s.lower <= 4.0 + 1e-12);
    CHECK(s.lower > 4.0 - 1e-9);
    CHECK(s.upper >= 4.0);
    CHECK(s.upper - s.lower < 1e-3);
    CHECK(boundary_derivative_bound(parse_symbol("z")) >= 1.0);
    CHECK(boundary_derivative_bound(parse_symbol("z")) < 1.01);
}

TEST_CASE("boundary_samples walks the circle image in order") {
    std::vector<cplx> curve = boundary_samples(parse_symbol("z^2"), 64);
    REQUIRE(curve.size() == 64);
    CHECK(std::abs(curve[0] - cplx(1.0)) < 1e-14);
    for (int k = 0; k < 64; ++k) {
        cplx want = std::polar(1.0, 2.0 * kPi * (2.0 * k) / 64);
        CHECK(std::abs(curve[k] - want) < 1e-12);
    }
    WindingResult w = winding_number(curve, cplx(0.1, 0.0));
    CHECK(w.winding == 2);
}

TEST_CASE("ball and sphere fills stay where they belong") {
    for (int n : {2, 3}) {
        auto balls = ball_fill(n, 500);
        REQUIRE(balls.size() == 500);
        for (const auto& p : balls) {
            double norm2 = 0.0;
            for (cplx c : p) norm2 += std::norm(c);
            CHECK(norm2 < 1.0 + 1e-12);
        }
        auto sphere = sphere_fill(n, 200);
        for (const auto& p : sphere) {
            double norm2 = 0.0;
            for (cplx c : p) norm2 += std::norm(c);
            CHECK(std::abs(norm2 - 1.0) < 1e-9);
        }
    }
}

TEST_CASE("multi-variable evaluation and expansion") {
    Symbol u = parse_symbol("z1*z2 + z1^2 - 1");
    CHECK(u.dim() == 2);
    MultiPoly p = to_multipoly(u, 2);
    std::vector<cplx> pt{cplx(0.4, 0.1), cplx(-0.3, 0.2)};
    CHECK(std::abs(evaluate(p, pt) - eval(u, pt)) < 1e-13);
}
