#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "multspec/peaks.hpp"
#include "multspec/spaces.hpp"

using namespace multspec;

TEST_CASE("peak coefficients are scaled binomials") {
    // exact Pascal triangle row as the oracle
    for (int k : {1, 7, 12, 20}) {
        std::vector<double> pascal(static_cast<std::size_t>(k) + 1, 1.0);
        for (int row = 1; row <= k; ++row)
            for (int m = row - 1; m >= 1; --m) pascal[m] += pascal[m - 1];
        // after the loop pascal[m] = binom(k, m)
        for (cplx xi : {cplx(1.0), cplx(0.0, 1.0)}) {
            PowerSeries f = peak_function(xi, k);
            REQUIRE(f.degree() == k);
            cplx xibar_pow = 1.0;
            for (int m = 0; m <= k; ++m) {
                cplx want = pascal[static_cast<std::size_t>(m)] *
                            std::pow(2.0, -k) * xibar_pow;
                CHECK(std::abs(f.coeff(m) - want) <= 1e-13 * std::abs(want));
                xibar_pow *= std::conj(xi);
            }
        }
    }
    CHECK_THROWS_AS(peak_function(cplx(0.5), 4), std::domain_error);
    CHECK_THROWS_AS(peak_function(cplx(1.0), -1), std::domain_error);
}

TEST_CASE("peaks evaluate to 1 at the peak point and below 1 elsewhere") {
    for (int k : {8, 256, 4096}) {
        for (cplx xi : {cplx(1.0), cplx(0.0, 1.0), std::polar(1.0, 2.0)}) {
            PowerSeries f = peak_function(xi, k);
            CHECK(std::abs(evaluate(f, xi) - 1.0) < 1e-10);
            CHECK(std::abs(evaluate(f, 0.99 * xi)) < 1.0);
            CHECK(std::abs(evaluate(f, -xi)) < 1e-12);
            CHECK(std::abs(evaluate(f, 0.5 * xi)) < 1.0);
        }
    }
}

TEST_CASE("coefficient-exact smooth norms match circle quadrature") {
    for (double beta : {0.0, 1.0, 2.0}) {
        for (int k : {8, 32, 64}) {
            PowerSeries g = shifted_radial_derivative(peak_function(cplx(1.0), k), beta);
            int count = 4 * (k + 1) + 4;
            double mean = circle_mean(
                [&](double t) { return std::norm(evaluate(g, std::polar(1.0, t))); },
                count);
            CHECK(peak_norm_exact_H2beta(k, beta) ==
                  doctest::Approx(std::sqrt(mean)).epsilon(1e-9));
        }
    }
}

TEST_CASE("norms do not depend on the peak direction") {
    for (const SpaceSpec& s :
         {SpaceSpec::hardy(2), SpaceSpec::bloch(0.5), SpaceSpec::growth(1.0)}) {
        double base = norm(s, peak_function(cplx(1.0), 32));
        for (cplx xi : {cplx(0.0, 1.0), std::polar(1.0, 2.0)}) {
            CHECK(norm(s, peak_function(xi, 32)) ==
                  doctest::Approx(base).epsilon(1e-7));
        }
    }
}

TEST_CASE("fitted norm growth matches the scale exponent") {
    std::vector<int> grid{64, 128, 256, 512, 1024};

    PeakFamily hs{cplx(1.0), grid, SpaceSpec::hardy_sobolev(1.0)};
    ExponentCheck c1 = peak_norm_exponent(hs.space, hs);
    CHECK(c1.predicted_slope == doctest::Approx(0.75));
    CHECK(c1.difference < 0.06);
    REQUIRE(c1.points.size() == grid.size());
    for (const auto& [x, v] : c1.points) {
        CHECK(x >= 65.0);
        CHECK(v > 0.0);
    }

    PeakFamily bl{cplx(1.0), grid, SpaceSpec::bloch(0.5)};
    ExponentCheck c2 = peak_norm_exponent(bl.space, bl);
    CHECK(c2.predicted_slope == doctest::Approx(0.5));
    CHECK(c2.difference < 0.06);

    PeakFamily flat{cplx(1.0), grid, SpaceSpec::bergman_sobolev(2, 0, 0)};
    ExponentCheck c3 = peak_norm_exponent(flat.space, flat);
    CHECK(c3.predicted_slope == doctest::Approx(-0.75));
    CHECK(c3.difference < 0.06);

    PeakFamily tiny{cplx(1.0), {8, 16}, SpaceSpec::bloch(0.5)};
    CHECK_THROWS_AS(peak_norm_exponent(tiny.space, tiny), std::invalid_argument);
    PeakFamily hp{cplx(1.0), grid, SpaceSpec::hardy(4)};
    CHECK_THROWS_AS(peak_norm_exponent(hp.space, hp), std::invalid_argument);
}

TEST_CASE("quadrature tracks the sharp norm asymptote") {
    for (int j : {0, 1}) {
        AsymptoteCheck c = exact_asymptote_check(2, 0.0, j, {256, 1024});
        REQUIRE(c.ratios.size() == 2);
        CHECK(std::abs(c.ratios[0].second - 1.0) < 0.05);
        CHECK(std::abs(c.ratios[1].second - 1.0) < 0.01);
        CHECK(c.constant > 0.0);
    }
    AsymptoteCheck one = exact_asymptote_check(1, 0.0, 0, {512});
    CHECK(std::abs(one.ratios[0].second - 1.0) < 0.02);

    CHECK_THROWS_AS(exact_asymptote_check(0, 0.0, 0, {64}), std::domain_error);
    CHECK_THROWS_AS(exact_asymptote_check(2, -1.5, 0, {64}), std::domain_error);
    CHECK_THROWS_AS(exact_asymptote_check(2, 0.0, 3, {2}), std::domain_error);
}

TEST_CASE("normalized peaks decay uniformly away from the peak point") {
    for (int m : {0, 1}) {
        for (const SpaceSpec& s : {SpaceSpec::bloch(0.5), SpaceSpec::hardy_sobolev(1.0)}) {
            PeakFamily fam{cplx(1.0), {8, 32, 128, 256}, s};
            auto rows = uniform_decay_check(fam, 0.5, m);
            REQUIRE(rows.size() == 4);
            for (std::size_t i = 0; i + 1 < rows.size(); ++i)
                CHECK(rows[i + 1].second < rows[i].second);
            CHECK(rows.back().second < 1e-2 * rows.front().second);
        }
    }
    PeakFamily fam{cplx(1.0), {8, 16, 32}, SpaceSpec::bloch(0.5)};
    CHECK_THROWS_AS(uniform_decay_check(fam, 2.5, 0), std::domain_error);
    CHECK_THROWS_AS(uniform_decay_check(fam, 0.5, -1), std::domain_error);
}

TEST_CASE("dividing out an interior zero obeys the explicit constant") {
    PowerSeries f = multiply(PowerSeries({cplx(-0.3), cplx(1.0)}),
                             peak_function(cplx(1.0), 16), 17);
    for (int N : {0, 1, 2}) {
        DivideBoundCheck c = bloch_divide_bound_check(f, cplx(0.3), N, 0.5);
        CHECK(c.measured > 0.0);
        CHECK(c.proof_bound > 0.0);
        CHECK(c.measured <= c.proof_bound);
    }
    // f(z0) far from zero is rejected
    CHECK_THROWS_AS(bloch_divide_bound_check(f, cplx(-0.2), 1, 0.5), std::domain_error);
    CHECK_THROWS_AS(bloch_divide_bound_check(f, cplx(0.3), 1, -0.25), std::domain_error);
}

TEST_CASE("identity checks and their rejection rules") {
    for (double r : {0.0, 0.5, 0.9}) {
        for (int K : {5, 30}) {
            ParsevalCheck c = parseval_check(K, r);
            CHECK(c.rel_diff <= 1e-10);
        }
    }
    CHECK_THROWS_AS(parseval_check(5, 1.0), std::domain_error);
    CHECK_THROWS_AS(parseval_check(-1, 0.5), std::domain_error);

    for (double g : {-0.5, 0.0, 1.7}) {
        ChuVandermondeCheck c = chu_vandermonde_check(40, g);
        CHECK(c.rel_diff <= 1e-11);
    }
    CHECK_THROWS_AS(chu_vandermonde_check(10, -1.0), std::domain_error);
}

TEST_CASE("scan rows serialize as CSV") {
    std::vector<std::pair<int, double>> rows{{8, 1.5}, {16, 0.25}};
    CHECK(scan_to_csv(rows, "norm_ratio") == "k,norm_ratio\n8,1.5\n16,0.25\n");
    CHECK(scan_to_csv({}, "x") == "k,x\n");
    std::vector<int> grid = default_k_grid();
    REQUIRE(grid.size() >= 3);
    CHECK(grid.front() == 8);
    CHECK(grid.back() == 4096);
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) CHECK(grid[i] < grid[i + 1]);
}
