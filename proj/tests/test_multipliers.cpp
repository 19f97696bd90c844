#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "multspec/multipliers.hpp"
#include "multspec/symbols.hpp"

using namespace multspec;

namespace {

Symbol cayley_singular() {  // 1/(1-z): bounded nowhere near z = 1
    return make_unchecked_quotient(Symbol::constant(1.0), parse_symbol("1 - z"));
}

}  // namespace

TEST_CASE("space families follow the parameter map") {
    using F = SpaceFamily;
    CHECK(classify_space_family(SpaceSpec::bloch(0.5)) == F::DiskAlgebraMultipliers);
    CHECK(classify_space_family(SpaceSpec::bloch(1.0)) == F::DiskAlgebraMultipliers);
    CHECK(classify_space_family(SpaceSpec::bloch(1.1)) == F::BoundedMultipliers);
    CHECK(classify_space_family(SpaceSpec::growth(0.7)) == F::BoundedMultipliers);
    CHECK(classify_space_family(SpaceSpec::hardy(2)) == F::BoundedMultipliers);
    CHECK(classify_space_family(SpaceSpec::hardy(4)) == F::BoundedMultipliers);
    CHECK(classify_space_family(SpaceSpec::hardy(1)) == F::Unsupported);

    // below (1+alpha)/p, with equality admitted at p = 2
    CHECK(classify_space_family(SpaceSpec::bergman_sobolev(2, 0, 0.25)) ==
          F::BoundedMultipliers);
    CHECK(classify_space_family(SpaceSpec::bergman_sobolev(2, 0, 0.5)) ==
          F::BoundedMultipliers);
    CHECK(classify_space_family(SpaceSpec::bergman_sobolev(4, 0, 0.25)) ==
          F::SufficiencyOnly);  // equality not admitted away from p = 2
    // between the thresholds
    CHECK(classify_space_family(SpaceSpec::bergman_sobolev(2, 0, 0.8)) ==
          F::SufficiencyOnly);
    // algebra range
    CHECK(classify_space_family(SpaceSpec::bergman_sobolev(2, 0, 1.5)) ==
          F::DiskAlgebraMultipliers);
    CHECK(classify_space_family(SpaceSpec::bergman_sobolev(1, 0, 3)) ==
          F::SufficiencyOnly);  // p = 1 keeps only the sufficiency direction
    CHECK(classify_space_family(SpaceSpec::hardy_sobolev(1.0)) ==
          F::DiskAlgebraMultipliers);
    CHECK(classify_space_family(SpaceSpec::hardy_sobolev(0.3)) == F::SufficiencyOnly);
    CHECK(classify_space_family(SpaceSpec::hardy_sobolev(0.0)) == F::BoundedMultipliers);

    std::vector<std::string> seen;
    for (F f : {F::BoundedMultipliers, F::DiskAlgebraMultipliers, F::SufficiencyOnly,
                F::Unsupported}) {
        std::string d = family_description(f);
        CHECK(!d.empty());
        for (const std::string& prev : seen) CHECK(d != prev);
        seen.push_back(d);
    }
}

TEST_CASE("multiplier verdicts on the derivative-criterion scale") {
    for (double alpha : {0.5, 1.0}) {
        SpaceSpec s = SpaceSpec::bloch(alpha);
        CHECK(is_multiplier(s, parse_symbol("z")).verdict == Verdict::Yes);
        CHECK(is_multiplier(s, parse_symbol("(1 + z)/2")).verdict == Verdict::Yes);
        MultiplierReport bad = is_multiplier(s, cayley_singular());
        CHECK(bad.verdict == Verdict::No);
        CHECK(bad.growth_slope > 0.1);
        REQUIRE(!bad.witnesses.empty());
        for (std::size_t i = 0; i + 1 < bad.witnesses.size(); ++i)
            CHECK(bad.witnesses[i].first < bad.witnesses[i + 1].first);
    }
    CHECK(is_multiplier(SpaceSpec::bloch(1.5), parse_symbol("z")).verdict == Verdict::Yes);
}

TEST_CASE("multiplier verdicts where boundedness is the whole story") {
    for (const SpaceSpec& s : {SpaceSpec::growth(0.7), SpaceSpec::hardy(2),
                               SpaceSpec::bergman_sobolev(2, 0, 0.5)}) {
        CHECK(is_multiplier(s, parse_symbol("z")).verdict == Verdict::Yes);
        CHECK(is_multiplier(s, parse_symbol("B(0.4)*(z^2 + 3)")).verdict == Verdict::Yes);
        CHECK(is_multiplier(s, cayley_singular()).verdict == Verdict::No);
    }
}

TEST_CASE("multiplier verdicts on the algebra range") {
    SpaceSpec s = SpaceSpec::hardy_sobolev(1.0);
    CHECK(is_multiplier(s, parse_symbol("z")).verdict == Verdict::Yes);
    CHECK(is_multiplier(s, parse_symbol("1/(2 - z)")).verdict == Verdict::Yes);
    MultiplierReport bad = is_multiplier(s, cayley_singular());
    CHECK(bad.verdict == Verdict::No);
}

TEST_CASE("honest indeterminates outside the characterized ranges") {
    MultiplierReport h1 = is_multiplier(SpaceSpec::hardy(1), parse_symbol("z"));
    CHECK(h1.verdict == Verdict::Indeterminate);
    CHECK(h1.criterion.find("p > 1") != std::string::npos);

    MultiplierReport band =
        is_multiplier(SpaceSpec::bergman_sobolev(2, 0, 0.8), parse_symbol("z"));
    CHECK(band.verdict == Verdict::Indeterminate);
    CHECK(band.criterion.find("band") != std::string::npos);

    CHECK(verdict_name(Verdict::Yes) == "yes");
    CHECK(verdict_name(Verdict::No) == "no");
    CHECK(verdict_name(Verdict::Indeterminate) == "indeterminate");

    CHECK_THROWS_AS(is_multiplier(SpaceSpec::hardy(2, 2), parse_symbol("z")),
                    std::invalid_argument);
    CHECK_THROWS_AS(is_multiplier(SpaceSpec::hardy(2), parse_symbol("z1*z2")),
                    std::invalid_argument);
}

TEST_CASE("invertibility matches the zero-free criterion") {
    InvertibilityReport far = is_invertible(parse_symbol("z - 2"));
    CHECK(far.invertible);
    CHECK(far.certified);
    CHECK(far.inf_modulus == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(far.certified_lower > 0.99);
    CHECK(far.certified_lower <= far.inf_modulus + 1e-12);

    InvertibilityReport quot = is_invertible(parse_symbol("1/(2 - z)"));
    CHECK(quot.invertible);
    CHECK(quot.inf_modulus == doctest::Approx(1.0 / 3.0).epsilon(1e-6));

    CHECK_FALSE(is_invertible(parse_symbol("z")).invertible);
    CHECK_FALSE(is_invertible(parse_symbol("(1 + z)/2")).invertible);  // boundary zero
    CHECK_FALSE(is_invertible(parse_symbol("B(0.3)")).invertible);     // interior zero
    CHECK_FALSE(is_invertible(parse_symbol("z - 0.5")).invertible);

    // n = 2: sampled, not certified
    InvertibilityReport multi = is_invertible(parse_symbol("2 + z1*z2"));
    CHECK(multi.invertible);
    CHECK_FALSE(multi.certified);
    CHECK(multi.inf_modulus > 0.9);
    CHECK_FALSE(is_invertible(parse_symbol("z1")).invertible);
}

TEST_CASE("Fredholm analysis counts interior zeros into the index") {
    SpaceSpec s = SpaceSpec::hardy(2);

    FredholmReport two = fredholm_analysis(parse_symbol("z*(z - 0.5)*(z - 2)"), cplx(0.0), s);
    CHECK(two.fredholm);
    CHECK(two.index_defined);
    CHECK(two.index == -2);
    CHECK(two.zeros.total_multiplicity == 2);
    CHECK(two.boundary_delta > 0.4);
    CHECK(two.boundary_delta < 0.51);
    CHECK(two.annulus_radius == doctest::Approx(0.75).epsilon(1e-6));
    CHECK(two.status.find("Fredholm") != std::string::npos);

    FredholmReport sq = fredholm_analysis(parse_symbol("z^2"), cplx(0.0), s);
    CHECK(sq.index == -2);
    REQUIRE(sq.zeros.zeros.size() == 1);
    CHECK(sq.zeros.zeros[0].multiplicity == 2);

    FredholmReport off = fredholm_analysis(parse_symbol("z"), cplx(3.0), s);
    CHECK(off.fredholm);
    CHECK(off.index == 0);
    CHECK(off.boundary_delta > 1.9);
    CHECK(off.annulus_radius == doctest::Approx(0.5).epsilon(1e-9));

    FredholmReport on = fredholm_analysis(parse_symbol("z"), std::polar(1.0, kPi / 4), s);
    CHECK_FALSE(on.fredholm);
    CHECK_FALSE(on.index_defined);
    CHECK(on.zeros.boundary_zero);
    CHECK(on.status.find("not Fredholm") != std::string::npos);

    CHECK_THROWS_AS(fredholm_analysis(parse_symbol("z"), cplx(0.0), SpaceSpec::hardy(1)),
                    HypothesisError);
}

TEST_CASE("sufficiency-only spaces label their conclusions") {
    SpaceSpec band = SpaceSpec::bergman_sobolev(2, 0, 0.8);
    FredholmReport good = fredholm_analysis(parse_symbol("z - 2"), cplx(0.0), band);
    CHECK(good.fredholm);
    CHECK(good.family == SpaceFamily::SufficiencyOnly);
    CHECK(good.status.find("Fredholm") != std::string::npos);

    FredholmReport torn = fredholm_analysis(parse_symbol("z"), cplx(1.0), band);
    CHECK_FALSE(torn.fredholm);
    CHECK(torn.status.find("no conclusion") != std::string::npos);
}

TEST_CASE("peak products refute multipliers with boundary zeros") {
    std::vector<int> grid{8, 32, 128, 512};
    for (const SpaceSpec& s : {SpaceSpec::bloch(0.5), SpaceSpec::hardy_sobolev(1.0)}) {
        auto rows = peak_refutation_scan(parse_symbol("(1 + z)/2"), cplx(-1.0), s, grid);
        REQUIRE(rows.size() == grid.size());
        CHECK(rows.back().second < 0.3 * rows.front().second);
        for (std::size_t i = 0; i + 1 < rows.size(); ++i)
            CHECK(rows[i + 1].second <= rows[i].second * 1.05);

        auto control = peak_refutation_scan(parse_symbol("z"), cplx(1.0), s, grid);
        for (const auto& [k, v] : control) CHECK(v > 0.2);
    }

    CHECK_THROWS_AS(
        peak_refutation_scan(parse_symbol("z"), cplx(0.5), SpaceSpec::bloch(0.5), grid),
        std::domain_error);
    CHECK_THROWS_AS(peak_refutation_scan(parse_symbol("z"), cplx(1.0),
                                         SpaceSpec::bloch(0.5), {8, 8}),
                    std::invalid_argument);
    CHECK_THROWS_AS(peak_refutation_scan(parse_symbol("z"), cplx(1.0),
                                         SpaceSpec::hardy(2), grid),
                    HypothesisError);
}
