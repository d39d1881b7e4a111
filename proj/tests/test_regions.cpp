#include <doctest.h>

#include <vector>

#include "mpdo/errors.hpp"
#include "mpdo/regions.hpp"

using namespace mpdo;

namespace {

std::vector<double> approx(const std::vector<Rat>& xs) {
    std::vector<double> out;
    out.reserve(xs.size());
    for (const Rat& r : xs) out.push_back(double(r.num) / double(r.den));
    return out;
}

} // namespace

TEST_CASE("rational scalar: normalization, arithmetic, ordering") {
    CHECK(rat(2, 4) == rat(1, 2));
    CHECK(rat(-3, -6) == rat(1, 2));
    const Rat neg = rat(1, -2);
    CHECK(neg.num == -1);
    CHECK(neg.den == 2);
    CHECK(rat(0, 7).den == 1);

    CHECK(rat(1, 3) + rat(1, 6) == rat(1, 2));
    CHECK(rat(1, 2) - rat(2, 3) == rat(-1, 6));
    CHECK(rat(1, 3) < rat(1, 2));
    CHECK(rat(1, 2) <= rat(1, 2));
    CHECK_FALSE(rat(1, 2) < rat(1, 2));
    CHECK_THROWS_AS(rat(1, 0), ConfigError);
}

TEST_CASE("sum form and subset form agree exactly on a rational sweep") {
    // n = 2, sixteenth steps on (0, 4]
    for (long long a : {3LL, 4LL, 6LL}) { // alpha = 3/2, 2, 3
        const Rat alpha = rat(a, 2);
        for (long long i = 1; i <= 64; ++i)
            for (long long j = 1; j <= 64; ++j) {
                const std::vector<Rat> x{rat(i, 16), rat(j, 16)};
                CHECK(in_region_sum_form_exact(x, alpha) == in_region_subset_form_exact(x, alpha));
            }
    }
    // n = 3, eighth steps on (0, 4]
    const Rat alpha = rat(2, 1);
    for (long long i = 1; i <= 32; ++i)
        for (long long j = 1; j <= 32; ++j)
            for (long long k = 1; k <= 32; ++k) {
                const std::vector<Rat> x{rat(i, 8), rat(j, 8), rat(k, 8)};
                CHECK(in_region_sum_form_exact(x, alpha) == in_region_subset_form_exact(x, alpha));
            }
}

TEST_CASE("floating verdicts match the exact ones away from the boundary") {
    const Rat alpha = rat(2, 1);
    for (long long i = 1; i <= 64; ++i)
        for (long long j = 1; j <= 64; ++j) {
            const std::vector<Rat> x{rat(i, 16), rat(j, 16)};
            const Verdict v = in_region_sum_form(approx(x), 2.0);
            if (v == Verdict::Boundary) continue;
            CHECK((v == Verdict::In) == in_region_sum_form_exact(x, alpha));
            const Verdict w = in_region_subset_form(approx(x), 2.0);
            if (w != Verdict::Boundary) CHECK((w == Verdict::In) == in_region_subset_form_exact(x, alpha));
        }
}

TEST_CASE("membership grows with alpha and matches hand-checked points") {
    const std::vector<Rat> corner{rat(1, 2), rat(1, 2)};
    CHECK_FALSE(in_region_sum_form_exact(corner, rat(1, 1))); // strict inequality fails
    CHECK(in_region_sum_form_exact(corner, rat(3, 2)));
    CHECK(in_region_sum_form(approx(corner), 1.0) == Verdict::Boundary);

    const std::vector<Rat> small{rat(1, 4), rat(1, 4)}; // coordinates clamp up to 1/2
    CHECK_FALSE(in_region_sum_form_exact(small, rat(1, 1)));

    const std::vector<Rat> mixed{rat(1, 1), rat(1, 2)};
    CHECK(in_region_sum_form_exact(mixed, rat(2, 1)));
    const std::vector<Rat> big{rat(2, 1), rat(1, 1)};
    CHECK_FALSE(in_region_sum_form_exact(big, rat(2, 1)));

    for (long long i = 1; i <= 64; ++i)
        for (long long j = 1; j <= 64; ++j) {
            const std::vector<Rat> x{rat(i, 16), rat(j, 16)};
            if (in_region_sum_form_exact(x, rat(3, 2))) CHECK(in_region_sum_form_exact(x, rat(2, 1)));
        }
}

TEST_CASE("guard band flags near-boundary points instead of taking sides") {
    // perturb a coordinate above 1/2 so the clamp does not absorb it
    const std::vector<double> x{1.0 + 1e-13, 0.5};
    CHECK(in_region_sum_form(x, 1.5) == Verdict::Boundary);
    CHECK(in_region_sum_form(x, 1.5, 0.0) == Verdict::Out);
    const std::vector<double> y{1.0 - 1e-13, 0.5};
    CHECK(in_region_sum_form(y, 1.5, 0.0) == Verdict::In);
}

TEST_CASE("region predicates validate their arguments") {
    const std::vector<double> none;
    CHECK_THROWS_AS(in_region_sum_form(none, 1.0), ConfigError);
    const std::vector<double> bad{0.5, 0.0};
    CHECK_THROWS_AS(in_region_sum_form(bad, 1.0), ConfigError);
    const std::vector<double> ok{0.5, 0.5};
    CHECK_THROWS_AS(in_region_sum_form(ok, 0.0), ConfigError);
    const std::vector<double> wide(21, 1.0);
    CHECK_THROWS_AS(in_region_subset_form(wide, 100.0), ConfigError);
    CHECK_NOTHROW(in_region_sum_form(wide, 100.0));
}

TEST_CASE("smoothness condition reduces to s > 3/2 at the (1,1) point") {
    const std::vector<double> x{1.0, 1.0};
    CHECK(subset_smoothness_condition(x, 1.6, 1) == Verdict::In);
    CHECK(subset_smoothness_condition(x, 1.4, 1) == Verdict::Out);
    CHECK(subset_smoothness_condition(x, 1.5, 1) == Verdict::Boundary);
    CHECK_THROWS_AS(subset_smoothness_condition(x, 0.0, 1), ConfigError);
    CHECK_THROWS_AS(subset_smoothness_condition(x, 1.0, 0), ConfigError);
}

TEST_CASE("symbol class feasibility over rho, order, and the exponent point") {
    const std::vector<double> x{0.5, 0.5};

    const AdmissibleResult top = symbol_class_admissible(x, 1.0, 0.0, 0.0, 1);
    CHECK(top.admissible);
    CHECK(top.witness_s == 2.0); // max(nd/2, d * sum) + 1

    const AdmissibleResult rough = symbol_class_admissible(x, 0.0, 0.0, -2.0, 1);
    CHECK(rough.admissible);
    CHECK(rough.witness_s > 1.0);
    CHECK(rough.witness_s <= 2.0);

    const AdmissibleResult flat = symbol_class_admissible(x, 0.0, 0.0, 0.0, 1);
    CHECK_FALSE(flat.admissible);
    CHECK_FALSE(flat.reason.empty());

    const std::vector<double> far{2.0, 2.0};
    const AdmissibleResult outside = symbol_class_admissible(far, 0.0, 0.0, -3.0, 1);
    CHECK_FALSE(outside.admissible);
    CHECK(outside.reason == "exponent point outside the region at the smoothness cap");

    CHECK_THROWS_AS(symbol_class_admissible(x, -0.1, 0.0, 0.0, 1), ConfigError);
    CHECK_THROWS_AS(symbol_class_admissible(x, 0.5, 1.0, 0.0, 1), ConfigError);
    CHECK_THROWS_AS(symbol_class_admissible(x, 0.5, 0.0, 0.5, 1), ConfigError);
    CHECK_THROWS_AS(symbol_class_admissible(x, 0.5, 0.0, 0.0, 0), ConfigError);
}

TEST_CASE("comparison condition: non-strict boundary and both verdicts") {
    const std::vector<Rat> x{rat(1, 2), rat(1, 2)};
    const std::vector<double> xd = approx(x);

    CHECK(comparison_condition(xd, -1.0, 1) == Verdict::In);
    CHECK(comparison_condition_exact(x, rat(-1, 1), 1));

    // margin exactly zero: the non-strict exact form accepts, doubles flag it
    CHECK(comparison_condition(xd, -0.5, 1) == Verdict::Boundary);
    CHECK(comparison_condition_exact(x, rat(-1, 2), 1));

    CHECK(comparison_condition(xd, 0.0, 1) == Verdict::Out);
    CHECK_FALSE(comparison_condition_exact(x, rat(0, 1), 1));

    CHECK_THROWS_AS(comparison_condition(xd, 0.0, 0), ConfigError);
    CHECK_THROWS_AS(comparison_condition_exact(x, rat(0, 1), 0), ConfigError);
}
