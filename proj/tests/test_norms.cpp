#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "mpdo/harness.hpp"
#include "mpdo/norms.hpp"
#include "mpdo/symbols.hpp"

using namespace mpdo;

namespace {

constexpr double kPi = std::numbers::pi;

// Adaptive Simpson quadrature, used as an implementation-independent oracle.
double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fb,
               double fm, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double whole = (b - a) / 6.0 * (fa + 4 * fm + fb);
    const double left = (m - a) / 6.0 * (fa + 4 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson(f, a, m, fa, fm, flm, tol / 2, depth - 1) +
           simpson(f, m, b, fm, fb, frm, tol / 2, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    const double m = 0.5 * (a + b);
    return simpson(f, a, b, f(a), f(b), f(m), tol, 40);
}

SampledFunction gaussian_on(const Grid& g) {
    return sample_space(g, 1, [](std::span<const double> x) {
        double r2 = 0;
        for (double v : x) r2 += v * v;
        return cd{std::exp(-r2), 0.0};
    });
}

} // namespace

TEST_CASE("lp quasinorm: closed forms, limits, and homogeneity") {
    const Grid g = make_grid(1, 1, 2.0, 16);
    SampledFunction f = make_function(g, Domain::Space, 1);
    f[5] = cd{3.0, -4.0}; // |v| = 5
    const double h = g.spacing();
    CHECK(lp_quasinorm(f, 1.0) == doctest::Approx(5.0 * h).epsilon(1e-15));
    CHECK(lp_quasinorm(f, 2.0) == doctest::Approx(5.0 * std::sqrt(h)).epsilon(1e-15));
    CHECK(lp_quasinorm(f, std::numeric_limits<double>::infinity()) == 5.0);

    const SampledFunction r = random_test_function(g, 3, -2, 2);
    SampledFunction r2x = r;
    for (auto& v : r2x.samples) v *= 2.0;
    for (double p : {0.5, 1.0, 2.0, 4.0})
        CHECK(lp_quasinorm(r2x, p) == doctest::Approx(2.0 * lp_quasinorm(r, p)).epsilon(1e-14));

    CHECK_THROWS_AS(lp_quasinorm(f, 0.0), ConfigError);
    SampledFunction F = forward_transform(f);
    CHECK_THROWS_AS(lp_quasinorm(F, 2.0), ConfigError);
}

TEST_CASE("sobolev norm at s = 0 is the L2 norm") {
    const Grid g = make_grid(1, 2, 2.0, 32);
    const SampledFunction f = random_test_function(g, 17, -2, 3);
    const double l2 = lp_quasinorm(f, 2.0);
    CHECK(std::abs(sobolev_l2s(f, 0.0) - l2) < 1e-10 * l2);
    CHECK_THROWS_AS(sobolev_l2s(f, -0.5), ConfigError);
}

TEST_CASE("sobolev norm of a single mode matches the closed form") {
    const Grid g = make_grid(1, 1, 2.0, 32);
    for (double kappa : {0.0, 1.0, 3.5}) {
        const SampledFunction f = sample_space(g, 1, [kappa](std::span<const double> x) {
            return std::polar(1.0, 2 * kPi * kappa * x[0]);
        });
        for (double s : {0.5, 1.0, 2.0}) {
            const double want =
                std::pow(1.0 + 4 * kPi * kPi * kappa * kappa, s / 2.0) * std::sqrt(g.box_edge);
            CHECK(std::abs(sobolev_l2s(f, s) - want) < 1e-12 * want);
        }
    }
}

TEST_CASE("sobolev norm of a gaussian matches independent quadrature") {
    const Grid g = make_grid(1, 1, 16.0, 256);
    const SampledFunction f = gaussian_on(g);
    // spectrum of e^{-x^2} is sqrt(pi) e^{-pi^2 xi^2}
    const auto integrand = [](double xi) {
        return (1.0 + 4 * kPi * kPi * xi * xi) * kPi * std::exp(-2 * kPi * kPi * xi * xi);
    };
    const double want = std::sqrt(integrate(integrand, -9.0, 9.0, 1e-13));
    const double got = sobolev_l2s(f, 1.0);
    CHECK(std::abs(got - want) < 1e-6 * want);
}

TEST_CASE("sobolev norm grows with the order") {
    const Grid g = make_grid(1, 1, 2.0, 64);
    const SampledFunction f = random_test_function(g, 23, -1, 3);
    CHECK(sobolev_l2s(f, 0.0) < sobolev_l2s(f, 0.5));
    CHECK(sobolev_l2s(f, 0.5) < sobolev_l2s(f, 1.5));
}

TEST_CASE("product sobolev weight is dominated by the joint weight") {
    const Grid g = make_grid(1, 2, 2.0, 16);
    SampledFunction f = make_function(g, Domain::Space, 2);
    std::mt19937_64 rng(5);
    for (auto& v : f.samples)
        v = cd{static_cast<double>(rng() >> 11) * 0x1p-53, static_cast<double>(rng() >> 11) * 0x1p-53};
    const std::vector<double> orders{0.75, 0.5};
    const double prod = product_sobolev(f, orders);
    const double joint = sobolev_l2s(f, 1.25);
    CHECK(prod <= joint * (1 + 1e-12));
    CHECK(prod >= sobolev_l2s(f, 0.0));
    const std::vector<double> bad{0.5};
    CHECK_THROWS_AS(product_sobolev(f, bad), ConfigError);
}

TEST_CASE("multiplier norm table is flat for the constant symbol") {
    const Grid g = make_grid(1, 2, 2.0, 32);
    const Symbol one = constant_symbol(g, cd{1.0, 0.0});
    const HormanderTable t = hormander_norm(one, g, 1.0, -3, 3);
    REQUIRE(t.entries.size() == 7);
    for (const auto& e : t.entries) CHECK(e.value == t.entries.front().value);
    CHECK(t.sup == t.entries.front().value);
    CHECK_THROWS_AS(hormander_norm(modulation_symbol(g, {1.0}), g, 1.0, 0, 1), ConfigError);
    CHECK_THROWS_AS(hormander_norm(one, g, 1.0, 2, 1), ConfigError);
}

TEST_CASE("multiplier norm table is dilation-invariant for a homogeneous symbol") {
    const Grid g = make_grid(1, 2, 2.0, 32);
    const Symbol s = coifman_meyer_symbol(g, 1.0 / 16);
    const HormanderTable t = hormander_norm(s, g, 1.0, 0, 3);
    for (const auto& e : t.entries)
        CHECK(std::abs(e.value - t.entries.front().value) < 1e-12 * t.entries.front().value);
}

TEST_CASE("symbol smoothness norm: constant symbol reduces to window norms") {
    const Grid g = make_grid(1, 2, 2.0, 32);
    const Symbol one = constant_symbol(g, cd{1.0, 0.0});
    const auto probes = default_x_probes(g);
    const SymbolNormReport rep = symbol_norm_s_delta(one, g, 1.0, 0.0, probes, 2);
    CHECK(rep.probe_count == 1); // x-independent: one probe suffices
    CHECK(!rep.probes_subsampled);
    // the norm reduces to the Sobolev size of the window tabulated on the lattice
    const double low_direct = sobolev_l2s(
        sample_space(g, 2, [&](std::span<const double> y) {
            return cd{bumps().Phi_hat(std::hypot(y[0], y[1])), 0.0};
        }), 1.0);
    CHECK(rep.low == doctest::Approx(low_direct).epsilon(1e-12));
    CHECK(rep.low_alpha1 == 0.0);
    for (const auto& b : rep.bands) {
        CHECK(b.alpha1 == 0.0);
        CHECK(b.combined == b.alpha0);
        CHECK(b.alpha0 == rep.bands.front().alpha0); // scale-invariant window
    }
    CHECK(rep.total == doctest::Approx(rep.low + rep.bands.front().alpha0).epsilon(1e-15));
}

TEST_CASE("symbol smoothness norm: analytic x-derivative row scales by the modulation frequency") {
    const Grid g = make_grid(1, 2, 2.0, 32);
    const Symbol s = modulation_symbol(g, {1.5});
    const auto probes = default_x_probes(g);
    const SymbolNormReport rep = symbol_norm_s_delta(s, g, 1.0, 0.0, probes, 1);
    const double factor = 2 * kPi * 1.5;
    CHECK(rep.low_alpha1 == doctest::Approx(factor * rep.low_alpha0).epsilon(1e-10));
    for (const auto& b : rep.bands)
        CHECK(b.alpha1 == doctest::Approx(factor * b.alpha0).epsilon(1e-10));
    CHECK(rep.probe_count == probes.size());
}

TEST_CASE("symbol smoothness norm damps x-derivative rows by 2^{-j delta}") {
    const Grid g = make_grid(1, 2, 2.0, 32);
    const Symbol s = modulation_symbol(g, {1.5});
    const auto probes = default_x_probes(g);
    const SymbolNormReport flat = symbol_norm_s_delta(s, g, 1.0, 0.0, probes, 2);
    const SymbolNormReport damped = symbol_norm_s_delta(s, g, 1.0, 0.5, probes, 2);
    for (std::size_t j = 0; j < flat.bands.size(); ++j) {
        const double scale = std::pow(2.0, -0.5 * static_cast<double>(j));
        CHECK(damped.bands[j].alpha1 ==
              doctest::Approx(scale * flat.bands[j].alpha1).epsilon(1e-12));
    }
    CHECK_THROWS_AS(symbol_norm_s_delta(s, g, 1.0, 1.0, probes, 2), ConfigError);
    CHECK_THROWS_AS(symbol_norm_s_delta(s, g, 1.0, 0.0, {}, 2), ConfigError);
}

TEST_CASE("mollification scale sets nest and clip to the box") {
    const Grid g = make_grid(1, 1, 8.0, 64);
    const auto local = hardy_scales_local(g, 8);
    const auto global = hardy_scales_global(g, 8);
    CHECK(local.size() == 9);
    CHECK(global.size() == 11); // scales above L/2 = 4 clipped
    for (double t : local) {
        CHECK(t <= 4.0);
        CHECK(std::find(global.begin(), global.end(), t) != global.end());
    }
    CHECK_THROWS_AS(hardy_scales_local(g, 1), ConfigError);
}

TEST_CASE("mollify preserves constants and total mass") {
    const Grid g = make_grid(1, 1, 8.0, 64);
    const SampledFunction c = sample_space(g, 1, [](std::span<const double>) { return cd{2.5, 0}; });
    const SampledFunction mc = mollify(c, 1.0);
    for (std::size_t i = 0; i < mc.size(); ++i) CHECK(std::abs(mc[i] - cd{2.5, 0}) < 1e-13);

    SampledFunction spike = make_function(g, Domain::Space, 1);
    spike[10] = 7.0;
    const SampledFunction ms = mollify(spike, 1.0);
    cd sum_in = 0, sum_out = 0;
    for (std::size_t i = 0; i < spike.size(); ++i) {
        sum_in += spike[i];
        sum_out += ms[i];
    }
    CHECK(std::abs(sum_in - sum_out) < 1e-12 * std::abs(sum_in));
    CHECK_THROWS_AS(mollify(spike, 0.0), ConfigError);
}

TEST_CASE("scale-maximal field dominates every single scale") {
    const Grid g = make_grid(1, 1, 8.0, 64);
    const SampledFunction f = random_test_function(g, 31, -2, 2);
    const auto scales = hardy_scales_local(g, 6);
    const SampledFunction peak = scale_maximal_field(f, scales);
    for (double t : scales) {
        const SampledFunction m = mollify(f, t);
        for (std::size_t i = 0; i < m.size(); ++i)
            CHECK(peak[i].real() >= std::abs(m[i]) - 1e-15);
    }
}

TEST_CASE("local maximal quasinorm never exceeds the global one") {
    const Grid g = make_grid(1, 1, 8.0, 64);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const SampledFunction f = random_test_function(g, seed, -2, 2);
        for (double p : {0.75, 1.0, 2.0})
            CHECK(hp_quasinorm(f, p, 8) <= Hp_quasinorm(f, p, 8));
    }
}

TEST_CASE("maximal quasinorm is stable under doubling the scale count") {
    const Grid g = make_grid(1, 1, 8.0, 128);
    const SampledFunction f = gaussian_on(g);
    const double a = hp_quasinorm(f, 1.0, 8);
    const double b = hp_quasinorm(f, 1.0, 16);
    CHECK(std::abs(a - b) <= 0.01 * a);
}
