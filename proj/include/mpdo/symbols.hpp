#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "mpdo/bumps.hpp"
#include "mpdo/grid.hpp"

namespace mpdo {

// m(x, xivec) with x in R^d and xivec in (R^d)^n. Evaluators are pure and
// safe to call concurrently. dx holds analytic first-order x-derivatives
// when the factory can provide them (empty otherwise).
struct Symbol {
    using Eval = std::function<cd(std::span<const double> x, std::span<const double> xiv)>;

    std::string name;
    std::map<std::string, double> params;
    bool x_independent = false;
    int d = 1;
    int n = 1;
    Eval eval;
    std::vector<Eval> dx; // size d when analytic derivatives exist

    cd operator()(std::span<const double> x, std::span<const double> xiv) const {
        return eval(x, xiv);
    }
};

// Analytic baselines.
Symbol constant_symbol(const Grid& g, cd c);
// m = e^{-2pi i <a, xi_block>}; block is 1-based.
Symbol translation_symbol(const Grid& g, std::vector<double> a, int block);
// m = e^{2pi i <c, x>}, with analytic x-derivatives 2pi i c_l m.
Symbol modulation_symbol(const Grid& g, std::vector<double> c);

// Compactly supported cutoff in the joint (x, xivec) ball times the
// unimodular phase e^{i |x|^{3/2} p(xivec)}; the phase is C^1 in x but not
// C^2 at x = 0, so only first-order x-derivatives are attached.
Symbol compact_phase_symbol(const Grid& g);

// Dyadic sum of annulus blocks with a power singularity at a fixed anchor
// per block: sum_k W(|2^-k xi|) X_k(x) |2^-k xi - anchor|^gamma.
// Pre: gamma > 0, anchor inside the annulus 1/2 < |a| < 2.
Symbol anchored_singularity_symbol(const Grid& g, double gamma, double delta,
                                   std::vector<double> anchor = {});

// Same block structure with the anchor drifting in x inside the annulus
// (radius 1 + sin/4 modulation, derivative growth 2^{k delta}); gamma > 1.
Symbol drifting_singularity_symbol(const Grid& g, double gamma, double delta);

// Dyadic chirp: sum_k W(|2^-k xi|) X_k(x) |xi|^-b e^{i |xi|^a}.
// x_factor off makes it x-independent; block range [k_min, grid max level].
Symbol dyadic_chirp_symbol(const Grid& g, double a, double b, double delta,
                           bool x_factor = true, int k_min = 1);

// Pure unimodular chirp e^{i |xivec|^a}, x-independent, no block windows.
Symbol chirp_symbol(const Grid& g, double a);

// Degree-0 homogeneous model (for n >= 2: <xi_1, xi_2>/|xivec|^2), smoothly
// cut off inside |xivec| <= eps; x-independent, |m| <= 1.
Symbol coifman_meyer_symbol(const Grid& g, double eps);

// One derivative-order row of the estimator: the measured sup constant,
// the fitted growth exponent of max |D m| across dyadic shells, and the
// allowed exponent order + delta*|alpha| - rho*|beta|.
struct MihlinRow {
    int alpha = 0;
    int beta = 0;
    double constant = 0;
    double fitted_exponent = 0;
    double allowed_exponent = 0;
    bool violated = false;
    std::array<double, kMaxAxes> witness_xi{};
    double witness_value = 0;
};

struct MihlinReport {
    double rho = 1, delta = 0, order = 0;
    double tolerance = 0.15;
    std::vector<MihlinRow> rows;

    bool consistent() const {
        for (const auto& r : rows)
            if (r.violated) return false;
        return true;
    }
    const MihlinRow& row(int alpha, int beta) const;
};

// Central finite differences over probe points on dyadic frequency shells;
// fits log2 of the per-shell max magnitude against log2(1 + |xivec|) and
// flags orders whose fitted exponent exceeds the allowed one by more than
// the tolerance. A heuristic sampler, not a proof.
MihlinReport mihlin_estimate(const Symbol& sym, const Grid& g, double rho, double delta,
                             double order, int max_beta = 3, int probes_per_shell = 8,
                             std::uint64_t seed = 1234);

} // namespace mpdo
