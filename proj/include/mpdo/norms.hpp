#pragma once

#include <span>
#include <vector>

#include "mpdo/grid.hpp"
#include "mpdo/symbols.hpp"

namespace mpdo {

// (sum |f|^p h^dim)^{1/p}; p = infinity gives max |f|.  Space-domain input.
double lp_quasinorm(const SampledFunction& f, double p);

// Fractional L2 Sobolev norm with the joint weight (1 + 4 pi^2 |xi|^2)^s
// evaluated on the frequency lattice.  Accepts either domain.
double sobolev_l2s(const SampledFunction& f, double s);

// Product-type variant: weight prod_i (1 + 4 pi^2 |xi_i|^2)^{s_i}, one order
// per d-dimensional block.
double product_sobolev(const SampledFunction& f, std::span<const double> s_orders);

struct HormanderEntry {
    int j = 0;
    double value = 0;
};
struct HormanderTable {
    std::vector<HormanderEntry> entries;
    double sup = 0;
};

// Dilation-invariant multiplier norm table: for each j, the Sobolev norm of
// xi |-> m(2^j xi) * Psi_hat(xi) sampled on g.  Requires an x-independent
// symbol; j runs over both signs.
HormanderTable hormander_norm(const Symbol& m, const Grid& g, double s, int j_lo, int j_hi);

struct BandContribution {
    int j = 0;
    double alpha0 = 0;   // no x-derivative
    double alpha1 = 0;   // first x-derivatives, with the 2^{-j delta} factor
    double combined = 0; // max over probes of (alpha0 + alpha1) at one probe
};

struct SymbolNormReport {
    double s = 0;
    double delta = 0;
    double low_alpha0 = 0;
    double low_alpha1 = 0;
    double low = 0; // max over probes of the summed low-frequency piece
    std::vector<BandContribution> bands;
    double total = 0; // low + sup_j combined band contribution
    std::size_t probe_count = 0;
    bool probes_subsampled = false;
};

// Probe set for the sup over x: every grid point when that stays small,
// otherwise a low-discrepancy subsample of 4096 points (flagged in reports).
std::vector<std::vector<double>> default_x_probes(const Grid& g);

// Smoothness norm combining a low-frequency piece with dyadic band pieces
// m(x, 2^j xi) Psi_hat(xi), x-derivative rows damped by 2^{-j delta}.
SymbolNormReport symbol_norm_s_delta(const Symbol& m, const Grid& g, double s, double delta,
                                     const std::vector<std::vector<double>>& x_probes, int j_max,
                                     bool allow_fd_fallback = true);

// Dyadic mollification scales for the small-scale (local) and all-scale
// (global) maximal functions; both are clipped so the mollifier support fits
// one period, with the same rule, keeping the local set a subset.
std::vector<double> hardy_scales_local(const Grid& g, int scale_count);
std::vector<double> hardy_scales_global(const Grid& g, int scale_count);

// Periodic convolution with the unit-mass mollifier at scale t.
SampledFunction mollify(const SampledFunction& f, double t);

// Pointwise max over scales of |mollify(f, t)|.
SampledFunction scale_maximal_field(const SampledFunction& f, std::span<const double> scales);

// L^p quasi-norm of the scale-maximal field over the local / global scale set.
double hp_quasinorm(const SampledFunction& f, double p, int scale_count);
double Hp_quasinorm(const SampledFunction& f, double p, int scale_count);

} // namespace mpdo
