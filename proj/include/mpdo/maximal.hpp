#pragma once

#include <optional>
#include <vector>

#include "mpdo/grid.hpp"

namespace mpdo {

// Sampled decay weight 2^{kd} (1 + |2^k x|)^{-N} with periodic min-image
// radius.  Box mass is recorded; decay must exceed the dimension or the
// mass estimate degenerates.
struct Weight {
    int decay = 0; // N
    int scale = 0; // k
    SampledFunction samples;
    double mass = 0;
};
Weight make_weight(const Grid& g, int decay, int scale);

// Centered maximal average of |f| over periodic balls with dyadic radii
// spacing * 2^m, m = 0..log2(N).  Single-block, space-domain input.
SampledFunction hardy_littlewood(const SampledFunction& f);

// (M(|f|^r))^{1/r}.
SampledFunction m_r(const SampledFunction& f, double r);

struct PeetreResult {
    SampledFunction field;
    double max_ratio = 0;
};

// For g band-limited to |xi| <= band_radius (verified):
//   field(x) = sup_z |g(x - z)| / (1 + band_radius |z|)^{d/r} / M_r g(x).
PeetreResult peetre_ratio(const SampledFunction& g, double r, double band_radius);

// Periodic convolution weight * |f| by quadrature.
SampledFunction weighted_smooth(const SampledFunction& f, const Weight& w);

// Ball-average growth scan: filter f with the scalar low-pass at scale k,
// optionally replace the filtered field by its weighted smoothing, then for
// each M compute
//   E_M = max_x ( tau^{-d} sum_{|z| <= tau} |g(x+z)|^s h^d )^{1/s} / M_r g(x),
// tau = 2^{M - j}.  Returns log2 E_M and its least-squares slope in M.
struct GrowthScan {
    std::vector<double> log2_values;
    double slope = 0;
};
GrowthScan average_growth_scan(const SampledFunction& f, int k, int j, int m_max, double r,
                               double s, const Weight* smooth_weight = nullptr);

} // namespace mpdo
