#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "mpdo/errors.hpp"

namespace mpdo {

using cd = std::complex<double>;

// Axis count is d*arity; d <= 2 and arity <= 3 keeps this at 6.
inline constexpr int kMaxAxes = 6;

enum class Domain { Space, Frequency };

// Discretized periodic box [-L/2, L/2)^d shared by all sampled objects.
// Space samples sit at x_k = -L/2 + k*spacing; frequency samples at
// xi_m = m/L for signed m in [-N/2, N/2), stored centered (index i = m + N/2).
struct Grid {
    int d = 1;            // spatial dimension per block
    int n = 1;            // operator linearity (number of input blocks)
    double box_edge = 1; // L: the box per block is [-L/2, L/2)^d
    int points_per_axis = 2; // N, even

    double spacing() const { return box_edge / points_per_axis; }
    double freq_spacing() const { return 1.0 / box_edge; }
    double max_frequency() const { return points_per_axis / (2.0 * box_edge); }

    int axes(int arity) const { return d * arity; }
    std::size_t samples(int arity) const {
        std::size_t c = 1;
        for (int a = 0; a < axes(arity); ++a) c *= static_cast<std::size_t>(points_per_axis);
        return c;
    }
    double x_at(int k) const { return -box_edge / 2 + k * spacing(); }
    double xi_at(int i) const { return (i - points_per_axis / 2) * freq_spacing(); }

    bool operator==(const Grid&) const = default;
};

Grid make_grid(int d, int n, double box_edge, int points_per_axis,
               std::size_t memory_budget_bytes = std::size_t{2} << 30);

// Complex samples over (R^d)^arity in row-major axis order. arity = 1 holds a
// single input f_i; arity = n holds objects on the full frequency product.
struct SampledFunction {
    Grid grid;
    Domain domain = Domain::Space;
    int arity = 1;
    std::vector<cd> samples;

    std::size_t size() const { return samples.size(); }
    cd& operator[](std::size_t i) { return samples[i]; }
    const cd& operator[](std::size_t i) const { return samples[i]; }
};

SampledFunction make_function(const Grid& g, Domain domain, int arity);

// fn receives the dim = d*arity coordinates of one lattice point.
using PointFn = std::function<cd(std::span<const double>)>;
SampledFunction sample_space(const Grid& g, int arity, const PointFn& fn);
SampledFunction sample_frequency(const Grid& g, int arity, const PointFn& fn);

// Riemann-sum-scaled DFT pair with the e^{-2pi i <x,xi>} forward kernel:
// forward approximates \int f(x) e^{-2pi i <x,xi>} dx  (factor spacing^dim),
// inverse approximates \int F(xi) e^{+2pi i <x,xi>} dxi (factor 1/L^dim).
// The pair composes to the identity up to rounding.
SampledFunction forward_transform(const SampledFunction& f);
SampledFunction inverse_transform(const SampledFunction& F);

// G(xi) = F(-xi) with the -N/2 row folded periodically (index N-i mod N).
SampledFunction reflect_frequency(const SampledFunction& F);

// Row-major odometer: advances idx over [0,N)^axes, returns false on wrap.
inline bool next_index(std::array<int, kMaxAxes>& idx, int axes, int N) {
    for (int a = axes - 1; a >= 0; --a) {
        if (++idx[a] < N) return true;
        idx[a] = 0;
    }
    return false;
}

} // namespace mpdo
