#pragma once

#include <memory>
#include <span>
#include <vector>

#include "mpdo/grid.hpp"
#include "mpdo/symbols.hpp"

namespace mpdo {

// Direct: per-x lattice sum, works for any symbol, cost N^{d(n+1)}.
// Fast: fold the symbol-weighted coefficient products onto the output
// lattice and take one inverse transform; x-independent symbols only.
// Auto resolves to Fast when the symbol allows it.
enum class Strategy { Auto, Direct, Fast };

struct OperatorPlan {
    Grid grid;
    Symbol symbol;
    int levels = 0;     // J: symbol band count for decompositions
    int out_levels = 0; // K: output band cap for the three-way split
    Strategy strategy = Strategy::Auto;
    // raw symbol values on the xi lattice, materialized for the fast path
    std::shared_ptr<const std::vector<cd>> table;
};

OperatorPlan make_plan(const Grid& g, const Symbol& sym, int levels, int out_levels,
                       Strategy strategy = Strategy::Auto);

// T(x) = sum_{xi lattice} e^{2 pi i <x, xi_1+...+xi_n>} m(x, xi) prod f_hat_i(xi_i)
// times the lattice cell volume, at every grid x.
SampledFunction apply(const OperatorPlan& plan, std::span<const SampledFunction> fs);

// Central piece of the dyadic decomposition: symbol damped by the low window
// whose telescoping complement the band pieces carry.
SampledFunction low_piece(const OperatorPlan& plan, std::span<const SampledFunction> fs);

// Band piece at level j, evaluated in the factored per-block form (sum over
// the factor terms of the band decomposition).
SampledFunction dyadic_piece(const OperatorPlan& plan, int j, std::span<const SampledFunction> fs);

// Same band piece evaluated by plain symbol windowing; the two must agree.
SampledFunction dyadic_piece_unfactored(const OperatorPlan& plan, int j,
                                        std::span<const SampledFunction> fs);

// Output-frequency three-way split of the summed band pieces: each piece is
// refiltered on the output side far above its own band (above), far below
// (below), or within a fixed neighborhood (near).  The three parts add back
// to the output-low-passed sum of band pieces.
struct SplitResult {
    SampledFunction above_band;
    SampledFunction below_band;
    SampledFunction near_band;
    double band_residual_fraction = 0; // energy of sum T^j outside the output cap
    double reconstruction_error = 0;   // relative L2 gap vs the low-passed sum
};

SplitResult split(const OperatorPlan& plan, std::span<const SampledFunction> fs);

} // namespace mpdo
