#include "mpdo/pdo.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>

#include "mpdo/bumps.hpp"
#include "mpdo/errors.hpp"
#include "mpdo/parallel.hpp"

namespace mpdo {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_inputs(const OperatorPlan& p, std::span<const SampledFunction> fs) {
    if (static_cast<int>(fs.size()) != p.grid.n)
        throw ConfigError("operator: expected one input per block");
    for (const auto& f : fs) {
        if (!(f.grid == p.grid)) throw ConfigError("operator: input grid mismatch");
        if (f.domain != Domain::Space || f.arity != 1)
            throw ConfigError("operator: inputs must be single-block space-domain functions");
    }
}

double freq_norm2(const SampledFunction& F) {
    double acc = 0;
    for (const cd& v : F.samples) acc += std::norm(v);
    return std::sqrt(acc * std::pow(F.grid.freq_spacing(), F.grid.axes(F.arity)));
}

// Frequency-side multiply by a radial factor of the output variable.
SampledFunction filter_output(const SampledFunction& u, const std::function<double(double)>& radial) {
    SampledFunction F = forward_transform(u);
    const Grid& g = F.grid;
    std::array<int, kMaxAxes> idx{};
    std::size_t flat = 0;
    do {
        double r2 = 0;
        for (int a = 0; a < g.d; ++a) {
            const double v = g.xi_at(idx[a]);
            r2 += v * v;
        }
        F.samples[flat] *= radial(std::sqrt(r2));
        ++flat;
    } while (next_index(idx, g.d, g.points_per_axis));
    return inverse_transform(F);
}

// Core lattice sum; window (if any) is a radial factor in |xi vec|.
SampledFunction apply_impl(const OperatorPlan& p, std::span<const SampledFunction> fs,
                           const std::function<double(double)>* window) {
    check_inputs(p, fs);
    const Grid& g = p.grid;
    const int d = g.d, n = g.n, N = g.points_per_axis, nd = g.axes(n);

    std::vector<SampledFunction> hats;
    hats.reserve(fs.size());
    for (const auto& f : fs) hats.push_back(forward_transform(f));

    const bool fast = p.strategy == Strategy::Fast ||
                      (p.strategy == Strategy::Auto && p.symbol.x_independent);
    const std::size_t lattice = g.samples(n);

    if (fast) {
        if (!p.symbol.x_independent)
            throw ConfigError("operator: fast strategy needs an x-independent symbol");
        SampledFunction G = make_function(g, Domain::Frequency, 1);
        const double cell = std::pow(g.freq_spacing(), d * (n - 1));
        std::array<int, kMaxAxes> idx{};
        std::size_t flat = 0;
        do {
            cd m = p.table ? (*p.table)[flat] : cd{1, 0};
            if (window) {
                double r2 = 0;
                for (int a = 0; a < nd; ++a) {
                    const double v = g.xi_at(idx[a]);
                    r2 += v * v;
                }
                const double w = (*window)(std::sqrt(r2));
                if (w == 0.0) {
                    ++flat;
                    continue;
                }
                m *= w;
            }
            if (m != cd{0, 0}) {
                cd coef = m * cell;
                std::size_t out = 0;
                for (int a = 0; a < d; ++a) {
                    int q = 0;
                    for (int i = 0; i < n; ++i) q += idx[i * d + a] - N / 2;
                    out = out * static_cast<std::size_t>(N) +
                          static_cast<std::size_t>(((q + N / 2) % N + N) % N);
                }
                bool zero = false;
                for (int i = 0; i < n && !zero; ++i) {
                    std::size_t bf = 0;
                    for (int a = 0; a < d; ++a)
                        bf = bf * static_cast<std::size_t>(N) + static_cast<std::size_t>(idx[i * d + a]);
                    const cd hv = hats[static_cast<std::size_t>(i)].samples[bf];
                    if (hv == cd{0, 0}) zero = true;
                    coef *= hv;
                }
                if (!zero) G.samples[out] += coef;
            }
            ++flat;
        } while (next_index(idx, nd, N));
        return inverse_transform(G);
    }

    // direct strategy: per-output-point lattice sum
    SampledFunction out = make_function(g, Domain::Space, 1);
    const double cell = std::pow(g.freq_spacing(), nd);
    parallel_for(out.samples.size(), [&](std::size_t xflat) {
        std::array<int, kMaxAxes> xi_idx{};
        std::array<double, kMaxAxes> x{};
        {
            std::size_t rem = xflat;
            for (int a = d - 1; a >= 0; --a) {
                x[a] = g.x_at(static_cast<int>(rem % static_cast<std::size_t>(N)));
                rem /= static_cast<std::size_t>(N);
            }
        }
        std::span<const double> xs(x.data(), static_cast<std::size_t>(d));
        cd acc{0, 0};
        std::array<double, kMaxAxes> xiv{};
        for (std::size_t flat = 0; flat < lattice; ++flat) {
            std::size_t rem = flat;
            for (int a = nd - 1; a >= 0; --a) {
                xi_idx[a] = static_cast<int>(rem % static_cast<std::size_t>(N));
                xiv[a] = g.xi_at(xi_idx[a]);
                rem /= static_cast<std::size_t>(N);
            }
            cd term{1, 0};
            bool zero = false;
            for (int i = 0; i < n && !zero; ++i) {
                std::size_t bf = 0;
                for (int a = 0; a < d; ++a)
                    bf = bf * static_cast<std::size_t>(N) + static_cast<std::size_t>(xi_idx[i * d + a]);
                const cd hv = hats[static_cast<std::size_t>(i)].samples[bf];
                if (hv == cd{0, 0}) zero = true;
                term *= hv;
            }
            if (zero) continue;
            if (window) {
                double r2 = 0;
                for (int a = 0; a < nd; ++a) r2 += xiv[a] * xiv[a];
                const double w = (*window)(std::sqrt(r2));
                if (w == 0.0) continue;
                term *= w;
            }
            term *= p.symbol.eval(xs, std::span<const double>(xiv.data(), static_cast<std::size_t>(nd)));
            double phase = 0;
            for (int a = 0; a < d; ++a) {
                double sum = 0;
                for (int i = 0; i < n; ++i) sum += xiv[i * d + a];
                phase += x[a] * sum;
            }
            acc += term * std::polar(1.0, kTwoPi * phase);
        }
        out.samples[xflat] = acc * cell;
    });
    return out;
}

} // namespace

OperatorPlan make_plan(const Grid& g, const Symbol& sym, int levels, int out_levels,
                       Strategy strategy) {
    if (sym.d != g.d || sym.n != g.n) throw ConfigError("operator plan: symbol shape mismatch");
    if (levels < 0) throw ConfigError("operator plan: negative band count");
    if (std::ldexp(1.0, levels + 1) > g.max_frequency())
        throw ConfigError("operator plan: band count exceeds the grid frequency range");
    OperatorPlan p;
    p.grid = g;
    p.symbol = sym;
    p.levels = levels;
    p.out_levels = out_levels;
    p.strategy = strategy;
    const bool fast = strategy == Strategy::Fast ||
                      (strategy == Strategy::Auto && sym.x_independent);
    if (fast && !sym.x_independent)
        throw ConfigError("operator plan: fast strategy needs an x-independent symbol");
    if (!fast) {
        const long double evals = std::pow((long double)g.points_per_axis, g.d * (g.n + 1));
        if (evals > 4294967296.0L)
            throw ConfigError("operator plan: direct evaluation too large; "
                              "use the fast strategy or a smaller grid");
    }
    if (fast) {
        auto table = std::make_shared<std::vector<cd>>(g.samples(g.n));
        const int nd = g.axes(g.n);
        const int N = g.points_per_axis;
        std::array<double, kMaxAxes> x0{};
        std::span<const double> xs(x0.data(), static_cast<std::size_t>(g.d));
        parallel_for(table->size(), [&](std::size_t flat) {
            std::array<double, kMaxAxes> xiv{};
            std::size_t rem = flat;
            for (int a = nd - 1; a >= 0; --a) {
                xiv[a] = g.xi_at(static_cast<int>(rem % static_cast<std::size_t>(N)));
                rem /= static_cast<std::size_t>(N);
            }
            (*table)[flat] = sym.eval(xs, std::span<const double>(xiv.data(), static_cast<std::size_t>(nd)));
        });
        p.table = std::move(table);
    }
    return p;
}

SampledFunction apply(const OperatorPlan& plan, std::span<const SampledFunction> fs) {
    return apply_impl(plan, fs, nullptr);
}

SampledFunction low_piece(const OperatorPlan& plan, std::span<const SampledFunction> fs) {
    const std::function<double(double)> w = [](double r) { return bumps().partition_low(r); };
    return apply_impl(plan, fs, &w);
}

SampledFunction dyadic_piece_unfactored(const OperatorPlan& plan, int j,
                                        std::span<const SampledFunction> fs) {
    if (j < 0 || j > plan.levels) throw ConfigError("operator: band level out of range");
    const std::function<double(double)> w = [j](double r) { return bumps().Psi_hat_j(j, r); };
    return apply_impl(plan, fs, &w);
}

SampledFunction dyadic_piece(const OperatorPlan& plan, int j, std::span<const SampledFunction> fs) {
    if (j < 0 || j > plan.levels) throw ConfigError("operator: band level out of range");
    check_inputs(plan, fs);
    const Grid& g = plan.grid;
    const auto terms = factorize_band(g, j);
    const std::function<double(double)> w = [j](double r) { return bumps().Psi_hat_j(j, r); };

    SampledFunction out = make_function(g, Domain::Space, 1);
    std::vector<SampledFunction> hats;
    hats.reserve(fs.size());
    for (const auto& f : fs) hats.push_back(forward_transform(f));

    for (const auto& term : terms) {
        std::vector<SampledFunction> filtered;
        filtered.reserve(fs.size());
        for (std::size_t i = 0; i < fs.size(); ++i) {
            SampledFunction H = hats[i];
            std::array<int, kMaxAxes> idx{};
            std::size_t flat = 0;
            do {
                double r2 = 0;
                for (int a = 0; a < g.d; ++a) {
                    const double v = g.xi_at(idx[a]);
                    r2 += v * v;
                }
                H.samples[flat] *= window_value(term.windows[i], std::sqrt(r2));
                ++flat;
            } while (next_index(idx, g.d, g.points_per_axis));
            filtered.push_back(inverse_transform(H));
        }
        SampledFunction piece = apply_impl(plan, filtered, &w);
        piece = filter_output(piece, [&](double r) { return window_value(term.windows.back(), r); });
        for (std::size_t i = 0; i < out.samples.size(); ++i)
            out.samples[i] += term.weight * piece.samples[i];
    }
    return out;
}

SplitResult split(const OperatorPlan& plan, std::span<const SampledFunction> fs) {
    if (plan.out_levels < plan.levels + 10)
        throw ConfigError("operator split: output cap must sit at least ten levels above the band count");
    check_inputs(plan, fs);
    const Grid& g = plan.grid;
    const int K = plan.out_levels;
    const auto& fam = bumps();

    SampledFunction above_f = make_function(g, Domain::Frequency, 1);
    SampledFunction below_f = make_function(g, Domain::Frequency, 1);
    SampledFunction near_f = make_function(g, Domain::Frequency, 1);
    SampledFunction sum_f = make_function(g, Domain::Frequency, 1);

    for (int j = 0; j <= plan.levels; ++j) {
        const SampledFunction piece = dyadic_piece(plan, j, fs);
        const SampledFunction P = forward_transform(piece);
        std::array<int, kMaxAxes> idx{};
        std::size_t flat = 0;
        do {
            double r2 = 0;
            for (int a = 0; a < g.d; ++a) {
                const double v = g.xi_at(idx[a]);
                r2 += v * v;
            }
            const double r = std::sqrt(r2);
            double above = 0;
            for (int k = j + 10; k <= K; ++k) above += fam.psi_hat_k(k, r);
            double near = 0;
            for (int k = j - 9; k <= j + 9; ++k) near += fam.psi_hat_k(k, r);
            const double below = fam.phi_hat_k(j - 10, r);
            const cd v = P.samples[flat];
            above_f.samples[flat] += above * v;
            below_f.samples[flat] += below * v;
            near_f.samples[flat] += near * v;
            sum_f.samples[flat] += v;
            ++flat;
        } while (next_index(idx, g.d, g.points_per_axis));
    }

    SplitResult res;
    double out_norm = freq_norm2(sum_f);
    {
        SampledFunction capped = sum_f;
        SampledFunction outside = sum_f;
        std::array<int, kMaxAxes> idx{};
        std::size_t flat = 0;
        do {
            double r2 = 0;
            for (int a = 0; a < g.d; ++a) {
                const double v = g.xi_at(idx[a]);
                r2 += v * v;
            }
            const double low = fam.phi_hat_k(K, std::sqrt(r2));
            capped.samples[flat] *= low;
            outside.samples[flat] *= 1.0 - low;
            ++flat;
        } while (next_index(idx, g.d, g.points_per_axis));
        if (out_norm > 0) {
            res.band_residual_fraction = freq_norm2(outside) / out_norm;
            SampledFunction gap = capped;
            for (std::size_t i = 0; i < gap.samples.size(); ++i)
                gap.samples[i] = above_f.samples[i] + below_f.samples[i] + near_f.samples[i] -
                                 capped.samples[i];
            res.reconstruction_error = freq_norm2(gap) / out_norm;
        }
    }
    res.above_band = inverse_transform(above_f);
    res.below_band = inverse_transform(below_f);
    res.near_band = inverse_transform(near_f);
    return res;
}

} // namespace mpdo
