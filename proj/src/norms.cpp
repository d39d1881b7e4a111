#include "mpdo/norms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "mpdo/bumps.hpp"
#include "mpdo/errors.hpp"
#include "mpdo/parallel.hpp"

namespace mpdo {
namespace {

constexpr double kFourPiSq = 4.0 * std::numbers::pi * std::numbers::pi;

void decode_index(std::size_t flat, int axes, int N, std::array<int, kMaxAxes>& idx) {
    for (int a = axes - 1; a >= 0; --a) {
        idx[a] = static_cast<int>(flat % static_cast<std::size_t>(N));
        flat /= static_cast<std::size_t>(N);
    }
}

// x-derivative of the symbol along axis l: analytic when registered, else a
// Richardson-extrapolated central difference.
cd eval_dx(const Symbol& sym, int l, std::span<const double> x, std::span<const double> xiv,
           bool allow_fd, double h) {
    if (!sym.dx.empty()) return sym.dx[static_cast<std::size_t>(l)](x, xiv);
    if (!allow_fd) throw ConfigError("symbol norm: x-derivatives unavailable and fallback disabled");
    std::array<double, kMaxAxes> xt{};
    std::copy(x.begin(), x.end(), xt.begin());
    auto at = [&](double t) {
        xt[l] = x[l] + t;
        return sym.eval(std::span<const double>(xt.data(), x.size()), xiv);
    };
    const cd d1 = (at(h) - at(-h)) / (2 * h);
    const cd d2 = (at(h / 2) - at(-h / 2)) / h;
    return (4.0 * d2 - d1) / 3.0;
}

// Samples xi |-> window(|xi|) * (d^deriv m)(x, 2^j xi) as a space-domain
// function of xi, ready for the Sobolev functional.  deriv_axis < 0 takes the
// symbol itself; low_piece swaps the annular window for the central one.
SampledFunction sample_band(const Symbol& sym, const Grid& g, std::span<const double> x, int j,
                            int deriv_axis, bool low_piece, bool allow_fd) {
    SampledFunction out = make_function(g, Domain::Space, sym.n);
    const int axes = g.axes(sym.n);
    const int N = g.points_per_axis;
    const auto& fam = bumps();
    const double h_fd = g.spacing() / 8.0;
    parallel_for(out.samples.size(), [&](std::size_t flat) {
        std::array<int, kMaxAxes> idx{};
        decode_index(flat, axes, N, idx);
        std::array<double, kMaxAxes> y{};
        double r2 = 0;
        for (int a = 0; a < axes; ++a) {
            y[a] = g.x_at(idx[a]);
            r2 += y[a] * y[a];
        }
        const double w = low_piece ? fam.Phi_hat(std::sqrt(r2)) : fam.Psi_hat(std::sqrt(r2));
        if (w == 0.0) {
            out.samples[flat] = 0;
            return;
        }
        std::array<double, kMaxAxes> yd{};
        for (int a = 0; a < axes; ++a) yd[a] = std::ldexp(y[a], j);
        std::span<const double> xis(yd.data(), static_cast<std::size_t>(axes));
        const cd v = deriv_axis < 0 ? sym.eval(x, xis)
                                    : eval_dx(sym, deriv_axis, x, xis, allow_fd, h_fd);
        out.samples[flat] = w * v;
    });
    return out;
}

double weighted_l2(const SampledFunction& f, const std::function<double(std::span<const double>)>& weight) {
    const SampledFunction* F = &f;
    SampledFunction tmp;
    if (f.domain == Domain::Space) {
        tmp = forward_transform(f);
        F = &tmp;
    }
    const Grid& g = F->grid;
    const int axes = g.axes(F->arity);
    const double cell = std::pow(g.freq_spacing(), axes);
    std::array<int, kMaxAxes> idx{};
    std::array<double, kMaxAxes> xi{};
    double acc = 0;
    std::size_t flat = 0;
    do {
        for (int a = 0; a < axes; ++a) xi[a] = g.xi_at(idx[a]);
        acc += weight(std::span<const double>(xi.data(), static_cast<std::size_t>(axes))) *
               std::norm(F->samples[flat]);
        ++flat;
    } while (next_index(idx, axes, g.points_per_axis));
    return std::sqrt(acc * cell);
}

} // namespace

double lp_quasinorm(const SampledFunction& f, double p) {
    if (f.domain != Domain::Space) throw ConfigError("lp quasinorm: space-domain input required");
    if (!(p > 0)) throw ConfigError("lp quasinorm: exponent must be positive");
    if (std::isinf(p)) {
        double m = 0;
        for (const cd& v : f.samples) m = std::max(m, std::abs(v));
        return m;
    }
    const double cell = std::pow(f.grid.spacing(), f.grid.axes(f.arity));
    double acc = 0;
    for (const cd& v : f.samples) acc += std::pow(std::abs(v), p);
    return std::pow(acc * cell, 1.0 / p);
}

double sobolev_l2s(const SampledFunction& f, double s) {
    if (s < 0) throw ConfigError("sobolev norm: order must be nonnegative");
    return weighted_l2(f, [s](std::span<const double> xi) {
        double r2 = 0;
        for (double v : xi) r2 += v * v;
        return std::pow(1.0 + kFourPiSq * r2, s);
    });
}

double product_sobolev(const SampledFunction& f, std::span<const double> s_orders) {
    if (static_cast<int>(s_orders.size()) != f.arity)
        throw ConfigError("product sobolev: need one order per block");
    for (double s : s_orders)
        if (s < 0) throw ConfigError("product sobolev: orders must be nonnegative");
    const int d = f.grid.d;
    return weighted_l2(f, [&](std::span<const double> xi) {
        double w = 1;
        for (std::size_t i = 0; i < s_orders.size(); ++i) {
            double r2 = 0;
            for (int l = 0; l < d; ++l) r2 += xi[i * static_cast<std::size_t>(d) + static_cast<std::size_t>(l)] *
                                               xi[i * static_cast<std::size_t>(d) + static_cast<std::size_t>(l)];
            w *= std::pow(1.0 + kFourPiSq * r2, s_orders[i]);
        }
        return w;
    });
}

HormanderTable hormander_norm(const Symbol& m, const Grid& g, double s, int j_lo, int j_hi) {
    if (!m.x_independent) throw ConfigError("hormander norm: symbol must be x-independent");
    if (j_lo > j_hi) throw ConfigError("hormander norm: empty level range");
    std::array<double, kMaxAxes> x0{};
    std::span<const double> x(x0.data(), static_cast<std::size_t>(m.d));
    HormanderTable table;
    for (int j = j_lo; j <= j_hi; ++j) {
        const double v = sobolev_l2s(sample_band(m, g, x, j, -1, false, true), s);
        table.entries.push_back({j, v});
        table.sup = std::max(table.sup, v);
    }
    return table;
}

std::vector<std::vector<double>> default_x_probes(const Grid& g) {
    std::vector<std::vector<double>> probes;
    const double full = std::pow(double(g.points_per_axis), g.d) * g.d;
    if (full <= 16384.0) {
        std::array<int, kMaxAxes> idx{};
        do {
            std::vector<double> x(static_cast<std::size_t>(g.d));
            for (int a = 0; a < g.d; ++a) x[static_cast<std::size_t>(a)] = g.x_at(idx[a]);
            probes.push_back(std::move(x));
        } while (next_index(idx, g.d, g.points_per_axis));
        return probes;
    }
    static constexpr double kAlpha[kMaxAxes] = {0.41421356237309515, 0.7320508075688772,
                                                0.23606797749978969, 0.6457513110645906,
                                                0.3166247903553998,  0.60555127546398929};
    probes.reserve(4096);
    for (int i = 1; i <= 4096; ++i) {
        std::vector<double> x(static_cast<std::size_t>(g.d));
        for (int a = 0; a < g.d; ++a) {
            const double u = std::fmod(i * kAlpha[a], 1.0);
            x[static_cast<std::size_t>(a)] = (u - 0.5) * g.box_edge;
        }
        probes.push_back(std::move(x));
    }
    return probes;
}

SymbolNormReport symbol_norm_s_delta(const Symbol& m, const Grid& g, double s, double delta,
                                     const std::vector<std::vector<double>>& x_probes, int j_max,
                                     bool allow_fd_fallback) {
    if (x_probes.empty()) throw ConfigError("symbol norm: empty probe set");
    if (delta < 0 || delta >= 1) throw ConfigError("symbol norm: delta must lie in [0, 1)");
    if (j_max < 0) throw ConfigError("symbol norm: negative band count");
    for (const auto& x : x_probes)
        if (static_cast<int>(x.size()) != m.d) throw ConfigError("symbol norm: probe dimension != d");

    SymbolNormReport rep;
    rep.s = s;
    rep.delta = delta;
    const std::size_t probe_n = m.x_independent ? 1 : x_probes.size();
    rep.probe_count = probe_n;
    rep.probes_subsampled =
        !m.x_independent && double(x_probes.size()) < std::pow(double(g.points_per_axis), g.d);

    auto piece = [&](std::span<const double> x, int j, bool low, double& a0, double& a1) {
        a0 = sobolev_l2s(sample_band(m, g, x, j, -1, low, allow_fd_fallback), s);
        a1 = 0;
        if (!m.x_independent) {
            const double damp = low ? 1.0 : std::pow(2.0, -double(j) * delta);
            for (int l = 0; l < m.d; ++l)
                a1 += damp * sobolev_l2s(sample_band(m, g, x, j, l, low, allow_fd_fallback), s);
        }
    };

    for (std::size_t pi = 0; pi < probe_n; ++pi) {
        std::span<const double> x(x_probes[pi].data(), x_probes[pi].size());
        double a0 = 0, a1 = 0;
        piece(x, 0, true, a0, a1);
        rep.low_alpha0 = std::max(rep.low_alpha0, a0);
        rep.low_alpha1 = std::max(rep.low_alpha1, a1);
        rep.low = std::max(rep.low, a0 + a1);
    }
    double band_sup = 0;
    for (int j = 0; j <= j_max; ++j) {
        BandContribution bc;
        bc.j = j;
        for (std::size_t pi = 0; pi < probe_n; ++pi) {
            std::span<const double> x(x_probes[pi].data(), x_probes[pi].size());
            double a0 = 0, a1 = 0;
            piece(x, j, false, a0, a1);
            bc.alpha0 = std::max(bc.alpha0, a0);
            bc.alpha1 = std::max(bc.alpha1, a1);
            bc.combined = std::max(bc.combined, a0 + a1);
        }
        band_sup = std::max(band_sup, bc.combined);
        rep.bands.push_back(bc);
    }
    rep.total = rep.low + band_sup;
    return rep;
}

std::vector<double> hardy_scales_local(const Grid& g, int scale_count) {
    if (scale_count < 2) throw ConfigError("hardy quasinorm: need at least two scales");
    std::vector<double> t;
    for (int m = 0; m <= scale_count; ++m) {
        const double tm = std::ldexp(1.0, -m);
        if (tm <= g.box_edge / 2.0) t.push_back(tm);
    }
    if (t.empty()) throw ConfigError("hardy quasinorm: every scale clipped by the box");
    return t;
}

std::vector<double> hardy_scales_global(const Grid& g, int scale_count) {
    if (scale_count < 2) throw ConfigError("hardy quasinorm: need at least two scales");
    std::vector<double> t;
    for (int m = scale_count; m >= -scale_count; --m) {
        const double tm = std::ldexp(1.0, -m);
        if (tm <= g.box_edge / 2.0) t.push_back(tm);
    }
    if (t.empty()) throw ConfigError("hardy quasinorm: every scale clipped by the box");
    return t;
}

SampledFunction mollify(const SampledFunction& f, double t) {
    if (f.domain != Domain::Space) throw ConfigError("mollify: space-domain input required");
    if (!(t > 0)) throw ConfigError("mollify: scale must be positive");
    const Grid& g = f.grid;
    const int axes = g.axes(f.arity);
    static const RadialProfile prof(0.5, 1.0);
    SampledFunction phi = make_function(g, Domain::Space, f.arity);
    std::array<int, kMaxAxes> idx{};
    std::size_t flat = 0;
    double mass = 0;
    do {
        double r2 = 0;
        for (int a = 0; a < axes; ++a) {
            const double v = g.x_at(idx[a]);
            r2 += v * v;
        }
        const double v = prof(std::sqrt(r2) / t);
        phi.samples[flat] = v;
        mass += v;
        ++flat;
    } while (next_index(idx, axes, g.points_per_axis));
    const double cell = std::pow(g.spacing(), axes);
    if (!(mass > 0)) throw NumericError("mollify: mollifier mass vanished");
    const double norm = 1.0 / (mass * cell);
    for (cd& v : phi.samples) v *= norm;
    SampledFunction Ff = forward_transform(f);
    const SampledFunction Fphi = forward_transform(phi);
    for (std::size_t i = 0; i < Ff.samples.size(); ++i) Ff.samples[i] *= Fphi.samples[i];
    return inverse_transform(Ff);
}

SampledFunction scale_maximal_field(const SampledFunction& f, std::span<const double> scales) {
    if (scales.empty()) throw ConfigError("maximal field: empty scale set");
    SampledFunction out = make_function(f.grid, Domain::Space, f.arity);
    for (double t : scales) {
        const SampledFunction m = mollify(f, t);
        for (std::size_t i = 0; i < out.samples.size(); ++i)
            out.samples[i] = std::max(out.samples[i].real(), std::abs(m.samples[i]));
    }
    return out;
}

double hp_quasinorm(const SampledFunction& f, double p, int scale_count) {
    const auto t = hardy_scales_local(f.grid, scale_count);
    return lp_quasinorm(scale_maximal_field(f, t), p);
}

double Hp_quasinorm(const SampledFunction& f, double p, int scale_count) {
    const auto t = hardy_scales_global(f.grid, scale_count);
    return lp_quasinorm(scale_maximal_field(f, t), p);
}

} // namespace mpdo
