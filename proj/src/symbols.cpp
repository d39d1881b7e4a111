#include "mpdo/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "mpdo/errors.hpp"
#include "mpdo/parallel.hpp"

namespace mpdo {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) s += a[i] * b[i];
    return s;
}

// Annulus block window: 0 outside (1/2, 2), 1 on [3/4, 3/2], smooth edges.
double annulus_window(double r) {
    static const RadialProfile outer(1.5, 2.0);
    static const RadialProfile inner(0.5, 0.75);
    return (1.0 - inner(r)) * outer(r);
}

// Largest dyadic block the grid can represent on the full frequency range.
int max_level(const Grid& g) {
    const double top = std::sqrt(double(g.axes(g.n))) * g.max_frequency();
    return static_cast<int>(std::ceil(std::log2(top))) + 1;
}

// Registration gate: finite values over a deterministic sample of the
// grid's range, plus a spot check of the declared x-independence.
void validate_symbol(const Symbol& sym, const Grid& g) {
    const int nd = g.axes(sym.n);
    std::array<double, kMaxAxes> xi{};
    std::array<double, kMaxAxes> x{};
    const double fmax = g.max_frequency();
    std::mt19937_64 eng(0x5bd1e995u);
    auto unit = [&] { return (eng() >> 11) * 0x1.0p-53; };
    for (int trial = 0; trial < 512; ++trial) {
        for (int a = 0; a < nd; ++a) xi[a] = (2 * unit() - 1) * fmax;
        for (int a = 0; a < sym.d; ++a) x[a] = (unit() - 0.5) * g.box_edge;
        const cd v = sym.eval(std::span<const double>(x.data(), sym.d),
                              std::span<const double>(xi.data(), nd));
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()) || std::abs(v) > 1e100)
            throw ConfigError("symbol " + sym.name + ": non-finite or unbounded value at a sample point");
        if (sym.x_independent && trial % 16 == 0) {
            std::array<double, kMaxAxes> x2{};
            for (int a = 0; a < sym.d; ++a) x2[a] = 0.37 * g.box_edge;
            const cd v2 = sym.eval(std::span<const double>(x2.data(), sym.d),
                                   std::span<const double>(xi.data(), nd));
            if (v2 != v)
                throw ConfigError("symbol " + sym.name + ": declared x-independent but varies in x");
        }
    }
}

// x-oscillation factor shared by the dyadic-block symbols: value in [0, 1]
// with first-derivative magnitude growing like 2^{k delta}.
double x_factor_value(int k, double delta, double x1) {
    return 0.5 * (1.0 + std::sin(std::pow(2.0, k * delta) * x1));
}
double x_factor_deriv(int k, double delta, double x1) {
    const double w = std::pow(2.0, k * delta);
    return 0.5 * w * std::cos(w * x1);
}

} // namespace

const MihlinRow& MihlinReport::row(int alpha, int beta) const {
    for (const auto& r : rows)
        if (r.alpha == alpha && r.beta == beta) return r;
    throw ConfigError("mihlin report: no such derivative order row");
}

Symbol constant_symbol(const Grid& g, cd c) {
    Symbol s;
    s.name = "constant";
    s.params = {{"re", c.real()}, {"im", c.imag()}};
    s.x_independent = true;
    s.d = g.d;
    s.n = g.n;
    s.eval = [c](std::span<const double>, std::span<const double>) { return c; };
    for (int l = 0; l < g.d; ++l)
        s.dx.emplace_back([](std::span<const double>, std::span<const double>) { return cd{0, 0}; });
    validate_symbol(s, g);
    return s;
}

Symbol translation_symbol(const Grid& g, std::vector<double> a, int block) {
    if (block < 1 || block > g.n) throw ConfigError("translation symbol: block out of range");
    if (static_cast<int>(a.size()) != g.d) throw ConfigError("translation symbol: shift size != d");
    Symbol s;
    s.name = "translation";
    for (std::size_t i = 0; i < a.size(); ++i) s.params["a" + std::to_string(i + 1)] = a[i];
    s.params["block"] = block;
    s.x_independent = true;
    s.d = g.d;
    s.n = g.n;
    const int off = (block - 1) * g.d;
    const int d = g.d;
    s.eval = [a, off, d](std::span<const double>, std::span<const double> xiv) {
        double phase = 0;
        for (int l = 0; l < d; ++l) phase += a[static_cast<std::size_t>(l)] * xiv[off + l];
        return std::polar(1.0, -kTwoPi * phase);
    };
    for (int l = 0; l < d; ++l)
        s.dx.emplace_back([](std::span<const double>, std::span<const double>) { return cd{0, 0}; });
    validate_symbol(s, g);
    return s;
}

Symbol modulation_symbol(const Grid& g, std::vector<double> c) {
    if (static_cast<int>(c.size()) != g.d) throw ConfigError("modulation symbol: direction size != d");
    Symbol s;
    s.name = "modulation";
    for (std::size_t i = 0; i < c.size(); ++i) s.params["c" + std::to_string(i + 1)] = c[i];
    s.x_independent = false;
    s.d = g.d;
    s.n = g.n;
    auto base = [c](std::span<const double> x, std::span<const double>) {
        return std::polar(1.0, kTwoPi * dot(c, x));
    };
    s.eval = base;
    for (int l = 0; l < g.d; ++l) {
        const double cl = c[static_cast<std::size_t>(l)];
        s.dx.emplace_back([base, cl](std::span<const double> x, std::span<const double> xiv) {
            return cd{0, kTwoPi * cl} * base(x, xiv);
        });
    }
    validate_symbol(s, g);
    return s;
}

Symbol compact_phase_symbol(const Grid& g) {
    Symbol s;
    s.name = "compact_phase";
    s.x_independent = false;
    s.d = g.d;
    s.n = g.n;
    const int d = g.d;
    static const RadialProfile cut(0.5, 1.0);
    auto joint_radius = [d](std::span<const double> x, std::span<const double> xiv) {
        double s2 = 0;
        for (int l = 0; l < d; ++l) s2 += x[l] * x[l];
        for (double v : xiv) s2 += v * v;
        return std::sqrt(s2);
    };
    auto phase_of = [](std::span<const double> xiv) {
        double r2 = 0;
        for (double v : xiv) r2 += v * v;
        return 1.0 / (1.0 + r2);
    };
    s.eval = [=](std::span<const double> x, std::span<const double> xiv) {
        const double w = cut(joint_radius(x, xiv));
        if (w == 0.0) return cd{0, 0};
        const double xr = std::sqrt(dot(x, x));
        return w * std::polar(1.0, std::pow(xr, 1.5) * phase_of(xiv));
    };
    for (int l = 0; l < d; ++l) {
        s.dx.emplace_back([=](std::span<const double> x, std::span<const double> xiv) -> cd {
            const double R = joint_radius(x, xiv);
            const double w = cut(R);
            const double dw = R > 0 ? cut.derivative(R) * x[l] / R : 0.0;
            if (w == 0.0 && dw == 0.0) return cd{0, 0};
            const double xr = std::sqrt(dot(x, x));
            const double p = phase_of(xiv);
            const cd osc = std::polar(1.0, std::pow(xr, 1.5) * p);
            const double dphase = xr > 0 ? 1.5 * x[l] / std::sqrt(xr) * p : 0.0;
            return (dw + cd{0, 1} * (w * dphase)) * osc;
        });
    }
    validate_symbol(s, g);
    return s;
}

Symbol anchored_singularity_symbol(const Grid& g, double gamma, double delta,
                                   std::vector<double> anchor) {
    if (!(gamma > 0)) throw ConfigError("anchored singularity symbol: gamma must be positive");
    const int nd = g.axes(g.n);
    if (anchor.empty()) {
        anchor.assign(static_cast<std::size_t>(nd), 0.0);
        anchor[0] = 1.0;
    }
    if (static_cast<int>(anchor.size()) != nd)
        throw ConfigError("anchored singularity symbol: anchor size != n*d");
    const double ar = radius_of(anchor);
    if (!(ar > 0.5 && ar < 2.0))
        throw ConfigError("anchored singularity symbol: anchor must sit inside the annulus 1/2 < |a| < 2");

    Symbol s;
    s.name = "anchored_singularity";
    s.params = {{"gamma", gamma}, {"delta", delta}, {"k_max", double(max_level(g))}};
    s.x_independent = false;
    s.d = g.d;
    s.n = g.n;
    const int kmax = max_level(g);
    auto block_sum = [=](std::span<const double> x, std::span<const double> xiv, bool deriv) {
        double acc = 0;
        for (int k = 1; k <= kmax; ++k) {
            const double sc = std::ldexp(1.0, -k);
            double r2 = 0, d2 = 0;
            for (int a = 0; a < nd; ++a) {
                const double u = sc * xiv[a];
                r2 += u * u;
                const double v = u - anchor[static_cast<std::size_t>(a)];
                d2 += v * v;
            }
            const double w = annulus_window(std::sqrt(r2));
            if (w == 0.0) continue;
            const double xf = deriv ? x_factor_deriv(k, delta, x[0]) : x_factor_value(k, delta, x[0]);
            acc += w * xf * std::pow(std::sqrt(d2), gamma);
        }
        return acc;
    };
    s.eval = [block_sum](std::span<const double> x, std::span<const double> xiv) {
        return cd{block_sum(x, xiv, false), 0};
    };
    s.dx.emplace_back([block_sum](std::span<const double> x, std::span<const double> xiv) {
        return cd{block_sum(x, xiv, true), 0};
    });
    for (int l = 1; l < g.d; ++l)
        s.dx.emplace_back([](std::span<const double>, std::span<const double>) { return cd{0, 0}; });
    validate_symbol(s, g);
    return s;
}

Symbol drifting_singularity_symbol(const Grid& g, double gamma, double delta) {
    if (!(gamma > 1)) throw ConfigError("drifting singularity symbol: gamma must exceed 1");
    const int nd = g.axes(g.n);
    Symbol s;
    s.name = "drifting_singularity";
    s.params = {{"gamma", gamma}, {"delta", delta}, {"k_max", double(max_level(g))}};
    s.x_independent = false;
    s.d = g.d;
    s.n = g.n;
    const int kmax = max_level(g);
    // anchor field: (1 + sin(2^{k delta} x_1)/4) e_1, radius in [3/4, 5/4]
    s.eval = [=](std::span<const double> x, std::span<const double> xiv) {
        double acc = 0;
        for (int k = 1; k <= kmax; ++k) {
            const double sc = std::ldexp(1.0, -k);
            double r2 = 0;
            for (int a = 0; a < nd; ++a) r2 += sc * xiv[a] * sc * xiv[a];
            const double w = annulus_window(std::sqrt(r2));
            if (w == 0.0) continue;
            const double ar = 1.0 + 0.25 * std::sin(std::pow(2.0, k * delta) * x[0]);
            double d2 = 0;
            for (int a = 0; a < nd; ++a) {
                const double v = sc * xiv[a] - (a == 0 ? ar : 0.0);
                d2 += v * v;
            }
            acc += w * x_factor_value(k, delta, x[0]) * std::pow(std::sqrt(d2), gamma);
        }
        return cd{acc, 0};
    };
    s.dx.emplace_back([=](std::span<const double> x, std::span<const double> xiv) {
        double acc = 0;
        for (int k = 1; k <= kmax; ++k) {
            const double sc = std::ldexp(1.0, -k);
            double r2 = 0;
            for (int a = 0; a < nd; ++a) r2 += sc * xiv[a] * sc * xiv[a];
            const double w = annulus_window(std::sqrt(r2));
            if (w == 0.0) continue;
            const double wfreq = std::pow(2.0, k * delta);
            const double ar = 1.0 + 0.25 * std::sin(wfreq * x[0]);
            const double dar = 0.25 * wfreq * std::cos(wfreq * x[0]);
            double d2 = 0;
            for (int a = 0; a < nd; ++a) {
                const double v = sc * xiv[a] - (a == 0 ? ar : 0.0);
                d2 += v * v;
            }
            const double dist = std::sqrt(d2);
            const double v1 = sc * xiv[0] - ar;
            // d/dx1 of |v|^gamma = gamma |v|^{gamma-2} <v, dv/dx1>, dv/dx1 = -dar e_1
            const double dpow = dist > 0 ? -gamma * std::pow(dist, gamma - 2.0) * v1 * dar : 0.0;
            acc += w * (x_factor_deriv(k, delta, x[0]) * std::pow(dist, gamma) +
                        x_factor_value(k, delta, x[0]) * dpow);
        }
        return cd{acc, 0};
    });
    for (int l = 1; l < g.d; ++l)
        s.dx.emplace_back([](std::span<const double>, std::span<const double>) { return cd{0, 0}; });
    validate_symbol(s, g);
    return s;
}

Symbol dyadic_chirp_symbol(const Grid& g, double a, double b, double delta, bool x_factor,
                           int k_min) {
    if (!(a > 0) || !(b >= 0)) throw ConfigError("dyadic chirp symbol: need a > 0 and b >= 0");
    Symbol s;
    s.name = "dyadic_chirp";
    s.params = {{"a", a},       {"b", b},           {"delta", delta},
                {"x_factor", x_factor ? 1. : 0.},   {"k_min", double(k_min)},
                {"k_max", double(max_level(g))}};
    s.x_independent = !x_factor;
    s.d = g.d;
    s.n = g.n;
    const int kmax = max_level(g);
    auto window_sum = [=](std::span<const double> x, std::span<const double> xiv, bool deriv) {
        double r2 = 0;
        for (double v : xiv) r2 += v * v;
        const double R = std::sqrt(r2);
        double acc = 0;
        for (int k = k_min; k <= kmax; ++k) {
            const double w = annulus_window(std::ldexp(R, -k));
            if (w == 0.0) continue;
            double xf = 1.0;
            if (x_factor) xf = deriv ? x_factor_deriv(k, delta, x[0]) : x_factor_value(k, delta, x[0]);
            else if (deriv) xf = 0.0;
            acc += w * xf;
        }
        return std::pair<double, double>{acc, R};
    };
    s.eval = [=](std::span<const double> x, std::span<const double> xiv) -> cd {
        auto [wsum, R] = window_sum(x, xiv, false);
        if (wsum == 0.0) return cd{0, 0};
        return wsum * std::pow(R, -b) * std::polar(1.0, std::pow(R, a));
    };
    s.dx.emplace_back([=](std::span<const double> x, std::span<const double> xiv) -> cd {
        auto [wsum, R] = window_sum(x, xiv, true);
        if (wsum == 0.0) return cd{0, 0};
        return wsum * std::pow(R, -b) * std::polar(1.0, std::pow(R, a));
    });
    for (int l = 1; l < g.d; ++l)
        s.dx.emplace_back([](std::span<const double>, std::span<const double>) { return cd{0, 0}; });
    validate_symbol(s, g);
    return s;
}

Symbol chirp_symbol(const Grid& g, double a) {
    if (!(a > 0)) throw ConfigError("chirp symbol: exponent must be positive");
    Symbol s;
    s.name = "chirp";
    s.params = {{"a", a}};
    s.x_independent = true;
    s.d = g.d;
    s.n = g.n;
    s.eval = [a](std::span<const double>, std::span<const double> xiv) {
        double r2 = 0;
        for (double v : xiv) r2 += v * v;
        return std::polar(1.0, std::pow(std::sqrt(r2), a));
    };
    for (int l = 0; l < g.d; ++l)
        s.dx.emplace_back([](std::span<const double>, std::span<const double>) { return cd{0, 0}; });
    validate_symbol(s, g);
    return s;
}

Symbol coifman_meyer_symbol(const Grid& g, double eps) {
    if (!(eps > 0)) throw ConfigError("coifman-meyer symbol: smoothing radius must be positive");
    Symbol s;
    s.name = "coifman_meyer";
    s.params = {{"eps", eps}};
    s.x_independent = true;
    s.d = g.d;
    s.n = g.n;
    const int d = g.d, n = g.n;
    const RadialProfile inner(eps / 2, eps);
    s.eval = [inner, d, n](std::span<const double>, std::span<const double> xiv) -> cd {
        double r2 = 0;
        for (double v : xiv) r2 += v * v;
        if (r2 == 0.0) return cd{0, 0};
        const double rise = 1.0 - inner(std::sqrt(r2));
        if (rise == 0.0) return cd{0, 0};
        double q;
        if (n >= 2) {
            double dp = 0;
            for (int l = 0; l < d; ++l) dp += xiv[l] * xiv[d + l];
            q = dp / r2;
        } else {
            q = xiv[0] / std::sqrt(r2);
        }
        return cd{rise * q, 0};
    };
    for (int l = 0; l < g.d; ++l)
        s.dx.emplace_back([](std::span<const double>, std::span<const double>) { return cd{0, 0}; });
    validate_symbol(s, g);
    return s;
}

namespace {

// Central stencils of order 1..3 for g(t) around t = 0 with step h.
template <class G>
cd stencil(const G& fn, int order, double h) {
    switch (order) {
        case 1: return (fn(h) - fn(-h)) / (2 * h);
        case 2: return (fn(h) - 2.0 * fn(0.0) + fn(-h)) / (h * h);
        default: return (fn(2 * h) - 2.0 * fn(h) + 2.0 * fn(-h) - fn(-2 * h)) / (2 * h * h * h);
    }
}

// Halve the step until two successive estimates agree to 0.5%; fall back to
// the closest pair when oscillatory cancellation sets a noise floor first.
template <class G>
cd refine_diff(const G& fn, int order, double h0, int max_halve) {
    if (!(h0 > 0) || !std::isfinite(h0)) throw NumericError("difference step underflow");
    cd prev = stencil(fn, order, h0);
    cd best = prev;
    double best_gap = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= max_halve; ++i) {
        const double h = std::ldexp(h0, -i);
        if (h == 0.0) throw NumericError("difference step underflow");
        const cd cur = stencil(fn, order, h);
        const double gap = std::abs(cur - prev);
        if (gap <= 5e-3 * std::abs(cur) + 1e-12) return cur;
        if (gap < best_gap) {
            best_gap = gap;
            best = cur;
        }
        prev = cur;
    }
    return best;
}

double ls_slope(const std::vector<std::pair<double, double>>& pts) {
    double mx = 0, my = 0;
    for (auto& p : pts) {
        mx += p.first;
        my += p.second;
    }
    mx /= double(pts.size());
    my /= double(pts.size());
    double num = 0, den = 0;
    for (auto& p : pts) {
        num += (p.first - mx) * (p.second - my);
        den += (p.first - mx) * (p.first - mx);
    }
    return den > 0 ? num / den : 0.0;
}

} // namespace

MihlinReport mihlin_estimate(const Symbol& sym, const Grid& g, double rho, double delta,
                             double order, int max_beta, int probes_per_shell,
                             std::uint64_t seed) {
    if (max_beta < 0 || max_beta > 3)
        throw ConfigError("mihlin estimate: max_beta must lie in 0..3");
    if (probes_per_shell < 1) throw ConfigError("mihlin estimate: probe set empty");
    const int nd = g.axes(sym.n);
    const double top = std::sqrt(double(nd)) * g.max_frequency();

    std::vector<double> shell_radius;
    for (int s = 0; std::ldexp(1.3, s) <= top; ++s) shell_radius.push_back(std::ldexp(1.0, s));
    if (shell_radius.empty()) throw ConfigError("mihlin estimate: probe set empty (grid range below the first shell)");

    struct Probe {
        std::array<double, kMaxAxes> xi{};
        std::array<double, kMaxAxes> x{};
        double R = 0;
        int shell = 0;
    };
    std::vector<Probe> probes;
    std::mt19937_64 eng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto unit = [&] { return (eng() >> 11) * 0x1.0p-53; };
    const int x_probe_count = sym.x_independent ? 1 : 4;
    for (std::size_t sidx = 0; sidx < shell_radius.size(); ++sidx) {
        for (int p = 0; p < probes_per_shell; ++p) {
            Probe pr;
            pr.shell = static_cast<int>(sidx);
            double dir2 = 0;
            for (int a = 0; a < nd; ++a) {
                pr.xi[a] = gauss(eng);
                dir2 += pr.xi[a] * pr.xi[a];
            }
            const double dirn = std::sqrt(std::max(dir2, 1e-300));
            pr.R = shell_radius[sidx] * (0.85 + 0.3 * unit());
            for (int a = 0; a < nd; ++a) pr.xi[a] *= pr.R / dirn;
            if (p % x_probe_count != 0)
                for (int a = 0; a < sym.d; ++a) pr.x[a] = (unit() - 0.5) * g.box_edge;
            probes.push_back(pr);
        }
    }

    const double h_x0 = g.box_edge / (4.0 * g.points_per_axis);
    const int rows_n = 2 * (max_beta + 1);
    // per probe, per row: measured magnitude
    std::vector<std::vector<double>> mag(probes.size(), std::vector<double>(rows_n, 0.0));

    auto base_value = [&](const Probe& pr, std::array<double, kMaxAxes> xi, int xl) -> cd {
        std::span<const double> xs(pr.x.data(), static_cast<std::size_t>(sym.d));
        std::span<const double> xis(xi.data(), static_cast<std::size_t>(nd));
        if (xl < 0) return sym.eval(xs, xis);
        if (!sym.dx.empty()) return sym.dx[static_cast<std::size_t>(xl)](xs, xis);
        auto fx = [&](double t) {
            std::array<double, kMaxAxes> xt = pr.x;
            xt[xl] += t;
            return sym.eval(std::span<const double>(xt.data(), static_cast<std::size_t>(sym.d)), xis);
        };
        return refine_diff(fx, 1, h_x0, 20);
    };

    parallel_for(probes.size(), [&](std::size_t pi) {
        const Probe& pr = probes[pi];
        const double h_xi0 = std::ldexp(g.freq_spacing() / 4.0, pr.shell);
        for (int a_ord = 0; a_ord <= 1; ++a_ord) {
            if (a_ord == 1 && sym.x_independent) continue;
            const int xl_max = a_ord == 0 ? 0 : sym.d;
            for (int xl = a_ord == 0 ? -1 : 0; xl < xl_max; ++xl) {
                for (int b_ord = 0; b_ord <= max_beta; ++b_ord) {
                    double best = 0;
                    if (b_ord == 0) {
                        best = std::abs(base_value(pr, pr.xi, xl));
                    } else {
                        for (int ax = 0; ax < nd; ++ax) {
                            auto fxi = [&](double t) {
                                std::array<double, kMaxAxes> xt = pr.xi;
                                xt[ax] += t;
                                return base_value(pr, xt, xl);
                            };
                            best = std::max(best, std::abs(refine_diff(fxi, b_ord, h_xi0, 24)));
                        }
                    }
                    auto& slot = mag[pi][static_cast<std::size_t>(a_ord * (max_beta + 1) + b_ord)];
                    slot = std::max(slot, best);
                }
            }
        }
    });

    MihlinReport rep;
    rep.rho = rho;
    rep.delta = delta;
    rep.order = order;
    for (int a_ord = 0; a_ord <= 1; ++a_ord) {
        for (int b_ord = 0; b_ord <= max_beta; ++b_ord) {
            MihlinRow row;
            row.alpha = a_ord;
            row.beta = b_ord;
            row.allowed_exponent = order + delta * a_ord - rho * b_ord;
            const std::size_t ri = static_cast<std::size_t>(a_ord * (max_beta + 1) + b_ord);
            if (a_ord == 1 && sym.x_independent) {
                row.fitted_exponent = row.allowed_exponent;
                rep.rows.push_back(row);
                continue;
            }
            std::vector<double> shell_max(shell_radius.size(), 0.0);
            double overall = 0;
            for (std::size_t pi = 0; pi < probes.size(); ++pi) {
                const double v = mag[pi][ri];
                shell_max[static_cast<std::size_t>(probes[pi].shell)] =
                    std::max(shell_max[static_cast<std::size_t>(probes[pi].shell)], v);
                overall = std::max(overall, v);
                const double weighted = v * std::pow(1.0 + probes[pi].R, -row.allowed_exponent);
                if (weighted > row.constant) {
                    row.constant = weighted;
                    row.witness_xi = probes[pi].xi;
                    row.witness_value = v;
                }
            }
            const double floor = 1e-13 * std::max(1.0, overall);
            std::vector<std::pair<double, double>> pts;
            for (std::size_t sidx = 0; sidx < shell_radius.size(); ++sidx)
                if (shell_max[sidx] > floor)
                    pts.emplace_back(std::log2(1.0 + shell_radius[sidx]), std::log2(shell_max[sidx]));
            row.fitted_exponent = pts.size() >= 2 ? ls_slope(pts) : row.allowed_exponent;
            row.violated = row.fitted_exponent > row.allowed_exponent + rep.tolerance;
            rep.rows.push_back(row);
        }
    }
    return rep;
}

} // namespace mpdo
