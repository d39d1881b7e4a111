#include "mpdo/maximal.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "mpdo/bumps.hpp"
#include "mpdo/errors.hpp"
#include "mpdo/norms.hpp"
#include "mpdo/parallel.hpp"

namespace mpdo {
namespace {

struct BallTable {
    std::vector<std::array<int, kMaxAxes>> offsets; // min-image, sorted by distance
    std::vector<double> dist;
};

BallTable make_ball_table(const Grid& g) {
    const int d = g.d, N = g.points_per_axis;
    BallTable t;
    std::array<int, kMaxAxes> idx{};
    do {
        std::array<int, kMaxAxes> off{};
        double r2 = 0;
        for (int a = 0; a < d; ++a) {
            off[a] = idx[a] - N / 2; // covers [-N/2, N/2)
            const double v = off[a] * g.spacing();
            r2 += v * v;
        }
        t.offsets.push_back(off);
        t.dist.push_back(std::sqrt(r2));
    } while (next_index(idx, d, N));
    std::vector<std::size_t> order(t.offsets.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return t.dist[a] != t.dist[b] ? t.dist[a] < t.dist[b] : t.offsets[a] < t.offsets[b];
    });
    BallTable sorted;
    sorted.offsets.reserve(order.size());
    sorted.dist.reserve(order.size());
    for (std::size_t i : order) {
        sorted.offsets.push_back(t.offsets[i]);
        sorted.dist.push_back(t.dist[i]);
    }
    return sorted;
}

void require_single_block(const SampledFunction& f, const char* who) {
    if (f.domain != Domain::Space || f.arity != 1)
        throw ConfigError(std::string(who) + ": single-block space-domain input required");
}

std::size_t wrap_flat(const Grid& g, const std::array<int, kMaxAxes>& idx,
                      const std::array<int, kMaxAxes>& off) {
    const int N = g.points_per_axis;
    std::size_t flat = 0;
    for (int a = 0; a < g.d; ++a) {
        const int q = ((idx[a] + off[a]) % N + N) % N;
        flat = flat * static_cast<std::size_t>(N) + static_cast<std::size_t>(q);
    }
    return flat;
}

} // namespace

Weight make_weight(const Grid& g, int decay, int scale) {
    if (decay <= g.d) throw ConfigError("weight: decay exponent must exceed the dimension");
    Weight w;
    w.decay = decay;
    w.scale = scale;
    w.samples = make_function(g, Domain::Space, 1);
    std::array<int, kMaxAxes> idx{};
    std::size_t flat = 0;
    double mass = 0;
    const double amp = std::pow(2.0, double(scale) * g.d);
    do {
        double r2 = 0;
        for (int a = 0; a < g.d; ++a) {
            const double v = std::ldexp(g.x_at(idx[a]), scale);
            r2 += v * v;
        }
        const double v = amp * std::pow(1.0 + std::sqrt(r2), -double(decay));
        w.samples.samples[flat] = v;
        mass += v;
        ++flat;
    } while (next_index(idx, g.d, g.points_per_axis));
    w.mass = mass * std::pow(g.spacing(), g.d);
    return w;
}

SampledFunction hardy_littlewood(const SampledFunction& f) {
    require_single_block(f, "hardy-littlewood");
    const Grid& g = f.grid;
    const int N = g.points_per_axis;
    const BallTable ball = make_ball_table(g);

    std::vector<double> absf(f.samples.size());
    for (std::size_t i = 0; i < f.samples.size(); ++i) absf[i] = std::abs(f.samples[i]);

    std::vector<double> radii;
    for (int m = 0; std::ldexp(1.0, m) <= double(N); ++m) radii.push_back(g.spacing() * std::ldexp(1.0, m));

    // nested balls: one sorted pass per x, snapshots at each radius boundary
    std::vector<std::size_t> boundary;
    {
        std::size_t pos = 0;
        for (double rad : radii) {
            while (pos < ball.dist.size() && ball.dist[pos] <= rad + 1e-12) ++pos;
            boundary.push_back(pos);
        }
    }

    SampledFunction out = make_function(g, Domain::Space, 1);
    parallel_for(out.samples.size(), [&](std::size_t xflat) {
        std::array<int, kMaxAxes> idx{};
        std::size_t rem = xflat;
        for (int a = g.d - 1; a >= 0; --a) {
            idx[a] = static_cast<int>(rem % static_cast<std::size_t>(N));
            rem /= static_cast<std::size_t>(N);
        }
        double acc = 0, best = 0;
        std::size_t pos = 0;
        for (std::size_t b : boundary) {
            for (; pos < b; ++pos) acc += absf[wrap_flat(g, idx, ball.offsets[pos])];
            if (pos > 0) best = std::max(best, acc / double(pos));
        }
        out.samples[xflat] = best;
    });
    return out;
}

SampledFunction m_r(const SampledFunction& f, double r) {
    if (!(r > 0)) throw ConfigError("maximal m_r: exponent must be positive");
    require_single_block(f, "maximal m_r");
    SampledFunction p = f;
    for (cd& v : p.samples) v = std::pow(std::abs(v), r);
    SampledFunction m = hardy_littlewood(p);
    for (cd& v : m.samples) v = std::pow(v.real(), 1.0 / r);
    return m;
}

PeetreResult peetre_ratio(const SampledFunction& g, double r, double band_radius) {
    if (!(r > 0)) throw ConfigError("peetre ratio: exponent must be positive");
    if (!(band_radius > 0)) throw ConfigError("peetre ratio: band radius must be positive");
    require_single_block(g, "peetre ratio");
    const Grid& gr = g.grid;

    const SampledFunction F = forward_transform(g);
    double fmax = 0;
    for (const cd& v : F.samples) fmax = std::max(fmax, std::abs(v));
    {
        std::array<int, kMaxAxes> idx{};
        std::size_t flat = 0;
        do {
            double r2 = 0;
            for (int a = 0; a < gr.d; ++a) {
                const double v = gr.xi_at(idx[a]);
                r2 += v * v;
            }
            if (std::sqrt(r2) > band_radius + 1e-12 && std::abs(F.samples[flat]) > 1e-12 * fmax)
                throw ConfigError("peetre ratio: input spectrum leaks outside the declared band");
            ++flat;
        } while (next_index(idx, gr.d, gr.points_per_axis));
    }

    const SampledFunction denom = m_r(g, r);
    const BallTable ball = make_ball_table(gr);
    std::vector<double> decay(ball.offsets.size());
    for (std::size_t i = 0; i < ball.offsets.size(); ++i)
        decay[i] = std::pow(1.0 + band_radius * ball.dist[i], -double(gr.d) / r);

    PeetreResult res;
    res.field = make_function(gr, Domain::Space, 1);
    const int N = gr.points_per_axis;
    parallel_for(res.field.samples.size(), [&](std::size_t xflat) {
        std::array<int, kMaxAxes> idx{};
        std::size_t rem = xflat;
        for (int a = gr.d - 1; a >= 0; --a) {
            idx[a] = static_cast<int>(rem % static_cast<std::size_t>(N));
            rem /= static_cast<std::size_t>(N);
        }
        double sup = 0;
        for (std::size_t i = 0; i < ball.offsets.size(); ++i) {
            // g(x - z): subtract the offset
            std::array<int, kMaxAxes> neg{};
            for (int a = 0; a < gr.d; ++a) neg[a] = -ball.offsets[i][a];
            sup = std::max(sup, std::abs(g.samples[wrap_flat(gr, idx, neg)]) * decay[i]);
        }
        const double dn = denom.samples[xflat].real();
        res.field.samples[xflat] = dn > 0 ? sup / dn : 0.0;
    });
    for (const cd& v : res.field.samples) res.max_ratio = std::max(res.max_ratio, v.real());
    return res;
}

SampledFunction weighted_smooth(const SampledFunction& f, const Weight& w) {
    require_single_block(f, "weighted smooth");
    if (!(w.samples.grid == f.grid)) throw ConfigError("weighted smooth: weight grid mismatch");
    SampledFunction absf = f;
    for (cd& v : absf.samples) v = std::abs(v);
    SampledFunction Fa = forward_transform(absf);
    const SampledFunction Fw = forward_transform(w.samples);
    for (std::size_t i = 0; i < Fa.samples.size(); ++i) Fa.samples[i] *= Fw.samples[i];
    SampledFunction out = inverse_transform(Fa);
    // convolution of nonnegative fields; rounding can leave tiny negative dust
    for (cd& v : out.samples) v = std::max(v.real(), 0.0);
    return out;
}

GrowthScan average_growth_scan(const SampledFunction& f, int k, int j, int m_max, double r,
                               double s, const Weight* smooth_weight) {
    require_single_block(f, "growth scan");
    if (!(r > 0) || !(s > 0)) throw ConfigError("growth scan: exponents must be positive");
    if (m_max < 1) throw ConfigError("growth scan: need at least two scan levels");
    const Grid& g = f.grid;

    SampledFunction Ff = forward_transform(f);
    {
        std::array<int, kMaxAxes> idx{};
        std::size_t flat = 0;
        do {
            double r2 = 0;
            for (int a = 0; a < g.d; ++a) {
                const double v = g.xi_at(idx[a]);
                r2 += v * v;
            }
            Ff.samples[flat] *= bumps().phi_hat_k(k, std::sqrt(r2));
            ++flat;
        } while (next_index(idx, g.d, g.points_per_axis));
    }
    const SampledFunction filtered = inverse_transform(Ff);

    SampledFunction field; // nonnegative comparison field
    if (smooth_weight) {
        field = weighted_smooth(filtered, *smooth_weight);
    } else {
        field = filtered;
        for (cd& v : field.samples) v = std::abs(v);
    }
    const SampledFunction denom = m_r(field, r);

    const BallTable ball = make_ball_table(g);
    const double cell = std::pow(g.spacing(), g.d);
    const int N = g.points_per_axis;

    GrowthScan scan;
    std::vector<double> ms;
    for (int M = 0; M <= m_max; ++M) {
        const double tau = std::ldexp(1.0, M - j);
        if (tau < g.spacing() || tau > g.box_edge)
            throw ConfigError("growth scan: scan radius leaves the resolvable range");
        std::size_t count = 0;
        while (count < ball.dist.size() && ball.dist[count] <= tau + 1e-12) ++count;

        std::vector<double> per_x(field.samples.size(), 0.0);
        parallel_for(field.samples.size(), [&](std::size_t xflat) {
            std::array<int, kMaxAxes> idx{};
            std::size_t rem = xflat;
            for (int a = g.d - 1; a >= 0; --a) {
                idx[a] = static_cast<int>(rem % static_cast<std::size_t>(N));
                rem /= static_cast<std::size_t>(N);
            }
            double acc = 0;
            for (std::size_t i = 0; i < count; ++i)
                acc += std::pow(field.samples[wrap_flat(g, idx, ball.offsets[i])].real(), s);
            const double num = std::pow(acc * cell / std::pow(tau, g.d), 1.0 / s);
            const double dn = denom.samples[xflat].real();
            per_x[xflat] = dn > 0 ? num / dn : 0.0;
        });
        const double e = *std::max_element(per_x.begin(), per_x.end());
        if (!(e > 0)) throw NumericError("growth scan: degenerate ratio field");
        scan.log2_values.push_back(std::log2(e));
        ms.push_back(double(M));
    }

    double mx = 0, my = 0;
    for (std::size_t i = 0; i < ms.size(); ++i) {
        mx += ms[i];
        my += scan.log2_values[i];
    }
    mx /= double(ms.size());
    my /= double(ms.size());
    double num = 0, den = 0;
    for (std::size_t i = 0; i < ms.size(); ++i) {
        num += (ms[i] - mx) * (scan.log2_values[i] - my);
        den += (ms[i] - mx) * (ms[i] - mx);
    }
    scan.slope = num / den;
    return scan;
}

} // namespace mpdo
