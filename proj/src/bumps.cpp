#include "mpdo/bumps.hpp"

#include <algorithm>
#include <array>
#include <numbers>
#include <random>
#include <string>

#include "mpdo/errors.hpp"

namespace mpdo {
namespace {

double step_integrand(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    return std::exp(-1.0 / t) * std::exp(-1.0 / (1.0 - t));
}

double adaptive_simpson(double a, double b, double fa, double fm, double fb,
                        double whole, double eps, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = step_integrand(lm), frm = step_integrand(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * eps)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(a, m, fa, flm, fm, left, eps / 2, depth - 1) +
           adaptive_simpson(m, b, fm, frm, fb, right, eps / 2, depth - 1);
}

double integrate_step(double a, double b, double eps) {
    const double fa = step_integrand(a), fb = step_integrand(b);
    const double fm = step_integrand(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(a, b, fa, fm, fb, whole, eps, 40);
}

// Normalized cumulative integral of the bump integrand: S(0)=0, S(1)=1,
// dense nodes with exact slopes for cubic Hermite evaluation.
struct StepTable {
    static constexpr int M = 4096;
    std::array<double, M + 1> val{};
    std::array<double, M + 1> slope{};

    StepTable() {
        double acc = 0.0;
        val[0] = 0.0;
        for (int i = 1; i <= M; ++i) {
            acc += integrate_step((i - 1) / double(M), i / double(M), 1e-16);
            val[i] = acc;
        }
        const double total = acc;
        for (int i = 0; i <= M; ++i) {
            val[i] /= total;
            slope[i] = step_integrand(i / double(M)) / total;
        }
        val[M] = 1.0;
    }

    double operator()(double u) const {
        if (u <= 0.0) return 0.0;
        if (u >= 1.0) return 1.0;
        const double x = u * M;
        int k = std::min(static_cast<int>(x), M - 1);
        const double t = x - k, h = 1.0 / M;
        const double t2 = t * t, t3 = t2 * t;
        double y = val[k] * (2 * t3 - 3 * t2 + 1) + slope[k] * h * (t3 - 2 * t2 + t) +
                   val[k + 1] * (-2 * t3 + 3 * t2) + slope[k + 1] * h * (t3 - t2);
        return std::clamp(y, 0.0, 1.0);
    }

    double deriv(double u) const {
        if (u <= 0.0 || u >= 1.0) return 0.0;
        const double x = u * M;
        int k = std::min(static_cast<int>(x), M - 1);
        const double t = x - k, h = 1.0 / M;
        const double t2 = t * t;
        double dy = val[k] * (6 * t2 - 6 * t) + slope[k] * h * (3 * t2 - 4 * t + 1) +
                    val[k + 1] * (-6 * t2 + 6 * t) + slope[k + 1] * h * (3 * t2 - 2 * t);
        return dy * M;
    }
};

const StepTable& step_table() {
    static const StepTable table;
    return table;
}

} // namespace

RadialProfile::RadialProfile(double plateau_radius, double support_radius)
    : r0_(plateau_radius), r1_(support_radius) {
    if (!(plateau_radius > 0) || !(support_radius > plateau_radius))
        throw ConfigError("radial profile radii: need 0 < plateau < support");
    step_table(); // build the shared table eagerly
}

double RadialProfile::operator()(double r) const {
    r = std::abs(r);
    if (r <= r0_) return 1.0;
    if (r >= r1_) return 0.0;
    return 1.0 - step_table()((r - r0_) / (r1_ - r0_));
}

double RadialProfile::derivative(double r) const {
    r = std::abs(r);
    if (r <= r0_ || r >= r1_) return 0.0;
    return -step_table().deriv((r - r0_) / (r1_ - r0_)) / (r1_ - r0_);
}

BumpFamily::BumpFamily() : scalar_(1.0, 2.0), multi_(0.5, 1.0) {}

const BumpFamily& bumps() {
    static const BumpFamily family;
    return family;
}

namespace {

void require_resolution(const Grid& g) {
    if (g.max_frequency() < 2.0)
        throw ConfigError("cutoff sampling: grid max frequency below 2 (field box_edge/points_per_axis)");
    if (1.0 / g.freq_spacing() < 4.0)
        throw ConfigError("cutoff sampling: fewer than 4 frequency samples across [1,2] (field box_edge)");
}

} // namespace

std::pair<SampledFunction, SampledFunction> make_scalar_pair(const Grid& g) {
    require_resolution(g);
    const BumpFamily& B = bumps();
    auto low = sample_frequency(g, 1, [&](std::span<const double> xi) {
        return cd(B.phi_hat(radius_of(xi)), 0.0);
    });
    auto band = sample_frequency(g, 1, [&](std::span<const double> xi) {
        return cd(B.psi_hat(radius_of(xi)), 0.0);
    });
    return {std::move(low), std::move(band)};
}

std::pair<SampledFunction, SampledFunction> make_multilinear_pair(const Grid& g) {
    require_resolution(g);
    const BumpFamily& B = bumps();
    auto low = sample_frequency(g, g.n, [&](std::span<const double> xi) {
        return cd(B.Phi_hat(radius_of(xi)), 0.0);
    });
    auto band = sample_frequency(g, g.n, [&](std::span<const double> xi) {
        return cd(B.Psi_hat(radius_of(xi)), 0.0);
    });
    return {std::move(low), std::move(band)};
}

double window_value(const FactorWindow& w, double r) {
    const BumpFamily& B = bumps();
    return w.origin_excluded ? B.psi_hat_k(w.scale, r) : B.phi_hat_k(w.scale, r);
}

namespace {

struct Candidate {
    std::vector<FactorWindow> windows; // n block windows + 1 output window
    bool survives = false;
};

// Deterministic uniform in [0,1) from raw engine bits.
double unit(std::mt19937_64& eng) { return (eng() >> 11) * 0x1.0p-53; }

// Scale-free survival probe: windows shifted to level 0, radii drawn inside
// each window's support, directions random (signs when d = 1). A candidate
// survives when any sampled product is strictly positive. Seeds depend only
// on the candidate index, so the decision is identical for every level j.
bool probe_candidate(const BumpFamily& B, const std::vector<FactorWindow>& offsets,
                     int n, int d, std::uint64_t salt) {
    std::mt19937_64 eng(0x9e3779b97f4a7c15ULL ^ salt);
    constexpr int kTrials = 4096;
    for (int t = 0; t < kTrials; ++t) {
        double sum[2] = {0, 0};
        double norm2 = 0;
        double prod = 1.0;
        for (int i = 0; i < n && prod > 0; ++i) {
            const FactorWindow& w = offsets[static_cast<std::size_t>(i)];
            const double r = w.lo() + (w.hi() - w.lo()) * unit(eng);
            prod *= window_value(w, r);
            norm2 += r * r;
            if (d == 1) {
                sum[0] += (unit(eng) < 0.5 ? -r : r);
            } else {
                const double a = 2 * std::numbers::pi * unit(eng);
                sum[0] += r * std::cos(a);
                sum[1] += r * std::sin(a);
            }
        }
        if (prod <= 0) continue;
        prod *= B.Psi_hat(std::sqrt(norm2));
        if (prod <= 0) continue;
        prod *= window_value(offsets[static_cast<std::size_t>(n)],
                             std::hypot(sum[0], sum[1]));
        if (prod > 0) return true;
    }
    return false;
}

std::string describe_term(const std::vector<FactorWindow>& ws) {
    std::string s = "[";
    for (const auto& w : ws)
        s += (w.origin_excluded ? "band@2^" : "low@2^") + std::to_string(w.scale) + " ";
    s += "]";
    return s;
}

} // namespace

std::vector<FactorTerm> factorize_band(const Grid& g, int j, int cushion, int cushion_out) {
    const int n = g.n, d = g.d;
    const int c = cushion >= 0
                      ? cushion
                      : 4 + static_cast<int>(std::ceil(std::log2(n * std::sqrt(double(n)))));
    const int cp = cushion_out >= 0 ? cushion_out
                                    : static_cast<int>(std::ceil(std::log2(double(n)))) + 2;
    if (!(n * std::ldexp(1.0, 1 - c) * std::sqrt(double(n)) < 0.5))
        throw ConfigError("factorize_band cushion: all-low-pass term would meet the band window");
    if (std::ldexp(1.0, cp) < 4.0 * n)
        throw ConfigError("factorize_band cushion_out: output slot cannot absorb the frequency sum");

    const BumpFamily& B = bumps();

    // Per block: low-pass at scale j-c or a band at scales j-c+1 .. j+2.
    // Output slot: same low-pass or bands up to j+cp. Expanding the product
    // of these telescoped partitions reproduces 1 on the annular support.
    const int block_choices = c + 3;    // 1 low + (c+2) bands
    const int out_choices = c + cp + 1; // 1 low + (c+cp) bands
    auto choice_window = [&](int pick, bool out_slot) {
        if (pick == 0) return FactorWindow{false, j - c};
        (void)out_slot;
        return FactorWindow{true, j - c + pick};
    };

    std::size_t total = static_cast<std::size_t>(out_choices);
    for (int i = 0; i < n; ++i) total *= static_cast<std::size_t>(block_choices);

    std::vector<Candidate> cands(total);
    for (std::size_t ci = 0; ci < total; ++ci) {
        std::size_t rest = ci;
        std::vector<FactorWindow> ws(static_cast<std::size_t>(n) + 1);
        for (int i = 0; i < n; ++i) {
            ws[static_cast<std::size_t>(i)] =
                choice_window(static_cast<int>(rest % block_choices), false);
            rest /= static_cast<std::size_t>(block_choices);
        }
        ws[static_cast<std::size_t>(n)] = choice_window(static_cast<int>(rest), true);

        // shift to level 0 for the scale-free decision
        std::vector<FactorWindow> offsets = ws;
        for (auto& w : offsets) w.scale -= j;
        cands[ci].survives = probe_candidate(B, offsets, n, d, ci);
        cands[ci].windows = std::move(ws);
    }

    // Grid-point certificates: gather every lattice frequency inside the
    // annular window once, with per-block radii and the sum radius.
    struct Probe {
        double psi;
        std::array<double, 3> block_r;
        double sum_r;
    };
    std::vector<Probe> pts;
    {
        const int N = g.points_per_axis;
        std::array<int, kMaxAxes> idx{};
        do {
            double norm2 = 0;
            std::array<double, 3> br{};
            double sum[2] = {0, 0};
            for (int i = 0; i < n; ++i) {
                double b2 = 0;
                for (int a = 0; a < d; ++a) {
                    const double x = g.xi_at(idx[static_cast<std::size_t>(i * d + a)]);
                    b2 += x * x;
                    sum[a] += x;
                }
                br[static_cast<std::size_t>(i)] = std::sqrt(b2);
                norm2 += b2;
            }
            const double psi = B.Psi_hat_j(j, std::sqrt(norm2));
            if (psi != 0.0) pts.push_back(Probe{psi, br, std::hypot(sum[0], sum[1])});
        } while (next_index(idx, g.axes(g.n), N));
    }

    auto term_value = [&](const std::vector<FactorWindow>& ws, const Probe& p) {
        double v = p.psi;
        for (int i = 0; i < n && v != 0.0; ++i)
            v *= window_value(ws[static_cast<std::size_t>(i)], p.block_r[static_cast<std::size_t>(i)]);
        if (v != 0.0) v *= window_value(ws[static_cast<std::size_t>(n)], p.sum_r);
        return v;
    };

    std::vector<FactorTerm> terms;
    for (auto& cand : cands) {
        if (!cand.survives) {
            for (const Probe& p : pts)
                if (term_value(cand.windows, p) != 0.0)
                    throw NumericError("factorize_band: discarded term " +
                                       describe_term(cand.windows) +
                                       " is nonzero on the grid (cushion too small?)");
            continue;
        }
        int bands = 0;
        for (const auto& w : cand.windows) bands += w.origin_excluded ? 1 : 0;
        if (bands < 2)
            throw NumericError("factorize_band: term " + describe_term(cand.windows) +
                               " keeps fewer than two origin-excluded factors");
        terms.push_back(FactorTerm{j, std::move(cand.windows), 1.0});
    }

    for (const Probe& p : pts) {
        double s = 0;
        for (const FactorTerm& t : terms) s += t.weight * term_value(t.windows, p);
        if (std::abs(s - p.psi) > 1e-8)
            throw NumericError("factorize_band: factored sum misses the band window by " +
                               std::to_string(std::abs(s - p.psi)));
    }
    return terms;
}

} // namespace mpdo
