#include "mpdo/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <tuple>

namespace mpdo {
namespace {

// FFTW plan creation is not thread-safe and plans are tied to scratch
// buffers, so each (rank, extent, sign) entry owns its buffers and a lock.
struct PlanEntry {
    fftw_plan plan = nullptr;
    fftw_complex* in = nullptr;
    fftw_complex* out = nullptr;
    std::size_t count = 0;
    std::mutex run;
};

PlanEntry& plan_for(int rank, int extent, int sign) {
    static std::mutex table_lock;
    static std::map<std::tuple<int, int, int>, PlanEntry> table;
    std::scoped_lock lk(table_lock);
    auto key = std::make_tuple(rank, extent, sign);
    auto it = table.find(key);
    if (it != table.end()) return it->second;
    PlanEntry& e = table[key];
    e.count = 1;
    for (int a = 0; a < rank; ++a) e.count *= static_cast<std::size_t>(extent);
    e.in = fftw_alloc_complex(e.count);
    e.out = fftw_alloc_complex(e.count);
    std::vector<int> dims(static_cast<std::size_t>(rank), extent);
    e.plan = fftw_plan_dft(rank, dims.data(), e.in, e.out, sign, FFTW_ESTIMATE);
    if (!e.plan) throw NumericError("fftw plan creation failed");
    return e;
}

void run_dft(int rank, int extent, int sign, const cd* src, cd* dst, std::size_t count) {
    PlanEntry& e = plan_for(rank, extent, sign);
    std::scoped_lock lk(e.run);
    for (std::size_t i = 0; i < count; ++i) {
        e.in[i][0] = src[i].real();
        e.in[i][1] = src[i].imag();
    }
    fftw_execute(e.plan);
    for (std::size_t i = 0; i < count; ++i) dst[i] = cd(e.out[i][0], e.out[i][1]);
}

} // namespace

Grid make_grid(int d, int n, double box_edge, int points_per_axis,
               std::size_t memory_budget_bytes) {
    if (d < 1 || d > 2) throw ConfigError("grid field d: supported values are 1 and 2, got " + std::to_string(d));
    if (n < 1 || n > 3) throw ConfigError("grid field n: supported values are 1..3, got " + std::to_string(n));
    if (!(box_edge > 0)) throw ConfigError("grid field box_edge: must be positive");
    if (points_per_axis <= 0 || points_per_axis % 2 != 0)
        throw ConfigError("grid field points_per_axis: must be positive and even, got " +
                          std::to_string(points_per_axis));
    long double need = 16.0L; // one complex sample
    for (int a = 0; a < d * n; ++a) need *= points_per_axis;
    if (need > static_cast<long double>(memory_budget_bytes))
        throw ConfigError("grid field points_per_axis: N^{nd} samples exceed the memory budget (" +
                          std::to_string(static_cast<double>(need)) + " bytes needed)");
    return Grid{d, n, box_edge, points_per_axis};
}

SampledFunction make_function(const Grid& g, Domain domain, int arity) {
    if (arity < 1 || arity > g.n)
        throw ConfigError("sampled function arity: must lie in 1..n");
    SampledFunction f;
    f.grid = g;
    f.domain = domain;
    f.arity = arity;
    f.samples.assign(g.samples(arity), cd{0.0, 0.0});
    return f;
}

namespace {

SampledFunction sample_impl(const Grid& g, int arity, Domain domain, const PointFn& fn) {
    SampledFunction f = make_function(g, domain, arity);
    const int axes = g.axes(arity);
    const int N = g.points_per_axis;
    std::array<int, kMaxAxes> idx{};
    std::array<double, kMaxAxes> pt{};
    std::size_t flat = 0;
    do {
        for (int a = 0; a < axes; ++a)
            pt[a] = domain == Domain::Space ? g.x_at(idx[a]) : g.xi_at(idx[a]);
        f.samples[flat++] = fn(std::span<const double>(pt.data(), static_cast<std::size_t>(axes)));
    } while (next_index(idx, axes, N));
    return f;
}

} // namespace

SampledFunction sample_space(const Grid& g, int arity, const PointFn& fn) {
    return sample_impl(g, arity, Domain::Space, fn);
}

SampledFunction sample_frequency(const Grid& g, int arity, const PointFn& fn) {
    return sample_impl(g, arity, Domain::Frequency, fn);
}

// Index bookkeeping for both transforms. With x_k = -L/2 + k h and
// xi_m = m/L, the kernel splits as e^{-2pi i k m/N} * (-1)^m, so the
// standard DFT needs a per-axis fold q = m mod N plus a parity sign.
namespace {

SampledFunction transform_impl(const SampledFunction& src, bool forward) {
    const Grid& g = src.grid;
    const int axes = g.axes(src.arity);
    const int N = g.points_per_axis;
    const std::size_t count = src.size();

    // Centered frequency index i <-> DFT bin q = (i + N/2) mod N, with sign
    // (-1)^(i + N/2) per axis. Same map both directions.
    std::vector<cd> staged(count);
    const double scale = forward ? 1.0 : std::pow(g.freq_spacing(), axes);
    if (!forward) {
        if (src.domain != Domain::Frequency) throw ConfigError("inverse_transform: input must be frequency-domain");
        std::array<int, kMaxAxes> idx{};
        std::size_t flat = 0;
        do {
            std::size_t q = 0;
            int parity = 0;
            for (int a = 0; a < axes; ++a) {
                q = q * static_cast<std::size_t>(N) +
                    static_cast<std::size_t>((idx[a] + N / 2) % N);
                parity += idx[a] + N / 2;
            }
            staged[q] = (parity % 2 ? -src.samples[flat] : src.samples[flat]);
            ++flat;
        } while (next_index(idx, axes, N));
    } else {
        if (src.domain != Domain::Space) throw ConfigError("forward_transform: input must be space-domain");
        staged.assign(src.samples.begin(), src.samples.end());
    }

    std::vector<cd> raw(count);
    run_dft(axes, N, forward ? FFTW_FORWARD : FFTW_BACKWARD, staged.data(), raw.data(), count);

    SampledFunction dst = make_function(g, forward ? Domain::Frequency : Domain::Space, src.arity);
    if (forward) {
        const double h = std::pow(g.spacing(), axes);
        std::array<int, kMaxAxes> idx{};
        std::size_t flat = 0;
        do {
            std::size_t q = 0;
            int parity = 0;
            for (int a = 0; a < axes; ++a) {
                q = q * static_cast<std::size_t>(N) +
                    static_cast<std::size_t>((idx[a] + N / 2) % N);
                parity += idx[a] + N / 2;
            }
            dst.samples[flat++] = (parity % 2 ? -raw[q] : raw[q]) * h;
        } while (next_index(idx, axes, N));
    } else {
        for (std::size_t i = 0; i < count; ++i) dst.samples[i] = raw[i] * scale;
    }
    return dst;
}

} // namespace

SampledFunction forward_transform(const SampledFunction& f) { return transform_impl(f, true); }
SampledFunction inverse_transform(const SampledFunction& F) { return transform_impl(F, false); }

SampledFunction reflect_frequency(const SampledFunction& F) {
    if (F.domain != Domain::Frequency) throw ConfigError("reflect_frequency: input must be frequency-domain");
    const Grid& g = F.grid;
    const int axes = g.axes(F.arity);
    const int N = g.points_per_axis;
    SampledFunction out = make_function(g, Domain::Frequency, F.arity);
    std::array<int, kMaxAxes> idx{};
    std::size_t flat = 0;
    do {
        std::size_t r = 0;
        for (int a = 0; a < axes; ++a)
            r = r * static_cast<std::size_t>(N) + static_cast<std::size_t>((N - idx[a]) % N);
        out.samples[flat++] = F.samples[r];
    } while (next_index(idx, axes, N));
    return out;
}

} // namespace mpdo
