#include "mpdo/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

#include "mpdo/bumps.hpp"
#include "mpdo/errors.hpp"
#include "mpdo/regions.hpp"

namespace mpdo {

namespace {

double pget(const std::map<std::string, double>& params, const std::string& key, double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

void reject_unknown_params(const std::string& name, const std::map<std::string, double>& params,
                           std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : params) {
        (void)value;
        bool known = false;
        for (const char* a : allowed)
            if (key == a) {
                known = true;
                break;
            }
        if (!known)
            throw ConfigError("unknown parameter '" + key + "' for symbol '" + name + "'");
    }
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::In: return "in";
        case Verdict::Out: return "out";
        default: return "boundary";
    }
}

nlohmann::ordered_json payload_json(const BoundednessReport& r) {
    nlohmann::ordered_json j;
    j["kind"] = "boundedness_report";
    j["seed"] = r.seed;
    j["config_hash"] = r.config_hash;
    j["ratios"] = r.ratios;
    j["max_ratio"] = r.max_ratio;
    j["median_ratio"] = r.median_ratio;
    j["mean_ratio"] = r.mean_ratio;
    j["group_max"] = r.group_max;
    j["stable"] = r.stable;
    j["symbol_norm_total"] = r.symbol_norm_total;
    j["normalized_sup_ratio"] = r.normalized_sup_ratio;
    j["region_sum_form"] = r.region_sum_form;
    j["comparison"] = r.comparison;
    j["degradations"] = r.degradations;
    return j;
}

} // namespace

ExperimentConfig load_experiment(const Config& c) {
    ExperimentConfig e;
    e.d = static_cast<int>(c.get_int("experiment.d", e.d));
    e.n = static_cast<int>(c.get_int("experiment.n", e.n));
    e.points = static_cast<int>(c.get_int("experiment.points", e.points));
    e.box = c.get_double("experiment.box", e.box);
    e.symbol = c.get_string("experiment.symbol", e.symbol);
    e.symbol_params = c.numeric_section("symbol_params");
    e.s = c.get_double("experiment.s", e.s);
    e.delta = c.get_double("experiment.delta", e.delta);
    e.order = c.get_double("experiment.order", e.order);
    e.rho = c.get_double("experiment.rho", e.rho);
    e.p = c.get_double("experiment.p", e.p);
    e.p_i = c.get_array("experiment.p_i", e.p_i);
    e.scale_count = static_cast<int>(c.get_int("experiment.scale_count", e.scale_count));
    e.levels = static_cast<int>(c.get_int("experiment.levels", e.levels));
    e.out_levels = static_cast<int>(c.get_int("experiment.out_levels", e.out_levels));
    e.ensemble = static_cast<int>(c.get_int("experiment.ensemble", e.ensemble));
    e.seed_groups = static_cast<int>(c.get_int("experiment.seed_groups", e.seed_groups));
    e.seed = static_cast<std::uint64_t>(c.get_int("experiment.seed", 0));
    e.band_lo_level = static_cast<int>(c.get_int("experiment.band_lo_level", e.band_lo_level));
    e.band_hi_level = static_cast<int>(c.get_int("experiment.band_hi_level", e.band_hi_level));
    e.config_hash = c.hash();

    const auto names = symbol_registry_names();
    if (std::find(names.begin(), names.end(), e.symbol) == names.end()) {
        std::string known;
        for (const auto& nm : names) known += (known.empty() ? "" : ", ") + nm;
        throw ConfigError("unknown symbol '" + e.symbol + "'; known symbols: " + known);
    }
    if (!(e.p > 0)) throw ConfigError("output exponent p must be positive");
    if (static_cast<int>(e.p_i.size()) != e.n)
        throw ConfigError("p_i must list one exponent per input block (got " +
                          std::to_string(e.p_i.size()) + ", need " + std::to_string(e.n) + ")");
    double inv_sum = 0;
    for (double pi : e.p_i) {
        if (!(pi > 0)) throw ConfigError("every input exponent p_i must be positive");
        inv_sum += 1.0 / pi;
    }
    if (std::abs(1.0 / e.p - inv_sum) > 1e-12)
        throw ConfigError("exponents must satisfy 1/p = sum_i 1/p_i (got 1/p = " +
                          format_sig17(1.0 / e.p) + ", sum = " + format_sig17(inv_sum) + ")");
    if (e.ensemble < 1) throw ConfigError("ensemble must be at least 1");
    if (e.seed_groups < 1) throw ConfigError("seed_groups must be at least 1");
    if (e.ensemble % e.seed_groups != 0)
        throw ConfigError("ensemble must split evenly into seed_groups");
    if (e.scale_count < 2) throw ConfigError("scale_count must be at least 2");
    if (e.levels < 0) throw ConfigError("levels must be nonnegative");
    if (e.band_lo_level >= e.band_hi_level)
        throw ConfigError("band_lo_level must be below band_hi_level");
    return e;
}

Grid experiment_grid(const ExperimentConfig& e) {
    return make_grid(e.d, e.n, e.box, e.points);
}

std::vector<std::string> symbol_registry_names() {
    return {"anchored_singularity", "chirp",        "coifman_meyer",
            "compact_phase",        "constant",     "drifting_singularity",
            "dyadic_chirp",         "modulation",   "translation"};
}

Symbol make_symbol_named(const Grid& g, const std::string& name,
                         const std::map<std::string, double>& params) {
    if (name == "constant") {
        reject_unknown_params(name, params, {"re", "im"});
        return constant_symbol(g, cd{pget(params, "re", 1.0), pget(params, "im", 0.0)});
    }
    if (name == "translation") {
        reject_unknown_params(name, params, {"shift", "block"});
        std::vector<double> a(g.d, 0.0);
        a[0] = pget(params, "shift", 0.25);
        return translation_symbol(g, a, static_cast<int>(pget(params, "block", 1)));
    }
    if (name == "modulation") {
        reject_unknown_params(name, params, {"freq"});
        std::vector<double> c(g.d, 0.0);
        c[0] = pget(params, "freq", 1.0);
        return modulation_symbol(g, c);
    }
    if (name == "compact_phase") {
        reject_unknown_params(name, params, {});
        return compact_phase_symbol(g);
    }
    if (name == "anchored_singularity") {
        reject_unknown_params(name, params, {"gamma", "delta"});
        return anchored_singularity_symbol(g, pget(params, "gamma", 0.5),
                                           pget(params, "delta", 0.0));
    }
    if (name == "drifting_singularity") {
        reject_unknown_params(name, params, {"gamma", "delta"});
        return drifting_singularity_symbol(g, pget(params, "gamma", 1.5),
                                           pget(params, "delta", 0.0));
    }
    if (name == "dyadic_chirp") {
        reject_unknown_params(name, params, {"a", "b", "delta", "x_factor", "k_min"});
        return dyadic_chirp_symbol(g, pget(params, "a", 2.0), pget(params, "b", 3.0),
                                   pget(params, "delta", 0.0),
                                   pget(params, "x_factor", 1.0) != 0.0,
                                   static_cast<int>(pget(params, "k_min", 1)));
    }
    if (name == "chirp") {
        reject_unknown_params(name, params, {"a"});
        return chirp_symbol(g, pget(params, "a", 2.0));
    }
    if (name == "coifman_meyer") {
        reject_unknown_params(name, params, {"epsilon"});
        return coifman_meyer_symbol(g, pget(params, "epsilon", 0.25));
    }
    std::string known;
    for (const auto& nm : symbol_registry_names()) known += (known.empty() ? "" : ", ") + nm;
    throw ConfigError("unknown symbol '" + name + "'; known symbols: " + known);
}

SampledFunction random_test_function(const Grid& g, std::uint64_t seed, int band_lo_level,
                                     int band_hi_level, bool normalize_h2, int scale_count) {
    if (band_lo_level >= band_hi_level)
        throw ConfigError("random input band needs band_lo_level < band_hi_level");
    // Smooth envelope: 0 below 2^lo, 1 on the middle half of the level span,
    // 0 above 2^hi, so the draw is band-limited with smooth edges.
    const double w = (band_hi_level - band_lo_level) / 4.0;
    const RadialProfile rise(std::ldexp(1.0, band_lo_level), std::pow(2.0, band_lo_level + w));
    const RadialProfile fall(std::pow(2.0, band_hi_level - w), std::ldexp(1.0, band_hi_level));

    SampledFunction F = make_function(g, Domain::Frequency, 1);
    std::mt19937_64 rng(seed);
    // Explicit Box-Muller on (0,1] mantissa draws: identical streams on every
    // platform, unlike distribution adapters.
    auto uniform = [&rng]() { return (static_cast<double>(rng() >> 11) + 1.0) * 0x1p-53; };

    const int axes = g.axes(1);
    std::array<int, kMaxAxes> idx{};
    std::array<double, kMaxAxes> xi{};
    std::size_t flat = 0;
    double peak = 0;
    do {
        for (int a = 0; a < axes; ++a) xi[a] = g.xi_at(idx[a]);
        const double r = radius_of(std::span<const double>(xi.data(), static_cast<std::size_t>(axes)));
        // Draw unconditionally so the stream does not depend on the envelope.
        const double u1 = uniform();
        const double u2 = uniform();
        const double env = (1.0 - rise(r)) * fall(r);
        if (env != 0.0) {
            const double mag = std::sqrt(-2.0 * std::log(u1));
            const double ang = 2.0 * std::numbers::pi * u2;
            F[flat] = env * cd{mag * std::cos(ang), mag * std::sin(ang)};
            peak = std::max(peak, std::abs(F[flat]));
        }
        ++flat;
    } while (next_index(idx, axes, g.points_per_axis));

    if (peak == 0.0)
        throw ConfigError("random input band [2^" + std::to_string(band_lo_level) + ", 2^" +
                          std::to_string(band_hi_level) + "] misses every grid frequency");
    SampledFunction f = inverse_transform(F);
    if (normalize_h2) {
        const double h2 = hp_quasinorm(f, 2.0, scale_count);
        if (!(h2 > 0)) throw NumericError("cannot normalize: vanishing local maximal norm");
        for (auto& v : f.samples) v /= h2;
    }
    return f;
}

BoundednessReport boundedness_experiment(const ExperimentConfig& e) {
    const Grid g = experiment_grid(e);
    const Symbol sym = make_symbol_named(g, e.symbol, e.symbol_params);
    const OperatorPlan plan = make_plan(g, sym, e.levels, e.out_levels);

    BoundednessReport rep;
    rep.seed = e.seed;
    rep.config_hash = e.config_hash;
    rep.ratios.resize(static_cast<std::size_t>(e.ensemble));

    for (int t = 0; t < e.ensemble; ++t) {
        try {
            std::vector<SampledFunction> fs;
            fs.reserve(static_cast<std::size_t>(e.n));
            for (int i = 0; i < e.n; ++i) {
                const std::uint64_t s =
                    e.seed + static_cast<std::uint64_t>(t) * static_cast<std::uint64_t>(e.n) +
                    static_cast<std::uint64_t>(i);
                fs.push_back(
                    random_test_function(g, s, e.band_lo_level, e.band_hi_level, false,
                                         e.scale_count));
            }
            const SampledFunction out =
                mpdo::apply(plan, std::span<const SampledFunction>(fs));
            const double num = lp_quasinorm(out, e.p);
            double den = 1.0;
            for (int i = 0; i < e.n; ++i)
                den *= hp_quasinorm(fs[static_cast<std::size_t>(i)], e.p_i[static_cast<std::size_t>(i)],
                                    e.scale_count);
            if (!(den > 0) || !std::isfinite(den) || !std::isfinite(num))
                throw NumericError("degenerate ratio (numerator " + format_sig17(num) +
                                   ", denominator " + format_sig17(den) + ")");
            rep.ratios[static_cast<std::size_t>(t)] = num / den;
        } catch (const ConfigError& ex) {
            throw ConfigError("sample " + std::to_string(t) + ": " + ex.what());
        } catch (const std::exception& ex) {
            throw NumericError("sample " + std::to_string(t) + ": " + ex.what());
        }
    }

    rep.max_ratio = *std::max_element(rep.ratios.begin(), rep.ratios.end());
    rep.median_ratio = median_of(rep.ratios);
    rep.mean_ratio = 0;
    for (double r : rep.ratios) rep.mean_ratio += r;
    rep.mean_ratio /= static_cast<double>(e.ensemble);

    const int per_group = e.ensemble / e.seed_groups;
    for (int gi = 0; gi < e.seed_groups; ++gi) {
        double gm = 0;
        for (int t = gi * per_group; t < (gi + 1) * per_group; ++t)
            gm = std::max(gm, rep.ratios[static_cast<std::size_t>(t)]);
        rep.group_max.push_back(gm);
    }
    rep.stable = *std::max_element(rep.group_max.begin(), rep.group_max.end()) <=
                 3.0 * median_of(rep.group_max);

    const auto probes = default_x_probes(g);
    const SymbolNormReport sn = symbol_norm_s_delta(sym, g, e.s, e.delta, probes, e.levels);
    rep.symbol_norm_total = sn.total;
    if (sn.probes_subsampled)
        rep.degradations.push_back("x probe set subsampled to " + std::to_string(sn.probe_count) +
                                   " points");
    if (sn.total > 0) {
        rep.normalized_sup_ratio = rep.max_ratio / sn.total;
    } else {
        rep.normalized_sup_ratio = 0;
        rep.degradations.push_back("symbol norm vanished; normalized ratio set to zero");
    }

    std::vector<double> coords(e.p_i.size());
    for (std::size_t i = 0; i < coords.size(); ++i) coords[i] = 1.0 / e.p_i[i];
    rep.region_sum_form = verdict_name(in_region_sum_form(coords, e.s / e.d));
    rep.comparison = verdict_name(comparison_condition(coords, e.order, e.d));

    rep.report_hash = fnv1a_hex(payload_json(rep).dump());
    return rep;
}

std::string report_json(const BoundednessReport& r, const std::string& timestamp) {
    nlohmann::ordered_json j = payload_json(r);
    j["report_hash"] = r.report_hash;
    j["timestamp"] = timestamp;
    return j.dump(2) + "\n";
}

NormScanResult norm_scan(const Symbol& sym, const Grid& g, std::span<const double> s_list,
                         int j_max, double delta,
                         const std::vector<std::vector<double>>& x_probes) {
    NormScanResult out;
    for (double s : s_list) {
        const SymbolNormReport rep = symbol_norm_s_delta(sym, g, s, delta, x_probes, j_max);
        std::vector<double> xs, lys;
        for (const auto& b : rep.bands) {
            out.rows.push_back({s, b.j, b.alpha0, b.alpha1, b.combined});
            if (b.combined > 0) {
                xs.push_back(static_cast<double>(b.j));
                lys.push_back(std::log2(b.combined));
            }
        }
        out.slope_per_s.emplace_back(s, xs.size() >= 2 ? fit_log2_slope(xs, lys) : 0.0);
    }
    return out;
}

ResolutionScan resolution_scan(const std::function<Symbol(const Grid&)>& factory, int d, int n,
                               double box, int base_points, int levels, double s, int j,
                               double delta) {
    if (levels < 2) throw ConfigError("resolution scan needs at least two refinement levels");
    if (j < 0) throw ConfigError("resolution scan band level must be nonnegative");
    ResolutionScan out;
    const std::vector<std::vector<double>> probe{std::vector<double>(static_cast<std::size_t>(d), 0.0)};
    for (int lvl = 0; lvl < levels; ++lvl) {
        const Grid g = make_grid(d, n, box, base_points << lvl);
        const Symbol sym = factory(g);
        const SymbolNormReport rep = symbol_norm_s_delta(sym, g, s, delta, probe, j);
        out.values.push_back(rep.bands.at(static_cast<std::size_t>(j)).combined);
    }
    const double prev = out.values[out.values.size() - 2];
    out.tail_ratio = prev > 0 ? out.values.back() / prev : 0.0;
    out.growing_tail = true;
    const std::size_t start = out.values.size() > 3 ? out.values.size() - 3 : 0;
    for (std::size_t i = start + 1; i < out.values.size(); ++i)
        if (!(out.values[i] > out.values[i - 1])) out.growing_tail = false;
    return out;
}

double fit_log2_slope(std::span<const double> xs, std::span<const double> log2_ys) {
    if (xs.size() != log2_ys.size() || xs.size() < 2)
        throw ConfigError("slope fit needs two matched samples at minimum");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += log2_ys[i];
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(xs.size());
    double num = 0, den = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        num += (xs[i] - mx) * (log2_ys[i] - my);
        den += (xs[i] - mx) * (xs[i] - mx);
    }
    if (den == 0) throw NumericError("slope fit degenerate: identical abscissae");
    return num / den;
}

} // namespace mpdo
