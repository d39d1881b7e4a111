#include <array>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <span>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mpdo/config.hpp"
#include "mpdo/errors.hpp"
#include "mpdo/grid.hpp"
#include "mpdo/harness.hpp"
#include "mpdo/norms.hpp"
#include "mpdo/parallel.hpp"
#include "mpdo/pdo.hpp"
#include "mpdo/regions.hpp"
#include "mpdo/symbols.hpp"

namespace {

using namespace mpdo;

struct CommonOpts {
    std::string config;
    std::string out;
    unsigned threads = 0;
    long long seed_override = -1;
};

std::string now_utc() {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open output file: " + path);
    f << text;
    if (!f.good()) throw ConfigError("failed writing output file: " + path);
}

ExperimentConfig load(const CommonOpts& opt, Config& cfg) {
    cfg = Config::parse_file(opt.config);
    ExperimentConfig e = load_experiment(cfg);
    if (opt.seed_override >= 0) e.seed = static_cast<std::uint64_t>(opt.seed_override);
    return e;
}

std::vector<SampledFunction> seeded_inputs(const Grid& g, const ExperimentConfig& e) {
    std::vector<SampledFunction> fs;
    fs.reserve(static_cast<std::size_t>(e.n));
    for (int i = 0; i < e.n; ++i)
        fs.push_back(random_test_function(g, e.seed + static_cast<std::uint64_t>(i),
                                          e.band_lo_level, e.band_hi_level, false,
                                          e.scale_count));
    return fs;
}

int run_apply(const CommonOpts& opt) {
    Config cfg;
    const ExperimentConfig e = load(opt, cfg);
    const Grid g = experiment_grid(e);
    const Symbol sym = make_symbol_named(g, e.symbol, e.symbol_params);
    const OperatorPlan plan = make_plan(g, sym, e.levels, e.out_levels);
    const auto fs = seeded_inputs(g, e);
    const SampledFunction out = apply(plan, std::span<const SampledFunction>(fs));

    std::vector<std::string> header{"index"};
    for (int a = 0; a < g.d; ++a) header.push_back("x" + std::to_string(a));
    header.push_back("re");
    header.push_back("im");

    std::vector<std::vector<std::string>> rows;
    rows.reserve(out.size());
    std::array<int, kMaxAxes> idx{};
    std::size_t flat = 0;
    do {
        std::vector<std::string> row{std::to_string(flat)};
        for (int a = 0; a < g.d; ++a) row.push_back(format_sig17(g.x_at(idx[a])));
        row.push_back(format_sig17(out[flat].real()));
        row.push_back(format_sig17(out[flat].imag()));
        rows.push_back(std::move(row));
        ++flat;
    } while (next_index(idx, g.d, g.points_per_axis));
    write_csv(opt.out, header, rows);
    std::cout << "wrote " << rows.size() << " output samples to " << opt.out << "\n";
    return 0;
}

int run_norm(const CommonOpts& opt) {
    Config cfg;
    const ExperimentConfig e = load(opt, cfg);
    const Grid g = experiment_grid(e);
    const Symbol sym = make_symbol_named(g, e.symbol, e.symbol_params);
    const auto probes = default_x_probes(g);
    const SymbolNormReport rep = symbol_norm_s_delta(sym, g, e.s, e.delta, probes, e.levels);

    const std::vector<std::string> header{"piece", "j", "alpha0", "alpha1", "value"};
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"low", "", format_sig17(rep.low_alpha0), format_sig17(rep.low_alpha1),
                    format_sig17(rep.low)});
    for (const auto& b : rep.bands)
        rows.push_back({"band", std::to_string(b.j), format_sig17(b.alpha0),
                        format_sig17(b.alpha1), format_sig17(b.combined)});
    rows.push_back({"total", "", "", "", format_sig17(rep.total)});
    write_csv(opt.out, header, rows);
    std::cout << "symbol " << e.symbol << ": s = " << e.s << ", delta = " << e.delta
              << ", total = " << format_sig17(rep.total)
              << (rep.probes_subsampled ? " (x probes subsampled)" : "") << "\n";
    return 0;
}

int run_classify(const CommonOpts& opt) {
    Config cfg;
    const ExperimentConfig e = load(opt, cfg);
    const Grid g = experiment_grid(e);
    const Symbol sym = make_symbol_named(g, e.symbol, e.symbol_params);
    const int max_beta = static_cast<int>(cfg.get_int("classify.max_beta", 3));
    const int probes = static_cast<int>(cfg.get_int("classify.probes", 8));
    const auto seed = static_cast<std::uint64_t>(cfg.get_int("classify.seed", 1234));
    const bool strict = cfg.get_bool("classify.strict", false);

    const MihlinReport rep = mihlin_estimate(sym, g, e.rho, e.delta, e.order, max_beta,
                                             probes, seed);
    const std::vector<std::string> header{"alpha", "beta",   "constant", "fitted_exponent",
                                          "allowed_exponent", "violated", "witness_value"};
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : rep.rows)
        rows.push_back({std::to_string(r.alpha), std::to_string(r.beta),
                        format_sig17(r.constant), format_sig17(r.fitted_exponent),
                        format_sig17(r.allowed_exponent), r.violated ? "true" : "false",
                        format_sig17(r.witness_value)});
    write_csv(opt.out, header, rows);
    std::cout << "symbol " << e.symbol << " at (rho, delta, order) = (" << e.rho << ", "
              << e.delta << ", " << e.order << "): "
              << (rep.consistent() ? "consistent" : "violated") << "\n";
    if (strict && !rep.consistent()) return 2;
    return 0;
}

int run_region(const CommonOpts& opt) {
    const Config cfg = Config::parse_file(opt.config);
    const int count = static_cast<int>(cfg.get_int("region.count", 2));
    const long long den = cfg.get_int("region.denominator", 16);
    const long long up_to = cfg.get_int("region.up_to", 4 * den);
    const long long alpha_num = cfg.get_int("region.alpha_num", 2);
    const long long alpha_den = cfg.get_int("region.alpha_den", 1);
    if (count < 1 || count > 4) throw ConfigError("region sweep supports 1..4 coordinates");
    if (den < 1 || up_to < 1 || alpha_den < 1) throw ConfigError("region sweep needs positive denominators and range");
    double row_estimate = 1;
    for (int i = 0; i < count; ++i) row_estimate *= static_cast<double>(up_to);
    if (row_estimate > 2e6) throw ConfigError("region sweep too large; shrink up_to or count");

    const Rat alpha = rat(alpha_num, alpha_den);
    const double alpha_d = static_cast<double>(alpha.num) / static_cast<double>(alpha.den);

    std::vector<std::string> header;
    for (int i = 0; i < count; ++i) header.push_back("x" + std::to_string(i + 1));
    header.insert(header.end(), {"alpha", "sum_exact", "subset_exact", "double_verdict", "agree"});

    std::vector<std::vector<std::string>> rows;
    long long boundary = 0, disagreements = 0;
    std::vector<long long> num(static_cast<std::size_t>(count), 1);
    const std::string alpha_str = std::to_string(alpha.num) + "/" + std::to_string(alpha.den);
    for (;;) {
        std::vector<Rat> x(static_cast<std::size_t>(count));
        std::vector<double> xd(static_cast<std::size_t>(count));
        for (int i = 0; i < count; ++i) {
            x[static_cast<std::size_t>(i)] = rat(num[static_cast<std::size_t>(i)], den);
            xd[static_cast<std::size_t>(i)] =
                static_cast<double>(num[static_cast<std::size_t>(i)]) / static_cast<double>(den);
        }
        const bool sum_exact = in_region_sum_form_exact(x, alpha);
        const bool subset_exact = in_region_subset_form_exact(x, alpha);
        const Verdict vd = in_region_sum_form(xd, alpha_d);
        bool agree = sum_exact == subset_exact;
        if (vd == Verdict::Boundary) {
            ++boundary;
        } else {
            agree = agree && ((vd == Verdict::In) == sum_exact);
        }
        if (!agree) ++disagreements;

        std::vector<std::string> row;
        for (int i = 0; i < count; ++i) {
            const Rat& r = x[static_cast<std::size_t>(i)];
            row.push_back(std::to_string(r.num) + "/" + std::to_string(r.den));
        }
        row.push_back(alpha_str);
        row.push_back(sum_exact ? "true" : "false");
        row.push_back(subset_exact ? "true" : "false");
        row.push_back(vd == Verdict::In ? "in" : (vd == Verdict::Out ? "out" : "boundary"));
        row.push_back(agree ? "true" : "false");
        rows.push_back(std::move(row));

        int a = count - 1;
        for (; a >= 0; --a) {
            if (++num[static_cast<std::size_t>(a)] <= up_to) break;
            num[static_cast<std::size_t>(a)] = 1;
        }
        if (a < 0) break;
    }
    write_csv(opt.out, header, rows);
    std::cout << "swept " << rows.size() << " exponent points (alpha = " << alpha_str << "): "
              << boundary << " on the boundary, " << disagreements << " disagreements\n";
    if (disagreements > 0) {
        std::cerr << "exact and floating-point memberships disagree off the boundary\n";
        return 2;
    }
    return 0;
}

int run_decompose(const CommonOpts& opt) {
    Config cfg;
    const ExperimentConfig e = load(opt, cfg);
    const double tolerance = cfg.get_double("decompose.tolerance", 1e-6);
    const Grid g = experiment_grid(e);
    const Symbol sym = make_symbol_named(g, e.symbol, e.symbol_params);
    const OperatorPlan plan = make_plan(g, sym, e.levels, e.out_levels);
    const auto fs = seeded_inputs(g, e);
    const SplitResult r = split(plan, std::span<const SampledFunction>(fs));
    const bool pass = r.reconstruction_error <= tolerance;

    nlohmann::ordered_json j;
    j["kind"] = "output_band_split";
    j["levels"] = e.levels;
    j["out_levels"] = e.out_levels;
    j["above_l2"] = lp_quasinorm(r.above_band, 2.0);
    j["below_l2"] = lp_quasinorm(r.below_band, 2.0);
    j["near_l2"] = lp_quasinorm(r.near_band, 2.0);
    j["band_residual_fraction"] = r.band_residual_fraction;
    j["reconstruction_error"] = r.reconstruction_error;
    j["tolerance"] = tolerance;
    j["pass"] = pass;
    write_text(opt.out, j.dump(2) + "\n");
    if (!pass) {
        std::cerr << "split reconstruction error " << format_sig17(r.reconstruction_error)
                  << " exceeds tolerance " << format_sig17(tolerance) << "\n";
        return 2;
    }
    return 0;
}

int run_bench(const CommonOpts& opt) {
    Config cfg;
    const ExperimentConfig e = load(opt, cfg);
    const bool strict = cfg.get_bool("bench.strict", false);
    const BoundednessReport rep = boundedness_experiment(e);
    write_text(opt.out, report_json(rep, now_utc()));
    if (!opt.out.empty())
        std::cout << "max ratio " << format_sig17(rep.max_ratio) << ", report hash "
                  << rep.report_hash << ", written to " << opt.out << "\n";
    if (strict && !rep.stable) {
        std::cerr << "seed-group peaks are unstable (max > 3x median)\n";
        return 2;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"discretized multilinear frequency-symbol operator toolbox"};
    app.require_subcommand(1);
    CommonOpts opt;

    auto add_common = [&opt](CLI::App* sub, bool out_required) {
        sub->add_option("--config", opt.config, "experiment description file (TOML subset)")
            ->required();
        auto* o = sub->add_option("--out", opt.out, "output file path");
        if (out_required) o->required();
        sub->add_option("--threads", opt.threads, "worker threads (0 = all hardware threads)");
        sub->add_option("--seed-override", opt.seed_override,
                        "replace the seed from the config (>= 0)");
    };

    CLI::App* c_apply = app.add_subcommand(
        "apply", "apply the operator to seeded band-limited inputs and dump the output samples");
    add_common(c_apply, true);
    CLI::App* c_norm =
        app.add_subcommand("norm", "tabulate the dyadic-band smoothness norm of the symbol");
    add_common(c_norm, true);
    CLI::App* c_classify = app.add_subcommand(
        "classify", "estimate derivative-decay constants of the symbol across frequency shells");
    add_common(c_classify, true);
    CLI::App* c_region = app.add_subcommand(
        "region", "sweep exponent points through the admissible region with exact arithmetic");
    add_common(c_region, true);
    CLI::App* c_decompose = app.add_subcommand(
        "decompose", "run the output-side band split and report its reconstruction certificate");
    add_common(c_decompose, false);
    CLI::App* c_bench = app.add_subcommand(
        "bench", "measure operator-to-input norm ratios over a random ensemble");
    add_common(c_bench, false);

    CLI11_PARSE(app, argc, argv);
    mpdo::set_thread_count(opt.threads);

    try {
        if (c_apply->parsed()) return run_apply(opt);
        if (c_norm->parsed()) return run_norm(opt);
        if (c_classify->parsed()) return run_classify(opt);
        if (c_region->parsed()) return run_region(opt);
        if (c_decompose->parsed()) return run_decompose(opt);
        if (c_bench->parsed()) return run_bench(opt);
    } catch (const mpdo::ConfigError& ex) {
        std::cerr << "config error: " << ex.what() << "\n";
        return 1;
    } catch (const mpdo::NumericError& ex) {
        std::cerr << "numeric error: " << ex.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
    return 0;
}
