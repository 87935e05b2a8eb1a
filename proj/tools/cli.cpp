// SPDX-License-Identifier: Apache-2.0
#include "cli.hpp"

#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gsac/arch_config.hpp"
#include "gsac/channel.hpp"
#include "gsac/codebook.hpp"
#include "gsac/errors.hpp"
#include "gsac/experiment.hpp"
#include "gsac/metrics.hpp"
#include "gsac/parallel.hpp"
#include "gsac/precoder.hpp"
#include "gsac/search.hpp"

namespace gsac::cli {

namespace {

struct DesignArgs {
    std::string channel;
    std::string cfg;
    std::string ant;
    std::string scheme = "gsac-sic";
    double snr_db = 0.0;
    int bits = 7;
    int grid_atoms = 64;
    std::string out;
};

struct SweepArgs {
    std::string config;
    std::string out;
    std::string trials_out;
    int workers = 0;
};

struct SearchArgs {
    int n_t = 0;
    int n_r = 0;
    int n_rf = 0;
    double snr_db = 0.0;
    int trials = 100;
    std::uint64_t seed = 1;
    int n_cl = 10;
    int n_ray = 5;
    double spread_deg = 7.5;
    PowerModel power;
    int workers = 0;
    std::string out;
};

std::ofstream open_output(const std::string& path) {
    std::ofstream os(path);
    if (!os)
        throw ValidationError("cannot write '" + path + "'");
    return os;
}

unsigned resolve_workers(int requested) {
    return requested > 0 ? static_cast<unsigned>(requested) : worker_count();
}

int run_partitions(int n, bool count_only, std::ostream& out) {
    if (count_only) {
        out << enumerate_partitions(n).size() << '\n';
        return kExitOk;
    }
    for_each_partition(n, [&](std::span<const int> p) { out << format_partition(p) << '\n'; });
    return kExitOk;
}

int run_design(const DesignArgs& a, std::ostream& out) {
    std::ifstream in(a.channel);
    if (!in)
        throw ValidationError("cannot open channel file '" + a.channel + "'");
    const ChannelMatrix h = channel_from_matrix(read_channel_csv(in));
    const std::vector<int> rf = parse_partition(a.cfg);
    std::optional<std::vector<int>> ant;
    if (!a.ant.empty())
        ant = parse_partition(a.ant);

    const Scheme scheme = parse_scheme(a.scheme);
    const double snr = db_to_linear(a.snr_db);
    HybridPrecoder prec;
    switch (scheme) {
    case Scheme::GsacSic:
    case Scheme::GsacSicEqualRf: prec = design_sic_hybrid(h, make_config(h.n_t(), rf, ant), snr); break;
    case Scheme::SacSic: {
        const GsacConfig given = make_config(h.n_t(), rf, ant);
        prec = design_sic_hybrid(h, sub_array_connected(h.n_t(), given.n_rf_total), snr);
        break;
    }
    case Scheme::GsacCodebook: {
        const GsacConfig cfg = make_config(h.n_t(), rf, ant);
        prec = quantize_analog(design_unconstrained(h, cfg, snr), build_codebook(cfg, a.bits));
        break;
    }
    case Scheme::GsacOpt: {
        // No hybrid split exists: F_opt is written as F_RF with an identity F_BB.
        const GsacConfig cfg = make_config(h.n_t(), rf, ant);
        prec.cfg = cfg;
        prec.f_rf = design_unconstrained(h, cfg, snr).f_opt;
        prec.f_bb = CMatrix::Identity(cfg.n_rf_total, cfg.n_rf_total);
        prec.f = prec.f_rf;
        break;
    }
    case Scheme::FcOmp: {
        const GsacConfig given = make_config(h.n_t(), rf, ant);
        const auto dict = grid_dictionary(h.n_t(), a.grid_atoms);
        prec = design_fc_omp(h, given.n_rf_total, snr, dict);
        break;
    }
    }

    const double rate = achievable_rate(h, prec.f, LinkBudget{snr, prec.n_s()});
    if (a.out.empty()) {
        write_precoder_csv(out, prec, a.scheme);
        out << "# ";
    } else {
        auto os = open_output(a.out);
        write_precoder_csv(os, prec, a.scheme);
    }
    out << std::setprecision(std::numeric_limits<double>::max_digits10) << "rate=" << rate << '\n';
    return kExitOk;
}

int run_sweep(const SweepArgs& a, std::ostream& out) {
    const ExperimentSpec spec = load_experiment_spec(a.config);
    const ExperimentResult result = run_experiment(spec, resolve_workers(a.workers));
    if (a.out.empty()) {
        write_aggregate_csv(out, result);
    } else {
        auto os = open_output(a.out);
        write_aggregate_csv(os, result);
    }
    if (!a.trials_out.empty()) {
        auto os = open_output(a.trials_out);
        write_trials_csv(os, result);
    }
    return kExitOk;
}

int run_search(const SearchArgs& a, std::ostream& out) {
    ChannelParams ch;
    ch.n_cl = a.n_cl;
    ch.n_ray = a.n_ray;
    ch.spread = a.spread_deg * kPi / 180.0;
    const SearchReport report = search_best_config(a.n_t, a.n_r, a.n_rf, ch, LinkBudget{db_to_linear(a.snr_db), a.n_rf},
                                                   a.power, SearchOptions{a.trials, a.seed, resolve_workers(a.workers)});
    if (a.out.empty()) {
        write_search_csv(out, report);
    } else {
        auto os = open_output(a.out);
        write_search_csv(os, report);
        out << winner_summary(report) << '\n';
    }
    return kExitOk;
}

} // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Generalized sub-array-connected hybrid precoding toolkit"};
    app.require_subcommand(1);

    int partitions_n = 0;
    bool partitions_count = false;
    auto* partitions = app.add_subcommand("partitions", "List RF-chain configurations (integer partitions)");
    partitions->add_option("n", partitions_n, "Total number of RF chains")->required();
    partitions->add_flag("--count", partitions_count, "Print only the number of partitions");

    DesignArgs design_args;
    auto* design = app.add_subcommand("design", "Design a precoder for a channel file");
    design->add_option("--channel", design_args.channel, "Channel CSV")->required();
    design->add_option("--cfg", design_args.cfg, "RF chains per sub-array, e.g. \"(2,2)\"")->required();
    design->add_option("--ant", design_args.ant, "Antennas per sub-array (default: proportional)");
    design->add_option("--scheme", design_args.scheme,
                       "gsac-sic | gsac-opt | gsac-codebook | sac-sic | fc-omp | gsac-sic-equal-rf");
    design->add_option("--snr-db", design_args.snr_db, "SNR in dB");
    design->add_option("--bits", design_args.bits, "Codebook bits for gsac-codebook");
    design->add_option("--omp-grid-atoms", design_args.grid_atoms, "Grid dictionary size for fc-omp");
    design->add_option("--out", design_args.out, "Precoder CSV output (default: stdout)");

    SweepArgs sweep_args;
    auto* sweep = app.add_subcommand("sweep", "Run an experiment file");
    sweep->add_option("config", sweep_args.config, "Experiment file")->required();
    sweep->add_option("--out", sweep_args.out, "Aggregate CSV output (default: stdout)");
    sweep->add_option("--trials-out", sweep_args.trials_out, "Per-trial CSV output");
    sweep->add_option("--workers", sweep_args.workers, "Worker threads (default: GSAC_WORKERS or all cores)");

    SearchArgs search_args;
    auto* search = app.add_subcommand("search", "Exhaustive energy-efficiency search over RF configurations");
    search->add_option("--n-t", search_args.n_t, "Transmit antennas")->required();
    search->add_option("--n-r", search_args.n_r, "Receive antennas")->required();
    search->add_option("--n-rf", search_args.n_rf, "Total RF chains")->required();
    search->add_option("--snr-db", search_args.snr_db, "SNR in dB");
    search->add_option("--trials", search_args.trials, "Channel realizations per candidate");
    search->add_option("--seed", search_args.seed, "Base seed");
    search->add_option("--n-cl", search_args.n_cl, "Clusters");
    search->add_option("--n-ray", search_args.n_ray, "Rays per cluster");
    search->add_option("--spread-deg", search_args.spread_deg, "Angular spread (degrees)");
    search->add_option("--p-co", search_args.power.p_co, "Common power (W)");
    search->add_option("--p-rf", search_args.power.p_rf, "Power per RF chain (W)");
    search->add_option("--p-pa", search_args.power.p_pa, "Power per amplifier (W)");
    search->add_option("--p-ps", search_args.power.p_ps, "Power per phase shifter (W)");
    search->add_option("--workers", search_args.workers, "Worker threads");
    search->add_option("--out", search_args.out, "Report CSV output (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (*partitions)
            return run_partitions(partitions_n, partitions_count, out);
        if (*design)
            return run_design(design_args, out);
        if (*sweep)
            return run_sweep(sweep_args, out);
        if (*search)
            return run_search(search_args, out);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitValidation;
}

} // namespace gsac::cli
