// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gsac/channel.hpp"
#include "gsac/metrics.hpp"

namespace gsac {

enum class SweepAxis { SnrDb, NumAntennas, NumSubArrays, RfPerSubArray, Bits };

enum class Scheme { GsacSic, GsacOpt, GsacCodebook, SacSic, FcOmp, GsacSicEqualRf };

enum class OmpDictionary { TrueAod, Grid };

const char* to_string(SweepAxis axis) noexcept;
const char* to_string(Scheme scheme) noexcept;

/// Parses the names used in config files ("snr_db", "gsac-sic", ...).
/// Throws ParseError.
SweepAxis parse_sweep_axis(std::string_view name);
Scheme parse_scheme(std::string_view name);

/// Declarative Monte-Carlo sweep.
///
/// Axis semantics:
///   snr_db  values are SNRs in dB; gsac-* schemes run every rf_config.
///   n_t     values are transmit antenna counts; rf_configs fixed.
///   n_sub   values are sub-array counts; each sub-array gets n_rf_i chains.
///   n_rf_i  values are chains per sub-array over n_sub sub-arrays.
///   bits    values are codebook resolutions for gsac-codebook.
struct ExperimentSpec {
    std::string id = "experiment";
    SweepAxis axis = SweepAxis::SnrDb;
    std::vector<double> values;
    /// Linear SNR per sweep point, converted from dB once at parse time.
    std::vector<double> snr_linear;

    int n_t = 0;
    int n_r = 0;
    int n_rf = 0;
    double snr_db = 0.0;

    ChannelParams channel; // n_t, n_r and seed are set per trial
    PowerModel power;

    std::vector<Scheme> schemes;
    std::vector<std::vector<int>> rf_configs;
    int bits = 7;
    int n_sub = 2;
    int n_rf_i = 2;
    OmpDictionary omp_dictionary = OmpDictionary::TrueAod;
    int omp_grid_atoms = 64;

    int trials = 200;
    std::uint64_t seed = 1;
};

/// Parses "key = value" lines; '#' starts a comment. Unknown or repeated
/// keys are errors. The result is validated.
ExperimentSpec parse_experiment_spec(std::istream& is);
ExperimentSpec load_experiment_spec(const std::string& path);

/// Throws ValidationError when the experiment cannot run (bad sizes, a config
/// that does not sum to N_RF, an indivisible antenna split, ...).
void validate_experiment_spec(const ExperimentSpec& spec);

/// One Monte-Carlo sample of one scheme.
struct TrialRecord {
    std::string experiment;
    std::string scheme;
    std::string cfg;
    double sweep_value = 0.0;
    int trial = 0;
    std::uint64_t seed = 0;
    double rate = 0.0;  // bits/s/Hz
    double power = 0.0; // W
    double ee = 0.0;    // bits/s/Hz/W
    std::uint64_t channel_hash = 0;
    std::string error; // non-empty when the design failed
};

struct AggregateRow {
    std::string experiment;
    std::string scheme;
    std::string cfg;
    double sweep_value = 0.0;
    double mean_rate = 0.0;
    double std_rate = 0.0;
    double power_w = 0.0;
    double mean_ee = 0.0;
    int trials = 0; // successful trials
};

struct ExperimentResult {
    SweepAxis axis = SweepAxis::SnrDb;
    std::vector<TrialRecord> records;     // ordered by sweep value, scheme, cfg, trial
    std::vector<AggregateRow> aggregates; // one per (sweep value, scheme, cfg)
};

/// Runs every sweep point x scheme x trial. Within a trial all schemes see
/// the same channel (seed derive_seed(spec.seed, trial)). Design failures
/// are recorded in the row's error field and the run continues.
ExperimentResult run_experiment(const ExperimentSpec& spec, unsigned workers = 1);

/// Groups consecutive records sharing (sweep value, scheme, cfg); mean and
/// sample standard deviation over error-free trials.
std::vector<AggregateRow> aggregate(const std::vector<TrialRecord>& records);

/// experiment,scheme,cfg,<axis>,mean_rate,std_rate,power_w,mean_ee,trials
void write_aggregate_csv(std::ostream& os, const ExperimentResult& result);

/// experiment,scheme,cfg,<axis>,trial,seed,rate,power_w,ee,channel_hash,error
void write_trials_csv(std::ostream& os, const ExperimentResult& result);

} // namespace gsac
