#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "blockbeta/asymptotics.hpp"
#include "blockbeta/core.hpp"

namespace blockbeta {

/// Malformed config, CSV or manifest.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Estimated hull work above the allowed budget.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// 12 points geometric from 1e2 to 1e5.
std::vector<std::int64_t> default_n_grid();

struct ExperimentConfig {
    std::vector<int> block_dims;
    /// Canonical text per block: an exact rational ("1/2", "0.25") or a %.17g real.
    std::vector<std::string> betas;
    std::vector<std::int64_t> n_grid = default_n_grid();
    int reps_per_n = 10;
    std::uint64_t root_seed = 0;
    bool record_f_vector = true;
    bool record_volume_deficit = false;
    int workers = 1;

    /// Unknown keys, wrong types and violated invariants raise FormatError.
    static ExperimentConfig from_json_text(const std::string& text);
    static ExperimentConfig load(const std::filesystem::path& path);
    /// Canonical JSON (sorted keys, compact).
    std::string to_json_text() const;

    BlockStructure block_structure() const;
    /// Exact rationals when every beta parses as one, reals otherwise.
    BetaParams beta_params() const;
    void validate() const;
    /// FNV-1a 64 of the canonical JSON without `workers` (which cannot affect results), hex.
    std::string hash() const;
    /// sum over n of n * reps * d!
    double estimated_cost() const;
};

/// One (n, rep) replication.
struct Sample {
    std::int64_t n = 0;
    int rep = 0;
    std::vector<std::int64_t> f;  // empty when f_vector is not recorded
    double volume_deficit = 0.0;  // NaN when not recorded
    std::uint64_t seed_stream = 0;
};

struct Aggregate {
    std::int64_t n = 0;
    int reps = 0;
    std::vector<double> f_mean, f_se;
    double volume_deficit_mean = 0.0, volume_deficit_se = 0.0;
};

struct RunRecord {
    ExperimentConfig config;
    std::string config_hash;
    std::string version;
    double wall_seconds = 0.0;
    std::vector<Sample> samples;       // (n, rep) order
    std::vector<Aggregate> aggregates;  // n order
};

/// Mean and standard error per n, reduced in rep order.
std::vector<Aggregate> aggregate(const ExperimentConfig& cfg, const std::vector<Sample>& samples);

struct SimulateOptions {
    double budget = 1e9;
    bool budget_override = false;
    /// Receives retry notices; may be empty.
    std::function<void(const std::string&)> log;
};

/// Stream of task t (position in (n, rep) order) on attempt a.
inline std::uint64_t task_stream(std::uint64_t task, std::uint64_t attempt) { return task + (attempt << 40); }

/// Runs every (n, rep) on a pool of cfg.workers threads. Output is independent
/// of the worker count.
RunRecord simulate(const ExperimentConfig& cfg, const SimulateOptions& opt = {});

/// header n,rep,f_0,...,f_{d-1},volume_deficit,seed_stream; reals as %.17g.
void write_csv(std::ostream& out, const ExperimentConfig& cfg, const std::vector<Sample>& samples);
std::vector<Sample> read_csv(std::istream& in, const ExperimentConfig& cfg);

/// samples.csv + manifest.json in `dir` (created if needed).
void write_record(const std::filesystem::path& dir, const RunRecord& rec);
/// Accepts the record directory or its manifest.json. Aggregates are recomputed
/// from the CSV and must equal the stored ones exactly.
RunRecord read_record(const std::filesystem::path& path);

struct FitSummary {
    RatePrediction predicted;
    int log_power = 0;
    RateFitPair f0;
    std::string str() const;
};

/// f_0 means against the predicted rate. log_power < 0 means the predicted one.
FitSummary fit_record(const RunRecord& rec, int log_power = -1);

/// Writes plot.gp plus one data file per record into `dir`; returns the script path.
std::filesystem::path write_plot(const std::vector<RunRecord>& records, const std::filesystem::path& dir);

}  // namespace blockbeta
