#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cohmms/generators.hpp"
#include "cohmms/policy.hpp"

namespace cohmms {

/// One Monte Carlo run: for each n in n_range, `samples` random Euclidean
/// spaces are generated, closed, and certified. Fully determined by the
/// config: per-sample seeds are derived as hash(seed, n, sample_index).
struct ExperimentConfig {
    std::vector<int> n_range;
    int samples = 1;
    int dim = 2;
    MeasureMode measure = MeasureMode::Uniform;
    std::uint64_t seed = 0;
    NumericPolicy policy = NumericPolicy::floating();
    std::string rows_path;    // CSV, one row per sample
    std::string summary_path; // JSON aggregate (optional)
    int separation_N_max = 4;
};

struct ExperimentRow {
    int n = 0;
    int sample_index = 0;
    bool full = false;
    int class_count = 0;
    std::optional<int> N_min;
    std::optional<double> min_margin;
    bool off_diag_injective = false;
    bool diag_power2_injective = false;
    double elapsed_ms = 0.0; // kept out of the CSV so artifacts stay byte-stable
};

struct ExperimentSummaryPerN {
    int n = 0;
    int samples = 0;
    double fraction_full = 0.0;
    double fraction_density = 0.0;
    double mean_class_count = 0.0;
};

struct ExperimentResult {
    std::vector<ExperimentRow> rows;
    std::vector<ExperimentSummaryPerN> summary;
    double elapsed_ms = 0.0;
};

/// The CSV header written ahead of the rows.
std::string experiment_csv_header();
std::string experiment_csv_row(const ExperimentRow& row);

/// Runs the experiment. Samples execute on a bounded worker pool
/// (COHMMS_THREADS, default hardware concurrency); rows are flushed to the
/// CSV sink one by one in (n, sample_index) order, so interrupted runs keep
/// their completed prefix and complete runs are byte-identical across
/// repetitions and thread counts.
ExperimentResult run_montecarlo(const ExperimentConfig& config);

std::string experiment_summary_json(const ExperimentConfig& config, const ExperimentResult& result);

} // namespace cohmms
