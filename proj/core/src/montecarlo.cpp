#include "cohmms/montecarlo.hpp"

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "cohmms/closure.hpp"
#include "cohmms/format.hpp"
#include "cohmms/genericity.hpp"
#include "cohmms/rng.hpp"

namespace cohmms {

namespace {

int worker_count() {
    if (const char* env = std::getenv("COHMMS_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

template <class T>
ExperimentRow evaluate_sample(const FiniteMMS<T>& space, int n, int index,
                              const ExperimentConfig& config) {
    const auto started = std::chrono::steady_clock::now();
    ExperimentRow row;
    row.n = n;
    row.sample_index = index;

    SpacePtr<T> sp = share(space);
    CoherentPartition<T> part = coherent_closure(sp, config.policy);
    row.class_count = part.class_count;
    row.full = (part.class_count == part.cells());

    PowerCache<T> cache(sp);
    auto profile = separation_profile(sp, config.separation_N_max, config.policy, &cache);
    row.N_min = profile.N_min;
    if (profile.margin) row.min_margin = to_double(*profile.margin);
    auto density = density_condition(sp, config.policy, &cache);
    row.off_diag_injective = density.off_diag_injective;
    row.diag_power2_injective = density.diag_power2_injective;

    row.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
            .count();
    return row;
}

ExperimentRow run_sample(const ExperimentConfig& config, int n, int index) {
    const std::uint64_t sample_seed = hash_seed(config.seed, static_cast<std::uint64_t>(n),
                                                static_cast<std::uint64_t>(index));
    FiniteMMS<double> space = random_euclidean(n, config.dim, sample_seed, config.measure);
    if (config.policy.mode == NumericMode::ExactRational) {
        return evaluate_sample(rationalize(space), n, index, config);
    }
    return evaluate_sample(space, n, index, config);
}

} // namespace

std::string experiment_csv_header() {
    return "n,sample_index,full,class_count,N_min,min_margin,off_diag_injective,"
           "diag_power2_injective";
}

std::string experiment_csv_row(const ExperimentRow& row) {
    std::ostringstream os;
    os << row.n << ',' << row.sample_index << ',' << (row.full ? 1 : 0) << ',' << row.class_count
       << ',';
    if (row.N_min) os << *row.N_min;
    os << ',';
    if (row.min_margin) os << format_sig12(*row.min_margin);
    os << ',' << (row.off_diag_injective ? 1 : 0) << ',' << (row.diag_power2_injective ? 1 : 0);
    return os.str();
}

ExperimentResult run_montecarlo(const ExperimentConfig& config) {
    if (config.samples < 1) throw StructuralError("config.samples must be >= 1");
    if (config.n_range.empty()) throw StructuralError("config.n_range must not be empty");
    for (int n : config.n_range)
        if (n < 1) throw StructuralError("config.n_range entries must be >= 1");

    const auto started = std::chrono::steady_clock::now();

    struct Task {
        int n;
        int index;
    };
    std::vector<Task> tasks;
    for (int n : config.n_range)
        for (int s = 0; s < config.samples; ++s) tasks.push_back({n, s});

    std::vector<std::optional<ExperimentRow>> slots(tasks.size());
    std::mutex mutex;
    std::condition_variable ready;
    std::atomic<size_t> cursor{0};
    std::exception_ptr failure;

    const int workers = std::min<int>(worker_count(), static_cast<int>(tasks.size()));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            while (true) {
                const size_t k = cursor.fetch_add(1);
                if (k >= tasks.size()) return;
                try {
                    ExperimentRow row = run_sample(config, tasks[k].n, tasks[k].index);
                    std::lock_guard<std::mutex> lock(mutex);
                    slots[k] = std::move(row);
                    ready.notify_all();
                } catch (...) {
                    std::lock_guard<std::mutex> lock(mutex);
                    if (!failure) failure = std::current_exception();
                    slots[k] = ExperimentRow{}; // unblock the writer
                    ready.notify_all();
                }
            }
        });
    }

    // Single serialized sink: rows leave in task order and are flushed one by
    // one, so a crash keeps the completed prefix.
    std::ofstream csv;
    if (!config.rows_path.empty()) {
        csv.open(config.rows_path, std::ios::binary | std::ios::trunc);
        if (!csv) {
            cursor.store(tasks.size());
            for (auto& t : pool) t.join();
            throw StructuralError("cannot write '" + config.rows_path + "'");
        }
        csv << experiment_csv_header() << '\n';
        csv.flush();
    }

    ExperimentResult result;
    result.rows.reserve(tasks.size());
    for (size_t k = 0; k < tasks.size(); ++k) {
        std::unique_lock<std::mutex> lock(mutex);
        ready.wait(lock, [&] { return slots[k].has_value(); });
        ExperimentRow row = std::move(*slots[k]);
        lock.unlock();
        if (csv.is_open()) {
            csv << experiment_csv_row(row) << '\n';
            csv.flush();
        }
        result.rows.push_back(std::move(row));
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    for (int n : config.n_range) {
        ExperimentSummaryPerN s;
        s.n = n;
        long long full = 0, density = 0, classes = 0;
        for (const auto& row : result.rows) {
            if (row.n != n) continue;
            ++s.samples;
            if (row.full) ++full;
            if (row.off_diag_injective && row.diag_power2_injective) ++density;
            classes += row.class_count;
        }
        s.fraction_full = static_cast<double>(full) / s.samples;
        s.fraction_density = static_cast<double>(density) / s.samples;
        s.mean_class_count = static_cast<double>(classes) / s.samples;
        result.summary.push_back(s);
    }

    result.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
            .count();

    if (!config.summary_path.empty()) {
        std::ofstream out(config.summary_path, std::ios::binary | std::ios::trunc);
        if (!out) throw StructuralError("cannot write '" + config.summary_path + "'");
        out << experiment_summary_json(config, result);
    }
    return result;
}

std::string experiment_summary_json(const ExperimentConfig& config,
                                    const ExperimentResult& result) {
    nlohmann::json doc;
    doc["config"]["n_range"] = config.n_range;
    doc["config"]["samples"] = config.samples;
    doc["config"]["dim"] = config.dim;
    doc["config"]["measure"] =
        config.measure == MeasureMode::Uniform ? "uniform" : "random-simplex";
    doc["config"]["seed"] = config.seed;
    doc["config"]["mode"] =
        config.policy.mode == NumericMode::ExactRational ? "exact-rational" : "float";
    doc["config"]["separation_N_max"] = config.separation_N_max;

    nlohmann::json per_n = nlohmann::json::array();
    for (const auto& s : result.summary) {
        per_n.push_back({{"n", s.n},
                         {"samples", s.samples},
                         {"fraction_full", s.fraction_full},
                         {"fraction_density", s.fraction_density},
                         {"mean_class_count", s.mean_class_count}});
    }
    doc["per_n"] = std::move(per_n);
    doc["rows"] = result.rows.size();
    doc["elapsed_ms"] = result.elapsed_ms;
    return doc.dump(2) + "\n";
}

} // namespace cohmms
