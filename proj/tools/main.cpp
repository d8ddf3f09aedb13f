// cohmms: coherent algebras of finite metric measure spaces.
//
// Subcommands: validate, generate, closure, fullness, genericity, laplacian,
// census, distance, montecarlo. Spaces travel as JSON documents; see the
// README for the format. Exit codes: 0 success, 1 invariant violations
// reported as findings, 2 usage or structural errors.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cohmms/closure_io.hpp"
#include "cohmms/generators.hpp"
#include "cohmms/genericity.hpp"
#include "cohmms/isometry.hpp"
#include "cohmms/laplacian.hpp"
#include "cohmms/montecarlo.hpp"
#include "cohmms/space_io.hpp"
#include "cohmms/transport.hpp"

using json = nlohmann::json;
using namespace cohmms;

namespace {

struct PolicyFlags {
    std::string mode = "float";
    double tol_group = 1e-9;
    double tol_metric = 1e-9;
    double tol_mass = 1e-9;

    NumericPolicy policy() const {
        if (mode == "exact") return NumericPolicy::exact();
        NumericPolicy p = NumericPolicy::floating();
        p.tol_group = tol_group;
        p.tol_metric = tol_metric;
        p.tol_mass = tol_mass;
        return p;
    }
    bool exact() const { return mode == "exact"; }
};

void add_policy_flags(CLI::App* cmd, PolicyFlags& flags) {
    cmd->add_option("--mode", flags.mode, "Numeric mode: float or exact")
        ->check(CLI::IsMember({"float", "exact"}))
        ->capture_default_str();
    cmd->add_option("--tol-group", flags.tol_group, "Float-mode value grouping tolerance")
        ->capture_default_str();
    cmd->add_option("--tol-metric", flags.tol_metric, "Triangle inequality tolerance")
        ->capture_default_str();
    cmd->add_option("--tol-mass", flags.tol_mass, "Mass normalization tolerance")
        ->capture_default_str();
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
    } else {
        write_text_file(out_path, text);
    }
}

json cell_json(const Cell& c, const std::vector<std::string>& labels) {
    return json{{"x", c.x}, {"y", c.y}, {"x_label", labels[c.x]}, {"y_label", labels[c.y]}};
}

template <class T>
json fullness_json(const CoherentPartition<T>& part) {
    auto cert = fullness(part);
    json doc{{"full", cert.full},
             {"class_count", cert.class_count},
             {"cell_count", cert.cell_count},
             {"consequence", cert.consequence}};
    if (cert.witness) {
        doc["witness"] = json::array({cell_json(cert.witness->first, part.space->labels),
                                      cell_json(cert.witness->second, part.space->labels)});
    }
    return doc;
}

int cmd_validate(const std::string& path, const PolicyFlags& flags) {
    json doc;
    ValidationReport report;
    if (flags.exact()) {
        auto space = load_space_exact(path);
        report = validate(space, flags.policy());
    } else {
        auto space = load_space_float(path);
        report = validate(space, flags.policy());
    }
    doc["valid"] = report.ok();
    json violations = json::array();
    for (const auto& v : report.violations) {
        violations.push_back({{"message", v.message}, {"i", v.i}, {"j", v.j}, {"k", v.k}});
    }
    doc["violations"] = std::move(violations);
    std::cout << doc.dump(2) << '\n';
    return report.ok() ? 0 : 1;
}

int cmd_generate(int n, int dim, std::uint64_t seed, const std::string& measure,
                 const std::string& out, const PolicyFlags& flags) {
    const MeasureMode mode =
        measure == "random-simplex" ? MeasureMode::RandomSimplex : MeasureMode::Uniform;
    auto space = random_euclidean(n, dim, seed, mode);
    if (flags.exact()) {
        emit(write_space_json(rationalize(space)), out);
    } else {
        emit(write_space_json(space), out);
    }
    return 0;
}

template <class T>
int closure_impl(const FiniteMMS<T>& space, const PolicyFlags& flags, const std::string& out,
                 const std::string& csv, bool with_matrix) {
    auto part = coherent_closure(share(space), flags.policy());
    if (!csv.empty()) write_text_file(csv, partition_to_csv(part));
    if (with_matrix) {
        emit(partition_to_json(part), out);
    } else {
        json doc{{"class_count", part.class_count},
                 {"full", part.class_count == part.cells()},
                 {"rounds", part.rounds},
                 {"warnings", part.warnings}};
        emit(doc.dump(2), out);
    }
    return 0;
}

template <class T>
int fullness_impl(const FiniteMMS<T>& space, const PolicyFlags& flags, const std::string& out) {
    auto part = coherent_closure(share(space), flags.policy());
    emit(fullness_json(part).dump(2), out);
    return 0;
}

template <class T>
int genericity_impl(const FiniteMMS<T>& space, const PolicyFlags& flags, int N, int m, int p,
                    int profile_nmax, const std::string& out) {
    auto sp = share(space);
    PowerCache<T> cache(sp);
    auto cert = check_nmp(sp, N, m, p, &cache);
    auto profile = separation_profile(sp, profile_nmax, flags.policy(), &cache);
    auto density = density_condition(sp, flags.policy(), &cache);

    json doc;
    doc["nmp"] = {{"satisfied", cert.satisfied},
                  {"N", cert.N_used},
                  {"m", cert.m},
                  {"p", cert.p},
                  {"pairs_checked", cert.pairs_checked}};
    if (cert.min_margin) doc["nmp"]["min_margin"] = to_double(*cert.min_margin);
    if (cert.worst_pair) {
        doc["nmp"]["worst_pair"] = json::array({cell_json(cert.worst_pair->first, sp->labels),
                                                cell_json(cert.worst_pair->second, sp->labels)});
    }
    if (profile.N_min) {
        doc["separation"]["N_min"] = *profile.N_min;
        if (profile.margin) doc["separation"]["margin"] = to_double(*profile.margin);
    } else {
        doc["separation"]["N_min"] = nullptr;
    }
    doc["density"] = {{"off_diag_injective", density.off_diag_injective},
                      {"diag_power2_injective", density.diag_power2_injective}};
    emit(doc.dump(2), out);
    return 0;
}

template <class T>
int laplacian_impl(const FiniteMMS<T>& space, const PolicyFlags& flags,
                   const std::string& checks, int trials, std::uint64_t seed,
                   const std::string& out) {
    auto sp = share(space);
    auto bundle = build_laplacian(sp, flags.policy());
    const bool all = checks.empty() || checks == "all";
    auto wants = [&](const std::string& name) {
        return all || checks.find(name) != std::string::npos;
    };

    json doc;
    if (wants("membership")) {
        auto part = coherent_closure(sp, flags.policy());
        auto [ok, bad_class] = membership_check(bundle, part, flags.policy());
        doc["membership"] = {{"belongs", ok}, {"class_count", part.class_count}};
        if (!ok) doc["membership"]["violating_class"] = bad_class;
    }
    if (wants("variational")) {
        doc["variational"] = {{"max_relative_residual", variational_check(bundle, trials, seed)},
                              {"trials", trials}};
    }
    if (wants("psd")) {
        double min_eig = 0.0, norm = 0.0;
        const bool ok = laplacian_psd(bundle, 1e-9, &min_eig, &norm);
        doc["psd"] = {{"positive_semidefinite", ok},
                      {"min_eigenvalue", min_eig},
                      {"spectral_norm", norm}};
    }
    if (wants("hadamard")) {
        doc["hadamard_inverse"] = {{"max_residual", hadamard_inverse_identity(sp, flags.policy())}};
    }
    emit(doc.dump(2), out);
    return 0;
}

template <class T>
int census_impl(const FiniteMMS<T>& space, double a, double b, bool weighted,
                const std::string& out) {
    auto sp = share(space);
    auto kernel = interval_census(sp, scalar_from_double<T>(a), scalar_from_double<T>(b),
                                  weighted);
    emit(kernel_to_csv(kernel), out);
    return 0;
}

template <class T>
json map_table_json(const MapScore<T>& score, const std::vector<std::string>& x_labels,
                    const std::vector<std::string>& y_labels) {
    json table = json::array();
    for (size_t i = 0; i < score.map.size(); ++i) {
        table.push_back({{"from", x_labels[i]}, {"to", y_labels[score.map[i]]}});
    }
    return table;
}

template <class T>
int distance_impl(const FiniteMMS<T>& a, const FiniteMMS<T>& b, double p, double budget,
                  bool symmetrize, const PolicyFlags& flags, const std::string& out) {
    auto sa = share(a);
    auto sb = share(b);
    auto est = dp_estimate(sa, sb, p, budget, flags.policy());
    json doc{{"upper", to_double(est.upper)},
             {"exact", est.exact},
             {"maps_evaluated", est.maps_evaluated},
             {"map", map_table_json(est.best, sa->labels, sb->labels)},
             {"components",
              {{"distortion", to_double(est.best.distortion)},
               {"covering", to_double(est.best.covering)},
               {"wasserstein", to_double(est.best.wp)}}}};
    if (symmetrize) {
        auto back = dp_estimate(sb, sa, p, budget, flags.policy());
        doc["reverse_upper"] = to_double(back.upper);
        doc["symmetrized"] = to_double(T(est.upper + back.upper));
    }
    emit(doc.dump(2), out);
    return 0;
}

std::vector<int> parse_n_range(const std::string& text) {
    std::vector<int> out;
    const auto colon = text.find(':');
    if (colon != std::string::npos) {
        const int lo = std::stoi(text.substr(0, colon));
        const int hi = std::stoi(text.substr(colon + 1));
        if (lo < 1 || hi < lo) throw StructuralError("bad --n-range '" + text + "'");
        for (int n = lo; n <= hi; ++n) out.push_back(n);
        return out;
    }
    size_t pos = 0;
    while (pos < text.size()) {
        const auto comma = text.find(',', pos);
        const std::string tok = text.substr(pos, comma == std::string::npos ? std::string::npos
                                                                            : comma - pos);
        out.push_back(std::stoi(tok));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) throw StructuralError("empty --n-range");
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"coherent algebras of finite metric measure spaces"};
    app.require_subcommand(1);

    // validate
    PolicyFlags validate_flags;
    std::string validate_space;
    auto* validate_cmd = app.add_subcommand("validate", "Check the metric measure space axioms");
    validate_cmd->add_option("--space", validate_space, "Space JSON file")->required();
    add_policy_flags(validate_cmd, validate_flags);

    // generate
    PolicyFlags generate_flags;
    int gen_n = 4, gen_dim = 2;
    std::uint64_t gen_seed = 0;
    std::string gen_measure = "uniform", gen_out;
    auto* generate_cmd = app.add_subcommand("generate", "Sample a random Euclidean space");
    generate_cmd->add_option("--n", gen_n, "Number of points")->required();
    generate_cmd->add_option("--dim", gen_dim, "Embedding dimension")->capture_default_str();
    generate_cmd->add_option("--seed", gen_seed, "Random seed")->capture_default_str();
    generate_cmd->add_option("--measure", gen_measure, "uniform or random-simplex")
        ->check(CLI::IsMember({"uniform", "random-simplex"}))
        ->capture_default_str();
    generate_cmd->add_option("--out", gen_out, "Output path (default stdout)");
    add_policy_flags(generate_cmd, generate_flags);

    // closure
    PolicyFlags closure_flags;
    std::string closure_space, closure_out, closure_csv;
    bool closure_matrix = false;
    auto* closure_cmd = app.add_subcommand("closure", "Compute the coherent partition");
    closure_cmd->add_option("--space", closure_space, "Space JSON file")->required();
    closure_cmd->add_option("--out", closure_out, "Output path (default stdout)");
    closure_cmd->add_option("--csv", closure_csv, "Also export (x_label,y_label,class_id) CSV");
    closure_cmd->add_flag("--matrix", closure_matrix, "Include the full class_of matrix");
    add_policy_flags(closure_cmd, closure_flags);

    // fullness
    PolicyFlags fullness_flags;
    std::string fullness_space, fullness_out;
    auto* fullness_cmd = app.add_subcommand("fullness", "Fullness certificate for a space");
    fullness_cmd->add_option("--space", fullness_space, "Space JSON file")->required();
    fullness_cmd->add_option("--out", fullness_out, "Output path (default stdout)");
    add_policy_flags(fullness_cmd, fullness_flags);

    // genericity
    PolicyFlags gener_flags;
    std::string gener_space, gener_out;
    int gener_N = 4, gener_m = 1, gener_p = 100, gener_profile_nmax = 4;
    auto* gener_cmd = app.add_subcommand("genericity", "(N, m, p) separation certificate");
    gener_cmd->add_option("--space", gener_space, "Space JSON file")->required();
    gener_cmd->add_option("--N", gener_N, "Largest convolution power")->capture_default_str();
    gener_cmd->add_option("--m", gener_m, "Threshold parameter (1/m)")->capture_default_str();
    gener_cmd->add_option("--p", gener_p, "Margin parameter (1/p)")->capture_default_str();
    gener_cmd->add_option("--profile-nmax", gener_profile_nmax, "Cap for the separation profile")
        ->capture_default_str();
    gener_cmd->add_option("--out", gener_out, "Output path (default stdout)");
    add_policy_flags(gener_cmd, gener_flags);

    // laplacian
    PolicyFlags lap_flags;
    std::string lap_space, lap_checks = "all", lap_out;
    int lap_trials = 100;
    std::uint64_t lap_seed = 0;
    auto* lap_cmd = app.add_subcommand("laplacian", "Metric Laplacian checks");
    lap_cmd->add_option("--space", lap_space, "Space JSON file")->required();
    lap_cmd->add_option("--check", lap_checks,
                        "Comma list of membership,variational,psd,hadamard (default all)")
        ->capture_default_str();
    lap_cmd->add_option("--trials", lap_trials, "Variational trials")->capture_default_str();
    lap_cmd->add_option("--seed", lap_seed, "Variational seed")->capture_default_str();
    lap_cmd->add_option("--out", lap_out, "Output path (default stdout)");
    add_policy_flags(lap_cmd, lap_flags);

    // census
    PolicyFlags census_flags;
    std::string census_space, census_out;
    double census_a = 0.0, census_b = 0.0;
    bool census_weighted = false;
    auto* census_cmd = app.add_subcommand("census", "Interval census kernel M^2 as CSV");
    census_cmd->add_option("--space", census_space, "Space JSON file")->required();
    census_cmd->add_option("--a", census_a, "Interval left endpoint")->required();
    census_cmd->add_option("--b", census_b, "Interval right endpoint")->required();
    census_cmd->add_flag("--weighted", census_weighted, "Use mu-convolution instead of counting");
    census_cmd->add_option("--out", census_out, "Output path (default stdout)");
    add_policy_flags(census_cmd, census_flags);

    // distance
    PolicyFlags dist_flags;
    std::string dist_a, dist_b, dist_out;
    double dist_p = 1.0, dist_budget = 1e6;
    bool dist_sym = false;
    auto* dist_cmd = app.add_subcommand("distance", "D_p estimate between two spaces");
    dist_cmd->add_option("--a", dist_a, "First space JSON file")->required();
    dist_cmd->add_option("--b", dist_b, "Second space JSON file")->required();
    dist_cmd->add_option("--p", dist_p, "Wasserstein exponent")->capture_default_str();
    dist_cmd->add_option("--budget", dist_budget, "Map evaluation budget")->capture_default_str();
    dist_cmd->add_flag("--symmetrize", dist_sym, "Also report D_p(b, a) and the sum");
    dist_cmd->add_option("--out", dist_out, "Output path (default stdout)");
    add_policy_flags(dist_cmd, dist_flags);

    // montecarlo
    PolicyFlags mc_flags;
    std::string mc_range = "3:8", mc_measure = "uniform", mc_rows, mc_summary;
    int mc_samples = 200, mc_dim = 2, mc_nmax = 4;
    std::uint64_t mc_seed = 0;
    auto* mc_cmd = app.add_subcommand("montecarlo", "Fullness frequencies over random spaces");
    mc_cmd->add_option("--n-range", mc_range, "Sizes, e.g. 3:8 or 2,4,6")->capture_default_str();
    mc_cmd->add_option("--samples", mc_samples, "Samples per size")->capture_default_str();
    mc_cmd->add_option("--dim", mc_dim, "Embedding dimension")->capture_default_str();
    mc_cmd->add_option("--measure", mc_measure, "uniform or random-simplex")
        ->check(CLI::IsMember({"uniform", "random-simplex"}))
        ->capture_default_str();
    mc_cmd->add_option("--seed", mc_seed, "Base seed")->capture_default_str();
    mc_cmd->add_option("--rows", mc_rows, "CSV output path for per-sample rows");
    mc_cmd->add_option("--summary", mc_summary, "JSON output path for the aggregate");
    mc_cmd->add_option("--profile-nmax", mc_nmax, "Separation profile cap")->capture_default_str();
    add_policy_flags(mc_cmd, mc_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp" ||
            e.get_name() == "CallForVersion") {
            return app.exit(e);
        }
        std::cerr << e.what() << "\n\n" << app.help() << std::flush;
        return 2;
    }

    try {
        if (validate_cmd->parsed()) return cmd_validate(validate_space, validate_flags);
        if (generate_cmd->parsed())
            return cmd_generate(gen_n, gen_dim, gen_seed, gen_measure, gen_out, generate_flags);
        if (closure_cmd->parsed()) {
            if (closure_flags.exact())
                return closure_impl(load_space_exact(closure_space), closure_flags, closure_out,
                                    closure_csv, closure_matrix);
            return closure_impl(load_space_float(closure_space), closure_flags, closure_out,
                                closure_csv, closure_matrix);
        }
        if (fullness_cmd->parsed()) {
            if (fullness_flags.exact())
                return fullness_impl(load_space_exact(fullness_space), fullness_flags,
                                     fullness_out);
            return fullness_impl(load_space_float(fullness_space), fullness_flags, fullness_out);
        }
        if (gener_cmd->parsed()) {
            if (gener_flags.exact())
                return genericity_impl(load_space_exact(gener_space), gener_flags, gener_N,
                                       gener_m, gener_p, gener_profile_nmax, gener_out);
            return genericity_impl(load_space_float(gener_space), gener_flags, gener_N, gener_m,
                                   gener_p, gener_profile_nmax, gener_out);
        }
        if (lap_cmd->parsed()) {
            if (lap_flags.exact())
                return laplacian_impl(load_space_exact(lap_space), lap_flags, lap_checks,
                                      lap_trials, lap_seed, lap_out);
            return laplacian_impl(load_space_float(lap_space), lap_flags, lap_checks, lap_trials,
                                  lap_seed, lap_out);
        }
        if (census_cmd->parsed()) {
            if (census_flags.exact())
                return census_impl(load_space_exact(census_space), census_a, census_b,
                                   census_weighted, census_out);
            return census_impl(load_space_float(census_space), census_a, census_b,
                               census_weighted, census_out);
        }
        if (dist_cmd->parsed()) {
            if (dist_flags.exact())
                return distance_impl(load_space_exact(dist_a), load_space_exact(dist_b), dist_p,
                                     dist_budget, dist_sym, dist_flags, dist_out);
            return distance_impl(load_space_float(dist_a), load_space_float(dist_b), dist_p,
                                 dist_budget, dist_sym, dist_flags, dist_out);
        }
        if (mc_cmd->parsed()) {
            ExperimentConfig config;
            config.n_range = parse_n_range(mc_range);
            config.samples = mc_samples;
            config.dim = mc_dim;
            config.measure = mc_measure == "random-simplex" ? MeasureMode::RandomSimplex
                                                            : MeasureMode::Uniform;
            config.seed = mc_seed;
            config.policy = mc_flags.policy();
            config.rows_path = mc_rows;
            config.summary_path = mc_summary;
            config.separation_N_max = mc_nmax;
            auto result = run_montecarlo(config);
            std::cout << experiment_summary_json(config, result);
            return 0;
        }
    } catch (const StructuralError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
