#include "acsidm/cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "acsidm/cli/csv_io.hpp"
#include "acsidm/cli/errors.hpp"
#include "acsidm/microsim.hpp"
#include "acsidm/stats.hpp"

namespace acsidm::cli {

namespace fs = std::filesystem;

namespace {

constexpr double kTheta2DisplayScale = 1e4;

VisitPlan plan_from_config(const RunConfig& config)
{
    RngStream rng(RngStream::derive(config.seed, 1));
    return draw_visit_plan(config.n_subjects, config.visit_times, config.p_part, rng);
}

std::string theta_text(const ThetaParams& t)
{
    return fmt::format("({}, {}, {})", format_real(t.onset_age), format_real(t.incidence_slope),
                       format_real(t.mortality_ratio));
}

}  // namespace

SimulateOutput cmd_simulate(const RunConfig& config, const fs::path& out_dir, std::ostream& log)
{
    validate(config);
    const double horizon = config.visit_times.back();
    if (!(horizon > 0.0)) throw ConfigError("the last visit time must be positive");

    SimulateOutput result;
    const auto population = simulate_population(config.n_subjects, config.theta, horizon,
                                                RngStream::derive(config.seed, 0),
                                                effective_workers(config));
    result.plan = plan_from_config(config);
    result.table = aggregate_acs(population, result.plan);
    result.histogram = visit_histogram(result.plan);

    std::ostringstream acs, visits, mask;
    write_acs_csv(acs, result.table);
    write_visit_histogram_csv(visits, result.histogram);
    write_mask_csv(mask, result.plan);
    write_file(out_dir / "acs.csv", acs.str());
    write_file(out_dir / "visits.csv", visits.str());
    write_file(out_dir / "mask.csv", mask.str());

    fmt::print(log, "seed: {}\n", config.seed);
    fmt::print(log, "theta: {}\n", theta_text(config.theta));
    fmt::print(log, "wrote {}, {}, {}\n", (out_dir / "acs.csv").string(),
               (out_dir / "visits.csv").string(), (out_dir / "mask.csv").string());
    return result;
}

std::vector<EstimationResult> cmd_estimate(const RunConfig& config, const fs::path& acs_file,
                                           const fs::path& out_dir, std::ostream& log)
{
    validate(config);
    const AcsTable table = read_acs_file(acs_file);
    if (table.n_visits() < 2) throw DataError(fmt::format("{}: need at least two visits", acs_file.string()));
    for (std::size_t k = 0; k < table.n_visits(); ++k) {
        if (table.totals[k] <= 0)
            throw DataError(fmt::format("{}: zero total at visit t={}", acs_file.string(),
                                        format_real(table.visit_times[k])));
        if (table.visit_times[k] < 0.0)
            throw DataError(fmt::format("{}: negative visit time", acs_file.string()));
        const double n = table.visit_times[k] / config.ode_step;
        if (std::abs(n - std::round(n)) > 1e-9 * std::max(1.0, n))
            throw DataError(fmt::format("{}: visit time {} is not a multiple of ode_step {}",
                                        acs_file.string(), format_real(table.visit_times[k]),
                                        format_real(config.ode_step)));
    }

    FitOptions options;
    options.ode_step = config.ode_step;

    std::vector<EstimationResult> results;
    if (config.objective == ObjectiveSelection::LS) {
        results.push_back(fit(ObjectiveKind::LeastSquares, table, config.initial, options));
    } else {
        FitPair pair = fit_both(table, config.initial, options);
        if (!pair.ml)
            throw DataError("the likelihood is -infinity for every starting point; "
                            "the counts are impossible under the model");
        if (config.objective == ObjectiveSelection::Both) {
            if (!pair.ls) throw DataError("least squares objective is not finite at the initial point");
            results.push_back(*pair.ls);
        }
        results.push_back(*pair.ml);
    }

    std::ostringstream est;
    est << "kind,theta1,theta2,theta3,objective,converged,n_evaluations,initial_theta1,"
           "initial_theta2,initial_theta3\n";
    for (const auto& r : results) {
        est << to_string(r.objective_kind) << ',' << format_real(r.theta_hat.onset_age) << ','
            << format_real(r.theta_hat.incidence_slope) << ','
            << format_real(r.theta_hat.mortality_ratio) << ',' << format_real(r.objective_value)
            << ',' << (r.converged ? 1 : 0) << ',' << r.n_evaluations << ','
            << format_real(r.initial_theta.onset_age) << ','
            << format_real(r.initial_theta.incidence_slope) << ','
            << format_real(r.initial_theta.mortality_ratio) << '\n';
    }

    const auto curve_times = regular_times(0.0, table.visit_times.back(), config.curve_step);
    std::ostringstream curve;
    curve << "kind,t,p1,p2,p3\n";
    for (const auto& r : results) {
        const OdeGrid grid{0.0, table.visit_times.back(), config.ode_step};
        const auto path = solve_idm(r.theta_hat, StateFractions{}, grid, curve_times);
        for (std::size_t i = 0; i < path.times.size(); ++i) {
            const auto& p = path.values[i];
            curve << to_string(r.objective_kind) << ',' << format_real(path.times[i]) << ','
                  << format_real(p.p1) << ',' << format_real(p.p2) << ',' << format_real(p.p3)
                  << '\n';
        }
    }

    std::ostringstream observed;
    observed << "t,n,p1,p2,p3\n";
    const auto fractions = observed_fractions(table);
    for (std::size_t k = 0; k < table.n_visits(); ++k) {
        const auto& p = fractions[k];
        observed << format_real(table.visit_times[k]) << ',' << table.totals[k] << ','
                 << format_real(p.p1) << ',' << format_real(p.p2) << ',' << format_real(p.p3)
                 << '\n';
    }

    write_file(out_dir / "estimates.csv", est.str());
    write_file(out_dir / "model_curve.csv", curve.str());
    write_file(out_dir / "observed.csv", observed.str());

    for (const auto& r : results)
        fmt::print(log, "{}: theta = {} objective = {} converged = {} evaluations = {}\n",
                   to_string(r.objective_kind), theta_text(r.theta_hat),
                   format_real(r.objective_value), r.converged, r.n_evaluations);
    return results;
}

std::vector<BootstrapRun> cmd_bootstrap(const RunConfig& config, const fs::path& out_dir,
                                        std::ostream& log)
{
    validate(config);

    VisitPlan plan_template;
    if (config.mask_mode == MaskMode::Fixed) {
        std::ifstream in(*config.mask_file);
        if (!in) throw IoError(fmt::format("cannot read {}", config.mask_file->string()));
        plan_template = read_mask_csv(in, config.p_part, config.mask_file->string());
        if (plan_template.n_subjects != config.n_subjects)
            throw DataError(fmt::format("{}: mask has {} subjects but n_subjects is {}",
                                        config.mask_file->string(), plan_template.n_subjects,
                                        config.n_subjects));
    } else {
        plan_template.n_subjects = config.n_subjects;
        plan_template.visit_times = config.visit_times;
        plan_template.participation = config.p_part;
    }
    if (!(plan_template.visit_times.back() > 0.0))
        throw ConfigError("the last visit time must be positive");

    BootstrapOptions options;
    options.mask_mode = config.mask_mode;
    options.workers = effective_workers(config);
    options.initial = config.initial;
    options.fit.ode_step = config.ode_step;

    const auto runs = run_bootstrap(config.theta, config.n_subjects, plan_template, config.B,
                                    config.seed, options);

    std::ostringstream replicates;
    write_replicates_csv(replicates, runs);
    write_file(out_dir / "replicates.csv", replicates.str());

    std::size_t failed = 0;
    for (const auto& run : runs) failed += run.error.empty() ? 0 : 1;

    std::optional<QuantileSummary> ls, ml;
    try {
        ls = quantile_summary(runs, ObjectiveKind::LeastSquares);
    } catch (const std::invalid_argument&) {
    }
    try {
        ml = quantile_summary(runs, ObjectiveKind::MaxLikelihood);
    } catch (const std::invalid_argument&) {
    }

    const std::array<double, 3> reference{config.theta.onset_age, config.theta.incidence_slope,
                                          config.theta.mortality_ratio};
    const std::array<const char*, 3> names{"theta1", "theta2_per_10000", "theta3"};
    const std::array<double, 3> scale{1.0, kTheta2DisplayScale, 1.0};
    const double nan = std::nan("");

    std::ostringstream summary;
    summary << "parameter,reference,ls_median,ls_q025,ls_q975,ml_median,ml_q025,ml_q975,"
               "ls_converged,ml_converged\n";
    for (std::size_t c = 0; c < 3; ++c) {
        auto cols = [&](const std::optional<QuantileSummary>& s) {
            if (!s) return fmt::format("{},{},{}", format_real(nan), format_real(nan), format_real(nan));
            const auto& q = s->components[c];
            return fmt::format("{},{},{}", format_real(q.median * scale[c]),
                               format_real(q.q025 * scale[c]), format_real(q.q975 * scale[c]));
        };
        summary << names[c] << ',' << format_real(reference[c] * scale[c]) << ',' << cols(ls)
                << ',' << cols(ml) << ',' << (ls ? ls->n_converged : 0) << ','
                << (ml ? ml->n_converged : 0) << '\n';
    }
    write_file(out_dir / "summary.csv", summary.str());

    fmt::print(log, "seed: {}\n", config.seed);
    fmt::print(log, "theta*: {}\n", theta_text(config.theta));
    fmt::print(log, "B = {}, failed replicates = {}, converged LS = {}, ML = {}\n", runs.size(),
               failed, ls ? ls->n_converged : 0, ml ? ml->n_converged : 0);
    fmt::print(log, "{:<18}{:>10}  {:<26}{:<26}\n", "parameter", "reference",
               "LS median (2.5, 97.5)%", "ML median (2.5, 97.5)%");
    for (std::size_t c = 0; c < 3; ++c) {
        auto cell = [&](const std::optional<QuantileSummary>& s) {
            if (!s) return std::string("n/a");
            const auto& q = s->components[c];
            return fmt::format("{:.3g} ({:.3g}, {:.3g})", q.median * scale[c], q.q025 * scale[c],
                               q.q975 * scale[c]);
        };
        fmt::print(log, "{:<18}{:>10.3g}  {:<26}{:<26}\n", names[c], reference[c] * scale[c],
                   cell(ls), cell(ml));
    }

    if (failed == runs.size()) throw AllReplicatesFailed("all bootstrap replicates failed");
    return runs;
}

std::vector<fs::path> cmd_report(const fs::path& replicates_file, const fs::path& out_dir,
                                 std::ostream& log)
{
    std::ifstream in(replicates_file);
    if (!in) throw IoError(fmt::format("cannot read {}", replicates_file.string()));
    const auto rows = read_replicates_csv(in, replicates_file.string());

    std::vector<fs::path> written;
    for (auto kind : {ObjectiveKind::LeastSquares, ObjectiveKind::MaxLikelihood}) {
        std::array<std::vector<double>, 3> columns;
        for (const auto& row : rows) {
            if (row.kind != kind || !row.converged) continue;
            const std::array<double, 3> v{row.theta.onset_age, row.theta.incidence_slope,
                                          row.theta.mortality_ratio};
            if (!std::isfinite(v[0]) || !std::isfinite(v[1]) || !std::isfinite(v[2])) continue;
            for (std::size_t c = 0; c < 3; ++c) columns[c].push_back(v[c]);
        }
        if (columns[0].empty()) {
            fmt::print(log, "{}: no converged replicates, no histograms\n", to_string(kind));
            continue;
        }
        for (std::size_t c = 0; c < 3; ++c) {
            const Histogram hist = freedman_diaconis_histogram(columns[c]);
            std::ostringstream csv;
            csv << "bin_left,count\n";
            for (std::size_t b = 0; b < hist.counts.size(); ++b)
                csv << format_real(hist.left_edges[b]) << ',' << hist.counts[b] << '\n';
            std::string kind_name(to_string(kind));
            std::transform(kind_name.begin(), kind_name.end(), kind_name.begin(),
                           [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
            const fs::path path = out_dir / fmt::format("hist_{}_theta{}.csv", kind_name, c + 1);
            write_file(path, csv.str());
            written.push_back(path);
        }
        fmt::print(log, "{}: {} converged replicates binned\n", to_string(kind), columns[0].size());
    }
    return written;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Incidence and mortality rate ratio estimation from aggregated current status data"};
    app.require_subcommand(1);

    struct Common {
        std::string config;
        std::string out = "out";
        std::map<std::string, std::string> overrides;
    };
    Common common;
    std::string input_file;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", common.config, "key = value configuration file");
        sub->add_option("--out", common.out, "output directory")->capture_default_str();
        auto flag = [&](const std::string& name, const std::string& key, const std::string& help) {
            sub->add_option_function<std::string>(
                name, [&, key](const std::string& v) { common.overrides[key] = v; }, help);
        };
        flag("--seed", "seed", "master seed (unsigned 64-bit)");
        flag("--theta", "theta", "theta1,theta2,theta3 (generator or bootstrap theta*)");
        flag("--initial", "initial", "initial guess theta1,theta2,theta3");
        flag("--n", "n_subjects", "number of invited subjects");
        flag("--visit-times", "visit_times", "comma-separated visit times");
        flag("--p-part", "p_part", "participation probability per visit");
        flag("--B", "B", "number of bootstrap replicates");
        flag("--ode-step", "ode_step", "RK4 step in years");
        flag("--curve-step", "curve_step", "spacing of the model curve output");
        flag("--objective", "objective", "ls, ml or both");
        flag("--workers", "workers", "worker threads (0 = all cores)");
        flag("--mask-mode", "mask_mode", "redraw or fixed");
        flag("--mask-file", "mask_file", "participation mask for mask-mode fixed");
    };

    auto* simulate = app.add_subcommand("simulate", "simulate a cohort and its ACS table");
    add_common(simulate);
    auto* estimate = app.add_subcommand("estimate", "fit theta to an ACS table");
    add_common(estimate);
    estimate->add_option("acs_file", input_file, "ACS table CSV")->required();
    auto* bootstrap = app.add_subcommand("bootstrap", "schema-preserving parametric bootstrap");
    add_common(bootstrap);
    auto* report = app.add_subcommand("report", "histogram data from a replicates file");
    report->add_option("--out", common.out, "output directory")->capture_default_str();
    report->add_option("replicates_file", input_file, "replicates CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        RunConfig config;
        if (!common.config.empty()) load_config_file(config, common.config);
        for (const auto& [key, value] : common.overrides) set_key(config, key, value);

        if (simulate->parsed()) {
            cmd_simulate(config, common.out, out);
        } else if (estimate->parsed()) {
            cmd_estimate(config, input_file, common.out, out);
        } else if (bootstrap->parsed()) {
            cmd_bootstrap(config, common.out, out);
        } else if (report->parsed()) {
            cmd_report(input_file, common.out, out);
        }
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const DataError& e) {
        err << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << '\n';
        return kExitIo;
    } catch (const AllReplicatesFailed& e) {
        err << "error: " << e.what() << '\n';
        return kExitAllFailed;
    } catch (const std::invalid_argument& e) {
        err << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitOk;
}

}  // namespace acsidm::cli
