#include "acsidm/bootstrap.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "acsidm/microsim.hpp"
#include "acsidm/stats.hpp"

namespace acsidm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
const ThetaParams kMissing{kNaN, kNaN, kNaN};

}  // namespace

std::uint64_t replicate_seed(std::uint64_t master_seed, std::size_t b_index)
{
    return RngStream::derive(master_seed, b_index);
}

BootstrapRun run_replicate(const ThetaParams& theta_star, std::size_t n,
                           const VisitPlan& plan_template, std::size_t b_index,
                           std::uint64_t master_seed, const BootstrapOptions& options)
{
    BootstrapRun run;
    run.b_index = b_index;
    run.seed = replicate_seed(master_seed, b_index);
    run.theta_ls = kMissing;
    run.theta_ml = kMissing;

    try {
        const double horizon = plan_template.visit_times.back();
        const auto population =
            simulate_population(n, theta_star, horizon, RngStream::derive(run.seed, 0));

        VisitPlan plan;
        if (options.mask_mode == MaskMode::Fixed) {
            plan = plan_template;
        } else {
            RngStream mask_rng(RngStream::derive(run.seed, 1));
            plan = draw_visit_plan(n, plan_template.visit_times, plan_template.participation,
                                   mask_rng);
        }

        const AcsTable table = aggregate_acs(population, plan);
        const FitPair fits = fit_both(table, options.initial, options.fit);
        if (fits.ls) {
            run.theta_ls = fits.ls->theta_hat;
            run.ls_converged = fits.ls->converged;
        }
        if (fits.ml) {
            run.theta_ml = fits.ml->theta_hat;
            run.ml_converged = fits.ml->converged;
        }
        if (!fits.ls || !fits.ml)
            run.error = !fits.ls ? "LS start infeasible" : "ML start infeasible";
    } catch (const std::exception& e) {
        run.error = e.what();
    }
    return run;
}

std::vector<BootstrapRun> run_bootstrap(const ThetaParams& theta_star, std::size_t n,
                                        const VisitPlan& plan_template, std::size_t B,
                                        std::uint64_t master_seed,
                                        const BootstrapOptions& options)
{
    if (B == 0) throw std::invalid_argument("run_bootstrap: B must be >= 1");
    if (n == 0) throw std::invalid_argument("run_bootstrap: n must be >= 1");
    if (!is_valid(theta_star)) throw std::invalid_argument("run_bootstrap: invalid theta*");
    if (plan_template.visit_times.empty())
        throw std::invalid_argument("run_bootstrap: template has no visit times");
    if (options.mask_mode == MaskMode::Fixed &&
        (plan_template.n_subjects != n ||
         plan_template.mask.size() != n * plan_template.n_visits()))
        throw std::invalid_argument("run_bootstrap: fixed mask does not cover n subjects");

    std::vector<BootstrapRun> runs(B);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < B; i = next++)
            runs[i] = run_replicate(theta_star, n, plan_template, i + 1, master_seed, options);
    };

    const unsigned workers = std::max(1u, options.workers);
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    return runs;
}

QuantileSummary quantile_summary(const std::vector<BootstrapRun>& runs, ObjectiveKind kind)
{
    std::array<std::vector<double>, 3> columns;
    for (const auto& run : runs) {
        const bool ls = kind == ObjectiveKind::LeastSquares;
        if (!(ls ? run.ls_converged : run.ml_converged)) continue;
        const ThetaParams& t = ls ? run.theta_ls : run.theta_ml;
        columns[0].push_back(t.onset_age);
        columns[1].push_back(t.incidence_slope);
        columns[2].push_back(t.mortality_ratio);
    }
    if (columns[0].empty())
        throw std::invalid_argument("quantile_summary: no converged " +
                                    std::string(to_string(kind)) + " runs");

    QuantileSummary summary;
    summary.B = runs.size();
    summary.n_converged = columns[0].size();
    for (std::size_t c = 0; c < 3; ++c) {
        auto& col = columns[c];
        std::sort(col.begin(), col.end());
        summary.components[c] = {quantile_sorted(col, 0.025), quantile_sorted(col, 0.5),
                                 quantile_sorted(col, 0.975)};
    }
    return summary;
}

}  // namespace acsidm
