#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "acsidm/estimate.hpp"
#include "acsidm/sampling.hpp"

namespace acsidm {

/// Redraw: every replicate draws a fresh participation mask with the
/// template's (n, visit times, participation). Fixed: the template's realized
/// mask is reused, i.e. the same people are examined each time.
enum class MaskMode { Redraw, Fixed };

struct BootstrapOptions {
    MaskMode mask_mode = MaskMode::Redraw;
    unsigned workers = 1;
    ThetaParams initial = kDefaultInitialTheta;
    FitOptions fit;
};

struct BootstrapRun {
    std::size_t b_index = 0;  // 1-based
    ThetaParams theta_ls;
    ThetaParams theta_ml;
    bool ls_converged = false;
    bool ml_converged = false;
    std::uint64_t seed = 0;
    std::string error;  // non-empty when a replicate could not be fitted
};

/// Seed of replicate b; the population and the mask use sub-streams 0 and 1.
std::uint64_t replicate_seed(std::uint64_t master_seed, std::size_t b_index);

/// Simulates n subjects at theta_star through the template's visit schema,
/// aggregates, and fits LS and ML (see fit_both) for b = 1..B. Results are
/// identical for any number of workers. Replicate failures are recorded in
/// BootstrapRun::error and never abort the batch.
std::vector<BootstrapRun> run_bootstrap(const ThetaParams& theta_star, std::size_t n,
                                        const VisitPlan& plan_template, std::size_t B,
                                        std::uint64_t master_seed,
                                        const BootstrapOptions& options = {});

/// One replicate, as run_bootstrap computes it.
BootstrapRun run_replicate(const ThetaParams& theta_star, std::size_t n,
                           const VisitPlan& plan_template, std::size_t b_index,
                           std::uint64_t master_seed, const BootstrapOptions& options);

struct ComponentQuantiles {
    double q025 = 0.0;
    double median = 0.0;
    double q975 = 0.0;
};

struct QuantileSummary {
    std::array<ComponentQuantiles, 3> components;  // theta1, theta2, theta3
    std::size_t B = 0;
    std::size_t n_converged = 0;
};

/// Quantiles 0.025 / 0.5 / 0.975 over converged runs of `kind`. Throws
/// std::invalid_argument if none converged.
QuantileSummary quantile_summary(const std::vector<BootstrapRun>& runs, ObjectiveKind kind);

}  // namespace acsidm
