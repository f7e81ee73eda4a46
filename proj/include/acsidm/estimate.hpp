#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "acsidm/ode.hpp"
#include "acsidm/rates.hpp"
#include "acsidm/sampling.hpp"

namespace acsidm {

enum class ObjectiveKind { LeastSquares, MaxLikelihood };

std::string_view to_string(ObjectiveKind kind);  // "LS" / "ML"

/// Starting point used when the caller has no better guess.
inline constexpr ThetaParams kDefaultInitialTheta{40.0, 1e-3, 1.5};

inline constexpr double kDefaultOdeStep = 0.1;

/// Sum over visits and all three states of squared differences between the
/// model path (p0 = (1, 0, 0) at t = 0) and the observed fractions.
double ls_objective(const ThetaParams& theta, std::span<const StateFractions> observed,
                    std::span<const double> visit_times, double ode_step = kDefaultOdeStep);

/// Multinomial log-likelihood of the ACS counts under independent visits.
/// Zero counts contribute nothing; a positive count on a non-positive model
/// fraction gives -infinity. With include_constants = false the factorial
/// terms are dropped (same argmax).
double log_likelihood(const ThetaParams& theta, const AcsTable& table,
                      double ode_step = kDefaultOdeStep, bool include_constants = true);

/// The same likelihood against explicit model fractions, one per visit.
double log_likelihood(const AcsTable& table, std::span<const StateFractions> model,
                      bool include_constants = true);

struct FitOptions {
    std::optional<double> tol;  // default: 1e-10 for LS, 1e-8 for ML
    std::size_t max_evals = 5000;
    double ode_step = kDefaultOdeStep;
    bool include_likelihood_constants = true;
    int restarts = 1;
};

struct EstimationResult {
    ThetaParams theta_hat;
    double objective_value = 0.0;  // minimized value: LS residual or -log-likelihood
    ObjectiveKind objective_kind = ObjectiveKind::LeastSquares;
    std::size_t n_evaluations = 0;
    bool converged = false;
    ThetaParams initial_theta;
    std::vector<double> best_history;
};

/// The function fit minimizes, in natural units: the LS residual or the
/// negative log-likelihood at theta with onset_age clamped to [0, 100], plus
/// the squared distance of onset_age from that interval. Numerical failures
/// of the ODE map to +infinity.
double fit_objective(ObjectiveKind kind, const ThetaParams& theta, const AcsTable& data,
                     const FitOptions& options = {});

/// Nelder-Mead over (theta1, log theta2, log theta3). Throws
/// std::invalid_argument if the objective is not finite at `initial`.
EstimationResult fit(ObjectiveKind kind, const AcsTable& data, const ThetaParams& initial,
                     const FitOptions& options = {});

/// LS fit against observed fractions given directly (no count table).
EstimationResult fit_least_squares(std::span<const StateFractions> observed,
                                   std::span<const double> visit_times,
                                   const ThetaParams& initial, const FitOptions& options = {});

struct FitPair {
    std::optional<EstimationResult> ls;
    std::optional<EstimationResult> ml;
};

/// LS from `initial`, then ML started from the first point with a finite
/// likelihood among: the LS estimate, `initial`, and each of those with the
/// onset age moved before the first visit with diseased subjects. A side
/// with no feasible start is left empty.
FitPair fit_both(const AcsTable& data, const ThetaParams& initial, const FitOptions& options = {});

}  // namespace acsidm
