#include "acsidm/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "acsidm/error.hpp"
#include "acsidm/nelder_mead.hpp"

namespace acsidm {

namespace {

constexpr double kOnsetLower = 0.0;
constexpr double kOnsetUpper = 100.0;
constexpr double kInf = std::numeric_limits<double>::infinity();

SolutionPath model_path(const ThetaParams& theta, std::span<const double> visit_times,
                        double ode_step)
{
    if (visit_times.empty()) throw std::invalid_argument("no visit times");
    const OdeGrid grid{0.0, visit_times.back(), ode_step};
    return solve_idm(theta, StateFractions{1.0, 0.0, 0.0}, grid, visit_times);
}

double log_factorial(std::int64_t n) { return std::lgamma(static_cast<double>(n) + 1.0); }

// p2(t) = 0 for t <= theta1, so the likelihood is -infinity whenever onset
// is at or after the first visit with diseased subjects. Moves onset to the
// midpoint between that visit and the one before it.
ThetaParams feasible_onset(ThetaParams theta, const AcsTable& data)
{
    for (std::size_t k = 0; k < data.n_visits(); ++k) {
        if (data.counts[k][1] == 0) continue;
        const double t = data.visit_times[k];
        const double before = k > 0 ? data.visit_times[k - 1] : t - 1.0;
        const double bound = 0.5 * (before + t);
        if (theta.onset_age >= t) theta.onset_age = std::max(0.0, bound);
        break;
    }
    return theta;
}

}  // namespace

std::string_view to_string(ObjectiveKind kind)
{
    return kind == ObjectiveKind::LeastSquares ? "LS" : "ML";
}

double ls_objective(const ThetaParams& theta, std::span<const StateFractions> observed,
                    std::span<const double> visit_times, double ode_step)
{
    if (observed.empty() || observed.size() != visit_times.size())
        throw std::invalid_argument("ls_objective: need one observation per visit time");
    const SolutionPath path = model_path(theta, visit_times, ode_step);
    double sum = 0.0;
    for (std::size_t k = 0; k < observed.size(); ++k) {
        for (std::size_t j = 0; j < 3; ++j) {
            const double r = path.values[k][j] - observed[k][j];
            sum += r * r;
        }
    }
    return sum;
}

double log_likelihood(const AcsTable& table, std::span<const StateFractions> model,
                      bool include_constants)
{
    validate(table);
    if (model.size() != table.n_visits())
        throw std::invalid_argument("log_likelihood: need one model state per visit");
    double ll = 0.0;
    for (std::size_t k = 0; k < table.n_visits(); ++k) {
        if (table.totals[k] <= 0) throw std::invalid_argument("log_likelihood: zero total");
        if (include_constants) ll += log_factorial(table.totals[k]);
        for (std::size_t j = 0; j < 3; ++j) {
            const std::int64_t x = table.counts[k][j];
            if (x == 0) continue;
            const double p = model[k][j];
            if (!(p > 0.0)) return -kInf;
            ll += static_cast<double>(x) * std::log(p);
            if (include_constants) ll -= log_factorial(x);
        }
    }
    return ll;
}

double log_likelihood(const ThetaParams& theta, const AcsTable& table, double ode_step,
                      bool include_constants)
{
    validate(table);
    const SolutionPath path = model_path(theta, table.visit_times, ode_step);
    return log_likelihood(table, path.values, include_constants);
}

namespace {

double penalized(const ThetaParams& theta, auto&& evaluate)
{
    const double onset = std::clamp(theta.onset_age, kOnsetLower, kOnsetUpper);
    const double outside = theta.onset_age - onset;
    ThetaParams clamped = theta;
    clamped.onset_age = onset;
    if (!is_valid(clamped)) return kInf;
    try {
        return evaluate(clamped) + outside * outside;
    } catch (const NumericalError&) {
        return kInf;
    }
}

double ls_fit_objective(const ThetaParams& theta, std::span<const StateFractions> observed,
                        std::span<const double> visit_times, const FitOptions& options)
{
    return penalized(theta, [&](const ThetaParams& t) {
        return ls_objective(t, observed, visit_times, options.ode_step);
    });
}

template <class Objective>
EstimationResult minimize(ObjectiveKind kind, Objective&& objective, const ThetaParams& initial,
                          const FitOptions& options)
{
    auto to_natural = [](const std::array<double, 3>& x) {
        return ThetaParams{x[0], std::exp(x[1]), std::exp(x[2])};
    };

    NelderMeadOptions nm;
    nm.tol = options.tol.value_or(kind == ObjectiveKind::LeastSquares ? 1e-10 : 1e-8);
    nm.max_evals = options.max_evals;
    nm.restarts = options.restarts;

    const std::array<double, 3> start{initial.onset_age, std::log(initial.incidence_slope),
                                      std::log(initial.mortality_ratio)};
    auto nm_result = nelder_mead<3>(
        [&](const std::array<double, 3>& x) { return objective(to_natural(x)); }, start, nm);

    EstimationResult result;
    result.theta_hat = to_natural(nm_result.x);
    result.objective_value = objective(result.theta_hat);
    result.objective_kind = kind;
    result.n_evaluations = nm_result.n_evals;
    result.converged = nm_result.converged;
    result.initial_theta = initial;
    result.best_history = std::move(nm_result.best_history);
    return result;
}

void check_initial(const ThetaParams& initial)
{
    if (!(initial.incidence_slope > 0.0 && initial.mortality_ratio > 0.0) || !is_valid(initial))
        throw std::invalid_argument("fit: initial theta2 and theta3 must be positive");
}

}  // namespace

double fit_objective(ObjectiveKind kind, const ThetaParams& theta, const AcsTable& data,
                     const FitOptions& options)
{
    if (kind == ObjectiveKind::LeastSquares)
        return ls_fit_objective(theta, observed_fractions(data), data.visit_times, options);
    return penalized(theta, [&](const ThetaParams& t) {
        return -log_likelihood(t, data, options.ode_step, options.include_likelihood_constants);
    });
}

EstimationResult fit(ObjectiveKind kind, const AcsTable& data, const ThetaParams& initial,
                     const FitOptions& options)
{
    check_initial(initial);
    const auto observed = observed_fractions(data);
    if (kind == ObjectiveKind::LeastSquares)
        return fit_least_squares(observed, data.visit_times, initial, options);
    return minimize(
        kind,
        [&](const ThetaParams& theta) {
            return penalized(theta, [&](const ThetaParams& t) {
                return -log_likelihood(t, data, options.ode_step,
                                       options.include_likelihood_constants);
            });
        },
        initial, options);
}

EstimationResult fit_least_squares(std::span<const StateFractions> observed,
                                   std::span<const double> visit_times,
                                   const ThetaParams& initial, const FitOptions& options)
{
    check_initial(initial);
    if (observed.empty() || observed.size() != visit_times.size())
        throw std::invalid_argument("fit: need one observation per visit time");
    return minimize(
        ObjectiveKind::LeastSquares,
        [&](const ThetaParams& theta) {
            return ls_fit_objective(theta, observed, visit_times, options);
        },
        initial, options);
}

FitPair fit_both(const AcsTable& data, const ThetaParams& initial, const FitOptions& options)
{
    observed_fractions(data);
    FitPair pair;
    try {
        pair.ls = fit(ObjectiveKind::LeastSquares, data, initial, options);
    } catch (const std::invalid_argument&) {
    }

    std::vector<ThetaParams> starts;
    if (pair.ls) starts.push_back(pair.ls->theta_hat);
    starts.push_back(initial);
    if (pair.ls) starts.push_back(feasible_onset(pair.ls->theta_hat, data));
    starts.push_back(feasible_onset(initial, data));
    for (const auto& start : starts) {
        if (!std::isfinite(fit_objective(ObjectiveKind::MaxLikelihood, start, data, options)))
            continue;
        pair.ml = fit(ObjectiveKind::MaxLikelihood, data, start, options);
        break;
    }
    return pair;
}

}  // namespace acsidm
