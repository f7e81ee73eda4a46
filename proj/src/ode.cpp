#include "acsidm/ode.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "acsidm/error.hpp"

namespace acsidm {

namespace {

// Step indices (from t0) of each output time; validates the grid contract.
std::vector<long> output_steps(const OdeGrid& grid, std::span<const double> output_times)
{
    if (!(grid.step > 0.0) || !std::isfinite(grid.step))
        throw std::invalid_argument("ode: step must be positive");
    if (!std::isfinite(grid.t0) || !std::isfinite(grid.t_end) || grid.t_end < grid.t0)
        throw std::invalid_argument("ode: invalid integration interval");
    if (output_times.empty())
        throw std::invalid_argument("ode: no output times");

    std::vector<long> steps;
    steps.reserve(output_times.size());
    for (std::size_t k = 0; k < output_times.size(); ++k) {
        const double t = output_times[k];
        if (!(t >= grid.t0 && t <= grid.t_end))
            throw std::invalid_argument("ode: output time " + std::to_string(t) +
                                        " outside [t0, t_end]");
        if (k > 0 && !(t > output_times[k - 1]))
            throw std::invalid_argument("ode: output times must be strictly increasing");
        const double n = (t - grid.t0) / grid.step;
        const double rounded = std::round(n);
        if (std::abs(n - rounded) > 1e-9 * std::max(1.0, rounded))
            throw std::invalid_argument("ode: output time " + std::to_string(t) +
                                        " is not on the step grid");
        steps.push_back(static_cast<long>(rounded));
    }
    return steps;
}

double clamp_fraction(double x)
{
    if (!std::isfinite(x) || x < -kUndershootSlack || x > 1.0 + kUndershootSlack)
        throw NumericalError("ode: solution component " + std::to_string(x) + " left [0, 1]");
    return std::min(1.0, std::max(0.0, x));
}

StateFractions derivative(const Rates& r, const StateFractions& p)
{
    return {-(r.c12 + r.c13) * p.p1, r.c12 * p.p1 - r.c23 * p.p2, r.c13 * p.p1 + r.c23 * p.p2};
}

StateFractions axpy(const StateFractions& p, double h, const StateFractions& d)
{
    return {p.p1 + h * d.p1, p.p2 + h * d.p2, p.p3 + h * d.p3};
}

// RatesAt(m) returns the rates at t0 + m * step / 2.
template <class RatesAt>
SolutionPath integrate_idm(RatesAt&& rates_at, const StateFractions& p0, const OdeGrid& grid,
                           std::span<const double> output_times)
{
    if (!on_simplex(p0))
        throw std::invalid_argument("solve_idm: initial state is not on the simplex");
    const auto steps = output_steps(grid, output_times);

    SolutionPath path;
    path.times.assign(output_times.begin(), output_times.end());
    path.values.reserve(steps.size());

    const double h = grid.step;
    StateFractions p = p0;
    long n = 0;
    for (long target : steps) {
        for (; n < target; ++n) {
            const Rates r0 = rates_at(2 * n);
            const Rates rm = rates_at(2 * n + 1);
            const Rates r1 = rates_at(2 * n + 2);
            const StateFractions k1 = derivative(r0, p);
            const StateFractions k2 = derivative(rm, axpy(p, 0.5 * h, k1));
            const StateFractions k3 = derivative(rm, axpy(p, 0.5 * h, k2));
            const StateFractions k4 = derivative(r1, axpy(p, h, k3));
            p.p1 += h / 6.0 * (k1.p1 + 2.0 * k2.p1 + 2.0 * k3.p1 + k4.p1);
            p.p2 += h / 6.0 * (k1.p2 + 2.0 * k2.p2 + 2.0 * k3.p2 + k4.p2);
            p.p3 += h / 6.0 * (k1.p3 + 2.0 * k2.p3 + 2.0 * k3.p3 + k4.p3);
        }
        path.values.push_back({clamp_fraction(p.p1), clamp_fraction(p.p2), clamp_fraction(p.p3)});
    }
    return path;
}

template <class RatesAt>
std::vector<double> integrate_prevalence(RatesAt&& rates_at, double pi0, const OdeGrid& grid,
                                         std::span<const double> output_times)
{
    if (!(pi0 >= 0.0 && pi0 <= 1.0))
        throw std::invalid_argument("solve_prevalence: pi0 must lie in [0, 1]");
    const auto steps = output_steps(grid, output_times);

    auto rhs = [](const Rates& r, double pi) {
        return (1.0 - pi) * (r.c12 - pi * (r.c23 - r.c13));
    };

    std::vector<double> out;
    out.reserve(steps.size());
    const double h = grid.step;
    double pi = pi0;
    long n = 0;
    for (long target : steps) {
        for (; n < target; ++n) {
            const Rates r0 = rates_at(2 * n);
            const Rates rm = rates_at(2 * n + 1);
            const Rates r1 = rates_at(2 * n + 2);
            const double k1 = rhs(r0, pi);
            const double k2 = rhs(rm, pi + 0.5 * h * k1);
            const double k3 = rhs(rm, pi + 0.5 * h * k2);
            const double k4 = rhs(r1, pi + h * k3);
            pi += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        out.push_back(clamp_fraction(pi));
    }
    return out;
}

double half_step_time(const OdeGrid& grid, long m)
{
    return grid.t0 + 0.5 * grid.step * static_cast<double>(m);
}

// c13 at every half step; the parametric family only varies c12 and c23
// with theta, so repeated solves on one grid share this table.
const std::vector<double>& background_table(const OdeGrid& grid, long last_step)
{
    thread_local OdeGrid cached{0.0, 0.0, 0.0};
    thread_local std::vector<double> table;
    const std::size_t needed = static_cast<std::size_t>(2 * last_step + 1);
    if (cached.t0 != grid.t0 || cached.step != grid.step || table.size() < needed) {
        table.resize(needed);
        for (std::size_t m = 0; m < table.size(); ++m)
            table[m] = background_mortality(half_step_time(grid, static_cast<long>(m)));
        cached = grid;
    }
    return table;
}

long last_step(const OdeGrid& grid, std::span<const double> output_times)
{
    return output_steps(grid, output_times).back();
}

}  // namespace

bool on_simplex(const StateFractions& p, double tol)
{
    for (std::size_t j = 0; j < 3; ++j) {
        if (!(p[j] >= -kUndershootSlack && p[j] <= 1.0 + kUndershootSlack)) return false;
    }
    return std::abs(p.sum() - 1.0) <= tol;
}

SolutionPath solve_idm(const RateModel& model, const StateFractions& p0, const OdeGrid& grid,
                       std::span<const double> output_times)
{
    return integrate_idm([&](long m) { return model.rates(half_step_time(grid, m)); }, p0, grid,
                         output_times);
}

SolutionPath solve_idm(const ThetaParams& theta, const StateFractions& p0, const OdeGrid& grid,
                       std::span<const double> output_times)
{
    if (!is_valid(theta)) throw std::invalid_argument("solve_idm: invalid theta");
    const auto& c13 = background_table(grid, last_step(grid, output_times));
    return integrate_idm(
        [&](long m) {
            const double c = c13[static_cast<std::size_t>(m)];
            return Rates{incidence_rate(theta, half_step_time(grid, m)), c,
                         theta.mortality_ratio * c};
        },
        p0, grid, output_times);
}

std::vector<double> solve_prevalence(const RateModel& model, double pi0, const OdeGrid& grid,
                                     std::span<const double> output_times)
{
    return integrate_prevalence([&](long m) { return model.rates(half_step_time(grid, m)); }, pi0,
                                grid, output_times);
}

std::vector<double> solve_prevalence(const ThetaParams& theta, double pi0, const OdeGrid& grid,
                                     std::span<const double> output_times)
{
    return solve_prevalence(ParametricRateModel(theta), pi0, grid, output_times);
}

std::vector<double> regular_times(double t0, double t_end, double spacing)
{
    if (!(spacing > 0.0) || !(t_end >= t0))
        throw std::invalid_argument("regular_times: invalid range");
    std::vector<double> times;
    const long count = static_cast<long>(std::floor((t_end - t0) / spacing + 1e-9));
    for (long k = 0; k <= count; ++k) times.push_back(t0 + spacing * static_cast<double>(k));
    return times;
}

}  // namespace acsidm
