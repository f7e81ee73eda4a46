#include "acsidm/microsim.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>

#include "acsidm/error.hpp"

namespace acsidm {

namespace {

// Smallest T in (from, to] with cumulative(from, T) = target, or nullopt if
// the hazard accumulated up to `to` stays below target.
template <class Cumulative>
std::optional<double> invert_cumulative_hazard(Cumulative&& cumulative, double from, double to,
                                               double target)
{
    const double total = cumulative(from, to);
    if (!std::isfinite(total) || total < 0.0)
        throw NumericalError("microsim: non-finite cumulative hazard");
    if (total < target) return std::nullopt;

    double lo = from;
    double hi = to;
    while (hi - lo > kEventTimeTolerance) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double value = cumulative(from, mid);
        if (!std::isfinite(value)) throw NumericalError("microsim: non-finite cumulative hazard");
        if (value < target)
            lo = mid;
        else
            hi = mid;
    }
    if (!(cumulative(from, hi) >= target))
        throw NumericalError("microsim: root solve failed to bracket the event time");
    return hi;
}

}  // namespace

Trajectory simulate_subject(const RateModel& model, double horizon, RngStream& rng)
{
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw std::invalid_argument("simulate_subject: horizon must be positive");

    Trajectory traj;
    traj.horizon = horizon;

    const double exit_target = -std::log(rng.uniform());
    const auto first = invert_cumulative_hazard(
        [&](double a, double b) { return model.cumulative_exit_hazard(a, b); }, 0.0, horizon,
        exit_target);
    if (!first) return traj;

    const Rates r = model.rates(*first);
    const double total = r.c12 + r.c13;
    const bool onset = total > 0.0 && rng.uniform() * total < r.c12;
    if (!onset) {
        traj.death_time = *first;
        return traj;
    }

    traj.onset_time = *first;
    const double death_target = -std::log(rng.uniform());
    traj.death_time = invert_cumulative_hazard(
        [&](double a, double b) { return model.cumulative_diseased_mortality(a, b); }, *first,
        horizon, death_target);
    if (traj.death_time && !(*traj.death_time > *traj.onset_time))
        throw NumericalError("microsim: death not after onset");
    return traj;
}

std::vector<Trajectory> simulate_population(std::size_t n, const RateModel& model, double horizon,
                                            std::uint64_t seed, unsigned workers)
{
    if (n == 0) throw std::invalid_argument("simulate_population: n must be >= 1");
    std::vector<Trajectory> out(n);
    auto run_one = [&](std::size_t i) {
        RngStream rng(RngStream::derive(seed, i));
        out[i] = simulate_subject(model, horizon, rng);
    };

    workers = std::max(1u, workers);
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) run_one(i);
        return out;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            try {
                for (std::size_t i = next++; i < n && !failed; i = next++) run_one(i);
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return out;
}

std::vector<Trajectory> simulate_population(std::size_t n, const ThetaParams& theta,
                                            double horizon, std::uint64_t seed, unsigned workers)
{
    return simulate_population(n, ParametricRateModel(theta), horizon, seed, workers);
}

State state_at(const Trajectory& traj, double t)
{
    if (!(t >= 0.0 && t <= traj.horizon))
        throw std::invalid_argument("state_at: t = " + std::to_string(t) + " outside [0, horizon]");
    if (traj.death_time && *traj.death_time <= t) return State::Dead;
    if (traj.onset_time && *traj.onset_time <= t) return State::Diseased;
    return State::NonDiseased;
}

}  // namespace acsidm
