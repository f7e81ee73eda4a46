#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "acsidm/rates.hpp"
#include "acsidm/rng.hpp"

namespace acsidm {

enum class State { NonDiseased = 0, Diseased = 1, Dead = 2 };

/// One subject's life course on [0, horizon], starting Non-diseased.
struct Trajectory {
    std::optional<double> onset_time;
    std::optional<double> death_time;
    double horizon = 0.0;

    bool operator==(const Trajectory&) const = default;
};

/// Tolerance (years) of the cumulative-hazard root solve.
inline constexpr double kEventTimeTolerance = 1e-10;

/// Samples one trajectory by inverting the cumulative hazards: the first
/// event from Non-diseased uses c12 + c13, its type is onset with
/// probability c12(T) / (c12(T) + c13(T)), and death after onset uses c23.
/// Throws NumericalError if the root solve cannot bracket.
Trajectory simulate_subject(const RateModel& model, double horizon, RngStream& rng);

/// `n` independent subjects; subject i draws from RngStream::derive(seed, i),
/// so the result does not depend on `workers`.
std::vector<Trajectory> simulate_population(std::size_t n, const RateModel& model, double horizon,
                                            std::uint64_t seed, unsigned workers = 1);
std::vector<Trajectory> simulate_population(std::size_t n, const ThetaParams& theta,
                                            double horizon, std::uint64_t seed,
                                            unsigned workers = 1);

/// State at time t; event times are effective at their instant.
State state_at(const Trajectory& traj, double t);

}  // namespace acsidm
