#pragma once

#include <span>
#include <vector>

#include "acsidm/rates.hpp"

namespace acsidm {

/// Fractions of the population in Non-diseased, Diseased and Dead.
struct StateFractions {
    double p1 = 1.0;
    double p2 = 0.0;
    double p3 = 0.0;

    double operator[](std::size_t j) const { return j == 0 ? p1 : (j == 1 ? p2 : p3); }
    double sum() const { return p1 + p2 + p3; }
    bool operator==(const StateFractions&) const = default;
};

inline constexpr double kSimplexTolerance = 1e-9;
inline constexpr double kUndershootSlack = 1e-12;

bool on_simplex(const StateFractions& p, double tol = kSimplexTolerance);

struct SolutionPath {
    std::vector<double> times;
    std::vector<StateFractions> values;
};

/// Fixed RK4 grid. Output times must sit on t0 + n * step.
struct OdeGrid {
    double t0 = 0.0;
    double t_end = 100.0;
    double step = 0.1;
};

/// Integrates p' = A(t) p by classical RK4 and returns p at `output_times`
/// (strictly increasing, on the step grid). Throws std::invalid_argument on
/// bad inputs and NumericalError if a returned component leaves [0, 1] by
/// more than kUndershootSlack; smaller excursions are clamped.
SolutionPath solve_idm(const RateModel& model, const StateFractions& p0, const OdeGrid& grid,
                       std::span<const double> output_times);

/// Same as above for the parametric family. Bit-identical to the RateModel
/// overload but reuses a per-thread table of background mortality values.
SolutionPath solve_idm(const ThetaParams& theta, const StateFractions& p0, const OdeGrid& grid,
                       std::span<const double> output_times);

/// Scalar prevalence ODE pi' = (1 - pi)(c12 - pi (c23 - c13)), also by RK4.
std::vector<double> solve_prevalence(const RateModel& model, double pi0, const OdeGrid& grid,
                                     std::span<const double> output_times);
std::vector<double> solve_prevalence(const ThetaParams& theta, double pi0, const OdeGrid& grid,
                                     std::span<const double> output_times);

/// Grid of visit times t0, t0 + spacing, ..., t_end (inclusive).
std::vector<double> regular_times(double t0, double t_end, double spacing);

}  // namespace acsidm
