#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "acsidm/microsim.hpp"
#include "acsidm/ode.hpp"
#include "acsidm/rng.hpp"

namespace acsidm {

/// Who attends which examination visit. mask is row-major n_subjects x K.
struct VisitPlan {
    std::size_t n_subjects = 0;
    std::vector<double> visit_times;
    double participation = 0.0;  // probability the mask was drawn with
    std::vector<std::uint8_t> mask;

    bool attends(std::size_t subject, std::size_t visit) const
    {
        return mask[subject * visit_times.size() + visit] != 0;
    }
    std::size_t n_visits() const { return visit_times.size(); }
};

/// Aggregated current status counts: K visits x (Non-diseased, Diseased, Dead).
struct AcsTable {
    std::vector<double> visit_times;
    std::vector<std::array<std::int64_t, 3>> counts;
    std::vector<std::int64_t> totals;

    std::size_t n_visits() const { return visit_times.size(); }
    bool operator==(const AcsTable&) const = default;
};

/// Throws std::invalid_argument unless shapes agree, counts are >= 0 and
/// totals are the row sums.
void validate(const AcsTable& table);

/// Independent Bernoulli(p_part) cell per subject and visit, drawn row by row
/// from `rng`. Participation ignores vital status.
VisitPlan draw_visit_plan(std::size_t n, std::span<const double> visit_times, double p_part,
                          RngStream& rng);

/// Entry v = subjects attending exactly v visits, v = 0..K.
std::vector<std::size_t> visit_histogram(const VisitPlan& plan);

AcsTable aggregate_acs(std::span<const Trajectory> trajectories, const VisitPlan& plan);

/// counts / totals per visit. Throws std::invalid_argument on a zero total.
std::vector<StateFractions> observed_fractions(const AcsTable& table);

}  // namespace acsidm
