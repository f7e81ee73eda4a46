#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "acsidm/ode.hpp"
#include "acsidm/sampling.hpp"

namespace acsidm::testing {

// ACS counts of the diabetes example at t = 0, 10, ..., 100. The recorded
// Sum at t = 20 is 391 while the state rows add up to 301; totals here are
// the row sums.
inline AcsTable example_acs_table()
{
    constexpr std::array<std::array<std::int64_t, 11>, 3> kCounts{{
        {325, 285, 300, 291, 275, 262, 233, 155, 68, 16, 0},
        {0, 0, 0, 0, 7, 15, 43, 63, 41, 8, 0},
        {0, 0, 1, 1, 4, 8, 27, 81, 184, 260, 298},
    }};
    AcsTable table;
    table.visit_times = regular_times(0.0, 100.0, 10.0);
    for (std::size_t k = 0; k < 11; ++k) {
        table.counts.push_back({kCounts[0][k], kCounts[1][k], kCounts[2][k]});
        table.totals.push_back(kCounts[0][k] + kCounts[1][k] + kCounts[2][k]);
    }
    return table;
}

// Subjects by number of attended visits (0..11) in the example's plan.
inline std::vector<std::size_t> example_visit_histogram()
{
    return {1, 5, 24, 49, 94, 137, 123, 96, 60, 10, 1, 0};
}

inline std::vector<double> example_visit_times() { return regular_times(0.0, 100.0, 10.0); }

}  // namespace acsidm::testing
