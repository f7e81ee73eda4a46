#pragma once

#include <span>
#include <vector>

namespace acsidm {

/// Empirical quantile with linear interpolation between order statistics:
/// h = (n - 1) p, result x[floor h] + (h - floor h)(x[floor h + 1] - x[floor h]).
/// `sorted` must be ascending and nonempty.
double quantile_sorted(std::span<const double> sorted, double p);

/// Copies, sorts and calls quantile_sorted.
double quantile(std::span<const double> values, double p);

struct Histogram {
    std::vector<double> left_edges;
    std::vector<std::size_t> counts;
    double bin_width = 0.0;
};

/// Bins of width 2 IQR n^(-1/3) starting at the minimum; a zero width (for
/// instance a constant sample) collapses to a single bin holding everything.
Histogram freedman_diaconis_histogram(std::span<const double> values);

}  // namespace acsidm
