#include "acsidm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace acsidm {

double quantile_sorted(std::span<const double> sorted, double p)
{
    if (sorted.empty()) throw std::invalid_argument("quantile: empty sample");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("quantile: p outside [0, 1]");
    const double h = static_cast<double>(sorted.size() - 1) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

double quantile(std::span<const double> values, double p)
{
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    return quantile_sorted(sorted, p);
}

Histogram freedman_diaconis_histogram(std::span<const double> values)
{
    if (values.empty()) throw std::invalid_argument("histogram: empty sample");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    if (!std::isfinite(sorted.front()) || !std::isfinite(sorted.back()))
        throw std::invalid_argument("histogram: non-finite value");

    const double lo = sorted.front();
    const double range = sorted.back() - lo;
    const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
    const double width = 2.0 * iqr / std::cbrt(static_cast<double>(sorted.size()));

    Histogram hist;
    if (!(width > 0.0) || range == 0.0) {
        hist.bin_width = range > 0.0 ? range : 0.0;
        hist.left_edges = {lo};
        hist.counts = {sorted.size()};
        return hist;
    }
    const auto bins = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(range / width)));
    hist.bin_width = width;
    hist.counts.assign(bins, 0);
    for (std::size_t b = 0; b < bins; ++b) hist.left_edges.push_back(lo + width * static_cast<double>(b));
    for (double v : sorted) {
        auto b = static_cast<std::size_t>(std::floor((v - lo) / width));
        ++hist.counts[std::min(b, bins - 1)];
    }
    return hist;
}

}  // namespace acsidm
