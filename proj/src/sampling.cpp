#include "acsidm/sampling.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace acsidm {

namespace {

void check_visit_times(std::span<const double> visit_times)
{
    if (visit_times.empty()) throw std::invalid_argument("visit times are empty");
    for (std::size_t k = 0; k < visit_times.size(); ++k) {
        if (!std::isfinite(visit_times[k]))
            throw std::invalid_argument("visit times must be finite");
        if (k > 0 && !(visit_times[k] > visit_times[k - 1]))
            throw std::invalid_argument("visit times must be strictly increasing");
    }
}

}  // namespace

void validate(const AcsTable& table)
{
    check_visit_times(table.visit_times);
    const std::size_t k_visits = table.visit_times.size();
    if (table.counts.size() != k_visits || table.totals.size() != k_visits)
        throw std::invalid_argument("ACS table: counts/totals do not match the visit count");
    for (std::size_t k = 0; k < k_visits; ++k) {
        std::int64_t sum = 0;
        for (auto c : table.counts[k]) {
            if (c < 0) throw std::invalid_argument("ACS table: negative count");
            sum += c;
        }
        if (sum != table.totals[k])
            throw std::invalid_argument("ACS table: total at visit " + std::to_string(k) +
                                        " differs from the state counts");
    }
}

VisitPlan draw_visit_plan(std::size_t n, std::span<const double> visit_times, double p_part,
                          RngStream& rng)
{
    if (!(p_part >= 0.0 && p_part <= 1.0))
        throw std::invalid_argument("draw_visit_plan: participation must lie in [0, 1]");
    check_visit_times(visit_times);

    VisitPlan plan;
    plan.n_subjects = n;
    plan.visit_times.assign(visit_times.begin(), visit_times.end());
    plan.participation = p_part;
    plan.mask.resize(n * visit_times.size());
    for (auto& cell : plan.mask) cell = rng.bernoulli(p_part) ? 1 : 0;
    return plan;
}

std::vector<std::size_t> visit_histogram(const VisitPlan& plan)
{
    std::vector<std::size_t> hist(plan.n_visits() + 1, 0);
    for (std::size_t i = 0; i < plan.n_subjects; ++i) {
        std::size_t visits = 0;
        for (std::size_t k = 0; k < plan.n_visits(); ++k) visits += plan.attends(i, k) ? 1 : 0;
        ++hist[visits];
    }
    return hist;
}

AcsTable aggregate_acs(std::span<const Trajectory> trajectories, const VisitPlan& plan)
{
    if (trajectories.size() != plan.n_subjects)
        throw std::invalid_argument("aggregate_acs: " + std::to_string(trajectories.size()) +
                                    " trajectories for a plan of " +
                                    std::to_string(plan.n_subjects) + " subjects");
    if (plan.mask.size() != plan.n_subjects * plan.n_visits())
        throw std::invalid_argument("aggregate_acs: mask size does not match the plan");

    AcsTable table;
    table.visit_times = plan.visit_times;
    table.counts.assign(plan.n_visits(), {0, 0, 0});
    table.totals.assign(plan.n_visits(), 0);
    for (std::size_t i = 0; i < plan.n_subjects; ++i) {
        for (std::size_t k = 0; k < plan.n_visits(); ++k) {
            if (!plan.attends(i, k)) continue;
            const State s = state_at(trajectories[i], plan.visit_times[k]);
            ++table.counts[k][static_cast<std::size_t>(s)];
            ++table.totals[k];
        }
    }
    return table;
}

std::vector<StateFractions> observed_fractions(const AcsTable& table)
{
    validate(table);
    std::vector<StateFractions> out;
    out.reserve(table.n_visits());
    for (std::size_t k = 0; k < table.n_visits(); ++k) {
        if (table.totals[k] <= 0)
            throw std::invalid_argument("observed_fractions: zero total at visit t = " +
                                        std::to_string(table.visit_times[k]));
        const double n = static_cast<double>(table.totals[k]);
        const auto& c = table.counts[k];
        out.push_back({static_cast<double>(c[0]) / n, static_cast<double>(c[1]) / n,
                       static_cast<double>(c[2]) / n});
    }
    return out;
}

}  // namespace acsidm
