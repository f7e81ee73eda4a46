// Generative checks over random valid inputs. Each property draws its cases
// from a fixed seed so failures reproduce.

#include <random>

#include <gtest/gtest.h>

#include "acsidm/bootstrap.hpp"
#include "acsidm/estimate.hpp"
#include "acsidm/microsim.hpp"
#include "acsidm/stats.hpp"

using namespace acsidm;

namespace {

constexpr int kCases = 100;

ThetaParams random_theta(std::mt19937_64& gen)
{
    std::uniform_real_distribution<double> onset(0.0, 90.0), log_slope(std::log(1e-5), std::log(5e-3)),
        log_ratio(std::log(0.2), std::log(10.0));
    return {onset(gen), std::exp(log_slope(gen)), std::exp(log_ratio(gen))};
}

StateFractions random_simplex(std::mt19937_64& gen)
{
    std::exponential_distribution<double> e(1.0);
    const double a = e(gen), b = e(gen), c = e(gen);
    const double s = a + b + c;
    return {a / s, b / s, 1.0 - a / s - b / s};
}

int rank(State s) { return static_cast<int>(s); }

}  // namespace

TEST(Property, TrajectoriesAreIrreversible)
{
    std::mt19937_64 gen(1);
    for (int c = 0; c < kCases; ++c) {
        const ThetaParams theta = random_theta(gen);
        const auto pop = simulate_population(50, theta, 100.0, gen());
        for (const auto& traj : pop) {
            int previous = rank(State::NonDiseased);
            for (double t = 0.0; t <= 100.0; t += 0.5) {
                const int now = rank(state_at(traj, t));
                ASSERT_GE(now, previous) << "case " << c;
                previous = now;
            }
            if (traj.onset_time && traj.death_time) ASSERT_LT(*traj.onset_time, *traj.death_time);
        }
    }
}

TEST(Property, HealthyFractionFallsAndDeadFractionRises)
{
    std::mt19937_64 gen(2);
    const auto times = regular_times(0.0, 100.0, 0.5);
    for (int c = 0; c < kCases; ++c) {
        const ThetaParams theta = random_theta(gen);
        const StateFractions p0 = c % 2 ? random_simplex(gen) : StateFractions{};
        const auto path = solve_idm(theta, p0, OdeGrid{}, times);
        for (std::size_t k = 1; k < times.size(); ++k) {
            ASSERT_LE(path.values[k].p1, path.values[k - 1].p1) << "case " << c;
            ASSERT_GE(path.values[k].p3, path.values[k - 1].p3) << "case " << c;
            ASSERT_NEAR(path.values[k].sum(), 1.0, 1e-9);
        }
    }
}

TEST(Property, LeastSquaresIsNonnegative)
{
    std::mt19937_64 gen(3);
    std::uniform_int_distribution<int> visits(1, 11);
    for (int c = 0; c < kCases; ++c) {
        const ThetaParams theta = random_theta(gen);
        const int k = visits(gen);
        std::vector<double> times;
        std::vector<StateFractions> obs;
        for (int i = 0; i < k; ++i) {
            times.push_back(10.0 * i);
            obs.push_back(random_simplex(gen));
        }
        ASSERT_GE(ls_objective(theta, obs, times), 0.0) << "case " << c;
        const auto exact = solve_idm(theta, {}, OdeGrid{0.0, times.back(), 0.1}, times).values;
        ASSERT_EQ(ls_objective(theta, exact, times), 0.0);
    }
}

TEST(Property, QuantilesAreOrdered)
{
    std::mt19937_64 gen(4);
    std::uniform_int_distribution<int> size(1, 300);
    std::lognormal_distribution<double> value(0.0, 2.0);
    for (int c = 0; c < kCases; ++c) {
        std::vector<BootstrapRun> runs(static_cast<std::size_t>(size(gen)));
        for (auto& r : runs) {
            r.theta_ls = {value(gen), value(gen), value(gen)};
            r.ls_converged = true;
        }
        const auto s = quantile_summary(runs, ObjectiveKind::LeastSquares);
        for (const auto& q : s.components) {
            ASSERT_LE(q.q025, q.median);
            ASSERT_LE(q.median, q.q975);
        }
        std::vector<double> x;
        for (const auto& r : runs) x.push_back(r.theta_ls.onset_age);
        double last = -1.0;
        for (double p = 0.0; p <= 1.0; p += 0.01) {
            const double q = quantile(x, p);
            ASSERT_GE(q, last);
            last = q;
        }
    }
}

TEST(Property, AggregationPartitionsParticipants)
{
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> part(0.0, 1.0);
    std::uniform_int_distribution<int> size(1, 200);
    const auto times = regular_times(0.0, 100.0, 10.0);
    for (int c = 0; c < kCases; ++c) {
        const std::size_t n = static_cast<std::size_t>(size(gen));
        RngStream rng(gen());
        const VisitPlan plan = draw_visit_plan(n, times, part(gen), rng);
        const auto hist = visit_histogram(plan);
        ASSERT_EQ(std::accumulate(hist.begin(), hist.end(), std::size_t{0}), n);
        const AcsTable table = aggregate_acs(simulate_population(n, random_theta(gen), 100.0, gen()), plan);
        ASSERT_NO_THROW(validate(table));
        for (std::size_t k = 0; k < times.size(); ++k) {
            std::int64_t column = 0;
            for (std::size_t i = 0; i < n; ++i) column += plan.attends(i, k);
            ASSERT_EQ(table.totals[k], column);
        }
    }
}
