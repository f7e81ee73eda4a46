// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "acsidm/bootstrap.hpp"
#include "acsidm/cli/commands.hpp"
#include "acsidm/cli/config.hpp"
#include "acsidm/cli/csv_io.hpp"
#include "acsidm/estimate.hpp"
#include "acsidm/microsim.hpp"
#include "acsidm/stats.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace acsidm;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int id, bool pass, const std::string& what, const std::string& detail)
{
    std::cout << (pass ? "PASS" : "FAIL") << "  criterion " << id << ": " << what << " | "
              << detail << std::endl;
    failures += pass ? 0 : 1;
}

void info(const std::string& text) { std::cout << "      info: " << text << std::endl; }

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string num(double x)
{
    std::ostringstream s;
    s.precision(4);
    s << x;
    return s.str();
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

int run_cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "acsidm");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    return cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

std::array<double, 3> components(const ThetaParams& t)
{
    return {t.onset_age, t.incidence_slope, t.mortality_ratio};
}

// 1 -----------------------------------------------------------------------

void ode_correctness()
{
    const ThetaParams theta = theta_true();
    const auto times = regular_times(0.0, 100.0, 0.1);

    const auto start = Clock::now();
    const auto path = solve_idm(theta, {}, OdeGrid{0.0, 100.0, 0.1}, times);
    const double runtime = seconds_since(start);

    const acsidm::testing::OracleRates rates{30.0, 1.0 / 2000.0, std::exp(0.7)};
    const auto euler = acsidm::testing::euler_idm(rates, 1e-4, 100.0, 0.1);
    const auto euler_half = acsidm::testing::euler_idm(rates, 5e-5, 100.0, 0.1);

    double err = 0.0, err_richardson = 0.0, euler_self = 0.0, residual = 0.0;
    double t_worst = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        residual = std::max(residual, std::abs(path.values[k].sum() - 1.0));
        for (std::size_t j = 0; j < 3; ++j) {
            const double e = std::abs(path.values[k][j] - euler[k][j]);
            if (e > err) {
                err = e;
                t_worst = times[k];
            }
            const double extrapolated = 2.0 * euler_half[k][j] - euler[k][j];
            err_richardson = std::max(err_richardson, std::abs(path.values[k][j] - extrapolated));
            euler_self = std::max(euler_self, std::abs(euler[k][j] - extrapolated));
        }
    }
    report(1, err < 1e-6 && runtime < 1.0 && residual < 1e-9,
           "RK4 vs explicit Euler h=1e-4, sup error < 1e-6, runtime < 1 s, |sum p - 1| < 1e-9",
           "sup error " + num(err) + " at t=" + num(t_worst) + ", runtime " + num(runtime) +
               " s, max residual " + num(residual));
    info("Euler h=1e-4 own error vs Richardson extrapolation (2 E(h/2) - E(h)): " +
         num(euler_self) + "; RK4 error vs the extrapolation: " + num(err_richardson));
}

// 2 -----------------------------------------------------------------------

void prevalence_consistency()
{
    std::vector<ThetaParams> thetas{theta_true()};
    std::mt19937_64 gen(2);
    std::uniform_real_distribution<double> f(0.8, 1.2);
    for (int i = 0; i < 5; ++i) {
        const ThetaParams t = theta_true();
        thetas.push_back({t.onset_age * f(gen), t.incidence_slope * f(gen), t.mortality_ratio * f(gen)});
    }
    const auto times = regular_times(0.0, 100.0, 0.1);
    double sup = 0.0;
    for (const auto& theta : thetas) {
        const auto path = solve_idm(theta, {}, OdeGrid{}, times);
        const auto pi = solve_prevalence(theta, 0.0, OdeGrid{}, times);
        for (std::size_t k = 0; k < times.size(); ++k) {
            const auto& p = path.values[k];
            sup = std::max(sup, std::abs(pi[k] - p.p2 / (p.p1 + p.p2)));
        }
    }
    report(2, sup < 1e-6, "scalar prevalence ODE vs p2/(p1+p2), 6 parameter vectors, < 1e-6",
           "sup error " + num(sup));
}

// 3 -----------------------------------------------------------------------

void microsim_agreement()
{
    const std::size_t n = 200000;
    const auto start = Clock::now();
    const auto pop = simulate_population(n, theta_true(), 100.0, 3, 1);
    const double runtime = seconds_since(start);

    const auto times = regular_times(0.0, 100.0, 10.0);
    const auto path = solve_idm(theta_true(), {}, OdeGrid{}, times);
    double sup = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        std::array<double, 3> freq{};
        for (const auto& t : pop) freq[static_cast<int>(state_at(t, times[k]))] += 1.0;
        for (int j = 0; j < 3; ++j) sup = std::max(sup, std::abs(freq[j] / n - path.values[k][j]));
    }
    report(3, sup < 0.005 && runtime < 60.0,
           "200,000 subjects vs ODE at t=0,10,...,100, sup < 0.005, < 60 s single-threaded",
           "sup error " + num(sup) + ", simulation " + num(runtime) + " s");
}

// 4 -----------------------------------------------------------------------

void noiseless_recovery()
{
    const auto times = acsidm::testing::example_visit_times();
    const auto exact = solve_idm(theta_true(), {}, OdeGrid{}, times).values;
    const auto r = fit_least_squares(exact, times, kDefaultInitialTheta);
    const auto got = components(r.theta_hat), want = components(theta_true());
    double worst = 0.0;
    for (int c = 0; c < 3; ++c) worst = std::max(worst, std::abs(got[c] / want[c] - 1.0));
    report(4, worst < 1e-3, "LS on exact fractions recovers (30, 5e-4, e^0.7), rel. error < 1e-3",
           "theta_hat (" + num(got[0]) + ", " + num(got[1]) + ", " + num(got[2]) +
               "), worst rel. error " + num(worst));
}

// 5 -----------------------------------------------------------------------

std::string band(const ComponentQuantiles& q, double scale = 1.0)
{
    return num(q.median * scale) + " (" + num(q.q025 * scale) + ", " + num(q.q975 * scale) + ")";
}

void table3_reproduction(const fs::path& dir)
{
    cli::RunConfig config;  // defaults: n 600, K 11, p_part 0.5, B 1000, theta* = truth
    config.workers = 0;
    std::ostringstream log;
    const auto start = Clock::now();
    const auto runs = cli::cmd_bootstrap(config, dir / "boot", log);
    const double runtime = seconds_since(start);

    const auto ls = quantile_summary(runs, ObjectiveKind::LeastSquares);
    const auto ml = quantile_summary(runs, ObjectiveKind::MaxLikelihood);
    const auto truth = components(theta_true());
    auto contains = [&](const QuantileSummary& s) {
        bool all = true;
        for (int c = 0; c < 3; ++c)
            all = all && s.components[c].q025 <= truth[c] && truth[c] <= s.components[c].q975;
        return all;
    };
    const double m1 = ls.components[0].median, m3 = ls.components[2].median;
    const bool pass = m1 > 31.0 && m1 < 37.0 && m3 > 1.9 && m3 < 2.6 && contains(ls) && contains(ml);
    report(5, pass,
           "bootstrap B=1000 at theta*=truth: LS theta1 median in (31,37), theta3 median in "
           "(1.9,2.6), LS and ML bands contain truth",
           "LS theta1 " + band(ls.components[0]) + ", theta2x1e4 " + band(ls.components[1], 1e4) +
               ", theta3 " + band(ls.components[2]) + "; ML theta1 " + band(ml.components[0]) +
               ", theta2x1e4 " + band(ml.components[1], 1e4) + ", theta3 " +
               band(ml.components[2]) + "; converged LS " + std::to_string(ls.n_converged) +
               " ML " + std::to_string(ml.n_converged) + "; bands contain truth LS " +
               (contains(ls) ? "yes" : "no") + " ML " + (contains(ml) ? "yes" : "no") +
               "; runtime " + num(runtime) + " s");
    for (int c = 0; c < 3; ++c) {
        const double wl = ls.components[c].q975 - ls.components[c].q025;
        const double wm = ml.components[c].q975 - ml.components[c].q025;
        info("theta" + std::to_string(c + 1) + " band width LS " + num(wl) + " ML " + num(wm));
    }

    // the recorded table's ML estimate as generator, for comparison only
    const auto fit_ml = fit_both(acsidm::testing::example_acs_table(), kDefaultInitialTheta).ml;
    if (fit_ml) {
        cli::RunConfig fitted = config;
        fitted.theta = fit_ml->theta_hat;
        std::ostringstream ignored;
        const auto alt = cli::cmd_bootstrap(fitted, dir / "boot_fitted", ignored);
        const auto s = quantile_summary(alt, ObjectiveKind::LeastSquares);
        info("with theta* = ML fit of the recorded table (" + num(fit_ml->theta_hat.onset_age) +
             ", " + num(fit_ml->theta_hat.incidence_slope) + ", " +
             num(fit_ml->theta_hat.mortality_ratio) + "): LS theta1 " + band(s.components[0]) +
             ", theta2x1e4 " + band(s.components[1], 1e4) + ", theta3 " + band(s.components[2]));
    }
}

// 6 -----------------------------------------------------------------------

void table2_shape(const fs::path& dir)
{
    cli::RunConfig config;
    std::ostringstream log;
    const auto sim = cli::cmd_simulate(config, dir / "sim", log);
    const auto& hist = sim.histogram;
    const std::size_t total = std::accumulate(hist.begin(), hist.end(), std::size_t{0});
    const auto [stat, dof] = acsidm::testing::binomial_goodness_of_fit(hist, 0.5);
    const double p = acsidm::testing::chi_square_p_value(stat, dof);
    std::string counts;
    for (auto h : hist) counts += std::to_string(h) + " ";
    report(6, p > 0.001 && total == 600 && hist.size() == 12,
           "visit histogram n=600, K=11 vs Binomial(11, 0.5), chi-square p > 0.001, sums to 600",
           "histogram " + counts + "sum " + std::to_string(total) + ", chi2 " + num(stat) +
               " on " + num(dof) + " df, p " + num(p));
}

// 7 -----------------------------------------------------------------------

void likelihood_correctness()
{
    auto one = [](double t, std::int64_t a, std::int64_t b, std::int64_t c) {
        return AcsTable{{t}, {{a, b, c}}, {a + b + c}};
    };
    const std::vector<StateFractions> half{{0.5, 0.5, 0.0}};
    const std::vector<StateFractions> tri{{0.5, 0.25, 0.25}};
    const double e1 = std::abs(log_likelihood(theta_true(), one(0.0, 325, 0, 0)) - 0.0);
    const double e2 = std::abs(log_likelihood(one(10.0, 1, 1, 0), half) + std::log(2.0));
    const double e3 = std::abs(log_likelihood(one(10.0, 2, 1, 1), tri) - std::log(12.0 / 64.0));
    const double micro = std::max({e1, e2, e3});

    const AcsTable table = acsidm::testing::example_acs_table();
    FitOptions without;
    without.include_likelihood_constants = false;
    const ThetaParams start{33.0, 6e-4, 2.0};
    const auto a = fit(ObjectiveKind::MaxLikelihood, table, start);
    const auto b = fit(ObjectiveKind::MaxLikelihood, table, start, without);
    const auto ta = components(a.theta_hat), tb = components(b.theta_hat);
    const double d1 = std::abs(ta[0] - tb[0]);
    const double d2 = std::abs(std::log(ta[1] / tb[1]));
    const double d3 = std::abs(std::log(ta[2] / tb[2]));
    // both runs stop once objective spread < 1e-8; the likelihood curvature
    // turns that into a parameter tolerance of about sqrt(2e-8 / curvature)
    const bool argmax = d1 < 1e-2 && d2 < 1e-3 && d3 < 1e-3;
    report(7, micro < 1e-12 && argmax,
           "log-likelihood micro-cases to 1e-12, theta_hat unchanged without constant terms",
           "micro-case errors " + num(e1) + ", " + num(e2) + ", " + num(e3) +
               "; |d theta1| " + num(d1) + ", |d log theta2| " + num(d2) + ", |d log theta3| " +
               num(d3));
}

// 8 -----------------------------------------------------------------------

void determinism(const fs::path& dir)
{
    bool ok = true;
    for (const char* name : {"a", "b"}) {
        const std::string out = (dir / "det" / name).string();
        ok = ok && run_cli({"simulate", "--seed", "8", "--out", out}) == 0;
        ok = ok && run_cli({"estimate", out + "/acs.csv", "--out", out}) == 0;
        ok = ok && run_cli({"bootstrap", "--B", "8", "--seed", "8", "--out", out}) == 0;
        ok = ok && run_cli({"report", out + "/replicates.csv", "--out", out}) == 0;
    }
    std::size_t files = 0, identical = 0;
    for (const auto& e : fs::directory_iterator(dir / "det" / "a")) {
        ++files;
        identical += slurp(e.path()) == slurp(dir / "det" / "b" / e.path().filename());
    }

    const VisitPlan schema{600, acsidm::testing::example_visit_times(), 0.5, {}};
    BootstrapOptions one, four;
    four.workers = 4;
    std::ostringstream s1, s4;
    cli::write_replicates_csv(s1, run_bootstrap(theta_true(), 600, schema, 16, 8, one));
    cli::write_replicates_csv(s4, run_bootstrap(theta_true(), 600, schema, 16, 8, four));
    const bool workers_same = s1.str() == s4.str();

    report(8, ok && files > 0 && identical == files && workers_same,
           "same seed gives byte-identical outputs for every command; 1 vs 4 workers identical",
           std::to_string(identical) + "/" + std::to_string(files) +
               " files identical, workers " + (workers_same ? "identical" : "differ"));
}

// 9 -----------------------------------------------------------------------

void property_suite()
{
    std::mt19937_64 gen(9);
    std::uniform_real_distribution<double> onset(0.0, 90.0), ls(std::log(1e-5), std::log(5e-3)),
        lr(std::log(0.2), std::log(10.0)), unit(0.0, 1.0);
    auto theta = [&] { return ThetaParams{onset(gen), std::exp(ls(gen)), std::exp(lr(gen))}; };
    const int cases = 200;
    int bad_irreversible = 0, bad_monotone = 0, bad_ls = 0, bad_quantile = 0;
    const auto grid = regular_times(0.0, 100.0, 1.0);
    for (int c = 0; c < cases; ++c) {
        for (const auto& traj : simulate_population(20, theta(), 100.0, gen())) {
            int last = 0;
            for (double t : grid) {
                const int s = static_cast<int>(state_at(traj, t));
                bad_irreversible += s < last;
                last = s;
            }
        }
        const auto path = solve_idm(theta(), {}, OdeGrid{}, grid).values;
        for (std::size_t k = 1; k < path.size(); ++k)
            bad_monotone += path[k].p1 > path[k - 1].p1 || path[k].p3 < path[k - 1].p3;

        std::vector<StateFractions> obs;
        for (std::size_t k = 0; k < 11; ++k) {
            const double a = unit(gen), b = unit(gen) * (1.0 - a);
            obs.push_back({a, b, 1.0 - a - b});
        }
        bad_ls += !(ls_objective(theta(), obs, acsidm::testing::example_visit_times()) >= 0.0);

        std::vector<BootstrapRun> runs(1 + gen() % 200);
        for (auto& r : runs) {
            r.theta_ml = {unit(gen), unit(gen) * unit(gen), std::exp(5.0 * unit(gen))};
            r.ml_converged = true;
        }
        for (const auto& q : quantile_summary(runs, ObjectiveKind::MaxLikelihood).components)
            bad_quantile += !(q.q025 <= q.median && q.median <= q.q975);
    }
    report(9, bad_irreversible + bad_monotone + bad_ls + bad_quantile == 0,
           "generative properties: irreversibility, p1/p3 monotone, LS >= 0, quantiles ordered",
           std::to_string(cases) + " cases each; violations " + std::to_string(bad_irreversible) +
               "/" + std::to_string(bad_monotone) + "/" + std::to_string(bad_ls) + "/" +
               std::to_string(bad_quantile));
}

}  // namespace

int main()
{
    const fs::path dir = fs::temp_directory_path() / "acsidm_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);

    ode_correctness();
    prevalence_consistency();
    microsim_agreement();
    noiseless_recovery();
    table3_reproduction(dir);
    table2_shape(dir);
    likelihood_correctness();
    determinism(dir);
    property_suite();

    fs::remove_all(dir);
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
              << std::endl;
    return failures == 0 ? 0 : 1;
}
