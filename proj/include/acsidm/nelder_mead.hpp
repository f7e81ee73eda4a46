#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace acsidm {

struct NelderMeadOptions {
    double tol = 1e-10;             // absolute spread of objective values over the simplex
    std::size_t max_evals = 5000;
    double initial_scale = 0.1;     // relative perturbation of each coordinate
    int restarts = 1;               // fresh simplexes around the best point after convergence
};

template <std::size_t N>
struct NelderMeadResult {
    std::array<double, N> x{};
    double value = std::numeric_limits<double>::infinity();
    std::size_t n_evals = 0;
    bool converged = false;
    std::vector<double> best_history;  // best value after each iteration
};

/// Minimizes f over R^N with reflection 1, expansion 2, contraction 0.5 and
/// shrink 0.5. Non-finite values (including NaN) rank worst. Throws
/// std::invalid_argument if f is not finite at `start`.
template <std::size_t N, class F>
NelderMeadResult<N> nelder_mead(F&& f, const std::array<double, N>& start,
                                const NelderMeadOptions& opts)
{
    using Point = std::array<double, N>;
    struct Vertex {
        Point x;
        double fx;
    };

    NelderMeadResult<N> result;
    auto eval = [&](const Point& x) {
        ++result.n_evals;
        const double v = f(x);
        return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
    };
    auto better = [](const Vertex& a, const Vertex& b) { return a.fx < b.fx; };
    auto along = [](const Point& origin, const Point& through, double factor) {
        Point p;
        for (std::size_t i = 0; i < N; ++i) p[i] = origin[i] + factor * (through[i] - origin[i]);
        return p;
    };

    const double f0 = eval(start);
    if (!std::isfinite(f0))
        throw std::invalid_argument("nelder_mead: objective is not finite at the initial point");

    Vertex best{start, f0};
    std::array<Vertex, N + 1> simplex;

    for (int round = 0; round <= opts.restarts; ++round) {
        const double round_start_value = best.fx;
        simplex[0] = best;
        for (std::size_t i = 0; i < N; ++i) {
            Point x = best.x;
            x[i] += x[i] != 0.0 ? opts.initial_scale * x[i] : 0.00025;
            simplex[i + 1] = {x, eval(x)};
        }
        std::sort(simplex.begin(), simplex.end(), better);

        bool converged = false;
        while (true) {
            const double spread = simplex[N].fx - simplex[0].fx;
            if (std::isfinite(spread) && spread < opts.tol) {
                converged = true;
                break;
            }
            if (result.n_evals >= opts.max_evals) break;

            Point centroid{};
            for (std::size_t v = 0; v < N; ++v)
                for (std::size_t i = 0; i < N; ++i) centroid[i] += simplex[v].x[i] / N;

            Vertex& worst = simplex[N];
            const Vertex reflected{along(centroid, worst.x, -1.0), 0.0};
            const double fr = eval(reflected.x);

            if (fr < simplex[0].fx) {
                const Point xe = along(centroid, reflected.x, 2.0);
                const double fe = eval(xe);
                worst = fe < fr ? Vertex{xe, fe} : Vertex{reflected.x, fr};
            } else if (fr < simplex[N - 1].fx) {
                worst = {reflected.x, fr};
            } else {
                bool accepted = false;
                if (fr < worst.fx) {
                    const Point xc = along(centroid, reflected.x, 0.5);
                    const double fc = eval(xc);
                    if (fc <= fr) {
                        worst = {xc, fc};
                        accepted = true;
                    }
                } else {
                    const Point xc = along(centroid, worst.x, 0.5);
                    const double fc = eval(xc);
                    if (fc < worst.fx) {
                        worst = {xc, fc};
                        accepted = true;
                    }
                }
                if (!accepted) {
                    for (std::size_t v = 1; v <= N; ++v) {
                        simplex[v].x = along(simplex[0].x, simplex[v].x, 0.5);
                        simplex[v].fx = eval(simplex[v].x);
                    }
                }
            }
            std::stable_sort(simplex.begin(), simplex.end(), better);
            result.best_history.push_back(simplex[0].fx);
        }

        if (simplex[0].fx < best.fx) best = simplex[0];
        result.converged = converged;
        if (!converged) break;
        // a restart that cannot improve by more than tol confirms the minimum
        if (round > 0 && round_start_value - best.fx < opts.tol) break;
    }

    result.x = best.x;
    result.value = best.fx;
    return result;
}

}  // namespace acsidm
