#include "xqr/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "xqr/error.hpp"

namespace xqr {

namespace {

struct Evaluator {
    const Objective& f;
    const NelderMeadOptions& opt;
    std::size_t count = 0;

    double operator()(std::vector<double>& x) {
        if (opt.project) opt.project(x);
        ++count;
        const double v = f(x);
        return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    }
};

// One simplex run from `start`. Returns the best vertex and its value.
std::pair<std::vector<double>, double> run_simplex(Evaluator& eval, const std::vector<double>& start,
                                                   double start_value) {
    const auto& opt = eval.opt;
    const std::size_t n = start.size();
    const std::size_t max_iter = opt.max_iterations ? opt.max_iterations : 2000 * std::max<std::size_t>(n, 1);

    std::vector<std::vector<double>> x(n + 1, start);
    std::vector<double> fx(n + 1, start_value);
    for (std::size_t i = 0; i < n; ++i) {
        x[i + 1][i] += opt.initial_step;
        if (opt.project) {
            // A start on the boundary would otherwise get a vertex projected
            // back onto itself and a flat simplex; step inward instead.
            auto probe = x[i + 1];
            opt.project(probe);
            if (probe[i] == start[i]) x[i + 1][i] = start[i] - opt.initial_step;
        }
        fx[i + 1] = eval(x[i + 1]);
    }

    std::vector<std::size_t> order(n + 1);
    std::vector<double> centroid(n), xr(n), xe(n), xc(n);
    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fx[a] < fx[b]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second_worst = order[n > 0 ? n - 1 : 0];

        double spread_x = 0.0;
        for (std::size_t i = 0; i <= n; ++i) {
            for (std::size_t d = 0; d < n; ++d) spread_x = std::max(spread_x, std::abs(x[i][d] - x[best][d]));
        }
        const double spread_f = fx[worst] - fx[best];
        if (spread_f <= opt.f_tolerance * std::max(1.0, std::abs(fx[best])) && spread_x <= opt.x_tolerance) break;
        if (n == 0) break;

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == worst) continue;
            for (std::size_t d = 0; d < n; ++d) centroid[d] += x[i][d];
        }
        for (double& c : centroid) c /= static_cast<double>(n);

        for (std::size_t d = 0; d < n; ++d) xr[d] = centroid[d] + opt.reflection * (centroid[d] - x[worst][d]);
        const double fr = eval(xr);

        if (fr < fx[best]) {
            for (std::size_t d = 0; d < n; ++d) xe[d] = centroid[d] + opt.expansion * (xr[d] - centroid[d]);
            const double fe = eval(xe);
            if (fe < fr) {
                x[worst] = xe;
                fx[worst] = fe;
            } else {
                x[worst] = xr;
                fx[worst] = fr;
            }
            continue;
        }
        if (fr < fx[second_worst]) {
            x[worst] = xr;
            fx[worst] = fr;
            continue;
        }

        const bool outside = fr < fx[worst];
        const auto& toward = outside ? xr : x[worst];
        for (std::size_t d = 0; d < n; ++d) xc[d] = centroid[d] + opt.contraction * (toward[d] - centroid[d]);
        const double fc = eval(xc);
        if (fc < (outside ? fr : fx[worst])) {
            x[worst] = xc;
            fx[worst] = fc;
            continue;
        }

        for (std::size_t i = 0; i <= n; ++i) {
            if (i == best) continue;
            for (std::size_t d = 0; d < n; ++d) x[i][d] = x[best][d] + opt.shrink * (x[i][d] - x[best][d]);
            fx[i] = eval(x[i]);
        }
    }
    const auto it = std::min_element(fx.begin(), fx.end());
    return {x[static_cast<std::size_t>(it - fx.begin())], *it};
}

}  // namespace

NelderMeadResult nelder_mead_minimize(const Objective& objective, std::vector<double> init,
                                      const NelderMeadOptions& options) {
    if (init.empty()) throw Error(ErrorCode::InvalidArgument, "start point has no coordinates");
    Evaluator eval{objective, options};
    if (options.project) options.project(init);
    ++eval.count;
    const double f0 = objective(init);
    if (!std::isfinite(f0)) throw Error(ErrorCode::NonFiniteObjective, "objective is not finite at the start point");

    NelderMeadResult result;
    auto [x, fx] = run_simplex(eval, init, f0);
    if (f0 < fx) {
        x = init;
        fx = f0;
    }
    result.trace.push_back(fx);

    for (std::size_t r = 0; r < options.max_restarts; ++r) {
        auto [xn, fn] = run_simplex(eval, x, fx);
        ++result.restarts;
        const double improvement = fx - fn;
        if (fn < fx) {
            x = std::move(xn);
            fx = fn;
        }
        result.trace.push_back(fx);
        if (!(improvement >= options.restart_tolerance)) break;
    }
    result.argmin = std::move(x);
    result.value = fx;
    result.evaluations = eval.count;
    return result;
}

}  // namespace xqr
