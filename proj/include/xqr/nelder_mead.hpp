#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace xqr {

using Objective = std::function<double(std::span<const double>)>;

struct NelderMeadOptions {
    double reflection = 1.0;
    double expansion = 2.0;
    double contraction = 0.5;
    double shrink = 0.5;
    double initial_step = 0.1;

    // A single run stops when the simplex spread in f and in x both fall
    // below these, or after max_iterations.
    double f_tolerance = 1e-14;
    double x_tolerance = 1e-10;
    std::size_t max_iterations = 0;  // 0: 2000 * dimension

    // Warm restarts: a fresh simplex around the incumbent until a restart
    // improves the best value by less than restart_tolerance.
    double restart_tolerance = 1e-10;
    std::size_t max_restarts = 50;

    // Applied to every trial point (e.g. clamping to a box).
    std::function<void(std::vector<double>&)> project;
};

struct NelderMeadResult {
    std::vector<double> argmin;
    double value = 0.0;
    std::vector<double> trace;  // best value after the initial run and after each restart
    std::size_t evaluations = 0;
    std::size_t restarts = 0;
};

NelderMeadResult nelder_mead_minimize(const Objective& objective, std::vector<double> init,
                                      const NelderMeadOptions& options = {});

}  // namespace xqr
