#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "xqr/data_table.hpp"

namespace testing_helpers {

inline xqr::DataTable random_raw_table(std::size_t L, std::size_t C, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> v(L * C);
    for (auto& x : v) x = g(rng);
    return xqr::DataTable(L, C, v);
}

inline xqr::DataTable random_standardized(std::size_t L, std::size_t M, std::mt19937_64& rng) {
    return xqr::standardize(random_raw_table(L, M + 1, rng)).table;
}

inline std::vector<double> random_phases(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-3.14159, 3.14159);
    std::vector<double> p(n);
    for (auto& x : p) x = u(rng);
    return p;
}

// sum_l (sum_m x_lm cos phi_m)^2, straight from the table.
inline double classical_expectation(const xqr::DataTable& t, const std::vector<double>& phi) {
    double e = 0.0;
    for (std::size_t l = 0; l < t.rows(); ++l) {
        double s = 0.0;
        for (std::size_t m = 0; m < t.cols(); ++m) s += t(l, m) * std::cos(phi[m]);
        e += s * s;
    }
    return e;
}

inline std::vector<double> random_unit_vector(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> v(n);
    double s = 0.0;
    for (auto& x : v) {
        x = g(rng);
        s += x * x;
    }
    for (auto& x : v) x /= std::sqrt(s);
    return v;
}

}  // namespace testing_helpers
