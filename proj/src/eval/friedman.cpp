#include "bulbar/eval/friedman.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/special_functions/gamma.hpp>
#include <fmt/format.h>

#include "bulbar/error.hpp"

namespace bulbar::eval {

double chi_square_sf(double x, int df) {
    if (df < 1) throw ValidationError(fmt::format("chi-square df must be >= 1, got {}", df));
    if (!std::isfinite(x) || x < 0.0) {
        throw ValidationError(fmt::format("chi-square statistic must be finite and >= 0, got {}", x));
    }
    if (x == 0.0) return 1.0;
    return boost::math::gamma_q(0.5 * df, 0.5 * x);
}

std::vector<double> mid_ranks(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

FriedmanResult friedman_test(const std::vector<std::vector<double>>& blocks) {
    const std::size_t n = blocks.size();
    if (n < 2) throw ValidationError(fmt::format("Friedman test needs >= 2 blocks, got {}", n));
    const std::size_t k = blocks.front().size();
    if (k < 2) throw ValidationError(fmt::format("Friedman test needs >= 2 treatments, got {}", k));

    std::vector<double> rank_sums(k, 0.0);
    double tie_sum = 0.0;
    for (std::size_t b = 0; b < n; ++b) {
        const auto& row = blocks[b];
        if (row.size() != k) {
            throw ValidationError(
                fmt::format("Friedman block {} has {} cells, expected {} (blocks must be complete)", b,
                            row.size(), k));
        }
        for (double v : row) {
            if (!std::isfinite(v)) {
                throw ValidationError(fmt::format("Friedman block {} has a missing or non-finite cell", b));
            }
        }
        const auto ranks = mid_ranks(row);
        for (std::size_t t = 0; t < k; ++t) rank_sums[t] += ranks[t];

        std::vector<double> sorted(row);
        std::sort(sorted.begin(), sorted.end());
        std::size_t i = 0;
        while (i < k) {
            std::size_t j = i;
            while (j + 1 < k && sorted[j + 1] == sorted[i]) ++j;
            const double t = static_cast<double>(j - i + 1);
            tie_sum += t * t * t - t;
            i = j + 1;
        }
    }

    const double nd = static_cast<double>(n), kd = static_cast<double>(k);
    double ss = 0.0;
    for (double r : rank_sums) ss += r * r;
    const double numerator = 12.0 / (nd * kd * (kd + 1.0)) * ss - 3.0 * nd * (kd + 1.0);
    const double correction = 1.0 - tie_sum / (nd * (kd * kd * kd - kd));

    FriedmanResult res;
    res.df = static_cast<int>(k) - 1;
    if (correction <= 0.0) {
        res.chi2 = 0.0;
        res.p = 1.0;
        return res;
    }
    res.chi2 = std::max(0.0, numerator / correction);
    res.p = chi_square_sf(res.chi2, res.df);
    return res;
}

}  // namespace bulbar::eval
