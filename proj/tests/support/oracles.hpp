#pragma once

// Slow reference implementations used only to check the library.

#include <cmath>
#include <algorithm>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace bulbar::testing {

/// Exhaustive search over monotone warping paths of two 1-D sequences.
/// The cheapest path wins; among equally cheap paths the shortest.
/// Returns cost / cells of that path.
inline double brute_force_dtw(const std::vector<double>& a, const std::vector<double>& b) {
    double best_cost = std::numeric_limits<double>::infinity();
    std::size_t best_len = 0;
    struct Walker {
        const std::vector<double>& a;
        const std::vector<double>& b;
        double& best_cost;
        std::size_t& best_len;
        void walk(std::size_t i, std::size_t j, double cost, std::size_t len) {
            cost += std::abs(a[i] - b[j]);
            ++len;
            if (i + 1 == a.size() && j + 1 == b.size()) {
                if (cost < best_cost || (cost == best_cost && len < best_len)) {
                    best_cost = cost;
                    best_len = len;
                }
                return;
            }
            if (i + 1 < a.size()) walk(i + 1, j, cost, len);
            if (j + 1 < b.size()) walk(i, j + 1, cost, len);
            if (i + 1 < a.size() && j + 1 < b.size()) walk(i + 1, j + 1, cost, len);
        }
    };
    Walker{a, b, best_cost, best_len}.walk(0, 0, 0.0, 0);
    return best_cost / static_cast<double>(best_len);
}

/// Every monotone warping path through an n x m grid, as flattened cell
/// indices i * m + j.
inline std::vector<std::vector<int>> enumerate_warping_paths(int n, int m) {
    std::vector<std::vector<int>> paths;
    std::vector<int> current;
    struct Walker {
        int n, m;
        std::vector<int>& current;
        std::vector<std::vector<int>>& paths;
        void walk(int i, int j) {
            current.push_back(i * m + j);
            if (i + 1 == n && j + 1 == m) {
                paths.push_back(current);
            } else {
                if (i + 1 < n) walk(i + 1, j);
                if (j + 1 < m) walk(i, j + 1);
                if (i + 1 < n && j + 1 < m) walk(i + 1, j + 1);
            }
            current.pop_back();
        }
    };
    Walker{n, m, current, paths}.walk(0, 0);
    return paths;
}

/// Same rule as brute_force_dtw over precomputed paths; integer-valued
/// sequences keep the cost comparisons exact.
inline double path_dtw(const std::vector<std::vector<int>>& paths, const std::vector<int>& a,
                       const std::vector<int>& b) {
    const int m = static_cast<int>(b.size());
    int cell_cost[64];
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (int j = 0; j < m; ++j) cell_cost[static_cast<int>(i) * m + j] = std::abs(a[i] - b[static_cast<std::size_t>(j)]);
    }
    int best_cost = std::numeric_limits<int>::max();
    std::size_t best_len = 0;
    for (const auto& path : paths) {
        int cost = 0;
        for (int c : path) cost += cell_cost[c];
        if (cost < best_cost || (cost == best_cost && path.size() < best_len)) {
            best_cost = cost;
            best_len = path.size();
        }
    }
    return static_cast<double>(best_cost) / static_cast<double>(best_len);
}

/// Plain recursion over the three edit operations on the remaining suffixes.
inline std::size_t brute_force_edit_distance(const std::vector<std::string>& r, std::size_t i,
                                             const std::vector<std::string>& h, std::size_t j) {
    if (i == r.size()) return h.size() - j;
    if (j == h.size()) return r.size() - i;
    if (r[i] == h[j]) return brute_force_edit_distance(r, i + 1, h, j + 1);
    const std::size_t sub = brute_force_edit_distance(r, i + 1, h, j + 1);
    const std::size_t del = brute_force_edit_distance(r, i + 1, h, j);
    const std::size_t ins = brute_force_edit_distance(r, i, h, j + 1);
    return 1 + std::min({sub, del, ins});
}

inline std::size_t brute_force_edit_distance(const std::vector<std::string>& r,
                                             const std::vector<std::string>& h) {
    return brute_force_edit_distance(r, 0, h, 0);
}

/// For even df the chi-square tail is a finite Poisson sum:
/// Q(k, x/2) = exp(-x/2) * sum_{i<k} (x/2)^i / i!.
inline double chi_square_sf_even_df(double x, int df) {
    const int k = df / 2;
    const double half = x / 2.0;
    double term = 1.0, sum = 0.0;
    for (int i = 0; i < k; ++i) {
        if (i > 0) term *= half / i;
        sum += term;
    }
    return std::exp(-half) * sum;
}

}  // namespace bulbar::testing
