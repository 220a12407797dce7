#pragma once

#include <vector>

namespace bulbar::eval {

/// Upper tail of the chi-square distribution, Q(df/2, x/2).
/// Throws ValidationError for x < 0, non-finite x, or df < 1.
double chi_square_sf(double x, int df);

struct FriedmanResult {
    double chi2 = 0.0;
    int df = 0;
    double p = 1.0;
};

/// Mid-ranks within each block (row), tie-corrected statistic. Throws
/// ValidationError for fewer than 2 blocks or treatments, ragged rows, or
/// non-finite cells.
FriedmanResult friedman_test(const std::vector<std::vector<double>>& blocks);

/// 1-based mid-ranks of the values; ties share the average rank.
std::vector<double> mid_ranks(const std::vector<double>& values);

}  // namespace bulbar::eval
