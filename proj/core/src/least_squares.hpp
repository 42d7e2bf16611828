#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace vacuum::detail {

struct LinearFit {
    std::vector<double> coefficients;
    double residual_norm = 0.0;
};

// Least squares for sum_j c_j basis_j(x_i) ~ y_i. Columns are rescaled before the QR solve.
LinearFit fit_basis(const std::vector<double>& x, const std::vector<double>& y,
                    const std::vector<std::function<double(double)>>& basis);

}  // namespace vacuum::detail
