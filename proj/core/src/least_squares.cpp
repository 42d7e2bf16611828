#include "least_squares.hpp"

#include <Eigen/Dense>

#include "vacuum/errors.hpp"

namespace vacuum::detail {

LinearFit fit_basis(const std::vector<double>& x, const std::vector<double>& y,
                    const std::vector<std::function<double(double)>>& basis) {
    const auto rows = static_cast<Eigen::Index>(x.size());
    const auto cols = static_cast<Eigen::Index>(basis.size());
    if (x.size() != y.size()) throw PreconditionError("fit_basis: x and y differ in length");
    if (rows < cols || cols == 0) throw PreconditionError("fit_basis: too few points for the basis");

    Eigen::MatrixXd a(rows, cols);
    Eigen::VectorXd b(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
        b(i) = y[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < cols; ++j) a(i, j) = basis[static_cast<std::size_t>(j)](x[static_cast<std::size_t>(i)]);
    }
    Eigen::VectorXd scale = a.colwise().norm().transpose();
    for (Eigen::Index j = 0; j < cols; ++j) {
        if (scale(j) == 0.0) scale(j) = 1.0;
        a.col(j) /= scale(j);
    }
    const Eigen::VectorXd c = a.colPivHouseholderQr().solve(b);

    LinearFit fit;
    fit.residual_norm = (a * c - b).norm();
    fit.coefficients.resize(static_cast<std::size_t>(cols));
    for (Eigen::Index j = 0; j < cols; ++j) fit.coefficients[static_cast<std::size_t>(j)] = c(j) / scale(j);
    return fit;
}

}  // namespace vacuum::detail
