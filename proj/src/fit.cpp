#include <Eigen/Dense>

#include <cmath>
#include <set>

#include "pslight/correlation.hpp"

namespace pslight {

namespace {

constexpr int kCoefficients = 6;

Eigen::MatrixXd design(std::span<const std::pair<double, double>> points) {
    Eigen::MatrixXd x(static_cast<Eigen::Index>(points.size()), kCoefficients);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto [b1, b2] = points[i];
        x.row(static_cast<Eigen::Index>(i)) << 1.0, b1, b2, b1 * b1, b2 * b2, b1 * b2;
    }
    return x;
}

}  // namespace

void check_quadratic_design(std::span<const std::pair<double, double>> beta_grid) {
    const std::set<std::pair<double, double>> distinct(beta_grid.begin(), beta_grid.end());
    if (distinct.size() < kCoefficients) {
        throw RankError("quadratic fit: need at least 6 distinct (beta1, beta2) points, got " +
                        std::to_string(distinct.size()));
    }
    const Eigen::MatrixXd x = design(beta_grid);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    qr.setThreshold(1e-10);
    if (qr.rank() < kCoefficients) {
        throw RankError("quadratic fit: design has rank " + std::to_string(qr.rank()) +
                        " < 6 (points lie on a conic or line)");
    }
}

QuadraticFit fit_quadratic_surface(std::span<const SweepRow> rows) {
    std::vector<std::pair<double, double>> points;
    points.reserve(rows.size());
    for (const auto& row : rows) points.emplace_back(row.beta1, row.beta2);
    check_quadratic_design(points);

    const Eigen::MatrixXd x = design(points);
    Eigen::VectorXd y(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) y(static_cast<Eigen::Index>(i)) = rows[i].deficit;
    const Eigen::VectorXd coef = x.colPivHouseholderQr().solve(y);
    const Eigen::VectorXd residual = y - x * coef;

    QuadraticFit fit;
    fit.a = coef(0);
    fit.b1 = coef(1);
    fit.b2 = coef(2);
    fit.c1 = coef(3);
    fit.c2 = coef(4);
    fit.d = coef(5);
    fit.residual_rms = std::sqrt(residual.squaredNorm() / static_cast<double>(rows.size()));
    return fit;
}

}  // namespace pslight
