#include "nlv/discrete_operators.hpp"

#include <cmath>
#include <string>

#include "nlv/error.hpp"

namespace nlv {

TridiagonalOperator::TridiagonalOperator(Grid grid, std::vector<double> sub, std::vector<double> diag,
                                         std::vector<double> sup)
    : grid_(grid), sub_(std::move(sub)), diag_(std::move(diag)), sup_(std::move(sup)) {
    const std::size_t n = grid_.n();
    if (diag_.size() != n || sub_.size() != n - 1 || sup_.size() != n - 1) {
        throw InvalidArgument("tridiagonal operator: band sizes do not match the grid");
    }
}

Field TridiagonalOperator::apply(const Field& f) const {
    require_same_grid(grid_, f.grid(), "tridiagonal apply");
    const std::size_t n = grid_.n();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = diag_[i] * f[i];
        if (i > 0) s += sub_[i - 1] * f[i - 1];
        if (i + 1 < n) s += sup_[i] * f[i + 1];
        out[i] = s;
    }
    return Field(grid_, std::move(out));
}

TridiagonalOperator TridiagonalOperator::plus_diagonal(const Field& d) const {
    require_same_grid(grid_, d.grid(), "tridiagonal diagonal shift");
    std::vector<double> diag = diag_;
    for (std::size_t i = 0; i < diag.size(); ++i) diag[i] += d[i];
    return TridiagonalOperator(grid_, sub_, std::move(diag), sup_);
}

TridiagonalOperator assemble_neumann_laplacian(double m, const Grid& grid) {
    const std::size_t n = grid.n();
    if (n < 3) throw InvalidArgument("Neumann Laplacian needs n >= 3");
    const double c = m / (grid.h() * grid.h());
    std::vector<double> sub(n - 1, c);
    std::vector<double> sup(n - 1, c);
    std::vector<double> diag(n, -2.0 * c);
    sup[0] = 2.0 * c;
    sub[n - 2] = 2.0 * c;
    return TridiagonalOperator(grid, std::move(sub), std::move(diag), std::move(sup));
}

TridiagonalOperator assemble_reaction_operator(const SpeciesParams& params, const Grid& grid) {
    require_same_grid(params.grid(), grid, "reaction operator");
    return assemble_neumann_laplacian(params.m, grid).plus_diagonal(params.growth);
}

Field solve_shifted(const TridiagonalOperator& op, double shift, const Field& rhs) {
    require_same_grid(op.grid(), rhs.grid(), "solve_shifted");
    const std::size_t n = op.grid().n();
    const auto& a = op.sub();
    const auto& b = op.diag();
    const auto& c = op.sup();

    // Matrix is shift*I - op: diagonal shift - b, off-diagonals negated.
    std::vector<double> cp(n, 0.0);
    std::vector<double> dp(n, 0.0);
    double pivot = shift - b[0];
    if (std::abs(pivot) < 1e-14) {
        throw NumericalError("solve_shifted: singular pivot at row 0");
    }
    if (n > 1) cp[0] = -c[0] / pivot;
    dp[0] = rhs[0] / pivot;
    for (std::size_t i = 1; i < n; ++i) {
        const double lower = -a[i - 1];
        pivot = (shift - b[i]) - lower * cp[i - 1];
        if (std::abs(pivot) < 1e-14) {
            throw NumericalError("solve_shifted: singular pivot at row " + std::to_string(i));
        }
        if (i + 1 < n) cp[i] = -c[i] / pivot;
        dp[i] = (rhs[i] - lower * dp[i - 1]) / pivot;
    }
    std::vector<double> x(n);
    x[n - 1] = dp[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = dp[i] - cp[i] * x[i + 1];
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(x[i])) {
            throw NumericalError("solve_shifted: non-finite solution at row " + std::to_string(i));
        }
    }
    return Field(op.grid(), std::move(x));
}

}  // namespace nlv
