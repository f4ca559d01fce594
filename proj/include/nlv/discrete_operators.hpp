#pragma once

#include <vector>

#include "nlv/core_types.hpp"

namespace nlv {

/// Tridiagonal linear map on fields. Discretizations of m*Laplacian + a built
/// here are self-adjoint in the trapezoid-weighted inner product.
class TridiagonalOperator {
public:
    TridiagonalOperator(Grid grid, std::vector<double> sub, std::vector<double> diag, std::vector<double> sup);

    const Grid& grid() const noexcept { return grid_; }
    const std::vector<double>& sub() const noexcept { return sub_; }
    const std::vector<double>& diag() const noexcept { return diag_; }
    const std::vector<double>& sup() const noexcept { return sup_; }

    Field apply(const Field& f) const;

    /// Same operator with diag[i] += d[i].
    TridiagonalOperator plus_diagonal(const Field& d) const;

private:
    Grid grid_;
    std::vector<double> sub_;   // sub_[i] couples row i+1 to column i
    std::vector<double> diag_;
    std::vector<double> sup_;   // sup_[i] couples row i to column i+1
};

/// m * Laplacian with homogeneous Neumann conditions by ghost-node reflection:
/// row 0 is (2m/h^2)(f1 - f0), row n-1 is (2m/h^2)(f_{n-2} - f_{n-1}).
TridiagonalOperator assemble_neumann_laplacian(double m, const Grid& grid);

/// m * Laplacian + a for one type.
TridiagonalOperator assemble_reaction_operator(const SpeciesParams& params, const Grid& grid);

/// Solves (shift * I - op) f = rhs by Thomas elimination.
/// Throws NumericalError naming the row when a pivot falls below 1e-14 in magnitude.
Field solve_shifted(const TridiagonalOperator& op, double shift, const Field& rhs);

}  // namespace nlv
