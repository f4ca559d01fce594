#pragma once

// Grids, sampled fields, trapezoid quadrature and the parameter bundles
// shared by the whole library. Everything here is immutable once built.

#include <cstddef>
#include <functional>
#include <span>
#include <variant>
#include <vector>

namespace nlv {

/// Uniform 1D grid on [x_lo, x_hi] with n >= 3 nodes.
class Grid {
public:
    Grid(double x_lo, double x_hi, std::size_t n);

    double x_lo() const noexcept { return x_lo_; }
    double x_hi() const noexcept { return x_hi_; }
    std::size_t n() const noexcept { return n_; }
    double h() const noexcept { return h_; }
    double length() const noexcept { return x_hi_ - x_lo_; }
    double node(std::size_t i) const noexcept { return x_lo_ + static_cast<double>(i) * h_; }

    /// Trapezoid weight of node i (h/2 at both ends, h inside).
    double weight(std::size_t i) const noexcept {
        return (i == 0 || i + 1 == n_) ? 0.5 * h_ : h_;
    }

    std::vector<double> nodes() const;

    bool operator==(const Grid& other) const noexcept = default;

private:
    double x_lo_;
    double x_hi_;
    std::size_t n_;
    double h_;
};

/// Real function sampled at the nodes of a grid. Values are always finite.
class Field {
public:
    Field(Grid grid, std::vector<double> values);

    static Field constant(const Grid& grid, double value);
    static Field from_function(const Grid& grid, const std::function<double(double)>& f);

    const Grid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t i) const noexcept { return values_[i]; }

    double max() const;
    double min() const;
    double max_abs() const;

private:
    Grid grid_;
    std::vector<double> values_;
};

/// Throws InvalidArgument unless both fields live on the same grid.
void require_same_grid(const Grid& a, const Grid& b, const char* what);

/// Composite trapezoid approximation of the integral of f over the grid.
double integrate(const Field& f);

/// Trapezoid approximation of the integral of f*g.
double inner_l2(const Field& f, const Field& g);

/// sqrt(inner_l2(f, f)).
double norm_l2(const Field& f);

/// Field-valued arithmetic used throughout the solvers.
Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(double s, const Field& a);
Field pointwise_product(const Field& a, const Field& b);
Field pointwise_min(const Field& a, const Field& b);
double max_abs_difference(const Field& a, const Field& b);

/// Competition kernel I. Either a function of y alone (separable, the kernel
/// acting on g is the scalar integral of I*g) or a full matrix I(x_i, y_j).
class CompetitionKernel {
public:
    struct Separable {
        Field weight;
    };
    struct General {
        std::size_t n;
        std::vector<double> matrix;  // row-major, matrix[i*n + j] = I(x_i, y_j)
    };

    static CompetitionKernel separable(Field weight);
    static CompetitionKernel general(const Grid& grid, std::vector<double> matrix);
    static CompetitionKernel general(const Grid& grid, const std::function<double(double, double)>& kernel);

    bool is_separable() const noexcept { return std::holds_alternative<Separable>(data_); }
    const Grid& grid() const noexcept { return grid_; }

    /// Separable weight; throws InvalidArgument for a general kernel.
    const Field& weight() const;
    /// I(x_i, y_j); for a separable kernel this is weight(y_j).
    double at(std::size_t i, std::size_t j) const;

    /// Lower bound I_- : min of the weight (separable) or of the diagonal (general).
    double lower_bound() const noexcept { return lower_; }
    /// Upper bound I^+ over all entries.
    double upper_bound() const noexcept { return upper_; }

    /// x -> integral of I(x, y) g(y) dy. Constant in x for separable kernels.
    Field apply(const Field& g) const;

    /// Separable kernel promoted to its general matrix form I(x, y) = I(y).
    CompetitionKernel as_general() const;

    /// Every entry multiplied by c > 0.
    CompetitionKernel scaled(double c) const;

private:
    CompetitionKernel(Grid grid, std::variant<Separable, General> data);

    Grid grid_;
    std::variant<Separable, General> data_;
    double lower_ = 0.0;
    double upper_ = 0.0;
};

/// Diffusion rate m, growth field a and self-competition kernel of one type.
struct SpeciesParams {
    SpeciesParams(double m, Field growth, CompetitionKernel kernel);

    double m;
    Field growth;
    CompetitionKernel kernel;

    const Grid& grid() const noexcept { return growth.grid(); }
    /// a_inf = max |a|.
    double growth_bound() const { return growth.max_abs(); }
};

/// Two types with separable self kernels plus the cross kernels I12 and I21.
struct DimorphicParams {
    DimorphicParams(SpeciesParams species1, SpeciesParams species2, Field cross12, Field cross21);

    SpeciesParams species1;
    SpeciesParams species2;
    Field cross12;
    Field cross21;

    const Grid& grid() const noexcept { return species1.grid(); }
    /// I_ij as a field, i and j in {1, 2}.
    const Field& kernel(int i, int j) const;
};

/// x -> max{a_bar (1 - 20 (x - u)^2), -1}.
Field build_growth_figure1(double u_center, double a_bar, const Grid& grid);

/// 1 where |x - u| < 0.25, 0.1 elsewhere.
Field build_kernel_figure1(double u_center, const Grid& grid);

}  // namespace nlv
