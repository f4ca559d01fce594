#include "nlv/core_types.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nlv/error.hpp"

namespace nlv {

Grid::Grid(double x_lo, double x_hi, std::size_t n) : x_lo_(x_lo), x_hi_(x_hi), n_(n), h_(0.0) {
    if (!std::isfinite(x_lo) || !std::isfinite(x_hi) || !(x_hi > x_lo)) {
        throw InvalidArgument("grid: require finite x_lo < x_hi");
    }
    if (n < 3) {
        throw InvalidArgument("grid: need at least 3 nodes, got " + std::to_string(n));
    }
    h_ = (x_hi - x_lo) / static_cast<double>(n - 1);
}

std::vector<double> Grid::nodes() const {
    std::vector<double> x(n_);
    for (std::size_t i = 0; i < n_; ++i) x[i] = node(i);
    return x;
}

Field::Field(Grid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.n()) {
        throw InvalidArgument("field: " + std::to_string(values_.size()) + " values for a grid of " +
                              std::to_string(grid_.n()) + " nodes");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw InvalidArgument("field: non-finite value at node " + std::to_string(i));
        }
    }
}

Field Field::constant(const Grid& grid, double value) {
    return Field(grid, std::vector<double>(grid.n(), value));
}

Field Field::from_function(const Grid& grid, const std::function<double(double)>& f) {
    std::vector<double> v(grid.n());
    for (std::size_t i = 0; i < grid.n(); ++i) v[i] = f(grid.node(i));
    return Field(grid, std::move(v));
}

double Field::max() const { return *std::max_element(values_.begin(), values_.end()); }
double Field::min() const { return *std::min_element(values_.begin(), values_.end()); }

double Field::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
    if (!(a == b)) {
        throw InvalidArgument(std::string(what) + ": fields live on different grids");
    }
}

double integrate(const Field& f) {
    const Grid& g = f.grid();
    double s = 0.0;
    for (std::size_t i = 0; i < g.n(); ++i) s += g.weight(i) * f[i];
    return s;
}

double inner_l2(const Field& f, const Field& g) {
    require_same_grid(f.grid(), g.grid(), "inner_l2");
    const Grid& grid = f.grid();
    double s = 0.0;
    for (std::size_t i = 0; i < grid.n(); ++i) s += grid.weight(i) * (f[i] * g[i]);
    return s;
}

double norm_l2(const Field& f) { return std::sqrt(inner_l2(f, f)); }

namespace {

template <typename Op>
Field zip(const Field& a, const Field& b, const char* what, Op op) {
    require_same_grid(a.grid(), b.grid(), what);
    std::vector<double> v(a.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = op(a[i], b[i]);
    return Field(a.grid(), std::move(v));
}

}  // namespace

Field operator+(const Field& a, const Field& b) {
    return zip(a, b, "field sum", [](double x, double y) { return x + y; });
}

Field operator-(const Field& a, const Field& b) {
    return zip(a, b, "field difference", [](double x, double y) { return x - y; });
}

Field operator*(double s, const Field& a) {
    std::vector<double> v(a.values().begin(), a.values().end());
    for (double& x : v) x *= s;
    return Field(a.grid(), std::move(v));
}

Field pointwise_product(const Field& a, const Field& b) {
    return zip(a, b, "pointwise product", [](double x, double y) { return x * y; });
}

Field pointwise_min(const Field& a, const Field& b) {
    return zip(a, b, "pointwise min", [](double x, double y) { return std::min(x, y); });
}

double max_abs_difference(const Field& a, const Field& b) {
    require_same_grid(a.grid(), b.grid(), "max_abs_difference");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

CompetitionKernel::CompetitionKernel(Grid grid, std::variant<Separable, General> data)
    : grid_(grid), data_(std::move(data)) {}

CompetitionKernel CompetitionKernel::separable(Field weight) {
    const double lo = weight.min();
    const double hi = weight.max();
    if (!(lo > 0.0)) {
        throw InvalidArgument("separable kernel must be bounded below by a positive constant");
    }
    Grid grid = weight.grid();
    CompetitionKernel k(grid, Separable{std::move(weight)});
    k.lower_ = lo;
    k.upper_ = hi;
    return k;
}

CompetitionKernel CompetitionKernel::general(const Grid& grid, std::vector<double> matrix) {
    const std::size_t n = grid.n();
    if (matrix.size() != n * n) {
        throw InvalidArgument("general kernel: matrix must be n*n");
    }
    double lo = matrix[0];
    double hi = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double v = matrix[i * n + j];
            if (!std::isfinite(v) || v < 0.0) {
                throw InvalidArgument("general kernel: entries must be finite and nonnegative");
            }
            hi = std::max(hi, v);
        }
        lo = std::min(lo, matrix[i * n + i]);
    }
    if (!(lo > 0.0)) {
        throw InvalidArgument("general kernel: diagonal I(x,x) must be bounded below by a positive constant");
    }
    CompetitionKernel k(grid, General{n, std::move(matrix)});
    k.lower_ = lo;
    k.upper_ = hi;
    return k;
}

CompetitionKernel CompetitionKernel::general(const Grid& grid,
                                             const std::function<double(double, double)>& kernel) {
    const std::size_t n = grid.n();
    std::vector<double> m(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m[i * n + j] = kernel(grid.node(i), grid.node(j));
    }
    return general(grid, std::move(m));
}

const Field& CompetitionKernel::weight() const {
    if (const auto* s = std::get_if<Separable>(&data_)) return s->weight;
    throw InvalidArgument("kernel is not separable");
}

double CompetitionKernel::at(std::size_t i, std::size_t j) const {
    if (const auto* s = std::get_if<Separable>(&data_)) return s->weight[j];
    const auto& g = std::get<General>(data_);
    return g.matrix[i * g.n + j];
}

Field CompetitionKernel::apply(const Field& g) const {
    require_same_grid(grid_, g.grid(), "kernel apply");
    if (const auto* s = std::get_if<Separable>(&data_)) {
        return Field::constant(grid_, inner_l2(s->weight, g));
    }
    const auto& gen = std::get<General>(data_);
    const std::size_t n = gen.n;
    std::vector<double> w(n);
    for (std::size_t j = 0; j < n; ++j) w[j] = grid_.weight(j) * g[j];
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = gen.matrix.data() + i * n;
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += row[j] * w[j];
        out[i] = s;
    }
    return Field(grid_, std::move(out));
}

CompetitionKernel CompetitionKernel::as_general() const {
    if (!is_separable()) return *this;
    const Field& w = weight();
    const std::size_t n = grid_.n();
    std::vector<double> m(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m[i * n + j] = w[j];
    }
    return general(grid_, std::move(m));
}

CompetitionKernel CompetitionKernel::scaled(double c) const {
    if (!(c > 0.0)) throw InvalidArgument("kernel scale must be positive");
    if (is_separable()) return separable(c * weight());
    std::vector<double> m = std::get<General>(data_).matrix;
    for (double& v : m) v *= c;
    return general(grid_, std::move(m));
}

SpeciesParams::SpeciesParams(double m_, Field growth_, CompetitionKernel kernel_)
    : m(m_), growth(std::move(growth_)), kernel(std::move(kernel_)) {
    if (!(m > 0.0) || !std::isfinite(m)) {
        throw InvalidArgument("diffusion rate m must be positive");
    }
    require_same_grid(growth.grid(), kernel.grid(), "species parameters");
}

DimorphicParams::DimorphicParams(SpeciesParams s1, SpeciesParams s2, Field c12, Field c21)
    : species1(std::move(s1)), species2(std::move(s2)), cross12(std::move(c12)), cross21(std::move(c21)) {
    require_same_grid(species1.grid(), species2.grid(), "dimorphic parameters");
    require_same_grid(species1.grid(), cross12.grid(), "dimorphic parameters");
    require_same_grid(species1.grid(), cross21.grid(), "dimorphic parameters");
    if (!species1.kernel.is_separable() || !species2.kernel.is_separable()) {
        throw InvalidArgument("dimorphic system needs separable self-competition kernels");
    }
    if (cross12.min() < 0.0 || cross21.min() < 0.0) {
        throw InvalidArgument("cross-competition kernels must be nonnegative");
    }
}

const Field& DimorphicParams::kernel(int i, int j) const {
    if (i == 1 && j == 1) return species1.kernel.weight();
    if (i == 2 && j == 2) return species2.kernel.weight();
    if (i == 1 && j == 2) return cross12;
    if (i == 2 && j == 1) return cross21;
    throw InvalidArgument("kernel index out of range");
}

Field build_growth_figure1(double u_center, double a_bar, const Grid& grid) {
    return Field::from_function(grid, [=](double x) {
        const double d = x - u_center;
        return std::max(a_bar * (1.0 - 20.0 * d * d), -1.0);
    });
}

Field build_kernel_figure1(double u_center, const Grid& grid) {
    return Field::from_function(grid, [=](double x) { return std::abs(x - u_center) < 0.25 ? 1.0 : 0.1; });
}

}  // namespace nlv
