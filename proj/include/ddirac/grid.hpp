#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ddirac {

using Complex = std::complex<double>;

inline constexpr double pi = std::numbers::pi;

/// Uniform partition of a real interval [lo, hi] into `cells` subintervals.
class UniformGrid {
 public:
  UniformGrid(double lo, double hi, int cells) : lo_(lo), hi_(hi), cells_(cells) {
    if (!(lo < hi)) throw std::invalid_argument("UniformGrid: lo must be < hi");
    if (cells < 2) throw std::invalid_argument("UniformGrid: need at least 2 cells");
    step_ = (hi - lo) / cells;
  }

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double step() const { return step_; }
  int cells() const { return cells_; }
  int nodes() const { return cells_ + 1; }
  double node(int k) const { return k == cells_ ? hi_ : lo_ + k * step_; }

  bool contains(double x, double tol) const { return x >= lo_ - tol && x <= hi_ + tol; }

  /// Index of the cell containing x, clamped to [0, cells-1].
  int cell_index(double x) const {
    int k = static_cast<int>((x - lo_) / step_);
    if (k < 0) k = 0;
    if (k >= cells_) k = cells_ - 1;
    return k;
  }

  friend bool operator==(const UniformGrid& a, const UniformGrid& b) {
    return a.lo_ == b.lo_ && a.hi_ == b.hi_ && a.cells_ == b.cells_;
  }

 private:
  double lo_, hi_, step_;
  int cells_;
};

/// Complex-valued function tabulated at the nodes of a uniform grid.
/// Immutable after construction; the universal numeric carrier.
class SampledFunction {
 public:
  SampledFunction(UniformGrid grid, std::vector<Complex> values)
      : grid_(grid), values_(std::move(values)) {
    if (static_cast<int>(values_.size()) != grid_.nodes())
      throw std::invalid_argument("SampledFunction: value count must match grid nodes");
  }

  template <typename F>
  static SampledFunction tabulate(const UniformGrid& grid, F&& f) {
    std::vector<Complex> v(grid.nodes());
    for (int k = 0; k < grid.nodes(); ++k) v[k] = f(grid.node(k));
    return SampledFunction(grid, std::move(v));
  }

  static SampledFunction zero(const UniformGrid& grid) {
    return SampledFunction(grid, std::vector<Complex>(grid.nodes(), Complex{}));
  }

  const UniformGrid& grid() const { return grid_; }
  std::span<const Complex> values() const { return values_; }
  Complex value(int k) const { return values_[k]; }

 private:
  UniformGrid grid_;
  std::vector<Complex> values_;
};

enum class Side { Left, Right };

/// Piecewise-linear interpolation; exact at grid nodes.  Arguments within
/// h/2 of the interval are clamped to the endpoints, farther ones throw.
Complex interpolate(const SampledFunction& f, double x);

/// One-sided variant: use the two nearest nodes with position >= x (Right)
/// or <= x (Left), extrapolating by at most one cell.  Used to take limits
/// at the discontinuities of branch-defined functions.
Complex interpolate_one_sided(const SampledFunction& f, double x, Side side);

/// Exact integral of the piecewise-linear interpolant over [lo, hi].
/// Additive in the integration bounds by construction; error O(h^2).
Complex integrate(const SampledFunction& f, double lo, double hi);

/// ∫ f̂(x) x^weight e^{i λ x} dx over the full grid, where f̂ is the
/// piecewise-linear interpolant (weight in {0, 1}).  Exact in λ for the
/// interpolant; this keeps the accuracy independent of |λ| h.
Complex integrate_exp(const SampledFunction& f, Complex lambda, int weight = 0);

/// ∫ f̂ sin(λx) dx and ∫ f̂ cos(λx) dx with the same weight convention.
Complex integrate_sin(const SampledFunction& f, Complex lambda, int weight = 0);
Complex integrate_cos(const SampledFunction& f, Complex lambda, int weight = 0);

/// Trapezoid of a callable over [lo, g.hi()] on the nodes of g, with the
/// partial start cell evaluated directly.  Continuous integrands stay O(h^2).
template <typename F>
Complex trapezoid_tail(const UniformGrid& g, double lo, F&& f) {
  const double hi = g.hi();
  if (lo >= hi) return Complex{};
  const double h = g.step();
  int i0 = static_cast<int>(std::ceil((lo - g.lo()) / h - 1e-12));
  if (i0 < 0) i0 = 0;

  Complex total{};
  double x_prev = lo;
  Complex f_prev = f(lo);
  for (int i = i0; i <= g.cells(); ++i) {
    const double x = g.node(i);
    if (x <= x_prev) continue;
    const Complex fx = f(x);
    total += 0.5 * (f_prev + fx) * (x - x_prev);
    x_prev = x;
    f_prev = fx;
  }
  return total;
}

}  // namespace ddirac
