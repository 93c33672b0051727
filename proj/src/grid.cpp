#include "ddirac/grid.hpp"

#include <algorithm>
#include <cmath>

namespace ddirac {

namespace {

// Snap radius for "x is a node": avoids spurious interpolation when a
// caller reconstructs node positions through different arithmetic.
double snap_tol(const UniformGrid& g) { return 1e-9 * g.step(); }

}  // namespace

Complex interpolate(const SampledFunction& f, double x) {
  const UniformGrid& g = f.grid();
  const double tol = 0.5 * g.step();
  if (!g.contains(x, tol))
    throw std::out_of_range("interpolate: argument outside the grid interval");
  x = std::clamp(x, g.lo(), g.hi());

  const int k = g.cell_index(x);
  const double xk = g.node(k);
  const double t = (x - xk) / g.step();
  if (std::abs(x - xk) < snap_tol(g)) return f.value(k);
  if (std::abs(x - g.node(k + 1)) < snap_tol(g)) return f.value(k + 1);
  return f.value(k) * (1.0 - t) + f.value(k + 1) * t;
}

Complex interpolate_one_sided(const SampledFunction& f, double x, Side side) {
  const UniformGrid& g = f.grid();
  const double tol = 0.5 * g.step();
  if (!g.contains(x, tol))
    throw std::out_of_range("interpolate_one_sided: argument outside the grid interval");
  x = std::clamp(x, g.lo(), g.hi());

  int i;
  if (side == Side::Right) {
    i = static_cast<int>(std::ceil((x - g.lo()) / g.step() - 1e-9));
    i = std::clamp(i, 0, g.cells() - 1);
  } else {
    i = static_cast<int>(std::floor((x - g.lo()) / g.step() + 1e-9)) - 1;
    i = std::clamp(i, 0, g.cells() - 1);
  }
  const double t = (x - g.node(i)) / g.step();
  return f.value(i) * (1.0 - t) + f.value(i + 1) * t;
}

Complex integrate(const SampledFunction& f, double lo, double hi) {
  const UniformGrid& g = f.grid();
  const double tol = 0.5 * g.step();
  if (lo > hi + tol) throw std::out_of_range("integrate: inverted bounds");
  if (!g.contains(lo, tol) || !g.contains(hi, tol))
    throw std::out_of_range("integrate: bounds outside the grid interval");
  lo = std::clamp(lo, g.lo(), g.hi());
  hi = std::clamp(hi, g.lo(), g.hi());
  if (hi <= lo) return Complex{};

  const int klo = g.cell_index(lo);
  const int khi = g.cell_index(hi);
  const double h = g.step();

  // Exact integral of the linear interpolant on a sub-segment of one cell.
  auto cell_part = [&](int k, double x0, double x1) {
    const Complex fa = f.value(k), fb = f.value(k + 1);
    const double xa = g.node(k);
    auto at = [&](double x) {
      const double t = (x - xa) / h;
      return fa * (1.0 - t) + fb * t;
    };
    return 0.5 * (at(x0) + at(x1)) * (x1 - x0);
  };

  if (klo == khi) return cell_part(klo, lo, hi);

  Complex total = cell_part(klo, lo, g.node(klo + 1));
  for (int k = klo + 1; k < khi; ++k)
    total += 0.5 * (f.value(k) + f.value(k + 1)) * h;
  total += cell_part(khi, g.node(khi), hi);
  return total;
}

namespace {

// Moments M_p(θ) = ∫_0^1 u^p e^{iθu} du for p = 0, 1, 2.
struct Moments {
  Complex m0, m1, m2;
};

Moments moments(Complex theta) {
  Moments m;
  if (std::abs(theta) < 0.5) {
    // Series Σ (iθ)^k / (k! (k+p+1)); 18 terms is ample at |θ| < 1/2.
    Complex term{1.0, 0.0};
    m = {Complex{}, Complex{}, Complex{}};
    const Complex it = Complex(0.0, 1.0) * theta;
    for (int k = 0; k < 18; ++k) {
      m.m0 += term / double(k + 1);
      m.m1 += term / double(k + 2);
      m.m2 += term / double(k + 3);
      term *= it / double(k + 1);
    }
  } else {
    const Complex it = Complex(0.0, 1.0) * theta;
    const Complex e = std::exp(it);
    m.m0 = (e - 1.0) / it;
    m.m1 = (e * (it - 1.0) + 1.0) / (it * it);
    m.m2 = e / it - 2.0 * m.m1 / it;
  }
  return m;
}

}  // namespace

Complex integrate_exp(const SampledFunction& f, Complex lambda, int weight) {
  const UniformGrid& g = f.grid();
  const double h = g.step();
  const Moments m = moments(lambda * h);

  // Phase recurrence e^{iλ x_k}; multiplicative, so the relative rounding
  // drift stays at ~n·eps over the whole grid.
  Complex phase = std::exp(Complex(0.0, 1.0) * lambda * g.lo());
  const Complex step = std::exp(Complex(0.0, 1.0) * lambda * h);

  Complex total{};
  for (int k = 0; k < g.cells(); ++k) {
    const Complex fk = f.value(k);
    const Complex df = f.value(k + 1) - fk;
    Complex cell;
    if (weight == 0) {
      cell = fk * m.m0 + df * m.m1;
    } else {
      const double xk = g.node(k);
      cell = fk * xk * m.m0 + (fk * h + df * xk) * m.m1 + df * h * m.m2;
    }
    total += phase * cell;
    phase *= step;
  }
  return total * h;
}

Complex integrate_sin(const SampledFunction& f, Complex lambda, int weight) {
  const Complex ep = integrate_exp(f, lambda, weight);
  const Complex em = integrate_exp(f, -lambda, weight);
  return (ep - em) / Complex(0.0, 2.0);
}

Complex integrate_cos(const SampledFunction& f, Complex lambda, int weight) {
  const Complex ep = integrate_exp(f, lambda, weight);
  const Complex em = integrate_exp(f, -lambda, weight);
  return 0.5 * (ep + em);
}

}  // namespace ddirac
