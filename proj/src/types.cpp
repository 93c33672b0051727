#include "ddirac/types.hpp"

#include <algorithm>
#include <cmath>

namespace ddirac {

RegionLayout region_layout(DelayParameter a) {
  const double v = a.value();
  RegionLayout L{a, {}, {}, {}, {}, {}, {}, {}};
  L.edge_lower = {v, 1.5 * v};
  L.known_window = {1.5 * v, 0.5 * pi + 0.25 * v};
  L.i3 = {0.5 * pi + 0.25 * v, pi - v};
  L.gamma_lower = {pi - v, 2.0 * v};
  L.i2 = {2.0 * v, 0.5 * pi + 0.75 * v};
  L.gamma_upper = {0.5 * pi + 0.75 * v, pi - 0.5 * v};
  L.edge_upper = {pi - 0.5 * v, pi};
  return L;
}

std::array<double, 8> RegionLayout::breakpoints() const {
  return {edge_lower.lo,   edge_lower.hi, i3.lo,         gamma_lower.lo,
          gamma_lower.hi,  i2.hi,         edge_upper.lo, edge_upper.hi};
}

Region region_of(const RegionLayout& L, double x, double tol) {
  auto near = [tol](double x, double b) { return std::abs(x - b) <= tol; };

  // Breakpoint precedence: known > edge > gamma > delta > eta.
  if (near(x, L.known_window.lo) || near(x, L.known_window.hi)) return Region::Known;
  if (near(x, L.edge_lower.lo) || near(x, L.edge_upper.lo) || near(x, L.edge_upper.hi))
    return Region::Edge;
  if (near(x, L.gamma_lower.lo) || near(x, L.gamma_lower.hi) || near(x, L.gamma_upper.lo))
    return Region::Gamma;

  if (x > L.known_window.lo && x < L.known_window.hi) return Region::Known;
  if ((x >= L.edge_lower.lo && x <= L.edge_lower.hi) ||
      (x >= L.edge_upper.lo && x <= L.edge_upper.hi))
    return Region::Edge;
  if ((x >= L.gamma_lower.lo && x <= L.gamma_lower.hi) ||
      (x >= L.gamma_upper.lo && x < L.gamma_upper.hi))
    return Region::Gamma;
  if (x > L.i2.lo && x < L.i2.hi) return Region::Delta;
  if (x >= L.i3.lo && x < L.i3.hi) return Region::Eta;
  throw std::domain_error("region_of: x outside [a, pi]");
}

double Spectrum::max_residual(int lo, int hi) const {
  double worst = 0.0;
  for (int n = -order_; n <= order_; ++n) {
    const int an = std::abs(n);
    if (an < lo || an > hi) continue;
    worst = std::max(worst, std::abs(residual(n)));
  }
  return worst;
}

}  // namespace ddirac
