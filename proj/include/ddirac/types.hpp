#pragma once

#include <array>
#include <vector>

#include "ddirac/grid.hpp"

namespace ddirac {

/// Constant delay a of the operator.  The solver covers the regime
/// π/3 <= a < 2π/5, where the two spectra determine the potentials only
/// together with an a-priori-known window.
class DelayParameter {
 public:
  static constexpr double min_value = pi / 3.0;
  static constexpr double max_value = 2.0 * pi / 5.0;

  explicit DelayParameter(double a) : a_(a) {
    if (!(a >= min_value && a < max_value))
      throw std::domain_error("DelayParameter: a must lie in [pi/3, 2*pi/5)");
  }

  double value() const { return a_; }

 private:
  double a_;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
  bool degenerate(double tol = 1e-12) const { return length() <= tol; }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

/// The potential matrix Q(x) = [[q, p], [p, -q]] on [a, π]; Q vanishes on
/// (0, a) and is not stored there.
struct PotentialPair {
  DelayParameter a;
  SampledFunction q;
  SampledFunction p;

  PotentialPair(DelayParameter delay, SampledFunction q_in, SampledFunction p_in)
      : a(delay), q(std::move(q_in)), p(std::move(p_in)) {
    if (!(q.grid() == p.grid()))
      throw std::invalid_argument("PotentialPair: q and p must share one grid");
    const double tol = 0.5 * q.grid().step();
    if (std::abs(q.grid().lo() - a.value()) > tol || std::abs(q.grid().hi() - pi) > tol)
      throw std::invalid_argument("PotentialPair: grid must cover exactly [a, pi]");
  }
};

/// Subintervals of [a, π] used by the reconstruction cascade, all derived
/// from the delay parameter.  In increasing breakpoint order:
///   [a, 3a/2]            edge      (q = w1, p = w2)
///   (3a/2, π/2+a/4)      known     (a-priori window)
///   [π/2+a/4, π-a)       I3 / eta
///   [π-a, 2a]            gamma     (may degenerate to a point at a = π/3)
///   (2a, π/2+3a/4)       I2 / delta
///   [π/2+3a/4, π-a/2)    gamma
///   [π-a/2, π]           edge
struct RegionLayout {
  DelayParameter a;

  Interval edge_lower;   // [a, 3a/2]
  Interval edge_upper;   // [π-a/2, π]
  Interval gamma_lower;  // [π-a, 2a]
  Interval gamma_upper;  // [π/2+3a/4, π-a/2)
  Interval known_window; // (3a/2, π/2+a/4)
  Interval i2;           // (2a, π/2+3a/4)
  Interval i3;           // [π/2+a/4, π-a)

  /// {a, 3a/2, π/2+a/4, π-a, 2a, π/2+3a/4, π-a/2, π}
  std::array<double, 8> breakpoints() const;
};

RegionLayout region_layout(DelayParameter a);

enum class Region { Edge, Known, Gamma, Delta, Eta };

/// Region owning the point x.  Nodes that coincide with a breakpoint are
/// assigned by the precedence known > edge > gamma > delta > eta.
Region region_of(const RegionLayout& layout, double x, double tol = 1e-12);

/// Truncated eigenvalue sequence of one boundary value problem L_j(Q),
/// indices n in {-N, ..., N}.  Eigenvalues sit near the lattice
/// n - (j-1)/2; the residual kappa is the deviation from it.
class Spectrum {
 public:
  Spectrum(int j, int order, std::vector<Complex> values)
      : j_(j), order_(order), values_(std::move(values)) {
    if (j != 1 && j != 2) throw std::invalid_argument("Spectrum: j must be 1 or 2");
    if (order < 1) throw std::invalid_argument("Spectrum: truncation order must be >= 1");
    if (static_cast<int>(values_.size()) != 2 * order + 1)
      throw std::invalid_argument("Spectrum: need 2N+1 eigenvalues");
  }

  int j() const { return j_; }
  int order() const { return order_; }

  static double lattice(int j, int n) { return n - 0.5 * (j - 1); }

  Complex eigenvalue(int n) const { return values_.at(n + order_); }
  Complex residual(int n) const { return eigenvalue(n) - lattice(j_, n); }

  /// Largest |kappa| over |n| in [lo, hi].
  double max_residual(int lo, int hi) const;

 private:
  int j_, order_;
  std::vector<Complex> values_;
};

/// The paired input of the inverse problem: both spectra at one truncation.
struct SpectralData {
  Spectrum spectrum1;
  Spectrum spectrum2;
  int order;

  SpectralData(Spectrum s1, Spectrum s2)
      : spectrum1(std::move(s1)), spectrum2(std::move(s2)), order(spectrum1.order()) {
    if (spectrum1.j() != 1 || spectrum2.j() != 2)
      throw std::invalid_argument("SpectralData: spectra must carry j = 1 and j = 2");
    if (spectrum1.order() != spectrum2.order())
      throw std::invalid_argument("SpectralData: spectra must share one truncation order");
  }
};

}  // namespace ddirac
