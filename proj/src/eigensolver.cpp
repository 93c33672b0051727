#include "ddirac/eigensolver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace ddirac {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kResidualTol = 1e-11;
constexpr double kStepTol = 1e-12;
constexpr int kMaxNewton = 50;
constexpr double kBoxRadius = 0.5;

struct NewtonOutcome {
  Complex root{};
  bool converged = false;
  bool left_box = false;
};

NewtonOutcome newton(int j, const AuxV& v, Complex start, Complex seed) {
  NewtonOutcome out;
  Complex lambda = start;
  for (int it = 0; it < kMaxNewton; ++it) {
    if (std::abs(lambda - seed) > kBoxRadius) {
      out.root = lambda;
      out.left_box = true;
      return out;
    }
    const Complex f = delta_closed(j, v, lambda);
    const Complex df = delta_derivative(j, v, lambda);
    if (df == Complex{}) break;
    const Complex step = f / df;
    lambda -= step;
    if (std::abs(f) < kResidualTol && std::abs(step) < kStepTol) {
      out.root = lambda;
      out.converged = std::abs(lambda - seed) < kBoxRadius;
      out.left_box = !out.converged;
      return out;
    }
  }
  out.root = lambda;
  return out;
}

}  // namespace

Complex find_eigenvalue(int j, const AuxV& v, int n) {
  if (j != 1 && j != 2) throw std::invalid_argument("find_eigenvalue: j must be 1 or 2");
  const Complex seed(Spectrum::lattice(j, n), 0.0);

  NewtonOutcome out = newton(j, v, seed, seed);
  if (out.converged) return out.root;

  // Fallback: coarse scan of the seed disk for the smallest |Delta|, then
  // Newton again from there.
  Complex best = seed;
  double best_val = std::abs(delta_closed(j, v, seed));
  for (int ir = -10; ir <= 10; ++ir) {
    for (int ii = -4; ii <= 4; ++ii) {
      const Complex offset(0.044 * ir, 0.1 * ii);
      if (std::abs(offset) > 0.45) continue;
      const double val = std::abs(delta_closed(j, v, seed + offset));
      if (val < best_val) {
        best_val = val;
        best = seed + offset;
      }
    }
  }
  out = newton(j, v, best, seed);
  if (out.converged) return out.root;
  if (out.left_box)
    throw OutOfBox("find_eigenvalue: iterate left the unit disk around the seed", j, n);
  throw NoConvergence("find_eigenvalue: Newton did not converge", j, n);
}

int verify_count(int j, const AuxV& v, Box rect) {
  if (j != 1 && j != 2) throw std::invalid_argument("verify_count: j must be 1 or 2");
  if (!(rect.lo.real() < rect.hi.real() && rect.lo.imag() < rect.hi.imag()))
    throw std::invalid_argument("verify_count: degenerate rectangle");

  const double diag = std::abs(rect.hi - rect.lo);

  for (int attempt = 0; attempt < 5; ++attempt) {
    // Counterclockwise corner walk.
    const Complex c0 = rect.lo;
    const Complex c1(rect.hi.real(), rect.lo.imag());
    const Complex c2 = rect.hi;
    const Complex c3(rect.lo.real(), rect.hi.imag());
    const std::array<std::pair<Complex, Complex>, 4> edges{
        std::pair{c0, c1}, {c1, c2}, {c2, c3}, {c3, c0}};

    // Boundary-zero guard: a near-zero far below the typical boundary
    // magnitude means a root hugging the contour.
    std::vector<double> mags;
    for (const auto& [p0, p1] : edges)
      for (int i = 0; i <= 8; ++i)
        mags.push_back(std::abs(delta_closed(j, v, p0 + (p1 - p0) * (i / 8.0))));
    std::vector<double> sorted = mags;
    std::sort(sorted.begin(), sorted.end());
    const double min_abs = sorted.front();
    const double median = sorted[sorted.size() / 2];
    if (min_abs < 1e-6 * median) {
      const double bump = 1e-3 * diag * (attempt + 1);
      rect.lo -= Complex(bump, bump);
      rect.hi += Complex(bump, bump);
      continue;
    }

    // (1/2 pi i) oint Delta'/Delta by trapezoid per edge.  Each pass also
    // sums every other sample, giving a half-resolution estimate for free;
    // accept once both round to the same integer within 0.1.
    auto winding = [&](int samples_per_edge, Complex& half) {
      Complex total{};
      half = Complex{};
      for (const auto& [p0, p1] : edges) {
        const Complex d = (p1 - p0) / double(samples_per_edge);
        std::vector<Complex> logd(samples_per_edge + 1);
        for (int i = 0; i <= samples_per_edge; ++i) {
          const Complex z = p0 + d * double(i);
          logd[i] = delta_derivative(j, v, z) / delta_closed(j, v, z);
        }
        for (int i = 1; i <= samples_per_edge; ++i) total += 0.5 * (logd[i - 1] + logd[i]) * d;
        for (int i = 2; i <= samples_per_edge; i += 2)
          half += 0.5 * (logd[i - 2] + logd[i]) * (2.0 * d);
      }
      const Complex scale_w = 2.0 * pi * kI;
      half /= scale_w;
      return total / scale_w;
    };

    int samples = 32;
    while (samples <= 4096) {
      Complex half;
      const Complex w = winding(samples, half);
      const double rounded = std::round(w.real());
      if (std::abs(w.real() - rounded) < 0.1 && std::abs(w.imag()) < 0.1 &&
          std::abs(half.real() - rounded) < 0.1 && std::abs(half.imag()) < 0.1)
        return static_cast<int>(rounded);
      // A root hugging the contour makes the refinement hopeless; perturb
      // instead of burning through the sample budget.
      if (samples >= 128 && min_abs < 1e-3 * median) break;
      samples *= 2;
    }
    // Unstable winding usually means a zero hugging the contour; perturb.
    const double bump = 1e-3 * diag * (attempt + 1);
    rect.lo -= Complex(bump, bump);
    rect.hi += Complex(bump, bump);
  }
  throw BoundaryZero("verify_count: zero too close to the contour after retries", j, 0);
}

namespace {

// All zeros inside the rectangle, located by a coarse |Delta| scan whose
// local minima seed an unconstrained Newton polish, replicated by
// multiplicity.  `expected` comes from the argument principle on the same
// rectangle.
std::vector<Complex> locate_roots(int j, const AuxV& v, const Box& rect, int expected) {
  const double wr = rect.hi.real() - rect.lo.real();
  const double wi = rect.hi.imag() - rect.lo.imag();
  const int nr = std::max(16, static_cast<int>(wr / 0.04));
  const int ni = std::max(16, static_cast<int>(wi / 0.05));

  std::vector<double> mag((nr + 1) * (ni + 1));
  auto at = [&](int ir, int ii) -> double& { return mag[ir * (ni + 1) + ii]; };
  auto point = [&](int ir, int ii) {
    return Complex(rect.lo.real() + wr * ir / nr, rect.lo.imag() + wi * ii / ni);
  };
  for (int ir = 0; ir <= nr; ++ir)
    for (int ii = 0; ii <= ni; ++ii) at(ir, ii) = std::abs(delta_closed(j, v, point(ir, ii)));

  std::vector<Complex> seeds;
  for (int ir = 0; ir <= nr; ++ir) {
    for (int ii = 0; ii <= ni; ++ii) {
      const double m = at(ir, ii);
      bool is_min = true;
      for (int dr = -1; dr <= 1 && is_min; ++dr)
        for (int di = -1; di <= 1 && is_min; ++di) {
          const int r = ir + dr, i = ii + di;
          if (r < 0 || r > nr || i < 0 || i > ni || (dr == 0 && di == 0)) continue;
          if (at(r, i) < m) is_min = false;
        }
      if (is_min) seeds.push_back(point(ir, ii));
    }
  }

  auto inside = [&](Complex z) {
    return z.real() > rect.lo.real() - 1e-12 && z.real() < rect.hi.real() + 1e-12 &&
           z.imag() > rect.lo.imag() - 1e-12 && z.imag() < rect.hi.imag() + 1e-12;
  };
  std::vector<Complex> roots;
  for (const Complex& seed : seeds) {
    Complex z = seed;
    bool ok = false;
    for (int it = 0; it < 60; ++it) {
      const Complex f = delta_closed(j, v, z);
      const Complex df = delta_derivative(j, v, z);
      if (df == Complex{}) break;
      const Complex step = f / df;
      z -= step;
      if (!inside(z)) break;
      if (std::abs(f) < kResidualTol && std::abs(step) < kStepTol) {
        ok = true;
        break;
      }
    }
    if (!ok) continue;
    bool duplicate = false;
    for (const Complex& r : roots)
      if (std::abs(r - z) < 1e-7) duplicate = true;
    if (!duplicate) roots.push_back(z);
  }

  // Replicate multiple zeros by their local multiplicity.
  if (static_cast<int>(roots.size()) < expected) {
    std::vector<Complex> expanded;
    for (const Complex& r : roots) {
      const Box tiny{r - Complex(0.02, 0.02), r + Complex(0.02, 0.02)};
      const int mult = verify_count(j, v, tiny);
      for (int i = 0; i < std::max(1, mult); ++i) expanded.push_back(r);
    }
    roots = std::move(expanded);
  }
  return roots;
}

}  // namespace

SpectralData compute_spectra(const AuxV& v, int order, SpectraDiagnostics* diag) {
  if (order < 1) throw std::invalid_argument("compute_spectra: order must be >= 1");

  SpectraDiagnostics local;
  SpectraDiagnostics& d = diag ? *diag : local;
  d.entries.clear();
  d.clusters.clear();
  d.all_certified = true;
  d.max_inner_residual = 0.0;
  d.max_outer_residual = 0.0;

  std::vector<Complex> values1, values2;
  for (int j = 1; j <= 2; ++j) {
    auto& values = j == 1 ? values1 : values2;
    const int total = 2 * order + 1;
    std::vector<Complex> roots(total);
    std::vector<int> box_counts(total, 0);
    std::vector<bool> resolved(total, false);

    for (int n = -order; n <= order; ++n) {
      const int idx = n + order;
      bool found = false;
      Complex root{};
      try {
        root = find_eigenvalue(j, v, n);
        found = true;
      } catch (const EigensolverError&) {
      }
      const double c = Spectrum::lattice(j, n);
      int count = -1;
      try {
        count = verify_count(j, v, Box{Complex(c - 0.5, -0.5), Complex(c + 0.5, 0.5)});
      } catch (const BoundaryZero&) {
      }
      box_counts[idx] = count;
      if (found && count == 1) {
        roots[idx] = root;
        resolved[idx] = true;
      }
    }

    // Runs of adjacent anomalous boxes: certify the run's rectangle and
    // assign its zeros in sorted order.
    for (int idx = 0; idx < total; ++idx) {
      if (resolved[idx]) continue;
      int lo = idx, hi = idx;
      while (hi + 1 < total && !resolved[hi + 1]) ++hi;

      const int n_lo = lo - order, n_hi = hi - order;
      int expected = hi - lo + 1;
      double height = 1.0;
      Box rect{Complex(Spectrum::lattice(j, n_lo) - 0.5, -height),
               Complex(Spectrum::lattice(j, n_hi) + 0.5, height)};
      int count = verify_count(j, v, rect);
      for (int attempt = 0; attempt < 2 && count != expected; ++attempt) {
        height *= 2.0;
        rect = Box{Complex(rect.lo.real(), -height), Complex(rect.hi.real(), height)};
        count = verify_count(j, v, rect);
      }
      if (count != expected)
        throw NoConvergence("compute_spectra: run of anomalous boxes holds " +
                                std::to_string(count) + " zeros, expected " +
                                std::to_string(expected),
                            j, n_lo);

      std::vector<Complex> cluster = locate_roots(j, v, rect, expected);
      if (static_cast<int>(cluster.size()) != expected)
        throw NoConvergence("compute_spectra: located " +
                                std::to_string(cluster.size()) + " zeros of " +
                                std::to_string(expected) + " in an anomalous run",
                            j, n_lo);
      std::sort(cluster.begin(), cluster.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
      });
      for (int i = lo; i <= hi; ++i) {
        roots[i] = cluster[i - lo];
        resolved[i] = true;
      }
      d.clusters.push_back({j, n_lo, n_hi});
      d.all_certified = false;
      idx = hi;
    }

    values.reserve(total);
    for (int n = -order; n <= order; ++n) {
      const int idx = n + order;
      const double res = std::abs(roots[idx] - Spectrum::lattice(j, n));
      d.entries.push_back({j, n, box_counts[idx], res});
      if (std::abs(n) < (order + 1) / 2)
        d.max_inner_residual = std::max(d.max_inner_residual, res);
      else
        d.max_outer_residual = std::max(d.max_outer_residual, res);
      values.push_back(roots[idx]);
    }
  }
  d.decay_violation = d.max_outer_residual > d.max_inner_residual;

  return SpectralData(Spectrum(1, order, std::move(values1)),
                      Spectrum(2, order, std::move(values2)));
}

SpectralData compute_spectra(const PotentialPair& P, int order, int aux_cells,
                             SpectraDiagnostics* diag) {
  const AuxV v = compute_v(P, aux_cells);
  return compute_spectra(v, order, diag);
}

}  // namespace ddirac
