#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ddirac/eigensolver.hpp"
#include "ddirac/io.hpp"

using namespace ddirac;

namespace {

const DelayParameter kA(1.1);

AuxV zero_aux(int cells = 600) {
  return compute_v(make_test_potential("P0", kA, 400), cells);
}

// Localizes the single zero inside `box` by repeated bisection certified
// with verify_count; independent of the Newton path.  The split line is
// jittered deterministically so it never creeps onto the root itself.
Complex bisect_root(int j, const AuxV& v, Box box, double tol) {
  REQUIRE(verify_count(j, v, box) == 1);
  int step = 0;
  while (box.hi.real() - box.lo.real() > tol || box.hi.imag() - box.lo.imag() > tol) {
    const double frac = 0.5 + 0.08 * std::sin(1.0 + 2.7 * step++);
    if (box.hi.real() - box.lo.real() >= box.hi.imag() - box.lo.imag()) {
      const double mid = box.lo.real() + frac * (box.hi.real() - box.lo.real());
      const Box left{box.lo, Complex(mid, box.hi.imag())};
      if (verify_count(j, v, left) == 1)
        box = left;
      else
        box = Box{Complex(mid, box.lo.imag()), box.hi};
    } else {
      const double mid = box.lo.imag() + frac * (box.hi.imag() - box.lo.imag());
      const Box bottom{box.lo, Complex(box.hi.real(), mid)};
      if (verify_count(j, v, bottom) == 1)
        box = bottom;
      else
        box = Box{Complex(box.lo.real(), mid), box.hi};
    }
  }
  return 0.5 * (box.lo + box.hi);
}

}  // namespace

TEST_CASE("find_eigenvalue: zero potential roots are the lattice") {
  const AuxV v = zero_aux();
  CHECK(std::abs(find_eigenvalue(1, v, 4) - Complex(4, 0)) < 1e-10);
  CHECK(std::abs(find_eigenvalue(2, v, -3) - Complex(-3.5, 0)) < 1e-10);
  CHECK(std::abs(find_eigenvalue(1, v, 0)) < 1e-10);
  CHECK_THROWS_AS(find_eigenvalue(5, v, 0), std::invalid_argument);
}

TEST_CASE("verify_count: zero potential rectangles") {
  const AuxV v = zero_aux();
  CHECK(verify_count(1, v, Box{Complex(-0.5, -1), Complex(2.5, 1)}) == 3);
  CHECK(verify_count(2, v, Box{Complex(0, -1), Complex(1, 1)}) == 1);
  CHECK(verify_count(1, v, Box{Complex(0.2, -0.3), Complex(0.8, 0.3)}) == 0);
  CHECK_THROWS_AS(verify_count(1, v, Box{Complex(1, 1), Complex(0, 0)}),
                  std::invalid_argument);
}

TEST_CASE("find_eigenvalue matches the argument-principle bisection oracle") {
  const auto P = make_test_potential("P1", kA, 2000);
  const AuxV v = compute_v(P, 2000);

  const Complex newton_root = find_eigenvalue(1, v, 10);
  const Complex oracle_root =
      bisect_root(1, v, Box{Complex(9.5, -1.0), Complex(10.5, 1.0)}, 1e-9);
  CHECK(std::abs(newton_root - oracle_root) < 2e-9);
  CHECK(std::abs(delta_closed(1, v, newton_root)) < 1e-10);
}

TEST_CASE("verify_count: strip count matches the asymptotic count on P1") {
  const auto P = make_test_potential("P1", kA, 1000);
  const AuxV v = compute_v(P, 1000);
  CHECK(verify_count(1, v, Box{Complex(-10.5, -2), Complex(10.5, 2)}) == 21);
}

TEST_CASE("compute_spectra: zero potential is exact") {
  const auto P = make_test_potential("P0", kA, 400);
  const SpectralData D = compute_spectra(P, 5, 600);
  for (int n = -5; n <= 5; ++n) {
    CHECK(std::abs(D.spectrum1.eigenvalue(n) - Complex(n, 0)) < 1e-10);
    CHECK(std::abs(D.spectrum2.eigenvalue(n) - Complex(n - 0.5, 0)) < 1e-10);
  }
}

TEST_CASE("compute_spectra rejects order < 1") {
  const auto P = make_test_potential("P0", kA, 300);
  CHECK_THROWS_AS(compute_spectra(P, 0, 400), std::invalid_argument);
}

TEST_CASE("compute_spectra on P1: localization, clusters, residual decay") {
  const auto P = make_test_potential("P1", kA, 1500);
  SpectraDiagnostics diag;
  const SpectralData D = compute_spectra(P, 24, 1500, &diag);

  // The j = 1 problem has a complex-conjugate pair sharing the n = 2 box,
  // resolved as the anomalous run n in [1, 2]; everything else certifies
  // box by box.
  REQUIRE(diag.clusters.size() == 1);
  CHECK(diag.clusters[0].j == 1);
  CHECK(diag.clusters[0].n_lo == 1);
  CHECK(diag.clusters[0].n_hi == 2);
  for (const auto& e : diag.entries) {
    const bool clustered = e.j == 1 && (e.n == 1 || e.n == 2);
    if (!clustered) CHECK(e.box_count == 1);
  }

  const Complex pair_lo = D.spectrum1.eigenvalue(1);
  const Complex pair_hi = D.spectrum1.eigenvalue(2);
  CHECK(pair_lo.imag() < -1e-3);
  CHECK(std::abs(pair_hi - std::conj(pair_lo)) < 1e-8);

  for (int n = -24; n <= 24; ++n) {
    if (n != 1 && n != 2) CHECK(std::abs(D.spectrum1.residual(n)) < 0.5);
    CHECK(std::abs(D.spectrum2.residual(n)) < 0.5);
  }

  CHECK_FALSE(diag.decay_violation);
  CHECK(diag.max_outer_residual < diag.max_inner_residual);

  // partial sums of |kappa|^2 stabilize: the tail beyond |n| = 12 adds little
  double head = 0, tail = 0;
  for (int n = -24; n <= 24; ++n) {
    const double r1 = std::abs(D.spectrum1.residual(n));
    const double r2 = std::abs(D.spectrum2.residual(n));
    if (std::abs(n) <= 12)
      head += r1 * r1 + r2 * r2;
    else
      tail += r1 * r1 + r2 * r2;
  }
  CHECK(tail < 0.2 * head);
}

TEST_CASE("find_eigenvalue reports OutOfBox where the asymptotic box is empty") {
  // For P1 the j = 1 box around n = 1 holds no zero (the pair moved to
  // the neighboring box), so the per-box contract must fail loudly.
  const auto P = make_test_potential("P1", kA, 1000);
  const AuxV v = compute_v(P, 1000);
  CHECK_THROWS_AS(find_eigenvalue(1, v, 1), EigensolverError);
}

TEST_CASE("complex potential P2 has genuinely complex eigenvalues") {
  const auto P = make_test_potential("P2", kA, 1200);
  SpectraDiagnostics diag;
  const SpectralData D = compute_spectra(P, 8, 1200, &diag);
  double max_im = 0;
  for (int n = -8; n <= 8; ++n)
    max_im = std::max(max_im, std::abs(D.spectrum1.eigenvalue(n).imag()));
  CHECK(max_im > 1e-3);
  // every index resolved: either its own box certifies or a reported
  // cluster covers it
  for (const auto& e : diag.entries) {
    if (e.box_count == 1) continue;
    bool covered = false;
    for (const auto& c : diag.clusters)
      if (c.j == e.j && e.n >= c.n_lo && e.n <= c.n_hi) covered = true;
    CHECK(covered);
  }
}

TEST_CASE("find_eigenvalue reports failure when no root sits near the seed") {
  // Artificial transform data with a large constant density pushes the
  // roots far from the lattice.
  const double a = kA.value();
  const UniformGrid g(a - pi, pi - a, 128);
  const UniformGrid gc(2 * a - pi, pi - 2 * a, 4);
  const auto big = SampledFunction::tabulate(g, [](double) { return Complex(4.0, 0.0); });
  const AuxV v{kA, SampledFunction::zero(g), big, SampledFunction::zero(g), big,
               SampledFunction::zero(gc), SampledFunction::zero(gc)};
  CHECK_THROWS_AS(find_eigenvalue(1, v, 1), EigensolverError);
}
