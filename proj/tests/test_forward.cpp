#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ddirac/forward.hpp"
#include "ddirac/io.hpp"

using namespace ddirac;

namespace {

const DelayParameter kA(1.1);

PotentialPair test_p1(int cells = 2000) { return make_test_potential("P1", kA, cells); }

// Hand-built AuxV from plain arrays (base = stored values, no central part),
// for the operations that consume only the contract fields.
AuxV aux_from_values(DelayParameter a, const SampledFunction& v1, const SampledFunction& v2) {
  const UniformGrid gc(2.0 * a.value() - pi, pi - 2.0 * a.value(), 4);
  return AuxV{a, v1, v2, v1, v2, SampledFunction::zero(gc), SampledFunction::zero(gc)};
}

}  // namespace

TEST_CASE("compute_v: zero potential gives zero densities") {
  const auto P = make_test_potential("P0", kA, 200);
  const AuxV v = compute_v(P, 300);
  for (int k = 0; k < v.v1.grid().nodes(); ++k) {
    CHECK(std::abs(v.v1.value(k)) == 0.0);
    CHECK(std::abs(v.v2.value(k)) == 0.0);
  }
}

TEST_CASE("compute_v: outer branch is integral-free (q=0, p=1)") {
  const double a = kA.value();
  const UniformGrid g(a, pi, 400);
  const PotentialPair P(kA, SampledFunction::zero(g),
                        SampledFunction::tabulate(g, [](double) { return Complex(1, 0); }));
  const AuxV v = compute_v(P, 800);
  const double x = pi - a - 0.01;  // outer branch
  CHECK(std::abs(interpolate(v.v1, x) - Complex(0.5, 0)) < 1e-12);
  CHECK(std::abs(interpolate(v.v2, x)) < 1e-12);
}

TEST_CASE("compute_v: outer-branch identity at grid nodes") {
  const auto P = test_p1(500);
  const AuxV v = compute_v(P, 700);
  const double a = kA.value();
  const UniformGrid& g = v.v1.grid();
  for (int k = 0; k < g.nodes(); ++k) {
    const double x = g.node(k);
    if (x > 2.0 * a - pi + 1e-9 && x < pi - 2.0 * a - 1e-9) continue;
    const Complex pv = interpolate(P.p, 0.5 * (pi + a - x));
    const Complex qv = interpolate(P.q, 0.5 * (pi + a - x));
    CHECK(std::abs(v.v1.value(k) - 0.5 * pv) < 1e-13);
    CHECK(std::abs(v.v2.value(k) + 0.5 * qv) < 1e-13);
  }
}

TEST_CASE("compute_v: central value against brute-force quadrature oracle") {
  // Independent oracle: the defining integral evaluated on a 10x-fine
  // lattice directly from the analytic potentials.
  const auto P = test_p1(2000);
  const AuxV v = compute_v(P, 2000);
  const double a = kA.value();

  auto q_fn = [](double t) { return std::sin(t); };
  auto p_fn = [](double t) { return std::cos(2.0 * t); };

  const double x = 0.0;
  const double lo = 0.5 * (pi + 2.0 * a - x);
  const int n = 20000;
  const double h = (pi - lo) / n;
  double acc1 = 0.0, acc2 = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double t = lo + i * h;
    const double s = 0.5 * (x + 2.0 * t - pi);
    const double w = (i == 0 || i == n) ? 0.5 : 1.0;
    acc1 += w * (q_fn(t) * q_fn(s) + p_fn(t) * p_fn(s));
    acc2 += w * (q_fn(t) * p_fn(s) - p_fn(t) * q_fn(s));
  }
  acc1 *= h;
  acc2 *= h;
  const Complex want1 = Complex(0.5 * p_fn(0.5 * (pi + a - x)) - 0.5 * acc1, 0);
  const Complex want2 = Complex(-0.5 * q_fn(0.5 * (pi + a - x)) + 0.5 * acc2, 0);

  CHECK(std::abs(interpolate(v.v1, x) - want1) < 1e-6);
  CHECK(std::abs(interpolate(v.v2, x) - want2) < 1e-6);
}

TEST_CASE("compute_u: zero and symmetry special cases") {
  const double a = kA.value();
  const UniformGrid g(a - pi, pi - a, 64);

  SUBCASE("zero v") {
    const AuxV v = aux_from_values(kA, SampledFunction::zero(g), SampledFunction::zero(g));
    const AuxU u = compute_u(v);
    for (int k = 0; k < g.nodes(); ++k) {
      CHECK(std::abs(u.u1.value(k)) == 0.0);
      CHECK(std::abs(u.u2.value(k)) == 0.0);
    }
  }

  SUBCASE("even real v1, zero v2: u1 = 0 and u2 = -v1") {
    const auto v1 = SampledFunction::tabulate(g, [](double x) {
      return Complex(std::cos(x) + 0.3 * std::cos(2.0 * x), 0.0);
    });
    const AuxV v = aux_from_values(kA, v1, SampledFunction::zero(g));
    const AuxU u = compute_u(v);
    for (int k = 0; k < g.nodes(); ++k) {
      CHECK(std::abs(u.u1.value(k)) < 1e-15);
      CHECK(std::abs(u.u2.value(k) + v1.value(k)) < 1e-15);
    }
  }
}

TEST_CASE("compute_u: algebraic inversion recovers v to 1e-12") {
  const double a = kA.value();
  const UniformGrid g(a - pi, pi - a, 128);
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  auto random_smooth = [&]() {
    const double c0 = coef(rng), c1 = coef(rng), c2 = coef(rng), c3 = coef(rng);
    return SampledFunction::tabulate(g, [=](double x) {
      return Complex(c0 + c1 * std::sin(x), c2 * std::cos(2.0 * x) + c3 * x / pi);
    });
  };
  const auto v1 = random_smooth();
  const auto v2 = random_smooth();
  const AuxV v = aux_from_values(kA, v1, v2);
  const AuxU u = compute_u(v);

  const int m = g.cells();
  for (int k = 0; k <= m; ++k) {
    const Complex apx = u.u1.value(k) + Complex(0, 1) * u.u2.value(k);
    const Complex amr = u.u1.value(m - k) - Complex(0, 1) * u.u2.value(m - k);
    const Complex v2_rec = 0.5 * (apx + amr);
    const Complex v1_rec = (amr - apx) / Complex(0, 2);
    CHECK(std::abs(v2_rec - v2.value(k)) < 1e-12);
    CHECK(std::abs(v1_rec - v1.value(k)) < 1e-12);
  }
}

TEST_CASE("delta_closed: zero potential collapses to -sin/cos") {
  const auto P = make_test_potential("P0", kA, 400);
  const AuxV v = compute_v(P, 600);
  for (Complex lambda : {Complex(0.3, 0), Complex(7, 0), Complex(-2.6, 0.4), Complex(0, 1)}) {
    CHECK(std::abs(delta_closed(1, v, lambda) + std::sin(lambda * pi)) < 1e-12);
    CHECK(std::abs(delta_closed(2, v, lambda) - std::cos(lambda * pi)) < 1e-12);
  }
  CHECK(std::abs(delta_closed(1, v, Complex(7, 0))) < 1e-12);
  CHECK(std::abs(delta_closed(2, v, Complex(7, 0)) - Complex(-1, 0)) < 1e-12);
  CHECK_THROWS_AS(delta_closed(3, v, Complex(0, 0)), std::invalid_argument);
}

TEST_CASE("delta_derivative: zero potential and finite-difference oracle") {
  const auto P0 = make_test_potential("P0", kA, 400);
  const AuxV v0 = compute_v(P0, 600);
  CHECK(std::abs(delta_derivative(1, v0, Complex(0, 0)) + Complex(pi, 0)) < 1e-12);
  CHECK(std::abs(delta_derivative(2, v0, Complex(0.5, 0)) + Complex(pi, 0)) < 1e-12);

  const auto P = test_p1(1200);
  const AuxV v = compute_v(P, 1200);
  const double eps = 1e-5;
  for (int j = 1; j <= 2; ++j) {
    const Complex lambda(2.2, 0.0);
    const Complex fd = (delta_closed(j, v, lambda + eps) - delta_closed(j, v, lambda - eps)) /
                       (2.0 * eps);
    CHECK(std::abs(delta_derivative(j, v, lambda) - fd) < 1e-6);
  }
}

TEST_CASE("fundamental matrix: zero potential is the plain rotation") {
  const auto P = make_test_potential("P0", kA, 300);
  for (Complex lambda : {Complex(1.3, 0), Complex(-4, 0.5)}) {
    const FundamentalMatrix Y = fundamental_matrix(P, lambda, pi, 4);
    const Mat2 want = rotation_y0(pi, lambda);
    CHECK(std::abs(Y.total().a11 - want.a11) < 1e-12);
    CHECK(std::abs(Y.total().a12 - want.a12) < 1e-12);
    CHECK(std::abs(Y.total().a21 - want.a21) < 1e-12);
    CHECK(std::abs(Y.total().a22 - want.a22) < 1e-12);
    CHECK(std::abs(Y.y1.a11) == 0.0);
    CHECK(std::abs(Y.y2.a11) == 0.0);
  }
}

TEST_CASE("fundamental matrix: identity at x = 0") {
  const auto P = test_p1(300);
  const FundamentalMatrix Y = fundamental_matrix(P, Complex(2.5, 0.3), 0.0, 4);
  CHECK(std::abs(Y.total().a11 - Complex(1, 0)) < 1e-14);
  CHECK(std::abs(Y.total().a12) < 1e-14);
  CHECK(std::abs(Y.total().a21) < 1e-14);
  CHECK(std::abs(Y.total().a22 - Complex(1, 0)) < 1e-14);
}

TEST_CASE("fundamental matrix at lambda = 0 against nested quadrature") {
  // Y(pi, 0) = I + B int Q + B int_2a^pi Q(t) [B int_a^{t-a} Q(s) ds] dt,
  // with the inner and outer integrals done by brute force on a fine
  // lattice directly from the analytic potentials.
  const auto P = test_p1(500);
  const double a = kA.value();
  auto q_fn = [](double t) { return std::sin(t); };
  auto p_fn = [](double t) { return std::cos(2.0 * t); };
  auto q_mat = [&](double t) {
    return Mat2{Complex(q_fn(t), 0), Complex(p_fn(t), 0), Complex(p_fn(t), 0),
                Complex(-q_fn(t), 0)};
  };

  const int n = 5000;
  Mat2 term1{};
  {
    const double h = (pi - a) / n;
    for (int i = 0; i <= n; ++i) {
      const double w = (i == 0 || i == n) ? 0.5 : 1.0;
      term1 = term1 + q_mat(a + i * h) * Complex(w * h, 0);
    }
    term1 = b_matrix * term1;
  }
  Mat2 term2{};
  {
    const double h = (pi - 2.0 * a) / n;
    for (int i = 0; i <= n; ++i) {
      const double t = 2.0 * a + i * h;
      Mat2 inner{};
      const int ni = 600;
      const double hi = (t - 2.0 * a) / ni;
      if (hi > 0) {
        for (int k = 0; k <= ni; ++k) {
          const double w = (k == 0 || k == ni) ? 0.5 : 1.0;
          inner = inner + q_mat(a + k * hi) * Complex(w * hi, 0);
        }
      }
      const double w = (i == 0 || i == n) ? 0.5 : 1.0;
      term2 = term2 + (q_mat(t) * (b_matrix * inner)) * Complex(w * h, 0);
    }
    term2 = b_matrix * term2;
  }
  const Mat2 want = Mat2{Complex(1, 0), {}, {}, Complex(1, 0)} + term1 + term2;

  const FundamentalMatrix Y = fundamental_matrix(P, Complex(0, 0), pi, 16);
  const Mat2 got = Y.total();
  CHECK(std::abs(got.a11 - want.a11) < 1e-5);
  CHECK(std::abs(got.a12 - want.a12) < 1e-5);
  CHECK(std::abs(got.a21 - want.a21) < 1e-5);
  CHECK(std::abs(got.a22 - want.a22) < 1e-5);
  CHECK(std::abs(got.det() - want.det()) < 1e-5);
}

TEST_CASE("delta_oracle agrees with closed form on P1") {
  const auto P = test_p1(2000);
  const AuxV v = compute_v(P, 2000);
  for (Complex lambda : {Complex(-5.3, 0), Complex(0.1, 0), Complex(4.8, 0),
                         Complex(3.5, 0), Complex(2.0, 0.5)}) {
    for (int j = 1; j <= 2; ++j) {
      const Complex closed = delta_closed(j, v, lambda);
      const Complex oracle = delta_oracle(j, P, lambda);
      CHECK(std::abs(closed - oracle) < 1e-6 * (1.0 + std::abs(closed)));
    }
  }
}

TEST_CASE("delta_oracle trivial values for zero potential") {
  const auto P = make_test_potential("P0", kA, 300);
  const Complex lambda(1.25, 0.0);
  CHECK(std::abs(delta_oracle(1, P, lambda) + std::sin(lambda * pi)) < 1e-12);
  CHECK(std::abs(delta_oracle(2, P, lambda) - std::cos(lambda * pi)) < 1e-12);
}

TEST_CASE("oracle equivalence for random smooth complex potentials") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> coef(-0.7, 0.7);
  std::uniform_real_distribution<double> re(-20.0, 20.0);
  std::uniform_real_distribution<double> im(-1.0, 1.0);

  const UniformGrid g(kA.value(), pi, 2000);
  const double c1 = coef(rng), c2 = coef(rng), c3 = coef(rng), c4 = coef(rng);
  const PotentialPair P(kA, SampledFunction::tabulate(g, [&](double t) {
                          return Complex(c1 * std::sin(2.0 * t), c2 * std::cos(t));
                        }),
                        SampledFunction::tabulate(g, [&](double t) {
                          return Complex(c3 * std::cos(3.0 * t), c4 * t / pi);
                        }));
  const AuxV v = compute_v(P, 2000);

  for (int trial = 0; trial < 12; ++trial) {
    const Complex lambda(re(rng), im(rng));
    for (int j = 1; j <= 2; ++j) {
      const Complex closed = delta_closed(j, v, lambda);
      const Complex oracle = delta_oracle(j, P, lambda);
      CHECK(std::abs(closed - oracle) <= 1e-6 * (1.0 + std::abs(closed)));
    }
  }
}

TEST_CASE("conjugate symmetry for real potentials") {
  const auto P = test_p1(800);
  const AuxV v = compute_v(P, 800);
  for (Complex lambda : {Complex(1.7, 0.6), Complex(-3.2, 1.1)}) {
    for (int j = 1; j <= 2; ++j) {
      const Complex direct = delta_closed(j, v, std::conj(lambda));
      const Complex mirrored = std::conj(delta_closed(j, v, lambda));
      CHECK(std::abs(direct - mirrored) < 1e-12 * (1.0 + std::abs(direct)));
    }
  }
}

TEST_CASE("characteristic table holds integer samples") {
  const auto P = make_test_potential("P0", kA, 200);
  const AuxV v = compute_v(P, 300);
  const CharacteristicTable t = tabulate_closed(2, v, 3);
  CHECK(t.order == 3);
  for (int n = -3; n <= 3; ++n)
    CHECK(std::abs(t.at(n) - Complex((n % 2 == 0) ? 1.0 : -1.0, 0.0)) < 1e-12);
}
