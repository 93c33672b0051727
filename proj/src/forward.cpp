#include "ddirac/forward.hpp"

#include <algorithm>
#include <cmath>

namespace ddirac {

namespace {

constexpr Complex kI{0.0, 1.0};

// Bilinear corrections of v1/v2 at one point of the central interval:
//   I1(x) = int_{(pi+2a-x)/2}^{pi} [q(t) q((x+2t-pi)/2) + p(t) p((x+2t-pi)/2)] dt
//   I2(x) = int_{(pi+2a-x)/2}^{pi} [q(t) p((x+2t-pi)/2) - p(t) q((x+2t-pi)/2)] dt
// The t lattice subdivides each potential cell; the product integrand has
// curvature between the nodes of either factor.
std::pair<Complex, Complex> central_integrals(const PotentialPair& P, double x,
                                              const UniformGrid& t_lattice) {
  const double a = P.a.value();
  const double lo = 0.5 * (pi + 2.0 * a - x);
  Complex i1{}, i2{};
  auto qq_pp = [&](double t) {
    const double s = 0.5 * (x + 2.0 * t - pi);
    return interpolate(P.q, t) * interpolate(P.q, s) + interpolate(P.p, t) * interpolate(P.p, s);
  };
  auto qp_pq = [&](double t) {
    const double s = 0.5 * (x + 2.0 * t - pi);
    return interpolate(P.q, t) * interpolate(P.p, s) - interpolate(P.p, t) * interpolate(P.q, s);
  };
  i1 = trapezoid_tail(t_lattice, lo, qq_pp);
  i2 = trapezoid_tail(t_lattice, lo, qp_pq);
  return {i1, i2};
}

}  // namespace

AuxV compute_v(const PotentialPair& P, int aux_cells) {
  const double a = P.a.value();
  const UniformGrid gv(a - pi, pi - a, aux_cells);

  auto base1 = SampledFunction::tabulate(
      gv, [&](double x) { return 0.5 * interpolate(P.p, 0.5 * (pi + a - x)); });
  auto base2 = SampledFunction::tabulate(
      gv, [&](double x) { return -0.5 * interpolate(P.q, 0.5 * (pi + a - x)); });

  const double clo = 2.0 * a - pi;
  const double chi = pi - 2.0 * a;
  int ccells = static_cast<int>(std::lround(aux_cells * (chi - clo) / (pi - a)));
  ccells = std::max(4, ccells + (ccells % 2));  // even, so 0 is a node
  const UniformGrid gc(clo, chi, ccells);

  const UniformGrid t_lattice(a, pi, 4 * P.q.grid().cells());

  std::vector<Complex> c1(gc.nodes()), c2(gc.nodes());
  for (int k = 0; k < gc.nodes(); ++k) {
    const auto [i1, i2] = central_integrals(P, gc.node(k), t_lattice);
    c1[k] = -0.5 * i1;
    c2[k] = 0.5 * i2;
  }

  // Single-valued carriers; branch points belong to the integral-free branch.
  const double snap = 1e-9 * gv.step();
  std::vector<Complex> v1(gv.nodes()), v2(gv.nodes());
  for (int k = 0; k < gv.nodes(); ++k) {
    const double x = gv.node(k);
    v1[k] = base1.value(k);
    v2[k] = base2.value(k);
    if (x > clo + snap && x < chi - snap) {
      const auto [i1, i2] = central_integrals(P, x, t_lattice);
      v1[k] += -0.5 * i1;
      v2[k] += 0.5 * i2;
    }
  }

  return AuxV{P.a,
              SampledFunction(gv, std::move(v1)),
              SampledFunction(gv, std::move(v2)),
              std::move(base1),
              std::move(base2),
              SampledFunction(gc, std::move(c1)),
              SampledFunction(gc, std::move(c2))};
}

AuxU compute_u(const AuxV& v) {
  const UniformGrid& g = v.v1.grid();
  const int m = g.cells();
  std::vector<Complex> u1(g.nodes()), u2(g.nodes());
  for (int k = 0; k <= m; ++k) {
    const Complex v1x = v.v1.value(k), v1r = v.v1.value(m - k);
    const Complex v2x = v.v2.value(k), v2r = v.v2.value(m - k);
    u1[k] = (v1x - v1r) / (2.0 * kI) + 0.5 * (v2x + v2r);
    u2[k] = (v2x - v2r) / (2.0 * kI) - 0.5 * (v1x + v1r);
  }
  const double a = v.a.value();
  SampledFunction f1(g, std::move(u1));
  SampledFunction f2(g, std::move(u2));
  return AuxU{f1, f2, f1, f2, {2.0 * a - pi, pi - 2.0 * a}, {}, {}};
}

namespace {

// Periodized unit-jump sawtooth and its continuous antiderivative (mean
// removed); the Fourier data of these closed forms is what the corrected
// synthesis subtracts mode by mode.
Complex sawtooth(double y, Limit lim) {
  const double two_pi = 2.0 * pi;
  double z = std::fmod(y, two_pi);
  if (z < 0) z += two_pi;
  if (std::abs(z) < 1e-11 || std::abs(z - two_pi) < 1e-11) {
    if (lim == Limit::FromRight) return Complex(0.5, 0.0);
    if (lim == Limit::FromLeft) return Complex(-0.5, 0.0);
    return Complex(0.0, 0.0);
  }
  return Complex((pi - z) / two_pi, 0.0);
}

Complex ramp(double y) {
  const double two_pi = 2.0 * pi;
  double z = std::fmod(y, two_pi);
  if (z < 0) z += two_pi;
  return Complex((pi * z - 0.5 * z * z) / two_pi - pi / 6.0, 0.0);
}

}  // namespace

Complex AuxU::eval(int comp, double x, Limit lim) const {
  const SampledFunction& f = comp == 1 ? smooth1 : smooth2;
  const auto& terms = comp == 1 ? terms1 : terms2;

  Complex val{};
  bool handled = false;
  const double h = f.grid().step();
  for (double z : jump_points) {
    if (std::abs(x - z) < h) {
      Side side;
      if (x < z - 1e-11)
        side = Side::Left;
      else if (x > z + 1e-11)
        side = Side::Right;
      else
        side = (lim == Limit::FromLeft) ? Side::Left : Side::Right;
      val = interpolate_one_sided(f, x, side);
      handled = true;
      break;
    }
  }
  if (!handled) val = interpolate(f, x);

  for (const auto& t : terms) {
    val += t.jump * sawtooth(x - t.location, lim);
    val += t.kink * ramp(x - t.location);
  }
  return val;
}

std::pair<Complex, Complex> AuxU::eval_pair(double x, Limit lim) const {
  return {eval(1, x, lim), eval(2, x, lim)};
}

namespace {

struct OscSet {
  Complex sin_b1, cos_b1, sin_b2, cos_b2;
  Complex sin_c1, cos_c1, sin_c2, cos_c2;
};

OscSet oscillatory_integrals(const AuxV& v, Complex lambda, int weight) {
  auto combo = [&](const SampledFunction& f) {
    const Complex ep = integrate_exp(f, lambda, weight);
    const Complex em = integrate_exp(f, -lambda, weight);
    return std::pair{(ep - em) / (2.0 * kI), 0.5 * (ep + em)};
  };
  OscSet s;
  std::tie(s.sin_b1, s.cos_b1) = combo(v.base1);
  std::tie(s.sin_b2, s.cos_b2) = combo(v.base2);
  std::tie(s.sin_c1, s.cos_c1) = combo(v.central1);
  std::tie(s.sin_c2, s.cos_c2) = combo(v.central2);
  return s;
}

}  // namespace

Complex delta_closed(int j, const AuxV& v, Complex lambda) {
  if (j != 1 && j != 2) throw std::invalid_argument("delta_closed: j must be 1 or 2");
  const OscSet s = oscillatory_integrals(v, lambda, 0);
  if (j == 1)
    return -std::sin(lambda * pi) + s.sin_b1 + s.sin_c1 + s.cos_b2 + s.cos_c2;
  return std::cos(lambda * pi) + s.sin_b2 + s.sin_c2 - s.cos_b1 - s.cos_c1;
}

Complex delta_derivative(int j, const AuxV& v, Complex lambda) {
  if (j != 1 && j != 2) throw std::invalid_argument("delta_derivative: j must be 1 or 2");
  const OscSet s = oscillatory_integrals(v, lambda, 1);
  if (j == 1)
    return -pi * std::cos(lambda * pi) + s.cos_b1 + s.cos_c1 - s.sin_b2 - s.sin_c2;
  return -pi * std::sin(lambda * pi) + s.cos_b2 + s.cos_c2 + s.sin_b1 + s.sin_c1;
}

Mat2 rotation_y0(double x, Complex lambda) {
  const Complex c = std::cos(lambda * x);
  const Complex s = std::sin(lambda * x);
  return {c, -s, s, c};
}

Complex FundamentalMatrix::entry(int row, int col) const {
  const Mat2 y = total();
  if (row == 1) return col == 1 ? y.a11 : y.a12;
  return col == 1 ? y.a21 : y.a22;
}

namespace {

// Exact integral of the linear interpolant of f against e^{i*omega*t} over
// one cell [t0, t0+dt], given endpoint values.
struct CellFilon {
  Complex omega;

  Complex operator()(double t0, double dt, Complex f0, Complex f1) const {
    const Complex theta = omega * dt;
    Complex m0, m1;
    if (std::abs(theta) < 0.5) {
      Complex term{1.0, 0.0};
      m0 = m1 = Complex{};
      const Complex it = kI * theta;
      for (int k = 0; k < 18; ++k) {
        m0 += term / double(k + 1);
        m1 += term / double(k + 2);
        term *= it / double(k + 1);
      }
    } else {
      const Complex it = kI * theta;
      const Complex e = std::exp(it);
      m0 = (e - 1.0) / it;
      m1 = (e * (it - 1.0) + 1.0) / (it * it);
    }
    return dt * std::exp(kI * omega * t0) * (f0 * m0 + (f1 - f0) * m1);
  }
};

}  // namespace

FundamentalMatrix fundamental_matrix(const PotentialPair& P, Complex lambda, double x,
                                     int refine) {
  const double a = P.a.value();
  if (x < -1e-12 || x > pi + 1e-12)
    throw std::invalid_argument("fundamental_matrix: x must lie in [0, pi]");
  x = std::clamp(x, 0.0, pi);

  FundamentalMatrix Y{rotation_y0(x, lambda), Mat2{}, Mat2{}};
  if (x <= a + 1e-15) return Y;

  const int cells = std::max(64, refine * P.q.grid().cells());
  const double h = (pi - a) / cells;  // refined lattice over [a, pi]

  auto qp_at = [&](double t) {
    return std::pair{interpolate(P.q, t), interpolate(P.p, t)};
  };

  const CellFilon fil_p{2.0 * lambda}, fil_m{-2.0 * lambda};

  // Cumulative transforms int_{lo}^{s} f(t) e^{+-2 i lambda t} dt sampled at
  // s = pts[k]; exact per cell for the potential interpolants.  The two
  // point families below (lattice nodes and nodes shifted by -a) let the
  // Y2 integrand consume C(t - a) without interpolating it.
  struct Transforms {
    std::vector<Complex> qp, qm, pp, pm;
  };
  auto accumulate = [&](const std::vector<double>& pts) {
    Transforms tr;
    const size_t n = pts.size();
    tr.qp.resize(n);
    tr.qm.resize(n);
    tr.pp.resize(n);
    tr.pm.resize(n);
    auto [q0, p0] = qp_at(pts[0]);
    for (size_t k = 1; k < n; ++k) {
      const double dt = pts[k] - pts[k - 1];
      if (dt <= 1e-15) {
        tr.qp[k] = tr.qp[k - 1];
        tr.qm[k] = tr.qm[k - 1];
        tr.pp[k] = tr.pp[k - 1];
        tr.pm[k] = tr.pm[k - 1];
        continue;
      }
      auto [q1, p1] = qp_at(pts[k]);
      tr.qp[k] = tr.qp[k - 1] + fil_p(pts[k - 1], dt, q0, q1);
      tr.qm[k] = tr.qm[k - 1] + fil_m(pts[k - 1], dt, q0, q1);
      tr.pp[k] = tr.pp[k - 1] + fil_p(pts[k - 1], dt, p0, p1);
      tr.pm[k] = tr.pm[k - 1] + fil_m(pts[k - 1], dt, p0, p1);
      q0 = q1;
      p0 = p1;
    }
    return tr;
  };

  const Complex ea_m = std::exp(-kI * lambda * a);
  const Complex ea_p = std::exp(kI * lambda * a);
  auto c_matrix = [&](const Transforms& tr, size_t k) {
    // alpha = int q~, beta = int p~ with q~, p~ the potentials rotated at
    // frequency lambda(2t - a).
    const Complex alpha = 0.5 * (ea_m * tr.qp[k] + ea_p * tr.qm[k]) +
                          (ea_m * tr.pp[k] - ea_p * tr.pm[k]) / (2.0 * kI);
    const Complex beta = 0.5 * (ea_m * tr.pp[k] + ea_p * tr.pm[k]) -
                         (ea_m * tr.qp[k] - ea_p * tr.qm[k]) / (2.0 * kI);
    return Mat2{alpha, beta, beta, -alpha};
  };

  // Y1(x) = B Y0(x) C(x) with C(x) = int_a^x Y0(-t) Q(t) Y0(t-a) dt.
  {
    std::vector<double> pts{a};
    for (int k = 1; a + k * h < x - 1e-15; ++k) pts.push_back(a + k * h);
    pts.push_back(x);
    const Transforms tr = accumulate(pts);
    Y.y1 = (b_matrix * rotation_y0(x, lambda)) * c_matrix(tr, pts.size() - 1);
  }

  if (x <= 2.0 * a + 1e-15) return Y;

  // C(t - a) at the shifted abscissas s = t - a for lattice points t in
  // [2a, x], plus the endpoints.
  std::vector<double> tpts{2.0 * a};
  for (int k = 1; a + k * h < x - 1e-15; ++k)
    if (a + k * h > 2.0 * a + 1e-15) tpts.push_back(a + k * h);
  tpts.push_back(x);

  std::vector<double> spts{a};
  for (double t : tpts) spts.push_back(t - a);
  const Transforms trs = accumulate(spts);

  // D(x) = int_{2a}^{x} M(t) B C(t-a) dt by trapezoid over the t points;
  // M(t) = Y0(-t) Q(t) Y0(t-a) carries the e^{+-i lambda(2t-a)} rotation.
  auto integrand = [&](size_t idx) {
    const double t = tpts[idx];
    const Complex phase = std::exp(kI * lambda * (2.0 * t - a));
    const Complex c = 0.5 * (phase + 1.0 / phase);
    const Complex s = (phase - 1.0 / phase) / (2.0 * kI);
    auto [qt, pt] = qp_at(t);
    const Complex qr = qt * c + pt * s;
    const Complex pr = pt * c - qt * s;
    const Mat2 m{qr, pr, pr, -qr};
    return m * (b_matrix * c_matrix(trs, idx + 1));
  };

  Mat2 d{};
  Mat2 prev = integrand(0);
  for (size_t k = 1; k < tpts.size(); ++k) {
    const Mat2 cur = integrand(k);
    d = d + (prev + cur) * Complex(0.5 * (tpts[k] - tpts[k - 1]), 0.0);
    prev = cur;
  }

  Y.y2 = (b_matrix * rotation_y0(x, lambda)) * d;
  return Y;
}

Complex delta_oracle(int j, const PotentialPair& P, Complex lambda, int refine) {
  if (j != 1 && j != 2) throw std::invalid_argument("delta_oracle: j must be 1 or 2");
  const FundamentalMatrix Y = fundamental_matrix(P, lambda, pi, refine);
  return Y.entry(j, 2);
}

CharacteristicTable tabulate_closed(int j, const AuxV& v, int order) {
  CharacteristicTable t{j, order, {}};
  t.values.reserve(2 * order + 1);
  for (int n = -order; n <= order; ++n)
    t.values.push_back(delta_closed(j, v, Complex(double(n), 0.0)));
  return t;
}

}  // namespace ddirac
