#include "ddirac/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ddirac {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kSnap = 1e-11;

double parity(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }

Limit flip(Limit lim) {
  if (lim == Limit::FromLeft) return Limit::FromRight;
  if (lim == Limit::FromRight) return Limit::FromLeft;
  return Limit::None;
}

// Default one-sided choice when a w evaluation lands exactly on a
// discontinuity of u: take the outer branch at the interior branch points
// and the support-interior side at the ends.  This matches the closed-side
// conventions of the edge region.
Limit resolve_at_jumps(double s, Limit lim, double a) {
  if (lim != Limit::None) return lim;
  if (std::abs(s - (pi - 2.0 * a)) < kSnap) return Limit::FromRight;
  if (std::abs(s - (2.0 * a - pi)) < kSnap) return Limit::FromLeft;
  if (std::abs(s - (pi - a)) < kSnap) return Limit::FromLeft;
  if (std::abs(s - (a - pi)) < kSnap) return Limit::FromRight;
  return Limit::None;
}

std::pair<Complex, Complex> w_from_u(const AuxU& u, double a, double x, Limit lim) {
  const double s_plus = pi + a - 2.0 * x;
  const double s_minus = 2.0 * x - pi - a;
  const Limit lp = resolve_at_jumps(s_plus, flip(lim), a);
  const Limit lm = resolve_at_jumps(s_minus, lim, a);
  const auto [u1p, u2p] = u.eval_pair(s_plus, lp);
  const auto [u1m, u2m] = u.eval_pair(s_minus, lm);
  const Complex w1 = -(u1p + kI * u2p) - (u1m - kI * u2m);
  const Complex w2 = (kI * u1p - u2p) - (kI * u1m + u2m);
  return {w1, w2};
}

// Segment grid resolution proportional to the w grid density.
int segment_cells(const AuxW& w, const Interval& iv) {
  const double density = w.w1.grid().cells() / (pi - w.a.value());
  return std::max(8, static_cast<int>(std::lround(density * iv.length())));
}

}  // namespace

std::pair<Complex, Complex> AuxW::eval_pair(double x, Limit lim) const {
  return w_from_u(source, a.value(), x, lim);
}

AuxW compute_w(const AuxU& u, DelayParameter a, int cells) {
  const UniformGrid g(a.value(), pi, cells);
  std::vector<Complex> w1(g.nodes()), w2(g.nodes());
  for (int k = 0; k < g.nodes(); ++k) {
    const auto [a1, a2] = w_from_u(u, a.value(), g.node(k), Limit::None);
    w1[k] = a1;
    w2[k] = a2;
  }
  return AuxW{a, SampledFunction(g, std::move(w1)), SampledFunction(g, std::move(w2)), u};
}

Complex delta_from_spectrum(const Spectrum& S, Complex lambda) {
  const int N = S.order();
  const int j = S.j();

  // Nearest lattice index, clamped to the stored range; factoring out its
  // sine/cosine zero keeps the evaluation finite at the lattice.
  int m = static_cast<int>(std::llround(lambda.real() + 0.5 * (j - 1)));
  m = std::clamp(m, -N, N);
  const double mu = Spectrum::lattice(j, m);

  const Complex z = (lambda - mu) * pi;
  const Complex sinc = std::abs(z) < 1e-8 ? 1.0 - z * z / 6.0 : std::sin(z) / z;
  const double sign = (j == 1) ? parity(m) : -parity(m);
  Complex value = sign * pi * sinc * (S.eigenvalue(m) - lambda);

  for (int n = -N; n <= N; ++n) {
    if (n == m) continue;
    value *= (S.eigenvalue(n) - lambda) / (Spectrum::lattice(j, n) - lambda);
  }
  return value;
}

CharacteristicTable tabulate_from_spectrum(const Spectrum& S) {
  CharacteristicTable t{S.j(), S.order(), {}};
  t.values.reserve(2 * S.order() + 1);
  for (int n = -S.order(); n <= S.order(); ++n)
    t.values.push_back(delta_from_spectrum(S, Complex(double(n), 0.0)));
  return t;
}

namespace {

// Fourier data A_n = Delta_1(n) and A_n = Delta_2(n) - (-1)^n; with the
// convention u(x) = (1/2pi) sum A_n e^{-inx}.
std::pair<std::vector<Complex>, std::vector<Complex>> coefficient_arrays(
    const CharacteristicTable& t1, const CharacteristicTable& t2) {
  if (t1.order != t2.order)
    throw std::invalid_argument("synthesize_u: tables must share one truncation order");
  if (t1.j != 1 || t2.j != 2)
    throw std::invalid_argument("synthesize_u: tables must carry j = 1 and j = 2");
  const int N = t1.order;
  std::vector<Complex> a1(2 * N + 1), a2(2 * N + 1);
  for (int n = -N; n <= N; ++n) {
    a1[n + N] = t1.at(n);
    a2[n + N] = t2.at(n) - parity(n);
  }
  return {std::move(a1), std::move(a2)};
}

// Deterministic mode sum (ascending n) at every grid node.
SampledFunction synthesize_nodes(const std::vector<Complex>& coeff, int N,
                                 const UniformGrid& grid) {
  std::vector<Complex> values(grid.nodes());
  for (int k = 0; k < grid.nodes(); ++k) {
    const double x = grid.node(k);
    Complex phase = std::exp(kI * double(N) * x);  // e^{-i(-N)x}
    const Complex step = std::exp(-kI * x);
    Complex sum{};
    for (int n = -N; n <= N; ++n) {
      sum += coeff[n + N] * phase;
      phase *= step;
    }
    values[k] = sum / (2.0 * pi);
  }
  return SampledFunction(grid, std::move(values));
}

}  // namespace

AuxU synthesize_u(const CharacteristicTable& t1, const CharacteristicTable& t2,
                  const UniformGrid& grid) {
  const auto [a1, a2] = coefficient_arrays(t1, t2);
  SampledFunction u1 = synthesize_nodes(a1, t1.order, grid);
  SampledFunction u2 = synthesize_nodes(a2, t1.order, grid);
  return AuxU{u1, u2, u1, u2, {}, {}, {}};
}

namespace {

// Solve the dense complex system H z = b in place (partial pivoting).
std::vector<Complex> solve_dense(std::vector<std::vector<Complex>> h, std::vector<Complex> b) {
  const int n = static_cast<int>(b.size());
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(h[r][col]) > std::abs(h[piv][col])) piv = r;
    std::swap(h[piv], h[col]);
    std::swap(b[piv], b[col]);
    if (std::abs(h[col][col]) < 1e-300) throw std::runtime_error("singular fit system");
    for (int r = col + 1; r < n; ++r) {
      const Complex factor = h[r][col] / h[col][col];
      for (int c = col; c < n; ++c) h[r][c] -= factor * h[col][c];
      b[r] -= factor * b[col];
    }
  }
  std::vector<Complex> z(n);
  for (int r = n - 1; r >= 0; --r) {
    Complex acc = b[r];
    for (int c = r + 1; c < n; ++c) acc -= h[r][c] * z[c];
    z[r] = acc / h[r][r];
  }
  return z;
}

// Least-squares fit of jump (J) and derivative-jump (K) amplitudes at the
// four known abscissas from the upper half of the coefficient band:
//   A_n ~ sum_k [ J_k (i/n) - K_k / n^2 ] e^{i n s_k}.
struct JumpFit {
  std::array<Complex, 4> jump, kink;
};

JumpFit fit_jumps(const std::vector<Complex>& coeff, int N,
                  const std::array<double, 4>& locs) {
  const int n_lo = std::max(4, N / 2);
  std::vector<int> rows;
  for (int n = n_lo; n <= N; ++n) {
    rows.push_back(n);
    rows.push_back(-n);
  }

  auto basis = [&](int n, int k) -> Complex {
    const Complex e = std::exp(kI * double(n) * locs[k % 4]);
    if (k < 4) return kI / double(n) * e;
    return -1.0 / double(n * n) * e;
  };

  std::vector<std::vector<Complex>> h(8, std::vector<Complex>(8));
  std::vector<Complex> rhs(8);
  for (int r = 0; r < 8; ++r) {
    for (int c = 0; c < 8; ++c) {
      Complex acc{};
      for (int n : rows) acc += std::conj(basis(n, r)) * basis(n, c);
      h[r][c] = acc;
    }
    Complex acc{};
    for (int n : rows) acc += std::conj(basis(n, r)) * coeff[n + N];
    rhs[r] = acc;
  }
  const std::vector<Complex> z = solve_dense(std::move(h), std::move(rhs));

  JumpFit fit;
  for (int k = 0; k < 4; ++k) {
    fit.jump[k] = z[k];
    fit.kink[k] = z[k + 4];
  }
  return fit;
}

}  // namespace

AuxU synthesize_u_refined(const CharacteristicTable& t1, const CharacteristicTable& t2,
                          const UniformGrid& grid, DelayParameter a) {
  const int N = t1.order;
  if (N < 12) return synthesize_u(t1, t2, grid);

  auto [a1, a2] = coefficient_arrays(t1, t2);

  double coeff_scale = 0.0;
  for (const Complex& c : a1) coeff_scale = std::max(coeff_scale, std::abs(c));
  for (const Complex& c : a2) coeff_scale = std::max(coeff_scale, std::abs(c));
  if (coeff_scale < 1e-13) return synthesize_u(t1, t2, grid);
  const double av = a.value();
  const std::array<double, 4> locs{av - pi, 2.0 * av - pi, pi - 2.0 * av, pi - av};

  const JumpFit fit1 = fit_jumps(a1, N, locs);
  const JumpFit fit2 = fit_jumps(a2, N, locs);

  // Subtract the fitted closed-form Fourier data; what is left converges
  // fast under plain truncation.
  auto deflate = [&](std::vector<Complex>& coeff, const JumpFit& fit) {
    for (int n = -N; n <= N; ++n) {
      if (n == 0) continue;
      Complex model{};
      for (int k = 0; k < 4; ++k) {
        const Complex e = std::exp(kI * double(n) * locs[k]);
        model += fit.jump[k] * (kI / double(n)) * e;
        model -= fit.kink[k] * (1.0 / double(n * n)) * e;
      }
      coeff[n + N] -= model;
    }
  };
  deflate(a1, fit1);
  deflate(a2, fit2);

  AuxU u{SampledFunction::zero(grid), SampledFunction::zero(grid),
         synthesize_nodes(a1, N, grid), synthesize_nodes(a2, N, grid),
         {},
         {},
         {}};
  for (int k = 0; k < 4; ++k) {
    if (std::abs(fit1.jump[k]) + std::abs(fit1.kink[k]) > 1e-13)
      u.terms1.push_back({locs[k], fit1.jump[k], fit1.kink[k]});
    if (std::abs(fit2.jump[k]) + std::abs(fit2.kink[k]) > 1e-13)
      u.terms2.push_back({locs[k], fit2.jump[k], fit2.kink[k]});
  }

  std::vector<Complex> full1(grid.nodes()), full2(grid.nodes());
  for (int k = 0; k < grid.nodes(); ++k) {
    full1[k] = u.eval(1, grid.node(k));
    full2[k] = u.eval(2, grid.node(k));
  }
  u.u1 = SampledFunction(grid, std::move(full1));
  u.u2 = SampledFunction(grid, std::move(full2));
  return u;
}

namespace {

// Shared correction-integral machinery: all three corrections have the form
//   c1(x) = int_{x+a/2}^{pi} [k1(t) s2(t-x+a/2) - k2(t) s1(t-x+a/2)] dt,
//   c2(x) = int_{x+a/2}^{pi} [k1(t) s1(t-x+a/2) + k2(t) s2(t-x+a/2)] dt,
// differing only in the kernel pair (k = w-edge, f) and the shifted pair
// (s = w-edge, g).
struct CorrectionEvaluator {
  const SampledFunction* k1;
  const SampledFunction* k2;
  const SampledFunction* s1;
  const SampledFunction* s2;
  double a;

  std::pair<Complex, Complex> at(double x) const {
    const double lo = x + 0.5 * a;
    const double shift = 0.5 * a - x;
    auto first = [&](double t) {
      const double arg = t + shift;
      return interpolate(*k1, t) * interpolate(*s2, arg) -
             interpolate(*k2, t) * interpolate(*s1, arg);
    };
    auto second = [&](double t) {
      const double arg = t + shift;
      return interpolate(*k1, t) * interpolate(*s1, arg) +
             interpolate(*k2, t) * interpolate(*s2, arg);
    };
    const UniformGrid& g = k1->grid();
    return {trapezoid_tail(g, lo, first), trapezoid_tail(g, lo, second)};
  }
};

PotentialSegment w_segment(const AuxW& w, const Interval& iv, SegmentTag tag) {
  const UniformGrid g(iv.lo, iv.hi, segment_cells(w, iv));
  std::vector<Complex> q(g.nodes()), p(g.nodes());
  for (int k = 0; k < g.nodes(); ++k) {
    Limit lim = Limit::None;
    if (k == 0) lim = Limit::FromRight;
    if (k == g.cells()) lim = Limit::FromLeft;
    const auto [w1, w2] = w.eval_pair(g.node(k), lim);
    q[k] = w1;
    p[k] = w2;
  }
  return PotentialSegment{iv, SampledFunction(g, std::move(q)),
                          SampledFunction(g, std::move(p)), tag};
}

struct CorrectedSegment {
  PotentialSegment segment;
  CorrectionPair correction;
};

CorrectedSegment corrected_segment(const AuxW& w, const Interval& iv,
                                   const CorrectionEvaluator& corr, SegmentTag tag,
                                   CorrectionKind kind) {
  const UniformGrid g(iv.lo, iv.hi, segment_cells(w, iv));
  std::vector<Complex> q(g.nodes()), p(g.nodes()), c1(g.nodes()), c2(g.nodes());
  for (int k = 0; k < g.nodes(); ++k) {
    Limit lim = Limit::None;
    if (k == 0) lim = Limit::FromRight;
    if (k == g.cells()) lim = Limit::FromLeft;
    const double x = g.node(k);
    const auto [w1, w2] = w.eval_pair(x, lim);
    const auto [g1, g2] = corr.at(x);
    c1[k] = g1;
    c2[k] = g2;
    q[k] = w1 + g1;
    p[k] = w2 + g2;
  }
  return {PotentialSegment{iv, SampledFunction(g, std::move(q)),
                           SampledFunction(g, std::move(p)), tag},
          CorrectionPair{iv, SampledFunction(g, std::move(c1)),
                         SampledFunction(g, std::move(c2)), kind}};
}

void require_coverage(const PotentialSegment& seg, const Interval& needed, const char* who) {
  const double tol = 0.5 * seg.s1.grid().step() + 1e-12;
  if (seg.interval.lo > needed.lo + tol || seg.interval.hi < needed.hi - tol) {
    std::ostringstream msg;
    msg << who << ": segment covers [" << seg.interval.lo << ", " << seg.interval.hi
        << "] but [" << needed.lo << ", " << needed.hi << "] is required";
    if (seg.interval.lo > needed.lo + tol)
      msg << "; uncovered [" << needed.lo << ", " << std::min(seg.interval.lo, needed.hi)
          << ")";
    if (seg.interval.hi < needed.hi - tol)
      msg << "; uncovered (" << std::max(seg.interval.hi, needed.lo) << ", " << needed.hi
          << "]";
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

EdgeReconstruction reconstruct_edge(const AuxW& w, const RegionLayout& L) {
  return {w_segment(w, L.edge_lower, SegmentTag::Edge),
          w_segment(w, L.edge_upper, SegmentTag::Edge)};
}

GammaReconstruction reconstruct_gamma(const AuxW& w, const RegionLayout& L) {
  const PotentialSegment low = w_segment(w, L.edge_lower, SegmentTag::Edge);
  const PotentialSegment up = w_segment(w, L.edge_upper, SegmentTag::Edge);
  const CorrectionEvaluator corr{&up.s1, &up.s2, &low.s1, &low.s2, w.a.value()};

  GammaReconstruction out;
  for (const Interval& iv : {L.gamma_lower, L.gamma_upper}) {
    if (iv.degenerate(1e-9)) continue;
    CorrectedSegment cs = corrected_segment(w, iv, corr, SegmentTag::Gamma,
                                            CorrectionKind::Gamma);
    out.segments.push_back(std::move(cs.segment));
    out.corrections.push_back(std::move(cs.correction));
  }
  return out;
}

PotentialSegment assemble_f(const AuxW& w, const RegionLayout& L) {
  const PotentialSegment low = w_segment(w, L.edge_lower, SegmentTag::Edge);
  const PotentialSegment up = w_segment(w, L.edge_upper, SegmentTag::Edge);
  const CorrectionEvaluator corr{&up.s1, &up.s2, &low.s1, &low.s2, w.a.value()};

  const Interval iv{L.gamma_upper.lo, pi};
  const double split = L.edge_upper.lo;  // pi - a/2
  const UniformGrid g(iv.lo, iv.hi, segment_cells(w, iv));
  std::vector<Complex> q(g.nodes()), p(g.nodes());
  for (int k = 0; k < g.nodes(); ++k) {
    const double x = g.node(k);
    Limit lim = Limit::None;
    if (k == 0) lim = Limit::FromRight;
    if (k == g.cells()) lim = Limit::FromLeft;
    if (x < split - kSnap) {
      const auto [w1, w2] = w.eval_pair(x, lim);
      const auto [c1, c2] = corr.at(x);
      q[k] = w1 + c1;
      p[k] = w2 + c2;
    } else {
      const Limit elim = (std::abs(x - split) <= kSnap) ? Limit::FromRight : lim;
      const auto [w1, w2] = w.eval_pair(x, elim);
      q[k] = w1;
      p[k] = w2;
    }
  }
  return PotentialSegment{iv, SampledFunction(g, std::move(q)),
                          SampledFunction(g, std::move(p)), SegmentTag::F};
}

PotentialSegment assemble_g(const AuxW& w, const PotentialSegment& known,
                            const RegionLayout& L) {
  require_coverage(known, L.known_window, "assemble_g: a-priori window");

  const Interval iv{L.edge_lower.lo, L.known_window.hi};
  const double split = L.edge_lower.hi;  // 3a/2
  const UniformGrid g(iv.lo, iv.hi, segment_cells(w, iv));
  std::vector<Complex> q(g.nodes()), p(g.nodes());
  for (int k = 0; k < g.nodes(); ++k) {
    const double x = g.node(k);
    if (x < split - kSnap) {
      Limit lim = (k == 0) ? Limit::FromRight : Limit::None;
      const auto [w1, w2] = w.eval_pair(x, lim);
      q[k] = w1;
      p[k] = w2;
    } else {
      const double xc = std::clamp(x, known.interval.lo, known.interval.hi);
      q[k] = interpolate(known.s1, xc);
      p[k] = interpolate(known.s2, xc);
    }
  }
  return PotentialSegment{iv, SampledFunction(g, std::move(q)),
                          SampledFunction(g, std::move(p)), SegmentTag::G};
}

DeltaReconstruction reconstruct_delta(const AuxW& w, const PotentialSegment& f,
                                      const RegionLayout& L) {
  require_coverage(f, Interval{L.gamma_upper.lo, pi}, "reconstruct_delta: f");
  const PotentialSegment low = w_segment(w, L.edge_lower, SegmentTag::Edge);
  const CorrectionEvaluator corr{&f.s1, &f.s2, &low.s1, &low.s2, w.a.value()};
  CorrectedSegment cs =
      corrected_segment(w, L.i2, corr, SegmentTag::Delta, CorrectionKind::Delta);
  return {std::move(cs.correction), std::move(cs.segment)};
}

EtaReconstruction reconstruct_eta(const AuxW& w, const PotentialSegment& f,
                                  const PotentialSegment& g, const RegionLayout& L) {
  require_coverage(f, Interval{L.gamma_upper.lo, pi}, "reconstruct_eta: f");
  require_coverage(g, Interval{L.edge_lower.lo, L.known_window.hi}, "reconstruct_eta: g");
  const CorrectionEvaluator corr{&f.s1, &f.s2, &g.s1, &g.s2, w.a.value()};
  CorrectedSegment cs =
      corrected_segment(w, L.i3, corr, SegmentTag::Eta, CorrectionKind::Eta);
  return {std::move(cs.correction), std::move(cs.segment)};
}

ReconstructionReport run_algorithm1(const SpectralData& D, const PotentialSegment& known,
                                    DelayParameter a, const InversionConfig& cfg) {
  if (cfg.potential_cells < 2 || cfg.aux_cells < 2)
    throw std::invalid_argument("run_algorithm1: grid sizes must be >= 2");

  const RegionLayout L = region_layout(a);
  require_coverage(known, L.known_window, "run_algorithm1: a-priori window");

  // (i) characteristic functions from the spectra, at the integers
  const CharacteristicTable t1 = tabulate_from_spectrum(D.spectrum1);
  const CharacteristicTable t2 = tabulate_from_spectrum(D.spectrum2);

  // (ii) Fourier synthesis of u
  const UniformGrid gu(a.value() - pi, pi - a.value(), cfg.aux_cells);
  const AuxU u = cfg.jump_correction ? synthesize_u_refined(t1, t2, gu, a)
                                     : synthesize_u(t1, t2, gu);

  // (iii) w on [a, pi]
  const AuxW w = compute_w(u, a, cfg.potential_cells);

  // (iv)-(vii) region cascade
  EdgeReconstruction edge = reconstruct_edge(w, L);
  GammaReconstruction gamma = reconstruct_gamma(w, L);
  PotentialSegment f = assemble_f(w, L);
  DeltaReconstruction delta = reconstruct_delta(w, f, L);
  PotentialSegment g = assemble_g(w, known, L);
  EtaReconstruction eta = reconstruct_eta(w, f, g, L);

  // Stitch: each output node is assigned by exactly one stage.
  const UniformGrid gout(a.value(), pi, cfg.potential_cells);
  std::vector<Complex> q(gout.nodes()), p(gout.nodes());
  std::vector<Region> node_region(gout.nodes());
  std::array<int, 5> counts{};

  auto segment_value = [](const PotentialSegment& s, double x) {
    const double xc = std::clamp(x, s.interval.lo, s.interval.hi);
    return std::pair{interpolate(s.s1, xc), interpolate(s.s2, xc)};
  };

  for (int k = 0; k < gout.nodes(); ++k) {
    const double x = gout.node(k);
    const Region r = region_of(L, x);
    node_region[k] = r;
    counts[static_cast<int>(r)] += 1;
    std::pair<Complex, Complex> val;
    switch (r) {
      case Region::Edge:
        val = segment_value(x <= L.edge_lower.hi + kSnap ? edge.lower : edge.upper, x);
        break;
      case Region::Known: {
        const double xc = std::clamp(x, known.interval.lo, known.interval.hi);
        val = {interpolate(known.s1, xc), interpolate(known.s2, xc)};
        break;
      }
      case Region::Gamma: {
        const PotentialSegment& piece =
            (!gamma.segments.empty() && x <= gamma.segments.front().interval.hi + kSnap &&
             gamma.segments.front().interval.lo - kSnap <= x)
                ? gamma.segments.front()
                : gamma.segments.back();
        val = segment_value(piece, x);
        break;
      }
      case Region::Delta:
        val = segment_value(delta.segment, x);
        break;
      case Region::Eta:
        val = segment_value(eta.segment, x);
        break;
    }
    q[k] = val.first;
    p[k] = val.second;
  }

  // Seam diagnostics: adjacent stages evaluated one-sidedly at the shared
  // breakpoints; for exact data both sides converge to the same potential.
  std::vector<SeamReport> seams;
  auto add_seam = [&seams](double where, Region left, Region right,
                           std::pair<Complex, Complex> lv, std::pair<Complex, Complex> rv) {
    const double mis =
        std::max(std::abs(lv.first - rv.first), std::abs(lv.second - rv.second));
    seams.push_back({where, left, right, mis});
  };

  auto known_value = [&](double x) {
    const double xc = std::clamp(x, known.interval.lo, known.interval.hi);
    return std::pair{interpolate(known.s1, xc), interpolate(known.s2, xc)};
  };
  auto endpoint = [](const PotentialSegment& s, bool last) {
    const int k = last ? s.s1.grid().cells() : 0;
    return std::pair{s.s1.value(k), s.s2.value(k)};
  };

  add_seam(L.edge_lower.hi, Region::Edge, Region::Known, endpoint(edge.lower, true),
           known_value(L.edge_lower.hi));
  add_seam(L.known_window.hi, Region::Known, Region::Eta, known_value(L.known_window.hi),
           endpoint(eta.segment, false));
  if (!gamma.segments.empty() && gamma.segments.size() == 2) {
    add_seam(L.i3.hi, Region::Eta, Region::Gamma, endpoint(eta.segment, true),
             endpoint(gamma.segments.front(), false));
    add_seam(L.i2.lo, Region::Gamma, Region::Delta, endpoint(gamma.segments.front(), true),
             endpoint(delta.segment, false));
  } else {
    // degenerate lower gamma piece: eta meets delta directly
    add_seam(L.i3.hi, Region::Eta, Region::Delta, endpoint(eta.segment, true),
             endpoint(delta.segment, false));
  }
  add_seam(L.i2.hi, Region::Delta, Region::Gamma, endpoint(delta.segment, true),
           endpoint(gamma.segments.back(), false));
  add_seam(L.edge_upper.lo, Region::Gamma, Region::Edge,
           endpoint(gamma.segments.back(), true), endpoint(edge.upper, false));

  double max_seam = 0.0;
  for (const SeamReport& s : seams) max_seam = std::max(max_seam, s.mismatch);

  std::vector<PotentialSegment> segments;
  segments.push_back(edge.lower);
  segments.push_back(edge.upper);
  for (const auto& s : gamma.segments) segments.push_back(s);
  segments.push_back(delta.segment);
  segments.push_back(eta.segment);
  segments.push_back(known);

  PotentialPair result(a, SampledFunction(gout, std::move(q)),
                       SampledFunction(gout, std::move(p)));
  return ReconstructionReport{std::move(result), std::move(segments), std::move(seams),
                              std::move(node_region), counts,        D.order,
                              cfg,               max_seam};
}

}  // namespace ddirac
