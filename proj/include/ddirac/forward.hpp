#pragma once

#include <utility>

#include "ddirac/types.hpp"

namespace ddirac {

/// Transform-domain densities of the characteristic functions:
///   Delta_1(l) = -sin(l pi) + int v1 sin(l x) + int v2 cos(l x),
///   Delta_2(l) =  cos(l pi) + int v2 sin(l x) - int v1 cos(l x),
/// integrals over [a-pi, pi-a].
///
/// v splits into an integral-free density (base), valid on the whole
/// interval, plus a bilinear correction supported on the central interval
/// [2a-pi, pi-2a].  The correction does not vanish at the right end, so v
/// itself has a jump at pi-2a; the split keeps every stored piece
/// continuous on its own interval, which is what the quadrature needs.
/// v1/v2 carry the single-valued paper definition (branch points assigned
/// to the integral-free branch).
struct AuxV {
  DelayParameter a;
  SampledFunction v1, v2;            // on [a-pi, pi-a]
  SampledFunction base1, base2;      // integral-free densities, same grid
  SampledFunction central1, central2;  // corrections on [2a-pi, pi-2a]
};

AuxV compute_v(const PotentialPair& P, int aux_cells = 2000);

enum class Limit { None, FromLeft, FromRight };

/// Complex-exponential recombination of v:
///   u1 = (v1(x) - v1(-x))/(2i) + (v2(x) + v2(-x))/2,
///   u2 = (v2(x) - v2(-x))/(2i) - (v1(x) + v1(-x))/2.
///
/// u inherits jumps of v at +-(pi-2a); `jump_points` marks them and eval()
/// interpolates one-sidedly near them.  `terms*` hold analytic
/// sawtooth/ramp parts used by the jump-corrected inverse synthesis; they
/// are empty on the forward path.
struct AuxU {
  struct JumpTerm {
    double location;  // abscissa in (-pi, pi)
    Complex jump;     // coefficient of the unit-jump sawtooth
    Complex kink;     // coefficient of the unit derivative-jump ramp
  };

  SampledFunction u1, u2;            // full node values (contract fields)
  SampledFunction smooth1, smooth2;  // sampled part used by eval()
  std::vector<double> jump_points;   // discontinuities of the sampled part
  std::vector<JumpTerm> terms1, terms2;

  /// Value of u_comp at x as smooth part plus analytic terms; `lim`
  /// selects the one-sided limit at a discontinuity (Limit::None gives a
  /// point evaluation).
  Complex eval(int comp, double x, Limit lim = Limit::None) const;
  std::pair<Complex, Complex> eval_pair(double x, Limit lim = Limit::None) const;
};

AuxU compute_u(const AuxV& v);

/// Characteristic function Delta_j and its lambda-derivative through the
/// transform representation.  The lambda-integrals are evaluated exactly
/// for the stored piecewise-linear densities, so accuracy does not
/// degrade with |lambda|.
Complex delta_closed(int j, const AuxV& v, Complex lambda);
Complex delta_derivative(int j, const AuxV& v, Complex lambda);

struct Mat2 {
  Complex a11, a12, a21, a22;

  Mat2 operator+(const Mat2& o) const {
    return {a11 + o.a11, a12 + o.a12, a21 + o.a21, a22 + o.a22};
  }
  Mat2 operator*(const Mat2& o) const {
    return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
            a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
  }
  Mat2 operator*(Complex s) const { return {a11 * s, a12 * s, a21 * s, a22 * s}; }
  Complex det() const { return a11 * a22 - a12 * a21; }
};

inline constexpr Mat2 b_matrix{Complex(0, 0), Complex(1, 0), Complex(-1, 0), Complex(0, 0)};

/// Rotation Y0(x, lambda) = [[cos lx, -sin lx], [sin lx, cos lx]].
Mat2 rotation_y0(double x, Complex lambda);

/// Three-term decomposition of the fundamental matrix at (x, lambda):
///   Y = Y0 + Y1 + Y2,
///   Y1 = B int_a^x  Y0(x-t) Q(t) Y0(t-a) dt,
///   Y2 = B int_2a^x Y0(x-t) Q(t) Y1(t-a) dt.
struct FundamentalMatrix {
  Mat2 y0, y1, y2;
  Mat2 total() const { return y0 + y1 + y2; }
  Complex entry(int row, int col) const;
};

/// Evaluates the decomposition at (x, lambda) on an internally refined
/// grid (`refine` times the potential grid).  Independent of the
/// v-representation; kept as a cross-validation oracle.
FundamentalMatrix fundamental_matrix(const PotentialPair& P, Complex lambda, double x = pi,
                                     int refine = 16);

/// Delta_j(lambda) = y_{j,2}(pi, lambda) through the fundamental matrix.
Complex delta_oracle(int j, const PotentialPair& P, Complex lambda, int refine = 16);

/// Delta_j sampled at the integers n in {-N, ..., N}.
struct CharacteristicTable {
  int j = 1;
  int order = 0;
  std::vector<Complex> values;  // index n + order

  Complex at(int n) const { return values.at(n + order); }
};

CharacteristicTable tabulate_closed(int j, const AuxV& v, int order);

}  // namespace ddirac
