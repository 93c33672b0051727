#pragma once

#include <array>

#include "ddirac/forward.hpp"

namespace ddirac {

/// Potential-side recombination of u:
///   w1(x) = -(u1+iu2)(pi+a-2x) - (u1-iu2)(2x-pi-a),
///   w2(x) = (iu1-u2)(pi+a-2x) - (iu1+u2)(2x-pi-a),  x in [a, pi].
/// Keeps its source so one-sided limits at the region seams can be
/// re-evaluated exactly.
struct AuxW {
  DelayParameter a;
  SampledFunction w1, w2;  // on [a, pi]
  AuxU source;

  /// (w1, w2) at x; `lim` takes the one-sided limit in x at the seams.
  std::pair<Complex, Complex> eval_pair(double x, Limit lim = Limit::None) const;
};

AuxW compute_w(const AuxU& u, DelayParameter a, int cells = 2000);

/// Characteristic function rebuilt from a truncated spectrum.  The
/// exp-convergence factors of the infinite products are folded into the
/// Weierstrass factorizations of -sin(pi lambda) and cos(pi lambda), so
/// only the finite ratio product over the stored eigenvalues remains; the
/// lattice factor is evaluated through its analytic (sinc) limit.
Complex delta_from_spectrum(const Spectrum& S, Complex lambda);

/// delta_from_spectrum at the integers n in {-N, ..., N}.
CharacteristicTable tabulate_from_spectrum(const Spectrum& S);

/// Truncated Fourier synthesis (Algorithm step (ii)):
///   u1(x) = (1/2pi) sum Delta_1(n) e^{-inx},
///   u2(x) = (1/2pi) sum (Delta_2(n) - (-1)^n) e^{-inx}.
AuxU synthesize_u(const CharacteristicTable& t1, const CharacteristicTable& t2,
                  const UniformGrid& grid);

/// Jump-corrected synthesis: u has known discontinuity abscissas
/// {a-pi, 2a-pi, pi-2a, pi-a}; their jump and derivative-jump amplitudes
/// are fitted from the upper coefficient band and carried as closed-form
/// sawtooth/ramp terms, so the sampled remainder converges fast and the
/// seams stay clean.  Falls back to the plain synthesis for small N.
AuxU synthesize_u_refined(const CharacteristicTable& t1, const CharacteristicTable& t2,
                          const UniformGrid& grid, DelayParameter a);

enum class SegmentTag { Edge, Gamma, Delta, Eta, Known, F, G };

struct PotentialSegment {
  Interval interval;
  SampledFunction s1, s2;  // q-part, p-part
  SegmentTag tag;
};

enum class CorrectionKind { Gamma, Delta, Eta };

struct CorrectionPair {
  Interval interval;
  SampledFunction c1, c2;
  CorrectionKind kind;
};

/// q = w1, p = w2 on [a, 3a/2] and [pi-a/2, pi].
struct EdgeReconstruction {
  PotentialSegment lower, upper;
};
EdgeReconstruction reconstruct_edge(const AuxW& w, const RegionLayout& L);

/// q = w1 + gamma1, p = w2 + gamma2 on [pi-a, 2a] and [pi/2+3a/4, pi-a/2),
/// with the corrections bilinear in the edge values of w.  The lower piece
/// degenerates to a point at a = pi/3 and is then omitted.
struct GammaReconstruction {
  std::vector<CorrectionPair> corrections;
  std::vector<PotentialSegment> segments;
};
GammaReconstruction reconstruct_gamma(const AuxW& w, const RegionLayout& L);

/// f = (q, p) on [pi/2+3a/4, pi], assembled from the gamma and edge pieces.
PotentialSegment assemble_f(const AuxW& w, const RegionLayout& L);

/// g = (q, p) on [a, pi/2+a/4], assembled from the lower edge piece and the
/// a-priori-known window.
PotentialSegment assemble_g(const AuxW& w, const PotentialSegment& known,
                            const RegionLayout& L);

/// q = w1 + delta1, p = w2 + delta2 on I2 = (2a, pi/2+3a/4); the kernels
/// pair f against w values drawn from [a, 3a/2] only.
struct DeltaReconstruction {
  CorrectionPair correction;
  PotentialSegment segment;
};
DeltaReconstruction reconstruct_delta(const AuxW& w, const PotentialSegment& f,
                                      const RegionLayout& L);

/// q = w1 + eta1, p = w2 + eta2 on I3 = [pi/2+a/4, pi-a); kernels pair f
/// against g.
struct EtaReconstruction {
  CorrectionPair correction;
  PotentialSegment segment;
};
EtaReconstruction reconstruct_eta(const AuxW& w, const PotentialSegment& f,
                                  const PotentialSegment& g, const RegionLayout& L);

struct InversionConfig {
  int potential_cells = 2000;
  int aux_cells = 2000;
  bool jump_correction = true;
};

struct SeamReport {
  double location;
  Region left, right;
  double mismatch;  // max over the q and p components
};

struct ReconstructionReport {
  PotentialPair result;
  std::vector<PotentialSegment> segments;
  std::vector<SeamReport> seams;
  std::vector<Region> node_region;        // stage owning each output node
  std::array<int, 5> region_node_counts;  // indexed by Region
  int order;
  InversionConfig config;
  double max_seam_mismatch;
};

/// Algorithm 1 end to end: rebuild Delta_j from the spectra, synthesize u,
/// form w, and reconstruct (q, p) region by region, stitching in the
/// a-priori-known window.
ReconstructionReport run_algorithm1(const SpectralData& D, const PotentialSegment& known,
                                    DelayParameter a, const InversionConfig& cfg);

}  // namespace ddirac
