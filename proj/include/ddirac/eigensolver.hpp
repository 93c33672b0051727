#pragma once

#include <string>

#include "ddirac/forward.hpp"

namespace ddirac {

struct EigensolverError : std::runtime_error {
  int j, n;
  EigensolverError(std::string msg, int j_in, int n_in)
      : std::runtime_error(std::move(msg)), j(j_in), n(n_in) {}
};

/// Newton exceeded its iteration budget.
struct NoConvergence : EigensolverError {
  using EigensolverError::EigensolverError;
};

/// The iterate left the disk of radius 1/2 around the asymptotic seed;
/// signals clustered roots or an insufficient-N regime.
struct OutOfBox : EigensolverError {
  using EigensolverError::EigensolverError;
};

/// A zero sits too close to the counting contour even after retries.
struct BoundaryZero : EigensolverError {
  using EigensolverError::EigensolverError;
};

/// Axis-aligned rectangle in the lambda plane, given by opposite corners.
struct Box {
  Complex lo, hi;
};

/// Zero of Delta_j inside the open disk of radius 1/2 around the seed
/// n - (j-1)/2, by Newton iteration with a grid-scan + damped-Newton
/// fallback inside the box.
Complex find_eigenvalue(int j, const AuxV& v, int n);

/// Number of zeros of Delta_j inside the rectangle, from the winding
/// number of Delta_j along the boundary (trapezoid on the log-derivative,
/// refined until the value is integer-stable).
int verify_count(int j, const AuxV& v, Box rect);

struct SpectraDiagnostics {
  struct Entry {
    int j, n;
    int box_count;  // verify_count on the unit box, 1 in the generic case
    double abs_residual;
  };
  /// Run of adjacent anomalous boxes whose roots were located jointly and
  /// assigned in sorted order (root clusters, e.g. a complex-conjugate
  /// pair sharing one box).
  struct Cluster {
    int j, n_lo, n_hi;
  };
  std::vector<Entry> entries;
  std::vector<Cluster> clusters;
  bool all_certified = true;     // every unit box holds exactly its root
  double max_inner_residual = 0; // |kappa| over |n| <  N/2
  double max_outer_residual = 0; // |kappa| over |n| >= N/2
  bool decay_violation = false;  // outer exceeds inner
};

/// Both truncated spectra, |n| <= order.  Generic roots are certified on
/// their unit boxes; runs of adjacent anomalous boxes (empty box next to a
/// doubly occupied one) are resolved jointly: the run's rectangle is
/// certified to hold exactly as many zeros as boxes, the zeros are located
/// and assigned to the run's indices in sorted order, and the run is
/// reported in the diagnostics.  Unresolvable configurations propagate as
/// eigensolver errors tagged with (j, n).
SpectralData compute_spectra(const PotentialPair& P, int order, int aux_cells = 2000,
                             SpectraDiagnostics* diag = nullptr);

/// Variant reusing a precomputed transform.
SpectralData compute_spectra(const AuxV& v, int order, SpectraDiagnostics* diag = nullptr);

}  // namespace ddirac
