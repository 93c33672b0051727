#pragma once

#include <filesystem>
#include <string>

#include "ddirac/types.hpp"

namespace ddirac {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Two complex-valued samples on one grid, as stored in potential CSV
/// files (header x,q_re,q_im,p_re,p_im).  Used both for full potentials on
/// [a, pi] and for window files covering a subinterval.
struct SampledPair {
  SampledFunction f1, f2;
};

SampledPair read_potential_csv(const std::filesystem::path& file);
void write_potential_csv(const std::filesystem::path& file, const SampledFunction& q,
                         const SampledFunction& p);

/// Spectra CSV (header j,n,lambda_re,lambda_im), j = 1 rows then j = 2,
/// each block over a contiguous symmetric index range.
SpectralData read_spectra_csv(const std::filesystem::path& file);
void write_spectra_csv(const std::filesystem::path& file, const SpectralData& data);

/// Round-trip-safe decimal formatting (17 significant digits).
std::string format_double(double v);

/// Built-in test potentials on [a, pi]:
///   P0: q = p = 0
///   P1: q = sin t,            p = cos 2t
///   P2: q = sin t + 0.5 i t,  p = i cos t
PotentialPair make_test_potential(const std::string& name, DelayParameter a, int cells);
bool is_test_potential_name(const std::string& name);

}  // namespace ddirac
