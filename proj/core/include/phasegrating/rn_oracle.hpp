#pragma once

#include <vector>

#include "phasegrating/model.hpp"
#include "phasegrating/spectrum.hpp"

namespace phasegrating {

// Amplitudes a_n, |n| <= truncation, of psi = sum a_n exp(2inkx) in the frame moving with the
// incident transverse velocity. Amplitudes are referred back to t = 0 through the free
// recoil evolution, so they equal far-field amplitudes with z measured from the beam axis.
class ModeVector {
 public:
  ModeVector(int truncation, double time, std::vector<complex> amplitudes, double max_norm_error);

  int truncation() const noexcept { return truncation_; }
  double time() const noexcept { return time_; }
  const std::vector<complex>& amplitudes() const noexcept { return amplitudes_; }
  complex amplitude(int n) const;  // zero outside the basis
  double population(int n) const { return std::norm(amplitude(n)); }
  double norm() const;
  // Largest |sum |a_n|^2 - 1| seen over all accepted steps.
  double max_norm_error() const noexcept { return max_norm_error_; }

 private:
  int truncation_;
  double time_;
  std::vector<complex> amplitudes_;
  double max_norm_error_;
};

struct ModeOptions {
  double tol = 1e-12;
  double leakage_limit = 1e-10;
};

// Integrates the coupled-mode equations of the standing wave over [-6 tau, 6 tau]:
//   i hbar a_n' = (A g/2)(2 a_n + e^{i phi} a_{n-1} + e^{-i phi} a_{n+1}) + 4 n^2 E_R a_n,
// A = eps V1/sqrt(2 pi), g = exp(-2t^2/tau^2), phi = 2k (p_ix/M) t. The recoil term is
// dropped when include_kinetic is false. Throws TruncationError when the outermost orders
// collect more than leakage_limit.
ModeVector evolve_modes(const GaussianGrating& grating, const BeamParameters& beam,
                        bool include_kinetic, int truncation, const ModeOptions& options = {});

// ceil(u) + 20
int default_truncation(double u);

struct PhaseComparison {
  std::vector<int> orders;
  std::vector<double> difference;  // arg(a_kin) - arg(a_nokin), wrapped to (-pi, pi]
  std::vector<double> relative;    // difference with the n = 0 value removed
  std::vector<bool> reliable;      // both populations >= 1e-10
  double common_offset = 0.0;      // arg sum conj(a_nokin) a_kin: population-weighted global phase
};

PhaseComparison phase_comparison(const ModeVector& with_kinetic, const ModeVector& without_kinetic);

DiffractionSpectrum to_spectrum(const ModeVector& modes, const BeamParameters& beam, double G);

}  // namespace phasegrating
