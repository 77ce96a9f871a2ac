#pragma once

#include "ptwg/quantities.hpp"

#include <complex>

namespace ptwg {

using cplx = std::complex<double>;

/// Region of the guide along z. The gain region sits on -l < z < 0, the
/// absorbing region on 0 < z < l, vacuum elsewhere.
enum class RegionKind { Gain, Absorbing, Vacuum };

/// Inversion sign of a region: -1 gain, +1 absorbing, 0 vacuum.
constexpr int xi(RegionKind kind)
{
  switch (kind) {
  case RegionKind::Gain: return -1;
  case RegionKind::Absorbing: return 1;
  case RegionKind::Vacuum: return 0;
  }
  return 0;
}

/// Physical configuration of the slab guide, in SI units.
///
/// The checked factory requires the cutoff c*pi/slab_width to coincide with
/// the Lorentz resonance omega0; the near-cutoff reduction depends on it.
class MediumParams {
public:
  static MediumParams make(double omega0, double omega_p, double delta,
                           double slab_width, double region_length);

  /// Same as make() without the cutoff/resonance coupling check.
  static MediumParams make_unchecked(double omega0, double omega_p, double delta,
                                     double slab_width, double region_length);

  /// Builds tuned parameters from a config. The slab width is set to
  /// c*pi/omega0 exactly; the configured width must agree with it to 0.5%
  /// (the rounding of a width quoted to three digits).
  static MediumParams from_config(const Config& config);

  double omega0() const { return omega0_; }
  double omega_p() const { return omega_p_; }
  double delta() const { return delta_; }
  double slab_width() const { return slab_width_; }
  double region_length() const { return region_length_; }
  double omega_c() const { return omega_c_; }

  /// omega_p^2 / delta^2 and omega_p^2 / (delta * omega_c).
  double ratio_over_delta() const;
  double ratio_over_cutoff() const;
  double regime_ratio() const;
  /// True when regime_ratio() exceeds 0.1, i.e. the weak-coupling
  /// assumption behind the effective equation is doubtful.
  bool regime_warning() const { return regime_ratio() > regime_warning_level; }

  static constexpr double regime_warning_level = 0.1;

  /// Copies with one field replaced; used for switching the medium off or
  /// resizing the active regions.
  MediumParams with_plasma_frequency(double omega_p) const;
  MediumParams with_region_length(double region_length) const;

private:
  MediumParams(double omega0, double omega_p, double delta, double slab_width,
               double region_length);

  double omega0_;
  double omega_p_;
  double delta_;
  double slab_width_;
  double region_length_;
  double omega_c_;
};

/// xi at position z. Boundary points take the value of the region to their
/// right.
int xi_profile(double z, const MediumParams& params);
RegionKind region_at(double z, const MediumParams& params);

/// Lorentz permittivity 1 - xi*wp^2/(w^2 - w0^2 + 2i*delta*w).
cplx permittivity(RegionKind kind, double omega, const MediumParams& params);

/// Longitudinal wavenumber squared of the guided mode,
/// (w^2 eps - wc^2)/c^2, in 1/m^2.
cplx k_squared_exact(RegionKind kind, double omega, const MediumParams& params);

/// First-order near-cutoff form 2 wc dw/c^2 + i xi wc wp^2/(2 c^2 delta).
cplx k_squared_approx(RegionKind kind, double delta_omega, const MediumParams& params);

/// Effective Schroedinger potential -i xi hbar wp^2/(4 delta), in joules.
cplx effective_potential(RegionKind kind, const MediumParams& params);

/// Auxiliary mass hbar*wc/c^2, in kg.
double effective_mass(const MediumParams& params);

/// |k2(Gain) - conj(k2(Absorbing))| of the exact profile at omega.
double pt_defect_exact(double omega, const MediumParams& params);

} // namespace ptwg
