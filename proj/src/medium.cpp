#include "ptwg/medium.hpp"

#include "ptwg/errors.hpp"

#include <cmath>

namespace ptwg {

MediumParams::MediumParams(double omega0, double omega_p, double delta, double slab_width,
                           double region_length)
    : omega0_(omega0), omega_p_(omega_p), delta_(delta), slab_width_(slab_width),
      region_length_(region_length), omega_c_(cutoff_frequency(slab_width))
{
}

MediumParams MediumParams::make_unchecked(double omega0, double omega_p, double delta,
                                          double slab_width, double region_length)
{
  if (!(omega0 > 0.0))
    throw DomainError("omega0 must be positive");
  if (!(omega_p >= 0.0))
    throw DomainError("omega_p must be non-negative");
  if (!(delta > 0.0))
    throw DomainError("delta must be positive");
  if (!(slab_width > 0.0))
    throw DomainError("slab width must be positive");
  if (!(region_length > 0.0))
    throw DomainError("region length must be positive");
  return MediumParams(omega0, omega_p, delta, slab_width, region_length);
}

MediumParams MediumParams::make(double omega0, double omega_p, double delta, double slab_width,
                                double region_length)
{
  auto params = make_unchecked(omega0, omega_p, delta, slab_width, region_length);
  if (std::abs(params.omega_c_ - omega0) > 1e-9 * omega0)
    throw DomainError("cutoff frequency c*pi/slab_width must coincide with omega0");
  return params;
}

MediumParams MediumParams::from_config(const Config& config)
{
  validate(config);
  const double omega0 = ev_to_angular(config.hbar_omega0_ev);
  const double tuned_width = constants::c * constants::pi / omega0;
  const double configured = config.slab_width_um * micrometre;
  if (std::abs(configured - tuned_width) > 5e-3 * tuned_width)
    throw ConfigValidationError("slab_width_um",
                                "cutoff must match the resonance: expected about " +
                                    std::to_string(tuned_width / micrometre) + " um");
  return make(omega0, ev_to_angular(config.hbar_omegap_ev), ev_to_angular(config.hbar_delta_ev),
              tuned_width, config.region_length_um * micrometre);
}

double MediumParams::ratio_over_delta() const
{
  return omega_p_ * omega_p_ / (delta_ * delta_);
}

double MediumParams::ratio_over_cutoff() const
{
  return omega_p_ * omega_p_ / (delta_ * omega_c_);
}

double MediumParams::regime_ratio() const
{
  return std::max(ratio_over_delta(), ratio_over_cutoff());
}

MediumParams MediumParams::with_plasma_frequency(double omega_p) const
{
  if (!(omega_p >= 0.0))
    throw DomainError("omega_p must be non-negative");
  auto copy = *this;
  copy.omega_p_ = omega_p;
  return copy;
}

MediumParams MediumParams::with_region_length(double region_length) const
{
  if (!(region_length > 0.0))
    throw DomainError("region length must be positive");
  auto copy = *this;
  copy.region_length_ = region_length;
  return copy;
}

RegionKind region_at(double z, const MediumParams& params)
{
  const double l = params.region_length();
  if (z >= -l && z < 0.0)
    return RegionKind::Gain;
  if (z >= 0.0 && z < l)
    return RegionKind::Absorbing;
  return RegionKind::Vacuum;
}

int xi_profile(double z, const MediumParams& params)
{
  return xi(region_at(z, params));
}

cplx permittivity(RegionKind kind, double omega, const MediumParams& params)
{
  if (!(omega > 0.0))
    throw DomainError("frequency must be positive");
  const double w0 = params.omega0();
  const double wp = params.omega_p();
  const cplx denom(omega * omega - w0 * w0, 2.0 * params.delta() * omega);
  return 1.0 - static_cast<double>(xi(kind)) * wp * wp / denom;
}

cplx k_squared_exact(RegionKind kind, double omega, const MediumParams& params)
{
  const double wc = params.omega_c();
  const double c2 = constants::c * constants::c;
  // Vacuum is written out so that omega == omega_c gives an exact zero.
  if (kind == RegionKind::Vacuum) {
    if (!(omega > 0.0))
      throw DomainError("frequency must be positive");
    return cplx((omega - wc) * (omega + wc) / c2, 0.0);
  }
  const cplx eps = permittivity(kind, omega, params);
  return (omega * omega * eps - wc * wc) / c2;
}

cplx k_squared_approx(RegionKind kind, double delta_omega, const MediumParams& params)
{
  const double wc = params.omega_c();
  const double wp = params.omega_p();
  const double c2 = constants::c * constants::c;
  return {2.0 * wc * delta_omega / c2, xi(kind) * wc * wp * wp / (2.0 * c2 * params.delta())};
}

cplx effective_potential(RegionKind kind, const MediumParams& params)
{
  const double wp = params.omega_p();
  return {0.0, -xi(kind) * wp * wp * constants::hbar / (4.0 * params.delta())};
}

double effective_mass(const MediumParams& params)
{
  return constants::hbar * params.omega_c() / (constants::c * constants::c);
}

double pt_defect_exact(double omega, const MediumParams& params)
{
  return std::abs(k_squared_exact(RegionKind::Gain, omega, params) -
                  std::conj(k_squared_exact(RegionKind::Absorbing, omega, params)));
}

} // namespace ptwg
