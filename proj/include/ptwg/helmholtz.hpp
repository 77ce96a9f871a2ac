#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace ptwg {

using cplx = std::complex<double>;

/// Uniform slab of the 1D Helmholtz problem phi'' + k2 phi = 0.
struct Layer {
  cplx k2;          // 1/m^2
  double thickness; // m
};

/// Layers ordered left to right between two identical semi-infinite media
/// with real wavenumber k_outer.
struct LayerStack {
  double k_outer = 0.0;
  std::vector<Layer> layers;

  double total_thickness() const;
  LayerStack reversed() const;
};

/// Throws DomainError unless k_outer > 0 and every thickness >= 0.
void validate(const LayerStack& stack);

/// 2x2 map between plane-wave coefficient pairs (A+, A-) of
/// phi = A+ e^{ik(z-z0)} + A- e^{-ik(z-z0)}.
struct TransferMatrix {
  cplx m11{1.0}, m12{0.0}, m21{0.0}, m22{1.0};

  static TransferMatrix identity() { return {}; }
  cplx det() const { return m11 * m22 - m12 * m21; }
  double max_abs() const;
};

TransferMatrix operator*(const TransferMatrix& a, const TransferMatrix& b);

struct ScatteringAmplitudes {
  cplx t_left{1.0}, r_left{0.0}, t_right{1.0}, r_right{0.0};
};

struct FluxSums {
  double left = 1.0;
  double right = 1.0;
};

/// Principal square root with the cut resolved towards +i: sqrt(-x) = +i sqrt(x)
/// whether the zero imaginary part carries a sign or not.
cplx principal_sqrt(cplx z);

/// Continuity of phi and phi' across an interface from a medium with
/// wavenumber k_from into one with k_to. det = k_from / k_to.
TransferMatrix interface_matrix(cplx k_from, cplx k_to);

/// Free propagation over thickness d: diag(e^{ikd}, e^{-ikd}).
TransferMatrix propagation_matrix(cplx k, double d);

/// Layers thinner than this in units of 1/|k| are propagated with the
/// {1, z} fundamental pair instead of plane waves.
inline constexpr double small_phase_threshold = 1e-8;

struct TransferResult {
  TransferMatrix matrix;
  /// det(matrix) accumulated as the product of the factors' determinants.
  /// For equal exterior media this telescopes to 1; forming m11*m22-m12*m21
  /// directly loses all precision once the entries reach ~1e8.
  cplx determinant{1.0};
  /// Indices of layers that went through the k -> 0 limit path.
  std::vector<std::size_t> limit_path_layers;
};

/// Product of interface and propagation matrices from the left exterior to
/// the right exterior. Each layer's coefficients are referenced to its own
/// left edge; the left exterior to the first interface and the right
/// exterior to the last one.
TransferResult total_transfer(const LayerStack& stack);

/// As total_transfer() with caller-chosen layer wavenumbers; each entry must
/// square to the layer's k2. Either root gives the same result.
TransferResult total_transfer(const LayerStack& stack, std::span<const cplx> wavenumbers);

/// Scattering amplitudes of the stack. Left incidence:
/// e^{ik(z-zL)} + r_left e^{-ik(z-zL)} on the left, t_left e^{ik(z-zR)} on
/// the right; right incidence is the mirror image. Throws ResonancePoleError
/// when m22 vanishes.
ScatteringAmplitudes amplitudes(const LayerStack& stack);

FluxSums flux_sums(const ScatteringAmplitudes& amp);

// ---------------------------------------------------------------------------
// Independent oracle: direct integration of phi'' = -k2(z) phi.

using WavenumberProfile = std::function<cplx(double)>;

struct OdeOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  /// Initial step as a fraction of the integration span.
  double initial_step_fraction = 1e-3;
  double min_step_fraction = 1e-15;
  std::size_t max_steps = 5'000'000;
};

/// Amplitudes of the profile k2_of_z on [z_min, z_max] by adaptive
/// Dormand-Prince 5(4) integration, seeded with the outgoing wave on the
/// transmitted side. Amplitudes are referenced to z_min (left exterior) and
/// z_max (right exterior), matching amplitudes() when the domain is the
/// stack extent. `breakpoints` lists interior discontinuities of k2; the
/// integrator restarts there instead of stepping across them.
ScatteringAmplitudes ode_amplitudes(const WavenumberProfile& k2_of_z, double z_min, double z_max,
                                    double k_outer, std::span<const double> breakpoints = {},
                                    const OdeOptions& options = {});

/// Piecewise-constant k2(z) of a stack whose left edge sits at z_left,
/// together with its interface positions. Convenience for the oracle.
struct StackProfile {
  WavenumberProfile k2;
  std::vector<double> breakpoints;
  double z_min = 0.0;
  double z_max = 0.0;
};

StackProfile stack_profile(const LayerStack& stack, double z_left = 0.0);

} // namespace ptwg
