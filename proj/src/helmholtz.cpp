#include "ptwg/helmholtz.hpp"

#include "ptwg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ptwg {

namespace {
constexpr cplx I{0.0, 1.0};
}

double LayerStack::total_thickness() const
{
  double sum = 0.0;
  for (const auto& layer : layers)
    sum += layer.thickness;
  return sum;
}

LayerStack LayerStack::reversed() const
{
  LayerStack out{k_outer, layers};
  std::reverse(out.layers.begin(), out.layers.end());
  return out;
}

void validate(const LayerStack& stack)
{
  if (!(stack.k_outer > 0.0) || !std::isfinite(stack.k_outer))
    throw DomainError("exterior wavenumber must be positive");
  for (std::size_t i = 0; i < stack.layers.size(); ++i) {
    const auto& layer = stack.layers[i];
    if (!(layer.thickness >= 0.0))
      throw DomainError("layer " + std::to_string(i) + " has negative thickness");
    if (!std::isfinite(layer.k2.real()) || !std::isfinite(layer.k2.imag()))
      throw DomainError("layer " + std::to_string(i) + " has a non-finite k2");
  }
}

double TransferMatrix::max_abs() const
{
  return std::max({std::abs(m11), std::abs(m12), std::abs(m21), std::abs(m22)});
}

TransferMatrix operator*(const TransferMatrix& a, const TransferMatrix& b)
{
  return {a.m11 * b.m11 + a.m12 * b.m21, a.m11 * b.m12 + a.m12 * b.m22,
          a.m21 * b.m11 + a.m22 * b.m21, a.m21 * b.m12 + a.m22 * b.m22};
}

cplx principal_sqrt(cplx z)
{
  if (z.imag() == 0.0 && z.real() < 0.0)
    return {0.0, std::sqrt(-z.real())};
  return std::sqrt(z);
}

TransferMatrix interface_matrix(cplx k_from, cplx k_to)
{
  if (k_to == cplx{})
    throw SingularInterfaceError("interface into a medium with zero wavenumber");
  const cplx ratio = k_from / k_to;
  const cplx same = 0.5 * (1.0 + ratio);
  const cplx cross = 0.5 * (1.0 - ratio);
  return {same, cross, cross, same};
}

TransferMatrix propagation_matrix(cplx k, double d)
{
  if (!(d >= 0.0))
    throw DomainError("propagation distance must be non-negative");
  return {std::exp(I * k * d), 0.0, 0.0, std::exp(-I * k * d)};
}

namespace {

// Layer in the plane-wave basis of the surrounding medium kb, from the
// second-order expansion of the (phi, phi') propagator
// [[cos kd, sin(kd)/k], [-k sin kd, cos kd]] for |k d| -> 0.
TransferMatrix thin_layer(cplx kb, cplx k2, double d)
{
  const cplx x = k2 * d * d;
  const cplx s11 = 1.0 - 0.5 * x;
  const cplx s12 = d;
  const cplx s21 = -k2 * d;
  const cplx s22 = s11;
  // W = [[1, 1], [i kb, -i kb]] maps (A+, A-) to (phi, phi').
  const cplx ikb = I * kb;
  const TransferMatrix w{1.0, 1.0, ikb, -ikb};
  const TransferMatrix w_inv{0.5, 0.5 / ikb, 0.5, -0.5 / ikb};
  return w_inv * (TransferMatrix{s11, s12, s21, s22} * w);
}

} // namespace

TransferResult total_transfer(const LayerStack& stack, std::span<const cplx> wavenumbers)
{
  validate(stack);
  if (wavenumbers.size() != stack.layers.size())
    throw DomainError("one wavenumber per layer required");

  TransferResult result;
  const cplx k_out = stack.k_outer;
  cplx basis = k_out;
  for (std::size_t i = 0; i < stack.layers.size(); ++i) {
    const auto& layer = stack.layers[i];
    const cplx k = wavenumbers[i];
    if (std::abs(k) * layer.thickness < small_phase_threshold) {
      result.matrix = thin_layer(basis, layer.k2, layer.thickness) * result.matrix;
      result.limit_path_layers.push_back(i);
      continue;
    }
    result.matrix = propagation_matrix(k, layer.thickness) * (interface_matrix(basis, k) * result.matrix);
    result.determinant *= basis / k;
    basis = k;
  }
  result.matrix = interface_matrix(basis, k_out) * result.matrix;
  result.determinant *= basis / k_out;
  return result;
}

TransferResult total_transfer(const LayerStack& stack)
{
  std::vector<cplx> ks;
  ks.reserve(stack.layers.size());
  for (const auto& layer : stack.layers)
    ks.push_back(principal_sqrt(layer.k2));
  return total_transfer(stack, ks);
}

ScatteringAmplitudes amplitudes(const LayerStack& stack)
{
  const auto transfer = total_transfer(stack);
  const auto& m = transfer.matrix;
  if (std::abs(m.m22) <= 1e-13 * m.max_abs() || !std::isfinite(std::abs(m.m22)))
    throw ResonancePoleError("no scattering solution: m22 vanishes (spectral singularity)");
  return {transfer.determinant / m.m22, -m.m21 / m.m22, 1.0 / m.m22, m.m12 / m.m22};
}

FluxSums flux_sums(const ScatteringAmplitudes& amp)
{
  return {std::norm(amp.t_left) + std::norm(amp.r_left),
          std::norm(amp.t_right) + std::norm(amp.r_right)};
}

StackProfile stack_profile(const LayerStack& stack, double z_left)
{
  StackProfile profile;
  profile.z_min = z_left;
  std::vector<double> edges{z_left};
  for (const auto& layer : stack.layers)
    edges.push_back(edges.back() + layer.thickness);
  profile.z_max = edges.back();
  profile.breakpoints.assign(edges.begin() + 1, edges.end() - 1);

  const double outer2 = stack.k_outer * stack.k_outer;
  profile.k2 = [edges, layers = stack.layers, outer2](double z) -> cplx {
    if (z < edges.front() || z >= edges.back())
      return outer2;
    const auto it = std::upper_bound(edges.begin(), edges.end(), z);
    return layers[static_cast<std::size_t>(it - edges.begin()) - 1].k2;
  };
  return profile;
}

} // namespace ptwg
