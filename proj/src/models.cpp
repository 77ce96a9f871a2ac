#include "ptwg/models.hpp"

#include "ptwg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace ptwg {

const char* to_string(ModelKind kind)
{
  return kind == ModelKind::Exact ? "exact" : "approx";
}

namespace {

LayerStack two_region_stack(double k_outer, cplx k2_gain, cplx k2_abs, double length,
                            LayerOrder order)
{
  LayerStack stack;
  stack.k_outer = k_outer;
  if (order == LayerOrder::GainFirst)
    stack.layers = {{k2_gain, length}, {k2_abs, length}};
  else
    stack.layers = {{k2_abs, length}, {k2_gain, length}};
  return stack;
}

} // namespace

LayerStack build_exact_stack(const MediumParams& params, double omega, LayerOrder order)
{
  const double wc = params.omega_c();
  if (!(omega > wc))
    throw BelowCutoffError("frequency must exceed the cutoff");
  const double k_outer = std::sqrt((omega - wc) * (omega + wc)) / constants::c;
  return two_region_stack(k_outer, k_squared_exact(RegionKind::Gain, omega, params),
                          k_squared_exact(RegionKind::Absorbing, omega, params),
                          params.region_length(), order);
}

LayerStack build_approx_stack(const MediumParams& params, double delta_omega, LayerOrder order)
{
  if (!(delta_omega > 0.0))
    throw BelowCutoffError("frequency offset above cutoff must be positive");
  const double k_outer = std::sqrt(2.0 * params.omega_c() * delta_omega) / constants::c;
  return two_region_stack(k_outer, k_squared_approx(RegionKind::Gain, delta_omega, params),
                          k_squared_approx(RegionKind::Absorbing, delta_omega, params),
                          params.region_length(), order);
}

double pt_defect(ModelKind model, const MediumParams& params, double omega)
{
  const double wc = params.omega_c();
  if (!(omega >= wc))
    throw BelowCutoffError("frequency below the cutoff");
  // Mirrored pairs are (vacuum, vacuum) and (gain, absorbing); only the
  // latter can differ from its conjugate partner. The scale is the largest
  // |k2| of the profile at resonance, where the two models coincide, so the
  // measure is comparable across frequencies.
  cplx gain, absorbing;
  if (model == ModelKind::Exact) {
    gain = k_squared_exact(RegionKind::Gain, omega, params);
    absorbing = k_squared_exact(RegionKind::Absorbing, omega, params);
  } else {
    gain = k_squared_approx(RegionKind::Gain, omega - wc, params);
    absorbing = k_squared_approx(RegionKind::Absorbing, omega - wc, params);
  }
  const double scale = std::abs(k_squared_approx(RegionKind::Absorbing, 0.0, params));
  const double defect = std::abs(gain - std::conj(absorbing));
  if (scale == 0.0)
    return defect;
  return defect / scale;
}

ModelPoint evaluate(ModelKind model, const MediumParams& params, double omega, LayerOrder order)
{
  const auto stack = model == ModelKind::Exact
                         ? build_exact_stack(params, omega, order)
                         : build_approx_stack(params, omega - params.omega_c(), order);
  ModelPoint point;
  try {
    point.amp = amplitudes(stack);
  } catch (const ResonancePoleError&) {
    point.singular = true;
    return point;
  }
  point.sums = flux_sums(point.amp);
  point.log10_left = std::log10(point.sums.left);
  point.log10_right = std::log10(point.sums.right);
  return point;
}

std::vector<double> sweep_grid(double start, double stop, int n)
{
  if (!(start > 1.0) || !(stop > start) || n < 2)
    throw DomainError("sweep requires 1 < start < stop and n >= 2");
  std::vector<double> grid(static_cast<std::size_t>(n));
  const double step = (stop - start) / (n - 1);
  for (int i = 0; i < n; ++i)
    grid[static_cast<std::size_t>(i)] = start + step * i;
  grid.back() = stop;
  return grid;
}

std::vector<SweepRow> sweep(const MediumParams& params, double start, double stop, int n,
                            ModelSelection models, unsigned threads, LayerOrder order)
{
  const auto grid = sweep_grid(start, stop, n);
  std::vector<SweepRow> rows(grid.size());

  auto fill = [&](std::size_t i) {
    auto& row = rows[i];
    row.omega_over_omegac = grid[i];
    const double omega = grid[i] * params.omega_c();
    if (models.exact)
      row.exact = evaluate(ModelKind::Exact, params, omega, order);
    if (models.approx)
      row.approx = evaluate(ModelKind::Approximate, params, omega, order);
  };

  if (threads == 0)
    threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(rows.size()));
  if (threads <= 1) {
    for (std::size_t i = 0; i < rows.size(); ++i)
      fill(i);
    return rows;
  }
  // Rows are strided across workers; each row is written by exactly one.
  std::vector<std::jthread> workers;
  for (unsigned w = 0; w < threads; ++w)
    workers.emplace_back([&, w] {
      for (std::size_t i = w; i < rows.size(); i += threads)
        fill(i);
    });
  workers.clear();
  return rows;
}

} // namespace ptwg
