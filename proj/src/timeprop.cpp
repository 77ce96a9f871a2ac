#include "ptwg/timeprop.hpp"

#include "ptwg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#if defined(__SSE2__)
#include <xmmintrin.h>
#endif

namespace ptwg {

namespace {

constexpr cplx I{0.0, 1.0};

std::string sci(double x)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

} // namespace

SpatialGrid SpatialGrid::make(double z_min, double z_max, std::size_t n_points, double dt)
{
  if (!(z_max > z_min))
    throw DomainError("grid requires z_min < z_max");
  if (n_points < 2)
    throw DomainError("grid requires at least two points");
  if (!(dt > 0.0))
    throw DomainError("time step must be positive");
  return {z_min, z_max, n_points, dt};
}

double bandwidth_ratio(const WavepacketSpec& spec, const MediumParams& params)
{
  const double m = effective_mass(params);
  const double velocity = constants::hbar * std::abs(spec.k_bar) / m;
  const double omega_spread = velocity * std::sqrt(2.0) / (2.0 * spec.sigma);
  return omega_spread / params.delta();
}

double norm(const WavepacketState& state, const SpatialGrid& grid)
{
  double sum = 0.0;
  for (const auto& v : state.psi)
    sum += std::norm(v);
  return sum * grid.dz();
}

WavepacketState initial_gaussian(const WavepacketSpec& spec, const SpatialGrid& grid,
                                 double region_length)
{
  if (!(spec.sigma > 0.0))
    throw DomainError("packet width must be positive");
  const double lo = spec.z0 - 6.0 * spec.sigma;
  const double hi = spec.z0 + 6.0 * spec.sigma;
  if (hi > -region_length && lo < region_length)
    throw PlacementError("packet overlaps the medium: keep z0 at least 6 sigma outside [-l, l]");
  if (lo < grid.z_min || hi > grid.z_max)
    throw PlacementError("packet extends beyond the grid");

  WavepacketState state;
  state.psi.resize(grid.n_points);
  const double inv4s2 = 1.0 / (4.0 * spec.sigma * spec.sigma);
  for (std::size_t i = 0; i < grid.n_points; ++i) {
    const double z = grid.z(i);
    const double u = z - spec.z0;
    state.psi[i] = std::exp(-u * u * inv4s2) * std::exp(I * (spec.k_bar * z));
  }
  const double scale = 1.0 / std::sqrt(norm(state, grid));
  for (auto& v : state.psi)
    v *= scale;

  double peak = 0.0;
  for (const auto& v : state.psi)
    peak = std::max(peak, std::abs(v));
  const std::size_t edge = std::min<std::size_t>(5, grid.n_points);
  for (std::size_t i = 0; i < edge; ++i) {
    if (std::abs(state.psi[i]) > 1e-12 * peak ||
        std::abs(state.psi[grid.n_points - 1 - i]) > 1e-12 * peak)
      throw PlacementError("packet is not negligible at the grid walls; enlarge the grid");
  }
  return state;
}

std::vector<cplx> sample_potential(const MediumParams& params, const SpatialGrid& grid,
                                   LayerOrder order)
{
  const double l = params.region_length();
  const double sign = order == LayerOrder::GainFirst ? 1.0 : -1.0;
  // Integral of xi from -infinity to x for the gain-first profile.
  auto primitive = [l](double x) {
    if (x <= -l || x >= l)
      return 0.0;
    return x <= 0.0 ? -(x + l) : x - l;
  };
  const cplx absorbing = effective_potential(RegionKind::Absorbing, params);
  const double dz = grid.dz();
  std::vector<cplx> v(grid.n_points);
  for (std::size_t i = 0; i < grid.n_points; ++i) {
    const double z = grid.z(i);
    const double mean_xi = sign * (primitive(z + 0.5 * dz) - primitive(z - 0.5 * dz)) / dz;
    v[i] = mean_xi * absorbing;
  }
  return v;
}

CrankNicolson::CrankNicolson(std::span<const cplx> potential, double mass, const SpatialGrid& grid)
    : dt_(grid.dt)
{
  if (potential.size() != grid.n_points)
    throw DomainError("potential must be sampled on the grid");
  if (grid.n_points < 3)
    throw DomainError("grid needs an interior point");
  double vmax = 0.0;
  for (const auto& v : potential)
    vmax = std::max(vmax, std::abs(v));
  if (!(grid.dt * vmax / constants::hbar < 0.1))
    throw DomainError("time step too large for the potential: need dt*|V|/hbar < 0.1");

  const double dz = grid.dz();
  const double kinetic = constants::hbar * constants::hbar / (2.0 * mass * dz * dz);
  const cplx tau = I * (grid.dt / (2.0 * constants::hbar));
  off_ = tau * (-kinetic);

  const std::size_t n = grid.n_points;
  rows_.assign(n, Row{0.0, 0.0, 0.0});
  for (std::size_t j = 0; j < n; ++j)
    rows_[j].explicit_diag = 1.0 - tau * (2.0 * kinetic + potential[j]);

  // Thomas factorisation of A = 1 + i dt H/(2 hbar) on the interior points.
  cplx prev_upper = 0.0;
  for (std::size_t j = 1; j + 1 < n; ++j) {
    const cplx pivot = 1.0 + tau * (2.0 * kinetic + potential[j]) - off_ * prev_upper;
    if (std::abs(pivot) < 1e-300)
      throw SingularSystemError("Crank-Nicolson system is singular");
    rows_[j].inv_pivot = 1.0 / pivot;
    rows_[j].upper = off_ * rows_[j].inv_pivot;
    prev_upper = rows_[j].upper;
  }
}

namespace {

// The far tails of a propagated packet decay into subnormal range, where x86
// arithmetic is roughly five times slower. Values that small carry no weight
// in any observable, so the sweeps run with flush-to-zero and restore the
// caller's mode afterwards.
class FlushSubnormals {
public:
#if defined(__SSE2__)
  FlushSubnormals() : saved_(_mm_getcsr()) { _mm_setcsr(saved_ | 0x8040u); }
  ~FlushSubnormals() { _mm_setcsr(saved_); }

private:
  unsigned saved_;
#endif
};

} // namespace

void CrankNicolson::step(WavepacketState& state) const
{
  auto& psi = state.psi;
  const std::size_t n = psi.size();
  if (n != rows_.size())
    throw DomainError("state does not match the propagator grid");
  const FlushSubnormals flush;

  // Forward sweep: build rhs = (1 - i dt H/(2 hbar)) psi and eliminate in one
  // pass, overwriting psi[j] once its old value is no longer needed. With a
  // constant off-diagonal the elimination factor off_/pivot_j is rows_[j].upper.
  cplx before = psi[0]; // old psi[j - 1]
  cplx carried = 0.0;   // eliminated rhs[j - 1]
  for (std::size_t j = 1; j + 1 < n; ++j) {
    const cplx old = psi[j];
    const cplx after = psi[j + 1];
    const Row& row = rows_[j];
    const cplx r = row.explicit_diag * old - off_ * (before + after);
    carried = r * row.inv_pivot - row.upper * carried;
    psi[j] = carried;
    before = old;
  }
  psi[n - 1] = 0.0;
  for (std::size_t j = n - 2; j >= 1; --j)
    psi[j] -= rows_[j].upper * psi[j + 1];
  psi[0] = 0.0;
  state.t += dt_;
}

WavepacketState step_crank_nicolson(const WavepacketState& state, std::span<const cplx> potential,
                                    double mass, const SpatialGrid& grid)
{
  const CrankNicolson propagator(potential, mass, grid);
  auto next = state;
  propagator.step(next);
  return next;
}

NormSample sample_norm(const WavepacketState& state, std::span<const cplx> potential,
                       const SpatialGrid& grid)
{
  double total = 0.0;
  double source = 0.0;
  for (std::size_t i = 0; i < state.psi.size(); ++i) {
    const double density = std::norm(state.psi[i]);
    total += density;
    source += potential[i].imag() * density;
  }
  const double dz = grid.dz();
  return {state.t, total * dz, 2.0 / constants::hbar * source * dz};
}

double norm_balance_residual(std::span<const NormSample> samples, double rate_scale)
{
  if (samples.size() < 3)
    throw DomainError("norm balance needs at least three samples");
  const double dt = samples[1].t - samples[0].t;
  for (std::size_t i = 1; i < samples.size(); ++i)
    if (std::abs(samples[i].t - samples[i - 1].t - dt) > 1e-6 * std::abs(dt))
      throw DomainError("norm balance needs uniformly spaced samples");
  if (!(rate_scale > 0.0))
    rate_scale = 1.0 / (samples.back().t - samples.front().t);
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < samples.size(); ++i) {
    const double rate = (samples[i + 1].norm - samples[i - 1].norm) / (2.0 * dt);
    worst = std::max(worst, std::abs(rate - samples[i].source) / (samples[i].norm * rate_scale));
  }
  return worst;
}

double gain_rate_scale(std::span<const cplx> potential)
{
  double peak = 0.0;
  for (const auto& v : potential)
    peak = std::max(peak, std::abs(v.imag()));
  return 2.0 * peak / constants::hbar;
}

double norm_balance_residual(std::span<const WavepacketState> trajectory,
                             std::span<const cplx> potential, const SpatialGrid& grid)
{
  std::vector<NormSample> samples;
  samples.reserve(trajectory.size());
  for (const auto& state : trajectory)
    samples.push_back(sample_norm(state, potential, grid));
  return norm_balance_residual(samples, gain_rate_scale(potential));
}

SpectralPrediction spectral_prediction(const MediumParams& params, const WavepacketSpec& spec,
                                       LayerOrder order)
{
  const double m = effective_mass(params);
  const double k_bar = std::abs(spec.k_bar);
  const bool from_left = spec.k_bar > 0.0;
  const double k_lo = std::max(k_bar - 4.0 / spec.sigma, 1e-6 * k_bar);
  const double k_hi = k_bar + 4.0 / spec.sigma;

  constexpr int intervals = 2000; // even, for Simpson
  const double h = (k_hi - k_lo) / intervals;
  double weight_sum = 0.0, t_sum = 0.0, r_sum = 0.0;
  for (int i = 0; i <= intervals; ++i) {
    const double k = k_lo + h * i;
    const double simpson = (i == 0 || i == intervals) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    const double u = k - k_bar;
    const double w = simpson * std::exp(-2.0 * spec.sigma * spec.sigma * u * u);
    const double delta_omega = constants::hbar * k * k / (2.0 * m);
    const auto amp = amplitudes(build_approx_stack(params, delta_omega, order));
    weight_sum += w;
    t_sum += w * std::norm(from_left ? amp.t_left : amp.t_right);
    r_sum += w * std::norm(from_left ? amp.r_left : amp.r_right);
  }
  return {t_sum / weight_sum, r_sum / weight_sum};
}

PacketResult scatter_packet(const MediumParams& params, const WavepacketSpec& spec,
                            const SpatialGrid& grid, double t_final, const PacketOptions& options)
{
  if (!(t_final > 0.0))
    throw DomainError("run time must be positive");
  if (spec.k_bar == 0.0)
    throw DomainError("packet needs a nonzero carrier wavenumber");

  const double l = params.region_length();
  const auto potential = sample_potential(params, grid, options.order);
  const CrankNicolson propagator(potential, effective_mass(params), grid);
  auto state = initial_gaussian(spec, grid, l);

  PacketResult result;
  result.bandwidth_ratio = bandwidth_ratio(spec, params);
  result.steps = static_cast<std::size_t>(std::ceil(t_final / grid.dt - 1e-9));

  auto snapshots = options.snapshot_times;
  std::sort(snapshots.begin(), snapshots.end());
  std::size_t next_snapshot = 0;
  auto emit_snapshots = [&] {
    while (next_snapshot < snapshots.size() && state.t >= snapshots[next_snapshot]) {
      if (options.on_snapshot)
        options.on_snapshot(state);
      ++next_snapshot;
    }
  };

  const std::size_t n = grid.n_points;
  const std::size_t edge = std::min<std::size_t>(5, n);
  auto check_walls = [&] {
    double wall = 0.0, peak = 0.0;
    for (std::size_t i = 0; i < edge; ++i)
      wall = std::max({wall, std::norm(state.psi[i]), std::norm(state.psi[n - 1 - i])});
    for (const auto& v : state.psi)
      peak = std::max(peak, std::norm(v));
    if (wall > options.wall_tolerance * options.wall_tolerance * peak)
      throw ContaminationError("field reached the grid walls at t = " + sci(state.t) +
                               " s; enlarge the grid or shorten the run");
  };

  std::vector<NormSample> samples;
  samples.reserve(result.steps + 1);
  samples.push_back(sample_norm(state, potential, grid));
  emit_snapshots();
  for (std::size_t s = 0; s < result.steps; ++s) {
    propagator.step(state);
    samples.push_back(sample_norm(state, potential, grid));
    emit_snapshots();
    if (!(samples.back().norm <= options.max_norm))
      throw ContaminationError("norm grew beyond " + sci(options.max_norm) +
                               " at t = " + sci(state.t) +
                               " s: the potential supports growing modes (broken PT phase)");
    // The wall scan is O(n); every 16th step keeps the overhead small while
    // still catching a packet long before it can cross back.
    if (s % 16 == 15 || s + 1 == result.steps)
      check_walls();
  }

  // Each node stands for the cell [z - dz/2, z + dz/2]; a cell straddling
  // an edge of the medium is shared in proportion to its overlap, so a node
  // sitting on z = +-l counts half on either side.
  const double dz = grid.dz();
  double left = 0.0, right = 0.0, inside = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double z = grid.z(i);
    const double density = std::norm(state.psi[i]);
    const double w_left = std::clamp((-l - (z - 0.5 * dz)) / dz, 0.0, 1.0);
    const double w_right = std::clamp((z + 0.5 * dz - l) / dz, 0.0, 1.0);
    left += w_left * density;
    right += w_right * density;
    inside += (1.0 - w_left - w_right) * density;
  }
  left *= dz;
  right *= dz;
  inside *= dz;
  const double total = left + right + inside;

  result.inside = inside / total;
  if (!(result.inside <= options.clear_tolerance))
    throw ContaminationError(
        "field has not left the medium by t_final (inside fraction " +
        sci(result.inside) +
        "); run longer, or the potential supports growing modes (broken PT phase)");

  const bool from_left = spec.k_bar > 0.0;
  result.transmitted = from_left ? right : left;
  result.reflected = from_left ? left : right;
  result.gained = total - 1.0;
  result.norm_residual = norm_balance_residual(samples, gain_rate_scale(potential));
  result.prediction = spectral_prediction(params, spec, options.order);
  return result;
}

PacketPlan plan_packet(const MediumParams& params, double sigma, double energy, Incidence from,
                       double clearance)
{
  if (!(sigma > 0.0))
    throw DomainError("packet width must be positive");
  if (!(clearance > 0.0))
    throw DomainError("clearance must be positive");
  if (!(energy > 0.0))
    throw DomainError("carrier energy must be positive");

  const double m = effective_mass(params);
  const double hbar = constants::hbar;
  const double l = params.region_length();
  const double k_bar = std::sqrt(2.0 * m * energy) / hbar;
  const double velocity = hbar * k_bar / m;
  const double spread_velocity = hbar / (2.0 * m * sigma);
  const double wall_margin = clearance + 7.5;
  if (velocity <= 1.05 * clearance * spread_velocity)
    throw DomainError("packet too broadband to clear the medium: increase sigma or the energy");

  auto width_at = [&](double t) { return std::hypot(sigma, spread_velocity * t); };
  const double z0 = -(l + 10.0 * sigma);
  auto cleared = [&](double t) { return z0 + velocity * t - l - clearance * width_at(t); };

  double t_hi = (2.0 * l + 10.0 * sigma) / velocity;
  while (cleared(t_hi) <= 0.0)
    t_hi *= 2.0;
  double t_lo = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (t_lo + t_hi);
    (cleared(mid) > 0.0 ? t_hi : t_lo) = mid;
  }
  const double t_final = 1.1 * t_hi;

  const double centre = z0 + velocity * t_final;
  const double half_width = 2.0 * l + centre + wall_margin * width_at(t_final);

  // Whole cells per region and per half grid, so the interfaces sit on grid
  // points at this resolution and at every halving of dz.
  const double cells_per_region = std::ceil(std::max(l * k_bar / 0.02, 60.0));
  const double dz = l / cells_per_region;
  const double half_cells = std::ceil(half_width / dz);
  const auto n = static_cast<std::size_t>(2.0 * half_cells) + 1;

  const double vmax = std::abs(effective_potential(RegionKind::Absorbing, params));
  double dt = 0.006 * hbar / energy;
  if (vmax > 0.0)
    dt = std::min(dt, 0.05 * hbar / vmax);

  PacketPlan plan;
  plan.spec = {from == Incidence::Left ? z0 : -z0, sigma, from == Incidence::Left ? k_bar : -k_bar};
  plan.grid = SpatialGrid::make(-half_cells * dz, half_cells * dz, n, dt);
  plan.t_final = t_final;
  return plan;
}

void write_snapshot(std::ostream& out, const WavepacketState& state, const SpatialGrid& grid)
{
  char buf[160];
  std::snprintf(buf, sizeof buf, "# t = %.17g\n", state.t);
  out << buf << "z,re_psi,im_psi,abs2\n";
  for (std::size_t i = 0; i < state.psi.size(); ++i) {
    const auto v = state.psi[i];
    std::snprintf(buf, sizeof buf, "%.15e,%.15e,%.15e,%.15e\n", grid.z(i), v.real(), v.imag(),
                  std::norm(v));
    out << buf;
  }
}

} // namespace ptwg
