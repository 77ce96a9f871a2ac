// Adaptive Dormand-Prince 5(4) integration of phi'' = -k2(z) phi, used as an
// independent check on the transfer-matrix amplitudes.

#include "ptwg/errors.hpp"
#include "ptwg/helmholtz.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace ptwg {

namespace {

constexpr cplx I{0.0, 1.0};

struct State {
  cplx phi;
  cplx dphi;
};

State operator+(State a, State b) { return {a.phi + b.phi, a.dphi + b.dphi}; }
State operator*(double s, State a) { return {s * a.phi, s * a.dphi}; }

// Butcher tableau of Dormand & Prince (1980).
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// b - b* (fifth minus fourth order weights)
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

class Segment {
public:
  Segment(const WavenumberProfile& k2, double lo, double hi) : k2_(k2), lo_(lo), hi_(hi)
  {
    nudge_ = (hi - lo) * 1e-9;
  }

  // k2 is sampled strictly inside the segment so that interface values never
  // leak across a breakpoint.
  State rhs(double z, const State& y) const
  {
    const double zc = std::clamp(z, lo_ + nudge_, hi_ - nudge_);
    return {y.dphi, -k2_(zc) * y.phi};
  }

private:
  const WavenumberProfile& k2_;
  double lo_, hi_, nudge_;
};

double error_norm(const State& err, const State& y0, const State& y1, const OdeOptions& opt)
{
  auto scaled = [&](cplx e, cplx a, cplx b) {
    return std::abs(e) / (opt.abs_tol + opt.rel_tol * std::max(std::abs(a), std::abs(b)));
  };
  return std::max(scaled(err.phi, y0.phi, y1.phi), scaled(err.dphi, y0.dphi, y1.dphi));
}

// Integrates from `from` to `to` (either direction) on one smooth segment.
State integrate_segment(const WavenumberProfile& k2, double from, double to, State y,
                        double& h_hint, double span, const OdeOptions& opt)
{
  if (from == to)
    return y;
  const Segment seg(k2, std::min(from, to), std::max(from, to));
  const double dir = to > from ? 1.0 : -1.0;
  const double min_step = opt.min_step_fraction * span;
  double z = from;
  double h = std::min(h_hint, std::abs(to - from));
  std::size_t steps = 0;

  State k1 = seg.rhs(z, y);
  while (dir * (to - z) > 0.0) {
    if (++steps > opt.max_steps)
      throw StiffnessError(z, "step budget exhausted");
    bool last = false;
    if (h >= std::abs(to - z)) {
      h = std::abs(to - z);
      last = true;
    }
    const double s = dir * h;
    const State k2s = seg.rhs(z + c2 * s, y + (s * a21) * k1);
    const State k3 = seg.rhs(z + c3 * s, y + (s * a31) * k1 + (s * a32) * k2s);
    const State k4 = seg.rhs(z + c4 * s, y + (s * a41) * k1 + (s * a42) * k2s + (s * a43) * k3);
    const State k5 = seg.rhs(z + c5 * s, y + (s * a51) * k1 + (s * a52) * k2s + (s * a53) * k3 +
                                             (s * a54) * k4);
    const State k6 = seg.rhs(z + s, y + (s * a61) * k1 + (s * a62) * k2s + (s * a63) * k3 +
                                        (s * a64) * k4 + (s * a65) * k5);
    const State y1 = y + (s * b1) * k1 + (s * b3) * k3 + (s * b4) * k4 + (s * b5) * k5 +
                     (s * b6) * k6;
    const double z1 = last ? to : z + s;
    const State k7 = seg.rhs(z1, y1);
    const State err = (s * e1) * k1 + (s * e3) * k3 + (s * e4) * k4 + (s * e5) * k5 +
                      (s * e6) * k6 + (s * e7) * k7;

    const double en = error_norm(err, y, y1, opt);
    if (en <= 1.0) {
      z = z1;
      y = y1;
      k1 = k7;
      const double grow = en == 0.0 ? 5.0 : std::min(5.0, 0.9 * std::pow(en, -0.2));
      if (!last)
        h_hint = h * grow;
      h *= grow;
    } else {
      h *= std::max(0.2, 0.9 * std::pow(en, -0.2));
      if (h < min_step)
        throw StiffnessError(z, "step size underflow");
    }
  }
  return y;
}

// Carries a state across [from, to] restarting at every breakpoint on the way.
State integrate(const WavenumberProfile& k2, double from, double to, State y,
                std::vector<double> stops, const OdeOptions& opt)
{
  const double span = std::abs(to - from);
  double h = opt.initial_step_fraction * span;
  if (to < from)
    std::reverse(stops.begin(), stops.end());
  double z = from;
  for (double stop : stops) {
    y = integrate_segment(k2, z, stop, y, h, span, opt);
    z = stop;
  }
  return integrate_segment(k2, z, to, y, h, span, opt);
}

} // namespace

ScatteringAmplitudes ode_amplitudes(const WavenumberProfile& k2_of_z, double z_min, double z_max,
                                    double k_outer, std::span<const double> breakpoints,
                                    const OdeOptions& options)
{
  if (!(z_max > z_min))
    throw DomainError("integration domain must have positive length");
  if (!(k_outer > 0.0))
    throw DomainError("exterior wavenumber must be positive");

  std::vector<double> stops;
  for (double b : breakpoints)
    if (b > z_min && b < z_max)
      stops.push_back(b);
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end()), stops.end());

  const cplx ik = I * k_outer;
  ScatteringAmplitudes amp;

  // Left incidence: outgoing e^{ik(z - z_max)} on the right, carried leftwards.
  {
    const State y = integrate(k2_of_z, z_max, z_min, {1.0, ik}, stops, options);
    const cplx fwd = 0.5 * (y.phi + y.dphi / ik);
    const cplx bwd = 0.5 * (y.phi - y.dphi / ik);
    amp.t_left = 1.0 / fwd;
    amp.r_left = bwd / fwd;
  }
  // Right incidence: outgoing e^{-ik(z - z_min)} on the left, carried rightwards.
  {
    const State y = integrate(k2_of_z, z_min, z_max, {1.0, -ik}, stops, options);
    const cplx fwd = 0.5 * (y.phi + y.dphi / ik);
    const cplx bwd = 0.5 * (y.phi - y.dphi / ik);
    amp.t_right = 1.0 / bwd;
    amp.r_right = fwd / bwd;
  }
  return amp;
}

} // namespace ptwg
