#pragma once

#include "ptwg/helmholtz.hpp"
#include "ptwg/medium.hpp"

#include <optional>
#include <vector>

namespace ptwg {

/// Exact: dispersive Maxwell longitudinal equation. Approximate: stationary
/// effective Schroedinger equation with the PT-symmetric potential.
enum class ModelKind { Exact, Approximate };

const char* to_string(ModelKind kind);

/// Which region the wave coming from the left meets first. GainFirst is the
/// physical layout; AbsorbingFirst is its mirror image.
enum class LayerOrder { GainFirst, AbsorbingFirst };

/// Throws BelowCutoffError for omega <= omega_c.
LayerStack build_exact_stack(const MediumParams& params, double omega,
                             LayerOrder order = LayerOrder::GainFirst);

/// Stack of the effective equation at energy hbar*delta_omega above cutoff.
/// Throws BelowCutoffError for delta_omega <= 0.
LayerStack build_approx_stack(const MediumParams& params, double delta_omega,
                              LayerOrder order = LayerOrder::GainFirst);

/// Largest |k2(-z) - conj(k2(z))| over mirrored positions, divided by the
/// largest |k2| of the profile at resonance (omega = omega_c), i.e. by
/// wc wp^2 / (2 c^2 delta). `omega` is the absolute frequency for both
/// models.
double pt_defect(ModelKind model, const MediumParams& params, double omega);

/// One model evaluated at one frequency. `singular` marks a resonance pole;
/// the numeric fields are then meaningless.
struct ModelPoint {
  bool singular = false;
  ScatteringAmplitudes amp;
  FluxSums sums;
  double log10_left = 0.0;
  double log10_right = 0.0;
};

struct SweepRow {
  double omega_over_omegac = 0.0;
  std::optional<ModelPoint> exact;
  std::optional<ModelPoint> approx;
};

struct ModelSelection {
  bool exact = true;
  bool approx = true;
};

ModelPoint evaluate(ModelKind model, const MediumParams& params, double omega,
                    LayerOrder order = LayerOrder::GainFirst);

/// n points of omega/omega_c spaced uniformly over [start, stop], endpoints
/// included, in ascending order. `threads` = 0 uses the hardware
/// concurrency; output does not depend on it.
std::vector<SweepRow> sweep(const MediumParams& params, double start, double stop, int n,
                            ModelSelection models = {}, unsigned threads = 0,
                            LayerOrder order = LayerOrder::GainFirst);

/// Abscissae used by sweep().
std::vector<double> sweep_grid(double start, double stop, int n);

} // namespace ptwg
