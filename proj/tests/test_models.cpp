#include "ptwg/errors.hpp"
#include "ptwg/models.hpp"

#include <doctest.h>

#include <cmath>
#include <cstring>

using namespace ptwg;

namespace {

const MediumParams reference = MediumParams::from_config(Config{});

double pt_residual(const ScatteringAmplitudes& a)
{
  const cplx u = std::norm(a.t_left) + std::conj(a.r_left) * a.r_right - 1.0;
  return std::max({std::abs(u.real()), std::abs(u.imag()),
                   std::abs((std::conj(a.t_left) * a.r_left).real()),
                   std::abs((std::conj(a.t_left) * a.r_right).real())});
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

bool same_point(const std::optional<ModelPoint>& a, const std::optional<ModelPoint>& b)
{
  if (a.has_value() != b.has_value())
    return false;
  if (!a)
    return true;
  auto same_c = [](cplx x, cplx y) { return same_bits(x.real(), y.real()) && same_bits(x.imag(), y.imag()); };
  return a->singular == b->singular && same_c(a->amp.t_left, b->amp.t_left) &&
         same_c(a->amp.r_left, b->amp.r_left) && same_c(a->amp.t_right, b->amp.t_right) &&
         same_c(a->amp.r_right, b->amp.r_right) && same_bits(a->log10_left, b->log10_left) &&
         same_bits(a->log10_right, b->log10_right);
}

} // namespace

TEST_CASE("exact model stack")
{
  const double wc = reference.omega_c();
  const auto s = build_exact_stack(reference, 1.01 * wc);
  // sqrt(1.01^2 - 1) wc / c = 3.5923742e6 1/m.
  CHECK(s.k_outer == doctest::Approx(3.5923742e6).epsilon(1e-6));
  REQUIRE(s.layers.size() == 2);
  CHECK(s.layers[0].k2 == k_squared_exact(RegionKind::Gain, 1.01 * wc, reference));
  CHECK(s.layers[1].k2 == k_squared_exact(RegionKind::Absorbing, 1.01 * wc, reference));
  CHECK(s.layers[0].thickness == reference.region_length());

  const auto mirrored = build_exact_stack(reference, 1.01 * wc, LayerOrder::AbsorbingFirst);
  CHECK(mirrored.layers[0].k2 == s.layers[1].k2);

  CHECK_THROWS_AS(build_exact_stack(reference, wc), BelowCutoffError);
  CHECK_THROWS_AS(build_exact_stack(reference, 0.9 * wc), BelowCutoffError);
}

TEST_CASE("approximate model stack")
{
  const double wc = reference.omega_c();
  const auto s = build_approx_stack(reference, 0.01 * wc);
  // sqrt(0.02) wc / c = 3.5834268e6 1/m.
  CHECK(s.k_outer == doctest::Approx(3.5834268e6).epsilon(1e-6));
  CHECK(s.layers[0].k2 == k_squared_approx(RegionKind::Gain, 0.01 * wc, reference));
  CHECK(s.layers[1].k2 == k_squared_approx(RegionKind::Absorbing, 0.01 * wc, reference));
  CHECK_THROWS_AS(build_approx_stack(reference, 0.0), BelowCutoffError);
  CHECK_THROWS_AS(build_approx_stack(reference, -1.0), BelowCutoffError);

  // Exterior obeys the same energy relation as the layers: hbar^2 k^2 / 2m = hbar dw.
  const double m = effective_mass(reference);
  const double dw = 0.01 * wc;
  CHECK(constants::hbar * s.k_outer * s.k_outer / (2.0 * m) ==
        doctest::Approx(dw).epsilon(1e-12));
}

TEST_CASE("switching the medium off gives free propagation")
{
  const auto off = reference.with_plasma_frequency(0.0);
  const double wc = reference.omega_c();
  for (double f : {1.001, 1.01, 1.05}) {
    const auto exact = build_exact_stack(off, f * wc);
    for (const auto& layer : exact.layers)
      CHECK(std::abs(layer.k2 - exact.k_outer * exact.k_outer) <= 1e-12 * std::norm(exact.k_outer));
    for (auto model : {ModelKind::Exact, ModelKind::Approximate}) {
      const auto p = evaluate(model, off, f * wc);
      CHECK(std::abs(std::abs(p.amp.t_left) - 1.0) <= 1e-12);
      CHECK(std::abs(p.amp.r_left) <= 1e-12);
      CHECK(std::abs(p.sums.left - 1.0) <= 1e-10);
      CHECK(std::abs(p.sums.right - 1.0) <= 1e-10);
    }
  }
}

TEST_CASE("PT defect of the two models")
{
  const double wc = reference.omega_c();
  for (double f : {1.0, 1.001, 1.05, 1.1})
    CHECK(pt_defect(ModelKind::Approximate, reference, f * wc) == 0.0);
  CHECK(pt_defect(ModelKind::Exact, reference, wc) <= 1e-12);
  const double d1 = pt_defect(ModelKind::Exact, reference, 1.01 * wc);
  const double d5 = pt_defect(ModelKind::Exact, reference, 1.05 * wc);
  const double d10 = pt_defect(ModelKind::Exact, reference, 1.10 * wc);
  CHECK(d1 > 0.0);
  CHECK(d5 > d1);
  CHECK(d10 > d5);
  const double scale = std::abs(k_squared_exact(RegionKind::Absorbing, wc, reference));
  CHECK(d5 * scale == doctest::Approx(pt_defect_exact(1.05 * wc, reference)).epsilon(1e-9));
  CHECK_THROWS_AS(pt_defect(ModelKind::Exact, reference, 0.99 * wc), BelowCutoffError);
  CHECK_THROWS_AS(pt_defect(ModelKind::Approximate, reference, 0.99 * wc), BelowCutoffError);
}

TEST_CASE("sweep grid")
{
  const auto two = sweep_grid(1.01, 1.02, 2);
  REQUIRE(two.size() == 2);
  CHECK(two[0] == 1.01);
  CHECK(two[1] == 1.02);

  const auto many = sweep_grid(1.0005, 1.10, 400);
  CHECK(many.size() == 400);
  CHECK(many.front() == 1.0005);
  CHECK(many.back() == 1.10);
  for (std::size_t i = 1; i < many.size(); ++i)
    CHECK(many[i] > many[i - 1]);

  CHECK_THROWS_AS(sweep_grid(1.0, 1.1, 10), DomainError);
  CHECK_THROWS_AS(sweep_grid(1.1, 1.05, 10), DomainError);
  CHECK_THROWS_AS(sweep_grid(1.01, 1.02, 1), DomainError);

  const auto rows = sweep(reference, 1.01, 1.02, 2);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].omega_over_omegac == 1.01);
  CHECK(rows[1].omega_over_omegac == 1.02);
  CHECK(rows[0].exact.has_value());
  CHECK(rows[0].approx.has_value());

  const auto only = sweep(reference, 1.01, 1.02, 3, ModelSelection{false, true});
  CHECK_FALSE(only[1].exact.has_value());
  CHECK(only[1].approx.has_value());
}

TEST_CASE("gain dominates from the left, absorption from the right, at low energy")
{
  const double wc = reference.omega_c();
  for (auto model : {ModelKind::Exact, ModelKind::Approximate}) {
    const auto p = evaluate(model, reference, 1.005 * wc);
    REQUIRE_FALSE(p.singular);
    CHECK(p.sums.left > 1.0);
    CHECK(p.sums.right < 1.0);
    CHECK(p.log10_left > 0.0);
    CHECK(p.log10_right < 0.0);
  }
}

TEST_CASE("mirroring the layers swaps the flux sums")
{
  for (const auto& row : sweep(reference, 1.0005, 1.1, 60)) {
    const double omega = row.omega_over_omegac * reference.omega_c();
    for (auto model : {ModelKind::Exact, ModelKind::Approximate}) {
      const auto a = evaluate(model, reference, omega);
      const auto b = evaluate(model, reference, omega, LayerOrder::AbsorbingFirst);
      CHECK(std::abs(b.sums.left - a.sums.right) <= 1e-10 * std::max(1.0, a.sums.right));
      CHECK(std::abs(b.sums.right - a.sums.left) <= 1e-10 * std::max(1.0, a.sums.left));
    }
  }
}

TEST_CASE("models approach each other towards cutoff")
{
  const double wc = reference.omega_c();
  auto mismatch = [&](double frac, bool left) {
    const auto e = evaluate(ModelKind::Exact, reference, (1.0 + frac) * wc);
    const auto a = evaluate(ModelKind::Approximate, reference, (1.0 + frac) * wc);
    const double se = left ? e.sums.left : e.sums.right;
    const double sa = left ? a.sums.left : a.sums.right;
    return std::abs(se - sa) / se;
  };
  for (bool left : {true, false})
    CHECK(mismatch(1e-3, left) < mismatch(1e-2, left));
}

TEST_CASE("approximate model satisfies generalised unitarity across the sweep")
{
  for (const auto& row : sweep(reference, 1.0005, 1.1, 400, ModelSelection{false, true})) {
    REQUIRE(row.approx.has_value());
    CHECK(pt_residual(row.approx->amp) <= 1e-8);
    CHECK(std::abs((std::conj(row.approx->amp.r_left) * row.approx->amp.r_right).imag()) <= 1e-8);
  }
}

TEST_CASE("sweep output does not depend on the thread count")
{
  const auto serial = sweep(reference, 1.0005, 1.1, 97, {}, 1);
  for (unsigned threads : {2u, 3u, 8u, 0u}) {
    const auto parallel = sweep(reference, 1.0005, 1.1, 97, {}, threads);
    REQUIRE(parallel.size() == serial.size());
    bool identical = true;
    for (std::size_t i = 0; i < serial.size(); ++i)
      identical = identical && same_bits(serial[i].omega_over_omegac, parallel[i].omega_over_omegac) &&
                  same_point(serial[i].exact, parallel[i].exact) &&
                  same_point(serial[i].approx, parallel[i].approx);
    CHECK(identical);
  }
}

TEST_CASE("model names")
{
  CHECK(std::string(to_string(ModelKind::Exact)) == "exact");
  CHECK(std::string(to_string(ModelKind::Approximate)) == "approx");
}
