#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "abv/structural.hpp"
#include "abv/suites.hpp"

using namespace abv;

TEST_CASE("surrogate phi validation") {
  CHECK_NOTHROW(SurrogatePhi::default_phi());
  CHECK_NOTHROW(SurrogatePhi::alternate_phi());
  // a broken partial is rejected at construction
  CHECK_THROWS_AS(SurrogatePhi([](double x, double y) { return x * x * y; },
                               [](double x, double y) { return x * y; },  // wrong
                               [](double, double y) { return 2 * y; },
                               [](double x, double) { return 2 * x; }),
                  Error);
}

TEST_CASE("zero mode pair vanishes everywhere") {
  auto grid = RadialGrid::linear(0.01, 4.0, 401, Measure::Lebesgue);
  const auto zero = [](double) { return 0.0; };
  const ModePair mp = ModePair::from_functions(grid, zero, zero, zero, zero, zero,
                                               zero, zero, zero);
  const StructuralReport rep = structural_identities(mp, SurrogatePhi::default_phi());
  CHECK(rep.d1_max == 0.0);
  CHECK(rep.c_max == 0.0);
  CHECK(rep.uv_theta_max == 0.0);
  CHECK(rep.radial_mix_max == 0.0);
  CHECK(rep.a == 0.0);
  CHECK(rep.b == 0.0);
  CHECK(rep.boundary_term == 0.0);
}

TEST_CASE("structural identities for a generic smooth pair") {
  const ModePair mp = fixtures::structural_mode_pair(4.0, 2001);
  for (int which = 0; which < 2; ++which) {
    const SurrogatePhi phi =
        which == 0 ? SurrogatePhi::default_phi() : SurrogatePhi::alternate_phi();
    const StructuralReport rep = structural_identities(mp, phi);
    CHECK(rep.d1_max <= 1e-10 * std::max(rep.d1_scale, 1e-30));
    CHECK(rep.c_max <= 1e-12);
    CHECK(rep.uv_theta_max <= 1e-10 * rep.uv_theta_scale);
    CHECK(rep.radial_mix_max <= 1e-10 * rep.radial_mix_scale);
    // M(0) = 0, so a + b alone must cancel
    CHECK(rep.boundary_term == 0.0);
    CHECK(rep.parts_residual <= 1e-6 * rep.parts_scale);
  }
}

TEST_CASE("double angle identity with k = 0") {
  auto grid = RadialGrid::linear(0.01, 4.0, 801, Measure::Lebesgue);
  const auto m = [](double r) { return fixtures::smooth_bump((r - 2.0) / 0.7); };
  const auto mp = [](double r) {
    return fixtures::smooth_bump_derivative((r - 2.0) / 0.7) / 0.7;
  };
  const auto zero = [](double) { return 0.0; };
  const auto one = [](double r) { return fixtures::smooth_bump((r - 2.0) / 1.2); };
  const auto onep = [](double r) {
    return fixtures::smooth_bump_derivative((r - 2.0) / 1.2) / 1.2;
  };
  const ModePair pair =
      ModePair::from_functions(grid, m, mp, zero, zero, one, onep, zero, zero);
  const StructuralReport rep =
      structural_identities(pair, SurrogatePhi::default_phi());
  // u v_theta - v u_theta = 2 m^2 exactly by the double angle identity
  CHECK(rep.uv_theta_max <= 1e-12 * std::max(rep.uv_theta_scale, 1e-30));
}

TEST_CASE("integration by parts with a nonvanishing boundary term") {
  const SurrogatePhi phi = SurrogatePhi::default_phi();
  const PartsCheck pc = integration_by_parts_check(
      [](double r) { return 0.8 * std::exp(-0.5 * r * r) + 0.1 * std::exp(-0.05 * r * r); },
      [](double r) { return -0.8 * r * std::exp(-0.5 * r * r) - 0.01 * r * std::exp(-0.05 * r * r); },
      [](double r) { return 0.5 * std::exp(-0.3 * r * r) + 0.2 * std::exp(-0.04 * r * r); },
      [](double r) { return -0.3 * r * std::exp(-0.3 * r * r) - 0.016 * r * std::exp(-0.04 * r * r); },
      phi, 14.0, 8001);
  // boundary term is genuinely nonzero here
  CHECK(std::abs(pc.boundary_term) > 1e-3);
  CHECK(pc.residual <= 1e-6);
}

TEST_CASE("mode pair validation") {
  auto grid = RadialGrid::linear(0.01, 4.0, 101, Measure::Lebesgue);
  const auto bad = [](double) { return 1.0; };  // m(0) != 0
  const auto zero = [](double) { return 0.0; };
  CHECK_THROWS_AS(ModePair::from_functions(grid, bad, zero, zero, zero, zero, zero,
                                           zero, zero),
                  Error);
}
