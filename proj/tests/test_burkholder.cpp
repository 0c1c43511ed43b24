#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "abv/burkholder.hpp"
#include "abv/quadrature.hpp"
#include "abv/rng.hpp"

using namespace abv;

namespace {

PhasePoint pp(double zr, double zi, double wr, double wi) {
  return {Complex(zr, zi), Complex(wr, wi)};
}

PhasePoint random_point(Rng& rng) {
  const double rz = rng.log_uniform(1e-3, 1e3);
  const double rw = rng.log_uniform(1e-3, 1e3);
  const double az = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double aw = rng.uniform(0.0, 2.0 * std::numbers::pi);
  return pp(rz * std::cos(az), rz * std::sin(az), rw * std::cos(aw),
            rw * std::sin(aw));
}

// Closed-form value of int_0^inf t^(p-1) G(z/t, w/t) dt from the piecewise
// antiderivatives, kept independent of the quadrature path.
double scaling_integral_closed_form(double x, double y, double p, bool l_branch) {
  const double s = x + y;
  if (l_branch)
    return std::pow(s, p - 1.0) *
           ((x - y) / (2.0 - p) + 2.0 * x / (p - 1.0) - s / p);
  return std::pow(s, p - 1.0) *
         ((y - x) / (p - 2.0) + 2.0 * x / (p - 1.0) - s / p);
}

}  // namespace

TEST_CASE("exponent arithmetic") {
  const Exponent e(1.5);
  CHECK(e.conj() == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(e.star() == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(std::abs(1.0 / e.p() + 1.0 / e.conj() - 1.0) < 1e-14);
  const Exponent h(4.0);
  CHECK(h.star() == doctest::Approx(4.0));
  CHECK_THROWS_AS(Exponent(1.0), Error);
  CHECK_THROWS_AS(Exponent(0.5), Error);
}

TEST_CASE("matrix dictionary") {
  const PhasePoint id = matrix_to_phase({1, 0, 0, 1});
  CHECK(std::abs(id.z) == 0.0);
  CHECK(id.w.real() == doctest::Approx(2.0));
  CHECK(id.w.imag() == 0.0);

  const PhasePoint proj = matrix_to_phase({1, 0, 0, 0});
  CHECK(proj.z.real() == doctest::Approx(1.0));
  CHECK(proj.w.real() == doctest::Approx(1.0));
  CHECK(std::abs(proj.z) == doctest::Approx(std::abs(proj.w)));

  Rng rng(7);
  double worst = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const Mat2 a{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1),
                 rng.uniform(-1, 1)};
    const PhasePoint ph = matrix_to_phase(a);
    const double fr = a.frobenius_sq();
    worst = std::max(worst,
                     std::abs(std::norm(ph.z) - (fr - 2 * a.det())) / std::max(fr, 1e-30));
    worst = std::max(worst,
                     std::abs(std::norm(ph.w) - (fr + 2 * a.det())) / std::max(fr, 1e-30));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("phase round trip") {
  const Mat2 m = phase_to_matrix(pp(0, 0, 2, 0));
  CHECK(m.a == doctest::Approx(1.0));
  CHECK(m.d == doctest::Approx(1.0));
  CHECK(m.b == 0.0);
  CHECK(m.c == 0.0);
  const Mat2 zero = phase_to_matrix(pp(0, 0, 0, 0));
  CHECK(zero.frobenius_sq() == 0.0);

  Rng rng(11);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const PhasePoint p = random_point(rng);
    const PhasePoint q = matrix_to_phase(phase_to_matrix(p));
    const double scale = std::max({1.0, std::abs(p.z), std::abs(p.w)});
    worst = std::max(worst,
                     std::max(std::abs(q.z - p.z), std::abs(q.w - p.w)) / scale);
  }
  CHECK(worst < 1e-14);
}

TEST_CASE("L, M, Lp pointwise values") {
  CHECK(eval_l(pp(0, 0, 0, 0)) == 0.0);
  CHECK(eval_l(pp(1, 0, 0, 0)) == doctest::Approx(1.0));
  CHECK(eval_l(pp(1, 0, 1, 0)) == doctest::Approx(1.0));

  CHECK(eval_m(pp(0, 0, 0, 0)) == 0.0);
  CHECK(eval_m(pp(1, 0, 1, 0)) == doctest::Approx(1.0));

  const Exponent p32(1.5);
  CHECK(eval_lp(pp(1, 0, 1, 0), p32) == doctest::Approx(std::sqrt(2.0)));
  CHECK(eval_lp(pp(0, 0, 0, 0), p32) == 0.0);

  Rng rng(3);
  const Exponent two(2.0);
  for (int i = 0; i < 1000; ++i) {
    const PhasePoint p = random_point(rng);
    const double x = std::abs(p.z), y = std::abs(p.w);
    CHECK(eval_lp(p, two) ==
          doctest::Approx(x * x - y * y).epsilon(1e-12).scale(x * x + y * y));
    // M = L - (|z|^2 - |w|^2)
    CHECK(eval_m(p) ==
          doctest::Approx(eval_l(p) - (x * x - y * y)).epsilon(1e-12).scale(
              std::abs(eval_l(p)) + x * x + y * y));
    // w = 0 case of Lp
    const Exponent e(1.0 + rng.uniform(0.2, 5.0));
    const PhasePoint zonly{p.z, Complex(0, 0)};
    CHECK(eval_lp(zonly, e) ==
          doctest::Approx((e.star() - 1.0) * std::pow(x, e.p()))
              .epsilon(1e-12));
  }
}

TEST_CASE("branch continuity of L on |z|+|w| = 1") {
  Rng rng(5);
  for (int i = 0; i < 10000; ++i) {
    const double x = rng.uniform01();
    const double y = 1.0 - x;
    CHECK(std::abs((x * x - y * y) - (2.0 * x - 1.0)) < 1e-12);
  }
}

TEST_CASE("psi branches and p = 2 collapse") {
  Rng rng(13);
  const Exponent two(2.0);
  for (int i = 0; i < 2000; ++i) {
    const Mat2 small{rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2),
                     rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2)};
    const PhasePoint ph = matrix_to_phase(small);
    if (std::abs(ph.z) + std::abs(ph.w) <= 1.0)
      CHECK(eval_psi(small) == doctest::Approx(-4.0 * small.det()).epsilon(1e-12));
    const Mat2 any{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2),
                   rng.uniform(-2, 2)};
    CHECK(eval_psi_p(any, two) ==
          doctest::Approx(-4.0 * any.det()).epsilon(1e-12).scale(
              any.frobenius_sq()));
  }
  CHECK(eval_psi({0, 0, 0, 0}) == 0.0);
  CHECK(eval_psi_p({0, 0, 0, 0}, two) == 0.0);
}

TEST_CASE("rank-one sampler") {
  const RankOneDirection a = sample_rank_one(std::uint64_t{42});
  const RankOneDirection b = sample_rank_one(std::uint64_t{42});
  CHECK(a.matrix.a == b.matrix.a);
  CHECK(a.matrix.d == b.matrix.d);

  Rng rng(99);
  for (int i = 0; i < 1000; ++i) {
    const RankOneDirection d = sample_rank_one(rng);
    CHECK(std::abs(d.matrix.det()) <= 1e-12 * d.matrix.frobenius_sq());
    const PhasePoint ph = matrix_to_phase(d.matrix);
    CHECK(std::abs(std::abs(ph.z) - std::abs(ph.w)) <=
          1e-12 * (std::abs(ph.z) + std::abs(ph.w)));
  }
}

TEST_CASE("midpoint convexity margins") {
  const Exponent p32(1.5);
  Rng rng(21);
  // even restriction through the origin
  for (int i = 0; i < 200; ++i) {
    const RankOneDirection b = sample_rank_one(rng);
    CHECK(midpoint_convexity_margin(LineFunction::Psi, p32, Mat2{}, b, -1.0, 1.0) >=
          -1e-12);
  }
  // p = 2 reduces to -4 det, affine along rank-one lines up to the branch
  const Exponent two(2.0);
  for (int i = 0; i < 500; ++i) {
    const Mat2 a{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1),
                 rng.uniform(-1, 1)};
    const RankOneDirection b = sample_rank_one(rng);
    double t1 = rng.uniform(-2, 2), t2 = rng.uniform(-2, 2);
    if (t1 > t2) std::swap(t1, t2);
    if (t2 - t1 < 1e-6) continue;
    CHECK(midpoint_convexity_margin(LineFunction::PsiP, two, a, b, t1, t2) >=
          -1e-12 * (1.0 + a.frobenius_sq() + b.matrix.frobenius_sq()));
  }
  // property sweep over all four probe functions
  const Exponent p3(3.0);
  struct Probe {
    LineFunction f;
    const Exponent* e;
  } probes[] = {{LineFunction::Psi, &p32},
                {LineFunction::PsiP, &p32},
                {LineFunction::PsiP, &p3},
                {LineFunction::MAlongLine, &p32}};
  for (const auto& probe : probes) {
    for (int i = 0; i < 10000; ++i) {
      const Mat2 a{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1),
                   rng.uniform(-1, 1)};
      const RankOneDirection b = sample_rank_one(rng);
      double t1 = rng.uniform(-3, 3), t2 = rng.uniform(-3, 3);
      if (t1 > t2) std::swap(t1, t2);
      if (t2 - t1 < 1e-9) continue;
      const auto value_at = [&](double t) {
        const Mat2 at = a + b.matrix * t;
        switch (probe.f) {
          case LineFunction::Psi:
            return eval_psi(at);
          case LineFunction::PsiP:
            return eval_psi_p(at, *probe.e);
          default:
            return eval_m(matrix_to_phase(at));
        }
      };
      const double scale = std::max({std::abs(value_at(t1)), std::abs(value_at(t2)),
                                     std::abs(value_at(0.5 * (t1 + t2))), 1e-12});
      CHECK(midpoint_convexity_margin(probe.f, *probe.e, a, b, t1, t2) >=
            -1e-9 * scale);
    }
  }
}

TEST_CASE("burkholder margin") {
  const Exponent two(2.0);
  CHECK(burkholder_margin(pp(0, 0, 0, 0), two) == 0.0);
  // equality on the w = 0 ray at p = 2
  Rng rng(31);
  for (int i = 0; i < 1000; ++i) {
    const double r = rng.log_uniform(1e-3, 1e3);
    CHECK(std::abs(burkholder_margin(pp(r, 0, 0, 0), two)) <= 1e-12 * r * r);
  }
  // mass nonnegativity
  for (int i = 0; i < 100000; ++i) {
    const PhasePoint p = random_point(rng);
    double pv = rng.uniform(1.05, 8.0);
    if (std::abs(pv - 2.0) < 1e-3) pv += 0.01;
    const Exponent e(pv);
    const double x = std::abs(p.z), y = std::abs(p.w);
    const double scale =
        std::pow(e.star() - 1.0, e.p()) * std::pow(x, e.p()) + std::pow(y, e.p());
    CHECK(burkholder_margin(p, e) >= -1e-12 * std::max(scale, 1e-30));
  }
}

TEST_CASE("rotation invariance") {
  Rng rng(17);
  const Exponent p32(1.5), p3(3.0);
  for (int i = 0; i < 50; ++i) {
    const PhasePoint p = random_point(rng);
    const double x = std::abs(p.z), y = std::abs(p.w);
    const double l0 = eval_l(p), m0 = eval_m(p), a0 = eval_lp(p, p32),
                 b0 = eval_lp(p, p3);
    const double scale_l = x * x + y * y + 2.0 * x + 1.0;
    const double scale_a =
        ((p32.star() - 1.0) * x + y) * std::pow(x + y, p32.p() - 1.0);
    const double scale_b =
        ((p3.star() - 1.0) * x + y) * std::pow(x + y, p3.p() - 1.0);
    for (int j = 0; j < 100; ++j) {
      const double alpha = rng.uniform(0.0, 2 * std::numbers::pi);
      const double beta = rng.uniform(0.0, 2 * std::numbers::pi);
      const PhasePoint q{p.z * Complex(std::cos(alpha), std::sin(alpha)),
                         p.w * Complex(std::cos(beta), std::sin(beta))};
      CHECK(std::abs(eval_l(q) - l0) <= 1e-14 * scale_l);
      CHECK(std::abs(eval_m(q) - m0) <= 1e-14 * scale_l);
      CHECK(std::abs(eval_lp(q, p32) - a0) <= 1e-14 * scale_a);
      CHECK(std::abs(eval_lp(q, p3) - b0) <= 1e-14 * scale_b);
    }
  }
}

TEST_CASE("scaling integral against the antiderivative oracle") {
  Rng rng(23);
  for (double p : {1.3, 1.5, 1.7}) {
    const Exponent e(p);
    for (int i = 0; i < 20; ++i) {
      const PhasePoint q = random_point(rng);
      const double x = std::abs(q.z), y = std::abs(q.w);
      const ScalingRatio r = scaling_integral_ratio(q, e);
      const double oracle = scaling_integral_closed_form(x, y, p, true);
      CHECK(r.integral ==
            doctest::Approx(oracle).epsilon(1e-8).scale(std::abs(oracle)));
    }
  }
  for (double p : {2.5, 3.0, 4.0}) {
    const Exponent e(p);
    for (int i = 0; i < 20; ++i) {
      const PhasePoint q = random_point(rng);
      const double x = std::abs(q.z), y = std::abs(q.w);
      const ScalingRatio r = scaling_integral_ratio(q, e);
      const double oracle = scaling_integral_closed_form(x, y, p, false);
      CHECK(r.integral ==
            doctest::Approx(oracle).epsilon(1e-8).scale(std::abs(oracle)));
    }
  }
}

TEST_CASE("scaling integral reference values") {
  // p = 3/2 at (1, 0): integral 16/3, target 2, ratio 8/3
  const ScalingRatio r = scaling_integral_ratio(pp(1, 0, 0, 0), Exponent(1.5));
  CHECK(r.integral == doctest::Approx(16.0 / 3.0).epsilon(1e-9));
  CHECK(r.target == doctest::Approx(2.0));
  CHECK(r.ratio == doctest::Approx(8.0 / 3.0).epsilon(1e-9));
  CHECK(r.reference == doctest::Approx(8.0 / 3.0));

  // p = 3 at (1, 0): integral -1/3, target 1
  const ScalingRatio m = scaling_integral_ratio(pp(1, 0, 0, 0), Exponent(3.0));
  CHECK(m.integral == doctest::Approx(-1.0 / 3.0).epsilon(1e-9));
  CHECK(m.target == doctest::Approx(1.0));
  CHECK(m.reference == doctest::Approx(-1.0 / 3.0));

  // constancy across points
  Rng rng(41);
  for (double p : {1.5, 3.0}) {
    const Exponent e(p);
    const double anchor = scaling_integral_ratio(pp(1, 0, 0, 0), e).ratio;
    int kept = 0;
    while (kept < 20) {
      const PhasePoint q = random_point(rng);
      const double s = std::abs(q.z) + std::abs(q.w);
      const double target = p < 2.0
                                ? eval_lp(q, e)
                                : eval_lp(q, e) - (p - 2.0) * std::pow(s, p);
      if (std::abs(target) < 0.05 * std::pow(s, p) * std::max(1.0, e.star() - 1.0))
        continue;
      ++kept;
      const ScalingRatio sr = scaling_integral_ratio(q, e);
      CHECK(sr.ratio == doctest::Approx(anchor).epsilon(1e-6));
    }
  }
}

TEST_CASE("scaling integral error paths") {
  CHECK_THROWS_AS(scaling_integral_ratio(pp(0, 0, 0, 0), Exponent(1.5)), Error);
  CHECK_THROWS_AS(scaling_integral_ratio(pp(1, 0, 0, 0), Exponent(2.0)), Error);
}

TEST_CASE("adaptive quadrature sanity") {
  const auto r = integrate_adaptive([](double t) { return std::sin(t); }, 0.0,
                                    std::numbers::pi, 1e-12);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));
  const auto s = integrate_adaptive([](double t) { return 1.0 / std::sqrt(t); },
                                    0.0, 1.0, 1e-9);
  CHECK(s.value == doctest::Approx(2.0).epsilon(1e-6));
}
