#include "abv/burkholder.hpp"

#include <cmath>

#include "abv/quadrature.hpp"

namespace abv {

PhasePoint matrix_to_phase(const Mat2& m) {
  return {Complex(m.a - m.d, m.b + m.c), Complex(m.a + m.d, m.c - m.b)};
}

Mat2 phase_to_matrix(const PhasePoint& p) {
  Mat2 m;
  m.a = 0.5 * (p.z.real() + p.w.real());
  m.d = 0.5 * (p.w.real() - p.z.real());
  m.b = 0.5 * (p.z.imag() - p.w.imag());
  m.c = 0.5 * (p.z.imag() + p.w.imag());
  return m;
}

double eval_l(const PhasePoint& p) {
  const double x = std::abs(p.z);
  const double y = std::abs(p.w);
  return (x + y <= 1.0) ? x * x - y * y : 2.0 * x - 1.0;
}

double eval_m(const PhasePoint& p) {
  const double x = std::abs(p.z);
  const double y = std::abs(p.w);
  return (x + y > 1.0) ? y * y - (x - 1.0) * (x - 1.0) : 0.0;
}

double eval_lp(const PhasePoint& p, const Exponent& e) {
  const double x = std::abs(p.z);
  const double y = std::abs(p.w);
  const double s = x + y;
  if (s == 0.0) return 0.0;
  return ((e.star() - 1.0) * x - y) * std::pow(s, e.p() - 1.0);
}

double eval_psi(const Mat2& m) { return eval_l(matrix_to_phase(m)); }

double eval_psi_p(const Mat2& m, const Exponent& e) {
  return eval_lp(matrix_to_phase(m), e);
}

RankOneDirection sample_rank_one(Rng& rng) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const double x0 = rng.uniform(-1.0, 1.0);
    const double x1 = rng.uniform(-1.0, 1.0);
    const double y0 = rng.uniform(-1.0, 1.0);
    const double y1 = rng.uniform(-1.0, 1.0);
    if (x0 * x0 + x1 * x1 < 0.01 || y0 * y0 + y1 * y1 < 0.01) continue;
    return {Mat2{x0 * y0, x0 * y1, x1 * y0, x1 * y1}};
  }
  fail(ErrorCode::DegenerateSampler, "rank-one sampler failed to draw a usable pair");
}

RankOneDirection sample_rank_one(std::uint64_t seed) {
  Rng rng(seed);
  return sample_rank_one(rng);
}

double midpoint_convexity_margin(LineFunction f, const Exponent& e, const Mat2& a,
                                 const RankOneDirection& b, double t1, double t2) {
  require(t1 < t2, ErrorCode::InvalidArgument, "need t1 < t2");
  const auto eval = [&](double t) -> double {
    const Mat2 at = a + b.matrix * t;
    switch (f) {
      case LineFunction::Psi:
        return eval_psi(at);
      case LineFunction::PsiP:
        return eval_psi_p(at, e);
      case LineFunction::MAlongLine:
        return eval_m(matrix_to_phase(at));
    }
    return 0.0;
  };
  const double mid = 0.5 * (t1 + t2);
  return 0.5 * (eval(t1) + eval(t2)) - eval(mid);
}

double burkholder_margin(const PhasePoint& p, const Exponent& e) {
  const double x = std::abs(p.z);
  const double y = std::abs(p.w);
  const double ps = e.star();
  const double lhs = e.p() * std::pow(1.0 - 1.0 / ps, e.p() - 1.0) * eval_lp(p, e);
  const double rhs = std::pow(ps - 1.0, e.p()) * std::pow(x, e.p()) - std::pow(y, e.p());
  return rhs - lhs;
}

ScalingRatio scaling_integral_ratio(const PhasePoint& p, const Exponent& e) {
  const double x = std::abs(p.z);
  const double y = std::abs(p.w);
  const double s = x + y;
  require(s > 0.0, ErrorCode::NonIntegrableInput, "need (z, w) != (0, 0)");

  const double pp = e.p();
  const bool l_branch = pp < 2.0;
  if (!l_branch)
    require(pp > 2.0, ErrorCode::BranchMismatch,
            "p = 2 has no scaling-integral branch");

  // On (0, s) the integrand behaves like t^(p-2) (L branch) or t^(p-3)
  // (M branch); substituting t = s*sigma^(1/alpha) removes the endpoint
  // singularity.
  const double alpha = l_branch ? pp - 1.0 : pp - 2.0;
  const auto point_at = [&](double t) {
    return PhasePoint{Complex(x / t, 0.0), Complex(y / t, 0.0)};
  };
  const auto inner = [&](double sigma) -> double {
    if (sigma <= 0.0) return 0.0;
    const double t = s * std::pow(sigma, 1.0 / alpha);
    const double g = l_branch ? eval_l(point_at(t)) : eval_m(point_at(t));
    return std::pow(t, pp - 1.0) * g * (s / alpha) * std::pow(sigma, 1.0 / alpha - 1.0);
  };

  ScalingRatio out;
  if (l_branch) {
    out.target = eval_lp(p, e);
    out.reference = 2.0 / (pp * (2.0 - pp));
  } else {
    out.target = eval_lp(p, e) - (pp - 2.0) * std::pow(s, pp);
    out.reference = -2.0 / (pp * (pp - 1.0) * (pp - 2.0));
  }

  const double tol = 1e-10 * std::abs(out.target) + 1e-300;
  double integral = integrate_adaptive(inner, 0.0, 1.0, tol).value;
  if (l_branch) {
    // Exact for t >= s where L(z/t, w/t) = (x^2 - y^2)/t^2; the finite piece
    // up to T0 is integrated numerically, the rest analytically.
    const double t0 = 1e3 * s;
    integral += integrate_adaptive(
                    [&](double t) { return std::pow(t, pp - 1.0) * eval_l(point_at(t)); },
                    s, t0, tol)
                    .value;
    integral += (x * x - y * y) * std::pow(t0, pp - 2.0) / (2.0 - pp);
  }
  out.integral = integral;
  require(std::abs(out.target) > 0.0, ErrorCode::ZeroDenominator,
          "scaling target vanishes at this point");
  out.ratio = out.integral / out.target;
  return out;
}

}  // namespace abv
