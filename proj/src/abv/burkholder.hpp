#pragma once

#include <complex>
#include <cstdint>
#include <functional>

#include "abv/errors.hpp"
#include "abv/rng.hpp"

namespace abv {

using Complex = std::complex<double>;

// L^p exponent together with its conjugate p' = p/(p-1) and p* = max(p, p').
class Exponent {
public:
  explicit Exponent(double p) : p_(p) {
    require(std::isfinite(p) && p > 1.0, ErrorCode::InvalidArgument,
            "exponent p must lie in (1, inf)");
    conj_ = p / (p - 1.0);
    star_ = p > conj_ ? p : conj_;
  }
  double p() const { return p_; }
  double conj() const { return conj_; }
  double star() const { return star_; }

private:
  double p_;
  double conj_;
  double star_;
};

// Pair (z, w) of complex numbers; all pointwise functions below depend on the
// pair through (|z|, |w|) only.
struct PhasePoint {
  Complex z{0.0, 0.0};
  Complex w{0.0, 0.0};
};

// 2x2 real matrix [[a, b], [c, d]].
struct Mat2 {
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;

  double det() const { return a * d - b * c; }
  double frobenius_sq() const { return a * a + b * b + c * c + d * d; }

  Mat2 operator+(const Mat2& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
  Mat2 operator*(double t) const { return {a * t, b * t, c * t, d * t}; }
};

// Rank-one 2x2 matrix; in phase coordinates |Z| = |W|.
struct RankOneDirection {
  Mat2 matrix;
};

PhasePoint matrix_to_phase(const Mat2& m);
Mat2 phase_to_matrix(const PhasePoint& p);

double eval_l(const PhasePoint& p);
double eval_m(const PhasePoint& p);
double eval_lp(const PhasePoint& p, const Exponent& e);
double eval_psi(const Mat2& m);
double eval_psi_p(const Mat2& m, const Exponent& e);

// Draws B = x y^T with x, y random nonzero 2-vectors. Deterministic per rng
// state; rejects near-degenerate draws (cap 1000, then DegenerateSampler).
RankOneDirection sample_rank_one(Rng& rng);
RankOneDirection sample_rank_one(std::uint64_t seed);

// Function along a rank-one line for the convexity probes.
enum class LineFunction { Psi, PsiP, MAlongLine };

// 0.5*(F(A+t1 B) + F(A+t2 B)) - F(A + (t1+t2)/2 B); >= 0 certifies midpoint
// convexity at this triple. `e` is used by PsiP only (pass any value else).
double midpoint_convexity_margin(LineFunction f, const Exponent& e, const Mat2& a,
                                 const RankOneDirection& b, double t1, double t2);

// ((p*-1)^p |z|^p - |w|^p) - p (1 - 1/p*)^(p-1) L_p(z, w)
double burkholder_margin(const PhasePoint& p, const Exponent& e);

struct ScalingRatio {
  double integral = 0.0;  // int_0^inf t^(p-1) G(z/t, w/t) dt
  double target = 0.0;
  double ratio = 0.0;
  double reference = 0.0;  // closed-form value of the ratio
};

// For 1 < p < 2: G = L, target = L_p(z,w), reference 2/(p(2-p)).
// For p > 2:     G = M, target = L_p(z,w) - (p-2)(|z|+|w|)^p,
//                reference -2/(p(p-1)(p-2)).
ScalingRatio scaling_integral_ratio(const PhasePoint& p, const Exponent& e);

}  // namespace abv
