#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "abv/radial.hpp"

namespace abv {

enum class OperatorKind { Hardy, HardyMinusId, Lambda, Custom };

std::string kind_name(OperatorKind k, int m = 0);

// Dense lower-triangular realization of H, H - I, or Lambda_m on a grid.
// Row i encodes exact trapezoid integration of int_0^{u_i} against
// piecewise-linear inputs. Structured kinds also apply in O(n) through the
// cumulative form; the dense matrix is kept as the contractual object and is
// used to certify reported norms.
class TriangularOperator {
public:
  TriangularOperator(GridPtr grid, OperatorKind kind, int m,
                     std::vector<double> dense);

  static TriangularOperator discretize(OperatorKind kind, GridPtr grid, int m = 0);
  static TriangularOperator custom(GridPtr grid, std::vector<double> dense);
  static TriangularOperator identity(GridPtr grid);

  const RadialGrid& grid() const { return *grid_; }
  GridPtr grid_ptr() const { return grid_; }
  OperatorKind kind() const { return kind_; }
  int lambda_m() const { return m_; }
  std::size_t size() const { return n_; }
  double entry(std::size_t i, std::size_t j) const { return dense_[i * n_ + j]; }
  const std::vector<double>& dense() const { return dense_; }

  std::vector<double> apply_dense(const std::vector<double>& x) const;
  std::vector<double> apply(const std::vector<double>& x) const;          // fast path
  std::vector<double> apply_transpose(const std::vector<double>& y) const;

private:
  GridPtr grid_;
  OperatorKind kind_;
  int m_;
  std::size_t n_;
  std::vector<double> dense_;
};

struct NormEstimateOptions {
  int max_iter = 600;
  double tol = 1e-11;
  int restarts = 8;
  std::uint64_t seed = 1;
};

struct NormEstimate {
  double value = 0.0;
  RadialProfile witness;
  int iterations = 0;
  bool converged = false;
  std::vector<double> history;

  std::string to_json(OperatorKind kind, int m, double p) const;
};

// Duality-map fixed-point ascent (nonlinear power method) for the operator
// norm on L^p of the grid's measure. The Rayleigh quotient is nondecreasing
// along the iteration; the reported value is recomputed from the witness with
// the dense matrix, so it is a certified lower bound on the discrete norm.
NormEstimate estimate_norm(const TriangularOperator& op, const Exponent& e,
                           const NormEstimateOptions& opts = {});

// || g' - g/r ||_{L^p(r dr)} / || g' + g/r ||_{L^p(r dr)}.
// Stretches carrying their beta parameterization are evaluated as exact
// integrals of the piecewise-linear beta model (with the analytic 1/rho
// tail); at p = 2 this reproduces the exact saturation of the bound.
double stretch_ratio(const StretchProfile& s, const Exponent& e);

struct ModeFunctional {
  double value = 0.0;
  double scale = 0.0;  // same integral with both terms in absolute value
};

// 2 pi int_0^inf L_p(g' + g/r, g' - g/r) r dr.
ModeFunctional mode_functional(const StretchProfile& s, const Exponent& e);

struct MaximizeOptions {
  GridPtr rho_grid;       // defaults to log [1e-6, 1e6], n = 4000
  int max_iter = 300;
  double tol = 1e-11;
  std::uint64_t seed = 1;
};

struct MaximizeResult {
  double ratio = 0.0;
  StretchProfile witness;
  int iterations = 0;
  bool converged = false;
  bool bound_violated = false;  // ratio > p* - 1 + 1e-9; hard failure upstream
};

// Projected gradient ascent over beta >= 0 (beta = theta^2 on the rho-grid),
// maximizing stretch_ratio through the invbeta parameterization.
MaximizeResult maximize_stretch_ratio(const Exponent& e, const MaximizeOptions& opts = {});

}  // namespace abv
