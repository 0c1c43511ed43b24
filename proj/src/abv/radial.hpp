#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "abv/burkholder.hpp"
#include "abv/errors.hpp"

namespace abv {

enum class Measure { Lebesgue, Radial };  // du vs u*du

// Quadrature nodes on (0, inf). Node weights are trapezoid weights in the
// declared measure; the first weight includes the [0, u0] cell, on which
// sampled profiles are treated as constant. This keeps H(1) = 1 exact and the
// discrete pairing consistent with the cumulative operators.
class RadialGrid {
public:
  RadialGrid(std::vector<double> nodes, Measure measure);

  static std::shared_ptr<const RadialGrid> log_spaced(double umin, double umax,
                                                      std::size_t n, Measure m);
  static std::shared_ptr<const RadialGrid> linear(double umin, double umax,
                                                  std::size_t n, Measure m);

  std::size_t size() const { return nodes_.size(); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  Measure measure() const { return measure_; }
  double node(std::size_t i) const { return nodes_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }

private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
  Measure measure_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

struct RadialProfile {
  GridPtr grid;
  std::vector<Complex> samples;
  int mode_index = 0;

  RadialProfile() = default;
  RadialProfile(GridPtr g, std::vector<Complex> s, int k = 0);

  std::size_t size() const { return samples.size(); }
  void write_csv(const std::string& path) const;
};

RadialProfile real_profile(GridPtr g, const std::vector<double>& s, int k = 0);
std::vector<double> real_part(const RadialProfile& p);

// (sum_i w_i |f_i|^p)^(1/p) in the grid's measure.
double lp_norm(const RadialProfile& f, const Exponent& e);
double lp_norm(const RadialGrid& grid, const std::vector<double>& samples,
               const Exponent& e);

// Hg(u) = (1/u) int_0^u g, cumulative integral by exact per-cell trapezoid of
// the piecewise-linear interpolant (constant on [0, u0]).
RadialProfile apply_hardy(const RadialProfile& g);

// Lambda_m g(u) = g(u) - (m+1) u^(-(m+2)/2) int_0^u v^(m/2) g(v) dv, m even.
RadialProfile apply_lambda_m(const RadialProfile& g, int m);

// Monotone cubic interpolation (Fritsch-Carlson) through (xs, ys); constant
// extrapolation outside the nodes is not provided -- out-of-range evaluation
// returns 0, matching compactly supported profiles.
class MonotoneCubic {
public:
  MonotoneCubic(const std::vector<double>& xs, const std::vector<double>& ys);
  double operator()(double x) const;

private:
  std::vector<double> xs_, ys_, slopes_;
};

// Angular-average kernel of the transform that maps dbar f to d f:
// N_k(rho, r) = int_0^{2pi} K(r e^{it} + rho) e^{-ikt} dt with K(z) =
// -1/(pi z^2). Only the absolutely continuous part is returned; the identity
// (delta) part is carried by Lambda_m. Trapezoid with Richardson refinement
// to 1e-10 absolute.
Complex reduced_kernel_nk(double rho, double r, int k);

// Closed form of the absolutely continuous part for even k >= 0:
// -2(k+1) r^k / rho^(k+2) on r < rho, 0 on r > rho.
double reduced_kernel_nk_closed_form(double rho, double r, int k);

// Stretch profile: g >= 0 on an r-grid, with its derivative samples, and
// (when built through the beta parameterization) the originating beta,
// which enables exact piecewise-linear norm evaluation downstream.
struct StretchProfile {
  RadialProfile g;        // r-grid, Radial measure
  RadialProfile gprime;   // same grid
  bool complex_allowed = false;

  // present when the stretch came from stretch_from_beta
  std::optional<RadialProfile> beta;  // rho-grid, Lebesgue measure

  void validate() const;
};

// beta(rho) = (1/2)(g'(sqrt rho) + g(sqrt rho)/sqrt rho), g interpolated at
// sqrt(rho) by monotone cubics.
RadialProfile beta_from_stretch(const StretchProfile& s, const GridPtr& rho_grid);

// g(sqrt rho) = sqrt(rho) (H beta)(rho); g' recovered from
// g'(sqrt rho) = 2 beta(rho) - (H beta)(rho). The returned r-grid is the
// image r_i = sqrt(rho_i) with Radial measure.
StretchProfile stretch_from_beta(const RadialProfile& beta);

// dbar(r) = g'(r) + g(r)/r, dmag(r) = g'(r) - g(r)/r.
struct StretchDerivatives {
  RadialProfile dbar;
  RadialProfile dmag;
};
StretchDerivatives stretch_derivatives(const StretchProfile& s);

// max over interior nodes of
// |(1/2)(g'(sqrt rho) - g(sqrt rho)/sqrt rho) - (beta - H beta)(rho)|.
double hm_identity_residual(const StretchProfile& s);

// f_k(r) = (1/2pi) int_0^{2pi} e^{ik phi} f(r e^{i phi}) d phi, trapezoid in
// phi. The sampler abstracts the plane field (analytic or interpolated).
using PlaneSampler = std::function<Complex(double x, double y)>;
RadialProfile project_mode(const PlaneSampler& f, int k, const GridPtr& grid,
                           int n_phi = 256);

}  // namespace abv
