#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "abv/radial.hpp"

namespace abv {

// Periodic n x n complex field on the square [-L/2, L/2)^2, n a power of two.
// Index convention: samples[ix * n + iy], position x = -L/2 + ix * (L/n).
class PlaneField {
public:
  PlaneField(std::size_t n, double extent, std::vector<Complex> samples);
  static PlaneField from_function(std::size_t n, double extent,
                                  const std::function<Complex(double, double)>& f);
  static PlaneField from_radial(std::size_t n, double extent,
                                const std::function<Complex(double)>& g);

  std::size_t n() const { return n_; }
  double extent() const { return extent_; }
  double spacing() const { return extent_ / static_cast<double>(n_); }
  double cell_area() const { return spacing() * spacing(); }
  const std::vector<Complex>& samples() const { return samples_; }
  std::vector<Complex>& samples() { return samples_; }
  Complex mean() const { return mean_; }
  double max_abs() const;

  Complex at(std::size_t ix, std::size_t iy) const { return samples_[ix * n_ + iy]; }
  double x_of(std::size_t ix) const {
    return -0.5 * extent_ + spacing() * static_cast<double>(ix);
  }

  // Catmull-Rom bicubic interpolation with periodic wrap.
  Complex sample(double x, double y) const;
  PlaneSampler sampler() const;

  // Applies a Fourier multiplier m(xi) with xi = xi1 + i*xi2 over the
  // discrete frequencies 2*pi*k/L, k in [-n/2, n/2).
  PlaneField apply_multiplier(const std::function<Complex(Complex)>& m) const;

  void refresh_mean();

  void write_binary(const std::string& path) const;
  static PlaneField read_binary(const std::string& path);
  void write_csv(const std::string& path) const;

private:
  std::size_t n_;
  double extent_;
  std::vector<Complex> samples_;
  Complex mean_{0.0, 0.0};
};

// T with multiplier conj(xi)/xi (zero on the mean mode): T(dbar f) = d f
// exactly on the discrete frequency set, with d = d_x - i d_y and
// dbar = d_x + i d_y. Requires |mean| < 1e-12 * max|samples|.
PlaneField ab_transform(const PlaneField& f);

// e^{t Laplacian}: multiplies by exp(-|xi|^2 t); preserves the mean.
PlaneField heat_extend(const PlaneField& f, double t);

PlaneField d_op(const PlaneField& f);     // (d_x - i d_y) f, spectral
PlaneField dbar_op(const PlaneField& f);  // (d_x + i d_y) f, spectral

double l2_norm(const PlaneField& f);
Complex bilinear_pairing(const PlaneField& f, const PlaneField& g);  // int f g dA

// Discrete L^p norms over polar samples, comparable against projected modes
// (same quadrature on both sides, so the averaging contraction is exact).
double lp_norm_polar(const PlaneSampler& f, const Exponent& e, const GridPtr& rgrid,
                     int n_phi = 256);
double lp_norm_mode(const RadialProfile& mode, const Exponent& e);

// Extent-checked projection: grid nodes must stay inside the square.
RadialProfile project_mode(const PlaneField& f, int k, const GridPtr& grid,
                           int n_phi = 256);

struct CrosscheckResult {
  int phase_mode = 0;       // mode index carrying the output energy
  double concentration = 0.0;
  double mismatch = 0.0;    // relative L^2 against the 1D Lambda prediction
};

// Embeds the radial profile g(|z|), applies ab_transform, locates the output
// mode, and compares its radial factor to g - (2/rho^2) int_0^rho g r dr
// computed through apply_lambda_m in u = rho^2.
CrosscheckResult crosscheck_radial(const std::function<double(double)>& g,
                                   std::size_t n, double extent);

struct HextResult {
  Complex lhs;             // int f T g dA
  Complex rhs_displayed;   // -2 int (dx+i dy)f (dx+i dy)g dA dt
  Complex rhs_conjugate;   // -2 int (dx-i dy)f (dx-i dy)g dA dt
  double residual_displayed = 0.0;
  double residual_conjugate = 0.0;
  double residual = 0.0;       // best over signed variants
  std::string matched_form;    // which signed variant matches
};

// Heat-extension bilinear identity. The t-integral uses log-spaced nodes on
// [1e-6, t_max] plus the [0, 1e-6] strip; the integrand tail must stay below
// 1e-4 of the accumulated integral.
HextResult hext_residual(const PlaneField& f, const PlaneField& g, double t_max,
                         int nt);

}  // namespace abv
