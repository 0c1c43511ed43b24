#pragma once

#include <functional>
#include <string>
#include <vector>

#include "abv/radial.hpp"

namespace abv {

using Phi2D = std::function<double(double, double)>;

// Smooth Phi(x, y) on the closed quadrant with its partials Phi_1, Phi_11,
// Phi_12 (first index = first argument). The supplied partials are checked
// against central finite differences at construction.
class SurrogatePhi {
public:
  SurrogatePhi(Phi2D phi, Phi2D phi1, Phi2D phi11, Phi2D phi12);

  static SurrogatePhi default_phi();    // x^2 y + x y^2
  static SurrogatePhi alternate_phi();  // x^3 + x^2 y + x y^2 + y^3

  double phi(double x, double y) const { return phi_(x, y); }
  double phi1(double x, double y) const { return phi1_(x, y); }
  double phi11(double x, double y) const { return phi11_(x, y); }
  double phi12(double x, double y) const { return phi12_(x, y); }

private:
  Phi2D phi_, phi1_, phi11_, phi12_;
};

// f = e^{2 i theta}(m(r) + i k(r)), g = xi(r) + i eta(r), sampled with their
// radial derivatives on one shared linear r-grid. m and k vanish at r -> 0.
struct ModePair {
  GridPtr grid;  // linear, Lebesgue measure (plain dr integrals)
  std::vector<double> m, mp, k, kp, xi, xip, eta, etap;

  static ModePair from_functions(const GridPtr& grid,
                                 const std::function<double(double)>& m,
                                 const std::function<double(double)>& mp,
                                 const std::function<double(double)>& k,
                                 const std::function<double(double)>& kp,
                                 const std::function<double(double)>& xi,
                                 const std::function<double(double)>& xip,
                                 const std::function<double(double)>& eta,
                                 const std::function<double(double)>& etap);
  void validate() const;
};

struct StructuralReport {
  // circle integrals of D1 at each radius, relative to the absolute-value
  // version of the same integral
  double d1_max = 0.0;
  double d1_scale = 0.0;
  // C integrand (xi_r eta_theta - eta_r xi_theta)/r
  double c_max = 0.0;
  // u v_theta - v u_theta = 2 M^2
  double uv_theta_max = 0.0;
  double uv_theta_scale = 0.0;
  // u_r v_theta - v_r u_theta = 2 M M'
  double radial_mix_max = 0.0;
  double radial_mix_scale = 0.0;
  // a + b + Phi_1(M(0), N(0)) M(0) = 0
  double a = 0.0;
  double b = 0.0;
  double boundary_term = 0.0;
  double parts_residual = 0.0;
  double parts_scale = 0.0;
};

StructuralReport structural_identities(const ModePair& mp, const SurrogatePhi& phi,
                                       int n_theta = 512);

struct PartsCheck {
  double a = 0.0;
  double b = 0.0;
  double boundary_term = 0.0;
  double residual = 0.0;  // |a + b + boundary| / scale
  double scale = 0.0;
};

// a = int (Phi_12(M,N) M N' + Phi_11(M,N) M M') dr,
// b = int Phi_1(M,N) M' dr, boundary = Phi_1(M(0), N(0)) M(0).
// Composite Simpson over [0, rmax]; M(0) need not vanish here.
PartsCheck integration_by_parts_check(const std::function<double(double)>& M,
                                      const std::function<double(double)>& Mp,
                                      const std::function<double(double)>& N,
                                      const std::function<double(double)>& Np,
                                      const SurrogatePhi& phi, double rmax,
                                      int n = 4001);

}  // namespace abv
