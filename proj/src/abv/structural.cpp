#include "abv/structural.hpp"

#include <cmath>
#include <numbers>

namespace abv {

namespace {

double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1.0});
}

}  // namespace

SurrogatePhi::SurrogatePhi(Phi2D phi, Phi2D phi1, Phi2D phi11, Phi2D phi12)
    : phi_(std::move(phi)), phi1_(std::move(phi1)), phi11_(std::move(phi11)),
      phi12_(std::move(phi12)) {
  require(phi_ && phi1_ && phi11_ && phi12_, ErrorCode::InvalidArgument,
          "surrogate Phi needs all four evaluators");
  // validate partials against central differences on a sample grid
  for (int i = 0; i < 12; ++i) {
    for (int j = 0; j < 12; ++j) {
      const double x = 0.05 + 0.17 * i;
      const double y = 0.05 + 0.17 * j;
      const double hx = 1e-5 * (1.0 + x);
      const double hy = 1e-5 * (1.0 + y);
      const double fd1 = (phi_(x + hx, y) - phi_(x - hx, y)) / (2.0 * hx);
      require(rel_diff(fd1, phi1_(x, y)) <= 1e-6, ErrorCode::InvalidArgument,
              "Phi_1 disagrees with finite differences");
      const double fd11 =
          (phi1_(x + hx, y) - phi1_(x - hx, y)) / (2.0 * hx);
      require(rel_diff(fd11, phi11_(x, y)) <= 1e-6, ErrorCode::InvalidArgument,
              "Phi_11 disagrees with finite differences");
      const double fd12 =
          (phi_(x + hx, y + hy) - phi_(x + hx, y - hy) - phi_(x - hx, y + hy) +
           phi_(x - hx, y - hy)) /
          (4.0 * hx * hy);
      require(rel_diff(fd12, phi12_(x, y)) <= 1e-6, ErrorCode::InvalidArgument,
              "Phi_12 disagrees with finite differences");
    }
  }
}

SurrogatePhi SurrogatePhi::default_phi() {
  return SurrogatePhi(
      [](double x, double y) { return x * x * y + x * y * y; },
      [](double x, double y) { return 2.0 * x * y + y * y; },
      [](double, double y) { return 2.0 * y; },
      [](double x, double y) { return 2.0 * x + 2.0 * y; });
}

SurrogatePhi SurrogatePhi::alternate_phi() {
  return SurrogatePhi(
      [](double x, double y) {
        return x * x * x + x * x * y + x * y * y + y * y * y;
      },
      [](double x, double y) { return 3.0 * x * x + 2.0 * x * y + y * y; },
      [](double x, double y) { return 6.0 * x + 2.0 * y; },
      [](double x, double y) { return 2.0 * x + 2.0 * y; });
}

ModePair ModePair::from_functions(const GridPtr& grid,
                                  const std::function<double(double)>& m,
                                  const std::function<double(double)>& mp,
                                  const std::function<double(double)>& k,
                                  const std::function<double(double)>& kp,
                                  const std::function<double(double)>& xi,
                                  const std::function<double(double)>& xip,
                                  const std::function<double(double)>& eta,
                                  const std::function<double(double)>& etap) {
  ModePair out;
  out.grid = grid;
  const std::size_t n = grid->size();
  const auto fill = [&](std::vector<double>& v,
                        const std::function<double(double)>& f) {
    v.resize(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = f(grid->node(i));
  };
  fill(out.m, m);
  fill(out.mp, mp);
  fill(out.k, k);
  fill(out.kp, kp);
  fill(out.xi, xi);
  fill(out.xip, xip);
  fill(out.eta, eta);
  fill(out.etap, etap);
  out.validate();
  return out;
}

void ModePair::validate() const {
  require(grid != nullptr, ErrorCode::InvalidArgument, "mode pair needs a grid");
  const std::size_t n = grid->size();
  for (const auto* v : {&m, &mp, &k, &kp, &xi, &xip, &eta, &etap})
    require(v->size() == n, ErrorCode::InvalidArgument,
            "mode pair arrays must match the grid");
  double mmax = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    mmax = std::max({mmax, std::abs(m[i]), std::abs(k[i])});
  if (mmax > 0.0)
    require(std::abs(m.front()) <= 1e-9 * mmax && std::abs(k.front()) <= 1e-9 * mmax,
            ErrorCode::InvalidArgument, "mode pair needs m, k -> 0 at r -> 0");
}

StructuralReport structural_identities(const ModePair& mp, const SurrogatePhi& phi,
                                       int n_theta) {
  mp.validate();
  StructuralReport rep;
  const std::size_t n = mp.grid->size();
  const double dtheta = 2.0 * std::numbers::pi / n_theta;
  const double tiny = 1e-300;

  for (std::size_t i = 0; i < n; ++i) {
    const double r = mp.grid->node(i);
    const double M2 = mp.m[i] * mp.m[i] + mp.k[i] * mp.k[i];
    const double MMp = mp.m[i] * mp.mp[i] + mp.k[i] * mp.kp[i];
    const double M = std::sqrt(M2);
    const double N2 = mp.xi[i] * mp.xi[i] + mp.eta[i] * mp.eta[i];
    const double N = std::sqrt(N2);

    double d1_acc = 0.0, d1_abs = 0.0;
    double uv_max = 0.0, mix_max = 0.0;
    const double weight =
        (M * N > tiny) ? phi.phi12(M, N) * (mp.eta[i] * mp.xip[i] - mp.xi[i] * mp.etap[i]) /
                             (r * M * N)
                       : 0.0;
    for (int j = 0; j < n_theta; ++j) {
      const double th = j * dtheta;
      const double c2 = std::cos(2.0 * th), s2 = std::sin(2.0 * th);
      const double u = mp.m[i] * c2 - mp.k[i] * s2;
      const double v = mp.m[i] * s2 + mp.k[i] * c2;
      const double u_t = -2.0 * v;
      const double v_t = 2.0 * u;
      const double u_r = mp.mp[i] * c2 - mp.kp[i] * s2;
      const double v_r = mp.mp[i] * s2 + mp.kp[i] * c2;

      // (ii): gradients of the radial pair share the phase e^{i theta}, so
      // Im(zeta_2 conj(zeta_1)) cancels; evaluated with the actual complex
      // products to exercise that cancellation.
      const Complex etheta(std::cos(th), std::sin(th));
      const Complex zeta1 = mp.xip[i] * etheta;
      const Complex zeta2 = mp.etap[i] * etheta;
      rep.c_max = std::max(rep.c_max,
                           std::abs(std::imag(zeta2 * std::conj(zeta1)) / r));

      const double d1 = (u * u_t + v * v_t) * weight;
      d1_acc += d1 * dtheta;
      d1_abs += (std::abs(u * u_t) + std::abs(v * v_t)) * std::abs(weight) * dtheta;

      uv_max = std::max(uv_max, std::abs(u * v_t - v * u_t - 2.0 * M2));
      mix_max = std::max(mix_max, std::abs(u_r * v_t - v_r * u_t - 2.0 * MMp));
    }
    rep.d1_max = std::max(rep.d1_max, std::abs(d1_acc));
    rep.d1_scale = std::max(rep.d1_scale, d1_abs);
    rep.uv_theta_max = std::max(rep.uv_theta_max, uv_max);
    rep.uv_theta_scale = std::max(rep.uv_theta_scale, 2.0 * M2);
    rep.radial_mix_max = std::max(rep.radial_mix_max, mix_max);
    rep.radial_mix_scale = std::max(rep.radial_mix_scale, std::abs(2.0 * MMp));
  }

  // (v): Simpson over the shared grid; integrands written through
  // M M' = m m' + k k' to avoid dividing at M = 0.
  const std::size_t cells = n - 1;
  require(cells % 2 == 0, ErrorCode::InvalidArgument,
          "parts check needs an odd node count");
  std::vector<double> fa(n), fb(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double M2 = mp.m[i] * mp.m[i] + mp.k[i] * mp.k[i];
    const double M = std::sqrt(M2);
    const double MMp = mp.m[i] * mp.mp[i] + mp.k[i] * mp.kp[i];
    const double N = std::hypot(mp.xi[i], mp.eta[i]);
    const double NNp = mp.xi[i] * mp.xip[i] + mp.eta[i] * mp.etap[i];
    const double Np = N > tiny ? NNp / N : 0.0;
    const double Mp = M > tiny ? MMp / M : 0.0;
    fa[i] = phi.phi12(M, N) * M * Np + phi.phi11(M, N) * MMp;
    fb[i] = phi.phi1(M, N) * Mp;
  }
  const double h = mp.grid->node(1) - mp.grid->node(0);
  const auto simpson = [&](const std::vector<double>& f) {
    double acc = f.front() + f.back();
    for (std::size_t i = 1; i + 1 < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * f[i];
    return acc * h / 3.0;
  };
  rep.a = simpson(fa);
  rep.b = simpson(fb);
  const double M0 = std::hypot(mp.m.front(), mp.k.front());
  const double N0 = std::hypot(mp.xi.front(), mp.eta.front());
  rep.boundary_term = phi.phi1(M0, N0) * M0;
  rep.parts_residual = std::abs(rep.a + rep.b + rep.boundary_term);
  rep.parts_scale = std::max({std::abs(rep.a), std::abs(rep.b), 1e-30});
  return rep;
}

PartsCheck integration_by_parts_check(const std::function<double(double)>& M,
                                      const std::function<double(double)>& Mp,
                                      const std::function<double(double)>& N,
                                      const std::function<double(double)>& Np,
                                      const SurrogatePhi& phi, double rmax, int n) {
  require(n >= 3 && n % 2 == 1, ErrorCode::InvalidArgument,
          "Simpson needs an odd node count >= 3");
  const double h = rmax / static_cast<double>(n - 1);
  double a = 0.0, b = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = h * i;
    const double w = (i == 0 || i == n - 1) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    const double mv = M(r), nv = N(r);
    a += w * (phi.phi12(mv, nv) * mv * Np(r) + phi.phi11(mv, nv) * mv * Mp(r));
    b += w * (phi.phi1(mv, nv) * Mp(r));
  }
  PartsCheck out;
  out.a = a * h / 3.0;
  out.b = b * h / 3.0;
  out.boundary_term = phi.phi1(M(0.0), N(0.0)) * M(0.0);
  out.scale = std::max({std::abs(out.a), std::abs(out.b), 1e-30});
  out.residual = std::abs(out.a + out.b + out.boundary_term) / out.scale;
  return out;
}

}  // namespace abv
