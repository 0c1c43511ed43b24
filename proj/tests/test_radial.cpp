#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "abv/radial.hpp"
#include "abv/rng.hpp"
#include "abv/suites.hpp"

using namespace abv;

namespace {

// Brute-force cumulative integral of the piecewise-linear interpolant,
// independent of the prefix machinery.
double brute_hardy_at(const RadialGrid& grid, const std::vector<double>& g,
                      std::size_t i) {
  const auto& u = grid.nodes();
  double acc = g[0] * u[0];
  for (std::size_t k = 1; k <= i; ++k) {
    const int steps = 2000;
    const double a = u[k - 1], b = u[k];
    double cell = 0.0;
    for (int s = 0; s < steps; ++s) {
      const double t0 = a + (b - a) * s / steps;
      const double t1 = a + (b - a) * (s + 1) / steps;
      const auto lin = [&](double t) {
        return g[k - 1] + (g[k] - g[k - 1]) * (t - a) / (b - a);
      };
      cell += 0.5 * (lin(t0) + lin(t1)) * (t1 - t0);
    }
    acc += cell;
  }
  return acc / u[i];
}

StretchProfile analytic_stretch(const GridPtr& rgrid) {
  // g(r) = r * bump(log r), with the analytic derivative supplied
  const std::size_t n = rgrid->size();
  std::vector<Complex> g(n), gp(n);
  const double lo = std::log(rgrid->node(0));
  const double hi = std::log(rgrid->node(n - 1));
  const double c = 0.5 * (lo + hi), w = 0.18 * (hi - lo);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = rgrid->node(i);
    const double s = (std::log(r) - c) / w;
    const double b = fixtures::smooth_bump(s);
    const double bp = fixtures::smooth_bump_derivative(s) / (w * r);
    g[i] = r * b;
    gp[i] = b + r * bp;
  }
  StretchProfile out;
  out.g = RadialProfile(rgrid, std::move(g));
  out.gprime = RadialProfile(rgrid, std::move(gp));
  return out;
}

}  // namespace

TEST_CASE("grid construction and weights") {
  auto g = RadialGrid::log_spaced(1e-6, 1e6, 1000, Measure::Lebesgue);
  CHECK(g->size() == 1000);
  CHECK(g->node(0) == doctest::Approx(1e-6));
  CHECK(g->node(999) == doctest::Approx(1e6));
  double sum = 0.0;
  for (std::size_t i = 0; i < g->size(); ++i) {
    CHECK(g->weight(i) > 0.0);
    if (i > 0) CHECK(g->node(i) > g->node(i - 1));
    sum += g->weight(i);
  }
  // trapezoid weights in du cover [0, u_max] once the origin cell is counted
  CHECK(sum == doctest::Approx(1e6).epsilon(1e-12));

  CHECK_THROWS_AS(RadialGrid::log_spaced(0.0, 1.0, 10, Measure::Lebesgue), Error);
  CHECK_THROWS_AS(RadialGrid({1.0, 1.0}, Measure::Lebesgue), Error);
  CHECK_THROWS_AS(RadialGrid({-1.0, 1.0}, Measure::Lebesgue), Error);
}

TEST_CASE("lp norms") {
  auto g = RadialGrid::log_spaced(1e-3, 1e3, 500, Measure::Lebesgue);
  const Exponent two(2.0);
  RadialProfile zero(g, std::vector<Complex>(g->size(), Complex(0, 0)));
  CHECK(lp_norm(zero, two) == 0.0);

  // homogeneity
  Rng rng(5);
  std::vector<Complex> s(g->size());
  for (auto& v : s) v = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
  RadialProfile f(g, s);
  std::vector<Complex> s3(s);
  for (auto& v : s3) v *= 3.0;
  RadialProfile f3(g, s3);
  const Exponent p(1.7);
  CHECK(lp_norm(f3, p) == doctest::Approx(3.0 * lp_norm(f, p)).epsilon(1e-14));

  // indicator of [0, 1] with a sharp transition cell
  std::vector<double> nodes;
  for (int i = 0; i <= 400; ++i) nodes.push_back(1e-6 + (1.0 - 1e-6) * i / 400.0);
  nodes.push_back(1.0 + 1e-7);
  nodes.push_back(2.0);
  auto gi = std::make_shared<RadialGrid>(nodes, Measure::Lebesgue);
  std::vector<Complex> ind(gi->size(), Complex(0, 0));
  for (std::size_t i = 0; i < gi->size(); ++i)
    if (gi->node(i) <= 1.0) ind[i] = Complex(1, 0);
  CHECK(lp_norm(RadialProfile(gi, ind), two) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("hardy operator") {
  auto g = RadialGrid::log_spaced(1e-4, 1e4, 800, Measure::Lebesgue);
  // constants are fixed
  RadialProfile c(g, std::vector<Complex>(g->size(), Complex(2.5, -1.0)));
  RadialProfile hc = apply_hardy(c);
  for (std::size_t i = 0; i < g->size(); ++i) {
    CHECK(hc.samples[i].real() == doctest::Approx(2.5).epsilon(1e-13));
    CHECK(hc.samples[i].imag() == doctest::Approx(-1.0).epsilon(1e-13));
  }
  // linear profiles: H(u) = u/2 + u0^2/(2u), the second term being the
  // constant-extension cell [0, u0]; it is invisible past a few decades
  std::vector<Complex> lin(g->size());
  for (std::size_t i = 0; i < g->size(); ++i) lin[i] = g->node(i);
  RadialProfile hl = apply_hardy(RadialProfile(g, lin));
  const double u0 = g->node(0);
  for (std::size_t i = 0; i < g->size(); ++i) {
    const double u = g->node(i);
    CHECK(hl.samples[i].real() ==
          doctest::Approx(0.5 * u + 0.5 * u0 * u0 / u).epsilon(1e-13));
    if (u >= 1.0)
      CHECK(hl.samples[i].real() == doctest::Approx(0.5 * u).epsilon(1e-7));
  }

  // brute-force oracle on a random profile
  Rng rng(9);
  std::vector<double> r(g->size());
  for (auto& v : r) v = rng.uniform(-1, 1);
  RadialProfile h = apply_hardy(real_profile(g, r));
  for (std::size_t i : {std::size_t{0}, std::size_t{3}, std::size_t{200},
                        std::size_t{799}}) {
    CHECK(h.samples[i].real() ==
          doctest::Approx(brute_hardy_at(*g, r, i)).epsilon(1e-9));
  }
}

TEST_CASE("hardy closed form for the indicator") {
  // nodes aligned with the breakpoint at 1
  auto g = RadialGrid::log_spaced(1e-6, 1e6, 4001, Measure::Lebesgue);
  std::vector<Complex> s(g->size());
  for (std::size_t i = 0; i < g->size(); ++i)
    s[i] = g->node(i) <= 1.0 ? Complex(1, 0) : Complex(0, 0);
  RadialProfile h = apply_hardy(RadialProfile(g, s));
  for (std::size_t i = 0; i < g->size(); ++i) {
    const double u = g->node(i);
    if (u <= 1.0) {
      CHECK(h.samples[i].real() == doctest::Approx(1.0).epsilon(1e-12));
    } else if (u > 1.02) {  // skip the smeared transition cell
      CHECK(h.samples[i].real() == doctest::Approx(1.0 / u).epsilon(5e-3));
    }
  }
}

TEST_CASE("lambda operators") {
  auto g = RadialGrid::log_spaced(1e-4, 1e4, 600, Measure::Lebesgue);
  // m = 0 on constants vanishes
  RadialProfile c(g, std::vector<Complex>(g->size(), Complex(1.0, 0.0)));
  RadialProfile l0 = apply_lambda_m(c, 0);
  for (const auto& v : l0.samples) CHECK(std::abs(v) < 1e-13);
  // m = 0 halves linear profiles (up to the [0, u0] extension cell)
  std::vector<Complex> lin(g->size());
  for (std::size_t i = 0; i < g->size(); ++i) lin[i] = g->node(i);
  RadialProfile l1 = apply_lambda_m(RadialProfile(g, lin), 0);
  const double u0 = g->node(0);
  for (std::size_t i = 0; i < g->size(); ++i) {
    const double u = g->node(i);
    CHECK(l1.samples[i].real() ==
          doctest::Approx(0.5 * u - 0.5 * u0 * u0 / u).epsilon(1e-12));
    if (u >= 1.0)
      CHECK(l1.samples[i].real() == doctest::Approx(0.5 * u).epsilon(1e-7));
  }
  // m = 2 on constants gives -1/2
  RadialProfile l2 = apply_lambda_m(c, 2);
  for (const auto& v : l2.samples)
    CHECK(v.real() == doctest::Approx(-0.5).epsilon(1e-12));
  // Lambda_0 = I - H pointwise
  Rng rng(15);
  std::vector<Complex> s(g->size());
  for (auto& v : s) v = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
  RadialProfile f(g, s);
  RadialProfile lam = apply_lambda_m(f, 0);
  RadialProfile hf = apply_hardy(f);
  for (std::size_t i = 0; i < g->size(); ++i)
    CHECK(std::abs(lam.samples[i] - (f.samples[i] - hf.samples[i])) < 1e-13);

  CHECK_THROWS_AS(apply_lambda_m(f, 1), Error);
  CHECK_THROWS_AS(apply_lambda_m(f, -2), Error);
}

TEST_CASE("reduced kernel") {
  // closed form on r < rho, support on r > rho, homogeneity
  for (int k : {0, 2}) {
    const Complex inside = reduced_kernel_nk(2.0, 0.7, k);
    CHECK(inside.real() ==
          doctest::Approx(reduced_kernel_nk_closed_form(2.0, 0.7, k))
              .epsilon(1e-8));
    CHECK(std::abs(inside.imag()) < 1e-9);
    const Complex outside = reduced_kernel_nk(1.0, 1.9, k);
    CHECK(std::abs(outside) < 1e-9);
  }
  // scaling: N_0(l rho, l r) = l^-2 N_0(rho, r)
  const Complex base = reduced_kernel_nk(1.3, 0.4, 0);
  const Complex scaled = reduced_kernel_nk(2.6, 0.8, 0);
  CHECK(scaled.real() == doctest::Approx(0.25 * base.real()).epsilon(1e-8));
  CHECK_THROWS_AS(reduced_kernel_nk(1.0, 1.0 + 1e-12, 0), Error);
}

TEST_CASE("stretch derivatives") {
  auto rg = RadialGrid::log_spaced(1e-3, 1e3, 900, Measure::Radial);
  // g(r) = r has dbar = 2, dmag = 0; embed it with vanishing edges relaxed
  // by building through beta = 1 instead
  auto rho = RadialGrid::log_spaced(1e-6, 1e6, 900, Measure::Lebesgue);
  std::vector<double> ones(rho->size(), 1.0);
  StretchProfile s = stretch_from_beta(real_profile(rho, ones));
  const auto d = stretch_derivatives(s);
  for (std::size_t i = 10; i + 10 < d.dbar.size(); ++i) {
    CHECK(d.dbar.samples[i].real() == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(std::abs(d.dmag.samples[i]) < 1e-10);
  }
  // g(r) = r means beta = 1 and g(sqrt(rho)) = sqrt(rho)
  for (std::size_t i = 0; i < s.g.size(); ++i)
    CHECK(s.g.samples[i].real() ==
          doctest::Approx(s.g.grid->node(i)).epsilon(1e-12));

  // finite-difference check of the supplied derivative; uniform grid keeps
  // the centered difference second order
  auto ug = RadialGrid::linear(0.5, 8.0, 20001, Measure::Radial);
  std::vector<Complex> gg(ug->size()), gp(ug->size());
  for (std::size_t i = 0; i < ug->size(); ++i) {
    const double r = ug->node(i);
    const double e = std::exp(-0.5 * (r - 3.0) * (r - 3.0));
    gg[i] = r * e;
    gp[i] = e * (1.0 - r * (r - 3.0));
  }
  StretchProfile a;
  a.g = RadialProfile(ug, gg);
  a.gprime = RadialProfile(ug, gp);
  double gpmax = 0.0;
  for (const auto& v : gp) gpmax = std::max(gpmax, std::abs(v));
  for (std::size_t i = 1; i + 1 < ug->size(); ++i) {
    const double h = ug->node(i + 1) - ug->node(i - 1);
    const double fd = (a.g.samples[i + 1].real() - a.g.samples[i - 1].real()) / h;
    if (std::abs(a.gprime.samples[i].real()) > 0.3 * gpmax)
      CHECK(fd == doctest::Approx(a.gprime.samples[i].real()).epsilon(2e-6));
  }
}

TEST_CASE("beta round trip and the H - I identity") {
  auto rho = RadialGrid::log_spaced(1e-6, 1e6, 2000, Measure::Lebesgue);
  Rng rng(33);
  RadialProfile beta = fixtures::random_beta(rho, rng);
  StretchProfile s = stretch_from_beta(beta);
  RadialProfile back = beta_from_stretch(s, rho);
  double worst = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < rho->size(); ++i) {
    worst = std::max(worst, std::abs(back.samples[i] - beta.samples[i]));
    scale = std::max(scale, std::abs(beta.samples[i]));
  }
  CHECK(worst <= 1e-8 * scale * 10.0);

  // H - I identity residual for the analytic stretch
  auto rg = RadialGrid::log_spaced(1e-3, 1e3, 1500, Measure::Radial);
  const double res = hm_identity_residual(analytic_stretch(rg));
  CHECK(res < 1e-4);
  // refinement improves it by at least 2x
  auto rg2 = RadialGrid::log_spaced(1e-3, 1e3, 3000, Measure::Radial);
  const double res2 = hm_identity_residual(analytic_stretch(rg2));
  CHECK(res2 <= 0.55 * res);

  // zero stretch
  std::vector<double> z(rho->size(), 0.0);
  StretchProfile zs = stretch_from_beta(real_profile(rho, z));
  CHECK(hm_identity_residual(zs) == 0.0);
}

TEST_CASE("support mismatch detection") {
  auto rg = RadialGrid::log_spaced(1e-3, 1e3, 400, Measure::Radial);
  StretchProfile s = analytic_stretch(rg);
  auto narrow = RadialGrid::log_spaced(1.0, 2.0, 50, Measure::Lebesgue);
  CHECK_THROWS_AS(beta_from_stretch(s, narrow), Error);
}

TEST_CASE("mode projection") {
  auto grid = RadialGrid::linear(0.05, 2.0, 60, Measure::Radial);
  const auto radial = [](double x, double y) {
    const double r = std::hypot(x, y);
    return Complex(std::exp(-r * r), 0.0);
  };
  RadialProfile p0 = project_mode(radial, 0, grid);
  RadialProfile p1 = project_mode(radial, 1, grid);
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const double r = grid->node(i);
    CHECK(p0.samples[i].real() == doctest::Approx(std::exp(-r * r)).epsilon(1e-10));
    CHECK(std::abs(p1.samples[i]) < 1e-10);
  }
  // e^{2 i theta} m(r) lives in mode -2 of the e^{-ik theta} convention
  const auto mode2 = [](double x, double y) {
    const double r = std::hypot(x, y);
    const double th = std::atan2(y, x);
    const double m = std::exp(-(r - 1.0) * (r - 1.0) * 8.0);
    return Complex(m * std::cos(2 * th), m * std::sin(2 * th));
  };
  RadialProfile pm2 = project_mode(mode2, -2, grid);
  RadialProfile pp2 = project_mode(mode2, 2, grid);
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const double r = grid->node(i);
    const double m = std::exp(-(r - 1.0) * (r - 1.0) * 8.0);
    CHECK(pm2.samples[i].real() == doctest::Approx(m).epsilon(1e-10).scale(1.0));
    CHECK(std::abs(pp2.samples[i]) < 1e-10);
  }
}

TEST_CASE("profile csv") {
  auto g = RadialGrid::linear(0.1, 1.0, 4, Measure::Lebesgue);
  RadialProfile p(g, {Complex(1, 2), Complex(3, 4), Complex(5, 6), Complex(7, 8)});
  const std::string path = "test_profile.csv";
  p.write_csv(path);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "node,re,im");
  std::string first;
  std::getline(in, first);
  CHECK(first.substr(0, 3) == "0.1");
  std::remove(path.c_str());
}
