#include "abv/radial.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

namespace abv {

RadialGrid::RadialGrid(std::vector<double> nodes, Measure measure)
    : nodes_(std::move(nodes)), measure_(measure) {
  require(nodes_.size() >= 2, ErrorCode::InvalidArgument, "grid needs >= 2 nodes");
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    require(std::isfinite(nodes_[i]) && nodes_[i] > 0.0, ErrorCode::InvalidArgument,
            "grid nodes must be positive");
    if (i > 0)
      require(nodes_[i] > nodes_[i - 1], ErrorCode::InvalidArgument,
              "grid nodes must be strictly increasing");
  }
  const std::size_t n = nodes_.size();
  weights_.assign(n, 0.0);
  // trapezoid cell halves plus the [0, u0] cell on the first node
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = nodes_[i + 1] - nodes_[i];
    weights_[i] += 0.5 * h;
    weights_[i + 1] += 0.5 * h;
  }
  if (measure_ == Measure::Lebesgue) {
    weights_[0] += nodes_[0];
  } else {
    for (std::size_t i = 0; i < n; ++i) weights_[i] *= nodes_[i];
    weights_[0] += 0.5 * nodes_[0] * nodes_[0];
  }
}

std::shared_ptr<const RadialGrid> RadialGrid::log_spaced(double umin, double umax,
                                                         std::size_t n, Measure m) {
  require(umin > 0.0 && umax > umin && n >= 2, ErrorCode::InvalidArgument,
          "log grid needs 0 < umin < umax, n >= 2");
  std::vector<double> nodes(n);
  const double step = std::log(umax / umin) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i)
    nodes[i] = umin * std::exp(static_cast<double>(i) * step);
  nodes.front() = umin;
  nodes.back() = umax;
  return std::make_shared<RadialGrid>(std::move(nodes), m);
}

std::shared_ptr<const RadialGrid> RadialGrid::linear(double umin, double umax,
                                                     std::size_t n, Measure m) {
  require(umin > 0.0 && umax > umin && n >= 2, ErrorCode::InvalidArgument,
          "linear grid needs 0 < umin < umax, n >= 2");
  std::vector<double> nodes(n);
  const double step = (umax - umin) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) nodes[i] = umin + static_cast<double>(i) * step;
  nodes.back() = umax;
  return std::make_shared<RadialGrid>(std::move(nodes), m);
}

RadialProfile::RadialProfile(GridPtr g, std::vector<Complex> s, int k)
    : grid(std::move(g)), samples(std::move(s)), mode_index(k) {
  require(grid != nullptr, ErrorCode::InvalidArgument, "profile needs a grid");
  require(samples.size() == grid->size(), ErrorCode::InvalidArgument,
          "profile length must match grid");
  for (const auto& v : samples)
    require(std::isfinite(v.real()) && std::isfinite(v.imag()),
            ErrorCode::InvalidArgument, "profile samples must be finite");
}

void RadialProfile::write_csv(const std::string& path) const {
  std::ofstream out(path);
  require(out.good(), ErrorCode::Io, "cannot open " + path);
  out << "node,re,im\n";
  out.precision(17);
  for (std::size_t i = 0; i < size(); ++i)
    out << grid->node(i) << ',' << samples[i].real() << ',' << samples[i].imag()
        << '\n';
  require(out.good(), ErrorCode::Io, "write failed for " + path);
}

RadialProfile real_profile(GridPtr g, const std::vector<double>& s, int k) {
  std::vector<Complex> c(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) c[i] = Complex(s[i], 0.0);
  return RadialProfile(std::move(g), std::move(c), k);
}

std::vector<double> real_part(const RadialProfile& p) {
  std::vector<double> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = p.samples[i].real();
  return out;
}

double lp_norm(const RadialProfile& f, const Exponent& e) {
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    acc += f.grid->weight(i) * std::pow(std::abs(f.samples[i]), e.p());
  return std::pow(acc, 1.0 / e.p());
}

double lp_norm(const RadialGrid& grid, const std::vector<double>& samples,
               const Exponent& e) {
  double acc = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i)
    acc += grid.weight(i) * std::pow(std::abs(samples[i]), e.p());
  return std::pow(acc, 1.0 / e.p());
}

namespace {

// Cumulative int_0^{u_i} v^q g(v) dv for the piecewise-linear interpolant,
// exact per cell. q = 0 uses the midpoint form so that Lambda_0 and I - H
// agree bitwise.
template <typename T>
std::vector<T> cumulative_moment(const RadialGrid& grid, const std::vector<T>& g,
                                 int q) {
  const auto& u = grid.nodes();
  const std::size_t n = u.size();
  std::vector<T> s(n);
  s[0] = g[0] * (std::pow(u[0], q + 1) / (q + 1));
  for (std::size_t i = 1; i < n; ++i) {
    const double a = u[i - 1], b = u[i];
    T cell;
    if (q == 0) {
      cell = (g[i - 1] + g[i]) * (0.5 * (b - a));
    } else {
      const double iq = (std::pow(b, q + 1) - std::pow(a, q + 1)) / (q + 1);
      const double iq1 = (std::pow(b, q + 2) - std::pow(a, q + 2)) / (q + 2);
      const double cb = (iq1 - a * iq) / (b - a);
      const double ca = iq - cb;
      cell = g[i - 1] * ca + g[i] * cb;
    }
    s[i] = s[i - 1] + cell;
  }
  return s;
}

}  // namespace

RadialProfile apply_hardy(const RadialProfile& g) {
  require(g.grid->measure() == Measure::Lebesgue, ErrorCode::InvalidArgument,
          "Hardy operator needs a Lebesgue-measure grid");
  auto s = cumulative_moment(*g.grid, g.samples, 0);
  std::vector<Complex> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = s[i] / g.grid->node(i);
  return RadialProfile(g.grid, std::move(out), g.mode_index);
}

RadialProfile apply_lambda_m(const RadialProfile& g, int m) {
  require(g.grid->measure() == Measure::Lebesgue, ErrorCode::InvalidArgument,
          "Lambda_m needs a Lebesgue-measure grid");
  require(m >= 0 && m % 2 == 0, ErrorCode::InvalidArgument,
          "Lambda_m defined for even m >= 0");
  auto s = cumulative_moment(*g.grid, g.samples, m / 2);
  std::vector<Complex> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double u = g.grid->node(i);
    out[i] = g.samples[i] -
             (m + 1.0) * std::pow(u, -0.5 * (m + 2.0)) * s[i];
  }
  return RadialProfile(g.grid, std::move(out), g.mode_index);
}

MonotoneCubic::MonotoneCubic(const std::vector<double>& xs,
                             const std::vector<double>& ys)
    : xs_(xs), ys_(ys) {
  require(xs.size() == ys.size() && xs.size() >= 2, ErrorCode::InvalidArgument,
          "interpolant needs matching xs/ys with >= 2 points");
  const std::size_t n = xs.size();
  std::vector<double> d(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = xs[i + 1] - xs[i];
    require(h > 0.0, ErrorCode::InvalidArgument, "interpolation nodes must increase");
    d[i] = (ys[i + 1] - ys[i]) / h;
  }
  slopes_.assign(n, 0.0);
  slopes_[0] = d[0];
  slopes_[n - 1] = d[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i)
    slopes_[i] = (d[i - 1] * d[i] > 0.0)
                     ? 2.0 * d[i - 1] * d[i] / (d[i - 1] + d[i])
                     : 0.0;
  // Fritsch-Carlson limiter
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (d[i] == 0.0) {
      slopes_[i] = slopes_[i + 1] = 0.0;
      continue;
    }
    const double a = slopes_[i] / d[i];
    const double b = slopes_[i + 1] / d[i];
    const double r = a * a + b * b;
    if (r > 9.0) {
      const double t = 3.0 / std::sqrt(r);
      slopes_[i] = t * a * d[i];
      slopes_[i + 1] = t * b * d[i];
    }
  }
}

double MonotoneCubic::operator()(double x) const {
  if (x < xs_.front() || x > xs_.back()) return 0.0;
  auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  std::size_t i = (it == xs_.begin()) ? 0 : static_cast<std::size_t>(it - xs_.begin()) - 1;
  if (i + 1 >= xs_.size()) i = xs_.size() - 2;
  const double h = xs_[i + 1] - xs_[i];
  const double t = (x - xs_[i]) / h;
  const double h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
  const double h10 = t * (1.0 - t) * (1.0 - t);
  const double h01 = t * t * (3.0 - 2.0 * t);
  const double h11 = t * t * (t - 1.0);
  return h00 * ys_[i] + h10 * h * slopes_[i] + h01 * ys_[i + 1] +
         h11 * h * slopes_[i + 1];
}

Complex reduced_kernel_nk(double rho, double r, int k) {
  require(rho > 0.0 && r > 0.0, ErrorCode::InvalidArgument, "need rho, r > 0");
  require(std::abs(r - rho) >= 1e-8 * std::max(r, rho), ErrorCode::SingularPoint,
          "reduced kernel is singular at r = rho");
  const auto kernel = [&](double t) -> Complex {
    const Complex z = r * Complex(std::cos(t), std::sin(t)) + rho;
    const Complex K = -1.0 / (std::numbers::pi * z * z);
    return K * Complex(std::cos(k * t), -std::sin(k * t));
  };
  // periodic trapezoid, doubled until stable
  Complex prev(0.0, 0.0);
  int n = 256;
  Complex acc(0.0, 0.0);
  for (int iter = 0; iter < 14; ++iter, n *= 2) {
    acc = Complex(0.0, 0.0);
    const double h = 2.0 * std::numbers::pi / n;
    for (int i = 0; i < n; ++i) acc += kernel(i * h);
    acc *= h;
    if (iter > 0 && std::abs(acc - prev) < 1e-10) return acc;
    prev = acc;
  }
  return acc;
}

double reduced_kernel_nk_closed_form(double rho, double r, int k) {
  require(k >= 0 && k % 2 == 0, ErrorCode::InvalidArgument,
          "closed form implemented for even k >= 0");
  if (r > rho) return 0.0;
  return -2.0 * (k + 1.0) * std::pow(r, k) / std::pow(rho, k + 2.0);
}

void StretchProfile::validate() const {
  require(g.grid != nullptr && gprime.grid == g.grid, ErrorCode::InvalidArgument,
          "stretch profile needs one shared grid");
  require(g.grid->measure() == Measure::Radial, ErrorCode::InvalidArgument,
          "stretch profiles live on r*dr grids");
  double gmax = 0.0;
  for (const auto& v : g.samples) gmax = std::max(gmax, std::abs(v));
  if (!complex_allowed) {
    for (const auto& v : g.samples) {
      require(v.imag() == 0.0, ErrorCode::InvalidArgument, "stretch must be real");
      require(v.real() >= -1e-12 * gmax, ErrorCode::InvalidArgument,
              "stretch must be nonnegative");
    }
  }
  if (gmax == 0.0) return;
  // Stretches built through H(beta) vanish at 0 and infinity structurally
  // (g = sqrt(rho) H beta, with a 1/r tail past the grid), so the grid-edge
  // checks apply only to directly sampled stretches.
  if (beta.has_value()) return;
  const std::size_t n = g.size();
  const std::size_t edge = std::max<std::size_t>(1, n / 100);
  for (std::size_t i = 0; i < edge; ++i)
    require(std::abs(g.samples[i]) <= 1e-9 * gmax, ErrorCode::InvalidArgument,
            "stretch must vanish near r = 0");
  for (std::size_t i = n - edge; i < n; ++i)
    require(std::abs(g.samples[i]) <= 1e-9 * gmax, ErrorCode::InvalidArgument,
            "stretch must vanish at the outer edge");
}

RadialProfile beta_from_stretch(const StretchProfile& s, const GridPtr& rho_grid) {
  require(rho_grid->measure() == Measure::Lebesgue, ErrorCode::InvalidArgument,
          "beta lives on a Lebesgue rho-grid");
  // the rho-grid must cover the squared support of g
  const auto& rg = *s.g.grid;
  double lo = 0.0, hi = 0.0;
  double gmax = 0.0;
  for (const auto& v : s.g.samples) gmax = std::max(gmax, std::abs(v));
  for (std::size_t i = 0; i < s.g.size(); ++i) {
    if (std::abs(s.g.samples[i]) > 1e-12 * gmax) {
      if (lo == 0.0) lo = rg.node(i);
      hi = rg.node(i);
    }
  }
  if (gmax > 0.0 && lo > 0.0) {
    require(rho_grid->nodes().front() <= lo * lo * (1.0 + 1e-12) &&
                rho_grid->nodes().back() >= hi * hi * (1.0 - 1e-12),
            ErrorCode::SupportMismatch,
            "rho-grid does not cover the squared support of the stretch");
  }
  MonotoneCubic gi(rg.nodes(), real_part(s.g));
  MonotoneCubic gpi(rg.nodes(), real_part(s.gprime));
  std::vector<Complex> beta(rho_grid->size());
  for (std::size_t j = 0; j < rho_grid->size(); ++j) {
    const double r = std::sqrt(rho_grid->node(j));
    beta[j] = Complex(0.5 * (gpi(r) + gi(r) / r), 0.0);
  }
  return RadialProfile(rho_grid, std::move(beta));
}

StretchProfile stretch_from_beta(const RadialProfile& beta) {
  require(beta.grid->measure() == Measure::Lebesgue, ErrorCode::InvalidArgument,
          "beta lives on a Lebesgue rho-grid");
  RadialProfile hb = apply_hardy(beta);
  const std::size_t n = beta.size();
  std::vector<double> rnodes(n);
  for (std::size_t i = 0; i < n; ++i) rnodes[i] = std::sqrt(beta.grid->node(i));
  auto rgrid = std::make_shared<RadialGrid>(std::move(rnodes), Measure::Radial);
  std::vector<Complex> g(n), gp(n);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = std::sqrt(beta.grid->node(i)) * hb.samples[i];
    gp[i] = 2.0 * beta.samples[i] - hb.samples[i];
  }
  StretchProfile out;
  out.g = RadialProfile(rgrid, std::move(g));
  out.gprime = RadialProfile(rgrid, std::move(gp));
  bool real_nonneg = true;
  for (const auto& v : beta.samples)
    if (v.imag() != 0.0 || v.real() < 0.0) real_nonneg = false;
  out.complex_allowed = !real_nonneg;
  out.beta = beta;
  return out;
}

StretchDerivatives stretch_derivatives(const StretchProfile& s) {
  const std::size_t n = s.g.size();
  std::vector<Complex> dbar(n), dmag(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = s.g.grid->node(i);
    dbar[i] = s.gprime.samples[i] + s.g.samples[i] / r;
    dmag[i] = s.gprime.samples[i] - s.g.samples[i] / r;
  }
  StretchDerivatives out;
  out.dbar = RadialProfile(s.g.grid, std::move(dbar));
  out.dmag = RadialProfile(s.g.grid, std::move(dmag), -2);
  return out;
}

double hm_identity_residual(const StretchProfile& s) {
  const auto& rg = *s.g.grid;
  const std::size_t n = rg.size();
  std::vector<double> rho(n);
  for (std::size_t i = 0; i < n; ++i) rho[i] = rg.node(i) * rg.node(i);
  auto rho_grid = std::make_shared<RadialGrid>(std::move(rho), Measure::Lebesgue);
  RadialProfile beta = beta_from_stretch(s, rho_grid);
  RadialProfile hb = apply_hardy(beta);
  const std::size_t skip = std::max<std::size_t>(2, n / 50);
  double worst = 0.0;
  for (std::size_t i = skip; i + skip < n; ++i) {
    const double r = rg.node(i);
    const Complex lhs =
        0.5 * (s.gprime.samples[i] - s.g.samples[i] / r);
    const Complex rhs = beta.samples[i] - hb.samples[i];
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

RadialProfile project_mode(const PlaneSampler& f, int k, const GridPtr& grid,
                           int n_phi) {
  require(n_phi >= 256, ErrorCode::InvalidArgument, "need n_phi >= 256");
  std::vector<Complex> out(grid->size());
  const double dphi = 2.0 * std::numbers::pi / n_phi;
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const double r = grid->node(i);
    Complex acc(0.0, 0.0);
    for (int j = 0; j < n_phi; ++j) {
      const double phi = j * dphi;
      acc += Complex(std::cos(k * phi), std::sin(k * phi)) *
             f(r * std::cos(phi), r * std::sin(phi));
    }
    out[i] = acc / static_cast<double>(n_phi);
  }
  return RadialProfile(grid, std::move(out), k);
}

}  // namespace abv
