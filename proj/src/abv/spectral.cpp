#include "abv/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "abv/quadrature.hpp"
#include "abv/rng.hpp"

namespace abv {

namespace {

// Coefficient of g_j in the exact piecewise-linear cumulative
// int_0^{u_i} v^q g(v) dv. Cells are [u_{k-1}, u_k]; the [0, u_0] cell uses
// the constant extension of g_0.
struct PrefixCoeffs {
  std::vector<double> ca;  // ca[k]: weight on g_{k-1} from cell k
  std::vector<double> cb;  // cb[k]: weight on g_k   from cell k
  double first = 0.0;      // weight on g_0 from [0, u_0]

  PrefixCoeffs(const RadialGrid& grid, int q) {
    const auto& u = grid.nodes();
    const std::size_t n = u.size();
    ca.assign(n, 0.0);
    cb.assign(n, 0.0);
    first = std::pow(u[0], q + 1) / (q + 1);
    for (std::size_t k = 1; k < n; ++k) {
      const double a = u[k - 1], b = u[k];
      if (q == 0) {
        ca[k] = cb[k] = 0.5 * (b - a);
      } else {
        const double iq = (std::pow(b, q + 1) - std::pow(a, q + 1)) / (q + 1);
        const double iq1 = (std::pow(b, q + 2) - std::pow(a, q + 2)) / (q + 2);
        cb[k] = (iq1 - a * iq) / (b - a);
        ca[k] = iq - cb[k];
      }
    }
  }

  std::vector<double> prefix(const std::vector<double>& g) const {
    const std::size_t n = g.size();
    std::vector<double> s(n);
    s[0] = first * g[0];
    for (std::size_t k = 1; k < n; ++k)
      s[k] = s[k - 1] + ca[k] * g[k - 1] + cb[k] * g[k];
    return s;
  }

  // transpose of the prefix map: out_j = sum_{i >= j} coef(j in prefix_i) v_i
  std::vector<double> prefix_transpose(const std::vector<double>& v) const {
    const std::size_t n = v.size();
    std::vector<double> suffix(n + 1, 0.0);
    for (std::size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] + v[i];
    std::vector<double> out(n, 0.0);
    out[0] = first * suffix[0];
    for (std::size_t k = 1; k < n; ++k) {
      out[k - 1] += ca[k] * suffix[k];
      out[k] += cb[k] * suffix[k];
    }
    return out;
  }
};

struct KindShape {
  double diag;  // alpha in K = alpha*I + scale(u) * Prefix_q
  int q;
  bool lambda;
  int m;
  double scale(double u) const {
    return lambda ? -(m + 1.0) * std::pow(u, -0.5 * (m + 2.0)) : 1.0 / u;
  }
};

KindShape shape_of(OperatorKind kind, int m) {
  switch (kind) {
    case OperatorKind::Hardy:
      return {0.0, 0, false, 0};
    case OperatorKind::HardyMinusId:
      return {-1.0, 0, false, 0};
    case OperatorKind::Lambda:
      return {1.0, m / 2, true, m};
    case OperatorKind::Custom:
      break;
  }
  fail(ErrorCode::Internal, "custom operators carry no structural shape");
}

}  // namespace

std::string kind_name(OperatorKind k, int m) {
  switch (k) {
    case OperatorKind::Hardy:
      return "hardy";
    case OperatorKind::HardyMinusId:
      return "hardy_minus_id";
    case OperatorKind::Lambda:
      return "lambda(" + std::to_string(m) + ")";
    case OperatorKind::Custom:
      return "custom";
  }
  return "?";
}

TriangularOperator::TriangularOperator(GridPtr grid, OperatorKind kind, int m,
                                       std::vector<double> dense)
    : grid_(std::move(grid)), kind_(kind), m_(m), n_(grid_->size()),
      dense_(std::move(dense)) {
  require(dense_.size() == n_ * n_, ErrorCode::InvalidArgument,
          "dense matrix size mismatch");
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j)
      require(dense_[i * n_ + j] == 0.0, ErrorCode::InvalidArgument,
              "operator must be lower triangular");
}

TriangularOperator TriangularOperator::discretize(OperatorKind kind, GridPtr grid,
                                                  int m) {
  require(kind != OperatorKind::Custom, ErrorCode::InvalidArgument,
          "use TriangularOperator::custom for explicit matrices");
  require(grid->measure() == Measure::Lebesgue, ErrorCode::InvalidArgument,
          "Hardy-type operators need a Lebesgue-measure grid");
  if (kind == OperatorKind::Lambda)
    require(m >= 0 && m % 2 == 0, ErrorCode::InvalidArgument,
            "Lambda_m defined for even m >= 0");
  const KindShape sh = shape_of(kind, m);
  const PrefixCoeffs pc(*grid, sh.q);
  const std::size_t n = grid->size();
  std::vector<double> dense(n * n, 0.0);
  std::vector<double> row(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(row.begin(), row.end(), 0.0);
    row[0] = pc.first;
    for (std::size_t k = 1; k <= i; ++k) {
      row[k - 1] += pc.ca[k];
      row[k] += pc.cb[k];
    }
    const double s = sh.scale(grid->node(i));
    for (std::size_t j = 0; j <= i; ++j) dense[i * n + j] = s * row[j];
    dense[i * n + i] += sh.diag;
  }
  return TriangularOperator(std::move(grid), kind, m, std::move(dense));
}

TriangularOperator TriangularOperator::custom(GridPtr grid,
                                              std::vector<double> dense) {
  return TriangularOperator(std::move(grid), OperatorKind::Custom, 0,
                            std::move(dense));
}

TriangularOperator TriangularOperator::identity(GridPtr grid) {
  const std::size_t n = grid->size();
  std::vector<double> dense(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) dense[i * n + i] = 1.0;
  return custom(std::move(grid), std::move(dense));
}

std::vector<double> TriangularOperator::apply_dense(
    const std::vector<double>& x) const {
  require(x.size() == n_, ErrorCode::InvalidArgument, "vector size mismatch");
  std::vector<double> y(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    const double* row = dense_.data() + i * n_;
    double acc = 0.0;
    for (std::size_t j = 0; j <= i; ++j) acc += row[j] * x[j];
    y[i] = acc;
  }
  return y;
}

std::vector<double> TriangularOperator::apply(const std::vector<double>& x) const {
  if (kind_ == OperatorKind::Custom) return apply_dense(x);
  const KindShape sh = shape_of(kind_, m_);
  const PrefixCoeffs pc(grid(), sh.q);
  auto s = pc.prefix(x);
  std::vector<double> y(n_);
  for (std::size_t i = 0; i < n_; ++i)
    y[i] = sh.diag * x[i] + sh.scale(grid().node(i)) * s[i];
  return y;
}

std::vector<double> TriangularOperator::apply_transpose(
    const std::vector<double>& y) const {
  require(y.size() == n_, ErrorCode::InvalidArgument, "vector size mismatch");
  if (kind_ == OperatorKind::Custom) {
    std::vector<double> out(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
      const double* row = dense_.data() + i * n_;
      const double v = y[i];
      for (std::size_t j = 0; j <= i; ++j) out[j] += row[j] * v;
    }
    return out;
  }
  const KindShape sh = shape_of(kind_, m_);
  const PrefixCoeffs pc(grid(), sh.q);
  std::vector<double> scaled(n_);
  for (std::size_t i = 0; i < n_; ++i)
    scaled[i] = sh.scale(grid().node(i)) * y[i];
  auto out = pc.prefix_transpose(scaled);
  for (std::size_t i = 0; i < n_; ++i) out[i] += sh.diag * y[i];
  return out;
}

std::string NormEstimate::to_json(OperatorKind kind, int m, double p) const {
  std::ostringstream os;
  os.precision(17);
  os << "{\"kind\":\"" << kind_name(kind, m) << "\",\"p\":" << p
     << ",\"value\":" << value << ",\"iterations\":" << iterations
     << ",\"converged\":" << (converged ? "true" : "false") << ",\"gridSpec\":{"
     << "\"min\":" << witness.grid->nodes().front()
     << ",\"max\":" << witness.grid->nodes().back()
     << ",\"n\":" << witness.grid->size() << "}}";
  return os.str();
}

namespace {

double weighted_lp(const RadialGrid& g, const std::vector<double>& x, double p) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    acc += g.weight(i) * std::pow(std::abs(x[i]), p);
  return std::pow(acc, 1.0 / p);
}

void check_finite(const std::vector<double>& x) {
  for (double v : x)
    require(std::isfinite(v), ErrorCode::NanDetected,
            "NaN detected in norm iteration");
}

std::vector<double> duality_map(const std::vector<double>& x, double exponent) {
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double a = std::abs(x[i]);
    y[i] = a == 0.0 ? 0.0 : std::pow(a, exponent) * (x[i] > 0 ? 1.0 : -1.0);
  }
  return y;
}

}  // namespace

NormEstimate estimate_norm(const TriangularOperator& op, const Exponent& e,
                           const NormEstimateOptions& opts) {
  const RadialGrid& grid = op.grid();
  const std::size_t n = op.size();
  const double p = e.p();
  const double pc = e.conj();
  Rng rng(opts.seed);

  NormEstimate best;
  for (int restart = 0; restart < std::max(1, opts.restarts); ++restart) {
    std::vector<double> u(n);
    if (restart == 0) {
      // tapered near-power profile, the known extremal shape for Hardy-type kinds
      const double lo = std::log(grid.node(0));
      const double hi = std::log(grid.node(n - 1));
      const double width = 0.15 * (hi - lo);
      for (std::size_t i = 0; i < n; ++i) {
        const double lu = std::log(grid.node(i));
        const double taper = std::min({(lu - lo) / width, (hi - lu) / width, 1.0});
        u[i] = std::pow(grid.node(i), -1.0 / p) * std::max(taper, 0.0);
      }
    } else if (restart == 1) {
      std::fill(u.begin(), u.end(), 1.0);
    } else if (restart % 2 == 0) {
      for (auto& v : u) v = rng.uniform(0.0, 1.0);
    } else {
      for (auto& v : u) v = rng.uniform(-1.0, 1.0);
    }

    double nu = weighted_lp(grid, u, p);
    if (nu == 0.0) continue;
    for (auto& v : u) v /= nu;

    std::vector<double> history;
    double rayleigh = 0.0;
    bool converged = false;
    int iters = 0;
    for (; iters < opts.max_iter; ++iters) {
      auto v = op.apply(u);
      check_finite(v);
      const double r = weighted_lp(grid, v, p);
      history.push_back(r);
      if (r == 0.0) break;
      if (iters > 0 && std::abs(r - rayleigh) <= opts.tol * r) {
        rayleigh = std::max(rayleigh, r);
        converged = true;
        break;
      }
      rayleigh = r;
      // gradient of ||Ku||_p in the weighted pairing, mapped back through the
      // inverse duality map
      auto d = duality_map(v, p - 1.0);
      for (std::size_t i = 0; i < n; ++i) d[i] *= grid.weight(i);
      auto z = op.apply_transpose(d);
      for (std::size_t i = 0; i < n; ++i) z[i] /= grid.weight(i);
      u = duality_map(z, pc - 1.0);
      nu = weighted_lp(grid, u, p);
      if (nu == 0.0) break;
      for (auto& v2 : u) v2 /= nu;
      check_finite(u);
    }

    if (rayleigh > best.value) {
      best.value = rayleigh;
      best.witness = real_profile(op.grid_ptr(), u);
      best.iterations = iters;
      best.converged = converged;
      best.history = std::move(history);
    }
  }

  require(best.witness.grid != nullptr, ErrorCode::Internal,
          "norm estimation produced no usable start");
  // certify with the dense matrix
  auto w = real_part(best.witness);
  const double den = weighted_lp(grid, w, p);
  best.value = weighted_lp(grid, op.apply_dense(w), p) / den;
  return best;
}

namespace {

// Exact piecewise-linear beta calculus: beta linear between rho-nodes,
// constant on [0, rho_0]; S(rho) = int_0^rho beta is quadratic per cell, so
// any smooth functional of (beta, H beta) integrates to near machine accuracy
// with a per-cell 8-point Gauss rule.
struct BetaModel {
  const RadialGrid& grid;
  std::vector<double> beta;
  std::vector<double> prefix;  // S at nodes
  double total = 0.0;

  explicit BetaModel(const RadialProfile& b)
      : grid(*b.grid), beta(real_part(b)) {
    const auto& u = grid.nodes();
    prefix.resize(u.size());
    prefix[0] = beta[0] * u[0];
    for (std::size_t k = 1; k < u.size(); ++k)
      prefix[k] = prefix[k - 1] +
                  0.5 * (beta[k - 1] + beta[k]) * (u[k] - u[k - 1]);
    total = prefix.back();
  }

  template <typename F>  // F(beta(rho), Hbeta(rho)) -> double
  double integrate(F&& f) const {
    const auto& u = grid.nodes();
    double acc = 0.0;
    // [0, rho_0]: beta constant, so H beta = beta_0 on the whole cell
    for (int g = 0; g < 8; ++g)
      acc += 0.5 * u[0] * kGauss8Weights[g] * f(beta[0], beta[0]);
    for (std::size_t k = 1; k < u.size(); ++k) {
      const double a = u[k - 1], b = u[k];
      const double h = 0.5 * (b - a);
      const double mid = 0.5 * (a + b);
      const double slope = (beta[k] - beta[k - 1]) / (b - a);
      for (int g = 0; g < 8; ++g) {
        const double rho = mid + h * kGauss8Nodes[g];
        const double bv = beta[k - 1] + slope * (rho - a);
        const double s = prefix[k - 1] + (rho - a) * beta[k - 1] +
                         0.5 * slope * (rho - a) * (rho - a);
        acc += h * kGauss8Weights[g] * f(bv, s / rho);
      }
    }
    return acc;
  }
};

double tail_power_integral(double c, double rho_max, double p) {
  // int_{rho_max}^inf (c / rho)^p d rho
  return std::pow(std::abs(c), p) * std::pow(rho_max, 1.0 - p) / (p - 1.0);
}

}  // namespace

double stretch_ratio(const StretchProfile& s, const Exponent& e) {
  s.validate();
  const double p = e.p();
  if (s.beta && !s.complex_allowed) {
    const BetaModel model(*s.beta);
    const double den =
        model.integrate([&](double b, double) { return std::pow(std::abs(2.0 * b), p); });
    require(den > 0.0, ErrorCode::ZeroDenominator, "stretch is identically zero");
    double num = model.integrate([&](double b, double hb) {
      return std::pow(std::abs(2.0 * (b - hb)), p);
    });
    num += tail_power_integral(2.0 * model.total, model.grid.nodes().back(), p);
    return std::pow(num / den, 1.0 / p);
  }
  const auto d = stretch_derivatives(s);
  const double den = lp_norm(d.dbar, e);
  require(den > 0.0, ErrorCode::ZeroDenominator, "stretch is identically zero");
  return lp_norm(d.dmag, e) / den;
}

ModeFunctional mode_functional(const StretchProfile& s, const Exponent& e) {
  s.validate();
  const double p = e.p();
  const double ps = e.star();
  ModeFunctional out;
  const auto lp_pair = [&](double x, double y) {
    const double sum = x + y;
    return sum == 0.0 ? 0.0 : ((ps - 1.0) * x - y) * std::pow(sum, p - 1.0);
  };
  const auto lp_abs = [&](double x, double y) {
    const double sum = x + y;
    return sum == 0.0 ? 0.0 : ((ps - 1.0) * x + y) * std::pow(sum, p - 1.0);
  };
  if (s.beta && !s.complex_allowed) {
    const BetaModel model(*s.beta);
    const double pi = std::numbers::pi;
    out.value = pi * model.integrate([&](double b, double hb) {
      return lp_pair(std::abs(2.0 * b), std::abs(2.0 * (b - hb)));
    });
    out.scale = pi * model.integrate([&](double b, double hb) {
      return lp_abs(std::abs(2.0 * b), std::abs(2.0 * (b - hb)));
    });
    const double tail =
        pi * tail_power_integral(2.0 * model.total, model.grid.nodes().back(), p);
    out.value -= tail;  // beyond the grid dbar = 0, so L_p = -|dmag|^p there
    out.scale += tail;
    return out;
  }
  const auto d = stretch_derivatives(s);
  const auto& grid = *s.g.grid;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = std::abs(d.dbar.samples[i]);
    const double y = std::abs(d.dmag.samples[i]);
    out.value += 2.0 * std::numbers::pi * grid.weight(i) * lp_pair(x, y);
    out.scale += 2.0 * std::numbers::pi * grid.weight(i) * lp_abs(x, y);
  }
  return out;
}

MaximizeResult maximize_stretch_ratio(const Exponent& e, const MaximizeOptions& opts) {
  GridPtr rho = opts.rho_grid;
  if (!rho) rho = RadialGrid::log_spaced(1e-6, 1e6, 4000, Measure::Lebesgue);
  const std::size_t n = rho->size();
  const double p = e.p();
  const double rho_max = rho->nodes().back();

  // the near-extremal profiles need the whole span; the grid edges stand in
  // for 0 and infinity
  const std::size_t lo = 0;
  const std::size_t hi = n - 1;

  const PrefixCoeffs pc(*rho, 0);
  // full-integral coefficients (for S_tot and its gradient)
  std::vector<double> qcoef(n, 0.0);
  qcoef[0] = pc.first;
  for (std::size_t k = 1; k < n; ++k) {
    qcoef[k - 1] += pc.ca[k];
    qcoef[k] += pc.cb[k];
  }

  const auto objective = [&](const std::vector<double>& beta, double& num,
                             double& den, double& stot) {
    auto s = pc.prefix(beta);
    stot = s.back();
    num = 0.0;
    den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double a = beta[i] - s[i] / rho->node(i);
      num += rho->weight(i) * std::pow(std::abs(a), p);
      den += rho->weight(i) * std::pow(std::abs(beta[i]), p);
    }
    num += tail_power_integral(stot, rho_max, p);
    return den > 0.0 ? num / den : 0.0;
  };

  std::vector<double> theta(n, 0.0);
  {
    const double llo = std::log(rho->node(lo));
    const double lhi = std::log(rho->node(hi));
    const double width = 0.15 * (lhi - llo);
    for (std::size_t i = lo; i <= hi; ++i) {
      const double lr = std::log(rho->node(i));
      const double taper =
          std::max(0.0, std::min({(lr - llo) / width, (lhi - lr) / width, 1.0}));
      theta[i] = std::sqrt(std::pow(rho->node(i), -1.0 / p) * taper);
    }
  }

  MaximizeResult res;
  std::vector<double> beta(n, 0.0), grad(n, 0.0);
  double num = 0.0, den = 0.0, stot = 0.0;
  for (std::size_t i = 0; i < n; ++i) beta[i] = theta[i] * theta[i];
  double value = objective(beta, num, den, stot);
  double step = 0.1;
  int it = 0;
  for (; it < opts.max_iter; ++it) {
    // gradient of num/den with respect to beta, then chain through beta=theta^2
    auto s = pc.prefix(beta);
    std::vector<double> jp(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double a = beta[i] - s[i] / rho->node(i);
      jp[i] = rho->weight(i) * p *
              (a == 0.0 ? 0.0 : std::pow(std::abs(a), p - 1.0) * (a > 0 ? 1 : -1));
    }
    // (I - H)^T jp = jp - prefix_transpose(jp / rho)
    std::vector<double> scaled(n);
    for (std::size_t i = 0; i < n; ++i) scaled[i] = jp[i] / rho->node(i);
    auto ht = pc.prefix_transpose(scaled);
    const double tail_grad_c =
        stot > 0.0 ? p * std::pow(stot, p - 1.0) * std::pow(rho_max, 1.0 - p) / (p - 1.0)
                   : 0.0;
    double gnorm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double dnum = jp[i] - ht[i] + tail_grad_c * qcoef[i];
      const double b = beta[i];
      const double dden =
          rho->weight(i) * p *
          (b == 0.0 ? 0.0 : std::pow(b, p - 1.0));
      double g = (dnum * den - num * dden) / (den * den);
      g *= 2.0 * theta[i];
      if (i < lo || i > hi) g = 0.0;
      grad[i] = g;
      gnorm = std::max(gnorm, std::abs(g));
    }
    if (gnorm == 0.0) {
      res.converged = true;
      break;
    }
    // backtracking ascent step on R^p
    bool improved = false;
    for (int bt = 0; bt < 40; ++bt) {
      std::vector<double> t2(theta);
      for (std::size_t i = lo; i <= hi; ++i) t2[i] += step / gnorm * grad[i];
      std::vector<double> b2(n, 0.0);
      for (std::size_t i = 0; i < n; ++i) b2[i] = t2[i] * t2[i];
      double n2, d2, s2;
      const double v2 = objective(b2, n2, d2, s2);
      if (v2 > value) {
        theta = std::move(t2);
        beta = std::move(b2);
        const double rel = (v2 - value) / v2;
        value = v2;
        num = n2;
        den = d2;
        stot = s2;
        improved = true;
        step *= 1.5;
        if (rel < opts.tol) {
          res.converged = true;
          it = opts.max_iter;  // done
        }
        break;
      }
      step *= 0.5;
    }
    if (!improved) {
      res.converged = true;
      break;
    }
  }
  res.iterations = std::min(it, opts.max_iter);

  // rescale to a tame amplitude and build the witness stretch
  double bmax = 0.0;
  for (double b : beta) bmax = std::max(bmax, b);
  require(bmax > 0.0, ErrorCode::Internal, "maximizer lost the profile");
  for (auto& b : beta) b /= bmax;
  res.witness = stretch_from_beta(real_profile(rho, beta));
  res.ratio = stretch_ratio(res.witness, e);
  res.bound_violated = res.ratio > e.star() - 1.0 + 1e-9;
  return res;
}

}  // namespace abv
