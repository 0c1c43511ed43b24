#include "abv/planar.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <numbers>

namespace abv {

namespace {

std::mutex fftw_plan_mutex;

// In-place 2D FFT on an n x n complex buffer. Plan creation is serialized
// (FFTW requirement); execution uses the new-array interface.
void fft2(std::vector<Complex>& data, std::size_t n, int sign) {
  fftw_plan plan;
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex);
    plan = fftw_plan_dft_2d(static_cast<int>(n), static_cast<int>(n), ptr, ptr,
                            sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex);
    fftw_destroy_plan(plan);
  }
  if (sign == FFTW_BACKWARD) {
    const double scale = 1.0 / (static_cast<double>(n) * static_cast<double>(n));
    for (auto& v : data) v *= scale;
  }
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

PlaneField::PlaneField(std::size_t n, double extent, std::vector<Complex> samples)
    : n_(n), extent_(extent), samples_(std::move(samples)) {
  require(is_power_of_two(n_), ErrorCode::InvalidArgument, "n must be a power of two");
  require(extent_ > 0.0, ErrorCode::InvalidArgument, "extent must be positive");
  require(samples_.size() == n_ * n_, ErrorCode::InvalidArgument,
          "field needs n*n samples");
  for (const auto& v : samples_)
    require(std::isfinite(v.real()) && std::isfinite(v.imag()),
            ErrorCode::InvalidArgument, "field samples must be finite");
  refresh_mean();
}

PlaneField PlaneField::from_function(std::size_t n, double extent,
                                     const std::function<Complex(double, double)>& f) {
  std::vector<Complex> s(n * n);
  const double h = extent / static_cast<double>(n);
  for (std::size_t ix = 0; ix < n; ++ix) {
    const double x = -0.5 * extent + h * static_cast<double>(ix);
    for (std::size_t iy = 0; iy < n; ++iy) {
      const double y = -0.5 * extent + h * static_cast<double>(iy);
      s[ix * n + iy] = f(x, y);
    }
  }
  return PlaneField(n, extent, std::move(s));
}

PlaneField PlaneField::from_radial(std::size_t n, double extent,
                                   const std::function<Complex(double)>& g) {
  return from_function(n, extent,
                       [&](double x, double y) { return g(std::hypot(x, y)); });
}

void PlaneField::refresh_mean() {
  Complex acc(0.0, 0.0);
  for (const auto& v : samples_) acc += v;
  mean_ = acc / static_cast<double>(n_ * n_);
}

double PlaneField::max_abs() const {
  double m = 0.0;
  for (const auto& v : samples_) m = std::max(m, std::abs(v));
  return m;
}

Complex PlaneField::sample(double x, double y) const {
  const double h = spacing();
  const double gx = (x + 0.5 * extent_) / h;
  const double gy = (y + 0.5 * extent_) / h;
  const double fx = std::floor(gx);
  const double fy = std::floor(gy);
  const double tx = gx - fx;
  const double ty = gy - fy;
  const auto wrap = [this](long i) {
    const long m = static_cast<long>(n_);
    long r = i % m;
    if (r < 0) r += m;
    return static_cast<std::size_t>(r);
  };
  const auto cr = [](double t, double w[4]) {
    w[0] = ((-0.5 * t + 1.0) * t - 0.5) * t;
    w[1] = (1.5 * t - 2.5) * t * t + 1.0;
    w[2] = ((-1.5 * t + 2.0) * t + 0.5) * t;
    w[3] = (0.5 * t - 0.5) * t * t;
  };
  double wx[4], wy[4];
  cr(tx, wx);
  cr(ty, wy);
  Complex acc(0.0, 0.0);
  for (int a = 0; a < 4; ++a) {
    const std::size_t ix = wrap(static_cast<long>(fx) + a - 1);
    Complex row(0.0, 0.0);
    for (int b = 0; b < 4; ++b) {
      const std::size_t iy = wrap(static_cast<long>(fy) + b - 1);
      row += wy[b] * samples_[ix * n_ + iy];
    }
    acc += wx[a] * row;
  }
  return acc;
}

PlaneSampler PlaneField::sampler() const {
  return [this](double x, double y) { return sample(x, y); };
}

PlaneField PlaneField::apply_multiplier(
    const std::function<Complex(Complex)>& m) const {
  std::vector<Complex> hat(samples_);
  fft2(hat, n_, FFTW_FORWARD);
  const double base = 2.0 * std::numbers::pi / extent_;
  const long half = static_cast<long>(n_) / 2;
  for (std::size_t ix = 0; ix < n_; ++ix) {
    const long kx = static_cast<long>(ix) < half ? static_cast<long>(ix)
                                                 : static_cast<long>(ix) - static_cast<long>(n_);
    for (std::size_t iy = 0; iy < n_; ++iy) {
      const long ky = static_cast<long>(iy) < half ? static_cast<long>(iy)
                                                   : static_cast<long>(iy) - static_cast<long>(n_);
      const Complex xi(base * static_cast<double>(kx), base * static_cast<double>(ky));
      hat[ix * n_ + iy] *= m(xi);
    }
  }
  fft2(hat, n_, FFTW_BACKWARD);
  return PlaneField(n_, extent_, std::move(hat));
}

PlaneField ab_transform(const PlaneField& f) {
  require(std::abs(f.mean()) < 1e-12 * std::max(f.max_abs(), 1e-300),
          ErrorCode::NonzeroMean, "multiplier is undefined on the mean mode");
  return f.apply_multiplier([](Complex xi) {
    return xi == Complex(0.0, 0.0) ? Complex(0.0, 0.0) : std::conj(xi) / xi;
  });
}

PlaneField heat_extend(const PlaneField& f, double t) {
  require(t > 0.0, ErrorCode::InvalidArgument, "heat time must be positive");
  return f.apply_multiplier(
      [t](Complex xi) { return Complex(std::exp(-std::norm(xi) * t), 0.0); });
}

PlaneField d_op(const PlaneField& f) {
  return f.apply_multiplier(
      [](Complex xi) { return Complex(0.0, 1.0) * std::conj(xi); });
}

PlaneField dbar_op(const PlaneField& f) {
  return f.apply_multiplier([](Complex xi) { return Complex(0.0, 1.0) * xi; });
}

double l2_norm(const PlaneField& f) {
  double acc = 0.0;
  for (const auto& v : f.samples()) acc += std::norm(v);
  return std::sqrt(acc * f.cell_area());
}

Complex bilinear_pairing(const PlaneField& f, const PlaneField& g) {
  require(f.n() == g.n() && f.extent() == g.extent(), ErrorCode::InvalidArgument,
          "fields must share the grid");
  Complex acc(0.0, 0.0);
  for (std::size_t i = 0; i < f.samples().size(); ++i)
    acc += f.samples()[i] * g.samples()[i];
  return acc * f.cell_area();
}

double lp_norm_polar(const PlaneSampler& f, const Exponent& e, const GridPtr& rgrid,
                     int n_phi) {
  require(rgrid->measure() == Measure::Radial, ErrorCode::InvalidArgument,
          "polar norms need an r*dr grid");
  const double dphi = 2.0 * std::numbers::pi / n_phi;
  double acc = 0.0;
  for (std::size_t i = 0; i < rgrid->size(); ++i) {
    const double r = rgrid->node(i);
    double ring = 0.0;
    for (int j = 0; j < n_phi; ++j) {
      const double phi = j * dphi;
      ring += std::pow(std::abs(f(r * std::cos(phi), r * std::sin(phi))), e.p());
    }
    acc += rgrid->weight(i) * ring * dphi;
  }
  return std::pow(acc, 1.0 / e.p());
}

double lp_norm_mode(const RadialProfile& mode, const Exponent& e) {
  require(mode.grid->measure() == Measure::Radial, ErrorCode::InvalidArgument,
          "mode norms need an r*dr grid");
  double acc = 0.0;
  for (std::size_t i = 0; i < mode.size(); ++i)
    acc += mode.grid->weight(i) * std::pow(std::abs(mode.samples[i]), e.p());
  return std::pow(2.0 * std::numbers::pi * acc, 1.0 / e.p());
}

RadialProfile project_mode(const PlaneField& f, int k, const GridPtr& grid,
                           int n_phi) {
  require(grid->nodes().back() <= 0.5 * f.extent(), ErrorCode::NodeOutsideExtent,
          "grid nodes reach outside the field");
  return project_mode(f.sampler(), k, grid, n_phi);
}

CrosscheckResult crosscheck_radial(const std::function<double(double)>& g,
                                   std::size_t n, double extent) {
  PlaneField field = PlaneField::from_radial(n, extent, [&](double r) {
    return Complex(g(r), 0.0);
  });
  // Subtracting the mean only shifts the zero mode, which the multiplier
  // annihilates anyway.
  const Complex mean = field.mean();
  for (auto& v : field.samples()) v -= mean;
  field.refresh_mean();
  PlaneField out = ab_transform(field);

  const double h = out.spacing();
  const double r_lo = 2.0 * h;
  const double r_hi = 0.42 * extent;
  require(r_hi > r_lo, ErrorCode::NodeOutsideExtent, "field too coarse");
  auto rgrid = RadialGrid::linear(r_lo, r_hi, 240, Measure::Radial);
  const int n_phi = 512;

  CrosscheckResult res;
  double total = 0.0;
  double best = -1.0;
  RadialProfile best_mode;
  for (int k = -6; k <= 6; ++k) {
    RadialProfile mode = project_mode(out.sampler(), k, rgrid, n_phi);
    double energy = 0.0;
    for (std::size_t i = 0; i < mode.size(); ++i)
      energy += rgrid->weight(i) * std::norm(mode.samples[i]);
    total += energy;
    if (energy > best) {
      best = energy;
      res.phase_mode = k;
      best_mode = std::move(mode);
    }
  }
  res.concentration = total > 0.0 ? best / total : 0.0;
  require(res.concentration >= 0.99, ErrorCode::ResolutionInsufficient,
          "no single output mode carries 99% of the energy");

  // 1D prediction through Lambda_0 in u = rho^2
  const double umax = r_hi * r_hi * 1.05;
  auto ugrid = RadialGrid::log_spaced(1e-8 * umax, umax, 6000, Measure::Lebesgue);
  std::vector<Complex> gu(ugrid->size());
  for (std::size_t i = 0; i < ugrid->size(); ++i)
    gu[i] = Complex(g(std::sqrt(ugrid->node(i))), 0.0);
  RadialProfile pred_u = apply_lambda_m(RadialProfile(ugrid, std::move(gu)), 0);
  MonotoneCubic pred_interp(ugrid->nodes(), real_part(pred_u));

  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < rgrid->size(); ++i) {
    const double rho = rgrid->node(i);
    const double pred = pred_interp(rho * rho);
    num += rgrid->weight(i) * std::norm(best_mode.samples[i] - pred);
    den += rgrid->weight(i) * pred * pred;
  }
  require(den > 0.0, ErrorCode::ZeroDenominator, "prediction vanished");
  res.mismatch = std::sqrt(num / den);
  return res;
}

HextResult hext_residual(const PlaneField& f, const PlaneField& g, double t_max,
                         int nt) {
  require(nt >= 8, ErrorCode::InvalidArgument, "need nt >= 8");
  require(t_max > 1e-6, ErrorCode::InvalidArgument, "t_max too small");
  HextResult res;
  res.lhs = bilinear_pairing(f, ab_transform(g));

  const double t0 = 1e-6;
  std::vector<double> ts(nt);
  const double step = std::log(t_max / t0) / static_cast<double>(nt - 1);
  for (int q = 0; q < nt; ++q) ts[q] = t0 * std::exp(step * q);

  const auto integrand = [&](double t, bool conjugate_form) -> Complex {
    if (t == 0.0) {
      return conjugate_form ? bilinear_pairing(d_op(f), d_op(g))
                            : bilinear_pairing(dbar_op(f), dbar_op(g));
    }
    PlaneField ft = heat_extend(f, t);
    PlaneField gt = heat_extend(g, t);
    return conjugate_form ? bilinear_pairing(d_op(ft), d_op(gt))
                          : bilinear_pairing(dbar_op(ft), dbar_op(gt));
  };

  for (int form = 0; form < 2; ++form) {
    const bool conj_form = form == 1;
    std::vector<Complex> vals(nt);
    for (int q = 0; q < nt; ++q) vals[q] = integrand(ts[q], conj_form);
    // int I dt = int I(e^s) e^s ds over the log nodes: Simpson when the node
    // count allows it, trapezoid otherwise; plus the [0, t0] strip.
    Complex acc = integrand(0.0, conj_form) * (0.5 * t0) + vals[0] * (0.5 * t0);
    if (nt % 2 == 1) {
      Complex simpson = vals[0] * ts[0] + vals[nt - 1] * ts[nt - 1];
      for (int q = 1; q + 1 < nt; ++q)
        simpson += (q % 2 ? 4.0 : 2.0) * vals[q] * ts[q];
      acc += simpson * (step / 3.0);
    } else {
      for (int q = 0; q + 1 < nt; ++q)
        acc += 0.5 * (vals[q] * ts[q] + vals[q + 1] * ts[q + 1]) * step;
    }
    const double tail = std::abs(vals[nt - 1]) * ts[nt - 1];
    require(tail <= 1e-4 * std::max(std::abs(acc), 1e-300), ErrorCode::TailTooHeavy,
            "heat integrand tail exceeds 1e-4 of the accumulated integral");
    if (conj_form)
      res.rhs_conjugate = -2.0 * acc;
    else
      res.rhs_displayed = -2.0 * acc;
  }

  const double scale = std::max(std::abs(res.lhs), 1e-300);
  res.residual_displayed = std::abs(res.lhs - res.rhs_displayed) / scale;
  res.residual_conjugate = std::abs(res.lhs - res.rhs_conjugate) / scale;
  struct Variant {
    const char* name;
    Complex value;
  } variants[] = {
      {"-2 dbar dbar", res.rhs_displayed},
      {"+2 dbar dbar", -res.rhs_displayed},
      {"-2 d d", res.rhs_conjugate},
      {"+2 d d", -res.rhs_conjugate},
  };
  res.residual = std::numeric_limits<double>::infinity();
  for (const auto& v : variants) {
    const double r = std::abs(res.lhs - v.value) / scale;
    if (r < res.residual) {
      res.residual = r;
      res.matched_form = v.name;
    }
  }
  return res;
}

void PlaneField::write_binary(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), ErrorCode::Io, "cannot open " + path);
  const double header[2] = {static_cast<double>(n_), extent_};
  out.write(reinterpret_cast<const char*>(header), sizeof(header));
  for (const auto& v : samples_) {
    const double pair[2] = {v.real(), v.imag()};
    out.write(reinterpret_cast<const char*>(pair), sizeof(pair));
  }
  require(out.good(), ErrorCode::Io, "write failed for " + path);
}

PlaneField PlaneField::read_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorCode::Io, "cannot open " + path);
  double header[2];
  in.read(reinterpret_cast<char*>(header), sizeof(header));
  require(in.good(), ErrorCode::Io, "truncated header in " + path);
  const auto n = static_cast<std::size_t>(header[0]);
  std::vector<Complex> s(n * n);
  for (auto& v : s) {
    double pair[2];
    in.read(reinterpret_cast<char*>(pair), sizeof(pair));
    require(in.good(), ErrorCode::Io, "truncated samples in " + path);
    v = Complex(pair[0], pair[1]);
  }
  return PlaneField(n, header[1], std::move(s));
}

void PlaneField::write_csv(const std::string& path) const {
  require(n_ <= 256, ErrorCode::InvalidArgument, "CSV output is for small fields");
  std::ofstream out(path);
  require(out.good(), ErrorCode::Io, "cannot open " + path);
  out << "x,y,re,im\n";
  out.precision(17);
  for (std::size_t ix = 0; ix < n_; ++ix)
    for (std::size_t iy = 0; iy < n_; ++iy)
      out << x_of(ix) << ',' << x_of(iy) << ',' << samples_[ix * n_ + iy].real()
          << ',' << samples_[ix * n_ + iy].imag() << '\n';
  require(out.good(), ErrorCode::Io, "write failed for " + path);
}

}  // namespace abv
