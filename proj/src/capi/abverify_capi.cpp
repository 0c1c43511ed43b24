#include "abverify.h"

#include <cstring>
#include <string>

#include "abv/config.hpp"
#include "abv/planar.hpp"
#include "abv/report.hpp"
#include "abv/spectral.hpp"
#include "abv/structural.hpp"
#include "abv/suites.hpp"

namespace {

thread_local std::string g_last_error;

int code_of(const abv::Error& e) {
  using abv::ErrorCode;
  switch (e.code()) {
    case ErrorCode::InvalidArgument:
      return ABV_ERR_INVALID_ARGUMENT;
    case ErrorCode::BranchMismatch:
      return ABV_ERR_BRANCH_MISMATCH;
    case ErrorCode::NonIntegrableInput:
      return ABV_ERR_NON_INTEGRABLE;
    case ErrorCode::SingularPoint:
      return ABV_ERR_SINGULAR_POINT;
    case ErrorCode::NonzeroMean:
      return ABV_ERR_NONZERO_MEAN;
    case ErrorCode::SupportMismatch:
      return ABV_ERR_SUPPORT_MISMATCH;
    case ErrorCode::ResolutionInsufficient:
      return ABV_ERR_RESOLUTION;
    case ErrorCode::TailTooHeavy:
      return ABV_ERR_TAIL;
    case ErrorCode::DegenerateSampler:
      return ABV_ERR_DEGENERATE_SAMPLER;
    case ErrorCode::ZeroDenominator:
      return ABV_ERR_ZERO_DENOMINATOR;
    case ErrorCode::NodeOutsideExtent:
      return ABV_ERR_NODE_OUTSIDE_EXTENT;
    case ErrorCode::NanDetected:
      return ABV_ERR_NAN;
    case ErrorCode::Io:
      return ABV_ERR_IO;
    case ErrorCode::Internal:
      return ABV_ERR_INTERNAL;
  }
  return ABV_ERR_INTERNAL;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    return ABV_OK;
  } catch (const abv::Error& e) {
    g_last_error = e.what();
    return code_of(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return ABV_ERR_INTERNAL;
  }
}

template <typename T, typename Fn>
T* guarded_new(Fn&& fn) {
  try {
    return fn();
  } catch (const abv::Error& e) {
    g_last_error = e.what();
    return nullptr;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return nullptr;
  }
}

abv::PhasePoint point(double zr, double zi, double wr, double wi) {
  return {abv::Complex(zr, zi), abv::Complex(wr, wi)};
}

abv::Mat2 mat(const double a[4]) { return {a[0], a[1], a[2], a[3]}; }

}  // namespace

struct abv_grid {
  abv::GridPtr grid;
};
struct abv_profile {
  abv::RadialProfile profile;
};
struct abv_stretch {
  abv::StretchProfile stretch;
};
struct abv_operator {
  abv::TriangularOperator op;
};
struct abv_norm_estimate {
  abv::NormEstimate est;
};
struct abv_field {
  abv::PlaneField field;
};
struct abv_phi {
  abv::SurrogatePhi phi;
};
struct abv_config {
  abv::CommandConfig cfg;
};
struct abv_report {
  abv::Report report;
  std::string json;
};

extern "C" {

const char* abv_version(void) { return "1.0.0"; }
const char* abv_last_error(void) { return g_last_error.c_str(); }

int abv_eval_l(double zr, double zi, double wr, double wi, double* out) {
  return guarded([&] { *out = abv::eval_l(point(zr, zi, wr, wi)); });
}

int abv_eval_m(double zr, double zi, double wr, double wi, double* out) {
  return guarded([&] { *out = abv::eval_m(point(zr, zi, wr, wi)); });
}

int abv_eval_lp(double zr, double zi, double wr, double wi, double p, double* out) {
  return guarded(
      [&] { *out = abv::eval_lp(point(zr, zi, wr, wi), abv::Exponent(p)); });
}

int abv_eval_psi(const double a[4], double* out) {
  return guarded([&] { *out = abv::eval_psi(mat(a)); });
}

int abv_eval_psi_p(const double a[4], double p, double* out) {
  return guarded([&] { *out = abv::eval_psi_p(mat(a), abv::Exponent(p)); });
}

int abv_matrix_to_phase(const double a[4], double zw[4]) {
  return guarded([&] {
    const abv::PhasePoint p = abv::matrix_to_phase(mat(a));
    zw[0] = p.z.real();
    zw[1] = p.z.imag();
    zw[2] = p.w.real();
    zw[3] = p.w.imag();
  });
}

int abv_phase_to_matrix(const double zw[4], double a[4]) {
  return guarded([&] {
    const abv::Mat2 m = abv::phase_to_matrix(point(zw[0], zw[1], zw[2], zw[3]));
    a[0] = m.a;
    a[1] = m.b;
    a[2] = m.c;
    a[3] = m.d;
  });
}

int abv_burkholder_margin(double zr, double zi, double wr, double wi, double p,
                          double* out) {
  return guarded([&] {
    *out = abv::burkholder_margin(point(zr, zi, wr, wi), abv::Exponent(p));
  });
}

int abv_sample_rank_one(uint64_t seed, double b[4]) {
  return guarded([&] {
    const abv::RankOneDirection d = abv::sample_rank_one(seed);
    b[0] = d.matrix.a;
    b[1] = d.matrix.b;
    b[2] = d.matrix.c;
    b[3] = d.matrix.d;
  });
}

int abv_midpoint_convexity_margin(int line_function, double p, const double a[4],
                                  const double b[4], double t1, double t2,
                                  double* out) {
  return guarded([&] {
    abv::LineFunction f;
    switch (line_function) {
      case ABV_LINE_PSI:
        f = abv::LineFunction::Psi;
        break;
      case ABV_LINE_PSI_P:
        f = abv::LineFunction::PsiP;
        break;
      case ABV_LINE_M:
        f = abv::LineFunction::MAlongLine;
        break;
      default:
        abv::fail(abv::ErrorCode::InvalidArgument, "unknown line function tag");
    }
    *out = abv::midpoint_convexity_margin(f, abv::Exponent(p), mat(a), {mat(b)},
                                          t1, t2);
  });
}

int abv_scaling_integral_ratio(double zr, double zi, double wr, double wi,
                               double p, double* integral, double* target,
                               double* ratio, double* reference) {
  return guarded([&] {
    const abv::ScalingRatio r =
        abv::scaling_integral_ratio(point(zr, zi, wr, wi), abv::Exponent(p));
    if (integral) *integral = r.integral;
    if (target) *target = r.target;
    if (ratio) *ratio = r.ratio;
    if (reference) *reference = r.reference;
  });
}

abv_grid* abv_grid_log(double umin, double umax, size_t n, int measure) {
  return guarded_new<abv_grid>([&] {
    return new abv_grid{abv::RadialGrid::log_spaced(
        umin, umax, n,
        measure == ABV_MEASURE_RADIAL ? abv::Measure::Radial
                                      : abv::Measure::Lebesgue)};
  });
}

abv_grid* abv_grid_linear(double umin, double umax, size_t n, int measure) {
  return guarded_new<abv_grid>([&] {
    return new abv_grid{abv::RadialGrid::linear(
        umin, umax, n,
        measure == ABV_MEASURE_RADIAL ? abv::Measure::Radial
                                      : abv::Measure::Lebesgue)};
  });
}

void abv_grid_free(abv_grid* g) { delete g; }
size_t abv_grid_size(const abv_grid* g) { return g->grid->size(); }
double abv_grid_node(const abv_grid* g, size_t i) { return g->grid->node(i); }
double abv_grid_weight(const abv_grid* g, size_t i) { return g->grid->weight(i); }

abv_profile* abv_profile_create(const abv_grid* g, const double* re,
                                const double* im, size_t n, int mode_index) {
  return guarded_new<abv_profile>([&] {
    abv::require(g && re && n == g->grid->size(), abv::ErrorCode::InvalidArgument,
                 "profile needs a grid and matching samples");
    std::vector<abv::Complex> s(n);
    for (size_t i = 0; i < n; ++i) s[i] = abv::Complex(re[i], im ? im[i] : 0.0);
    return new abv_profile{abv::RadialProfile(g->grid, std::move(s), mode_index)};
  });
}

void abv_profile_free(abv_profile* p) { delete p; }
size_t abv_profile_size(const abv_profile* p) { return p->profile.size(); }
double abv_profile_node(const abv_profile* p, size_t i) {
  return p->profile.grid->node(i);
}

int abv_profile_get(const abv_profile* p, size_t i, double* re, double* im) {
  return guarded([&] {
    abv::require(i < p->profile.size(), abv::ErrorCode::InvalidArgument,
                 "index out of range");
    if (re) *re = p->profile.samples[i].real();
    if (im) *im = p->profile.samples[i].imag();
  });
}

int abv_profile_write_csv(const abv_profile* p, const char* path) {
  return guarded([&] { p->profile.write_csv(path); });
}

abv_profile* abv_apply_hardy(const abv_profile* p) {
  return guarded_new<abv_profile>(
      [&] { return new abv_profile{abv::apply_hardy(p->profile)}; });
}

abv_profile* abv_apply_lambda_m(const abv_profile* p, int m) {
  return guarded_new<abv_profile>(
      [&] { return new abv_profile{abv::apply_lambda_m(p->profile, m)}; });
}

int abv_lp_norm(const abv_profile* p, double pp, double* out) {
  return guarded([&] { *out = abv::lp_norm(p->profile, abv::Exponent(pp)); });
}

int abv_reduced_kernel_nk(double rho, double r, int k, double* re, double* im) {
  return guarded([&] {
    const abv::Complex v = abv::reduced_kernel_nk(rho, r, k);
    if (re) *re = v.real();
    if (im) *im = v.imag();
  });
}

abv_stretch* abv_stretch_from_beta(const abv_profile* beta) {
  return guarded_new<abv_stretch>(
      [&] { return new abv_stretch{abv::stretch_from_beta(beta->profile)}; });
}

void abv_stretch_free(abv_stretch* s) { delete s; }

abv_profile* abv_stretch_g(const abv_stretch* s) {
  return guarded_new<abv_profile>([&] { return new abv_profile{s->stretch.g}; });
}

abv_profile* abv_stretch_gprime(const abv_stretch* s) {
  return guarded_new<abv_profile>(
      [&] { return new abv_profile{s->stretch.gprime}; });
}

abv_profile* abv_beta_from_stretch(const abv_stretch* s, const abv_grid* rho_grid) {
  return guarded_new<abv_profile>([&] {
    return new abv_profile{abv::beta_from_stretch(s->stretch, rho_grid->grid)};
  });
}

int abv_hm_identity_residual(const abv_stretch* s, double* out) {
  return guarded([&] { *out = abv::hm_identity_residual(s->stretch); });
}

int abv_stretch_ratio(const abv_stretch* s, double p, double* out) {
  return guarded([&] { *out = abv::stretch_ratio(s->stretch, abv::Exponent(p)); });
}

int abv_mode_functional(const abv_stretch* s, double p, double* value,
                        double* scale) {
  return guarded([&] {
    const abv::ModeFunctional mf = abv::mode_functional(s->stretch, abv::Exponent(p));
    if (value) *value = mf.value;
    if (scale) *scale = mf.scale;
  });
}

int abv_maximize_stretch_ratio(double p, const abv_grid* rho_grid, uint64_t seed,
                               double* ratio, abv_stretch** witness) {
  return guarded([&] {
    abv::MaximizeOptions opts;
    if (rho_grid) opts.rho_grid = rho_grid->grid;
    opts.seed = seed;
    abv::MaximizeResult res = abv::maximize_stretch_ratio(abv::Exponent(p), opts);
    if (ratio) *ratio = res.ratio;
    if (witness) *witness = new abv_stretch{std::move(res.witness)};
  });
}

abv_operator* abv_discretize(int kind, int m, const abv_grid* g) {
  return guarded_new<abv_operator>([&] {
    abv::OperatorKind k;
    switch (kind) {
      case ABV_KIND_HARDY:
        k = abv::OperatorKind::Hardy;
        break;
      case ABV_KIND_HARDY_MINUS_ID:
        k = abv::OperatorKind::HardyMinusId;
        break;
      case ABV_KIND_LAMBDA:
        k = abv::OperatorKind::Lambda;
        break;
      default:
        abv::fail(abv::ErrorCode::InvalidArgument, "unknown operator kind");
    }
    return new abv_operator{abv::TriangularOperator::discretize(k, g->grid, m)};
  });
}

void abv_operator_free(abv_operator* op) { delete op; }

double abv_operator_entry(const abv_operator* op, size_t i, size_t j) {
  return op->op.entry(i, j);
}

abv_norm_estimate* abv_estimate_norm(const abv_operator* op, double p, int max_iter,
                                     double tol, int restarts, uint64_t seed) {
  return guarded_new<abv_norm_estimate>([&] {
    abv::NormEstimateOptions opts;
    if (max_iter > 0) opts.max_iter = max_iter;
    if (tol > 0.0) opts.tol = tol;
    if (restarts > 0) opts.restarts = restarts;
    opts.seed = seed;
    return new abv_norm_estimate{abv::estimate_norm(op->op, abv::Exponent(p), opts)};
  });
}

void abv_norm_free(abv_norm_estimate* e) { delete e; }
double abv_norm_value(const abv_norm_estimate* e) { return e->est.value; }
int abv_norm_iterations(const abv_norm_estimate* e) { return e->est.iterations; }
int abv_norm_converged(const abv_norm_estimate* e) { return e->est.converged; }
size_t abv_norm_history_size(const abv_norm_estimate* e) {
  return e->est.history.size();
}
double abv_norm_history_at(const abv_norm_estimate* e, size_t i) {
  return e->est.history[i];
}

abv_profile* abv_norm_witness(const abv_norm_estimate* e) {
  return guarded_new<abv_profile>(
      [&] { return new abv_profile{e->est.witness}; });
}

char* abv_norm_json(const abv_norm_estimate* e, int kind, int m, double p) {
  return guarded_new<char>([&]() -> char* {
    abv::OperatorKind k = kind == ABV_KIND_HARDY ? abv::OperatorKind::Hardy
                          : kind == ABV_KIND_HARDY_MINUS_ID
                              ? abv::OperatorKind::HardyMinusId
                              : abv::OperatorKind::Lambda;
    const std::string s = e->est.to_json(k, m, p);
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
  });
}

void abv_string_free(char* s) { delete[] s; }

abv_field* abv_field_create(size_t n, double extent, const double* re,
                            const double* im) {
  return guarded_new<abv_field>([&] {
    abv::require(re != nullptr, abv::ErrorCode::InvalidArgument,
                 "field needs sample data");
    std::vector<abv::Complex> s(n * n);
    for (size_t i = 0; i < n * n; ++i)
      s[i] = abv::Complex(re[i], im ? im[i] : 0.0);
    return new abv_field{abv::PlaneField(n, extent, std::move(s))};
  });
}

abv_field* abv_field_from_radial(size_t n, double extent, abv_radial_fn g,
                                 void* ctx) {
  return guarded_new<abv_field>([&] {
    return new abv_field{abv::PlaneField::from_radial(
        n, extent, [&](double r) { return abv::Complex(g(r, ctx), 0.0); })};
  });
}

void abv_field_free(abv_field* f) { delete f; }
size_t abv_field_n(const abv_field* f) { return f->field.n(); }
double abv_field_extent(const abv_field* f) { return f->field.extent(); }

int abv_field_get(const abv_field* f, size_t ix, size_t iy, double* re,
                  double* im) {
  return guarded([&] {
    abv::require(ix < f->field.n() && iy < f->field.n(),
                 abv::ErrorCode::InvalidArgument, "index out of range");
    const abv::Complex v = f->field.at(ix, iy);
    if (re) *re = v.real();
    if (im) *im = v.imag();
  });
}

abv_field* abv_ab_transform(const abv_field* f) {
  return guarded_new<abv_field>(
      [&] { return new abv_field{abv::ab_transform(f->field)}; });
}

abv_field* abv_heat_extend(const abv_field* f, double t) {
  return guarded_new<abv_field>(
      [&] { return new abv_field{abv::heat_extend(f->field, t)}; });
}

int abv_field_l2(const abv_field* f, double* out) {
  return guarded([&] { *out = abv::l2_norm(f->field); });
}

int abv_field_write_binary(const abv_field* f, const char* path) {
  return guarded([&] { f->field.write_binary(path); });
}

abv_field* abv_field_read_binary(const char* path) {
  return guarded_new<abv_field>(
      [&] { return new abv_field{abv::PlaneField::read_binary(path)}; });
}

int abv_field_write_csv(const abv_field* f, const char* path) {
  return guarded([&] { f->field.write_csv(path); });
}

abv_profile* abv_project_mode(const abv_field* f, int k, const abv_grid* g,
                              int n_phi) {
  return guarded_new<abv_profile>([&] {
    return new abv_profile{abv::project_mode(f->field, k, g->grid, n_phi)};
  });
}

int abv_crosscheck_radial(abv_radial_fn g, void* ctx, size_t n, double extent,
                          int* phase_mode, double* concentration,
                          double* mismatch) {
  return guarded([&] {
    const abv::CrosscheckResult res = abv::crosscheck_radial(
        [&](double r) { return g(r, ctx); }, n, extent);
    if (phase_mode) *phase_mode = res.phase_mode;
    if (concentration) *concentration = res.concentration;
    if (mismatch) *mismatch = res.mismatch;
  });
}

int abv_hext_residual(const abv_field* f, const abv_field* g, double t_max, int nt,
                      double* lhs_re, double* lhs_im, double* residual_displayed,
                      double* residual_conjugate, double* residual,
                      char matched_form[32]) {
  return guarded([&] {
    const abv::HextResult r = abv::hext_residual(f->field, g->field, t_max, nt);
    if (lhs_re) *lhs_re = r.lhs.real();
    if (lhs_im) *lhs_im = r.lhs.imag();
    if (residual_displayed) *residual_displayed = r.residual_displayed;
    if (residual_conjugate) *residual_conjugate = r.residual_conjugate;
    if (residual) *residual = r.residual;
    if (matched_form) {
      std::strncpy(matched_form, r.matched_form.c_str(), 31);
      matched_form[31] = '\0';
    }
  });
}

abv_phi* abv_phi_builtin(int which) {
  return guarded_new<abv_phi>([&] {
    return new abv_phi{which == 0 ? abv::SurrogatePhi::default_phi()
                                  : abv::SurrogatePhi::alternate_phi()};
  });
}

abv_phi* abv_phi_create(abv_phi_fn phi, abv_phi_fn phi1, abv_phi_fn phi11,
                        abv_phi_fn phi12, void* ctx) {
  return guarded_new<abv_phi>([&] {
    abv::require(phi && phi1 && phi11 && phi12, abv::ErrorCode::InvalidArgument,
                 "all four evaluators are required");
    return new abv_phi{abv::SurrogatePhi(
        [phi, ctx](double x, double y) { return phi(x, y, ctx); },
        [phi1, ctx](double x, double y) { return phi1(x, y, ctx); },
        [phi11, ctx](double x, double y) { return phi11(x, y, ctx); },
        [phi12, ctx](double x, double y) { return phi12(x, y, ctx); })};
  });
}

void abv_phi_free(abv_phi* p) { delete p; }

int abv_structural_identities(const abv_grid* grid, const double* m,
                              const double* mp, const double* k, const double* kp,
                              const double* xi, const double* xip,
                              const double* eta, const double* etap,
                              const abv_phi* phi, int n_theta,
                              abv_structural_report* out) {
  return guarded([&] {
    const size_t n = grid->grid->size();
    abv::ModePair pair;
    pair.grid = grid->grid;
    pair.m.assign(m, m + n);
    pair.mp.assign(mp, mp + n);
    pair.k.assign(k, k + n);
    pair.kp.assign(kp, kp + n);
    pair.xi.assign(xi, xi + n);
    pair.xip.assign(xip, xip + n);
    pair.eta.assign(eta, eta + n);
    pair.etap.assign(etap, etap + n);
    const abv::StructuralReport rep =
        abv::structural_identities(pair, phi->phi, n_theta > 0 ? n_theta : 512);
    out->d1_max = rep.d1_max;
    out->d1_scale = rep.d1_scale;
    out->c_max = rep.c_max;
    out->uv_theta_max = rep.uv_theta_max;
    out->uv_theta_scale = rep.uv_theta_scale;
    out->radial_mix_max = rep.radial_mix_max;
    out->radial_mix_scale = rep.radial_mix_scale;
    out->a = rep.a;
    out->b = rep.b;
    out->boundary_term = rep.boundary_term;
    out->parts_residual = rep.parts_residual;
    out->parts_scale = rep.parts_scale;
  });
}

abv_config* abv_config_create(void) {
  return guarded_new<abv_config>([&] { return new abv_config{}; });
}

void abv_config_free(abv_config* c) { delete c; }

int abv_config_set_command(abv_config* c, const char* command) {
  return guarded([&] {
    abv::require(command != nullptr, abv::ErrorCode::InvalidArgument,
                 "command is required");
    c->cfg.command = command;
  });
}

int abv_config_set_p_list(abv_config* c, const double* p, size_t n) {
  return guarded([&] {
    c->cfg.p_list.assign(p, p + n);
    c->cfg.p_explicit_empty = n == 0;
  });
}

int abv_config_set_grid(abv_config* c, double umin, double umax, int n) {
  return guarded([&] {
    c->cfg.grid_min = umin;
    c->cfg.grid_max = umax;
    c->cfg.grid_n = n;
  });
}

int abv_config_set_field(abv_config* c, int n, double extent) {
  return guarded([&] {
    c->cfg.field_n = n;
    c->cfg.extent = extent;
  });
}

int abv_config_set_seed(abv_config* c, uint64_t seed) {
  return guarded([&] { c->cfg.seed = seed; });
}

int abv_config_set_out(abv_config* c, const char* path) {
  return guarded([&] { c->cfg.output_path = path ? path : ""; });
}

int abv_config_set_tolerance(abv_config* c, const char* check, double value) {
  return guarded([&] {
    abv::require(check != nullptr, abv::ErrorCode::InvalidArgument,
                 "check name is required");
    c->cfg.tolerances[check] = value;
  });
}

abv_config* abv_config_load(const char* path) {
  return guarded_new<abv_config>(
      [&] { return new abv_config{abv::CommandConfig::load(path)}; });
}

int abv_config_save(const abv_config* c, const char* path) {
  return guarded([&] { c->cfg.save(path); });
}

abv_report* abv_run(const abv_config* c) {
  return guarded_new<abv_report>([&] {
    auto* r = new abv_report{abv::run(c->cfg), {}};
    r->json = r->report.to_json_string();
    return r;
  });
}

void abv_report_free(abv_report* r) { delete r; }
int abv_report_pass(const abv_report* r) { return r->report.pass ? 1 : 0; }
const char* abv_report_json(const abv_report* r) { return r->json.c_str(); }
size_t abv_report_record_count(const abv_report* r) {
  return r->report.records.size();
}
const char* abv_report_record_name(const abv_report* r, size_t i) {
  return r->report.records[i].name.c_str();
}
const char* abv_report_record_anchor(const abv_report* r, size_t i) {
  return r->report.records[i].paper_anchor.c_str();
}
int abv_report_record_pass(const abv_report* r, size_t i) {
  return r->report.records[i].pass ? 1 : 0;
}

}  // extern "C"
