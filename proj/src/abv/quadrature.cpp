#include "abv/quadrature.hpp"

#include <cmath>

namespace abv {

namespace {

// 15-point Kronrod nodes on [-1,1] and weights, with the embedded 7-point
// Gauss weights (zero entries mark Kronrod-only nodes).
const double kXgk[15] = {
    -0.991455371120812639206854697526329, -0.949107912342758524526189684047851,
    -0.864864423359769072789712788640926, -0.741531185599394439863864773280788,
    -0.586087235467691130294144838258730, -0.405845151377397166906606412076961,
    -0.207784955007898467600689403773245, 0.0,
    0.207784955007898467600689403773245,  0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,  0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,  0.949107912342758524526189684047851,
    0.991455371120812639206854697526329};

const double kWgk[15] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
    0.204432940075298892414161999234649, 0.190350578064785409913256402421014,
    0.169004726639267902826583426598550, 0.140653259715525918745189590510238,
    0.104790010322250183839876322541518, 0.063092092629978553290700663189204,
    0.022935322010529224963732008058970};

const double kWg[15] = {
    0.0, 0.129484966168869693270611432679082,
    0.0, 0.279705391489276667901467771423780,
    0.0, 0.381830050505118944950369775488975,
    0.0, 0.417959183673469387755102040816327,
    0.0, 0.381830050505118944950369775488975,
    0.0, 0.279705391489276667901467771423780,
    0.0, 0.129484966168869693270611432679082};

struct Panel {
  double a, b, value, error;
};

Panel evaluate_panel(const std::function<double(double)>& f, double a, double b,
                     int& evals) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double kron = 0.0, gauss = 0.0;
  for (int i = 0; i < 15; ++i) {
    const double v = f(c + h * kXgk[i]);
    kron += kWgk[i] * v;
    gauss += kWg[i] * v;
  }
  evals += 15;
  kron *= h;
  gauss *= h;
  return {a, b, kron, std::abs(kron - gauss)};
}

void refine(const std::function<double(double)>& f, const Panel& p,
            double tol_share, int depth, int max_depth, double& total,
            int& evals) {
  if (p.error <= tol_share || depth >= max_depth) {
    total += p.value;
    return;
  }
  const double c = 0.5 * (p.a + p.b);
  Panel left = evaluate_panel(f, p.a, c, evals);
  Panel right = evaluate_panel(f, c, p.b, evals);
  refine(f, left, 0.5 * tol_share, depth + 1, max_depth, total, evals);
  refine(f, right, 0.5 * tol_share, depth + 1, max_depth, total, evals);
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b, double abs_tol,
                                    int max_depth) {
  QuadratureResult out;
  if (a == b) return out;
  Panel root = evaluate_panel(f, a, b, out.evaluations);
  out.error_estimate = root.error;
  refine(f, root, abs_tol, 0, max_depth, out.value, out.evaluations);
  return out;
}

const double kGauss8Nodes[8] = {
    -0.960289856497536231683560868569473, -0.796666477413626739591553936475830,
    -0.525532409916328985817739049189246, -0.183434642495649804939476142360184,
    0.183434642495649804939476142360184,  0.525532409916328985817739049189246,
    0.796666477413626739591553936475830,  0.960289856497536231683560868569473};

const double kGauss8Weights[8] = {
    0.101228536290376259152531354309962, 0.222381034453374470544355994426241,
    0.313706645877887287337962201986601, 0.362683783378361982965150449277196,
    0.362683783378361982965150449277196, 0.313706645877887287337962201986601,
    0.222381034453374470544355994426241, 0.101228536290376259152531354309962};

}  // namespace abv
