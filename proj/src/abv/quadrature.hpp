#pragma once

#include <functional>

namespace abv {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int evaluations = 0;
};

// Adaptive Gauss-Kronrod (G7/K15) on [a, b] to an absolute tolerance.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b, double abs_tol,
                                    int max_depth = 60);

// Nodes/weights of the 8-point Gauss-Legendre rule on [-1, 1].
extern const double kGauss8Nodes[8];
extern const double kGauss8Weights[8];

}  // namespace abv
