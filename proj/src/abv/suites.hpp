#pragma once

#include "abv/config.hpp"
#include "abv/planar.hpp"
#include "abv/report.hpp"
#include "abv/spectral.hpp"
#include "abv/structural.hpp"

namespace abv {

// Dispatches a configured command and assembles the machine-readable report.
// Internal errors surface as failed records, not exceptions.
Report run(const CommandConfig& config);

// Shared fixtures (also used by the test suites).
namespace fixtures {

// C-infinity bump: exp(-1/(1-s^2)) on |s| < 1, zero outside.
double smooth_bump(double s);
double smooth_bump_derivative(double s);

// Random nonnegative beta made of a few log-normal bumps, supported inside
// the grid; deterministic per rng state.
RadialProfile random_beta(const GridPtr& rho_grid, Rng& rng);

// Modulated Gaussian pair supported in the central quarter of the square.
PlaneField hext_f(std::size_t n, double extent);
PlaneField hext_g(std::size_t n, double extent);

// Radial bump for the 2D/1D crosscheck.
std::function<double(double)> crosscheck_bump(double extent);

// Mode-pair fixture on a uniform grid over (0, rmax].
ModePair structural_mode_pair(double rmax, std::size_t n);

}  // namespace fixtures

}  // namespace abv
