#pragma once

#include <functional>
#include <string>

#include "psg/model.hpp"
#include "psg/volterra.hpp"
#include "psg/waves.hpp"

namespace psg {

using PdeSource = std::function<double(double x, double t, double u)>;
using BoundaryTrace = std::function<double(double t)>;

/// Three-level scheme for eps u_xxt + c^2 u_xx - u_tt - a u_t = f(x, t, u).
/// u_xxt is the centered second difference of (u^{n+1} - u^{n-1})/(2 dt);
/// c^2 u_xx is split theta/2, 1 - theta, theta/2 over levels n+1, n, n-1.
/// The source is explicit at level n.
struct FdScheme {
  double theta = 0.0;
  /// Dirichlet data; empty means pin to the initial edge values
  BoundaryTrace left;
  BoundaryTrace right;
  /// blow-up threshold on sup |u|
  double blowup = 1e6;
};

struct CflReport {
  double courant = 0.0;  // c dt / dx
  double limit = 0.0;    // 0.9 when the c^2 u_xx split is not implicit enough, else infinity
  bool stable = false;
};

CflReport cfl_report(const MediumParams& params, const SpaceTimeGrid& grid, const FdScheme& scheme);

GridFunction fd_solve_full(const MediumParams& params, const InitialData& data, const PdeSource& f,
                           const SpaceTimeGrid& grid, const FdScheme& scheme = {});

/// Same stepping with the third-order term removed (eps of params ignored).
GridFunction fd_solve_reduced(const MediumParams& params, const InitialData& data, const PdeSource& f,
                              const SpaceTimeGrid& grid, const FdScheme& scheme = {});

/// Discrete energy at the half level n + 1/2 for the homogeneous equation:
///   1/2 |D_t u|^2 + c^2/2 [(1 - theta) <D_x u^{n+1}, D_x u^n> + theta/2 (|D_x u^{n+1}|^2 + |D_x u^n|^2)]
double discrete_energy(const GridFunction& u, std::size_t n, const MediumParams& params, double theta);

/// f(x, t, u) = sin u + gamma.
PdeSource sine_gordon_source(double gamma);

struct CrossValidation {
  double sup_discrepancy = 0.0;
  double fd_error_estimate = 0.0;
  double picard_error_estimate = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  double fd_dx = 0.0;
  double fd_dt = 0.0;
  SolveReport picard;
};

struct CrossValidationOptions {
  /// FD grid is the pipeline grid refined by these factors
  std::size_t refine_x = 5;
  std::size_t refine_t = 1;
  double theta = 0.0;
  PicardConfig picard;
};

/// Compares u_fd of the full problem (kink data of `wave`, sine-Gordon source)
/// with w + v from the Picard pipeline at the pipeline's nodes.
CrossValidation cross_validate(const MediumParams& params, const TravellingWave& wave, const SpaceTimeGrid& grid,
                               const CrossValidationOptions& options = {});

}  // namespace psg
