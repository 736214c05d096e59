#include "psg/fd_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "psg/error.hpp"

namespace psg {

namespace {

// Solves a constant-coefficient tridiagonal system (off, diag, off) in place.
void thomas(double diag, double off, std::vector<double>& rhs, std::vector<double>& scratch) {
  const std::size_t n = rhs.size();
  scratch.resize(n);
  double denom = diag;
  scratch[0] = off / denom;
  rhs[0] /= denom;
  for (std::size_t i = 1; i < n; ++i) {
    denom = diag - off * scratch[i - 1];
    scratch[i] = off / denom;
    rhs[i] = (rhs[i] - off * rhs[i - 1]) / denom;
  }
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= scratch[i] * rhs[i + 1];
}

GridFunction fd_solve(double eps, const MediumParams& params, const InitialData& data, const PdeSource& f,
                      const SpaceTimeGrid& grid, const FdScheme& scheme) {
  const CflReport cfl = cfl_report(params, grid, scheme);
  if (!cfl.stable) {
    std::ostringstream msg;
    msg << "fd scheme unstable: courant number " << cfl.courant << " exceeds " << cfl.limit;
    throw DomainError(msg.str());
  }
  const std::size_t nx = grid.nx(), nt = grid.nt();
  if (nx < 3) throw std::invalid_argument("fd solve needs nx >= 3");
  const double dx = grid.dx(), dt = grid.dt();
  const double a = params.a(), c2 = params.c() * params.c();
  const double theta = scheme.theta;

  const double left0 = data.f0(grid.x(0)), right0 = data.f0(grid.x(nx - 1));
  auto left = [&](double t) { return scheme.left ? scheme.left(t) : left0; };
  auto right = [&](double t) { return scheme.right ? scheme.right(t) : right0; };

  GridFunction u(grid);
  std::vector<double> f0(nx), f1(nx);
  for (std::size_t i = 0; i < nx; ++i) {
    f0[i] = data.f0(grid.x(i));
    f1[i] = data.f1(grid.x(i));
  }
  auto dxx = [&](const auto& v, std::size_t i) { return (v[i + 1] - 2.0 * v[i] + v[i - 1]) / (dx * dx); };

  for (std::size_t i = 0; i < nx; ++i) u(i, 0) = f0[i];
  // u^1 from the Taylor expansion with u_tt(0) supplied by the equation
  for (std::size_t i = 1; i + 1 < nx; ++i) {
    const double utt = eps * dxx(f1, i) + c2 * dxx(f0, i) - a * f1[i] - f(grid.x(i), 0.0, f0[i]);
    u(i, 1) = f0[i] + dt * f1[i] + 0.5 * dt * dt * utt;
  }
  u(0, 1) = left(grid.t(1));
  u(nx - 1, 1) = right(grid.t(1));

  const double kappa = eps / (2.0 * dt) + 0.5 * theta * c2;
  const double diag = 1.0 / (dt * dt) + a / (2.0 * dt) + 2.0 * kappa / (dx * dx);
  const double off = -kappa / (dx * dx);
  std::vector<double> rhs(nx - 2), scratch;

  for (std::size_t n = 1; n + 1 < nt; ++n) {
    const auto un = u.level(n);
    const auto um = u.level(n - 1);
    const double t = grid.t(n);
    for (std::size_t i = 1; i + 1 < nx; ++i) {
      rhs[i - 1] = (2.0 * un[i] - um[i]) / (dt * dt) + a / (2.0 * dt) * um[i] + c2 * (1.0 - theta) * dxx(un, i) +
                   0.5 * theta * c2 * dxx(um, i) - eps / (2.0 * dt) * dxx(um, i) - f(grid.x(i), t, un[i]);
    }
    const double lb = left(grid.t(n + 1)), rb = right(grid.t(n + 1));
    rhs.front() -= off * lb;
    rhs.back() -= off * rb;
    thomas(diag, off, rhs, scratch);
    auto up = u.level(n + 1);
    up[0] = lb;
    up[nx - 1] = rb;
    double sup = std::max(std::abs(lb), std::abs(rb));
    for (std::size_t i = 1; i + 1 < nx; ++i) {
      up[i] = rhs[i - 1];
      sup = std::max(sup, std::abs(up[i]));
    }
    if (!(sup <= scheme.blowup)) {
      std::ostringstream msg;
      msg << "fd solution blew up at t=" << grid.t(n + 1) << " (sup |u| = " << sup << ")";
      throw NumericError(msg.str());
    }
  }
  return u;
}

}  // namespace

CflReport cfl_report(const MediumParams& params, const SpaceTimeGrid& grid, const FdScheme& scheme) {
  CflReport r;
  r.courant = params.c() * grid.dt() / grid.dx();
  r.limit = scheme.theta >= 0.5 ? std::numeric_limits<double>::infinity() : 0.9;
  r.stable = r.courant <= r.limit * (1.0 + 1e-12);
  return r;
}

GridFunction fd_solve_full(const MediumParams& params, const InitialData& data, const PdeSource& f,
                           const SpaceTimeGrid& grid, const FdScheme& scheme) {
  return fd_solve(params.epsilon(), params, data, f, grid, scheme);
}

GridFunction fd_solve_reduced(const MediumParams& params, const InitialData& data, const PdeSource& f,
                              const SpaceTimeGrid& grid, const FdScheme& scheme) {
  return fd_solve(0.0, params, data, f, grid, scheme);
}

double discrete_energy(const GridFunction& u, std::size_t n, const MediumParams& params, double theta) {
  const SpaceTimeGrid& g = u.grid();
  if (n + 1 >= g.nt()) throw std::invalid_argument("discrete_energy needs level n+1");
  const double dx = g.dx(), dt = g.dt();
  const double c2 = params.c() * params.c();
  const auto u0 = u.level(n), u1 = u.level(n + 1);
  double kinetic = 0.0, potential = 0.0;
  for (std::size_t i = 0; i < g.nx(); ++i) {
    const double v = (u1[i] - u0[i]) / dt;
    kinetic += v * v;
  }
  for (std::size_t i = 0; i + 1 < g.nx(); ++i) {
    const double d0 = (u0[i + 1] - u0[i]) / dx, d1 = (u1[i + 1] - u1[i]) / dx;
    potential += (1.0 - theta) * d1 * d0 + 0.5 * theta * (d1 * d1 + d0 * d0);
  }
  return 0.5 * dx * kinetic + 0.5 * c2 * dx * potential;
}

PdeSource sine_gordon_source(double gamma) {
  return [gamma](double, double, double u) { return std::sin(u) + gamma; };
}

CrossValidation cross_validate(const MediumParams& params, const TravellingWave& wave, const SpaceTimeGrid& grid,
                               const CrossValidationOptions& options) {
  CrossValidation out;
  const std::size_t rx = std::max<std::size_t>(1, options.refine_x), rt = std::max<std::size_t>(1, options.refine_t);
  const InitialData data{[&wave](double x) { return wave.value(x, 0.0); },
                         [&wave](double x) { return wave.derivatives(x, 0.0).w_t; }};
  const PdeSource f = sine_gordon_source(wave.gamma());
  FdScheme scheme;
  scheme.theta = options.theta;
  scheme.left = [&wave, &grid](double t) { return wave.value(grid.x_min(), t); };
  scheme.right = [&wave, &grid](double t) { return wave.value(grid.x_max(), t); };

  const SpaceTimeGrid fine(grid.x_min(), grid.x_max(), (grid.nx() - 1) * rx + 1, grid.t_max(), (grid.nt() - 1) * rt + 1);
  const SpaceTimeGrid coarse(grid.x_min(), grid.x_max(), (grid.nx() - 1) * rx / 2 + 1, grid.t_max(),
                             std::max<std::size_t>(2, (grid.nt() - 1) * rt / 2 + 1));
  out.fd_dx = fine.dx();
  out.fd_dt = fine.dt();
  const GridFunction u_fine = fd_solve_full(params, data, f, fine, scheme);

  const SolveResult pic = picard_solve(wave, params, grid, options.picard);
  out.picard = pic.report;
  if (!pic.report.converged) throw NumericError("cross_validate: picard iteration did not converge");

  for (std::size_t n = 0; n < grid.nt(); ++n)
    for (std::size_t i = 0; i < grid.nx(); ++i) {
      const double pipeline = wave.value(grid.x(i), grid.t(n)) + pic.v(i, n);
      out.sup_discrepancy = std::max(out.sup_discrepancy, std::abs(u_fine(i * rx, n * rt) - pipeline));
    }

  // Richardson estimates at nodes shared with grids of twice the step
  const bool fd_nested = (grid.nx() - 1) * rx % 2 == 0 && (grid.nt() - 1) * rt % 2 == 0;
  if (fd_nested && cfl_report(params, coarse, scheme).stable) {
    const GridFunction u_coarse = fd_solve_full(params, data, f, coarse, scheme);
    for (std::size_t n = 0; n < fine.nt(); n += 2)
      for (std::size_t i = 0; i < fine.nx(); i += 2)
        out.fd_error_estimate = std::max(out.fd_error_estimate, std::abs(u_fine(i, n) - u_coarse(i / 2, n / 2)) / 3.0);
  }
  if ((grid.nx() - 1) % 2 == 0 && (grid.nt() - 1) % 2 == 0 && grid.nt() >= 5) {
    const SpaceTimeGrid half(grid.x_min(), grid.x_max(), (grid.nx() - 1) / 2 + 1, grid.t_max(), (grid.nt() - 1) / 2 + 1);
    PicardConfig cfg = options.picard;
    const SolveResult pic_half = picard_solve(wave, params, half, cfg);
    if (pic_half.report.converged) {
      for (std::size_t n = 0; n < half.nt(); ++n)
        for (std::size_t i = 0; i < half.nx(); ++i)
          out.picard_error_estimate =
              std::max(out.picard_error_estimate, std::abs(pic.v(2 * i, 2 * n) - pic_half.v(i, n)) / 3.0);
    }
  }
  out.tolerance = std::max(1e-3, 5.0 * (out.fd_error_estimate + out.picard_error_estimate));
  out.pass = out.sup_discrepancy < out.tolerance;
  return out;
}

}  // namespace psg
