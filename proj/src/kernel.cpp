#include "psg/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "psg/error.hpp"
#include "psg/specfun.hpp"

namespace psg {

namespace {

constexpr double kPi = std::numbers::pi;
// Log-range of the scaled integrand kept by the tail cut.
constexpr double kLogRange = 45.0;

void check_half_plane(std::complex<double> s, const MediumParams& p, bool origin_is_branch) {
  const double a = p.a(), b = p.b();
  auto near = [&](double z) { return std::abs(s - z) <= 1e-14 * std::max(1.0, std::abs(z)); };
  if ((origin_is_branch && near(0.0)) || near(-a) || near(-b)) {
    std::ostringstream msg;
    msg << "transform evaluated at a branch point s=" << s;
    throw DomainError(msg.str());
  }
  if (!(s.real() > std::max(-a, -b))) {
    std::ostringstream msg;
    msg << "Re s=" << s.real() << " outside the half-plane Re s > " << std::max(-a, -b);
    throw DomainError(msg.str());
  }
}

void require_converged(const QuadratureResult& res, const char* what) {
  if (!res.converged) {
    std::ostringstream msg;
    msg << what << ": quadrature did not converge (estimate " << res.value << ", error " << res.abs_error << ")";
    throw AccuracyError(msg.str(), res.value, res.abs_error);
  }
}

double golden_max(const auto& f, double lo, double hi, double& arg) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo), d = lo + inv_phi * (hi - lo);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 120 && hi - lo > 1e-13 * std::max(1.0, std::abs(hi)); ++it) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  arg = fc > fd ? c : d;
  return std::max(fc, fd);
}

}  // namespace

std::complex<double> k_hat(double x, std::complex<double> s, const MediumParams& params) {
  check_half_plane(s, params, true);
  const auto rs = std::sqrt(s);
  const auto rsa = std::sqrt(s + params.a());
  const auto re = std::sqrt(params.epsilon() * s + params.c() * params.c());
  const auto kappa = rs * rsa / re;
  return std::exp(-std::abs(x) * kappa) / (2.0 * rs * rsa * re);
}

std::complex<double> g_hat(double r, std::complex<double> s, const MediumParams& params) {
  check_half_plane(s, params, false);
  const auto rs = std::sqrt(s);
  const auto rsa = std::sqrt(s + params.a());
  const auto rsb = std::sqrt(s + params.b());
  return std::exp(-r * rs * rsa / rsb) / (2.0 * std::sqrt(params.epsilon()) * rsa * rsb);
}

double g_time_origin(double t, const MediumParams& params) {
  if (!(t > 0.0)) throw DomainError("g_time_origin needs t > 0");
  const double a = params.a(), b = params.b();
  return std::exp(-std::min(a, b) * t) * bessel_i0_scaled(0.5 * (b - a) * t) / (2.0 * std::sqrt(params.epsilon()));
}

// With z = y^2 the integrand of G is exp(E(y)) m(y) B(y) where
//   E = -(y^2 + r^2)/(4t) - b t y^2/(y^2 + r^2) + q y   (q y only when b > a)
//   m = 2y / sqrt(y^2 + r^2)
//   B = i0e(q y), J0(q y) or 1 for b > a, b < a, b = a; q = sqrt|b - a|.
// E is computed in logs and the integral scaled by its maximum.
double g_time(double r, double t, const MediumParams& params, const QuadratureSpec& quad) {
  if (!(t > 0.0)) throw DomainError("g_time needs t > 0");
  if (!(r >= 0.0)) throw DomainError("g_time needs r >= 0");
  const double a = params.a(), b = params.b();
  const double q = std::sqrt(std::abs(b - a));
  const bool grow = b > a;
  const bool oscillate = a > b;
  const double bt = b * t;
  const double r2 = r * r;

  auto E = [&](double y) {
    const double y2 = y * y;
    const double frac = r == 0.0 ? 1.0 : y2 / (y2 + r2);
    return -(y2 + r2) / (4.0 * t) - bt * frac + (grow ? q * y : 0.0);
  };
  auto m = [&](double y) { return r == 0.0 ? 2.0 : 2.0 * y / std::sqrt(y * y + r2); };
  auto B = [&](double y) {
    if (grow) return bessel_i0_scaled(q * y);
    if (oscillate) return bessel_j0(q * y);
    return 1.0;
  };

  // locate the maxima of E on a safe range
  const double qg = grow ? q : 0.0;
  const double E0 = E(0.0);
  const double y_hi = 2.0 * t * qg + 2.0 * std::sqrt(t * (t * qg * qg - E0 + kLogRange)) + 2.0 * r;
  constexpr int n_scan = 400;
  std::vector<double> ys(n_scan + 1), es(n_scan + 1);
  for (int i = 0; i <= n_scan; ++i) {
    ys[i] = y_hi * i / n_scan;
    es[i] = E(ys[i]);
  }
  double e_ref = E0;
  std::vector<double> peaks;
  for (int i = 1; i < n_scan; ++i) {
    if (es[i] >= es[i - 1] && es[i] >= es[i + 1]) {
      double arg = ys[i];
      const double val = golden_max(E, ys[i - 1], ys[i + 1], arg);
      peaks.push_back(arg);
      e_ref = std::max(e_ref, val);
    }
  }
  if (es[n_scan] > es[n_scan - 1]) {
    peaks.push_back(ys[n_scan]);
    e_ref = std::max(e_ref, es[n_scan]);
  }
  if (e_ref < -745.0 - kLogRange) return 0.0;

  const double y_end =
      2.0 * t * qg + 2.0 * std::sqrt(t * std::max(1e-300, t * qg * qg - e_ref + std::log(2.0) + kLogRange));

  std::vector<double> pts{0.0, y_end};
  for (double p : peaks)
    if (p > 0.0 && p < y_end) pts.push_back(p);
  if (r > 0.0) {
    // the transition of y^2/(y^2+r^2) sits at y ~ r / sqrt(1 + b t)
    for (double s = r * 1e-3; s < y_end; s *= 10.0) pts.push_back(s);
  }
  std::sort(pts.begin(), pts.end());

  auto integrand = [&](double y) {
    const double e = E(y) - e_ref;
    if (e < -745.0) return 0.0;
    return std::exp(e) * m(y) * B(y);
  };
  QuadratureSpec local = quad;
  const QuadratureResult res = integrate_adaptive(integrand, pts, local);
  require_converged(res, "g_time");
  const double log_pref = e_ref - std::log(4.0 * std::sqrt(kPi * params.epsilon() * t));
  if (res.value == 0.0) return 0.0;
  const double sign = res.value < 0.0 ? -1.0 : 1.0;
  return sign * std::exp(log_pref + std::log(std::abs(res.value)));
}

double k_time(double x, double t, const MediumParams& params, const QuadratureSpec& quad) {
  if (!(t > 0.0)) throw DomainError("k_time needs t > 0");
  const double r = r_of(x, params);
  const double g_limit = r == 0.0 ? 1.0 / (2.0 * std::sqrt(params.epsilon())) : 0.0;
  const double su = std::sqrt(t);
  auto integrand = [&](double u) {
    const double tau = t - u * u;
    if (tau <= 1e-15 * t) return g_limit;
    return g_time(r, tau, params, quad);
  };
  std::vector<double> pts{0.0, su};
  const double front = std::abs(x) / params.c();
  if (front > 0.0 && front < t) pts.push_back(std::sqrt(t - front));
  // G varies on the diffusive scale sqrt(eps tau) around the front
  for (double f : {0.5, 0.9}) pts.push_back(f * su);
  std::sort(pts.begin(), pts.end());
  // the inner quadrature leaves noise of a few ulps that the outer estimate cannot resolve
  QuadratureSpec outer = quad;
  outer.rel_tol = std::max(quad.rel_tol, 1e-13);
  outer.abs_tol = std::max(quad.abs_tol, 1e-15);
  const QuadratureResult res = integrate_adaptive(integrand, pts, outer);
  require_converged(res, "k_time");
  return 2.0 / std::sqrt(kPi) * res.value;
}

double k_time_origin(double t, const MediumParams& params, const QuadratureSpec& quad) {
  if (!(t > 0.0)) throw DomainError("k_time_origin needs t > 0");
  const double a = params.a(), b = params.b();
  auto integrand = [&](double u) {
    const double tau = t - u * u;
    return std::exp(-std::min(a, b) * tau) * bessel_i0_scaled(0.5 * (b - a) * tau);
  };
  const QuadratureResult res = integrate_adaptive(integrand, {0.0, 0.5 * std::sqrt(t), std::sqrt(t)}, quad);
  require_converged(res, "k_time_origin");
  return res.value / std::sqrt(kPi * params.epsilon());
}

double laplace_of_g(double r, double s, const MediumParams& params, const QuadratureSpec& quad) {
  const double a = params.a(), b = params.b();
  if (r > 0.0 && !(s > 0.0)) throw DomainError("Laplace integral of G(r>0, .) converges only for s > 0");
  if (r == 0.0 && !(s > -std::min(a, b))) throw DomainError("Laplace integral of G(0, .) needs s > -min(a, b)");
  const double lambda = s + (r == 0.0 ? std::min(a, b) : 0.0);
  const double front = r * std::sqrt(params.epsilon()) / params.c();

  auto integrand = [&](double t) {
    if (t <= 0.0) return r == 0.0 ? 1.0 / (2.0 * std::sqrt(params.epsilon())) : 0.0;
    return std::exp(-s * t) * g_time(r, t, params, quad);
  };

  double t_cut = std::max(40.0 / lambda, 4.0 * front);
  double total = 0.0, err = 0.0;
  double lo = 0.0;
  for (int pass = 0; pass < 12; ++pass) {
    std::vector<double> pts{lo, t_cut};
    if (lo == 0.0) {
      for (double f = 1e-4; f < 1.0; f *= 10.0) pts.push_back(f * t_cut);
      if (front > 0.0 && front < t_cut) pts.push_back(front);
    }
    std::sort(pts.begin(), pts.end());
    const QuadratureResult res = integrate_adaptive(integrand, pts, quad);
    require_converged(res, "laplace_of_g");
    total += res.value;
    err += res.abs_error;
    // remaining tail bounded by integrand(t_cut) * t_cut for the algebraic decay
    const double tail = std::abs(integrand(t_cut)) * t_cut;
    if (tail <= std::max(quad.abs_tol, quad.rel_tol * std::abs(total))) return total;
    lo = t_cut;
    t_cut *= 2.0;
  }
  throw AccuracyError("laplace_of_g: exponential tail not negligible at the cut", total, err);
}

double verify_laplace_pair(double r, const std::vector<double>& s_samples, const MediumParams& params,
                           const QuadratureSpec& quad) {
  double worst = 0.0;
  for (double s : s_samples) {
    const double lhs = laplace_of_g(r, s, params, quad);
    const double rhs = g_hat(r, s, params).real();
    worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
  }
  return worst;
}

double kernel_mass(double t, const MediumParams& params, const QuadratureSpec& quad) {
  if (!(t > 0.0)) throw DomainError("kernel_mass needs t > 0");
  const double ct = params.c() * t;
  const double width = std::sqrt(4.0 * params.epsilon() * t);
  auto integrand = [&](double y) { return k_time(y, t, params, quad); };

  double hi = ct + 12.0 * width;
  std::vector<double> pts{0.0, hi};
  if (ct < hi) pts.push_back(ct);
  for (double f : {0.25, 0.5, 0.75}) pts.push_back(f * ct);
  for (double f : {-2.0, -1.0, 1.0, 2.0, 4.0})
    if (ct + f * width > 0.0 && ct + f * width < hi) pts.push_back(ct + f * width);
  std::sort(pts.begin(), pts.end());
  QuadratureResult res = integrate_adaptive(integrand, pts, quad);
  require_converged(res, "kernel_mass");
  double total = res.value;
  for (int pass = 0; pass < 8 && std::abs(integrand(hi)) * width > quad.abs_tol; ++pass) {
    const double next = hi + 4.0 * width;
    res = integrate_adaptive(integrand, {hi, next}, quad);
    require_converged(res, "kernel_mass");
    total += res.value;
    hi = next;
  }
  return 2.0 * total;
}

double pde_residual(double x, double t, const MediumParams& params, double h, const QuadratureSpec& quad) {
  if (x == 0.0) throw DomainError("pde_residual needs x != 0");
  if (!(t > 2.0 * h)) throw DomainError("pde_residual needs t > 2h");
  double K[3][3];  // [x offset][t offset]
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) K[i][j] = k_time(x + (i - 1) * h, t + (j - 1) * h, params, quad);
  const double h2 = h * h;
  auto kxx = [&](int j) { return (K[2][j] - 2.0 * K[1][j] + K[0][j]) / h2; };
  const double k_xx = kxx(1);
  const double k_xxt = (kxx(2) - kxx(0)) / (2.0 * h);
  const double k_tt = (K[1][2] - 2.0 * K[1][1] + K[1][0]) / h2;
  const double k_t = (K[1][2] - K[1][0]) / (2.0 * h);
  const double c2 = params.c() * params.c();
  return params.epsilon() * k_xxt + c2 * k_xx - k_tt - params.a() * k_t;
}

double fourier_kernel(double k, double t, const MediumParams& params) {
  const double p = 0.5 * (params.a() + params.epsilon() * k * k);
  const double ck = params.c() * k;
  const double q2 = (ck - p) * (ck + p);
  if (q2 > 0.0) {
    const double q = std::sqrt(q2);
    const double qt = q * t;
    const double sinc = std::abs(qt) < 1e-8 ? 1.0 - qt * qt / 6.0 : std::sin(qt) / qt;
    return std::exp(-p * t) * t * sinc;
  }
  const double mu = std::sqrt(-q2);
  const double decay = ck * ck / (p + mu);  // p - mu without cancellation
  const double growth = mu == 0.0 ? t : -std::expm1(-2.0 * mu * t) / (2.0 * mu);
  return std::exp(-decay * t) * growth;
}

namespace {

// (1/pi) int_0^kmax weight(k) Khat(k,t) cos(k X_d) dk for X_d = d*step, d = 0..D.
std::vector<double> spectral_sum(const MediumParams& params, double t, double step, std::size_t D, double k_max,
                                 double extra_freq, const auto& weight) {
  using GL = boost::math::quadrature::gauss<double, 16>;
  const auto& nodes = GL::abscissa();
  const auto& wts = GL::weights();
  const double freq = static_cast<double>(D) * step + params.c() * t + extra_freq + 1.0;
  const double panel = kPi / freq;
  const auto n_panels = static_cast<std::size_t>(std::ceil(k_max / panel));
  std::vector<double> out(D + 1, 0.0);
  std::vector<double> acc(D + 1, 0.0);

  auto add_node = [&](double k, double w) {
    const double f = w * weight(k) * fourier_kernel(k, t, params);
    if (f == 0.0) return;
    const double c1 = std::cos(k * step);
    double cm = 1.0, cd = c1;
    acc[0] += f;
    if (D >= 1) acc[1] += f * c1;
    for (std::size_t d = 2; d <= D; ++d) {
      const double cn = 2.0 * c1 * cd - cm;
      cm = cd;
      cd = cn;
      acc[d] += f * cn;
    }
  };

  for (std::size_t pi = 0; pi < n_panels; ++pi) {
    const double lo = pi * panel;
    const double half = 0.5 * panel, mid = lo + half;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      if (nodes[j] == 0.0) {
        add_node(mid, half * wts[j]);
      } else {
        add_node(mid - half * nodes[j], half * wts[j]);
        add_node(mid + half * nodes[j], half * wts[j]);
      }
    }
    // flush panel sums periodically to limit accumulation error
    if ((pi & 255u) == 255u) {
      for (std::size_t d = 0; d <= D; ++d) {
        out[d] += acc[d];
        acc[d] = 0.0;
      }
    }
  }
  for (std::size_t d = 0; d <= D; ++d) out[d] = (out[d] + acc[d]) / kPi;
  return out;
}

}  // namespace

double k_time_spectral(double x, double t, const MediumParams& params, double tol) {
  if (!(t > 0.0)) throw DomainError("k_time_spectral needs t > 0");
  const double eps = params.epsilon();
  const double bt = params.b() * t;
  const double k_gauss = std::sqrt(80.0 / (eps * t));
  const double k_tail = std::exp(-bt) / (kPi * eps * tol);
  const double k_max = std::max(k_gauss, k_tail);
  if (k_max > 1e6) throw DomainError("k_time_spectral: b*t too small for point evaluation");
  const double ax = std::abs(x);
  const auto w = spectral_sum(params, t, ax == 0.0 ? 1.0 : ax, ax == 0.0 ? 0 : 1, k_max, 0.0,
                              [](double) { return 1.0; });
  return ax == 0.0 ? w[0] : w[1];
}

std::vector<double> hat_weights_spectral(const MediumParams& params, double t, double h, std::size_t D, double tol) {
  if (!(h > 0.0)) throw DomainError("hat_weights_spectral needs h > 0");
  if (t <= 0.0) return std::vector<double>(D + 1, 0.0);
  const double eps = params.epsilon();
  const double bt = params.b() * t;
  double k_max = std::sqrt(80.0 / (eps * t));
  if (bt < 40.0) k_max = std::max(k_max, std::cbrt(4.0 * std::exp(-bt) / (3.0 * kPi * eps * h * tol)));
  auto hat_ft = [h](double k) {
    const double z = 0.5 * k * h;
    const double s = std::abs(z) < 1e-6 ? 1.0 - z * z / 6.0 : std::sin(z) / z;
    return h * s * s;
  };
  return spectral_sum(params, t, h, D, k_max, 2.0 * h, hat_ft);
}

}  // namespace psg
