#include "psg/waves.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "psg/error.hpp"

namespace psg {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSingularTol = 1e-12;

// phi = 2 arctan T, given T and its first three derivatives.
ProfileJet arctan_jet(double T, double T1, double T2, double T3) {
  const double D = 1.0 + T * T;
  const double D1 = 2.0 * T * T1;
  const double D2 = 2.0 * T1 * T1 + 2.0 * T * T2;
  const double N = T2 * D - T1 * D1;
  const double N1 = T3 * D - T1 * D2;
  return {2.0 * std::atan(T), 2.0 * T1 / D, 2.0 * N / (D * D), 2.0 * (N1 * D - 2.0 * N * D1) / (D * D * D)};
}

[[noreturn]] void throw_singular(const TravellingWave& w, double xi) {
  std::ostringstream msg;
  msg << "travelling wave (" << to_string(w.regime()) << ", gamma=" << w.gamma() << ", k=" << w.k_const()
      << ") is singular at xi=" << xi;
  throw DomainError(msg.str());
}

}  // namespace

std::string to_string(WaveRegime regime) {
  switch (regime) {
    case WaveRegime::gamma_zero: return "gamma_zero";
    case WaveRegime::gamma_one: return "gamma_one";
    case WaveRegime::gamma_sub: return "gamma_sub";
    case WaveRegime::gamma_super: return "gamma_super";
  }
  return "unknown";
}

double parallelism_angle(double psi) {
  if (psi >= 0.0) return kPi - 2.0 * std::atan(std::exp(-psi));
  return 2.0 * std::atan(std::exp(psi));
}

TravellingWave::TravellingWave(double gamma, double a, double k) : gamma_(gamma), a_(a), k_(k) {
  if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("travelling wave needs a > 0");
  if (!std::isfinite(gamma) || !std::isfinite(k)) throw std::invalid_argument("travelling wave: non-finite gamma or k");
  const double g = std::abs(gamma);
  if (g < 1e-14) {
    regime_ = WaveRegime::gamma_zero;
  } else if (std::abs(g - 1.0) < 1e-14) {
    regime_ = WaveRegime::gamma_one;
  } else if (g < 1.0) {
    regime_ = WaveRegime::gamma_sub;
  } else {
    regime_ = WaveRegime::gamma_super;
  }
}

double TravellingWave::alpha() const {
  if (regime_ != WaveRegime::gamma_sub) throw std::logic_error("alpha is defined for gamma^2 < 1 only");
  return std::sqrt(1.0 - gamma_ * gamma_);
}

double TravellingWave::sigma() const {
  if (regime_ != WaveRegime::gamma_super) throw std::logic_error("sigma is defined for gamma^2 > 1 only");
  return std::sqrt(gamma_ * gamma_ - 1.0);
}

double TravellingWave::singular_distance(double xi) const {
  switch (regime_) {
    case WaveRegime::gamma_zero:
      return std::numeric_limits<double>::infinity();
    case WaveRegime::gamma_one:
      return xi - k_;
    case WaveRegime::gamma_sub:
      if (k_ <= 0.0) return std::numeric_limits<double>::infinity();
      return xi + std::log(k_) / alpha();
    case WaveRegime::gamma_super: {
      const double s = sigma();
      const double theta = 0.5 * s * xi + k_;
      const double pole = kPi / 2.0 + kPi * std::round((theta - kPi / 2.0) / kPi);
      return 2.0 * (theta - pole) / s;
    }
  }
  return std::numeric_limits<double>::infinity();
}

ProfileJet TravellingWave::profile(double xi) const {
  switch (regime_) {
    case WaveRegime::gamma_zero: {
      const double psi = xi + k_;
      const double sech = 1.0 / std::cosh(psi);
      const double th = std::tanh(psi);
      return {parallelism_angle(psi), sech, -sech * th, sech * th * th - sech * sech * sech};
    }
    case WaveRegime::gamma_one: {
      const double xb = xi - k_;
      if (std::abs(xb) < kSingularTol) throw_singular(*this, xi);
      const double g = gamma_;
      const double T = -(xb + 2.0) / (g * xb);
      return arctan_jet(T, 2.0 / (g * xb * xb), -4.0 / (g * xb * xb * xb), 12.0 / (g * xb * xb * xb * xb));
    }
    case WaveRegime::gamma_sub: {
      const double al = alpha();
      const double E = k_ * std::exp(al * xi);
      const double one_minus = 1.0 - E;
      if (std::abs(one_minus) < kSingularTol * std::max(1.0, std::abs(E))) throw_singular(*this, xi);
      const double g = 1.0 / one_minus;
      const double g1 = al * (g * g - g);
      const double g2 = al * (2.0 * g - 1.0) * g1;
      const double g3 = al * (2.0 * g1 * g1 + (2.0 * g - 1.0) * g2);
      const double A = al / gamma_;
      const double T = A * (2.0 * g - 1.0) - 1.0 / gamma_;
      return arctan_jet(T, 2.0 * A * g1, 2.0 * A * g2, 2.0 * A * g3);
    }
    case WaveRegime::gamma_super: {
      const double s = sigma();
      const double theta = 0.5 * s * xi + k_;
      if (std::abs(std::cos(theta)) < kSingularTol) throw_singular(*this, xi);
      const double tau = std::tan(theta);
      const double tau1 = 0.5 * s * (1.0 + tau * tau);
      const double tau2 = s * tau * tau1;
      const double tau3 = s * (tau1 * tau1 + tau * tau2);
      const double f = s / gamma_;
      return arctan_jet((s * tau - 1.0) / gamma_, f * tau1, f * tau2, f * tau3);
    }
  }
  throw std::logic_error("unreachable wave regime");
}

double TravellingWave::value(double x, double t) const { return profile(xi_of(x, t)).phi; }

WaveDerivatives TravellingWave::derivatives(double x, double t) const {
  const ProfileJet j = profile(xi_of(x, t));
  const double a2 = a_ * a_;
  return {-j.d1 / a_, j.d1 / a_, j.d2 / a2, j.d2 / a2, -j.d3 / (a2 * a_)};
}

double wave_value(const TravellingWave& wave, double x, double t) { return wave.value(x, t); }

WaveDerivatives wave_derivatives(const TravellingWave& wave, double x, double t) {
  return wave.derivatives(x, t);
}

double reduced_residual(const TravellingWave& wave, double x, double t, ResidualMode mode, double h) {
  const double w = wave.value(x, t);
  double w_xx, w_tt, w_t;
  if (mode == ResidualMode::analytic) {
    const WaveDerivatives d = wave.derivatives(x, t);
    w_xx = d.w_xx;
    w_tt = d.w_tt;
    w_t = d.w_t;
  } else {
    const double xp = wave.value(x + h, t), xm = wave.value(x - h, t);
    const double tp = wave.value(x, t + h), tm = wave.value(x, t - h);
    w_xx = (xp - 2.0 * w + xm) / (h * h);
    w_tt = (tp - 2.0 * w + tm) / (h * h);
    w_t = (tp - tm) / (2.0 * h);
  }
  return w_xx - w_tt - wave.a() * w_t - std::sin(w) - wave.gamma();
}

double profile_ode_residual(const TravellingWave& wave, double xi) {
  const ProfileJet j = wave.profile(xi);
  return j.d1 - std::sin(j.phi) - wave.gamma();
}

InitialData kink_initial_data(double a) {
  if (!(a > 0.0)) throw std::invalid_argument("kink initial data needs a > 0");
  return {[a](double x) { return parallelism_angle(x / a); },
          [a](double x) { return -1.0 / (a * std::cosh(x / a)); }};
}

double w_xxt_bound(double a) {
  if (!(a > 0.0)) throw std::invalid_argument("w_xxt_bound needs a > 0");
  const TravellingWave kink = TravellingWave::kink(1.0);
  auto g = [&](double xi) { return std::abs(kink.profile(xi).d3); };

  constexpr int n = 4001;
  constexpr double lo = -20.0, hi = 20.0;
  const double step = (hi - lo) / (n - 1);
  int best = 0;
  double best_val = -1.0;
  for (int i = 0; i < n; ++i) {
    const double v = g(lo + i * step);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }

  // golden-section refinement on the bracketing cells
  double left = lo + std::max(0, best - 1) * step;
  double right = lo + std::min(n - 1, best + 1) * step;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = right - inv_phi * (right - left);
  double d = left + inv_phi * (right - left);
  double gc = g(c), gd = g(d);
  for (int it = 0; it < 200 && right - left > 1e-15; ++it) {
    if (gc > gd) {
      right = d;
      d = c;
      gd = gc;
      c = right - inv_phi * (right - left);
      gc = g(c);
    } else {
      left = c;
      c = d;
      gc = gd;
      d = left + inv_phi * (right - left);
      gd = g(d);
    }
  }
  const double refined = std::max({best_val, gc, gd});
  return refined / (a * a * a);
}

}  // namespace psg
