#include "psg/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace psg {

namespace {

constexpr double kSwitchI0 = 15.0;
constexpr double kSwitchJ0 = 14.0;

}  // namespace

namespace detail {

double i0_series(double z) {
  const double q = 0.25 * z * z;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return sum;
}

// e^{-z} I_0(z) ~ (2 pi z)^{-1/2} sum a_k z^{-k}, summed to the smallest term.
// Late terms behave like (k-1)!/(pi (2z)^k); the discarded tail of that model
// series has the principal-value Borel sum e^{-2z} Ei(2z) - sum_{k<N} (k-1)!/(2z)^k,
// which is added back (exponentially improved expansion).
double i0_scaled_asymptotic(double z) {
  z = std::abs(z);
  double term = 1.0, sum = 1.0;
  int n = 1;  // first index not summed
  for (; n < 200; ++n) {
    const double next = term * (2.0 * n - 1.0) * (2.0 * n - 1.0) / (8.0 * n * z);
    if (next >= term) break;
    term = next;
    sum += term;
  }
  const double F = 2.0 * z;
  if (F > 80.0) return sum / std::sqrt(2.0 * std::numbers::pi * z);  // tail below e^{-80}
  double model = 0.0, g = 1.0 / F;  // (k-1)!/F^k
  for (int k = 1; k < n; ++k) {
    model += g;
    g *= k / F;
  }
  const double tail = (std::exp(-F) * std::expint(F) - model) / std::numbers::pi;
  return (sum + tail) / std::sqrt(2.0 * std::numbers::pi * z);
}

}  // namespace detail

double bessel_i0_scaled(double z) {
  const double az = std::abs(z);
  if (az < kSwitchI0) return std::exp(-az) * detail::i0_series(az);
  return detail::i0_scaled_asymptotic(az);
}

double bessel_i0(double z) {
  const double az = std::abs(z);
  if (!std::isfinite(az)) throw std::overflow_error("bessel_i0: non-finite argument");
  if (az < kSwitchI0) return detail::i0_series(az);
  if (az > std::log(std::numeric_limits<double>::max()))
    throw std::overflow_error("bessel_i0: e^|z| overflows, use bessel_i0_scaled");
  return std::exp(az) * detail::i0_scaled_asymptotic(az);
}

double bessel_j0(double z) {
  const double az = std::abs(z);
  if (az < kSwitchJ0) {
    // alternating series; at |z| < 14 the largest term is ~3e4, fine for 1e-10 relative off zeros
    const double q = 0.25 * az * az;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 500; ++k) {
      term *= -q / (static_cast<double>(k) * k);
      sum += term;
      if (std::abs(term) < 1e-18) break;
    }
    return sum;
  }
  // Hankel expansion
  double a_prev = 1.0;
  double P = 1.0, Q = 0.0;
  double zpow = 1.0;
  double last = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 100; ++k) {
    const double ak = a_prev * (-(2.0 * k - 1.0) * (2.0 * k - 1.0)) / (8.0 * k);
    zpow *= az;
    const double term = ak / zpow;
    if (std::abs(term) > last) break;
    last = std::abs(term);
    // a_k z^{-k} with alternating sign (-1)^{floor(k/2)}
    const int m = k / 2;
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0) {
      P += sign * term;
    } else {
      Q += sign * term;
    }
    a_prev = ak;
    if (std::abs(term) < 1e-17) break;
  }
  const double w = az - std::numbers::pi / 4.0;
  return std::sqrt(2.0 / (std::numbers::pi * az)) * (P * std::cos(w) - Q * std::sin(w));
}

}  // namespace psg
