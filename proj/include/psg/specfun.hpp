#pragma once

namespace psg {

/// I_0(z). Throws std::overflow_error once e^|z| is not representable; use
/// bessel_i0_scaled there.
double bessel_i0(double z);

/// e^{-|z|} I_0(z), in (0, 1].
double bessel_i0_scaled(double z);

/// J_0(z).
double bessel_j0(double z);

namespace detail {
/// Branches of I_0 exposed for overlap testing.
double i0_series(double z);
double i0_scaled_asymptotic(double z);
}  // namespace detail

}  // namespace psg
