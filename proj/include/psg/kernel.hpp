#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "psg/model.hpp"
#include "psg/quadrature.hpp"

namespace psg {

/// Scaled distance r = |x| / sqrt(eps).
inline double r_of(double x, const MediumParams& params) { return std::abs(x) / std::sqrt(params.epsilon()); }

/// Laplace transform in t of the fundamental solution K(x, t):
///   exp(-|x| sqrt(s(s+a)/(eps s + c^2))) / (2 sqrt(s(s+a)(eps s + c^2)))
/// with every square root taken factor by factor on the principal branch.
/// Throws DomainError at s in {0, -a, -b} or Re s <= max(-a, -b).
std::complex<double> k_hat(double x, std::complex<double> s, const MediumParams& params);

/// Same transform in the scaled variable: K_hat(x, s) = g_hat(r_of(x), s) / sqrt(s).
std::complex<double> g_hat(double r, std::complex<double> s, const MediumParams& params);

/// Time-domain G(r, t), the inverse transform of g_hat, by quadrature of its
/// modified-Bessel integral representation. Throws AccuracyError when the
/// quadrature budget is exhausted.
double g_time(double r, double t, const MediumParams& params, const QuadratureSpec& quad = {});

/// Closed form G(0, t) = exp(-(a+b)t/2) I0((b-a)t/2) / (2 sqrt(eps)).
double g_time_origin(double t, const MediumParams& params);

/// K(x, t) = int_0^t G(r, tau) / sqrt(pi (t - tau)) dtau, evaluated with
/// tau = t - u^2 to remove the endpoint singularity.
double k_time(double x, double t, const MediumParams& params, const QuadratureSpec& quad = {});

/// K(0, t) from the one-dimensional closed-form integrand of G(0, tau).
double k_time_origin(double t, const MediumParams& params, const QuadratureSpec& quad = {});

/// Worst relative error between int_0^inf e^{-st} G(r,t) dt and g_hat(r, s).
/// The transform converges for s > -min(a, b) at r = 0 and for s > 0 when
/// r > 0; samples outside that range throw DomainError.
double verify_laplace_pair(double r, const std::vector<double>& s_samples, const MediumParams& params,
                           const QuadratureSpec& quad = {});

/// int_0^inf e^{-st} G(r, t) dt alone.
double laplace_of_g(double r, double s, const MediumParams& params, const QuadratureSpec& quad = {});

/// 2 int_0^inf K(y, t) dy; equals (1 - e^{-at})/a.
double kernel_mass(double t, const MediumParams& params, const QuadratureSpec& quad = {});

/// eps K_xxt + c^2 K_xx - K_tt - a K_t by central differences of k_time with step h.
double pde_residual(double x, double t, const MediumParams& params, double h, const QuadratureSpec& quad = {});

/// Spatial Fourier transform of K(., t): e^{-pt} sin(qt)/q with
/// p = (a + eps k^2)/2, q^2 = c^2 k^2 - p^2 (hyperbolic form when q^2 < 0).
double fourier_kernel(double k, double t, const MediumParams& params);

/// K(x, t) by Fourier inversion of fourier_kernel. The transform decays only
/// like e^{-bt}/(eps k^2), so this needs b t large enough; otherwise DomainError.
double k_time_spectral(double x, double t, const MediumParams& params, double tol = 1e-12);

/// W[d] = int K(d h - y, t) hat(y) dy for d = 0..D, where hat is the unit
/// piecewise-linear basis function of half-width h. Computed spectrally for
/// all offsets at once.
std::vector<double> hat_weights_spectral(const MediumParams& params, double t, double h, std::size_t D,
                                         double tol = 1e-13);

}  // namespace psg
