#pragma once

#include <functional>
#include <string>

namespace psg {

/// Closed-form family a travelling wave belongs to, selected by gamma.
enum class WaveRegime { gamma_zero, gamma_one, gamma_sub, gamma_super };

std::string to_string(WaveRegime regime);

/// Analytic derivatives of w(x, t) = phi(xi), xi = (x - t)/a.
struct WaveDerivatives {
  double w_t;
  double w_x;
  double w_xx;
  double w_tt;
  double w_xxt;
};

/// Profile phi and its first three xi-derivatives.
struct ProfileJet {
  double phi;
  double d1;
  double d2;
  double d3;
};

/// Lobachevsky angle of parallelism Pi(psi) = 2 arctan(exp(psi)), in (0, pi).
double parallelism_angle(double psi);

/// Exact speed-one travelling wave of w_xx - w_tt - a w_t = sin w + gamma.
///
/// The profile is written as phi = 2 arctan T(xi) on the principal branch, so
/// it is continuous only between consecutive singular loci:
///   gamma_zero   phi = Pi(xi + k)                         (no singularities)
///   gamma_one    T = -(xi_bar + 2)/(gamma xi_bar), xi_bar = xi - k, |gamma| = 1
///   gamma_sub    T = (alpha/gamma)((1 + k e^{alpha xi})/(1 - k e^{alpha xi}) - 1/alpha)
///   gamma_super  T = (sigma tan(sigma xi/2 + k) - 1)/gamma
/// Evaluating on a singular locus throws DomainError.
class TravellingWave {
 public:
  /// Picks the regime from gamma (|gamma| == 1 within 1e-14 is gamma_one).
  TravellingWave(double gamma, double a, double k);

  static TravellingWave kink(double a) { return {0.0, a, 0.0}; }

  WaveRegime regime() const noexcept { return regime_; }
  double gamma() const noexcept { return gamma_; }
  double a() const noexcept { return a_; }
  double k_const() const noexcept { return k_; }
  double alpha() const;
  double sigma() const;

  double xi_of(double x, double t) const noexcept { return (x - t) / a_; }

  /// Signed distance (in the regime's natural variable) to the nearest
  /// singular locus; +infinity for gamma_zero.
  double singular_distance(double xi) const;

  ProfileJet profile(double xi) const;
  double value(double x, double t) const;
  WaveDerivatives derivatives(double x, double t) const;

 private:
  WaveRegime regime_;
  double gamma_;
  double a_;
  double k_;
};

double wave_value(const TravellingWave& wave, double x, double t);
WaveDerivatives wave_derivatives(const TravellingWave& wave, double x, double t);

enum class ResidualMode { analytic, finite_difference };

/// w_xx - w_tt - a w_t - sin w - gamma at (x, t). Finite-difference mode uses
/// central differences of wave_value with step h.
double reduced_residual(const TravellingWave& wave, double x, double t, ResidualMode mode,
                        double h = 1e-4);

/// phi'(xi) - sin(phi) - gamma, the one-dimensional reduction of the above.
double profile_ode_residual(const TravellingWave& wave, double xi);

struct InitialData {
  std::function<double(double)> f0;
  std::function<double(double)> f1;
};

/// u(x,0) = 2 arctan(e^{x/a}), u_t(x,0) = -(2/a) e^{x/a} / (1 + e^{2x/a}).
InitialData kink_initial_data(double a);

/// sup |w_xxt| of the kink, found by dense sampling plus golden-section refinement.
double w_xxt_bound(double a);

}  // namespace psg
