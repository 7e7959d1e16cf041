#include "oamsim/ensemble.hpp"

#include <cmath>
#include <numbers>

namespace oamsim {

namespace {

constexpr double kPi = std::numbers::pi;

Complex gamma2_of(const LambdaParams& p) {
  const double half_diff = 0.5 * p.gamma22 - p.gamma;
  const Complex radicand{half_diff * half_diff - 4.0 * p.omega_r * p.omega_r, 0.0};
  return 0.5 * std::sqrt(radicand);
}

// sinh(z t) / z, analytic in z^2; series near z t = 0.
Complex sinhc_over(Complex z, double t) {
  const Complex zt = z * t;
  if (std::abs(zt) < 1e-4) {
    const Complex zt2 = zt * zt;
    return t * (1.0 + zt2 / 6.0 + zt2 * zt2 / 120.0);
  }
  return std::sinh(zt) / z;
}

void check_times(double t_us, double t_s_us) {
  if (t_us < 0) throw NegativeTimeError("read time t must be >= 0");
  if (t_s_us < 0) throw NegativeTimeError("storage time t_s must be >= 0");
}

}  // namespace

double CoherenceField::total_power() const {
  double sum = 0.0;
  for (const Complex& v : data) sum += std::norm(v);
  return sum * grid.pitch_um * grid.pitch_um;
}

double g_r_pulse(double t_us, const LambdaParams& p) {
  if (t_us < 0) throw NegativeTimeError("g_r_pulse: t must be >= 0");
  const Complex g2 = gamma2_of(p);
  return std::exp(-p.gamma1() * t_us) * std::real(sinhc_over(g2, t_us));
}

double g_r_peak_time(const LambdaParams& p, double window_us) {
  const double g1 = p.gamma1();
  const Complex g2 = gamma2_of(p);
  double t_peak;
  if (std::abs(g2) < 1e-8 * g1) {
    t_peak = 1.0 / g1;  // critically damped limit of atanh(g2/g1)/g2
  } else {
    t_peak = std::real(std::atanh(g2 / g1) / g2);
  }
  if (!(t_peak > 0) || t_peak > window_us) t_peak = window_us;
  return t_peak;
}

CoherenceField write_coherence(const BeamTriple& beams, const LambdaParams& p,
                               double t_us, double t_s_us) {
  check_times(t_us, t_s_us);
  if (beams.w.grid != beams.wp.grid)
    throw GridMismatchError("write_coherence: W and W' grids differ");

  const double envelope = g_r_pulse(t_us, p) * std::exp(-p.gamma * t_s_us);
  const double lambda_um = beams.wavelength_nm * 1e-3;
  const double theta_rad = beams.theta_deg * kPi / 180.0;

  CoherenceField coh;
  coh.grid = beams.wp.grid;
  coh.wp_direction = beams.wp.direction;
  coh.t_s_us = t_s_us;
  coh.grating_k_per_um = (4.0 * kPi / lambda_um) * std::sin(0.5 * theta_rad);
  coh.data.resize(beams.wp.data.size());
  for (std::size_t k = 0; k < coh.data.size(); ++k) {
    const Complex w = beams.w.data[k];
    const Complex wp = beams.wp.data[k];
    const double denom = std::norm(w) + std::norm(wp);
    // No atoms are driven where both write fields vanish.
    coh.data[k] = denom == 0.0
                      ? Complex{0.0, 0.0}
                      : envelope * beams.r_scale * w * std::conj(wp) / denom;
  }
  return coh;
}

CoherenceField approx_coherence(const ComplexField& wp, const LambdaParams& p,
                                double t_us, double t_s_us) {
  check_times(t_us, t_s_us);
  const Complex envelope =
      p.prefactor_a * g_r_pulse(t_us, p) * std::exp(-p.gamma * t_s_us);

  CoherenceField coh;
  coh.grid = wp.grid;
  coh.wp_direction = wp.direction;
  coh.t_s_us = t_s_us;
  coh.grating_k_per_um = 0.0;
  coh.data.resize(wp.data.size());
  for (std::size_t k = 0; k < coh.data.size(); ++k)
    coh.data[k] = envelope * std::conj(wp.data[k]);
  return coh;
}

}  // namespace oamsim
