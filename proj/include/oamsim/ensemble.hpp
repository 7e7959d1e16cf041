#pragma once

#include "oamsim/optics.hpp"

namespace oamsim {

/// Decay and coupling constants of the Lambda system. Rates are in 1/us.
struct LambdaParams {
  double gamma22 = 32.67256359733385;  // spontaneous decay of level 2 (2*pi*5.2)
  double gamma = 1.0 / 3.0;            // ground-coherence decay
  double omega_r = 1.0;                // |Omega_R|, read Rabi frequency
  Complex prefactor_a = {1.0, 0.0};    // constant prefactor of the plane-wave form

  double gamma1() const { return 0.5 * gamma22 + gamma; }

  bool operator==(const LambdaParams&) const = default;
};

/// The two write beams plus the plane-wave read amplitude.
struct BeamTriple {
  ComplexField w;        // strong write pump
  ComplexField wp;       // structured write beam W'
  Complex r_scale = {1.0, 0.0};
  double theta_deg = 3.0;  // angle between the write beams
  double wavelength_nm = kDefaultWavelengthNm;
};

/// Ground-state coherence amplitude per pixel, written at storage time t_s.
struct CoherenceField {
  GridSpec grid;
  Direction wp_direction = Direction::forward;
  std::vector<Complex> data;
  double t_s_us = 0.0;
  double grating_k_per_um = 0.0;  // wavevector difference magnitude

  double total_power() const;
};

/// Retrieved pulse shape g_R(t) = e^{-gamma1 t} sinh(gamma2 t) / gamma2 with
/// gamma1 = Gamma22/2 + gamma and gamma2 = sqrt((Gamma22/2 - gamma)^2
/// - 4 |Omega_R|^2) / 2. Computed with complex arithmetic so the value is
/// continuous across the critically damped point; in the oscillatory regime
/// it reduces to sin(|gamma2| t)/|gamma2|.
double g_r_pulse(double t_us, const LambdaParams& p);

/// Time at which g_R peaks inside [0, window_us].
double g_r_peak_time(const LambdaParams& p, double window_us);

/// Full coherence: g_R(t) e^{-gamma t_s} R W conj(W') / (|W|^2 + |W'|^2)
/// pixelwise; zero where both write fields vanish.
CoherenceField write_coherence(const BeamTriple& beams, const LambdaParams& p,
                               double t_us, double t_s_us);

/// Strong-pump plane-wave form: A g_R(t) e^{-gamma t_s} conj(W') pixelwise.
/// The carrier e^{-i k r} is carried by the direction tag, not sampled.
CoherenceField approx_coherence(const ComplexField& wp, const LambdaParams& p,
                                double t_us, double t_s_us);

}  // namespace oamsim
