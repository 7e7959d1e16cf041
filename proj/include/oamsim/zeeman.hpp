#pragma once

#include <array>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "oamsim/errors.hpp"

namespace oamsim {

using ComplexMatrix = Eigen::MatrixXcd;

/// Bohr magneton over Planck constant, MHz per gauss.
constexpr double kMuBOverH_MHzPerGauss = 1.399624;

/// Density matrix over the F=3 ground manifold, basis ordered m = -3..+3.
struct GroundDM {
  ComplexMatrix rho = ComplexMatrix::Zero(7, 7);

  static constexpr int kF = 3;
  static int index(int m) { return m + kF; }

  /// Population mostly in m=+3 with one dominant (m=3, m=1) coherence.
  static GroundDM edge_pumped(double pop_m3 = 0.95, double pop_m1 = 0.05,
                              std::complex<double> coh_m3_m1 = {0.2, 0.0});

  double hermiticity_error() const;
  double trace_real() const;
  double min_eigenvalue() const;
  bool is_valid(double herm_tol = 1e-12, double psd_tol = 1e-10) const;
};

struct ZeemanParams {
  double g_f = 0.25;                       // Lande factor magnitude
  double b_gauss = 0.0;                    // field magnitude
  std::array<double, 3> axis = {1, 0, 0};  // field direction, default transverse x
  double gamma_b = 1.0 / 12.0;             // coherence decay with field applied

  bool operator==(const ZeemanParams&) const = default;
};

/// Complex read-out weight per Delta-m = 2 coherence pair (m, m-2),
/// m = -1..+3, indexed weights[m + 1].
struct ReadProjection {
  std::array<std::complex<double>, 5> weights{};

  /// Clebsch-Gordan pair couplings of the F=3 -> F'=2 read transition
  /// (sigma- absorption from m, sigma+ emission into m-2).
  static ReadProjection clebsch_gordan_default();

  std::complex<double> weight_for(int m) const { return weights[m + 1]; }

  bool operator==(const ReadProjection&) const = default;
};

struct RevivalRecord {
  double t_s_us = 0.0;
  std::complex<double> amplitude = {0.0, 0.0};
  double intensity = 0.0;

  bool operator==(const RevivalRecord&) const = default;
};

/// Spin operators (Fx, Fy, Fz) for dimension two_f + 1; two_f encodes 2F so
/// half-integer spins are representable. Fz is diagonal with entries -F..F.
struct SpinOperators {
  ComplexMatrix fx, fy, fz;
};
SpinOperators angular_momentum_ops(int two_f);

struct LarmorResult {
  double omega_l_rad_per_us = 0.0;
  double period_us = 0.0;  // infinity when B = 0
};

/// Omega_L = g_F mu_B B / hbar and the period T_L = 2 pi / Omega_L.
LarmorResult larmor(const ZeemanParams& params);

/// rho(t) = U rho U+ with U = exp(-i Omega_L (F . axis) t_s), via
/// eigendecomposition of the Hermitian generator.
GroundDM precess(const GroundDM& rho, const ZeemanParams& params, double t_s_us);

/// A(t_s) = e^{-gamma t_s} sum_m w_m rho_{m, m-2}; linear in rho.
std::complex<double> retrieval_amplitude(const GroundDM& rho,
                                         const ReadProjection& proj,
                                         double gamma_per_us, double t_s_us);

/// Precess-and-project scan over the storage-time grid, decaying at gamma_b.
std::vector<RevivalRecord> revival_scan(const GroundDM& rho0,
                                        const ZeemanParams& params,
                                        const ReadProjection& proj,
                                        const std::vector<double>& t_grid_us);

}  // namespace oamsim
