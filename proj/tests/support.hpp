#pragma once

// Test-only helpers and independent oracles. Nothing here may call into the
// implementation paths it is used to check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "oamsim/optics.hpp"

namespace testsupport {

inline constexpr double kPi = std::numbers::pi;

/// Matrix exponential by scaling-and-squaring with a plain Taylor series;
/// independent of the eigendecomposition route used by the implementation.
inline Eigen::MatrixXcd expm_taylor(const Eigen::MatrixXcd& a) {
  int squarings = 0;
  Eigen::MatrixXcd scaled = a;
  while (scaled.cwiseAbs().sum() > 0.5) {
    scaled *= 0.5;
    ++squarings;
  }
  Eigen::MatrixXcd result = Eigen::MatrixXcd::Identity(a.rows(), a.cols());
  Eigen::MatrixXcd term = result;
  for (int k = 1; k <= 30; ++k) {
    term = term * scaled / static_cast<double>(k);
    result += term;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

inline double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

/// Clebsch-Gordan coefficient <j1 m1 j2 m2 | J M> from the Racah sum
/// (integer angular momenta only, which covers everything used here).
inline double clebsch_gordan(int j1, int m1, int j2, int m2, int j_total,
                             int m_total) {
  if (m1 + m2 != m_total) return 0.0;
  if (j_total < std::abs(j1 - j2) || j_total > j1 + j2) return 0.0;
  if (std::abs(m1) > j1 || std::abs(m2) > j2 || std::abs(m_total) > j_total)
    return 0.0;

  const double prefactor = std::sqrt(
      (2.0 * j_total + 1.0) * factorial(j_total + j1 - j2) *
      factorial(j_total - j1 + j2) * factorial(j1 + j2 - j_total) /
      factorial(j1 + j2 + j_total + 1));
  const double root = std::sqrt(
      factorial(j_total + m_total) * factorial(j_total - m_total) *
      factorial(j1 - m1) * factorial(j1 + m1) * factorial(j2 - m2) *
      factorial(j2 + m2));

  const int k_min = std::max({0, j2 - j_total - m1, j1 + m2 - j_total});
  const int k_max = std::min({j1 + j2 - j_total, j1 - m1, j2 + m2});
  double sum = 0.0;
  for (int k = k_min; k <= k_max; ++k) {
    const double denom = factorial(k) * factorial(j1 + j2 - j_total - k) *
                         factorial(j1 - m1 - k) * factorial(j2 + m2 - k) *
                         factorial(j_total - j2 + m1 + k) *
                         factorial(j_total - j1 - m2 + k);
    sum += ((k % 2 == 0) ? 1.0 : -1.0) / denom;
  }
  return prefactor * root * sum;
}

/// Sum of quantized phase circulations over every grid plaquette whose
/// corners lie inside the given box; the brute-force vortex counter.
inline int phase_residue_sum(const oamsim::ComplexField& field, double x_lo,
                             double x_hi, double y_lo, double y_hi) {
  const oamsim::GridSpec& g = field.grid;
  auto wrap = [](double d) {
    while (d > kPi) d -= 2.0 * kPi;
    while (d <= -kPi) d += 2.0 * kPi;
    return d;
  };
  int total = 0;
  for (int j = 0; j + 1 < g.height; ++j) {
    for (int i = 0; i + 1 < g.width; ++i) {
      if (g.x(i) < x_lo || g.x(i + 1) > x_hi || g.y(j) < y_lo ||
          g.y(j + 1) > y_hi)
        continue;
      const double p00 = std::arg(field.at(i, j));
      const double p10 = std::arg(field.at(i + 1, j));
      const double p11 = std::arg(field.at(i + 1, j + 1));
      const double p01 = std::arg(field.at(i, j + 1));
      const double circulation = wrap(p10 - p00) + wrap(p11 - p10) +
                                 wrap(p01 - p11) + wrap(p00 - p01);
      total += static_cast<int>(std::lround(circulation / (2.0 * kPi)));
    }
  }
  return total;
}

inline double bilinear_image(const oamsim::RealImage& img, double x_um,
                             double y_um) {
  const oamsim::GridSpec& g = img.grid;
  const double fi = (x_um - g.origin_x_um) / g.pitch_um;
  const double fj = (y_um - g.origin_y_um) / g.pitch_um;
  const int i0 = static_cast<int>(std::floor(fi));
  const int j0 = static_cast<int>(std::floor(fj));
  const double di = fi - i0;
  const double dj = fj - j0;
  return img.at(i0, j0) * (1 - di) * (1 - dj) +
         img.at(i0 + 1, j0) * di * (1 - dj) +
         img.at(i0, j0 + 1) * (1 - di) * dj + img.at(i0 + 1, j0 + 1) * di * dj;
}

/// Slope of the fringe-maximum angle versus radius on a rendered
/// interferogram; its sign is the sense of the spiral.
inline double fringe_angle_slope(const oamsim::RealImage& img, double r_lo_um,
                                 double r_hi_um, int n_rings = 25,
                                 int n_angles = 1440) {
  std::vector<double> radii(n_rings), angles(n_rings);
  for (int k = 0; k < n_rings; ++k) {
    const double r = r_lo_um + (r_hi_um - r_lo_um) * k / (n_rings - 1);
    radii[k] = r;
    double best = -1.0;
    double best_angle = 0.0;
    for (int a = 0; a < n_angles; ++a) {
      const double theta = 2.0 * kPi * a / n_angles;
      const double v =
          bilinear_image(img, r * std::cos(theta), r * std::sin(theta));
      if (v > best) {
        best = v;
        best_angle = theta;
      }
    }
    angles[k] = best_angle;
  }
  // unwrap ring to ring
  for (int k = 1; k < n_rings; ++k) {
    while (angles[k] - angles[k - 1] > kPi) angles[k] -= 2.0 * kPi;
    while (angles[k] - angles[k - 1] < -kPi) angles[k] += 2.0 * kPi;
  }
  // least-squares slope
  double sr = 0, sa = 0, srr = 0, sra = 0;
  for (int k = 0; k < n_rings; ++k) {
    sr += radii[k];
    sa += angles[k];
    srr += radii[k] * radii[k];
    sra += radii[k] * angles[k];
  }
  const double n = n_rings;
  return (n * sra - sr * sa) / (n * srr - sr * sr);
}

/// Least-squares single-exponential time constant of y(t) = y0 e^{-t/tau}.
inline double fit_exponential_tau(const std::vector<double>& t,
                                  const std::vector<double>& y) {
  double st = 0, sl = 0, stt = 0, stl = 0;
  const double n = static_cast<double>(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double logy = std::log(y[k]);
    st += t[k];
    sl += logy;
    stt += t[k] * t[k];
    stl += t[k] * logy;
  }
  const double slope = (n * stl - st * sl) / (n * stt - st * st);
  return -1.0 / slope;
}

}  // namespace testsupport
