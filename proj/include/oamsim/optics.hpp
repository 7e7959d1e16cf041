#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "oamsim/errors.hpp"

namespace oamsim {

using Complex = std::complex<double>;

constexpr double kDefaultWavelengthNm = 852.3;  // Cs D2 line

enum class Direction { forward, backward };

inline Direction opposite(Direction d) {
  return d == Direction::forward ? Direction::backward : Direction::forward;
}

/// Pixel lattice with physical coordinates. origin is the position of
/// pixel (0,0); pixel (i,j) sits at (origin_x + i*pitch, origin_y + j*pitch).
struct GridSpec {
  int width = 0;
  int height = 0;
  double pitch_um = 1.0;
  double origin_x_um = 0.0;
  double origin_y_um = 0.0;

  static GridSpec centered(int width, int height, double pitch_um);

  double x(int i) const { return origin_x_um + i * pitch_um; }
  double y(int j) const { return origin_y_um + j * pitch_um; }
  std::size_t pixels() const {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }

  bool operator==(const GridSpec&) const = default;
};

/// One Laguerre-Gaussian component LG_0^m, described in the beam's own
/// transverse frame (x to the right when looking along the propagation
/// direction, azimuth counterclockwise, phase factor e^{-i m phi}).
struct ModeSpec {
  int charge = 0;             // topological charge m
  int radial_index = 0;       // fixed 0
  double w0_um = 100.0;       // waist
  double z_um = 0.0;          // distance from the waist plane
  Complex weight = {1.0, 0.0};
  double center_x_um = 0.0;
  double center_y_um = 0.0;
  Direction direction = Direction::forward;
  double wavelength_nm = kDefaultWavelengthNm;

  double rayleigh_range_um() const;

  bool operator==(const ModeSpec&) const = default;
};

/// Sampled complex amplitude on a grid. Data is row-major, data[j*width + i].
struct ComplexField {
  GridSpec grid;
  Direction direction = Direction::forward;
  std::vector<Complex> data;

  static ComplexField zeros(const GridSpec& grid,
                            Direction direction = Direction::forward);

  int width() const { return grid.width; }
  int height() const { return grid.height; }
  double pitch_um() const { return grid.pitch_um; }

  Complex& at(int i, int j) { return data[static_cast<std::size_t>(j) * grid.width + i]; }
  const Complex& at(int i, int j) const {
    return data[static_cast<std::size_t>(j) * grid.width + i];
  }

  /// Integrated power, sum |E|^2 * pitch^2.
  double power() const;
  double max_abs() const;
};

/// Real-valued image on a grid (intensities, interferograms).
struct RealImage {
  GridSpec grid;
  std::vector<double> data;

  int width() const { return grid.width; }
  int height() const { return grid.height; }

  double& at(int i, int j) { return data[static_cast<std::size_t>(j) * grid.width + i]; }
  const double& at(int i, int j) const {
    return data[static_cast<std::size_t>(j) * grid.width + i];
  }
  double max_value() const;
};

enum class ModeTransform { mirror, through_focus };

/// Frame in which a phase winding is reported: the beam's own transverse
/// frame (per the field's direction tag) or the grid/lab frame as stored.
enum class ChargeFrame { beam, lab };

/// Complex amplitude of one LG component at lab-frame position (x, y).
/// Modes are normalized to unit power before the weight is applied; z != 0
/// uses the standard propagation factors (waist growth, wavefront curvature,
/// Gouy phase (|m|+1) atan(z/zR)).
Complex lg_amplitude(const ModeSpec& spec, double x_um, double y_um);

/// Pointwise sum of lg_amplitude over all components. All specs must share
/// one direction; an empty list yields an all-zero forward field.
ComplexField sample_superposition(const std::vector<ModeSpec>& specs,
                                  const GridSpec& grid);

/// Symbolic beam transforms. mirror reflects the transverse x axis
/// (m -> -m, x0 -> -x0); through_focus mirrors z about the waist and
/// multiplies the weight by e^{-i(|m|+1)pi}.
std::vector<ModeSpec> transform_mode(const std::vector<ModeSpec>& specs,
                                     ModeTransform op);

/// Pixelwise |a+b|^2. Grids must match in size and pitch.
RealImage interference_image(const ComplexField& a, const ComplexField& b);

/// Field mirrored about the grid's vertical axis (x -> -x); the view of the
/// beam from the other side. Toggles the direction tag.
ComplexField flip_horizontal(const ComplexField& field);

/// Topological charge from the accumulated phase winding on a circle of the
/// given radius: the integer m of the local e^{-i m phi} convention, reported
/// in the requested frame. Uses >= 256 bilinear samples on the circle.
/// Throws LowAmplitudeError if any sample falls below 1e-6 * max|E|, and
/// NonIntegerWindingError if the winding is farther than 0.05 from an integer.
int measure_charge(const ComplexField& field, double radius_um,
                   double center_x_um = 0.0, double center_y_um = 0.0,
                   ChargeFrame frame = ChargeFrame::beam);

/// Overlap integral <a|b> = sum conj(a) * b * pitch^2.
Complex overlap(const ComplexField& a, const ComplexField& b);

}  // namespace oamsim
