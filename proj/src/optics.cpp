#include "oamsim/optics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace oamsim {

namespace {

constexpr double kPi = std::numbers::pi;

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

}  // namespace

GridSpec GridSpec::centered(int width, int height, double pitch_um) {
  GridSpec g;
  g.width = width;
  g.height = height;
  g.pitch_um = pitch_um;
  g.origin_x_um = -0.5 * (width - 1) * pitch_um;
  g.origin_y_um = -0.5 * (height - 1) * pitch_um;
  return g;
}

double ModeSpec::rayleigh_range_um() const {
  const double lambda_um = wavelength_nm * 1e-3;
  return kPi * w0_um * w0_um / lambda_um;
}

ComplexField ComplexField::zeros(const GridSpec& grid, Direction direction) {
  ComplexField f;
  f.grid = grid;
  f.direction = direction;
  f.data.assign(grid.pixels(), Complex{0.0, 0.0});
  return f;
}

double ComplexField::power() const {
  double sum = 0.0;
  for (const Complex& v : data) sum += std::norm(v);
  return sum * grid.pitch_um * grid.pitch_um;
}

double ComplexField::max_abs() const {
  double m = 0.0;
  for (const Complex& v : data) m = std::max(m, std::abs(v));
  return m;
}

double RealImage::max_value() const {
  double m = 0.0;
  for (double v : data) m = std::max(m, v);
  return m;
}

Complex lg_amplitude(const ModeSpec& spec, double x_um, double y_um) {
  // Map the lab-frame sample point into the beam's own transverse frame:
  // looking along -z, the lab x axis appears reversed.
  double xr = x_um - spec.center_x_um;
  const double yr = y_um - spec.center_y_um;
  if (spec.direction == Direction::backward) xr = -xr;

  const int n = std::abs(spec.charge);
  const double z_r = spec.rayleigh_range_um();
  const double wz = spec.w0_um * std::sqrt(1.0 + (spec.z_um / z_r) * (spec.z_um / z_r));
  // 1/R(z), zero at the waist.
  const double inv_r = spec.z_um / (spec.z_um * spec.z_um + z_r * z_r);
  const double k = 2.0 * kPi / (spec.wavelength_nm * 1e-3);
  const double gouy = (n + 1) * std::atan2(spec.z_um, z_r);

  const double r2 = xr * xr + yr * yr;
  const double phi = std::atan2(yr, xr);
  const double norm = std::sqrt(2.0 / (kPi * factorial(n))) / wz;
  const double amp =
      norm * std::pow(std::sqrt(2.0 * r2) / wz, n) * std::exp(-r2 / (wz * wz));
  const double phase = -spec.charge * phi - 0.5 * k * r2 * inv_r + gouy;
  return spec.weight * std::polar(amp, phase);
}

ComplexField sample_superposition(const std::vector<ModeSpec>& specs,
                                  const GridSpec& grid) {
  Direction dir = Direction::forward;
  if (!specs.empty()) {
    dir = specs.front().direction;
    for (const ModeSpec& s : specs) {
      if (s.direction != dir)
        throw MixedDirectionsError("superposition mixes forward and backward modes");
    }
  }
  ComplexField field = ComplexField::zeros(grid, dir);
  for (int j = 0; j < grid.height; ++j) {
    const double y = grid.y(j);
    for (int i = 0; i < grid.width; ++i) {
      const double x = grid.x(i);
      Complex sum{0.0, 0.0};
      for (const ModeSpec& s : specs) sum += lg_amplitude(s, x, y);
      field.at(i, j) = sum;
    }
  }
  return field;
}

std::vector<ModeSpec> transform_mode(const std::vector<ModeSpec>& specs,
                                     ModeTransform op) {
  if (specs.empty()) throw EmptyInputError("transform_mode: empty mode list");
  std::vector<ModeSpec> out = specs;
  for (ModeSpec& s : out) {
    switch (op) {
      case ModeTransform::mirror:
        s.charge = -s.charge;
        s.center_x_um = -s.center_x_um;
        break;
      case ModeTransform::through_focus:
        // e^{-i(|m|+1)pi} is exactly -1 for even |m|, +1 for odd.
        if ((std::abs(s.charge) + 1) % 2 != 0) s.weight = -s.weight;
        s.z_um = -s.z_um;
        break;
    }
  }
  return out;
}

RealImage interference_image(const ComplexField& a, const ComplexField& b) {
  if (a.width() != b.width() || a.height() != b.height() ||
      a.pitch_um() != b.pitch_um())
    throw GridMismatchError("interference_image: grids differ in size or pitch");
  RealImage img;
  img.grid = a.grid;
  img.data.resize(a.data.size());
  for (std::size_t k = 0; k < a.data.size(); ++k)
    img.data[k] = std::norm(a.data[k] + b.data[k]);
  return img;
}

ComplexField flip_horizontal(const ComplexField& field) {
  ComplexField out;
  out.grid = field.grid;
  out.grid.origin_x_um =
      -(field.grid.origin_x_um + (field.grid.width - 1) * field.grid.pitch_um);
  out.direction = opposite(field.direction);
  out.data.resize(field.data.size());
  for (int j = 0; j < field.height(); ++j)
    for (int i = 0; i < field.width(); ++i)
      out.at(i, j) = field.at(field.width() - 1 - i, j);
  return out;
}

namespace {

Complex bilinear(const ComplexField& f, double x_um, double y_um) {
  const GridSpec& g = f.grid;
  const double fi = (x_um - g.origin_x_um) / g.pitch_um;
  const double fj = (y_um - g.origin_y_um) / g.pitch_um;
  const int i0 = static_cast<int>(std::floor(fi));
  const int j0 = static_cast<int>(std::floor(fj));
  const double di = fi - i0;
  const double dj = fj - j0;
  const Complex v00 = f.at(i0, j0);
  const Complex v10 = f.at(i0 + 1, j0);
  const Complex v01 = f.at(i0, j0 + 1);
  const Complex v11 = f.at(i0 + 1, j0 + 1);
  return v00 * ((1 - di) * (1 - dj)) + v10 * (di * (1 - dj)) +
         v01 * ((1 - di) * dj) + v11 * (di * dj);
}

}  // namespace

int measure_charge(const ComplexField& field, double radius_um,
                   double center_x_um, double center_y_um, ChargeFrame frame) {
  const GridSpec& g = field.grid;
  if (g.width < 2 || g.height < 2)
    throw std::invalid_argument("measure_charge: grid too small");
  if (!(radius_um > 0))
    throw std::invalid_argument("measure_charge: radius must be > 0");
  // The interpolation cell of every circle point must lie inside the grid.
  const double x_lo = g.origin_x_um;
  const double x_hi = g.origin_x_um + (g.width - 2) * g.pitch_um;
  const double y_lo = g.origin_y_um;
  const double y_hi = g.origin_y_um + (g.height - 2) * g.pitch_um;
  if (center_x_um - radius_um < x_lo || center_x_um + radius_um > x_hi ||
      center_y_um - radius_um < y_lo || center_y_um + radius_um > y_hi)
    throw std::invalid_argument("measure_charge: circle extends outside the grid");

  const double floor_amp = 1e-6 * field.max_abs();
  constexpr int kSamples = 512;

  double winding = 0.0;
  double prev = 0.0;
  for (int k = 0; k <= kSamples; ++k) {
    const double theta = 2.0 * kPi * k / kSamples;
    const Complex v = bilinear(field, center_x_um + radius_um * std::cos(theta),
                               center_y_um + radius_um * std::sin(theta));
    if (!(std::abs(v) > floor_amp))
      throw LowAmplitudeError("measure_charge: amplitude below floor on the circle");
    const double a = std::arg(v);
    if (k > 0) {
      double d = a - prev;
      while (d > kPi) d -= 2.0 * kPi;
      while (d <= -kPi) d += 2.0 * kPi;
      winding += d;
    }
    prev = a;
  }
  const double turns = winding / (2.0 * kPi);
  const double nearest = std::round(turns);
  if (std::abs(turns - nearest) > 0.05)
    throw NonIntegerWindingError("measure_charge: winding is not close to an integer");

  // e^{-i m phi} winds by -m counterclockwise turns, so the charge label is
  // the negated winding of the stored (lab-frame) phase.
  const int lab_charge = -static_cast<int>(nearest);
  if (frame == ChargeFrame::beam && field.direction == Direction::backward)
    return -lab_charge;
  return lab_charge;
}

Complex overlap(const ComplexField& a, const ComplexField& b) {
  if (a.width() != b.width() || a.height() != b.height() ||
      a.pitch_um() != b.pitch_um())
    throw GridMismatchError("overlap: grids differ in size or pitch");
  Complex sum{0.0, 0.0};
  for (std::size_t k = 0; k < a.data.size(); ++k)
    sum += std::conj(a.data[k]) * b.data[k];
  return sum * (a.pitch_um() * a.pitch_um());
}

}  // namespace oamsim
