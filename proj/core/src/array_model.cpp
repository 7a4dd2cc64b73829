#include "doa/array_model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "doa/errors.hpp"

namespace doa {

ArrayConfig ArrayConfig::FromWavelengths(int sensors, double spacing_over_wavelength) {
  // c = 343 m/s at f = 343 Hz gives a 1 m wavelength, so spacing_m is the
  // ratio itself.
  ArrayConfig config;
  config.sensors = sensors;
  config.wave_speed = 343.0;
  config.omega = 2.0 * std::numbers::pi * 343.0;
  config.spacing_m = spacing_over_wavelength;
  return config;
}

double ArrayConfig::NormalizedSpacing() const {
  const double rho = omega * spacing_m / wave_speed;
  // Snap the last-ulp rounding of the physical product back onto pi.
  if (std::abs(rho - std::numbers::pi) <= 1e-12 * std::numbers::pi) return std::numbers::pi;
  return rho;
}

void ArrayConfig::Validate() const {
  if (sensors < 2) throw InvalidArgument("array needs at least 2 sensors, got " + std::to_string(sensors));
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(spacing_m)) throw InvalidArgument("sensor spacing must be positive");
  if (!positive(wave_speed)) throw InvalidArgument("wave speed must be positive");
  if (!positive(omega)) throw InvalidArgument("omega must be positive");
  const double rho = NormalizedSpacing();
  if (!positive(rho)) throw InvalidArgument("normalized spacing must be finite and positive");
  if (rho > std::numbers::pi) {
    throw InvalidArgument("aliasing: spacing exceeds half a wavelength (rho = " + std::to_string(rho) + ")");
  }
}

Angle Angle::Degrees(double degrees) {
  if (!(degrees >= -90.0 && degrees <= 90.0)) {
    throw InvalidArgument("angle " + std::to_string(degrees) + " deg outside [-90, 90]");
  }
  return Angle(degrees);
}

double Angle::radians() const { return degrees_ * std::numbers::pi / 180.0; }

double Angle::electrical() const { return std::sin(radians()); }

std::vector<Angle> AnglesFromDegrees(std::span<const double> degrees) {
  std::vector<Angle> out;
  out.reserve(degrees.size());
  for (double d : degrees) out.push_back(Angle::Degrees(d));
  return out;
}

std::vector<double> ToDegrees(std::span<const Angle> angles) {
  std::vector<double> out;
  out.reserve(angles.size());
  for (const Angle& a : angles) out.push_back(a.degrees());
  return out;
}

CVector SteeringVector(const ArrayConfig& config, Angle angle) {
  config.Validate();
  const double phase_step = -config.NormalizedSpacing() * angle.electrical();
  CVector a(config.sensors);
  a[0] = Complex(1.0, 0.0);
  for (int m = 1; m < config.sensors; ++m) a[m] = std::polar(1.0, phase_step * m);
  return a;
}

CMatrix SteeringMatrix(const ArrayConfig& config, std::span<const Angle> angles) {
  if (angles.empty()) throw InvalidArgument("no sources");
  CMatrix a(config.sensors, static_cast<Eigen::Index>(angles.size()));
  for (std::size_t n = 0; n < angles.size(); ++n) {
    a.col(static_cast<Eigen::Index>(n)) = SteeringVector(config, angles[n]);
  }
  return a;
}

}  // namespace doa
