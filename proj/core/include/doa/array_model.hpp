#ifndef DOA_ARRAY_MODEL_HPP
#define DOA_ARRAY_MODEL_HPP

#include <span>
#include <vector>

#include "doa/types.hpp"

namespace doa {

/// Uniform linear array geometry and the narrowband wave it observes.
///
/// The array response only depends on the normalized spacing
/// rho = omega * spacing / wave_speed (= 2*pi*d/lambda). rho must not exceed
/// pi, otherwise two directions map to the same phase progression.
struct ArrayConfig {
  int sensors = 11;
  double spacing_m = 0.5;       // d_H
  double wave_speed = 343.0;    // c, m/s
  double omega = 2.0 * 3.14159265358979323846 * 343.0;  // rad/s

  /// Array with the given spacing expressed in wavelengths
  /// (0.5 is the half-wavelength array, rho = pi).
  static ArrayConfig FromWavelengths(int sensors, double spacing_over_wavelength);

  double NormalizedSpacing() const;

  /// Throws InvalidArgument on M < 2, non-positive or non-finite physical
  /// parameters, or spatial aliasing (rho > pi).
  void Validate() const;
};

/// Direction of arrival measured from array broadside, in degrees.
/// Broadside is 0, endfire is +-90. The electrical parameter u = sin(phi)
/// equals cos(theta) for theta measured from the array axis.
class Angle {
 public:
  constexpr Angle() = default;

  /// Throws InvalidArgument outside [-90, 90] or on NaN.
  static Angle Degrees(double degrees);

  constexpr double degrees() const { return degrees_; }
  double radians() const;
  double electrical() const;  // u = sin(phi)

  friend constexpr auto operator<=>(const Angle&, const Angle&) = default;

 private:
  constexpr explicit Angle(double degrees) : degrees_(degrees) {}
  double degrees_ = 0.0;
};

std::vector<Angle> AnglesFromDegrees(std::span<const double> degrees);
std::vector<double> ToDegrees(std::span<const Angle> angles);

/// a_m = exp(-j * rho * u * m), m = 0..M-1.
CVector SteeringVector(const ArrayConfig& config, Angle angle);

/// Columns are the steering vectors of `angles`; throws "no sources" when
/// the list is empty.
CMatrix SteeringMatrix(const ArrayConfig& config, std::span<const Angle> angles);

}  // namespace doa

#endif  // DOA_ARRAY_MODEL_HPP
