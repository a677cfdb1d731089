#pragma once

#include <numbers>

// Unit conversions for the CLI/file boundary. Everything inside the library
// is SI: pascals, meters, radians, seconds, kelvins. Config files and command
// line flags speak kPa / mm / degrees, matching the conventions of the
// measurement data this toolkit consumes.

namespace exosuit::units {

inline constexpr double kPi = std::numbers::pi;

inline constexpr double kpa_to_pa(double kpa) { return kpa * 1e3; }
inline constexpr double pa_to_kpa(double pa) { return pa * 1e-3; }

inline constexpr double mm_to_m(double mm) { return mm * 1e-3; }
inline constexpr double m_to_mm(double m) { return m * 1e3; }

inline constexpr double mm2_to_m2(double mm2) { return mm2 * 1e-6; }
inline constexpr double m2_to_mm2(double m2) { return m2 * 1e6; }

inline constexpr double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
inline constexpr double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

}  // namespace exosuit::units
