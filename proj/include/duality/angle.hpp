#pragma once

#include <string>
#include <string_view>

namespace duality {

/// Parses an angle in radians. Accepts plain decimals ("0.25", "-1e-3") and
/// multiples of pi: "pi", "-pi/2", "17pi/36", "17*pi/36", "2*pi", "pi/12".
/// Throws std::invalid_argument on anything else.
double parse_angle(std::string_view text);

} // namespace duality
