#include "chaintrack/quantize.hpp"

#include <cmath>

namespace chaintrack {

std::int16_t QuantChannel::encode(double v) const {
    const double scaled = v / full_scale * 32767.0;
    const double clamped = scaled > 32767.0 ? 32767.0 : (scaled < -32767.0 ? -32767.0 : scaled);
    return static_cast<std::int16_t>(std::lround(clamped));
}

double QuantChannel::decode(std::int16_t code) const {
    return static_cast<double>(code) / 32767.0 * full_scale;
}

}  // namespace chaintrack
