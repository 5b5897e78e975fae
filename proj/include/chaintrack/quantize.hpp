// 16-bit symmetric quantization for bus payloads. Quaternion components
// map [-1, 1]; accelerations map the +/-16 g sensor range. Out-of-range
// values saturate at full scale (documented behavior, not an error).

#pragma once

#include <cstdint>

namespace chaintrack {

struct QuantChannel {
    double full_scale = 1.0;  // symmetric range [-full_scale, +full_scale]

    std::int16_t encode(double v) const;
    double decode(std::int16_t code) const;
    double roundtrip(double v) const { return decode(encode(v)); }

    /// Worst-case representation error for in-range inputs.
    double max_error() const { return full_scale / 32767.0; }
};

struct QuantSpec {
    QuantChannel quat{1.0};
    QuantChannel accel{156.9};  // m/s^2, +/-16 g full scale

    static QuantSpec defaults() { return {}; }
};

}  // namespace chaintrack
