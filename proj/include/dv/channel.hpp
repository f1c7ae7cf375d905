#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dv/dsp.hpp"

namespace dv {

// Simulated acoustic path. Applied in order: frequency response (with
// notches) -> scalar gain -> additive white Gaussian noise -> hard clip.
// snr_db is measured against the noiseless pipeline output over the whole
// buffer; leave it unset (or infinite) for a noise-free channel.
struct ChannelSpec {
    std::optional<double> snr_db;
    // Piecewise-linear |H(f)|: (frequency Hz, linear gain), sorted by
    // frequency. Gains are clamped to the end points outside the range.
    // Empty means flat.
    std::vector<std::pair<double, double>> response;
    // Each notch attenuates center +/- 30 Hz down to gain 0.001.
    std::vector<double> notches;
    double gain = 1.0;
    double clip = 1.0;
    std::uint64_t seed = 0;
};

inline constexpr double kNotchHalfWidthHz = 30.0;
inline constexpr double kNotchGain = 1e-3;

// Parses the key=value channel description format:
//   snr_db=20
//   response=200:0.5,1000:1.0,8000:0.7
//   notch=2000
//   gain=0.8
//   clip=1.0
//   seed=42
// Blank lines and lines starting with '#' are ignored; notch may repeat.
ChannelSpec parse_channel_spec(const std::string& text);
std::string format_channel_spec(const ChannelSpec& spec);

// White Gaussian noise added at the requested SNR relative to the input
// power. Deterministic for a given seed. Rejects all-zero input when the
// SNR is finite (noise power would be undefined).
PcmBuffer awgn(const PcmBuffer& buf, double snr_db, std::uint64_t seed);

// Runs the whole pipeline. Output length equals input length.
PcmBuffer apply_channel(const ChannelSpec& spec, const PcmBuffer& buf);

} // namespace dv
