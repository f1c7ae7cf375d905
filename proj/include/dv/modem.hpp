#pragma once

#include <string>
#include <variant>
#include <vector>

#include "dv/bits.hpp"
#include "dv/dsp.hpp"
#include "dv/framing.hpp"

namespace dv {

// Multi-tone binary ASK: one symbol interval carries bank.size() bits, each
// tone keyed on/off independently. Every tone plays at tone_amplitude so
// calibration thresholds hold no matter how many tones a symbol lights.
struct AskConfig {
    std::string name;
    std::vector<double> tones;
    double symbol_s = 0.0;
    int sample_rate = 44100;

    double tone_amplitude() const { return 1.0 / static_cast<double>(tones.size()); }
    std::size_t bits_per_symbol() const { return tones.size(); }
    std::size_t symbol_samples() const;
    double data_rate_bps() const { return static_cast<double>(tones.size()) / symbol_s; }
    // True when adjacent tones sit closer than the 1/T resolution limit.
    bool sub_resolution() const;
};

// M-ary FSK: one tone out of tones.size() per symbol, log2(M) bits each.
struct FskConfig {
    std::string name;
    std::vector<double> tones;
    double symbol_s = 0.0;
    int sample_rate = 44100;
    double amplitude = 1.0;

    std::size_t bits_per_symbol() const;
    std::size_t symbol_samples() const;
    double data_rate_bps() const { return static_cast<double>(bits_per_symbol()) / symbol_s; }
    bool sub_resolution() const;
};

using ModemConfig = std::variant<AskConfig, FskConfig>;

// Named presets: ask8_fast, ask8_slow, ask128, fsk256.
ModemConfig modem_preset(const std::string& name);
std::vector<std::string> modem_preset_names();

double data_rate_bps(const ModemConfig& cfg);

// Bits are padded with zeros to a whole number of symbols. Bit i of each
// group keys tones[i].
PcmBuffer ask_modulate(const AskConfig& cfg, const BitString& bits);

// Per tone: on iff Goertzel energy over the symbol window exceeds the
// geometric mean of the calibrated on energy and noise floor. The buffer
// must be a whole number of symbol intervals and the calibration must cover
// every bank tone.
BitString ask_demodulate(const AskConfig& cfg, const PcmBuffer& buf,
                         const Calibration& cal);

// One symbol's worth of bits starting at sample `start`.
BitString ask_demod_symbol(const AskConfig& cfg, const PcmBuffer& buf,
                           std::size_t start, const Calibration& cal);

// One symbol per input byte (symbol values are the byte values).
PcmBuffer fsk_modulate(const FskConfig& cfg, const Bytes& data);

// Arg-max tone detection; ties resolve to the lowest tone index.
Bytes fsk_demodulate(const FskConfig& cfg, const PcmBuffer& buf);

std::uint8_t fsk_demod_symbol(const FskConfig& cfg, const PcmBuffer& buf,
                              std::size_t start);

} // namespace dv
