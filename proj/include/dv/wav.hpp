#pragma once

#include <string>

#include "dv/dsp.hpp"

namespace dv {

// RIFF/WAVE, PCM, 16-bit signed little-endian, mono. Samples are clamped to
// [-1, +1] and quantized to 16 bits on write, scaled back on read, so a
// write/read round trip changes each sample by at most one quantization
// step. Throws dv::Error on IO failures or malformed/unsupported files.
void write_wav(const std::string& path, const PcmBuffer& buf);
PcmBuffer read_wav(const std::string& path);

} // namespace dv
