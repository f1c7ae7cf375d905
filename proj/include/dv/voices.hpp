#pragma once

#include <string>
#include <vector>

#include "dv/bits.hpp"
#include "dv/dsp.hpp"

namespace dv {

// The seven transmit formats the toolkit speaks: ask8_fast, ask8_slow,
// ask128, fsk256, cricket (byte voices), r2d2 and url (text voices).
std::vector<std::string> voice_names();
bool is_voice(const std::string& voice);
bool voice_carries_bytes(const std::string& voice);

// Symbol-layer bit rate. For r2d2 this is the effective rate of a typical
// sentence (12 five-letter words), since its three symbol classes have
// different durations; source coding (url dictionary) is not counted.
double voice_data_rate_bps(const std::string& voice);

// Byte voices. Unframed audio is the bare symbol stream starting at sample
// zero; framed audio carries a sync preamble plus a length/CRC frame and
// decodes from any offset. Unframed payloads are padded to whole symbols,
// so unframed ask128 decode returns the payload zero-padded to 16 bytes.
PcmBuffer voice_encode_bytes(const std::string& voice, const Bytes& payload,
                             bool framed, int sample_rate = 44100);
Bytes voice_decode_bytes(const std::string& voice, const PcmBuffer& buf,
                         bool framed);

// Any voice. Text voices encode the string natively (url ignores `framed`:
// its wire format always carries a frame; framed r2d2 sends the frame bytes
// as hex characters). Byte voices transmit the raw string bytes.
PcmBuffer voice_encode_text(const std::string& voice, const std::string& text,
                            bool framed, int sample_rate = 44100);
std::string voice_decode_text(const std::string& voice, const PcmBuffer& buf,
                              bool framed);

// Measurement hook for error-rate harnesses that know the transmitted
// length: sync on the preamble, then demodulate exactly frame_bytes worth
// of symbols without consulting the length field, so bit errors are
// countable even when the CRC check would fail. Byte voices, framed audio.
BitString voice_demod_frame_bits(const std::string& voice, const PcmBuffer& buf,
                                 std::size_t frame_bytes);

} // namespace dv
