#pragma once

#include <cstdint>
#include <vector>

#include "dv/bits.hpp"
#include "dv/dsp.hpp"

namespace dv {

// CRC-16/CCITT-FALSE: poly 0x1021, init 0xFFFF, no reflection, no final
// xor. Check value: crc16("123456789") == 0x29B1.
std::uint16_t crc16_ccitt_false(const Bytes& data);

// Wire format: [len_hi len_lo] payload [crc_hi crc_lo], CRC computed over
// length + payload. Payload limited to 65535 bytes.
Bytes build_frame(const Bytes& payload);

// Inverse of build_frame. Throws FrameError when the buffer is shorter or
// longer than the length field implies, CrcError on checksum mismatch.
Bytes parse_frame(const Bytes& frame);

// Per-tone energy levels measured from a preamble (or synthesized for a
// clean reference). Energies are Goertzel powers over a window of
// window_samples samples.
struct Calibration {
    std::vector<double> tones;
    std::vector<double> on_energy;
    std::vector<double> noise_floor;
    int window_samples = 0;
};

// Synchronization preamble, 8 symbol intervals of symbol_s seconds each:
//   [all tones on, 2 intervals][silence, 1][on,off,on,on,off]
// Every "on" plays the whole bank at per_tone_amplitude.
PcmBuffer emit_preamble(const std::vector<double>& bank, double symbol_s,
                        int sample_rate, double per_tone_amplitude);

struct SyncResult {
    std::size_t payload_offset = 0; // first sample after the preamble
    Calibration cal;
};

// Finds the preamble by sliding a T/4-hop correlator of the on/off pattern
// over aggregate bank energy, then refines the start to sub-millisecond
// accuracy from the onset edge. Searches the first 10 seconds; throws
// SyncError when no candidate reaches 0.9 normalized correlation (plus an
// on/off contrast gate that keeps pure noise from syncing).
SyncResult detect_preamble(const PcmBuffer& buf, const std::vector<double>& bank,
                           double symbol_s, double per_tone_amplitude);

// Calibration a clean, unit-gain preamble would produce. Used as the
// reference when decoding unframed streams and for gain estimation.
Calibration reference_calibration(const std::vector<double>& bank, double symbol_s,
                                  int sample_rate, double per_tone_amplitude);

} // namespace dv
