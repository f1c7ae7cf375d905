#pragma once

#include <array>
#include <cstdint>

#include "dv/bits.hpp"
#include "dv/dsp.hpp"
#include "dv/framing.hpp"

namespace dv {

// Cricket-style voice: every symbol is a train of three fast carrier beeps.
// The train's start offset within the symbol period encodes 3 bits (8 phase
// slots) and the beep amplitude encodes 2 more (4 levels), so one train
// carries 5 bits. 32 symbols total, 5 / 0.225 s = 22.2 bps.
struct CricketConfig {
    double carrier_hz = 4500.0;
    double beep_s = 0.015;
    double gap_s = 0.010;    // silence between the three beeps
    double period_s = 0.225; // one symbol
    double slot_s = 0.020;   // phase-slot width
    int num_slots = 8;
    std::array<double, 4> amp_levels = {1.00, 0.63, 0.40, 0.25};
    int sample_rate = 44100;

    std::size_t period_samples() const;
    std::size_t beep_samples() const;
    std::size_t gap_samples() const;
    std::size_t slot_samples() const;
    double data_rate_bps() const { return 5.0 / period_s; }

    static CricketConfig standard() { return CricketConfig{}; }
};

// Waveform for one symbol value in [0, 32): value = phase_slot * 4 + level.
PcmBuffer cricket_symbol_waveform(const CricketConfig& cfg, int value);

// Packs bits big-endian into 5-bit symbols, zero-padding the tail group.
PcmBuffer cricket_encode(const CricketConfig& cfg, const BitString& bits);

// Per period: a 5 ms-hop carrier-energy envelope locates the triad onset
// (nearest phase slot), and the mean beep energy picks the nearest
// calibrated amplitude level in log-energy. cal supplies the carrier's
// on-level (from a measured preamble, or reference_calibration for clean
// unframed streams); a silent period raises DecodeError with its index.
BitString cricket_decode(const CricketConfig& cfg, const PcmBuffer& buf,
                         const Calibration& cal);

// One symbol starting at sample `start`; period_index only labels errors.
int cricket_decode_symbol(const CricketConfig& cfg, const PcmBuffer& buf,
                          std::size_t start, const Calibration& cal,
                          std::size_t period_index);

} // namespace dv
