#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dv/bits.hpp"

namespace dv {

// Bits per second of an n-symbol repertoire produced at the given rate:
// log2(num_symbols) * symbols_per_s. With 40 phonemes at 10 per second this
// is the 53 bps speech bound the modem rates are compared against.
double phoneme_rate(int num_phonemes, double phonemes_per_s);

// Hamming distance / length. Lengths must match and be nonzero;
// misalignment is a different failure and is reported separately.
double bit_error_rate(const BitString& sent, const BitString& received);

// payload_bits / duration, for measuring emitted waveforms (preamble
// excluded by the caller).
double throughput(std::size_t payload_bits, double audio_duration_s);

struct SweepRow {
    double snr_db = 0.0;
    int trials = 0;
    std::size_t total_bits = 0;
    std::size_t bit_errors = 0;
    double ber = 0.0;
    double mean_decode_status = 0.0; // fraction of trials with sync + CRC ok
};

// Monte-Carlo BER sweep for a byte voice: per SNR point, `trials`
// independent trips of random payload -> frame -> modulate -> AWGN ->
// sync -> demodulate. Bit errors are counted on the demodulated frame bits
// against the sent frame (the receiver is told the length, so a corrupted
// CRC still yields countable bits); sync failures contribute no bits and a
// zero decode status. Reproducible: trial seed = seed XOR
// (snr_index * 10^6 + trial_index). snr_db may be +infinity (clean row).
std::vector<SweepRow> sweep_ber(const std::string& voice,
                                const std::vector<double>& snr_db_list,
                                int trials, std::size_t payload_bytes,
                                std::uint64_t seed);

// Header "snr_db,trials,total_bits,bit_errors,ber,mean_decode_status" plus
// one line per row. Byte-identical for identical inputs.
std::string sweep_to_csv(const std::vector<SweepRow>& rows);

} // namespace dv
