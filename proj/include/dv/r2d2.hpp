#pragma once

#include <array>
#include <string>
#include <vector>

#include "dv/dsp.hpp"

namespace dv {

// Expressive beep/chirp/grunt voice, 40 symbols total:
//   a-z  -> 100 ms beeps, one tone each, 1500 + 100*i Hz
//   space . , ? -> 250 ms frequency chirps (up / down / up-down / down-up)
//   0-9  -> 200 ms grunts, 2- or 3-tone subsets of {500, 600, 700, 800} Hz
// The three class bands never overlap, which is what makes the greedy
// decoder's class test cheap.
struct R2d2Alphabet {
    std::array<double, 26> beep_freqs{};
    double beep_s = 0.100;

    double chirp_lo_hz = 900.0;
    double chirp_hi_hz = 1400.0;
    double chirp_s = 0.250;

    std::array<double, 4> grunt_bank{};
    double grunt_s = 0.200;
    // Digit d plays grunt_combos[d]: six 2-subsets then four 3-subsets of
    // the grunt bank, each in lexicographic order.
    std::array<std::vector<int>, 10> grunt_combos;

    static const R2d2Alphabet& standard();
};

// Lowercases input; rejects characters outside the alphabet, reporting the
// offending position.
PcmBuffer r2d2_encode(const std::string& text, int sample_rate = 44100,
                      const R2d2Alphabet& alphabet = R2d2Alphabet::standard());

// Greedy left-to-right segmentation: an 80 ms look-ahead window picks the
// symbol class (beep: one beep-bank line, grunt: two or more grunt-bank
// lines, chirp: spectral centroid that moves between the window halves),
// then the full symbol duration is consumed and decoded. Decode failures
// report the sample offset.
std::string r2d2_decode(const PcmBuffer& buf,
                        const R2d2Alphabet& alphabet = R2d2Alphabet::standard());

struct SentenceStats {
    double duration_s = 0.0;
    double info_bps = 0.0; // word characters * log2(40) / duration
};

// Timing and information-rate summary for a text, without synthesizing it.
// Chirp characters (space and punctuation) take air time but carry no word
// information, so they lower the rate.
SentenceStats r2d2_sentence_stats(const std::string& text,
                                  const R2d2Alphabet& alphabet = R2d2Alphabet::standard());

} // namespace dv
