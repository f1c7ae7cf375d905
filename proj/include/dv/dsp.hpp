#pragma once

#include <cstddef>
#include <vector>

namespace dv {

// Mono PCM audio. Samples are doubles so that energy measurements keep
// enough precision for the tight test tolerances; synthesis keeps every
// sample in [-1, +1]. Channel noise may push values outside that range
// until the clipper runs.
struct PcmBuffer {
    std::vector<double> samples;
    int sample_rate = 44100;

    std::size_t size() const { return samples.size(); }
    double duration_s() const {
        return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
    }
};

// Half-open sample range [start, start + length) within a buffer.
struct WindowSpec {
    std::size_t start = 0;
    std::size_t length = 0;
};

// Window covering the whole buffer.
WindowSpec whole_window(const PcmBuffer& buf);

// Raised-cosine onset/offset ramp applied to every synthesized tone burst.
inline constexpr double kToneRampSeconds = 0.002;

// Pure sine burst with raised-cosine edges. round(duration_s * sample_rate)
// samples; peak never exceeds |amplitude|. Rejects freq outside
// (0, sample_rate/2), non-positive duration, amplitude outside [0, 1].
PcmBuffer synth_tone(double freq_hz, double duration_s, double amplitude,
                     int sample_rate = 44100);

// Same burst, length given directly in samples (avoids double rounding when
// a caller lays out symbols on an integer sample grid).
PcmBuffer synth_tone_samples(double freq_hz, std::size_t num_samples,
                             double amplitude, int sample_rate = 44100);

// The amplitude envelope synth_tone_samples applies: unity plateau with
// raised-cosine ramps at both ends. Exposed so receivers can project onto
// the exact transmitted pulse shape.
std::vector<double> tone_envelope(std::size_t num_samples, int sample_rate);

// Element-wise sum scaled by 1/len(buffers). Shorter inputs are zero-padded
// to the longest. All inputs must share a sample rate; empty list rejected.
PcmBuffer mix(const std::vector<PcmBuffer>& buffers);

// Buffers joined back to back. Same sample-rate rule as mix().
PcmBuffer concat(const std::vector<PcmBuffer>& buffers);

// Squared magnitude of the single-bin projection sum(x[n] * e^{-jwn}) over
// the window, computed with the Goertzel recurrence. No 1/N normalization.
// Valid for any probe frequency in (0, sample_rate/2), not just DFT bins.
double goertzel_power(const PcmBuffer& buf, double freq_hz, WindowSpec window);

// Same quantity via direct sine/cosine inner products. Deliberately naive;
// this is the reference the fast path is tested against.
double dft_power_oracle(const PcmBuffer& buf, double freq_hz, WindowSpec window);

} // namespace dv
