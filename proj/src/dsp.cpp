#include "dv/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dv {

namespace {

void check_probe_args(const PcmBuffer& buf, double freq_hz, WindowSpec w) {
    if (buf.sample_rate <= 0)
        throw std::invalid_argument("probe: non-positive sample rate");
    if (!(freq_hz > 0.0) || !(freq_hz < buf.sample_rate / 2.0))
        throw std::invalid_argument("probe: frequency " + std::to_string(freq_hz) +
                                    " Hz outside (0, Nyquist)");
    if (w.length == 0)
        throw std::invalid_argument("probe: empty window");
    if (w.start > buf.size() || buf.size() - w.start < w.length)
        throw std::invalid_argument("probe: window exceeds buffer");
}

} // namespace

WindowSpec whole_window(const PcmBuffer& buf) {
    return WindowSpec{0, buf.size()};
}

std::vector<double> tone_envelope(std::size_t num_samples, int sample_rate) {
    if (sample_rate <= 0)
        throw std::invalid_argument("tone_envelope: non-positive sample rate");
    if (num_samples == 0)
        throw std::invalid_argument("tone_envelope: zero-length envelope");
    const std::size_t ramp =
        std::min<std::size_t>(static_cast<std::size_t>(std::lround(kToneRampSeconds * sample_rate)),
                              num_samples / 2);
    std::vector<double> env(num_samples, 1.0);
    for (std::size_t n = 0; n < ramp; ++n) {
        const double rise = 0.5 * (1.0 - std::cos(std::numbers::pi * (n + 1.0) / (ramp + 1.0)));
        env[n] = rise;
        env[num_samples - 1 - n] = rise;
    }
    return env;
}

PcmBuffer synth_tone_samples(double freq_hz, std::size_t num_samples,
                             double amplitude, int sample_rate) {
    if (sample_rate <= 0)
        throw std::invalid_argument("synth_tone: non-positive sample rate");
    if (!(freq_hz > 0.0) || !(freq_hz < sample_rate / 2.0))
        throw std::invalid_argument("synth_tone: frequency " + std::to_string(freq_hz) +
                                    " Hz outside (0, Nyquist)");
    if (amplitude < 0.0 || amplitude > 1.0)
        throw std::invalid_argument("synth_tone: amplitude outside [0, 1]");
    if (num_samples == 0)
        throw std::invalid_argument("synth_tone: zero-length tone");

    PcmBuffer out;
    out.sample_rate = sample_rate;
    out.samples.resize(num_samples);

    const double w = 2.0 * std::numbers::pi * freq_hz / sample_rate;
    const std::vector<double> env = tone_envelope(num_samples, sample_rate);
    for (std::size_t n = 0; n < num_samples; ++n)
        out.samples[n] = amplitude * env[n] * std::sin(w * static_cast<double>(n));
    return out;
}

PcmBuffer synth_tone(double freq_hz, double duration_s, double amplitude,
                     int sample_rate) {
    if (!(duration_s > 0.0))
        throw std::invalid_argument("synth_tone: non-positive duration");
    const auto n = static_cast<std::size_t>(std::lround(duration_s * sample_rate));
    if (n == 0)
        throw std::invalid_argument("synth_tone: duration rounds to zero samples");
    return synth_tone_samples(freq_hz, n, amplitude, sample_rate);
}

PcmBuffer mix(const std::vector<PcmBuffer>& buffers) {
    if (buffers.empty())
        throw std::invalid_argument("mix: empty buffer list");
    const int sr = buffers.front().sample_rate;
    std::size_t longest = 0;
    for (const auto& b : buffers) {
        if (b.sample_rate != sr)
            throw std::invalid_argument("mix: sample rates differ");
        longest = std::max(longest, b.size());
    }
    PcmBuffer out;
    out.sample_rate = sr;
    out.samples.assign(longest, 0.0);
    const double scale = 1.0 / static_cast<double>(buffers.size());
    for (const auto& b : buffers)
        for (std::size_t i = 0; i < b.size(); ++i)
            out.samples[i] += scale * b.samples[i];
    return out;
}

PcmBuffer concat(const std::vector<PcmBuffer>& buffers) {
    if (buffers.empty())
        throw std::invalid_argument("concat: empty buffer list");
    const int sr = buffers.front().sample_rate;
    std::size_t total = 0;
    for (const auto& b : buffers) {
        if (b.sample_rate != sr)
            throw std::invalid_argument("concat: sample rates differ");
        total += b.size();
    }
    PcmBuffer out;
    out.sample_rate = sr;
    out.samples.reserve(total);
    for (const auto& b : buffers)
        out.samples.insert(out.samples.end(), b.samples.begin(), b.samples.end());
    return out;
}

double goertzel_power(const PcmBuffer& buf, double freq_hz, WindowSpec window) {
    check_probe_args(buf, freq_hz, window);
    const double w = 2.0 * std::numbers::pi * freq_hz / buf.sample_rate;
    const double coeff = 2.0 * std::cos(w);
    double s1 = 0.0, s2 = 0.0;
    const double* x = buf.samples.data() + window.start;
    for (std::size_t n = 0; n < window.length; ++n) {
        const double s0 = x[n] + coeff * s1 - s2;
        s2 = s1;
        s1 = s0;
    }
    const double p = s1 * s1 + s2 * s2 - coeff * s1 * s2;
    return p > 0.0 ? p : 0.0;
}

double dft_power_oracle(const PcmBuffer& buf, double freq_hz, WindowSpec window) {
    check_probe_args(buf, freq_hz, window);
    const double w = 2.0 * std::numbers::pi * freq_hz / buf.sample_rate;
    double re = 0.0, im = 0.0;
    const double* x = buf.samples.data() + window.start;
    for (std::size_t n = 0; n < window.length; ++n) {
        re += x[n] * std::cos(w * static_cast<double>(n));
        im += x[n] * std::sin(w * static_cast<double>(n));
    }
    return re * re + im * im;
}

} // namespace dv
