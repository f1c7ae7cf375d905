#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "dv/dsp.hpp"

using namespace dv;

namespace {

PcmBuffer random_buffer(std::mt19937_64& rng, std::size_t n, int sample_rate) {
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    std::uniform_real_distribution<double> freq(20.0, sample_rate / 2.0 - 20.0);
    PcmBuffer buf;
    buf.sample_rate = sample_rate;
    buf.samples.resize(n);
    // Mixture of a few sinusoids plus noise, so probe energies span many
    // orders of magnitude.
    const int tones = 1 + static_cast<int>(rng() % 4);
    for (int t = 0; t < tones; ++t) {
        const double f = freq(rng);
        const double a = 0.1 + 0.4 * std::abs(amp(rng));
        const double ph = amp(rng) * std::numbers::pi;
        const double w = 2.0 * std::numbers::pi * f / sample_rate;
        for (std::size_t i = 0; i < n; ++i)
            buf.samples[i] += a * std::sin(w * static_cast<double>(i) + ph);
    }
    for (std::size_t i = 0; i < n; ++i)
        buf.samples[i] += 0.05 * amp(rng);
    return buf;
}

double window_energy(const PcmBuffer& buf, WindowSpec w) {
    double e = 0.0;
    for (std::size_t i = w.start; i < w.start + w.length; ++i)
        e += buf.samples[i] * buf.samples[i];
    return e;
}

} // namespace

TEST_CASE("goertzel matches the direct projection oracle") {
    std::mt19937_64 rng(12345);
    const int sr = 44100;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 64 + rng() % 4096;
        PcmBuffer buf = random_buffer(rng, n, sr);
        const std::size_t len = 16 + rng() % (n - 16);
        const std::size_t start = rng() % (n - len + 1);
        std::uniform_real_distribution<double> freq(1.0, sr / 2.0 - 1.0);
        const double f = freq(rng);
        const WindowSpec w{start, len};

        const double g = goertzel_power(buf, f, w);
        const double d = dft_power_oracle(buf, f, w);
        // Relative agreement; the absolute floor keeps near-zero projections
        // (where both values are rounding dust) from tripping the ratio.
        const double floor = 1e-9 * window_energy(buf, w) + 1e-300;
        CHECK(std::abs(g - d) <= 1e-6 * std::max(d, floor));
    }
}

TEST_CASE("goertzel power scales quadratically with amplitude") {
    std::mt19937_64 rng(99);
    const int sr = 44100;
    PcmBuffer buf = random_buffer(rng, 2048, sr);
    const WindowSpec w{100, 1500};
    std::uniform_real_distribution<double> scale(1e-3, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const double c = scale(rng);
        PcmBuffer scaled = buf;
        for (double& s : scaled.samples)
            s *= c;
        std::uniform_real_distribution<double> freq(50.0, sr / 2.0 - 50.0);
        const double f = freq(rng);
        const double base = goertzel_power(buf, f, w);
        const double got = goertzel_power(scaled, f, w);
        CHECK(got == doctest::Approx(c * c * base).epsilon(1e-9));
    }
}

TEST_CASE("goertzel on an unramped integer-cycle tone hits the closed form") {
    // Hand-built sine (no ramps): 50 cycles of 1 kHz in 2205 samples.
    const int sr = 44100;
    const std::size_t n = 2205;
    const double f = 1000.0;
    PcmBuffer buf;
    buf.sample_rate = sr;
    buf.samples.resize(n);
    const double w = 2.0 * std::numbers::pi * f / sr;
    for (std::size_t i = 0; i < n; ++i)
        buf.samples[i] = 0.7 * std::sin(w * static_cast<double>(i));
    const double expect = 0.7 * 0.7 * (n / 2.0) * (n / 2.0);
    CHECK(goertzel_power(buf, f, whole_window(buf)) ==
          doctest::Approx(expect).epsilon(1e-9));
    // An orthogonal probe (integer cycle offset) sees nearly nothing.
    CHECK(goertzel_power(buf, 1100.0, whole_window(buf)) < 1e-12 * expect);
}

TEST_CASE("synth_tone length, peak, and ramp behavior") {
    PcmBuffer t = synth_tone(1000.0, 0.020, 0.5);
    CHECK(t.size() == 882);
    CHECK(t.sample_rate == 44100);
    double peak = 0.0;
    for (double s : t.samples)
        peak = std::max(peak, std::abs(s));
    CHECK(peak <= 0.5 + 1e-12);
    CHECK(peak > 0.4); // plateau actually reaches the requested amplitude
    // Ramps pull the edges close to zero.
    CHECK(std::abs(t.samples.front()) < 0.01);
    CHECK(std::abs(t.samples.back()) < 0.01);

    PcmBuffer z = synth_tone(1000.0, 0.5, 0.0);
    CHECK(z.size() == 22050);
    for (double s : z.samples)
        CHECK(s == 0.0);
}

TEST_CASE("synth_tone_samples is the envelope times a sine") {
    const int sr = 44100;
    const std::size_t n = 882;
    const double f = 1250.0;
    const double a = 0.125;
    PcmBuffer t = synth_tone_samples(f, n, a, sr);
    const std::vector<double> env = tone_envelope(n, sr);
    REQUIRE(env.size() == n);
    const double w = 2.0 * std::numbers::pi * f / sr;
    for (std::size_t i = 0; i < n; ++i) {
        const double expect = a * env[i] * std::sin(w * static_cast<double>(i));
        CHECK(t.samples[i] == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("tone_envelope shape") {
    const std::vector<double> env = tone_envelope(882, 44100);
    const std::size_t ramp = 88; // 2 ms at 44.1 kHz
    for (std::size_t i = 0; i < ramp; ++i) {
        CHECK(env[i] < 1.0);
        CHECK(env[i] > 0.0);
        // Symmetric at both ends.
        CHECK(env[i] == doctest::Approx(env[env.size() - 1 - i]).epsilon(1e-12));
    }
    for (std::size_t i = ramp; i < env.size() - ramp; ++i)
        CHECK(env[i] == 1.0);
    // Monotone rise.
    for (std::size_t i = 1; i < ramp; ++i)
        CHECK(env[i] > env[i - 1]);
}

TEST_CASE("synth_tone argument validation") {
    CHECK_THROWS_AS(synth_tone(0.0, 0.1, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(synth_tone(-10.0, 0.1, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(synth_tone(22050.0, 0.1, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(synth_tone(1000.0, 0.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(synth_tone(1000.0, -0.1, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(synth_tone(1000.0, 0.1, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(synth_tone(1000.0, 0.1, 1.5), std::invalid_argument);
}

TEST_CASE("mix averages, zero-pads, and stays inside [-1, 1]") {
    PcmBuffer a = synth_tone(1000.0, 0.050, 1.0);
    PcmBuffer b = synth_tone(1000.0, 0.050, 1.0);
    PcmBuffer m = mix({a, b});
    REQUIRE(m.size() == a.size());
    for (std::size_t i = 0; i < m.size(); ++i)
        CHECK(m.samples[i] == doctest::Approx(a.samples[i]).epsilon(1e-12));

    PcmBuffer c = synth_tone(2000.0, 0.025, 1.0);
    PcmBuffer p = mix({a, c});
    CHECK(p.size() == a.size()); // padded to the longest input
    // Past c's end the mix is just a/2.
    for (std::size_t i = c.size(); i < p.size(); ++i)
        CHECK(p.samples[i] == doctest::Approx(a.samples[i] / 2.0).epsilon(1e-12));

    // Eight full-scale tones mixed still bounded by 1.
    std::vector<PcmBuffer> many;
    for (int k = 0; k < 8; ++k)
        many.push_back(synth_tone(500.0 + 333.0 * k, 0.05, 1.0));
    PcmBuffer big = mix(many);
    for (double s : big.samples)
        CHECK(std::abs(s) <= 1.0 + 1e-12);

    CHECK_THROWS_AS(mix({}), std::invalid_argument);
    PcmBuffer other = a;
    other.sample_rate = 8000;
    CHECK_THROWS_AS(mix({a, other}), std::invalid_argument);
}

TEST_CASE("concat joins buffers back to back") {
    PcmBuffer a = synth_tone(1000.0, 0.010, 0.5);
    PcmBuffer b = synth_tone(2000.0, 0.020, 0.5);
    PcmBuffer c = concat({a, b});
    REQUIRE(c.size() == a.size() + b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(c.samples[i] == a.samples[i]);
    for (std::size_t i = 0; i < b.size(); ++i)
        CHECK(c.samples[a.size() + i] == b.samples[i]);

    PcmBuffer other = b;
    other.sample_rate = 22050;
    CHECK_THROWS_AS(concat({a, other}), std::invalid_argument);
}

TEST_CASE("goertzel window validation") {
    PcmBuffer buf = synth_tone(1000.0, 0.1, 0.5);
    CHECK_THROWS_AS(goertzel_power(buf, 1000.0, WindowSpec{0, buf.size() + 1}),
                    std::invalid_argument);
    CHECK_THROWS_AS(goertzel_power(buf, 1000.0, WindowSpec{buf.size(), 16}),
                    std::invalid_argument);
    CHECK_THROWS_AS(goertzel_power(buf, 0.0, whole_window(buf)), std::invalid_argument);
    CHECK_THROWS_AS(goertzel_power(buf, 23000.0, whole_window(buf)),
                    std::invalid_argument);
}
