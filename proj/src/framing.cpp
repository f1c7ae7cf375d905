#include "dv/framing.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <tuple>

#include "dv/errors.hpp"

namespace dv {

namespace {

// On/off pattern of the 8 preamble intervals: 2 on, 1 off, then 1,0,1,1,0.
constexpr std::array<int, 8> kPattern = {1, 1, 0, 1, 0, 1, 1, 0};

// Measured noise floors are clamped to this fraction of the on energy.
// Keeps the geometric-mean ASK threshold at >= 10% of the on level, which
// clears worst-case spectral leakage between bank tones (<2% of on energy)
// while staying far below a real on-tone.
constexpr double kNoiseFloorClamp = 1e-2;

std::array<std::uint16_t, 256> make_crc_table() {
    std::array<std::uint16_t, 256> t{};
    for (int i = 0; i < 256; ++i) {
        std::uint16_t c = static_cast<std::uint16_t>(i << 8);
        for (int b = 0; b < 8; ++b)
            c = static_cast<std::uint16_t>((c & 0x8000u) ? (c << 1) ^ 0x1021u : (c << 1));
        t[static_cast<std::size_t>(i)] = c;
    }
    return t;
}

void check_bank(const std::vector<double>& bank, int sample_rate, double amp) {
    if (bank.empty())
        throw std::invalid_argument("preamble: empty tone bank");
    if (sample_rate <= 0)
        throw std::invalid_argument("preamble: non-positive sample rate");
    double prev = 0.0;
    for (double f : bank) {
        if (!(f > 0.0) || !(f < sample_rate / 2.0))
            throw std::invalid_argument("preamble: bank tone outside (0, Nyquist)");
        if (f <= prev)
            throw std::invalid_argument("preamble: bank tones must be strictly increasing");
        prev = f;
    }
    if (!(amp > 0.0) || amp > 1.0)
        throw std::invalid_argument("preamble: per-tone amplitude outside (0, 1]");
}

// Sum of the whole bank at per-tone amplitude, one continuous burst. Tones
// get quadratic (Schroeder) phase offsets: with a common phase a dense bank
// collapses into a sparse impulse train whose only spike inside the burst
// is killed by the onset ramp, while staggered phases spread the energy
// evenly and keep the crest low. Goertzel power is phase-blind, so the
// detector and calibration are unaffected. The peak is checked after
// synthesis because the crest depends on the bank, not just the amplitude
// sum.
PcmBuffer all_on_burst(const std::vector<double>& bank, std::size_t num_samples,
                       int sample_rate, double amp) {
    PcmBuffer out;
    out.sample_rate = sample_rate;
    out.samples.assign(num_samples, 0.0);
    const std::vector<double> env = tone_envelope(num_samples, sample_rate);
    const double m = static_cast<double>(bank.size());
    for (std::size_t k = 0; k < bank.size(); ++k) {
        const double w = 2.0 * std::numbers::pi * bank[k] / static_cast<double>(sample_rate);
        const double phase = -std::numbers::pi * static_cast<double>(k) * static_cast<double>(k + 1) / m;
        for (std::size_t i = 0; i < num_samples; ++i)
            out.samples[i] += amp * env[i] * std::sin(w * static_cast<double>(i) + phase);
    }
    double peak = 0.0;
    for (double s : out.samples)
        peak = std::max(peak, std::abs(s));
    if (peak > 1.0 + 1e-9)
        throw std::invalid_argument("preamble: bank amplitude overflows [-1, 1] (peak " +
                                    std::to_string(peak) + ")");
    return out;
}

double aggregate_bank_energy(const PcmBuffer& buf, const std::vector<double>& bank,
                             WindowSpec w) {
    double e = 0.0;
    for (double f : bank)
        e += goertzel_power(buf, f, w);
    return e;
}

Calibration extract_calibration(const PcmBuffer& buf, std::size_t start,
                                const std::vector<double>& bank, std::size_t tn) {
    const std::size_t q = tn / 4;
    Calibration cal;
    cal.tones = bank;
    cal.window_samples = static_cast<int>(tn);

    // On window sits a quarter interval into the 2T all-on burst, clear of
    // the onset ramp. Noise window sits centered in the T silence interval;
    // it is half as long, so the measurement is scaled up to a T window
    // (noise energy grows about linearly with window length).
    const WindowSpec on_w{start + q, tn};
    const WindowSpec noise_w{start + 2 * tn + q, 2 * q};
    if (noise_w.start + noise_w.length > buf.size())
        throw SyncError("preamble: calibration windows exceed buffer");

    for (double f : bank) {
        const double on = goertzel_power(buf, f, on_w);
        const double noise = goertzel_power(buf, f, noise_w) * (static_cast<double>(tn) / (2.0 * q));
        if (!(on > 0.0))
            throw SyncError("preamble: calibration found no energy at " + std::to_string(f) + " Hz");
        const double floor = std::max(noise, on * kNoiseFloorClamp);
        if (!(on > floor))
            throw SyncError("preamble: calibration noise floor exceeds on level at " +
                            std::to_string(f) + " Hz");
        cal.on_energy.push_back(on);
        cal.noise_floor.push_back(floor);
    }
    return cal;
}

// Crossing time of the 50%-of-plateau edge at the start of an all-on burst,
// measured with short hopped windows. Used for sub-hop refinement of the
// preamble start; the constant estimator bias is removed by running the
// same scan on a clean synthesized onset (cached per bank geometry).
struct EdgeScanParams {
    std::size_t win = 0;
    std::size_t hop = 0;
};

EdgeScanParams edge_params(int sample_rate, std::size_t tn) {
    EdgeScanParams p;
    p.win = std::max<std::size_t>(32, static_cast<std::size_t>(std::lround(0.002 * sample_rate)));
    p.win = std::min(p.win, tn / 2);
    p.hop = std::max<std::size_t>(4, p.win / 4);
    return p;
}

// Returns the start sample of the first window whose aggregate energy
// reaches half the plateau, or SIZE_MAX if the edge never crosses. The
// coarse sweep hops, then walks back sample by sample, so the result does
// not depend on how the hop grid happens to line up with the edge.
std::size_t scan_edge(const PcmBuffer& buf, const std::vector<double>& bank,
                      std::size_t from, std::size_t to, double half_plateau,
                      EdgeScanParams p) {
    for (std::size_t t = from; t + p.win <= to; t += p.hop) {
        if (aggregate_bank_energy(buf, bank, WindowSpec{t, p.win}) >= half_plateau) {
            std::size_t limit = t > from + 2 * p.hop ? t - 2 * p.hop : from;
            while (t > limit &&
                   aggregate_bank_energy(buf, bank, WindowSpec{t - 1, p.win}) >=
                       half_plateau)
                --t;
            return t;
        }
    }
    return static_cast<std::size_t>(-1);
}

double onset_bias(const std::vector<double>& bank, int sample_rate, std::size_t tn,
                  double amp) {
    using Key = std::tuple<int, std::size_t, std::size_t, double, double, double>;
    static std::map<Key, double> cache;
    static std::mutex mtx;
    const Key key{sample_rate, tn, bank.size(), bank.front(), bank.back(), amp};
    {
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find(key);
        if (it != cache.end())
            return it->second;
    }

    // Clean reference: silence for T, then the all-on burst.
    PcmBuffer ref;
    ref.sample_rate = sample_rate;
    ref.samples.assign(tn, 0.0);
    PcmBuffer burst = all_on_burst(bank, 2 * tn, sample_rate, amp);
    ref.samples.insert(ref.samples.end(), burst.samples.begin(), burst.samples.end());

    // Estimate the plateau exactly the way the detector does (quarter-symbol
    // windows just inside the burst, rescaled to the scan window length) so
    // the crossing threshold, and therefore the bias, matches.
    const EdgeScanParams p = edge_params(sample_rate, tn);
    const std::size_t q = tn / 4;
    const double plateau =
        (aggregate_bank_energy(ref, bank, WindowSpec{tn + q, q}) +
         aggregate_bank_energy(ref, bank, WindowSpec{tn + 2 * q, q})) /
        2.0;
    const double half_plateau =
        0.5 * plateau * (static_cast<double>(p.win) / q) * (static_cast<double>(p.win) / q);
    const std::size_t cross = scan_edge(ref, bank, 0, ref.size(), half_plateau, p);
    const double bias =
        cross == static_cast<std::size_t>(-1) ? 0.0 : static_cast<double>(cross) - static_cast<double>(tn);

    std::lock_guard<std::mutex> lock(mtx);
    cache.emplace(key, bias);
    return bias;
}

} // namespace

std::uint16_t crc16_ccitt_false(const Bytes& data) {
    static const std::array<std::uint16_t, 256> table = make_crc_table();
    std::uint16_t crc = 0xFFFFu;
    for (auto b : data)
        crc = static_cast<std::uint16_t>((crc << 8) ^ table[((crc >> 8) ^ b) & 0xFFu]);
    return crc;
}

Bytes build_frame(const Bytes& payload) {
    if (payload.size() > 0xFFFF)
        throw std::invalid_argument("build_frame: payload exceeds 65535 bytes");
    Bytes frame;
    frame.reserve(payload.size() + 4);
    frame.push_back(static_cast<std::uint8_t>(payload.size() >> 8));
    frame.push_back(static_cast<std::uint8_t>(payload.size() & 0xFF));
    frame.insert(frame.end(), payload.begin(), payload.end());
    const std::uint16_t crc = crc16_ccitt_false(frame);
    frame.push_back(static_cast<std::uint8_t>(crc >> 8));
    frame.push_back(static_cast<std::uint8_t>(crc & 0xFF));
    return frame;
}

Bytes parse_frame(const Bytes& frame) {
    if (frame.size() < 4)
        throw FrameError("parse_frame: truncated frame (" + std::to_string(frame.size()) +
                         " bytes, need at least 4)");
    const std::size_t len = (static_cast<std::size_t>(frame[0]) << 8) | frame[1];
    if (frame.size() < len + 4)
        throw FrameError("parse_frame: truncated frame (length field says " +
                         std::to_string(len) + " payload bytes)");
    if (frame.size() > len + 4)
        throw FrameError("parse_frame: frame longer than length field implies");
    Bytes body(frame.begin(), frame.begin() + static_cast<std::ptrdiff_t>(len + 2));
    const std::uint16_t want =
        static_cast<std::uint16_t>((frame[len + 2] << 8) | frame[len + 3]);
    if (crc16_ccitt_false(body) != want)
        throw CrcError("parse_frame: CRC mismatch");
    return Bytes(frame.begin() + 2, frame.begin() + static_cast<std::ptrdiff_t>(len + 2));
}

PcmBuffer emit_preamble(const std::vector<double>& bank, double symbol_s,
                        int sample_rate, double per_tone_amplitude) {
    check_bank(bank, sample_rate, per_tone_amplitude);
    if (!(symbol_s > 0.0))
        throw std::invalid_argument("preamble: non-positive symbol duration");
    const auto tn = static_cast<std::size_t>(std::lround(symbol_s * sample_rate));
    if (tn < 8)
        throw std::invalid_argument("preamble: symbol duration too short");

    PcmBuffer out;
    out.sample_rate = sample_rate;
    out.samples.reserve(8 * tn);
    // Consecutive on intervals are synthesized as one continuous burst so
    // ramps only appear at genuine on/off transitions.
    std::size_t k = 0;
    while (k < kPattern.size()) {
        std::size_t run = 1;
        while (k + run < kPattern.size() && kPattern[k + run] == kPattern[k])
            ++run;
        if (kPattern[k]) {
            PcmBuffer burst = all_on_burst(bank, run * tn, sample_rate, per_tone_amplitude);
            out.samples.insert(out.samples.end(), burst.samples.begin(), burst.samples.end());
        } else {
            out.samples.insert(out.samples.end(), run * tn, 0.0);
        }
        k += run;
    }
    return out;
}

SyncResult detect_preamble(const PcmBuffer& buf, const std::vector<double>& bank,
                           double symbol_s, double per_tone_amplitude) {
    check_bank(bank, buf.sample_rate, per_tone_amplitude);
    if (!(symbol_s > 0.0))
        throw std::invalid_argument("detect_preamble: non-positive symbol duration");
    const auto tn = static_cast<std::size_t>(std::lround(symbol_s * buf.sample_rate));
    if (tn < 8)
        throw std::invalid_argument("detect_preamble: symbol duration too short");
    const std::size_t q = tn / 4;

    // Per-quarter aggregate bank energy over the whole search region. The
    // coarse correlator and the contrast gate both read from this grid.
    const std::size_t search_samples =
        std::min(buf.size(), static_cast<std::size_t>(10.0 * buf.sample_rate) + 8 * tn);
    const std::size_t nq = search_samples / q;
    if (nq < 32)
        throw SyncError("detect_preamble: buffer shorter than one preamble");
    std::vector<double> agg(nq);
    for (std::size_t i = 0; i < nq; ++i)
        agg[i] = aggregate_bank_energy(buf, bank, WindowSpec{i * q, q});

    // Template statistics for Pearson correlation.
    constexpr double s_mean = 5.0 / 8.0;
    double s_var = 0.0;
    for (int s : kPattern)
        s_var += (s - s_mean) * (s - s_mean);

    // Quarter indices (relative to a candidate) that sit strictly inside on
    // and off runs; boundary quarters are excluded so a sub-quarter
    // misalignment cannot fail the gate.
    static const std::vector<std::size_t> on_interior = {1, 2, 3, 4, 5, 6,
                                                         13, 14,
                                                         21, 22, 23, 24, 25, 26};
    static const std::vector<std::size_t> off_interior = {9, 10, 17, 18, 29, 30};

    const std::size_t limit =
        std::min(nq - 32, static_cast<std::size_t>(10.0 * buf.sample_rate) / q);
    for (std::size_t c = 0; c <= limit; ++c) {
        double w[8];
        double w_mean = 0.0;
        for (std::size_t k = 0; k < 8; ++k) {
            w[k] = agg[c + 4 * k] + agg[c + 4 * k + 1] + agg[c + 4 * k + 2] + agg[c + 4 * k + 3];
            w_mean += w[k];
        }
        w_mean /= 8.0;
        double w_var = 0.0, cov = 0.0;
        for (std::size_t k = 0; k < 8; ++k) {
            w_var += (w[k] - w_mean) * (w[k] - w_mean);
            cov += (w[k] - w_mean) * (kPattern[k] - s_mean);
        }
        if (!(w_var > 0.0))
            continue;
        const double r = cov / std::sqrt(w_var * s_var);
        if (r < 0.9)
            continue;

        // Contrast gate: every interior on quarter must clearly beat every
        // interior off quarter. Pure noise passes the scale-free
        // correlation test a few times per buffer; it does not pass this.
        double on_min = agg[c + on_interior[0]];
        for (std::size_t idx : on_interior)
            on_min = std::min(on_min, agg[c + idx]);
        double off_max = agg[c + off_interior[0]];
        for (std::size_t idx : off_interior)
            off_max = std::max(off_max, agg[c + idx]);
        if (!(on_min > 1.3 * off_max))
            continue;

        // Refine the start against the onset edge of the all-on burst.
        const std::size_t coarse = c * q;
        std::size_t start = coarse;
        const EdgeScanParams p = edge_params(buf.sample_rate, tn);
        const double plateau = (agg[c + 1] + agg[c + 2]) / 2.0;
        const double half_plateau =
            0.5 * plateau * (static_cast<double>(p.win) / q) * (static_cast<double>(p.win) / q);
        const std::size_t from = coarse > tn ? coarse - tn : 0;
        const std::size_t to = std::min(buf.size(), coarse + tn + p.win);
        const std::size_t cross = scan_edge(buf, bank, from, to, half_plateau, p);
        if (cross != static_cast<std::size_t>(-1)) {
            const double bias = onset_bias(bank, buf.sample_rate, tn, per_tone_amplitude);
            const double est = static_cast<double>(cross) - bias;
            if (est >= 0.0 && std::abs(est - static_cast<double>(coarse)) <= static_cast<double>(tn))
                start = static_cast<std::size_t>(std::llround(est));
        }
        if (start + 8 * tn > buf.size())
            start = coarse;

        SyncResult res;
        res.payload_offset = start + 8 * tn;
        res.cal = extract_calibration(buf, start, bank, tn);
        return res;
    }
    throw SyncError("detect_preamble: no preamble found in the first 10 seconds");
}

Calibration reference_calibration(const std::vector<double>& bank, double symbol_s,
                                  int sample_rate, double per_tone_amplitude) {
    PcmBuffer pre = emit_preamble(bank, symbol_s, sample_rate, per_tone_amplitude);
    const auto tn = static_cast<std::size_t>(std::lround(symbol_s * sample_rate));
    return extract_calibration(pre, 0, bank, tn);
}

} // namespace dv
