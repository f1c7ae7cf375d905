#include "dv/cricket.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "dv/errors.hpp"

namespace dv {

namespace {

// Envelope hop for triad onset detection.
constexpr double kOnsetHopS = 0.005;
// A period whose mean beep energy falls below this fraction of the weakest
// level's expected energy counts as silent.
constexpr double kSilenceRatio = 0.01;

void check_config(const CricketConfig& cfg) {
    if (cfg.sample_rate <= 0)
        throw std::invalid_argument("cricket: non-positive sample rate");
    if (!(cfg.carrier_hz > 0.0) || !(cfg.carrier_hz < cfg.sample_rate / 2.0))
        throw std::invalid_argument("cricket: carrier outside (0, Nyquist)");
    if (!(cfg.beep_s > 0.0) || !(cfg.gap_s > 0.0) || !(cfg.period_s > 0.0) || !(cfg.slot_s > 0.0))
        throw std::invalid_argument("cricket: durations must be positive");
    if (cfg.num_slots < 1)
        throw std::invalid_argument("cricket: need at least one phase slot");
    const double triad = 3.0 * cfg.beep_s + 2.0 * cfg.gap_s;
    if ((cfg.num_slots - 1) * cfg.slot_s + triad > cfg.period_s + 1e-9)
        throw std::invalid_argument("cricket: last slot's triad overruns the period");
    double prev = 1.1;
    for (double a : cfg.amp_levels) {
        if (!(a > 0.0) || a > 1.0)
            throw std::invalid_argument("cricket: amplitude level outside (0, 1]");
        if (a >= prev)
            throw std::invalid_argument("cricket: amplitude levels must descend");
        prev = a;
    }
}

struct DecodeRefs {
    double beep_energy_unit = 0.0; // clean full-amplitude beep, whole-beep window
    double gain_sq = 1.0;          // channel energy gain inferred from cal
};

DecodeRefs make_refs(const CricketConfig& cfg, const Calibration& cal) {
    // The calibration's on level relates to a clean reference preamble at
    // the same window length; their ratio is the channel's energy gain at
    // the carrier.
    auto it = std::find_if(cal.tones.begin(), cal.tones.end(), [&](double t) {
        return std::abs(t - cfg.carrier_hz) < 1e-6;
    });
    if (it == cal.tones.end() || cal.window_samples <= 0)
        throw std::invalid_argument("cricket_decode: calibration missing the carrier");
    const std::size_t idx = static_cast<std::size_t>(it - cal.tones.begin());

    const double cal_s = static_cast<double>(cal.window_samples) / cfg.sample_rate;
    const Calibration ref =
        reference_calibration({cfg.carrier_hz}, cal_s, cfg.sample_rate, 1.0);

    DecodeRefs r;
    r.gain_sq = cal.on_energy[idx] / ref.on_energy[0];
    PcmBuffer beep = synth_tone_samples(cfg.carrier_hz, cfg.beep_samples(), 1.0, cfg.sample_rate);
    r.beep_energy_unit = goertzel_power(beep, cfg.carrier_hz, whole_window(beep));
    return r;
}

} // namespace

std::size_t CricketConfig::period_samples() const {
    return static_cast<std::size_t>(std::lround(period_s * sample_rate));
}
std::size_t CricketConfig::beep_samples() const {
    return static_cast<std::size_t>(std::lround(beep_s * sample_rate));
}
std::size_t CricketConfig::gap_samples() const {
    return static_cast<std::size_t>(std::lround(gap_s * sample_rate));
}
std::size_t CricketConfig::slot_samples() const {
    return static_cast<std::size_t>(std::lround(slot_s * sample_rate));
}

PcmBuffer cricket_symbol_waveform(const CricketConfig& cfg, int value) {
    check_config(cfg);
    if (value < 0 || value >= cfg.num_slots * static_cast<int>(cfg.amp_levels.size()))
        throw std::invalid_argument("cricket: symbol value outside [0, 32)");
    const int slot = value / static_cast<int>(cfg.amp_levels.size());
    const int level = value % static_cast<int>(cfg.amp_levels.size());

    PcmBuffer out;
    out.sample_rate = cfg.sample_rate;
    out.samples.assign(cfg.period_samples(), 0.0);
    const std::size_t beep_n = cfg.beep_samples();
    const std::size_t stride = beep_n + cfg.gap_samples();
    const std::size_t onset = static_cast<std::size_t>(slot) * cfg.slot_samples();
    PcmBuffer beep = synth_tone_samples(cfg.carrier_hz, beep_n,
                                        cfg.amp_levels[static_cast<std::size_t>(level)],
                                        cfg.sample_rate);
    for (int j = 0; j < 3; ++j) {
        double* dst = out.samples.data() + onset + static_cast<std::size_t>(j) * stride;
        for (std::size_t i = 0; i < beep_n; ++i)
            dst[i] += beep.samples[i];
    }
    return out;
}

PcmBuffer cricket_encode(const CricketConfig& cfg, const BitString& bits) {
    check_config(cfg);
    for (auto b : bits)
        if (b > 1)
            throw std::invalid_argument("cricket_encode: bit values must be 0 or 1");

    PcmBuffer out;
    out.sample_rate = cfg.sample_rate;
    const std::size_t n_symbols = (bits.size() + 4) / 5;
    out.samples.reserve(n_symbols * cfg.period_samples());
    for (std::size_t s = 0; s < n_symbols; ++s) {
        int value = 0;
        for (std::size_t j = 0; j < 5; ++j) {
            const std::size_t idx = s * 5 + j;
            const int bit = idx < bits.size() ? bits[idx] : 0;
            value = (value << 1) | bit;
        }
        PcmBuffer sym = cricket_symbol_waveform(cfg, value);
        out.samples.insert(out.samples.end(), sym.samples.begin(), sym.samples.end());
    }
    return out;
}

namespace {

int decode_symbol_with_refs(const CricketConfig& cfg, const PcmBuffer& buf,
                            std::size_t start, const DecodeRefs& refs,
                            std::size_t period_index) {
    const std::size_t period = cfg.period_samples();
    if (start + period > buf.size())
        throw std::invalid_argument("cricket_decode_symbol: period exceeds buffer");

    const std::size_t win = cfg.beep_samples();
    const std::size_t hop =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(kOnsetHopS * cfg.sample_rate)));
    const double amp_min = cfg.amp_levels.back();
    const double floor_e =
        refs.gain_sq * refs.beep_energy_unit * amp_min * amp_min * kSilenceRatio;

    // Carrier-energy envelope across the period.
    std::vector<double> env;
    for (std::size_t t = 0; t + win <= period; t += hop)
        env.push_back(goertzel_power(buf, cfg.carrier_hz, WindowSpec{start + t, win}));
    double peak = 0.0;
    for (double e : env)
        peak = std::max(peak, e);
    if (peak < floor_e)
        throw DecodeError("cricket_decode: no triad detected in period " +
                          std::to_string(period_index));

    // First window reaching half the peak marks the onset; the envelope
    // rises over roughly one window length, so half a hop recenters it.
    std::size_t first = 0;
    while (env[first] < 0.5 * peak)
        ++first;
    const double t_first = static_cast<double>(first * hop) + static_cast<double>(hop) / 2.0;
    int slot = static_cast<int>(std::lround(t_first / static_cast<double>(cfg.slot_samples())));
    slot = std::clamp(slot, 0, cfg.num_slots - 1);

    // Mean beep energy at the slot's nominal beep windows.
    const std::size_t onset = static_cast<std::size_t>(slot) * cfg.slot_samples();
    const std::size_t stride = win + cfg.gap_samples();
    double mean = 0.0;
    for (int j = 0; j < 3; ++j)
        mean += goertzel_power(buf, cfg.carrier_hz,
                               WindowSpec{start + onset + static_cast<std::size_t>(j) * stride, win});
    mean /= 3.0;
    if (mean < floor_e)
        throw DecodeError("cricket_decode: no triad detected in period " +
                          std::to_string(period_index));

    // Nearest calibrated level in log-energy.
    int level = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < cfg.amp_levels.size(); ++l) {
        const double expected = refs.gain_sq * refs.beep_energy_unit *
                                cfg.amp_levels[l] * cfg.amp_levels[l];
        const double d = std::abs(std::log(mean) - std::log(expected));
        if (d < best) {
            best = d;
            level = static_cast<int>(l);
        }
    }
    return slot * static_cast<int>(cfg.amp_levels.size()) + level;
}

} // namespace

int cricket_decode_symbol(const CricketConfig& cfg, const PcmBuffer& buf,
                          std::size_t start, const Calibration& cal,
                          std::size_t period_index) {
    check_config(cfg);
    return decode_symbol_with_refs(cfg, buf, start, make_refs(cfg, cal), period_index);
}

BitString cricket_decode(const CricketConfig& cfg, const PcmBuffer& buf,
                         const Calibration& cal) {
    check_config(cfg);
    if (buf.sample_rate != cfg.sample_rate)
        throw std::invalid_argument("cricket_decode: sample rate mismatch");
    const std::size_t period = cfg.period_samples();
    if (buf.size() == 0 || buf.size() % period != 0)
        throw std::invalid_argument("cricket_decode: buffer is not a whole number of periods");

    const DecodeRefs refs = make_refs(cfg, cal);
    BitString bits;
    bits.reserve(buf.size() / period * 5);
    for (std::size_t s = 0, k = 0; s < buf.size(); s += period, ++k) {
        const int value = decode_symbol_with_refs(cfg, buf, s, refs, k);
        for (int j = 4; j >= 0; --j)
            bits.push_back(static_cast<std::uint8_t>((value >> j) & 1));
    }
    return bits;
}

} // namespace dv
