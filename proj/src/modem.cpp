#include "dv/modem.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "dv/errors.hpp"

namespace dv {

namespace {

std::vector<double> arithmetic_bank(double start_hz, double step_hz, std::size_t count) {
    std::vector<double> bank(count);
    for (std::size_t i = 0; i < count; ++i)
        bank[i] = start_hz + step_hz * static_cast<double>(i);
    return bank;
}

void check_tones(const std::vector<double>& tones, int sample_rate, const char* what) {
    if (tones.empty())
        throw std::invalid_argument(std::string(what) + ": empty tone bank");
    double prev = 0.0;
    for (double f : tones) {
        if (!(f > 0.0) || !(f < sample_rate / 2.0))
            throw std::invalid_argument(std::string(what) + ": tone outside (0, Nyquist)");
        if (f <= prev)
            throw std::invalid_argument(std::string(what) + ": tones must be strictly increasing");
        prev = f;
    }
}

void check_ask(const AskConfig& cfg) {
    if (cfg.sample_rate <= 0 || !(cfg.symbol_s > 0.0))
        throw std::invalid_argument("ask: bad sample rate or symbol duration");
    check_tones(cfg.tones, cfg.sample_rate, "ask");
}

void check_fsk(const FskConfig& cfg) {
    if (cfg.sample_rate <= 0 || !(cfg.symbol_s > 0.0))
        throw std::invalid_argument("fsk: bad sample rate or symbol duration");
    check_tones(cfg.tones, cfg.sample_rate, "fsk");
    if (!std::has_single_bit(cfg.tones.size()))
        throw std::invalid_argument("fsk: tone count must be a power of two");
    if (!(cfg.amplitude > 0.0) || cfg.amplitude > 1.0)
        throw std::invalid_argument("fsk: amplitude outside (0, 1]");
}

bool bank_sub_resolution(const std::vector<double>& tones, double symbol_s) {
    for (std::size_t i = 1; i < tones.size(); ++i)
        if (tones[i] - tones[i - 1] < 1.0 / symbol_s - 1e-9)
            return true;
    return false;
}

} // namespace

std::size_t AskConfig::symbol_samples() const {
    return static_cast<std::size_t>(std::lround(symbol_s * sample_rate));
}

bool AskConfig::sub_resolution() const { return bank_sub_resolution(tones, symbol_s); }

std::size_t FskConfig::bits_per_symbol() const {
    return static_cast<std::size_t>(std::bit_width(tones.size()) - 1);
}

std::size_t FskConfig::symbol_samples() const {
    return static_cast<std::size_t>(std::lround(symbol_s * sample_rate));
}

bool FskConfig::sub_resolution() const { return bank_sub_resolution(tones, symbol_s); }

ModemConfig modem_preset(const std::string& name) {
    if (name == "ask8_fast")
        return AskConfig{name, arithmetic_bank(1000.0, 250.0, 8), 0.020, 44100};
    if (name == "ask8_slow")
        return AskConfig{name, arithmetic_bank(1000.0, 250.0, 8), 0.100, 44100};
    if (name == "ask128")
        return AskConfig{name, arithmetic_bank(700.0, 70.0, 128), 0.100, 44100};
    if (name == "fsk256")
        return FskConfig{name, arithmetic_bank(1000.0, 20.0, 256), 0.020, 44100, 1.0};
    throw std::invalid_argument("unknown modem preset: " + name);
}

std::vector<std::string> modem_preset_names() {
    return {"ask8_fast", "ask8_slow", "ask128", "fsk256"};
}

double data_rate_bps(const ModemConfig& cfg) {
    return std::visit([](const auto& c) { return c.data_rate_bps(); }, cfg);
}

PcmBuffer ask_modulate(const AskConfig& cfg, const BitString& bits) {
    check_ask(cfg);
    for (auto b : bits)
        if (b > 1)
            throw std::invalid_argument("ask_modulate: bit values must be 0 or 1");

    const std::size_t m = cfg.tones.size();
    const std::size_t n_symbols = (bits.size() + m - 1) / m;
    const std::size_t sym_n = cfg.symbol_samples();
    const double amp = cfg.tone_amplitude();

    PcmBuffer out;
    out.sample_rate = cfg.sample_rate;
    out.samples.assign(n_symbols * sym_n, 0.0);
    for (std::size_t s = 0; s < n_symbols; ++s) {
        for (std::size_t t = 0; t < m; ++t) {
            const std::size_t bit_idx = s * m + t;
            if (bit_idx >= bits.size() || bits[bit_idx] == 0)
                continue;
            PcmBuffer tone = synth_tone_samples(cfg.tones[t], sym_n, amp, cfg.sample_rate);
            double* dst = out.samples.data() + s * sym_n;
            for (std::size_t i = 0; i < sym_n; ++i)
                dst[i] += tone.samples[i];
        }
    }
    return out;
}

BitString ask_demod_symbol(const AskConfig& cfg, const PcmBuffer& buf,
                           std::size_t start, const Calibration& cal) {
    const std::size_t sym_n = cfg.symbol_samples();
    if (start + sym_n > buf.size())
        throw std::invalid_argument("ask_demod_symbol: window exceeds buffer");
    if (cal.tones.size() != cal.on_energy.size() || cal.tones.size() != cal.noise_floor.size())
        throw std::invalid_argument("ask_demod_symbol: malformed calibration");

    BitString bits;
    bits.reserve(cfg.tones.size());
    for (double f : cfg.tones) {
        auto it = std::find_if(cal.tones.begin(), cal.tones.end(),
                               [f](double t) { return std::abs(t - f) < 1e-6; });
        if (it == cal.tones.end())
            throw std::invalid_argument("ask_demod_symbol: calibration missing bank tone");
        const std::size_t idx = static_cast<std::size_t>(it - cal.tones.begin());
        const double threshold = std::sqrt(cal.on_energy[idx] * cal.noise_floor[idx]);
        const double e = goertzel_power(buf, f, WindowSpec{start, sym_n});
        bits.push_back(e > threshold ? 1 : 0);
    }
    return bits;
}

BitString ask_demodulate(const AskConfig& cfg, const PcmBuffer& buf,
                         const Calibration& cal) {
    check_ask(cfg);
    if (buf.sample_rate != cfg.sample_rate)
        throw std::invalid_argument("ask_demodulate: sample rate mismatch");
    const std::size_t sym_n = cfg.symbol_samples();
    if (buf.size() == 0 || buf.size() % sym_n != 0)
        throw std::invalid_argument("ask_demodulate: buffer is not a whole number of symbols");

    BitString bits;
    bits.reserve(buf.size() / sym_n * cfg.tones.size());
    for (std::size_t start = 0; start < buf.size(); start += sym_n) {
        BitString sym = ask_demod_symbol(cfg, buf, start, cal);
        bits.insert(bits.end(), sym.begin(), sym.end());
    }
    return bits;
}

PcmBuffer fsk_modulate(const FskConfig& cfg, const Bytes& data) {
    check_fsk(cfg);
    const std::size_t m = cfg.tones.size();
    if (m != 256)
        throw std::invalid_argument("fsk_modulate: byte symbols need a 256-tone bank");
    const std::size_t sym_n = cfg.symbol_samples();

    PcmBuffer out;
    out.sample_rate = cfg.sample_rate;
    out.samples.reserve(data.size() * sym_n);
    for (auto v : data) {
        PcmBuffer tone = synth_tone_samples(cfg.tones[v], sym_n, cfg.amplitude, cfg.sample_rate);
        out.samples.insert(out.samples.end(), tone.samples.begin(), tone.samples.end());
    }
    return out;
}

std::uint8_t fsk_demod_symbol(const FskConfig& cfg, const PcmBuffer& buf,
                              std::size_t start) {
    const std::size_t sym_n = cfg.symbol_samples();
    if (start + sym_n > buf.size())
        throw std::invalid_argument("fsk_demod_symbol: window exceeds buffer");
    std::size_t best = 0;
    double best_e = -1.0;
    for (std::size_t t = 0; t < cfg.tones.size(); ++t) {
        const double e = goertzel_power(buf, cfg.tones[t], WindowSpec{start, sym_n});
        if (e > best_e) {
            best_e = e;
            best = t;
        }
    }
    return static_cast<std::uint8_t>(best);
}

Bytes fsk_demodulate(const FskConfig& cfg, const PcmBuffer& buf) {
    check_fsk(cfg);
    if (buf.sample_rate != cfg.sample_rate)
        throw std::invalid_argument("fsk_demodulate: sample rate mismatch");
    const std::size_t sym_n = cfg.symbol_samples();
    if (buf.size() == 0 || buf.size() % sym_n != 0)
        throw std::invalid_argument("fsk_demodulate: buffer is not a whole number of symbols");

    Bytes out;
    out.reserve(buf.size() / sym_n);
    for (std::size_t start = 0; start < buf.size(); start += sym_n)
        out.push_back(fsk_demod_symbol(cfg, buf, start));
    return out;
}

} // namespace dv
