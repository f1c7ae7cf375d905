#include "dv/r2d2.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "dv/errors.hpp"

namespace dv {

namespace {

// Class decision window. Shorter than every symbol, so it never straddles
// the next one.
constexpr double kClassWindowS = 0.080;
// Minimum centroid movement between window halves to call a chirp, and
// between quarter windows to accept a chirp leg while decoding.
constexpr double kChirpMoveHz = 40.0;
constexpr double kChirpLegHz = 20.0;
// Class evidence below this fraction of the clean reference is silence.
constexpr double kClassFloor = 1e-4;
// A grunt line counts as lit when it reaches this fraction of the loudest.
constexpr double kGruntOnRatio = 0.25;

constexpr double kChirpProbeStepHz = 25.0;

enum class SymbolClass { Beep, Chirp, Grunt };

struct Symbol {
    SymbolClass cls;
    int index; // beep: 0..25, grunt: digit 0..9, chirp: shape 0..3
};

// Chirp shapes in symbol order: space, '.', ',', '?'.
constexpr std::array<char, 4> kChirpChars = {' ', '.', ',', '?'};

double amp_grunt() { return 0.25; }

std::size_t samples_for(double seconds, int sr) {
    return static_cast<std::size_t>(std::lround(seconds * sr));
}

bool lookup_symbol(char c, Symbol& out) {
    if (c >= 'a' && c <= 'z') {
        out = {SymbolClass::Beep, c - 'a'};
        return true;
    }
    if (c >= '0' && c <= '9') {
        out = {SymbolClass::Grunt, c - '0'};
        return true;
    }
    for (std::size_t i = 0; i < kChirpChars.size(); ++i) {
        if (c == kChirpChars[i]) {
            out = {SymbolClass::Chirp, static_cast<int>(i)};
            return true;
        }
    }
    return false;
}

// Linear sweep through the given instantaneous-frequency legs,
// phase-continuous, raised-cosine ramps at the symbol edges.
PcmBuffer synth_chirp(const std::vector<std::pair<double, double>>& legs,
                      std::size_t num_samples, double amplitude, int sr) {
    PcmBuffer out;
    out.sample_rate = sr;
    out.samples.resize(num_samples);
    const std::size_t ramp =
        std::min<std::size_t>(static_cast<std::size_t>(std::lround(kToneRampSeconds * sr)),
                              num_samples / 2);
    const std::size_t leg_len = num_samples / legs.size();
    double phase = 0.0;
    for (std::size_t n = 0; n < num_samples; ++n) {
        const std::size_t leg = std::min(n / leg_len, legs.size() - 1);
        const double t = static_cast<double>(n - leg * leg_len) / static_cast<double>(leg_len);
        const double f = legs[leg].first + t * (legs[leg].second - legs[leg].first);
        double env = 1.0;
        if (n < ramp)
            env = 0.5 * (1.0 - std::cos(std::numbers::pi * (n + 1.0) / (ramp + 1.0)));
        else if (num_samples - 1 - n < ramp)
            env = 0.5 * (1.0 - std::cos(std::numbers::pi * (num_samples - n) / (ramp + 1.0)));
        out.samples[n] = amplitude * env * std::sin(phase);
        phase += 2.0 * std::numbers::pi * f / sr;
    }
    return out;
}

PcmBuffer synth_symbol(const Symbol& sym, const R2d2Alphabet& a, int sr) {
    switch (sym.cls) {
    case SymbolClass::Beep:
        return synth_tone_samples(a.beep_freqs[static_cast<std::size_t>(sym.index)],
                                  samples_for(a.beep_s, sr), 1.0, sr);
    case SymbolClass::Grunt: {
        const auto& combo = a.grunt_combos[static_cast<std::size_t>(sym.index)];
        PcmBuffer out;
        out.sample_rate = sr;
        out.samples.assign(samples_for(a.grunt_s, sr), 0.0);
        for (int t : combo) {
            PcmBuffer tone = synth_tone_samples(a.grunt_bank[static_cast<std::size_t>(t)],
                                                out.size(), amp_grunt(), sr);
            for (std::size_t i = 0; i < out.size(); ++i)
                out.samples[i] += tone.samples[i];
        }
        return out;
    }
    case SymbolClass::Chirp: {
        const double lo = a.chirp_lo_hz, hi = a.chirp_hi_hz;
        std::vector<std::pair<double, double>> legs;
        switch (sym.index) {
        case 0: legs = {{lo, hi}}; break;           // space: up
        case 1: legs = {{hi, lo}}; break;           // '.': down
        case 2: legs = {{lo, hi}, {hi, lo}}; break; // ',': up-down
        default: legs = {{hi, lo}, {lo, hi}}; break; // '?': down-up
        }
        return synth_chirp(legs, samples_for(a.chirp_s, sr), 1.0, sr);
    }
    }
    throw std::logic_error("unreachable");
}

std::vector<double> chirp_probes(const R2d2Alphabet& a) {
    std::vector<double> probes;
    for (double f = a.chirp_lo_hz; f <= a.chirp_hi_hz + 1e-9; f += kChirpProbeStepHz)
        probes.push_back(f);
    return probes;
}

struct CombStats {
    double total = 0.0;
    double centroid = 0.0;
};

CombStats comb_stats(const PcmBuffer& buf, const std::vector<double>& probes,
                     WindowSpec w) {
    CombStats s;
    double weighted = 0.0;
    for (double f : probes) {
        const double e = goertzel_power(buf, f, w);
        s.total += e;
        weighted += e * f;
    }
    s.centroid = s.total > 0.0 ? weighted / s.total : 0.0;
    return s;
}

// Clean-synthesis energy references used to normalize class evidence, so a
// quiet grunt is not outvoted by the leakage floor of a loud beep.
struct ClassRefs {
    double beep = 0.0;       // one beep line over the class window
    double grunt = 0.0;      // weakest lit line of a 2-line grunt
    double chirp_half = 0.0; // comb total over a half class window
};

ClassRefs make_refs(const R2d2Alphabet& a, int sr) {
    ClassRefs r;
    const std::size_t w = samples_for(kClassWindowS, sr);
    const std::size_t half = w / 2;

    PcmBuffer beep = synth_symbol({SymbolClass::Beep, 0}, a, sr);
    r.beep = goertzel_power(beep, a.beep_freqs[0], WindowSpec{0, w});

    PcmBuffer grunt = synth_symbol({SymbolClass::Grunt, 0}, a, sr);
    const auto& combo = a.grunt_combos[0];
    r.grunt = goertzel_power(grunt, a.grunt_bank[static_cast<std::size_t>(combo[0])],
                             WindowSpec{0, w});
    for (int t : combo)
        r.grunt = std::min(r.grunt, goertzel_power(grunt, a.grunt_bank[static_cast<std::size_t>(t)],
                                                   WindowSpec{0, w}));

    PcmBuffer chirp = synth_symbol({SymbolClass::Chirp, 0}, a, sr);
    const auto probes = chirp_probes(a);
    const CombStats h1 = comb_stats(chirp, probes, WindowSpec{0, half});
    const CombStats h2 = comb_stats(chirp, probes, WindowSpec{half, half});
    r.chirp_half = std::min(h1.total, h2.total);
    return r;
}

std::string offset_msg(const char* what, std::size_t pos) {
    return std::string(what) + " at sample " + std::to_string(pos);
}

} // namespace

const R2d2Alphabet& R2d2Alphabet::standard() {
    static const R2d2Alphabet a = [] {
        R2d2Alphabet al;
        for (std::size_t i = 0; i < al.beep_freqs.size(); ++i)
            al.beep_freqs[i] = 1500.0 + 100.0 * static_cast<double>(i);
        al.grunt_bank = {500.0, 600.0, 700.0, 800.0};
        al.grunt_combos = {std::vector<int>{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3},
                           {0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
        return al;
    }();
    return a;
}

PcmBuffer r2d2_encode(const std::string& text, int sample_rate,
                      const R2d2Alphabet& alphabet) {
    if (sample_rate <= 0)
        throw std::invalid_argument("r2d2_encode: non-positive sample rate");
    if (text.empty())
        throw std::invalid_argument("r2d2_encode: empty text");

    PcmBuffer out;
    out.sample_rate = sample_rate;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(text[i])));
        Symbol sym{};
        if (!lookup_symbol(c, sym))
            throw std::invalid_argument("r2d2_encode: unsupported character '" +
                                        std::string(1, text[i]) + "' at position " +
                                        std::to_string(i));
        PcmBuffer s = synth_symbol(sym, alphabet, sample_rate);
        out.samples.insert(out.samples.end(), s.samples.begin(), s.samples.end());
    }
    return out;
}

std::string r2d2_decode(const PcmBuffer& buf, const R2d2Alphabet& alphabet) {
    if (buf.sample_rate <= 0)
        throw std::invalid_argument("r2d2_decode: non-positive sample rate");
    const int sr = buf.sample_rate;
    const std::size_t class_w = samples_for(kClassWindowS, sr);
    const std::size_t beep_n = samples_for(alphabet.beep_s, sr);
    const std::size_t chirp_n = samples_for(alphabet.chirp_s, sr);
    const std::size_t grunt_n = samples_for(alphabet.grunt_s, sr);
    const ClassRefs refs = make_refs(alphabet, sr);
    const auto probes = chirp_probes(alphabet);

    // Symbols ramp up from zero, so relative to the loudest sample anything
    // 60 dB down is padding, whatever the overall gain. Skipping it lets
    // recordings carry leading and trailing silence.
    double peak = 0.0;
    for (double s : buf.samples)
        peak = std::max(peak, std::abs(s));
    const double quiet = 1e-3 * peak;
    const auto next_active = [&](std::size_t from) {
        while (from < buf.size() && std::abs(buf.samples[from]) <= quiet)
            ++from;
        return from;
    };
    // A ramp's first samples sit below the threshold; resume a millisecond
    // early so the whole symbol stays inside its windows.
    const std::size_t backoff = static_cast<std::size_t>(sr) / 1000;
    const auto skip_silence = [&](std::size_t from) {
        const std::size_t active = next_active(from);
        if (active == buf.size())
            return active;
        return active > from + backoff ? active - backoff : from;
    };

    std::string text;
    std::size_t pos = skip_silence(0);
    while (pos < buf.size()) {
        // The early resume can leave a sliver of the final ramp-down ahead
        // of pos; if nothing but that sliver remains, the symbols are done.
        if (next_active(std::min(buf.size(), pos + 2 * backoff)) == buf.size())
            break;
        if (buf.size() - pos < class_w)
            throw DecodeError(offset_msg("r2d2_decode: truncated symbol", pos));

        // Score the three classes over the look-ahead window.
        const WindowSpec w{pos, class_w};
        double beep_best = 0.0;
        for (double f : alphabet.beep_freqs)
            beep_best = std::max(beep_best, goertzel_power(buf, f, w));
        std::array<double, 4> ge{};
        for (std::size_t i = 0; i < 4; ++i)
            ge[i] = goertzel_power(buf, alphabet.grunt_bank[i], w);
        std::sort(ge.begin(), ge.end(), std::greater<>());
        const std::size_t half = class_w / 2;
        const CombStats h1 = comb_stats(buf, probes, WindowSpec{pos, half});
        const CombStats h2 = comb_stats(buf, probes, WindowSpec{pos + half, half});

        const double sb = beep_best / refs.beep;
        const double sg = ge[1] / refs.grunt; // second line: grunts need >= 2
        const double sc = std::min(h1.total, h2.total) / refs.chirp_half;

        if (std::max({sb, sg, sc}) < kClassFloor) {
            if (next_active(pos) == buf.size())
                break;
            const std::size_t resumed = skip_silence(pos);
            if (resumed > pos) {
                pos = resumed;
                continue;
            }
            throw DecodeError(offset_msg("r2d2_decode: no symbol evidence", pos));
        }

        if (sc >= sb && sc >= sg) {
            // Chirp needs a moving centroid; a stationary line in the chirp
            // band matches nothing we emit.
            if (std::abs(h2.centroid - h1.centroid) < kChirpMoveHz)
                throw DecodeError(offset_msg("r2d2_decode: unclassifiable window", pos));
            if (pos + chirp_n > buf.size())
                throw DecodeError(offset_msg("r2d2_decode: truncated chirp", pos));
            const std::size_t ql = chirp_n / 4;
            double q[4];
            for (std::size_t k = 0; k < 4; ++k) {
                const CombStats cs = comb_stats(buf, probes, WindowSpec{pos + k * ql, ql});
                if (!(cs.total > 0.0))
                    throw DecodeError(offset_msg("r2d2_decode: silent chirp quarter", pos));
                q[k] = cs.centroid;
            }
            const double d1 = q[1] - q[0];
            const double d2 = q[3] - q[2];
            if (std::abs(d1) < kChirpLegHz || std::abs(d2) < kChirpLegHz)
                throw DecodeError(offset_msg("r2d2_decode: ambiguous chirp", pos));
            if (d1 > 0)
                text += d2 > 0 ? ' ' : ',';
            else
                text += d2 > 0 ? '?' : '.';
            pos += chirp_n;
        } else if (sb >= sg) {
            if (pos + beep_n > buf.size())
                throw DecodeError(offset_msg("r2d2_decode: truncated beep", pos));
            std::size_t best = 0;
            double best_e = -1.0;
            for (std::size_t i = 0; i < alphabet.beep_freqs.size(); ++i) {
                const double e = goertzel_power(buf, alphabet.beep_freqs[i], WindowSpec{pos, beep_n});
                if (e > best_e) {
                    best_e = e;
                    best = i;
                }
            }
            text += static_cast<char>('a' + best);
            pos += beep_n;
        } else {
            if (pos + grunt_n > buf.size())
                throw DecodeError(offset_msg("r2d2_decode: truncated grunt", pos));
            std::array<double, 4> e{};
            double peak = 0.0;
            for (std::size_t i = 0; i < 4; ++i) {
                e[i] = goertzel_power(buf, alphabet.grunt_bank[i], WindowSpec{pos, grunt_n});
                peak = std::max(peak, e[i]);
            }
            std::vector<int> lit;
            for (std::size_t i = 0; i < 4; ++i)
                if (e[i] >= kGruntOnRatio * peak)
                    lit.push_back(static_cast<int>(i));
            int digit = -1;
            for (std::size_t d = 0; d < alphabet.grunt_combos.size(); ++d)
                if (alphabet.grunt_combos[d] == lit)
                    digit = static_cast<int>(d);
            if (digit < 0)
                throw DecodeError(offset_msg("r2d2_decode: grunt lines match no digit", pos));
            text += static_cast<char>('0' + digit);
            pos += grunt_n;
        }
    }
    if (text.empty())
        throw DecodeError("r2d2_decode: no symbols found");
    return text;
}

SentenceStats r2d2_sentence_stats(const std::string& text, const R2d2Alphabet& alphabet) {
    if (text.empty())
        throw std::invalid_argument("r2d2_sentence_stats: empty text");
    double duration = 0.0;
    std::size_t word_chars = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(text[i])));
        Symbol sym{};
        if (!lookup_symbol(c, sym))
            throw std::invalid_argument("r2d2_sentence_stats: unsupported character '" +
                                        std::string(1, text[i]) + "' at position " +
                                        std::to_string(i));
        switch (sym.cls) {
        case SymbolClass::Beep:
            duration += alphabet.beep_s;
            ++word_chars;
            break;
        case SymbolClass::Grunt:
            duration += alphabet.grunt_s;
            ++word_chars;
            break;
        case SymbolClass::Chirp:
            duration += alphabet.chirp_s;
            break;
        }
    }
    SentenceStats s;
    s.duration_s = duration;
    s.info_bps = static_cast<double>(word_chars) * std::log2(40.0) / duration;
    return s;
}

} // namespace dv
