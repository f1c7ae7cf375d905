#include "dv/voices.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <variant>

#include "dv/cricket.hpp"
#include "dv/errors.hpp"
#include "dv/framing.hpp"
#include "dv/modem.hpp"
#include "dv/r2d2.hpp"
#include "dv/url_codec.hpp"

namespace dv {

namespace {

const char* kVoiceNames[] = {"ask8_fast", "ask8_slow", "ask128", "fsk256",
                             "r2d2",      "cricket",   "url"};

// One symbol-modem behind a common surface so framing code is written once.
struct ByteVoice {
    enum class Kind { Ask, Fsk, Cricket };
    Kind kind;
    AskConfig ask;
    FskConfig fsk;
    CricketConfig cricket;

    std::vector<double> preamble_bank() const {
        switch (kind) {
        case Kind::Ask: return ask.tones;
        // A dense sub-resolution bank makes a poor sync beacon: each extra
        // Goertzel probe admits more noise while the per-tone signal shrinks.
        // Every 16th tone spans the same band with resolvable spacing.
        case Kind::Fsk: {
            std::vector<double> sparse;
            for (std::size_t i = 0; i < fsk.tones.size(); i += 16)
                sparse.push_back(fsk.tones[i]);
            return sparse;
        }
        case Kind::Cricket: return {cricket.carrier_hz};
        }
        return {};
    }

    double preamble_amplitude() const {
        switch (kind) {
        // ASK calibration energies double as the payload decision reference,
        // so the preamble must use the payload's own per-tone amplitude.
        case Kind::Ask: return ask.tone_amplitude();
        // FSK payload is one full-amplitude tone. 16 tones at 0.2 put the
        // all-on burst within 4 dB of the payload power so sync keeps up
        // under noise; the phase stagger keeps the summed crest below 1.
        case Kind::Fsk: return 0.17;
        case Kind::Cricket: return 1.0;
        }
        return 1.0;
    }

    double symbol_s() const {
        switch (kind) {
        case Kind::Ask: return ask.symbol_s;
        case Kind::Fsk: return fsk.symbol_s;
        case Kind::Cricket: return cricket.period_s;
        }
        return 0.0;
    }

    std::size_t symbol_samples() const {
        switch (kind) {
        case Kind::Ask: return ask.symbol_samples();
        case Kind::Fsk: return fsk.symbol_samples();
        case Kind::Cricket: return cricket.period_samples();
        }
        return 0;
    }

    std::size_t bits_per_symbol() const {
        switch (kind) {
        case Kind::Ask: return ask.bits_per_symbol();
        case Kind::Fsk: return fsk.bits_per_symbol();
        case Kind::Cricket: return 5;
        }
        return 0;
    }

    PcmBuffer modulate_bits(const BitString& bits) const {
        switch (kind) {
        case Kind::Ask: return ask_modulate(ask, bits);
        case Kind::Fsk: return fsk_modulate(fsk, bits_to_bytes(bits));
        case Kind::Cricket: return cricket_encode(cricket, bits);
        }
        throw std::logic_error("unreachable");
    }

    BitString demodulate_bits(const PcmBuffer& buf, const Calibration& cal) const {
        switch (kind) {
        case Kind::Ask: return ask_demodulate(ask, buf, cal);
        case Kind::Fsk: return bytes_to_bits(fsk_demodulate(fsk, buf));
        case Kind::Cricket: return cricket_decode(cricket, buf, cal);
        }
        throw std::logic_error("unreachable");
    }

    Calibration reference_cal(int sample_rate) const {
        return reference_calibration(preamble_bank(), symbol_s(), sample_rate,
                                     preamble_amplitude());
    }
};

ByteVoice byte_voice(const std::string& voice, int sample_rate) {
    ByteVoice v{};
    if (voice == "cricket") {
        v.kind = ByteVoice::Kind::Cricket;
        v.cricket = CricketConfig::standard();
        v.cricket.sample_rate = sample_rate;
        return v;
    }
    const ModemConfig cfg = modem_preset(voice);
    if (std::holds_alternative<AskConfig>(cfg)) {
        v.kind = ByteVoice::Kind::Ask;
        v.ask = std::get<AskConfig>(cfg);
        v.ask.sample_rate = sample_rate;
    } else {
        v.kind = ByteVoice::Kind::Fsk;
        v.fsk = std::get<FskConfig>(cfg);
        v.fsk.sample_rate = sample_rate;
    }
    return v;
}

void require_voice(const std::string& voice) {
    if (!is_voice(voice))
        throw std::invalid_argument("unknown voice '" + voice + "'");
}

void require_byte_voice(const std::string& voice) {
    require_voice(voice);
    if (!voice_carries_bytes(voice))
        throw std::invalid_argument("voice '" + voice +
                                    "' carries text, not raw bytes");
}

PcmBuffer slice(const PcmBuffer& buf, std::size_t start, std::size_t length) {
    PcmBuffer out;
    out.sample_rate = buf.sample_rate;
    out.samples.assign(buf.samples.begin() + static_cast<std::ptrdiff_t>(start),
                       buf.samples.begin() + static_cast<std::ptrdiff_t>(start + length));
    return out;
}

// Demodulates `count` symbols starting `first` symbols past the sync point.
BitString demod_symbols(const ByteVoice& v, const PcmBuffer& buf,
                        const SyncResult& sync, std::size_t first,
                        std::size_t count) {
    if (count == 0)
        return {};
    const std::size_t sym = v.symbol_samples();
    const std::size_t start = sync.payload_offset + first * sym;
    const std::size_t need = count * sym;
    if (start > buf.size() || buf.size() - start < need)
        throw FrameError("audio ends in the middle of a frame");
    return v.demodulate_bits(slice(buf, start, need), sync.cal);
}

Bytes decode_framed_bytes(const ByteVoice& v, const PcmBuffer& buf) {
    const SyncResult sync =
        detect_preamble(buf, v.preamble_bank(), v.symbol_s(), v.preamble_amplitude());
    const std::size_t b = v.bits_per_symbol();
    const std::size_t len_syms = (16 + b - 1) / b;

    BitString bits = demod_symbols(v, buf, sync, 0, len_syms);
    std::size_t payload_len = 0;
    for (std::size_t i = 0; i < 16; ++i)
        payload_len = (payload_len << 1) | bits[i];

    const std::size_t total_bits = (payload_len + 4) * 8;
    const std::size_t total_syms = (total_bits + b - 1) / b;
    if (total_syms > len_syms) {
        const BitString rest =
            demod_symbols(v, buf, sync, len_syms, total_syms - len_syms);
        bits.insert(bits.end(), rest.begin(), rest.end());
    }
    bits.resize(total_bits);
    return parse_frame(bits_to_bytes(bits));
}

std::string to_hex(const Bytes& data) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (std::uint8_t b : data) {
        out += digits[b >> 4];
        out += digits[b & 0x0F];
    }
    return out;
}

Bytes from_hex(const std::string& text) {
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9')
            return c - '0';
        if (c >= 'a' && c <= 'f')
            return c - 'a' + 10;
        return -1;
    };
    if (text.size() % 2 != 0)
        throw FrameError("framed text has an odd number of hex digits");
    Bytes out;
    out.reserve(text.size() / 2);
    for (std::size_t i = 0; i < text.size(); i += 2) {
        const int hi = nibble(text[i]);
        const int lo = nibble(text[i + 1]);
        if (hi < 0 || lo < 0)
            throw FrameError("framed text is not hex at position " + std::to_string(i));
        out.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
    }
    return out;
}

const std::string& canonical_sentence() {
    static const std::string s = [] {
        std::string t;
        for (int w = 0; w < 12; ++w) {
            if (w > 0)
                t += ' ';
            t += "inter";
        }
        t += '.';
        return t;
    }();
    return s;
}

} // namespace

std::vector<std::string> voice_names() {
    return {std::begin(kVoiceNames), std::end(kVoiceNames)};
}

bool is_voice(const std::string& voice) {
    return std::find(std::begin(kVoiceNames), std::end(kVoiceNames), voice) !=
           std::end(kVoiceNames);
}

bool voice_carries_bytes(const std::string& voice) {
    require_voice(voice);
    return voice != "r2d2" && voice != "url";
}

double voice_data_rate_bps(const std::string& voice) {
    require_voice(voice);
    if (voice == "r2d2")
        return r2d2_sentence_stats(canonical_sentence()).info_bps;
    if (voice == "url")
        return 8.0 / kUrlSymbolS;
    if (voice == "cricket")
        return CricketConfig::standard().data_rate_bps();
    return data_rate_bps(modem_preset(voice));
}

PcmBuffer voice_encode_bytes(const std::string& voice, const Bytes& payload,
                             bool framed, int sample_rate) {
    require_byte_voice(voice);
    const ByteVoice v = byte_voice(voice, sample_rate);
    if (!framed)
        return v.modulate_bits(bytes_to_bits(payload));

    const Bytes frame = build_frame(payload);
    const PcmBuffer preamble = emit_preamble(v.preamble_bank(), v.symbol_s(),
                                             sample_rate, v.preamble_amplitude());
    const PcmBuffer body = v.modulate_bits(bytes_to_bits(frame));
    // Quarter-symbol guard tail: sync refinement under noise can land a few
    // samples late, and the last symbol window must still fit in the buffer.
    PcmBuffer guard;
    guard.sample_rate = sample_rate;
    guard.samples.assign(v.symbol_samples() / 4, 0.0);
    return concat({preamble, body, guard});
}

Bytes voice_decode_bytes(const std::string& voice, const PcmBuffer& buf,
                         bool framed) {
    require_byte_voice(voice);
    const ByteVoice v = byte_voice(voice, buf.sample_rate);
    if (framed)
        return decode_framed_bytes(v, buf);

    const std::size_t sym = v.symbol_samples();
    const std::size_t whole = (buf.size() / sym) * sym;
    if (whole == 0)
        return {};
    const BitString bits =
        v.demodulate_bits(slice(buf, 0, whole), v.reference_cal(buf.sample_rate));
    return bits_to_bytes(bits);
}

PcmBuffer voice_encode_text(const std::string& voice, const std::string& text,
                            bool framed, int sample_rate) {
    require_voice(voice);
    if (voice == "url")
        return url_encode_audio(text, sample_rate);
    if (voice == "r2d2") {
        if (!framed)
            return r2d2_encode(text, sample_rate);
        const Bytes frame = build_frame(Bytes(text.begin(), text.end()));
        return r2d2_encode(to_hex(frame), sample_rate);
    }
    return voice_encode_bytes(voice, Bytes(text.begin(), text.end()), framed,
                              sample_rate);
}

std::string voice_decode_text(const std::string& voice, const PcmBuffer& buf,
                              bool framed) {
    require_voice(voice);
    if (voice == "url")
        return url_decode_audio(buf);
    if (voice == "r2d2") {
        const std::string raw = r2d2_decode(buf);
        if (!framed)
            return raw;
        const Bytes payload = parse_frame(from_hex(raw));
        return std::string(payload.begin(), payload.end());
    }
    const Bytes bytes = voice_decode_bytes(voice, buf, framed);
    return std::string(bytes.begin(), bytes.end());
}

BitString voice_demod_frame_bits(const std::string& voice, const PcmBuffer& buf,
                                 std::size_t frame_bytes) {
    require_byte_voice(voice);
    const ByteVoice v = byte_voice(voice, buf.sample_rate);
    const SyncResult sync =
        detect_preamble(buf, v.preamble_bank(), v.symbol_s(), v.preamble_amplitude());
    const std::size_t b = v.bits_per_symbol();
    const std::size_t total_bits = frame_bytes * 8;
    const std::size_t total_syms = (total_bits + b - 1) / b;
    BitString bits = demod_symbols(v, buf, sync, 0, total_syms);
    bits.resize(total_bits);
    return bits;
}

} // namespace dv
