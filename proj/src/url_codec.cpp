#include "dv/url_codec.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "dv/errors.hpp"
#include "dv/framing.hpp"
#include "dv/modem.hpp"

namespace dv {

namespace {

bool printable_ascii(char c) {
    return static_cast<unsigned char>(c) >= 0x20 && static_cast<unsigned char>(c) <= 0x7E;
}

bool iprefix(const std::string& s, const char* prefix) {
    for (std::size_t i = 0; prefix[i] != '\0'; ++i) {
        if (i >= s.size())
            return false;
        if (std::tolower(static_cast<unsigned char>(s[i])) != prefix[i])
            return false;
    }
    return true;
}

void append_bits(BitString& out, unsigned value, int width) {
    for (int b = width - 1; b >= 0; --b)
        out.push_back(static_cast<std::uint8_t>((value >> b) & 1u));
}

// Reads fixed-width fields until END; running off the stream is a frame
// level corruption, not a programming error.
struct BitReader {
    const BitString& bits;
    std::size_t pos = 0;

    unsigned read(int width) {
        if (bits.size() - pos < static_cast<std::size_t>(width) || pos > bits.size())
            throw FrameError("compressed url stream ended before its terminator");
        unsigned v = 0;
        for (int i = 0; i < width; ++i)
            v = (v << 1) | (bits[pos++] & 1u);
        return v;
    }
};

const char* kStandardEntries[] = {
    "http://", "https://", "mailto:", "ftp://", "www.",
    ".com", ".org", ".net", ".edu", ".gov", ".io", ".co.uk", ".de", ".jp",
    ".html", ".htm", ".php", ".pdf", ".jpg", ".png", ".gif", ".txt", ".xml",
    ".css", ".js",
    "index", "home", "search", "news", "mail", "user", "login", "admin",
    "image", "video", "download", "about", "contact", "blog", "wiki", "shop",
    "online", "page", "file", "html", "query",
    "/", ".", "-", "_", "~", "?", "=", "&", "%", "+", ":", "@", "#",
    "20", "://", "index.html",
};

void check_dictionary(const UrlDictionary& dict) {
    if (dict.entries.empty())
        throw std::invalid_argument("url dictionary has no entries");
    if (dict.entries.size() > static_cast<std::size_t>(kUrlEnd - 1))
        throw std::invalid_argument("url dictionary exceeds 62 entries");
    for (std::size_t i = 0; i < dict.entries.size(); ++i) {
        const auto& e = dict.entries[i];
        if (e.empty())
            throw std::invalid_argument("url dictionary entry " + std::to_string(i) +
                                        " is empty");
        for (char c : e)
            if (!printable_ascii(c))
                throw std::invalid_argument("url dictionary entry " + std::to_string(i) +
                                            " contains non-printable characters");
        for (std::size_t j = 0; j < i; ++j)
            if (dict.entries[j] == e)
                throw std::invalid_argument("url dictionary entry '" + e + "' duplicated");
    }
}

AskConfig url_ask_config(UrlScheme scheme, int sample_rate) {
    AskConfig cfg;
    cfg.name = scheme == UrlScheme::Mailto ? "url-mailto" : "url-http";
    cfg.tones = url_band(scheme);
    cfg.symbol_s = kUrlSymbolS;
    cfg.sample_rate = sample_rate;
    return cfg;
}

// The two 8-tone banks sit one Fourier bin apart at T=20 ms, so the ramped
// symbol pulses are not orthogonal under a plain rectangular window and a
// per-tone energy threshold misreads busy symbols. Instead each symbol is
// projected (least squares) onto the 16 known pulse shapes, sine and cosine
// per tone, which separates the tones exactly and tolerates the phase
// rotation a filtered channel introduces.
class UrlSymbolDemod {
  public:
    UrlSymbolDemod(const AskConfig& cfg, const Calibration& cal) : cfg_(cfg) {
        n_ = cfg.symbol_samples();
        const std::size_t m = cfg.tones.size();
        thresholds_.resize(m);
        for (std::size_t i = 0; i < m; ++i) {
            std::size_t ci = cal.tones.size();
            for (std::size_t j = 0; j < cal.tones.size(); ++j)
                if (std::abs(cal.tones[j] - cfg.tones[i]) < 1e-6) {
                    ci = j;
                    break;
                }
            if (ci == cal.tones.size())
                throw std::invalid_argument("calibration missing url bank tone");
            thresholds_[i] = std::sqrt(cal.on_energy[ci] * cal.noise_floor[ci]);
        }

        basis_.assign(2 * m, std::vector<double>(n_));
        const std::vector<double> env = tone_envelope(n_, cfg.sample_rate);
        for (std::size_t i = 0; i < m; ++i) {
            const double w = 2.0 * std::numbers::pi * cfg.tones[i] / cfg.sample_rate;
            for (std::size_t t = 0; t < n_; ++t) {
                basis_[2 * i][t] = env[t] * std::sin(w * static_cast<double>(t));
                basis_[2 * i + 1][t] = env[t] * std::cos(w * static_cast<double>(t));
            }
        }
        factor_gram();
    }

    BitString demod_symbol(const PcmBuffer& buf, std::size_t start) const {
        const std::size_t m = cfg_.tones.size();
        std::vector<double> rhs(2 * m);
        for (std::size_t k = 0; k < 2 * m; ++k) {
            double acc = 0.0;
            const double* x = buf.samples.data() + start;
            const double* b = basis_[k].data();
            for (std::size_t t = 0; t < n_; ++t)
                acc += b[t] * x[t];
            rhs[k] = acc;
        }
        solve_inplace(rhs);
        BitString bits(m);
        const double scale = static_cast<double>(n_) / 2.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double amp2 = rhs[2 * i] * rhs[2 * i] + rhs[2 * i + 1] * rhs[2 * i + 1];
            const double power = amp2 * scale * scale;
            bits[i] = power > thresholds_[i] ? 1 : 0;
        }
        return bits;
    }

    std::size_t symbol_samples() const { return n_; }

  private:
    void factor_gram() {
        const std::size_t k = basis_.size();
        chol_.assign(k, std::vector<double>(k, 0.0));
        std::vector<std::vector<double>> gram(k, std::vector<double>(k, 0.0));
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j <= i; ++j) {
                double acc = 0.0;
                for (std::size_t t = 0; t < n_; ++t)
                    acc += basis_[i][t] * basis_[j][t];
                gram[i][j] = gram[j][i] = acc;
            }
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j <= i; ++j) {
                double acc = gram[i][j];
                for (std::size_t t = 0; t < j; ++t)
                    acc -= chol_[i][t] * chol_[j][t];
                if (i == j) {
                    if (acc <= 0.0)
                        throw std::invalid_argument(
                            "url demodulator basis is degenerate at this sample rate");
                    chol_[i][i] = std::sqrt(acc);
                } else {
                    chol_[i][j] = acc / chol_[j][j];
                }
            }
        }
    }

    void solve_inplace(std::vector<double>& v) const {
        const std::size_t k = chol_.size();
        for (std::size_t i = 0; i < k; ++i) {
            double acc = v[i];
            for (std::size_t j = 0; j < i; ++j)
                acc -= chol_[i][j] * v[j];
            v[i] = acc / chol_[i][i];
        }
        for (std::size_t i = k; i-- > 0;) {
            double acc = v[i];
            for (std::size_t j = i + 1; j < k; ++j)
                acc -= chol_[j][i] * v[j];
            v[i] = acc / chol_[i][i];
        }
    }

    AskConfig cfg_;
    std::size_t n_ = 0;
    std::vector<double> thresholds_;
    std::vector<std::vector<double>> basis_;
    std::vector<std::vector<double>> chol_;
};

double band_mean_energy(const PcmBuffer& buf, double base_hz) {
    double total = 0.0;
    for (int i = 0; i < 8; ++i)
        total += goertzel_power(buf, base_hz + 50.0 * i, whole_window(buf));
    return total / 8.0;
}

} // namespace

UrlScheme classify_scheme(const std::string& url) {
    if (iprefix(url, "http://") || iprefix(url, "https://"))
        return UrlScheme::Http;
    if (iprefix(url, "mailto:"))
        return UrlScheme::Mailto;
    return UrlScheme::Other;
}

const UrlDictionary& UrlDictionary::standard() {
    static const UrlDictionary dict = [] {
        UrlDictionary d;
        for (const char* e : kStandardEntries)
            d.entries.emplace_back(e);
        check_dictionary(d);
        return d;
    }();
    return dict;
}

UrlDictionary UrlDictionary::from_text(const std::string& text) {
    UrlDictionary d;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        d.entries.push_back(line);
    }
    check_dictionary(d);
    return d;
}

std::string UrlDictionary::to_text() const {
    std::string out;
    for (const auto& e : entries) {
        out += e;
        out += '\n';
    }
    return out;
}

BitString url_compress(const std::string& url, const UrlDictionary& dict) {
    check_dictionary(dict);
    for (std::size_t i = 0; i < url.size(); ++i)
        if (!printable_ascii(url[i]))
            throw std::invalid_argument("url has a non-printable character at position " +
                                        std::to_string(i));

    BitString out;
    std::size_t pos = 0;
    while (pos < url.size()) {
        std::size_t best_len = 0;
        std::size_t best_code = 0;
        for (std::size_t e = 0; e < dict.entries.size(); ++e) {
            const auto& entry = dict.entries[e];
            if (entry.size() > best_len && url.compare(pos, entry.size(), entry) == 0) {
                best_len = entry.size();
                best_code = e + 1;
            }
        }
        if (best_len > 0) {
            append_bits(out, static_cast<unsigned>(best_code), kUrlCodeBits);
            pos += best_len;
        } else {
            append_bits(out, kUrlEscape, kUrlCodeBits);
            append_bits(out, static_cast<unsigned char>(url[pos]), kUrlLiteralBits);
            ++pos;
        }
    }
    append_bits(out, kUrlEnd, kUrlCodeBits);
    return out;
}

std::string url_decompress(const BitString& bits, const UrlDictionary& dict) {
    check_dictionary(dict);
    BitReader rd{bits};
    std::string out;
    for (;;) {
        const unsigned code = rd.read(kUrlCodeBits);
        if (code == kUrlEnd)
            return out;
        if (code == kUrlEscape) {
            const unsigned lit = rd.read(kUrlLiteralBits);
            if (lit < 0x20 || lit > 0x7E)
                throw FrameError("escaped url literal outside the printable range");
            out += static_cast<char>(lit);
        } else {
            if (code > dict.entries.size())
                throw FrameError("url code " + std::to_string(code) +
                                 " has no dictionary entry");
            out += dict.entries[code - 1];
        }
    }
}

std::vector<double> url_band(UrlScheme scheme) {
    double base = 0.0;
    switch (scheme) {
    case UrlScheme::Mailto: base = 1000.0; break;
    case UrlScheme::Http: base = 2000.0; break;
    default:
        throw std::invalid_argument("no tone band for scheme 'other'");
    }
    std::vector<double> tones(8);
    for (int i = 0; i < 8; ++i)
        tones[i] = base + 50.0 * i;
    return tones;
}

PcmBuffer url_encode_audio(const std::string& url, int sample_rate,
                           const UrlDictionary& dict) {
    const UrlScheme scheme = classify_scheme(url);
    if (scheme == UrlScheme::Other)
        throw std::invalid_argument("url scheme must be http or mailto to pick a band");
    if (sample_rate < 8000)
        throw std::invalid_argument("url audio needs a sample rate of at least 8000 Hz");

    BitString bits = url_compress(url, dict);
    while (bits.size() % 8 != 0)
        bits.push_back(0);
    const Bytes frame = build_frame(bits_to_bytes(bits));

    const AskConfig cfg = url_ask_config(scheme, sample_rate);
    const PcmBuffer preamble =
        emit_preamble(cfg.tones, cfg.symbol_s, sample_rate, cfg.tone_amplitude());
    const PcmBuffer payload = ask_modulate(cfg, bytes_to_bits(frame));
    // Guard tail so the last symbol window still fits when sync refinement
    // lands a few samples late.
    PcmBuffer guard;
    guard.sample_rate = sample_rate;
    guard.samples.assign(cfg.symbol_samples() / 4, 0.0);
    return concat({preamble, payload, guard});
}

UrlScheme url_classify_audio(const PcmBuffer& buf) {
    if (buf.size() == 0 || buf.sample_rate < 8000)
        return UrlScheme::Other;
    const double mailto = band_mean_energy(buf, 1000.0);
    const double http = band_mean_energy(buf, 2000.0);
    // Guard probes between and above the bands estimate the broadband floor
    // so noise, which excites every bin equally, classifies as Other.
    double guard = 0.0;
    for (int i = 0; i < 8; ++i) {
        guard += goertzel_power(buf, 1500.0 + 50.0 * i, whole_window(buf));
        guard += goertzel_power(buf, 2650.0 + 50.0 * i, whole_window(buf));
    }
    guard /= 16.0;

    const double top = std::max(mailto, http);
    const double other = std::min(mailto, http);
    if (top <= 0.0 || top <= 4.0 * guard || other > top / 4.0)
        return UrlScheme::Other;
    return mailto > http ? UrlScheme::Mailto : UrlScheme::Http;
}

std::string url_decode_audio(const PcmBuffer& buf, const UrlDictionary& dict) {
    const UrlScheme scheme = url_classify_audio(buf);
    if (scheme == UrlScheme::Other)
        throw SyncError("no url band stands out of the floor");

    const AskConfig cfg = url_ask_config(scheme, buf.sample_rate);
    const SyncResult sync =
        detect_preamble(buf, cfg.tones, cfg.symbol_s, cfg.tone_amplitude());
    const UrlSymbolDemod demod(cfg, sync.cal);
    const std::size_t sym = demod.symbol_samples();

    auto byte_at = [&](std::size_t index) {
        const std::size_t start = sync.payload_offset + index * sym;
        if (start + sym > buf.size())
            throw FrameError("audio ends in the middle of a frame");
        const BitString bits = demod.demod_symbol(buf, start);
        return bits_to_bytes(bits).at(0);
    };

    Bytes frame;
    frame.push_back(byte_at(0));
    frame.push_back(byte_at(1));
    const std::size_t payload_len = (static_cast<std::size_t>(frame[0]) << 8) | frame[1];
    const std::size_t total = payload_len + 4;
    for (std::size_t i = 2; i < total; ++i)
        frame.push_back(byte_at(i));

    const Bytes payload = parse_frame(frame);
    return url_decompress(bytes_to_bits(payload), dict);
}

} // namespace dv
