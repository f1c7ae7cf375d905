#pragma once

#include <string>
#include <vector>

#include "dv/bits.hpp"
#include "dv/dsp.hpp"

namespace dv {

enum class UrlScheme { Http, Mailto, Other };

// Case-insensitive prefix test: "http://" -> Http, "mailto:" -> Mailto.
UrlScheme classify_scheme(const std::string& url);

// Greedy longest-match dictionary for URL text. Codes are 6 bits wide:
// 0 escapes a 7-bit ASCII literal, 63 terminates the stream, 1..62 index
// the entries in order.
struct UrlDictionary {
    std::vector<std::string> entries;

    static const UrlDictionary& standard();
    // One entry per line; order is significant because it assigns codes.
    static UrlDictionary from_text(const std::string& text);
    std::string to_text() const;
};

inline constexpr int kUrlCodeBits = 6;
inline constexpr int kUrlLiteralBits = 7;
inline constexpr int kUrlEscape = 0;
inline constexpr int kUrlEnd = 63;

// Compresses printable ASCII (0x20..0x7E). Rejects anything else,
// reporting the position.
BitString url_compress(const std::string& url,
                       const UrlDictionary& dict = UrlDictionary::standard());

// Stops at the END code; trailing padding bits are ignored. Throws
// FrameError when the stream ends before END or a code has no entry.
std::string url_decompress(const BitString& bits,
                           const UrlDictionary& dict = UrlDictionary::standard());

// The audio side keys the compressed, framed bits onto one of two 8-tone
// banks: mailto 1000..1350 Hz, http 2000..2350 Hz, 20 ms symbols. A
// receiver can tell the scheme from band energy alone.
std::vector<double> url_band(UrlScheme scheme);
inline constexpr double kUrlSymbolS = 0.020;

// Preamble + framed compressed payload on the scheme's bank. Other-scheme
// URLs are rejected.
PcmBuffer url_encode_audio(const std::string& url, int sample_rate = 44100,
                           const UrlDictionary& dict = UrlDictionary::standard());

// Band-energy comparison only; no demodulation. Silence or noise with no
// dominant band classifies as Other.
UrlScheme url_classify_audio(const PcmBuffer& buf);

// Full receive path: classify band, sync, demodulate, unframe, decompress.
std::string url_decode_audio(const PcmBuffer& buf,
                             const UrlDictionary& dict = UrlDictionary::standard());

} // namespace dv
