#pragma once

#include <cstdint>
#include <vector>

namespace dv {

// Bit vectors hold one bit per element, value 0 or 1, MSB-first relative to
// the byte stream they came from.
using BitString = std::vector<std::uint8_t>;
using Bytes = std::vector<std::uint8_t>;

inline BitString bytes_to_bits(const Bytes& bytes) {
    BitString bits;
    bits.reserve(bytes.size() * 8);
    for (auto b : bytes)
        for (int i = 7; i >= 0; --i)
            bits.push_back(static_cast<std::uint8_t>((b >> i) & 1u));
    return bits;
}

// Packs bits MSB-first. A trailing group of fewer than 8 bits is dropped;
// callers that need padding append zero bits first.
inline Bytes bits_to_bytes(const BitString& bits) {
    Bytes bytes;
    bytes.reserve(bits.size() / 8);
    for (std::size_t i = 0; i + 8 <= bits.size(); i += 8) {
        std::uint8_t b = 0;
        for (std::size_t j = 0; j < 8; ++j)
            b = static_cast<std::uint8_t>((b << 1) | (bits[i + j] & 1u));
        bytes.push_back(b);
    }
    return bytes;
}

} // namespace dv
