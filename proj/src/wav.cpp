#include "dv/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <vector>

#include "dv/errors.hpp"

namespace dv {

namespace {

constexpr double kScale = 32767.0;

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
    out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xFF));
    out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xFF));
    out.push_back(static_cast<std::uint8_t>((v >> 24) & 0xFF));
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) {
    out.insert(out.end(), tag, tag + 4);
}

class ByteReader {
  public:
    ByteReader(const std::uint8_t* data, std::size_t size) : data_(data), size_(size) {}

    std::size_t pos() const { return pos_; }
    std::size_t remaining() const { return size_ - pos_; }

    void need(std::size_t n, const char* what) const {
        if (remaining() < n)
            throw Error(std::string("wav: truncated file while reading ") + what);
    }

    std::uint16_t u16(const char* what) {
        need(2, what);
        const std::uint16_t v =
            static_cast<std::uint16_t>(data_[pos_] | (data_[pos_ + 1] << 8));
        pos_ += 2;
        return v;
    }

    std::uint32_t u32(const char* what) {
        need(4, what);
        const std::uint32_t v = static_cast<std::uint32_t>(data_[pos_]) |
                                (static_cast<std::uint32_t>(data_[pos_ + 1]) << 8) |
                                (static_cast<std::uint32_t>(data_[pos_ + 2]) << 16) |
                                (static_cast<std::uint32_t>(data_[pos_ + 3]) << 24);
        pos_ += 4;
        return v;
    }

    std::string tag(const char* what) {
        need(4, what);
        std::string t(reinterpret_cast<const char*>(data_ + pos_), 4);
        pos_ += 4;
        return t;
    }

    void skip(std::size_t n, const char* what) {
        need(n, what);
        pos_ += n;
    }

    const std::uint8_t* at() const { return data_ + pos_; }

  private:
    const std::uint8_t* data_;
    std::size_t size_;
    std::size_t pos_ = 0;
};

} // namespace

void write_wav(const std::string& path, const PcmBuffer& buf) {
    if (buf.sample_rate <= 0)
        throw Error("wav: non-positive sample rate");

    const std::uint32_t data_bytes = static_cast<std::uint32_t>(buf.size() * 2);
    std::vector<std::uint8_t> out;
    out.reserve(44 + data_bytes);

    put_tag(out, "RIFF");
    put_u32(out, 36 + data_bytes);
    put_tag(out, "WAVE");

    put_tag(out, "fmt ");
    put_u32(out, 16);
    put_u16(out, 1); // PCM
    put_u16(out, 1); // mono
    put_u32(out, static_cast<std::uint32_t>(buf.sample_rate));
    put_u32(out, static_cast<std::uint32_t>(buf.sample_rate) * 2);
    put_u16(out, 2);  // block align
    put_u16(out, 16); // bits per sample

    put_tag(out, "data");
    put_u32(out, data_bytes);
    for (double s : buf.samples) {
        const double clamped = std::clamp(s, -1.0, 1.0);
        const auto q = static_cast<std::int16_t>(std::lround(clamped * kScale));
        put_u16(out, static_cast<std::uint16_t>(q));
    }

    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f)
        throw Error("wav: cannot open '" + path + "' for writing");
    f.write(reinterpret_cast<const char*>(out.data()),
            static_cast<std::streamsize>(out.size()));
    if (!f)
        throw Error("wav: write to '" + path + "' failed");
}

PcmBuffer read_wav(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw Error("wav: cannot open '" + path + "' for reading");
    std::vector<std::uint8_t> raw((std::istreambuf_iterator<char>(f)),
                                  std::istreambuf_iterator<char>());
    ByteReader rd(raw.data(), raw.size());

    if (rd.tag("RIFF header") != "RIFF")
        throw Error("wav: '" + path + "' is not a RIFF file");
    rd.u32("RIFF size");
    if (rd.tag("WAVE header") != "WAVE")
        throw Error("wav: '" + path + "' is not a WAVE file");

    PcmBuffer buf;
    bool have_fmt = false;
    bool have_data = false;

    while (rd.remaining() >= 8) {
        const std::string id = rd.tag("chunk id");
        const std::uint32_t size = rd.u32("chunk size");
        if (id == "fmt ") {
            if (size < 16)
                throw Error("wav: fmt chunk too short");
            const std::size_t chunk_end = rd.pos() + size;
            const std::uint16_t format = rd.u16("audio format");
            const std::uint16_t channels = rd.u16("channel count");
            const std::uint32_t rate = rd.u32("sample rate");
            rd.u32("byte rate");
            rd.u16("block align");
            const std::uint16_t bits = rd.u16("bits per sample");
            if (format != 1)
                throw Error("wav: only PCM format is supported");
            if (channels != 1)
                throw Error("wav: only mono files are supported");
            if (bits != 16)
                throw Error("wav: only 16-bit samples are supported");
            if (rate == 0 || rate > 1000000)
                throw Error("wav: implausible sample rate");
            buf.sample_rate = static_cast<int>(rate);
            rd.skip(chunk_end - rd.pos(), "fmt extension");
            have_fmt = true;
        } else if (id == "data") {
            if (!have_fmt)
                throw Error("wav: data chunk before fmt chunk");
            rd.need(size, "sample data");
            const std::size_t n = size / 2;
            buf.samples.resize(n);
            const std::uint8_t* p = rd.at();
            for (std::size_t i = 0; i < n; ++i) {
                const auto v = static_cast<std::int16_t>(
                    static_cast<std::uint16_t>(p[2 * i] | (p[2 * i + 1] << 8)));
                buf.samples[i] = static_cast<double>(v) / kScale;
            }
            rd.skip(size, "sample data");
            have_data = true;
        } else {
            rd.skip(size, "chunk body");
        }
        if (size % 2 == 1 && rd.remaining() > 0)
            rd.skip(1, "chunk padding");
    }

    if (!have_fmt)
        throw Error("wav: missing fmt chunk");
    if (!have_data)
        throw Error("wav: missing data chunk");
    return buf;
}

} // namespace dv
