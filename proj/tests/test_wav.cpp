#include <cstdint>
#include <cstdio>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "dv/errors.hpp"
#include "dv/wav.hpp"

using namespace dv;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) {
        path = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") +
               "/" + name;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

void put_u32(std::vector<std::uint8_t>& v, std::uint32_t x) {
    v.push_back(x & 0xFF);
    v.push_back((x >> 8) & 0xFF);
    v.push_back((x >> 16) & 0xFF);
    v.push_back((x >> 24) & 0xFF);
}

void put_u16(std::vector<std::uint8_t>& v, std::uint16_t x) {
    v.push_back(x & 0xFF);
    v.push_back((x >> 8) & 0xFF);
}

void put_tag(std::vector<std::uint8_t>& v, const char* tag) {
    for (int i = 0; i < 4; ++i)
        v.push_back(static_cast<std::uint8_t>(tag[i]));
}

// Minimal valid mono 16-bit file, with an optional extra chunk before fmt.
std::vector<std::uint8_t> tiny_wav(bool with_extra_chunk, std::uint16_t channels = 1,
                                   std::uint16_t bits = 16) {
    const std::vector<std::int16_t> pcm = {0, 16384, -16384, 32767, -32768};
    std::vector<std::uint8_t> body;
    put_tag(body, "WAVE");
    if (with_extra_chunk) {
        put_tag(body, "LIST");
        put_u32(body, 5); // odd size exercises the padding rule
        for (int i = 0; i < 5; ++i)
            body.push_back(0xEE);
        body.push_back(0x00); // pad byte
    }
    put_tag(body, "fmt ");
    put_u32(body, 16);
    put_u16(body, 1); // PCM
    put_u16(body, channels);
    put_u32(body, 8000);
    put_u32(body, 8000u * channels * bits / 8);
    put_u16(body, static_cast<std::uint16_t>(channels * bits / 8));
    put_u16(body, bits);
    put_tag(body, "data");
    put_u32(body, static_cast<std::uint32_t>(pcm.size() * 2));
    for (std::int16_t s : pcm)
        put_u16(body, static_cast<std::uint16_t>(s));

    std::vector<std::uint8_t> file;
    put_tag(file, "RIFF");
    put_u32(file, static_cast<std::uint32_t>(body.size()));
    file.insert(file.end(), body.begin(), body.end());
    return file;
}

void dump(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

} // namespace

TEST_CASE("wav write/read round trip within one quantization step") {
    TempFile f("dv_wav_roundtrip.wav");
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    PcmBuffer buf;
    buf.sample_rate = 44100;
    buf.samples.resize(4321);
    for (double& s : buf.samples)
        s = amp(rng);

    write_wav(f.path, buf);
    PcmBuffer back = read_wav(f.path);
    CHECK(back.sample_rate == 44100);
    REQUIRE(back.size() == buf.size());
    for (std::size_t i = 0; i < buf.size(); ++i)
        CHECK(std::abs(back.samples[i] - buf.samples[i]) <= 1.0 / 32767.0);
}

TEST_CASE("wav write clamps out-of-range samples") {
    TempFile f("dv_wav_clamp.wav");
    PcmBuffer buf;
    buf.sample_rate = 8000;
    buf.samples = {2.0, -2.0, 0.5};
    write_wav(f.path, buf);
    PcmBuffer back = read_wav(f.path);
    REQUIRE(back.size() == 3);
    CHECK(back.samples[0] == doctest::Approx(1.0));
    CHECK(back.samples[1] == doctest::Approx(-1.0));
    CHECK(back.samples[2] == doctest::Approx(0.5).epsilon(0.001));
}

TEST_CASE("reader accepts unknown chunks and odd chunk padding") {
    TempFile f("dv_wav_chunks.wav");
    dump(f.path, tiny_wav(true));
    PcmBuffer buf = read_wav(f.path);
    CHECK(buf.sample_rate == 8000);
    REQUIRE(buf.size() == 5);
    CHECK(buf.samples[0] == 0.0);
    CHECK(buf.samples[3] == doctest::Approx(1.0));
}

TEST_CASE("reader rejects what it cannot represent") {
    TempFile f("dv_wav_bad.wav");

    dump(f.path, tiny_wav(false, 2)); // stereo
    CHECK_THROWS_AS(read_wav(f.path), Error);

    dump(f.path, tiny_wav(false, 1, 8)); // 8-bit
    CHECK_THROWS_AS(read_wav(f.path), Error);

    std::vector<std::uint8_t> garbage = {'n', 'o', 't', 'a', 'w', 'a', 'v'};
    dump(f.path, garbage);
    CHECK_THROWS_AS(read_wav(f.path), Error);

    std::vector<std::uint8_t> truncated = tiny_wav(false);
    truncated.resize(truncated.size() - 4);
    dump(f.path, truncated);
    CHECK_THROWS_AS(read_wav(f.path), Error);

    CHECK_THROWS_AS(read_wav("/nonexistent/dir/missing.wav"), Error);
}

TEST_CASE("writer reports unwritable paths") {
    PcmBuffer buf;
    buf.sample_rate = 8000;
    buf.samples = {0.0};
    CHECK_THROWS_AS(write_wav("/nonexistent/dir/out.wav", buf), Error);
}
