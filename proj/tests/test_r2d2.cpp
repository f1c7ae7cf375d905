#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "dv/channel.hpp"
#include "dv/r2d2.hpp"

using namespace dv;

namespace {

std::string random_phrase(std::mt19937_64& rng, std::size_t len) {
    static const std::string charset = "abcdefghijklmnopqrstuvwxyz0123456789 .,?";
    std::string s;
    // Never start or end with a space; spaces separate sounds but carry no
    // segmentation cue of their own.
    while (s.size() < len) {
        char c = charset[rng() % charset.size()];
        if (c == ' ' && (s.empty() || s.back() == ' '))
            continue;
        s.push_back(c);
    }
    if (!s.empty() && s.back() == ' ')
        s.back() = 'x';
    return s;
}

} // namespace

TEST_CASE("alphabet geometry: 40 symbols in three disjoint bands") {
    const R2d2Alphabet& a = R2d2Alphabet::standard();
    // 26 beeps + 4 chirp symbols + 10 grunts.
    for (int i = 0; i < 26; ++i)
        CHECK(a.beep_freqs[static_cast<std::size_t>(i)] == 1500.0 + 100.0 * i);
    CHECK(a.beep_freqs.back() == 4000.0);
    CHECK(a.chirp_lo_hz == 900.0);
    CHECK(a.chirp_hi_hz == 1400.0);
    CHECK(a.grunt_bank == std::array<double, 4>{500.0, 600.0, 700.0, 800.0});

    // Grunt combos: six 2-subsets then four 3-subsets, lexicographic.
    REQUIRE(a.grunt_combos[0] == std::vector<int>{0, 1});
    REQUIRE(a.grunt_combos[5] == std::vector<int>{2, 3});
    REQUIRE(a.grunt_combos[6] == std::vector<int>{0, 1, 2});
    REQUIRE(a.grunt_combos[9] == std::vector<int>{1, 2, 3});

    // Bands stay disjoint: grunts < chirp band < beeps.
    CHECK(a.grunt_bank.back() < a.chirp_lo_hz);
    CHECK(a.chirp_hi_hz < a.beep_freqs.front());
}

TEST_CASE("canonical sentence timing and information rate") {
    std::string sentence;
    for (int w = 0; w < 12; ++w) {
        if (w)
            sentence += ' ';
        sentence += "inter";
    }
    sentence += '.';

    SentenceStats stats = r2d2_sentence_stats(sentence);
    CHECK(stats.duration_s == doctest::Approx(9.00).epsilon(0.005));
    CHECK(std::abs(stats.info_bps - 35.5) <= 1.0);

    PcmBuffer audio = r2d2_encode(sentence);
    CHECK(std::abs(audio.duration_s() - 9.00) <= 0.05);
}

TEST_CASE("round trips across the whole alphabet") {
    CHECK(r2d2_decode(r2d2_encode("abcdefghijklmnopqrstuvwxyz")) ==
          "abcdefghijklmnopqrstuvwxyz");
    CHECK(r2d2_decode(r2d2_encode("0123456789")) == "0123456789");
    CHECK(r2d2_decode(r2d2_encode("hello world.")) == "hello world.");
    CHECK(r2d2_decode(r2d2_encode("what, me worry?")) == "what, me worry?");
}

TEST_CASE("random phrases round trip") {
    std::mt19937_64 rng(90);
    for (int trial = 0; trial < 30; ++trial) {
        const std::string s = random_phrase(rng, 3 + rng() % 12);
        CAPTURE(s);
        CHECK(r2d2_decode(r2d2_encode(s)) == s);
    }
}

TEST_CASE("input is lowercased and bad characters are rejected with position") {
    CHECK(r2d2_decode(r2d2_encode("HeLLo")) == "hello");
    try {
        r2d2_encode("ab#cd");
        FAIL("expected invalid_argument");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("2") != std::string::npos);
    }
}

TEST_CASE("decoding survives silence padding and gain changes") {
    const std::string text = "r2d2 says 42.";
    PcmBuffer audio = r2d2_encode(text);

    PcmBuffer padded;
    padded.sample_rate = audio.sample_rate;
    padded.samples.assign(13230, 0.0); // 0.3 s
    padded.samples.insert(padded.samples.end(), audio.samples.begin(),
                          audio.samples.end());
    padded.samples.insert(padded.samples.end(), 13230, 0.0);
    CHECK(r2d2_decode(padded) == text);

    PcmBuffer quiet = audio;
    for (double& s : quiet.samples)
        s *= 0.5;
    CHECK(r2d2_decode(quiet) == text);
}

TEST_CASE("decoding survives mild noise") {
    const std::string text = "noisy channel test.";
    PcmBuffer audio = r2d2_encode(text);
    PcmBuffer noisy = awgn(audio, 25.0, 4242);
    CHECK(r2d2_decode(noisy) == text);
}

TEST_CASE("symbol durations follow the class timing") {
    const R2d2Alphabet& a = R2d2Alphabet::standard();
    CHECK(r2d2_encode("x").duration_s() == doctest::Approx(a.beep_s));
    CHECK(r2d2_encode(" x").duration_s() ==
          doctest::Approx(a.chirp_s + a.beep_s));
    CHECK(r2d2_encode("7").duration_s() == doctest::Approx(a.grunt_s));
}
