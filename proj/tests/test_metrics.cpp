#include <cmath>
#include <limits>
#include <stdexcept>

#include "doctest.h"
#include "dv/metrics.hpp"
#include "dv/modem.hpp"
#include "dv/voices.hpp"

using namespace dv;

TEST_CASE("phoneme rate model") {
    // 40 distinguishable sounds at 10 per second.
    const double r = phoneme_rate(40, 10.0);
    CHECK(r == doctest::Approx(53.2).epsilon(0.001));
    CHECK(std::lround(r) == 53);

    // 256 symbols at 50 per second lands exactly on the fsk256 channel rate.
    CHECK(phoneme_rate(256, 50.0) == doctest::Approx(400.0));
    CHECK(phoneme_rate(256, 50.0) ==
          doctest::Approx(data_rate_bps(modem_preset("fsk256"))));

    CHECK_THROWS_AS(phoneme_rate(1, 10.0), std::invalid_argument);
    CHECK_THROWS_AS(phoneme_rate(40, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(phoneme_rate(40, -1.0), std::invalid_argument);
}

TEST_CASE("bit error rate arithmetic") {
    BitString a = {1, 0, 1, 1, 0, 0, 1, 0};
    BitString b = {1, 0, 0, 1, 0, 1, 1, 0};
    CHECK(bit_error_rate(a, a) == 0.0);
    CHECK(bit_error_rate(a, b) == doctest::Approx(0.25));
    CHECK_THROWS_AS(bit_error_rate(a, BitString{1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(bit_error_rate({}, {}), std::invalid_argument);
}

TEST_CASE("throughput on emitted waveforms") {
    CHECK(throughput(800, 2.0) == doctest::Approx(400.0));
    CHECK_THROWS_AS(throughput(800, 0.0), std::invalid_argument);

    // fsk256: 100 bytes of unframed payload must take 2.0 s.
    PcmBuffer buf = voice_encode_bytes("fsk256", Bytes(100, 0xA5), false);
    CHECK(buf.duration_s() == doctest::Approx(2.0));
    CHECK(throughput(800, buf.duration_s()) == doctest::Approx(400.0).epsilon(0.001));
}

TEST_CASE("sweeps are reproducible and sane") {
    const std::vector<double> snrs = {0.0, 30.0};
    const auto rows = sweep_ber("fsk256", snrs, 4, 16, 99);
    const auto again = sweep_ber("fsk256", snrs, 4, 16, 99);
    REQUIRE(rows.size() == 2);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].snr_db == snrs[i]);
        CHECK(rows[i].trials == 4);
        CHECK(rows[i].total_bits == again[i].total_bits);
        CHECK(rows[i].bit_errors == again[i].bit_errors);
        CHECK(rows[i].ber == again[i].ber);
    }
    // 16-byte payload -> 20-byte frame -> 160 bits per trial.
    CHECK(rows[1].total_bits == 4 * 160);
    CHECK(rows[1].ber == 0.0);
    CHECK(rows[1].mean_decode_status == 1.0);
    CHECK(rows[0].ber >= rows[1].ber);

    CHECK_THROWS_AS(sweep_ber("r2d2", snrs, 4, 16, 99), std::invalid_argument);
    CHECK_THROWS_AS(sweep_ber("url", snrs, 4, 16, 99), std::invalid_argument);
    CHECK_THROWS_AS(sweep_ber("fsk256", snrs, 0, 16, 99), std::invalid_argument);
    CHECK_THROWS_AS(sweep_ber("fsk256", snrs, 4, 0, 99), std::invalid_argument);
}

TEST_CASE("csv formatting") {
    SweepRow row;
    row.snr_db = 12.5;
    row.trials = 50;
    row.total_bits = 8000;
    row.bit_errors = 4;
    row.ber = 0.0005;
    row.mean_decode_status = 0.98;

    SweepRow clean;
    clean.snr_db = std::numeric_limits<double>::infinity();
    clean.trials = 2;
    clean.total_bits = 320;
    clean.bit_errors = 0;
    clean.ber = 0.0;
    clean.mean_decode_status = 1.0;

    const std::string csv = sweep_to_csv({row, clean});
    CHECK(csv ==
          "snr_db,trials,total_bits,bit_errors,ber,mean_decode_status\n"
          "12.5,50,8000,4,0.0005,0.98\n"
          "inf,2,320,0,0,1\n");
}
