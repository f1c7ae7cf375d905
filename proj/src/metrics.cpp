#include "dv/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <stdexcept>

#include "dv/channel.hpp"
#include "dv/errors.hpp"
#include "dv/framing.hpp"
#include "dv/voices.hpp"

namespace dv {

namespace {

// Offset between the payload RNG stream and the channel noise seed so the
// two never collide for nearby trial indices.
constexpr std::uint64_t kNoiseSeedGamma = 0x9E3779B97F4A7C15ULL;

std::string format_double(double v) {
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

} // namespace

double phoneme_rate(int num_phonemes, double phonemes_per_s) {
    if (num_phonemes < 2)
        throw std::invalid_argument("phoneme_rate: need at least 2 symbols");
    if (!(phonemes_per_s > 0.0))
        throw std::invalid_argument("phoneme_rate: rate must be positive");
    return std::log2(static_cast<double>(num_phonemes)) * phonemes_per_s;
}

double bit_error_rate(const BitString& sent, const BitString& received) {
    if (sent.size() != received.size())
        throw std::invalid_argument("bit_error_rate: length mismatch (" +
                                    std::to_string(sent.size()) + " vs " +
                                    std::to_string(received.size()) + ")");
    if (sent.empty())
        throw std::invalid_argument("bit_error_rate: empty bit strings");
    std::size_t errors = 0;
    for (std::size_t i = 0; i < sent.size(); ++i)
        if ((sent[i] != 0) != (received[i] != 0))
            ++errors;
    return static_cast<double>(errors) / static_cast<double>(sent.size());
}

double throughput(std::size_t payload_bits, double audio_duration_s) {
    if (!(audio_duration_s > 0.0))
        throw std::invalid_argument("throughput: duration must be positive");
    return static_cast<double>(payload_bits) / audio_duration_s;
}

std::vector<SweepRow> sweep_ber(const std::string& voice,
                                const std::vector<double>& snr_db_list,
                                int trials, std::size_t payload_bytes,
                                std::uint64_t seed) {
    if (!voice_carries_bytes(voice))
        throw std::invalid_argument("sweep_ber: voice '" + voice +
                                    "' does not carry byte payloads");
    if (trials < 1)
        throw std::invalid_argument("sweep_ber: need at least one trial");
    if (payload_bytes == 0)
        throw std::invalid_argument("sweep_ber: empty payload");

    std::vector<SweepRow> rows;
    rows.reserve(snr_db_list.size());
    for (std::size_t si = 0; si < snr_db_list.size(); ++si) {
        SweepRow row;
        row.snr_db = snr_db_list[si];
        row.trials = trials;
        int successes = 0;

        for (int ti = 0; ti < trials; ++ti) {
            const std::uint64_t trial_seed =
                seed ^ (static_cast<std::uint64_t>(si) * 1000000ULL +
                        static_cast<std::uint64_t>(ti));
            std::mt19937_64 rng(trial_seed);
            Bytes payload(payload_bytes);
            for (auto& b : payload)
                b = static_cast<std::uint8_t>(rng() & 0xFF);

            const PcmBuffer clean = voice_encode_bytes(voice, payload, true);
            ChannelSpec spec;
            spec.snr_db = row.snr_db;
            spec.seed = trial_seed + kNoiseSeedGamma;
            const PcmBuffer received = apply_channel(spec, clean);

            const Bytes frame = build_frame(payload);
            const BitString sent_bits = bytes_to_bits(frame);
            BitString got_bits;
            try {
                got_bits = voice_demod_frame_bits(voice, received, frame.size());
            } catch (const SyncError&) {
                continue; // no alignment, no measurable bits
            } catch (const FrameError&) {
                continue; // synced too close to the end to demodulate
            }

            row.total_bits += sent_bits.size();
            for (std::size_t i = 0; i < sent_bits.size(); ++i)
                if ((sent_bits[i] != 0) != (got_bits[i] != 0))
                    ++row.bit_errors;

            try {
                if (parse_frame(bits_to_bytes(got_bits)) == payload)
                    ++successes;
            } catch (const FrameError&) {
                // corrupted frame: counted in BER, not in decode status
            }
        }

        row.ber = row.total_bits == 0
                      ? 0.0
                      : static_cast<double>(row.bit_errors) /
                            static_cast<double>(row.total_bits);
        row.mean_decode_status =
            static_cast<double>(successes) / static_cast<double>(trials);
        rows.push_back(row);
    }
    return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
    std::string out = "snr_db,trials,total_bits,bit_errors,ber,mean_decode_status\n";
    for (const auto& r : rows) {
        out += format_double(r.snr_db);
        out += ',';
        out += std::to_string(r.trials);
        out += ',';
        out += std::to_string(r.total_bits);
        out += ',';
        out += std::to_string(r.bit_errors);
        out += ',';
        out += format_double(r.ber);
        out += ',';
        out += format_double(r.mean_decode_status);
        out += '\n';
    }
    return out;
}

} // namespace dv
