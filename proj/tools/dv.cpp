#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dv/channel.hpp"
#include "dv/cricket.hpp"
#include "dv/errors.hpp"
#include "dv/metrics.hpp"
#include "dv/modem.hpp"
#include "dv/r2d2.hpp"
#include "dv/url_codec.hpp"
#include "dv/voices.hpp"
#include "dv/wav.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw dv::Error("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& data) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f)
        throw dv::Error("cannot open '" + path + "' for writing");
    f.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!f)
        throw dv::Error("write to '" + path + "' failed");
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

// "LO:HI:STEP" inclusive, or a single value.
std::vector<double> parse_snr_range(const std::string& token) {
    std::vector<double> parts;
    std::stringstream ss(token);
    std::string piece;
    while (std::getline(ss, piece, ':')) {
        try {
            parts.push_back(std::stod(piece));
        } catch (const std::exception&) {
            throw dv::Error("bad --snr range piece '" + piece + "'");
        }
    }
    if (parts.size() == 1)
        return parts;
    if (parts.size() != 3)
        throw dv::Error("--snr expects LO:HI:STEP or a single value");
    const double lo = parts[0], hi = parts[1], step = parts[2];
    if (!(step > 0.0))
        throw dv::Error("--snr step must be positive");
    std::vector<double> out;
    for (double v = lo; v <= hi + 1e-9; v += step)
        out.push_back(v);
    if (out.empty())
        throw dv::Error("--snr range is empty");
    return out;
}

struct EncodeArgs {
    std::string voice;
    std::string in_path;
    std::string text;
    bool text_set = false;
    std::string out_path;
    bool framed = false;
    int sample_rate = 44100;
};

int run_encode(const EncodeArgs& a) {
    dv::PcmBuffer buf;
    if (dv::voice_carries_bytes(a.voice)) {
        dv::Bytes payload;
        if (a.text_set) {
            payload.assign(a.text.begin(), a.text.end());
        } else {
            const std::string raw = read_file(a.in_path);
            payload.assign(raw.begin(), raw.end());
        }
        buf = dv::voice_encode_bytes(a.voice, payload, a.framed, a.sample_rate);
    } else {
        std::string text = a.text_set ? a.text : read_file(a.in_path);
        // Text files usually end in a newline no voice alphabet carries.
        while (!a.text_set && !text.empty() &&
               (text.back() == '\n' || text.back() == '\r'))
            text.pop_back();
        buf = dv::voice_encode_text(a.voice, text, a.framed, a.sample_rate);
    }
    dv::write_wav(a.out_path, buf);
    std::cerr << a.out_path << ": " << fmt(buf.duration_s()) << " s at "
              << buf.sample_rate << " Hz\n";
    return 0;
}

struct DecodeArgs {
    std::string voice;
    std::string in_path;
    bool framed = false;
};

int run_decode(const DecodeArgs& a) {
    const dv::PcmBuffer buf = dv::read_wav(a.in_path);
    if (dv::voice_carries_bytes(a.voice)) {
        const dv::Bytes payload = dv::voice_decode_bytes(a.voice, buf, a.framed);
        std::fwrite(payload.data(), 1, payload.size(), stdout);
    } else {
        const std::string text = dv::voice_decode_text(a.voice, buf, a.framed);
        std::fwrite(text.data(), 1, text.size(), stdout);
        std::fputc('\n', stdout);
    }
    std::fflush(stdout);
    return 0;
}

struct SimulateArgs {
    std::string in_path;
    std::string out_path;
    double snr_db = 0.0;
    bool snr_set = false;
    std::vector<double> notches;
    double gain = 1.0;
    bool gain_set = false;
    double clip = 1.0;
    bool clip_set = false;
    std::string channel_file;
    std::uint64_t seed = 0;
};

int run_simulate(const SimulateArgs& a) {
    dv::ChannelSpec spec;
    if (!a.channel_file.empty())
        spec = dv::parse_channel_spec(read_file(a.channel_file));
    if (a.snr_set)
        spec.snr_db = a.snr_db;
    for (double n : a.notches)
        spec.notches.push_back(n);
    if (a.gain_set)
        spec.gain = a.gain;
    if (a.clip_set)
        spec.clip = a.clip;
    spec.seed = a.seed;

    const dv::PcmBuffer in = dv::read_wav(a.in_path);
    const dv::PcmBuffer out = dv::apply_channel(spec, in);
    dv::write_wav(a.out_path, out);
    return 0;
}

struct SweepArgs {
    std::string voice;
    std::string snr_range;
    int trials = 50;
    std::size_t payload_bytes = 32;
    std::uint64_t seed = 0;
    std::string csv_path;
};

int run_sweep(const SweepArgs& a) {
    const std::vector<double> snrs = parse_snr_range(a.snr_range);
    const auto rows =
        dv::sweep_ber(a.voice, snrs, a.trials, a.payload_bytes, a.seed);
    const std::string csv = dv::sweep_to_csv(rows);
    write_file(a.csv_path, csv);
    std::cerr << a.csv_path << ": " << rows.size() << " rows\n";
    return 0;
}

void print_bank_law(const std::vector<double>& tones) {
    if (tones.size() <= 8) {
        std::string line;
        for (double t : tones) {
            if (!line.empty())
                line += ", ";
            line += fmt(t);
        }
        std::cout << "tones_hz: " << line << "\n";
        return;
    }
    const double base = tones.front();
    const double step = tones[1] - tones[0];
    std::cout << "tones_hz: " << fmt(base) << " + " << fmt(step) << "*k, k=0.."
              << tones.size() - 1 << " (" << fmt(tones.front()) << ".."
              << fmt(tones.back()) << ")\n";
}

void print_modem_info(const std::string& name) {
    const dv::ModemConfig cfg = dv::modem_preset(name);
    if (std::holds_alternative<dv::AskConfig>(cfg)) {
        const auto& c = std::get<dv::AskConfig>(cfg);
        std::cout << "voice: " << name << "\nmodulation: multi-tone binary ASK\n";
        print_bank_law(c.tones);
        std::cout << "symbol_s: " << fmt(c.symbol_s) << "\n"
                  << "bits_per_symbol: " << c.bits_per_symbol() << "\n"
                  << "data_rate_bps: " << fmt(c.data_rate_bps()) << "\n";
    } else {
        const auto& c = std::get<dv::FskConfig>(cfg);
        std::cout << "voice: " << name << "\nmodulation: " << c.tones.size()
                  << "-ary FSK\n";
        print_bank_law(c.tones);
        std::cout << "symbol_s: " << fmt(c.symbol_s) << "\n"
                  << "bits_per_symbol: " << c.bits_per_symbol() << "\n"
                  << "data_rate_bps: " << fmt(c.data_rate_bps()) << "\n";
    }
}

void print_r2d2_info() {
    const auto& a = dv::R2d2Alphabet::standard();
    std::cout << "voice: r2d2\nalphabet: 40 symbols (26 beeps, 4 chirps, 10 grunts)\n";
    std::cout << "beeps (" << fmt(a.beep_s) << " s):\n";
    for (int i = 0; i < 26; ++i)
        std::cout << "  " << static_cast<char>('a' + i) << "  "
                  << fmt(a.beep_freqs[static_cast<std::size_t>(i)]) << " Hz\n";
    std::cout << "chirps (" << fmt(a.chirp_s) << " s, " << fmt(a.chirp_lo_hz)
              << ".." << fmt(a.chirp_hi_hz) << " Hz):\n"
              << "  ' '  up\n  .  down\n  ,  up-down\n  ?  down-up\n";
    std::cout << "grunts (" << fmt(a.grunt_s) << " s, bank";
    for (double f : a.grunt_bank)
        std::cout << " " << fmt(f);
    std::cout << " Hz):\n";
    for (int d = 0; d < 10; ++d) {
        std::cout << "  " << d << "  tones";
        for (int idx : a.grunt_combos[static_cast<std::size_t>(d)])
            std::cout << " " << fmt(a.grunt_bank[static_cast<std::size_t>(idx)]);
        std::cout << " Hz\n";
    }
    std::cout << "data_rate_bps: " << fmt(dv::voice_data_rate_bps("r2d2"))
              << " (12-word sentence)\n";
}

void print_cricket_info() {
    const auto c = dv::CricketConfig::standard();
    std::cout << "voice: cricket\nmodulation: triad onset slot + amplitude level\n"
              << "carrier_hz: " << fmt(c.carrier_hz) << "\n"
              << "beep_s: " << fmt(c.beep_s) << ", gap_s: " << fmt(c.gap_s)
              << ", period_s: " << fmt(c.period_s) << "\n"
              << "slots: " << c.num_slots << ", levels:";
    for (double l : c.amp_levels)
        std::cout << " " << fmt(l);
    std::cout << "\nbits_per_symbol: 5\n"
              << "data_rate_bps: " << fmt(c.data_rate_bps()) << "\n";
}

void print_url_info() {
    std::cout << "voice: url\nmodulation: 8-tone binary ASK, band keyed by scheme\n";
    std::cout << "mailto_band_hz:";
    for (double t : dv::url_band(dv::UrlScheme::Mailto))
        std::cout << " " << fmt(t);
    std::cout << "\nhttp_band_hz:";
    for (double t : dv::url_band(dv::UrlScheme::Http))
        std::cout << " " << fmt(t);
    std::cout << "\nsymbol_s: " << fmt(dv::kUrlSymbolS) << "\n"
              << "bits_per_symbol: 8\n"
              << "data_rate_bps: " << fmt(dv::voice_data_rate_bps("url")) << "\n"
              << "dictionary_entries: "
              << dv::UrlDictionary::standard().entries.size() << "\n";
}

int run_info(const std::string& voice) {
    if (voice.empty()) {
        for (const auto& v : dv::voice_names())
            std::cout << v << "  " << fmt(dv::voice_data_rate_bps(v)) << " bps\n";
        return 0;
    }
    if (voice == "r2d2")
        print_r2d2_info();
    else if (voice == "cricket")
        print_cricket_info();
    else if (voice == "url")
        print_url_info();
    else
        print_modem_info(voice);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"acoustic modem: data as audible sound in WAV files"};
    app.require_subcommand(1);

    EncodeArgs enc;
    auto* encode = app.add_subcommand("encode", "payload/text -> WAV");
    encode->add_option("--voice", enc.voice, "voice name")->required();
    auto* enc_in = encode->add_option("--in", enc.in_path, "payload file");
    auto* enc_text = encode->add_option("--text", enc.text, "literal payload text");
    encode->add_option("--out", enc.out_path, "output WAV path")->required();
    encode->add_flag("--framed", enc.framed, "wrap in preamble + length/CRC frame");
    encode->add_option("--sample-rate", enc.sample_rate, "output sample rate")
        ->default_val(44100);
    enc_in->excludes(enc_text);

    DecodeArgs dec;
    auto* decode = app.add_subcommand("decode", "WAV -> payload on stdout");
    decode->add_option("--voice", dec.voice, "voice name")->required();
    decode->add_option("--in", dec.in_path, "input WAV path")->required();
    decode->add_flag("--framed", dec.framed, "expect preamble + frame");

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "push a WAV through the channel");
    simulate->add_option("--in", sim.in_path, "input WAV path")->required();
    simulate->add_option("--out", sim.out_path, "output WAV path")->required();
    auto* sim_snr = simulate->add_option("--snr", sim.snr_db, "SNR in dB");
    simulate->add_option("--notch", sim.notches, "notch center Hz (repeatable)");
    auto* sim_gain = simulate->add_option("--gain", sim.gain, "scalar gain");
    auto* sim_clip = simulate->add_option("--clip", sim.clip, "hard clip level");
    simulate->add_option("--channel", sim.channel_file, "channel spec file");
    simulate->add_option("--seed", sim.seed, "noise seed")->required();

    SweepArgs swp;
    auto* sweep = app.add_subcommand("sweep", "BER vs SNR Monte Carlo");
    sweep->add_option("--voice", swp.voice, "byte voice name")->required();
    sweep->add_option("--snr", swp.snr_range, "LO:HI:STEP in dB")->required();
    sweep->add_option("--trials", swp.trials, "trials per SNR")->default_val(50);
    sweep->add_option("--payload-bytes", swp.payload_bytes, "payload size")
        ->default_val(32);
    sweep->add_option("--seed", swp.seed, "base seed")->required();
    sweep->add_option("--csv", swp.csv_path, "output CSV path")->required();

    std::string info_voice;
    auto* info = app.add_subcommand("info", "voice parameters and rates");
    info->add_option("--voice", info_voice, "voice name (omit to list all)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (encode->parsed()) {
            if (enc_in->count() == 0 && enc_text->count() == 0)
                throw dv::Error("encode needs --in or --text");
            enc.text_set = enc_text->count() > 0;
            return run_encode(enc);
        }
        if (decode->parsed())
            return run_decode(dec);
        if (simulate->parsed()) {
            sim.snr_set = sim_snr->count() > 0;
            sim.gain_set = sim_gain->count() > 0;
            sim.clip_set = sim_clip->count() > 0;
            return run_simulate(sim);
        }
        if (sweep->parsed())
            return run_sweep(swp);
        if (info->parsed())
            return run_info(info_voice);
    } catch (const dv::SyncError& e) {
        std::cerr << "sync error: " << e.what() << "\n";
        return 2;
    } catch (const dv::FrameError& e) {
        std::cerr << "frame error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
