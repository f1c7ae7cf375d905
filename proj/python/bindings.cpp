#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dv/channel.hpp"
#include "dv/errors.hpp"
#include "dv/metrics.hpp"
#include "dv/r2d2.hpp"
#include "dv/url_codec.hpp"
#include "dv/voices.hpp"
#include "dv/wav.hpp"

namespace py = pybind11;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

dv::PcmBuffer to_pcm(const DoubleArray& samples, int sample_rate) {
    if (samples.ndim() != 1)
        throw std::invalid_argument("samples must be a one dimensional array");
    dv::PcmBuffer buf;
    buf.sample_rate = sample_rate;
    buf.samples.assign(samples.data(), samples.data() + samples.size());
    return buf;
}

py::array_t<double> from_pcm(const dv::PcmBuffer& buf) {
    py::array_t<double> out(static_cast<py::ssize_t>(buf.size()));
    std::copy(buf.samples.begin(), buf.samples.end(), out.mutable_data());
    return out;
}

dv::Bytes to_bytes(const py::bytes& data) {
    const std::string s = data;
    return dv::Bytes(s.begin(), s.end());
}

py::bytes from_bytes(const dv::Bytes& data) {
    return py::bytes(reinterpret_cast<const char*>(data.data()), data.size());
}

const char* scheme_name(dv::UrlScheme s) {
    switch (s) {
    case dv::UrlScheme::Mailto:
        return "mailto";
    case dv::UrlScheme::Http:
        return "http";
    default:
        return "other";
    }
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "acoustic modem core: data as audible sound";

    const py::object err = py::register_exception<dv::Error>(m, "Error");
    py::register_exception<dv::SyncError>(m, "SyncError", err.ptr());
    py::register_exception<dv::FrameError>(m, "FrameError", err.ptr());
    py::register_exception<dv::DecodeError>(m, "DecodeError", err.ptr());

    m.def("voice_names", &dv::voice_names, "All voice names in display order.");
    m.def("data_rate", &dv::voice_data_rate_bps, py::arg("voice"),
          "Payload data rate of a voice in bits per second.");
    m.def("carries_bytes", &dv::voice_carries_bytes, py::arg("voice"),
          "True when the voice natively transports arbitrary bytes.");

    m.def(
        "encode_bytes",
        [](const std::string& voice, const py::bytes& payload, bool framed,
           int sample_rate) {
            return from_pcm(
                dv::voice_encode_bytes(voice, to_bytes(payload), framed, sample_rate));
        },
        py::arg("voice"), py::arg("payload"), py::arg("framed") = false,
        py::arg("sample_rate") = 44100,
        "Modulate a byte payload; returns float64 samples in [-1, 1].");
    m.def(
        "decode_bytes",
        [](const std::string& voice, const DoubleArray& samples, int sample_rate,
           bool framed) {
            return from_bytes(
                dv::voice_decode_bytes(voice, to_pcm(samples, sample_rate), framed));
        },
        py::arg("voice"), py::arg("samples"), py::arg("sample_rate") = 44100,
        py::arg("framed") = false, "Demodulate samples back to bytes.");
    m.def(
        "encode_text",
        [](const std::string& voice, const std::string& text, bool framed,
           int sample_rate) {
            return from_pcm(dv::voice_encode_text(voice, text, framed, sample_rate));
        },
        py::arg("voice"), py::arg("text"), py::arg("framed") = false,
        py::arg("sample_rate") = 44100, "Modulate text; see encode_bytes.");
    m.def(
        "decode_text",
        [](const std::string& voice, const DoubleArray& samples, int sample_rate,
           bool framed) {
            return dv::voice_decode_text(voice, to_pcm(samples, sample_rate), framed);
        },
        py::arg("voice"), py::arg("samples"), py::arg("sample_rate") = 44100,
        py::arg("framed") = false, "Demodulate samples back to text.");

    m.def(
        "read_wav",
        [](const std::string& path) {
            const dv::PcmBuffer buf = dv::read_wav(path);
            return py::make_tuple(from_pcm(buf), buf.sample_rate);
        },
        py::arg("path"), "Read a mono 16-bit WAV; returns (samples, sample_rate).");
    m.def(
        "write_wav",
        [](const std::string& path, const DoubleArray& samples, int sample_rate) {
            dv::write_wav(path, to_pcm(samples, sample_rate));
        },
        py::arg("path"), py::arg("samples"), py::arg("sample_rate") = 44100,
        "Write samples as a mono 16-bit WAV.");

    m.def(
        "apply_channel",
        [](const DoubleArray& samples, int sample_rate,
           const std::optional<double>& snr_db, const std::vector<double>& notches,
           double gain, double clip, std::uint64_t seed) {
            dv::ChannelSpec spec;
            spec.snr_db = snr_db;
            spec.notches = notches;
            spec.gain = gain;
            spec.clip = clip;
            spec.seed = seed;
            return from_pcm(dv::apply_channel(spec, to_pcm(samples, sample_rate)));
        },
        py::arg("samples"), py::arg("sample_rate") = 44100,
        py::arg("snr_db") = py::none(), py::arg("notches") = std::vector<double>{},
        py::arg("gain") = 1.0, py::arg("clip") = 1.0, py::arg("seed") = 0,
        "Run samples through the simulated channel (notches, gain, noise, clip).");
    m.def(
        "awgn",
        [](const DoubleArray& samples, int sample_rate, double snr_db,
           std::uint64_t seed) {
            return from_pcm(dv::awgn(to_pcm(samples, sample_rate), snr_db, seed));
        },
        py::arg("samples"), py::arg("sample_rate"), py::arg("snr_db"), py::arg("seed"),
        "Add white gaussian noise at the given SNR relative to the input power.");

    m.def(
        "sweep_ber",
        [](const std::string& voice, const std::vector<double>& snr_db, int trials,
           std::size_t payload_bytes, std::uint64_t seed) {
            py::list rows;
            for (const dv::SweepRow& r :
                 dv::sweep_ber(voice, snr_db, trials, payload_bytes, seed)) {
                py::dict d;
                d["snr_db"] = r.snr_db;
                d["trials"] = r.trials;
                d["total_bits"] = r.total_bits;
                d["bit_errors"] = r.bit_errors;
                d["ber"] = r.ber;
                d["mean_decode_status"] = r.mean_decode_status;
                rows.append(d);
            }
            return rows;
        },
        py::arg("voice"), py::arg("snr_db"), py::arg("trials") = 50,
        py::arg("payload_bytes") = 32, py::arg("seed") = 0,
        "Monte-Carlo bit error rate sweep; returns one dict per SNR point.");
    m.def("phoneme_rate", &dv::phoneme_rate, py::arg("num_phonemes"),
          py::arg("phonemes_per_s"),
          "Information rate of an n-symbol stream at a given symbol rate.");

    m.def(
        "classify_scheme",
        [](const std::string& url) { return scheme_name(dv::classify_scheme(url)); },
        py::arg("url"), "Scheme of a url string: 'http', 'mailto' or 'other'.");
    m.def(
        "classify_audio",
        [](const DoubleArray& samples, int sample_rate) {
            return scheme_name(dv::url_classify_audio(to_pcm(samples, sample_rate)));
        },
        py::arg("samples"), py::arg("sample_rate") = 44100,
        "Scheme of an encoded url from band energy alone, without decoding.");
    m.def(
        "compressed_url_bits",
        [](const std::string& url) { return dv::url_compress(url).size(); },
        py::arg("url"), "Length of the dictionary-compressed url in bits.");

    m.def(
        "sentence_stats",
        [](const std::string& text) {
            const dv::SentenceStats s = dv::r2d2_sentence_stats(text);
            return py::make_tuple(s.duration_s, s.info_bps);
        },
        py::arg("text"),
        "R2d2 sentence (duration_s, information_bps) without synthesizing audio.");
}
