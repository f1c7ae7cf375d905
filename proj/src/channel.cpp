#include "dv/channel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "dv/errors.hpp"

namespace dv {

namespace {

// Linear-phase FIR length for the response/notch filter. 8191 taps at
// 44.1 kHz gives a ~5.4 Hz design grid and a main lobe narrow enough that a
// +/-30 Hz notch reaches its floor at the center while tones 100 Hz away
// stay within a fraction of a dB.
constexpr std::size_t kFirLength = 8191;

double interp_response(const std::vector<std::pair<double, double>>& points, double f) {
    if (points.empty())
        return 1.0;
    if (f <= points.front().first)
        return points.front().second;
    if (f >= points.back().first)
        return points.back().second;
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (f <= points[i].first) {
            const auto& [f0, g0] = points[i - 1];
            const auto& [f1, g1] = points[i];
            const double t = (f - f0) / (f1 - f0);
            return g0 + t * (g1 - g0);
        }
    }
    return points.back().second;
}

double desired_gain(const ChannelSpec& spec, double f) {
    double g = interp_response(spec.response, f);
    for (double c : spec.notches)
        if (std::abs(f - c) <= kNotchHalfWidthHz)
            g = std::min(g, kNotchGain);
    return g;
}

// Frequency-sampled linear-phase FIR, Blackman-Harris windowed. Symmetric
// around (L-1)/2, so only half the taps are computed directly.
std::vector<double> design_fir(const ChannelSpec& spec, int sample_rate) {
    const std::size_t L = kFirLength;
    const std::size_t D = (L - 1) / 2;
    std::vector<double> gains(D + 1);
    for (std::size_t k = 0; k <= D; ++k)
        gains[k] = desired_gain(spec, static_cast<double>(k) * sample_rate / static_cast<double>(L));

    std::vector<double> h(L);
    for (std::size_t d = 0; d <= D; ++d) {
        // sum over grid points with a complex-exponential recurrence; one
        // trig call per tap instead of one per (tap, bin).
        const double alpha = 2.0 * std::numbers::pi * static_cast<double>(d) / static_cast<double>(L);
        const std::complex<double> step{std::cos(alpha), std::sin(alpha)};
        std::complex<double> z{1.0, 0.0};
        double acc = gains[0];
        for (std::size_t k = 1; k <= D; ++k) {
            z *= step;
            acc += 2.0 * gains[k] * z.real();
        }
        const double v = acc / static_cast<double>(L);
        h[D + d] = v;
        h[D - d] = v;
    }

    for (std::size_t m = 0; m < L; ++m) {
        const double x = 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(L - 1);
        const double w = 0.35875 - 0.48829 * std::cos(x) + 0.14128 * std::cos(2.0 * x) -
                         0.01168 * std::cos(3.0 * x);
        h[m] *= w;
    }
    return h;
}

// Delay-compensated convolution: output aligned with input, same length.
PcmBuffer convolve_fir(const PcmBuffer& in, const std::vector<double>& h) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(in.size());
    const std::ptrdiff_t L = static_cast<std::ptrdiff_t>(h.size());
    const std::ptrdiff_t D = (L - 1) / 2;
    PcmBuffer out;
    out.sample_rate = in.sample_rate;
    out.samples.assign(in.size(), 0.0);
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const std::ptrdiff_t center = i + D;
        const std::ptrdiff_t m_lo = std::max<std::ptrdiff_t>(0, center - n + 1);
        const std::ptrdiff_t m_hi = std::min<std::ptrdiff_t>(L - 1, center);
        double acc = 0.0;
        const double* x = in.samples.data();
        for (std::ptrdiff_t m = m_lo; m <= m_hi; ++m)
            acc += h[static_cast<std::size_t>(m)] * x[center - m];
        out.samples[static_cast<std::size_t>(i)] = acc;
    }
    return out;
}

void check_spec(const ChannelSpec& spec) {
    double prev = -1.0;
    for (const auto& [f, g] : spec.response) {
        if (f < 0.0 || g < 0.0)
            throw std::invalid_argument("channel: response points need freq >= 0 and gain >= 0");
        if (f <= prev)
            throw std::invalid_argument("channel: response points must be sorted by frequency");
        prev = f;
    }
    for (double c : spec.notches)
        if (!(c > 0.0))
            throw std::invalid_argument("channel: notch frequency must be positive");
    if (!(spec.gain >= 0.0))
        throw std::invalid_argument("channel: gain must be non-negative");
    if (!(spec.clip > 0.0) || spec.clip > 1.0)
        throw std::invalid_argument("channel: clip must lie in (0, 1]");
}

} // namespace

PcmBuffer awgn(const PcmBuffer& buf, double snr_db, std::uint64_t seed) {
    if (std::isinf(snr_db))
        return buf;
    double power = 0.0;
    for (double s : buf.samples)
        power += s * s;
    if (!(power > 0.0))
        throw std::invalid_argument("awgn: all-zero input with finite SNR");
    power /= static_cast<double>(buf.size());
    const double sigma = std::sqrt(power / std::pow(10.0, snr_db / 10.0));

    // Box-Muller on raw mt19937_64 output; bit-reproducible everywhere,
    // unlike std::normal_distribution.
    std::mt19937_64 rng(seed);
    auto uniform = [&rng]() {
        double u;
        do {
            u = static_cast<double>(rng() >> 11) * 0x1p-53;
        } while (u <= 0.0);
        return u;
    };
    PcmBuffer out = buf;
    double cached = 0.0;
    bool have_cached = false;
    for (double& s : out.samples) {
        double z;
        if (have_cached) {
            z = cached;
            have_cached = false;
        } else {
            const double r = std::sqrt(-2.0 * std::log(uniform()));
            const double th = 2.0 * std::numbers::pi * uniform();
            z = r * std::cos(th);
            cached = r * std::sin(th);
            have_cached = true;
        }
        s += sigma * z;
    }
    return out;
}

PcmBuffer apply_channel(const ChannelSpec& spec, const PcmBuffer& buf) {
    check_spec(spec);
    if (buf.sample_rate <= 0)
        throw std::invalid_argument("channel: non-positive sample rate");

    PcmBuffer y = buf;
    if (!spec.response.empty() || !spec.notches.empty())
        y = convolve_fir(y, design_fir(spec, buf.sample_rate));
    if (spec.gain != 1.0)
        for (double& s : y.samples)
            s *= spec.gain;
    if (spec.snr_db && !std::isinf(*spec.snr_db))
        y = awgn(y, *spec.snr_db, spec.seed);
    for (double& s : y.samples)
        s = std::clamp(s, -spec.clip, spec.clip);
    return y;
}

ChannelSpec parse_channel_spec(const std::string& text) {
    ChannelSpec spec;
    std::istringstream in(text);
    std::string line;
    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        const auto b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#')
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("channel spec: expected key=value, got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "snr_db") {
                spec.snr_db = std::stod(value);
            } else if (key == "gain") {
                spec.gain = std::stod(value);
            } else if (key == "clip") {
                spec.clip = std::stod(value);
            } else if (key == "seed") {
                spec.seed = std::stoull(value);
            } else if (key == "notch") {
                std::istringstream vs(value);
                std::string item;
                while (std::getline(vs, item, ','))
                    spec.notches.push_back(std::stod(trim(item)));
            } else if (key == "response") {
                std::istringstream vs(value);
                std::string item;
                while (std::getline(vs, item, ',')) {
                    item = trim(item);
                    const auto colon = item.find(':');
                    if (colon == std::string::npos)
                        throw std::invalid_argument("channel spec: response point needs freq:gain");
                    spec.response.emplace_back(std::stod(item.substr(0, colon)),
                                               std::stod(item.substr(colon + 1)));
                }
            } else {
                throw std::invalid_argument("channel spec: unknown key '" + key + "'");
            }
        } catch (const std::invalid_argument&) {
            throw;
        } catch (const std::exception&) {
            throw std::invalid_argument("channel spec: bad value for '" + key + "'");
        }
    }
    check_spec(spec);
    return spec;
}

std::string format_channel_spec(const ChannelSpec& spec) {
    std::ostringstream out;
    if (spec.snr_db)
        out << "snr_db=" << *spec.snr_db << "\n";
    if (!spec.response.empty()) {
        out << "response=";
        for (std::size_t i = 0; i < spec.response.size(); ++i) {
            if (i)
                out << ",";
            out << spec.response[i].first << ":" << spec.response[i].second;
        }
        out << "\n";
    }
    for (double c : spec.notches)
        out << "notch=" << c << "\n";
    out << "gain=" << spec.gain << "\n";
    out << "clip=" << spec.clip << "\n";
    out << "seed=" << spec.seed << "\n";
    return out.str();
}

} // namespace dv
