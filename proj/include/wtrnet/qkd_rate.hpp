#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "wtrnet/error.hpp"

namespace wtrnet {

struct QkdSystemParams {
    std::string name = "custom";
    double mu = 0.5;          // mean photon number of the signal state
    double eta_det = 0.1;     // detector efficiency
    double y0 = 1e-5;         // background yield per gate
    double e_det = 0.01;      // intrinsic misalignment error
    double f = 1.22;          // error-correction inefficiency
    double q_sift = 0.5;      // sifting factor
    double alpha = 0.25;      // fiber attenuation, dB/km (informational)

    friend bool operator==(const QkdSystemParams&, const QkdSystemParams&) = default;
};

inline void validate(const QkdSystemParams& p) {
    auto prob = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!(p.mu > 0.0) || !prob(p.eta_det) || !prob(p.y0) || !prob(p.q_sift) || !(p.f >= 1.0) ||
        !(p.e_det >= 0.0 && p.e_det <= 0.5) || !(p.alpha >= 0.0))
        throw Error(Errc::invalid_config, "QKD parameters out of range for preset '" + p.name + "'");
}

/// Built-in device presets. Only Y0 and alpha are pinned by the published
/// comparison; the rest follow the experiments those systems come from and
/// are mirrored in data/presets/*.conf.
inline QkdSystemParams preset(std::string_view name) {
    if (name == "gys") return {"gys", 0.48, 0.045, 1.7e-6, 0.033, 1.22, 0.5, 0.21};
    if (name == "clavis") return {"clavis", 0.2, 0.10, 2e-5, 0.04, 1.22, 0.5, 0.25};
    throw Error(Errc::unknown_preset, "no preset '" + std::string(name) + "'");
}

/// Parses `key = value` lines; `#` starts a comment. Unset keys keep defaults.
inline QkdSystemParams parse_params(std::istream& in, QkdSystemParams p = {}) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string::npos) return std::string{};
            return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
        };
        if (trim(line).empty()) continue;
        if (eq == std::string::npos)
            throw Error(Errc::parse_error, "line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key == "name") {
            p.name = val;
            continue;
        }
        double v = 0.0;
        try {
            std::size_t used = 0;
            v = std::stod(val, &used);
            if (used != val.size()) throw std::invalid_argument(val);
        } catch (const std::exception&) {
            throw Error(Errc::parse_error, "line " + std::to_string(lineno) + ": bad number '" + val + "'");
        }
        if (key == "mu") p.mu = v;
        else if (key == "eta_det") p.eta_det = v;
        else if (key == "y0") p.y0 = v;
        else if (key == "e_det") p.e_det = v;
        else if (key == "f") p.f = v;
        else if (key == "q_sift") p.q_sift = v;
        else if (key == "alpha") p.alpha = v;
        else throw Error(Errc::parse_error, "line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    validate(p);
    return p;
}

inline QkdSystemParams load_params(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::parse_error, "cannot open '" + path + "'");
    return parse_params(in);
}

/// Accepts a preset name or a path to a key=value file.
inline QkdSystemParams resolve_params(const std::string& name_or_path) {
    if (name_or_path == "gys" || name_or_path == "clavis") return preset(name_or_path);
    if (name_or_path.find('/') != std::string::npos || name_or_path.find('.') != std::string::npos)
        return load_params(name_or_path);
    return preset(name_or_path);
}

inline double binary_entropy(double p) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

struct ChannelStats {
    double eta = 0.0;
    double q_mu = 0.0;
    double e_mu = 0.0;
    double q1 = 0.0;
    double e1 = 0.0;
};

inline constexpr double background_error = 0.5;

inline ChannelStats channel_stats(const QkdSystemParams& p, double loss_db) {
    if (!(loss_db >= 0.0)) throw Error(Errc::invalid_loss, "loss must be non-negative");
    ChannelStats s;
    s.eta = p.eta_det * std::pow(10.0, -loss_db / 10.0);
    const double signal = -std::expm1(-s.eta * p.mu);
    s.q_mu = p.y0 + signal;
    s.e_mu = s.q_mu > 0.0 ? (background_error * p.y0 + p.e_det * signal) / s.q_mu : background_error;
    const double y1 = p.y0 + s.eta;
    s.q1 = y1 * p.mu * std::exp(-p.mu);
    s.e1 = y1 > 0.0 ? (background_error * p.y0 + p.e_det * s.eta) / y1 : background_error;
    return s;
}

/// Secret bits per emitted signal, clamped at zero.
inline double secret_key_rate(const QkdSystemParams& p, double loss_db) {
    const auto s = channel_stats(p, loss_db);
    const double r = p.q_sift * (s.q1 * (1.0 - binary_entropy(s.e1)) - s.q_mu * p.f * binary_entropy(s.e_mu));
    return r > 0.0 ? r : 0.0;
}

/// Key per second for a given emitter clock.
inline double key_rate_per_second(const QkdSystemParams& p, double loss_db, double emitter_hz) {
    return secret_key_rate(p, loss_db) * emitter_hz;
}

struct RatePoint {
    double loss = 0.0;
    double rate = 0.0;
    double qber = 0.0;
};

inline std::vector<RatePoint> rate_curve(const QkdSystemParams& p, double loss_min, double loss_max, double step) {
    if (!(step > 0.0) || !(loss_min >= 0.0) || !(loss_min <= loss_max))
        throw Error(Errc::invalid_range, "need 0 <= min <= max and step > 0");
    const auto n = static_cast<std::size_t>(std::floor((loss_max - loss_min) / step + 1e-9)) + 1;
    std::vector<RatePoint> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double loss = loss_min + static_cast<double>(i) * step;
        out.push_back({loss, secret_key_rate(p, loss), channel_stats(p, loss).e_mu});
    }
    return out;
}

inline constexpr double loss_ceiling_db = 60.0;
inline constexpr double loss_resolution_db = 0.01;

struct LossCutoff {
    double loss_db = 0.0;
    bool ceiling_capped = false;
};

/// Largest loss with a positive rate, by bisection between 0 and the ceiling.
inline LossCutoff max_tolerable_loss(const QkdSystemParams& p, double ceiling = loss_ceiling_db) {
    if (secret_key_rate(p, 0.0) <= 0.0)
        throw Error(Errc::system_nonviable, "preset '" + p.name + "' yields no key at zero loss");
    if (secret_key_rate(p, ceiling) > 0.0) return {ceiling, true};
    double lo = 0.0, hi = ceiling;
    while (hi - lo > loss_resolution_db / 2) {
        const double mid = 0.5 * (lo + hi);
        (secret_key_rate(p, mid) > 0.0 ? lo : hi) = mid;
    }
    return {lo, false};
}

}  // namespace wtrnet
