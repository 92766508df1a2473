#pragma once

#include <array>
#include <charconv>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "stbcsim/montecarlo.hpp"
#include "stbcsim/version.hpp"

// Result serialization: a run manifest that round-trips losslessly through
// JSON, and a fixed-column CSV emitter whose output is byte-stable for a
// given record list.

namespace stbcsim {

using ordered_json = nlohmann::ordered_json;

struct GainReport {
    double target_ber = 0.0;
    double gain_db = 0.0;
    std::string curve_a;
    std::string curve_b;
};

struct RunManifest {
    std::string version = kVersion;
    std::string mode = "sweep";  // "sweep" or "compare"
    std::string timestamp;
    SimConfig config;
    std::vector<BerRecord> records;
    std::optional<GainReport> gain;
};

inline std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Shortest round-trip decimal form, locale-independent.
inline std::string format_double(double v) {
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

inline ordered_json to_json(const BerRecord& r) {
    ordered_json j;
    j["scheme"] = scheme_token(r.scheme);
    j["constellation"] = constellation_token(r.mod_order);
    j["snr_db"] = r.snr_db;
    j["trials"] = r.trials;
    j["bit_errors"] = r.bit_errors;
    j["ber"] = r.ber;
    j["symbol_errors"] = r.symbol_errors;
    j["ser"] = r.ser;
    j["codeword_errors"] = r.codeword_errors;
    j["fallback_trials"] = r.fallback_trials;
    j["elapsed"] = r.elapsed;
    j["decoder"] = algorithm_token(r.decoder);
    j["rho"] = r.rho;
    j["seed"] = r.seed;
    return j;
}

inline BerRecord record_from_json(const ordered_json& j) {
    BerRecord r;
    r.scheme = scheme_from_token(j.at("scheme").get<std::string>());
    r.mod_order = order_from_token(j.at("constellation").get<std::string>());
    r.snr_db = j.at("snr_db").get<double>();
    r.trials = j.at("trials").get<std::uint64_t>();
    r.bit_errors = j.at("bit_errors").get<std::uint64_t>();
    r.ber = j.at("ber").get<double>();
    r.symbol_errors = j.at("symbol_errors").get<std::uint64_t>();
    r.ser = j.at("ser").get<double>();
    r.codeword_errors = j.at("codeword_errors").get<std::uint64_t>();
    r.fallback_trials = j.at("fallback_trials").get<std::uint64_t>();
    r.elapsed = j.at("elapsed").get<double>();
    r.decoder = algorithm_from_token(j.at("decoder").get<std::string>());
    r.rho = j.at("rho").get<double>();
    r.seed = j.at("seed").get<std::uint64_t>();
    return r;
}

inline ordered_json to_json(const RunManifest& m) {
    ordered_json j;
    j["version"] = m.version;
    j["mode"] = m.mode;
    j["timestamp"] = m.timestamp;
    ordered_json cfg;
    if (m.mode == "sweep") cfg["scheme"] = scheme_token(m.config.scheme);
    cfg["constellation"] = constellation_token(m.config.mod_order);
    cfg["snr"] = {{"start", m.config.snr_start},
                  {"step", m.config.snr_step},
                  {"stop", m.config.snr_stop}};
    cfg["decoder"] = algorithm_token(m.config.decoder);
    cfg["max_trials"] = m.config.max_trials;
    cfg["target_bit_errors"] = m.config.target_bit_errors;
    cfg["seed"] = m.config.seed;
    cfg["rho"] = m.config.rho;
    cfg["workers"] = m.config.workers;
    j["config"] = std::move(cfg);
    ordered_json results = ordered_json::array();
    for (const auto& r : m.records) results.push_back(to_json(r));
    j["results"] = std::move(results);
    if (m.gain) {
        j["gain"] = {{"target_ber", m.gain->target_ber},
                     {"gain_db", m.gain->gain_db},
                     {"curve_a", m.gain->curve_a},
                     {"curve_b", m.gain->curve_b}};
    }
    return j;
}

inline RunManifest manifest_from_json(const ordered_json& j) {
    RunManifest m;
    m.version = j.at("version").get<std::string>();
    m.mode = j.at("mode").get<std::string>();
    m.timestamp = j.at("timestamp").get<std::string>();
    const auto& cfg = j.at("config");
    if (m.mode == "sweep") m.config.scheme = scheme_from_token(cfg.at("scheme").get<std::string>());
    m.config.mod_order = order_from_token(cfg.at("constellation").get<std::string>());
    m.config.snr_start = cfg.at("snr").at("start").get<double>();
    m.config.snr_step = cfg.at("snr").at("step").get<double>();
    m.config.snr_stop = cfg.at("snr").at("stop").get<double>();
    m.config.decoder = algorithm_from_token(cfg.at("decoder").get<std::string>());
    m.config.max_trials = cfg.at("max_trials").get<std::uint64_t>();
    m.config.target_bit_errors = cfg.at("target_bit_errors").get<std::uint64_t>();
    m.config.seed = cfg.at("seed").get<std::uint64_t>();
    m.config.rho = cfg.at("rho").get<double>();
    m.config.workers = cfg.at("workers").get<unsigned>();
    for (const auto& rj : j.at("results")) m.records.push_back(record_from_json(rj));
    if (j.contains("gain")) {
        GainReport g;
        g.target_ber = j.at("gain").at("target_ber").get<double>();
        g.gain_db = j.at("gain").at("gain_db").get<double>();
        g.curve_a = j.at("gain").at("curve_a").get<std::string>();
        g.curve_b = j.at("gain").at("curve_b").get<std::string>();
        m.gain = g;
    }
    return m;
}

inline constexpr const char* kCsvHeader =
    "scheme,constellation,snr_db,trials,bit_errors,ber,symbol_errors,ser,decoder,rho,seed";

inline void emit_csv(const std::vector<BerRecord>& records, std::ostream& out) {
    out << kCsvHeader << '\n';
    for (const auto& r : records) {
        out << scheme_token(r.scheme) << ',' << constellation_token(r.mod_order) << ','
            << format_double(r.snr_db) << ',' << r.trials << ',' << r.bit_errors << ','
            << format_double(r.ber) << ',' << r.symbol_errors << ',' << format_double(r.ser) << ','
            << algorithm_token(r.decoder) << ',' << format_double(r.rho) << ',' << r.seed << '\n';
    }
}

inline std::string csv_string(const std::vector<BerRecord>& records) {
    std::ostringstream os;
    emit_csv(records, os);
    return os.str();
}

inline void emit_results(const RunManifest& manifest, std::string_view format,
                         const std::string& path) {
    const auto write = [&](std::ostream& out) {
        if (format == "csv")
            emit_csv(manifest.records, out);
        else if (format == "json")
            out << to_json(manifest).dump(2) << '\n';
        else
            throw std::invalid_argument("unknown output format '" + std::string(format) +
                                        "'; expected csv or json");
        if (!out) throw std::runtime_error("failed while writing results");
    };
    if (path.empty() || path == "-") {
        write(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open output path '" + path + "' for writing");
    write(file);
    file.close();
    if (!file) throw std::runtime_error("failed to finish writing '" + path + "'");
}

}  // namespace stbcsim
