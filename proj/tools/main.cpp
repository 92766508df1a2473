#include <cstdint>
#include <iostream>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "stbcsim/stbcsim.hpp"

namespace {

struct CommonOpts {
    std::string scheme = "golden";
    std::string mod = "4qam";
    std::string snr = "0:2:20";
    std::string decoder = "sphere";
    std::uint64_t max_trials = 1000000;
    std::uint64_t target_bit_errors = 100;
    std::uint64_t seed = 0;
    double xpd_corr = 0.0;
    unsigned workers = 0;
    std::string out;
    std::string format = "csv";
};

unsigned default_workers() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

void add_common_options(CLI::App* cmd, CommonOpts& o, bool with_scheme) {
    if (with_scheme)
        cmd->add_option("--scheme", o.scheme, "Code to simulate: golden or oriol")
            ->check(CLI::IsMember({"golden", "oriol"}))
            ->capture_default_str();
    cmd->add_option("--mod", o.mod, "Constellation: bpsk, 4qam, or 16qam")
        ->check(CLI::IsMember({"bpsk", "4qam", "16qam"}))
        ->capture_default_str();
    cmd->add_option("--snr", o.snr, "SNR grid in dB as start:step:stop")->capture_default_str();
    cmd->add_option("--decoder", o.decoder, "Detector: ml or sphere")
        ->check(CLI::IsMember({"ml", "sphere"}))
        ->capture_default_str();
    cmd->add_option("--max-trials", o.max_trials, "Trial cap per SNR point")
        ->capture_default_str();
    cmd->add_option("--target-bit-errors", o.target_bit_errors,
                    "Stop a point once this many bit errors are collected")
        ->capture_default_str();
    cmd->add_option("--seed", o.seed, "Master seed (defaults to a random value, printed)");
    cmd->add_option("--xpd-corr", o.xpd_corr,
                    "Correlation between the polarization-state channels, in [0,1]")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--workers", o.workers, "Worker threads (default: hardware concurrency)");
    cmd->add_option("--out", o.out, "Output path (default: stdout)");
    cmd->add_option("--format", o.format, "Output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
}

std::array<double, 3> parse_snr(const std::string& text) {
    std::array<double, 3> v{};
    std::size_t pos = 0;
    for (int i = 0; i < 3; ++i) {
        const std::size_t next = i < 2 ? text.find(':', pos) : text.size();
        if (next == std::string::npos)
            throw CLI::ValidationError("--snr", "expected start:step:stop, got '" + text + "'");
        try {
            std::size_t used = 0;
            v[i] = std::stod(text.substr(pos, next - pos), &used);
            if (used != next - pos) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw CLI::ValidationError("--snr", "expected start:step:stop, got '" + text + "'");
        }
        pos = next + 1;
    }
    return v;
}

stbcsim::SimConfig build_config(CLI::App* cmd, const CommonOpts& o, bool with_scheme) {
    stbcsim::SimConfig cfg;
    if (with_scheme) cfg.scheme = stbcsim::scheme_from_token(o.scheme);
    cfg.mod_order = stbcsim::order_from_token(o.mod);
    const auto snr = parse_snr(o.snr);
    cfg.snr_start = snr[0];
    cfg.snr_step = snr[1];
    cfg.snr_stop = snr[2];
    cfg.decoder = stbcsim::algorithm_from_token(o.decoder);
    cfg.max_trials = o.max_trials;
    cfg.target_bit_errors = o.target_bit_errors;
    if (cmd->count("--seed")) {
        cfg.seed = o.seed;
    } else {
        std::random_device rd;
        cfg.seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
        std::cerr << "seed: " << cfg.seed << '\n';
    }
    cfg.rho = o.xpd_corr;
    cfg.workers = cmd->count("--workers") ? o.workers : default_workers();
    cfg.validate();
    return cfg;
}

int run_sweep_command(CLI::App* cmd, const CommonOpts& o) {
    const auto cfg = build_config(cmd, o, true);
    stbcsim::RunManifest manifest;
    manifest.mode = "sweep";
    manifest.timestamp = stbcsim::utc_timestamp();
    manifest.config = cfg;
    manifest.records = stbcsim::run_sweep(cfg, &std::cerr);
    stbcsim::emit_results(manifest, o.format, o.out);
    return 0;
}

int run_compare_command(CLI::App* cmd, const CommonOpts& o, double target_ber) {
    if (o.mod == "bpsk")
        throw CLI::ValidationError("--mod",
                                   "compare gain targets are defined at 4qam and 16qam rates");
    auto cfg = build_config(cmd, o, false);

    stbcsim::RunManifest manifest;
    manifest.mode = "compare";
    manifest.timestamp = stbcsim::utc_timestamp();
    manifest.config = cfg;

    cfg.scheme = stbcsim::Scheme::golden;
    const auto golden = stbcsim::run_sweep(cfg, &std::cerr);
    cfg.scheme = stbcsim::Scheme::oriol;
    const auto oriol = stbcsim::run_sweep(cfg, &std::cerr);
    manifest.records = golden;
    manifest.records.insert(manifest.records.end(), oriol.begin(), oriol.end());

    int status = 0;
    try {
        stbcsim::GainReport gain;
        gain.target_ber = target_ber;
        gain.gain_db = stbcsim::gain_at_ber(golden, oriol, target_ber);
        gain.curve_a = "golden";
        gain.curve_b = "oriol";
        manifest.gain = gain;
        std::cerr << "gain at ber=" << target_ber << ": " << gain.gain_db << " dB\n";
    } catch (const std::exception& e) {
        std::cerr << "gain measurement failed: " << e.what() << '\n';
        status = 1;
    }
    stbcsim::emit_results(manifest, o.format, o.out);
    return status;
}

int run_mindet_command(const std::string& mod, const std::string& out) {
    const auto c = stbcsim::build_constellation(stbcsim::order_from_token(mod));
    const bool pairwise = c.order <= 4;
    const double d = pairwise ? stbcsim::min_det_difference(c)
                              : stbcsim::min_det_symbol_differences(c);
    stbcsim::ordered_json j;
    j["constellation"] = mod;
    j["scheme"] = "golden";
    j["method"] = pairwise ? "pairwise" : "symbol-differences";
    j["min_abs_det"] = d;
    const std::string text = j.dump(2) + "\n";
    if (out.empty() || out == "-") {
        std::cout << text;
    } else {
        std::ofstream file(out, std::ios::binary);
        if (!file) throw std::runtime_error("cannot open output path '" + out + "' for writing");
        file << text;
    }
    return 0;
}

int run_selftest_command() {
    const auto checks = stbcsim::run_selftest();
    for (const auto& chk : checks)
        std::cout << (chk.passed ? "PASS" : "FAIL") << ' ' << chk.name << " (" << chk.detail
                  << ")\n";
    return stbcsim::selftest_passed(checks) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Link-level Monte Carlo simulator for 2x2 space-time block codes"};
    app.set_version_flag("--version", stbcsim::kVersion);
    app.require_subcommand(1);

    CommonOpts sweep_opts;
    auto* sweep = app.add_subcommand("sweep", "Run a BER/SER sweep over an SNR grid");
    add_common_options(sweep, sweep_opts, true);

    CommonOpts compare_opts;
    double target_ber = 1e-3;
    auto* compare =
        app.add_subcommand("compare", "Paired golden-vs-oriol sweep plus gain at a target BER");
    add_common_options(compare, compare_opts, false);
    compare->add_option("--target-ber", target_ber, "BER level for the gain measurement")
        ->capture_default_str();

    std::string mindet_mod = "4qam";
    std::string mindet_out;
    auto* mindet = app.add_subcommand("mindet", "Minimum |det| over codeword differences");
    mindet->add_option("--mod", mindet_mod, "Constellation: bpsk, 4qam, or 16qam")
        ->check(CLI::IsMember({"bpsk", "4qam", "16qam"}))
        ->capture_default_str();
    mindet->add_option("--out", mindet_out, "Output path (default: stdout)");

    auto* selftest = app.add_subcommand("selftest", "Run the fast invariant suite");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sweep->parsed()) return run_sweep_command(sweep, sweep_opts);
        if (compare->parsed()) return run_compare_command(compare, compare_opts, target_ber);
        if (mindet->parsed()) return run_mindet_command(mindet_mod, mindet_out);
        if (selftest->parsed()) return run_selftest_command();
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
