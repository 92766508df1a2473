#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "stbcsim/stbcsim.hpp"

// End-to-end acceptance gate. Each numbered check prints one PASS/FAIL line
// with the measured quantity; the process exits nonzero if any check fails.

using namespace stbcsim;

namespace {

constexpr std::uint64_t kSeed = 20260816;

unsigned worker_count() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

struct Outcome {
    bool passed = false;
    std::string text;
};

void report(int number, const Outcome& o) {
    std::cout << (o.passed ? "PASS" : "FAIL") << " criterion " << number << ": " << o.text << '\n';
    std::cout.flush();
}

double paired_gain(std::size_t mod_order, double snr_start, double snr_stop,
                   std::uint64_t target_bit_errors, double target_ber) {
    SimConfig cfg;
    cfg.mod_order = mod_order;
    cfg.snr_start = snr_start;
    cfg.snr_step = 1.0;
    cfg.snr_stop = snr_stop;
    cfg.decoder = DecodeAlgorithm::sphere;
    cfg.max_trials = 4000000;
    cfg.target_bit_errors = target_bit_errors;
    cfg.seed = kSeed;
    cfg.rho = 0.0;
    cfg.workers = worker_count();

    cfg.scheme = Scheme::golden;
    const auto golden = run_sweep(cfg, &std::cerr);
    cfg.scheme = Scheme::oriol;
    const auto oriol = run_sweep(cfg, &std::cerr);
    return gain_at_ber(golden, oriol, target_ber);
}

Outcome check_gain(std::size_t mod_order, double snr_start, double snr_stop,
                   std::uint64_t target_bit_errors, double center) {
    Outcome o;
    std::ostringstream os;
    try {
        const double gain = paired_gain(mod_order, snr_start, snr_stop, target_bit_errors, 1e-3);
        o.passed = gain >= center - 1.0 && gain <= center + 1.0;
        os << "oriol-vs-golden gain at " << constellation_token(mod_order)
           << ", ber 1e-3: " << gain << " dB (required " << center - 1.0 << ".." << center + 1.0
           << ")";
    } catch (const std::exception& e) {
        os << "gain measurement failed: " << e.what();
    }
    o.text = os.str();
    return o;
}

struct Instance {
    std::array<std::size_t, 4> sent{};
    Mat22c received;
    ChannelRealization ch;
};

Instance make_instance(Scheme scheme, const Constellation& c, double rho, double n0,
                       std::uint64_t seed, std::uint64_t index) {
    TrialRng rng(derive_stream_key(seed, 3, index));
    Instance inst;
    Symbols s;
    for (std::size_t k = 0; k < 4; ++k) {
        inst.sent[k] = static_cast<std::size_t>(rng.next_u64() % c.order);
        s[k] = c.points[inst.sent[k]];
    }
    const auto cw = encode(scheme, s);
    inst.ch = draw_channel(scheme, FadingModel{rho}, rng);
    inst.received = add_noise(apply_channel(cw, inst.ch), NoiseParams{n0}, rng);
    return inst;
}

Outcome check_decoder_exactness() {
    Outcome o;
    std::uint64_t mismatches = 0, total = 0;
    for (unsigned m : {4u, 16u}) {
        const auto c = build_constellation(m);
        const std::uint64_t reps = (m == 4) ? 10000 : 1000;
        const std::array<double, 3> noise =
            (m == 4) ? std::array<double, 3>{0.8, 0.3, 0.1} : std::array<double, 3>{0.1, 0.04, 0.015};
        for (Scheme scheme : {Scheme::golden, Scheme::oriol}) {
            for (std::uint64_t i = 0; i < reps; ++i) {
                const double rho = (scheme == Scheme::oriol && i % 2 == 1) ? 0.5 : 0.0;
                const auto inst = make_instance(scheme, c, rho, noise[i % 3], kSeed + m, i);
                const auto ml = ml_decode(inst.received, inst.ch, c);
                const auto sp = decode(inst.received, inst.ch, c, DecodeAlgorithm::sphere);
                ++total;
                if (sp.indices != ml.indices ||
                    std::abs(sp.metric - ml.metric) > 1e-9 * (1.0 + ml.metric))
                    ++mismatches;
            }
        }
    }
    o.passed = mismatches == 0;
    std::ostringstream os;
    os << "sphere equals exhaustive ml on " << total << " instances: " << mismatches
       << " mismatches (required 0)";
    o.text = os.str();
    return o;
}

Outcome check_min_det() {
    Outcome o;
    const double d = min_det_difference(build_constellation(4));
    const double err = std::abs(d - kMinDetQam4);
    o.passed = d > 0.0 && err <= 1e-12;
    std::ostringstream os;
    os << "4qam min |det| over codeword differences: " << d << " vs frozen " << kMinDetQam4
       << " (|diff| " << err << ", required <= 1e-12)";
    o.text = os.str();
    return o;
}

Outcome check_energy_and_snr() {
    Outcome o;
    o.passed = true;
    std::ostringstream os;
    const auto c = build_constellation(4);
    const std::size_t n = 100000;
    for (Scheme scheme : {Scheme::golden, Scheme::oriol}) {
        TrialRng rng(derive_stream_key(kSeed, 5, static_cast<std::uint64_t>(scheme)));
        double energy = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            Symbols s;
            for (auto& v : s) v = c.points[rng.next_u64() % 4];
            energy += encode(scheme, s).frobenius_norm_sq();
        }
        energy /= static_cast<double>(n);
        if (std::abs(energy - 4.0) > 0.04) o.passed = false;
        os << scheme_token(scheme) << " E|C|^2=" << energy << " ";

        double worst_rel = 0.0;
        for (double snr_db : {0.0, 10.0, 20.0}) {
            const NoiseParams noise = snr_to_n0(snr_db, scheme);
            double sig = 0.0, npow = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                Symbols s;
                for (auto& v : s) v = c.points[rng.next_u64() % 4];
                const auto ch = draw_channel(scheme, FadingModel{0.0}, rng);
                sig += frobenius_norm_sq(apply_channel(encode(scheme, s), ch));
                npow += frobenius_norm_sq(add_noise(Mat22c{}, noise, rng));
            }
            const double rel = std::abs(sig / npow / std::pow(10.0, snr_db / 10.0) - 1.0);
            worst_rel = std::max(worst_rel, rel);
        }
        if (worst_rel > 0.03) o.passed = false;
        os << "snr_rel_err=" << worst_rel << " ";
    }
    o.text = "energy fairness and snr calibration: " + os.str() + "(required 1% / 3%)";
    return o;
}

Outcome check_noiseless() {
    Outcome o;
    std::uint64_t errors = 0, trials = 0;
    for (Scheme scheme : {Scheme::golden, Scheme::oriol})
        for (std::size_t m : {2u, 4u, 16u}) {
            SimConfig cfg;
            cfg.scheme = scheme;
            cfg.mod_order = m;
            cfg.decoder = DecodeAlgorithm::sphere;
            cfg.max_trials = 10000;
            cfg.target_bit_errors = 1000000000;
            cfg.seed = kSeed;
            cfg.workers = worker_count();
            const auto c = build_constellation(m);
            const auto rec = run_point(cfg, c, 400.0, 0);
            errors += rec.bit_errors;
            trials += rec.trials;
        }
    o.passed = errors == 0;
    std::ostringstream os;
    os << "noiseless decoding: " << errors << " bit errors in " << trials
       << " trials (required 0)";
    o.text = os.str();
    return o;
}

Outcome check_determinism() {
    Outcome o;
    SimConfig cfg;
    cfg.scheme = Scheme::golden;
    cfg.mod_order = 4;
    cfg.snr_start = 8.0;
    cfg.snr_step = 2.0;
    cfg.snr_stop = 12.0;
    cfg.decoder = DecodeAlgorithm::sphere;
    cfg.max_trials = 200000;
    cfg.target_bit_errors = 200;
    cfg.seed = 99;
    cfg.workers = 1;
    const std::string serial = csv_string(run_sweep(cfg));
    const std::string serial_again = csv_string(run_sweep(cfg));
    cfg.workers = 8;
    const std::string parallel = csv_string(run_sweep(cfg));
    o.passed = serial == serial_again && serial == parallel;
    o.text = std::string("byte-identical csv across repeats and 1-vs-8 workers: ") +
             (o.passed ? "yes" : "no");
    return o;
}

Outcome check_complexity() {
    Outcome o;
    o.passed = true;
    std::ostringstream os;
    for (unsigned m : {2u, 4u, 16u}) {
        const auto c = build_constellation(m);
        const auto inst = make_instance(Scheme::golden, c, 0.0, 0.2, kSeed + 8, m);
        const auto ml = ml_decode(inst.received, inst.ch, c);
        const std::uint64_t want = static_cast<std::uint64_t>(m) * m * m * m;
        if (ml.candidates_visited != want) o.passed = false;
        os << constellation_token(m) << "=" << ml.candidates_visited << " ";
    }
    // Median sphere workload at 4qam, 15 dB; reported alongside, not gated.
    const auto c = build_constellation(4);
    const double n0 = snr_to_n0(15.0, Scheme::golden).n0;
    std::vector<std::uint64_t> nodes;
    for (std::uint64_t i = 0; i < 1001; ++i) {
        const auto inst = make_instance(Scheme::golden, c, 0.0, n0, kSeed + 9, i);
        nodes.push_back(decode(inst.received, inst.ch, c, DecodeAlgorithm::sphere).nodes_visited);
    }
    std::nth_element(nodes.begin(), nodes.begin() + nodes.size() / 2, nodes.end());
    const std::uint64_t median = nodes[nodes.size() / 2];
    o.text = "ml candidate census (required m^4): " + os.str() +
             "; sphere median nodes at 4qam 15 dB: " + std::to_string(median) +
             " (m^4/10 = 25.6, informational)";
    return o;
}

}  // namespace

int main() {
    std::cout << "acceptance suite (seed " << kSeed << ", workers " << worker_count() << ")\n";
    bool all = true;
    const auto run = [&](int number, Outcome o) {
        report(number, o);
        all = all && o.passed;
    };

    run(1, check_gain(4, 12.0, 17.0, 2000, 2.0));
    run(2, check_gain(16, 20.0, 25.0, 1500, 3.0));
    run(3, check_decoder_exactness());
    run(4, check_min_det());
    run(5, check_energy_and_snr());
    run(6, check_noiseless());
    run(7, check_determinism());
    run(8, check_complexity());

    std::cout << (all ? "all criteria passed" : "one or more criteria FAILED") << '\n';
    return all ? 0 : 1;
}
