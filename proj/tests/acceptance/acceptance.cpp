// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "ira/channel.hpp"
#include "ira/floor.hpp"
#include "ira/harness.hpp"
#include "ira/receiver.hpp"
#include "ira/traffic.hpp"
#include "oracles.hpp"

#ifndef IRA_CONFIG_DIR
#error "IRA_CONFIG_DIR must point at the configs directory"
#endif
#ifndef IRA_CLI_PATH
#error "IRA_CLI_PATH must point at the ira executable"
#endif

using namespace ira;
using namespace ira::analytic;

namespace {

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;

    void check(bool ok, std::string note)
    {
        pass = pass && ok;
        if (!ok)
            note = "MISS " + note;
        notes.push_back(std::move(note));
    }
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& body)
{
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& e) {
        out.pass = false;
        out.notes.push_back(fmt::format("exception: {}", e.what()));
    }
    for (const auto& n : out.notes)
        fmt::print("    {}\n", n);
    fmt::print("{} criterion {}: {}\n", out.pass ? "PASS" : "FAIL", id, title);
    std::fflush(stdout);
    if (!out.pass)
        ++failures;
}

ExperimentConfig scenario(const std::string& file, std::vector<double> loads)
{
    auto cfg = load_experiment_config(std::string(IRA_CONFIG_DIR) + "/" + file);
    cfg.load_grid = std::move(loads);
    cfg.output.clear();
    return cfg;
}

bool relative_close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::abs(b); }

Outcome vulnerable_period_golden()
{
    Outcome o;
    const double snr = db_to_linear(6.0);
    const double phi15 = vulnerable_fraction(snr, 1.5).phi;
    const double phi20 = vulnerable_fraction(snr, 2.0).phi;
    o.check(phi15 >= 0.443 && phi15 <= 0.446, fmt::format("phi(6 dB, R=1.5) = {:.6f}", phi15));
    o.check(phi20 >= 0.783 && phi20 <= 0.786, fmt::format("phi(6 dB, R=2.0) = {:.6f}", phi20));
    const struct {
        double rate, vf;
        int expected;
    } cases[] = {{1.5, 200, 225}, {2.0, 200, 127}, {1.5, 100, 112}};
    for (const auto& c : cases) {
        const int n_v = floor_params(SystemConfig::make(6, c.rate, c.vf)).n_v;
        o.check(n_v == c.expected, fmt::format("n_v(R={}, T_f={}) = {} (expected {})", c.rate, c.vf, n_v, c.expected));
    }
    return o;
}

Outcome catalog_enumeration()
{
    Outcome o;
    int mismatches = 0;
    for (const auto& s : builtin_catalog())
        for (const int n : {6, 7, 8}) {
            const auto count = count_configurations(s, n);
            const auto expected = oracle::binomial(n, s.mu) * oracle::Big(static_cast<double>(s.iso_count));
            if (static_cast<double>(count) != expected.convert_to<double>()) {
                ++mismatches;
                o.check(false, fmt::format("{} n={}: {} vs {}", s.name, n, count, expected.convert_to<double>()));
            }
        }
    o.check(mismatches == 0, fmt::format("36 (pattern, n) pairs enumerated, {} mismatches", mismatches));
    return o;
}

Outcome specializations_consistent()
{
    Outcome o;
    const auto sys = SystemConfig::make(6, 1.5, 200);
    double worst_regular = 0.0;
    double worst_pair = 0.0;
    for (const int d : {2, 3}) {
        const auto dist = DegreeDistribution::regular(d);
        const auto catalog = feasible_subset(builtin_catalog(), dist);
        const std::vector<UcpDescriptor> pair{two_user_pattern(d)};
        for (int i = 0; i < 10; ++i) {
            const double g = std::pow(10.0, -2.0 + 2.0 * i / 9.0);
            const double general = plr_floor(g, sys, dist, catalog);
            const double regular = plr_regular(g, sys, d, catalog);
            const double pair_general = plr_floor(g, sys, dist, pair);
            const double pair_special = plr_two_user(g, sys, d);
            worst_regular = std::max(worst_regular, std::abs(regular - general) / general);
            worst_pair = std::max(worst_pair, std::abs(pair_special - pair_general) / pair_general);
        }
    }
    o.check(worst_regular <= 1e-12, fmt::format("general vs regular: max rel diff {:.3e}", worst_regular));
    o.check(worst_pair <= 1e-12, fmt::format("general vs two-user: max rel diff {:.3e}", worst_pair));
    return o;
}

Outcome independent_oracle()
{
    Outcome o;
    const auto sys = SystemConfig::make(6, 1.5, 200);
    const auto dist = DegreeDistribution::regular(2);
    const auto catalog = feasible_subset(builtin_catalog(), dist);
    const double value = plr_floor(0.1, sys, dist, catalog);
    const double ref = oracle::plr_union_bound(0.1, 200, 225, {{2, 1.0}}, catalog, 300).convert_to<double>();
    o.check(relative_close(value, ref, 5e-7), fmt::format("floor {:.10e} vs oracle {:.10e}", value, ref));

    const std::vector<UcpDescriptor> s1{builtin_catalog().front()};
    const double single = plr_floor(0.1, sys, dist, s1);
    using boost::multiprecision::exp;
    const oracle::Big lambda = oracle::Big(200) * oracle::Big(0.1);
    const double closed = ((lambda - 1 + exp(-lambda)) / (oracle::Big(225) * 224)).convert_to<double>();
    o.check(relative_close(single, closed, 5e-11), fmt::format("single-pattern term {:.12e} vs closed form {:.12e}", single, closed));
    return o;
}

Outcome simulation_agreement()
{
    Outcome o;
    const auto run = [&](const std::string& file, std::vector<double> loads) {
        const auto curve = sweep(scenario(file, std::move(loads)));
        for (const auto& r : curve.rows) {
            const auto ci99 = wilson_interval(r.lost, r.users, kZ99);
            const double lo = std::max(0.0, r.plr - 2.0 * (r.plr - ci99.lo));
            const double hi = r.plr + 2.0 * (ci99.hi - r.plr);
            const double gap = r.lost ? std::abs(std::log10(r.plr) - std::log10(r.plr_floor)) : INFINITY;
            const bool ok = r.users >= 1'000'000 && gap <= 0.3 && r.plr_floor >= lo && r.plr_floor <= hi;
            o.check(ok, fmt::format("{} G={}: sim {:.4e} ({} / {}) analytic {:.4e} |dlog10| {:.3f} widened CI99 "
                                    "[{:.4e}, {:.4e}]",
                                    file, r.load, r.plr, r.lost, r.users, r.plr_floor, gap, lo, hi));
        }
    };
    run("ira2_tf200_r15.cfg", {0.05, 0.1, 0.2});
    run("lambda2_tf200_r15.cfg", {0.1, 0.2});
    return o;
}

Outcome regime_ordering()
{
    Outcome o;
    const std::vector<double> loads{0.05, 0.1, 0.2};
    const auto ira2 = sweep(scenario("ira2_tf200_r15.cfg", loads));
    const auto ira3 = sweep(scenario("ira3_tf200_r15.cfg", loads));
    const auto short_vf = sweep(scenario("ira2_tf100_r15.cfg", loads));
    int compared = 0;
    const auto compare = [&](const char* label, const PlrRow& high, const PlrRow& low, bool strict) {
        const bool overlap = high.ci_lo <= low.ci_hi && low.ci_lo <= high.ci_hi;
        if (overlap) {
            o.notes.push_back(fmt::format("SKIP {} G={}: 95% CIs overlap ([{:.3e}, {:.3e}] vs [{:.3e}, {:.3e}])",
                                          label, high.load, high.ci_lo, high.ci_hi, low.ci_lo, low.ci_hi));
            return;
        }
        ++compared;
        const bool ok = strict ? high.plr > low.plr : high.plr >= low.plr;
        o.check(ok, fmt::format("{} G={}: {:.4e} [{:.3e}, {:.3e}] vs {:.4e} [{:.3e}, {:.3e}]", label, high.load,
                                high.plr, high.ci_lo, high.ci_hi, low.plr, low.ci_lo, low.ci_hi));
    };
    for (std::size_t i = 0; i < loads.size(); ++i) {
        compare("IRA-2 > IRA-3", ira2.rows[i], ira3.rows[i], true);
        compare("T_f=100 >= T_f=200", short_vf.rows[i], ira2.rows[i], false);
    }
    o.notes.push_back(fmt::format("{} of 6 comparisons had separated intervals", compared));
    return o;
}

std::vector<UserStatus> statuses(const SicReceiver& rx)
{
    std::vector<UserStatus> out;
    for (const auto& u : rx.outcomes())
        out.push_back(u.status);
    return out;
}

Outcome receiver_properties()
{
    Outcome o;

    // Pick-order independence of the fixed point.
    {
        const auto cfg = SystemConfig::make(6, 1.5, 20.0);
        const DegreeDistribution dist({{2, 0.5}, {3, 0.3}, {4, 0.2}});
        Rng rng(90210);
        Rng shuffle(4242);
        std::size_t windows = 0;
        std::size_t differing = 0;
        while (windows < 1000) {
            const auto trace = generate_trace(cfg, dist, 0.7, 400.0, rng);
            SicReceiver fifo(trace, cfg, PickOrder::Fifo);
            SicReceiver random(trace, cfg, PickOrder::Random, rng.next());
            SicReceiver exhaustive(trace, cfg);
            while (!fifo.finished()) {
                fifo.sic_pass();
                random.sic_pass();
                exhaustive.sic_pass_exhaustive(&shuffle);
                const auto reference = statuses(fifo);
                if (reference != statuses(random) || reference != statuses(exhaustive))
                    ++differing;
                ++windows;
                fifo.slide();
                random.slide();
                exhaustive.slide();
            }
        }
        o.check(differing == 0, fmt::format("order independence: {} windows, {} differing", windows, differing));
    }

    // Average MI never decreases when an interferer is removed.
    {
        const double snr = db_to_linear(6.0);
        Rng rng(8675309);
        int violations = 0;
        const int timelines = 10'000;
        for (int t = 0; t < timelines; ++t) {
            const TimeInterval replica{0.0, 1.0};
            std::vector<TimeInterval> others;
            const int k = 1 + static_cast<int>(rng.uniform() * 8);
            for (int i = 0; i < k; ++i) {
                const double s = rng.uniform(-1.0, 1.0);
                if (s > -1.0)
                    others.emplace_back(s, s + 1.0);
            }
            const double before = avg_mutual_information(build_timeline(replica, others), snr);
            others.erase(others.begin() + static_cast<long>(rng.uniform() * static_cast<double>(others.size())));
            const double after = avg_mutual_information(build_timeline(replica, others), snr);
            if (after < before - 1e-12)
                ++violations;
        }
        o.check(violations == 0, fmt::format("MI monotonicity: {} timelines, {} violations", timelines, violations));
    }

    // Single interferer: decodable exactly when the overlap fraction leaves the
    // packet at least phi of clean airtime, i.e. overlap <= 1 - phi.
    {
        const auto sys = SystemConfig::make(6, 1.5, 200);
        const double phi = vulnerable_fraction(sys.snr_linear, sys.rate).phi;
        int mismatches = 0;
        for (int i = 0; i < 100; ++i) {
            const double alpha = (i + 0.5) / 100.0;
            const TimeInterval other{1.0 - alpha, 2.0 - alpha};
            const auto tl = build_timeline({0.0, 1.0}, std::span<const TimeInterval>(&other, 1));
            const bool decodable = is_decodable(avg_mutual_information(tl, sys.snr_linear), sys.rate);
            if (decodable != (alpha <= 1.0 - phi))
                ++mismatches;
        }
        o.check(mismatches == 0,
                fmt::format("single-interferer grid: 100 overlap fractions, {} mismatches (phi = {:.6f})", mismatches, phi));
    }
    return o;
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome sweep_determinism()
{
    Outcome o;
    const auto dir = std::filesystem::temp_directory_path() / "ira_acceptance_determinism";
    std::filesystem::create_directories(dir);
    const std::string config = std::string(IRA_CONFIG_DIR) + "/ira2_tf200_r15.cfg";
    std::vector<std::string> contents;
    for (const auto& [name, threads] : {std::pair{"a", 1}, std::pair{"b", 3}}) {
        const auto prefix = (dir / name).string();
        const std::string cmd =
            fmt::format("\"{}\" sweep \"{}\" --threads {} --output \"{}\" 2>/dev/null", IRA_CLI_PATH, config, threads, prefix);
        const int rc = std::system(cmd.c_str());
        o.check(rc == 0, fmt::format("sweep run '{}' with {} thread(s) exited with {}", name, threads, rc));
        contents.push_back(slurp(prefix + ".sweep.csv"));
    }
    std::filesystem::remove_all(dir);
    o.check(!contents[0].empty() && contents[0] == contents[1],
            fmt::format("outputs byte-identical ({} bytes)", contents[0].size()));
    return o;
}

}  // namespace

int main()
{
    report(1, "vulnerable fraction and vulnerable-period counts", vulnerable_period_golden);
    report(2, "pattern catalog isomorphism counts by enumeration", catalog_enumeration);
    report(3, "general, regular and two-user forms agree", specializations_consistent);
    report(4, "loss-rate approximation against high-precision oracle", independent_oracle);
    report(5, "Monte Carlo loss rate agrees with the analytic floor", simulation_agreement);
    report(6, "loss-rate ordering across degree and frame length", regime_ordering);
    report(7, "receiver properties", receiver_properties);
    report(8, "sweep output determinism", sweep_determinism);
    fmt::print("{} of 8 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
