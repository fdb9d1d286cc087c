// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line so a
// run reads as a checklist; any failure also fails the test binary.

#include <catch2/catch_amalgamated.hpp>

#include <chrono>
#include <cstdio>
#include <sstream>

#include "ppbf/cli.hpp"
#include "ppbf/code.hpp"
#include "ppbf/decoder.hpp"
#include "ppbf/lattice.hpp"
#include "ppbf/oracle.hpp"
#include "ppbf/rng.hpp"
#include "ppbf/sim.hpp"

using namespace ppbf;

namespace {

constexpr std::uint64_t kSweepSeed = 9;

double now_seconds() {
    using clock = std::chrono::steady_clock;
    static const auto t0 = clock::now();
    return std::chrono::duration<double>(clock::now() - t0).count();
}

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("[criterion %d] %s - %s\n", criterion, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
}

SweepConfig threshold_sweep(Family family) {
    SweepConfig sc;
    sc.family = family;
    sc.Ls = {5, 7, 9, 11};
    sc.ps = {0.060, 0.065, 0.070, 0.075, 0.080, 0.085, 0.090};
    sc.base_seed = kSweepSeed;
    sc.max_trials = 100000;
    sc.target_failures = 100;
    return sc;
}

std::string interval_str(const ThresholdEstimate& th) {
    char buf[64];
    if (!th.found) return "none";
    std::snprintf(buf, sizeof buf, "[%.4f, %.4f]", th.low, th.high);
    return buf;
}

bool check_threshold(const ThresholdEstimate& th, double must_lo, double must_hi, double box_lo,
                     double box_hi) {
    return th.found && th.high >= must_lo && th.low <= must_hi && th.low >= box_lo &&
           th.high <= box_hi;
}

BitVector sample_error(const CodeModel& code, double p, std::uint64_t key) {
    CounterRng rng(key);
    return sample_bsc(code.n, p, rng);
}

} // namespace

TEST_CASE("criterion 1: toric threshold") {
    const double t0 = now_seconds();
    const auto points = run_sweep(threshold_sweep(Family::toric));
    const ThresholdEstimate th = estimate_threshold(points);
    const double elapsed = now_seconds() - t0;
    const bool pass = check_threshold(th, 0.070, 0.080, 0.060, 0.090) && elapsed < 1800.0;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "toric L=5,7,9,11 interval=%s target hit [0.070,0.080] box [0.060,0.090] "
                  "(%.1fs)",
                  interval_str(th).c_str(), elapsed);
    report(1, pass, buf);
    REQUIRE(pass);
}

TEST_CASE("criterion 2: rotated planar threshold") {
    const auto points = run_sweep(threshold_sweep(Family::rotated_planar));
    const ThresholdEstimate th = estimate_threshold(points);
    const bool pass = check_threshold(th, 0.065, 0.075, 0.055, 0.085);
    report(2, pass,
           "rotated L=5,7,9,11 interval=" + interval_str(th) +
               " target hit [0.065,0.075] box [0.055,0.085]");
    REQUIRE(pass);
}

TEST_CASE("criterion 3: baseline separation at toric L=13") {
    TrialConfig cfg;
    cfg.family = Family::toric;
    cfg.L = 13;
    cfg.p = 0.05;
    cfg.seed = derive_seed(kSweepSeed, 3);
    cfg.max_trials = 20000;
    cfg.target_failures = 20000; // run the full shared sample
    const CodeModel code = build_toric(13);
    const InfluenceTemplate tmpl = build_template(Family::toric, 13, 13);

    cfg.decoder = DecoderKind::ppbf;
    const ErrorRatePoint pp = run_point(cfg, code, tmpl);
    cfg.decoder = DecoderKind::classical_bf; // same seed: identical error sample
    const ErrorRatePoint bf = run_point(cfg, code, tmpl);

    const bool pass = pp.logical_error_rate < bf.logical_error_rate && pp.ci_high < bf.ci_low;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "ppbf %.4f [%.4f,%.4f] vs classical-bf %.4f [%.4f,%.4f], %lld shared trials",
                  pp.logical_error_rate, pp.ci_low, pp.ci_high, bf.logical_error_rate, bf.ci_low,
                  bf.ci_high, static_cast<long long>(pp.trials_run));
    report(3, pass, buf);
    REQUIRE(pass);
}

TEST_CASE("criteria 4 and 7: convergence and per-step monotonicity over 1e5 decodes") {
    const std::vector<int> sizes{3, 5, 7, 13};
    const std::vector<double> ps{0.01, 0.05, 0.10};
    const int per_cell = 4167; // 2 families x 4 sizes x 3 rates x 4167 > 1e5

    std::int64_t decodes = 0, converged = 0, accounted = 0;
    for (Family fam : {Family::toric, Family::rotated_planar}) {
        for (int L : sizes) {
            const CodeModel code = build_code(fam, L);
            const InfluenceTemplate tmpl = build_template(fam, L, L);
            for (double p : ps) {
                const std::uint64_t cell =
                    derive_seed(kSweepSeed, (fam == Family::toric ? 100 : 200) + L,
                                static_cast<std::uint64_t>(p * 1000));
                for (int t = 0; t < per_cell; ++t) {
                    const BitVector e = sample_error(code, p, derive_seed(cell, t));
                    const BitVector s = syndrome(code, e);
                    // The decoder enforces the step-wise invariants itself
                    // (every BF flip -2, every matching round -2 or -1) and
                    // throws on any violation.
                    const auto bf = preliminary_bf(code, tmpl, s);
                    auto state = bf.state;
                    MatchStats ms;
                    const BitVector est =
                        iterative_matching(code, tmpl, bf.estimate, bf.residual, state, &ms);
                    ++decodes;
                    if ((syndrome(code, est) ^ s).is_zero()) ++converged;
                    const std::size_t w = s.weight();
                    if (w == 2 * static_cast<std::size_t>(bf.flips) +
                                 2 * static_cast<std::size_t>(ms.rounds - ms.boundary_matches) +
                                 static_cast<std::size_t>(ms.boundary_matches))
                        ++accounted;
                }
            }
        }
    }

    const bool pass4 = decodes >= 100000 && converged == decodes;
    char buf[160];
    std::snprintf(buf, sizeof buf, "residual zero in %lld/%lld decodes (families x L x p grid)",
                  static_cast<long long>(converged), static_cast<long long>(decodes));
    report(4, pass4, buf);

    const bool pass7 = accounted == decodes;
    std::snprintf(buf, sizeof buf,
                  "syndrome weight fully accounted by -2 flips / -2 rounds / -1 boundary in "
                  "%lld/%lld decodes, zero instrumented violations",
                  static_cast<long long>(accounted), static_cast<long long>(decodes));
    report(7, pass7, buf);

    REQUIRE(pass4);
    REQUIRE(pass7);
}

TEST_CASE("criterion 5: oracle equivalence, exact") {
    const double t0 = now_seconds();
    bool influence_ok = true;

    // Shifted influences equal the dense recursion, every check, all entries.
    for (int L : {3, 5}) {
        const CodeModel code = build_toric(L);
        const InfluenceTemplate t = build_template(Family::toric, L, L);
        const auto h = oracle::densify(code.check_adjacency, code.n);
        for (int j = 0; j < code.m; ++j) {
            BitVector seed(code.m);
            seed.set(j, true);
            const auto direct = oracle::recursive_influence_direct(h, seed, L);
            const auto [gamma, nu] = shift_influence(t, j);
            influence_ok = influence_ok && gamma == direct.gamma && nu == direct.nu;
        }
    }
    for (int L : {3, 5}) {
        const CodeModel code = build_rotated_planar(L);
        const InfluenceTemplate t = build_template(Family::rotated_planar, L, L);
        const auto patch = oracle::build_bulk_patch(L, L + 2);
        for (int j = 0; j < code.m; ++j) {
            BitVector seed(patch.num_checks);
            const auto f = lattice::rot_check_face(L, j);
            seed.set(oracle::bulk_check_for(patch, f.fr, f.fc), true);
            const auto direct = oracle::recursive_influence_direct(patch.h, seed, L);
            const auto [gamma, nu] = shift_influence(t, j);
            for (int pnum = 0; pnum < code.m; ++pnum) {
                const auto fp = lattice::rot_check_face(L, pnum);
                influence_ok = influence_ok &&
                               gamma[pnum] ==
                                   direct.gamma[oracle::bulk_check_for(patch, fp.fr, fp.fc)];
            }
            for (int r = 0; r < L; ++r)
                for (int c = 0; c < L; ++c)
                    influence_ok = influence_ok &&
                                   nu[r * L + c] == direct.nu[oracle::bulk_qubit_for(patch, r, c)];
        }
    }

    bool alpha_ok = true;
    for (Family fam : {Family::toric, Family::rotated_planar}) {
        for (int L : {3, 5, 7}) {
            const CodeModel code = build_code(fam, L);
            const InfluenceTemplate t = build_template(fam, L, L);
            for (int j = 0; j < code.m; ++j) {
                const auto alpha = shift_alpha(t, j);
                const auto dist = oracle::bfs_distances(code, j, L);
                for (int q = 0; q < code.n; ++q) alpha_ok = alpha_ok && alpha[q] == dist[q];
            }
        }
    }

    const double elapsed = now_seconds() - t0;
    const bool pass = influence_ok && alpha_ok && elapsed < 60.0;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "shift==direct (toric+rotated L=3,5): %s; alpha==BFS (L=3,5,7): %s (%.1fs)",
                  influence_ok ? "exact" : "MISMATCH", alpha_ok ? "exact" : "MISMATCH", elapsed);
    report(5, pass, buf);
    REQUIRE(pass);
}

TEST_CASE("criterion 6: exhaustive small-instance suite") {
    bool weight1_ok = true;
    for (Family fam : {Family::toric, Family::rotated_planar}) {
        for (int L : {3, 5, 7}) {
            const CodeModel code = build_code(fam, L);
            const InfluenceTemplate tmpl = build_template(fam, L, L);
            for (int q = 0; q < code.n; ++q) {
                BitVector e(code.n);
                e.set(q, true);
                const DecodeOutcome out = ppbf_decode(code, tmpl, syndrome(code, e));
                weight1_ok = weight1_ok && out.converged &&
                             !is_logical_failure(code, e, out.estimate);
            }
        }
    }

    const CodeModel code = build_toric(3);
    const InfluenceTemplate tmpl = build_template(Family::toric, 3, 3);
    bool weight2_ok = true;
    int w2_failures = 0, w2_cases = 0;
    for (int a = 0; a < code.n; ++a)
        for (int b = a + 1; b < code.n; ++b) {
            BitVector e(code.n);
            e.set(a, true);
            e.set(b, true);
            const BitVector s = syndrome(code, e);
            const DecodeOutcome out = ppbf_decode(code, tmpl, s);
            const auto best = oracle::exhaustive_min_weight_decode(code, s, 2);
            weight2_ok = weight2_ok && out.converged && best.has_value() &&
                         out.estimate.weight() >= best->weight();
            if (is_logical_failure(code, e, out.estimate)) ++w2_failures;
            ++w2_cases;
        }

    const bool pass = weight1_ok && weight2_ok;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "all weight-1 clean (both families L=3,5,7); toric L=3 weight-2: %d/%d "
                  "converged at >= oracle weight, %d logical failures recorded",
                  w2_cases, w2_cases, w2_failures);
    report(6, pass, buf);
    REQUIRE(pass);
}

TEST_CASE("criterion 8: below-threshold size ordering at p=0.01") {
    const std::uint64_t seed = derive_seed(kSweepSeed, 8);
    TrialConfig cfg;
    cfg.family = Family::toric;
    cfg.p = 0.01;
    cfg.seed = seed;
    cfg.max_trials = 100000;
    cfg.target_failures = 100000;

    cfg.L = 5;
    const ErrorRatePoint small = run_point(cfg);
    cfg.L = 9;
    const ErrorRatePoint big = run_point(cfg);

    const bool pass = big.logical_error_rate < small.logical_error_rate &&
                      big.ci_high < small.ci_low;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "L=9 rate %.2e [%.2e,%.2e] < L=5 rate %.2e [%.2e,%.2e] at 1e5 trials each",
                  big.logical_error_rate, big.ci_low, big.ci_high, small.logical_error_rate,
                  small.ci_low, small.ci_high);
    report(8, pass, buf);
    REQUIRE(pass);
}

TEST_CASE("criterion 9: sweep output is byte-identical across worker counts") {
    const std::vector<std::string> base{
        "sweep", "--family", "toric",           "--L",    "5,7,9,11",
        "--p",   "0.060:0.090:0.005", "--seed", std::to_string(kSweepSeed)};
    auto run_with_jobs = [&](const char* jobs) {
        auto argv = base;
        argv.insert(argv.end(), {"--jobs", jobs});
        std::ostringstream out, err;
        const int code = cli::run_cli(argv, out, err);
        REQUIRE(code == 0);
        return out.str();
    };
    const std::string a = run_with_jobs("1");
    const std::string b = run_with_jobs("4");
    const bool pass = !a.empty() && a == b;
    char buf[120];
    std::snprintf(buf, sizeof buf, "--jobs 1 vs --jobs 4: %zu bytes, %s", a.size(),
                  pass ? "identical" : "DIFFER");
    report(9, pass, buf);
    REQUIRE(pass);
}
