#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "ppbf/code.hpp"
#include "ppbf/decoder.hpp"
#include "ppbf/errors.hpp"
#include "ppbf/influence.hpp"
#include "ppbf/rng.hpp"

namespace ppbf {

enum class DecoderKind { ppbf, classical_bf };

inline const char* decoder_name(DecoderKind d) {
    return d == DecoderKind::ppbf ? "ppbf" : "classical-bf";
}

struct TrialConfig {
    Family family = Family::toric;
    int L = 3;
    double p = 0.05;
    int D = 0; // 0 picks the default depth, D = L
    std::uint64_t seed = 0;
    int max_trials = 100000;
    int target_failures = 100;
    DecoderKind decoder = DecoderKind::ppbf;
};

inline int effective_depth(const TrialConfig& c) { return c.D > 0 ? c.D : c.L; }

struct ErrorRatePoint {
    TrialConfig config;
    std::int64_t trials_run = 0;
    std::int64_t logical_failures = 0;
    double logical_error_rate = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double wall_seconds = 0.0;
};

struct WilsonInterval {
    double low = 0.0, high = 0.0;
};

inline WilsonInterval wilson_interval(std::int64_t failures, std::int64_t trials, double z = 1.96) {
    if (trials <= 0) return {0.0, 1.0};
    const double n = static_cast<double>(trials);
    const double phat = static_cast<double>(failures) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (phat + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

// i.i.d. Bernoulli(p) bits from the counter-based generator; one draw per bit.
inline BitVector sample_bsc(int n, double p, CounterRng& rng) {
    if (p < 0.0 || p > 1.0) throw invalid_parameter("sample_bsc: p outside [0,1]");
    const std::uint64_t thr = bernoulli_threshold(p);
    BitVector e(n);
    for (int i = 0; i < n; ++i)
        if (rng.bernoulli(thr)) e.set(i, true);
    return e;
}

namespace detail {

inline bool run_trial(const TrialConfig& cfg, const CodeModel& code, const InfluenceTemplate& tmpl,
                      std::int64_t trial_index) {
    CounterRng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(trial_index)));
    const BitVector e = sample_bsc(code.n, cfg.p, rng);
    const BitVector s = syndrome(code, e);
    if (cfg.decoder == DecoderKind::ppbf) {
        const DecodeOutcome o = ppbf_decode(code, tmpl, s);
        if (!o.converged) throw contract_error("ppbf decode left a residual syndrome");
        return is_logical_failure(code, e, o.estimate);
    }
    const DecodeOutcome o = classical_bf_decode(code, s);
    if (!o.converged) return true; // counted as a logical failure
    return is_logical_failure(code, e, o.estimate);
}

inline int effective_jobs(int jobs) {
    if (jobs > 0) return jobs;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

} // namespace detail

// Monte Carlo at one (family, L, p) point. Trials are keyed by index, so the
// outcome is a pure function of the config no matter how many workers run;
// the stopping rule is applied to the index-ordered failure sequence.
inline ErrorRatePoint run_point(const TrialConfig& cfg, const CodeModel& code,
                                const InfluenceTemplate& tmpl, int jobs = 0) {
    if (cfg.p < 0.0 || cfg.p > 0.5)
        throw invalid_parameter("run_point: p must lie in [0, 0.5]");
    if (cfg.max_trials <= 0 || cfg.target_failures <= 0)
        throw invalid_parameter("run_point: stopping rule must be positive");

    const auto t0 = std::chrono::steady_clock::now();
    const int njobs = detail::effective_jobs(jobs);
    constexpr std::int64_t kBlock = 512;

    std::vector<std::uint8_t> flag(cfg.max_trials, 0);
    std::int64_t done = 0, trials = 0, failures = 0;
    bool stopped = false;

    while (done < cfg.max_trials && !stopped) {
        const std::int64_t chunk_end = std::min<std::int64_t>(cfg.max_trials, done + kBlock * njobs);
        if (njobs == 1) {
            for (std::int64_t t = done; t < chunk_end; ++t)
                flag[t] = detail::run_trial(cfg, code, tmpl, t) ? 1 : 0;
        } else {
            std::atomic<std::int64_t> next{done};
            std::exception_ptr first_error;
            std::mutex err_mutex;
            std::vector<std::thread> pool;
            pool.reserve(njobs);
            for (int w = 0; w < njobs; ++w)
                pool.emplace_back([&] {
                    try {
                        while (true) {
                            const std::int64_t start = next.fetch_add(kBlock);
                            if (start >= chunk_end) break;
                            const std::int64_t end = std::min(start + kBlock, chunk_end);
                            for (std::int64_t t = start; t < end; ++t)
                                flag[t] = detail::run_trial(cfg, code, tmpl, t) ? 1 : 0;
                        }
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(err_mutex);
                        if (!first_error) first_error = std::current_exception();
                    }
                });
            for (auto& th : pool) th.join();
            if (first_error) std::rethrow_exception(first_error);
        }
        for (std::int64_t t = done; t < chunk_end; ++t) {
            ++trials;
            if (flag[t]) {
                ++failures;
                if (failures >= cfg.target_failures) {
                    stopped = true;
                    break;
                }
            }
        }
        done = chunk_end;
    }

    ErrorRatePoint pt;
    pt.config = cfg;
    pt.trials_run = trials;
    pt.logical_failures = failures;
    pt.logical_error_rate = trials > 0 ? static_cast<double>(failures) / trials : 0.0;
    const WilsonInterval ci = wilson_interval(failures, trials);
    pt.ci_low = ci.low;
    pt.ci_high = ci.high;
    pt.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return pt;
}

inline ErrorRatePoint run_point(const TrialConfig& cfg, int jobs = 0) {
    const CodeModel code = build_code(cfg.family, cfg.L);
    const InfluenceTemplate tmpl = build_template(cfg.family, cfg.L, effective_depth(cfg));
    return run_point(cfg, code, tmpl, jobs);
}

struct SweepConfig {
    Family family = Family::toric;
    std::vector<int> Ls;
    std::vector<double> ps;
    std::uint64_t base_seed = 0;
    int D_override = 0;
    DecoderKind decoder = DecoderKind::ppbf;
    int max_trials = 100000;
    int target_failures = 100;
    int jobs = 0;
};

// Cartesian grid of points, L-major. Every point gets an independent derived
// seed, so results do not depend on execution order or worker count. Points
// that fail are logged and skipped; the sweep continues.
inline std::vector<ErrorRatePoint> run_sweep(
    const SweepConfig& sc, const std::function<void(const ErrorRatePoint&)>& on_point = {},
    std::ostream* err_log = nullptr) {
    if (sc.Ls.empty() || sc.ps.empty())
        throw invalid_parameter("run_sweep: empty lattice or probability list");

    std::vector<ErrorRatePoint> out;
    std::uint64_t point_index = 0;
    for (int L : sc.Ls) {
        const CodeModel code = build_code(sc.family, L);
        const int D = sc.D_override > 0 ? sc.D_override : L;
        const InfluenceTemplate tmpl = build_template(sc.family, L, D);
        for (double p : sc.ps) {
            TrialConfig cfg;
            cfg.family = sc.family;
            cfg.L = L;
            cfg.p = p;
            cfg.D = D;
            cfg.seed = derive_seed(sc.base_seed, point_index);
            cfg.max_trials = sc.max_trials;
            cfg.target_failures = sc.target_failures;
            cfg.decoder = sc.decoder;
            try {
                ErrorRatePoint pt = run_point(cfg, code, tmpl, sc.jobs);
                if (on_point) on_point(pt);
                out.push_back(std::move(pt));
            } catch (const std::exception& ex) {
                if (err_log)
                    (*err_log) << "point family=" << family_name(sc.family) << " L=" << L
                               << " p=" << p << " failed: " << ex.what() << '\n';
            }
            ++point_index;
        }
    }
    return out;
}

struct ThresholdEstimate {
    bool found = false;
    double low = 0.0;
    double high = 0.0;
};

// Interval hull of the crossings of log-rate polylines for consecutive
// lattice sizes. Grid points with zero observed failures carry no log-rate
// and are skipped segment-wise.
inline ThresholdEstimate estimate_threshold(const std::vector<ErrorRatePoint>& pts) {
    std::map<int, std::map<double, double>> curves; // L -> p -> rate
    for (const auto& pt : pts) curves[pt.config.L][pt.config.p] = pt.logical_error_rate;
    if (curves.size() < 2)
        throw invalid_parameter("estimate_threshold: need at least two lattice sizes");

    std::vector<int> Ls;
    for (const auto& [L, _] : curves) Ls.push_back(L);

    std::vector<double> crossings;
    for (std::size_t i = 0; i + 1 < Ls.size(); ++i) {
        const auto& a = curves[Ls[i]];
        const auto& b = curves[Ls[i + 1]];
        std::vector<double> grid;
        for (const auto& [p, _] : a)
            if (b.count(p)) grid.push_back(p);
        std::sort(grid.begin(), grid.end());
        if (grid.size() < 3)
            throw invalid_parameter("estimate_threshold: need at least three shared p values");

        auto diff = [&](double p) -> double {
            return std::log(a.at(p)) - std::log(b.at(p));
        };
        for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
            const double p0 = grid[k], p1 = grid[k + 1];
            if (a.at(p0) <= 0 || a.at(p1) <= 0 || b.at(p0) <= 0 || b.at(p1) <= 0) continue;
            const double d0 = diff(p0), d1 = diff(p1);
            if (d0 == 0.0)
                crossings.push_back(p0);
            else if (d0 * d1 < 0.0)
                crossings.push_back(p0 + (p1 - p0) * d0 / (d0 - d1));
            if (k + 2 == grid.size() && d1 == 0.0) crossings.push_back(p1);
        }
    }

    ThresholdEstimate est;
    if (crossings.empty()) return est;
    est.found = true;
    est.low = *std::min_element(crossings.begin(), crossings.end());
    est.high = *std::max_element(crossings.begin(), crossings.end());
    return est;
}

} // namespace ppbf
