// SPDX-License-Identifier: Apache-2.0
//
// starwpcn: max-min throughput optimization for STAR-RIS assisted WPCNs
// Copyright (C) 2026 starwpcn developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Acceptance run. Solves every scheme on 20 seeded scenarios at
// (N, M) in {(1,16), (4,16), (4,32)}, plus the location sweep, then prints
// one PASS/FAIL line per criterion:
//
//   1  constraint residuals of every returned solution, suite wall time
//   2  rank one energy beam relaxations
//   3  passive penalty loops reach rank one or are tagged
//   4  monotone inner loops; convergence within 15 passes
//   5  small instances against exhaustive grids
//   6  closed-form receivers and beams against random competitors
//   7  seed-averaged orderings
//   8  recovered points never beat their relaxation
//
// Exit status 0 only if every selected criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "oracles.hpp"
#include "starwpcn/harness.hpp"

using namespace starwpcn;
namespace fs = std::filesystem;

namespace
{
    // Tolerances, pinned.
    constexpr double residual_limit = 1e-6;       // criterion 1, relative
    constexpr double suite_budget = 30 * 60.0;    // criterion 1, seconds
    constexpr double energy_rank_limit = 1e-3;    // criterion 2, relative
    constexpr double penalty_rank_limit = 1e-5;   // criterion 3, absolute
    constexpr double monotone_slack = 1e-6;       // criterion 4, absolute
    constexpr int converge_within = 15;           // criterion 4
    constexpr double converge_share = 0.8;        // criterion 4
    constexpr double oracle_rel = 0.01;           // criterion 5, passive blocks
    constexpr double oracle_time_abs = 1e-3;      // criterion 5, time splits
    constexpr double oracle_budget = 5 * 60.0;    // criterion 5, seconds
    constexpr int competitors = 10000;            // criterion 6
    constexpr double dominance_slack = 1e-9;      // criterion 6, relative
    constexpr double trend_budget = 4 * 3600.0;   // criterion 7, seconds
    constexpr double unimodal_slack = 1e-9;       // criterion 7e, relative to peak
    constexpr double bound_slack = 1e-7;          // criterion 8, relative

    double seconds_since(std::chrono::steady_clock::time_point t)
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
    }

    std::string fmt(const char *f, double x)
    {
        char buf[64];
        std::snprintf(buf, sizeof buf, f, x);
        return buf;
    }

    struct Verdict
    {
        int id = 0;
        bool pass = false;
        std::string detail;
    };

    // Key of a suite configuration.
    struct Config
    {
        int N = 0;
        int M = 0;
        auto operator<=>(const Config &) const = default;
    };

    std::string label(const Config &c) { return "(" + std::to_string(c.N) + "," + std::to_string(c.M) + ")"; }

    struct Tally
    {
        // 1
        int solutions = 0;
        int infeasible = 0;
        int failed_cells = 0;
        double worst_residual = 0.0;
        std::string worst_cell;
        std::vector<std::string> failures;
        // 2
        int energy_blocks = 0;
        int energy_violations = 0;
        double worst_energy_rank = 0.0;
        // 3
        int penalty_blocks = 0;
        int penalty_converged = 0;
        int penalty_tagged = 0;
        int penalty_silent = 0;
        double worst_penalty_residual = 0.0;
        // 4
        int traces = 0;
        int nonmonotone_traces = 0;
        double worst_drop = 0.0;
        int default_seeds = 0;
        int default_converged = 0;
        std::vector<int> default_iterations;
        // 6
        int dominance_checks = 0;
        int dominance_violations = 0;
        // 8
        int bound_checks = 0;
        int bound_violations = 0;
        double worst_bound_excess = 0.0;
        // 7
        std::map<std::pair<std::string, Config>, std::vector<double>> gamma;
        std::vector<std::vector<double>> tau_curves; // star_noma at (4,16)
        std::vector<double> tau_grid;
        std::map<std::pair<std::string, double>, std::vector<double>> location;
    };

    bool penalty_scheme(const harness::Scheme &s)
    {
        return s.strategy == baselines::Strategy::noma &&
               (!s.baseline || *s.baseline == baselines::BaselineKind::conventional_ris);
    }

    // MMSE receivers at the returned solution against random unit vectors.
    void es_dominance(const EsSolution &sol, const Scenario &sc, std::uint64_t seed, Tally &t)
    {
        const auto &Hk = sc.combined.Hk;
        const int N = sc.n_antennas();
        if (sol.p.size() < 2 || !(sol.p[user_t] > 0.0) || !(sol.p[user_r] > 0.0))
            return;
        std::vector<cvec> q;
        for (int k = 0; k < 2; ++k)
            q.push_back(append_one(sol.profile.q.empty() ? cvec() : sol.profile.q[k]));
        const double s2 = sc.params.sigma2;
        const auto w = es::mmse_receivers(Hk, q, sol.p, s2);
        const cvec ht = Hk[user_t] * q[user_t], hr = Hk[user_r] * q[user_r];
        const double pt = sol.p[user_t], pr = sol.p[user_r];
        const double best_t = oracles::sinr_t(w[user_t], ht, pt, s2);
        const double best_r = oracles::sinr_r(w[user_r], ht, hr, pt, pr, s2);
        Rng rng(mix_seed(seed, 0xD0));
        ++t.dominance_checks;
        for (int i = 0; i < competitors; ++i)
        {
            const cvec x = oracles::random_unit(N, rng);
            if (oracles::sinr_t(x, ht, pt, s2) > best_t * (1 + dominance_slack) ||
                oracles::sinr_r(x, ht, hr, pt, pr, s2) > best_r * (1 + dominance_slack))
            {
                ++t.dominance_violations;
                return;
            }
        }
    }

    // Matched-filter beams and receivers of the returned solution against
    // random unit vectors (beams scaled to the same power).
    void ts_dominance(const TsSolution &sol, const Scenario &sc, std::uint64_t seed, Tally &t)
    {
        const int N = sc.n_antennas();
        Rng rng(mix_seed(seed, 0xD1));
        for (int k = 0; k < sc.n_users(); ++k)
        {
            const cvec u = append_one(sol.profile.u.empty() ? cvec() : sol.profile.u[k]);
            const cvec q = append_one(sol.profile.q.empty() ? cvec() : sol.profile.q[k]);
            const cvec a = sc.combined.Gk[k].adjoint() * u;
            const cvec h = sc.combined.Hk[k] * q;
            const double beam = std::norm(a.dot(sol.v[k]));
            const double recv = std::norm(sol.w[k].dot(h)) / sol.w[k].squaredNorm();
            ++t.dominance_checks;
            for (int i = 0; i < competitors; ++i)
            {
                const cvec x = oracles::random_unit(N, rng);
                if (sol.P[k] * std::norm(a.dot(x)) > beam * (1 + dominance_slack) + 1e-300 ||
                    std::norm(x.dot(h)) > recv * (1 + dominance_slack) + 1e-300)
                {
                    ++t.dominance_violations;
                    break;
                }
            }
        }
    }

    bool within_bound(double score, double bound, Tally &t)
    {
        const double excess = score - bound;
        const bool ok = excess <= bound_slack * std::max(1.0, std::abs(bound));
        t.worst_bound_excess = std::max(t.worst_bound_excess, excess / std::max(1.0, std::abs(bound)));
        return ok;
    }

    void es_trace(const es::EsResult &res, const harness::Scheme &scheme, const Config &cfg, Tally &t)
    {
        const bool penalty = penalty_scheme(scheme);
        double prev = 0.0, prev_tau = -1.0;
        bool monotone = true;
        auto close_trace = [&]
        {
            if (prev_tau >= 0.0)
            {
                ++t.traces;
                t.nonmonotone_traces += monotone ? 0 : 1;
            }
        };
        for (const auto &r : res.trace)
        {
            if (r.tau0 != prev_tau)
            {
                close_trace();
                prev_tau = r.tau0;
                monotone = true;
            }
            else if (r.gamma < prev - monotone_slack)
            {
                monotone = false;
                t.worst_drop = std::max(t.worst_drop, prev - r.gamma);
            }
            prev = r.gamma;

            if (r.solves == 0)
                continue;
            if (std::isfinite(r.surrogate_score))
            {
                ++t.bound_checks;
                if (!within_bound(r.surrogate_score, r.relaxation_bound, t))
                    ++t.bound_violations;
            }
            if (r.block == es::Block::energy)
            {
                ++t.energy_blocks;
                t.worst_energy_rank = std::max(t.worst_energy_rank, r.rank_one_residual);
                if (!(r.rank_one_residual <= energy_rank_limit))
                    ++t.energy_violations;
            }
            else if (penalty && (r.block == es::Block::downlink || r.block == es::Block::uplink))
            {
                ++t.penalty_blocks;
                t.worst_penalty_residual = std::max(t.worst_penalty_residual, r.rank_one_residual);
                if (r.rank_one_residual <= penalty_rank_limit)
                    ++t.penalty_converged;
                else if (!r.penalty_converged && !r.note.empty())
                    ++t.penalty_tagged;
                else
                    ++t.penalty_silent;
            }
        }
        close_trace();

        if (scheme.name() == "star_noma" && cfg.N == 4 && cfg.M == 16)
        {
            ++t.default_seeds;
            if (res.best_index >= 0)
            {
                const auto &best = res.grid[res.best_index];
                t.default_iterations.push_back(best.iterations);
                if (best.converged && best.iterations <= converge_within)
                    ++t.default_converged;
            }
            std::vector<double> curve;
            t.tau_grid.clear();
            for (const auto &g : res.grid)
            {
                t.tau_grid.push_back(g.tau0);
                curve.push_back(g.ok ? g.gamma : std::nan(""));
            }
            t.tau_curves.push_back(curve);
        }
    }

    void ts_bounds(const ts::TsResult &res, Tally &t)
    {
        for (const auto *set : {&res.downlink, &res.uplink})
            for (const auto &p : *set)
            {
                ++t.bound_checks;
                if (!within_bound(p.value, p.relaxation_bound, t))
                    ++t.bound_violations;
            }
    }

    void absorb(const harness::CellOutput &c, const Config &cfg, Tally &t)
    {
        const auto &r = c.record;
        const auto scheme = *harness::Scheme::parse(r.scheme);
        const std::string cell = r.scheme + " " + label(cfg) + " seed " + std::to_string(r.seed);
        if (!r.ok || !c.outcome)
        {
            ++t.failed_cells;
            t.failures.push_back(cell + ": " + r.status);
            return;
        }
        const auto &out = *c.outcome;
        ++t.solutions;
        const auto &rep = out.report();
        const double res = rep.max_residual();
        if (res > t.worst_residual)
        {
            t.worst_residual = res;
            t.worst_cell = cell;
        }
        if (!rep.feasible() || !(res <= residual_limit))
        {
            ++t.infeasible;
            t.failures.push_back(cell + ": " + rep.summary());
        }
        t.gamma[{r.scheme, cfg}].push_back(r.gamma);

        if (out.es)
        {
            es_trace(*out.es, scheme, cfg, t);
            es_dominance(out.es->solution, out.scenario, r.seed, t);
        }
        if (out.ts)
        {
            ts_bounds(*out.ts, t);
            ts_dominance(out.ts->solution, out.scenario, r.seed, t);
        }
    }

    double mean(const std::vector<double> &v)
    {
        double s = 0.0;
        for (double x : v)
            s += x;
        return v.empty() ? std::nan("") : s / v.size();
    }

    // Criterion 5: small instances against exhaustive grids.
    Verdict oracle_checks()
    {
        const auto start = std::chrono::steady_clock::now();
        int checks = 0, misses = 0;
        double worst_rel = 0.0, worst_abs = 0.0;
        auto rel = [&](double got, double ref)
        {
            ++checks;
            const double e = std::abs(got - ref) / std::max(std::abs(ref), 1e-300);
            worst_rel = std::max(worst_rel, e);
            misses += e <= oracle_rel ? 0 : 1;
        };
        auto abs = [&](double got, double ref)
        {
            ++checks;
            const double e = std::abs(got - ref);
            worst_abs = std::max(worst_abs, e);
            misses += e <= oracle_time_abs ? 0 : 1;
        };

        const es::EsConfig cfg;
        for (std::uint64_t seed : {1, 2, 3})
        {
            const auto s = make_scenario(default_geometry(2, 1, seed), FadingParams{}, SystemParams{}, seed);
            auto st = es::initial_state(s, 0.5, cfg);
            es::update_receivers(st, s);

            auto down = st;
            const double pl = down.p[user_t];
            const auto g = es_gains(down.w, s.combined.Hk, down.q_tilde);
            const double down_grid = oracles::es_downlink_grid(down, s, g, pl);
            rel(es::solve_downlink_passive_block(down, s, cfg).surrogate_score, down_grid);

            auto up = st;
            const auto &sp = s.params;
            const double pt = up.p[user_t], pr = up.p[user_r];
            const double A0 = sp.sigma2 / (pr * g.rr), B0 = 1.0 + pt * g.rt / sp.sigma2;
            const double up_grid = oracles::es_uplink_grid(up, s, A0, B0);
            rel(es::solve_uplink_passive_block(up, s, cfg).surrogate_score, up_grid);
        }

        for (std::uint64_t seed : {1, 2})
        {
            const auto base = make_scenario(default_geometry(1, 1, seed), FadingParams{}, SystemParams{}, seed);
            const auto c = baselines::with_conventional_surface(base);
            rel(baselines::solve(c, baselines::Strategy::noma).gamma(), oracles::reflect_only_noma_grid(c));
        }

        Rng rng(3);
        for (int trial = 0; trial < 5; ++trial)
        {
            cmat G(3, 2);
            for (int i = 0; i < 3; ++i)
                G.row(i) = oracles::random_vec(2, rng).transpose();
            const cmat R = G * G.adjoint();
            rel(ts::solve_ts_passive(R, {1000, 7, 1e-8}).value, oracles::unit_modulus_grid(R));
        }

        for (const auto &[a, gamma] : std::vector<std::pair<double, double>>{{10.0, 1.0}, {3.0, 0.5}, {100.0, 2.0}})
            abs(ts::min_total_time(a, gamma).total, oracles::min_total_time_grid(a, gamma));

        Rng gains(4);
        for (int trial = 0; trial < 4; ++trial)
        {
            const double at = std::exp(gains.uniform(0.0, 8.0)), ar = std::exp(gains.uniform(0.0, 8.0));
            abs(ts::solve_time_allocation({at, ar}, 1.0).gamma, oracles::grid_allocation(at, ar));
        }

        const double elapsed = seconds_since(start);
        Verdict v{5, misses == 0 && elapsed <= oracle_budget, ""};
        v.detail = std::to_string(checks - misses) + "/" + std::to_string(checks) + " grid oracles matched (worst " +
                   fmt("%.2e", worst_rel) + " rel, " + fmt("%.2e", worst_abs) + " abs), " + fmt("%.1f", elapsed) +
                   " s of " + fmt("%.0f", oracle_budget) + " s";
        return v;
    }

    std::vector<std::string> all_schemes()
    {
        return {"star_noma",   "star_tdma", "no_ris_noma", "no_ris_tdma", "conventional_ris_noma",
                "conventional_ris_tdma", "es_noma_gr"};
    }

    harness::ExperimentSpec make_spec(harness::Figure fig, std::vector<double> axis, std::vector<std::string> schemes,
                                      int seeds, int N, int M, const std::string &out)
    {
        harness::ExperimentSpec s;
        s.figure = fig;
        s.axis = std::move(axis);
        for (const auto &n : schemes)
            s.schemes.push_back(*harness::Scheme::parse(n));
        for (int i = 1; i <= seeds; ++i)
            s.seeds.push_back(static_cast<std::uint64_t>(i));
        s.scenario.n_antennas = N;
        s.scenario.n_elements = M;
        s.trends = false;
        s.output = out;
        s.validate();
        return s;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Acceptance run: one PASS/FAIL line per criterion"};
    int seeds = 20;
    int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    std::string out_dir = "acceptance";
    std::vector<int> only;
    app.add_option("--seeds", seeds, "Seeded scenarios per configuration")->check(CLI::Range(1, 1000));
    app.add_option("--workers", workers, "Parallel cells")->check(CLI::Range(1, 1024));
    app.add_option("--out-dir", out_dir, "Directory for result files");
    app.add_option("--only", only, "Run only these criteria")->check(CLI::Range(1, 8));
    CLI11_PARSE(app, argc, argv);

    const std::set<int> selected = only.empty() ? std::set<int>{1, 2, 3, 4, 5, 6, 7, 8}
                                                : std::set<int>(only.begin(), only.end());
    auto wants = [&](std::initializer_list<int> ids)
    {
        for (int i : ids)
            if (selected.count(i))
                return true;
        return false;
    };
    fs::create_directories(out_dir);
    std::vector<Verdict> verdicts;
    Tally t;

    double suite_time = 0.0, location_time = 0.0;
    if (wants({1, 2, 3, 4, 6, 7, 8}))
    {
        const auto start = std::chrono::steady_clock::now();
        const auto single = make_spec(harness::Figure::vs_N, {1}, all_schemes(), seeds, 1, 16,
                                      (fs::path(out_dir) / "suite_n1_m16.csv").string());
        const auto multi = make_spec(harness::Figure::vs_M, {16, 32}, all_schemes(), seeds, 4, 16,
                                     (fs::path(out_dir) / "suite_n4.csv").string());
        for (const auto *spec : {&single, &multi})
        {
            harness::RunOptions opt;
            opt.workers = workers;
            const std::size_t total = harness::cells(*spec).size();
            std::size_t done = 0;
            opt.on_cell = [&](const harness::CellOutput &c)
            {
                const Config cfg = spec->figure == harness::Figure::vs_N
                                       ? Config{static_cast<int>(c.record.axis), spec->scenario.n_elements}
                                       : Config{spec->scenario.n_antennas, static_cast<int>(c.record.axis)};
                absorb(c, cfg, t);
                std::fprintf(stderr, "[%zu/%zu] %-22s %-8s seed %-3llu gamma %.6g  %.1f s\n", ++done, total,
                             c.record.scheme.c_str(), label(cfg).c_str(),
                             static_cast<unsigned long long>(c.record.seed), c.record.gamma, c.record.wall_time);
            };
            harness::run(*spec, opt);
        }
        suite_time = seconds_since(start);
    }
    if (wants({7}))
    {
        const auto start = std::chrono::steady_clock::now();
        const auto spec = make_spec(harness::Figure::vs_location, {9.2, 10.8}, {"star_noma", "star_tdma"}, seeds, 4,
                                    16, (fs::path(out_dir) / "location.csv").string());
        harness::RunOptions opt;
        opt.workers = workers;
        opt.on_cell = [&](const harness::CellOutput &c)
        {
            if (c.record.ok)
                t.location[{c.record.scheme, c.record.axis}].push_back(c.record.gamma);
            else
                t.failures.push_back(c.record.scheme + " location " + std::to_string(c.record.axis) + ": " +
                                     c.record.status);
        };
        harness::run(spec, opt);
        location_time = seconds_since(start);
    }

    if (selected.count(1))
    {
        const bool ok = t.infeasible == 0 && t.failed_cells == 0 && suite_time <= suite_budget;
        verdicts.push_back({1, ok,
                            std::to_string(t.solutions - t.infeasible) + "/" +
                                std::to_string(t.solutions + t.failed_cells) + " solutions valid, worst residual " +
                                fmt("%.2e", t.worst_residual) + " (" + t.worst_cell + "), suite " +
                                fmt("%.0f", suite_time) + " s of " + fmt("%.0f", suite_budget) + " s with " +
                                std::to_string(workers) + " worker(s)"});
    }
    if (selected.count(2))
        verdicts.push_back({2, t.energy_blocks > 0 && t.energy_violations == 0,
                            std::to_string(t.energy_blocks - t.energy_violations) + "/" +
                                std::to_string(t.energy_blocks) + " energy blocks rank one, worst residual " +
                                fmt("%.2e", t.worst_energy_rank)});
    if (selected.count(3))
        verdicts.push_back({3, t.penalty_blocks > 0 && t.penalty_silent == 0,
                            std::to_string(t.penalty_blocks) + " passive penalty blocks: " +
                                std::to_string(t.penalty_converged) + " at rank one, " +
                                std::to_string(t.penalty_tagged) + " tagged, " + std::to_string(t.penalty_silent) +
                                " silent; worst residual " + fmt("%.2e", t.worst_penalty_residual)});
    if (selected.count(4))
    {
        const double share = t.default_seeds ? double(t.default_converged) / t.default_seeds : 0.0;
        std::string its;
        for (int i : t.default_iterations)
            its += (its.empty() ? "" : " ") + std::to_string(i);
        verdicts.push_back({4, t.traces > 0 && t.nonmonotone_traces == 0 && share >= converge_share,
                            std::to_string(t.traces - t.nonmonotone_traces) + "/" + std::to_string(t.traces) +
                                " inner traces monotone (worst drop " + fmt("%.2e", t.worst_drop) + "); " +
                                std::to_string(t.default_converged) + "/" + std::to_string(t.default_seeds) +
                                " default seeds converged within " + std::to_string(converge_within) +
                                " passes (need " + fmt("%.0f", 100 * converge_share) + "%), passes at best WPT: " +
                                its});
    }
    if (selected.count(5))
        verdicts.push_back(oracle_checks());
    if (selected.count(6))
        verdicts.push_back({6, t.dominance_checks > 0 && t.dominance_violations == 0,
                            std::to_string(t.dominance_checks - t.dominance_violations) + "/" +
                                std::to_string(t.dominance_checks) + " receiver/beam sets beat " +
                                std::to_string(competitors) + " random unit vectors"});
    if (selected.count(7))
    {
        auto m = [&](const std::string &s, int N, int M) { return mean(t.gamma[{s, Config{N, M}}]); };
        std::vector<std::pair<std::string, bool>> parts;
        auto part = [&](const std::string &name, bool ok, const std::string &detail)
        {
            parts.push_back({name, ok});
            std::printf("  7%s %s  %s\n", name.c_str(), ok ? "PASS" : "FAIL", detail.c_str());
        };
        const double n1_t = m("star_tdma", 1, 16), n1_n = m("star_noma", 1, 16);
        part("a", n1_t > n1_n, "N=1 M=16 star_tdma " + fmt("%.6g", n1_t) + " > star_noma " + fmt("%.6g", n1_n));

        const double n16 = m("star_noma", 4, 16), t16 = m("star_tdma", 4, 16);
        const double n32 = m("star_noma", 4, 32), t32 = m("star_tdma", 4, 32);
        part("b", n16 > t16 && n32 - t32 > n16 - t16,
             "star_noma - star_tdma " + fmt("%.6g", n16 - t16) + " at M=16, " + fmt("%.6g", n32 - t32) + " at M=32");

        bool c_ok = true;
        std::string c_detail;
        for (const char *st : {"noma", "tdma"})
        {
            const std::string s(st);
            const double a = m("star_" + s, 4, 16), b = m("conventional_ris_" + s, 4, 16), c = m("no_ris_" + s, 4, 16);
            c_ok = c_ok && a > b && b > c;
            c_detail += s + " " + fmt("%.6g", a) + " > " + fmt("%.6g", b) + " > " + fmt("%.6g", c) + "; ";
        }
        part("c", c_ok, c_detail);

        const double g16 = m("es_noma_gr", 4, 16), g32 = m("es_noma_gr", 4, 32);
        part("d", n16 >= g16 && n32 >= g32 && n32 - g32 > n16 - g16,
             "star_noma - es_noma_gr " + fmt("%.3e", n16 - g16) + " at M=16, " + fmt("%.3e", n32 - g32) +
                 " at M=32");

        std::vector<double> curve(t.tau_grid.size(), 0.0);
        bool complete = !t.tau_curves.empty();
        for (std::size_t i = 0; i < curve.size(); ++i)
        {
            for (const auto &c : t.tau_curves)
                curve[i] += c[i];
            curve[i] /= std::max<std::size_t>(1, t.tau_curves.size());
            complete = complete && std::isfinite(curve[i]);
        }
        bool uni = complete;
        std::string e_detail = "mean gamma over WPT grid:";
        if (complete)
        {
            const auto peak = std::max_element(curve.begin(), curve.end()) - curve.begin();
            const double slack = unimodal_slack * curve[peak];
            for (long i = 1; i < static_cast<long>(curve.size()); ++i)
                uni = uni && (i <= peak ? curve[i] >= curve[i - 1] - slack : curve[i] <= curve[i - 1] + slack);
        }
        for (double g : curve)
            e_detail += " " + fmt("%.5g", g);
        part("e", uni, e_detail);

        bool f_ok = true;
        std::string f_detail;
        for (const char *s : {"star_noma", "star_tdma"})
        {
            const double near_t = mean(t.location[{s, 10.8}]), near_r = mean(t.location[{s, 9.2}]);
            f_ok = f_ok && near_t > near_r;
            f_detail += std::string(s) + " x=10.8 " + fmt("%.6g", near_t) + " vs x=9.2 " + fmt("%.6g", near_r) + "; ";
        }
        part("f", f_ok, f_detail);

        const double elapsed = suite_time + location_time;
        bool all = elapsed <= trend_budget;
        std::string failed;
        for (const auto &[n, ok] : parts)
        {
            all = all && ok;
            if (!ok)
                failed += n;
        }
        verdicts.push_back({7, all,
                            std::to_string(seeds) + " seeds, " + (failed.empty() ? "all orderings hold" : "fails: " + failed) +
                                ", " + fmt("%.0f", elapsed) + " s of " + fmt("%.0f", trend_budget) + " s"});
    }
    if (selected.count(8))
        verdicts.push_back({8, t.bound_checks > 0 && t.bound_violations == 0,
                            std::to_string(t.bound_checks - t.bound_violations) + "/" +
                                std::to_string(t.bound_checks) + " recovered points within their relaxation (worst " +
                                fmt("%.2e", t.worst_bound_excess) + " rel)"});

    for (const auto &f : t.failures)
        std::printf("  failure: %s\n", f.c_str());

    bool all = true;
    nlohmann::json report = nlohmann::json::array();
    for (const auto &v : verdicts)
    {
        std::printf("criterion %d %s  %s\n", v.id, v.pass ? "PASS" : "FAIL", v.detail.c_str());
        report.push_back({{"criterion", v.id}, {"pass", v.pass}, {"detail", v.detail}});
        all = all && v.pass;
    }
    std::ofstream(fs::path(out_dir) / "acceptance.json") << report.dump(2) << "\n";
    return all ? 0 : 1;
}
