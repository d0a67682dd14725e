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

#include "starwpcn/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace starwpcn::harness
{
    using json = nlohmann::json;
    using baselines::BaselineKind;
    using baselines::Strategy;

    namespace
    {
        std::string fmt(double x)
        {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", x);
            return buf;
        }

        std::string join(const std::vector<double> &v)
        {
            std::string s;
            for (std::size_t i = 0; i < v.size(); ++i)
            {
                if (i)
                    s += ';';
                s += fmt(v[i]);
            }
            return s;
        }

        std::vector<double> split_doubles(const std::string &s)
        {
            std::vector<double> out;
            if (s.empty())
                return out;
            std::stringstream ss(s);
            std::string item;
            while (std::getline(ss, item, ';'))
                out.push_back(std::stod(item));
            return out;
        }

        std::string quote(const std::string &s)
        {
            if (s.find_first_of(",\"\n\r") == std::string::npos)
                return s;
            std::string q = "\"";
            for (char c : s)
            {
                if (c == '"')
                    q += '"';
                q += (c == '\n' || c == '\r') ? ' ' : c;
            }
            return q + "\"";
        }

        std::vector<std::string> split_csv(const std::string &line)
        {
            std::vector<std::string> out;
            std::string cur;
            bool in_quotes = false;
            for (std::size_t i = 0; i < line.size(); ++i)
            {
                const char c = line[i];
                if (in_quotes)
                {
                    if (c == '"' && i + 1 < line.size() && line[i + 1] == '"')
                    {
                        cur += '"';
                        ++i;
                    }
                    else if (c == '"')
                        in_quotes = false;
                    else
                        cur += c;
                }
                else if (c == '"')
                    in_quotes = true;
                else if (c == ',')
                {
                    out.push_back(cur);
                    cur.clear();
                }
                else
                    cur += c;
            }
            out.push_back(cur);
            return out;
        }

        es::EsConfig es_config(const ExperimentSpec &spec, std::uint64_t seed)
        {
            es::EsConfig c;
            c.tau_step = spec.solver.tau_step;
            c.inner_tolerance = spec.solver.inner_tolerance;
            c.penalty_tolerance = spec.solver.penalty_tolerance;
            c.max_inner_iterations = spec.solver.max_inner_iterations;
            c.draws = spec.solver.draws;
            c.seed = mix_seed(seed, 0xE5C0);
            return c;
        }

        ts::TsConfig ts_config(const ExperimentSpec &spec, std::uint64_t seed)
        {
            ts::TsConfig c;
            c.draws = spec.solver.draws;
            c.seed = mix_seed(seed, 0x75C0);
            return c;
        }

        // The scenario a scheme actually runs on.
        Scenario scheme_scenario(const ExperimentSpec &spec, const Scheme &scheme, const Scenario &base, double axis)
        {
            if (!scheme.baseline || *scheme.baseline == BaselineKind::es_noma_gr)
                return base;
            if (*scheme.baseline == BaselineKind::no_ris)
                return baselines::without_surface(base);
            // The reflect-only surface sits 1 m off the line of the STAR one.
            const double x = spec.figure == Figure::vs_location ? axis : 10.0;
            return baselines::with_conventional_surface(base, {x, 1.0, 0.0});
        }

        std::string es_status(const std::vector<es::TraceRecord> &trace, const std::vector<es::TauPoint> *grid,
                              const ConstraintReport &report)
        {
            int rejected = 0, unconverged = 0, bound = 0, rank = 0;
            for (const auto &r : trace)
            {
                rejected += !r.accepted;
                unconverged += !r.penalty_converged;
                bound += !r.bound_ok;
                rank += !r.rank_one_ok;
            }
            std::string s = "feasible=" + std::to_string(report.feasible());
            if (grid)
            {
                int ok = 0;
                for (const auto &p : *grid)
                    ok += p.ok;
                s += ";grid_ok=" + std::to_string(ok) + "/" + std::to_string(grid->size());
            }
            s += ";rejected_blocks=" + std::to_string(rejected) + ";penalty_unconverged=" + std::to_string(unconverged) +
                 ";bound_violations=" + std::to_string(bound) + ";rank_one_violations=" + std::to_string(rank);
            return s;
        }

        std::string now_utc()
        {
            const std::time_t t = std::time(nullptr);
            char buf[32];
            std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
            return buf;
        }

        std::string cell_key(const std::string &scheme, double axis, std::uint64_t seed)
        {
            return scheme + "|" + fmt(axis) + "|" + std::to_string(seed);
        }

        void write_sidecar(const std::string &csv, const ExperimentSpec &spec, const std::vector<ResultRecord> &records,
                           int workers, const std::string &started, bool resumed)
        {
            json j;
            j["spec_hash"] = spec_hash(spec);
            j["spec"] = json::parse(to_json(spec));
            j["resumed"] = resumed;
            j["cells"] = records.size();
            std::size_t failed = 0;
            for (const auto &r : records)
                failed += !r.ok;
            j["failed_cells"] = failed;
            j["environment"] = {{"compiler", __VERSION__},
                                {"cplusplus", static_cast<long>(__cplusplus)},
                                {"hardware_threads", std::thread::hardware_concurrency()},
                                {"workers", workers},
                                {"started", started},
                                {"finished", now_utc()}};
            j["summary"] = json::parse(summary_json(summarize(records, spec)));
            std::ofstream out(csv + ".json");
            out << j.dump(2) << "\n";
        }

        // Runs the given cells on a bounded pool; rows are appended to `out`
        // as they finish.
        void execute(const ExperimentSpec &spec, const std::vector<Cell> &todo, std::ofstream &out,
                     const RunOptions &options, std::vector<ResultRecord> &records)
        {
            records.assign(todo.size(), {});
            std::atomic<std::size_t> next{0};
            std::mutex lock;
            auto worker = [&]
            {
                for (;;)
                {
                    const std::size_t i = next++;
                    if (i >= todo.size())
                        return;
                    auto cell = run_cell(spec, todo[i].scheme, todo[i].axis, todo[i].seed);
                    std::lock_guard<std::mutex> g(lock);
                    out << to_csv_row(cell.record) << "\n";
                    out.flush();
                    records[i] = cell.record;
                    if (options.on_cell)
                        options.on_cell(cell);
                }
            };
            const int n = std::max(1, std::min<int>(options.workers, static_cast<int>(todo.size())));
            std::vector<std::thread> pool;
            for (int t = 1; t < n; ++t)
                pool.emplace_back(worker);
            worker();
            for (auto &t : pool)
                t.join();
        }

        std::string output_path(const ExperimentSpec &spec, const RunOptions &options)
        {
            const std::string p = options.output.empty() ? spec.output : options.output;
            if (p.empty())
                throw DomainError("no output path given");
            return p;
        }

        std::vector<ResultRecord> in_cell_order(const ExperimentSpec &spec, const std::vector<ResultRecord> &records)
        {
            std::map<std::string, ResultRecord> by_key;
            for (const auto &r : records)
                by_key[cell_key(r.scheme, r.axis, r.seed)] = r;
            std::vector<ResultRecord> out;
            for (const auto &c : cells(spec))
            {
                auto it = by_key.find(cell_key(c.scheme.name(), c.axis, c.seed));
                if (it != by_key.end())
                    out.push_back(it->second);
            }
            return out;
        }
    }

    ScenarioGeometry location_geometry(int n_antennas, int n_elements, double x)
    {
        ScenarioGeometry g;
        g.n_antennas = n_antennas;
        g.n_elements = n_elements;
        g.ris = {x, 0.0, 0.0};
        g.users.push_back({{11.0, 0.0, 0.0}, Region::transmission});
        g.users.push_back({{9.0, 0.0, 0.0}, Region::reflection});
        g.validate();
        return g;
    }

    ScenarioGeometry multi_user_geometry(int n_antennas, int n_elements, int n_users, double radius,
                                         std::uint64_t seed)
    {
        ScenarioGeometry g;
        g.n_antennas = n_antennas;
        g.n_elements = n_elements;
        // Same stream as the two-user default placement.
        Rng rng(mix_seed(seed, 0x5EED));
        for (int k = 0; k < n_users; ++k)
        {
            const Region r = k % 2 == 0 ? Region::transmission : Region::reflection;
            g.users.push_back({sample_user_position(g, r, radius, rng), r});
        }
        g.validate();
        return g;
    }

    std::vector<Cell> cells(const ExperimentSpec &spec)
    {
        std::vector<Cell> out;
        for (const auto &s : spec.schemes)
            for (double a : spec.axis)
                for (auto seed : spec.seeds)
                    out.push_back({s, a, spec.seed_base + seed});
        return out;
    }

    Scenario cell_scenario(const ExperimentSpec &spec, double axis, std::uint64_t seed)
    {
        const auto &o = spec.scenario;
        int N = o.n_antennas, M = o.n_elements, K = o.n_users;
        switch (spec.figure)
        {
        case Figure::convergence:
        case Figure::vs_M:
            M = static_cast<int>(axis);
            break;
        case Figure::single_antenna:
            N = 1;
            M = static_cast<int>(axis);
            break;
        case Figure::vs_N:
            N = static_cast<int>(axis);
            break;
        case Figure::vs_users_tdma:
            K = static_cast<int>(axis);
            break;
        case Figure::vs_tau0:
        case Figure::vs_location:
            break;
        }
        const auto geometry = spec.figure == Figure::vs_location ? location_geometry(N, M, axis)
                                                                 : multi_user_geometry(N, M, K, o.user_radius, seed);
        FadingParams fading;
        fading.rician_k_factor = o.rician_k;
        fading.bandwidth = o.bandwidth;
        fading.carrier_frequency = o.carrier_frequency;
        SystemParams params;
        params.P_A = o.P_A;
        params.eta = o.eta;
        params.sigma2 = dbm_to_watt(o.noise_dbm);
        return make_scenario(geometry, fading, params, seed);
    }

    CellOutput run_cell(const ExperimentSpec &spec, const Scheme &scheme, double axis, std::uint64_t seed)
    {
        CellOutput out;
        auto &r = out.record;
        r.spec_hash = spec_hash(spec);
        r.scheme = scheme.name();
        r.axis = axis;
        r.seed = seed;
        const auto t0 = std::chrono::steady_clock::now();
        try
        {
            const auto base = cell_scenario(spec, axis, seed);
            const auto scenario = scheme_scenario(spec, scheme, base, axis);
            auto ec = es_config(spec, seed);
            if (scheme.baseline == BaselineKind::es_noma_gr)
                ec.passive = es::PassiveMethod::randomization;

            if (spec.figure == Figure::vs_tau0)
            {
                auto inner = es::bcd_inner(axis, es::initial_state(scenario, axis, ec), scenario, ec);
                r.gamma = inner.solution.gamma;
                r.rates = inner.report.rates;
                r.tau0 = {inner.solution.tau0};
                r.tau1 = {inner.solution.tau1};
                r.iterations = inner.iterations;
                r.ok = inner.report.feasible();
                r.status = es_status(inner.trace, nullptr, inner.report);
                out.inner = std::move(inner);
            }
            else
            {
                auto o = baselines::solve(scenario, scheme.strategy, ec, ts_config(spec, seed));
                r.gamma = o.gamma();
                r.rates = o.report().rates;
                r.ok = o.report().feasible();
                if (o.es)
                {
                    const auto &e = *o.es;
                    r.tau0 = {e.solution.tau0};
                    r.tau1 = {e.solution.tau1};
                    r.iterations = e.grid[e.best_index].iterations;
                    r.status = es_status(e.trace, &e.grid, e.report);
                    if (spec.figure == Figure::convergence)
                        for (const auto &t : e.trace)
                            if (t.tau0 == e.solution.tau0 && t.block == es::Block::uplink)
                                r.trace.push_back(t.gamma);
                }
                else
                {
                    const auto &t = *o.ts;
                    r.tau0 = t.solution.tau0;
                    r.tau1 = t.solution.tau1;
                    r.iterations = 1;
                    int closed = 0;
                    for (const auto &p : t.downlink)
                        closed += p.closed_form;
                    for (const auto &p : t.uplink)
                        closed += p.closed_form;
                    r.status = "feasible=" + std::to_string(t.report.feasible()) +
                               ";closed_form_passive=" + std::to_string(closed);
                }
                out.outcome = std::move(o);
            }
            r.throughput = r.gamma * spec.scenario.bandwidth;
            if (!r.ok)
                r.status = "infeasible: " + r.status;
        }
        catch (const std::exception &e)
        {
            r.ok = false;
            r.status = std::string("error: ") + e.what();
        }
        r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return out;
    }

    const std::vector<std::string> &csv_header()
    {
        static const std::vector<std::string> h{"spec_hash", "scheme",     "axis",     "seed",      "gamma",
                                                "throughput", "rates",     "tau0",     "tau1",      "iterations",
                                                "wall_time",  "ok",        "status",   "trace"};
        return h;
    }

    std::string to_csv_row(const ResultRecord &r)
    {
        std::vector<std::string> f{r.spec_hash,
                                   r.scheme,
                                   fmt(r.axis),
                                   std::to_string(r.seed),
                                   fmt(r.gamma),
                                   fmt(r.throughput),
                                   join(r.rates),
                                   join(r.tau0),
                                   join(r.tau1),
                                   std::to_string(r.iterations),
                                   fmt(r.wall_time),
                                   r.ok ? "1" : "0",
                                   r.status,
                                   join(r.trace)};
        std::string line;
        for (std::size_t i = 0; i < f.size(); ++i)
        {
            if (i)
                line += ',';
            line += quote(f[i]);
        }
        return line;
    }

    ResultRecord parse_csv_row(const std::string &line)
    {
        const auto f = split_csv(line);
        if (f.size() != csv_header().size())
            throw DomainError("csv row has " + std::to_string(f.size()) + " fields, expected " +
                              std::to_string(csv_header().size()));
        ResultRecord r;
        try
        {
            r.spec_hash = f[0];
            r.scheme = f[1];
            r.axis = std::stod(f[2]);
            r.seed = std::stoull(f[3]);
            r.gamma = std::stod(f[4]);
            r.throughput = std::stod(f[5]);
            r.rates = split_doubles(f[6]);
            r.tau0 = split_doubles(f[7]);
            r.tau1 = split_doubles(f[8]);
            r.iterations = std::stoi(f[9]);
            r.wall_time = std::stod(f[10]);
            r.ok = f[11] == "1";
            r.status = f[12];
            r.trace = split_doubles(f[13]);
        }
        catch (const std::logic_error &)
        {
            throw DomainError("malformed csv row: " + line);
        }
        return r;
    }

    std::vector<ResultRecord> read_csv(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw DomainError("cannot open " + path);
        std::string line;
        std::vector<ResultRecord> out;
        if (!std::getline(in, line))
            return out;
        std::string header;
        for (std::size_t i = 0; i < csv_header().size(); ++i)
            header += (i ? "," : "") + csv_header()[i];
        if (line != header)
            throw DomainError(path + " does not start with the result header");
        while (std::getline(in, line))
            if (!line.empty())
                out.push_back(parse_csv_row(line));
        return out;
    }

    std::vector<ResultRecord> run(const ExperimentSpec &spec, const RunOptions &options)
    {
        spec.validate();
        const auto path = output_path(spec, options);
        const auto started = now_utc();
        if (auto dir = std::filesystem::path(path).parent_path(); !dir.empty())
            std::filesystem::create_directories(dir);
        std::ofstream out(path, std::ios::trunc);
        if (!out)
            throw DomainError("cannot write " + path);
        for (std::size_t i = 0; i < csv_header().size(); ++i)
            out << (i ? "," : "") << csv_header()[i];
        out << "\n";
        std::vector<ResultRecord> records;
        execute(spec, cells(spec), out, options, records);
        out.close();
        write_sidecar(path, spec, records, options.workers, started, false);
        return records;
    }

    std::vector<ResultRecord> resume(const ExperimentSpec &spec, const RunOptions &options)
    {
        spec.validate();
        const auto path = output_path(spec, options);
        if (!std::filesystem::exists(path))
            return run(spec, options);
        const auto started = now_utc();
        const auto hash = spec_hash(spec);
        auto existing = read_csv(path);
        if (existing.empty() && std::filesystem::file_size(path) == 0)
            return run(spec, options);
        for (const auto &r : existing)
            if (r.spec_hash != hash)
                throw DomainError("results in " + path + " belong to spec " + r.spec_hash + ", not " + hash);

        std::map<std::string, ResultRecord> have;
        for (const auto &r : existing)
            have[cell_key(r.scheme, r.axis, r.seed)] = r;
        std::vector<Cell> todo;
        for (const auto &c : cells(spec))
            if (!have.count(cell_key(c.scheme.name(), c.axis, c.seed)))
                todo.push_back(c);

        std::ofstream out(path, std::ios::app);
        if (!out)
            throw DomainError("cannot append to " + path);
        std::vector<ResultRecord> fresh;
        execute(spec, todo, out, options, fresh);
        out.close();
        existing.insert(existing.end(), fresh.begin(), fresh.end());
        auto ordered = in_cell_order(spec, existing);
        write_sidecar(path, spec, ordered, options.workers, started, true);
        return ordered;
    }
}
