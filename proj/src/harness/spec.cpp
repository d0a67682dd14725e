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

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace starwpcn::harness
{
    using json = nlohmann::json;

    namespace
    {
        constexpr Figure all_figures[] = {Figure::convergence, Figure::single_antenna, Figure::vs_N,
                                          Figure::vs_M,        Figure::vs_tau0,        Figure::vs_location,
                                          Figure::vs_users_tdma};

        [[noreturn]] void fail(const std::string &what) { throw DomainError("spec: " + what); }

        // Copies obj[key] into out when present, rejecting wrong types.
        template <class T>
        void take(const json &obj, const char *key, T &out, std::set<std::string> &seen)
        {
            seen.insert(key);
            auto it = obj.find(key);
            if (it == obj.end())
                return;
            try
            {
                out = it->get<T>();
            }
            catch (const json::exception &)
            {
                fail(std::string("field '") + key + "' has the wrong type");
            }
        }

        void reject_unknown(const json &obj, const std::set<std::string> &seen, const std::string &where)
        {
            for (auto it = obj.begin(); it != obj.end(); ++it)
                if (!seen.count(it.key()))
                    fail("unknown field '" + it.key() + "' in " + where);
        }

        bool integral(double x) { return std::isfinite(x) && x == std::floor(x); }

        json canonical(const ExperimentSpec &s, bool with_output)
        {
            json j;
            j["figure"] = to_string(s.figure);
            j["axis"] = s.axis;
            std::vector<std::string> names;
            for (const auto &sc : s.schemes)
                names.push_back(sc.name());
            j["schemes"] = names;
            j["seeds"] = s.seeds;
            j["seed_base"] = s.seed_base;
            const auto &o = s.scenario;
            j["scenario"] = {{"n_antennas", o.n_antennas},
                             {"n_elements", o.n_elements},
                             {"n_users", o.n_users},
                             {"P_A", o.P_A},
                             {"eta", o.eta},
                             {"noise_dbm", o.noise_dbm},
                             {"rician_k", o.rician_k},
                             {"bandwidth", o.bandwidth},
                             {"carrier_frequency", o.carrier_frequency},
                             {"user_radius", o.user_radius}};
            const auto &v = s.solver;
            j["solver"] = {{"tau_step", v.tau_step},
                           {"inner_tolerance", v.inner_tolerance},
                           {"penalty_tolerance", v.penalty_tolerance},
                           {"max_inner_iterations", v.max_inner_iterations},
                           {"draws", v.draws}};
            j["trends"] = s.trends;
            if (with_output)
                j["output"] = s.output;
            return j;
        }
    }

    const char *to_string(Figure f)
    {
        switch (f)
        {
        case Figure::convergence:
            return "convergence";
        case Figure::single_antenna:
            return "single_antenna";
        case Figure::vs_N:
            return "vs_N";
        case Figure::vs_M:
            return "vs_M";
        case Figure::vs_tau0:
            return "vs_tau0";
        case Figure::vs_location:
            return "vs_location";
        case Figure::vs_users_tdma:
            return "vs_users_tdma";
        }
        return "?";
    }

    std::optional<Figure> parse_figure(const std::string &s)
    {
        for (auto f : all_figures)
            if (s == to_string(f))
                return f;
        return std::nullopt;
    }

    std::string Scheme::name() const
    {
        if (!baseline)
            return std::string("star_") + baselines::to_string(strategy);
        if (*baseline == baselines::BaselineKind::es_noma_gr)
            return "es_noma_gr";
        return std::string(baselines::to_string(*baseline)) + "_" + baselines::to_string(strategy);
    }

    std::optional<Scheme> Scheme::parse(const std::string &name)
    {
        if (name == "es_noma_gr")
            return Scheme{baselines::Strategy::noma, baselines::BaselineKind::es_noma_gr};
        const auto cut = name.rfind('_');
        if (cut == std::string::npos)
            return std::nullopt;
        const auto strategy = baselines::parse_strategy(name.substr(cut + 1));
        if (!strategy)
            return std::nullopt;
        const std::string head = name.substr(0, cut);
        if (head == "star")
            return Scheme{*strategy, std::nullopt};
        const auto kind = baselines::parse_baseline(head);
        if (!kind || *kind == baselines::BaselineKind::es_noma_gr)
            return std::nullopt;
        return Scheme{*strategy, kind};
    }

    void ExperimentSpec::validate() const
    {
        if (axis.empty())
            fail("axis must not be empty");
        if (seeds.empty())
            fail("seeds must not be empty");
        if (schemes.empty())
            fail("schemes must not be empty");
        std::set<std::string> names;
        for (const auto &s : schemes)
            if (!names.insert(s.name()).second)
                fail("scheme " + s.name() + " listed twice");
        std::set<double> values(axis.begin(), axis.end());
        if (values.size() != axis.size())
            fail("axis values must be distinct");
        std::set<std::uint64_t> seed_set(seeds.begin(), seeds.end());
        if (seed_set.size() != seeds.size())
            fail("seeds must be distinct");

        const auto &o = scenario;
        if (o.n_antennas < 1 || o.n_elements < 0)
            fail("n_antennas >= 1 and n_elements >= 0 required");
        if (o.n_users < 2)
            fail("at least two users required");
        if (o.n_users != 2 && figure != Figure::vs_users_tdma)
            fail("n_users other than 2 is only supported by vs_users_tdma");
        if (!(o.P_A >= 0.0) || !(o.eta > 0.0 && o.eta <= 1.0) || !std::isfinite(o.noise_dbm))
            fail("invalid P_A, eta or noise_dbm");
        if (!(o.rician_k >= 0.0) || !(o.bandwidth > 0.0) || !(o.carrier_frequency > 0.0) || !(o.user_radius > 0.0))
            fail("invalid fading or placement parameters");
        const auto &v = solver;
        if (!(v.tau_step > 0.0 && v.tau_step < 1.0) || !(v.inner_tolerance > 0.0) || !(v.penalty_tolerance > 0.0) ||
            v.max_inner_iterations < 1 || v.draws < 1)
            fail("invalid solver settings");

        for (double a : axis)
            switch (figure)
            {
            case Figure::convergence:
            case Figure::single_antenna:
            case Figure::vs_M:
                if (!integral(a) || a < 1 || a > 4096)
                    fail("axis values must be element counts >= 1");
                break;
            case Figure::vs_N:
                if (!integral(a) || a < 1 || a > 256)
                    fail("axis values must be antenna counts");
                break;
            case Figure::vs_tau0:
                if (!(a > 0.0 && a < 1.0))
                    fail("axis values must be WPT durations in (0, 1)");
                break;
            case Figure::vs_location:
                if (!(a > 9.0 && a < 11.0))
                    fail("surface x coordinate must lie strictly between the users at 9 and 11");
                break;
            case Figure::vs_users_tdma:
                if (!integral(a) || a < 2 || a > 64)
                    fail("axis values must be user counts >= 2");
                break;
            }

        for (const auto &s : schemes)
        {
            const bool noma = s.strategy == baselines::Strategy::noma;
            if (figure == Figure::vs_users_tdma && noma)
                fail("vs_users_tdma supports time switching schemes only");
            if ((figure == Figure::vs_tau0 || figure == Figure::convergence) && !noma)
                fail(std::string(to_string(figure)) + " supports energy splitting schemes only");
            const bool needs_surface = !s.baseline || *s.baseline != baselines::BaselineKind::no_ris;
            const bool axis_is_m =
                figure == Figure::vs_M || figure == Figure::single_antenna || figure == Figure::convergence;
            if (needs_surface && !axis_is_m && o.n_elements == 0)
                fail("scheme " + s.name() + " needs surface elements");
        }
    }

    ExperimentSpec parse_spec(const std::string &text)
    {
        json j;
        try
        {
            j = json::parse(text);
        }
        catch (const json::parse_error &e)
        {
            fail(std::string("not valid JSON: ") + e.what());
        }
        if (!j.is_object())
            fail("top level must be an object");

        ExperimentSpec s;
        std::set<std::string> seen;
        std::string figure;
        take(j, "figure", figure, seen);
        if (figure.empty())
            fail("field 'figure' is required");
        const auto f = parse_figure(figure);
        if (!f)
            fail("unknown figure '" + figure + "'");
        s.figure = *f;
        take(j, "axis", s.axis, seen);
        std::vector<std::string> names;
        take(j, "schemes", names, seen);
        for (const auto &n : names)
        {
            const auto sc = Scheme::parse(n);
            if (!sc)
                fail("unknown scheme '" + n + "'");
            s.schemes.push_back(*sc);
        }
        take(j, "seeds", s.seeds, seen);
        int seed_count = 0;
        take(j, "seed_count", seed_count, seen);
        if (seed_count < 0)
            fail("seed_count must be >= 0");
        if (seed_count > 0)
        {
            if (!s.seeds.empty())
                fail("give either seeds or seed_count, not both");
            for (int i = 1; i <= seed_count; ++i)
                s.seeds.push_back(static_cast<std::uint64_t>(i));
        }
        take(j, "seed_base", s.seed_base, seen);
        take(j, "trends", s.trends, seen);
        take(j, "output", s.output, seen);

        if (auto it = j.find("scenario"); it != j.end())
        {
            if (!it->is_object())
                fail("scenario must be an object");
            std::set<std::string> sub;
            auto &o = s.scenario;
            take(*it, "n_antennas", o.n_antennas, sub);
            take(*it, "n_elements", o.n_elements, sub);
            take(*it, "n_users", o.n_users, sub);
            take(*it, "P_A", o.P_A, sub);
            take(*it, "eta", o.eta, sub);
            take(*it, "noise_dbm", o.noise_dbm, sub);
            take(*it, "rician_k", o.rician_k, sub);
            take(*it, "bandwidth", o.bandwidth, sub);
            take(*it, "carrier_frequency", o.carrier_frequency, sub);
            take(*it, "user_radius", o.user_radius, sub);
            reject_unknown(*it, sub, "scenario");
        }
        seen.insert("scenario");
        if (auto it = j.find("solver"); it != j.end())
        {
            if (!it->is_object())
                fail("solver must be an object");
            std::set<std::string> sub;
            auto &v = s.solver;
            take(*it, "tau_step", v.tau_step, sub);
            take(*it, "inner_tolerance", v.inner_tolerance, sub);
            take(*it, "penalty_tolerance", v.penalty_tolerance, sub);
            take(*it, "max_inner_iterations", v.max_inner_iterations, sub);
            take(*it, "draws", v.draws, sub);
            reject_unknown(*it, sub, "solver");
        }
        seen.insert("solver");
        reject_unknown(j, seen, "spec");
        s.validate();
        return s;
    }

    ExperimentSpec load_spec(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw DomainError("cannot open spec file " + path);
        std::stringstream ss;
        ss << in.rdbuf();
        return parse_spec(ss.str());
    }

    std::string to_json(const ExperimentSpec &spec) { return canonical(spec, true).dump(2); }

    std::string spec_hash(const ExperimentSpec &spec)
    {
        const std::string text = canonical(spec, false).dump();
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (unsigned char c : text)
        {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
        return buf;
    }
}
