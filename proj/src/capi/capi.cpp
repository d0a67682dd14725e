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

#include "starwpcn/starwpcn.h"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "starwpcn/harness.hpp"

struct starwpcn_spec
{
    starwpcn::harness::ExperimentSpec spec;
};

struct starwpcn_summary
{
    starwpcn::harness::Summary summary;
};

namespace
{
    using namespace starwpcn;

    thread_local std::string last_error;

    starwpcn_status fail(starwpcn_status s, const std::string &msg)
    {
        last_error = msg;
        return s;
    }

    starwpcn_status null_arg(const char *what) { return fail(STARWPCN_ERR_ARGUMENT, std::string(what) + " is null"); }

    // Maps exceptions thrown below the boundary to status codes.
    template <class F>
    starwpcn_status guarded(F &&f)
    {
        try
        {
            last_error.clear();
            return f();
        }
        catch (const DomainError &e)
        {
            const std::string what = e.what();
            if (what.find("belong to spec") != std::string::npos)
                return fail(STARWPCN_ERR_HASH_MISMATCH, what);
            if (what.rfind("spec:", 0) == 0)
                return fail(STARWPCN_ERR_SPEC, what);
            if (what.find("cannot ") != std::string::npos)
                return fail(STARWPCN_ERR_IO, what);
            return fail(STARWPCN_ERR_SPEC, what);
        }
        catch (const StructureError &e)
        {
            return fail(STARWPCN_ERR_ARGUMENT, e.what());
        }
        catch (const SolverError &e)
        {
            return fail(STARWPCN_ERR_SOLVER, e.what());
        }
        catch (const std::filesystem::filesystem_error &e)
        {
            return fail(STARWPCN_ERR_IO, e.what());
        }
        catch (const std::exception &e)
        {
            return fail(STARWPCN_ERR_INTERNAL, e.what());
        }
        catch (...)
        {
            return fail(STARWPCN_ERR_INTERNAL, "unknown exception");
        }
    }

    starwpcn_status copy_out(const std::string &s, char *buf, size_t len, size_t *needed)
    {
        if (needed)
            *needed = s.size() + 1;
        if (!buf || len < s.size() + 1)
            return fail(STARWPCN_ERR_BUFFER, "buffer too small");
        std::memcpy(buf, s.c_str(), s.size() + 1);
        return STARWPCN_OK;
    }
}

extern "C" {

const char *starwpcn_version(void) { return "1.0.0"; }

const char *starwpcn_last_error(void) { return last_error.c_str(); }

const char *starwpcn_status_string(starwpcn_status status)
{
    switch (status)
    {
    case STARWPCN_OK:
        return "ok";
    case STARWPCN_ERR_ARGUMENT:
        return "invalid argument";
    case STARWPCN_ERR_SPEC:
        return "invalid spec";
    case STARWPCN_ERR_IO:
        return "i/o error";
    case STARWPCN_ERR_HASH_MISMATCH:
        return "spec hash mismatch";
    case STARWPCN_ERR_SOLVER:
        return "solver failure";
    case STARWPCN_ERR_INTERNAL:
        return "internal error";
    case STARWPCN_ERR_BUFFER:
        return "buffer too small";
    }
    return "unknown status";
}

starwpcn_status starwpcn_spec_load(const char *path, starwpcn_spec **out)
{
    if (!path)
        return null_arg("path");
    if (!out)
        return null_arg("out");
    *out = nullptr;
    return guarded(
        [&]
        {
            std::ifstream in(path);
            if (!in)
                return fail(STARWPCN_ERR_IO, std::string("cannot open spec file ") + path);
            std::stringstream ss;
            ss << in.rdbuf();
            *out = new starwpcn_spec{harness::parse_spec(ss.str())};
            return STARWPCN_OK;
        });
}

starwpcn_status starwpcn_spec_parse(const char *json_text, starwpcn_spec **out)
{
    if (!json_text)
        return null_arg("json_text");
    if (!out)
        return null_arg("out");
    *out = nullptr;
    return guarded(
        [&]
        {
            *out = new starwpcn_spec{harness::parse_spec(json_text)};
            return STARWPCN_OK;
        });
}

void starwpcn_spec_free(starwpcn_spec *spec) { delete spec; }

starwpcn_status starwpcn_spec_set_seed_base(starwpcn_spec *spec, uint64_t seed_base)
{
    if (!spec)
        return null_arg("spec");
    spec->spec.seed_base = seed_base;
    return STARWPCN_OK;
}

starwpcn_status starwpcn_spec_set_output(starwpcn_spec *spec, const char *path)
{
    if (!spec)
        return null_arg("spec");
    if (!path)
        return null_arg("path");
    spec->spec.output = path;
    return STARWPCN_OK;
}

starwpcn_status starwpcn_spec_output(const starwpcn_spec *spec, char *buf, size_t len, size_t *needed)
{
    if (!spec)
        return null_arg("spec");
    return copy_out(spec->spec.output, buf, len, needed);
}

starwpcn_status starwpcn_spec_hash(const starwpcn_spec *spec, char *buf, size_t len, size_t *needed)
{
    if (!spec)
        return null_arg("spec");
    return copy_out(harness::spec_hash(spec->spec), buf, len, needed);
}

starwpcn_status starwpcn_spec_cell_count(const starwpcn_spec *spec, size_t *out)
{
    if (!spec)
        return null_arg("spec");
    if (!out)
        return null_arg("out");
    *out = harness::cells(spec->spec).size();
    return STARWPCN_OK;
}

starwpcn_status starwpcn_run(const starwpcn_spec *spec, int workers, int resume, starwpcn_progress_fn progress,
                             void *user, starwpcn_summary **summary)
{
    if (!spec)
        return null_arg("spec");
    if (workers < 1)
        return fail(STARWPCN_ERR_ARGUMENT, "workers must be >= 1");
    if (summary)
        *summary = nullptr;
    return guarded(
        [&]
        {
            harness::RunOptions opt;
            opt.workers = workers;
            const std::size_t total = harness::cells(spec->spec).size();
            std::size_t done = 0;
            if (progress)
                opt.on_cell = [&](const harness::CellOutput &c)
                {
                    ++done;
                    const auto &r = c.record;
                    progress(user, done, total, r.scheme.c_str(), r.axis, r.seed, r.gamma, r.ok ? 1 : 0);
                };
            const auto records = resume ? harness::resume(spec->spec, opt) : harness::run(spec->spec, opt);
            if (summary)
                *summary = new starwpcn_summary{harness::summarize(records, spec->spec)};
            return STARWPCN_OK;
        });
}

starwpcn_status starwpcn_summarize_file(const char *csv_path, const starwpcn_spec *spec, starwpcn_summary **out)
{
    if (!csv_path)
        return null_arg("csv_path");
    if (!out)
        return null_arg("out");
    *out = nullptr;
    return guarded(
        [&]
        {
            const auto records = harness::read_csv(csv_path);
            if (spec)
            {
                *out = new starwpcn_summary{harness::summarize(records, spec->spec)};
                return STARWPCN_OK;
            }
            const std::string sidecar = std::string(csv_path) + ".json";
            if (std::filesystem::exists(sidecar))
            {
                std::ifstream in(sidecar);
                const auto j = nlohmann::json::parse(in, nullptr, false);
                if (!j.is_discarded() && j.contains("spec"))
                {
                    const auto s = harness::parse_spec(j["spec"].dump());
                    *out = new starwpcn_summary{harness::summarize(records, s)};
                    return STARWPCN_OK;
                }
            }
            *out = new starwpcn_summary{harness::summarize(records)};
            return STARWPCN_OK;
        });
}

void starwpcn_summary_free(starwpcn_summary *summary) { delete summary; }

size_t starwpcn_summary_row_count(const starwpcn_summary *summary)
{
    return summary ? summary->summary.rows.size() : 0;
}

starwpcn_status starwpcn_summary_row(const starwpcn_summary *summary, size_t index, const char **scheme, double *axis,
                                     int *count, int *failures, double *mean, double *stddev)
{
    if (!summary)
        return null_arg("summary");
    if (index >= summary->summary.rows.size())
        return fail(STARWPCN_ERR_ARGUMENT, "row index out of range");
    const auto &r = summary->summary.rows[index];
    if (scheme)
        *scheme = r.scheme.c_str();
    if (axis)
        *axis = r.axis;
    if (count)
        *count = r.count;
    if (failures)
        *failures = r.failures;
    if (mean)
        *mean = r.mean;
    if (stddev)
        *stddev = r.stddev;
    return STARWPCN_OK;
}

size_t starwpcn_summary_trend_count(const starwpcn_summary *summary)
{
    return summary ? summary->summary.trends.size() : 0;
}

starwpcn_status starwpcn_summary_trend(const starwpcn_summary *summary, size_t index, const char **name, int *pass,
                                       const char **detail)
{
    if (!summary)
        return null_arg("summary");
    if (index >= summary->summary.trends.size())
        return fail(STARWPCN_ERR_ARGUMENT, "trend index out of range");
    const auto &t = summary->summary.trends[index];
    if (name)
        *name = t.name.c_str();
    if (pass)
        *pass = t.pass ? 1 : 0;
    if (detail)
        *detail = t.detail.c_str();
    return STARWPCN_OK;
}

int starwpcn_summary_cells_ok(const starwpcn_summary *summary)
{
    return summary && summary->summary.all_cells_ok ? 1 : 0;
}

int starwpcn_summary_trends_ok(const starwpcn_summary *summary)
{
    return summary && summary->summary.all_trends_pass() ? 1 : 0;
}

starwpcn_status starwpcn_summary_json(const starwpcn_summary *summary, char *buf, size_t len, size_t *needed)
{
    if (!summary)
        return null_arg("summary");
    return guarded([&] { return copy_out(harness::summary_json(summary->summary), buf, len, needed); });
}

starwpcn_status starwpcn_solve_cell(const starwpcn_spec *spec, const char *scheme, double axis, uint64_t seed,
                                    double *gamma, int *ok)
{
    if (!spec)
        return null_arg("spec");
    if (!scheme)
        return null_arg("scheme");
    return guarded(
        [&]
        {
            const auto s = harness::Scheme::parse(scheme);
            if (!s)
                return fail(STARWPCN_ERR_ARGUMENT, std::string("unknown scheme ") + scheme);
            const auto out = harness::run_cell(spec->spec, *s, axis, seed);
            if (gamma)
                *gamma = out.record.gamma;
            if (ok)
                *ok = out.record.ok ? 1 : 0;
            if (!out.record.ok && out.record.status.rfind("error: ", 0) == 0)
                return fail(STARWPCN_ERR_SOLVER, out.record.status);
            return STARWPCN_OK;
        });
}
}
