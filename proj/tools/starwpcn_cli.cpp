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

// Command-line front end over the C interface.
//
//   starwpcn validate  --spec vs_m.json
//   starwpcn run       --spec vs_m.json --out results/vs_m.csv --workers 4
//   starwpcn resume    --spec vs_m.json --out results/vs_m.csv
//   starwpcn summarize --out results/vs_m.csv
//
// Exit status: 0 when every cell succeeded and every enabled trend check
// passed, 1 when a cell failed or a trend check did not hold, 2 on usage,
// spec or I/O errors.

#include <cstdio>
#include <memory>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "starwpcn/starwpcn.h"

namespace
{
    struct SpecDeleter
    {
        void operator()(starwpcn_spec *s) const { starwpcn_spec_free(s); }
    };
    struct SummaryDeleter
    {
        void operator()(starwpcn_summary *s) const { starwpcn_summary_free(s); }
    };
    using SpecPtr = std::unique_ptr<starwpcn_spec, SpecDeleter>;
    using SummaryPtr = std::unique_ptr<starwpcn_summary, SummaryDeleter>;

    int report_error(starwpcn_status s)
    {
        std::fprintf(stderr, "starwpcn: %s: %s\n", starwpcn_status_string(s), starwpcn_last_error());
        return 2;
    }

    std::string text(starwpcn_status (*get)(const starwpcn_spec *, char *, size_t, size_t *), const starwpcn_spec *s)
    {
        size_t need = 0;
        get(s, nullptr, 0, &need);
        std::string buf(need, '\0');
        if (get(s, buf.data(), buf.size(), &need) != STARWPCN_OK)
            return {};
        buf.resize(need - 1);
        return buf;
    }

    void progress(void *, size_t done, size_t total, const char *scheme, double axis, uint64_t seed, double gamma,
                  int ok)
    {
        std::fprintf(stderr, "[%zu/%zu] %-22s axis=%-8g seed=%-6llu gamma=%.6g%s\n", done, total, scheme, axis,
                     static_cast<unsigned long long>(seed), gamma, ok ? "" : "  FAILED");
    }

    int print_summary(const starwpcn_summary *s)
    {
        std::printf("%-24s %10s %6s %6s %14s %14s\n", "scheme", "axis", "cells", "failed", "mean_gamma", "std_gamma");
        for (size_t i = 0; i < starwpcn_summary_row_count(s); ++i)
        {
            const char *scheme = nullptr;
            double axis = 0, mean = 0, sd = 0;
            int count = 0, failures = 0;
            starwpcn_summary_row(s, i, &scheme, &axis, &count, &failures, &mean, &sd);
            std::printf("%-24s %10g %6d %6d %14.6g %14.6g\n", scheme, axis, count, failures, mean, sd);
        }
        const size_t nt = starwpcn_summary_trend_count(s);
        if (nt)
            std::printf("\ntrend checks:\n");
        for (size_t i = 0; i < nt; ++i)
        {
            const char *name = nullptr, *detail = nullptr;
            int pass = 0;
            starwpcn_summary_trend(s, i, &name, &pass, &detail);
            std::printf("  %s  %s  [%s]\n", pass ? "PASS" : "FAIL", name, detail);
        }
        return starwpcn_summary_cells_ok(s) && starwpcn_summary_trends_ok(s) ? 0 : 1;
    }

    int load(const std::string &path, const std::string &out, long long seed_base, SpecPtr &spec)
    {
        starwpcn_spec *raw = nullptr;
        if (auto s = starwpcn_spec_load(path.c_str(), &raw); s != STARWPCN_OK)
            return report_error(s);
        spec.reset(raw);
        if (seed_base >= 0)
            starwpcn_spec_set_seed_base(spec.get(), static_cast<uint64_t>(seed_base));
        if (!out.empty())
            starwpcn_spec_set_output(spec.get(), out.c_str());
        return 0;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Max-min throughput sweeps for STAR-RIS assisted wireless powered networks"};
    app.require_subcommand(1);
    app.set_version_flag("--version", starwpcn_version());

    std::string spec_path, out_path;
    int workers = 1;
    long long seed_base = -1;

    auto add_run_flags = [&](CLI::App *sub)
    {
        sub->add_option("--spec", spec_path, "Experiment spec (JSON)")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_path, "Result CSV; overrides the spec's output field");
        sub->add_option("--workers", workers, "Parallel cells")
            ->check(CLI::Range(1, 1024))
            ->default_val(std::max(1u, std::thread::hardware_concurrency()));
        sub->add_option("--seed-base", seed_base, "Offset added to every seed")->check(CLI::NonNegativeNumber);
    };

    auto *run = app.add_subcommand("run", "Run every cell of a spec");
    add_run_flags(run);
    auto *resume = app.add_subcommand("resume", "Run only the cells missing from an existing result file");
    add_run_flags(resume);
    auto *summarize = app.add_subcommand("summarize", "Seed-averaged table and trend checks of a result file");
    std::string summary_spec;
    summarize->add_option("--out", out_path, "Result CSV")->required()->check(CLI::ExistingFile);
    summarize->add_option("--spec", summary_spec, "Spec for trend checks (default: the sidecar's copy)");
    bool as_json = false;
    summarize->add_flag("--json", as_json, "Print the summary as JSON");
    auto *validate = app.add_subcommand("validate", "Check a spec and print its hash and cell count");
    validate->add_option("--spec", spec_path, "Experiment spec (JSON)")->required()->check(CLI::ExistingFile);
    validate->add_option("--seed-base", seed_base, "Offset added to every seed")->check(CLI::NonNegativeNumber);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (validate->parsed())
    {
        SpecPtr spec;
        if (int rc = load(spec_path, "", seed_base, spec))
            return rc;
        size_t cells = 0;
        starwpcn_spec_cell_count(spec.get(), &cells);
        std::printf("spec ok\nhash %s\ncells %zu\n", text(starwpcn_spec_hash, spec.get()).c_str(), cells);
        return 0;
    }

    if (run->parsed() || resume->parsed())
    {
        SpecPtr spec;
        if (int rc = load(spec_path, out_path, seed_base, spec))
            return rc;
        if (text(starwpcn_spec_output, spec.get()).empty())
        {
            std::fprintf(stderr, "starwpcn: no output file; pass --out or set \"output\" in the spec\n");
            return 2;
        }
        starwpcn_summary *raw = nullptr;
        const auto s = starwpcn_run(spec.get(), workers, resume->parsed() ? 1 : 0, progress, nullptr, &raw);
        if (s != STARWPCN_OK)
            return report_error(s);
        SummaryPtr summary(raw);
        std::printf("results: %s\n\n", text(starwpcn_spec_output, spec.get()).c_str());
        return print_summary(summary.get());
    }

    SpecPtr spec;
    if (!summary_spec.empty())
        if (int rc = load(summary_spec, "", -1, spec))
            return rc;
    starwpcn_summary *raw = nullptr;
    if (auto s = starwpcn_summarize_file(out_path.c_str(), spec.get(), &raw); s != STARWPCN_OK)
        return report_error(s);
    SummaryPtr summary(raw);
    if (as_json)
    {
        size_t need = 0;
        starwpcn_summary_json(summary.get(), nullptr, 0, &need);
        std::string buf(need, '\0');
        starwpcn_summary_json(summary.get(), buf.data(), buf.size(), &need);
        std::printf("%s\n", buf.c_str());
        return starwpcn_summary_cells_ok(summary.get()) && starwpcn_summary_trends_ok(summary.get()) ? 0 : 1;
    }
    return print_summary(summary.get());
}
