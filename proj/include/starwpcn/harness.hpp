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

#ifndef STARWPCN_HARNESS_HPP
#define STARWPCN_HARNESS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "starwpcn/baselines.hpp"

// Declarative sweeps: a JSON spec expands to (scheme x axis x seed) cells,
// each cell is one solver run, results go to CSV plus a JSON sidecar.
namespace starwpcn::harness
{
    enum class Figure
    {
        convergence,    // axis: M; per-iteration gamma of the best WPT duration
        single_antenna, // axis: M with one HAP antenna
        vs_N,           // axis: HAP antennas
        vs_M,           // axis: surface elements
        vs_tau0,        // axis: fixed WPT duration (energy splitting only)
        vs_location,    // axis: surface x coordinate, users fixed on the x axis
        vs_users_tdma   // axis: number of users (time switching only)
    };

    const char *to_string(Figure f);
    std::optional<Figure> parse_figure(const std::string &s);

    // A pipeline and, optionally, the baseline it is run as.
    struct Scheme
    {
        baselines::Strategy strategy = baselines::Strategy::noma;
        std::optional<baselines::BaselineKind> baseline;

        std::string name() const; // e.g. star_noma, no_ris_tdma, es_noma_gr
        static std::optional<Scheme> parse(const std::string &name);
        bool operator==(const Scheme &) const = default;
    };

    struct ScenarioOverrides
    {
        int n_antennas = 4;
        int n_elements = 16;
        int n_users = 2;
        double P_A = 5.0;
        double eta = 0.8;
        double noise_dbm = -90.0;
        double rician_k = 2.0;
        double bandwidth = 1e6;
        double carrier_frequency = 750e6;
        double user_radius = 1.0;
    };

    struct SolverSettings
    {
        double tau_step = 0.1;
        double inner_tolerance = 1e-5;
        double penalty_tolerance = 1e-5;
        int max_inner_iterations = 30;
        int draws = 1000;
    };

    struct ExperimentSpec
    {
        Figure figure = Figure::vs_M;
        std::vector<double> axis;
        std::vector<Scheme> schemes;
        std::vector<std::uint64_t> seeds;
        std::uint64_t seed_base = 0; // added to every seed
        ScenarioOverrides scenario;
        SolverSettings solver;
        bool trends = true;
        std::string output; // CSV path; may be overridden on the command line

        // Throws DomainError naming the first problem found.
        void validate() const;
    };

    // Reads a spec; absent fields keep their defaults, unknown fields are
    // rejected. Throws DomainError on malformed input.
    ExperimentSpec parse_spec(const std::string &json_text);
    ExperimentSpec load_spec(const std::string &path);
    std::string to_json(const ExperimentSpec &spec);

    // FNV-1a over the canonical JSON of everything that affects results
    // (the output path does not), as 16 hex digits.
    std::string spec_hash(const ExperimentSpec &spec);

    struct ResultRecord
    {
        std::string spec_hash;
        std::string scheme;
        double axis = 0.0;
        std::uint64_t seed = 0;
        double gamma = 0.0;          // bit/s/Hz
        double throughput = 0.0;     // bit/s, gamma times bandwidth
        std::vector<double> rates;   // per user, bit/s/Hz
        std::vector<double> tau0;    // one entry (shared WPT) or one per user
        std::vector<double> tau1;
        int iterations = 0;
        double wall_time = 0.0;
        bool ok = false;
        std::string status;          // solver outcome summary or error text
        std::vector<double> trace;   // convergence figure only
    };

    // Scenario of one cell, before any baseline transformation.
    Scenario cell_scenario(const ExperimentSpec &spec, double axis, std::uint64_t seed);

    // Full output of one cell; the record plus the raw solver result.
    struct CellOutput
    {
        ResultRecord record;
        std::optional<baselines::Outcome> outcome;
        std::optional<es::InnerResult> inner; // vs_tau0 only
    };

    CellOutput run_cell(const ExperimentSpec &spec, const Scheme &scheme, double axis, std::uint64_t seed);

    struct RunOptions
    {
        int workers = 1;
        std::string output; // overrides spec.output when nonempty
        // Called under the emission lock after each record is written.
        std::function<void(const CellOutput &)> on_cell;
    };

    struct Cell
    {
        Scheme scheme;
        double axis = 0.0;
        std::uint64_t seed = 0;
    };

    // Every cell of the spec in a fixed order (scheme, axis, seed).
    std::vector<Cell> cells(const ExperimentSpec &spec);

    // Runs every cell (fresh output file) and returns the records in cell order.
    std::vector<ResultRecord> run(const ExperimentSpec &spec, const RunOptions &options = {});

    // Keeps the records already on disk and runs only the missing cells.
    // Throws DomainError if the file belongs to a different spec.
    std::vector<ResultRecord> resume(const ExperimentSpec &spec, const RunOptions &options = {});

    // CSV I/O with the fixed header.
    const std::vector<std::string> &csv_header();
    std::string to_csv_row(const ResultRecord &r);
    ResultRecord parse_csv_row(const std::string &line);
    std::vector<ResultRecord> read_csv(const std::string &path);

    struct SummaryRow
    {
        std::string scheme;
        double axis = 0.0;
        int count = 0;
        int failures = 0;
        double mean = 0.0;
        double stddev = 0.0; // population, over successful seeds
    };

    struct TrendCheck
    {
        std::string name;
        bool pass = false;
        std::string detail;
    };

    struct Summary
    {
        std::string spec_hash;
        std::vector<SummaryRow> rows;
        std::vector<TrendCheck> trends;
        bool all_cells_ok = true;
        bool all_trends_pass() const;
    };

    // Throws DomainError on mixed spec hashes.
    Summary summarize(const std::vector<ResultRecord> &records);
    // Adds the trend checks relevant to the figure.
    Summary summarize(const std::vector<ResultRecord> &records, const ExperimentSpec &spec);
    std::string summary_json(const Summary &summary);

    // Users at (9,0,0) (reflection side) and (11,0,0) (transmission side),
    // surface on the line between them at x.
    ScenarioGeometry location_geometry(int n_antennas, int n_elements, double x);
    // K users alternating between the two half-planes, uniform in the
    // radius-r semicircles.
    ScenarioGeometry multi_user_geometry(int n_antennas, int n_elements, int n_users, double radius,
                                         std::uint64_t seed);
}

#endif
