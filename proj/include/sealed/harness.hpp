// Copyright 2026 The Sealed State Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Experiment runner: bound sweeps, multipicture scaling and OAEP
// negligibility tables, plus CSV/JSON report emission.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace sealed {

enum class ReportFormat { csv, json };

ReportFormat report_format_from_string(const std::string &name);

struct ExperimentConfig {
    std::string experiment = "bound-sweep";
    std::uint64_t seed = 20130827;
    int trials = 500;                                  // random strategies per sweep instance
    std::vector<int> garbage_sizes{1, 2, 4, 16, 64};   // n_g values for the garbage protocol
    std::vector<int> multi_sizes{2, 4, 10};            // n values in the bound sweep
    std::vector<int> sweep_garbage_sizes{4};           // garbage instances that get random sweeps
    std::vector<int> sweep_multi_sizes{4};             // multipicture instances that get random sweeps
    std::vector<int> scaling_sizes{2, 4, 10, 100};     // multi-scaling n values
    std::vector<int> oaep_k0_values{4, 6, 8, 10, 12};  // oaep-negligibility
    std::vector<int> oaep_r_sizes{0, 1, 4, 16};
    int oaep_k0 = 4;  // instance used for the oaep basis row of the bound sweep
    int oaep_n = 16;
    std::filesystem::path out;  // empty: stdout
    ReportFormat format = ReportFormat::csv;
};

/// Parses "key = value" lines; '#' starts a comment; lists are
/// comma-separated. Unknown keys and malformed values raise config_invalid.
ExperimentConfig parse_config(const std::string &text, ExperimentConfig base = {});
ExperimentConfig load_config(const std::filesystem::path &path, ExperimentConfig base = {});

struct SweepRow {
    std::string protocol;
    std::string attack;
    double p;
    double s_exact;
    double bound;
    double margin;
    // Proof-chain terms; not part of the CSV report.
    double trace_distance;
    double convex_sum;
    double closed_form;
    bool chain_checked;  // false when the joint basis exceeds the eigensolver cap
};

inline constexpr double kMarginTolerance = 1e-9;
inline constexpr double kChainTolerance = 1e-8;

std::vector<SweepRow> run_bound_sweep(const ExperimentConfig &cfg);

/// Rows violating the margin or proof-chain invariants.
std::vector<SweepRow> invariant_violations(const std::vector<SweepRow> &rows);

struct ScalingRow {
    int n;
    double accept;
    double detection;
};

std::vector<ScalingRow> run_multipicture_scaling(const std::vector<int> &n_values, std::uint64_t seed);

struct NegligibilityRow {
    int k0;
    std::size_t r_size;
    double divergence;  // 1 - tu_overlap
    bool degenerate_u;
};

/// R is built by letting a simulated Charlie ask the human about |R| distinct
/// branch tokens; divergence comes from the state vectors.
std::vector<NegligibilityRow> run_oaep_negligibility(const std::vector<int> &k0_values,
                                                     const std::vector<int> &r_sizes, int n = 16,
                                                     std::uint64_t seed = 20130827);

/// printf("%.17g"): enough digits to read back the same double.
std::string format_double(double value);

std::string format_report(const std::vector<SweepRow> &rows, ReportFormat format);
std::string format_report(const std::vector<ScalingRow> &rows, ReportFormat format);
std::string format_report(const std::vector<NegligibilityRow> &rows, ReportFormat format);

/// Writes to `path`, or stdout when the path is empty.
void emit_report(const std::string &report, const std::filesystem::path &path);

template <typename Row>
void emit_report(const std::vector<Row> &rows, ReportFormat format, const std::filesystem::path &path) {
    emit_report(format_report(rows, format), path);
}

}  // namespace sealed
