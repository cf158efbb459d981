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

#include "sealed/harness.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "sealed/error.hpp"

namespace sealed {
namespace {

ExperimentConfig small_config() {
    ExperimentConfig cfg;
    cfg.trials = 20;
    cfg.garbage_sizes = {1, 16};
    cfg.multi_sizes = {3};
    cfg.sweep_garbage_sizes = {2};
    cfg.sweep_multi_sizes = {3};
    return cfg;
}

const SweepRow &find_row(const std::vector<SweepRow> &rows, const std::string &protocol, const std::string &attack) {
    for (const auto &r : rows)
        if (r.protocol == protocol && r.attack == attack) return r;
    throw std::runtime_error("row not found: " + protocol + " " + attack);
}

std::vector<std::string> lines(const std::string &text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

TEST(Config, ParsesKeysCommentsAndLists) {
    const auto cfg = parse_config("# sweep\nseed = 7\ntrials=3  # few\n\ngarbage_sizes = 1, 2,3\nformat = json\n"
                                  "experiment = multi-scaling\nout = /tmp/x.csv\n");
    EXPECT_EQ(cfg.seed, 7u);
    EXPECT_EQ(cfg.trials, 3);
    EXPECT_EQ(cfg.garbage_sizes, (std::vector<int>{1, 2, 3}));
    EXPECT_EQ(cfg.format, ReportFormat::json);
    EXPECT_EQ(cfg.experiment, "multi-scaling");
    EXPECT_EQ(cfg.out, "/tmp/x.csv");
    EXPECT_EQ(cfg.multi_sizes, ExperimentConfig{}.multi_sizes);
}

TEST(Config, Errors) {
    for (const char *text : {"trials = many", "colour = blue", "seed", "garbage_sizes = 1,,2", "format = xml"}) {
        try {
            parse_config(text);
            ADD_FAILURE() << text;
        } catch (const Error &e) {
            EXPECT_EQ(e.code(), ErrorCode::config_invalid) << text;
        }
    }
    EXPECT_THROW(load_config("/nonexistent/sealed.cfg"), Error);
    EXPECT_THROW(load_config(std::filesystem::path(SEALED_TEST_DATA_DIR) / "bad.cfg"), Error);
}

TEST(BoundSweep, FixedRows) {
    const auto rows = run_bound_sweep(small_config());
    const auto &naive = find_row(rows, "naive", "basis");
    EXPECT_NEAR(naive.s_exact, 0.5, 1e-12);
    EXPECT_NEAR(naive.p, 0.5, 1e-12);
    EXPECT_NEAR(naive.bound, 0.85355339059327373, 1e-12);
    EXPECT_NEAR(find_row(rows, "garbage:16", "basis").s_exact, 0.734375, 1e-12);
    EXPECT_NEAR(find_row(rows, "garbage:1", "basis").s_exact, 0.5, 1e-12);
    EXPECT_NEAR(find_row(rows, "multipicture:3", "basis").s_exact, 2.0 / 3, 1e-12);
    EXPECT_NEAR(find_row(rows, "multipicture:3", "predicate:constant").s_exact, 0.0, 1e-12);
    EXPECT_NEAR(find_row(rows, "oaep:4", "basis").s_exact, 0.9375, 1e-12);
    EXPECT_NEAR(find_row(rows, "naive", "predicate:isolate").s_exact, 0.5, 1e-12);
    EXPECT_TRUE(invariant_violations(rows).empty());
    EXPECT_EQ(rows.size(), 3u + 2 + 3 + 1 + 3 * 20);
}

TEST(BoundSweep, DefaultTrialsHaveNonNegativeMargins) {
    ExperimentConfig cfg;
    cfg.sweep_garbage_sizes = {};
    cfg.sweep_multi_sizes = {};
    cfg.garbage_sizes = {};
    cfg.multi_sizes = {};
    const auto rows = run_bound_sweep(cfg);
    double min_margin = 1.0;
    for (const auto &r : rows) {
        min_margin = std::min(min_margin, r.margin);
        EXPECT_TRUE(r.chain_checked);
    }
    EXPECT_GE(min_margin, 0.0);
    EXPECT_TRUE(invariant_violations(rows).empty());
}

TEST(BoundSweep, RejectsBadConfig) {
    auto cfg = small_config();
    cfg.trials = 0;
    EXPECT_THROW(run_bound_sweep(cfg), Error);
    cfg = small_config();
    cfg.multi_sizes = {1};
    EXPECT_THROW(run_bound_sweep(cfg), Error);
}

TEST(Violations, FlagsNegativeMarginAndBrokenChain) {
    SweepRow ok{"x", "y", 0.5, 0.5, 0.8, 0.3, 0.6, 0.7, 0.8, true};
    SweepRow negative = ok;
    negative.margin = -1e-6;
    SweepRow chain = ok;
    chain.trace_distance = 0.4;
    SweepRow unchecked = chain;
    unchecked.chain_checked = false;
    const auto bad = invariant_violations({ok, negative, chain, unchecked});
    ASSERT_EQ(bad.size(), 2u);
    EXPECT_EQ(bad[0].margin, -1e-6);
    EXPECT_EQ(bad[1].trace_distance, 0.4);
}

TEST(Report, CsvLayout) {
    const auto rows = run_bound_sweep(small_config());
    const auto csv = lines(format_report(rows, ReportFormat::csv));
    ASSERT_EQ(csv.size(), rows.size() + 1);
    EXPECT_EQ(csv[0], "protocol,attack,p,s_exact,bound,margin");
    ASSERT_EQ(csv[1].rfind("naive,basis,", 0), 0u);
    std::istringstream fields(csv[1].substr(12));
    std::vector<double> values;
    for (std::string v; std::getline(fields, v, ',');) values.push_back(std::stod(v));
    ASSERT_EQ(values.size(), 4u);
    EXPECT_NEAR(values[0], 0.5, 1e-12);
    EXPECT_NEAR(values[1], 0.5, 1e-12);
    EXPECT_NEAR(values[2], 0.85355339059327373, 1e-12);
    EXPECT_NEAR(values[3], 0.35355339059327373, 1e-12);
    EXPECT_EQ(values[1], rows[0].s_exact);
    EXPECT_EQ(format_report(std::vector<SweepRow>{}, ReportFormat::csv), "protocol,attack,p,s_exact,bound,margin\n");
    EXPECT_EQ(format_report(std::vector<SweepRow>{}, ReportFormat::json), "[]\n");
}

TEST(Report, JsonMatchesCsv) {
    const auto rows = run_bound_sweep(small_config());
    const auto parsed = nlohmann::json::parse(format_report(rows, ReportFormat::json));
    const auto csv = lines(format_report(rows, ReportFormat::csv));
    ASSERT_EQ(parsed.size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(parsed[i]["protocol"], rows[i].protocol);
        EXPECT_EQ(parsed[i]["attack"], rows[i].attack);
        EXPECT_EQ(parsed[i]["s_exact"].get<double>(), rows[i].s_exact);
        EXPECT_EQ(parsed[i]["margin"].get<double>(), rows[i].margin);
        EXPECT_EQ(std::stod(csv[i + 1].substr(csv[i + 1].rfind(',') + 1)), rows[i].margin);
    }
}

TEST(Report, RerunsAreByteIdentical) {
    const auto cfg = small_config();
    EXPECT_EQ(format_report(run_bound_sweep(cfg), ReportFormat::csv),
              format_report(run_bound_sweep(cfg), ReportFormat::csv));
    auto other = cfg;
    other.seed += 1;
    EXPECT_NE(format_report(run_bound_sweep(cfg), ReportFormat::csv),
              format_report(run_bound_sweep(other), ReportFormat::csv));
}

TEST(Report, EmitToFile) {
    const auto path = std::filesystem::temp_directory_path() / "sealed_harness_report.csv";
    emit_report(run_multipicture_scaling({2}, 1), ReportFormat::csv, path);
    std::ifstream in(path);
    std::stringstream text;
    text << in.rdbuf();
    const auto got = lines(text.str());
    ASSERT_EQ(got.size(), 2u);
    EXPECT_EQ(got[0], "n,accept,detection");
    EXPECT_EQ(got[1].substr(0, 2), "2,");
    const auto comma = got[1].find(',', 2);
    EXPECT_NEAR(std::stod(got[1].substr(2, comma - 2)), 0.5, 1e-12);
    EXPECT_NEAR(std::stod(got[1].substr(comma + 1)), 0.5, 1e-12);
    std::filesystem::remove(path);
    EXPECT_THROW(emit_report("x", "/nonexistent/dir/out.csv"), Error);
}

TEST(Scaling, DetectionTable) {
    const auto rows = run_multipicture_scaling({2, 4, 10, 100}, 3);
    ASSERT_EQ(rows.size(), 4u);
    for (const auto &r : rows) {
        EXPECT_NEAR(r.accept, 1.0 / r.n, 1e-12);
        EXPECT_NEAR(r.detection, (r.n - 1.0) / r.n, 1e-12);
    }
    EXPECT_THROW(run_multipicture_scaling({1}, 3), Error);
}

TEST(Negligibility, DivergenceHalvesPerBit) {
    const std::vector<int> k0s{4, 5, 6, 7, 8, 9, 10, 11, 12};
    const std::vector<int> sizes{0, 1, 4, 16};
    const auto rows = run_oaep_negligibility(k0s, sizes, 8, 11);
    ASSERT_EQ(rows.size(), k0s.size() * sizes.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto &r = rows[i];
        EXPECT_EQ(r.r_size, static_cast<std::size_t>(sizes[i % sizes.size()]));
        EXPECT_NEAR(r.divergence, std::ldexp(static_cast<double>(r.r_size), -r.k0), 1e-12);
        if (i >= sizes.size() && r.r_size > 0)
            EXPECT_NEAR(r.divergence, rows[i - sizes.size()].divergence / 2, 1e-12);
        EXPECT_EQ(r.degenerate_u, r.r_size == (std::size_t{1} << r.k0));
    }
    const auto full = run_oaep_negligibility({2}, {4}, 8, 1);
    EXPECT_TRUE(full[0].degenerate_u);
    EXPECT_EQ(full[0].divergence, 1.0);
    EXPECT_THROW(run_oaep_negligibility({2}, {5}, 8, 1), Error);
}

TEST(FormatDouble, RoundTrips) {
    for (double v : {0.1, 1.0 / 3, 0.85355339059327373, 1e-300, 0.0})
        EXPECT_EQ(std::stod(format_double(v)), v);
    EXPECT_EQ(format_double(0.5), "0.5");
}

}  // namespace
}  // namespace sealed
