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

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "sealed/adversary.hpp"
#include "sealed/error.hpp"
#include "sealed/oaep.hpp"
#include "sealed/serialize.hpp"

namespace sealed {

ReportFormat report_format_from_string(const std::string &name) {
    if (name == "csv") return ReportFormat::csv;
    if (name == "json") return ReportFormat::json;
    throw Error(ErrorCode::config_invalid, "format must be csv or json, got '" + name + "'");
}

namespace {

std::string trim(const std::string &s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

long long parse_integer(const std::string &key, const std::string &text) {
    try {
        std::size_t used = 0;
        const long long value = std::stoll(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return value;
    } catch (const std::exception &) {
        throw Error(ErrorCode::config_invalid, key + ": '" + text + "' is not an integer");
    }
}

std::vector<int> parse_int_list(const std::string &key, const std::string &text) {
    std::vector<int> out;
    if (trim(text).empty()) return out;
    std::istringstream in(text + ",");
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) throw Error(ErrorCode::config_invalid, key + ": empty list entry");
        out.push_back(static_cast<int>(parse_integer(key, item)));
    }
    return out;
}

}  // namespace

ExperimentConfig parse_config(const std::string &text, ExperimentConfig base) {
    using Setter = std::function<void(ExperimentConfig &, const std::string &, const std::string &)>;
    const auto list = [](std::vector<int> ExperimentConfig::*field) -> Setter {
        return [field](ExperimentConfig &c, const std::string &k, const std::string &v) {
            c.*field = parse_int_list(k, v);
        };
    };
    const auto integer = [](int ExperimentConfig::*field) -> Setter {
        return [field](ExperimentConfig &c, const std::string &k, const std::string &v) {
            c.*field = static_cast<int>(parse_integer(k, v));
        };
    };
    const std::map<std::string, Setter> setters{
        {"experiment", [](ExperimentConfig &c, const std::string &, const std::string &v) { c.experiment = v; }},
        {"seed",
         [](ExperimentConfig &c, const std::string &k, const std::string &v) {
             c.seed = static_cast<std::uint64_t>(parse_integer(k, v));
         }},
        {"trials", integer(&ExperimentConfig::trials)},
        {"garbage_sizes", list(&ExperimentConfig::garbage_sizes)},
        {"multi_sizes", list(&ExperimentConfig::multi_sizes)},
        {"sweep_garbage_sizes", list(&ExperimentConfig::sweep_garbage_sizes)},
        {"sweep_multi_sizes", list(&ExperimentConfig::sweep_multi_sizes)},
        {"scaling_sizes", list(&ExperimentConfig::scaling_sizes)},
        {"oaep_k0_values", list(&ExperimentConfig::oaep_k0_values)},
        {"oaep_r_sizes", list(&ExperimentConfig::oaep_r_sizes)},
        {"oaep_k0", integer(&ExperimentConfig::oaep_k0)},
        {"oaep_n", integer(&ExperimentConfig::oaep_n)},
        {"out", [](ExperimentConfig &c, const std::string &, const std::string &v) { c.out = v; }},
        {"format",
         [](ExperimentConfig &c, const std::string &, const std::string &v) { c.format = report_format_from_string(v); }},
    };

    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorCode::config_invalid, "line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const auto it = setters.find(key);
        if (it == setters.end()) throw Error(ErrorCode::config_invalid, "unknown config key '" + key + "'");
        it->second(base, key, trim(line.substr(eq + 1)));
    }
    return base;
}

ExperimentConfig load_config(const std::filesystem::path &path, ExperimentConfig base) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io_error, "cannot open config " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), std::move(base));
}

namespace {

std::vector<Label> numbered_labels(const std::string &prefix, int count) {
    std::vector<Label> out;
    for (int i = 1; i <= count; ++i) out.emplace_back(prefix + std::to_string(i));
    return out;
}

std::vector<Message> pictures(int n) {
    std::vector<Message> out;
    for (int i = 1; i <= n; ++i) out.push_back(Message{"pic" + std::to_string(i)});
    return out;
}

SweepRow make_row(const SealedInstance &inst, const std::string &protocol, const std::string &attack,
                  const CheatReport &report) {
    SweepRow row{protocol, attack, report.p, report.s, report.bound, report.margin(), 0.0, 0.0, 0.0, false};
    try {
        const auto chain = proof_chain(inst, report);
        row.trace_distance = chain.trace_distance;
        row.convex_sum = chain.convex_sum;
        row.closed_form = chain.closed_form;
        row.chain_checked = true;
    } catch (const Error &e) {
        if (e.code() != ErrorCode::dimension_too_large) throw;
    }
    return row;
}

void require_positive(const std::vector<int> &values, int minimum, const char *what) {
    for (int v : values)
        if (v < minimum)
            throw Error(ErrorCode::config_invalid, std::string(what) + " must be >= " + std::to_string(minimum));
}

}  // namespace

std::vector<SweepRow> run_bound_sweep(const ExperimentConfig &cfg) {
    if (cfg.trials < 1) throw Error(ErrorCode::config_invalid, "trials must be >= 1");
    require_positive(cfg.garbage_sizes, 1, "garbage_sizes");
    require_positive(cfg.sweep_garbage_sizes, 1, "sweep_garbage_sizes");
    require_positive(cfg.multi_sizes, 2, "multi_sizes");
    require_positive(cfg.sweep_multi_sizes, 2, "sweep_multi_sizes");

    std::vector<SweepRow> rows;
    const Message m{"M"};

    const auto naive = seal_naive(m, Label("0"));
    rows.push_back(make_row(naive, "naive", "basis", basis_cheat(naive)));
    rows.push_back(make_row(naive, "naive", "generic", generic_cheat(naive)));
    rows.push_back(make_row(naive, "naive", "predicate:isolate",
                            predicate_cheat(naive, {{Label("0"), 0}, {m.label(), 1}})));

    for (int n_g : cfg.garbage_sizes) {
        const auto inst = seal_garbage(m, numbered_labels("g", n_g));
        rows.push_back(make_row(inst, "garbage:" + std::to_string(n_g), "basis", basis_cheat(inst)));
    }

    for (int n : cfg.multi_sizes) {
        const auto inst = seal_multipicture(pictures(n));
        const std::string name = "multipicture:" + std::to_string(n);
        rows.push_back(make_row(inst, name, "basis", basis_cheat(inst)));
        Predicate split;
        Predicate constant;
        int index = 0;
        for (const auto &label : inst.active_c_labels()) {
            split.emplace(label, index++ < n / 2 ? 0 : 1);
            constant.emplace(label, 1);
        }
        rows.push_back(make_row(inst, name, "predicate:split", predicate_cheat(inst, split)));
        rows.push_back(make_row(inst, name, "predicate:constant", predicate_cheat(inst, constant)));
    }

    if (cfg.oaep_k0 > 0) {
        const auto ctx = OaepContext::reference({cfg.oaep_k0 + cfg.oaep_n, cfg.oaep_k0, cfg.oaep_n}, false);
        const auto inst = seal_oaep(0, ctx);
        rows.push_back(make_row(inst, "oaep:" + std::to_string(cfg.oaep_k0), "basis", basis_cheat(inst)));
    }

    const auto sweep = [&](const SealedInstance &inst, const std::string &name) {
        const auto reports = random_strategy_sweep(inst, cfg.trials, cfg.seed);
        for (const auto &report : reports) rows.push_back(make_row(inst, name, report.strategy, report));
    };
    sweep(naive, "naive");
    for (int n_g : cfg.sweep_garbage_sizes)
        sweep(seal_garbage(m, numbered_labels("g", n_g)), "garbage:" + std::to_string(n_g));
    for (int n : cfg.sweep_multi_sizes) sweep(seal_multipicture(pictures(n)), "multipicture:" + std::to_string(n));
    return rows;
}

std::vector<SweepRow> invariant_violations(const std::vector<SweepRow> &rows) {
    std::vector<SweepRow> bad;
    for (const auto &row : rows) {
        bool ok = row.margin >= -kMarginTolerance;
        if (row.chain_checked)
            ok = ok && row.s_exact <= row.trace_distance + kChainTolerance &&
                 row.trace_distance <= row.convex_sum + kChainTolerance &&
                 row.convex_sum <= row.closed_form + kChainTolerance;
        if (!ok) bad.push_back(row);
    }
    return bad;
}

std::vector<ScalingRow> run_multipicture_scaling(const std::vector<int> &n_values, std::uint64_t seed) {
    require_positive(n_values, 2, "multipicture n");
    std::vector<ScalingRow> rows;
    for (int n : n_values) {
        const auto inst = seal_multipicture(pictures(n));
        const auto active = inst.active_c_labels();
        const auto measured = measure_partition(inst.reference, ProjPartition::finest(active),
                                                seed + static_cast<std::uint64_t>(n));
        const Label &collapsed = measured.post.amplitudes().begin()->first.first;
        const double accept = optimal_post_collapse_response(inst, collapsed).best_accept;
        rows.push_back({n, accept, 1.0 - accept});
    }
    return rows;
}

std::vector<NegligibilityRow> run_oaep_negligibility(const std::vector<int> &k0_values,
                                                     const std::vector<int> &r_sizes, int n, std::uint64_t seed) {
    require_positive(k0_values, 1, "k0");
    require_positive(r_sizes, 0, "|R|");
    std::vector<NegligibilityRow> rows;
    for (int k0 : k0_values) {
        const OaepParams params{k0 + n, k0, n};
        const auto sealer = OaepContext::reference(params, false);
        std::mt19937_64 rng(seed + static_cast<std::uint64_t>(k0));
        const std::uint64_t y = rng() & bit_mask(n);
        const auto inst = seal_oaep(y, sealer);

        std::vector<std::uint64_t> order(std::size_t{1} << k0);
        std::iota(order.begin(), order.end(), std::uint64_t{0});
        std::shuffle(order.begin(), order.end(), rng);

        for (int size : r_sizes) {
            if (static_cast<std::size_t>(size) > order.size())
                throw Error(ErrorCode::config_invalid,
                            "|R| = " + std::to_string(size) + " exceeds 2^" + std::to_string(k0));
            const auto charlie = OaepContext::reference(params, true);
            for (int i = 0; i < size; ++i) charlie.human().invert(encode(y, order[static_cast<std::size_t>(i)], charlie));
            const auto r = r_set(charlie.human().query_log(), y, charlie);
            const auto overlap = tu_overlap(inst, r);
            rows.push_back({k0, r.size(), 1.0 - overlap.value, overlap.degenerate_u});
        }
    }
    return rows;
}

std::string format_double(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

namespace {

std::string json_string(const std::string &s) { return Json(s).dump(); }

template <typename Row, typename Fields>
std::string format_rows(const std::vector<Row> &rows, ReportFormat format, const std::vector<std::string> &header,
                        Fields fields) {
    std::ostringstream out;
    if (format == ReportFormat::csv) {
        for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
        out << '\n';
        for (const auto &row : rows) {
            const auto values = fields(row);
            for (std::size_t i = 0; i < values.size(); ++i) out << (i ? "," : "") << values[i].first;
            out << '\n';
        }
        return out.str();
    }
    out << "[";
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto values = fields(rows[r]);
        out << (r ? ",\n " : "\n ") << "{";
        for (std::size_t i = 0; i < values.size(); ++i) {
            out << (i ? ", " : "") << json_string(header[i]) << ": "
                << (values[i].second ? json_string(values[i].first) : values[i].first);
        }
        out << "}";
    }
    out << (rows.empty() ? "]\n" : "\n]\n");
    return out.str();
}

// (text, is_string)
using Field = std::pair<std::string, bool>;

}  // namespace

std::string format_report(const std::vector<SweepRow> &rows, ReportFormat format) {
    return format_rows(rows, format, {"protocol", "attack", "p", "s_exact", "bound", "margin"},
                       [](const SweepRow &r) {
                           return std::vector<Field>{{r.protocol, true},
                                                     {r.attack, true},
                                                     {format_double(r.p), false},
                                                     {format_double(r.s_exact), false},
                                                     {format_double(r.bound), false},
                                                     {format_double(r.margin), false}};
                       });
}

std::string format_report(const std::vector<ScalingRow> &rows, ReportFormat format) {
    return format_rows(rows, format, {"n", "accept", "detection"}, [](const ScalingRow &r) {
        return std::vector<Field>{
            {std::to_string(r.n), false}, {format_double(r.accept), false}, {format_double(r.detection), false}};
    });
}

std::string format_report(const std::vector<NegligibilityRow> &rows, ReportFormat format) {
    return format_rows(rows, format, {"k0", "r_size", "divergence", "degenerate_u"}, [](const NegligibilityRow &r) {
        return std::vector<Field>{{std::to_string(r.k0), false},
                                  {std::to_string(r.r_size), false},
                                  {format_double(r.divergence), false},
                                  {r.degenerate_u ? "true" : "false", false}};
    });
}

void emit_report(const std::string &report, const std::filesystem::path &path) {
    if (path.empty()) {
        std::cout << report;
        std::cout.flush();
        return;
    }
    write_text_file(path, report);
}

}  // namespace sealed
