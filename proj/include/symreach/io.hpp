// Copyright (c) symreach contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "symreach/nn.hpp"
#include "symreach/partition.hpp"
#include "symreach/plant.hpp"
#include "symreach/reach.hpp"

namespace symreach::io {

using nlohmann::json;

/// Parses an update expression. Grammar:
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*        division by constants only
///   unary   := ('-' | '+') unary | power
///   power   := primary ('^' integer)?
///   primary := number | 'pi' | var | name '(' expr ')' | '(' expr ')'
///   var     := ('x' | 'u' | 'w') integer          one-based
/// Throws ConfigError with the offending column.
plant::ExprPtr parse_expression(std::string_view text, std::size_t n_x, std::size_t n_u, std::size_t n_w);

/// {"layers": [{"activation": name, "weights": [[row], ...], "bias": [...]}, ...]}.
/// A trailing linear identity layer is appended when the last activation is nonlinear.
nn::Network network_from_json(const json& j);
json network_to_json(const nn::Network& net);
nn::Network load_network(const std::filesystem::path& path);
void save_network(const nn::Network& net, const std::filesystem::path& path);

struct ProblemConfig {
    std::string name;
    reach::Problem problem;
    partition::Options partition;
    /// Plant sampling period, used for the time column of traces.
    double time_step{1.0};
    std::filesystem::path output_dir;
    std::uint64_t seed{0};
};

/// Relative paths inside the config resolve against `base_dir`.
ProblemConfig config_from_json(const json& j, const std::filesystem::path& base_dir, SymbolProvider& symbols);
ProblemConfig load_config(const std::filesystem::path& path, SymbolProvider& symbols);

/// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

/// Rows "step,t,dim,lo,hi" with one-based dims.
void write_trace_csv(std::ostream& os, const std::vector<std::vector<Interval>>& hulls, double time_step);
void write_trace_csv(const std::filesystem::path& path, const std::vector<std::vector<Interval>>& hulls,
                     double time_step);

json hulls_to_json(const std::vector<std::vector<Interval>>& hulls, double time_step);
json reach_report(const ProblemConfig& cfg, const reach::ReachResult& r, double seconds);
json splits_json(const partition::Result& r);
json partition_report(const ProblemConfig& cfg, const partition::Result& r, double seconds);

/// Per-step union of leaf hulls.
std::vector<std::vector<Interval>> union_hulls(const partition::Result& r);

} // namespace symreach::io
