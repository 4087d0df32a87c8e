// Copyright (c) symreach contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "symreach/io.hpp"
#include "symreach/partition.hpp"
#include "symreach/reach.hpp"

namespace symreach::cli {

/// Process exit codes.
inline constexpr int kExitVerified = 0;
inline constexpr int kExitViolated = 1;
inline constexpr int kExitInconclusive = 2;
inline constexpr int kExitError = 3;

int exit_code(reach::Verdict v);

struct Outcome {
    int exit_code{kExitError};
    io::json report;
};

/// Runs the closed-loop verifier and writes report.json and trace.csv.
Outcome cmd_verify(const std::filesystem::path& config, const std::optional<std::filesystem::path>& output_dir = {});

struct PartitionOverrides {
    std::optional<partition::Mode> mode;
    std::optional<std::size_t> max_splits;
    std::optional<double> tol_f;
};

/// Runs input partitioning and writes report.json, trace.csv (per-step union
/// over leaves), splits.json and one leaf_<label>.csv per leaf.
Outcome cmd_partition(const std::filesystem::path& config, const PartitionOverrides& overrides = {},
                      const std::optional<std::filesystem::path>& output_dir = {});

/// Parses "lo:hi,lo:hi,..." into a box.
std::pair<Eigen::VectorXd, Eigen::VectorXd> parse_box(std::string_view spec);

struct BoundOptions {
    /// "affine" or "poly".
    std::string engine{"affine"};
    nn::PolyOptions poly{};
};

/// Output bounds of a network over an input box; the report lists the
/// per-output interval and, for the affine engine, the error-block F-radius.
Outcome cmd_bound_nn(const std::filesystem::path& network, std::string_view input_box,
                     const BoundOptions& options = {});

} // namespace symreach::cli
