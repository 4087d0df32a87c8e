// Copyright (c) symreach contributors.
// SPDX-License-Identifier: Apache-2.0
#include <CLI11.hpp>

#include <iostream>

#include "symreach/cli.hpp"
#include "symreach/error.hpp"

namespace {

void print_summary(const symreach::cli::Outcome& out) {
    const auto& r = out.report;
    std::cout << "verdict: " << r.value("verdict", std::string("n/a"));
    if (r.contains("t_err") && !r["t_err"].is_null()) {
        std::cout << " (t_err = " << r["t_err"] << ")";
    }
    std::cout << '\n';
    if (r.contains("splits")) {
        std::cout << "splits: " << r["splits"] << ", leaves: " << r["leaves"] << ", stop: " << r["stop_reason"]
                  << '\n';
    }
    std::cout << "time: " << r.value("seconds", 0.0) << " s\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Closed-loop reachability and reach-avoid verification for neural-network controlled systems"};
    app.require_subcommand(1);

    std::string config;
    std::string out_dir;

    auto* verify = app.add_subcommand("verify", "Verify a reach-avoid problem");
    verify->add_option("--config", config, "Problem config (JSON)")->required()->check(CLI::ExistingFile);
    verify->add_option("--out", out_dir, "Output directory (overrides the config)");

    std::string mode;
    std::size_t max_splits = 0;
    double tol_f = 0.0;
    auto* part = app.add_subcommand("partition", "Verify with adaptive initial-set partitioning");
    part->add_option("--config", config, "Problem config (JSON)")->required()->check(CLI::ExistingFile);
    part->add_option("--mode", mode, "Leaf selection rule")->check(CLI::IsMember({"backward", "forward", "accuracy"}));
    auto* splits_opt = part->add_option("--max-splits", max_splits, "Split budget");
    auto* tol_opt = part->add_option("--tol-f", tol_f, "F-radius tolerance on the error block");
    part->add_option("--out", out_dir, "Output directory (overrides the config)");

    std::string network;
    std::string box;
    symreach::cli::BoundOptions bound;
    auto* bnn = app.add_subcommand("bound-nn", "Bound a network's outputs over an input box");
    bnn->add_option("--network", network, "Network file (JSON)")->required()->check(CLI::ExistingFile);
    bnn->add_option("--input-box", box, "Input box as lo:hi,lo:hi,...")->required();
    bnn->add_option("--engine", bound.engine, "affine or poly")->check(CLI::IsMember({"affine", "poly"}));
    bnn->add_option("--order", bound.poly.order, "Polynomial order (1 or 2)")->check(CLI::Range(1, 2));
    bnn->add_option("--refine-depth", bound.poly.refine_depth, "Bisection depth for neuron bounds");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : symreach::cli::kExitError;
    }

    try {
        const std::optional<std::filesystem::path> out =
            out_dir.empty() ? std::nullopt : std::optional<std::filesystem::path>(out_dir);
        symreach::cli::Outcome result;
        if (verify->parsed()) {
            result = symreach::cli::cmd_verify(config, out);
            print_summary(result);
        } else if (part->parsed()) {
            symreach::cli::PartitionOverrides o;
            if (!mode.empty()) {
                o.mode = symreach::partition::mode_from_string(mode);
            }
            if (splits_opt->count() > 0) {
                o.max_splits = max_splits;
            }
            if (tol_opt->count() > 0) {
                o.tol_f = tol_f;
            }
            result = symreach::cli::cmd_partition(config, o, out);
            print_summary(result);
        } else {
            result = symreach::cli::cmd_bound_nn(network, box, bound);
            std::cout << result.report.dump(2) << '\n';
        }
        return result.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return symreach::cli::kExitError;
    }
}
