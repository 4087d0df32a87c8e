// Copyright (c) symreach contributors.
// SPDX-License-Identifier: Apache-2.0
#include "symreach/cli.hpp"

#include <charconv>
#include <chrono>
#include <fstream>

#include "symreach/error.hpp"

namespace symreach::cli {

int exit_code(reach::Verdict v) {
    switch (v) {
    case reach::Verdict::verified:
        return kExitVerified;
    case reach::Verdict::violated:
        return kExitViolated;
    case reach::Verdict::inconclusive:
        return kExitInconclusive;
    }
    return kExitError;
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void write_json(const std::filesystem::path& path, const io::json& j) {
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot write '" + path.string() + "'");
    }
    out << j.dump(2) << '\n';
}

std::filesystem::path prepare_dir(const io::ProblemConfig& cfg, const std::optional<std::filesystem::path>& override) {
    std::filesystem::path dir = override.value_or(cfg.output_dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace

Outcome cmd_verify(const std::filesystem::path& config, const std::optional<std::filesystem::path>& output_dir) {
    SymbolProvider symbols;
    const io::ProblemConfig cfg = io::load_config(config, symbols);
    const auto start = std::chrono::steady_clock::now();
    const reach::ReachResult r = reach::verify(cfg.problem, symbols);
    const double elapsed = seconds_since(start);

    Outcome out;
    out.report = io::reach_report(cfg, r, elapsed);
    out.exit_code = exit_code(r.verdict());
    const std::filesystem::path dir = prepare_dir(cfg, output_dir);
    write_json(dir / "report.json", out.report);
    io::write_trace_csv(dir / "trace.csv", r.hulls, cfg.time_step);
    return out;
}

Outcome cmd_partition(const std::filesystem::path& config, const PartitionOverrides& overrides,
                      const std::optional<std::filesystem::path>& output_dir) {
    SymbolProvider symbols;
    io::ProblemConfig cfg = io::load_config(config, symbols);
    if (overrides.mode) {
        cfg.partition.mode = *overrides.mode;
    }
    if (overrides.max_splits) {
        cfg.partition.max_splits = *overrides.max_splits;
    }
    if (overrides.tol_f) {
        cfg.partition.tol_f = overrides.tol_f;
    }
    const auto start = std::chrono::steady_clock::now();
    const partition::Result r = partition::run(cfg.problem, cfg.partition, symbols);
    const double elapsed = seconds_since(start);

    Outcome out;
    out.report = io::partition_report(cfg, r, elapsed);
    out.exit_code = exit_code(r.verdict());
    const std::filesystem::path dir = prepare_dir(cfg, output_dir);
    write_json(dir / "report.json", out.report);
    write_json(dir / "splits.json", io::splits_json(r));
    io::write_trace_csv(dir / "trace.csv", io::union_hulls(r), cfg.time_step);
    for (const std::size_t l : r.leaves) {
        io::write_trace_csv(dir / ("leaf_" + std::to_string(l) + ".csv"), r.nodes[l].hulls, cfg.time_step);
    }
    return out;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> parse_box(std::string_view spec) {
    std::vector<double> lo;
    std::vector<double> hi;
    while (!spec.empty()) {
        const std::size_t comma = spec.find(',');
        const std::string_view item = spec.substr(0, comma);
        const std::size_t colon = item.find(':');
        if (colon == std::string_view::npos) {
            throw ConfigError("input box: expected lo:hi, got '" + std::string(item) + "'");
        }
        double a = 0.0;
        double b = 0.0;
        const auto ra = std::from_chars(item.data(), item.data() + colon, a);
        const auto rb = std::from_chars(item.data() + colon + 1, item.data() + item.size(), b);
        if (ra.ec != std::errc{} || ra.ptr != item.data() + colon || rb.ec != std::errc{} ||
            rb.ptr != item.data() + item.size() || !(a <= b)) {
            throw ConfigError("input box: malformed interval '" + std::string(item) + "'");
        }
        lo.push_back(a);
        hi.push_back(b);
        if (comma == std::string_view::npos) {
            break;
        }
        spec.remove_prefix(comma + 1);
    }
    if (lo.empty()) {
        throw ConfigError("input box: empty");
    }
    return {Eigen::Map<Eigen::VectorXd>(lo.data(), static_cast<Eigen::Index>(lo.size())),
            Eigen::Map<Eigen::VectorXd>(hi.data(), static_cast<Eigen::Index>(hi.size()))};
}

Outcome cmd_bound_nn(const std::filesystem::path& network, std::string_view input_box, const BoundOptions& options) {
    const nn::Network net = io::load_network(network);
    const auto [lo, hi] = parse_box(input_box);
    if (lo.size() != net.input_dim()) {
        throw DimensionError("input box has " + std::to_string(lo.size()) + " intervals, network expects " +
                             std::to_string(net.input_dim()));
    }
    SymbolProvider symbols;
    const SZonotope X = SZonotope::from_box(lo, hi, symbols);
    const auto start = std::chrono::steady_clock::now();
    io::json bounds = io::json::array();
    io::json extra = io::json::object();
    if (options.engine == "affine") {
        const SZonotope U = nn::propagate_affine(X, net, symbols);
        for (const auto& iv : interval_hull(U)) {
            bounds.push_back({iv.lo, iv.hi});
        }
        extra["error_radius"] = f_radius(columns_excluding(U, X.ids()));
        extra["symbols"] = U.num_symbols();
    } else if (options.engine == "poly") {
        const SPolynotope U = nn::propagate_poly(SPolynotope::from_szonotope(X), net, options.poly, symbols);
        for (const auto& iv : interval_hull(U, options.poly.refine_depth)) {
            bounds.push_back({iv.lo, iv.hi});
        }
        extra["monomials"] = U.num_monomials();
    } else {
        throw ConfigError("unknown engine '" + options.engine + "'");
    }
    Outcome out;
    out.exit_code = kExitVerified;
    out.report = {{"command", "bound-nn"}, {"engine", options.engine}, {"bounds", bounds},
                  {"seconds", seconds_since(start)}};
    out.report.update(extra);
    return out;
}

} // namespace symreach::cli
