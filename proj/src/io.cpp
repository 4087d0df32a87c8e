// Copyright (c) symreach contributors.
// SPDX-License-Identifier: Apache-2.0
#include "symreach/io.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <set>

#include "symreach/error.hpp"

namespace symreach::io {

// -----------------------------------------------------------------------------
// Expression parser
// -----------------------------------------------------------------------------

namespace {

class Parser {
  public:
    Parser(std::string_view text, std::size_t n_x, std::size_t n_u, std::size_t n_w)
        : text_(text), n_x_(n_x), n_u_(n_u), n_w_(n_w) {}

    plant::ExprPtr parse() {
        plant::ExprPtr e = expr();
        skip_space();
        if (pos_ != text_.size()) {
            fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        }
        return e;
    }

  private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ConfigError("expression '" + std::string(text_) + "' column " + std::to_string(pos_ + 1) + ": " + msg);
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])) != 0) {
            ++pos_;
        }
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    plant::ExprPtr expr() {
        plant::ExprPtr e = term();
        for (;;) {
            if (accept('+')) {
                e = e + term();
            } else if (accept('-')) {
                e = e - term();
            } else {
                return e;
            }
        }
    }

    plant::ExprPtr term() {
        plant::ExprPtr e = unary();
        for (;;) {
            if (accept('*')) {
                e = e * unary();
            } else if (accept('/')) {
                const std::size_t at = pos_;
                plant::ExprPtr d = unary();
                const auto* c = std::get_if<plant::Constant>(&d->node);
                if (c == nullptr) {
                    pos_ = at;
                    fail("division is only supported by constants");
                }
                if (c->value == 0.0) {
                    pos_ = at;
                    fail("division by zero");
                }
                e = (1.0 / c->value) * e;
            } else {
                return e;
            }
        }
    }

    plant::ExprPtr unary() {
        if (accept('-')) {
            return -unary();
        }
        if (accept('+')) {
            return unary();
        }
        return power();
    }

    plant::ExprPtr power() {
        plant::ExprPtr base = primary();
        if (!accept('^')) {
            return base;
        }
        skip_space();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])) != 0) {
            ++pos_;
        }
        int exponent = 0;
        const auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, exponent);
        if (ec != std::errc{} || ptr == text_.data() + start || exponent < 1) {
            pos_ = start;
            fail("exponent must be a positive integer");
        }
        if (const auto* c = std::get_if<plant::Constant>(&base->node)) {
            return plant::constant(std::pow(c->value, exponent));
        }
        plant::ExprPtr out = base;
        for (int k = 1; k < exponent; ++k) {
            out = out * base;
        }
        return out;
    }

    plant::ExprPtr primary() {
        skip_space();
        if (pos_ >= text_.size()) {
            fail("unexpected end of expression");
        }
        const char c = text_[pos_];
        if (accept('(')) {
            plant::ExprPtr e = expr();
            if (!accept(')')) {
                fail("expected ')'");
            }
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) != 0 || c == '.') {
            return number();
        }
        if (std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_') {
            return identifier();
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    plant::ExprPtr number() {
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
        if (ec != std::errc{}) {
            fail("malformed number");
        }
        pos_ = static_cast<std::size_t>(ptr - text_.data());
        return plant::constant(v);
    }

    plant::ExprPtr identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) != 0 || text_[pos_] == '_')) {
            ++pos_;
        }
        const std::string_view name = text_.substr(start, pos_ - start);
        if (accept('(')) {
            if (plant::find_primitive(name) == nullptr) {
                pos_ = start;
                fail("unknown function '" + std::string(name) + "'");
            }
            plant::ExprPtr arg = expr();
            if (!accept(')')) {
                fail("expected ')'");
            }
            return plant::apply(name, std::move(arg));
        }
        if (name == "pi") {
            return plant::constant(std::numbers::pi);
        }
        if (name.size() >= 2 && (name[0] == 'x' || name[0] == 'u' || name[0] == 'w')) {
            std::size_t index = 0;
            const auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), index);
            if (ec == std::errc{} && ptr == name.data() + name.size()) {
                const std::size_t limit = name[0] == 'x' ? n_x_ : (name[0] == 'u' ? n_u_ : n_w_);
                if (index < 1 || index > limit) {
                    pos_ = start;
                    fail("variable '" + std::string(name) + "' out of range (1.." + std::to_string(limit) + ")");
                }
                if (name[0] == 'x') {
                    return plant::state(index - 1);
                }
                if (name[0] == 'u') {
                    return plant::input(index - 1);
                }
                return plant::disturbance(index - 1);
            }
        }
        pos_ = start;
        fail("unknown identifier '" + std::string(name) + "'");
    }

    std::string_view text_;
    std::size_t n_x_, n_u_, n_w_;
    std::size_t pos_{0};
};

} // namespace

plant::ExprPtr parse_expression(std::string_view text, std::size_t n_x, std::size_t n_u, std::size_t n_w) {
    return Parser(text, n_x, n_u, n_w).parse();
}

// -----------------------------------------------------------------------------
// JSON helpers
// -----------------------------------------------------------------------------

namespace {

const json& field(const json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) {
        throw ConfigError(where + ": missing field '" + key + "'");
    }
    return j.at(key);
}

double to_number(const json& j, const std::string& where) {
    if (!j.is_number()) {
        throw ConfigError(where + ": expected a number");
    }
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
        throw ConfigError(where + ": non-finite number");
    }
    return v;
}

std::size_t to_count(const json& j, const std::string& where) {
    if (!j.is_number_integer() || j.get<std::int64_t>() < 0) {
        throw ConfigError(where + ": expected a non-negative integer");
    }
    return j.get<std::size_t>();
}

Eigen::VectorXd to_vector(const json& j, const std::string& where) {
    if (!j.is_array()) {
        throw ConfigError(where + ": expected an array");
    }
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = to_number(j[i], where);
    }
    return v;
}

/// Array of rows; `cols` fixes the column count for empty inputs.
Eigen::MatrixXd to_matrix(const json& j, const std::string& where, Eigen::Index cols = -1) {
    if (!j.is_array()) {
        throw ConfigError(where + ": expected an array of rows");
    }
    const auto rows = static_cast<Eigen::Index>(j.size());
    if (rows == 0) {
        return Eigen::MatrixXd(0, std::max<Eigen::Index>(cols, 0));
    }
    const Eigen::VectorXd first = to_vector(j[0], where);
    Eigen::MatrixXd M(rows, first.size());
    for (Eigen::Index r = 0; r < rows; ++r) {
        const Eigen::VectorXd row = to_vector(j[static_cast<std::size_t>(r)], where);
        if (row.size() != M.cols()) {
            throw ConfigError(where + ": ragged matrix");
        }
        M.row(r) = row.transpose();
    }
    return M;
}

json vector_json(const Eigen::VectorXd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        a.push_back(v(i));
    }
    return a;
}

json matrix_json(const Eigen::MatrixXd& M) {
    json a = json::array();
    for (Eigen::Index r = 0; r < M.rows(); ++r) {
        a.push_back(vector_json(M.row(r).transpose()));
    }
    return a;
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open '" + path.string() + "'");
    }
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("'" + path.string() + "': " + e.what());
    }
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : j.items()) {
        if (ok.count(key) == 0) {
            throw ConfigError(where + ": unknown field '" + key + "'");
        }
    }
}

} // namespace

// -----------------------------------------------------------------------------
// Networks
// -----------------------------------------------------------------------------

nn::Network network_from_json(const json& j) {
    const json& layers = field(j, "layers", "network");
    if (!layers.is_array() || layers.empty()) {
        throw ConfigError("network: 'layers' must be a non-empty array");
    }
    std::vector<nn::Layer> out;
    for (std::size_t k = 0; k < layers.size(); ++k) {
        const std::string where = "network layer " + std::to_string(k);
        const json& L = layers[k];
        check_keys(L, {"activation", "weights", "bias"}, where);
        const json& act = field(L, "activation", where);
        if (!act.is_string()) {
            throw ConfigError(where + ": activation must be a string");
        }
        nn::Layer layer;
        layer.activation = nn::activation_from_string(act.get<std::string>());
        layer.weights = to_matrix(field(L, "weights", where), where + " weights");
        layer.bias = to_vector(field(L, "bias", where), where + " bias");
        out.push_back(std::move(layer));
    }
    if (out.back().activation != nn::Activation::linear) {
        const auto n = out.back().weights.rows();
        out.push_back({Eigen::MatrixXd::Identity(n, n), Eigen::VectorXd::Zero(n), nn::Activation::linear});
    }
    return nn::Network(std::move(out));
}

json network_to_json(const nn::Network& net) {
    json layers = json::array();
    for (const auto& L : net.layers()) {
        layers.push_back({{"activation", std::string(nn::to_string(L.activation))},
                          {"weights", matrix_json(L.weights)},
                          {"bias", vector_json(L.bias)}});
    }
    return {{"layers", layers}};
}

nn::Network load_network(const std::filesystem::path& path) { return network_from_json(read_json_file(path)); }

void save_network(const nn::Network& net, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot write '" + path.string() + "'");
    }
    out << network_to_json(net).dump(1) << '\n';
}

// -----------------------------------------------------------------------------
// Problem configs
// -----------------------------------------------------------------------------

namespace {

Polyhedron polyhedron_from_json(const json& j, Eigen::Index n, const std::string& where) {
    if (j.contains("box")) {
        const json& b = j.at("box");
        const Eigen::VectorXd lo = to_vector(field(b, "lo", where), where + " lo");
        const Eigen::VectorXd hi = to_vector(field(b, "hi", where), where + " hi");
        if (lo.size() != n || hi.size() != n) {
            throw DimensionError(where + ": box dimension mismatch");
        }
        return Polyhedron::box(lo, hi);
    }
    Eigen::MatrixXd H = to_matrix(field(j, "H", where), where + " H", n);
    Eigen::VectorXd r = to_vector(field(j, "r", where), where + " r");
    if (H.cols() != n) {
        throw DimensionError(where + ": H must have " + std::to_string(n) + " columns");
    }
    if (H.rows() != r.size()) {
        throw DimensionError(where + ": H and r row counts differ");
    }
    return {std::move(H), std::move(r)};
}

std::pair<std::size_t, std::size_t> step_range(const json& j, std::size_t horizon, const std::string& where) {
    if (!j.contains("steps")) {
        return {0, horizon == 0 ? 0 : horizon - 1};
    }
    const json& s = j.at("steps");
    if (!s.is_array() || s.size() != 2) {
        throw ConfigError(where + ": 'steps' must be [first, last]");
    }
    return {to_count(s[0], where), to_count(s[1], where)};
}

} // namespace

ProblemConfig config_from_json(const json& j, const std::filesystem::path& base_dir, SymbolProvider& symbols) {
    if (!j.is_object()) {
        throw ConfigError("config: expected an object");
    }
    check_keys(j,
               {"name", "network", "state_dim", "input_dim", "disturbance", "dynamics", "time_step", "initial_set",
                "horizon", "hold", "reduction_order", "goal", "avoid", "safe", "engine", "partition", "output_dir",
                "seed"},
               "config");
    ProblemConfig cfg;
    reach::Problem& p = cfg.problem;
    cfg.name = j.value("name", std::string("problem"));

    const json& net = field(j, "network", "config");
    if (net.is_string()) {
        p.controller = load_network(base_dir / net.get<std::string>());
    } else {
        p.controller = network_from_json(net);
    }

    const std::size_t nx = to_count(field(j, "state_dim", "config"), "state_dim");
    const std::size_t nu = to_count(field(j, "input_dim", "config"), "input_dim");
    if (j.contains("disturbance")) {
        const Eigen::VectorXd amp = to_vector(j.at("disturbance"), "disturbance");
        p.disturbance.amplitudes.assign(amp.data(), amp.data() + amp.size());
    }
    const std::size_t nw = p.disturbance.size();

    const json& dyn = field(j, "dynamics", "config");
    if (!dyn.is_array()) {
        throw ConfigError("dynamics: expected an array of expressions");
    }
    p.dynamics.n_x = nx;
    p.dynamics.n_u = nu;
    p.dynamics.n_w = nw;
    for (const auto& e : dyn) {
        if (!e.is_string()) {
            throw ConfigError("dynamics: expected expression strings");
        }
        p.dynamics.next_state.push_back(parse_expression(e.get<std::string>(), nx, nu, nw));
    }
    p.dynamics.validate();

    if (j.contains("time_step")) {
        cfg.time_step = to_number(j.at("time_step"), "time_step");
    }

    const json& init = field(j, "initial_set", "config");
    const auto n = static_cast<Eigen::Index>(nx);
    if (init.contains("box")) {
        const json& b = init.at("box");
        const Eigen::VectorXd lo = to_vector(field(b, "lo", "initial_set"), "initial_set lo");
        const Eigen::VectorXd hi = to_vector(field(b, "hi", "initial_set"), "initial_set hi");
        if (lo.size() != n || hi.size() != n || (hi.array() < lo.array()).any()) {
            throw ConfigError("initial_set: invalid box");
        }
        p.initial = SZonotope::from_box(lo, hi, symbols);
    } else {
        Eigen::VectorXd c = to_vector(field(init, "center", "initial_set"), "initial_set center");
        Eigen::MatrixXd G = to_matrix(field(init, "generators", "initial_set"), "initial_set generators");
        if (c.size() != n || (G.size() > 0 && G.rows() != n)) {
            throw DimensionError("initial_set: dimension mismatch");
        }
        if (G.size() == 0) {
            G.resize(n, 0);
        }
        IdVector ids = symbols.fresh_ids(static_cast<std::size_t>(G.cols()));
        p.initial = SZonotope(std::move(c), std::move(G), std::move(ids));
    }

    p.horizon = to_count(field(j, "horizon", "config"), "horizon");
    p.hold = j.contains("hold") ? to_count(j.at("hold"), "hold") : 1;
    p.reduction_order = j.contains("reduction_order") ? to_count(j.at("reduction_order"), "reduction_order") : 100;

    if (j.contains("goal")) {
        p.goal = polyhedron_from_json(j.at("goal"), n, "goal");
    } else {
        p.goal = Polyhedron::whole_space(n);
    }
    if (j.contains("avoid")) {
        for (const auto& a : j.at("avoid")) {
            const auto [first, last] = step_range(a, p.horizon, "avoid");
            p.avoid.push_back({polyhedron_from_json(a, n, "avoid"), first, last});
        }
    }
    if (j.contains("safe")) {
        // each face of a safe box becomes one avoid half-space; null bounds are open
        for (const auto& s : j.at("safe")) {
            const auto [first, last] = step_range(s, p.horizon, "safe");
            const json& b = field(s, "box", "safe");
            const json& lo = field(b, "lo", "safe");
            const json& hi = field(b, "hi", "safe");
            if (!lo.is_array() || !hi.is_array() || lo.size() != nx || hi.size() != nx) {
                throw DimensionError("safe: box dimension mismatch");
            }
            for (std::size_t d = 0; d < nx; ++d) {
                const auto add_face = [&, first = first, last = last](const json& bound, double sign) {
                    if (bound.is_null()) {
                        return;
                    }
                    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(1, n);
                    H(0, static_cast<Eigen::Index>(d)) = sign;
                    Eigen::VectorXd rhs = Eigen::VectorXd::Constant(1, sign * to_number(bound, "safe"));
                    p.avoid.push_back({Polyhedron(std::move(H), std::move(rhs)), first, last});
                };
                add_face(lo[d], 1.0);   // x_d <= lo
                add_face(hi[d], -1.0);  // x_d >= hi
            }
        }
    }

    if (j.contains("engine")) {
        const json& e = j.at("engine");
        check_keys(e, {"type", "order", "monomial_budget", "max_degree", "refine_depth", "check_depth"}, "engine");
        const std::string type = e.value("type", std::string("affine"));
        if (type == "affine") {
            p.engine.kind = reach::EngineKind::affine;
        } else if (type == "poly") {
            p.engine.kind = reach::EngineKind::poly;
        } else {
            throw ConfigError("engine: unknown type '" + type + "'");
        }
        if (e.contains("order")) {
            p.engine.poly.order = static_cast<int>(to_count(e.at("order"), "engine order"));
        }
        if (e.contains("monomial_budget")) {
            p.engine.poly.monomial_budget = to_count(e.at("monomial_budget"), "engine monomial_budget");
        }
        if (e.contains("max_degree")) {
            p.engine.poly.max_degree = static_cast<int>(to_count(e.at("max_degree"), "engine max_degree"));
        }
        if (e.contains("refine_depth")) {
            p.engine.poly.refine_depth = static_cast<int>(to_count(e.at("refine_depth"), "engine refine_depth"));
        }
        if (e.contains("check_depth")) {
            p.engine.check_depth = static_cast<int>(to_count(e.at("check_depth"), "engine check_depth"));
        }
    }

    if (j.contains("partition")) {
        const json& q = j.at("partition");
        check_keys(q, {"mode", "max_splits", "tol_f"}, "partition");
        if (q.contains("mode")) {
            cfg.partition.mode = partition::mode_from_string(q.at("mode").get<std::string>());
        }
        if (q.contains("max_splits")) {
            cfg.partition.max_splits = to_count(q.at("max_splits"), "partition max_splits");
        }
        if (q.contains("tol_f")) {
            cfg.partition.tol_f = to_number(q.at("tol_f"), "partition tol_f");
        }
    }

    cfg.output_dir = base_dir / j.value("output_dir", std::string("out"));
    if (j.contains("seed")) {
        cfg.seed = to_count(j.at("seed"), "seed");
    }
    p.validate();
    return cfg;
}

ProblemConfig load_config(const std::filesystem::path& path, SymbolProvider& symbols) {
    try {
        return config_from_json(read_json_file(path), path.parent_path(), symbols);
    } catch (const json::exception& e) {
        throw ConfigError("'" + path.string() + "': " + e.what());
    }
}

// -----------------------------------------------------------------------------
// Writers
// -----------------------------------------------------------------------------

std::string format_double(double v) {
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

void write_trace_csv(std::ostream& os, const std::vector<std::vector<Interval>>& hulls, double time_step) {
    os << "step,t,dim,lo,hi\n";
    for (std::size_t k = 0; k < hulls.size(); ++k) {
        const std::string t = format_double(static_cast<double>(k) * time_step);
        for (std::size_t d = 0; d < hulls[k].size(); ++d) {
            os << k << ',' << t << ',' << (d + 1) << ',' << format_double(hulls[k][d].lo) << ','
               << format_double(hulls[k][d].hi) << '\n';
        }
    }
}

void write_trace_csv(const std::filesystem::path& path, const std::vector<std::vector<Interval>>& hulls,
                     double time_step) {
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot write '" + path.string() + "'");
    }
    write_trace_csv(out, hulls, time_step);
}

json hulls_to_json(const std::vector<std::vector<Interval>>& hulls, double time_step) {
    json steps = json::array();
    for (std::size_t k = 0; k < hulls.size(); ++k) {
        json box = json::array();
        for (const auto& iv : hulls[k]) {
            box.push_back({iv.lo, iv.hi});
        }
        steps.push_back({{"step", k}, {"t", static_cast<double>(k) * time_step}, {"hull", box}});
    }
    return steps;
}

namespace {

json violation_json(const std::optional<reach::Violation>& v) {
    if (!v) {
        return nullptr;
    }
    return {{"step", v->step}, {"certified", v->certified}};
}

json problem_summary(const ProblemConfig& cfg) {
    const reach::Problem& p = cfg.problem;
    return {{"name", cfg.name},
            {"horizon", p.horizon},
            {"hold", p.hold},
            {"reduction_order", p.reduction_order},
            {"engine", p.engine.kind == reach::EngineKind::affine ? "affine" : "poly"},
            {"state_dim", p.dynamics.n_x},
            {"time_step", cfg.time_step}};
}

} // namespace

json reach_report(const ProblemConfig& cfg, const reach::ReachResult& r, double seconds) {
    json steps = hulls_to_json(r.hulls, cfg.time_step);
    for (std::size_t k = 0; k < steps.size(); ++k) {
        steps[k]["symbols"] = r.symbol_counts[k];
    }
    return {{"command", "verify"},
            {"problem", problem_summary(cfg)},
            {"verdict", std::string(reach::to_string(r.verdict()))},
            {"t_err", r.error ? json(r.error->step) : json(nullptr)},
            {"violation", violation_json(r.error)},
            {"seconds", seconds},
            {"steps", steps}};
}

json splits_json(const partition::Result& r) {
    json nodes = json::array();
    for (const auto& n : r.nodes) {
        json box = json::array();
        for (const auto& iv : interval_hull(n.initial)) {
            box.push_back({iv.lo, iv.hi});
        }
        nodes.push_back({{"label", n.label},
                         {"parent", n.parent ? json(*n.parent) : json(nullptr)},
                         {"children", n.children},
                         {"initial_hull", box},
                         {"violation", violation_json(n.violation)},
                         {"satisfied", n.satisfied},
                         {"error_radius", n.error_radius}});
    }
    json log = json::array();
    for (const auto& d : r.log) {
        json ratios = json::array();
        for (const auto& s : d.ratios) {
            ratios.push_back({{"symbol", s.symbol.value}, {"ratio", s.ratio}});
        }
        log.push_back({{"iteration", d.iteration},
                       {"label", d.label},
                       {"priority", d.priority},
                       {"best_priority", d.best_priority},
                       {"symbol", d.symbol.value},
                       {"ratios", ratios},
                       {"children", {d.children.first, d.children.second}}});
    }
    return {{"splits", r.splits},
            {"leaves", r.leaves},
            {"stop_reason", r.stop_reason},
            {"nodes", nodes},
            {"decisions", log}};
}

std::vector<std::vector<Interval>> union_hulls(const partition::Result& r) {
    std::vector<std::vector<Interval>> out;
    for (const std::size_t l : r.leaves) {
        const auto& h = r.nodes[l].hulls;
        for (std::size_t k = 0; k < h.size(); ++k) {
            if (k == out.size()) {
                out.push_back(h[k]);
                continue;
            }
            for (std::size_t d = 0; d < h[k].size(); ++d) {
                out[k][d].lo = std::min(out[k][d].lo, h[k][d].lo);
                out[k][d].hi = std::max(out[k][d].hi, h[k][d].hi);
            }
        }
    }
    return out;
}

json partition_report(const ProblemConfig& cfg, const partition::Result& r, double seconds) {
    std::optional<reach::Violation> worst;
    for (const std::size_t l : r.leaves) {
        const auto& v = r.nodes[l].violation;
        if (v && (!worst || v->step > worst->step)) {
            worst = v;
        }
    }
    return {{"command", "partition"},
            {"problem", problem_summary(cfg)},
            {"mode", std::string(partition::to_string(cfg.partition.mode))},
            {"max_splits", cfg.partition.max_splits},
            {"verdict", std::string(reach::to_string(r.verdict()))},
            {"t_err", worst ? json(worst->step) : json(nullptr)},
            {"splits", r.splits},
            {"leaves", r.leaves.size()},
            {"stop_reason", r.stop_reason},
            {"seconds", seconds},
            {"steps", hulls_to_json(union_hulls(r), cfg.time_step)}};
}

} // namespace symreach::io
