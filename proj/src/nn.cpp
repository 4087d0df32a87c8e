// Copyright (c) symreach contributors.
// SPDX-License-Identifier: Apache-2.0
#include "symreach/nn.hpp"

#include <cmath>
#include <string>

#include "symreach/error.hpp"

namespace symreach::nn {

std::string_view to_string(Activation a) {
    switch (a) {
    case Activation::relu:
        return "relu";
    case Activation::sigmoid:
        return "sigmoid";
    case Activation::tanh:
        return "tanh";
    case Activation::linear:
        return "linear";
    }
    return "linear";
}

Activation activation_from_string(std::string_view name) {
    if (name == "relu") {
        return Activation::relu;
    }
    if (name == "sigmoid") {
        return Activation::sigmoid;
    }
    if (name == "tanh") {
        return Activation::tanh;
    }
    if (name == "linear" || name == "identity" || name == "affine") {
        return Activation::linear;
    }
    throw ConfigError("unknown activation '" + std::string(name) + "'");
}

double activate(Activation a, double x) {
    switch (a) {
    case Activation::relu:
        return x > 0.0 ? x : 0.0;
    case Activation::sigmoid:
        return 1.0 / (1.0 + std::exp(-x));
    case Activation::tanh:
        return std::tanh(x);
    case Activation::linear:
        return x;
    }
    return x;
}

double activate_derivative(Activation a, double x) {
    switch (a) {
    case Activation::relu:
        return x > 0.0 ? 1.0 : 0.0;
    case Activation::sigmoid: {
        const double s = activate(a, x);
        return s * (1.0 - s);
    }
    case Activation::tanh: {
        const double t = std::tanh(x);
        return 1.0 - t * t;
    }
    case Activation::linear:
        return 1.0;
    }
    return 1.0;
}

// -----------------------------------------------------------------------------
// Network
// -----------------------------------------------------------------------------

Network::Network(std::vector<Layer> layers) : layers_(std::move(layers)) {
    if (layers_.empty()) {
        throw ConfigError("network: no layers");
    }
    for (std::size_t k = 0; k < layers_.size(); ++k) {
        const Layer& L = layers_[k];
        const std::string where = "network layer " + std::to_string(k);
        if (L.weights.rows() != L.bias.size()) {
            throw DimensionError(where + ": " + std::to_string(L.weights.rows()) + " weight rows but bias of size " +
                                 std::to_string(L.bias.size()));
        }
        if (k > 0 && L.weights.cols() != layers_[k - 1].weights.rows()) {
            throw DimensionError(where + ": expects " + std::to_string(L.weights.cols()) + " inputs, previous layer has " +
                                 std::to_string(layers_[k - 1].weights.rows()) + " outputs");
        }
        if (!L.weights.allFinite() || !L.bias.allFinite()) {
            throw ConfigError(where + ": non-finite weight or bias");
        }
    }
    if (layers_.back().activation != Activation::linear) {
        throw ConfigError("network: output layer must be linear");
    }
}

Eigen::Index Network::input_dim() const { return layers_.empty() ? 0 : layers_.front().weights.cols(); }

Eigen::Index Network::output_dim() const { return layers_.empty() ? 0 : layers_.back().weights.rows(); }

std::vector<Eigen::Index> Network::nonlinear_widths() const {
    std::vector<Eigen::Index> out;
    for (const auto& L : layers_) {
        if (L.activation != Activation::linear) {
            out.push_back(L.weights.rows());
        }
    }
    return out;
}

Eigen::VectorXd Network::evaluate(const Eigen::VectorXd& x) const {
    if (x.size() != input_dim()) {
        throw DimensionError("network: input size mismatch");
    }
    Eigen::VectorXd y = x;
    for (const auto& L : layers_) {
        y = L.weights * y + L.bias;
        if (L.activation != Activation::linear) {
            y = y.unaryExpr([&](double v) { return activate(L.activation, v); });
        }
    }
    return y;
}

// -----------------------------------------------------------------------------
// Neuron covers
// -----------------------------------------------------------------------------

AffineTriplet relu_triplet(double l, double u) {
    if (!(l < u)) {
        throw ContractError("relu_triplet: requires l < u");
    }
    const double fl = activate(Activation::relu, l);
    const double fu = activate(Activation::relu, u);
    const double alpha = (fu - fl) / (u - l);
    const double half = 0.5 * (fl - alpha * l);
    return {alpha, half, half};
}

AffineTriplet sshape_triplet(Activation kind, double l, double u) {
    if (kind != Activation::sigmoid && kind != Activation::tanh) {
        throw ContractError("sshape_triplet: activation must be sigmoid or tanh");
    }
    if (!(l < u)) {
        throw ContractError("sshape_triplet: requires l < u");
    }
    const double fl = activate(kind, l);
    const double fu = activate(kind, u);
    const double alpha = std::min(activate_derivative(kind, l), activate_derivative(kind, u));
    return {alpha, 0.5 * (fu + fl - alpha * (u + l)), 0.5 * (fu - fl - alpha * (u - l))};
}

std::optional<QuadCoeffs> relu_quadratic(double l, double u) {
    if (!(l < 0.0 && 0.0 < u)) {
        throw ContractError("relu_quadratic: requires l < 0 < u");
    }
    const double a = -l;
    if (a <= u && u <= 2.0 * a) {
        const double alpha2 = 1.0 / (2.0 * u);
        const double g = alpha2 * u * u / 8.0;
        return QuadCoeffs{alpha2, 1.0 - alpha2 * u, g, g};
    }
    if (u < a && a <= 2.0 * u) {
        const double alpha2 = -1.0 / (2.0 * l);
        const double g = alpha2 * l * l / 8.0;
        return QuadCoeffs{alpha2, -alpha2 * l, g, g};
    }
    return std::nullopt;
}

AffineTriplet activation_triplet(Activation kind, double l, double u) {
    if (kind == Activation::linear) {
        return {1.0, 0.0, 0.0};
    }
    if (l > u) {
        throw ContractError("activation_triplet: l > u");
    }
    if (kind == Activation::relu) {
        if (l >= 0.0) {
            return {1.0, 0.0, 0.0};
        }
        if (u <= 0.0) {
            return {0.0, 0.0, 0.0};
        }
    }
    if (u - l < kDegenerateWidth) {
        const double fl = activate(kind, l);
        const double fu = activate(kind, u);
        return {0.0, 0.5 * (fu + fl), 0.5 * (fu - fl)};
    }
    if (kind == Activation::relu) {
        return relu_triplet(l, u);
    }
    return sshape_triplet(kind, l, u);
}

// -----------------------------------------------------------------------------
// Propagation
// -----------------------------------------------------------------------------

SZonotope propagate_affine(const SZonotope& X, const Network& net, SymbolProvider& symbols) {
    if (X.dim() != net.input_dim()) {
        throw DimensionError("propagate_affine: set dimension " + std::to_string(X.dim()) + " but network expects " +
                             std::to_string(net.input_dim()));
    }
    Eigen::VectorXd c = X.center();
    Eigen::MatrixXd R = X.generators();
    IdVector ids = X.ids();
    for (const auto& L : net.layers()) {
        c = L.weights * c + L.bias;
        R = L.weights * R;
        if (L.activation == Activation::linear) {
            continue;
        }
        const Eigen::Index n = c.size();
        const Eigen::Index p = R.cols();
        Eigen::MatrixXd next = Eigen::MatrixXd::Zero(n, p + n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double rad = R.row(i).lpNorm<1>();
            const AffineTriplet t = activation_triplet(L.activation, c(i) - rad, c(i) + rad);
            c(i) = t.alpha * c(i) + t.beta;
            next.row(i).head(p) = t.alpha * R.row(i);
            next(i, p + i) = t.gamma;
        }
        R = std::move(next);
        const IdVector fresh = symbols.fresh_ids(static_cast<std::size_t>(n));
        ids.insert(ids.end(), fresh.begin(), fresh.end());
    }
    return {std::move(c), std::move(R), std::move(ids)};
}

SPolynotope propagate_poly(const SPolynotope& P, const Network& net, const PolyOptions& options,
                           SymbolProvider& symbols) {
    if (P.dim() != net.input_dim()) {
        throw DimensionError("propagate_poly: set dimension " + std::to_string(P.dim()) + " but network expects " +
                             std::to_string(net.input_dim()));
    }
    if (options.order != 1 && options.order != 2) {
        throw ContractError("propagate_poly: order must be 1 or 2");
    }
    SPolynotope X = P;
    for (const auto& L : net.layers()) {
        SPolynotope Z = linear_image(L.weights, X);
        Z += L.bias;
        if (L.activation == Activation::linear) {
            X = std::move(Z);
            continue;
        }
        std::vector<SPolynotope> neurons;
        neurons.reserve(static_cast<std::size_t>(Z.dim()));
        for (Eigen::Index i = 0; i < Z.dim(); ++i) {
            const SPolynotope Zi = Z.row(i);
            const Interval b = refine_bound(Zi, options.refine_depth);
            const SymbolId err = symbols.fresh_id();
            const SPolynotope err_sym({Eigen::VectorXd::Zero(1)}, Eigen::MatrixXd::Ones(1, 1), {err},
                                      Eigen::MatrixXi::Ones(1, 1));

            std::optional<QuadCoeffs> quad;
            if (options.order == 2 && L.activation == Activation::relu && b.lo < 0.0 && 0.0 < b.hi &&
                b.width() >= kDegenerateWidth) {
                quad = relu_quadratic(b.lo, b.hi);
            }
            SPolynotope out;
            if (quad) {
                out = quad->alpha2 * pow(Zi, 2) + quad->alpha1 * Zi + quad->gamma * err_sym;
                out += Eigen::VectorXd::Constant(1, quad->beta);
            } else {
                const AffineTriplet t = activation_triplet(L.activation, b.lo, b.hi);
                out = t.alpha * Zi + t.gamma * err_sym;
                out += Eigen::VectorXd::Constant(1, t.beta);
            }
            neurons.push_back(std::move(out));
        }
        X = reduce_monomials(vcat(neurons), options.monomial_budget, options.max_degree, symbols);
    }
    return X;
}

} // namespace symreach::nn
