// Copyright (c) symreach contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string_view>
#include <vector>

#include "symreach/spolynotope.hpp"
#include "symreach/symbols.hpp"
#include "symreach/szonotope.hpp"

namespace symreach::nn {

enum class Activation { relu, sigmoid, tanh, linear };

std::string_view to_string(Activation a);
/// Throws ConfigError for unknown names.
Activation activation_from_string(std::string_view name);

double activate(Activation a, double x);
double activate_derivative(Activation a, double x);

struct Layer {
    Eigen::MatrixXd weights;
    Eigen::VectorXd bias;
    Activation activation{Activation::linear};
};

/// Fully connected feed-forward network. The last layer is affine (linear
/// activation); hidden layers use any activation.
class Network {
  public:
    Network() = default;
    explicit Network(std::vector<Layer> layers);

    [[nodiscard]] const std::vector<Layer>& layers() const { return layers_; }
    [[nodiscard]] Eigen::Index input_dim() const;
    [[nodiscard]] Eigen::Index output_dim() const;
    /// Number of neurons with a nonlinear activation, layer by layer.
    [[nodiscard]] std::vector<Eigen::Index> nonlinear_widths() const;

    [[nodiscard]] Eigen::VectorXd evaluate(const Eigen::VectorXd& x) const;

  private:
    std::vector<Layer> layers_;
};

/// Affine sandwich alpha x + beta +/- gamma of an activation on [l, u].
struct AffineTriplet {
    double alpha{};
    double beta{};
    double gamma{};
};

/// Quadratic sandwich alpha2 x^2 + alpha1 x + beta +/- gamma.
struct QuadCoeffs {
    double alpha2{};
    double alpha1{};
    double beta{};
    double gamma{};
};

/// Minimal-gamma affine cover of ReLU on [l, u]; requires l < u.
AffineTriplet relu_triplet(double l, double u);
/// Affine cover of sigmoid or tanh on [l, u] with alpha = min(phi'(l), phi'(u)); requires l < u.
AffineTriplet sshape_triplet(Activation kind, double l, double u);
/// Quadratic ReLU cover on [l, u] with l < 0 < u, or nullopt outside
/// |l| <= u <= 2|l| and u < |l| <= 2u.
std::optional<QuadCoeffs> relu_quadratic(double l, double u);

/// Width below which a pre-activation range is treated as a point.
inline constexpr double kDegenerateWidth = 1e-12;

/// Triplet used during propagation: exact for stable ReLU and linear
/// neurons, constant for degenerate ranges, otherwise the covers above.
AffineTriplet activation_triplet(Activation kind, double l, double u);

/// Controller abstraction c_u + G s_I + H s_J. Every nonlinear neuron gets
/// one fresh error symbol (zero column when its cover is exact).
SZonotope propagate_affine(const SZonotope& X, const Network& net, SymbolProvider& symbols);

struct PolyOptions {
    /// 1: affine covers everywhere; 2: quadratic ReLU covers where applicable.
    int order = 2;
    std::size_t monomial_budget = 200;
    int max_degree = 4;
    /// Bisection depth for pre-activation bounds.
    int refine_depth = 2;
};

SPolynotope propagate_poly(const SPolynotope& P, const Network& net, const PolyOptions& options,
                           SymbolProvider& symbols);

} // namespace symreach::nn
