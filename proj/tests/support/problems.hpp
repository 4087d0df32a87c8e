// Copyright (c) symreach contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Small closed-loop problems and a concrete simulator shared by the tests.
#pragma once

#include "symreach/reach.hpp"
#include "testing.hpp"

namespace symreach::testing {

/// u = 2|x| - 1 written with two ReLU neurons.
inline nn::Network abs_controller() {
    return nn::Network({nn::Layer{(Eigen::MatrixXd(2, 1) << 1, -1).finished(), Eigen::VectorXd::Zero(2),
                                  nn::Activation::relu},
                        nn::Layer{(Eigen::MatrixXd(1, 2) << 2, 2).finished(), Eigen::VectorXd::Constant(1, -1.0),
                                  nn::Activation::linear}});
}

/// x+ = -x + u on X0 = [-1, 1], goal [-1, 1].
inline reach::Problem held_input_problem(SymbolProvider& symbols, std::size_t hold) {
    reach::Problem p;
    p.initial = SZonotope::from_box(Eigen::VectorXd::Constant(1, -1.0), Eigen::VectorXd::Constant(1, 1.0), symbols);
    p.controller = abs_controller();
    p.dynamics = plant::Dynamics{1, 1, 0, {-plant::state(0) + plant::input(0)}};
    p.goal = Polyhedron::box(Eigen::VectorXd::Constant(1, -1.0), Eigen::VectorXd::Constant(1, 1.0));
    p.horizon = 2;
    p.hold = hold;
    p.reduction_order = 50;
    return p;
}

/// Seeded 2-D linear plant x+ = A x + B u + 0.05 w under a small ReLU controller.
inline reach::Problem random_linear_problem(Rng& rng, SymbolProvider& symbols, std::size_t horizon,
                                            std::size_t order = 20) {
    using plant::disturbance;
    using plant::input;
    using plant::state;
    const Eigen::Matrix2d A = Eigen::Matrix2d::Identity() + 0.1 * rng.matrix(2, 2);
    const Eigen::Vector2d B = 0.1 * rng.vector(2);
    reach::Problem p;
    p.initial = SZonotope::from_box(Eigen::Vector2d(-0.2, -0.2) + 0.1 * rng.vector(2),
                                    Eigen::Vector2d(0.2, 0.2) + 0.1 * rng.vector(2), symbols);
    p.controller = random_network(rng, {2, 10, 1}, nn::Activation::relu);
    p.dynamics.n_x = 2;
    p.dynamics.n_u = 1;
    p.dynamics.n_w = 1;
    for (Eigen::Index i = 0; i < 2; ++i) {
        p.dynamics.next_state.push_back(A(i, 0) * state(0) + A(i, 1) * state(1) + B(i) * input(0) +
                                        (0.05 * (i + 1)) * disturbance(0));
    }
    p.disturbance = plant::DisturbanceSpec{{1.0}};
    p.goal = Polyhedron::whole_space(2);
    p.horizon = horizon;
    p.reduction_order = order;
    return p;
}

/// One concrete closed-loop trajectory from x0 with disturbances drawn from rng.
inline std::vector<Eigen::VectorXd> rollout(const reach::Problem& p, const Eigen::VectorXd& x0, Rng& rng) {
    std::vector<Eigen::VectorXd> xs{x0};
    Eigen::VectorXd u;
    for (std::size_t t = 0; t < p.horizon; ++t) {
        if (t % p.hold == 0) {
            u = p.controller.evaluate(xs.back());
        }
        Eigen::VectorXd w(static_cast<Eigen::Index>(p.disturbance.size()));
        for (std::size_t k = 0; k < p.disturbance.size(); ++k) {
            w(static_cast<Eigen::Index>(k)) = p.disturbance.amplitudes[k] * rng.uniform();
        }
        xs.push_back(plant::evaluate(p.dynamics, xs.back(), u, w));
    }
    return xs;
}

} // namespace symreach::testing
