#pragma once

#include "repeater/core.hpp"

#include <Eigen/Dense>

namespace repeater {

/// Pure-state concurrence C = 2|ad - bc| for a|ee> + b|eg> + c|ge> + d|gg>.
/// Throws InvalidParameterError if the state is not normalized within 1e-10.
double concurrence_pure(const TwoQubitPureState& s);

struct ComparisonReport {
    double fidelity = 0.0;   // |<x|y>|^2
    double infidelity = 1.0; // 1 - fidelity
    double max_amp_diff = 0.0;
    bool phase_aligned = false;
};

/// Rotates the global phase so the largest-magnitude amplitude is real and
/// positive. Ties go to the lowest index.
Eigen::VectorXcd align_global_phase(const Eigen::VectorXcd& v);

/// Both inputs must be normalized and of equal dimension.
ComparisonReport compare_states(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y);

Eigen::VectorXcd to_vector(const TwoQubitPureState& s);
Eigen::VectorXcd to_vector(const FourAtomState& s);

} // namespace repeater
