#include "repeater/measures.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace repeater {

namespace {
constexpr double kNormTolerance = 1e-10;

void require_normalized(double norm, const char* what) {
    if (std::abs(norm - 1.0) > kNormTolerance) {
        std::ostringstream msg;
        msg << what << " requires a normalized state (norm = " << norm << ")";
        throw InvalidParameterError(msg.str());
    }
}
} // namespace

double concurrence_pure(const TwoQubitPureState& s) {
    require_normalized(s.norm(), "concurrence_pure");
    using K = TwoQubitKet;
    const double c = 2.0 * std::abs(s[K::EE] * s[K::GG] - s[K::EG] * s[K::GE]);
    return std::clamp(c, 0.0, 1.0);
}

Eigen::VectorXcd align_global_phase(const Eigen::VectorXcd& v) {
    if (v.size() == 0) return v;
    Eigen::Index pivot = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        // Near-ties are resolved toward the lower index so that two copies of
        // the same ray pick the same pivot despite rounding.
        if (std::abs(v[i]) > best * (1.0 + 1e-9)) {
            best = std::abs(v[i]);
            pivot = i;
        }
    }
    if (best == 0.0) return v;
    const Complex phase = std::conj(v[pivot]) / std::abs(v[pivot]);
    return v * phase;
}

ComparisonReport compare_states(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) {
    if (x.size() != y.size()) {
        throw DimensionMismatchError("compare_states: dimension mismatch");
    }
    require_normalized(x.norm(), "compare_states");
    require_normalized(y.norm(), "compare_states");

    ComparisonReport r;
    r.fidelity = std::min(1.0, std::norm(x.dot(y)));
    r.infidelity = 1.0 - r.fidelity;

    // Both vectors are rotated by the phase of the same entry (the pivot
    // chosen on x), so near-equal magnitudes in y cannot select a different
    // reference amplitude.
    Eigen::Index pivot = 0;
    x.cwiseAbs().maxCoeff(&pivot);
    auto rotate = [pivot](const Eigen::VectorXcd& v) -> Eigen::VectorXcd {
        const double mag = std::abs(v[pivot]);
        return mag > 0.0 ? Eigen::VectorXcd(v * (std::conj(v[pivot]) / mag)) : v;
    };
    r.max_amp_diff = (rotate(x) - rotate(y)).cwiseAbs().maxCoeff();
    r.phase_aligned = true;
    return r;
}

Eigen::VectorXcd to_vector(const TwoQubitPureState& s) {
    return Eigen::Map<const Eigen::VectorXcd>(s.amps.data(), 4);
}

Eigen::VectorXcd to_vector(const FourAtomState& s) {
    return Eigen::Map<const Eigen::VectorXcd>(s.amps.data(), 16);
}

} // namespace repeater
