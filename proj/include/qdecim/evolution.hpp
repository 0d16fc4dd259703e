// Specifying states from unitary time evolution, and coarse-graining of the
// trajectory and its Hamiltonian. Units with hbar = 1.

#ifndef QDECIM_EVOLUTION_HPP
#define QDECIM_EVOLUTION_HPP

#include "qdecim/decimation.hpp"
#include "qdecim/numerics.hpp"
#include "qdecim/pca.hpp"
#include "qdecim/random.hpp"
#include "qdecim/stateset.hpp"

#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace qdecim {

using Hamiltonian = HermitianOperator;

inline Hamiltonian zero_hamiltonian(Index dim) {
    return Hamiltonian(ComplexMatrix::Zero(dim, dim));
}

inline Hamiltonian random_hamiltonian(Index dim, std::uint64_t seed) {
    return Hamiltonian(random_hermitian(dim, seed));
}

/// Open transverse-field Ising chain H = -J sum Z_i Z_{i+1} - g sum X_i on
/// n qubits, qubit 1 the most significant bit of the basis index.
inline Hamiltonian ising_hamiltonian(int n, double coupling, double field) {
    if (n < 1 || n > 20) throw Error(ErrorKind::InvalidArgument, "ising chain needs 1 <= n <= 20");
    const Index dim = Index{1} << n;
    ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
    auto z = [](Index state, int bit) { return ((state >> bit) & 1) != 0 ? -1.0 : 1.0; };
    for (Index i = 0; i < dim; ++i) {
        double diag = 0.0;
        for (int q = 1; q < n; ++q) diag -= coupling * z(i, n - q) * z(i, n - q - 1);
        h(i, i) = diag;
        for (int q = 1; q <= n; ++q) h(i ^ (Index{1} << (n - q)), i) -= field;
    }
    return Hamiltonian(std::move(h));
}

/// Precomputed spectral decomposition for exact propagation exp(-iHt).
class Propagator {
public:
    explicit Propagator(const Hamiltonian& h) : eig_(hermitian_eig(h.matrix())) {}

    ComplexVector apply(const ComplexVector& psi, double t) const {
        if (psi.size() != eig_.eigenvectors.rows()) {
            throw Error(ErrorKind::DimMismatch, "state dimension does not match the Hamiltonian");
        }
        ComplexVector amplitudes = eig_.eigenvectors.adjoint() * psi;
        for (Index k = 0; k < amplitudes.size(); ++k) {
            amplitudes(k) *= std::polar(1.0, -eig_.eigenvalues(k) * t);
        }
        return eig_.eigenvectors * amplitudes;
    }

private:
    EigResult eig_;
};

struct Trajectory {
    StateVector initial;
    double dt = 0.0;
    StateSet states;  // column j is psi(j dt), j = 0 .. M-1

    Index steps() const noexcept { return states.count(); }
};

/// psi(t_j) = exp(-i H t_j) psi(0) for t_j = j dt, j = 0 .. steps-1, each
/// computed directly from psi(0).
inline Trajectory evolve_sequence(const Hamiltonian& h, const StateVector& psi0, double dt,
                                  Index steps, const Tolerances& tol = default_tolerances()) {
    if (psi0.size() != h.dim()) {
        throw Error(ErrorKind::DimMismatch, "initial state dimension does not match H");
    }
    require_finite(psi0, "initial state");
    if (std::abs(psi0.squaredNorm() - 1.0) > tol.normalization) {
        throw Error(ErrorKind::NotNormalized, "initial state is not normalized");
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw Error(ErrorKind::InvalidArgument, "time step must be positive and finite");
    }
    if (steps < 1) throw Error(ErrorKind::InvalidArgument, "need at least one step");
    if (h.dim() <= steps + 1) {
        throw Error(ErrorKind::RegimeViolation, "need D > steps + 1, got D = " +
                                                    std::to_string(h.dim()) + ", steps = " +
                                                    std::to_string(steps));
    }

    const Propagator u(h);
    ComplexMatrix states(h.dim(), steps);
    for (Index j = 0; j < steps; ++j) {
        states.col(j) = u.apply(psi0, static_cast<double>(j) * dt);
    }
    return Trajectory{psi0, dt, validate_state_set(std::move(states), NormPolicy::Strict, {}, tol)};
}

/// G_d H G_d^dagger.
inline HermitianOperator coarse_grain_hamiltonian(const CoarseGrainMap& map, const Hamiltonian& h) {
    return coarse_grain_operator(map, h);
}

struct CoarseTrajectory {
    std::shared_ptr<const PcaModel> model;
    CoarseGrainMap map;
    std::vector<CoarseState> states;  // one per time step
};

/// Fit PCA on the trajectory and decimate every step to dimension d.
inline CoarseTrajectory coarse_grained_trajectory(const Trajectory& traj, Index d,
                                                  const Tolerances& tol = default_tolerances()) {
    auto model = std::make_shared<const PcaModel>(fit_pca(traj.states, tol));
    CoarseGrainMap map = build_map(model, d);
    std::vector<CoarseState> states;
    states.reserve(static_cast<std::size_t>(traj.steps()));
    for (Index j = 0; j < traj.steps(); ++j) {
        states.push_back(decimate_state(map, traj.states.column(j), tol));
    }
    return CoarseTrajectory{std::move(model), std::move(map), std::move(states)};
}

/// Mean over specifying states of sum_{k<d} |w_k|^2, for d = 1 .. M+1
/// (entry d-1 holds the value for d).
inline std::vector<double> retained_weight_curve(const PcaModel& model) {
    const ComplexMatrix& w = model.weights();
    std::vector<double> out(static_cast<std::size_t>(w.rows()), 0.0);
    for (Index mu = 0; mu < w.cols(); ++mu) {
        double cumulative = 0.0;
        for (Index k = 0; k < w.rows(); ++k) {
            cumulative += std::norm(w(k, mu));
            out[static_cast<std::size_t>(k)] += cumulative;
        }
    }
    for (double& v : out) v /= static_cast<double>(w.cols());
    return out;
}

}  // namespace qdecim

#endif  // QDECIM_EVOLUTION_HPP
