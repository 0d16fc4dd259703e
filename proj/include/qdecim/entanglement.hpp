// Single-qubit entanglement diagnostics for states on D = 2^n.
//
// Qubit ordering is big-endian: qubit 1 is the most significant bit of the
// basis index, qubit n the least significant. Entropies are in nats.

#ifndef QDECIM_ENTANGLEMENT_HPP
#define QDECIM_ENTANGLEMENT_HPP

#include "qdecim/numerics.hpp"
#include "qdecim/pca.hpp"
#include "qdecim/stateset.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace qdecim {

class QubitFactorization {
public:
    explicit QubitFactorization(Index dim) {
        if (dim < 2 || (dim & (dim - 1)) != 0) {
            throw Error(ErrorKind::NotPowerOfTwo, "dimension " + std::to_string(dim) +
                                                      " is not a power of two");
        }
        while ((Index{1} << qubits_) < dim) ++qubits_;
    }

    int qubits() const noexcept { return qubits_; }
    Index dim() const noexcept { return Index{1} << qubits_; }

    /// Bit position (0 = least significant) of qubit q, 1-based.
    int bit_of(int q) const {
        if (q < 1 || q > qubits_) {
            throw Error(ErrorKind::BadQubitIndex, "qubit " + std::to_string(q) + " not in [1, " +
                                                      std::to_string(qubits_) + "]");
        }
        return qubits_ - q;
    }

private:
    int qubits_ = 0;
};

using DensityMatrix2 = Eigen::Matrix2cd;

/// Tr over all qubits but q of |v><v|, by index arithmetic on v.
inline DensityMatrix2 reduced_density_matrix(const ComplexVector& v, const QubitFactorization& f,
                                             int q) {
    if (v.size() != f.dim()) {
        throw Error(ErrorKind::DimMismatch, "state dimension does not match the factorization");
    }
    const Index mask = Index{1} << f.bit_of(q);
    Complex r00{0.0, 0.0}, r11{0.0, 0.0}, r01{0.0, 0.0};
    for (Index i = 0; i < v.size(); ++i) {
        if ((i & mask) != 0) continue;
        const Complex a = v(i);
        const Complex b = v(i | mask);
        r00 += a * std::conj(a);
        r11 += b * std::conj(b);
        r01 += a * std::conj(b);
    }
    DensityMatrix2 rho;
    rho << Complex(r00.real(), 0.0), r01, std::conj(r01), Complex(r11.real(), 0.0);
    return rho;
}

/// Eigenvalues of a 2x2 Hermitian matrix, ascending.
inline std::array<double, 2> eigenvalues2(const DensityMatrix2& rho) {
    const double mean = 0.5 * (rho(0, 0).real() + rho(1, 1).real());
    const double half_gap = 0.5 * (rho(0, 0).real() - rho(1, 1).real());
    const double radius = std::hypot(half_gap, std::abs(rho(0, 1)));
    return {mean - radius, mean + radius};
}

/// -sum lambda ln lambda with 0 ln 0 = 0.
inline double von_neumann_entropy(const DensityMatrix2& rho,
                                  const Tolerances& tol = default_tolerances()) {
    require_finite(rho, "density matrix");
    if (max_abs(rho - rho.adjoint()) > tol.hermiticity) {
        throw Error(ErrorKind::NotDensityMatrix, "matrix is not Hermitian");
    }
    const double trace = rho(0, 0).real() + rho(1, 1).real();
    if (std::abs(trace - 1.0) > tol.density_trace) {
        throw Error(ErrorKind::NotDensityMatrix, "trace " + std::to_string(trace));
    }
    double entropy = 0.0;
    for (double lambda : eigenvalues2(rho)) {
        if (lambda < -tol.density_psd) {
            throw Error(ErrorKind::NotDensityMatrix,
                        "negative eigenvalue " + std::to_string(lambda));
        }
        lambda = std::clamp(lambda, 0.0, 1.0);
        if (lambda > 0.0) entropy -= lambda * std::log(lambda);
    }
    return entropy;
}

inline double qubit_entropy(const ComplexVector& v, const QubitFactorization& f, int q) {
    return von_neumann_entropy(reduced_density_matrix(v, f, q));
}

struct EntropyPoint {
    Index d;
    double entropy;
};

struct EntropyCurve {
    Index state_index = 0;  // 0-based
    int qubit = 1;
    std::vector<EntropyPoint> points;  // d = 1 .. M+1
    double fine_entropy = 0.0;         // entropy of the untruncated state

    /// Smallest d whose entropy is within `fraction` of the final point.
    Index saturation_dimension(double fraction = 0.05) const {
        if (points.empty()) return 0;
        const double target = points.back().entropy;
        const double band = fraction * std::max(target, 1e-6);
        for (const auto& p : points) {
            if (std::abs(p.entropy - target) <= band) return p.d;
        }
        return points.back().d;
    }
};

/// Entropy of qubit q in the renormalized truncation sum_{k<d} w_k phi_k of
/// specifying state mu (0-based), for d = 1 .. M+1.
inline EntropyCurve entropy_vs_dimension_curve(const StateSet& s, const PcaModel& model,
                                               Index mu, int q,
                                               const Tolerances& tol = default_tolerances()) {
    if (s.dim() != model.dim() || s.count() != model.count()) {
        throw Error(ErrorKind::DimMismatch, "state set and model disagree in shape");
    }
    if (mu < 0 || mu >= s.count()) {
        throw Error(ErrorKind::InvalidArgument, "state index out of range");
    }
    const QubitFactorization f(s.dim());
    f.bit_of(q);

    EntropyCurve curve;
    curve.state_index = mu;
    curve.qubit = q;
    curve.fine_entropy = qubit_entropy(s.column(mu).normalized(), f, q);

    const ComplexMatrix& phi = model.basis();
    const auto w = model.weights().col(mu);
    ComplexVector partial = ComplexVector::Zero(s.dim());
    for (Index d = 1; d <= model.count() + 1; ++d) {
        partial += w(d - 1) * phi.col(d - 1);
        const double n = partial.norm();
        if (n <= tol.zero_norm) {
            throw Error(ErrorKind::ZeroNorm,
                        "truncation to d = " + std::to_string(d) + " has zero norm");
        }
        curve.points.push_back({d, qubit_entropy(partial / n, f, q)});
    }
    return curve;
}

}  // namespace qdecim

#endif  // QDECIM_ENTANGLEMENT_HPP
