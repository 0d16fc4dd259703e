// Dense complex linear algebra kernels shared by every other module.
//
// Everything here is a pure function of its inputs. The heavy lifting is
// delegated to Eigen's divide-and-conquer SVD and self-adjoint eigensolver;
// this header adds input validation, a deterministic phase convention and
// the error vocabulary used throughout the library.

#ifndef QDECIM_NUMERICS_HPP
#define QDECIM_NUMERICS_HPP

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qdecim {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

enum class ErrorKind {
    NonFinite,
    NoConvergence,
    NotHermitian,
    NotNormalized,
    RegimeViolation,
    DimMismatch,
    AllZeroDeviations,
    BadDimension,
    ZeroNorm,
    NonRealExpectation,
    NotPowerOfTwo,
    BadQubitIndex,
    NotDensityMatrix,
    InvalidArgument,
    InvalidModel,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::NonFinite: return "NonFinite";
        case ErrorKind::NoConvergence: return "NoConvergence";
        case ErrorKind::NotHermitian: return "NotHermitian";
        case ErrorKind::NotNormalized: return "NotNormalized";
        case ErrorKind::RegimeViolation: return "RegimeViolation";
        case ErrorKind::DimMismatch: return "DimMismatch";
        case ErrorKind::AllZeroDeviations: return "AllZeroDeviations";
        case ErrorKind::BadDimension: return "BadDimension";
        case ErrorKind::ZeroNorm: return "ZeroNorm";
        case ErrorKind::NonRealExpectation: return "NonRealExpectation";
        case ErrorKind::NotPowerOfTwo: return "NotPowerOfTwo";
        case ErrorKind::BadQubitIndex: return "BadQubitIndex";
        case ErrorKind::NotDensityMatrix: return "NotDensityMatrix";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::InvalidModel: return "InvalidModel";
    }
    return "Unknown";
}

/// Domain error raised by every module. what() starts with the kind name.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& detail)
        : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Numerical thresholds shared by the library, the tests and the CLI.
struct Tolerances {
    double orthonormality = 1e-10;    // isometry / unitarity checks
    double hermiticity = 1e-10;       // max|m - m^dagger| relative to max(1, max|m|)
    double normalization = 1e-9;      // | ||c||^2 - 1 | for input states
    double rank_relative = 1e-12;     // singular values below this * e_1 count as zero
    double rank_absolute = 1e-12;     // ... or below this absolute floor
    double zero_norm = 1e-14;         // decimation refuses to renormalize below this
    double expectation_imag = 1e-8;   // allowed imaginary residue of <x|O|x>
    double density_trace = 1e-10;
    double density_psd = 1e-12;
    double reorthogonalize = 1e-12;   // trigger for the Gram-Schmidt cleanup pass
};

inline const Tolerances& default_tolerances() {
    static const Tolerances tol{};
    return tol;
}

template <class Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

template <class Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m, std::string_view what) {
    if (!m.allFinite()) {
        throw Error(ErrorKind::NonFinite, std::string(what) + " contains NaN or Inf");
    }
}

/// max|m - m^dagger|; m must be square.
inline double hermiticity_defect(const ComplexMatrix& m) {
    return max_abs(m - m.adjoint());
}

inline bool is_hermitian(const ComplexMatrix& m, double tol = default_tolerances().hermiticity) {
    if (m.rows() != m.cols()) return false;
    return hermiticity_defect(m) <= tol * std::max(1.0, max_abs(m));
}

/// max|Q^dagger Q - I| for a matrix with orthonormal columns.
inline double isometry_defect(const ComplexMatrix& q) {
    return max_abs(q.adjoint() * q - ComplexMatrix::Identity(q.cols(), q.cols()));
}

struct SvdResult {
    ComplexMatrix left_vectors;        // rows x r
    RealVector singular_values;        // r, descending
    ComplexMatrix right_vectors_conjT; // r x cols
};

struct EigResult {
    RealVector eigenvalues;    // ascending
    ComplexMatrix eigenvectors;
};

namespace detail {

// Rotate column k of u so its largest-magnitude entry is real positive and
// apply the inverse phase to row k of vh, leaving u * diag(s) * vh unchanged.
// Ties on magnitude resolve to the lowest index.
inline void fix_column_phase(ComplexMatrix& u, ComplexMatrix* vh, Index k) {
    Index pivot = 0;
    double best = -1.0;
    for (Index i = 0; i < u.rows(); ++i) {
        const double a = std::abs(u(i, k));
        if (a > best) {
            best = a;
            pivot = i;
        }
    }
    if (best <= 0.0) return;
    const Complex phase = std::conj(u(pivot, k)) / best;
    u.col(k) *= phase;
    u(pivot, k) = Complex(std::abs(u(pivot, k)), 0.0);
    if (vh != nullptr) vh->row(k) *= std::conj(phase);
}

}  // namespace detail

/// Phase convention used for every set of basis vectors produced here.
inline void canonicalize_phases(ComplexMatrix& u) {
    for (Index k = 0; k < u.cols(); ++k) detail::fix_column_phase(u, nullptr, k);
}

/// Thin SVD m = U diag(s) V^dagger with s descending and phase-fixed U.
inline SvdResult svd(const ComplexMatrix& m) {
    if (m.rows() < 1 || m.cols() < 1) {
        throw Error(ErrorKind::InvalidArgument, "svd of an empty matrix");
    }
    require_finite(m, "svd input");

    Eigen::BDCSVD<ComplexMatrix> solver(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorKind::NoConvergence, "singular value decomposition did not converge");
    }

    SvdResult out;
    out.left_vectors = solver.matrixU();
    out.singular_values = solver.singularValues();
    out.right_vectors_conjT = solver.matrixV().adjoint();

    // Eigen already sorts descending; a stable pass keeps the contract explicit.
    const Index r = out.singular_values.size();
    for (Index k = 1; k < r; ++k) {
        for (Index j = k; j > 0 && out.singular_values(j) > out.singular_values(j - 1); --j) {
            std::swap(out.singular_values(j), out.singular_values(j - 1));
            out.left_vectors.col(j).swap(out.left_vectors.col(j - 1));
            out.right_vectors_conjT.row(j).swap(out.right_vectors_conjT.row(j - 1));
        }
    }
    for (Index k = 0; k < r; ++k) {
        detail::fix_column_phase(out.left_vectors, &out.right_vectors_conjT, k);
    }
    return out;
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
inline EigResult hermitian_eig(const ComplexMatrix& m,
                               double tol = default_tolerances().hermiticity) {
    if (m.rows() != m.cols() || m.rows() < 1) {
        throw Error(ErrorKind::NotHermitian, "matrix is not square");
    }
    require_finite(m, "eigensolver input");
    if (!is_hermitian(m, tol)) {
        throw Error(ErrorKind::NotHermitian,
                    "max|m - m^dagger| = " + std::to_string(hermiticity_defect(m)));
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorKind::NoConvergence, "Hermitian eigensolver did not converge");
    }
    EigResult out{solver.eigenvalues(), solver.eigenvectors()};
    canonicalize_phases(out.eigenvectors);
    return out;
}

}  // namespace qdecim

#endif  // QDECIM_NUMERICS_HPP
