// Mean-subtracted PCA of a set of specifying states.
//
// The fitted basis is Phi = [phi_0, phi_1, ..., phi_M] where phi_0 = O_D/sqrt(D)
// carries each state's mean and phi_1..phi_M are the left singular vectors of
// the deviation matrix in order of descending singular value. Every
// specifying state is reproduced exactly as C_mu = Phi W_mu, with W_mu a unit
// (M+1)-vector whose zeroth entry is sqrt(D) times the state's mean.

#ifndef QDECIM_PCA_HPP
#define QDECIM_PCA_HPP

#include "qdecim/numerics.hpp"
#include "qdecim/stateset.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace qdecim {

class PcaModel {
public:
    Index dim() const noexcept { return basis_.rows(); }
    Index count() const noexcept { return weights_.cols(); }

    /// D x (M+1), orthonormal columns, column 0 the normalized uniform vector.
    const ComplexMatrix& basis() const noexcept { return basis_; }
    /// e_1 >= ... >= e_M >= 0.
    const RealVector& singular_values() const noexcept { return singular_values_; }
    /// (M+1) x M; column mu holds the weights of specifying state mu.
    const ComplexMatrix& weights() const noexcept { return weights_; }
    /// Number of singular values above the rank tolerance.
    Index rank() const noexcept { return rank_; }
    /// Basis column k (k >= 1) is a completion vector rather than a singular vector.
    bool is_null_component(Index k) const noexcept { return k > rank_; }

    /// Rebuild a model from stored parts, checking every model invariant.
    static PcaModel from_parts(ComplexMatrix basis, RealVector singular_values,
                               ComplexMatrix weights,
                               const Tolerances& tol = default_tolerances());

    friend PcaModel fit_pca(const StateSet& s, const Tolerances& tol);

private:
    PcaModel(ComplexMatrix basis, RealVector sv, ComplexMatrix weights, Index rank)
        : basis_(std::move(basis)),
          singular_values_(std::move(sv)),
          weights_(std::move(weights)),
          rank_(rank) {}

    ComplexMatrix basis_;
    RealVector singular_values_;
    ComplexMatrix weights_;
    Index rank_ = 0;
};

namespace detail {

inline Index numerical_rank(const RealVector& sv, const Tolerances& tol) {
    if (sv.size() == 0) return 0;
    const double cutoff = std::max(tol.rank_relative * sv(0), tol.rank_absolute);
    Index r = 0;
    for (Index k = 0; k < sv.size(); ++k) {
        if (sv(k) > cutoff) ++r;
    }
    return r;
}

// Two passes of classical Gram-Schmidt of v against columns [0, upto) of q.
inline void orthogonalize_against(ComplexVector& v, const ComplexMatrix& q, Index upto) {
    for (int pass = 0; pass < 2; ++pass) {
        for (Index j = 0; j < upto; ++j) v -= q.col(j) * q.col(j).dot(v);
    }
}

// Fill columns [first, end) of q with unit vectors orthogonal to every
// earlier column, drawn from canonical basis vectors in index order.
inline void complete_orthonormal(ComplexMatrix& q, Index first) {
    Index next_canonical = 0;
    for (Index k = first; k < q.cols(); ++k) {
        for (;;) {
            if (next_canonical >= q.rows()) {
                throw Error(ErrorKind::RegimeViolation, "no room to complete the PCA basis");
            }
            ComplexVector v = ComplexVector::Unit(q.rows(), next_canonical++);
            orthogonalize_against(v, q, k);
            const double n = v.norm();
            if (n > 0.5) {
                q.col(k) = v / n;
                break;
            }
        }
    }
}

// Modified Gram-Schmidt over columns 1.., leaving column 0 fixed.
inline void reorthogonalize(ComplexMatrix& q) {
    for (Index k = 1; k < q.cols(); ++k) {
        for (Index j = 0; j < k; ++j) {
            const Complex proj = q.col(j).dot(q.col(k));
            q.col(k) -= proj * q.col(j);
        }
        q.col(k).normalize();
    }
}

}  // namespace detail

inline PcaModel fit_pca(const StateSet& s, const Tolerances& tol = default_tolerances()) {
    const Index dim = s.dim();
    const Index count = s.count();
    const ComplexVector means = column_means(s);
    const ComplexMatrix dev = deviation_matrix(s, means);

    const SvdResult dec = svd(dev);
    const Index rank = detail::numerical_rank(dec.singular_values, tol);

    ComplexMatrix basis(dim, count + 1);
    basis.col(0).setConstant(Complex(1.0 / std::sqrt(static_cast<double>(dim)), 0.0));
    basis.middleCols(1, rank) = dec.left_vectors.leftCols(rank);
    detail::complete_orthonormal(basis, rank + 1);

    for (Index k = 1; k <= count; ++k) detail::fix_column_phase(basis, nullptr, k);
    if (isometry_defect(basis) > tol.reorthogonalize) {
        detail::reorthogonalize(basis);
        for (Index k = 1; k <= count; ++k) detail::fix_column_phase(basis, nullptr, k);
    }

    ComplexMatrix weights(count + 1, count);
    const double root_dim = std::sqrt(static_cast<double>(dim));
    weights.row(0) = (means * root_dim).transpose();
    weights.bottomRows(count) = basis.rightCols(count).adjoint() * dev;

    RealVector sv = dec.singular_values;
    for (Index k = rank; k < sv.size(); ++k) sv(k) = 0.0;
    return PcaModel(std::move(basis), std::move(sv), std::move(weights), rank);
}

inline PcaModel PcaModel::from_parts(ComplexMatrix basis, RealVector singular_values,
                                     ComplexMatrix weights, const Tolerances& tol) {
    const Index count = weights.cols();
    const Index dim = basis.rows();
    auto invalid = [](const std::string& what) { return Error(ErrorKind::InvalidModel, what); };

    if (count < 1 || basis.cols() != count + 1 || weights.rows() != count + 1 ||
        singular_values.size() != count) {
        throw invalid("inconsistent basis / weights / singular value shapes");
    }
    if (dim <= count + 1) throw invalid("need D > M + 1");
    require_finite(basis, "model basis");
    require_finite(weights, "model weights");
    require_finite(singular_values, "model singular values");

    for (Index k = 0; k < count; ++k) {
        if (singular_values(k) < 0.0) throw invalid("negative singular value");
        if (k > 0 && singular_values(k) > singular_values(k - 1)) {
            throw invalid("singular values not descending");
        }
    }
    const double root_dim = std::sqrt(static_cast<double>(dim));
    const ComplexVector phi0 = ComplexVector::Constant(dim, Complex(1.0 / root_dim, 0.0));
    if (max_abs(basis.col(0) - phi0) > tol.orthonormality) {
        throw invalid("basis column 0 is not the normalized uniform vector");
    }
    if (isometry_defect(basis) > tol.orthonormality) {
        throw invalid("basis columns are not orthonormal");
    }
    for (Index mu = 0; mu < count; ++mu) {
        if (std::abs(weights.col(mu).squaredNorm() - 1.0) > tol.normalization) {
            throw invalid("weight column " + std::to_string(mu) + " is not unit norm");
        }
    }
    const Index rank = detail::numerical_rank(singular_values, tol);
    return PcaModel(std::move(basis), std::move(singular_values), std::move(weights), rank);
}

/// Phi^dagger v: expansion coefficients of v in the PCA basis.
inline ComplexVector weights_of(const PcaModel& model, const ComplexVector& v) {
    if (v.size() != model.dim()) {
        throw Error(ErrorKind::DimMismatch, "state dimension " + std::to_string(v.size()) +
                                                " vs model dimension " +
                                                std::to_string(model.dim()));
    }
    return model.basis().adjoint() * v;
}

/// Fractional contribution e_k / sum_j e_j of component k (1-based).
inline double importance(const PcaModel& model, Index k) {
    if (k < 1 || k > model.count()) {
        throw Error(ErrorKind::InvalidArgument, "component index out of range");
    }
    if (model.rank() == 0) {
        throw Error(ErrorKind::AllZeroDeviations, "every specifying state has a uniform profile");
    }
    const RealVector& e = model.singular_values();
    return e(k - 1) / e.sum();
}

/// Importance of every component, index k-1 holding Imp(phi_k).
inline RealVector importances(const PcaModel& model) {
    RealVector out(model.count());
    for (Index k = 1; k <= model.count(); ++k) out(k - 1) = importance(model, k);
    return out;
}

/// Phi w, without renormalization.
inline ComplexVector reconstruct(const PcaModel& model, const ComplexVector& w) {
    if (w.size() != model.count() + 1) {
        throw Error(ErrorKind::DimMismatch, "weight vector must have length M + 1");
    }
    return model.basis() * w;
}

}  // namespace qdecim

#endif  // QDECIM_PCA_HPP
