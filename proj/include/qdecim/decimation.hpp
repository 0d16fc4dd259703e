// Decimation: truncate the PCA expansion to its leading d components.
//
// G_d = T_d Phi^dagger is the d x D coarse-graining transformation; its rows
// are the first d PCA basis vectors (conjugated), so G_d G_d^dagger = I_d.
// States are mapped by G_d and renormalized; operators by G_d O G_d^dagger.

#ifndef QDECIM_DECIMATION_HPP
#define QDECIM_DECIMATION_HPP

#include "qdecim/numerics.hpp"
#include "qdecim/pca.hpp"

#include <algorithm>
#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace qdecim {

/// Square matrix validated Hermitian on construction.
class HermitianOperator {
public:
    explicit HermitianOperator(ComplexMatrix m, const Tolerances& tol = default_tolerances())
        : matrix_(std::move(m)) {
        if (matrix_.rows() != matrix_.cols()) {
            throw Error(ErrorKind::DimMismatch, "operator matrix is not square");
        }
        require_finite(matrix_, "operator");
        if (!is_hermitian(matrix_, tol.hermiticity)) {
            throw Error(ErrorKind::NotHermitian,
                        "max|m - m^dagger| = " + std::to_string(hermiticity_defect(matrix_)));
        }
    }

    Index dim() const noexcept { return matrix_.rows(); }
    const ComplexMatrix& matrix() const noexcept { return matrix_; }

private:
    ComplexMatrix matrix_;
};

class CoarseGrainMap {
public:
    Index d() const noexcept { return g_.rows(); }
    Index fine_dim() const noexcept { return g_.cols(); }
    /// d x D matrix G_d.
    const ComplexMatrix& matrix() const noexcept { return g_; }
    const PcaModel& source() const noexcept { return *source_; }

    friend CoarseGrainMap build_map(std::shared_ptr<const PcaModel> model, Index d);

private:
    CoarseGrainMap(ComplexMatrix g, std::shared_ptr<const PcaModel> src)
        : g_(std::move(g)), source_(std::move(src)) {}

    ComplexMatrix g_;
    std::shared_ptr<const PcaModel> source_;
};

struct CoarseState {
    ComplexVector weights;     // length d, unit norm
    double norm_before = 0.0;  // ||T_d Phi^dagger v|| before renormalization
    bool outside_span = false; // v was not (numerically) inside span(Phi)

    Index d() const noexcept { return weights.size(); }
};

inline CoarseGrainMap build_map(std::shared_ptr<const PcaModel> model, Index d) {
    if (!model) throw Error(ErrorKind::InvalidArgument, "null model");
    const Index max_d = model->count() + 1;
    if (d < 2 || d > max_d) {
        throw Error(ErrorKind::BadDimension, "d = " + std::to_string(d) +
                                                 " outside [2, " + std::to_string(max_d) + "]");
    }
    ComplexMatrix g = model->basis().leftCols(d).adjoint();
    return CoarseGrainMap(std::move(g), std::move(model));
}

inline CoarseGrainMap build_map(const PcaModel& model, Index d) {
    return build_map(std::make_shared<const PcaModel>(model), d);
}

/// Project onto the leading d components and renormalize.
inline CoarseState decimate_state(const CoarseGrainMap& map, const ComplexVector& v,
                                  const Tolerances& tol = default_tolerances()) {
    if (v.size() != map.fine_dim()) {
        throw Error(ErrorKind::DimMismatch, "state dimension does not match the map");
    }
    require_finite(v, "state");
    CoarseState out;
    ComplexVector w = map.matrix() * v;
    out.norm_before = w.norm();
    if (out.norm_before <= tol.zero_norm) {
        throw Error(ErrorKind::ZeroNorm, "state has no weight in the retained subspace");
    }
    out.weights = w / out.norm_before;

    const ComplexMatrix& phi = map.source().basis();
    const ComplexVector residual = v - phi * (phi.adjoint() * v);
    out.outside_span = residual.norm() > 1e-9 * std::max(1.0, v.norm());
    return out;
}

/// Smallest d whose cumulative weight power reaches 1 - eps, clamped to
/// [2, len(w)]. Falls back to len(w) when roundoff keeps the total below 1 - eps.
inline Index minimal_dimension(const ComplexVector& w, double eps) {
    if (!(eps >= 0.0 && eps < 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "eps must lie in [0, 1)");
    }
    const Index full = w.size();
    Index chosen = full;
    double cumulative = 0.0;
    for (Index d = 1; d <= full; ++d) {
        cumulative += std::norm(w(d - 1));
        if (cumulative >= 1.0 - eps) {
            chosen = d;
            break;
        }
    }
    return std::clamp<Index>(chosen, std::min<Index>(2, full), full);
}

enum class DimensionRule { PerState, SetMax };

/// Per-state minimal d for every specifying state.
inline std::vector<Index> select_dimensions(const PcaModel& model, double eps) {
    std::vector<Index> out;
    out.reserve(static_cast<std::size_t>(model.count()));
    for (Index mu = 0; mu < model.count(); ++mu) {
        out.push_back(minimal_dimension(model.weights().col(mu), eps));
    }
    return out;
}

/// PerState uses state `mu` (0-based); SetMax takes the maximum over all states.
inline Index select_dimension(const PcaModel& model, double eps,
                              DimensionRule rule = DimensionRule::SetMax, Index mu = 0) {
    if (rule == DimensionRule::PerState) {
        if (mu < 0 || mu >= model.count()) {
            throw Error(ErrorKind::InvalidArgument, "state index out of range");
        }
        return minimal_dimension(model.weights().col(mu), eps);
    }
    const std::vector<Index> all = select_dimensions(model, eps);
    return *std::max_element(all.begin(), all.end());
}

/// G_d O G_d^dagger.
inline HermitianOperator coarse_grain_operator(const CoarseGrainMap& map,
                                               const HermitianOperator& op) {
    if (op.dim() != map.fine_dim()) {
        throw Error(ErrorKind::DimMismatch, "operator dimension does not match the map");
    }
    const ComplexMatrix& g = map.matrix();
    ComplexMatrix coarse = g * (op.matrix() * g.adjoint());
    return HermitianOperator(std::move(coarse));
}

/// x^dagger O x for Hermitian O, returned as a real number.
inline double expectation(const ComplexVector& x, const ComplexMatrix& op,
                          const Tolerances& tol = default_tolerances()) {
    if (op.rows() != op.cols() || op.rows() != x.size()) {
        throw Error(ErrorKind::DimMismatch, "vector and operator dimensions differ");
    }
    const Complex value = x.dot(op * x);
    if (std::abs(value.imag()) > tol.expectation_imag) {
        throw Error(ErrorKind::NonRealExpectation,
                    "imaginary part " + std::to_string(value.imag()));
    }
    return value.real();
}

}  // namespace qdecim

#endif  // QDECIM_DECIMATION_HPP
