// Specifying-state ingestion: validation of the augmented matrix, per-state
// means over the global basis, and the mean-subtracted deviation matrix.

#ifndef QDECIM_STATESET_HPP
#define QDECIM_STATESET_HPP

#include "qdecim/numerics.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qdecim {

using StateVector = ComplexVector;

enum class NormPolicy {
    Strict,         // reject columns whose norm deviates from 1
    AutoNormalize,  // rescale them and record the factor
};

/// The augmented matrix of M normalized states in a D-dimensional space,
/// with D > M + 1. Construct through validate_state_set().
class StateSet {
public:
    Index dim() const noexcept { return matrix_.rows(); }
    Index count() const noexcept { return matrix_.cols(); }
    const ComplexMatrix& matrix() const noexcept { return matrix_; }
    auto column(Index mu) const { return matrix_.col(mu); }
    const std::vector<std::string>& labels() const noexcept { return labels_; }

    /// Factor each column was multiplied by during validation (1 when untouched).
    const std::vector<double>& normalization_factors() const noexcept { return factors_; }

    friend StateSet validate_state_set(ComplexMatrix raw, NormPolicy policy,
                                       std::vector<std::string> labels,
                                       const Tolerances& tol);

private:
    StateSet(ComplexMatrix m, std::vector<std::string> labels, std::vector<double> factors)
        : matrix_(std::move(m)), labels_(std::move(labels)), factors_(std::move(factors)) {}

    ComplexMatrix matrix_;
    std::vector<std::string> labels_;
    std::vector<double> factors_;
};

inline StateSet validate_state_set(ComplexMatrix raw, NormPolicy policy = NormPolicy::Strict,
                                   std::vector<std::string> labels = {},
                                   const Tolerances& tol = default_tolerances()) {
    require_finite(raw, "state set");
    const Index dim = raw.rows();
    const Index count = raw.cols();
    if (count < 1) {
        throw Error(ErrorKind::InvalidArgument, "state set is empty");
    }
    if (dim <= count + 1) {
        throw Error(ErrorKind::RegimeViolation,
                    "need D > M + 1, got D = " + std::to_string(dim) +
                        ", M = " + std::to_string(count));
    }
    if (!labels.empty() && static_cast<Index>(labels.size()) != count) {
        throw Error(ErrorKind::DimMismatch, "label count does not match state count");
    }

    std::vector<double> factors(static_cast<std::size_t>(count), 1.0);
    for (Index mu = 0; mu < count; ++mu) {
        const double norm_sq = raw.col(mu).squaredNorm();
        if (std::abs(norm_sq - 1.0) <= tol.normalization) continue;
        if (policy == NormPolicy::Strict) {
            throw Error(ErrorKind::NotNormalized,
                        "state " + std::to_string(mu) + " has squared norm " +
                            std::to_string(norm_sq));
        }
        if (norm_sq == 0.0) {
            throw Error(ErrorKind::ZeroNorm, "state " + std::to_string(mu) + " is the zero vector");
        }
        const double factor = 1.0 / std::sqrt(norm_sq);
        raw.col(mu) *= factor;
        factors[static_cast<std::size_t>(mu)] = factor;
    }
    return StateSet(std::move(raw), std::move(labels), std::move(factors));
}

/// Entry mu is the arithmetic mean of the D coefficients of state mu.
inline ComplexVector column_means(const ComplexMatrix& c) {
    ComplexVector means(c.cols());
    const double inv_dim = 1.0 / static_cast<double>(c.rows());
    for (Index mu = 0; mu < c.cols(); ++mu) {
        Complex sum{0.0, 0.0};
        for (Index i = 0; i < c.rows(); ++i) sum += c(i, mu);
        means(mu) = sum * inv_dim;
    }
    return means;
}

inline ComplexVector column_means(const StateSet& s) { return column_means(s.matrix()); }

/// The all-ones column O_D.
inline ComplexVector uniform_vector(Index dim) { return ComplexVector::Ones(dim); }

/// C minus each column's mean profile (mean times O_D).
inline ComplexMatrix deviation_matrix(const ComplexMatrix& c, const ComplexVector& means) {
    if (means.size() != c.cols()) {
        throw Error(ErrorKind::DimMismatch, "mean vector length does not match state count");
    }
    ComplexMatrix dev = c;
    for (Index mu = 0; mu < c.cols(); ++mu) dev.col(mu).array() -= means(mu);
    return dev;
}

inline ComplexMatrix deviation_matrix(const StateSet& s, const ComplexVector& means) {
    return deviation_matrix(s.matrix(), means);
}

}  // namespace qdecim

#endif  // QDECIM_STATESET_HPP
