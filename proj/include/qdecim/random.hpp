// Seeded, platform-independent pseudo-random inputs: state sets, unitaries,
// Hermitian matrices.
//
// Only the raw std::mt19937_64 stream is used (its output sequence is fixed
// by the standard); the conversions to doubles are done here so results do
// not depend on the standard library's distribution implementations.

#ifndef QDECIM_RANDOM_HPP
#define QDECIM_RANDOM_HPP

#include "qdecim/numerics.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace qdecim {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller; one draw per call, no caching.
    double normal() {
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

/// D x M matrix whose entries have re, im uniform on [-1, 1], columns
/// normalized afterwards. Column-major draw order (re then im per entry).
inline ComplexMatrix random_state_matrix(Index dim, Index count, std::uint64_t seed) {
    Rng rng(seed);
    ComplexMatrix c(dim, count);
    for (Index mu = 0; mu < count; ++mu) {
        for (Index i = 0; i < dim; ++i) {
            const double re = rng.uniform(-1.0, 1.0);
            const double im = rng.uniform(-1.0, 1.0);
            c(i, mu) = Complex(re, im);
        }
        c.col(mu) /= c.col(mu).norm();
    }
    return c;
}

inline ComplexVector random_state(Index dim, std::uint64_t seed) {
    return random_state_matrix(dim, 1, seed).col(0);
}

inline ComplexMatrix random_gaussian_matrix(Index rows, Index cols, Rng& rng) {
    ComplexMatrix a(rows, cols);
    for (Index j = 0; j < cols; ++j) {
        for (Index i = 0; i < rows; ++i) {
            const double re = rng.normal();
            const double im = rng.normal();
            a(i, j) = Complex(re, im) / std::sqrt(2.0);
        }
    }
    return a;
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the
/// diagonal phases of R divided out.
inline ComplexMatrix random_unitary(Index dim, std::uint64_t seed) {
    Rng rng(seed);
    const ComplexMatrix a = random_gaussian_matrix(dim, dim, rng);
    Eigen::HouseholderQR<ComplexMatrix> qr(a);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dim, dim);
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index k = 0; k < dim; ++k) {
        const double mag = std::abs(r(k, k));
        if (mag > 0.0) q.col(k) *= r(k, k) / mag;
    }
    return q;
}

/// GUE-style Hermitian matrix (A + A^dagger) / 2 with unit-variance complex
/// Gaussian entries in A. Exactly Hermitian.
inline ComplexMatrix random_hermitian(Index dim, std::uint64_t seed) {
    Rng rng(seed);
    const ComplexMatrix a = random_gaussian_matrix(dim, dim, rng);
    ComplexMatrix h = (a + a.adjoint()) * 0.5;
    for (Index i = 0; i < dim; ++i) h(i, i) = Complex(h(i, i).real(), 0.0);
    return h;
}

}  // namespace qdecim

#endif  // QDECIM_RANDOM_HPP
