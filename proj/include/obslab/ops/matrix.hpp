#pragma once

#include <array>

#include "obslab/core/domain.hpp"

namespace obslab {

/// Symmetric n x n matrix, n <= 3. Construction keeps exact symmetry.
struct SymMat {
    int n{0};
    std::array<double, 9> a{};  // row-major, all 9 slots kept zeroed

    SymMat() = default;
    explicit SymMat(int dim) : n(dim) {}

    static SymMat identity(int dim) {
        SymMat m(dim);
        for (int i = 0; i < dim; ++i) m.set(i, i, 1.0);
        return m;
    }
    static SymMat diag(int dim, double d0, double d1 = 0.0, double d2 = 0.0) {
        SymMat m(dim);
        m.set(0, 0, d0);
        if (dim >= 2) m.set(1, 1, d1);
        if (dim >= 3) m.set(2, 2, d2);
        return m;
    }

    double operator()(int i, int j) const { return a[static_cast<size_t>(3 * i + j)]; }
    void set(int i, int j, double v) {
        a[static_cast<size_t>(3 * i + j)] = v;
        a[static_cast<size_t>(3 * j + i)] = v;
    }

    double trace() const {
        double t = 0.0;
        for (int i = 0; i < n; ++i) t += (*this)(i, i);
        return t;
    }

    friend SymMat operator+(SymMat x, const SymMat& y) {
        for (size_t k = 0; k < 9; ++k) x.a[k] += y.a[k];
        return x;
    }
    friend SymMat operator-(SymMat x, const SymMat& y) {
        for (size_t k = 0; k < 9; ++k) x.a[k] -= y.a[k];
        return x;
    }
    friend SymMat operator*(double s, SymMat x) {
        for (size_t k = 0; k < 9; ++k) x.a[k] *= s;
        return x;
    }

    /// Largest absolute eigenvalue (spectral norm).
    double spectral_norm() const;
};

/// Eigenvalues in ascending order, by closed form (quadratic for n = 2,
/// trigonometric for n = 3) with a Newton polish on the characteristic
/// polynomial.
std::array<double, 3> sym_eigenvalues(const SymMat& m);

/// Pucci extremal operators on precomputed eigenvalues.
double pucci_minus(const SymMat& x, double lambda, double Lambda);
double pucci_plus(const SymMat& x, double lambda, double Lambda);

}  // namespace obslab
