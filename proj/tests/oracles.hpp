// Test-only oracles, deliberately independent of the decompositions they
// cross-check: characteristic-polynomial eigenvalues for small Hermitian
// matrices, a grid/simplex search for allocation optima, and small random
// matrix generators.

#ifndef CQMIMO_TESTS_ORACLES_HPP
#define CQMIMO_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "cqmimo/matrix.hpp"
#include "cqmimo/rng.hpp"

namespace oracles {

using cqmimo::ComplexMatrix;
using cqmimo::cx;

inline ComplexMatrix random_matrix(std::size_t rows, std::size_t cols, cqmimo::Rng& rng) {
    ComplexMatrix m(rows, cols);
    for (auto& v : m.data()) v = rng.complex_normal();
    return m;
}

// Characteristic polynomial coefficients of a square matrix by the
// Faddeev-LeVerrier recursion: p(x) = x^n + c[0] x^(n-1) + ... + c[n-1].
inline std::vector<double> charpoly(const ComplexMatrix& a) {
    const std::size_t n = a.rows();
    std::vector<double> c(n, 0.0);
    ComplexMatrix b = a;
    for (std::size_t k = 1; k <= n; ++k) {
        const double ck = -cqmimo::trace(b).real() / static_cast<double>(k);
        c[k - 1] = ck;
        if (k == n) break;
        ComplexMatrix shifted = b;
        for (std::size_t i = 0; i < n; ++i) shifted(i, i) += ck;
        b = a * shifted;
    }
    return c;
}

inline double eval_monic(const std::vector<double>& c, double x) {
    double acc = 1.0;
    for (double ci : c) acc = acc * x + ci;
    return acc;
}

// All-real eigenvalues of a small Hermitian matrix via sign scanning plus
// bisection on the characteristic polynomial. Roots returned descending.
inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix& a) {
    const std::size_t n = a.rows();
    const std::vector<double> c = charpoly(a);

    // Gershgorin bound.
    double radius = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) row += std::abs(a(i, j));
        radius = std::max(radius, row);
    }
    const double lo = -radius - 1.0;
    const double hi = radius + 1.0;

    const int grid = 200000;
    std::vector<double> roots;
    double x_prev = lo;
    double f_prev = eval_monic(c, lo);
    for (int g = 1; g <= grid && roots.size() < n; ++g) {
        const double x = lo + (hi - lo) * static_cast<double>(g) / grid;
        const double f = eval_monic(c, x);
        if (f == 0.0) {
            roots.push_back(x);
        } else if ((f_prev < 0.0) != (f < 0.0)) {
            double a0 = x_prev, b0 = x, fa = f_prev;
            for (int it = 0; it < 200; ++it) {
                const double m = 0.5 * (a0 + b0);
                const double fm = eval_monic(c, m);
                if ((fa < 0.0) == (fm < 0.0)) {
                    a0 = m;
                    fa = fm;
                } else {
                    b0 = m;
                }
            }
            roots.push_back(0.5 * (a0 + b0));
        }
        x_prev = x;
        f_prev = f;
    }
    std::sort(roots.rbegin(), roots.rend());
    return roots;
}

}  // namespace oracles

#endif  // CQMIMO_TESTS_ORACLES_HPP
