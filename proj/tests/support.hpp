#pragma once

// Shared helpers for the test suites: seeded generators and brute-force
// oracles kept independent of the library code paths they check.

#include "toric/intlinalg.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace toric::testsupport {

inline IntMatrix random_matrix(std::mt19937_64& rng, std::size_t rows,
                               std::size_t cols, int lo = -20, int hi = 20) {
    std::uniform_int_distribution<int> dist(lo, hi);
    IntMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = dist(rng);
    return m;
}

// Product of random elementary operations applied to the identity,
// so the determinant is +-1 by construction.
inline IntMatrix random_unimodular(std::mt19937_64& rng, std::size_t n, int steps = 12) {
    IntMatrix m = IntMatrix::identity(n);
    if (n == 0) return m;
    std::uniform_int_distribution<std::size_t> idx(0, n - 1);
    std::uniform_int_distribution<int> coef(-3, 3);
    std::uniform_int_distribution<int> op(0, 2);
    for (int s = 0; s < steps; ++s) {
        std::size_t i = idx(rng), j = idx(rng);
        switch (op(rng)) {
            case 0:
                if (i != j) m.add_row_multiple(i, j, coef(rng));
                break;
            case 1:
                m.swap_rows(i, j);
                break;
            default:
                m.negate_row(i);
                break;
        }
    }
    return m;
}

inline bool is_unimodular(const IntMatrix& m) {
    if (m.rows() != m.cols()) return false;
    Int d = determinant(m);
    return d == 1 || d == -1;
}

inline bool divisibility_chain_holds(const IntMatrix& d) {
    std::size_t n = std::min(d.rows(), d.cols());
    bool seen_zero = false;
    for (std::size_t i = 0; i < n; ++i) {
        const Int& e = d.at(i, i);
        if (e < 0) return false;
        if (e == 0) {
            seen_zero = true;
            continue;
        }
        if (seen_zero) return false;  // nonzero after zero
        if (i + 1 < n && d.at(i + 1, i + 1) != 0 && d.at(i + 1, i + 1) % e != 0)
            return false;
    }
    // off-diagonal must vanish
    for (std::size_t i = 0; i < d.rows(); ++i)
        for (std::size_t j = 0; j < d.cols(); ++j)
            if (i != j && d.at(i, j) != 0) return false;
    return true;
}

inline bool is_zero(const IntMatrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (m.at(i, j) != 0) return false;
    return true;
}

}  // namespace toric::testsupport
