#pragma once

// Exact integer linear algebra: normal forms, kernels, cokernel invariants.
// Everything here is arbitrary precision; there is no floating point in this
// module or anywhere downstream of it.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace toric {

using Int = boost::multiprecision::cpp_int;

/// Dense integer matrix, row-major. Zero-row and zero-column shapes are legal.
class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols) {}

    static IntMatrix identity(std::size_t n);
    // Throws std::invalid_argument on ragged input.
    static IntMatrix from_rows(const std::vector<std::vector<Int>>& rows,
                               std::size_t cols_if_empty = 0);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Int& at(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const Int& at(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

    std::vector<Int> row(std::size_t i) const;
    std::vector<std::vector<Int>> to_rows() const;

    bool operator==(const IntMatrix& o) const = default;

    void swap_rows(std::size_t i, std::size_t j);
    void swap_cols(std::size_t i, std::size_t j);
    void negate_row(std::size_t i);
    void negate_col(std::size_t j);
    // row_i += c * row_j, col_i += c * col_j
    void add_row_multiple(std::size_t i, std::size_t j, const Int& c);
    void add_col_multiple(std::size_t i, std::size_t j, const Int& c);

    std::string to_string() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Int> entries_;
};

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
IntMatrix transpose(const IntMatrix& a);

/// U*A*V = D with U, V unimodular and D diagonal, diagonal entries
/// non-negative, nonzero ones first, each dividing the next.
struct SmithDecomposition {
    IntMatrix u;  // rows x rows
    IntMatrix d;  // rows x cols
    IntMatrix v;  // cols x cols
};

SmithDecomposition smith_normal_form(const IntMatrix& a);

/// The diagonal of the Smith normal form, length min(rows, cols).
std::vector<Int> smith_diagonal(const IntMatrix& a);

/// H = U*A with U unimodular and H in row-style Hermite normal form:
/// pivots positive, entries above each pivot reduced into [0, pivot),
/// zero rows at the bottom.
struct HermiteDecomposition {
    IntMatrix h;
    IntMatrix u;
};

HermiteDecomposition hermite_normal_form(const IntMatrix& a);

std::size_t rank(const IntMatrix& a);

/// Basis of the left kernel {x : x*A = 0}, one basis vector per row, in
/// Hermite normal form (so the basis is canonical for the kernel lattice).
/// The result spans the full (hence saturated) kernel lattice.
IntMatrix kernel_basis(const IntMatrix& a);

/// Z^rows / (column span of A) as free rank plus invariant-factor torsion.
struct CokernelInvariants {
    std::size_t free_rank = 0;
    std::vector<Int> torsion;  // each > 1, divisibility chain

    bool operator==(const CokernelInvariants& o) const = default;
};

CokernelInvariants cokernel_invariants(const IntMatrix& a);

/// Index of the row lattice of B inside its rational-span saturation,
/// i.e. the product of the nonzero Smith diagonal entries.
/// Throws std::invalid_argument if the rows are rationally dependent.
Int saturation_index(const IntMatrix& b);

/// Exact determinant (Bareiss). Throws std::invalid_argument unless square.
Int determinant(const IntMatrix& a);

}  // namespace toric
