#include "toric/intlinalg.hpp"

#include <algorithm>
#include <sstream>

namespace toric {

IntMatrix IntMatrix::identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<Int>>& rows,
                               std::size_t cols_if_empty) {
    std::size_t cols = rows.empty() ? cols_if_empty : rows[0].size();
    IntMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols)
            throw std::invalid_argument("IntMatrix::from_rows: ragged rows");
        for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = rows[i][j];
    }
    return m;
}

std::vector<Int> IntMatrix::row(std::size_t i) const {
    return std::vector<Int>(entries_.begin() + i * cols_,
                            entries_.begin() + (i + 1) * cols_);
}

std::vector<std::vector<Int>> IntMatrix::to_rows() const {
    std::vector<std::vector<Int>> out;
    out.reserve(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out.push_back(row(i));
    return out;
}

void IntMatrix::swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < cols_; ++k) std::swap(at(i, k), at(j, k));
}

void IntMatrix::swap_cols(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < rows_; ++k) std::swap(at(k, i), at(k, j));
}

void IntMatrix::negate_row(std::size_t i) {
    for (std::size_t k = 0; k < cols_; ++k) at(i, k) = -at(i, k);
}

void IntMatrix::negate_col(std::size_t j) {
    for (std::size_t k = 0; k < rows_; ++k) at(k, j) = -at(k, j);
}

void IntMatrix::add_row_multiple(std::size_t i, std::size_t j, const Int& c) {
    for (std::size_t k = 0; k < cols_; ++k) at(i, k) += c * at(j, k);
}

void IntMatrix::add_col_multiple(std::size_t i, std::size_t j, const Int& c) {
    for (std::size_t k = 0; k < rows_; ++k) at(k, i) += c * at(k, j);
}

std::string IntMatrix::to_string() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < rows_; ++i) {
        os << (i ? ", [" : "[");
        for (std::size_t j = 0; j < cols_; ++j) os << (j ? "," : "") << at(i, j);
        os << "]";
    }
    os << "]";
    return os.str();
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols() != b.rows())
        throw std::invalid_argument("IntMatrix multiply: shape mismatch");
    IntMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Int& aik = a.at(i, k);
            if (aik == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                c.at(i, j) += aik * b.at(k, j);
        }
    return c;
}

IntMatrix transpose(const IntMatrix& a) {
    IntMatrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t.at(j, i) = a.at(i, j);
    return t;
}

namespace {

// Smallest-|entry| nonzero pivot in the trailing submatrix starting at (t, t).
bool find_pivot(const IntMatrix& d, std::size_t t, std::size_t& pi, std::size_t& pj) {
    bool found = false;
    Int best;
    for (std::size_t i = t; i < d.rows(); ++i)
        for (std::size_t j = t; j < d.cols(); ++j) {
            const Int& e = d.at(i, j);
            if (e == 0) continue;
            Int a = abs(e);
            if (!found || a < best) {
                found = true;
                best = a;
                pi = i;
                pj = j;
            }
        }
    return found;
}

}  // namespace

SmithDecomposition smith_normal_form(const IntMatrix& a) {
    SmithDecomposition s{IntMatrix::identity(a.rows()), a, IntMatrix::identity(a.cols())};
    IntMatrix& d = s.d;
    IntMatrix& u = s.u;
    IntMatrix& v = s.v;

    std::size_t t = 0;
    std::size_t limit = std::min(a.rows(), a.cols());
    while (t < limit) {
        std::size_t pi = 0, pj = 0;
        if (!find_pivot(d, t, pi, pj)) break;
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        // Reduce column and row at t until the pivot divides everything it
        // meets; a failed division swaps the smaller remainder into the pivot,
        // which strictly shrinks |pivot| and so terminates.
        for (;;) {
            bool clean = true;
            for (std::size_t i = t + 1; i < d.rows(); ++i) {
                if (d.at(i, t) == 0) continue;
                Int q = d.at(i, t) / d.at(t, t);
                d.add_row_multiple(i, t, -q);
                u.add_row_multiple(i, t, -q);
                if (d.at(i, t) != 0) {
                    d.swap_rows(t, i);
                    u.swap_rows(t, i);
                    clean = false;
                }
            }
            if (!clean) continue;
            for (std::size_t j = t + 1; j < d.cols(); ++j) {
                if (d.at(t, j) == 0) continue;
                Int q = d.at(t, j) / d.at(t, t);
                d.add_col_multiple(j, t, -q);
                v.add_col_multiple(j, t, -q);
                if (d.at(t, j) != 0) {
                    d.swap_cols(t, j);
                    v.swap_cols(t, j);
                    clean = false;
                }
            }
            if (clean) break;
        }

        // Divisibility: fold any non-divisible trailing entry into column t.
        bool redo = false;
        for (std::size_t i = t + 1; i < d.rows() && !redo; ++i)
            for (std::size_t j = t + 1; j < d.cols() && !redo; ++j)
                if (d.at(i, j) % d.at(t, t) != 0) {
                    d.add_row_multiple(t, i, 1);
                    u.add_row_multiple(t, i, 1);
                    redo = true;
                }
        if (redo) continue;

        if (d.at(t, t) < 0) {
            d.negate_row(t);
            u.negate_row(t);
        }
        ++t;
    }
    return s;
}

std::vector<Int> smith_diagonal(const IntMatrix& a) {
    IntMatrix d = smith_normal_form(a).d;
    std::vector<Int> out;
    for (std::size_t i = 0; i < std::min(d.rows(), d.cols()); ++i)
        out.push_back(d.at(i, i));
    return out;
}

HermiteDecomposition hermite_normal_form(const IntMatrix& a) {
    HermiteDecomposition r{a, IntMatrix::identity(a.rows())};
    IntMatrix& h = r.h;
    IntMatrix& u = r.u;

    std::size_t pivot_row = 0;
    for (std::size_t col = 0; col < h.cols() && pivot_row < h.rows(); ++col) {
        // gcd-reduce the column below pivot_row
        for (;;) {
            std::size_t best = h.rows();
            for (std::size_t i = pivot_row; i < h.rows(); ++i) {
                if (h.at(i, col) == 0) continue;
                if (best == h.rows() || abs(h.at(i, col)) < abs(h.at(best, col))) best = i;
            }
            if (best == h.rows()) break;  // column is zero below
            h.swap_rows(pivot_row, best);
            u.swap_rows(pivot_row, best);
            bool reduced = true;
            for (std::size_t i = pivot_row + 1; i < h.rows(); ++i) {
                if (h.at(i, col) == 0) continue;
                Int q = h.at(i, col) / h.at(pivot_row, col);
                h.add_row_multiple(i, pivot_row, -q);
                u.add_row_multiple(i, pivot_row, -q);
                if (h.at(i, col) != 0) reduced = false;
            }
            if (reduced) break;
        }
        if (h.at(pivot_row, col) == 0) continue;  // no pivot in this column
        if (h.at(pivot_row, col) < 0) {
            h.negate_row(pivot_row);
            u.negate_row(pivot_row);
        }
        // entries above the pivot into [0, pivot)
        const Int& p = h.at(pivot_row, col);
        for (std::size_t i = 0; i < pivot_row; ++i) {
            Int q = h.at(i, col) / p;
            if (h.at(i, col) - q * p < 0) q -= 1;  // floor division
            if (q != 0) {
                h.add_row_multiple(i, pivot_row, -q);
                u.add_row_multiple(i, pivot_row, -q);
            }
        }
        ++pivot_row;
    }
    return r;
}

std::size_t rank(const IntMatrix& a) {
    std::vector<Int> d = smith_diagonal(a);
    std::size_t r = 0;
    for (const Int& e : d)
        if (e != 0) ++r;
    return r;
}

IntMatrix kernel_basis(const IntMatrix& a) {
    HermiteDecomposition hd = hermite_normal_form(a);
    std::size_t r = 0;
    for (std::size_t i = 0; i < hd.h.rows(); ++i) {
        bool zero = true;
        for (std::size_t j = 0; j < hd.h.cols(); ++j)
            if (hd.h.at(i, j) != 0) {
                zero = false;
                break;
            }
        if (!zero) ++r;
    }
    // HNF keeps nonzero rows on top; rows r.. of U span the left kernel.
    IntMatrix k(hd.u.rows() - r, a.rows());
    for (std::size_t i = r; i < hd.u.rows(); ++i)
        for (std::size_t j = 0; j < a.rows(); ++j) k.at(i - r, j) = hd.u.at(i, j);
    // report the unique HNF basis of the kernel lattice
    return hermite_normal_form(k).h;
}

CokernelInvariants cokernel_invariants(const IntMatrix& a) {
    CokernelInvariants out;
    std::vector<Int> d = smith_diagonal(a);
    std::size_t nonzero = 0;
    for (const Int& e : d) {
        if (e == 0) continue;
        ++nonzero;
        if (e > 1) out.torsion.push_back(e);
    }
    out.free_rank = a.rows() - nonzero;
    return out;
}

Int saturation_index(const IntMatrix& b) {
    std::vector<Int> d = smith_diagonal(b);
    Int index = 1;
    std::size_t nonzero = 0;
    for (const Int& e : d) {
        if (e == 0) continue;
        ++nonzero;
        index *= e;
    }
    if (nonzero != b.rows())
        throw std::invalid_argument("saturation_index: rows are rationally dependent");
    return index;
}

Int determinant(const IntMatrix& a) {
    if (a.rows() != a.cols())
        throw std::invalid_argument("determinant: matrix not square");
    std::size_t n = a.rows();
    if (n == 0) return 1;
    IntMatrix m = a;
    Int sign = 1, prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m.at(k, k) == 0) {
            std::size_t swap = n;
            for (std::size_t i = k + 1; i < n; ++i)
                if (m.at(i, k) != 0) {
                    swap = i;
                    break;
                }
            if (swap == n) return 0;
            m.swap_rows(k, swap);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                m.at(i, j) = (m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j)) / prev;
        prev = m.at(k, k);
    }
    return sign * m.at(n - 1, n - 1);
}

}  // namespace toric
