#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "gcx/scalar.hpp"

namespace gcx {

// A = U * D * V with U, V unimodular; P = U^-1 and Q = V^-1 are kept as well, so
// P * A * Q = D.
struct SmithDecomposition {
    IntMatrix U, D, V;
    IntMatrix P, Q;
    int rank = 0;

    std::vector<Integer> invariants() const;
};

SmithDecomposition smith_normal_form(const IntMatrix& A);

// Columns form a lattice basis of {x in Z^n : A x = 0}.
IntMatrix integer_kernel(const SmithDecomposition& s);
IntMatrix integer_kernel(const IntMatrix& A);

// Some integer solution of A x = b, if one exists.
std::optional<IntVector> integer_solve(const SmithDecomposition& s, const IntVector& b);

// Row echelon data over a field.
template <class Field>
struct Echelon {
    Matrix<Field> R;          // reduced row echelon form
    std::vector<int> pivots;  // pivot column of each nonzero row
};

template <class Field>
Echelon<Field> row_reduce(Matrix<Field> A) {
    Echelon<Field> out;
    const Eigen::Index rows = A.rows(), cols = A.cols();
    Eigen::Index r = 0;
    for (Eigen::Index c = 0; c < cols && r < rows; ++c) {
        Eigen::Index p = r;
        while (p < rows && is_zero(A(p, c))) ++p;
        if (p == rows) continue;
        if (p != r) A.row(p).swap(A.row(r));
        Field inv = Field(1) / A(r, c);
        for (Eigen::Index j = c; j < cols; ++j) A(r, j) = A(r, j) * inv;
        for (Eigen::Index i = 0; i < rows; ++i) {
            if (i == r || is_zero(A(i, c))) continue;
            Field f = A(i, c);
            for (Eigen::Index j = c; j < cols; ++j) A(i, j) = A(i, j) - f * A(r, j);
        }
        out.pivots.push_back(static_cast<int>(c));
        ++r;
    }
    out.R = std::move(A);
    return out;
}

template <class Field>
int rank(const Matrix<Field>& A) {
    return static_cast<int>(row_reduce(A).pivots.size());
}

// Columns span the null space of A.
template <class Field>
Matrix<Field> kernel(const Matrix<Field>& A) {
    auto e = row_reduce(A);
    const Eigen::Index cols = A.cols();
    std::vector<char> isPivot(cols, 0);
    for (int p : e.pivots) isPivot[p] = 1;
    std::vector<Eigen::Index> freeCols;
    for (Eigen::Index c = 0; c < cols; ++c)
        if (!isPivot[c]) freeCols.push_back(c);
    Matrix<Field> K = Matrix<Field>::Zero(cols, static_cast<Eigen::Index>(freeCols.size()));
    for (std::size_t k = 0; k < freeCols.size(); ++k) {
        Eigen::Index f = freeCols[k];
        K(f, k) = Field(1);
        for (std::size_t r = 0; r < e.pivots.size(); ++r) K(e.pivots[r], k) = Field(0) - e.R(r, f);
    }
    return K;
}

template <class Field>
std::optional<Vector<Field>> solve(const Matrix<Field>& A, const Vector<Field>& b) {
    Matrix<Field> M(A.rows(), A.cols() + 1);
    M << A, b;
    auto e = row_reduce(M);
    Vector<Field> x = Vector<Field>::Zero(A.cols());
    for (std::size_t r = 0; r < e.pivots.size(); ++r) {
        if (e.pivots[r] == A.cols()) return std::nullopt;
        x(e.pivots[r]) = e.R(r, A.cols());
    }
    return x;
}

template <class To, class From>
Matrix<To> cast_matrix(const Matrix<From>& A) {
    Matrix<To> B(A.rows(), A.cols());
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < A.cols(); ++j) B(i, j) = To(A(i, j));
    return B;
}

// Smallest-content integer multiple of a rational vector, first nonzero entry positive.
IntVector primitive(const Vector<Rational>& v);
IntVector primitive(const IntVector& v);
Integer content(const IntVector& v);

// Rank of a dense GF(2) matrix given as bit rows (for large systems).
struct BitMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<std::vector<std::uint64_t>> data;

    BitMatrix(int r, int c);
    void set(int i, int j, bool v = true);
    bool get(int i, int j) const;
};

int rank(BitMatrix A);
// Some solution of A x = b over GF(2), or nullopt.
std::optional<std::vector<char>> solve(BitMatrix A, std::vector<char> b);

}  // namespace gcx
