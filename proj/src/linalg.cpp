#include "gcx/linalg.hpp"

#include <algorithm>

namespace gcx {

std::vector<Integer> SmithDecomposition::invariants() const {
    std::vector<Integer> out;
    for (int i = 0; i < rank; ++i) out.push_back(D(i, i));
    return out;
}

namespace {

// Tracks P * A * Q = D alongside U = P^-1, V = Q^-1.
struct SmithState {
    IntMatrix D, P, Q, U, V;

    void swap_rows(Eigen::Index i, Eigen::Index j) {
        if (i == j) return;
        D.row(i).swap(D.row(j));
        P.row(i).swap(P.row(j));
        U.col(i).swap(U.col(j));
    }
    void swap_cols(Eigen::Index i, Eigen::Index j) {
        if (i == j) return;
        D.col(i).swap(D.col(j));
        Q.col(i).swap(Q.col(j));
        V.row(i).swap(V.row(j));
    }
    // row i += f * row t
    void add_row(Eigen::Index i, Eigen::Index t, const Integer& f) {
        if (f == 0) return;
        D.row(i) += f * D.row(t);
        P.row(i) += f * P.row(t);
        U.col(t) -= f * U.col(i);
    }
    // col j += f * col t
    void add_col(Eigen::Index j, Eigen::Index t, const Integer& f) {
        if (f == 0) return;
        D.col(j) += f * D.col(t);
        Q.col(j) += f * Q.col(t);
        V.row(t) -= f * V.row(j);
    }
    void negate_row(Eigen::Index i) {
        D.row(i) = -D.row(i);
        P.row(i) = -P.row(i);
        U.col(i) = -U.col(i);
    }
};

}  // namespace

SmithDecomposition smith_normal_form(const IntMatrix& A) {
    const Eigen::Index m = A.rows(), n = A.cols();
    SmithState s{A, IntMatrix::Identity(m, m), IntMatrix::Identity(n, n), IntMatrix::Identity(m, m),
                 IntMatrix::Identity(n, n)};
    IntMatrix& D = s.D;
    Eigen::Index t = 0;
    for (; t < std::min(m, n); ++t) {
        // Smallest nonzero entry of the trailing block becomes the pivot.
        Eigen::Index pi = -1, pj = -1;
        Integer best;
        for (Eigen::Index i = t; i < m; ++i)
            for (Eigen::Index j = t; j < n; ++j)
                if (D(i, j) != 0 && (pi < 0 || abs(D(i, j)) < best)) {
                    best = abs(D(i, j));
                    pi = i;
                    pj = j;
                }
        if (pi < 0) break;
        s.swap_rows(t, pi);
        s.swap_cols(t, pj);
        for (;;) {
            bool clean = true;
            for (Eigen::Index i = t + 1; i < m; ++i) {
                if (D(i, t) == 0) continue;
                Integer q = D(i, t) / D(t, t);
                s.add_row(i, t, -q);
                if (D(i, t) != 0) clean = false;
            }
            for (Eigen::Index j = t + 1; j < n; ++j) {
                if (D(t, j) == 0) continue;
                Integer q = D(t, j) / D(t, t);
                s.add_col(j, t, -q);
                if (D(t, j) != 0) clean = false;
            }
            if (!clean) {
                // A remainder smaller than the pivot survived; move it into place.
                Eigen::Index bi = t, bj = t;
                Integer b = abs(D(t, t));
                for (Eigen::Index i = t + 1; i < m; ++i)
                    if (D(i, t) != 0 && abs(D(i, t)) < b) b = abs(D(i, t)), bi = i, bj = t;
                for (Eigen::Index j = t + 1; j < n; ++j)
                    if (D(t, j) != 0 && abs(D(t, j)) < b) b = abs(D(t, j)), bi = t, bj = j;
                s.swap_rows(t, bi);
                s.swap_cols(t, bj);
                continue;
            }
            // Divisibility: fold in any row whose entries the pivot does not divide.
            Eigen::Index bad = -1;
            for (Eigen::Index i = t + 1; i < m && bad < 0; ++i)
                for (Eigen::Index j = t + 1; j < n; ++j)
                    if (D(i, j) % D(t, t) != 0) {
                        bad = i;
                        break;
                    }
            if (bad < 0) break;
            s.add_row(t, bad, Integer(1));
        }
        if (D(t, t) < 0) s.negate_row(t);
    }
    SmithDecomposition out;
    out.rank = static_cast<int>(t);
    out.D = std::move(s.D);
    out.P = std::move(s.P);
    out.Q = std::move(s.Q);
    out.U = std::move(s.U);
    out.V = std::move(s.V);
    return out;
}

IntMatrix integer_kernel(const SmithDecomposition& s) {
    Eigen::Index n = s.Q.cols();
    return s.Q.rightCols(n - s.rank);
}

IntMatrix integer_kernel(const IntMatrix& A) { return integer_kernel(smith_normal_form(A)); }

std::optional<IntVector> integer_solve(const SmithDecomposition& s, const IntVector& b) {
    IntVector c = s.P * b;
    IntVector y = IntVector::Zero(s.Q.cols());
    for (Eigen::Index i = 0; i < c.size(); ++i) {
        if (i < s.rank) {
            if (c(i) % s.D(i, i) != 0) return std::nullopt;
            y(i) = c(i) / s.D(i, i);
        } else if (c(i) != 0) {
            return std::nullopt;
        }
    }
    return IntVector(s.Q * y);
}

Integer content(const IntVector& v) {
    Integer g = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i) g = gcd(g, abs(v(i)));
    return g;
}

IntVector primitive(const IntVector& v) {
    Integer g = content(v);
    IntVector out = v;
    if (g == 0) return out;
    Integer sign = 1;
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (v(i) != 0) {
            sign = v(i) < 0 ? -1 : 1;
            break;
        }
    for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = v(i) / g * sign;
    return out;
}

IntVector primitive(const Vector<Rational>& v) {
    Integer l = 1;
    for (Eigen::Index i = 0; i < v.size(); ++i) l = lcm(l, denominator(v(i)));
    IntVector w(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) w(i) = numerator(v(i)) * (l / denominator(v(i)));
    return primitive(w);
}

BitMatrix::BitMatrix(int r, int c) : rows(r), cols(c), data(r, std::vector<std::uint64_t>((c + 63) / 64, 0)) {}

void BitMatrix::set(int i, int j, bool v) {
    auto& w = data[i][j / 64];
    std::uint64_t bit = std::uint64_t(1) << (j % 64);
    w = v ? (w | bit) : (w & ~bit);
}

bool BitMatrix::get(int i, int j) const { return (data[i][j / 64] >> (j % 64)) & 1; }

int rank(BitMatrix A) {
    int r = 0;
    for (int c = 0; c < A.cols && r < A.rows; ++c) {
        int p = r;
        while (p < A.rows && !A.get(p, c)) ++p;
        if (p == A.rows) continue;
        std::swap(A.data[p], A.data[r]);
        for (int i = 0; i < A.rows; ++i)
            if (i != r && A.get(i, c))
                for (std::size_t w = c / 64; w < A.data[i].size(); ++w) A.data[i][w] ^= A.data[r][w];
        ++r;
    }
    return r;
}

std::optional<std::vector<char>> solve(BitMatrix A, std::vector<char> b) {
    BitMatrix M(A.rows, A.cols + 1);
    for (int i = 0; i < A.rows; ++i) {
        for (std::size_t w = 0; w < A.data[i].size(); ++w) M.data[i][w] = A.data[i][w];
        M.set(i, A.cols, b[i]);
    }
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c <= A.cols && r < M.rows; ++c) {
        int p = r;
        while (p < M.rows && !M.get(p, c)) ++p;
        if (p == M.rows) continue;
        if (c == A.cols) return std::nullopt;
        std::swap(M.data[p], M.data[r]);
        for (int i = 0; i < M.rows; ++i)
            if (i != r && M.get(i, c))
                for (std::size_t w = c / 64; w < M.data[i].size(); ++w) M.data[i][w] ^= M.data[r][w];
        pivots.push_back(c);
        ++r;
    }
    std::vector<char> x(A.cols, 0);
    for (int i = 0; i < r; ++i) x[pivots[i]] = M.get(i, A.cols);
    return x;
}

}  // namespace gcx
