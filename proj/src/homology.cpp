#include "gcx/homology.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <tuple>

namespace gcx {

namespace {

IntMatrix coboundary_dense(const std::vector<Diagram>& src, const std::vector<Diagram>& dst, Ring ring,
                           CombinedFace policy) {
    return coboundary_matrix(src, dst, ring, policy).dense();
}

std::vector<Rational> to_rationals(const IntVector& v) {
    std::vector<Rational> out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = Rational(v(i));
    return out;
}

CochainElement checked_cocycle(const std::vector<Rational>& coords, const std::vector<Diagram>& basis, Ring ring,
                               Convention convention, CombinedFace policy) {
    auto x = from_coordinates(coords, basis, ring, convention);
    if (!coboundary(x, policy).empty()) throw std::logic_error("kernel vector is not a cocycle");
    return x;
}

// Columns: coboundaries of the given diagrams; rows: every diagram they reach.
IntMatrix restricted_coboundary(const std::vector<Diagram>& cols, Ring ring, CombinedFace policy) {
    std::vector<CochainElement> images;
    std::map<Diagram, int> rows;
    for (const auto& d : cols) {
        images.push_back(coboundary(d, ring, policy));
        for (const auto& [t, c] : images.back().terms()) rows.emplace(t, 0);
    }
    int r = 0;
    for (auto& [t, idx] : rows) idx = r++;
    IntMatrix A = IntMatrix::Zero(r, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < images.size(); ++j)
        for (const auto& [t, c] : images[j].terms()) A(rows[t], j) = numerator(c);
    return A;
}

bool in_integer_span(const IntMatrix& C, const IntVector& x) {
    if (C.cols() == 0) return x.isZero();
    return integer_solve(smith_normal_form(C), x).has_value();
}

}  // namespace

std::vector<CochainElement> cocycle_space(int m, int n, int k, Convention convention, Ring ring,
                                          const BasisOptions& opt, CombinedFace policy) {
    auto src = generate_basis(m, n, k, convention, ring, opt);
    auto dst = generate_basis(m, n, k + 1, convention, ring, opt);
    IntMatrix A = coboundary_dense(src, dst, ring, policy);
    std::vector<CochainElement> out;
    if (src.empty()) return out;
    switch (ring) {
        case Ring::Z: {
            IntMatrix K = integer_kernel(A);
            for (Eigen::Index c = 0; c < K.cols(); ++c)
                out.push_back(checked_cocycle(to_rationals(K.col(c)), src, ring, convention, policy));
            break;
        }
        case Ring::Q: {
            Matrix<Rational> K = kernel(cast_matrix<Rational>(A));
            for (Eigen::Index c = 0; c < K.cols(); ++c)
                out.push_back(checked_cocycle(to_rationals(primitive(Vector<Rational>(K.col(c)))), src, ring,
                                              convention, policy));
            break;
        }
        case Ring::Z2: {
            Matrix<Mod2> B(A.rows(), A.cols());
            for (Eigen::Index i = 0; i < A.rows(); ++i)
                for (Eigen::Index j = 0; j < A.cols(); ++j) B(i, j) = Mod2(A(i, j));
            Matrix<Mod2> K = kernel(B);
            for (Eigen::Index c = 0; c < K.cols(); ++c) {
                std::vector<Rational> v(K.rows());
                for (Eigen::Index i = 0; i < K.rows(); ++i) v[i] = K(i, c).v;
                out.push_back(checked_cocycle(v, src, ring, convention, policy));
            }
            break;
        }
    }
    return out;
}

CohomologyGroup cohomology_group(int m, int n, int k, Convention convention, const BasisOptions& opt,
                                 CombinedFace policy) {
    CohomologyGroup g;
    auto cur = generate_basis(m, n, k, convention, Ring::Z, opt);
    if (cur.empty()) return g;
    auto next = generate_basis(m, n, k + 1, convention, Ring::Z, opt);
    auto out = smith_normal_form(coboundary_dense(cur, next, Ring::Z, policy));
    int kernelDim = static_cast<int>(cur.size()) - out.rank;
    int imageRank = 0;
    if (k > 0) {
        auto prev = generate_basis(m, n, k - 1, convention, Ring::Z, opt);
        auto in = smith_normal_form(coboundary_dense(prev, cur, Ring::Z, policy));
        imageRank = in.rank;
        for (const auto& d : in.invariants())
            if (d > 1) g.torsion.push_back(d);
    }
    g.free_rank = kernelDim - imageRank;
    return g;
}

bool is_support_minimal(const CochainElement& x, CombinedFace policy) {
    if (x.empty()) return false;
    if (!coboundary(x, policy).empty()) return false;
    std::vector<Diagram> support;
    for (const auto& [d, c] : x.terms()) support.push_back(d);
    IntMatrix A = restricted_coboundary(support, Ring::Z, policy);
    Matrix<Rational> K = kernel(cast_matrix<Rational>(A));
    if (K.cols() != 1) return false;
    for (Eigen::Index i = 0; i < K.rows(); ++i)
        if (K(i, 0) == 0) return false;
    return true;
}

std::vector<MinimalCocycle> minimal_decomposition(const std::vector<CochainElement>& space,
                                                  const DecompositionOptions& opt) {
    std::set<Diagram> union_support;
    for (const auto& x : space) {
        if (x.ring() != Ring::Z) throw std::invalid_argument("minimal_decomposition works over Z");
        if (!coboundary(x, opt.policy).empty()) throw std::invalid_argument("input is not a cocycle");
        for (const auto& [d, c] : x.terms()) union_support.insert(d);
    }
    std::vector<Diagram> W(union_support.begin(), union_support.end());
    std::vector<MinimalCocycle> out;
    if (W.empty()) return out;
    const Convention convention = W.front().convention;
    std::map<Diagram, int> index;
    for (int i = 0; i < static_cast<int>(W.size()); ++i) index[W[i]] = i;

    std::vector<IntVector> inputs;
    for (const auto& x : space) {
        IntVector v = IntVector::Zero(static_cast<Eigen::Index>(W.size()));
        for (const auto& [d, c] : x.terms()) v(index[d]) = numerator(c);
        inputs.push_back(v);
    }

    IntMatrix A = restricted_coboundary(W, Ring::Z, opt.policy);
    long long examined = 0;

    // Elementary vectors of ker A with support inside `allowed`: for every set T of
    // dim-1 allowed coordinates, the kernel vectors vanishing on T.
    auto circuits_within = [&](const std::vector<int>& allowed) {
        IntMatrix Asub(A.rows(), static_cast<Eigen::Index>(allowed.size()));
        for (std::size_t j = 0; j < allowed.size(); ++j) Asub.col(j) = A.col(allowed[j]);
        Matrix<Rational> K = kernel(cast_matrix<Rational>(Asub));
        const int r = static_cast<int>(K.cols());
        const int w = static_cast<int>(allowed.size());
        std::set<std::vector<Integer>> seen;
        std::vector<IntVector> found;
        if (r == 0) return found;
        std::vector<int> T(r - 1);
        std::iota(T.begin(), T.end(), 0);
        for (;;) {
            if (++examined > opt.max_subsets)
                throw BudgetError("minimal_decomposition: more than " + std::to_string(opt.max_subsets) +
                                  " sub-supports examined");
            Matrix<Rational> M(r - 1, r);
            for (int i = 0; i < r - 1; ++i) M.row(i) = K.row(T[i]);
            Matrix<Rational> N = kernel(M);
            if (N.cols() == 1) {
                Vector<Rational> x = K * N.col(0);
                IntVector p = primitive(x);
                IntVector full = IntVector::Zero(static_cast<Eigen::Index>(W.size()));
                for (int j = 0; j < w; ++j) full(allowed[j]) = p(j);
                std::vector<Integer> keyv(full.data(), full.data() + full.size());
                if (seen.insert(keyv).second) found.push_back(full);
            }
            // next (r-1)-subset of 0..w-1
            int i = r - 2;
            while (i >= 0 && T[i] == w - (r - 1) + i) --i;
            if (i < 0) break;
            ++T[i];
            for (int j = i + 1; j < r - 1; ++j) T[j] = T[j - 1] + 1;
        }
        return found;
    };

    auto support_of = [](const IntVector& v) {
        std::vector<int> s;
        for (Eigen::Index i = 0; i < v.size(); ++i)
            if (v(i) != 0) s.push_back(static_cast<int>(i));
        return s;
    };
    auto order = [&](const IntVector& a, const IntVector& b) {
        auto sa = support_of(a), sb = support_of(b);
        if (sa.size() != sb.size()) return sa.size() < sb.size();
        if (sa != sb) return sa < sb;
        return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
    };

    std::vector<IntVector> chosen;
    auto chosen_matrix = [&](const std::vector<IntVector>& cols) {
        IntMatrix C(static_cast<Eigen::Index>(W.size()), static_cast<Eigen::Index>(cols.size()));
        for (std::size_t j = 0; j < cols.size(); ++j) C.col(j) = cols[j];
        return C;
    };
    auto qrank = [&](const std::vector<IntVector>& cols) {
        return cols.empty() ? 0 : rank(cast_matrix<Rational>(chosen_matrix(cols)));
    };

    // Each cocycle is a conformal sum of elementary vectors supported inside its own
    // support, so circuits within each input's support suffice over Q.
    std::vector<IntVector> pool;
    for (const auto& x : inputs) {
        auto circuits = circuits_within(support_of(x));
        std::sort(circuits.begin(), circuits.end(), order);
        for (const auto& c : circuits) {
            auto with_x = chosen;
            with_x.push_back(x);
            if (qrank(with_x) == qrank(chosen)) break;
            auto with_c = chosen;
            with_c.push_back(c);
            if (qrank(with_c) > qrank(chosen)) chosen.push_back(c);
        }
        pool.insert(pool.end(), circuits.begin(), circuits.end());
    }
    std::sort(pool.begin(), pool.end(), order);

    // Integer containment may need further circuits from the pool.
    auto contained = [&]() {
        IntMatrix C = chosen_matrix(chosen);
        for (const auto& x : inputs)
            if (!in_integer_span(C, x)) return false;
        return true;
    };
    for (std::size_t p = 0; !contained(); ++p) {
        if (p == pool.size())
            throw std::runtime_error("minimal_decomposition: minimal cocycles do not generate the input lattice");
        if (!in_integer_span(chosen_matrix(chosen), pool[p])) chosen.push_back(pool[p]);
    }

    std::sort(chosen.begin(), chosen.end(), order);
    for (auto c : chosen) {
        // Match the sign of the first input that uses the leading diagram.
        int lead = support_of(c).front();
        for (const auto& x : inputs)
            if (x(lead) != 0) {
                if ((x(lead) < 0) != (c(lead) < 0)) c = -c;
                break;
            }
        MinimalCocycle mc;
        mc.element = CochainElement(Ring::Z, convention);
        for (int i : support_of(c)) {
            mc.element.add_canonical(W[i], Rational(c(i)));
            mc.support.push_back(W[i]);
        }
        if (!is_support_minimal(mc.element, opt.policy))
            throw std::logic_error("minimal_decomposition produced a non-minimal cocycle");
        out.push_back(std::move(mc));
    }
    return out;
}

CochainElement OrientedCocycle::element() const {
    CochainElement x(ring, convention);
    for (const auto& t : terms) x.add(t.diagram, t.coefficient);
    return x;
}

namespace {

std::vector<FaceRecord> faces_of(const Diagram& d, int term, CombinedFace policy) {
    std::vector<FaceRecord> out;
    for (const auto& e : contractible_elements(d)) {
        if (policy == CombinedFace::single && parallels_arc(d, e)) continue;
        auto q = contract_labeled(d, e);
        if (!q) continue;
        auto cf = canonical_form(q->diagram);
        if (!cf || cf->reversing_automorphism) continue;
        out.push_back(FaceRecord{term, e, epsilon(d, e), std::move(*q), std::move(cf->diagram)});
    }
    return out;
}

// The same oriented diagram with the opposite orientation.
Diagram reversed(const Diagram& d) {
    Diagram out = d;
    if (d.convention == Convention::odd) {
        if (out.edges.empty()) throw std::logic_error("diagram without edges has no orientation to reverse");
        out.edges[0].forward = !out.edges[0].forward;
    } else {
        if (out.edges.size() < 2) throw std::logic_error("diagram with fewer than two edges cannot be reversed");
        std::swap(out.edges[0], out.edges[1]);
    }
    return out;
}

// +1 when eps(p) * p.quotient and eps(q) * q.quotient are the same oriented diagram.
int face_agreement(const FaceRecord& p, const FaceRecord& q) {
    auto s = iso_sign(p.quotient.diagram, q.quotient.diagram);
    if (!s) throw std::logic_error("faces in one class are not isomorphic");
    return p.epsilon * q.epsilon * *s;
}

}  // namespace

std::vector<FaceRecord> consistency_faces(const OrientedCocycle& x, CombinedFace policy) {
    std::vector<FaceRecord> out;
    for (int i = 0; i < static_cast<int>(x.terms.size()); ++i) {
        auto f = faces_of(x.terms[i].diagram, i, policy);
        out.insert(out.end(), f.begin(), f.end());
    }
    return out;
}

ConsistencyReport check_consistency(const OrientedCocycle& x, CombinedFace policy) {
    ConsistencyReport rep;
    auto faces = consistency_faces(x, policy);
    for (std::size_t a = 0; a < faces.size(); ++a)
        for (std::size_t b = a + 1; b < faces.size(); ++b) {
            const auto& p = faces[a];
            const auto& q = faces[b];
            if (p.class_diagram != q.class_diagram) continue;
            ++rep.pairs_checked;
            if (face_agreement(p, q) == 1) continue;
            rep.consistent = false;
            rep.problems.push_back("term " + std::to_string(p.term) + " " +
                                   describe(x.terms[p.term].diagram, p.element) + " vs term " +
                                   std::to_string(q.term) + " " + describe(x.terms[q.term].diagram, q.element) +
                                   ": signed quotients have opposite orientations");
        }
    return rep;
}

OrientedCocycle consistent_orientation(const MinimalCocycle& gamma, CombinedFace policy) {
    OrientedCocycle x;
    x.ring = gamma.element.ring();
    x.convention = gamma.element.convention();
    for (const auto& [d, c] : gamma.element.terms()) x.terms.push_back(LabeledTerm{d, c});
    return consistent_orientation(x, policy);
}

OrientedCocycle consistent_orientation(const OrientedCocycle& expr, CombinedFace policy) {
    OrientedCocycle out;
    out.ring = expr.ring;
    out.convention = expr.convention;
    const int s = static_cast<int>(expr.terms.size());
    if (s == 0) return out;

    // Seed at the term whose underlying diagram is canonically least.
    std::vector<Diagram> canon(s);
    for (int i = 0; i < s; ++i) {
        auto cf = canonical_form(expr.terms[i].diagram);
        if (!cf) throw std::invalid_argument("term with a multiple edge");
        canon[i] = cf->diagram;
    }
    const int seed = static_cast<int>(std::min_element(canon.begin(), canon.end()) - canon.begin());

    std::vector<std::vector<FaceRecord>> faces(s);
    std::map<Diagram, std::vector<std::pair<int, int>>> byClass;
    for (int i = 0; i < s; ++i) {
        faces[i] = faces_of(expr.terms[i].diagram, i, policy);
        for (int a = 0; a < static_cast<int>(faces[i].size()); ++a)
            byClass[faces[i][a].class_diagram].emplace_back(i, a);
    }

    // flip[i]: orientation of the output representative relative to the input one.
    std::vector<int> flip(s, 0);
    flip[seed] = 1;
    std::deque<int> queue{seed};
    while (!queue.empty()) {
        int i = queue.front();
        queue.pop_front();
        for (const auto& fi : faces[i])
            for (auto [j, b] : byClass[fi.class_diagram]) {
                if (j == i && &faces[j][b] == &fi) continue;
                int need = flip[i] * face_agreement(fi, faces[j][b]);
                if (!flip[j]) {
                    flip[j] = need;
                    queue.push_back(j);
                } else if (flip[j] != need) {
                    throw OrientationConflict("orientation of term " + std::to_string(j) + " is forced both ways through " +
                                              to_text(fi.class_diagram));
                }
            }
    }
    for (int i = 0; i < s; ++i) {
        if (!flip[i])
            throw OrientationConflict("term " + std::to_string(i) + " shares no face with the rest of the support");
        const auto& t = expr.terms[i];
        out.terms.push_back(flip[i] == 1 ? t : LabeledTerm{reversed(t.diagram), -t.coefficient});
    }
    return out;
}

std::optional<CochainElement> extend_to_cocycle(const std::vector<LabeledTerm>& partial, int m, int n, int k,
                                                Convention convention, Ring ring, const BasisOptions& opt,
                                                CombinedFace policy) {
    auto src = generate_basis(m, n, k, convention, ring, opt);
    auto dst = generate_basis(m, n, k + 1, convention, ring, opt);
    std::map<Diagram, int> index;
    for (int i = 0; i < static_cast<int>(src.size()); ++i) index[src[i]] = i;

    std::map<int, Rational> fixed;
    for (const auto& t : partial) {
        auto cr = canonicalize(t.diagram, ring);
        auto* sd = std::get_if<SignedDiagram>(&cr);
        if (!sd) {
            if (normalize_coefficient(t.coefficient, ring) != 0)
                throw std::invalid_argument("partial assigns a nonzero value to a vanishing diagram: " +
                                            to_text(t.diagram));
            continue;
        }
        auto it = index.find(sd->diagram);
        if (it == index.end())
            throw std::invalid_argument("partial diagram outside the (m, n, k) basis: " + to_text(t.diagram));
        Rational v = normalize_coefficient(t.coefficient * sd->sign, ring);
        auto [pos, inserted] = fixed.emplace(it->second, v);
        if (!inserted && pos->second != v) throw std::invalid_argument("partial assigns conflicting values");
    }

    IntMatrix A = coboundary_dense(src, dst, ring, policy);
    std::vector<int> freeCols;
    for (int i = 0; i < static_cast<int>(src.size()); ++i)
        if (!fixed.count(i)) freeCols.push_back(i);
    const Eigen::Index rows = A.rows();
    std::vector<Rational> coords(src.size(), Rational(0));
    for (const auto& [i, v] : fixed) coords[i] = v;

    switch (ring) {
        case Ring::Z: {
            IntVector rhs = IntVector::Zero(rows);
            for (const auto& [i, v] : fixed) rhs -= numerator(v) * A.col(i);
            IntMatrix F(rows, static_cast<Eigen::Index>(freeCols.size()));
            for (std::size_t j = 0; j < freeCols.size(); ++j) F.col(j) = A.col(freeCols[j]);
            if (freeCols.empty()) {
                if (!rhs.isZero()) return std::nullopt;
                break;
            }
            auto y = integer_solve(smith_normal_form(F), rhs);
            if (!y) return std::nullopt;
            for (std::size_t j = 0; j < freeCols.size(); ++j) coords[freeCols[j]] = Rational((*y)(j));
            break;
        }
        case Ring::Q: {
            Vector<Rational> rhs = Vector<Rational>::Zero(rows);
            Matrix<Rational> AQ = cast_matrix<Rational>(A);
            for (const auto& [i, v] : fixed) rhs -= v * AQ.col(i);
            Matrix<Rational> F(rows, static_cast<Eigen::Index>(freeCols.size()));
            for (std::size_t j = 0; j < freeCols.size(); ++j) F.col(j) = AQ.col(freeCols[j]);
            auto y = solve(F, rhs);
            if (!y) return std::nullopt;
            for (std::size_t j = 0; j < freeCols.size(); ++j) coords[freeCols[j]] = (*y)(j);
            break;
        }
        case Ring::Z2: {
            BitMatrix F(static_cast<int>(rows), static_cast<int>(freeCols.size()));
            std::vector<char> rhs(rows, 0);
            for (Eigen::Index r = 0; r < rows; ++r) {
                for (std::size_t j = 0; j < freeCols.size(); ++j)
                    if (bit_test(A(r, freeCols[j]), 0)) F.set(static_cast<int>(r), static_cast<int>(j));
                for (const auto& [i, v] : fixed)
                    if (v != 0 && bit_test(A(r, i), 0)) rhs[r] ^= 1;
            }
            auto y = solve(F, rhs);
            if (!y) return std::nullopt;
            for (std::size_t j = 0; j < freeCols.size(); ++j) coords[freeCols[j]] = Rational(int((*y)[j]));
            break;
        }
    }
    auto x = from_coordinates(coords, src, ring, convention);
    if (!coboundary(x, policy).empty()) throw std::logic_error("extend_to_cocycle: solution is not a cocycle");
    return x;
}

}  // namespace gcx
