#include "doctest.h"

#include <random>

#include "gcx/canonical.hpp"
#include "gcx/complex.hpp"
#include "oracles.hpp"

using namespace gcx;
using oracle::make;

namespace {

Diagram tripod() { return make({{1, 2, 3}}, {4}, {{1, 4}, {2, 4}, {3, 4}}); }
Diagram chord(std::vector<std::pair<int, int>> e) { return make({{1, 2, 3, 4}}, {}, std::move(e)); }

long long double_factorial(int k) {
    long long r = 1;
    for (int i = k; i > 1; i -= 2) r *= i;
    return r;
}

long long binomial(int n, int k) {
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

IntMatrix product(const IntMatrix& a, const IntMatrix& b) {
    IntMatrix c = IntMatrix::Zero(a.rows(), b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index k = 0; k < a.cols(); ++k) {
            if (a(i, k) == 0) continue;
            for (Eigen::Index j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
        }
    return c;
}

struct Grade {
    int m, n, k;
};

const std::vector<Grade> small_grades = {{1, 1, 0}, {1, 2, 0}, {1, 2, 1}, {1, 2, 2}, {1, 3, 0},
                                         {1, 3, 1}, {1, 3, 2}, {2, 2, 0}, {2, 2, 1}, {3, 2, 0}};

}  // namespace

TEST_CASE("grading examples") {
    CHECK(grading(tripod()) == Grading{2, 0});
    CHECK(grading(chord({{1, 3}, {2, 4}})) == Grading{2, 0});
    Diagram loop = make({{1}}, {}, {{1, 1}});
    CHECK(grading(loop) == Grading{1, 1});
}

TEST_CASE("basis examples") {
    auto b2 = generate_basis(1, 2, 0, Convention::odd, Ring::Z);
    REQUIRE(b2.size() == 4);
    std::set<Diagram> want;
    for (const auto& d : {chord({{1, 2}, {3, 4}}), chord({{1, 3}, {2, 4}}), chord({{1, 4}, {2, 3}}), tripod()})
        want.insert(std::get<SignedDiagram>(canonicalize(d)).diagram);
    CHECK(std::set<Diagram>(b2.begin(), b2.end()) == want);

    auto b1 = generate_basis(1, 1, 0, Convention::odd, Ring::Z);
    REQUIRE(b1.size() == 1);
    CHECK(b1[0] == make({{1, 2}}, {}, {{1, 2}}));

    auto b0 = generate_basis(1, 0, 0, Convention::odd, Ring::Z);
    REQUIRE(b0.size() == 1);
    CHECK(b0[0].vertex_count() == 0);
    CHECK(b0[0].edge_count() == 0);
}

TEST_CASE("basis over Z drops diagrams with reversing automorphisms, Z/2 keeps them") {
    for (auto g : small_grades) {
        auto z = generate_basis(g.m, g.n, g.k, Convention::odd, Ring::Z);
        auto z2 = generate_basis(g.m, g.n, g.k, Convention::odd, Ring::Z2);
        CHECK(z.size() <= z2.size());
        std::size_t reversing = 0;
        for (const auto& d : z2) reversing += automorphism_signs(d).count(-1);
        CHECK(z.size() + reversing == z2.size());
    }
}

TEST_CASE("coboundary examples") {
    Diagram c1324 = chord({{1, 3}, {2, 4}});
    CochainElement g2(Ring::Z, Convention::odd);
    g2.add(c1324, 1);
    g2.add(tripod(), -1);
    CochainElement other(Ring::Z, Convention::odd);
    other.add(c1324, 1);
    other.add(tripod(), 1);
    // Exactly one relative orientation of the two labeled pictures is a cocycle.
    CHECK(coboundary(g2).empty() != coboundary(other).empty());
    CHECK(coboundary(g2).empty());

    CHECK(coboundary(CochainElement(Ring::Z, Convention::odd)).empty());

    auto dt = coboundary(tripod(), Ring::Z);
    REQUIRE(dt.size() == 3);
    for (const auto& [d, c] : dt.terms()) {
        CHECK(abs(c) == 1);
        CHECK(d.free_count() == 0);
        CHECK(d.segment_count() == 3);
        CHECK(d.edge_count() == 2);
        CHECK(grading(d) == Grading{2, 1});
    }
}

TEST_CASE("coboundary matrix examples") {
    auto M = coboundary_matrix(1, 2, 0, Convention::odd, Ring::Z);
    CHECK(M.cols == 4);
    CHECK(M.cols - oracle::bareiss_rank(M.dense()) == 1);

    auto Z = coboundary_matrix(1, 0, 0, Convention::odd, Ring::Z);
    CHECK(Z.cols == 1);
    CHECK(Z.entries.empty());
}

TEST_CASE("composition of consecutive matrices vanishes") {
    for (auto conv : {Convention::odd, Convention::even})
        for (auto ring : {Ring::Z, Ring::Z2})
            for (int n = 1; n <= 3; ++n)
                for (int k = 0; k + 1 <= 2 * n; ++k) {
                    auto src = generate_basis(1, n, k, conv, ring);
                    auto mid = generate_basis(1, n, k + 1, conv, ring);
                    auto dst = generate_basis(1, n, k + 2, conv, ring);
                    if (src.empty() || mid.empty() || dst.empty()) continue;
                    auto A = coboundary_matrix(src, mid, ring).dense();
                    auto B = coboundary_matrix(mid, dst, ring).dense();
                    auto C = product(B, A);
                    INFO("n=", n, " k=", k, " ring=", to_string(ring), " conv=", to_string(conv));
                    bool zero = true;
                    for (Eigen::Index i = 0; i < C.rows(); ++i)
                        for (Eigen::Index j = 0; j < C.cols(); ++j)
                            if (ring == Ring::Z2 ? bit_test(C(i, j), 0) : C(i, j) != 0) zero = false;
                    CHECK(zero);
                }
}

TEST_CASE("property: d of d vanishes and d raises the defect by one") {
    for (auto conv : {Convention::odd, Convention::even})
        for (auto ring : {Ring::Z, Ring::Q, Ring::Z2})
            for (auto g : small_grades)
                for (const auto& d : generate_basis(g.m, g.n, g.k, conv, ring)) {
                    auto once = coboundary(d, ring);
                    for (const auto& [t, c] : once.terms()) {
                        CHECK(grading(t) == Grading{g.n, g.k + 1});
                        CHECK(t.strand_count() == g.m);
                    }
                    INFO(to_text(d));
                    CHECK(coboundary(once).empty());
                }
}

TEST_CASE("property: coboundary does not depend on the representative") {
    std::mt19937 rng(99);
    for (auto conv : {Convention::odd, Convention::even})
        for (auto g : small_grades)
            for (const auto& d : generate_basis(g.m, g.n, g.k, conv, Ring::Z)) {
                auto base = coboundary(d, Ring::Z);
                for (int t = 0; t < 3; ++t) {
                    auto s = oracle::scramble(d, rng);
                    CochainElement x(Ring::Z, conv);
                    x.add(s.diagram, s.sign);
                    INFO(to_text(s.diagram));
                    CHECK(coboundary(x) == base);
                    CHECK(coboundary(s.diagram, Ring::Z) * Rational(s.sign) == base);
                }
            }
}

TEST_CASE("property: basis soundness") {
    for (auto conv : {Convention::odd, Convention::even})
        for (auto ring : {Ring::Z, Ring::Z2})
            for (auto g : small_grades) {
                auto basis = generate_basis(g.m, g.n, g.k, conv, ring);
                for (const auto& d : basis) {
                    CHECK(validate(d) == d);
                    CHECK(grading(d) == Grading{g.n, g.k});
                    CHECK(d.strand_count() == g.m);
                    CHECK(d.convention == conv);
                    auto c = canonicalize(d, ring);
                    REQUIRE(std::holds_alternative<SignedDiagram>(c));
                    CHECK(std::get<SignedDiagram>(c).diagram == d);
                    CHECK(std::get<SignedDiagram>(c).sign == 1);
                }
                CHECK(std::is_sorted(basis.begin(), basis.end()));
                for (std::size_t i = 0; i < basis.size(); ++i)
                    for (std::size_t j = i + 1; j < basis.size(); ++j)
                        if (basis[i].vertex_count() == basis[j].vertex_count() &&
                            basis[i].edge_count() == basis[j].edge_count())
                            CHECK(oracle::isomorphisms(basis[i], basis[j]).empty());
            }
}

TEST_CASE("property: chord diagrams in the basis are counted by matchings") {
    // Chord diagrams on m strands: choose how 2n points split over the strands, then a matching.
    for (int m = 1; m <= 3; ++m)
        for (int n = 1; n <= (m == 1 ? 4 : 3); ++n) {
            auto basis = generate_basis(m, n, 0, Convention::odd, Ring::Z);
            long long chords = 0;
            for (const auto& d : basis) chords += d.is_chord_diagram();
            CHECK(chords == binomial(2 * n + m - 1, m - 1) * double_factorial(2 * n - 1));
        }
}
