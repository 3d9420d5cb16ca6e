#include "doctest.h"

#include <numeric>
#include <random>

#include "gcx/homology.hpp"
#include "gcx/strata.hpp"
#include "oracles.hpp"

using namespace gcx;
using oracle::make;

namespace {

Diagram tripod() { return make({{1, 2, 3}}, {4}, {{1, 4}, {2, 4}, {3, 4}}); }
Diagram chord1324() { return make({{1, 2, 3, 4}}, {}, {{1, 3}, {2, 4}}); }
Diagram single_chord() { return make({{1, 2}}, {}, {{1, 2}}); }

GraphView graph(int n, std::vector<std::pair<int, int>> edges) {
    GraphView g;
    g.vertices.resize(n);
    std::iota(g.vertices.begin(), g.vertices.end(), 1);
    g.edges = std::move(edges);
    return g;
}

GraphView complete(int n) {
    std::vector<std::pair<int, int>> e;
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) e.push_back({i, j});
    return graph(n, e);
}

FaceDescriptor face(FaceKind k, std::vector<int> v) { return FaceDescriptor{k, std::move(v), {}}; }

// prod (1 + c_k t^step) by direct expansion.
Polynomial expand(const std::vector<int>& coeffs, int step) {
    Polynomial p{1};
    for (int c : coeffs) {
        Polynomial q(p.size() + step, 0);
        for (std::size_t i = 0; i < p.size(); ++i) {
            q[i] += p[i];
            q[i + step] += p[i] * c;
        }
        p = q;
    }
    while (p.size() > 1 && p.back() == 0) p.pop_back();
    return p;
}

Polynomial trimmed(Polynomial p) {
    while (p.size() > 1 && p.back() == 0) p.pop_back();
    return p;
}

std::vector<CochainElement> test_cocycles() {
    std::vector<CochainElement> out;
    for (auto [m, n, k] : std::vector<std::tuple<int, int, int>>{{1, 2, 0}, {1, 3, 0}, {3, 2, 0}, {1, 2, 1}})
        for (const auto& mc : minimal_decomposition(cocycle_space(m, n, k, Convention::odd, Ring::Z)))
            out.push_back(mc.element);
    return out;
}

std::vector<Diagram> small_diagrams() {
    std::vector<Diagram> out;
    for (auto [m, n, k] : std::vector<std::tuple<int, int, int>>{
             {1, 1, 0}, {1, 2, 0}, {1, 2, 1}, {1, 2, 2}, {1, 3, 0}, {1, 3, 1}, {2, 2, 0}, {3, 2, 0}, {2, 3, 0}})
        for (const auto& d : generate_basis(m, n, k, Convention::odd, Ring::Z2))
            if (d.vertex_count() <= 7) out.push_back(d);
    return out;
}

}  // namespace

TEST_CASE("block decomposition examples") {
    auto path = blocks_and_tree(graph(3, {{1, 2}, {2, 3}}));
    CHECK(path.blocks.size() == 2);
    CHECK(path.cut_vertices == std::vector<int>{2});
    CHECK(path.counting_identity_holds);

    auto tri = blocks_and_tree(graph(3, {{1, 2}, {2, 3}, {1, 3}}));
    CHECK(tri.blocks.size() == 1);
    CHECK(tri.cut_vertices.empty());
}

TEST_CASE("two triangles sharing a vertex: literal counting identity fails, corrected holds") {
    auto b = blocks_and_tree(graph(5, {{1, 2}, {2, 3}, {1, 3}, {3, 4}, {4, 5}, {3, 5}}));
    REQUIRE(b.blocks.size() == 2);
    CHECK(b.cut_vertices == std::vector<int>{3});
    CHECK(b.tree_edges.size() == 2);
    // 3 + 3 = 5 + 2 - 1, against the uncorrected 5 + 2 = 7.
    CHECK(b.counting_identity_holds);
    CHECK_FALSE(b.literal_identity_holds);
}

TEST_CASE("property: blocks agree with brute force on random graphs") {
    std::mt19937 rng(31337);
    std::uniform_real_distribution<double> dens(0.1, 0.7);
    for (int t = 0; t < 200; ++t) {
        GraphView g = oracle::random_graph(rng, 10, dens(rng));
        auto b = blocks_and_tree(g);
        auto brute = oracle::brute_blocks(g);
        auto blocks = b.blocks;
        std::sort(blocks.begin(), blocks.end());
        INFO("trial ", t);
        CHECK(blocks == brute.blocks);
        CHECK(b.cut_vertices == brute.cut_vertices);
        CHECK(b.counting_identity_holds);

        std::size_t total = 0;
        for (const auto& bl : b.blocks) total += bl.size();
        CHECK(total == g.vertices.size() + b.tree_edges.size() - b.cut_vertices.size());

        // Blocks meet in at most one vertex, always a cut vertex.
        std::set<int> cuts(b.cut_vertices.begin(), b.cut_vertices.end());
        for (std::size_t i = 0; i < b.blocks.size(); ++i)
            for (std::size_t j = i + 1; j < b.blocks.size(); ++j) {
                std::vector<int> common;
                std::set_intersection(b.blocks[i].begin(), b.blocks[i].end(), b.blocks[j].begin(),
                                      b.blocks[j].end(), std::back_inserter(common));
                CHECK(common.size() <= 1);
                if (common.size() == 1) CHECK(cuts.count(common[0]) == 1);
            }

        // The block-cut incidence graph is a forest.
        const int nb = static_cast<int>(b.blocks.size());
        std::map<int, int> parent;
        std::function<int(int)> find = [&](int x) {
            if (!parent.count(x)) parent[x] = x;
            return parent[x] == x ? x : parent[x] = find(parent[x]);
        };
        bool cycle = false;
        for (auto [bi, v] : b.tree_edges) {
            CHECK(std::binary_search(b.blocks[bi].begin(), b.blocks[bi].end(), v));
            int x = find(bi), y = find(nb + v);
            if (x == y) cycle = true;
            parent[x] = y;
        }
        CHECK_FALSE(cycle);
    }
}

TEST_CASE("face enumeration examples") {
    auto count = [](const std::vector<FaceDescriptor>& fs, FaceKind k) {
        return std::count_if(fs.begin(), fs.end(), [&](const FaceDescriptor& f) { return f.kind == k; });
    };
    auto c = enumerate_faces(single_chord());
    CHECK(count(c, FaceKind::principal) == 1);
    CHECK(count(c, FaceKind::hidden) == 0);
    CHECK(count(c, FaceKind::infinity) == 3);
    REQUIRE(c[0].kind == FaceKind::principal);
    CHECK(c[0].vertices == std::vector<int>{1, 2});
    CHECK(c[0].labels.size() == 2);

    auto t = enumerate_faces(tripod());
    CHECK(count(t, FaceKind::principal) == 5);
    CHECK(count(t, FaceKind::hidden) == 3);
    CHECK(count(t, FaceKind::infinity) == 14);
    std::set<std::vector<int>> hidden;
    for (const auto& f : t)
        if (f.kind == FaceKind::hidden) hidden.insert(f.vertices);
    CHECK(hidden == std::set<std::vector<int>>{{1, 2, 4}, {2, 3, 4}, {1, 2, 3, 4}});

    auto x = enumerate_faces(chord1324());
    CHECK(count(x, FaceKind::principal) == 5);
    CHECK(count(x, FaceKind::infinity) == 14);
    hidden.clear();
    for (const auto& f : x)
        if (f.kind == FaceKind::hidden) hidden.insert(f.vertices);
    CHECK(hidden == std::set<std::vector<int>>{{1, 2, 3}, {2, 3, 4}, {1, 2, 3, 4}});
}

TEST_CASE("property: face enumeration agrees with an exhaustive subset scan") {
    for (const auto& d : small_diagrams()) {
        auto fs = enumerate_faces(d);
        auto brute = oracle::brute_faces(d);
        oracle::FaceCounts got;
        for (const auto& f : fs) {
            if (f.kind == FaceKind::principal) ++got.principal;
            if (f.kind == FaceKind::hidden) ++got.hidden;
            if (f.kind == FaceKind::infinity) ++got.infinity;
        }
        INFO(to_text(d));
        CHECK(got.principal == brute.principal);
        CHECK(got.hidden == brute.hidden);
        CHECK(got.infinity == brute.infinity);
        std::set<FaceDescriptor> unique(fs.begin(), fs.end());
        CHECK(unique.size() == fs.size());
    }
}

TEST_CASE("codimension certificate examples") {
    // Case III: the tripod's full collision.
    auto full = face(FaceKind::hidden, {1, 2, 3, 4});
    auto c5 = codim_certificate(full, 5, tripod());
    CHECK(c5.kind == CertificateCase::III);
    CHECK(c5.r == 3);
    CHECK(c5.s == 1);
    CHECK(c5.edge_count == 3);
    CHECK(c5.bound == 2);
    CHECK(c5.valence_bound == 2);
    CHECK_FALSE(c5.anomalous);
    auto c3 = codim_certificate(full, 3, tripod());
    CHECK(c3.bound == 0);
    CHECK(c3.anomalous);

    // Case I: four trivalent free vertices (a tetrahedron) hanging off the strand.
    Diagram tet = make({{1, 2, 3, 4}}, {5, 6, 7, 8},
                       {{1, 5}, {2, 6}, {3, 7}, {4, 8}, {5, 6}, {5, 7}, {6, 8}, {7, 8}, {5, 8}, {6, 7}});
    auto ci = codim_certificate(face(FaceKind::hidden, {5, 6, 7, 8}), 5, tet);
    CHECK(ci.kind == CertificateCase::I);
    CHECK(ci.edge_count == 6);
    CHECK(ci.valence_bound == 10);
    CHECK(ci.bound > 0);

    // A principal face glued elsewhere has no certificate.
    CHECK_THROWS_AS(codim_certificate(FaceDescriptor{FaceKind::principal, {1, 4}, {{Element::Kind::edge, 0}}}, 5,
                                      tripod()),
                    std::invalid_argument);
}

TEST_CASE("property: certificates match an independent recount and are positive for d >= 4") {
    for (const auto& x : test_cocycles())
        for (const auto& [d, coeff] : x.terms())
            for (const auto& f : enumerate_faces(d)) {
                if (f.kind == FaceKind::principal) continue;
                std::set<int> S(f.vertices.begin(), f.vertices.end());
                int r = 0, s = 0, inside = 0, touching = 0;
                for (int v : S) (v <= d.segment_count() ? r : s) += 1;
                // A self-loop follows the strand tangent, which the screen also fixes.
                for (const auto& e : d.edges) {
                    int in = e.a == e.b ? 2 * static_cast<int>(S.count(e.a)) : static_cast<int>(S.count(e.a) + S.count(e.b));
                    inside += in == 2;
                    touching += in >= 1;
                }
                for (int D : {3, 4, 5, 7}) {
                    auto c = codim_certificate(f, D, d);
                    CHECK(c.r == r);
                    CHECK(c.s == s);
                    int screen;
                    int edges = f.kind == FaceKind::hidden ? inside : touching;
                    if (f.kind == FaceKind::hidden)
                        screen = r == 0 ? D * s - D - 1 : D + r + D * s - 3;
                    else
                        screen = r == 0 ? D * s - 1 : r + D * s - 1;
                    CHECK(c.edge_count == edges);
                    CHECK(c.bound == (D - 1) * edges - screen);
                    CHECK(c.anomalous == (f.kind == FaceKind::hidden && r > 0 && c.bound <= 0));
                    // Faces outside the degenerate locus are folded or collapsed, not bounded.
                    if (D >= 4 && in_degenerate_locus(d, f)) {
                        INFO(to_text(d), " face ", f.vertices.size(), " d=", D);
                        CHECK(c.bound > 0);
                    }
                }
            }
}

TEST_CASE("anomalous face examples") {
    auto t = anomalous_faces(tripod());
    REQUIRE(t.size() == 1);
    CHECK(t[0].vertices == std::vector<int>{1, 2, 3, 4});
    CHECK(anomalous_faces(chord1324()).empty());
    // Two tripods interleaved on one strand cross each other.
    Diagram crossed = make({{1, 2, 3, 4, 5, 6}}, {7, 8}, {{1, 7}, {3, 7}, {5, 7}, {2, 8}, {4, 8}, {6, 8}});
    CHECK(anomalous_faces(crossed).empty());
}

TEST_CASE("corner poset examples") {
    CHECK(compatible(face(FaceKind::hidden, {1, 2, 4}), face(FaceKind::hidden, {1, 2, 3, 4})));
    CHECK_FALSE(compatible(face(FaceKind::hidden, {1, 2, 4}), face(FaceKind::hidden, {2, 3, 4})));
    CHECK(compatible(face(FaceKind::hidden, {1, 2, 4}), face(FaceKind::principal, {3, 4})));

    auto p = corner_poset(single_chord(), {1, false});
    REQUIRE(p.families.size() == 1);
    CHECK(p.faces[p.families[0][0]].vertices == std::vector<int>{1, 2});
}

TEST_CASE("property: corner families are pairwise compatible and complete") {
    // Oracle compatibility, with infinity as vertex 0.
    auto as_set = [](const FaceDescriptor& f) {
        std::set<int> s(f.vertices.begin(), f.vertices.end());
        if (f.kind == FaceKind::infinity) s.insert(0);
        return s;
    };
    auto ok = [&](const FaceDescriptor& a, const FaceDescriptor& b) {
        auto A = as_set(a), B = as_set(b);
        std::vector<int> common;
        std::set_intersection(A.begin(), A.end(), B.begin(), B.end(), std::back_inserter(common));
        return common.size() <= 1 || common.size() == A.size() || common.size() == B.size();
    };
    for (const auto& d : {tripod(), chord1324(), single_chord()}) {
        auto p = corner_poset(d, {2, true});
        std::set<std::vector<int>> fams;
        for (auto f : p.families) {
            std::sort(f.begin(), f.end());
            fams.insert(f);
        }
        const int n = static_cast<int>(p.faces.size());
        for (int i = 0; i < n; ++i) {
            CHECK(fams.count({i}) == 1);
            for (int j = i + 1; j < n; ++j) {
                CHECK(compatible(p.faces[i], p.faces[j]) == ok(p.faces[i], p.faces[j]));
                CHECK(fams.count({i, j}) == (ok(p.faces[i], p.faces[j]) ? 1u : 0u));
            }
        }
        CHECK(fams.size() == p.families.size());
    }
}

TEST_CASE("poincare polynomial examples") {
    for (int D : {3, 4, 5}) {
        CHECK(poincare_polynomial(graph(2, {{1, 2}}), D, {1, 2}) == expand({1}, D - 1));
        CHECK(poincare_polynomial(complete(3), D, {1, 2, 3}) == expand({1, 2}, D - 1));
    }
    auto square = graph(4, {{1, 2}, {2, 3}, {3, 4}, {4, 1}});
    std::vector<int> order{1, 2, 3, 4};
    do {
        CHECK_THROWS_AS(poincare_polynomial(square, 3, order), OrderingError);
    } while (std::next_permutation(order.begin(), order.end()));
}

TEST_CASE("property: complete graphs reproduce the configuration space product") {
    for (int n = 1; n <= 6; ++n)
        for (int D : {3, 4, 5, 7}) {
            std::vector<int> c;
            for (int k = 2; k <= n; ++k) c.push_back(k - 1);
            std::vector<int> order(n);
            std::iota(order.begin(), order.end(), 1);
            std::mt19937 rng(n * 10 + D);
            for (int t = 0; t < 5; ++t) {
                std::shuffle(order.begin(), order.end(), rng);
                CHECK(trimmed(poincare_polynomial(complete(n), D, order)) == expand(c, D - 1));
            }
        }
}

TEST_CASE("property: poincare polynomial is independent of the admissible ordering") {
    for (const auto& d : small_diagrams()) {
        if (d.vertex_count() > 6) continue;
        std::vector<int> order(d.vertex_count());
        std::iota(order.begin(), order.end(), 1);
        std::set<Polynomial> seen;
        int admissible = 0;
        do {
            try {
                seen.insert(trimmed(poincare_polynomial(d, 4, PoincareMode::ambient, order)));
                ++admissible;
            } catch (const OrderingError&) {
            }
        } while (std::next_permutation(order.begin(), order.end()));
        INFO(to_text(d), " admissible orderings ", admissible);
        CHECK(seen.size() <= 1);
    }
}

TEST_CASE("dimension examples") {
    CochainElement g2(Ring::Z, Convention::odd);
    g2.add(chord1324(), 1);
    g2.add(tripod(), -1);
    auto d5 = dimensions(g2, 5);
    CHECK(d5.fiber_dim == 8);
    CHECK(d5.class_degree == 4);
    CHECK(d5.sphere_dim == 12);
    auto d3 = dimensions(g2, 3);
    CHECK(d3.fiber_dim == 6);
    CHECK(d3.class_degree == 0);

    Diagram empty = make({{}}, {}, {});
    CHECK(dimensions(empty, 5).fiber_dim == 0);
}

TEST_CASE("property: fiber dimension formula equals the direct count") {
    for (const auto& x : test_cocycles()) {
        int N = 0;
        for (const auto& [d, c] : x.terms()) N = std::max(N, static_cast<int>(d.edges.size()));
        for (int D : {4, 5, 6, 7}) {
            auto dims = dimensions(x, D);
            for (const auto& [d, c] : x.terms()) {
                int q = 0;
                for (const auto& s : d.strands) q += static_cast<int>(s.size());
                int t = static_cast<int>(d.free.size()), E = static_cast<int>(d.edges.size());
                int n = E - t, k = 2 * E - q - 3 * t;
                CHECK((3 - D) * n - k + N * (D - 1) == q + D * t + (D - 1) * (N - E));
                CHECK(dims.fiber_dim == q + D * t + (D - 1) * (N - E));
                CHECK(fiber_dim_by_count(d, N, D) == dims.fiber_dim);
            }
        }
    }
}
