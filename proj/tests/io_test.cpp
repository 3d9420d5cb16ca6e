#include "doctest.h"

#include <random>

#include "gcx/canonical.hpp"
#include "gcx/io.hpp"
#include "oracles.hpp"

using namespace gcx;
using oracle::make;

namespace {

Diagram tripod() { return make({{1, 2, 3}}, {4}, {{1, 4}, {2, 4}, {3, 4}}); }
Diagram chord(std::vector<std::pair<int, int>> e) { return make({{1, 2, 3, 4}}, {}, std::move(e)); }

CochainElement gamma2() {
    CochainElement g(Ring::Z, Convention::odd);
    g.add(chord({{1, 3}, {2, 4}}), 1);
    g.add(tripod(), -1);
    return g;
}

json reparse(const json& j) { return json::parse(j.dump()); }

}  // namespace

TEST_CASE("exact numbers") {
    CHECK(rational_from_json(json("-7/3")) == Rational(-7, 3));
    CHECK(rational_from_json(json(5)) == Rational(5));
    CHECK(integer_from_json(json("123456789012345678901234567890")) ==
          Integer("123456789012345678901234567890"));
    CHECK_THROWS_AS(rational_from_json(json(1.5)), IoError);
    CHECK_THROWS_AS(integer_from_json(json::array()), IoError);
}

TEST_CASE("sha256 test vectors") {
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("property: diagrams round-trip") {
    std::mt19937 rng(17);
    for (auto conv : {Convention::odd, Convention::even})
        for (auto [m, n, k] : std::vector<std::tuple<int, int, int>>{{1, 2, 0}, {1, 2, 2}, {2, 2, 1}, {1, 3, 1}})
            for (const auto& d : generate_basis(m, n, k, conv, Ring::Z2)) {
                auto s = oracle::scramble(d, rng).diagram;
                INFO(to_text(s));
                CHECK(diagram_from_json(reparse(diagram_to_json(s))) == s);
            }
    Diagram loops = make({{1, 2}}, {}, {{1, 1}, {2, 2}, {1, 2}});
    CHECK(diagram_from_json(reparse(diagram_to_json(loops))) == loops);
}

TEST_CASE("malformed diagrams are rejected") {
    CHECK_THROWS_AS(diagram_from_json(json::parse(R"({"free": [], "edges": []})")), IoError);
    CHECK_THROWS_AS(diagram_from_json(json::parse(R"({"strands": [[1, 2]], "free": [], "edges": [[1, 2]]})")),
                    IoError);
    CHECK_THROWS_AS(
        diagram_from_json(json::parse(R"({"strands": [[1, 2]], "free": [], "edges": [{"a": 1, "b": 2, "dir": "up"}]})")),
        IoError);
    // Not a valid diagram: a free vertex of valence one.
    CHECK_THROWS(diagram_from_json(json::parse(R"({"strands": [[1]], "free": [2], "edges": [{"a": 1, "b": 2}]})")));
}

TEST_CASE("elements and cocycles round-trip") {
    auto g = gamma2();
    CHECK(element_from_json(reparse(element_to_json(g))) == g);
    CochainElement q(Ring::Q, Convention::odd);
    q.add(chord({{1, 2}, {3, 4}}), Rational(-5, 7));
    CHECK(element_from_json(reparse(element_to_json(q))) == q);
    CochainElement z2(Ring::Z2, Convention::odd);
    z2.add(tripod(), 1);
    CHECK(element_from_json(reparse(element_to_json(z2))) == z2);

    OrientedCocycle oc;
    oc.terms.push_back({chord({{1, 3}, {2, 4}}), Rational(1)});
    oc.terms.push_back({make({{1, 2, 3}}, {4}, {{4, 1}, {2, 4}, {3, 4}}), Rational(1)});
    auto back = cocycle_from_json(reparse(cocycle_to_json(oc)));
    REQUIRE(back.terms.size() == 2);
    CHECK(back.ring == oc.ring);
    CHECK(back.convention == oc.convention);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(back.terms[i].diagram == oc.terms[i].diagram);
        CHECK(back.terms[i].coefficient == oc.terms[i].coefficient);
    }
    CHECK(back.element() == oc.element());
}

TEST_CASE("basis files round-trip and check their manifest") {
    BasisFile b{1, 2, 0, Convention::odd, Ring::Z, generate_basis(1, 2, 0, Convention::odd, Ring::Z)};
    json j = basis_to_json(b);
    CHECK(j["manifest"]["count"] == 4);
    CHECK(j["manifest"]["content_hash"] == content_hash(b.diagrams));
    auto back = basis_from_json(reparse(j));
    CHECK(back.diagrams == b.diagrams);
    CHECK(back.m == 1);
    CHECK(back.n == 2);
    CHECK(back.k == 0);
    CHECK(back.ring == Ring::Z);

    json bad = j;
    bad["manifest"]["count"] = 3;
    CHECK_THROWS_AS(basis_from_json(bad), IoError);
    bad = j;
    bad["diagrams"].erase(0);
    bad["manifest"]["count"] = 3;
    CHECK_THROWS_AS(basis_from_json(bad), IoError);
}

TEST_CASE("matrices round-trip") {
    auto M = coboundary_matrix(1, 2, 1, Convention::odd, Ring::Z);
    auto back = matrix_from_json(reparse(matrix_to_json(M)));
    CHECK(back.rows == M.rows);
    CHECK(back.cols == M.cols);
    CHECK(back.dense() == M.dense());
    CHECK_THROWS_AS(matrix_from_json(json::parse(R"({"rows": 1, "cols": 1, "entries": [[1, 0, "2"]]})")), IoError);
}

TEST_CASE("contractible elements, faces and certificates round-trip") {
    Diagram t = tripod();
    for (const auto& e : contractible_elements(t))
        CHECK(contractible_from_json(reparse(contractible_to_json(t, e))) == e);
    for (const auto& f : enumerate_faces(t)) {
        CHECK(face_from_json(reparse(face_to_json(t, f))) == f);
        if (f.kind == FaceKind::principal) continue;
        for (int d : {3, 4, 5}) {
            auto c = codim_certificate(f, d, t);
            auto back = certificate_from_json(reparse(certificate_to_json(c)));
            CHECK(back.kind == c.kind);
            CHECK(back.r == c.r);
            CHECK(back.s == c.s);
            CHECK(back.edge_count == c.edge_count);
            CHECK(back.bound == c.bound);
            CHECK(back.valence_bound == c.valence_bound);
            CHECK(back.anomalous == c.anomalous);
        }
    }
    CHECK_THROWS_AS(face_from_json(json::parse(R"({"kind": "sideways", "vertices": [1, 2]})")), IoError);
}

TEST_CASE("gluing plans round-trip and re-verify") {
    for (const auto& plan : {plan_gluing(gamma2()), plan_chord_mod2(chord({{1, 3}, {2, 4}}))}) {
        json j = plan_to_json(plan);
        auto back = plan_from_json(reparse(j));
        CHECK(plan_to_json(back) == j);
        CHECK(verify_fundamental_cycle(back).pass);
        CHECK(back.pairings.size() == plan.pairings.size());
        CHECK(back.degenerate.size() == plan.degenerate.size());
    }
    json j = plan_to_json(plan_gluing(gamma2()));
    j["d_parity"] = "sideways";
    CHECK_THROWS_AS(plan_from_json(j), IoError);
}
