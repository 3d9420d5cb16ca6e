#include "doctest.h"

#include <random>

#include "gcx/canonical.hpp"
#include "gcx/complex.hpp"
#include "oracles.hpp"

using namespace gcx;
using oracle::make;

namespace {

Diagram tripod() { return make({{1, 2, 3}}, {4}, {{1, 4}, {2, 4}, {3, 4}}); }
Diagram chord1324() { return make({{1, 2, 3, 4}}, {}, {{1, 3}, {2, 4}}); }

SignedDiagram nonzero(const CanonResult& r) {
    REQUIRE(std::holds_alternative<SignedDiagram>(r));
    return std::get<SignedDiagram>(r);
}

std::vector<Diagram> pool() {
    std::vector<Diagram> out;
    for (auto conv : {Convention::odd, Convention::even})
        for (auto [m, n, k] : std::vector<std::tuple<int, int, int>>{
                 {1, 2, 0}, {1, 2, 1}, {1, 3, 0}, {1, 3, 1}, {1, 3, 2}, {2, 2, 0}, {3, 2, 0}, {2, 3, 0}})
            for (const auto& d : generate_basis(m, n, k, conv, Ring::Z2)) out.push_back(d);
    return out;
}

}  // namespace

TEST_CASE("validation accepts the tripod and reports each violation") {
    CHECK_NOTHROW(tripod());
    Diagram loop;
    loop.strands = {{1, 2, 3}};
    loop.free = {4};
    loop.edges = {{1, 4, true, true}, {2, 4, true, true}, {3, 4, true, true}, {4, 4, true, true}};
    try {
        validate(loop);
        FAIL("free self-loop accepted");
    } catch (const ValidationError& e) {
        bool found = false;
        for (const auto& p : e.problems()) found |= p.find("free self-loop") != std::string::npos;
        CHECK(found);
    }

    Diagram detached;
    detached.strands = {{}};
    detached.free = {1, 2, 3};
    detached.edges = {{1, 2, true, true}, {2, 3, true, true}, {3, 1, true, true}};
    try {
        validate(detached);
        FAIL("detached component accepted");
    } catch (const ValidationError& e) {
        bool found = false;
        for (const auto& p : e.problems()) found |= p.find("component not connected to L") != std::string::npos;
        CHECK(found);
    }

    Diagram low;
    low.strands = {{1, 2}};
    low.free = {3};
    low.edges = {{1, 3, true, true}, {2, 3, true, true}};
    CHECK_THROWS_AS(validate(low), ValidationError);
}

TEST_CASE("validation renumbers ids to 1..n keeping their order") {
    Diagram raw;
    raw.strands = {{2, 5, 9}};
    raw.free = {12};
    raw.edges = {{2, 12, true, true}, {5, 12, true, true}, {9, 12, true, true}};
    Diagram d = validate(raw);
    CHECK(d.strands == std::vector<std::vector<int>>{{1, 2, 3}});
    CHECK(d.free == std::vector<int>{4});
    CHECK(to_text(d) == to_text(tripod()));
}

TEST_CASE("grading of the order-2 diagrams") {
    CHECK(grading(tripod()).order == 2);
    CHECK(grading(tripod()).defect == 0);
    CHECK(grading(chord1324()).order == 2);
    CHECK(grading(chord1324()).defect == 0);
}

TEST_CASE("canonical form examples") {
    auto t = nonzero(canonicalize(tripod()));
    auto again = nonzero(canonicalize(t.diagram));
    CHECK(again.diagram == t.diagram);
    CHECK(again.sign == 1);

    Diagram flipped = make({{1, 2, 3}}, {4}, {{4, 1}, {2, 4}, {3, 4}});
    auto f = nonzero(canonicalize(flipped));
    CHECK(f.diagram == t.diagram);
    CHECK(f.sign == -t.sign);

    Diagram doubled = make({{1, 2, 3, 4}}, {5}, {{1, 5}, {2, 5}, {3, 5}, {4, 5}, {1, 5}});
    auto z = canonicalize(doubled);
    REQUIRE(std::holds_alternative<ZeroReason>(z));
    CHECK(std::get<ZeroReason>(z) == ZeroReason::multi_edge);
}

TEST_CASE("iso_sign examples") {
    CHECK(iso_sign(tripod(), tripod()) == 1);
    Diagram flipped = make({{1, 2, 3}}, {4}, {{4, 1}, {2, 4}, {3, 4}});
    CHECK(iso_sign(tripod(), flipped) == -1);
    CHECK_FALSE(iso_sign(tripod(), chord1324()).has_value());
}

TEST_CASE("automorphism signs examples") {
    CHECK(automorphism_signs(chord1324()) == std::set<int>{1});
    CHECK(automorphism_signs(tripod()) == std::set<int>{1});
    Diagram h = make({{1, 2, 3, 4}}, {5, 6}, {{1, 5}, {3, 5}, {2, 6}, {4, 6}, {5, 6}});
    CHECK(automorphism_signs(h) == std::set<int>{1});
}

TEST_CASE("contraction examples") {
    // tripod / edge 2>4: merged vertex 2 with edges 1>2 and 3>2.
    auto c = contract(tripod(), {Element::Kind::edge, 1});
    REQUIRE(c.nonzero());
    Diagram expect = make({{1, 2, 3}}, {}, {{1, 2}, {3, 2}});
    auto e = nonzero(canonicalize(expect));
    CHECK(c.diagram == e.diagram);

    // (13)(24) / arc 2-3: old 4 becomes 3.
    auto a = contract(chord1324(), {Element::Kind::arc, 2});
    REQUIRE(a.nonzero());
    CHECK(a.diagram == nonzero(canonicalize(make({{1, 2, 3}}, {}, {{1, 2}, {2, 3}}))).diagram);

    auto p = contract(chord1324(), {Element::Kind::edge, 0});
    CHECK(p.kind == ContractionOutcome::Kind::zero_pinch);
}

TEST_CASE("property: canonical classes agree with brute-force isomorphism") {
    std::mt19937 rng(20261016);
    auto ds = pool();
    REQUIRE(ds.size() > 40);
    for (int trial = 0; trial < 300; ++trial) {
        const Diagram& a = ds[rng() % ds.size()];
        const Diagram& b = rng() % 3 ? ds[rng() % ds.size()] : a;
        auto sa = oracle::scramble(a, rng).diagram;
        auto sb = oracle::scramble(b, rng).diagram;
        auto ca = canonical_form(sa), cb = canonical_form(sb);
        REQUIRE(ca);
        REQUIRE(cb);
        bool brute = sa.convention == sb.convention && !oracle::isomorphisms(sa, sb).empty();
        CHECK((ca->diagram == cb->diagram) == brute);
    }
}

TEST_CASE("property: relabeling equivariance and idempotence (odd convention)") {
    std::mt19937 rng(7);
    for (const auto& d : pool()) {
        if (d.convention != Convention::odd) continue;
        auto base = canonical_form(d);
        REQUIRE(base);
        auto again = canonical_form(base->diagram);
        CHECK(again->diagram == base->diagram);
        if (base->reversing_automorphism) continue;
        CHECK(again->sign == 1);
        for (int t = 0; t < 5; ++t) {
            auto s = oracle::scramble(d, rng);
            auto c = canonical_form(s.diagram);
            CHECK(c->diagram == base->diagram);
            CHECK(c->sign == s.sign * base->sign);
        }
    }
}

TEST_CASE("property: iso_sign is multiplicative along chains") {
    std::mt19937 rng(11);
    for (const auto& d : pool()) {
        if (d.convention != Convention::odd) continue;
        auto a = oracle::scramble(d, rng).diagram, b = oracle::scramble(d, rng).diagram,
             c = oracle::scramble(d, rng).diagram;
        if (automorphism_signs(d).count(-1)) {
            CHECK_THROWS(iso_sign(a, b));
            continue;
        }
        auto ab = iso_sign(a, b), bc = iso_sign(b, c), ac = iso_sign(a, c);
        REQUIRE(ab);
        REQUIRE(bc);
        REQUIRE(ac);
        CHECK(*ab * *bc == *ac);
    }
}

TEST_CASE("property: automorphism signs match brute force and the zero verdict") {
    for (const auto& d : pool()) {
        if (d.vertex_count() > 8) continue;
        std::set<int> brute;
        for (const auto& phi : oracle::isomorphisms(d, d))
            brute.insert(oracle::orientation_sign(d, d, phi));
        CHECK(automorphism_signs(d) == brute);
        bool reversing = brute.count(-1) > 0;
        auto z = canonicalize(d, Ring::Z);
        CHECK(std::holds_alternative<ZeroReason>(z) == reversing);
        CHECK(std::holds_alternative<SignedDiagram>(canonicalize(d, Ring::Z2)));
    }
}

TEST_CASE("property: contraction is equivariant under relabeling") {
    std::mt19937 rng(3);
    for (const auto& d : pool()) {
        if (d.convention != Convention::odd || automorphism_signs(d).count(-1)) continue;
        for (const auto& e : contractible_elements(d)) {
            auto base = contract(d, e);
            // Rebuild the same element in a scrambled copy through its endpoints.
            auto s = oracle::scramble(d, rng);
            auto phi = oracle::isomorphisms(d, s.diagram);
            REQUIRE_FALSE(phi.empty());
            auto [x, y] = endpoints(d, e);
            std::optional<Element> image;
            for (const auto& f : contractible_elements(s.diagram)) {
                if (f.kind != e.kind) continue;
                auto [u, v] = endpoints(s.diagram, f);
                std::set<int> want{phi[0][x], phi[0][y]}, got{u, v};
                if (want == got) image = f;
            }
            REQUIRE(image);
            auto other = contract(s.diagram, *image);
            CHECK(other.kind == base.kind);
            if (!base.nonzero() || !other.nonzero()) continue;
            CHECK(other.diagram == base.diagram);
            INFO(to_text(d), " / ", describe(d, e), "  vs  ", to_text(s.diagram), " / ", describe(s.diagram, *image));
            CHECK(other.sign * epsilon(s.diagram, *image) ==
                  oracle::orientation_sign(d, s.diagram, phi[0]) * base.sign * epsilon(d, e));
        }
    }
}
