#include "doctest.h"

#include <random>

#include "gcx/canonical.hpp"
#include "gcx/gluing.hpp"
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

const MinimalCocycle& triple_linking() {
    static const std::vector<MinimalCocycle> mins =
        minimal_decomposition(cocycle_space(3, 2, 0, Convention::odd, Ring::Z));
    static const Diagram T =
        std::get<SignedDiagram>(canonicalize(make({{1}, {2}, {3}}, {4}, {{1, 4}, {2, 4}, {3, 4}}))).diagram;
    for (const auto& mc : mins)
        if (mc.element.coefficient(T) != 0) return mc;
    throw std::logic_error("triple linking cocycle not found");
}

std::vector<MinimalCocycle> minimal_at(int m, int n) {
    return minimal_decomposition(cocycle_space(m, n, 0, Convention::odd, Ring::Z));
}

int count(const GluingPlan& p, CollapseKind k) {
    int c = 0;
    for (const auto& x : p.collapses) c += x.kind == k;
    return c;
}

int edge_between(const Diagram& d, int a, int b) {
    for (int i = 0; i < d.edge_count(); ++i)
        if ((d.edges[i].lo() == a && d.edges[i].hi() == b) || (d.edges[i].lo() == b && d.edges[i].hi() == a))
            return i;
    return -1;
}

bool has_change(const CornerAnalysis& ca, int side, int before, int after) {
    for (const auto& c : ca.corners)
        if (c.side == side && c.codim_before == before && c.codim_after == after) return true;
    return false;
}

bool mentions(const FundamentalCycleReport& r, const std::string& s) {
    for (const auto& u : r.unbalanced)
        if (u.find(s) != std::string::npos) return true;
    return false;
}

}  // namespace

TEST_CASE("gluing plan for the order-2 long-knot cocycle") {
    auto plan = plan_gluing(gamma2());
    CHECK(plan.N == 3);
    CHECK(plan.pairings.size() == 3);
    CHECK(plan.hidden_folds.size() == 2);
    CHECK(plan.principal_folds.empty());
    CHECK(count(plan, CollapseKind::c1) == 2);
    CHECK(count(plan, CollapseKind::c2) == 1);
    CHECK(plan.degenerate.size() == 33);
    CHECK(plan.verification.pass);
    CHECK(plan.verification.faces_total == 44);
    CHECK(plan.verification.faces_accounted == 44);
    // Each pairing glues a chord-diagram face to a tripod face.
    for (const auto& p : plan.pairings) CHECK(p.a.space != p.b.space);
    CHECK(verify_fundamental_cycle(plan).pass);
}

TEST_CASE("corrupting one pairing's flip set fails the report") {
    auto plan = plan_gluing(gamma2());
    REQUIRE(plan.verification.pass);
    for (std::size_t i = 0; i < plan.pairings.size(); ++i) {
        auto bad = plan;
        auto& flips = bad.pairings[i].id.flips;
        auto it = std::find(flips.begin(), flips.end(), 0);
        if (it == flips.end()) {
            flips.push_back(0);
            std::sort(flips.begin(), flips.end());
        } else {
            flips.erase(it);
        }
        auto r = verify_fundamental_cycle(bad);
        CHECK_FALSE(r.pass);
        CHECK(mentions(r, "pairing " + std::to_string(i) + ": odd flip set"));
        CHECK(r.faces_accounted == r.faces_total);
    }
}

TEST_CASE("triple linking plan glues each tripod edge face to one chord diagram") {
    const auto& tl = triple_linking();
    auto plan = plan_gluing(tl.element);
    CHECK(plan.verification.pass);
    CHECK(plan.hidden_folds.empty());
    REQUIRE(plan.pairings.size() == 3);
    int tspace = -1;
    for (std::size_t i = 0; i < plan.spaces.size(); ++i)
        if (!plan.spaces[i].diagram.is_chord_diagram()) tspace = static_cast<int>(i);
    REQUIRE(tspace >= 0);
    std::set<int> partners;
    for (const auto& p : plan.pairings) {
        const FaceRef& t = p.a.space == tspace ? p.a : p.b;
        const FaceRef& o = p.a.space == tspace ? p.b : p.a;
        REQUIRE(t.space == tspace);
        CHECK(t.face.labels.front().kind == Element::Kind::edge);
        CHECK(o.face.labels.front().kind == Element::Kind::arc);
        partners.insert(o.space);
    }
    CHECK(partners.size() == 3);
}

TEST_CASE("a lone tripod has unpaired principal faces") {
    CochainElement t(Ring::Z, Convention::odd);
    t.add(tripod(), 1);
    try {
        plan_gluing(t);
        FAIL("expected PlanError");
    } catch (const PlanError& e) {
        CHECK(e.kind() == "unpairable class");
        CHECK_FALSE(e.details().empty());
    }
}

TEST_CASE("plan parity preconditions") {
    PlanOptions even;
    even.ambient_dim = 4;
    CHECK_THROWS_AS(plan_gluing(gamma2(), even), PlanError);
    CochainElement g(Ring::Z, Convention::even);
    auto odd = gamma2();
    for (const auto& [d, c] : odd.terms()) {
        Diagram e = d;
        e.convention = Convention::even;
        g.add(e, c);
    }
    CHECK_THROWS_AS(plan_gluing(g), PlanError);
}

TEST_CASE("arc-to-arc identifications can force an odd flip set") {
    // At two strands and order 3 two minimal cocycles contain a class whose only
    // identifications reverse one free edge.
    std::vector<std::size_t> failing;
    for (const auto& mc : minimal_at(2, 3)) {
        auto plan = plan_gluing(mc.element);
        if (plan.verification.pass) continue;
        failing.push_back(mc.support.size());
        CHECK(mentions(plan.verification, "odd flip set"));
        CHECK(plan.verification.faces_accounted == plan.verification.faces_total);
    }
    std::sort(failing.begin(), failing.end());
    CHECK(failing == std::vector<std::size_t>{13, 25});
}

TEST_CASE("mod-2 plans") {
    PlanOptions d4;
    d4.ambient_dim = 4;
    auto p = plan_mod2(gamma2(), d4);
    CHECK(p.parity == Parity::even);
    CHECK(p.verification.pass);
    for (const auto& s : spherical_signatures(p)) CHECK(in_symmetry_group(s, p.parity, p.ring));

    auto single = plan_chord_mod2(make({{1, 2}}, {}, {{1, 2}}));
    CHECK(single.verification.pass);
    CHECK(single.principal_folds.size() == 1);
    int inf = 0;
    for (const auto& d : single.degenerate) inf += d.reason == DegenerateReason::infinity;
    CHECK(inf == 3);

    auto crossed = plan_chord_mod2(chord({{1, 3}, {2, 4}}));
    CHECK(crossed.verification.pass);
    CHECK(crossed.principal_folds.size() == 5);
    CHECK(crossed.collapses.size() == 3);

    try {
        plan_chord_mod2(tripod());
        FAIL("expected PlanError");
    } catch (const PlanError& e) {
        CHECK(e.kind() == "not a chord diagram");
    }
}

TEST_CASE("property: passing integral plans use even flip sets and group signatures") {
    std::vector<CochainElement> cocycles{gamma2(), triple_linking().element};
    for (const auto& mc : minimal_at(1, 3)) cocycles.push_back(mc.element);
    for (const auto& x : cocycles) {
        auto plan = plan_gluing(x);
        REQUIRE(plan.verification.pass);
        for (const auto& p : plan.pairings) CHECK(p.id.flips.size() % 2 == 0);
        for (const auto& f : plan.principal_folds) CHECK(f.flips.size() % 2 == 0);
        for (const auto& h : plan.hidden_folds) CHECK(h.flips.size() % 2 == 0);
        for (const auto& s : spherical_signatures(plan)) {
            INFO(s.source);
            CHECK(in_symmetry_group(s, Parity::odd, Ring::Z));
        }
    }
    SphericalSignature odd{"x", {2, 1, 3}, {1}};
    CHECK_FALSE(in_symmetry_group(odd, Parity::odd, Ring::Z));
    CHECK(in_symmetry_group(odd, Parity::even, Ring::Z2));
    CHECK_FALSE(in_symmetry_group({"x", {1, 1, 3}, {}}, Parity::odd, Ring::Z2));
}

TEST_CASE("property: plans do not depend on the labels of the input") {
    std::mt19937 rng(5);
    auto g2 = gamma2();
    auto base = plan_gluing(g2);
    for (int t = 0; t < 20; ++t) {
        OrientedCocycle x;
        for (const auto& [d, c] : g2.terms()) {
            auto s = oracle::scramble(d, rng);
            x.terms.push_back({s.diagram, c * Rational(s.sign)});
        }
        auto p = plan_gluing(x);
        CHECK(p.verification.pass);
        CHECK(p.pairings.size() == base.pairings.size());
        CHECK(p.hidden_folds.size() == base.hidden_folds.size());
        CHECK(p.collapses.size() == base.collapses.size());
        CHECK(p.degenerate.size() == base.degenerate.size());
    }
}

TEST_CASE("property: degenerate faces at d = 3 are nonpositive only where expected") {
    std::vector<CochainElement> cocycles{gamma2(), triple_linking().element};
    for (const auto& mc : minimal_at(1, 3)) cocycles.push_back(mc.element);
    for (const auto& x : cocycles) {
        auto plan = plan_gluing(x);
        for (const auto& d : plan.degenerate) {
            if (!d.certificate) continue;
            const Diagram& g = plan.spaces[d.face.space].diagram;
            if (d.certificate->bound > 0) continue;
            INFO(to_text(g), " ", to_string(d.face.face.kind));
            auto flagged = anomalous_faces(g);
            CHECK(std::find(flagged.begin(), flagged.end(), d.face.face) != flagged.end());
        }
    }
}

TEST_CASE("property: hidden folds sit at bivalent free vertices") {
    std::vector<CochainElement> cocycles{gamma2()};
    for (const auto& mc : minimal_at(1, 3)) cocycles.push_back(mc.element);
    for (const auto& x : cocycles) {
        auto plan = plan_gluing(x);
        for (const auto& h : plan.hidden_folds) {
            const Diagram& g = plan.spaces[h.face.space].diagram;
            CHECK(h.face.face.kind == FaceKind::hidden);
            CHECK(std::find(g.free.begin(), g.free.end(), h.v) != g.free.end());
            CHECK(h.edge_uv == edge_between(g, h.v, h.u));
            CHECK(h.edge_vw == edge_between(g, h.v, h.w));
            CHECK(h.u != h.w);
            const auto& S = h.face.face.vertices;
            CHECK(std::binary_search(S.begin(), S.end(), h.v));
            CHECK(std::binary_search(S.begin(), S.end(), h.u));
            CHECK(std::binary_search(S.begin(), S.end(), h.w));
            int inside = 0;
            for (const auto& e : g.edges)
                if ((e.lo() == h.v || e.hi() == h.v) && std::binary_search(S.begin(), S.end(), e.lo()) &&
                    std::binary_search(S.begin(), S.end(), e.hi()))
                    ++inside;
            CHECK(inside == 2);
        }
    }
}

TEST_CASE("corner analysis") {
    SUBCASE("pairings of the order-2 cocycle change no corner") {
        auto plan = plan_gluing(gamma2());
        for (int i = 0; i < static_cast<int>(plan.pairings.size()); ++i) {
            auto ca = corner_collapse_analysis(plan, i);
            for (const auto& c : ca.corners) CHECK(c.codim_after == c.codim_before);
        }
    }
    SUBCASE("a double square splits into two triangles") {
        // Pendants from the strand to 5..8; the contracted edge joins 9 and 10.
        std::vector<std::pair<int, int>> common{{1, 5}, {2, 6}, {3, 7}, {4, 8}, {9, 10}, {5, 7}, {6, 8}};
        auto ea = common, eb = common;
        ea.insert(ea.end(), {{9, 5}, {9, 6}, {10, 7}, {10, 8}});
        eb.insert(eb.end(), {{9, 5}, {9, 7}, {10, 6}, {10, 8}});
        Diagram A = make({{1, 2, 3, 4}}, {5, 6, 7, 8, 9, 10}, ea);
        Diagram B = make({{1, 2, 3, 4}}, {5, 6, 7, 8, 9, 10}, eb);
        Element e{Element::Kind::edge, edge_between(A, 9, 10)}, f{Element::Kind::edge, edge_between(B, 9, 10)};
        auto id = identify(A, e, 0, B, f, 0);
        REQUIRE(id);
        auto ca = corner_collapse_analysis(A, e, B, f, *id);
        bool found = false;
        for (const auto& c : ca.corners)
            if (c.side == 0 && c.family == std::vector<std::vector<int>>{{9, 10}, {5, 6, 7, 8, 9, 10}}) {
                found = true;
                CHECK(c.codim_before == 2);
                CHECK(c.codim_after == 3);
            }
        CHECK(found);
        CHECK_FALSE(has_change(ca, 1, 2, 3));
    }
    SUBCASE("double squares on both sides") {
        // 5..10 hang off the strand or each other; 11 and 12 are the contracted pair.
        std::vector<std::pair<int, int>> common{{1, 5}, {2, 8}, {3, 9}, {4, 10}, {11, 12},
                                                {5, 7}, {6, 8}, {9, 6}, {7, 10}};
        auto ea = common, eb = common;
        ea.insert(ea.end(), {{11, 5}, {11, 6}, {11, 9}, {12, 7}, {12, 8}, {12, 10}});
        eb.insert(eb.end(), {{11, 5}, {11, 7}, {11, 9}, {12, 6}, {12, 8}, {12, 10}});
        Diagram A = make({{1, 2, 3, 4}}, {5, 6, 7, 8, 9, 10, 11, 12}, ea);
        Diagram B = make({{1, 2, 3, 4}}, {5, 6, 7, 8, 9, 10, 11, 12}, eb);
        Element e{Element::Kind::edge, edge_between(A, 11, 12)}, f{Element::Kind::edge, edge_between(B, 11, 12)};
        auto id = identify(A, e, 0, B, f, 0);
        REQUIRE(id);
        auto ca = corner_collapse_analysis(A, e, B, f, *id);
        CHECK(has_change(ca, 0, 3, 4));
        CHECK(has_change(ca, 1, 3, 4));
        CHECK(has_change(ca, 0, 2, 3));
        CHECK(has_change(ca, 1, 2, 3));
    }
}
