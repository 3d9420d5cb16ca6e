// Acceptance checks: one PASS/FAIL line per criterion. Exit status is the number of failures.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "gcx/canonical.hpp"
#include "gcx/gluing.hpp"
#include "oracles.hpp"

using namespace gcx;
using oracle::make;

namespace {

// Runtime budgets in seconds.
constexpr double budget_complex = 60;
constexpr double budget_seconds = 30;
constexpr double budget_order3 = 300;
constexpr double budget_subsecond = 1;
constexpr double budget_stretch = 6 * 3600;

// Support size the order-3 long-knot cocycle is expected to have.
constexpr std::size_t expected_order3_support = 6;
constexpr int snf_trials = 200;
constexpr int snf_max_dim = 40;
constexpr int block_trials = 200;
constexpr int block_max_vertices = 10;

struct Outcome {
    bool pass = true;
    std::string detail;
};

Diagram tripod() { return make({{1, 2, 3}}, {4}, {{1, 4}, {2, 4}, {3, 4}}); }

CochainElement gamma2() {
    CochainElement g(Ring::Z, Convention::odd);
    g.add(make({{1, 2, 3, 4}}, {}, {{1, 3}, {2, 4}}), 1);
    g.add(tripod(), -1);
    return g;
}

const MinimalCocycle& triple_linking() {
    static const MinimalCocycle tl = [] {
        Diagram T =
            std::get<SignedDiagram>(canonicalize(make({{1}, {2}, {3}}, {4}, {{1, 4}, {2, 4}, {3, 4}}))).diagram;
        for (auto& mc : minimal_decomposition(cocycle_space(3, 2, 0, Convention::odd, Ring::Z)))
            if (mc.element.coefficient(T) != 0) return mc;
        throw std::logic_error("no minimal cocycle contains the three-strand tripod");
    }();
    return tl;
}

const MinimalCocycle& order3() {
    static const MinimalCocycle mc = [] {
        auto mins = minimal_decomposition(cocycle_space(1, 3, 0, Convention::odd, Ring::Z));
        if (mins.size() != 1) throw std::logic_error("expected one minimal cocycle at order 3");
        return mins.front();
    }();
    return mc;
}

// Classes of long-knot diagrams under cyclic rotation of the strand, i.e. closed-knot graphs.
std::size_t rotation_classes(const std::vector<Diagram>& support) {
    std::set<Diagram> classes;
    for (const auto& d : support) {
        std::optional<Diagram> best;
        const auto& s = d.strands.front();
        for (std::size_t r = 0; r < s.size(); ++r) {
            Diagram rot = d;
            std::rotate(rot.strands.front().begin(), rot.strands.front().begin() + r, rot.strands.front().end());
            auto c = canonicalize(validate(rot), Ring::Z2);
            const Diagram& cd = std::get<SignedDiagram>(c).diagram;
            if (!best || cd < *best) best = cd;
        }
        classes.insert(best.value_or(d));
    }
    return classes.size();
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

Polynomial complete_graph_poincare(int n, int dim) {
    Polynomial p{1};
    const int step = dim - 1;
    for (int k = 2; k <= n; ++k) {
        Polynomial q(p.size() + step, 0);
        for (std::size_t i = 0; i < p.size(); ++i) {
            q[i] += p[i];
            q[i + step] += p[i] * (k - 1);
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

GraphView complete(int n) {
    GraphView g;
    for (int i = 1; i <= n; ++i) g.vertices.push_back(i);
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) g.edges.push_back({i, j});
    return g;
}

// ---- criteria ------------------------------------------------------------------------

Outcome c1_d_squared() {
    std::vector<std::pair<int, int>> grades{{1, 1}, {1, 2}, {1, 3}, {3, 2}};
    long long checked = 0, bad = 0;
    for (auto conv : {Convention::odd, Convention::even})
        for (auto ring : {Ring::Z, Ring::Z2})
            for (auto [m, n] : grades)
                for (int k = 0; k <= 2 * n + 1; ++k)
                    for (const auto& d : generate_basis(m, n, k, conv, ring)) {
                        ++checked;
                        if (!coboundary(coboundary(d, ring)).empty()) ++bad;
                    }
    return {bad == 0 && checked > 0,
            std::to_string(checked) + " basis elements, " + std::to_string(bad) + " with d(d(x)) != 0"};
}

Outcome c2_order2() {
    bool closed = coboundary(gamma2()).empty();
    auto q = cocycle_space(1, 2, 0, Convention::odd, Ring::Q);
    auto basis = generate_basis(1, 2, 0, Convention::odd, Ring::Z);
    std::ostringstream os;
    os << "d(gamma2) " << (closed ? "= 0" : "!= 0") << ", Q cocycle dimension " << q.size() << ", basis size "
       << basis.size();
    return {closed && q.size() == 1 && basis.size() == 4, os.str()};
}

Outcome c3_triple_linking() {
    const auto& tl = triple_linking();
    bool closed = coboundary(tl.element).empty();
    auto plan = plan_gluing(tl.element);
    int tspace = -1;
    for (std::size_t i = 0; i < plan.spaces.size(); ++i)
        if (!plan.spaces[i].diagram.is_chord_diagram()) tspace = static_cast<int>(i);
    std::set<int> partners;
    std::set<int> t_edges;
    bool shape = tspace >= 0 && plan.pairings.size() == 3;
    for (const auto& p : plan.pairings) {
        const FaceRef& t = p.a.space == tspace ? p.a : p.b;
        const FaceRef& o = p.a.space == tspace ? p.b : p.a;
        shape = shape && t.space == tspace && o.space != tspace &&
                t.face.labels.front().kind == Element::Kind::edge &&
                o.face.labels.front().kind == Element::Kind::arc;
        t_edges.insert(t.face.labels.front().index);
        partners.insert(o.space);
    }
    shape = shape && partners.size() == 3 && t_edges.size() == 3;
    std::ostringstream os;
    os << "support " << tl.support.size() << ", cocycle " << (closed ? "yes" : "no") << ", pairings "
       << plan.pairings.size() << " to " << partners.size() << " chord diagrams, hidden folds "
       << plan.hidden_folds.size() << ", verification " << (plan.verification.pass ? "pass" : "fail");
    return {closed && tl.support.size() == 4 && shape && plan.hidden_folds.empty() && plan.verification.pass,
            os.str()};
}

Outcome c4_order3_support() {
    const auto& mc = order3();
    std::ostringstream os;
    os << "support " << mc.support.size() << " (expected " << expected_order3_support
       << "); classes under strand rotation: " << rotation_classes(mc.support);
    return {mc.support.size() == expected_order3_support, os.str()};
}

Outcome c5_plan_order2() {
    auto plan = plan_gluing(gamma2());
    int c1 = 0;
    for (const auto& c : plan.collapses) c1 += c.kind == CollapseKind::c1;
    int flipped = 0;
    for (std::size_t i = 0; i < plan.pairings.size(); ++i) {
        auto bad = plan;
        auto& f = bad.pairings[i].id.flips;
        if (f.empty() || f.front() != 0) f.insert(f.begin(), 0);
        else f.erase(f.begin());
        flipped += !verify_fundamental_cycle(bad).pass;
    }
    std::ostringstream os;
    os << plan.pairings.size() << " pairings, " << plan.hidden_folds.size() << " hidden folds, " << c1
       << " c1 collapses, verification " << (plan.verification.pass ? "pass" : "fail") << ", " << flipped << "/"
       << plan.pairings.size() << " corruptions detected";
    return {plan.pairings.size() == 3 && plan.hidden_folds.size() == 2 && c1 == 2 && plan.verification.pass &&
                flipped == static_cast<int>(plan.pairings.size()),
            os.str()};
}

Outcome c6_certificates() {
    std::vector<CochainElement> cocycles{gamma2(), triple_linking().element, order3().element};
    int checked = 0, nonpositive_high = 0, unflagged_low = 0, flagged_low = 0;
    for (const auto& x : cocycles) {
        auto plan = plan_gluing(x);
        for (const auto& d : plan.degenerate) {
            if (!d.certificate) continue;
            const Diagram& g = plan.spaces[d.face.space].diagram;
            ++checked;
            for (int dim : {4, 5, 7})
                if (codim_certificate(d.face.face, dim, g).bound <= 0) ++nonpositive_high;
            if (codim_certificate(d.face.face, 3, g).bound > 0) continue;
            auto flagged = anomalous_faces(g);
            (std::find(flagged.begin(), flagged.end(), d.face.face) != flagged.end() ? flagged_low : unflagged_low)++;
        }
    }
    std::ostringstream os;
    os << checked << " degenerate faces; nonpositive at d=4,5,7: " << nonpositive_high
       << "; nonpositive at d=3: " << flagged_low << " flagged, " << unflagged_low << " unflagged";
    return {checked > 0 && nonpositive_high == 0 && unflagged_low == 0, os.str()};
}

Outcome c7_snf() {
    std::mt19937 rng(2024);
    std::uniform_int_distribution<int> dim(1, snf_max_dim);
    std::uniform_real_distribution<double> dens(0.05, 0.9);
    int bad = 0;
    for (int t = 0; t < snf_trials; ++t) {
        IntMatrix A = oracle::random_matrix(rng, dim(rng), dim(rng), 9, dens(rng));
        auto s = smith_normal_form(A);
        bool ok = product(product(s.U, s.D), s.V) == A && s.rank == oracle::bareiss_rank(A);
        auto inv = s.invariants();
        for (std::size_t i = 0; i + 1 < inv.size(); ++i) ok = ok && inv[i + 1] % inv[i] == 0;
        for (Eigen::Index i = 0; i < s.D.rows(); ++i)
            for (Eigen::Index j = 0; j < s.D.cols(); ++j)
                if (i != j || i >= s.rank) ok = ok && s.D(i, j) == 0;
        bad += !ok;
    }
    return {bad == 0, std::to_string(snf_trials) + " matrices, " + std::to_string(bad) + " failures"};
}

Outcome c8_dimensions() {
    std::vector<CochainElement> cocycles{gamma2(), triple_linking().element, order3().element};
    int checked = 0, bad = 0;
    for (const auto& x : cocycles) {
        int N = 0;
        for (const auto& [d, c] : x.terms()) N = std::max(N, d.edge_count());
        for (int dim : {3, 4, 5, 7}) {
            int whole = dimensions(x, dim).fiber_dim;
            for (const auto& [d, c] : x.terms()) {
                auto g = grading(d);
                int q = d.segment_count(), t = d.free_count(), E = d.edge_count();
                int formula = (3 - dim) * g.order - g.defect + N * (dim - 1);
                int counted = q + dim * t + (dim - 1) * (N - E);
                ++checked;
                if (formula != counted || counted != fiber_dim_by_count(d, N, dim) || whole != formula) ++bad;
            }
        }
    }
    return {checked > 0 && bad == 0, std::to_string(checked) + " (diagram, d) cases, " + std::to_string(bad) +
                                         " mismatches"};
}

Outcome c9_poincare() {
    int bad = 0, orders = 0;
    for (int n = 1; n <= 6; ++n)
        for (int dim : {3, 4, 5, 7}) {
            std::vector<int> order(n);
            std::iota(order.begin(), order.end(), 1);
            Polynomial want = complete_graph_poincare(n, dim);
            do {
                ++orders;
                if (trimmed(poincare_polynomial(complete(n), dim, order)) != want) ++bad;
            } while (std::next_permutation(order.begin(), order.end()));
        }
    GraphView square{{1, 2, 3, 4}, {{1, 2}, {2, 3}, {3, 4}, {4, 1}}};
    std::vector<int> order{1, 2, 3, 4};
    int accepted = 0;
    do {
        try {
            poincare_polynomial(square, 3, order);
            ++accepted;
        } catch (const OrderingError&) {
        }
    } while (std::next_permutation(order.begin(), order.end()));
    std::ostringstream os;
    os << orders << " complete-graph orderings, " << bad << " mismatches; 4-cycle accepted by " << accepted
       << " of 24 orderings";
    return {bad == 0 && accepted == 0, os.str()};
}

Outcome c10_blocks() {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dens(0.1, 0.7);
    int bad = 0;
    for (int t = 0; t < block_trials; ++t) {
        GraphView g = oracle::random_graph(rng, block_max_vertices, dens(rng));
        auto b = blocks_and_tree(g);
        auto brute = oracle::brute_blocks(g);
        auto blocks = b.blocks;
        std::sort(blocks.begin(), blocks.end());
        std::size_t total = 0;
        for (const auto& bl : b.blocks) total += bl.size();
        bool ok = blocks == brute.blocks && b.cut_vertices == brute.cut_vertices && b.counting_identity_holds &&
                  total == g.vertices.size() + b.tree_edges.size() - b.cut_vertices.size();
        bad += !ok;
    }
    GraphView two{{1, 2, 3, 4, 5}, {{1, 2}, {2, 3}, {1, 3}, {3, 4}, {4, 5}, {3, 5}}};
    auto b = blocks_and_tree(two);
    bool regression = b.counting_identity_holds && !b.literal_identity_holds;
    std::ostringstream os;
    os << block_trials << " random graphs, " << bad << " mismatches; two triangles: literal "
       << (b.literal_identity_holds ? "holds" : "fails") << ", corrected "
       << (b.counting_identity_holds ? "holds" : "fails");
    return {bad == 0 && regression, os.str()};
}

#ifdef GCX_STRETCH
// The partial expression is the chord part of a Z/2 cocycle outside the reduction of the
// integral lattice.
// TODO: bit-packed GF(2) elimination; the dense defect 0 -> 1 matrix here is 142486 x 39458.
Outcome c11_mod2_order5() {
    const int m = 2, n = 5, k = 0;
    auto basis2 = generate_basis(m, n, k, Convention::odd, Ring::Z2);
    auto z2 = cocycle_space(m, n, k, Convention::odd, Ring::Z2);
    auto zz = cocycle_space(m, n, k, Convention::odd, Ring::Z);
    const auto rows = static_cast<Eigen::Index>(basis2.size());
    auto column_matrix = [&](const std::vector<CochainElement>& xs, std::size_t extra) {
        Matrix<Mod2> M = Matrix<Mod2>::Zero(rows, static_cast<Eigen::Index>(xs.size() + extra));
        for (std::size_t j = 0; j < xs.size(); ++j) {
            auto v = coordinates(xs[j], basis2);
            for (Eigen::Index i = 0; i < rows; ++i) M(i, j) = Mod2(numerator(v[i]));
        }
        return M;
    };
    int reduced = rank(column_matrix(zz, 0));
    const CochainElement* outside = nullptr;
    for (const auto& x : z2) {
        auto M = column_matrix(zz, 1);
        auto v = coordinates(x, basis2);
        for (Eigen::Index i = 0; i < rows; ++i) M(i, M.cols() - 1) = Mod2(numerator(v[i]));
        if (rank(M) > reduced) {
            outside = &x;
            break;
        }
    }
    bool extended = false;
    std::size_t chords = 0;
    if (outside) {
        std::vector<LabeledTerm> partial;
        for (const auto& [d, c] : outside->terms())
            if (d.is_chord_diagram()) partial.push_back({d, c});
        chords = partial.size();
        auto ext = extend_to_cocycle(partial, m, n, k, Convention::odd, Ring::Z2);
        extended = ext && coboundary(*ext).empty();
    }
    std::ostringstream os;
    os << "Z/2 cocycle dimension " << z2.size() << ", reduction rank " << reduced << ", extension from " << chords
       << " chord terms " << (extended ? "found" : "missing");
    return {static_cast<int>(z2.size()) > reduced && extended, os.str()};
}
#endif

}  // namespace

int main() {
    struct Criterion {
        int number;
        const char* title;
        double budget;
        std::function<Outcome()> run;
    };
    std::vector<Criterion> criteria{
        {1, "d of d vanishes on every basis element", budget_complex, c1_d_squared},
        {2, "order-2 cocycle, 1-dimensional cocycle space, 4 basis diagrams", budget_seconds, c2_order2},
        {3, "triple linking cocycle and its gluing plan", budget_seconds, c3_triple_linking},
        {4, "order-3 minimal cocycle has support 6", budget_order3, c4_order3_support},
        {5, "order-2 gluing plan and flip-parity corruption", budget_seconds, c5_plan_order2},
        {6, "codimension certificates", budget_seconds, c6_certificates},
        {7, "Smith normal form on random matrices", budget_complex, c7_snf},
        {8, "dimension identity", budget_subsecond, c8_dimensions},
        {9, "Poincare polynomials of complete graphs", budget_subsecond, c9_poincare},
        {10, "block-cut counting identity", budget_seconds, c10_blocks},
#ifdef GCX_STRETCH
        {11, "order-5 mod-2 cocycle outside the integral reduction", budget_stretch, c11_mod2_order5},
#endif
    };
    int failures = 0;
    for (const auto& c : criteria) {
        auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool in_time = secs <= c.budget;
        bool pass = o.pass && in_time;
        failures += !pass;
        std::printf("criterion %2d: %s  %s [%.2fs of %.0fs%s] %s\n", c.number, pass ? "PASS" : "FAIL", c.title, secs,
                    c.budget, in_time ? "" : ", over budget", o.detail.c_str());
        std::fflush(stdout);
    }
#ifndef GCX_STRETCH
    std::printf("criterion 11: SKIP  order-5 mod-2 item (configure with -DGCX_STRETCH=ON)\n");
#endif
    return failures;
}
