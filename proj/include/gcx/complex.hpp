#pragma once

#include <map>
#include <tuple>
#include <vector>

#include "gcx/canonical.hpp"
#include "gcx/diagram.hpp"
#include "gcx/scalar.hpp"

namespace gcx {

struct Grading {
    int order = 0;
    int defect = 0;
    auto operator<=>(const Grading&) const = default;
};

Grading grading(const Diagram& d);

// How d treats a pair joined by both an arc and a chord.
//   single: the pair is one face and contributes once, through the arc;
//   both:   the arc and the chord each contribute a summand.
enum class CombinedFace { single, both };

// A formal combination of canonical diagrams with nonzero coefficients.
class CochainElement {
public:
    CochainElement() = default;
    CochainElement(Ring ring, Convention convention) : ring_(ring), convention_(convention) {}

    Ring ring() const { return ring_; }
    Convention convention() const { return convention_; }
    const std::map<Diagram, Rational>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    // Adds c times an arbitrary labeled diagram, canonicalizing it first.
    void add(const Diagram& d, const Rational& c);
    // Adds c times a diagram already known to be canonical.
    void add_canonical(const Diagram& d, const Rational& c);
    Rational coefficient(const Diagram& canonical) const;

    CochainElement& operator+=(const CochainElement& o);
    CochainElement operator*(const Rational& c) const;
    bool operator==(const CochainElement& o) const {
        return ring_ == o.ring_ && terms_ == o.terms_;
    }

private:
    Ring ring_ = Ring::Z;
    Convention convention_ = Convention::odd;
    std::map<Diagram, Rational> terms_;
};

struct BasisOptions {
    int max_vertices = 12;
};

class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::vector<Diagram> generate_basis(int m, int n, int k, Convention convention, Ring ring,
                                    const BasisOptions& opt = {});

// Sum over arcs and non-loop edges of eps(e) * G/e; vanishing contractions drop out.
CochainElement coboundary(const CochainElement& x, CombinedFace policy = CombinedFace::single);
CochainElement coboundary(const Diagram& d, Ring ring, CombinedFace policy = CombinedFace::single);

// Worker threads used for matrix assembly and plan building (default 1).
void set_jobs(int jobs);
int jobs();

// Sparse exact matrix; entries (row, col, value) sorted, no zeros.
struct SparseMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<std::tuple<int, int, Integer>> entries;

    IntMatrix dense() const;
};

SparseMatrix coboundary_matrix(const std::vector<Diagram>& source, const std::vector<Diagram>& target,
                               Ring ring, CombinedFace policy = CombinedFace::single);
SparseMatrix coboundary_matrix(int m, int n, int k, Convention convention, Ring ring,
                               CombinedFace policy = CombinedFace::single);

// Coordinates of an element in a basis (throws if a term is outside the basis).
std::vector<Rational> coordinates(const CochainElement& x, const std::vector<Diagram>& basis);
CochainElement from_coordinates(const std::vector<Rational>& v, const std::vector<Diagram>& basis,
                                Ring ring, Convention convention);

}  // namespace gcx
