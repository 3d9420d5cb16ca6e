#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gcx/complex.hpp"
#include "gcx/linalg.hpp"

namespace gcx {

struct CohomologyGroup {
    int free_rank = 0;
    std::vector<Integer> torsion;  // invariant factors > 1, each dividing the next
};

struct MinimalCocycle {
    CochainElement element;
    std::vector<Diagram> support;  // canonical diagrams, sorted
};

// Coboundary matrices are built with `policy`; everything else follows the ring.
std::vector<CochainElement> cocycle_space(int m, int n, int k, Convention convention, Ring ring,
                                          const BasisOptions& opt = {},
                                          CombinedFace policy = CombinedFace::single);

CohomologyGroup cohomology_group(int m, int n, int k, Convention convention, const BasisOptions& opt = {},
                                 CombinedFace policy = CombinedFace::single);

struct DecompositionOptions {
    // Cap on the number of kernel sub-systems examined while listing minimal supports.
    long long max_subsets = 2'000'000;
    CombinedFace policy = CombinedFace::single;
};

std::vector<MinimalCocycle> minimal_decomposition(const std::vector<CochainElement>& space,
                                                  const DecompositionOptions& opt = {});

// True when x is a nonzero cocycle and no cocycle has support strictly inside supp(x).
bool is_support_minimal(const CochainElement& x, CombinedFace policy = CombinedFace::single);

// A labeled diagram with the coefficient that multiplies it.
struct LabeledTerm {
    Diagram diagram;
    Rational coefficient;
};

struct OrientedCocycle {
    Ring ring = Ring::Z;
    Convention convention = Convention::odd;
    std::vector<LabeledTerm> terms;  // one per support diagram, in support order

    CochainElement element() const;
};

// One nonvanishing face Gamma_i/e of a labeled expression.
struct FaceRecord {
    int term = 0;
    Element element;
    int epsilon = 1;
    LabeledContraction quotient;
    Diagram class_diagram;  // canonical form of the quotient
};

// Faces of each term whose quotient has no multiple edge and no orientation-reversing
// automorphism (the faces that take part in consistency).
std::vector<FaceRecord> consistency_faces(const OrientedCocycle& x, CombinedFace policy = CombinedFace::single);

struct ConsistencyReport {
    bool consistent = true;
    int pairs_checked = 0;
    std::vector<std::string> problems;
};

// Definitional check: for matching quotients, eps(e) * G_i/e and eps(f) * G_j/f are the same
// oriented diagram.
ConsistencyReport check_consistency(const OrientedCocycle& x, CombinedFace policy = CombinedFace::single);

class OrientationConflict : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Seeds at the canonically least term, keeps its orientation, and propagates through the
// shared contraction classes. Representatives keep their input labels; a term whose
// orientation must change is reversed and its coefficient negated.
OrientedCocycle consistent_orientation(const OrientedCocycle& expr, CombinedFace policy = CombinedFace::single);
OrientedCocycle consistent_orientation(const MinimalCocycle& gamma, CombinedFace policy = CombinedFace::single);

// Cocycle agreeing with `partial` on its keys (arbitrary labeled diagrams), or nullopt.
std::optional<CochainElement> extend_to_cocycle(const std::vector<LabeledTerm>& partial, int m, int n, int k,
                                                Convention convention, Ring ring, const BasisOptions& opt = {},
                                                CombinedFace policy = CombinedFace::single);

}  // namespace gcx
