#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "gcx/gluing.hpp"
#include "gcx/homology.hpp"
#include "gcx/strata.hpp"

namespace gcx {

using json = nlohmann::ordered_json;

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Exact numbers travel as decimal strings; plain JSON integers are accepted on input.
Rational rational_from_json(const json& j);
Integer integer_from_json(const json& j);

json diagram_to_json(const Diagram& d);
// Validates (and renumbers to 1..n) the parsed diagram.
Diagram diagram_from_json(const json& j);

json element_to_json(const CochainElement& x);
CochainElement element_from_json(const json& j);

// Same shape as an element; the terms keep their labels and order.
json cocycle_to_json(const OrientedCocycle& x);
OrientedCocycle cocycle_from_json(const json& j);

struct BasisFile {
    int m = 1, n = 0, k = 0;
    Convention convention = Convention::odd;
    Ring ring = Ring::Z;
    std::vector<Diagram> diagrams;
};

// {"manifest": {m, n, k, convention, ring, count, content_hash}, "diagrams": [...]}
json basis_to_json(const BasisFile& b);
BasisFile basis_from_json(const json& j);
// SHA-256 of the compact dump of the diagram array.
std::string content_hash(const std::vector<Diagram>& diagrams);
std::string sha256_hex(const std::string& bytes);

json matrix_to_json(const SparseMatrix& m);
SparseMatrix matrix_from_json(const json& j);

json grading_to_json(const Grading& g);
json cohomology_to_json(const CohomologyGroup& h);

json contractible_to_json(const Diagram& d, const Element& e);
Element contractible_from_json(const json& j);

// One face: {"kind", "pair"/"vertices", "labels"}.
json face_to_json(const Diagram& d, const FaceDescriptor& f);
FaceDescriptor face_from_json(const json& j);
// {"principal": [{"pair", "labels"}], "hidden": [[ids]], "infinity": [[ids]]}
json face_list_to_json(const Diagram& d, const std::vector<FaceDescriptor>& faces);

json certificate_to_json(const CodimCertificate& c);
CodimCertificate certificate_from_json(const json& j);

json corner_poset_to_json(const Diagram& d, const CornerPoset& p);
json polynomial_to_json(const Polynomial& p);
json dimensions_to_json(const Dimensions& x);

json plan_to_json(const GluingPlan& p);
GluingPlan plan_from_json(const json& j);

json signature_to_json(const SphericalSignature& s);
json corner_analysis_to_json(const CornerAnalysis& a);

}  // namespace gcx
