#pragma once

// Textual and machine-readable renderings: element literals in constructor
// syntax, the "R(a, b)" point syntax, graph exports (DOT and JSON), and JSON
// documents for rings, lines, subspaces, point spaces, point maps, and
// certificates.
//
// Every top-level JSON document carries a "format": 1 version field.  All
// emitters follow the canonical orderings of the underlying values (point
// indices ascending, edges as sorted [i, j] pairs with i < j), so output is
// byte-stable for a given input.  Map files are JSON arrays of target point
// indices listed in the source line's canonical point order.

#include <cstddef>
#include <string>
#include <vector>

#include "ringline/grassmann.hpp"
#include "ringline/morphisms.hpp"
#include "ringline/projline.hpp"
#include "ringline/ring.hpp"

namespace ringline {

inline constexpr int kSerializationFormat = 1;

// --- textual element / point syntax ------------------------------------

// "3" (residues, field elements by encoding for prime fields), polynomial
// form "x+1" for proper field extensions, "[[1,0],[1,1]]" (matrices),
// "1+e" (dual numbers), "(1, [[0,1],[1,0]])" (products).
std::string element_literal(const FiniteRing& R, Elem a);

/// "R(a, b)" with element literals for the canonical representative.
std::string point_literal(const ProjPoint& p);

// --- JSON documents ------------------------------------------------------

/// Ring description object {order, structure_tag, modulus_poly?, factors?}
/// (no format field; it embeds into other documents).
std::string ring_metadata_json(const FiniteRing& R);

/// {"format": 1, "ring": {...}}
std::string ring_to_json(const FiniteRing& R);

/// {"format": 1, "ring": {...}, "points": [{"rep_a", "rep_b"}...],
///  "distant_edges": [[i,j]...], "parallel_classes": [[i,...]...],
///  "adjacency_edges": [[i,j]...]}
std::string line_to_json(const ProjectiveLine& L);

enum class GraphRelation { Distant, Adjacency };

std::string to_string(GraphRelation which);

/// Undirected DOT graph; vertices p<i> labeled with the point literal.
std::string graph_to_dot(const ProjectiveLine& L, GraphRelation which);

/// {"format": 1, "ring": {...}, "relation": ..., "points": [...],
///  "edges": [[i,j]...]}
std::string graph_to_json(const ProjectiveLine& L, GraphRelation which);

/// {"q", "ambient_dim", "basis": row-major integer matrix}
std::string subspace_to_json(const Subspace& X);

/// {"points": n, "lines": [[indices]...]} (embeddable, no format field).
std::string space_to_json(const PartialLinearSpace& S);

/// {"format": 1, "source", "target", "provenance", "table": [...]} --
/// the function array over canonical point indices.
std::string point_map_to_json(const PointMap& f);

/// {"format": 1, "source", "target", "kind", "table": [...]}
std::string ring_map_to_json(const RingMapTable& f);

/// {"format": 1, "kind", "alpha": {...}, "gamma": [[a,b],[c,d]],
///  "sigma": [...], "components": [...]} -- alpha as an element table,
/// gamma as a 2x2 element matrix, sigma as an integer array.
std::string certificate_to_json(const DecompositionCertificate& cert);

/// {"format": 1, "sigma": [...], "components": [point map...]}
std::string product_decomposition_to_json(const ProductDecomposition& dec);

/// {"format": 1, "kind", "beta": {...}, "g", "g_literal", "sigma",
///  "component_kinds"}; `target` is the ring that g lives in.
std::string jordan_certificate_to_json(const JordanCertificate& cert,
                                       const FiniteRing& target);

// --- map files ------------------------------------------------------------

/// Parses a map file (a JSON array of non-negative integers); malformed
/// input throws std::invalid_argument with a "invalid map file" message.
std::vector<std::size_t> parse_index_array_json(const std::string& text);

/// Renders a map file.
std::string index_array_to_json(const std::vector<std::size_t>& table);

}  // namespace ringline
