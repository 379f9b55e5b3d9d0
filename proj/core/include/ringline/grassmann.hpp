#pragma once
// Geometry of the subspace model attached to matrix-ring lines: Grassmann
// spaces with pencil lines, the point/subspace correspondence, annihilators
// under the canonical pairing, Segre products of partial linear spaces,
// strong subspaces with their chain-equivalence classes, and the
// decomposition of product collineations into a factor permutation plus
// component collineations.
//
// All geometric values are immutable once built.  Structural searches whose
// results are implied by the underlying theory (collineation decomposition,
// completeness of chain classes) verify their output exhaustively and throw
// TheoremViolation on any mismatch rather than returning a best effort.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ringline/bitmatrix.hpp"
#include "ringline/gf_linalg.hpp"
#include "ringline/projline.hpp"

namespace ringline {

// ---------------------------------------------------------------------------
// Partial linear spaces
// ---------------------------------------------------------------------------

// A point-line geometry in which two distinct points lie on at most one
// common line and every line carries at least two points.  Canonical form:
// every line is a sorted index vector, the line list is sorted and free of
// duplicates.
struct PartialLinearSpace {
  std::size_t num_points = 0;
  std::vector<std::vector<std::size_t>> lines;
};

using SpacePtr = std::shared_ptr<const PartialLinearSpace>;

// Canonicalizes the line list and validates the axioms; throws
// std::invalid_argument on out-of-range indices, repeated points on a line,
// lines with fewer than two points, or two points joined by two lines.
PartialLinearSpace make_partial_linear_space(
    std::size_t num_points, std::vector<std::vector<std::size_t>> lines);

// Checks the axioms on an already-built structure (also requires canonical
// form); when `why` is non-null it receives a diagnostic on failure.
bool is_partial_linear(const PartialLinearSpace& S, std::string* why = nullptr);

// Index of the unique line through two distinct points, if any.
std::optional<std::size_t> line_through(const PartialLinearSpace& S,
                                        std::size_t p, std::size_t q);

// Indices of all lines through a point.
std::vector<std::size_t> lines_through(const PartialLinearSpace& S, std::size_t p);

// ---------------------------------------------------------------------------
// Grassmann spaces
// ---------------------------------------------------------------------------

// All block_dim-dimensional subspaces of K^(2*block_dim) with pencil lines
// { X : M < X < N } for flags dim M = block_dim-1, dim N = block_dim+1.
// Points are kept in ascending canonical (echelon-basis) order.
class GrassmannSpace {
 public:
  GrassmannSpace(FieldPtr field, unsigned block_dim);

  const FieldPtr& field() const { return field_; }
  unsigned block_dim() const { return n_; }
  unsigned ambient() const { return 2 * n_; }
  std::size_t size() const { return subspaces_.size(); }
  const Subspace& subspace(std::size_t i) const;
  std::size_t index_of(const Subspace& X) const;  // invalid_argument if absent

  bool adjacent(std::size_t i, std::size_t j) const;
  const BitMatrix& adjacency_matrix() const { return adjacency_; }
  unsigned distance(std::size_t i, std::size_t j) const;

  // Sorted indices of the pencil determined by a flag M < N with
  // dim M = block_dim - 1 and dim N = block_dim + 1.
  std::vector<std::size_t> pencil(const Subspace& M, const Subspace& N) const;

  const std::vector<std::vector<std::size_t>>& all_lines() const {
    return space_.lines;
  }
  const PartialLinearSpace& space() const { return space_; }

 private:
  FieldPtr field_;
  unsigned n_;
  std::vector<Subspace> subspaces_;
  BitMatrix adjacency_;
  PartialLinearSpace space_;
};

// ---------------------------------------------------------------------------
// Subspace relations and duality
// ---------------------------------------------------------------------------

unsigned dim_intersection(const Subspace& P, const Subspace& Q);
bool adjacent_subspaces(const Subspace& P, const Subspace& Q);

// dim P - dim(P cap Q); equals the path distance in the adjacency graph.
unsigned grassmann_distance(const Subspace& P, const Subspace& Q);

// All linear forms vanishing on X, written in the coordinates of the
// canonical pairing <(v,w),(v^,w^)> = v.v^ + w.w^ on K^(2n); the double
// annihilator returns X itself under this identification.
Subspace annihilator(const Subspace& X);

// ---------------------------------------------------------------------------
// The point/subspace correspondence
// ---------------------------------------------------------------------------

// Row space of the block matrix [A | B] for a point R(A, B) of a line over a
// matrix ring (or a field, treated as 1x1 matrices).  Throws
// std::invalid_argument for other ring families.
Subspace psi(const ProjPoint& p);

// The unique point mapped to X; requires dim X = block_dim of the ring.
ProjPoint psi_inverse(const FiniteRing& R, const Subspace& X);

// ---------------------------------------------------------------------------
// Segre products
// ---------------------------------------------------------------------------

// Point set = cartesian product of the factor point sets (component 0 is the
// least significant digit of the point index); lines vary in exactly one
// component.  Throws std::invalid_argument on an empty factor list.
PartialLinearSpace segre_product(const std::vector<PartialLinearSpace>& factors);

std::size_t product_point_join(std::span<const std::size_t> sizes,
                               std::span<const std::size_t> comps);
std::vector<std::size_t> product_point_split(std::span<const std::size_t> sizes,
                                             std::size_t point);

// A Segre product of Grassmann spaces with index bookkeeping.
class SegreGrassmann {
 public:
  explicit SegreGrassmann(std::vector<std::shared_ptr<const GrassmannSpace>> factors);

  const std::vector<std::shared_ptr<const GrassmannSpace>>& factors() const {
    return factors_;
  }
  const PartialLinearSpace& space() const { return space_; }
  std::size_t size() const { return space_.num_points; }

  std::size_t join(std::span<const std::size_t> comps) const;
  std::vector<std::size_t> split(std::size_t point) const;

 private:
  std::vector<std::shared_ptr<const GrassmannSpace>> factors_;
  std::vector<std::size_t> sizes_;
  PartialLinearSpace space_;
};

// Image of a point of a line over a product of matrix rings / fields in the
// Segre product of the component Grassmann spaces, componentwise.  Validates
// that the factor list matches the ring structure.
std::size_t product_psi(const ProjectiveLine& L, std::size_t point,
                        const SegreGrassmann& G);

// ---------------------------------------------------------------------------
// Strong subspaces
// ---------------------------------------------------------------------------

// Size caps, in points, for the closure searches below.
inline constexpr std::size_t kStrongSubspaceCap = 200;
inline constexpr std::size_t kStrongAnalysisCap = 1500;

// Exhaustive catalogue of the strong subspaces (sets of mutually collinear
// points closed under lines) with at least two points, together with the
// equivalence classes of the chain relation: two strong subspaces are
// equivalent when a finite sequence of strong subspaces joins them in which
// consecutive members share at least two points.
class StrongStructure {
 public:
  std::size_t num_points() const { return num_points_; }
  const std::vector<std::vector<std::size_t>>& subspaces() const {
    return subspaces_;
  }
  std::size_t component_of(std::size_t subspace_index) const;
  std::size_t num_components() const { return num_components_; }

  // Maximal strong subspaces (including isolated points as singletons).
  std::vector<std::vector<std::size_t>> maximal() const;

  // Number of chain classes met by the strong subspaces that contain the
  // given point and at least one more point.
  std::size_t approx_classes_at(std::size_t point) const;

  // True when, from every strong subspace with more than one point, a chain
  // reaches every point of the space.
  bool strongly_connected() const;

 private:
  friend StrongStructure analyze_strong_structure(const PartialLinearSpace&,
                                                  std::size_t);
  std::size_t num_points_ = 0;
  std::size_t words_ = 0;
  std::vector<std::vector<std::size_t>> subspaces_;
  std::vector<std::uint64_t> masks_;  // words_ per subspace
  std::vector<std::size_t> component_;
  std::size_t num_components_ = 0;
  std::vector<std::size_t> isolated_points_;
};

StrongStructure analyze_strong_structure(const PartialLinearSpace& S,
                                         std::size_t cap = kStrongAnalysisCap);

// Inclusion-maximal strong subspaces of a desk-scale space; throws
// CapExceeded above kStrongSubspaceCap points.
std::vector<std::vector<std::size_t>> strong_subspaces(const PartialLinearSpace& S);

std::size_t approx_classes_at(const PartialLinearSpace& S, std::size_t point);

bool is_strongly_connected(const PartialLinearSpace& S);

// ---------------------------------------------------------------------------
// Collineations of Segre products
// ---------------------------------------------------------------------------

struct Collineation {
  SpacePtr source;
  SpacePtr target;
  std::vector<std::size_t> table;  // point index -> point index
};

// Bijective and carries lines onto lines in both directions.
bool is_collineation(const Collineation& f, std::string* why = nullptr);

Collineation identity_collineation(SpacePtr S);

// Applies f first, then g; requires matching middle spaces.
Collineation compose_collineations(const Collineation& f, const Collineation& g);

struct ProductCollineationParts {
  std::vector<std::size_t> sigma;       // source factor k feeds target factor sigma[k]
  std::vector<Collineation> components;  // components[k]: factor k -> factor sigma[k]
};

// Builds the product collineation (f(c))_{sigma[k]} = components[k](c_k).
Collineation compose_product_collineation(
    const ProductCollineationParts& parts,
    const std::vector<SpacePtr>& source_factors,
    const std::vector<SpacePtr>& target_factors);

// Recovers the factor permutation and the component collineations of a
// collineation between Segre products of strongly connected factors, each
// with at least one line.  Hypothesis failures throw std::invalid_argument;
// an unrecoverable decomposition throws TheoremViolation.
ProductCollineationParts decompose_product_collineation(
    const Collineation& f, const std::vector<SpacePtr>& source_factors,
    const std::vector<SpacePtr>& target_factors);

}  // namespace ringline
