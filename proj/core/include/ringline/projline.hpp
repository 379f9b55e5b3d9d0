#pragma once

// The projective line over a finite ring R: points are unit orbits of
// admissible pairs (rows of invertible 2x2 matrices), with the distant,
// parallel, and adjacent relations, the canonical projection onto the line
// over R/rad R, and the componentwise identification for product rings.
//
// A line is immutable once enumerated.  Relation caches (distant matrix,
// parallel partition, adjacency matrix, quotient data, parametrization
// witnesses) are built at most once behind std::call_once and are safe for
// concurrent readers.
//
// Internal consistency policy: admissibility uses the unimodularity test
// (ax + by = 1 solvable) as a fast path and then constructs an explicit
// completion; parallelism is computed both from neighborhood inclusion and
// from the quotient projection.  Any disagreement between a fast path and
// its ground truth throws TheoremViolation instead of picking a side.

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ringline/bitmatrix.hpp"
#include "ringline/gf_linalg.hpp"
#include "ringline/ring.hpp"

namespace ringline {

struct ProjPoint {
  FiniteRing ring;
  Elem a = 0, b = 0;  // canonical representative: lex-least member of the unit orbit
  Elem c = 0, d = 0;  // completion witness: [[a,b],[c,d]] is invertible

  bool same_point(const ProjPoint& o) const {
    return ring.same_ring(o.ring) && a == o.a && b == o.b;
  }
};

/// True iff ax + by = 1 has a solution.
bool is_unimodular(const FiniteRing& R, Elem a, Elem b);

/// Searches for (c,d) making [[a,b],[c,d]] invertible.  Product rings are
/// completed componentwise and matrix rings by basis extension; otherwise a
/// few standard candidates are tried before the full scan.
std::optional<std::pair<Elem, Elem>> find_completion(const FiniteRing& R, Elem a, Elem b);

/// True iff (a,b) is the first row of some invertible 2x2 matrix.  On a
/// positive unimodularity test the completion is actually constructed; a
/// construction failure throws TheoremViolation.
bool is_admissible(const FiniteRing& R, Elem a, Elem b);

/// Canonical point through (a,b); throws std::invalid_argument when the pair
/// is not admissible.
ProjPoint point_of(const FiniteRing& R, Elem a, Elem b);

/// The stacked matrix of the two representatives is invertible.  Requires
/// points of the same ring.
bool distant(const ProjPoint& p, const ProjPoint& q);

struct Graph {
  std::size_t n = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // i < j, sorted
  std::vector<std::vector<std::size_t>> adj;                // sorted neighbor lists
};

class ProjectiveLine;
using LinePtr = std::shared_ptr<const ProjectiveLine>;

class ProjectiveLine {
public:
  /// Materializes the whole line.  Guarded at ring order 1024 (the scan is
  /// quadratic in the order with a linear inner test).
  static LinePtr enumerate_points(const FiniteRing& R);

  const FiniteRing& ring() const { return R_; }
  std::size_t size() const { return points_.size(); }
  const std::vector<ProjPoint>& points() const { return points_; }
  const ProjPoint& point(std::size_t i) const { return points_[i]; }

  /// Index of the point through an admissible pair (any orbit member).
  std::size_t index_of(Elem a, Elem b) const;
  std::optional<std::size_t> try_index_of(Elem a, Elem b) const;

  // -- distant --
  bool distant(std::size_t i, std::size_t j) const;
  std::vector<std::size_t> distant_neighborhood(std::size_t i) const;
  const BitMatrix& distant_matrix() const;

  // -- parallel (both routes computed; disagreement = TheoremViolation) --
  bool parallel(std::size_t i, std::size_t j) const;
  const std::vector<std::vector<std::size_t>>& parallel_classes() const;
  std::size_t parallel_class_of(std::size_t i) const;

  // -- adjacent --
  /// r is non-parallel to both p and q, and the neighborhood of r is
  /// contained in the union of theirs.
  bool adjacent_via(std::size_t i, std::size_t j, std::size_t r) const;
  bool adjacent(std::size_t i, std::size_t j) const;
  /// Cached matrix; uses the subspace-intersection shortcut when the ring is
  /// a matrix ring over a field (or a field), else the definitional search.
  const BitMatrix& adjacency_matrix() const;
  /// Always the definitional exists-r search; recomputed on every call.
  BitMatrix adjacency_matrix_definitional() const;

  // -- quotient line over R/rad R --
  const FiniteRing& quotient_ring() const;
  const RingMapTable& quotient_projection() const;
  LinePtr quotient_line() const;
  /// Index (in quotient_line()) of the image under entrywise projection.
  std::size_t project_point(std::size_t i) const;

  // -- parametrization p = R(ab-1, a) --
  /// A witness pair (a, b) with point (ab-1, a); every point of a finite
  /// ring has one (coverage failure throws TheoremViolation).
  std::pair<Elem, Elem> bartolone_repr(std::size_t i) const;
  /// Up to two stored distinct witnesses per point.
  const std::vector<std::pair<Elem, Elem>>& bartolone_witnesses(std::size_t i) const;

  // -- product rings --
  const std::vector<LinePtr>& component_lines() const;
  std::vector<std::size_t> split_product_point(std::size_t i) const;
  std::size_t join_product_point(std::span<const std::size_t> components) const;

  // -- subspace model (matrix ring over a field, or a field itself) --
  bool has_subspace_model() const;
  unsigned model_block_dim() const;  // n for M_n(K); 1 for a field
  const FieldPtr& model_field() const;
  /// Row space of [A | B] in K^(2n).
  const Subspace& point_subspace(std::size_t i) const;
  std::size_t index_of_subspace(const Subspace& X) const;

private:
  explicit ProjectiveLine(FiniteRing R);

  void ensure_distant() const;
  void ensure_parallel() const;
  void ensure_adjacency() const;
  void ensure_quotient() const;
  void ensure_bartolone() const;
  void ensure_components() const;
  void ensure_subspaces() const;

  BitMatrix compute_adjacency_definitional() const;

  FiniteRing R_;
  Elem n_ = 0;  // ring order
  std::vector<ProjPoint> points_;
  std::vector<std::int32_t> code_to_index_;  // (a*n + b) -> point index or -1

  mutable std::once_flag distant_once_, parallel_once_, adjacency_once_,
      quotient_once_, bartolone_once_, components_once_, subspaces_once_;
  mutable BitMatrix distant_;
  mutable std::vector<std::vector<std::size_t>> parallel_classes_;
  mutable std::vector<std::size_t> parallel_class_of_;
  mutable BitMatrix adjacency_;
  mutable FiniteRing quotient_ring_;
  mutable RingMapTable quotient_projection_;
  mutable LinePtr quotient_line_;
  mutable std::vector<std::size_t> quotient_index_;
  mutable std::vector<std::vector<std::pair<Elem, Elem>>> bartolone_;
  mutable std::vector<LinePtr> component_lines_;
  mutable FieldPtr model_field_;
  mutable unsigned model_dim_ = 0;
  mutable std::vector<Subspace> subspaces_;
  mutable std::vector<std::pair<Subspace, std::size_t>> subspace_index_;
};

Graph distant_graph(const ProjectiveLine& L);
Graph adjacency_graph(const ProjectiveLine& L);

}  // namespace ringline
