#pragma once

// Maps between projective lines over finite rings: the four constructions
// (projectivities, maps induced by homomorphisms, by anti-homomorphisms, and
// by Jordan homomorphisms through the parametrization p = R(ab-1, a)),
// relation-preservation predicates, exhaustive enumeration of
// distant-isomorphisms, and certificates that reconstruct the algebraic data
// (ring map, 2x2 matrix, factor permutation) behind a given map.
//
// Verification policy: every certificate-producing operation re-applies the
// reconstructed data pointwise and compares with the input table; facts that
// are forced by the classification results (well-definedness of the induced
// constructions, existence of a factorization, the wreath count identity)
// throw TheoremViolation when they fail to hold, while violated
// preconditions throw std::invalid_argument.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ringline/projline.hpp"
#include "ringline/ring.hpp"

namespace ringline {

// ---------------------------------------------------------------------------
// 2x2 matrices over a ring
// ---------------------------------------------------------------------------

// [[a, b], [c, d]] with entries in `ring`.
struct RingMat2 {
  FiniteRing ring;
  Elem a = 0, b = 0, c = 0, d = 0;

  static RingMat2 identity(const FiniteRing& R);
  bool operator==(const RingMat2& o) const {
    return ring.same_ring(o.ring) && a == o.a && b == o.b && c == o.c && d == o.d;
  }
};

RingMat2 mat2_mul(const RingMat2& x, const RingMat2& y);

/// Row vector times matrix: (x, y) * m.
std::pair<Elem, Elem> mat2_row_action(Elem x, Elem y, const RingMat2& m);

/// Two-sided inverse, or nullopt for a singular matrix.  Commutative rings
/// use the adjugate, matrix rings reduce to linear algebra over the base
/// field, products recurse, and the rest fall back to solving m*x = e_i.
std::optional<RingMat2> mat2_inverse(const RingMat2& m);
bool mat2_invertible(const RingMat2& m);

// ---------------------------------------------------------------------------
// Point maps
// ---------------------------------------------------------------------------

enum class MapProvenance {
  Projectivity,     // point -> point * gamma
  HomInduced,       // entrywise image under a ring homomorphism
  AntihomInduced,   // second-column construction for an anti-homomorphism
  JordanInduced,    // parametrized construction for a Jordan homomorphism
  Composite,        // composition or inverse of other maps
  Raw,              // table given directly
};

std::string to_string(MapProvenance p);

// A total map between the point sets of two lines.
struct PointMap {
  LinePtr source;
  LinePtr target;
  std::vector<std::size_t> table;  // source point index -> target point index
  MapProvenance provenance = MapProvenance::Raw;

  std::size_t operator()(std::size_t i) const { return table[i]; }
  bool is_bijection() const;
};

/// Wraps an explicit table after validating totality and range.
PointMap raw_point_map(LinePtr source, LinePtr target,
                       std::vector<std::size_t> table);

/// R(a, b) -> R((a, b) * gamma); gamma must be invertible over the line's
/// ring (else std::invalid_argument).  Always a distant-automorphism.
PointMap projectivity(const LinePtr& L, const RingMat2& gamma);

// Each induced construction takes the ring map plus the two lines; passing
// empty line pointers enumerates the lines of alpha's source and target
// rings.  A line whose ring differs from the corresponding side of alpha is
// rejected with std::invalid_argument, as is a ring map of the wrong kind.

/// R(a, b) -> R'(a^alpha, b^alpha) for a unital ring homomorphism.
PointMap induced_by_hom(const RingMapTable& alpha, LinePtr source = nullptr,
                        LinePtr target = nullptr);

/// p -> R'(-w^alpha, v^alpha) where (v, w) is the second column of the
/// inverse of a completion of p, for a unital anti-homomorphism.  The value
/// is checked per point against two further completions; a disagreement
/// throws TheoremViolation.
PointMap induced_by_antihom(const RingMapTable& alpha, LinePtr source = nullptr,
                            LinePtr target = nullptr);

/// R(ab-1, a) -> R'(a^alpha b^alpha - 1, a^alpha) for a unital Jordan
/// homomorphism (homomorphisms and anti-homomorphisms qualify).  All stored
/// parametrization witnesses of a point must give the same image point;
/// a disagreement throws TheoremViolation.
PointMap induced_by_jordan(const RingMapTable& alpha, LinePtr source = nullptr,
                           LinePtr target = nullptr);

/// Applies f first, then g; the middle rings must coincide.
PointMap compose_point_maps(const PointMap& f, const PointMap& g);

/// Inverse of a bijective map (std::invalid_argument otherwise).
PointMap inverse_point_map(const PointMap& f);

/// The map induced between the quotient lines (over R/rad R) by sending the
/// class of p to the class of p's image; nullopt when that is ill-defined,
/// i.e. when f does not respect the parallel partition.
std::optional<PointMap> induced_quotient_map(const PointMap& f);

// ---------------------------------------------------------------------------
// Relation-preservation predicates (exhaustive scans)
// ---------------------------------------------------------------------------

/// distant(p, q) implies distant(f p, f q).
bool is_dis_morphism(const PointMap& f);
/// Bijective and distant(p, q) <=> distant(f p, f q).
bool is_dis_isomorphism(const PointMap& f);
/// Bijective and parallel(p, q) <=> parallel(f p, f q).
bool is_par_isomorphism(const PointMap& f);
/// Bijective and adjacent(p, q) <=> adjacent(f p, f q).
bool is_adj_isomorphism(const PointMap& f);

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

// Point-count caps for the backtracking searches.
inline constexpr std::size_t kEnumerationListingCap = 64;
inline constexpr std::size_t kEnumerationCountingCap = 256;

/// All distant-isomorphisms L -> M, ordered lexicographically by table.
/// Throws CapExceeded when either line has more than `cap` points.
std::vector<PointMap> enumerate_dis_isomorphisms(
    const LinePtr& L, const LinePtr& M, std::size_t cap = kEnumerationListingCap);

/// Number of distant-automorphisms, by the same backtracking search without
/// materializing the maps.
std::uint64_t count_dis_automorphisms(const LinePtr& L,
                                      std::size_t cap = kEnumerationCountingCap);

// ---------------------------------------------------------------------------
// Factorization certificates
// ---------------------------------------------------------------------------

enum class CertificateKind { Isomorphism, AntiIsomorphism };

std::string to_string(CertificateKind k);

// Data reconstructing a distant-isomorphism: the map equals the composite of
// the construction induced by `alpha` (hom- or antihom-induced according to
// `kind`) with the projectivity of `gamma`.  For maps between lines over
// product rings, `sigma` routes source factor k to target factor sigma[k]
// and `component_certs` factorizes each component map; both stay empty
// otherwise.
struct DecompositionCertificate {
  CertificateKind kind = CertificateKind::Isomorphism;
  RingMapTable alpha;
  RingMat2 gamma;
  std::vector<std::size_t> sigma;
  std::vector<DecompositionCertificate> component_certs;
};

/// The point map alpha-induced-then-gamma encoded by a certificate (ignores
/// sigma and component_certs).
PointMap certificate_point_map(const DecompositionCertificate& cert,
                               LinePtr source = nullptr, LinePtr target = nullptr);

/// Factorizes a distant-isomorphism between lines over matrix rings of
/// dimension n > 1 over fields into (kind, alpha, gamma), with the
/// recomposition verified pointwise.  The search recovers the semilinear map
/// behind the induced collineation of the subspace model from a frame of the
/// ambient projective space; failure at any forced step throws
/// TheoremViolation.
DecompositionCertificate factorize_dis_automorphism(const PointMap& f);

// Factor permutation plus component maps of a distant-isomorphism between
// lines over product rings: (f(p))_{sigma[k]} = components[k](p_k).
struct ProductDecomposition {
  std::vector<std::size_t> sigma;
  std::vector<PointMap> components;
};

/// Decomposes a distant-isomorphism between lines over products of matrix
/// rings over fields (including fields).  Hypothesis failures throw
/// std::invalid_argument; a failed decomposition throws TheoremViolation.
ProductDecomposition decompose_product_dis_iso(const PointMap& f);

// ---------------------------------------------------------------------------
// Jordan isomorphisms
// ---------------------------------------------------------------------------

/// All bijective maps R -> S that are additive, send 1 to 1, and satisfy
/// f(aba) = f(a) f(b) f(a), found by backtracking over images of an additive
/// basis.  Ordered lexicographically by value table.  Throws CapExceeded
/// when |R| exceeds `cap`.
std::vector<RingMapTable> enumerate_jordan_isomorphisms(
    const FiniteRing& R, const FiniteRing& S,
    std::size_t cap = kEnumerationCountingCap);

// Algebraic form of a Jordan isomorphism.  For a matrix ring source,
// kind/beta/g satisfy omega(X) = g^-1 * X^beta * g (kind Homomorphism, beta
// applied entrywise) or omega(X) = g^-1 * (X^beta)^T * g (kind
// AntiHomomorphism).  For a product source, sigma routes factor k to factor
// sigma[k] and component_kinds[k] classifies the component map.
struct JordanCertificate {
  MapKind kind = MapKind::None;
  RingMapTable beta;
  Elem g = 0;
  std::vector<std::size_t> sigma;
  std::vector<MapKind> component_kinds;
};

/// Classifies a bijective Jordan homomorphism between matrix rings over
/// fields, between fields, or between products of such rings.  A Jordan
/// isomorphism that fits no clause of the classification throws
/// TheoremViolation.
JordanCertificate classify_jordan(const RingMapTable& omega);

// ---------------------------------------------------------------------------
// Group structure over the radical
// ---------------------------------------------------------------------------

// Both sides of the count identity
//   #dis-automorphisms(P(R)) = (#rad R)!^(#P(R/rad R)) * #dis-automorphisms(P(R/rad R))
// computed independently, plus the check that every dis-automorphism acts
// on the parallel classes through a well-defined map of quotient lines.
struct WreathReport {
  std::uint64_t radical_size = 0;
  std::uint64_t quotient_points = 0;
  std::uint64_t quotient_count = 0;
  std::uint64_t predicted = 0;
  std::uint64_t actual = 0;
  bool quotient_action_well_defined = false;
};

/// Throws TheoremViolation when the two counts disagree or some
/// dis-automorphism fails to act on the quotient line.
WreathReport verify_wreath_structure(const FiniteRing& R);

/// For a bijective map f between lines over (necessarily semilocal) finite
/// rings, decides whether f is a distant-isomorphism and checks the
/// equivalence: f is a dis-isomorphism iff f is a parallel-isomorphism whose
/// induced map of quotient lines is a dis-isomorphism.  An internal
/// inconsistency between the two sides throws TheoremViolation.
bool check_semilocal_corollary(const PointMap& f);

}  // namespace ringline
