#pragma once

// Finite associative rings with 1 != 0, materialized with dense integer
// element encodings 0..order-1 (0 always encodes the ring zero).
//
// Encoding conventions per constructor:
//   Z/n        residue i encodes as i
//   GF(p^k)    sum c_i x^i encodes as sum c_i p^i (c_0 least significant);
//              modulus is the minimal monic irreducible of degree k, where
//              "minimal" compares the coefficient vector as the integer
//              sum_{i<k} c_i p^i
//   M_n(K)     row-major entries as base-|K| digits, entry (0,0) least
//              significant
//   K[e], e^2=0   a+be encodes as a + |K|*b
//   R_1 x ... x R_m   mixed radix, factor 0 least significant
//
// Rings are immutable once constructed.  Operation tables (order <= 256) and
// the unit/inverse cache are materialized lazily behind std::call_once, so
// concurrent readers are safe.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ringline {

using Elem = std::uint32_t;

enum class RingKind { Zmod, GaloisField, Matrix, Dual, Product, Quotient };

namespace detail {
class RingRep;
}

class FiniteRing {
public:
  FiniteRing() = default;
  explicit FiniteRing(std::shared_ptr<const detail::RingRep> rep);

  bool valid() const { return static_cast<bool>(rep_); }
  /// Identity of the underlying ring object (not structural isomorphism).
  bool same_ring(const FiniteRing& other) const { return rep_ == other.rep_; }

  Elem order() const;
  RingKind kind() const;
  const std::string& tag() const;

  Elem zero() const { return 0; }
  Elem one() const;
  Elem add(Elem a, Elem b) const;
  Elem neg(Elem a) const;
  Elem sub(Elem a, Elem b) const;
  Elem mul(Elem a, Elem b) const;

  bool is_unit(Elem a) const;
  Elem inverse(Elem a) const;  // throws std::domain_error on a non-unit
  const std::vector<Elem>& units() const;
  bool is_field() const;
  bool is_commutative() const;

  // Structure accessors; each throws std::logic_error on a kind mismatch.
  unsigned zmod_n() const;
  unsigned gf_p() const;
  unsigned gf_k() const;
  /// Modulus coefficients c_0..c_k (c_k = 1); {0, 1} for k = 1.
  const std::vector<Elem>& gf_modulus() const;
  unsigned matrix_dim() const;
  FiniteRing matrix_base() const;
  Elem matrix_entry(Elem a, unsigned r, unsigned c) const;
  Elem matrix_encode(std::span<const Elem> entries_row_major) const;
  FiniteRing dual_base() const;
  const std::vector<FiniteRing>& factors() const;
  std::vector<Elem> product_decode(Elem a) const;
  Elem product_encode(std::span<const Elem> components) const;
  Elem product_inject(std::size_t i, Elem component) const;
  FiniteRing quotient_parent() const;

  const detail::RingRep* rep() const { return rep_.get(); }

private:
  std::shared_ptr<const detail::RingRep> rep_;
};

struct Ideal {
  FiniteRing ring;
  std::vector<Elem> members;  // sorted ascending, always contains 0
  std::vector<char> mask;     // size ring.order()
  bool contains(Elem x) const { return mask[x] != 0; }
  std::size_t size() const { return members.size(); }
};

enum class MapKind { Homomorphism, AntiHomomorphism, Jordan, AdditiveOnly, None };

std::string to_string(MapKind kind);

// A total map between two rings, stored as a full value table over the
// source's element encodings, together with its classification.
struct RingMapTable {
  FiniteRing source;
  FiniteRing target;
  std::vector<Elem> table;
  MapKind kind = MapKind::None;
  // Set when kind == Homomorphism and the map also reverses products
  // (possible only over commutative images).
  bool anti_too = false;

  Elem operator()(Elem a) const { return table[a]; }
  bool is_bijection() const;
};

// Constructors.  Each checks the configured order cap.
FiniteRing make_zmod(unsigned n);
FiniteRing make_gf(unsigned p, unsigned k);
FiniteRing make_matrix_ring(unsigned n, const FiniteRing& base_field);
FiniteRing make_dual_numbers(const FiniteRing& base_field);
FiniteRing make_product(const std::vector<FiniteRing>& factors);

/// rad R = {x : 1 - r*x is a unit for every r}.
Ideal jacobson_radical(const FiniteRing& R);
bool is_two_sided_ideal(const Ideal& I);

/// Coset ring R/I plus the canonical projection (a unital surjective
/// homomorphism).  tag_hint names the ideal in the quotient's structure tag.
std::pair<FiniteRing, RingMapTable> quotient(const FiniteRing& R, const Ideal& I,
                                             const std::string& tag_hint = "");

/// Classifies a value table: additivity, 1 -> 1, product preservation,
/// product reversal, and the Jordan identity f(aba) = f(a)f(b)f(a) are each
/// decided by exhaustive scan.  kind is the strongest label that applies.
RingMapTable classify_map(const FiniteRing& src, const FiniteRing& dst,
                          std::vector<Elem> table);

bool jordan_identity_holds(const RingMapTable& f);

// Decomposition of (R,+) into a direct sum of cyclic groups; every element
// is uniquely sum_i c_i * gens[i] with 0 <= c_i < orders[i].
struct AdditiveBasis {
  std::vector<Elem> gens;
  std::vector<unsigned> orders;
};
AdditiveBasis additive_basis(const FiniteRing& R);

/// n-fold additive iterate n*x.
Elem scalar_multiple(const FiniteRing& R, unsigned n, Elem x);

// Configurable ring order cap (default 4096; env RINGLINE_MAX_RING_ORDER).
std::size_t max_ring_order();
void set_max_ring_order(std::size_t cap);

}  // namespace ringline
