#pragma once

// Textual ring specifications.  The grammar names the supported ring
// constructors:
//
//   expr := atom { "x" atom }
//   atom := "Z" n                 residues mod n            (n >= 2)
//         | "GF(" p ")"           prime field
//         | "GF(" p "^" k ")"     Galois field of order p^k
//         | "M(" n "," atom ")"   n x n matrices over a field atom
//         | "dual(" atom ")"      dual numbers over a field atom
//
// Whitespace between tokens is ignored.  Parsing yields a constructor tree
// (RingSpec); print_ring_spec renders the canonical form, and
// parse(print(parse(text))) equals parse(text) for every valid input.  The
// canonical form coincides with FiniteRing::tag(), so tags parse back.
//
// Semantic limits are enforced at parse time with a byte-offset diagnostic:
// the GF characteristic must be prime, matrix and dual-number bases must be
// fields, matrix dimensions stay in 1..4, and every subtree must respect the
// configured ring order cap (max_ring_order()).

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ringline/ring.hpp"

namespace ringline {

// Parse failure (syntax error or unsupported parameters) with the byte
// offset of the offending token in the original text.
class SpecParseError : public std::runtime_error {
public:
  SpecParseError(const std::string& message, std::size_t offset);
  std::size_t offset() const { return offset_; }

private:
  std::size_t offset_ = 0;
};

// Constructor tree of a ring expression.  kind is one of Zmod, GaloisField,
// Matrix, Dual, Product; the other fields are populated per kind.
struct RingSpec {
  RingKind kind = RingKind::Zmod;
  unsigned n = 0;              // Zmod modulus, or matrix dimension
  unsigned p = 0, k = 1;       // GaloisField parameters
  std::vector<RingSpec> args;  // base (Matrix, Dual) or factors (Product)

  bool operator==(const RingSpec&) const = default;
};

/// Parses the whole input as one ring expression; throws SpecParseError.
RingSpec parse_ring_spec(std::string_view text);

/// Canonical text: "Z4", "GF(2^2)", "M(2,GF(2))", "dual(GF(3))",
/// factors joined by " x ".
std::string print_ring_spec(const RingSpec& spec);

/// Order of the ring the spec describes (also computed during parsing for
/// the cap check).
std::uint64_t ring_spec_order(const RingSpec& spec);

/// Builds the ring through the make_* constructors.
FiniteRing materialize_ring(const RingSpec& spec);

/// parse + materialize in one step.
FiniteRing ring_from_spec(std::string_view text);

}  // namespace ringline
