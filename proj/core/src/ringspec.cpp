#include "ringline/ringspec.hpp"

#include <cctype>
#include <limits>

namespace ringline {
namespace {

bool is_prime_u(unsigned n) {
  if (n < 2) return false;
  for (unsigned d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// A spec is a field exactly when it is GF(p^k), Z p with p prime, or a 1x1
// matrix ring over a field.
bool is_field_spec(const RingSpec& s) {
  switch (s.kind) {
    case RingKind::GaloisField:
      return true;
    case RingKind::Zmod:
      return is_prime_u(s.n);
    case RingKind::Matrix:
      return s.n == 1 && is_field_spec(s.args[0]);
    default:
      return false;
  }
}

class Parser {
public:
  explicit Parser(std::string_view text) : text_(text) {}

  RingSpec parse() {
    RingSpec first = parse_atom();
    skip_ws();
    if (at_end() || peek() != 'x') return finish(std::move(first));
    RingSpec product;
    product.kind = RingKind::Product;
    product.args.push_back(std::move(first));
    while (!at_end() && peek() == 'x') {
      ++pos_;
      product.args.push_back(parse_atom());
      skip_ws();
    }
    return finish(std::move(product));
  }

private:
  [[noreturn]] void fail(const std::string& message, std::size_t offset) {
    throw SpecParseError(message, offset);
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }

  void expect(char c) {
    skip_ws();
    if (at_end() || peek() != c)
      fail(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }

  bool try_keyword(std::string_view kw) {
    if (text_.substr(pos_, kw.size()) == kw) {
      pos_ += kw.size();
      return true;
    }
    return false;
  }

  unsigned parse_number(const char* what) {
    skip_ws();
    std::size_t start = pos_;
    if (at_end() || !std::isdigit(static_cast<unsigned char>(peek())))
      fail(std::string("expected ") + what, pos_);
    std::uint64_t value = 0;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
      value = value * 10 + static_cast<std::uint64_t>(peek() - '0');
      if (value > std::numeric_limits<unsigned>::max())
        fail(std::string(what) + " is out of range", start);
      ++pos_;
    }
    return static_cast<unsigned>(value);
  }

  // Order of a validated subtree, capped so intermediate products cannot
  // overflow; anything past the ring order cap is rejected at `offset`.
  std::uint64_t checked_order(const RingSpec& s, std::size_t offset) {
    std::uint64_t order = 1;
    auto times = [&](std::uint64_t f) {
      if (order > max_ring_order() || f > max_ring_order() ||
          __builtin_mul_overflow(order, f, &order) || order > max_ring_order())
        fail("ring order exceeds the cap " + std::to_string(max_ring_order()),
             offset);
    };
    switch (s.kind) {
      case RingKind::Zmod:
        times(s.n);
        break;
      case RingKind::GaloisField:
        for (unsigned i = 0; i < s.k; ++i) times(s.p);
        break;
      case RingKind::Matrix: {
        std::uint64_t base = checked_order(s.args[0], offset);
        for (unsigned i = 0; i < s.n * s.n; ++i) times(base);
        break;
      }
      case RingKind::Dual: {
        std::uint64_t base = checked_order(s.args[0], offset);
        times(base);
        times(base);
        break;
      }
      case RingKind::Product:
        for (const RingSpec& f : s.args) times(checked_order(f, offset));
        break;
      default:
        fail("unsupported constructor", offset);
    }
    return order;
  }

  RingSpec parse_atom() {
    skip_ws();
    std::size_t start = pos_;
    if (at_end()) fail("expected a ring atom (Z, GF, M, or dual)", pos_);
    RingSpec s;
    if (try_keyword("GF")) {
      s.kind = RingKind::GaloisField;
      expect('(');
      std::size_t p_at = pos_;
      skip_ws();
      p_at = pos_;
      s.p = parse_number("a characteristic");
      if (!is_prime_u(s.p))
        fail("GF characteristic " + std::to_string(s.p) + " is not prime", p_at);
      skip_ws();
      if (!at_end() && peek() == '^') {
        ++pos_;
        std::size_t k_at = pos_;
        skip_ws();
        k_at = pos_;
        s.k = parse_number("an exponent");
        if (s.k < 1) fail("GF exponent must be >= 1", k_at);
      } else {
        s.k = 1;
      }
      expect(')');
    } else if (try_keyword("Z")) {
      s.kind = RingKind::Zmod;
      std::size_t n_at = pos_;
      skip_ws();
      n_at = pos_;
      s.n = parse_number("a modulus");
      if (s.n < 2) fail("Z modulus must be >= 2", n_at);
    } else if (try_keyword("M")) {
      s.kind = RingKind::Matrix;
      expect('(');
      std::size_t n_at = pos_;
      skip_ws();
      n_at = pos_;
      s.n = parse_number("a matrix dimension");
      if (s.n < 1 || s.n > 4)
        fail("matrix dimension must be in 1..4", n_at);
      expect(',');
      skip_ws();
      std::size_t base_at = pos_;
      s.args.push_back(parse_atom());
      if (!is_field_spec(s.args[0]))
        fail("matrix base must be a field", base_at);
      expect(')');
    } else if (try_keyword("dual")) {
      s.kind = RingKind::Dual;
      expect('(');
      skip_ws();
      std::size_t base_at = pos_;
      s.args.push_back(parse_atom());
      if (!is_field_spec(s.args[0]))
        fail("dual-number base must be a field", base_at);
      expect(')');
    } else {
      fail("expected a ring atom (Z, GF, M, or dual)", pos_);
    }
    checked_order(s, start);
    return s;
  }

  RingSpec finish(RingSpec s) {
    skip_ws();
    if (!at_end()) fail("unexpected trailing input", pos_);
    checked_order(s, 0);
    return s;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void print_spec(const RingSpec& s, std::string& out) {
  switch (s.kind) {
    case RingKind::Zmod:
      out += 'Z';
      out += std::to_string(s.n);
      break;
    case RingKind::GaloisField:
      out += "GF(";
      out += std::to_string(s.p);
      if (s.k != 1) {
        out += '^';
        out += std::to_string(s.k);
      }
      out += ')';
      break;
    case RingKind::Matrix:
      out += "M(";
      out += std::to_string(s.n);
      out += ',';
      print_spec(s.args[0], out);
      out += ')';
      break;
    case RingKind::Dual:
      out += "dual(";
      print_spec(s.args[0], out);
      out += ')';
      break;
    case RingKind::Product:
      for (std::size_t i = 0; i < s.args.size(); ++i) {
        if (i) out += " x ";
        print_spec(s.args[i], out);
      }
      break;
    default:
      throw std::invalid_argument("print_ring_spec: unsupported constructor");
  }
}

}  // namespace

SpecParseError::SpecParseError(const std::string& message, std::size_t offset)
    : std::runtime_error("byte " + std::to_string(offset) + ": " + message),
      offset_(offset) {}

RingSpec parse_ring_spec(std::string_view text) { return Parser(text).parse(); }

std::string print_ring_spec(const RingSpec& spec) {
  std::string out;
  print_spec(spec, out);
  return out;
}

std::uint64_t ring_spec_order(const RingSpec& spec) {
  std::uint64_t order = 1;
  switch (spec.kind) {
    case RingKind::Zmod:
      return spec.n;
    case RingKind::GaloisField:
      for (unsigned i = 0; i < spec.k; ++i) order *= spec.p;
      return order;
    case RingKind::Matrix: {
      std::uint64_t base = ring_spec_order(spec.args[0]);
      for (unsigned i = 0; i < spec.n * spec.n; ++i) order *= base;
      return order;
    }
    case RingKind::Dual: {
      std::uint64_t base = ring_spec_order(spec.args[0]);
      return base * base;
    }
    case RingKind::Product:
      for (const RingSpec& f : spec.args) order *= ring_spec_order(f);
      return order;
    default:
      throw std::invalid_argument("ring_spec_order: unsupported constructor");
  }
}

FiniteRing materialize_ring(const RingSpec& spec) {
  switch (spec.kind) {
    case RingKind::Zmod:
      return make_zmod(spec.n);
    case RingKind::GaloisField:
      return make_gf(spec.p, spec.k);
    case RingKind::Matrix:
      return make_matrix_ring(spec.n, materialize_ring(spec.args[0]));
    case RingKind::Dual:
      return make_dual_numbers(materialize_ring(spec.args[0]));
    case RingKind::Product: {
      std::vector<FiniteRing> factors;
      factors.reserve(spec.args.size());
      for (const RingSpec& f : spec.args) factors.push_back(materialize_ring(f));
      return make_product(factors);
    }
    default:
      throw std::invalid_argument("materialize_ring: unsupported constructor");
  }
}

FiniteRing ring_from_spec(std::string_view text) {
  return materialize_ring(parse_ring_spec(text));
}

}  // namespace ringline
