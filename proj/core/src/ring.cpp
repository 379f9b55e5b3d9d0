#include "ringline/ring.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdlib>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "ringline/errors.hpp"

namespace ringline {

namespace {

std::atomic<std::size_t> g_max_ring_order{0};

std::size_t env_ring_cap() {
  if (const char* s = std::getenv("RINGLINE_MAX_RING_ORDER")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(s, &end, 10);
    if (end != s && v >= 2) return static_cast<std::size_t>(v);
  }
  return 4096;
}

void check_order_cap(std::uint64_t order, const std::string& what) {
  if (order > max_ring_order()) {
    throw CapExceeded(what + ": order " + std::to_string(order) +
                      " exceeds cap " + std::to_string(max_ring_order()));
  }
}

bool is_prime(unsigned n) {
  if (n < 2) return false;
  for (unsigned d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

}  // namespace

std::size_t max_ring_order() {
  std::size_t v = g_max_ring_order.load(std::memory_order_relaxed);
  if (v == 0) {
    v = env_ring_cap();
    g_max_ring_order.store(v, std::memory_order_relaxed);
  }
  return v;
}

void set_max_ring_order(std::size_t cap) {
  if (cap < 2) throw std::invalid_argument("ring order cap must be >= 2");
  g_max_ring_order.store(cap, std::memory_order_relaxed);
}

namespace detail {

class RingRep {
public:
  RingRep(RingKind kind, Elem order, std::string tag)
      : kind_(kind), order_(order), tag_(std::move(tag)) {}
  virtual ~RingRep() = default;

  RingKind kind() const { return kind_; }
  Elem order() const { return order_; }
  const std::string& tag() const { return tag_; }
  Elem one() const { return one_; }

  Elem add(Elem a, Elem b) const {
    if (const Elem* t = add_tab_.load(std::memory_order_acquire))
      return t[static_cast<std::size_t>(a) * order_ + b];
    return add_raw(a, b);
  }
  Elem mul(Elem a, Elem b) const {
    if (const Elem* t = mul_tab_.load(std::memory_order_acquire))
      return t[static_cast<std::size_t>(a) * order_ + b];
    return mul_raw(a, b);
  }
  Elem neg(Elem a) const {
    if (const Elem* t = neg_tab_.load(std::memory_order_acquire)) return t[a];
    return neg_raw(a);
  }

  void ensure_tables() const {
    if (order_ > 256) return;
    std::call_once(tab_once_, [this] {
      const std::size_t n = order_;
      add_store_.resize(n * n);
      mul_store_.resize(n * n);
      neg_store_.resize(n);
      for (Elem a = 0; a < n; ++a) {
        neg_store_[a] = neg_raw(a);
        for (Elem b = 0; b < n; ++b) {
          add_store_[a * n + b] = add_raw(a, b);
          mul_store_[a * n + b] = mul_raw(a, b);
        }
      }
      add_tab_.store(add_store_.data(), std::memory_order_release);
      mul_tab_.store(mul_store_.data(), std::memory_order_release);
      neg_tab_.store(neg_store_.data(), std::memory_order_release);
    });
  }

  void ensure_units() const {
    std::call_once(unit_once_, [this] {
      ensure_tables();
      const Elem n = order_;
      unit_mask_.assign(n, 0);
      inv_tab_.assign(n, 0);
      for (Elem a = 0; a < n; ++a) {
        std::optional<Elem> inv = inverse_raw(a);
        if (!inv) continue;
        if (mul(a, *inv) != one_ || mul(*inv, a) != one_)
          throw std::logic_error(tag_ + ": inconsistent inverse computation");
        unit_mask_[a] = 1;
        inv_tab_[a] = *inv;
        units_.push_back(a);
      }
    });
  }

  bool is_unit(Elem a) const {
    ensure_units();
    return unit_mask_[a] != 0;
  }
  Elem inverse(Elem a) const {
    ensure_units();
    if (!unit_mask_[a])
      throw std::domain_error(tag_ + ": element " + std::to_string(a) + " is not a unit");
    return inv_tab_[a];
  }
  const std::vector<Elem>& units() const {
    ensure_units();
    return units_;
  }

  virtual Elem add_raw(Elem a, Elem b) const = 0;
  virtual Elem neg_raw(Elem a) const = 0;
  virtual Elem mul_raw(Elem a, Elem b) const = 0;
  // nullopt when the element is not (or not detectably) a unit; the default
  // scans for a two-sided inverse.
  virtual std::optional<Elem> inverse_raw(Elem a) const {
    for (Elem b = 0; b < order_; ++b)
      if (mul(a, b) == one_ && mul(b, a) == one_) return b;
    return std::nullopt;
  }

  Elem one_ = 0;

protected:
  RingKind kind_;
  Elem order_;
  std::string tag_;

private:
  mutable std::once_flag tab_once_;
  mutable std::once_flag unit_once_;
  mutable std::vector<Elem> add_store_, mul_store_, neg_store_;
  mutable std::atomic<const Elem*> add_tab_{nullptr};
  mutable std::atomic<const Elem*> mul_tab_{nullptr};
  mutable std::atomic<const Elem*> neg_tab_{nullptr};
  mutable std::vector<char> unit_mask_;
  mutable std::vector<Elem> inv_tab_;
  mutable std::vector<Elem> units_;
};

namespace {

class ZmodRep final : public RingRep {
public:
  explicit ZmodRep(unsigned n)
      : RingRep(RingKind::Zmod, n, "Z" + std::to_string(n)), n_(n) {
    one_ = 1 % n;
  }
  Elem add_raw(Elem a, Elem b) const override { return (a + b) % n_; }
  Elem neg_raw(Elem a) const override { return (n_ - a) % n_; }
  Elem mul_raw(Elem a, Elem b) const override {
    return static_cast<Elem>((static_cast<std::uint64_t>(a) * b) % n_);
  }
  std::optional<Elem> inverse_raw(Elem a) const override {
    // extended gcd
    long long r0 = n_, r1 = a, s0 = 0, s1 = 1;
    while (r1 != 0) {
      long long q = r0 / r1;
      std::tie(r0, r1) = std::make_tuple(r1, r0 - q * r1);
      std::tie(s0, s1) = std::make_tuple(s1, s0 - q * s1);
    }
    if (r0 != 1) return std::nullopt;
    long long s = s0 % n_;
    if (s < 0) s += n_;
    return static_cast<Elem>(s);
  }
  unsigned n() const { return n_; }

private:
  unsigned n_;
};

// --- polynomial helpers over Z/p (coefficients little-endian) ---

using Poly = std::vector<Elem>;

void poly_trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

Poly poly_mul(const Poly& f, const Poly& g, unsigned p) {
  if (f.empty() || g.empty()) return {};
  Poly h(f.size() + g.size() - 1, 0);
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j)
      h[i + j] = (h[i + j] + f[i] * g[j]) % p;
  poly_trim(h);
  return h;
}

// f mod g, g monic
Poly poly_mod(Poly f, const Poly& g, unsigned p) {
  poly_trim(f);
  while (f.size() >= g.size()) {
    Elem c = f.back();
    std::size_t shift = f.size() - g.size();
    for (std::size_t i = 0; i < g.size(); ++i) {
      Elem sub = (c * g[i]) % p;
      Elem& coef = f[shift + i];
      coef = (coef + p - sub) % p;
    }
    poly_trim(f);
  }
  return f;
}

bool poly_irreducible(const Poly& f, unsigned p) {
  unsigned k = static_cast<unsigned>(f.size()) - 1;
  // trial division by all monic polynomials of degree 1..k/2
  for (unsigned d = 1; 2 * d <= k; ++d) {
    std::uint64_t count = 1;
    for (unsigned i = 0; i < d; ++i) count *= p;
    for (std::uint64_t code = 0; code < count; ++code) {
      Poly g(d + 1, 0);
      std::uint64_t c = code;
      for (unsigned i = 0; i < d; ++i) {
        g[i] = static_cast<Elem>(c % p);
        c /= p;
      }
      g[d] = 1;
      if (poly_mod(f, g, p).empty()) return false;
    }
  }
  return true;
}

class GfRep final : public RingRep {
public:
  GfRep(unsigned p, unsigned k, Poly modulus, Elem order, std::string tag)
      : RingRep(RingKind::GaloisField, order, std::move(tag)),
        p_(p), k_(k), modulus_(std::move(modulus)) {
    one_ = 1;
  }
  Elem add_raw(Elem a, Elem b) const override {
    Elem out = 0, w = 1;
    for (unsigned i = 0; i < k_; ++i) {
      out += ((a % p_ + b % p_) % p_) * w;
      a /= p_; b /= p_; w *= p_;
    }
    return out;
  }
  Elem neg_raw(Elem a) const override {
    Elem out = 0, w = 1;
    for (unsigned i = 0; i < k_; ++i) {
      out += ((p_ - a % p_) % p_) * w;
      a /= p_; w *= p_;
    }
    return out;
  }
  Elem mul_raw(Elem a, Elem b) const override {
    Poly fa = decode(a), fb = decode(b);
    Poly prod = poly_mod(poly_mul(fa, fb, p_), modulus_, p_);
    return encode(prod);
  }
  std::optional<Elem> inverse_raw(Elem a) const override {
    if (a == 0) return std::nullopt;
    // extended euclid over Z/p[x]
    Poly r0 = modulus_, r1 = decode(a), s0 = {}, s1 = {1};
    while (!r1.empty()) {
      // divide r0 by r1
      Poly q;
      Poly rem = r0;
      poly_trim(rem);
      if (rem.size() >= r1.size()) {
        q.assign(rem.size() - r1.size() + 1, 0);
        Elem lead_inv = field_inv_scalar(r1.back());
        while (rem.size() >= r1.size() && !rem.empty()) {
          Elem c = (rem.back() * lead_inv) % p_;
          std::size_t shift = rem.size() - r1.size();
          q[shift] = c;
          for (std::size_t i = 0; i < r1.size(); ++i) {
            Elem sub = (c * r1[i]) % p_;
            Elem& coef = rem[shift + i];
            coef = (coef + p_ - sub) % p_;
          }
          poly_trim(rem);
        }
      }
      Poly new_s = s0;
      Poly qs = poly_mul(q, s1, p_);
      new_s.resize(std::max(new_s.size(), qs.size()), 0);
      for (std::size_t i = 0; i < qs.size(); ++i)
        new_s[i] = (new_s[i] + p_ - qs[i]) % p_;
      poly_trim(new_s);
      r0 = r1; r1 = rem;
      s0 = s1; s1 = new_s;
    }
    // r0 = gcd, constant; normalize
    if (r0.size() != 1) return std::nullopt;
    Elem scale = field_inv_scalar(r0[0]);
    Poly inv = s0;
    for (Elem& c : inv) c = (c * scale) % p_;
    inv = poly_mod(inv, modulus_, p_);
    return encode(inv);
  }

  unsigned p() const { return p_; }
  unsigned k() const { return k_; }
  const Poly& modulus() const { return modulus_; }

private:
  Poly decode(Elem a) const {
    Poly f(k_, 0);
    for (unsigned i = 0; i < k_; ++i) {
      f[i] = a % p_;
      a /= p_;
    }
    poly_trim(f);
    return f;
  }
  Elem encode(const Poly& f) const {
    Elem out = 0, w = 1;
    for (unsigned i = 0; i < k_; ++i) {
      out += (i < f.size() ? f[i] : 0) * w;
      w *= p_;
    }
    return out;
  }
  Elem field_inv_scalar(Elem c) const {
    for (Elem d = 1; d < p_; ++d)
      if ((c * d) % p_ == 1) return d;
    throw std::logic_error("scalar inverse in Z/p failed");
  }

  unsigned p_, k_;
  Poly modulus_;
};

class MatrixRep final : public RingRep {
public:
  MatrixRep(unsigned n, FiniteRing base, Elem order, std::string tag)
      : RingRep(RingKind::Matrix, order, std::move(tag)),
        n_(n), base_(std::move(base)), q_(base_.order()) {
    std::array<Elem, 16> id{};
    for (unsigned i = 0; i < n_; ++i) id[i * n_ + i] = base_.one();
    one_ = encode(id.data());
  }

  void decode(Elem a, Elem* out) const {
    for (unsigned i = 0; i < n_ * n_; ++i) {
      out[i] = a % q_;
      a /= q_;
    }
  }
  Elem encode(const Elem* e) const {
    Elem out = 0;
    std::uint64_t w = 1;
    for (unsigned i = 0; i < n_ * n_; ++i) {
      out += static_cast<Elem>(e[i] * w);
      w *= q_;
    }
    return out;
  }

  Elem add_raw(Elem a, Elem b) const override {
    std::array<Elem, 16> x{}, y{};
    decode(a, x.data());
    decode(b, y.data());
    for (unsigned i = 0; i < n_ * n_; ++i) x[i] = base_.add(x[i], y[i]);
    return encode(x.data());
  }
  Elem neg_raw(Elem a) const override {
    std::array<Elem, 16> x{};
    decode(a, x.data());
    for (unsigned i = 0; i < n_ * n_; ++i) x[i] = base_.neg(x[i]);
    return encode(x.data());
  }
  Elem mul_raw(Elem a, Elem b) const override {
    std::array<Elem, 16> x{}, y{}, z{};
    decode(a, x.data());
    decode(b, y.data());
    for (unsigned i = 0; i < n_; ++i)
      for (unsigned j = 0; j < n_; ++j) {
        Elem acc = 0;
        for (unsigned k = 0; k < n_; ++k)
          acc = base_.add(acc, base_.mul(x[i * n_ + k], y[k * n_ + j]));
        z[i * n_ + j] = acc;
      }
    return encode(z.data());
  }
  std::optional<Elem> inverse_raw(Elem a) const override {
    // Gauss-Jordan over the base field
    std::array<Elem, 16> m{}, inv{};
    decode(a, m.data());
    for (unsigned i = 0; i < n_; ++i) inv[i * n_ + i] = base_.one();
    for (unsigned col = 0; col < n_; ++col) {
      unsigned piv = n_;
      for (unsigned r = col; r < n_; ++r)
        if (m[r * n_ + col] != 0) { piv = r; break; }
      if (piv == n_) return std::nullopt;
      if (piv != col)
        for (unsigned c = 0; c < n_; ++c) {
          std::swap(m[piv * n_ + c], m[col * n_ + c]);
          std::swap(inv[piv * n_ + c], inv[col * n_ + c]);
        }
      Elem s = base_.inverse(m[col * n_ + col]);
      for (unsigned c = 0; c < n_; ++c) {
        m[col * n_ + c] = base_.mul(s, m[col * n_ + c]);
        inv[col * n_ + c] = base_.mul(s, inv[col * n_ + c]);
      }
      for (unsigned r = 0; r < n_; ++r) {
        if (r == col || m[r * n_ + col] == 0) continue;
        Elem f = m[r * n_ + col];
        for (unsigned c = 0; c < n_; ++c) {
          m[r * n_ + c] = base_.sub(m[r * n_ + c], base_.mul(f, m[col * n_ + c]));
          inv[r * n_ + c] = base_.sub(inv[r * n_ + c], base_.mul(f, inv[col * n_ + c]));
        }
      }
    }
    return encode(inv.data());
  }

  unsigned n() const { return n_; }
  const FiniteRing& base() const { return base_; }

private:
  unsigned n_;
  FiniteRing base_;
  Elem q_;
};

class DualRep final : public RingRep {
public:
  DualRep(FiniteRing base, Elem order, std::string tag)
      : RingRep(RingKind::Dual, order, std::move(tag)),
        base_(std::move(base)), q_(base_.order()) {
    one_ = base_.one();
  }
  Elem add_raw(Elem x, Elem y) const override {
    return base_.add(x % q_, y % q_) + q_ * base_.add(x / q_, y / q_);
  }
  Elem neg_raw(Elem x) const override {
    return base_.neg(x % q_) + q_ * base_.neg(x / q_);
  }
  Elem mul_raw(Elem x, Elem y) const override {
    Elem a = x % q_, b = x / q_, c = y % q_, d = y / q_;
    Elem lo = base_.mul(a, c);
    Elem hi = base_.add(base_.mul(a, d), base_.mul(b, c));
    return lo + q_ * hi;
  }
  std::optional<Elem> inverse_raw(Elem x) const override {
    Elem a = x % q_, b = x / q_;
    if (!base_.is_unit(a)) return std::nullopt;
    Elem ai = base_.inverse(a);
    Elem hi = base_.neg(base_.mul(base_.mul(ai, b), ai));
    return ai + q_ * hi;
  }
  const FiniteRing& base() const { return base_; }

private:
  FiniteRing base_;
  Elem q_;
};

class ProductRep final : public RingRep {
public:
  ProductRep(std::vector<FiniteRing> factors, Elem order, std::string tag)
      : RingRep(RingKind::Product, order, std::move(tag)),
        factors_(std::move(factors)) {
    strides_.resize(factors_.size());
    Elem w = 1;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      strides_[i] = w;
      w *= factors_[i].order();
    }
    Elem one = 0;
    for (std::size_t i = 0; i < factors_.size(); ++i)
      one += factors_[i].one() * strides_[i];
    one_ = one;
  }

  Elem component(Elem a, std::size_t i) const {
    return (a / strides_[i]) % factors_[i].order();
  }

  Elem add_raw(Elem a, Elem b) const override {
    Elem out = 0;
    for (std::size_t i = 0; i < factors_.size(); ++i)
      out += factors_[i].add(component(a, i), component(b, i)) * strides_[i];
    return out;
  }
  Elem neg_raw(Elem a) const override {
    Elem out = 0;
    for (std::size_t i = 0; i < factors_.size(); ++i)
      out += factors_[i].neg(component(a, i)) * strides_[i];
    return out;
  }
  Elem mul_raw(Elem a, Elem b) const override {
    Elem out = 0;
    for (std::size_t i = 0; i < factors_.size(); ++i)
      out += factors_[i].mul(component(a, i), component(b, i)) * strides_[i];
    return out;
  }
  std::optional<Elem> inverse_raw(Elem a) const override {
    Elem out = 0;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      Elem c = component(a, i);
      if (!factors_[i].is_unit(c)) return std::nullopt;
      out += factors_[i].inverse(c) * strides_[i];
    }
    return out;
  }

  const std::vector<FiniteRing>& factors() const { return factors_; }
  const std::vector<Elem>& strides() const { return strides_; }

private:
  std::vector<FiniteRing> factors_;
  std::vector<Elem> strides_;
};

class QuotientRep final : public RingRep {
public:
  QuotientRep(FiniteRing parent, std::vector<Elem> reps, std::vector<Elem> coset_of,
              Elem order, std::string tag)
      : RingRep(RingKind::Quotient, order, std::move(tag)),
        parent_(std::move(parent)), reps_(std::move(reps)),
        coset_of_(std::move(coset_of)) {
    one_ = coset_of_[parent_.one()];
  }
  Elem add_raw(Elem a, Elem b) const override {
    return coset_of_[parent_.add(reps_[a], reps_[b])];
  }
  Elem neg_raw(Elem a) const override { return coset_of_[parent_.neg(reps_[a])]; }
  Elem mul_raw(Elem a, Elem b) const override {
    return coset_of_[parent_.mul(reps_[a], reps_[b])];
  }
  const FiniteRing& parent() const { return parent_; }
  const std::vector<Elem>& coset_of() const { return coset_of_; }

private:
  FiniteRing parent_;
  std::vector<Elem> reps_;
  std::vector<Elem> coset_of_;
};

}  // namespace
}  // namespace detail

using detail::RingRep;

FiniteRing::FiniteRing(std::shared_ptr<const detail::RingRep> rep) : rep_(std::move(rep)) {}

Elem FiniteRing::order() const { return rep_->order(); }
RingKind FiniteRing::kind() const { return rep_->kind(); }
const std::string& FiniteRing::tag() const { return rep_->tag(); }
Elem FiniteRing::one() const { return rep_->one(); }
Elem FiniteRing::add(Elem a, Elem b) const { return rep_->add(a, b); }
Elem FiniteRing::neg(Elem a) const { return rep_->neg(a); }
Elem FiniteRing::sub(Elem a, Elem b) const { return rep_->add(a, rep_->neg(b)); }
Elem FiniteRing::mul(Elem a, Elem b) const { return rep_->mul(a, b); }
bool FiniteRing::is_unit(Elem a) const { return rep_->is_unit(a); }
Elem FiniteRing::inverse(Elem a) const { return rep_->inverse(a); }
const std::vector<Elem>& FiniteRing::units() const { return rep_->units(); }

bool FiniteRing::is_field() const {
  return units().size() + 1 == order();
}

bool FiniteRing::is_commutative() const {
  const Elem n = order();
  for (Elem a = 0; a < n; ++a)
    for (Elem b = a + 1; b < n; ++b)
      if (mul(a, b) != mul(b, a)) return false;
  return true;
}

unsigned FiniteRing::zmod_n() const {
  auto* r = dynamic_cast<const detail::ZmodRep*>(rep_.get());
  if (!r) throw std::logic_error(tag() + ": not a Z/n ring");
  return r->n();
}
unsigned FiniteRing::gf_p() const {
  auto* r = dynamic_cast<const detail::GfRep*>(rep_.get());
  if (!r) throw std::logic_error(tag() + ": not a Galois field");
  return r->p();
}
unsigned FiniteRing::gf_k() const {
  auto* r = dynamic_cast<const detail::GfRep*>(rep_.get());
  if (!r) throw std::logic_error(tag() + ": not a Galois field");
  return r->k();
}
const std::vector<Elem>& FiniteRing::gf_modulus() const {
  auto* r = dynamic_cast<const detail::GfRep*>(rep_.get());
  if (!r) throw std::logic_error(tag() + ": not a Galois field");
  return r->modulus();
}
unsigned FiniteRing::matrix_dim() const {
  auto* r = dynamic_cast<const detail::MatrixRep*>(rep_.get());
  if (!r) throw std::logic_error(tag() + ": not a matrix ring");
  return r->n();
}
FiniteRing FiniteRing::matrix_base() const {
  auto* r = dynamic_cast<const detail::MatrixRep*>(rep_.get());
  if (!r) throw std::logic_error(tag() + ": not a matrix ring");
  return r->base();
}
Elem FiniteRing::matrix_entry(Elem a, unsigned row, unsigned col) const {
  auto* r = dynamic_cast<const detail::MatrixRep*>(rep_.get());
  if (!r) throw std::logic_error(tag() + ": not a matrix ring");
  std::array<Elem, 16> e{};
  r->decode(a, e.data());
  return e[row * r->n() + col];
}
Elem FiniteRing::matrix_encode(std::span<const Elem> entries) const {
  auto* r = dynamic_cast<const detail::MatrixRep*>(rep_.get());
  if (!r) throw std::logic_error(tag() + ": not a matrix ring");
  if (entries.size() != static_cast<std::size_t>(r->n()) * r->n())
    throw std::invalid_argument("matrix_encode: wrong entry count");
  return r->encode(entries.data());
}
FiniteRing FiniteRing::dual_base() const {
  auto* r = dynamic_cast<const detail::DualRep*>(rep_.get());
  if (!r) throw std::logic_error(tag() + ": not a dual-number ring");
  return r->base();
}
const std::vector<FiniteRing>& FiniteRing::factors() const {
  auto* r = dynamic_cast<const detail::ProductRep*>(rep_.get());
  if (!r) throw std::logic_error(tag() + ": not a product ring");
  return r->factors();
}
std::vector<Elem> FiniteRing::product_decode(Elem a) const {
  auto* r = dynamic_cast<const detail::ProductRep*>(rep_.get());
  if (!r) throw std::logic_error(tag() + ": not a product ring");
  std::vector<Elem> out(r->factors().size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = r->component(a, i);
  return out;
}
Elem FiniteRing::product_encode(std::span<const Elem> components) const {
  auto* r = dynamic_cast<const detail::ProductRep*>(rep_.get());
  if (!r) throw std::logic_error(tag() + ": not a product ring");
  if (components.size() != r->factors().size())
    throw std::invalid_argument("product_encode: wrong component count");
  Elem out = 0;
  for (std::size_t i = 0; i < components.size(); ++i) {
    if (components[i] >= r->factors()[i].order())
      throw std::invalid_argument("product_encode: component out of range");
    out += components[i] * r->strides()[i];
  }
  return out;
}
Elem FiniteRing::product_inject(std::size_t i, Elem component) const {
  auto* r = dynamic_cast<const detail::ProductRep*>(rep_.get());
  if (!r) throw std::logic_error(tag() + ": not a product ring");
  if (i >= r->factors().size()) throw std::invalid_argument("product_inject: bad index");
  return component * r->strides()[i];
}
FiniteRing FiniteRing::quotient_parent() const {
  auto* r = dynamic_cast<const detail::QuotientRep*>(rep_.get());
  if (!r) throw std::logic_error(tag() + ": not a quotient ring");
  return r->parent();
}

// --- constructors ---

FiniteRing make_zmod(unsigned n) {
  if (n < 2) throw std::invalid_argument("make_zmod: n must be >= 2");
  check_order_cap(n, "make_zmod");
  return FiniteRing(std::make_shared<detail::ZmodRep>(n));
}

FiniteRing make_gf(unsigned p, unsigned k) {
  if (!is_prime(p)) throw std::invalid_argument("make_gf: p must be prime");
  if (k < 1) throw std::invalid_argument("make_gf: k must be >= 1");
  std::uint64_t order = 1;
  for (unsigned i = 0; i < k; ++i) {
    order *= p;
    if (order > (1u << 30)) throw CapExceeded("make_gf: order overflow");
  }
  check_order_cap(order, "make_gf");
  // minimal monic irreducible of degree k
  detail::Poly modulus;
  if (k == 1) {
    modulus = {0, 1};
  } else {
    std::uint64_t count = order;  // p^k lower-coefficient combinations
    bool found = false;
    for (std::uint64_t code = 0; code < count && !found; ++code) {
      detail::Poly f(k + 1, 0);
      // most-significant-first comparison == ascending integer code with
      // c_{k-1} as the high digit
      std::uint64_t c = code;
      for (unsigned i = 0; i < k; ++i) {
        f[i] = static_cast<Elem>(c % p);
        c /= p;
      }
      f[k] = 1;
      if (detail::poly_irreducible(f, p)) {
        modulus = f;
        found = true;
      }
    }
    if (!found) throw std::logic_error("make_gf: no irreducible polynomial found");
  }
  std::string tag = k == 1 ? "GF(" + std::to_string(p) + ")"
                           : "GF(" + std::to_string(p) + "^" + std::to_string(k) + ")";
  return FiniteRing(std::make_shared<detail::GfRep>(p, k, std::move(modulus),
                                                    static_cast<Elem>(order), std::move(tag)));
}

FiniteRing make_matrix_ring(unsigned n, const FiniteRing& base_field) {
  if (n < 1 || n > 4) throw std::invalid_argument("make_matrix_ring: n must be in 1..4");
  if (!base_field.valid()) throw std::invalid_argument("make_matrix_ring: invalid base");
  if (!base_field.is_field())
    throw std::invalid_argument("make_matrix_ring: base ring is not a field");
  std::uint64_t order = 1;
  for (unsigned i = 0; i < n * n; ++i) {
    order *= base_field.order();
    if (order > (1u << 30)) throw CapExceeded("make_matrix_ring: order overflow");
  }
  check_order_cap(order, "make_matrix_ring");
  std::string tag = "M(" + std::to_string(n) + "," + base_field.tag() + ")";
  return FiniteRing(std::make_shared<detail::MatrixRep>(n, base_field,
                                                        static_cast<Elem>(order), std::move(tag)));
}

FiniteRing make_dual_numbers(const FiniteRing& base_field) {
  if (!base_field.valid()) throw std::invalid_argument("make_dual_numbers: invalid base");
  if (!base_field.is_field())
    throw std::invalid_argument("make_dual_numbers: base ring is not a field");
  std::uint64_t order = static_cast<std::uint64_t>(base_field.order()) * base_field.order();
  check_order_cap(order, "make_dual_numbers");
  std::string tag = "dual(" + base_field.tag() + ")";
  return FiniteRing(std::make_shared<detail::DualRep>(base_field,
                                                      static_cast<Elem>(order), std::move(tag)));
}

FiniteRing make_product(const std::vector<FiniteRing>& factors) {
  if (factors.empty()) throw std::invalid_argument("make_product: empty factor list");
  std::uint64_t order = 1;
  std::string tag;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (!factors[i].valid()) throw std::invalid_argument("make_product: invalid factor");
    order *= factors[i].order();
    if (order > (1u << 30)) throw CapExceeded("make_product: order overflow");
    if (i) tag += " x ";
    tag += factors[i].tag();
  }
  check_order_cap(order, "make_product");
  if (factors.size() == 1) return factors[0];
  return FiniteRing(std::make_shared<detail::ProductRep>(factors,
                                                         static_cast<Elem>(order), std::move(tag)));
}

// --- ideals, radical, quotient ---

Ideal jacobson_radical(const FiniteRing& R) {
  const Elem n = R.order();
  Ideal I;
  I.ring = R;
  I.mask.assign(n, 0);
  const Elem one = R.one();
  for (Elem x = 0; x < n; ++x) {
    bool in_rad = true;
    for (Elem r = 0; r < n && in_rad; ++r) {
      Elem t = R.sub(one, R.mul(r, x));
      if (!R.is_unit(t)) in_rad = false;
    }
    if (in_rad) {
      I.mask[x] = 1;
      I.members.push_back(x);
    }
  }
  return I;
}

bool is_two_sided_ideal(const Ideal& I) {
  const FiniteRing& R = I.ring;
  if (I.members.empty() || !I.contains(0)) return false;
  for (Elem a : I.members) {
    if (!I.contains(R.neg(a))) return false;
    for (Elem b : I.members)
      if (!I.contains(R.add(a, b))) return false;
    for (Elem r = 0; r < R.order(); ++r) {
      if (!I.contains(R.mul(r, a))) return false;
      if (!I.contains(R.mul(a, r))) return false;
    }
  }
  return true;
}

std::pair<FiniteRing, RingMapTable> quotient(const FiniteRing& R, const Ideal& I,
                                             const std::string& tag_hint) {
  if (!I.ring.same_ring(R)) throw std::invalid_argument("quotient: ideal belongs to another ring");
  if (!is_two_sided_ideal(I)) throw std::invalid_argument("quotient: not a two-sided ideal");
  const Elem n = R.order();
  std::vector<Elem> coset_of(n, n);
  std::vector<Elem> reps;
  for (Elem x = 0; x < n; ++x) {
    if (coset_of[x] != n) continue;
    Elem idx = static_cast<Elem>(reps.size());
    reps.push_back(x);  // minimal member, since we scan ascending
    for (Elem i : I.members) {
      Elem y = R.add(x, i);
      if (coset_of[y] != n && coset_of[y] != idx)
        throw std::logic_error("quotient: coset structure broken");
      coset_of[y] = idx;
    }
  }
  Elem q_order = static_cast<Elem>(reps.size());
  if (static_cast<std::size_t>(q_order) * I.members.size() != n)
    throw std::logic_error("quotient: cosets do not partition the ring");
  std::string suffix = tag_hint.empty() ? "I" + std::to_string(I.members.size()) : tag_hint;
  std::string tag = R.tag() + "/" + suffix;
  FiniteRing Q(std::make_shared<detail::QuotientRep>(R, reps, coset_of, q_order, std::move(tag)));
  RingMapTable pi = classify_map(R, Q, std::vector<Elem>(coset_of.begin(), coset_of.end()));
  if (pi.kind != MapKind::Homomorphism)
    throw std::logic_error("quotient: canonical projection failed to classify as a homomorphism");
  return {Q, pi};
}

// --- map classification ---

std::string to_string(MapKind kind) {
  switch (kind) {
    case MapKind::Homomorphism: return "homomorphism";
    case MapKind::AntiHomomorphism: return "anti-homomorphism";
    case MapKind::Jordan: return "jordan";
    case MapKind::AdditiveOnly: return "additive-only";
    case MapKind::None: return "none";
  }
  return "?";
}

bool RingMapTable::is_bijection() const {
  if (!source.valid() || !target.valid()) return false;
  if (source.order() != target.order() || table.size() != source.order()) return false;
  std::vector<char> seen(target.order(), 0);
  for (Elem v : table) {
    if (v >= target.order() || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

RingMapTable classify_map(const FiniteRing& src, const FiniteRing& dst,
                          std::vector<Elem> table) {
  if (table.size() != src.order())
    throw std::invalid_argument("classify_map: table size mismatch");
  for (Elem v : table)
    if (v >= dst.order()) throw std::invalid_argument("classify_map: value out of range");

  RingMapTable f;
  f.source = src;
  f.target = dst;
  f.table = std::move(table);

  const Elem n = src.order();
  bool additive = true;
  for (Elem a = 0; a < n && additive; ++a)
    for (Elem b = a; b < n; ++b)
      if (f.table[src.add(a, b)] != dst.add(f.table[a], f.table[b])) {
        additive = false;
        break;
      }
  if (!additive) {
    f.kind = MapKind::None;
    return f;
  }

  bool unital = f.table[src.one()] == dst.one();
  bool mult = true, anti = true;
  for (Elem a = 0; a < n && (mult || anti); ++a)
    for (Elem b = 0; b < n && (mult || anti); ++b) {
      Elem img = f.table[src.mul(a, b)];
      if (mult && img != dst.mul(f.table[a], f.table[b])) mult = false;
      if (anti && img != dst.mul(f.table[b], f.table[a])) anti = false;
    }

  if (unital && mult) {
    f.kind = MapKind::Homomorphism;
    f.anti_too = anti;
    return f;
  }
  if (unital && anti) {
    f.kind = MapKind::AntiHomomorphism;
    return f;
  }
  if (unital && jordan_identity_holds(f)) {
    f.kind = MapKind::Jordan;
    return f;
  }
  f.kind = MapKind::AdditiveOnly;
  return f;
}

bool jordan_identity_holds(const RingMapTable& f) {
  const FiniteRing& src = f.source;
  const FiniteRing& dst = f.target;
  const Elem n = src.order();
  for (Elem a = 0; a < n; ++a)
    for (Elem b = 0; b < n; ++b) {
      Elem aba = src.mul(src.mul(a, b), a);
      Elem rhs = dst.mul(dst.mul(f.table[a], f.table[b]), f.table[a]);
      if (f.table[aba] != rhs) return false;
    }
  return true;
}

// --- additive structure ---

Elem scalar_multiple(const FiniteRing& R, unsigned n, Elem x) {
  Elem acc = 0;
  Elem base = x;
  while (n) {
    if (n & 1) acc = R.add(acc, base);
    base = R.add(base, base);
    n >>= 1;
  }
  return acc;
}

namespace {

unsigned additive_order(const FiniteRing& R, Elem x) {
  unsigned k = 1;
  Elem y = x;
  while (y != 0) {
    y = R.add(y, x);
    ++k;
  }
  return k;
}

}  // namespace

AdditiveBasis additive_basis(const FiniteRing& R) {
  const Elem n = R.order();
  std::vector<unsigned> ord(n);
  for (Elem x = 0; x < n; ++x) ord[x] = additive_order(R, x);

  std::vector<unsigned> primes;
  {
    unsigned m = n;
    for (unsigned p = 2; p <= m; ++p)
      if (m % p == 0) {
        primes.push_back(p);
        while (m % p == 0) m /= p;
      }
  }

  AdditiveBasis basis;
  for (unsigned p : primes) {
    // p-primary component
    std::vector<Elem> comp;
    for (Elem x = 0; x < n; ++x) {
      unsigned o = ord[x];
      while (o % p == 0) o /= p;
      if (o == 1) comp.push_back(x);
    }
    std::vector<char> in_H(n, 0);
    std::vector<Elem> H{0};
    in_H[0] = 1;
    while (H.size() < comp.size()) {
      // element of maximal order in component/H
      Elem best = 0;
      unsigned best_k = 0;
      for (Elem x : comp) {
        if (in_H[x]) continue;
        unsigned k = 1;
        Elem y = x;
        while (!in_H[y]) {
          y = scalar_multiple(R, p, y);
          k *= p;
        }
        if (k > best_k) {
          best_k = k;
          best = x;
        }
      }
      // adjust so the cyclic piece meets H trivially
      Elem t = scalar_multiple(R, best_k, best);
      Elem g = best;
      bool adjusted = false;
      for (Elem h : H) {
        if (scalar_multiple(R, best_k, h) == t) {
          g = R.sub(best, h);
          adjusted = true;
          break;
        }
      }
      if (!adjusted || scalar_multiple(R, best_k, g) != 0)
        throw std::logic_error("additive_basis: basis extension failed");
      std::vector<Elem> H_new;
      H_new.reserve(H.size() * best_k);
      Elem step = 0;
      for (unsigned c = 0; c < best_k; ++c) {
        for (Elem h : H) H_new.push_back(R.add(h, step));
        step = R.add(step, g);
      }
      if (H_new.size() != H.size() * best_k)
        throw std::logic_error("additive_basis: span size mismatch");
      for (Elem h : H_new)
        if (!in_H[h]) in_H[h] = 1;
      {
        std::size_t distinct = 0;
        for (Elem x = 0; x < n; ++x) distinct += in_H[x];
        if (distinct != H_new.size())
          throw std::logic_error("additive_basis: span not direct");
      }
      H = std::move(H_new);
      basis.gens.push_back(g);
      basis.orders.push_back(best_k);
    }
  }
  std::uint64_t total = 1;
  for (unsigned o : basis.orders) total *= o;
  if (total != n) throw std::logic_error("additive_basis: order product mismatch");
  return basis;
}

}  // namespace ringline
