#include "ringline/morphisms.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ringline/errors.hpp"
#include "ringline/gf_linalg.hpp"
#include "ringline/grassmann.hpp"

namespace ringline {

namespace {

constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();

void require_same_ring(const FiniteRing& a, const FiniteRing& b, const char* what) {
  if (!a.same_ring(b))
    throw std::invalid_argument(std::string(what) + ": ring mismatch");
}

LinePtr resolve_line(const FiniteRing& R, LinePtr given, const char* what) {
  if (!given) return ProjectiveLine::enumerate_points(R);
  require_same_ring(given->ring(), R, what);
  return given;
}

std::size_t image_index(const ProjectiveLine& L, Elem a, Elem b, const char* what) {
  auto idx = L.try_index_of(a, b);
  if (!idx)
    throw TheoremViolation(std::string(what) + ": image pair is not admissible");
  return *idx;
}

}  // namespace

// ---------------------------------------------------------------------------
// RingMat2
// ---------------------------------------------------------------------------

RingMat2 RingMat2::identity(const FiniteRing& R) {
  return RingMat2{R, R.one(), 0, 0, R.one()};
}

RingMat2 mat2_mul(const RingMat2& x, const RingMat2& y) {
  require_same_ring(x.ring, y.ring, "mat2_mul");
  const FiniteRing& R = x.ring;
  return RingMat2{R,
                  R.add(R.mul(x.a, y.a), R.mul(x.b, y.c)),
                  R.add(R.mul(x.a, y.b), R.mul(x.b, y.d)),
                  R.add(R.mul(x.c, y.a), R.mul(x.d, y.c)),
                  R.add(R.mul(x.c, y.b), R.mul(x.d, y.d))};
}

std::pair<Elem, Elem> mat2_row_action(Elem x, Elem y, const RingMat2& m) {
  const FiniteRing& R = m.ring;
  return {R.add(R.mul(x, m.a), R.mul(y, m.c)),
          R.add(R.mul(x, m.b), R.mul(y, m.d))};
}

namespace {

// Solves m * col = target (a column system) by scanning R^2.
std::optional<std::pair<Elem, Elem>> solve_column(const RingMat2& m, Elem t1, Elem t2) {
  const FiniteRing& R = m.ring;
  const Elem n = R.order();
  for (Elem x = 0; x < n; ++x)
    for (Elem y = 0; y < n; ++y)
      if (R.add(R.mul(m.a, x), R.mul(m.b, y)) == t1 &&
          R.add(R.mul(m.c, x), R.mul(m.d, y)) == t2)
        return std::make_pair(x, y);
  return std::nullopt;
}

}  // namespace

std::optional<RingMat2> mat2_inverse(const RingMat2& m) {
  const FiniteRing& R = m.ring;
  if (!R.valid()) throw std::invalid_argument("mat2_inverse: empty matrix");

  if (R.is_commutative()) {
    Elem det = R.sub(R.mul(m.a, m.d), R.mul(m.b, m.c));
    if (!R.is_unit(det)) return std::nullopt;
    Elem di = R.inverse(det);
    return RingMat2{R, R.mul(di, m.d), R.neg(R.mul(di, m.b)),
                    R.neg(R.mul(di, m.c)), R.mul(di, m.a)};
  }

  if (R.kind() == RingKind::Matrix) {
    const FiniteRing base = R.matrix_base();
    const unsigned n = R.matrix_dim();
    FieldPtr F = FieldTable::get(base);
    Mat big(2 * n, 2 * n);
    const Elem es[2][2] = {{m.a, m.b}, {m.c, m.d}};
    for (unsigned bi = 0; bi < 2; ++bi)
      for (unsigned bj = 0; bj < 2; ++bj)
        for (unsigned r = 0; r < n; ++r)
          for (unsigned c = 0; c < n; ++c)
            big.at(bi * n + r, bj * n + c) = R.matrix_entry(es[bi][bj], r, c);
    auto inv = mat_inverse(*F, big);
    if (!inv) return std::nullopt;
    Elem blocks[2][2];
    std::vector<Elem> entries(static_cast<std::size_t>(n) * n);
    for (unsigned bi = 0; bi < 2; ++bi)
      for (unsigned bj = 0; bj < 2; ++bj) {
        for (unsigned r = 0; r < n; ++r)
          for (unsigned c = 0; c < n; ++c)
            entries[r * n + c] = inv->at(bi * n + r, bj * n + c);
        blocks[bi][bj] = R.matrix_encode(entries);
      }
    return RingMat2{R, blocks[0][0], blocks[0][1], blocks[1][0], blocks[1][1]};
  }

  if (R.kind() == RingKind::Product) {
    const auto& factors = R.factors();
    std::vector<Elem> ia(factors.size()), ib(factors.size()), ic(factors.size()),
        id(factors.size());
    auto ca = R.product_decode(m.a), cb = R.product_decode(m.b),
         cc = R.product_decode(m.c), cd = R.product_decode(m.d);
    for (std::size_t i = 0; i < factors.size(); ++i) {
      auto inv = mat2_inverse(RingMat2{factors[i], ca[i], cb[i], cc[i], cd[i]});
      if (!inv) return std::nullopt;
      ia[i] = inv->a;
      ib[i] = inv->b;
      ic[i] = inv->c;
      id[i] = inv->d;
    }
    return RingMat2{R, R.product_encode(ia), R.product_encode(ib),
                    R.product_encode(ic), R.product_encode(id)};
  }

  // Generic fallback: solve m * x = e1 and m * x = e2 columnwise; a right
  // inverse of a square matrix over a finite ring is two-sided.
  auto col1 = solve_column(m, R.one(), 0);
  if (!col1) return std::nullopt;
  auto col2 = solve_column(m, 0, R.one());
  if (!col2) return std::nullopt;
  RingMat2 inv{R, col1->first, col2->first, col1->second, col2->second};
  RingMat2 check = mat2_mul(inv, m);
  if (check.a != R.one() || check.b != 0 || check.c != 0 || check.d != R.one())
    return std::nullopt;
  return inv;
}

bool mat2_invertible(const RingMat2& m) { return mat2_inverse(m).has_value(); }

// ---------------------------------------------------------------------------
// Point maps
// ---------------------------------------------------------------------------

std::string to_string(MapProvenance p) {
  switch (p) {
    case MapProvenance::Projectivity: return "projectivity";
    case MapProvenance::HomInduced: return "hom-induced";
    case MapProvenance::AntihomInduced: return "antihom-induced";
    case MapProvenance::JordanInduced: return "jordan-induced";
    case MapProvenance::Composite: return "composite";
    case MapProvenance::Raw: return "raw";
  }
  return "?";
}

bool PointMap::is_bijection() const {
  if (!source || !target) return false;
  if (table.size() != source->size() || table.size() != target->size())
    return false;
  std::vector<char> seen(table.size(), 0);
  for (std::size_t v : table) {
    if (v >= table.size() || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

PointMap raw_point_map(LinePtr source, LinePtr target,
                       std::vector<std::size_t> table) {
  if (!source || !target)
    throw std::invalid_argument("raw_point_map: missing line");
  if (table.size() != source->size())
    throw std::invalid_argument("raw_point_map: table size differs from the source line");
  for (std::size_t v : table)
    if (v >= target->size())
      throw std::invalid_argument("raw_point_map: image index out of range");
  return PointMap{std::move(source), std::move(target), std::move(table),
                  MapProvenance::Raw};
}

PointMap projectivity(const LinePtr& L, const RingMat2& gamma) {
  if (!L) throw std::invalid_argument("projectivity: missing line");
  require_same_ring(gamma.ring, L->ring(), "projectivity");
  if (!mat2_invertible(gamma))
    throw std::invalid_argument("projectivity: matrix is singular");
  std::vector<std::size_t> table(L->size());
  for (std::size_t i = 0; i < L->size(); ++i) {
    const ProjPoint& p = L->point(i);
    auto [x, y] = mat2_row_action(p.a, p.b, gamma);
    table[i] = image_index(*L, x, y, "projectivity");
  }
  return PointMap{L, L, std::move(table), MapProvenance::Projectivity};
}

PointMap induced_by_hom(const RingMapTable& alpha, LinePtr source, LinePtr target) {
  if (alpha.kind != MapKind::Homomorphism)
    throw std::invalid_argument("induced_by_hom: map is not a unital homomorphism");
  LinePtr L = resolve_line(alpha.source, std::move(source), "induced_by_hom");
  LinePtr M = resolve_line(alpha.target, std::move(target), "induced_by_hom");
  std::vector<std::size_t> table(L->size());
  for (std::size_t i = 0; i < L->size(); ++i) {
    const ProjPoint& p = L->point(i);
    table[i] = image_index(*M, alpha(p.a), alpha(p.b), "induced_by_hom");
  }
  return PointMap{std::move(L), std::move(M), std::move(table),
                  MapProvenance::HomInduced};
}

PointMap induced_by_antihom(const RingMapTable& alpha, LinePtr source, LinePtr target) {
  const bool anti = alpha.kind == MapKind::AntiHomomorphism ||
                    (alpha.kind == MapKind::Homomorphism && alpha.anti_too);
  if (!anti)
    throw std::invalid_argument(
        "induced_by_antihom: map is not a unital anti-homomorphism");
  LinePtr L = resolve_line(alpha.source, std::move(source), "induced_by_antihom");
  LinePtr M = resolve_line(alpha.target, std::move(target), "induced_by_antihom");
  const FiniteRing& R = L->ring();
  const FiniteRing& T = M->ring();

  // Image point from one completion: (v, w) is the second column of the
  // inverse, i.e. the unique solution of a*v + b*w = 0, c*v + d*w = 1.
  auto image_from = [&](const RingMat2& completion) {
    auto inv = mat2_inverse(completion);
    if (!inv)
      throw TheoremViolation("induced_by_antihom: completion is not invertible");
    Elem v = inv->b, w = inv->d;
    return image_index(*M, T.neg(alpha(w)), alpha(v), "induced_by_antihom");
  };

  // A unit other than 1, used to produce a genuinely different completion.
  Elem other_unit = R.one();
  for (Elem u : R.units())
    if (u != R.one()) {
      other_unit = u;
      break;
    }

  std::vector<std::size_t> table(L->size());
  for (std::size_t i = 0; i < L->size(); ++i) {
    const ProjPoint& p = L->point(i);
    RingMat2 m1{R, p.a, p.b, p.c, p.d};
    std::size_t idx = image_from(m1);
    // Row operation: still a completion of (a, b).
    RingMat2 m2{R, p.a, p.b, R.add(p.c, p.a), R.add(p.d, p.b)};
    if (image_from(m2) != idx)
      throw TheoremViolation(
          "induced_by_antihom: image depends on the completion choice");
    if (other_unit != R.one()) {
      RingMat2 m3{R, p.a, p.b, R.mul(other_unit, p.c), R.mul(other_unit, p.d)};
      if (image_from(m3) != idx)
        throw TheoremViolation(
            "induced_by_antihom: image depends on the completion choice");
    }
    table[i] = idx;
  }
  return PointMap{std::move(L), std::move(M), std::move(table),
                  MapProvenance::AntihomInduced};
}

PointMap induced_by_jordan(const RingMapTable& alpha, LinePtr source, LinePtr target) {
  if (alpha.kind != MapKind::Homomorphism &&
      alpha.kind != MapKind::AntiHomomorphism && alpha.kind != MapKind::Jordan)
    throw std::invalid_argument(
        "induced_by_jordan: map is not a unital Jordan homomorphism");
  LinePtr L = resolve_line(alpha.source, std::move(source), "induced_by_jordan");
  LinePtr M = resolve_line(alpha.target, std::move(target), "induced_by_jordan");
  const FiniteRing& T = M->ring();
  std::vector<std::size_t> table(L->size());
  for (std::size_t i = 0; i < L->size(); ++i) {
    const auto& witnesses = L->bartolone_witnesses(i);
    if (witnesses.empty())
      throw TheoremViolation(
          "induced_by_jordan: point has no parametrization witness");
    std::size_t idx = kUnset;
    for (const auto& [a, b] : witnesses) {
      Elem ia = alpha(a), ib = alpha(b);
      std::size_t j =
          image_index(*M, T.sub(T.mul(ia, ib), T.one()), ia, "induced_by_jordan");
      if (idx == kUnset)
        idx = j;
      else if (j != idx)
        throw TheoremViolation(
            "induced_by_jordan: image depends on the parametrization witness");
    }
    table[i] = idx;
  }
  return PointMap{std::move(L), std::move(M), std::move(table),
                  MapProvenance::JordanInduced};
}

PointMap compose_point_maps(const PointMap& f, const PointMap& g) {
  if (!f.target || !g.source)
    throw std::invalid_argument("compose_point_maps: missing line");
  require_same_ring(f.target->ring(), g.source->ring(), "compose_point_maps");
  std::vector<std::size_t> table(f.table.size());
  for (std::size_t i = 0; i < table.size(); ++i) table[i] = g.table[f.table[i]];
  return PointMap{f.source, g.target, std::move(table), MapProvenance::Composite};
}

PointMap inverse_point_map(const PointMap& f) {
  if (!f.is_bijection())
    throw std::invalid_argument("inverse_point_map: map is not a bijection");
  std::vector<std::size_t> table(f.table.size());
  for (std::size_t i = 0; i < f.table.size(); ++i) table[f.table[i]] = i;
  return PointMap{f.target, f.source, std::move(table), MapProvenance::Composite};
}

std::optional<PointMap> induced_quotient_map(const PointMap& f) {
  LinePtr Lq = f.source->quotient_line();
  LinePtr Mq = f.target->quotient_line();
  std::vector<std::size_t> table(Lq->size(), kUnset);
  for (std::size_t i = 0; i < f.table.size(); ++i) {
    std::size_t s = f.source->project_point(i);
    std::size_t t = f.target->project_point(f.table[i]);
    if (table[s] == kUnset)
      table[s] = t;
    else if (table[s] != t)
      return std::nullopt;
  }
  return PointMap{std::move(Lq), std::move(Mq), std::move(table),
                  MapProvenance::Raw};
}

// ---------------------------------------------------------------------------
// Predicates
// ---------------------------------------------------------------------------

bool is_dis_morphism(const PointMap& f) {
  const BitMatrix& A = f.source->distant_matrix();
  const BitMatrix& B = f.target->distant_matrix();
  const std::size_t n = f.table.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (A.get(i, j) && !B.get(f.table[i], f.table[j])) return false;
  return true;
}

bool is_dis_isomorphism(const PointMap& f) {
  if (!f.is_bijection()) return false;
  const BitMatrix& A = f.source->distant_matrix();
  const BitMatrix& B = f.target->distant_matrix();
  const std::size_t n = f.table.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (A.get(i, j) != B.get(f.table[i], f.table[j])) return false;
  return true;
}

bool is_par_isomorphism(const PointMap& f) {
  if (!f.is_bijection()) return false;
  const std::size_t n = f.table.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (f.source->parallel(i, j) != f.target->parallel(f.table[i], f.table[j]))
        return false;
  return true;
}

bool is_adj_isomorphism(const PointMap& f) {
  if (!f.is_bijection()) return false;
  const BitMatrix& A = f.source->adjacency_matrix();
  const BitMatrix& B = f.target->adjacency_matrix();
  const std::size_t n = f.table.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (A.get(i, j) != B.get(f.table[i], f.table[j])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Enumeration of distant-isomorphisms
// ---------------------------------------------------------------------------

namespace {

// Backtracking over graph isomorphisms of the distant graphs.  Source
// vertices are visited in an order that keeps each new vertex maximally
// constrained by the already-assigned ones.
struct DisIsoSearch {
  const BitMatrix& A;
  const BitMatrix& B;
  std::size_t n;
  std::vector<std::size_t> order;
  std::vector<std::size_t> deg_a, deg_b;
  std::vector<std::size_t> img;
  std::vector<char> used;
  std::uint64_t count = 0;
  std::vector<std::vector<std::size_t>>* sink = nullptr;

  DisIsoSearch(const BitMatrix& a, const BitMatrix& b)
      : A(a), B(b), n(a.size()), img(n, kUnset), used(n, 0) {
    deg_a.resize(n);
    deg_b.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      deg_a[i] = A.row_count_ones(i);
      deg_b[i] = B.row_count_ones(i);
    }
    // Greedy order: most already-ordered neighbors first, degree as a
    // tiebreaker.
    std::vector<char> placed(n, 0);
    std::vector<std::size_t> anchored(n, 0);
    for (std::size_t step = 0; step < n; ++step) {
      std::size_t best = kUnset;
      for (std::size_t v = 0; v < n; ++v) {
        if (placed[v]) continue;
        if (best == kUnset || anchored[v] > anchored[best] ||
            (anchored[v] == anchored[best] && deg_a[v] > deg_a[best]))
          best = v;
      }
      placed[best] = 1;
      order.push_back(best);
      for (std::size_t v = 0; v < n; ++v)
        if (!placed[v] && A.get(best, v)) ++anchored[v];
    }
  }

  void run(std::size_t depth) {
    if (depth == n) {
      ++count;
      if (sink) {
        std::vector<std::size_t> table(n);
        for (std::size_t v = 0; v < n; ++v) table[v] = img[v];
        sink->push_back(std::move(table));
      }
      return;
    }
    const std::size_t v = order[depth];
    for (std::size_t w = 0; w < n; ++w) {
      if (used[w] || deg_a[v] != deg_b[w]) continue;
      bool ok = true;
      for (std::size_t k = 0; k < depth && ok; ++k) {
        const std::size_t u = order[k];
        if (A.get(v, u) != B.get(w, img[u])) ok = false;
      }
      if (!ok) continue;
      img[v] = w;
      used[w] = 1;
      run(depth + 1);
      used[w] = 0;
      img[v] = kUnset;
    }
  }
};

}  // namespace

std::vector<PointMap> enumerate_dis_isomorphisms(const LinePtr& L, const LinePtr& M,
                                                 std::size_t cap) {
  if (!L || !M) throw std::invalid_argument("enumerate_dis_isomorphisms: missing line");
  if (L->size() > cap || M->size() > cap)
    throw CapExceeded("enumerate_dis_isomorphisms: line exceeds " +
                      std::to_string(cap) + " points");
  if (L->size() != M->size()) return {};
  std::vector<std::vector<std::size_t>> tables;
  DisIsoSearch search(L->distant_matrix(), M->distant_matrix());
  search.sink = &tables;
  search.run(0);
  std::sort(tables.begin(), tables.end());
  std::vector<PointMap> out;
  out.reserve(tables.size());
  for (auto& t : tables)
    out.push_back(PointMap{L, M, std::move(t), MapProvenance::Raw});
  return out;
}

std::uint64_t count_dis_automorphisms(const LinePtr& L, std::size_t cap) {
  if (!L) throw std::invalid_argument("count_dis_automorphisms: missing line");
  if (L->size() > cap)
    throw CapExceeded("count_dis_automorphisms: line exceeds " +
                      std::to_string(cap) + " points");
  DisIsoSearch search(L->distant_matrix(), L->distant_matrix());
  search.run(0);
  return search.count;
}

// ---------------------------------------------------------------------------
// Factorization over matrix rings
// ---------------------------------------------------------------------------

std::string to_string(CertificateKind k) {
  return k == CertificateKind::Isomorphism ? "isomorphism" : "anti-isomorphism";
}

PointMap certificate_point_map(const DecompositionCertificate& cert,
                               LinePtr source, LinePtr target) {
  LinePtr L = resolve_line(cert.alpha.source, std::move(source), "certificate_point_map");
  LinePtr M = resolve_line(cert.alpha.target, std::move(target), "certificate_point_map");
  PointMap base = cert.kind == CertificateKind::Isomorphism
                      ? induced_by_hom(cert.alpha, L, M)
                      : induced_by_antihom(cert.alpha, L, M);
  PointMap out = compose_point_maps(base, projectivity(M, cert.gamma));
  return out;
}

DecompositionCertificate factorize_dis_automorphism(const PointMap& f) {
  const LinePtr& L = f.source;
  const LinePtr& M = f.target;
  if (!L || !M) throw std::invalid_argument("factorize_dis_automorphism: missing line");
  if (!L->has_subspace_model() || !M->has_subspace_model())
    throw std::invalid_argument(
        "factorize_dis_automorphism: lines must be over matrix rings over fields");
  const unsigned n = L->model_block_dim();
  if (n < 2 || M->model_block_dim() != n)
    throw std::invalid_argument(
        "factorize_dis_automorphism: matrix dimension must be at least 2 on both sides");
  const FieldPtr& Ft = M->model_field();
  if (L->model_field()->q() != Ft->q())
    throw std::invalid_argument("factorize_dis_automorphism: base fields differ");
  if (!is_dis_isomorphism(f))
    throw std::invalid_argument(
        "factorize_dis_automorphism: map is not a distant-isomorphism");

  const std::size_t N = L->size();
  const std::size_t d = 2 * static_cast<std::size_t>(n);

  // Kind: the image of one full pencil-star either has an (n-1)-dimensional
  // common intersection (images again form a star) or spans an
  // (n+1)-dimensional subspace (images form a top).
  std::size_t mate = kUnset;
  for (std::size_t j = 1; j < N && mate == kUnset; ++j)
    if (dim_intersection(L->point_subspace(0), L->point_subspace(j)) == n - 1)
      mate = j;
  if (mate == kUnset)
    throw TheoremViolation("factorize_dis_automorphism: no adjacent point pair");
  Subspace center =
      subspace_intersection(L->point_subspace(0), L->point_subspace(mate));
  bool have_meet = false, have_join = false;
  Subspace meet, join;
  for (std::size_t i = 0; i < N; ++i) {
    if (dim_intersection(center, L->point_subspace(i)) != n - 1) continue;
    const Subspace& y = M->point_subspace(f.table[i]);
    meet = have_meet ? subspace_intersection(meet, y) : y;
    join = have_join ? subspace_sum(join, y) : y;
    have_meet = have_join = true;
  }
  CertificateKind kind;
  if (meet.dim() == n - 1)
    kind = CertificateKind::Isomorphism;
  else if (join.dim() == n + 1)
    kind = CertificateKind::AntiIsomorphism;
  else
    throw TheoremViolation(
        "factorize_dis_automorphism: star image is neither a star nor a top");

  // Subspace-level map induced by a semilinear bijection of K^(2n): in the
  // anti case the map is first composed with the annihilator involution.
  std::vector<std::size_t> semi(N);
  for (std::size_t i = 0; i < N; ++i) {
    if (kind == CertificateKind::Isomorphism)
      semi[i] = f.table[i];
    else
      semi[i] = f.table[L->index_of_subspace(annihilator(L->point_subspace(i)))];
  }

  // Image of a projective point: intersection of the images of all model
  // subspaces through it.
  auto point_image = [&](const std::vector<Elem>& v) {
    Subspace acc;
    bool first = true;
    for (std::size_t i = 0; i < N; ++i) {
      if (!L->point_subspace(i).contains(v)) continue;
      const Subspace& y = M->point_subspace(semi[i]);
      acc = first ? y : subspace_intersection(acc, y);
      first = false;
    }
    if (first || acc.dim() != 1)
      throw TheoremViolation(
          "factorize_dis_automorphism: induced point map is not projective");
    std::vector<Elem> row(d);
    for (std::size_t c = 0; c < d; ++c) row[c] = acc.basis().at(0, c);
    return row;
  };

  // Frame solving: images of the coordinate axes fix the matrix rows up to
  // scalars, the image of the unit point fixes the scalars.
  std::vector<std::vector<Elem>> rows(d);
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<Elem> e(d, 0);
    e[i] = 1;
    rows[i] = point_image(e);
  }
  std::vector<Elem> ones(d, 1);
  std::vector<Elem> s = point_image(ones);
  Mat cols(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t r = 0; r < d; ++r) cols.at(r, i) = rows[i][r];
  auto lambda = solve(*Ft, cols, s);
  if (!lambda)
    throw TheoremViolation("factorize_dis_automorphism: frame system is unsolvable");
  Mat S(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    if ((*lambda)[i] == 0)
      throw TheoremViolation(
          "factorize_dis_automorphism: degenerate frame image");
    for (std::size_t c = 0; c < d; ++c) S.at(i, c) = Ft->mul((*lambda)[i], rows[i][c]);
  }

  // Accompanying field isomorphism: the unique one making X -> X^beta * S
  // reproduce the subspace map everywhere.  Unital additive bijections of
  // finite fields satisfying the Jordan identity are exactly the field
  // isomorphisms, so the Jordan enumeration lists the candidates.
  std::vector<Elem> beta_tbl;
  for (const RingMapTable& cand :
       enumerate_jordan_isomorphisms(L->ring().matrix_base(), M->ring().matrix_base())) {
    bool ok = true;
    for (std::size_t i = 0; i < N && ok; ++i) {
      const Mat& basis = L->point_subspace(i).basis();
      Mat twisted(basis.rows, basis.cols);
      for (std::size_t r = 0; r < basis.rows; ++r)
        for (std::size_t c = 0; c < basis.cols; ++c)
          twisted.at(r, c) = cand(basis.at(r, c));
      Subspace image(Ft, d, mat_mul(*Ft, twisted, S));
      if (!(image == M->point_subspace(semi[i]))) ok = false;
    }
    if (ok) {
      beta_tbl.assign(cand.table.begin(), cand.table.end());
      break;
    }
  }
  if (beta_tbl.empty())
    throw TheoremViolation(
        "factorize_dis_automorphism: no field isomorphism matches the frame");

  // Ring map: entrywise beta, composed with transposition in the anti case.
  const FiniteRing& R = L->ring();
  const FiniteRing& T = M->ring();
  std::vector<Elem> alpha_tbl(R.order());
  std::vector<Elem> entries(static_cast<std::size_t>(n) * n);
  for (Elem x = 0; x < R.order(); ++x) {
    for (unsigned r = 0; r < n; ++r)
      for (unsigned c = 0; c < n; ++c) {
        Elem v = beta_tbl[R.matrix_entry(x, r, c)];
        if (kind == CertificateKind::Isomorphism)
          entries[r * n + c] = v;
        else
          entries[c * n + r] = v;
      }
    alpha_tbl[x] = T.matrix_encode(entries);
  }
  RingMapTable alpha = classify_map(R, T, std::move(alpha_tbl));
  const bool alpha_ok =
      kind == CertificateKind::Isomorphism
          ? alpha.kind == MapKind::Homomorphism
          : (alpha.kind == MapKind::AntiHomomorphism ||
             (alpha.kind == MapKind::Homomorphism && alpha.anti_too));
  if (!alpha_ok)
    throw TheoremViolation(
        "factorize_dis_automorphism: reconstructed ring map has the wrong kind");

  // Matrix part from the blocks of S.
  auto block = [&](std::size_t bi, std::size_t bj, bool negate) {
    for (unsigned r = 0; r < n; ++r)
      for (unsigned c = 0; c < n; ++c) {
        Elem v = S.at(bi * n + r, bj * n + c);
        entries[r * n + c] = negate ? Ft->neg(v) : v;
      }
    return T.matrix_encode(entries);
  };
  RingMat2 gamma{T, 0, 0, 0, 0};
  if (kind == CertificateKind::Isomorphism) {
    gamma.a = block(0, 0, false);
    gamma.b = block(0, 1, false);
    gamma.c = block(1, 0, false);
    gamma.d = block(1, 1, false);
  } else {
    gamma.a = block(1, 0, true);
    gamma.b = block(1, 1, true);
    gamma.c = block(0, 0, false);
    gamma.d = block(0, 1, false);
  }
  if (!mat2_invertible(gamma))
    throw TheoremViolation("factorize_dis_automorphism: reconstructed matrix is singular");

  DecompositionCertificate cert{kind, std::move(alpha), gamma, {}, {}};
  PointMap rebuilt = certificate_point_map(cert, L, M);
  if (rebuilt.table != f.table)
    throw TheoremViolation(
        "factorize_dis_automorphism: certificate fails to recompose the map");
  return cert;
}

// ---------------------------------------------------------------------------
// Product decomposition
// ---------------------------------------------------------------------------

ProductDecomposition decompose_product_dis_iso(const PointMap& f) {
  const LinePtr& L = f.source;
  const LinePtr& M = f.target;
  if (!L || !M) throw std::invalid_argument("decompose_product_dis_iso: missing line");
  if (L->ring().kind() != RingKind::Product || M->ring().kind() != RingKind::Product)
    throw std::invalid_argument("decompose_product_dis_iso: rings must be products");
  if (!is_dis_isomorphism(f))
    throw std::invalid_argument(
        "decompose_product_dis_iso: map is not a distant-isomorphism");

  const auto& src_lines = L->component_lines();
  const auto& tgt_lines = M->component_lines();
  auto grassmannians = [](const std::vector<LinePtr>& lines) {
    std::vector<std::shared_ptr<const GrassmannSpace>> out;
    for (const auto& cl : lines) {
      if (!cl->has_subspace_model())
        throw std::invalid_argument(
            "decompose_product_dis_iso: factors must be matrix rings over fields");
      out.push_back(std::make_shared<GrassmannSpace>(cl->model_field(),
                                                     cl->model_block_dim()));
    }
    return out;
  };
  auto gs_src = grassmannians(src_lines);
  auto gs_tgt = grassmannians(tgt_lines);
  SegreGrassmann sg_src(gs_src), sg_tgt(gs_tgt);

  Collineation coll;
  coll.source = std::make_shared<PartialLinearSpace>(sg_src.space());
  coll.target = std::make_shared<PartialLinearSpace>(sg_tgt.space());
  coll.table.resize(L->size());
  for (std::size_t i = 0; i < L->size(); ++i)
    coll.table[product_psi(*L, i, sg_src)] = product_psi(*M, f.table[i], sg_tgt);

  auto factor_spaces = [](const auto& gs) {
    std::vector<SpacePtr> out;
    for (const auto& g : gs)
      out.push_back(std::make_shared<PartialLinearSpace>(g->space()));
    return out;
  };
  ProductCollineationParts parts = decompose_product_collineation(
      coll, factor_spaces(gs_src), factor_spaces(gs_tgt));

  ProductDecomposition out;
  out.sigma = parts.sigma;
  for (std::size_t k = 0; k < src_lines.size(); ++k) {
    const std::size_t sk = parts.sigma[k];
    const LinePtr& ck = src_lines[k];
    const LinePtr& dk = tgt_lines[sk];
    std::vector<std::size_t> table(ck->size());
    for (std::size_t j = 0; j < ck->size(); ++j) {
      std::size_t gi = gs_src[k]->index_of(ck->point_subspace(j));
      std::size_t gj = parts.components[k].table[gi];
      table[j] = dk->index_of_subspace(gs_tgt[sk]->subspace(gj));
    }
    PointMap comp{ck, dk, std::move(table), MapProvenance::Raw};
    if (!is_dis_isomorphism(comp))
      throw TheoremViolation(
          "decompose_product_dis_iso: component map is not a distant-isomorphism");
    out.components.push_back(std::move(comp));
  }

  // Componentwise recomposition must reproduce f exactly.
  std::vector<std::size_t> img(src_lines.size());
  for (std::size_t i = 0; i < L->size(); ++i) {
    auto comps = L->split_product_point(i);
    for (std::size_t k = 0; k < comps.size(); ++k)
      img[parts.sigma[k]] = out.components[k].table[comps[k]];
    if (M->join_product_point(img) != f.table[i])
      throw TheoremViolation(
          "decompose_product_dis_iso: components fail to recompose the map");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Jordan isomorphisms
// ---------------------------------------------------------------------------

namespace {

unsigned additive_order(const FiniteRing& R, Elem x) {
  unsigned k = 1;
  Elem s = x;
  while (s != 0) {
    s = R.add(s, x);
    ++k;
  }
  return x == 0 ? 1 : k;
}

}  // namespace

std::vector<RingMapTable> enumerate_jordan_isomorphisms(const FiniteRing& R,
                                                        const FiniteRing& S,
                                                        std::size_t cap) {
  if (!R.valid() || !S.valid())
    throw std::invalid_argument("enumerate_jordan_isomorphisms: empty ring");
  if (R.order() > cap || S.order() > cap)
    throw CapExceeded("enumerate_jordan_isomorphisms: ring exceeds " +
                      std::to_string(cap) + " elements");
  if (R.order() != S.order()) return {};
  const Elem n = R.order();

  std::vector<unsigned> ord_src(n), ord_tgt(n);
  for (Elem x = 0; x < n; ++x) {
    ord_src[x] = additive_order(R, x);
    ord_tgt[x] = additive_order(S, x);
  }

  AdditiveBasis basis = additive_basis(R);
  const std::size_t k = basis.gens.size();

  // Mixed-radix coordinates of every element over the basis.
  std::vector<std::vector<unsigned>> coord(n);
  {
    std::vector<unsigned> digits(k, 0);
    Elem val = 0;
    for (;;) {
      coord[val] = digits;
      std::size_t t = 0;
      while (t < k) {
        ++digits[t];
        val = R.add(val, basis.gens[t]);
        if (digits[t] < basis.orders[t]) break;
        digits[t] = 0;
        ++t;
      }
      if (t == k) break;
    }
  }

  // Assign generators that contribute to 1 first, so the 1 -> 1 constraint
  // prunes early.
  std::vector<std::size_t> gen_order(k);
  for (std::size_t i = 0; i < k; ++i) gen_order[i] = i;
  std::stable_partition(gen_order.begin(), gen_order.end(),
                        [&](std::size_t i) { return coord[R.one()][i] != 0; });

  // Subgroup elements reachable from the first t generators, grown depth by
  // depth; defined[] marks membership, img[] holds the partial map.
  std::vector<Elem> members{0};
  std::vector<char> defined(n, 0), used(n, 0);
  std::vector<Elem> img(n, 0);
  defined[0] = 1;
  used[0] = 1;
  bool one_checked = false;

  std::vector<std::vector<Elem>> tables;

  // Depth-first over generator images.
  auto search = [&](auto&& self, std::size_t depth) -> void {
    if (depth == k) {
      tables.emplace_back(img.begin(), img.end());
      return;
    }
    const std::size_t gi = gen_order[depth];
    const Elem g = basis.gens[gi];
    const unsigned m = basis.orders[gi];
    const std::size_t old_count = members.size();
    const bool had_one = one_checked;

    for (Elem y = 0; y < n; ++y) {
      if (ord_tgt[y] != m) continue;
      // Extend the map to the subgroup generated so far plus g.
      bool ok = true;
      for (unsigned c = 1; c < m && ok; ++c) {
        Elem gc = scalar_multiple(R, c, g);
        Elem yc = scalar_multiple(S, c, y);
        for (std::size_t s = 0; s < old_count && ok; ++s) {
          Elem xv = R.add(members[s], gc);
          Elem iv = S.add(img[members[s]], yc);
          if (defined[xv] || used[iv]) {
            ok = false;
            break;
          }
          defined[xv] = 1;
          used[iv] = 1;
          img[xv] = iv;
          members.push_back(xv);
        }
      }
      if (ok && !one_checked && defined[R.one()]) {
        if (img[R.one()] != S.one())
          ok = false;
        else
          one_checked = true;
      }
      // Jordan identity on pairs that involve a new element, whenever the
      // value aba already lies in the current subgroup.
      if (ok) {
        for (std::size_t ai = 0; ai < members.size() && ok; ++ai) {
          const Elem a = members[ai];
          const bool a_new = ai >= old_count;
          for (std::size_t bi = a_new ? 0 : old_count; bi < members.size() && ok;
               ++bi) {
            const Elem b = members[bi];
            Elem aba = R.mul(R.mul(a, b), a);
            if (!defined[aba]) continue;
            if (img[aba] != S.mul(S.mul(img[a], img[b]), img[a])) ok = false;
          }
        }
      }
      if (ok) self(self, depth + 1);
      // Roll back.
      while (members.size() > old_count) {
        Elem xv = members.back();
        members.pop_back();
        defined[xv] = 0;
        used[img[xv]] = 0;
      }
      one_checked = had_one;
    }
  };
  search(search, 0);

  std::sort(tables.begin(), tables.end());
  std::vector<RingMapTable> out;
  for (auto& t : tables) {
    RingMapTable f = classify_map(R, S, std::move(t));
    if (f.kind == MapKind::Homomorphism || f.kind == MapKind::AntiHomomorphism ||
        f.kind == MapKind::Jordan)
      out.push_back(std::move(f));
  }
  return out;
}

namespace {

bool jordan_kind(const RingMapTable& f) {
  return f.kind == MapKind::Homomorphism || f.kind == MapKind::AntiHomomorphism ||
         f.kind == MapKind::Jordan;
}

// omega(X) == g^-1 * form(X) * g for all X, where form applies beta
// entrywise and optionally transposes.
bool conjugation_matches(const RingMapTable& omega, const std::vector<Elem>& beta,
                         bool transpose, Elem g) {
  const FiniteRing& R = omega.source;
  const FiniteRing& T = omega.target;
  const unsigned n = R.matrix_dim();
  const Elem gi = T.inverse(g);
  std::vector<Elem> entries(static_cast<std::size_t>(n) * n);
  for (Elem x = 0; x < R.order(); ++x) {
    for (unsigned r = 0; r < n; ++r)
      for (unsigned c = 0; c < n; ++c) {
        Elem v = beta[R.matrix_entry(x, r, c)];
        if (transpose)
          entries[c * n + r] = v;
        else
          entries[r * n + c] = v;
      }
    Elem formed = T.matrix_encode(entries);
    if (omega(x) != T.mul(T.mul(gi, formed), g)) return false;
  }
  return true;
}

}  // namespace

JordanCertificate classify_jordan(const RingMapTable& omega) {
  if (!jordan_kind(omega))
    throw std::invalid_argument("classify_jordan: map is not a unital Jordan homomorphism");
  if (!omega.is_bijection())
    throw std::invalid_argument("classify_jordan: map is not bijective");
  const FiniteRing& R = omega.source;
  const FiniteRing& T = omega.target;

  if (R.kind() == RingKind::Matrix && T.kind() == RingKind::Matrix) {
    if (R.matrix_dim() != T.matrix_dim())
      throw TheoremViolation("classify_jordan: matrix dimensions differ");
    const FiniteRing K = R.matrix_base();
    const FiniteRing Kp = T.matrix_base();
    if (K.order() != Kp.order())
      throw TheoremViolation("classify_jordan: base fields are not isomorphic");
    const std::vector<RingMapTable> betas = enumerate_jordan_isomorphisms(K, Kp);
    const bool try_anti_first = omega.kind == MapKind::AntiHomomorphism;
    for (int round = 0; round < 2; ++round) {
      const bool transpose = (round == 0) == try_anti_first;
      for (const RingMapTable& beta : betas)
        for (Elem g : T.units())
          if (conjugation_matches(omega, beta.table, transpose, g)) {
            JordanCertificate cert;
            cert.kind =
                transpose ? MapKind::AntiHomomorphism : MapKind::Homomorphism;
            cert.beta = beta;
            cert.g = g;
            return cert;
          }
    }
    throw TheoremViolation("classify_jordan: no conjugation form matches");
  }

  if (R.is_field() && T.is_field()) {
    if (omega.kind != MapKind::Homomorphism)
      throw TheoremViolation("classify_jordan: field map is not multiplicative");
    JordanCertificate cert;
    cert.kind = MapKind::Homomorphism;
    cert.beta = omega;
    cert.g = T.one();
    return cert;
  }

  if (R.kind() == RingKind::Product && T.kind() == RingKind::Product) {
    const auto& src_factors = R.factors();
    const auto& tgt_factors = T.factors();
    for (const auto& fac : src_factors)
      if (!fac.is_field() && fac.kind() != RingKind::Matrix)
        throw std::invalid_argument(
            "classify_jordan: product factors must be fields or matrix rings");
    if (src_factors.size() != tgt_factors.size())
      throw TheoremViolation("classify_jordan: factor counts differ");
    const std::size_t m = src_factors.size();

    JordanCertificate cert;
    cert.kind = omega.kind;
    cert.sigma.assign(m, kUnset);
    std::vector<char> taken(m, 0);
    for (std::size_t k = 0; k < m; ++k) {
      Elem ek = R.product_inject(k, src_factors[k].one());
      auto comps = T.product_decode(omega(ek));
      std::size_t hit = kUnset;
      for (std::size_t j = 0; j < m; ++j) {
        if (comps[j] == 0) continue;
        if (hit != kUnset || comps[j] != tgt_factors[j].one())
          throw TheoremViolation(
              "classify_jordan: image of a factor identity is not a factor identity");
        hit = j;
      }
      if (hit == kUnset || taken[hit])
        throw TheoremViolation("classify_jordan: factor identities do not permute");
      taken[hit] = 1;
      cert.sigma[k] = hit;
    }

    std::vector<RingMapTable> comps;
    for (std::size_t k = 0; k < m; ++k) {
      const FiniteRing& A = src_factors[k];
      const FiniteRing& B = tgt_factors[cert.sigma[k]];
      std::vector<Elem> tbl(A.order());
      for (Elem a = 0; a < A.order(); ++a)
        tbl[a] = T.product_decode(omega(R.product_inject(k, a)))[cert.sigma[k]];
      RingMapTable comp = classify_map(A, B, std::move(tbl));
      if ((comp.kind != MapKind::Homomorphism &&
           comp.kind != MapKind::AntiHomomorphism) ||
          !comp.is_bijection())
        throw TheoremViolation(
            "classify_jordan: component map is not an isomorphism or anti-isomorphism");
      cert.component_kinds.push_back(comp.kind);
      comps.push_back(std::move(comp));
    }

    for (Elem x = 0; x < R.order(); ++x) {
      auto sc = R.product_decode(x);
      auto tc = T.product_decode(omega(x));
      for (std::size_t k = 0; k < m; ++k)
        if (tc[cert.sigma[k]] != comps[k](sc[k]))
          throw TheoremViolation(
              "classify_jordan: components fail to recompose the map");
    }
    return cert;
  }

  throw std::invalid_argument(
      "classify_jordan: classification covers fields, matrix rings over fields, "
      "and products of such rings");
}

// ---------------------------------------------------------------------------
// Wreath count and the quotient-line criterion
// ---------------------------------------------------------------------------

WreathReport verify_wreath_structure(const FiniteRing& R) {
  LinePtr L = ProjectiveLine::enumerate_points(R);
  if (L->size() > kEnumerationListingCap)
    throw CapExceeded("verify_wreath_structure: line exceeds " +
                      std::to_string(kEnumerationListingCap) + " points");
  std::vector<PointMap> autos = enumerate_dis_isomorphisms(L, L);
  LinePtr Lq = L->quotient_line();

  WreathReport rep;
  rep.radical_size = jacobson_radical(R).size();
  rep.quotient_points = Lq->size();
  rep.quotient_count = count_dis_automorphisms(Lq);
  rep.actual = autos.size();

  std::uint64_t fact = 1;
  for (std::uint64_t i = 2; i <= rep.radical_size; ++i)
    if (__builtin_mul_overflow(fact, i, &fact))
      throw CapExceeded("verify_wreath_structure: radical factorial exceeds 64 bits");
  std::uint64_t predicted = rep.quotient_count;
  for (std::uint64_t i = 0; i < rep.quotient_points; ++i)
    if (__builtin_mul_overflow(predicted, fact, &predicted))
      throw CapExceeded("verify_wreath_structure: predicted count exceeds 64 bits");
  rep.predicted = predicted;

  if (rep.predicted != rep.actual)
    throw TheoremViolation(
        "verify_wreath_structure: counted " + std::to_string(rep.actual) +
        " automorphisms but the wreath identity predicts " +
        std::to_string(rep.predicted));

  for (const PointMap& f : autos) {
    auto fq = induced_quotient_map(f);
    if (!fq)
      throw TheoremViolation(
          "verify_wreath_structure: automorphism does not respect parallel classes");
    if (!is_dis_isomorphism(*fq))
      throw TheoremViolation(
          "verify_wreath_structure: induced quotient map is not a distant-isomorphism");
  }
  rep.quotient_action_well_defined = true;
  return rep;
}

bool check_semilocal_corollary(const PointMap& f) {
  if (!f.is_bijection())
    throw std::invalid_argument("check_semilocal_corollary: map is not bijective");
  const bool dis = is_dis_isomorphism(f);
  const bool par = is_par_isomorphism(f);
  bool quotient_dis = false;
  if (par) {
    auto fq = induced_quotient_map(f);
    if (!fq)
      throw TheoremViolation(
          "check_semilocal_corollary: parallel-isomorphism without quotient action");
    quotient_dis = is_dis_isomorphism(*fq);
  }
  if (dis != (par && quotient_dis))
    throw TheoremViolation(
        "check_semilocal_corollary: quotient criterion disagrees with the "
        "distant-isomorphism test");
  return dis;
}

}  // namespace ringline
