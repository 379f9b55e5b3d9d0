#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "doctest.h"
#include "ringline/errors.hpp"
#include "ringline/morphisms.hpp"
#include "ringline/projline.hpp"
#include "ringline/ring.hpp"

using namespace ringline;

namespace {

// Shared ring instances (ring identity is pointer identity, so each test
// must reuse the same handle).
const FiniteRing& F2() {
  static FiniteRing R = make_gf(2, 1);
  return R;
}
const FiniteRing& F3() {
  static FiniteRing R = make_gf(3, 1);
  return R;
}
const FiniteRing& GF4() {
  static FiniteRing R = make_gf(2, 2);
  return R;
}
const FiniteRing& Z4() {
  static FiniteRing R = make_zmod(4);
  return R;
}
const FiniteRing& Z6() {
  static FiniteRing R = make_zmod(6);
  return R;
}
const FiniteRing& Z9() {
  static FiniteRing R = make_zmod(9);
  return R;
}
const FiniteRing& Dual2() {
  static FiniteRing R = make_dual_numbers(make_gf(2, 1));
  return R;
}
const FiniteRing& M2() {
  static FiniteRing R = make_matrix_ring(2, make_gf(2, 1));
  return R;
}
const FiniteRing& F2xF2() {
  static FiniteRing R = make_product({make_gf(2, 1), make_gf(2, 1)});
  return R;
}

LinePtr line_of(const FiniteRing& R) { return ProjectiveLine::enumerate_points(R); }

const LinePtr& m2_line() {
  static LinePtr L = line_of(M2());
  return L;
}

const std::vector<PointMap>& m2_autos() {
  static std::vector<PointMap> v = enumerate_dis_isomorphisms(m2_line(), m2_line());
  return v;
}

std::vector<Elem> identity_table(const FiniteRing& R) {
  std::vector<Elem> t(R.order());
  std::iota(t.begin(), t.end(), 0);
  return t;
}

RingMapTable identity_map(const FiniteRing& R) {
  return classify_map(R, R, identity_table(R));
}

std::vector<Elem> transpose_table(const FiniteRing& MR) {
  const unsigned n = MR.matrix_dim();
  std::vector<Elem> t(MR.order());
  std::vector<Elem> e(static_cast<std::size_t>(n) * n);
  for (Elem x = 0; x < MR.order(); ++x) {
    for (unsigned r = 0; r < n; ++r)
      for (unsigned c = 0; c < n; ++c) e[c * n + r] = MR.matrix_entry(x, r, c);
    t[x] = MR.matrix_encode(e);
  }
  return t;
}

std::vector<Elem> conjugation_table(const FiniteRing& R, Elem g) {
  const Elem gi = R.inverse(g);
  std::vector<Elem> t(R.order());
  for (Elem x = 0; x < R.order(); ++x) t[x] = R.mul(R.mul(gi, x), g);
  return t;
}

std::vector<Elem> compose_tables(const std::vector<Elem>& first,
                                 const std::vector<Elem>& then) {
  std::vector<Elem> t(first.size());
  for (std::size_t x = 0; x < first.size(); ++x) t[x] = then[first[x]];
  return t;
}

// Ground truth for invertibility of [[a,b],[c,d]]: the row action on R^2 is
// injective.
bool invertible_oracle(const RingMat2& m) {
  const FiniteRing& R = m.ring;
  const Elem n = R.order();
  std::vector<char> seen(static_cast<std::size_t>(n) * n, 0);
  for (Elem x = 0; x < n; ++x)
    for (Elem y = 0; y < n; ++y) {
      auto [u, v] = mat2_row_action(x, y, m);
      char& s = seen[static_cast<std::size_t>(u) * n + v];
      if (s) return false;
      s = 1;
    }
  return true;
}

// Ground truth for the anti-homomorphism construction: scan R^2 for the
// unique (v, w) with a v + b w = 0 and c v + d w = 1.
std::pair<Elem, Elem> second_column_oracle(const FiniteRing& R, const ProjPoint& p) {
  for (Elem v = 0; v < R.order(); ++v)
    for (Elem w = 0; w < R.order(); ++w)
      if (R.add(R.mul(p.a, v), R.mul(p.b, w)) == 0 &&
          R.add(R.mul(p.c, v), R.mul(p.d, w)) == R.one())
        return {v, w};
  REQUIRE(false);
  return {0, 0};
}

PointMap identity_point_map(const LinePtr& L) {
  std::vector<std::size_t> t(L->size());
  std::iota(t.begin(), t.end(), 0);
  return raw_point_map(L, L, std::move(t));
}

bool tables_equal(const PointMap& f, const PointMap& g) {
  return f.table == g.table;
}

}  // namespace

// ===========================================================================
// 2x2 matrices
// ===========================================================================

TEST_CASE("mat2 inversion agrees with the row-action oracle on small rings") {
  for (const FiniteRing& R :
       {Z4(), Z6(), GF4(), F2xF2()}) {
    const Elem n = R.order();
    std::size_t invertible = 0;
    for (Elem a = 0; a < n; ++a)
      for (Elem b = 0; b < n; ++b)
        for (Elem c = 0; c < n; ++c)
          for (Elem d = 0; d < n; ++d) {
            RingMat2 m{R, a, b, c, d};
            auto inv = mat2_inverse(m);
            REQUIRE(inv.has_value() == invertible_oracle(m));
            if (inv) {
              ++invertible;
              CHECK(mat2_mul(m, *inv) == RingMat2::identity(R));
              CHECK(mat2_mul(*inv, m) == RingMat2::identity(R));
            }
          }
    if (R.same_ring(Z4())) CHECK(invertible == 96);  // |GL_2(Z/4)| = 96
  }
}

TEST_CASE("mat2 inversion over a matrix ring uses two-sided inverses") {
  const FiniteRing& R = M2();
  const Elem n = R.order();
  std::mt19937 rng(0x5eed);
  std::size_t checked = 0;
  for (Elem a = 0; a < n; ++a)
    for (Elem b = 0; b < n; ++b) {
      // Sample the (c, d) plane to keep the sweep quick but unbiased.
      Elem c = static_cast<Elem>(rng() % n);
      Elem d = static_cast<Elem>(rng() % n);
      RingMat2 m{R, a, b, c, d};
      auto inv = mat2_inverse(m);
      REQUIRE(inv.has_value() == invertible_oracle(m));
      if (inv) {
        ++checked;
        CHECK(mat2_mul(m, *inv) == RingMat2::identity(R));
        CHECK(mat2_mul(*inv, m) == RingMat2::identity(R));
      }
    }
  CHECK(checked > 0);
}

TEST_CASE("mat2 inversion falls back to scanning for quotient rings") {
  auto [Q, proj] = quotient(M2(), jacobson_radical(M2()), "0");
  (void)proj;
  const Elem n = Q.order();
  REQUIRE(n == 16);
  REQUIRE(!Q.is_commutative());
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    RingMat2 m{Q, static_cast<Elem>(rng() % n), static_cast<Elem>(rng() % n),
               static_cast<Elem>(rng() % n), static_cast<Elem>(rng() % n)};
    auto inv = mat2_inverse(m);
    REQUIRE(inv.has_value() == invertible_oracle(m));
    if (inv) CHECK(mat2_mul(m, *inv) == RingMat2::identity(Q));
  }
}

// ===========================================================================
// Projectivities
// ===========================================================================

TEST_CASE("the identity matrix induces the identity projectivity") {
  LinePtr L = line_of(Z4());
  PointMap f = projectivity(L, RingMat2::identity(Z4()));
  CHECK(f.provenance == MapProvenance::Projectivity);
  CHECK(tables_equal(f, identity_point_map(L)));
}

TEST_CASE("the coordinate swap exchanges R(1,0) and R(0,1)") {
  LinePtr L = line_of(Z4());
  RingMat2 swap{Z4(), 0, Z4().one(), Z4().one(), 0};
  PointMap f = projectivity(L, swap);
  CHECK(f(L->index_of(Z4().one(), 0)) == L->index_of(0, Z4().one()));
  CHECK(f(L->index_of(0, Z4().one())) == L->index_of(Z4().one(), 0));
}

TEST_CASE("every invertible matrix over Z/4 induces a distant-automorphism") {
  LinePtr L = line_of(Z4());
  std::size_t count = 0;
  for (Elem a = 0; a < 4; ++a)
    for (Elem b = 0; b < 4; ++b)
      for (Elem c = 0; c < 4; ++c)
        for (Elem d = 0; d < 4; ++d) {
          RingMat2 m{Z4(), a, b, c, d};
          if (!invertible_oracle(m)) continue;
          ++count;
          PointMap f = projectivity(L, m);
          CHECK(is_dis_isomorphism(f));
          CHECK(is_par_isomorphism(f));
          CHECK(is_adj_isomorphism(f));
        }
  CHECK(count == 96);
}

TEST_CASE("singular matrices are rejected") {
  LinePtr L = line_of(Z4());
  CHECK_THROWS_AS(projectivity(L, RingMat2{Z4(), 2, 0, 0, 1}),
                  std::invalid_argument);
}

TEST_CASE("projectivities compose through matrix multiplication") {
  LinePtr L = line_of(Z6());
  RingMat2 g1{Z6(), 1, 2, 0, 5};   // det 5, a unit
  RingMat2 g2{Z6(), 0, 1, 5, 3};   // det -5 = 1
  REQUIRE(mat2_invertible(g1));
  REQUIRE(mat2_invertible(g2));
  PointMap two_steps = compose_point_maps(projectivity(L, g1), projectivity(L, g2));
  PointMap one_step = projectivity(L, mat2_mul(g1, g2));
  CHECK(tables_equal(two_steps, one_step));
  CHECK(two_steps.provenance == MapProvenance::Composite);
}

// ===========================================================================
// Maps induced by ring homomorphisms
// ===========================================================================

TEST_CASE("the identity homomorphism induces the identity map") {
  LinePtr L = line_of(Z4());
  PointMap f = induced_by_hom(identity_map(Z4()), L, L);
  CHECK(tables_equal(f, identity_point_map(L)));
  CHECK(f.provenance == MapProvenance::HomInduced);
}

TEST_CASE("the quotient projection induces the parallel-class collapse") {
  LinePtr L = line_of(Z4());
  LinePtr Q = L->quotient_line();
  PointMap f = induced_by_hom(L->quotient_projection(), L, Q);
  for (std::size_t i = 0; i < L->size(); ++i) CHECK(f(i) == L->project_point(i));
  CHECK(is_dis_morphism(f));
  CHECK(!is_dis_isomorphism(f));  // 6 points onto 3
}

TEST_CASE("the Frobenius automorphism of GF(4) induces a distant-automorphism") {
  std::vector<Elem> frob(GF4().order());
  for (Elem x = 0; x < GF4().order(); ++x) frob[x] = GF4().mul(x, x);
  RingMapTable alpha = classify_map(GF4(), GF4(), frob);
  REQUIRE(alpha.kind == MapKind::Homomorphism);
  PointMap f = induced_by_hom(alpha);
  CHECK(f.source->size() == 5);
  CHECK(is_dis_isomorphism(f));
  CHECK(!tables_equal(f, identity_point_map(f.source)));
}

TEST_CASE("induced_by_hom rejects maps that are not homomorphisms") {
  RingMapTable t = classify_map(M2(), M2(), transpose_table(M2()));
  REQUIRE(t.kind == MapKind::AntiHomomorphism);
  CHECK_THROWS_AS(induced_by_hom(t), std::invalid_argument);
}

TEST_CASE("induced constructions reject lines over the wrong ring") {
  LinePtr wrong = line_of(Z6());
  CHECK_THROWS_AS(induced_by_hom(identity_map(Z4()), wrong, nullptr),
                  std::invalid_argument);
}

// ===========================================================================
// Maps induced by anti-homomorphisms
// ===========================================================================

TEST_CASE("transposition induces X -> X^T on the standard affine points") {
  RingMapTable alpha = classify_map(M2(), M2(), transpose_table(M2()));
  REQUIRE(alpha.kind == MapKind::AntiHomomorphism);
  PointMap f = induced_by_antihom(alpha, m2_line(), m2_line());
  CHECK(f.provenance == MapProvenance::AntihomInduced);
  const FiniteRing& R = M2();
  for (Elem x = 0; x < R.order(); ++x) {
    std::size_t from = m2_line()->index_of(x, R.one());
    std::size_t to = m2_line()->index_of(alpha(x), R.one());
    CHECK(f(from) == to);
  }
  CHECK(f(m2_line()->index_of(R.one(), 0)) == m2_line()->index_of(R.one(), 0));
  CHECK(is_dis_isomorphism(f));
  CHECK(is_adj_isomorphism(f));
}

TEST_CASE("the anti-homomorphism construction matches the second-column oracle") {
  RingMapTable alpha = classify_map(M2(), M2(), transpose_table(M2()));
  PointMap f = induced_by_antihom(alpha, m2_line(), m2_line());
  const FiniteRing& R = M2();
  for (std::size_t i = 0; i < m2_line()->size(); ++i) {
    const ProjPoint& p = m2_line()->point(i);
    auto [v, w] = second_column_oracle(R, p);
    CHECK(f(i) == m2_line()->index_of(R.neg(alpha(w)), alpha(v)));
  }
}

TEST_CASE("over commutative rings the two induced constructions coincide") {
  RingMapTable id4 = identity_map(Z4());
  REQUIRE(id4.anti_too);
  CHECK(tables_equal(induced_by_hom(id4), induced_by_antihom(id4)));

  std::vector<Elem> frob(GF4().order());
  for (Elem x = 0; x < GF4().order(); ++x) frob[x] = GF4().mul(x, x);
  RingMapTable alpha = classify_map(GF4(), GF4(), frob);
  CHECK(tables_equal(induced_by_hom(alpha), induced_by_antihom(alpha)));
}

TEST_CASE("induced_by_antihom rejects plain homomorphisms of matrix rings") {
  CHECK_THROWS_AS(induced_by_antihom(identity_map(M2())), std::invalid_argument);
}

// ===========================================================================
// Maps induced by Jordan homomorphisms
// ===========================================================================

TEST_CASE("jordan-induced maps agree with the hom/antihom constructions") {
  for (const FiniteRing& R : {Z4(), Z6(), GF4(), F2xF2(), M2()}) {
    for (const RingMapTable& alpha : enumerate_jordan_isomorphisms(R, R)) {
      PointMap viaJ = induced_by_jordan(alpha);
      CHECK(is_dis_isomorphism(viaJ));
      if (alpha.kind == MapKind::Homomorphism)
        CHECK(tables_equal(viaJ, induced_by_hom(alpha)));
      else if (alpha.kind == MapKind::AntiHomomorphism)
        CHECK(tables_equal(viaJ, induced_by_antihom(alpha)));
    }
  }
}

TEST_CASE("jordan-induced maps accept non-bijective homomorphisms") {
  LinePtr L = line_of(Z4());
  PointMap viaH = induced_by_hom(L->quotient_projection(), L, L->quotient_line());
  PointMap viaJ = induced_by_jordan(L->quotient_projection(), L, L->quotient_line());
  CHECK(tables_equal(viaH, viaJ));
}

TEST_CASE("componentwise transposition of a product ring is a proper Jordan map") {
  const FiniteRing P = make_product({M2(), M2()});
  const std::vector<Elem> tt = transpose_table(M2());
  std::vector<Elem> jt(P.order());
  for (Elem x = 0; x < P.order(); ++x) {
    auto c = P.product_decode(x);
    const std::vector<Elem> comps{c[0], tt[c[1]]};
    jt[x] = P.product_encode(comps);
  }
  RingMapTable omega = classify_map(P, P, jt);
  REQUIRE(omega.kind == MapKind::Jordan);  // neither multiplicative nor reversing

  LinePtr L = line_of(P);
  REQUIRE(L->size() == 1225);
  PointMap f = induced_by_jordan(omega, L, L);
  CHECK(is_dis_isomorphism(f));

  // Componentwise description: identity in the first slot, the
  // transpose-induced map in the second.
  RingMapTable talpha = classify_map(M2(), M2(), tt);
  PointMap t2 = induced_by_antihom(talpha, m2_line(), m2_line());
  for (std::size_t i = 0; i < L->size(); ++i) {
    auto comps = L->split_product_point(i);
    const std::vector<std::size_t> image{comps[0], t2(comps[1])};
    CHECK(f(i) == L->join_product_point(image));
  }
}

TEST_CASE("induced_by_jordan rejects maps that fail the Jordan identity") {
  // On F2[eps]: 1 -> 1, eps -> 1 + eps extends additively but breaks
  // f(eps * 1 * eps) = f(eps) f(1) f(eps).
  const FiniteRing& D = Dual2();
  const Elem eps = D.dual_base().order();  // encoding: eps is the first non-base element
  std::vector<Elem> t(D.order());
  for (Elem x = 0; x < D.order(); ++x) t[x] = x;
  t[eps] = D.add(D.one(), eps);
  t[D.add(D.one(), eps)] = eps;
  RingMapTable bad = classify_map(D, D, t);
  REQUIRE(bad.kind == MapKind::AdditiveOnly);
  CHECK_THROWS_AS(induced_by_jordan(bad), std::invalid_argument);
}

// ===========================================================================
// Composition, inverses, quotient maps
// ===========================================================================

TEST_CASE("composition with the inverse is the identity") {
  LinePtr L = line_of(Z4());
  RingMat2 g{Z4(), 1, 2, 1, 1};
  REQUIRE(mat2_invertible(g));
  PointMap f = projectivity(L, g);
  CHECK(tables_equal(compose_point_maps(f, inverse_point_map(f)),
                     identity_point_map(L)));
  CHECK(tables_equal(compose_point_maps(inverse_point_map(f), f),
                     identity_point_map(L)));
}

TEST_CASE("inverse_point_map rejects non-bijections") {
  LinePtr L = line_of(Z4());
  PointMap collapse = induced_by_hom(L->quotient_projection(), L, L->quotient_line());
  CHECK_THROWS_AS(inverse_point_map(collapse), std::invalid_argument);
}

TEST_CASE("compose_point_maps rejects mismatched middle lines") {
  PointMap f = identity_point_map(line_of(Z4()));
  PointMap g = identity_point_map(line_of(Z6()));
  CHECK_THROWS_AS(compose_point_maps(f, g), std::invalid_argument);
}

TEST_CASE("raw_point_map validates the table") {
  LinePtr L = line_of(Z4());
  CHECK_THROWS_AS(raw_point_map(L, L, std::vector<std::size_t>{0, 1}),
                  std::invalid_argument);
  std::vector<std::size_t> out_of_range(L->size(), L->size());
  CHECK_THROWS_AS(raw_point_map(L, L, out_of_range), std::invalid_argument);
}

TEST_CASE("projectivities act on the quotient line") {
  LinePtr L = line_of(Z4());
  RingMat2 g{Z4(), 1, 1, 0, 1};
  PointMap f = projectivity(L, g);
  auto fq = induced_quotient_map(f);
  REQUIRE(fq.has_value());
  CHECK(fq->source->size() == 3);
  CHECK(is_dis_isomorphism(*fq));
}

TEST_CASE("parallel-breaking bijections have no quotient action") {
  LinePtr L = line_of(Z4());
  // Swap two non-parallel points and keep the rest.
  std::size_t i = 0;
  std::size_t j = 1;
  while (L->parallel(i, j)) ++j;
  std::vector<std::size_t> t(L->size());
  std::iota(t.begin(), t.end(), 0);
  std::swap(t[i], t[j]);
  PointMap f = raw_point_map(L, L, t);
  CHECK(!induced_quotient_map(f).has_value());
}

// ===========================================================================
// Predicates
// ===========================================================================

TEST_CASE("distant- and adjacency-isomorphisms coincide on the matrix-ring line") {
  // Jordan-induced maps give the positive cases.
  for (const RingMapTable& alpha : enumerate_jordan_isomorphisms(M2(), M2())) {
    PointMap f = induced_by_jordan(alpha, m2_line(), m2_line());
    CHECK(is_dis_isomorphism(f));
    CHECK(is_adj_isomorphism(f));
  }
  // Random shuffles give (almost surely) negative cases; the two predicates
  // must still agree.
  std::mt19937 rng(0xC0FFEE);
  std::vector<std::size_t> t(m2_line()->size());
  std::iota(t.begin(), t.end(), 0);
  for (int trial = 0; trial < 24; ++trial) {
    std::shuffle(t.begin(), t.end(), rng);
    PointMap f = raw_point_map(m2_line(), m2_line(), t);
    CHECK(is_dis_isomorphism(f) == is_adj_isomorphism(f));
  }
}

// ===========================================================================
// Enumeration
// ===========================================================================

TEST_CASE("the line over F2 admits every bijection as a distant-automorphism") {
  LinePtr L = line_of(F2());
  REQUIRE(L->size() == 3);
  CHECK(enumerate_dis_isomorphisms(L, L).size() == 6);
  CHECK(count_dis_automorphisms(L) == 6);
}

TEST_CASE("enumeration over Z/4 matches the brute-force permutation search") {
  LinePtr L = line_of(Z4());
  REQUIRE(L->size() == 6);
  // Oracle: test all 720 permutations directly against the distant matrix.
  const BitMatrix& A = L->distant_matrix();
  std::set<std::vector<std::size_t>> oracle;
  std::vector<std::size_t> perm{0, 1, 2, 3, 4, 5};
  do {
    bool ok = true;
    for (std::size_t i = 0; i < 6 && ok; ++i)
      for (std::size_t j = i + 1; j < 6 && ok; ++j)
        if (A.get(i, j) != A.get(perm[i], perm[j])) ok = false;
    if (ok) oracle.insert(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  CHECK(oracle.size() == 48);

  std::vector<PointMap> found = enumerate_dis_isomorphisms(L, L);
  REQUIRE(found.size() == 48);
  std::set<std::vector<std::size_t>> got;
  for (const PointMap& f : found) got.insert(f.table);
  CHECK(got == oracle);
  CHECK(std::is_sorted(found.begin(), found.end(),
                       [](const PointMap& a, const PointMap& b) {
                         return a.table < b.table;
                       }));
  CHECK(count_dis_automorphisms(L) == 48);
}

TEST_CASE("enumeration over F2 x F2 matches the brute-force permutation search") {
  LinePtr L = line_of(F2xF2());
  REQUIRE(L->size() == 9);
  const BitMatrix& A = L->distant_matrix();
  std::size_t oracle = 0;
  std::vector<std::size_t> perm{0, 1, 2, 3, 4, 5, 6, 7, 8};
  do {
    bool ok = true;
    for (std::size_t i = 0; i < 9 && ok; ++i)
      for (std::size_t j = i + 1; j < 9 && ok; ++j)
        if (A.get(i, j) != A.get(perm[i], perm[j])) ok = false;
    if (ok) ++oracle;
  } while (std::next_permutation(perm.begin(), perm.end()));
  CHECK(oracle == 72);
  CHECK(count_dis_automorphisms(L) == 72);
}

TEST_CASE("distant-automorphism counts across the standard family") {
  CHECK(count_dis_automorphisms(line_of(Z6())) == 144);     // 6 * 24
  CHECK(count_dis_automorphisms(line_of(Dual2())) == 48);   // (2!)^3 * 6
}

TEST_CASE("the isomorphic lines over Z/4 and F2[eps] admit 48 cross-isomorphisms") {
  LinePtr A = line_of(Z4());
  LinePtr B = line_of(Dual2());
  std::vector<PointMap> maps = enumerate_dis_isomorphisms(A, B);
  CHECK(maps.size() == 48);
  for (const PointMap& f : maps) CHECK(is_dis_isomorphism(f));
}

TEST_CASE("lines of different sizes admit no distant-isomorphism") {
  CHECK(enumerate_dis_isomorphisms(line_of(F2()), line_of(Z4())).empty());
}

TEST_CASE("the matrix-ring line has 40320 distant-automorphisms") {
  // 2 * |GL_4(F2)| with |GL_4(F2)| = 15 * 14 * 12 * 8 = 20160.
  const std::uint64_t gl4 =
      (16 - 1) * (16 - 2) * (16 - 4) * (16 - 8);
  REQUIRE(gl4 == 20160);
  CHECK(count_dis_automorphisms(m2_line()) == 2 * gl4);
  CHECK(m2_autos().size() == 2 * gl4);
}

TEST_CASE("enumeration respects the point-count caps") {
  CHECK_THROWS_AS(enumerate_dis_isomorphisms(line_of(make_matrix_ring(2, F3())),
                                             line_of(make_matrix_ring(2, F3()))),
                  CapExceeded);
  LinePtr big = line_of(make_product({M2(), M2()}));
  REQUIRE(big->size() == 1225);
  CHECK_THROWS_AS(count_dis_automorphisms(big), CapExceeded);
}

// ===========================================================================
// Factorization over matrix rings
// ===========================================================================

TEST_CASE("the identity automorphism factorizes trivially") {
  DecompositionCertificate cert =
      factorize_dis_automorphism(identity_point_map(m2_line()));
  CHECK(cert.kind == CertificateKind::Isomorphism);
  CHECK(cert.alpha.table == identity_table(M2()));
  CHECK(cert.gamma == RingMat2::identity(M2()));
  CHECK(cert.sigma.empty());
  CHECK(cert.component_certs.empty());
}

TEST_CASE("the transpose-induced automorphism factorizes as an anti-isomorphism") {
  RingMapTable alpha = classify_map(M2(), M2(), transpose_table(M2()));
  PointMap f = induced_by_antihom(alpha, m2_line(), m2_line());
  DecompositionCertificate cert = factorize_dis_automorphism(f);
  CHECK(cert.kind == CertificateKind::AntiIsomorphism);
  CHECK(cert.alpha.table == alpha.table);
  CHECK(cert.gamma == RingMat2::identity(M2()));  // -I = I over F2
}

TEST_CASE("inner automorphisms factorize as isomorphisms") {
  for (Elem g : M2().units()) {
    RingMapTable alpha = classify_map(M2(), M2(), conjugation_table(M2(), g));
    REQUIRE(alpha.kind == MapKind::Homomorphism);
    PointMap f = induced_by_hom(alpha, m2_line(), m2_line());
    DecompositionCertificate cert = factorize_dis_automorphism(f);
    CHECK(cert.kind == CertificateKind::Isomorphism);
    CHECK(tables_equal(certificate_point_map(cert, m2_line(), m2_line()), f));
  }
}

TEST_CASE("a seeded sample of distant-automorphisms factorizes with both kinds") {
  std::mt19937 rng(2024);
  std::size_t iso = 0, anti = 0;
  for (int trial = 0; trial < 160; ++trial) {
    const PointMap& f = m2_autos()[rng() % m2_autos().size()];
    DecompositionCertificate cert = factorize_dis_automorphism(f);
    if (cert.kind == CertificateKind::Isomorphism) {
      ++iso;
      CHECK(cert.alpha.kind == MapKind::Homomorphism);
    } else {
      ++anti;
      CHECK(cert.alpha.kind == MapKind::AntiHomomorphism);
    }
    CHECK(tables_equal(certificate_point_map(cert, m2_line(), m2_line()), f));
  }
  CHECK(iso > 0);
  CHECK(anti > 0);
}

TEST_CASE("factorization recovers a nontrivial field automorphism over GF(4)") {
  const FiniteRing MF4 = make_matrix_ring(2, GF4());
  std::vector<Elem> frob(MF4.order());
  std::vector<Elem> e(4);
  for (Elem x = 0; x < MF4.order(); ++x) {
    for (unsigned r = 0; r < 2; ++r)
      for (unsigned c = 0; c < 2; ++c) {
        Elem v = MF4.matrix_entry(x, r, c);
        e[r * 2 + c] = GF4().mul(v, v);
      }
    frob[x] = MF4.matrix_encode(e);
  }
  RingMapTable alpha = classify_map(MF4, MF4, frob);
  REQUIRE(alpha.kind == MapKind::Homomorphism);

  LinePtr L = line_of(MF4);
  REQUIRE(L->size() == 357);
  RingMat2 gamma{MF4, 0, MF4.one(), MF4.one(), 0};
  PointMap f = compose_point_maps(induced_by_hom(alpha, L, L), projectivity(L, gamma));
  DecompositionCertificate cert = factorize_dis_automorphism(f);
  CHECK(cert.kind == CertificateKind::Isomorphism);
  CHECK(cert.alpha.table == alpha.table);
  CHECK(tables_equal(certificate_point_map(cert, L, L), f));
}

TEST_CASE("factorization rejects unsupported inputs") {
  CHECK_THROWS_AS(factorize_dis_automorphism(identity_point_map(line_of(Z4()))),
                  std::invalid_argument);
  CHECK_THROWS_AS(factorize_dis_automorphism(identity_point_map(line_of(GF4()))),
                  std::invalid_argument);
  // A bijection of the right line that is not a distant-isomorphism.
  std::vector<std::size_t> t(m2_line()->size());
  std::iota(t.begin(), t.end(), 0);
  std::mt19937 rng(99);
  PointMap shuffled;
  do {
    std::shuffle(t.begin(), t.end(), rng);
    shuffled = raw_point_map(m2_line(), m2_line(), t);
  } while (is_dis_isomorphism(shuffled));
  CHECK_THROWS_AS(factorize_dis_automorphism(shuffled), std::invalid_argument);
}

TEST_CASE("certificates rebuild point maps independently") {
  RingMat2 g{M2(), 0, M2().one(), M2().one(), 0};
  DecompositionCertificate cert{CertificateKind::Isomorphism, identity_map(M2()),
                                g, {}, {}};
  CHECK(tables_equal(certificate_point_map(cert, m2_line(), m2_line()),
                     projectivity(m2_line(), g)));
}

// ===========================================================================
// Product decomposition
// ===========================================================================

TEST_CASE("every distant-automorphism of the F2 x F2 line splits into factors") {
  LinePtr L = line_of(F2xF2());
  std::vector<PointMap> autos = enumerate_dis_isomorphisms(L, L);
  REQUIRE(autos.size() == 72);
  std::size_t swaps = 0;
  std::set<std::pair<std::vector<std::size_t>,
                     std::vector<std::vector<std::size_t>>>> distinct;
  for (const PointMap& f : autos) {
    ProductDecomposition dec = decompose_product_dis_iso(f);
    REQUIRE(dec.sigma.size() == 2);
    REQUIRE(dec.components.size() == 2);
    if (dec.sigma[0] == 1) ++swaps;
    std::vector<std::vector<std::size_t>> tables;
    for (const PointMap& c : dec.components) {
      CHECK(c.source->size() == 3);
      CHECK(is_dis_isomorphism(c));
      tables.push_back(c.table);
    }
    distinct.insert({dec.sigma, tables});
  }
  CHECK(swaps == 36);  // 72 = 2 * 6 * 6
  CHECK(distinct.size() == 72);
}

TEST_CASE("componentwise maps decompose to their components") {
  LinePtr L = line_of(F2xF2());
  const auto& comps = L->component_lines();
  REQUIRE(comps.size() == 2);
  // Component maps: a 3-cycle on the first factor, a transposition on the
  // second; every bijection of a field line is a distant-automorphism.
  PointMap c0 = raw_point_map(comps[0], comps[0], {1, 2, 0});
  PointMap c1 = raw_point_map(comps[1], comps[1], {1, 0, 2});

  for (std::size_t sigma0 : {0u, 1u}) {
    std::vector<std::size_t> table(L->size());
    for (std::size_t i = 0; i < L->size(); ++i) {
      auto parts = L->split_product_point(i);
      std::vector<std::size_t> image(2);
      image[sigma0] = c0(parts[0]);
      image[1 - sigma0] = c1(parts[1]);
      table[i] = L->join_product_point(image);
    }
    PointMap f = raw_point_map(L, L, table);
    ProductDecomposition dec = decompose_product_dis_iso(f);
    CHECK(dec.sigma[0] == sigma0);
    CHECK(dec.sigma[1] == 1 - sigma0);
    CHECK(dec.components[0].table == c0.table);
    CHECK(dec.components[1].table == c1.table);
  }
}

TEST_CASE("three-factor products recover the full factor permutation") {
  const FiniteRing P = make_product({make_gf(2, 1), make_gf(2, 1), make_gf(2, 1)});
  LinePtr L = line_of(P);
  REQUIRE(L->size() == 27);
  std::vector<PointMap> autos = enumerate_dis_isomorphisms(L, L);
  REQUIRE(autos.size() == 1296);  // 6^3 * 3!
  std::map<std::vector<std::size_t>, std::size_t> by_sigma;
  for (const PointMap& f : autos) ++by_sigma[decompose_product_dis_iso(f).sigma];
  CHECK(by_sigma.size() == 6);
  for (const auto& [sigma, count] : by_sigma) CHECK(count == 216);  // 6^3
}

TEST_CASE("mixed products over unequal factors keep the factors in place") {
  const FiniteRing P = make_product({M2(), make_gf(2, 1)});
  LinePtr L = line_of(P);
  REQUIRE(L->size() == 105);
  const auto& comps = L->component_lines();
  RingMapTable alpha = classify_map(M2(), M2(), transpose_table(M2()));
  PointMap c0 = induced_by_antihom(alpha, comps[0], comps[0]);
  PointMap c1 = raw_point_map(comps[1], comps[1], {2, 0, 1});
  std::vector<std::size_t> table(L->size());
  for (std::size_t i = 0; i < L->size(); ++i) {
    auto parts = L->split_product_point(i);
    const std::vector<std::size_t> image{c0(parts[0]), c1(parts[1])};
    table[i] = L->join_product_point(image);
  }
  ProductDecomposition dec = decompose_product_dis_iso(raw_point_map(L, L, table));
  CHECK(dec.sigma == std::vector<std::size_t>({0, 1}));
  CHECK(dec.components[0].table == c0.table);
  CHECK(dec.components[1].table == c1.table);
}

TEST_CASE("product decomposition rejects non-product rings") {
  CHECK_THROWS_AS(decompose_product_dis_iso(identity_point_map(line_of(Z4()))),
                  std::invalid_argument);
}

// ===========================================================================
// Jordan isomorphisms
// ===========================================================================

TEST_CASE("the matrix ring has exactly twelve Jordan automorphisms") {
  // Oracle: the six inner automorphisms and their compositions with
  // transposition, constructed explicitly.
  std::set<std::vector<Elem>> expected;
  for (Elem g : M2().units()) {
    expected.insert(conjugation_table(M2(), g));
    expected.insert(compose_tables(transpose_table(M2()), conjugation_table(M2(), g)));
  }
  REQUIRE(expected.size() == 12);

  std::vector<RingMapTable> found = enumerate_jordan_isomorphisms(M2(), M2());
  CHECK(found.size() == 12);
  std::size_t homs = 0, antis = 0;
  std::set<std::vector<Elem>> got;
  for (const RingMapTable& f : found) {
    got.insert(f.table);
    if (f.kind == MapKind::Homomorphism) ++homs;
    if (f.kind == MapKind::AntiHomomorphism) ++antis;
  }
  CHECK(got == expected);
  CHECK(homs == 6);
  CHECK(antis == 6);
}

TEST_CASE("jordan automorphism counts of small rings") {
  CHECK(enumerate_jordan_isomorphisms(Z4(), Z4()).size() == 1);
  CHECK(enumerate_jordan_isomorphisms(Z6(), Z6()).size() == 1);
  CHECK(enumerate_jordan_isomorphisms(Dual2(), Dual2()).size() == 1);
  CHECK(enumerate_jordan_isomorphisms(GF4(), GF4()).size() == 2);
  CHECK(enumerate_jordan_isomorphisms(F2xF2(), F2xF2()).size() == 2);
  const FiniteRing F3xF3 = make_product({F3(), F3()});
  CHECK(enumerate_jordan_isomorphisms(F3xF3, F3xF3).size() == 2);
}

TEST_CASE("rings with incompatible structure admit no Jordan isomorphism") {
  CHECK(enumerate_jordan_isomorphisms(Z4(), Dual2()).empty());   // Z/4 vs (Z/2)^2
  CHECK(enumerate_jordan_isomorphisms(F2xF2(), GF4()).empty());  // idempotents
  CHECK(enumerate_jordan_isomorphisms(Z4(), Z6()).empty());      // order mismatch
}

TEST_CASE("jordan enumeration respects the order cap") {
  CHECK_THROWS_AS(enumerate_jordan_isomorphisms(make_zmod(257), make_zmod(257)),
                  CapExceeded);
}

TEST_CASE("classify_jordan recognizes transposition") {
  RingMapTable omega = classify_map(M2(), M2(), transpose_table(M2()));
  JordanCertificate cert = classify_jordan(omega);
  CHECK(cert.kind == MapKind::AntiHomomorphism);
  // Re-verify the conjugation form by hand: omega(x) = g^-1 (x^beta)^T g.
  const FiniteRing& R = M2();
  const Elem gi = R.inverse(cert.g);
  for (Elem x = 0; x < R.order(); ++x) {
    std::vector<Elem> e(4);
    for (unsigned r = 0; r < 2; ++r)
      for (unsigned c = 0; c < 2; ++c)
        e[c * 2 + r] = cert.beta(R.matrix_entry(x, r, c));
    Elem expected = R.mul(R.mul(gi, R.matrix_encode(e)), cert.g);
    CHECK(omega(x) == expected);
  }
}

TEST_CASE("classify_jordan writes every matrix-ring Jordan map in conjugation form") {
  for (const RingMapTable& omega : enumerate_jordan_isomorphisms(M2(), M2())) {
    JordanCertificate cert = classify_jordan(omega);
    CHECK(cert.kind == omega.kind);
    const FiniteRing& R = M2();
    const Elem gi = R.inverse(cert.g);
    const bool transpose = cert.kind == MapKind::AntiHomomorphism;
    std::vector<Elem> e(4);
    for (Elem x = 0; x < R.order(); ++x) {
      for (unsigned r = 0; r < 2; ++r)
        for (unsigned c = 0; c < 2; ++c) {
          Elem v = cert.beta(R.matrix_entry(x, r, c));
          e[transpose ? c * 2 + r : r * 2 + c] = v;
        }
      CHECK(omega(x) == R.mul(R.mul(gi, R.matrix_encode(e)), cert.g));
    }
  }
}

TEST_CASE("classify_jordan on fields returns the map itself") {
  std::vector<Elem> frob(GF4().order());
  for (Elem x = 0; x < GF4().order(); ++x) frob[x] = GF4().mul(x, x);
  RingMapTable omega = classify_map(GF4(), GF4(), frob);
  JordanCertificate cert = classify_jordan(omega);
  CHECK(cert.kind == MapKind::Homomorphism);
  CHECK(cert.beta.table == omega.table);
  CHECK(cert.g == GF4().one());
}

TEST_CASE("classify_jordan decomposes product maps") {
  // The factor swap of F2 x F2.
  const FiniteRing& P = F2xF2();
  std::vector<Elem> swap_tbl(P.order());
  for (Elem x = 0; x < P.order(); ++x) {
    auto c = P.product_decode(x);
    const std::vector<Elem> rev{c[1], c[0]};
    swap_tbl[x] = P.product_encode(rev);
  }
  RingMapTable swap_map = classify_map(P, P, swap_tbl);
  JordanCertificate swap_cert = classify_jordan(swap_map);
  CHECK(swap_cert.sigma == std::vector<std::size_t>({1, 0}));
  REQUIRE(swap_cert.component_kinds.size() == 2);
  CHECK(swap_cert.component_kinds[0] == MapKind::Homomorphism);
  CHECK(swap_cert.component_kinds[1] == MapKind::Homomorphism);

  // Identity times transposition on M2 x M2: a Jordan map whose components
  // have the two different kinds.
  const FiniteRing Q = make_product({M2(), M2()});
  const std::vector<Elem> tt = transpose_table(M2());
  std::vector<Elem> jt(Q.order());
  for (Elem x = 0; x < Q.order(); ++x) {
    auto c = Q.product_decode(x);
    const std::vector<Elem> comps{c[0], tt[c[1]]};
    jt[x] = Q.product_encode(comps);
  }
  RingMapTable omega = classify_map(Q, Q, jt);
  REQUIRE(omega.kind == MapKind::Jordan);
  JordanCertificate cert = classify_jordan(omega);
  CHECK(cert.sigma == std::vector<std::size_t>({0, 1}));
  REQUIRE(cert.component_kinds.size() == 2);
  CHECK(cert.component_kinds[0] == MapKind::Homomorphism);
  CHECK(cert.component_kinds[1] == MapKind::AntiHomomorphism);
}

TEST_CASE("classify_jordan rejects out-of-scope inputs") {
  CHECK_THROWS_AS(classify_jordan(identity_map(Z4())), std::invalid_argument);
  CHECK_THROWS_AS(classify_jordan(identity_map(Dual2())), std::invalid_argument);
  LinePtr L = line_of(Z4());
  CHECK_THROWS_AS(classify_jordan(L->quotient_projection()), std::invalid_argument);

  const FiniteRing& D = Dual2();
  const Elem eps = D.dual_base().order();
  std::vector<Elem> t = identity_table(D);
  t[eps] = D.add(D.one(), eps);
  t[D.add(D.one(), eps)] = eps;
  RingMapTable bad = classify_map(D, D, t);
  REQUIRE(bad.kind == MapKind::AdditiveOnly);
  CHECK_THROWS_AS(classify_jordan(bad), std::invalid_argument);
}

// ===========================================================================
// Wreath structure
// ===========================================================================

TEST_CASE("the automorphism count splits over the radical") {
  WreathReport z4 = verify_wreath_structure(Z4());
  CHECK(z4.radical_size == 2);
  CHECK(z4.quotient_points == 3);
  CHECK(z4.quotient_count == 6);
  CHECK(z4.predicted == 48);
  CHECK(z4.actual == 48);
  CHECK(z4.quotient_action_well_defined);

  WreathReport dual = verify_wreath_structure(Dual2());
  CHECK(dual.predicted == 48);
  CHECK(dual.actual == 48);

  WreathReport z6 = verify_wreath_structure(Z6());
  CHECK(z6.radical_size == 1);
  CHECK(z6.predicted == 144);
  CHECK(z6.actual == 144);

  WreathReport prod = verify_wreath_structure(F2xF2());
  CHECK(prod.radical_size == 1);
  CHECK(prod.predicted == 72);
  CHECK(prod.actual == 72);
}

TEST_CASE("the wreath identity holds with a three-element radical") {
  WreathReport z9 = verify_wreath_structure(Z9());
  CHECK(z9.radical_size == 3);
  CHECK(z9.quotient_points == 4);
  CHECK(z9.quotient_count == 24);
  CHECK(z9.predicted == 31104);  // (3!)^4 * 24
  CHECK(z9.actual == 31104);
}

TEST_CASE("wreath verification respects the listing cap") {
  CHECK_THROWS_AS(verify_wreath_structure(make_matrix_ring(2, F3())), CapExceeded);
}

// ===========================================================================
// The quotient-line criterion
// ===========================================================================

TEST_CASE("the quotient criterion accepts projectivities") {
  LinePtr L = line_of(Z4());
  CHECK(check_semilocal_corollary(identity_point_map(L)));
  RingMat2 g{Z4(), 1, 2, 1, 1};
  REQUIRE(mat2_invertible(g));
  CHECK(check_semilocal_corollary(projectivity(L, g)));
}

TEST_CASE("bijections fixing every parallel class are distant-automorphisms") {
  LinePtr L = line_of(Z4());
  // Swap the two points of one parallel class, keep everything else.
  const auto& classes = L->parallel_classes();
  REQUIRE(classes.size() == 3);
  REQUIRE(classes[0].size() == 2);
  std::vector<std::size_t> t(L->size());
  std::iota(t.begin(), t.end(), 0);
  std::swap(t[classes[0][0]], t[classes[0][1]]);
  PointMap f = raw_point_map(L, L, t);
  CHECK(check_semilocal_corollary(f));
  CHECK(is_dis_isomorphism(f));
}

TEST_CASE("transpositions are distant-automorphisms exactly for parallel pairs") {
  LinePtr L = line_of(Z4());
  for (std::size_t i = 0; i < L->size(); ++i)
    for (std::size_t j = i + 1; j < L->size(); ++j) {
      std::vector<std::size_t> t(L->size());
      std::iota(t.begin(), t.end(), 0);
      std::swap(t[i], t[j]);
      PointMap f = raw_point_map(L, L, t);
      CHECK(check_semilocal_corollary(f) == L->parallel(i, j));
    }
}

TEST_CASE("the quotient criterion works across rings") {
  std::vector<PointMap> maps =
      enumerate_dis_isomorphisms(line_of(Z4()), line_of(Dual2()));
  REQUIRE(!maps.empty());
  CHECK(check_semilocal_corollary(maps.front()));
}

TEST_CASE("the quotient criterion rejects non-bijections") {
  LinePtr L = line_of(Z4());
  PointMap collapse = induced_by_hom(L->quotient_projection(), L, L->quotient_line());
  CHECK_THROWS_AS(check_semilocal_corollary(collapse), std::invalid_argument);
}
