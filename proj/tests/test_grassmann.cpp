#include <algorithm>
#include <deque>
#include <map>
#include <random>
#include <set>
#include <unordered_map>
#include <vector>

#include "doctest.h"
#include "ringline/errors.hpp"
#include "ringline/grassmann.hpp"
#include "ringline/projline.hpp"
#include "ringline/ring.hpp"

using namespace ringline;

namespace {

FieldPtr field_q(unsigned p, unsigned k = 1) { return FieldTable::get(make_gf(p, k)); }

// breadth-first distances in the adjacency graph, an oracle independent of
// the dimension formula
std::vector<unsigned> bfs_distances(const GrassmannSpace& G, std::size_t start) {
  std::vector<unsigned> dist(G.size(), ~0u);
  std::deque<std::size_t> queue{start};
  dist[start] = 0;
  while (!queue.empty()) {
    std::size_t v = queue.front();
    queue.pop_front();
    for (std::size_t w = 0; w < G.size(); ++w)
      if (G.adjacent(v, w) && dist[w] == ~0u) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
  }
  return dist;
}

// the set of vectors orthogonal to every basis row, found by scanning the
// whole ambient space
Subspace annihilator_by_scan(const Subspace& X) {
  const FieldTable& F = *X.table();
  std::size_t d = X.ambient();
  std::vector<std::vector<Elem>> members;
  std::vector<Elem> v(d, 0);
  while (true) {
    bool ok = true;
    for (std::size_t r = 0; r < X.dim() && ok; ++r) {
      Elem dot = 0;
      for (std::size_t c = 0; c < d; ++c)
        dot = F.add(dot, F.mul(X.basis().at(r, c), v[c]));
      ok = dot == 0;
    }
    if (ok) members.push_back(v);
    std::size_t i = 0;
    while (i < d && v[i] == F.q() - 1) v[i++] = 0;
    if (i == d) break;
    ++v[i];
  }
  Mat span(members.size(), d);
  for (std::size_t r = 0; r < members.size(); ++r)
    for (std::size_t c = 0; c < d; ++c) span.at(r, c) = members[r][c];
  return Subspace(X.table(), d, span);
}

PartialLinearSpace three_point_line_space() {
  return make_partial_linear_space(3, {{0, 1, 2}});
}

std::unordered_map<std::uint64_t, std::size_t> pair_to_line(const PartialLinearSpace& S) {
  std::unordered_map<std::uint64_t, std::size_t> map;
  for (std::size_t li = 0; li < S.lines.size(); ++li)
    for (std::size_t x = 0; x < S.lines[li].size(); ++x)
      for (std::size_t y = 0; y < S.lines[li].size(); ++y)
        if (x != y)
          map[S.lines[li][x] * static_cast<std::uint64_t>(S.num_points) +
              S.lines[li][y]] = li;
  return map;
}

Mat random_invertible(const FieldTable& F, unsigned d, std::mt19937& rng) {
  std::uniform_int_distribution<Elem> pick(0, F.q() - 1);
  while (true) {
    Mat g(d, d);
    for (auto& e : g.a) e = pick(rng);
    if (mat_inverse(F, g)) return g;
  }
}

// image of each subspace under right multiplication of its basis
Collineation projectivity_collineation(std::shared_ptr<const GrassmannSpace> G,
                                       const Mat& g) {
  Collineation f{std::make_shared<const PartialLinearSpace>(G->space()),
                 std::make_shared<const PartialLinearSpace>(G->space()),
                 std::vector<std::size_t>(G->size())};
  for (std::size_t i = 0; i < G->size(); ++i) {
    Mat moved = mat_mul(*G->field(), G->subspace(i).basis(), g);
    f.table[i] = G->index_of(Subspace(G->field(), G->ambient(), moved));
  }
  return f;
}

}  // namespace

TEST_CASE("partial linear space validation") {
  PartialLinearSpace S = make_partial_linear_space(4, {{1, 0}, {2, 3, 1}});
  CHECK(S.lines == std::vector<std::vector<std::size_t>>{{0, 1}, {1, 2, 3}});
  CHECK(is_partial_linear(S));
  CHECK(line_through(S, 0, 1).has_value());
  CHECK(line_through(S, 3, 1) == 1);
  CHECK_FALSE(line_through(S, 0, 3).has_value());
  CHECK(lines_through(S, 1) == std::vector<std::size_t>{0, 1});
  CHECK(lines_through(S, 0) == std::vector<std::size_t>{0});

  CHECK_THROWS_AS(make_partial_linear_space(3, {{0}}), std::invalid_argument);
  CHECK_THROWS_AS(make_partial_linear_space(3, {{0, 3}}), std::invalid_argument);
  CHECK_THROWS_AS(make_partial_linear_space(3, {{0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(make_partial_linear_space(3, {{0, 1}, {0, 1, 2}}),
                  std::invalid_argument);
  std::string why;
  PartialLinearSpace bad{2, {{0, 1}, {0, 1}}};
  CHECK_FALSE(is_partial_linear(bad, &why));
}

TEST_CASE("echelon form is idempotent and row-space preserving") {
  for (unsigned q : {2u, 3u}) {
    FieldPtr F = field_q(q);
    std::vector<Elem> digits(8, 0);
    while (true) {
      Mat M(2, 4);
      for (unsigned i = 0; i < 8; ++i) M.a[i] = digits[i];
      Subspace S(F, 4, M);
      Subspace again(F, 4, S.basis());
      CHECK(S == again);
      for (std::size_t r = 0; r < 2; ++r) {
        std::vector<Elem> row{M.at(r, 0), M.at(r, 1), M.at(r, 2), M.at(r, 3)};
        CHECK(S.contains(row));
      }
      CHECK(S.dim() == mat_rank(*F, M));
      unsigned i = 0;
      while (i < 8 && digits[i] == q - 1) digits[i++] = 0;
      if (i == 8) break;
      ++digits[i];
    }
  }
}

TEST_CASE("Grassmann space structure") {
  for (unsigned q : {2u, 3u}) {
    CAPTURE(q);
    GrassmannSpace G(field_q(q), 2);
    CHECK(G.size() == gaussian_binomial(4, 2, q));
    // independent line count: flags (M, N) with dim M = 1 < X < N, dim N = 3
    std::uint64_t flags = gaussian_binomial(4, 1, q) * gaussian_binomial(3, 2, q);
    CHECK(G.all_lines().size() == flags);
    for (const auto& line : G.all_lines()) {
      CHECK(line.size() == q + 1);
      for (std::size_t x : line)
        for (std::size_t y : line)
          if (x != y) CHECK(G.adjacent(x, y));
    }
    std::string why;
    CHECK(is_partial_linear(G.space(), &why));
    // degree of the adjacency graph
    std::size_t expected_degree = q == 2 ? 18 : 48;
    for (std::size_t i = 0; i < G.size(); ++i)
      CHECK(G.adjacency_matrix().row_count_ones(i) == expected_degree);
    // adjacency coincides with collinearity on distinct points
    auto pairs = pair_to_line(G.space());
    for (std::size_t i = 0; i < G.size(); ++i)
      for (std::size_t j = 0; j < G.size(); ++j) {
        bool collinear = i != j && pairs.count(i * G.size() + j) > 0;
        CHECK(G.adjacent(i, j) == collinear);
      }
    // distances match breadth-first search
    for (std::size_t i = 0; i < G.size(); ++i) {
      auto dist = bfs_distances(G, i);
      for (std::size_t j = 0; j < G.size(); ++j)
        CHECK(G.distance(i, j) == dist[j]);
    }
  }
}

TEST_CASE("pencil lookup matches the line list") {
  FieldPtr F = field_q(2);
  GrassmannSpace G(F, 2);
  // M = <e1>, N = <e1,e2,e3>
  Mat m(1, 4);
  m.at(0, 0) = 1;
  Mat nmat(3, 4);
  nmat.at(0, 0) = nmat.at(1, 1) = nmat.at(2, 2) = 1;
  Subspace M(F, 4, m), N(F, 4, nmat);
  std::vector<std::size_t> pen = G.pencil(M, N);
  CHECK(pen.size() == 3);
  CHECK(std::binary_search(G.all_lines().begin(), G.all_lines().end(), pen));
  for (std::size_t x : pen) {
    CHECK(dim_intersection(G.subspace(x), M) == 1);
    CHECK(dim_intersection(G.subspace(x), N) == 2);
  }
  CHECK_THROWS_AS((void)G.pencil(N, M), std::invalid_argument);
  CHECK_THROWS_AS((void)G.pencil(M, M), std::invalid_argument);
}

TEST_CASE("trivial Grassmann space: one line through all points") {
  GrassmannSpace G(field_q(2), 1);
  CHECK(G.size() == 3);
  CHECK(G.all_lines().size() == 1);
  CHECK(G.all_lines()[0] == std::vector<std::size_t>{0, 1, 2});
  CHECK(is_strongly_connected(G.space()));
}

TEST_CASE("subspace relations") {
  FieldPtr F = field_q(2);
  GrassmannSpace G(F, 2);
  for (std::size_t i = 0; i < G.size(); ++i) {
    CHECK(dim_intersection(G.subspace(i), G.subspace(i)) == 2);
    CHECK_FALSE(adjacent_subspaces(G.subspace(i), G.subspace(i)));
    CHECK(grassmann_distance(G.subspace(i), G.subspace(i)) == 0);
  }
  Mat a(2, 4), b(2, 4);
  a.at(0, 0) = a.at(1, 1) = 1;  // <e1,e2>
  b.at(0, 2) = b.at(1, 3) = 1;  // <e3,e4>
  Subspace P(F, 4, a), Q(F, 4, b);
  CHECK(dim_intersection(P, Q) == 0);
  CHECK(grassmann_distance(P, Q) == 2);
  CHECK_FALSE(adjacent_subspaces(P, Q));
  for (std::size_t i = 0; i < G.size(); ++i)
    for (std::size_t j = 0; j < G.size(); ++j) {
      unsigned d = dim_intersection(G.subspace(i), G.subspace(j));
      CHECK(G.adjacent(i, j) == (d == 1));
      if (i != j) CHECK(grassmann_distance(G.subspace(i), G.subspace(j)) == 2 - d);
    }
  Mat one_dim(1, 4);
  one_dim.at(0, 0) = 1;
  CHECK_THROWS_AS((void)grassmann_distance(P, Subspace(F, 4, one_dim)),
                  std::invalid_argument);
}

TEST_CASE("annihilator") {
  FieldPtr F = field_q(2);
  GrassmannSpace G(F, 2);
  SUBCASE("matches the orthogonality scan and is an involution") {
    for (std::size_t i = 0; i < G.size(); ++i) {
      Subspace ann = annihilator(G.subspace(i));
      CHECK(ann.dim() == 2);
      CHECK(ann == annihilator_by_scan(G.subspace(i)));
      CHECK(annihilator(ann) == G.subspace(i));
    }
    // a one-dimensional subspace over GF(3)
    FieldPtr F3 = field_q(3);
    Mat m(1, 4);
    m.at(0, 0) = 1;
    m.at(0, 3) = 2;
    Subspace X(F3, 4, m);
    CHECK(annihilator(X).dim() == 3);
    CHECK(annihilator(X) == annihilator_by_scan(X));
    CHECK(annihilator(annihilator(X)) == X);
  }
  SUBCASE("completion formula: dual images of the second inverse column") {
    FiniteRing R = make_matrix_ring(2, make_gf(2, 1));
    LinePtr L = ProjectiveLine::enumerate_points(R);
    for (std::size_t i = 0; i < L->size(); ++i) {
      const ProjPoint& p = L->point(i);
      // (v, w) solves av + bw = 0, cv + dw = 1: second column of the
      // inverse of the stored completion matrix
      std::optional<std::pair<Elem, Elem>> vw;
      for (Elem v = 0; v < R.order() && !vw; ++v)
        for (Elem w = 0; w < R.order(); ++w)
          if (R.add(R.mul(p.a, v), R.mul(p.b, w)) == 0 &&
              R.add(R.mul(p.c, v), R.mul(p.d, w)) == R.one()) {
            vw = {v, w};
            break;
          }
      REQUIRE(vw.has_value());
      auto [v, w] = *vw;
      Mat formula(2, 4);  // rows span { (V u, W u) : u }, i.e. [V^T | W^T]
      for (unsigned r = 0; r < 2; ++r)
        for (unsigned c = 0; c < 2; ++c) {
          formula.at(r, c) = R.matrix_entry(v, c, r);
          formula.at(r, 2 + c) = R.matrix_entry(w, c, r);
        }
      CHECK(Subspace(F, 4, formula) == annihilator(psi(p)));
    }
  }
  SUBCASE("points R(A, 1) annihilate to the row space of [I | -A^T]") {
    FiniteRing R = make_matrix_ring(2, make_gf(2, 1));
    for (Elem a = 0; a < R.order(); ++a) {
      ProjPoint p = point_of(R, a, R.one());
      Mat expect(2, 4);
      for (unsigned r = 0; r < 2; ++r)
        for (unsigned c = 0; c < 2; ++c) {
          expect.at(r, c) = r == c ? 1 : 0;
          expect.at(r, 2 + c) = R.matrix_entry(R.neg(a), c, r);
        }
      CHECK(annihilator(psi(point_of(R, a, R.one()))) == Subspace(F, 4, expect));
    }
  }
}

TEST_CASE("point/subspace correspondence") {
  FiniteRing R = make_matrix_ring(2, make_gf(2, 1));
  LinePtr L = ProjectiveLine::enumerate_points(R);
  FieldPtr F = field_q(2);
  GrassmannSpace G(F, 2);
  SUBCASE("anchor images") {
    Mat left(2, 4), right(2, 4);
    left.at(0, 0) = left.at(1, 1) = 1;
    right.at(0, 2) = right.at(1, 3) = 1;
    CHECK(psi(point_of(R, R.one(), 0)) == Subspace(F, 4, left));
    CHECK(psi_inverse(R, Subspace(F, 4, right)).same_point(point_of(R, 0, R.one())));
  }
  SUBCASE("bijective, inverse round trip, matches the line model") {
    std::set<Subspace> images;
    for (std::size_t i = 0; i < L->size(); ++i) {
      Subspace X = psi(L->point(i));
      images.insert(X);
      CHECK(X == L->point_subspace(i));
      CHECK(psi_inverse(R, X).same_point(L->point(i)));
      (void)G.index_of(X);  // throws if not a Grassmann point
    }
    CHECK(images.size() == G.size());
  }
  SUBCASE("distant means complementary") {
    for (std::size_t i = 0; i < L->size(); ++i)
      for (std::size_t j = 0; j < L->size(); ++j)
        CHECK(L->distant(i, j) ==
              (i != j && dim_intersection(psi(L->point(i)), psi(L->point(j))) == 0));
  }
  SUBCASE("field points are one-dimensional") {
    FiniteRing K = make_gf(3, 1);
    LinePtr LK = ProjectiveLine::enumerate_points(K);
    for (std::size_t i = 0; i < LK->size(); ++i) {
      Subspace X = psi(LK->point(i));
      CHECK(X.dim() == 1);
      CHECK(psi_inverse(K, X).same_point(LK->point(i)));
    }
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS((void)psi(point_of(make_zmod(4), 1, 0)), std::invalid_argument);
    Mat thin(1, 4);
    thin.at(0, 0) = 1;
    CHECK_THROWS_AS((void)psi_inverse(R, Subspace(F, 4, thin)), std::invalid_argument);
  }
}

TEST_CASE("Segre products") {
  PartialLinearSpace A = three_point_line_space();
  SUBCASE("two scaffold lines") {
    PartialLinearSpace P = segre_product({A, A});
    CHECK(P.num_points == 9);
    CHECK(P.lines.size() == 6);
    std::vector<std::size_t> sizes{3, 3};
    for (const auto& line : P.lines) {
      CHECK(line.size() == 3);
      auto c0 = product_point_split(sizes, line[0]);
      auto c1 = product_point_split(sizes, line[1]);
      std::size_t differing = 0;
      for (std::size_t k = 0; k < 2; ++k)
        if (c0[k] != c1[k]) ++differing;
      CHECK(differing == 1);
    }
  }
  SUBCASE("singleton product is a copy") {
    GrassmannSpace G(field_q(2), 2);
    PartialLinearSpace P = segre_product({G.space()});
    CHECK(P.num_points == G.space().num_points);
    CHECK(P.lines == G.space().lines);
  }
  SUBCASE("products of Grassmann spaces are partial linear with long lines") {
    GrassmannSpace G(field_q(2), 2);
    PartialLinearSpace P = segre_product({G.space(), G.space()});
    CHECK(P.num_points == 35 * 35);
    CHECK(P.lines.size() == 2 * 105 * 35);
    std::string why;
    CHECK(is_partial_linear(P, &why));
    for (const auto& line : P.lines) CHECK(line.size() >= 3);
  }
  SUBCASE("join/split round trip") {
    std::vector<std::size_t> sizes{3, 5, 2};
    for (std::size_t p = 0; p < 30; ++p) {
      auto comps = product_point_split(sizes, p);
      CHECK(product_point_join(sizes, comps) == p);
    }
    CHECK_THROWS_AS((void)product_point_split(sizes, 30), std::invalid_argument);
  }
  SUBCASE("empty factor list") {
    CHECK_THROWS_AS((void)segre_product({}), std::invalid_argument);
  }
}

TEST_CASE("componentwise correspondence into the product space") {
  FiniteRing F2 = make_gf(2, 1);
  FiniteRing M2 = make_matrix_ring(2, F2);
  FiniteRing R = make_product({F2, M2});
  LinePtr L = ProjectiveLine::enumerate_points(R);
  REQUIRE(L->size() == 3 * 35);
  auto G1 = std::make_shared<const GrassmannSpace>(field_q(2), 1);
  auto G2 = std::make_shared<const GrassmannSpace>(field_q(2), 2);
  SegreGrassmann S({G1, G2});
  CHECK(S.size() == 105);

  std::vector<std::size_t> images(L->size());
  std::set<std::size_t> distinct;
  for (std::size_t i = 0; i < L->size(); ++i) {
    images[i] = product_psi(*L, i, S);
    distinct.insert(images[i]);
    // componentwise: the image splits into the factor images of the parts
    auto comps = L->split_product_point(i);
    auto gcomps = S.split(images[i]);
    CHECK(gcomps[0] == G1->index_of(psi(L->component_lines()[0]->point(comps[0]))));
    CHECK(gcomps[1] == G2->index_of(psi(L->component_lines()[1]->point(comps[1]))));
  }
  CHECK(distinct.size() == L->size());  // bijective

  auto pairs = pair_to_line(S.space());
  auto collinear = [&](std::size_t x, std::size_t y) {
    return pairs.count(x * static_cast<std::uint64_t>(S.size()) + y) > 0;
  };
  for (std::size_t i = 0; i < L->size(); ++i)
    for (std::size_t j = 0; j < L->size(); ++j)
      CHECK(L->adjacent(i, j) == (i != j && collinear(images[i], images[j])));
  // witnessed adjacency: all three images on one common line
  for (std::size_t i = 0; i < L->size(); ++i)
    for (std::size_t j = 0; j < L->size(); ++j)
      for (std::size_t r = 0; r < L->size(); ++r) {
        bool three_collinear = false;
        if (i != j && i != r && j != r) {
          auto it = pairs.find(images[i] * static_cast<std::uint64_t>(S.size()) +
                               images[j]);
          if (it != pairs.end()) {
            const auto& line = S.space().lines[it->second];
            three_collinear = std::binary_search(line.begin(), line.end(), images[r]);
          }
        }
        CHECK(L->adjacent_via(i, j, r) == three_collinear);
      }

  SUBCASE("mismatched factors are rejected") {
    SegreGrassmann wrong({G2, G2});
    CHECK_THROWS_AS((void)product_psi(*L, 0, wrong), std::invalid_argument);
    LinePtr L4 = ProjectiveLine::enumerate_points(make_zmod(4));
    CHECK_THROWS_AS((void)product_psi(*L4, 0, S), std::invalid_argument);
  }
}

TEST_CASE("strong subspaces") {
  SUBCASE("stars and tops") {
    FieldPtr F = field_q(2);
    GrassmannSpace G(F, 2);
    auto maximal = strong_subspaces(G.space());
    CHECK(maximal.size() == 30);
    std::size_t stars = 0, tops = 0;
    for (const auto& S : maximal) {
      CHECK(S.size() == 7);
      // intersect and join all members
      Subspace meet = G.subspace(S[0]), join = G.subspace(S[0]);
      for (std::size_t k = 1; k < S.size(); ++k) {
        meet = subspace_intersection(meet, G.subspace(S[k]));
        join = subspace_sum(join, G.subspace(S[k]));
      }
      if (meet.dim() == 1) {
        ++stars;  // all subspaces through a common one-dimensional M
        std::size_t through = 0;
        for (std::size_t i = 0; i < G.size(); ++i)
          if (dim_intersection(G.subspace(i), meet) == 1) ++through;
        CHECK(through == 7);
      } else {
        CHECK(join.dim() == 3);  // all subspaces inside a common N
        ++tops;
      }
    }
    CHECK(stars == 15);
    CHECK(tops == 15);
  }
  SUBCASE("product of two scaffold lines: the six slice lines") {
    PartialLinearSpace P = segre_product({three_point_line_space(), three_point_line_space()});
    auto maximal = strong_subspaces(P);
    CHECK(maximal.size() == 6);
    for (const auto& S : maximal) CHECK(S.size() == 3);
    CHECK_FALSE(is_strongly_connected(P));
    for (std::size_t p = 0; p < 9; ++p) CHECK(approx_classes_at(P, p) == 2);
  }
  SUBCASE("chain classes at a point") {
    GrassmannSpace G(field_q(2), 2);
    for (std::size_t p = 0; p < G.size(); ++p) CHECK(approx_classes_at(G.space(), p) == 1);
    GrassmannSpace T(field_q(2), 1);
    for (std::size_t p = 0; p < T.size(); ++p) CHECK(approx_classes_at(T.space(), p) == 1);
    // a mixed product: one chain class per factor at every point
    PartialLinearSpace P = segre_product({T.space(), G.space()});
    StrongStructure analysis = analyze_strong_structure(P);
    for (std::size_t p = 0; p < P.num_points; p += 7)
      CHECK(analysis.approx_classes_at(p) == 2);
    CHECK_FALSE(analysis.strongly_connected());
  }
  SUBCASE("isolated points and caps") {
    PartialLinearSpace S = make_partial_linear_space(3, {{0, 1}});
    auto maximal = strong_subspaces(S);
    CHECK(maximal == std::vector<std::vector<std::size_t>>{{0, 1}, {2}});
    CHECK(approx_classes_at(S, 2) == 0);
    CHECK_FALSE(is_strongly_connected(S));
    CHECK_THROWS_AS((void)strong_subspaces(PartialLinearSpace{500, {}}), CapExceeded);
  }
  SUBCASE("connectivity verdicts") {
    GrassmannSpace G(field_q(2), 2);
    CHECK(is_strongly_connected(G.space()));
    PartialLinearSpace disjoint =
        make_partial_linear_space(6, {{0, 1, 2}, {3, 4, 5}});
    CHECK_FALSE(is_strongly_connected(disjoint));
  }
}

TEST_CASE("collineations") {
  auto A = std::make_shared<const PartialLinearSpace>(three_point_line_space());
  SUBCASE("identity and composition") {
    Collineation id = identity_collineation(A);
    CHECK(is_collineation(id));
    Collineation swapped{A, A, {1, 0, 2}};
    CHECK(is_collineation(swapped));
    Collineation both = compose_collineations(swapped, swapped);
    CHECK(both.table == id.table);
  }
  SUBCASE("line-breaking maps are rejected") {
    auto S = std::make_shared<const PartialLinearSpace>(
        make_partial_linear_space(4, {{0, 1}, {2, 3}}));
    Collineation good{S, S, {2, 3, 0, 1}};
    CHECK(is_collineation(good));
    Collineation bad{S, S, {0, 2, 1, 3}};
    std::string why;
    CHECK_FALSE(is_collineation(bad, &why));
    CHECK(why == "a line image is not a line");
  }
}

TEST_CASE("product collineation decomposition") {
  auto A = std::make_shared<const PartialLinearSpace>(three_point_line_space());
  std::vector<SpacePtr> factors{A, A};
  auto product = std::make_shared<const PartialLinearSpace>(segre_product({*A, *A}));
  std::vector<std::size_t> sizes{3, 3};

  SUBCASE("identity decomposes trivially") {
    auto parts = decompose_product_collineation(identity_collineation(product),
                                                factors, factors);
    CHECK(parts.sigma == std::vector<std::size_t>{0, 1});
    CHECK(parts.components[0].table == std::vector<std::size_t>{0, 1, 2});
    CHECK(parts.components[1].table == std::vector<std::size_t>{0, 1, 2});
  }
  SUBCASE("factor swap is recovered as a transposition") {
    Collineation f{product, product, std::vector<std::size_t>(9)};
    for (std::size_t p = 0; p < 9; ++p) {
      auto c = product_point_split(sizes, p);
      std::swap(c[0], c[1]);
      f.table[p] = product_point_join(sizes, c);
    }
    auto parts = decompose_product_collineation(f, factors, factors);
    CHECK(parts.sigma == std::vector<std::size_t>{1, 0});
    CHECK(parts.components[0].table == std::vector<std::size_t>{0, 1, 2});
    CHECK(parts.components[1].table == std::vector<std::size_t>{0, 1, 2});
  }
  SUBCASE("exhaustive round trips on two scaffold lines") {
    std::vector<std::vector<std::size_t>> perms;
    std::vector<std::size_t> p{0, 1, 2};
    do {
      perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    for (std::size_t sigma_swap = 0; sigma_swap < 2; ++sigma_swap)
      for (const auto& p0 : perms)
        for (const auto& p1 : perms) {
          ProductCollineationParts parts;
          parts.sigma = sigma_swap ? std::vector<std::size_t>{1, 0}
                                   : std::vector<std::size_t>{0, 1};
          parts.components.push_back({A, A, p0});
          parts.components.push_back({A, A, p1});
          Collineation f = compose_product_collineation(parts, factors, factors);
          CHECK(is_collineation(f));
          auto back = decompose_product_collineation(f, factors, factors);
          CHECK(back.sigma == parts.sigma);
          CHECK(back.components[0].table == p0);
          CHECK(back.components[1].table == p1);
        }
  }
  SUBCASE("seeded round trips on a mixed Grassmann product") {
    auto T = std::make_shared<const GrassmannSpace>(field_q(2), 1);
    auto G = std::make_shared<const GrassmannSpace>(field_q(2), 2);
    auto TS = std::make_shared<const PartialLinearSpace>(T->space());
    auto GS = std::make_shared<const PartialLinearSpace>(G->space());
    std::vector<SpacePtr> mixed{TS, GS};
    std::mt19937 rng(777);
    for (int round = 0; round < 10; ++round) {
      ProductCollineationParts parts;
      parts.sigma = {0, 1};  // non-isomorphic factors cannot swap
      Collineation c0 = projectivity_collineation(T, random_invertible(*T->field(), 2, rng));
      Collineation c1 = projectivity_collineation(G, random_invertible(*G->field(), 4, rng));
      c0.source = c0.target = TS;
      c1.source = c1.target = GS;
      parts.components = {c0, c1};
      Collineation f = compose_product_collineation(parts, mixed, mixed);
      auto back = decompose_product_collineation(f, mixed, mixed);
      CHECK(back.sigma == parts.sigma);
      CHECK(back.components[0].table == c0.table);
      CHECK(back.components[1].table == c1.table);
    }
  }
  SUBCASE("hypothesis and input validation") {
    auto lineless = std::make_shared<const PartialLinearSpace>(
        make_partial_linear_space(2, {}));
    CHECK_THROWS_AS((void)decompose_product_collineation(
                        identity_collineation(lineless), {lineless}, {lineless}),
                    std::invalid_argument);
    Collineation broken{product, product, std::vector<std::size_t>(9)};
    for (std::size_t i = 0; i < 9; ++i) broken.table[i] = i;
    std::swap(broken.table[0], broken.table[4]);  // breaks lines
    CHECK_THROWS_AS((void)decompose_product_collineation(broken, factors, factors),
                    std::invalid_argument);
    ProductCollineationParts bad;
    bad.sigma = {0, 0};
    bad.components = {identity_collineation(A), identity_collineation(A)};
    CHECK_THROWS_AS(
        (void)compose_product_collineation(bad, factors, factors),
        std::invalid_argument);
  }
}
