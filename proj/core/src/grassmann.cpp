#include "ringline/grassmann.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>

#include "ringline/errors.hpp"

namespace ringline {

namespace {

constexpr std::uint64_t kGrassmannPointCap = 5000;
constexpr std::size_t kStrongStateCap = 200000;

std::span<const Elem> row_span(const Mat& m, std::size_t i) {
  return std::span<const Elem>(m.a.data() + i * m.cols, m.cols);
}

bool contains_subspace(const Subspace& big, const Subspace& small) {
  for (std::size_t r = 0; r < small.dim(); ++r)
    if (!big.contains(row_span(small.basis(), r))) return false;
  return true;
}

bool spaces_equal(const PartialLinearSpace& A, const PartialLinearSpace& B) {
  return A.num_points == B.num_points && A.lines == B.lines;
}

// Canonicalizes in place; returns a diagnostic instead of throwing.
std::optional<std::string> canonicalize_space(std::size_t num_points,
                                              std::vector<std::vector<std::size_t>>& lines) {
  for (auto& line : lines) {
    if (line.size() < 2) return "a line has fewer than two points";
    std::sort(line.begin(), line.end());
    for (std::size_t k = 0; k < line.size(); ++k) {
      if (line[k] >= num_points) return "a line references a point out of range";
      if (k > 0 && line[k] == line[k - 1]) return "a line repeats a point";
    }
  }
  std::sort(lines.begin(), lines.end());
  lines.erase(std::unique(lines.begin(), lines.end()), lines.end());
  std::unordered_map<std::uint64_t, std::uint32_t> pair_seen;
  pair_seen.reserve(lines.size() * 4);
  for (const auto& line : lines)
    for (std::size_t x = 0; x < line.size(); ++x)
      for (std::size_t y = x + 1; y < line.size(); ++y) {
        std::uint64_t key = static_cast<std::uint64_t>(line[x]) * num_points + line[y];
        if (!pair_seen.emplace(key, 0).second)
          return "two points lie on two distinct lines";
      }
  return std::nullopt;
}

std::size_t popcount_and(const std::uint64_t* a, const std::uint64_t* b,
                         std::size_t words, std::size_t stop_at) {
  std::size_t c = 0;
  for (std::size_t w = 0; w < words; ++w) {
    c += std::popcount(a[w] & b[w]);
    if (c >= stop_at) return c;
  }
  return c;
}

struct Dsu {
  std::vector<std::size_t> parent;
  explicit Dsu(std::size_t n) : parent(n) {
    for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

}  // namespace

// ---------------------------------------------------------------------------
// Partial linear spaces
// ---------------------------------------------------------------------------

PartialLinearSpace make_partial_linear_space(std::size_t num_points,
                                             std::vector<std::vector<std::size_t>> lines) {
  if (auto why = canonicalize_space(num_points, lines))
    throw std::invalid_argument("not a partial linear space: " + *why);
  return PartialLinearSpace{num_points, std::move(lines)};
}

bool is_partial_linear(const PartialLinearSpace& S, std::string* why) {
  auto lines = S.lines;
  if (auto bad = canonicalize_space(S.num_points, lines)) {
    if (why) *why = *bad;
    return false;
  }
  if (lines != S.lines) {
    if (why) *why = "line list is not in canonical sorted form";
    return false;
  }
  return true;
}

std::optional<std::size_t> line_through(const PartialLinearSpace& S, std::size_t p,
                                        std::size_t q) {
  if (p == q || p >= S.num_points || q >= S.num_points)
    throw std::invalid_argument("line_through expects two distinct point indices");
  for (std::size_t li = 0; li < S.lines.size(); ++li) {
    const auto& line = S.lines[li];
    if (std::binary_search(line.begin(), line.end(), p) &&
        std::binary_search(line.begin(), line.end(), q))
      return li;
  }
  return std::nullopt;
}

std::vector<std::size_t> lines_through(const PartialLinearSpace& S, std::size_t p) {
  if (p >= S.num_points) throw std::invalid_argument("point index out of range");
  std::vector<std::size_t> out;
  for (std::size_t li = 0; li < S.lines.size(); ++li)
    if (std::binary_search(S.lines[li].begin(), S.lines[li].end(), p))
      out.push_back(li);
  return out;
}

// ---------------------------------------------------------------------------
// Grassmann spaces
// ---------------------------------------------------------------------------

GrassmannSpace::GrassmannSpace(FieldPtr field, unsigned block_dim)
    : field_(std::move(field)), n_(block_dim) {
  if (!field_) throw std::invalid_argument("null field table");
  if (n_ == 0) throw std::invalid_argument("block dimension must be positive");
  const unsigned d = 2 * n_;
  std::uint64_t count = gaussian_binomial(d, n_, field_->q());
  if (count > kGrassmannPointCap)
    throw CapExceeded("Grassmann space would have " + std::to_string(count) +
                      " points, above the cap " + std::to_string(kGrassmannPointCap));
  subspaces_ = enumerate_subspaces(field_, d, n_);
  std::sort(subspaces_.begin(), subspaces_.end());

  adjacency_ = BitMatrix(subspaces_.size());
  for (std::size_t i = 0; i < subspaces_.size(); ++i)
    for (std::size_t j = i + 1; j < subspaces_.size(); ++j)
      if (dim_intersection(subspaces_[i], subspaces_[j]) == n_ - 1) {
        adjacency_.set(i, j);
        adjacency_.set(j, i);
      }

  std::vector<Subspace> smaller = enumerate_subspaces(field_, d, n_ - 1);
  std::vector<Subspace> larger = enumerate_subspaces(field_, d, n_ + 1);
  std::vector<std::vector<std::size_t>> lines;
  for (const Subspace& M : smaller)
    for (const Subspace& N : larger) {
      if (!contains_subspace(N, M)) continue;
      std::vector<std::size_t> members;
      for (std::size_t i = 0; i < subspaces_.size(); ++i)
        if (contains_subspace(subspaces_[i], M) && contains_subspace(N, subspaces_[i]))
          members.push_back(i);
      lines.push_back(std::move(members));
    }
  space_ = make_partial_linear_space(subspaces_.size(), std::move(lines));
}

const Subspace& GrassmannSpace::subspace(std::size_t i) const {
  if (i >= subspaces_.size()) throw std::invalid_argument("subspace index out of range");
  return subspaces_[i];
}

std::size_t GrassmannSpace::index_of(const Subspace& X) const {
  auto it = std::lower_bound(subspaces_.begin(), subspaces_.end(), X);
  if (it == subspaces_.end() || !(*it == X))
    throw std::invalid_argument("subspace is not a point of this Grassmann space");
  return static_cast<std::size_t>(it - subspaces_.begin());
}

bool GrassmannSpace::adjacent(std::size_t i, std::size_t j) const {
  if (i >= subspaces_.size() || j >= subspaces_.size())
    throw std::invalid_argument("subspace index out of range");
  return adjacency_.get(i, j);
}

unsigned GrassmannSpace::distance(std::size_t i, std::size_t j) const {
  return grassmann_distance(subspace(i), subspace(j));
}

std::vector<std::size_t> GrassmannSpace::pencil(const Subspace& M, const Subspace& N) const {
  if (M.ambient() != 2 * n_ || N.ambient() != 2 * n_ || M.dim() + 1 != n_ ||
      N.dim() != n_ + 1 || !contains_subspace(N, M))
    throw std::invalid_argument(
        "pencil expects a flag M < N with dim M = n-1 and dim N = n+1");
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < subspaces_.size(); ++i)
    if (contains_subspace(subspaces_[i], M) && contains_subspace(N, subspaces_[i]))
      members.push_back(i);
  return members;
}

// ---------------------------------------------------------------------------
// Subspace relations and duality
// ---------------------------------------------------------------------------

unsigned dim_intersection(const Subspace& P, const Subspace& Q) {
  if (P.ambient() != Q.ambient() || P.table()->q() != Q.table()->q())
    throw std::invalid_argument("subspaces live in different ambient spaces");
  Mat stack(P.dim() + Q.dim(), P.ambient());
  std::copy(P.basis().a.begin(), P.basis().a.end(), stack.a.begin());
  std::copy(Q.basis().a.begin(), Q.basis().a.end(),
            stack.a.begin() + static_cast<std::ptrdiff_t>(P.basis().a.size()));
  unsigned rank = mat_rank(*P.table(), stack);
  return static_cast<unsigned>(P.dim() + Q.dim()) - rank;
}

bool adjacent_subspaces(const Subspace& P, const Subspace& Q) {
  if (P.dim() != Q.dim())
    throw std::invalid_argument("adjacency expects subspaces of equal dimension");
  return P.dim() >= 1 && dim_intersection(P, Q) == P.dim() - 1;
}

unsigned grassmann_distance(const Subspace& P, const Subspace& Q) {
  if (P.dim() != Q.dim())
    throw std::invalid_argument("distance expects subspaces of equal dimension");
  return static_cast<unsigned>(P.dim()) - dim_intersection(P, Q);
}

Subspace annihilator(const Subspace& X) {
  Mat k = kernel_basis(*X.table(), X.basis());
  return Subspace(X.table(), X.ambient(), std::move(k));
}

// ---------------------------------------------------------------------------
// The point/subspace correspondence
// ---------------------------------------------------------------------------

Subspace psi(const ProjPoint& p) {
  const FiniteRing& R = p.ring;
  if (R.kind() == RingKind::Matrix) {
    const unsigned n = R.matrix_dim();
    FieldPtr F = FieldTable::get(R.matrix_base());
    Mat M(n, 2 * n);
    for (unsigned r = 0; r < n; ++r)
      for (unsigned c = 0; c < n; ++c) {
        M.at(r, c) = R.matrix_entry(p.a, r, c);
        M.at(r, n + c) = R.matrix_entry(p.b, r, c);
      }
    return Subspace(std::move(F), 2 * n, std::move(M));
  }
  if (R.is_field()) {
    FieldPtr F = FieldTable::get(R);
    Mat M(1, 2);
    M.at(0, 0) = p.a;
    M.at(0, 1) = p.b;
    return Subspace(std::move(F), 2, std::move(M));
  }
  throw std::invalid_argument("the subspace model needs a matrix ring over a field");
}

ProjPoint psi_inverse(const FiniteRing& R, const Subspace& X) {
  if (R.kind() == RingKind::Matrix) {
    const unsigned n = R.matrix_dim();
    if (X.ambient() != 2 * n || X.dim() != n ||
        X.table()->q() != R.matrix_base().order())
      throw std::invalid_argument("subspace does not fit the ring's model");
    std::vector<Elem> left(n * n), right(n * n);
    for (unsigned r = 0; r < n; ++r)
      for (unsigned c = 0; c < n; ++c) {
        left[r * n + c] = X.basis().at(r, c);
        right[r * n + c] = X.basis().at(r, n + c);
      }
    return point_of(R, R.matrix_encode(left), R.matrix_encode(right));
  }
  if (R.is_field()) {
    if (X.ambient() != 2 || X.dim() != 1 || X.table()->q() != R.order())
      throw std::invalid_argument("subspace does not fit the ring's model");
    return point_of(R, X.basis().at(0, 0), X.basis().at(0, 1));
  }
  throw std::invalid_argument("the subspace model needs a matrix ring over a field");
}

// ---------------------------------------------------------------------------
// Segre products
// ---------------------------------------------------------------------------

std::size_t product_point_join(std::span<const std::size_t> sizes,
                               std::span<const std::size_t> comps) {
  if (sizes.size() != comps.size())
    throw std::invalid_argument("component count does not match the factor count");
  std::size_t idx = 0, stride = 1;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (comps[i] >= sizes[i]) throw std::invalid_argument("component index out of range");
    idx += comps[i] * stride;
    stride *= sizes[i];
  }
  return idx;
}

std::vector<std::size_t> product_point_split(std::span<const std::size_t> sizes,
                                             std::size_t point) {
  std::vector<std::size_t> comps(sizes.size());
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    comps[i] = point % sizes[i];
    point /= sizes[i];
  }
  if (point != 0) throw std::invalid_argument("point index out of range");
  return comps;
}

PartialLinearSpace segre_product(const std::vector<PartialLinearSpace>& factors) {
  if (factors.empty()) throw std::invalid_argument("empty factor list");
  std::vector<std::size_t> sizes;
  std::size_t total = 1;
  for (const auto& f : factors) {
    std::string why;
    if (!is_partial_linear(f, &why))
      throw std::invalid_argument("factor is not a partial linear space: " + why);
    if (f.num_points == 0) throw std::invalid_argument("factor has no points");
    if (total > (std::size_t{1} << 21) / f.num_points)
      throw CapExceeded("Segre product would exceed the point cap");
    total *= f.num_points;
    sizes.push_back(f.num_points);
  }
  std::vector<std::vector<std::size_t>> lines;
  const std::size_t m = factors.size();
  for (std::size_t j = 0; j < m; ++j) {
    for (const auto& L : factors[j].lines) {
      for (std::size_t p = 0; p < total; ++p) {
        std::vector<std::size_t> comps = product_point_split(sizes, p);
        if (comps[j] != L.front()) continue;  // one base point per fibre
        std::vector<std::size_t> line;
        line.reserve(L.size());
        for (std::size_t member : L) {
          comps[j] = member;
          line.push_back(product_point_join(sizes, comps));
        }
        lines.push_back(std::move(line));
      }
    }
  }
  return make_partial_linear_space(total, std::move(lines));
}

SegreGrassmann::SegreGrassmann(std::vector<std::shared_ptr<const GrassmannSpace>> factors)
    : factors_(std::move(factors)) {
  if (factors_.empty()) throw std::invalid_argument("empty factor list");
  std::vector<PartialLinearSpace> spaces;
  for (const auto& f : factors_) {
    if (!f) throw std::invalid_argument("null factor");
    sizes_.push_back(f->size());
    spaces.push_back(f->space());
  }
  space_ = segre_product(spaces);
}

std::size_t SegreGrassmann::join(std::span<const std::size_t> comps) const {
  return product_point_join(sizes_, comps);
}

std::vector<std::size_t> SegreGrassmann::split(std::size_t point) const {
  return product_point_split(sizes_, point);
}

std::size_t product_psi(const ProjectiveLine& L, std::size_t point,
                        const SegreGrassmann& G) {
  if (L.ring().kind() != RingKind::Product)
    throw std::invalid_argument("the product correspondence needs a product ring");
  const auto& comps = L.component_lines();
  if (comps.size() != G.factors().size())
    throw std::invalid_argument("factor count does not match the ring");
  std::vector<std::size_t> point_comps = L.split_product_point(point);
  std::vector<std::size_t> image(comps.size());
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const GrassmannSpace& gf = *G.factors()[i];
    const ProjectiveLine& cl = *comps[i];
    if (!cl.has_subspace_model() || cl.model_block_dim() != gf.block_dim() ||
        cl.model_field()->q() != gf.field()->q())
      throw std::invalid_argument("component ring does not match its Grassmann factor");
    image[i] = gf.index_of(cl.point_subspace(point_comps[i]));
  }
  return G.join(image);
}

// ---------------------------------------------------------------------------
// Strong subspaces
// ---------------------------------------------------------------------------

StrongStructure analyze_strong_structure(const PartialLinearSpace& S, std::size_t cap) {
  std::string why;
  if (!is_partial_linear(S, &why))
    throw std::invalid_argument("not a partial linear space: " + why);
  if (S.num_points > cap)
    throw CapExceeded("strong-subspace analysis capped at " + std::to_string(cap) +
                      " points, space has " + std::to_string(S.num_points));

  const std::size_t N = S.num_points;
  const std::size_t W = (N + 63) / 64 + (N == 0);

  std::unordered_map<std::uint64_t, std::uint32_t> pair_line;
  pair_line.reserve(S.lines.size() * 4);
  std::vector<std::uint64_t> collinear(N * W, 0);
  auto set_bit = [&](std::vector<std::uint64_t>& bits, std::size_t base, std::size_t j) {
    bits[base + j / 64] |= std::uint64_t{1} << (j % 64);
  };
  for (std::size_t p = 0; p < N; ++p) set_bit(collinear, p * W, p);
  for (std::size_t li = 0; li < S.lines.size(); ++li) {
    const auto& line = S.lines[li];
    for (std::size_t x = 0; x < line.size(); ++x)
      for (std::size_t y = x + 1; y < line.size(); ++y) {
        pair_line.emplace(static_cast<std::uint64_t>(line[x]) * N + line[y],
                          static_cast<std::uint32_t>(li));
        set_bit(collinear, line[x] * W, line[y]);
        set_bit(collinear, line[y] * W, line[x]);
      }
  }
  auto line_of_pair = [&](std::size_t a, std::size_t b) -> const std::vector<std::size_t>* {
    if (a > b) std::swap(a, b);
    auto it = pair_line.find(static_cast<std::uint64_t>(a) * N + b);
    return it == pair_line.end() ? nullptr : &S.lines[it->second];
  };

  // closed mutually-collinear hull of a seed, or nullopt when two members
  // fail to be collinear
  auto closure = [&](std::span<const std::size_t> seed,
                     std::size_t extra) -> std::optional<std::vector<std::size_t>> {
    std::vector<std::uint64_t> mask(W, 0);
    std::vector<std::size_t> members;
    std::vector<std::pair<std::size_t, std::size_t>> pending;
    auto add_point = [&](std::size_t x) {
      std::uint64_t& w = mask[x / 64];
      std::uint64_t bit = std::uint64_t{1} << (x % 64);
      if (w & bit) return;
      w |= bit;
      for (std::size_t m : members) pending.emplace_back(m, x);
      members.push_back(x);
    };
    for (std::size_t s : seed) add_point(s);
    if (extra != static_cast<std::size_t>(-1)) add_point(extra);
    while (!pending.empty()) {
      auto [a, b] = pending.back();
      pending.pop_back();
      const std::vector<std::size_t>* line = line_of_pair(a, b);
      if (!line) return std::nullopt;
      for (std::size_t x : *line) add_point(x);
    }
    std::sort(members.begin(), members.end());
    return members;
  };

  StrongStructure out;
  out.num_points_ = N;
  out.words_ = W;

  std::map<std::vector<std::size_t>, std::size_t> interned;
  std::deque<std::size_t> queue;
  auto intern = [&](std::vector<std::size_t> v) {
    auto [it, fresh] = interned.try_emplace(std::move(v), out.subspaces_.size());
    if (!fresh) return;
    if (out.subspaces_.size() >= kStrongStateCap)
      throw CapExceeded("strong-subspace search exceeded the state cap");
    out.subspaces_.push_back(it->first);
    out.masks_.resize(out.masks_.size() + W, 0);
    std::uint64_t* mask = out.masks_.data() + it->second * W;
    for (std::size_t p : it->first) mask[p / 64] |= std::uint64_t{1} << (p % 64);
    queue.push_back(it->second);
  };

  for (const auto& line : S.lines) intern(line);  // lines are themselves strong

  std::vector<std::uint64_t> cand(W), own(W);
  while (!queue.empty()) {
    std::size_t id = queue.front();
    queue.pop_front();
    std::vector<std::size_t> members = out.subspaces_[id];  // copy: vector may grow
    for (std::size_t w = 0; w < W; ++w) cand[w] = ~std::uint64_t{0};
    for (std::size_t m : members)
      for (std::size_t w = 0; w < W; ++w) cand[w] &= collinear[m * W + w];
    // copy, not a pointer: intern() below grows masks_ and may reallocate it
    std::copy_n(out.masks_.data() + id * W, W, own.data());
    for (std::size_t w = 0; w < W; ++w) {
      std::uint64_t free_bits = cand[w] & ~own[w];
      while (free_bits) {
        std::size_t x = w * 64 + static_cast<std::size_t>(std::countr_zero(free_bits));
        free_bits &= free_bits - 1;
        if (x >= N) break;
        if (auto grown = closure(members, x)) intern(std::move(*grown));
      }
    }
  }

  const std::size_t K = out.subspaces_.size();
  std::vector<std::vector<std::uint32_t>> by_point(N);
  for (std::size_t id = 0; id < K; ++id)
    for (std::size_t p : out.subspaces_[id])
      by_point[p].push_back(static_cast<std::uint32_t>(id));

  Dsu dsu(K);
  for (std::size_t p = 0; p < N; ++p) {
    const auto& list = by_point[p];
    for (std::size_t x = 0; x < list.size(); ++x)
      for (std::size_t y = x + 1; y < list.size(); ++y) {
        if (dsu.find(list[x]) == dsu.find(list[y])) continue;
        if (popcount_and(out.masks_.data() + list[x] * W,
                         out.masks_.data() + list[y] * W, W, 2) >= 2)
          dsu.unite(list[x], list[y]);
      }
  }
  out.component_.resize(K);
  std::unordered_map<std::size_t, std::size_t> renumber;
  for (std::size_t id = 0; id < K; ++id) {
    std::size_t root = dsu.find(id);
    auto [it, fresh] = renumber.try_emplace(root, renumber.size());
    out.component_[id] = it->second;
  }
  out.num_components_ = renumber.size();

  for (std::size_t p = 0; p < N; ++p)
    if (by_point[p].empty()) out.isolated_points_.push_back(p);
  return out;
}

std::size_t StrongStructure::component_of(std::size_t subspace_index) const {
  if (subspace_index >= subspaces_.size())
    throw std::invalid_argument("strong-subspace index out of range");
  return component_[subspace_index];
}

std::vector<std::vector<std::size_t>> StrongStructure::maximal() const {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::vector<std::uint32_t>> by_point(num_points_);
  for (std::size_t id = 0; id < subspaces_.size(); ++id)
    for (std::size_t p : subspaces_[id]) by_point[p].push_back(static_cast<std::uint32_t>(id));
  for (std::size_t id = 0; id < subspaces_.size(); ++id) {
    const std::uint64_t* mine = masks_.data() + id * words_;
    bool is_maximal = true;
    for (std::uint32_t other : by_point[subspaces_[id].front()]) {
      if (other == id || subspaces_[other].size() <= subspaces_[id].size()) continue;
      const std::uint64_t* theirs = masks_.data() + other * words_;
      bool subset = true;
      for (std::size_t w = 0; w < words_ && subset; ++w)
        if (mine[w] & ~theirs[w]) subset = false;
      if (subset) {
        is_maximal = false;
        break;
      }
    }
    if (is_maximal) out.push_back(subspaces_[id]);
  }
  for (std::size_t p : isolated_points_) out.push_back({p});
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t StrongStructure::approx_classes_at(std::size_t point) const {
  if (point >= num_points_) throw std::invalid_argument("point index out of range");
  std::vector<char> seen(num_components_, 0);
  std::size_t classes = 0;
  const std::uint64_t bit = std::uint64_t{1} << (point % 64);
  for (std::size_t id = 0; id < subspaces_.size(); ++id)
    if (masks_[id * words_ + point / 64] & bit)
      if (!seen[component_[id]]) {
        seen[component_[id]] = 1;
        ++classes;
      }
  return classes;
}

bool StrongStructure::strongly_connected() const {
  if (subspaces_.empty()) return true;  // no multi-point strong subspaces: vacuous
  std::vector<std::vector<std::uint64_t>> cover(num_components_,
                                                std::vector<std::uint64_t>(words_, 0));
  for (std::size_t id = 0; id < subspaces_.size(); ++id)
    for (std::size_t w = 0; w < words_; ++w)
      cover[component_[id]][w] |= masks_[id * words_ + w];
  for (const auto& mask : cover) {
    std::size_t covered = 0;
    for (std::uint64_t w : mask) covered += std::popcount(w);
    if (covered != num_points_) return false;
  }
  return true;
}

std::vector<std::vector<std::size_t>> strong_subspaces(const PartialLinearSpace& S) {
  if (S.num_points > kStrongSubspaceCap)
    throw CapExceeded("strong-subspace listing capped at " +
                      std::to_string(kStrongSubspaceCap) + " points");
  return analyze_strong_structure(S, kStrongSubspaceCap).maximal();
}

std::size_t approx_classes_at(const PartialLinearSpace& S, std::size_t point) {
  return analyze_strong_structure(S).approx_classes_at(point);
}

bool is_strongly_connected(const PartialLinearSpace& S) {
  return analyze_strong_structure(S).strongly_connected();
}

// ---------------------------------------------------------------------------
// Collineations of Segre products
// ---------------------------------------------------------------------------

bool is_collineation(const Collineation& f, std::string* why) {
  auto fail = [&](const char* msg) {
    if (why) *why = msg;
    return false;
  };
  if (!f.source || !f.target) return fail("missing source or target space");
  if (f.table.size() != f.source->num_points) return fail("table size mismatch");
  std::vector<char> hit(f.target->num_points, 0);
  for (std::size_t v : f.table) {
    if (v >= f.target->num_points) return fail("table value out of range");
    if (hit[v]) return fail("table is not injective");
    hit[v] = 1;
  }
  if (f.source->num_points != f.target->num_points) return fail("point counts differ");
  if (f.source->lines.size() != f.target->lines.size()) return fail("line counts differ");
  for (const auto& line : f.source->lines) {
    std::vector<std::size_t> image;
    image.reserve(line.size());
    for (std::size_t p : line) image.push_back(f.table[p]);
    std::sort(image.begin(), image.end());
    if (!std::binary_search(f.target->lines.begin(), f.target->lines.end(), image))
      return fail("a line image is not a line");
  }
  // equal line counts + an injective line map = onto, so the inverse also
  // carries lines to lines
  return true;
}

Collineation identity_collineation(SpacePtr S) {
  if (!S) throw std::invalid_argument("null space");
  Collineation f{S, S, std::vector<std::size_t>(S->num_points)};
  for (std::size_t i = 0; i < f.table.size(); ++i) f.table[i] = i;
  return f;
}

Collineation compose_collineations(const Collineation& f, const Collineation& g) {
  if (!f.target || !g.source || !spaces_equal(*f.target, *g.source))
    throw std::invalid_argument("middle spaces do not match");
  Collineation h{f.source, g.target, std::vector<std::size_t>(f.table.size())};
  for (std::size_t i = 0; i < f.table.size(); ++i) h.table[i] = g.table[f.table[i]];
  return h;
}

namespace {

// The single coordinate in which a Segre line varies.
std::size_t varying_coordinate(std::span<const std::size_t> sizes,
                               const std::vector<std::size_t>& line) {
  std::vector<std::size_t> a = product_point_split(sizes, line[0]);
  std::vector<std::size_t> b = product_point_split(sizes, line[1]);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return i;
  throw std::logic_error("degenerate line in a Segre product");
}

void check_product_factors(const std::vector<SpacePtr>& factors, const char* side) {
  if (factors.empty())
    throw std::invalid_argument(std::string(side) + " factor list is empty");
  for (const auto& f : factors) {
    if (!f) throw std::invalid_argument("null factor");
    if (f->lines.empty())
      throw std::invalid_argument(std::string(side) + " factor has no line");
    if (!is_strongly_connected(*f))
      throw std::invalid_argument(std::string(side) +
                                  " factor is not strongly connected");
  }
}

std::vector<std::size_t> factor_sizes(const std::vector<SpacePtr>& factors) {
  std::vector<std::size_t> sizes;
  for (const auto& f : factors) sizes.push_back(f->num_points);
  return sizes;
}

std::vector<PartialLinearSpace> deref(const std::vector<SpacePtr>& factors) {
  std::vector<PartialLinearSpace> out;
  for (const auto& f : factors) out.push_back(*f);
  return out;
}

}  // namespace

Collineation compose_product_collineation(const ProductCollineationParts& parts,
                                          const std::vector<SpacePtr>& source_factors,
                                          const std::vector<SpacePtr>& target_factors) {
  const std::size_t m = source_factors.size();
  if (target_factors.size() != m || parts.sigma.size() != m ||
      parts.components.size() != m)
    throw std::invalid_argument("factor/permutation/component counts disagree");
  std::vector<char> seen(m, 0);
  for (std::size_t s : parts.sigma) {
    if (s >= m || seen[s]) throw std::invalid_argument("sigma is not a permutation");
    seen[s] = 1;
  }
  for (std::size_t k = 0; k < m; ++k) {
    Collineation probe{source_factors[k], target_factors[parts.sigma[k]],
                       parts.components[k].table};
    std::string why;
    if (!is_collineation(probe, &why))
      throw std::invalid_argument("component " + std::to_string(k) +
                                  " is not a collineation: " + why);
  }
  auto src_space = std::make_shared<const PartialLinearSpace>(
      segre_product(deref(source_factors)));
  auto tgt_space = std::make_shared<const PartialLinearSpace>(
      segre_product(deref(target_factors)));
  std::vector<std::size_t> src_sizes = factor_sizes(source_factors);
  std::vector<std::size_t> tgt_sizes = factor_sizes(target_factors);
  Collineation f{src_space, tgt_space, std::vector<std::size_t>(src_space->num_points)};
  for (std::size_t p = 0; p < f.table.size(); ++p) {
    std::vector<std::size_t> comps = product_point_split(src_sizes, p);
    std::vector<std::size_t> image(m);
    for (std::size_t k = 0; k < m; ++k)
      image[parts.sigma[k]] = parts.components[k].table[comps[k]];
    f.table[p] = product_point_join(tgt_sizes, image);
  }
  return f;
}

ProductCollineationParts decompose_product_collineation(
    const Collineation& f, const std::vector<SpacePtr>& source_factors,
    const std::vector<SpacePtr>& target_factors) {
  check_product_factors(source_factors, "source");
  check_product_factors(target_factors, "target");
  PartialLinearSpace src_space = segre_product(deref(source_factors));
  PartialLinearSpace tgt_space = segre_product(deref(target_factors));
  if (!f.source || !f.target || !spaces_equal(*f.source, src_space) ||
      !spaces_equal(*f.target, tgt_space))
    throw std::invalid_argument("map endpoints do not match the stated products");
  std::string why;
  if (!is_collineation(f, &why))
    throw std::invalid_argument("not a collineation: " + why);

  const std::size_t m = source_factors.size();
  if (target_factors.size() != m)
    throw TheoremViolation(
        "a collineation links products with different factor counts (" +
        std::to_string(m) + " vs " + std::to_string(target_factors.size()) + ")");

  std::vector<std::size_t> src_sizes = factor_sizes(source_factors);
  std::vector<std::size_t> tgt_sizes = factor_sizes(target_factors);

  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> sigma(m, kUnset);
  for (const auto& line : src_space.lines) {
    std::size_t j = varying_coordinate(src_sizes, line);
    std::vector<std::size_t> image;
    image.reserve(line.size());
    for (std::size_t p : line) image.push_back(f.table[p]);
    std::sort(image.begin(), image.end());
    auto it = std::lower_bound(tgt_space.lines.begin(), tgt_space.lines.end(), image);
    if (it == tgt_space.lines.end() || *it != image)
      throw TheoremViolation("line image lost between collineation checks");
    std::size_t k = varying_coordinate(tgt_sizes, *it);
    if (sigma[j] == kUnset)
      sigma[j] = k;
    else if (sigma[j] != k)
      throw TheoremViolation("lines of one factor map to two different factors");
  }
  std::vector<char> seen(m, 0);
  for (std::size_t j = 0; j < m; ++j) {
    if (sigma[j] == kUnset)
      throw TheoremViolation("a factor's image coordinate is undetermined");
    if (seen[sigma[j]])
      throw TheoremViolation("factor permutation is not injective");
    seen[sigma[j]] = 1;
  }

  std::vector<std::size_t> base(m, 0);
  ProductCollineationParts parts;
  parts.sigma = sigma;
  for (std::size_t k = 0; k < m; ++k) {
    std::vector<std::size_t> comps = base;
    std::vector<std::size_t> table(src_sizes[k]);
    for (std::size_t x = 0; x < src_sizes[k]; ++x) {
      comps[k] = x;
      std::size_t image = f.table[product_point_join(src_sizes, comps)];
      table[x] = product_point_split(tgt_sizes, image)[sigma[k]];
    }
    Collineation comp{source_factors[k], target_factors[sigma[k]], std::move(table)};
    if (!is_collineation(comp, &why))
      throw TheoremViolation("recovered component " + std::to_string(k) +
                             " is not a collineation: " + why);
    parts.components.push_back(std::move(comp));
  }

  for (std::size_t p = 0; p < src_space.num_points; ++p) {
    std::vector<std::size_t> comps = product_point_split(src_sizes, p);
    std::vector<std::size_t> image = product_point_split(tgt_sizes, f.table[p]);
    for (std::size_t k = 0; k < m; ++k)
      if (image[sigma[k]] != parts.components[k].table[comps[k]])
        throw TheoremViolation("collineation does not split componentwise");
  }
  return parts;
}

}  // namespace ringline
