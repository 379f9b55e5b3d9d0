#include "ringline/projline.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "ringline/errors.hpp"

namespace ringline {

namespace {

constexpr std::size_t kEnumerationGuard = 1024;

// characteristic vector of the cyclic left submodule R(a,b), indexed by
// pair code x*n + y
void fill_submodule_mask(const FiniteRing& R, Elem a, Elem b, std::vector<char>& mask,
                         bool set_value) {
  const Elem n = R.order();
  for (Elem u = 0; u < n; ++u)
    mask[static_cast<std::size_t>(R.mul(u, a)) * n + R.mul(u, b)] =
        set_value ? 1 : 0;
}

// size of {u(a,b) : u in R}; the pair generates a free submodule iff this is n
bool submodule_free(const FiniteRing& R, Elem a, Elem b) {
  const Elem n = R.order();
  for (Elem u = 1; u < n; ++u)
    if (R.mul(u, a) == 0 && R.mul(u, b) == 0) return false;
  return true;
}

// candidate completion check: [[a,b],[c,d]] invertible iff both rows generate
// free submodules meeting only in 0 (mask = submodule of (a,b), known free)
bool completes(const FiniteRing& R, const std::vector<char>& mask, Elem c, Elem d) {
  const Elem n = R.order();
  for (Elem u = 1; u < n; ++u) {
    Elem x = R.mul(u, c), y = R.mul(u, d);
    if (x == 0 && y == 0) return false;  // not free
    if (mask[static_cast<std::size_t>(x) * n + y]) return false;
  }
  return true;
}

std::optional<std::pair<Elem, Elem>> complete_matrix_pair(const FiniteRing& R, Elem a,
                                                          Elem b) {
  const unsigned n = R.matrix_dim();
  FieldPtr F = FieldTable::get(R.matrix_base());
  Mat rows(n, 2 * n);
  for (unsigned r = 0; r < n; ++r)
    for (unsigned c = 0; c < n; ++c) {
      rows.at(r, c) = R.matrix_entry(a, r, c);
      rows.at(r, n + c) = R.matrix_entry(b, r, c);
    }
  Mat ech = rows;
  if (rref_in_place(*F, ech) != n) return std::nullopt;
  std::vector<char> is_pivot(2 * n, 0);
  for (unsigned r = 0; r < n; ++r) {
    std::size_t c = 0;
    while (ech.at(r, c) == 0) ++c;
    is_pivot[c] = 1;
  }
  std::vector<Elem> ce(n * n, 0), de(n * n, 0);
  unsigned r = 0;
  for (unsigned c = 0; c < 2 * n; ++c) {
    if (is_pivot[c]) continue;
    if (c < n)
      ce[r * n + c] = F->one();
    else
      de[r * n + (c - n)] = F->one();
    ++r;
  }
  return std::make_pair(R.matrix_encode(ce), R.matrix_encode(de));
}

}  // namespace

bool is_unimodular(const FiniteRing& R, Elem a, Elem b) {
  const Elem n = R.order();
  std::vector<char> left(n, 0);  // {1 - a x}
  for (Elem x = 0; x < n; ++x) left[R.sub(R.one(), R.mul(a, x))] = 1;
  for (Elem y = 0; y < n; ++y)
    if (left[R.mul(b, y)]) return true;
  return false;
}

std::optional<std::pair<Elem, Elem>> find_completion(const FiniteRing& R, Elem a, Elem b) {
  // a completion forces unimodularity (read off the first row of M * M^-1),
  // so a negative test settles the question
  if (!is_unimodular(R, a, b)) return std::nullopt;

  if (R.kind() == RingKind::Product) {
    const auto& factors = R.factors();
    std::vector<Elem> ac = R.product_decode(a), bc = R.product_decode(b);
    std::vector<Elem> cc(factors.size()), dc(factors.size());
    for (std::size_t i = 0; i < factors.size(); ++i) {
      auto comp = find_completion(factors[i], ac[i], bc[i]);
      if (!comp) return std::nullopt;
      cc[i] = comp->first;
      dc[i] = comp->second;
    }
    return std::make_pair(R.product_encode(cc), R.product_encode(dc));
  }
  if (R.kind() == RingKind::Matrix) return complete_matrix_pair(R, a, b);

  if (!submodule_free(R, a, b)) return std::nullopt;
  const Elem n = R.order();
  std::vector<char> mask(static_cast<std::size_t>(n) * n, 0);
  fill_submodule_mask(R, a, b, mask, true);
  const std::pair<Elem, Elem> quick[] = {
      {0, R.one()}, {R.one(), 0}, {R.one(), R.one()}};
  for (auto [c, d] : quick)
    if (completes(R, mask, c, d)) return std::make_pair(c, d);
  for (Elem c = 0; c < n; ++c)
    for (Elem d = 0; d < n; ++d)
      if (completes(R, mask, c, d)) return std::make_pair(c, d);
  return std::nullopt;
}

bool is_admissible(const FiniteRing& R, Elem a, Elem b) {
  if (!is_unimodular(R, a, b)) return false;
  if (!find_completion(R, a, b))
    throw TheoremViolation(R.tag() + ": pair (" + std::to_string(a) + "," +
                           std::to_string(b) +
                           ") is unimodular but no completion was found");
  return true;
}

ProjPoint point_of(const FiniteRing& R, Elem a, Elem b) {
  if (!is_admissible(R, a, b))
    throw std::invalid_argument(R.tag() + ": pair (" + std::to_string(a) + "," +
                                std::to_string(b) + ") is not admissible");
  const Elem n = R.order();
  Elem best_a = a, best_b = b;
  std::uint64_t best = static_cast<std::uint64_t>(a) * n + b;
  for (Elem u : R.units()) {
    Elem xa = R.mul(u, a), xb = R.mul(u, b);
    std::uint64_t code = static_cast<std::uint64_t>(xa) * n + xb;
    if (code < best) {
      best = code;
      best_a = xa;
      best_b = xb;
    }
  }
  auto comp = find_completion(R, best_a, best_b);
  if (!comp)
    throw TheoremViolation(R.tag() + ": canonical representative lost its completion");
  return ProjPoint{R, best_a, best_b, comp->first, comp->second};
}

bool distant(const ProjPoint& p, const ProjPoint& q) {
  if (!p.ring.same_ring(q.ring))
    throw std::invalid_argument("distant: points over different rings");
  const FiniteRing& R = p.ring;
  const Elem n = R.order();
  std::vector<char> mask(static_cast<std::size_t>(n) * n, 0);
  fill_submodule_mask(R, p.a, p.b, mask, true);
  for (Elem u = 1; u < n; ++u)
    if (mask[static_cast<std::size_t>(R.mul(u, q.a)) * n + R.mul(u, q.b)]) return false;
  return true;
}

ProjectiveLine::ProjectiveLine(FiniteRing R) : R_(std::move(R)), n_(R_.order()) {}

LinePtr ProjectiveLine::enumerate_points(const FiniteRing& R) {
  if (!R.valid()) throw std::invalid_argument("enumerate_points: invalid ring");
  if (R.order() > kEnumerationGuard)
    throw CapExceeded("enumerate_points: ring order " + std::to_string(R.order()) +
                      " exceeds the line materialization guard " +
                      std::to_string(kEnumerationGuard));
  std::shared_ptr<ProjectiveLine> L(new ProjectiveLine(R));
  const Elem n = R.order();
  L->code_to_index_.assign(static_cast<std::size_t>(n) * n, -1);
  for (Elem a = 0; a < n; ++a) {
    for (Elem b = 0; b < n; ++b) {
      std::size_t code = static_cast<std::size_t>(a) * n + b;
      if (L->code_to_index_[code] != -1) continue;
      if (!is_unimodular(R, a, b)) continue;
      auto idx = static_cast<std::int32_t>(L->points_.size());
      for (Elem u : R.units()) {
        std::size_t ucode =
            static_cast<std::size_t>(R.mul(u, a)) * n + R.mul(u, b);
        if (L->code_to_index_[ucode] != -1 && L->code_to_index_[ucode] != idx)
          throw std::logic_error("enumerate_points: unit orbits are not disjoint");
        L->code_to_index_[ucode] = idx;
      }
      auto comp = find_completion(R, a, b);
      if (!comp)
        throw TheoremViolation(R.tag() + ": pair (" + std::to_string(a) + "," +
                               std::to_string(b) +
                               ") is unimodular but has no completion");
      L->points_.push_back(ProjPoint{R, a, b, comp->first, comp->second});
    }
  }
  return L;
}

std::size_t ProjectiveLine::index_of(Elem a, Elem b) const {
  auto idx = try_index_of(a, b);
  if (!idx)
    throw std::invalid_argument(R_.tag() + ": pair (" + std::to_string(a) + "," +
                                std::to_string(b) + ") is not admissible");
  return *idx;
}

std::optional<std::size_t> ProjectiveLine::try_index_of(Elem a, Elem b) const {
  if (a >= n_ || b >= n_) throw std::invalid_argument("index_of: element out of range");
  std::int32_t idx = code_to_index_[static_cast<std::size_t>(a) * n_ + b];
  if (idx < 0) return std::nullopt;
  return static_cast<std::size_t>(idx);
}

void ProjectiveLine::ensure_distant() const {
  std::call_once(distant_once_, [this] {
    const std::size_t N = points_.size();
    const Elem n = n_;
    distant_ = BitMatrix(N);
    std::vector<char> mask(static_cast<std::size_t>(n) * n, 0);
    for (std::size_t i = 0; i < N; ++i) {
      fill_submodule_mask(R_, points_[i].a, points_[i].b, mask, true);
      for (std::size_t j = i + 1; j < N; ++j) {
        bool meets = false;
        for (Elem u = 1; u < n && !meets; ++u)
          if (mask[static_cast<std::size_t>(R_.mul(u, points_[j].a)) * n +
                   R_.mul(u, points_[j].b)])
            meets = true;
        if (!meets) {
          distant_.set(i, j);
          distant_.set(j, i);
        }
      }
      fill_submodule_mask(R_, points_[i].a, points_[i].b, mask, false);
    }
  });
}

bool ProjectiveLine::distant(std::size_t i, std::size_t j) const {
  ensure_distant();
  return distant_.get(i, j);
}

std::vector<std::size_t> ProjectiveLine::distant_neighborhood(std::size_t i) const {
  ensure_distant();
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < points_.size(); ++j)
    if (distant_.get(i, j)) out.push_back(j);
  return out;
}

const BitMatrix& ProjectiveLine::distant_matrix() const {
  ensure_distant();
  return distant_;
}

void ProjectiveLine::ensure_quotient() const {
  std::call_once(quotient_once_, [this] {
    Ideal rad = jacobson_radical(R_);
    auto [Q, pi] = quotient(R_, rad, "rad");
    quotient_ring_ = Q;
    quotient_projection_ = pi;
    quotient_line_ = enumerate_points(Q);
    quotient_index_.resize(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i) {
      auto idx = quotient_line_->try_index_of(pi(points_[i].a), pi(points_[i].b));
      if (!idx)
        throw TheoremViolation(R_.tag() +
                               ": projection of an admissible pair is not admissible");
      quotient_index_[i] = *idx;
    }
  });
}

const FiniteRing& ProjectiveLine::quotient_ring() const {
  ensure_quotient();
  return quotient_ring_;
}

const RingMapTable& ProjectiveLine::quotient_projection() const {
  ensure_quotient();
  return quotient_projection_;
}

LinePtr ProjectiveLine::quotient_line() const {
  ensure_quotient();
  return quotient_line_;
}

std::size_t ProjectiveLine::project_point(std::size_t i) const {
  ensure_quotient();
  return quotient_index_[i];
}

void ProjectiveLine::ensure_parallel() const {
  std::call_once(parallel_once_, [this] {
    ensure_distant();
    ensure_quotient();
    const std::size_t N = points_.size();
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = i + 1; j < N; ++j) {
        bool inc_ij = distant_.row_subset(i, j);
        bool inc_ji = distant_.row_subset(j, i);
        bool quot = quotient_index_[i] == quotient_index_[j];
        if (inc_ij != quot || inc_ji != quot)
          throw TheoremViolation(
              R_.tag() + ": neighborhood-inclusion and quotient parallelism disagree at (" +
              std::to_string(i) + "," + std::to_string(j) + ")");
      }
    parallel_class_of_.assign(N, 0);
    std::vector<std::int64_t> class_of_quotient(quotient_line_->size(), -1);
    for (std::size_t i = 0; i < N; ++i) {
      std::int64_t& c = class_of_quotient[quotient_index_[i]];
      if (c < 0) {
        c = static_cast<std::int64_t>(parallel_classes_.size());
        parallel_classes_.emplace_back();
      }
      parallel_class_of_[i] = static_cast<std::size_t>(c);
      parallel_classes_[static_cast<std::size_t>(c)].push_back(i);
    }
  });
}

bool ProjectiveLine::parallel(std::size_t i, std::size_t j) const {
  ensure_parallel();
  return parallel_class_of_[i] == parallel_class_of_[j];
}

const std::vector<std::vector<std::size_t>>& ProjectiveLine::parallel_classes() const {
  ensure_parallel();
  return parallel_classes_;
}

std::size_t ProjectiveLine::parallel_class_of(std::size_t i) const {
  ensure_parallel();
  return parallel_class_of_[i];
}

bool ProjectiveLine::adjacent_via(std::size_t i, std::size_t j, std::size_t r) const {
  ensure_distant();
  if (distant_.row_subset(r, i) || distant_.row_subset(r, j)) return false;
  return distant_.row_subset_of_union(r, i, j);
}

BitMatrix ProjectiveLine::compute_adjacency_definitional() const {
  ensure_distant();
  const std::size_t N = points_.size();
  BitMatrix A(N);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = i + 1; j < N; ++j)
      for (std::size_t r = 0; r < N; ++r) {
        if (distant_.row_subset(r, i) || distant_.row_subset(r, j)) continue;
        if (distant_.row_subset_of_union(r, i, j)) {
          A.set(i, j);
          A.set(j, i);
          break;
        }
      }
  return A;
}

BitMatrix ProjectiveLine::adjacency_matrix_definitional() const {
  return compute_adjacency_definitional();
}

void ProjectiveLine::ensure_adjacency() const {
  std::call_once(adjacency_once_, [this] {
    if (has_subspace_model()) {
      ensure_subspaces();
      const std::size_t N = points_.size();
      adjacency_ = BitMatrix(N);
      const std::size_t target = model_dim_ - 1;
      for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = i + 1; j < N; ++j)
          if (subspace_intersection(subspaces_[i], subspaces_[j]).dim() == target) {
            adjacency_.set(i, j);
            adjacency_.set(j, i);
          }
    } else {
      adjacency_ = compute_adjacency_definitional();
    }
  });
}

bool ProjectiveLine::adjacent(std::size_t i, std::size_t j) const {
  ensure_adjacency();
  return adjacency_.get(i, j);
}

const BitMatrix& ProjectiveLine::adjacency_matrix() const {
  ensure_adjacency();
  return adjacency_;
}

void ProjectiveLine::ensure_bartolone() const {
  std::call_once(bartolone_once_, [this] {
    const Elem n = n_;
    bartolone_.assign(points_.size(), {});
    for (Elem a = 0; a < n; ++a)
      for (Elem b = 0; b < n; ++b) {
        Elem t = R_.sub(R_.mul(a, b), R_.one());
        std::int32_t idx = code_to_index_[static_cast<std::size_t>(t) * n + a];
        if (idx < 0)
          throw TheoremViolation(R_.tag() + ": pair (ab-1, a) with a=" +
                                 std::to_string(a) + ", b=" + std::to_string(b) +
                                 " is not admissible");
        auto& list = bartolone_[static_cast<std::size_t>(idx)];
        if (list.size() < 2) list.emplace_back(a, b);
      }
    for (std::size_t i = 0; i < bartolone_.size(); ++i)
      if (bartolone_[i].empty())
        throw TheoremViolation(R_.tag() + ": point " + std::to_string(i) +
                               " has no (ab-1, a) parametrization");
  });
}

std::pair<Elem, Elem> ProjectiveLine::bartolone_repr(std::size_t i) const {
  ensure_bartolone();
  return bartolone_[i].front();
}

const std::vector<std::pair<Elem, Elem>>& ProjectiveLine::bartolone_witnesses(
    std::size_t i) const {
  ensure_bartolone();
  return bartolone_[i];
}

void ProjectiveLine::ensure_components() const {
  std::call_once(components_once_, [this] {
    if (R_.kind() != RingKind::Product)
      throw std::logic_error(R_.tag() + ": not a product ring");
    for (const FiniteRing& f : R_.factors())
      component_lines_.push_back(enumerate_points(f));
  });
}

const std::vector<LinePtr>& ProjectiveLine::component_lines() const {
  ensure_components();
  return component_lines_;
}

std::vector<std::size_t> ProjectiveLine::split_product_point(std::size_t i) const {
  ensure_components();
  std::vector<Elem> ac = R_.product_decode(points_[i].a);
  std::vector<Elem> bc = R_.product_decode(points_[i].b);
  std::vector<std::size_t> out(component_lines_.size());
  for (std::size_t k = 0; k < component_lines_.size(); ++k) {
    auto idx = component_lines_[k]->try_index_of(ac[k], bc[k]);
    if (!idx)
      throw TheoremViolation(R_.tag() + ": component pair of an admissible pair "
                             "is not admissible");
    out[k] = *idx;
  }
  return out;
}

std::size_t ProjectiveLine::join_product_point(std::span<const std::size_t> components) const {
  ensure_components();
  if (components.size() != component_lines_.size())
    throw std::invalid_argument("join_product_point: wrong component count");
  std::vector<Elem> ac(components.size()), bc(components.size());
  for (std::size_t k = 0; k < components.size(); ++k) {
    const ProjPoint& p = component_lines_[k]->point(components[k]);
    ac[k] = p.a;
    bc[k] = p.b;
  }
  return index_of(R_.product_encode(ac), R_.product_encode(bc));
}

bool ProjectiveLine::has_subspace_model() const {
  return R_.kind() == RingKind::Matrix || R_.is_field();
}

void ProjectiveLine::ensure_subspaces() const {
  std::call_once(subspaces_once_, [this] {
    if (!has_subspace_model())
      throw std::logic_error(R_.tag() + ": no subspace model for this ring");
    unsigned n;
    FiniteRing base;
    if (R_.kind() == RingKind::Matrix) {
      n = R_.matrix_dim();
      base = R_.matrix_base();
    } else {
      n = 1;
      base = R_;
    }
    model_dim_ = n;
    model_field_ = FieldTable::get(base);
    subspaces_.reserve(points_.size());
    for (const ProjPoint& p : points_) {
      Mat rows(n, 2 * n);
      if (R_.kind() == RingKind::Matrix) {
        for (unsigned r = 0; r < n; ++r)
          for (unsigned c = 0; c < n; ++c) {
            rows.at(r, c) = R_.matrix_entry(p.a, r, c);
            rows.at(r, n + c) = R_.matrix_entry(p.b, r, c);
          }
      } else {
        rows.at(0, 0) = p.a;
        rows.at(0, 1) = p.b;
      }
      Subspace S(model_field_, 2 * n, rows);
      if (S.dim() != n)
        throw TheoremViolation(R_.tag() + ": point row space has wrong dimension");
      subspaces_.push_back(std::move(S));
    }
    subspace_index_.reserve(points_.size());
    for (std::size_t i = 0; i < subspaces_.size(); ++i)
      subspace_index_.emplace_back(subspaces_[i], i);
    std::sort(subspace_index_.begin(), subspace_index_.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    for (std::size_t i = 1; i < subspace_index_.size(); ++i)
      if (subspace_index_[i - 1].first == subspace_index_[i].first)
        throw TheoremViolation(R_.tag() + ": two points share a row space");
  });
}

unsigned ProjectiveLine::model_block_dim() const {
  ensure_subspaces();
  return model_dim_;
}

const FieldPtr& ProjectiveLine::model_field() const {
  ensure_subspaces();
  return model_field_;
}

const Subspace& ProjectiveLine::point_subspace(std::size_t i) const {
  ensure_subspaces();
  return subspaces_[i];
}

std::size_t ProjectiveLine::index_of_subspace(const Subspace& X) const {
  ensure_subspaces();
  auto it = std::lower_bound(
      subspace_index_.begin(), subspace_index_.end(), X,
      [](const auto& entry, const Subspace& key) { return entry.first < key; });
  if (it == subspace_index_.end() || !(it->first == X))
    throw std::invalid_argument(R_.tag() + ": subspace is not a point row space");
  return it->second;
}

namespace {

Graph graph_from_matrix(const ProjectiveLine& L, const BitMatrix& M) {
  Graph g;
  g.n = L.size();
  g.adj.resize(g.n);
  for (std::size_t i = 0; i < g.n; ++i)
    for (std::size_t j = i + 1; j < g.n; ++j)
      if (M.get(i, j)) {
        g.edges.emplace_back(i, j);
        g.adj[i].push_back(j);
        g.adj[j].push_back(i);
      }
  return g;
}

}  // namespace

Graph distant_graph(const ProjectiveLine& L) {
  return graph_from_matrix(L, L.distant_matrix());
}

Graph adjacency_graph(const ProjectiveLine& L) {
  return graph_from_matrix(L, L.adjacency_matrix());
}

}  // namespace ringline
