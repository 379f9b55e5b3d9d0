#include "ringline/gf_linalg.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>

namespace ringline {

namespace {
std::mutex g_table_mutex;
std::map<const detail::RingRep*, std::shared_ptr<const FieldTable>>& table_cache() {
  static std::map<const detail::RingRep*, std::shared_ptr<const FieldTable>> cache;
  return cache;
}
}  // namespace

FieldTable::FieldTable(const FiniteRing& field) : field_(field), q_(field.order()) {
  one_ = field.one();
  add_.resize(static_cast<std::size_t>(q_) * q_);
  mul_.resize(static_cast<std::size_t>(q_) * q_);
  neg_.resize(q_);
  inv_.assign(q_, 0);
  for (Elem a = 0; a < q_; ++a) {
    neg_[a] = field.neg(a);
    if (a != 0) inv_[a] = field.inverse(a);
    for (Elem b = 0; b < q_; ++b) {
      add_[a * q_ + b] = field.add(a, b);
      mul_[a * q_ + b] = field.mul(a, b);
    }
  }
}

Elem FieldTable::inv(Elem a) const {
  if (a == 0) throw std::domain_error("FieldTable::inv: zero has no inverse");
  return inv_[a];
}

std::shared_ptr<const FieldTable> FieldTable::get(const FiniteRing& field) {
  if (!field.valid() || !field.is_field())
    throw std::invalid_argument("FieldTable::get: not a field");
  std::lock_guard<std::mutex> lock(g_table_mutex);
  auto& cache = table_cache();
  auto it = cache.find(field.rep());
  if (it != cache.end()) return it->second;
  std::shared_ptr<const FieldTable> t(new FieldTable(field));
  cache.emplace(field.rep(), t);
  return t;
}

Mat mat_mul(const FieldTable& F, const Mat& A, const Mat& B) {
  if (A.cols != B.rows) throw std::invalid_argument("mat_mul: shape mismatch");
  Mat C(A.rows, B.cols);
  for (std::size_t i = 0; i < A.rows; ++i)
    for (std::size_t k = 0; k < A.cols; ++k) {
      Elem aik = A.at(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < B.cols; ++j)
        C.at(i, j) = F.add(C.at(i, j), F.mul(aik, B.at(k, j)));
    }
  return C;
}

Mat mat_transpose(const Mat& A) {
  Mat T(A.cols, A.rows);
  for (std::size_t i = 0; i < A.rows; ++i)
    for (std::size_t j = 0; j < A.cols; ++j) T.at(j, i) = A.at(i, j);
  return T;
}

std::vector<Elem> mat_apply(const FieldTable& F, const Mat& A, std::span<const Elem> x) {
  if (x.size() != A.cols) throw std::invalid_argument("mat_apply: shape mismatch");
  std::vector<Elem> y(A.rows, 0);
  for (std::size_t i = 0; i < A.rows; ++i)
    for (std::size_t j = 0; j < A.cols; ++j)
      y[i] = F.add(y[i], F.mul(A.at(i, j), x[j]));
  return y;
}

std::vector<Elem> vec_mat(const FieldTable& F, std::span<const Elem> x, const Mat& A) {
  if (x.size() != A.rows) throw std::invalid_argument("vec_mat: shape mismatch");
  std::vector<Elem> y(A.cols, 0);
  for (std::size_t i = 0; i < A.rows; ++i) {
    if (x[i] == 0) continue;
    for (std::size_t j = 0; j < A.cols; ++j)
      y[j] = F.add(y[j], F.mul(x[i], A.at(i, j)));
  }
  return y;
}

std::size_t rref_in_place(const FieldTable& F, Mat& A) {
  std::size_t rank = 0;
  for (std::size_t col = 0; col < A.cols && rank < A.rows; ++col) {
    std::size_t piv = rank;
    while (piv < A.rows && A.at(piv, col) == 0) ++piv;
    if (piv == A.rows) continue;
    if (piv != rank)
      for (std::size_t c = 0; c < A.cols; ++c) std::swap(A.at(piv, c), A.at(rank, c));
    Elem s = F.inv(A.at(rank, col));
    if (s != F.one())
      for (std::size_t c = 0; c < A.cols; ++c) A.at(rank, c) = F.mul(s, A.at(rank, c));
    for (std::size_t r = 0; r < A.rows; ++r) {
      if (r == rank) continue;
      Elem f = A.at(r, col);
      if (f == 0) continue;
      for (std::size_t c = 0; c < A.cols; ++c)
        A.at(r, c) = F.sub(A.at(r, c), F.mul(f, A.at(rank, c)));
    }
    ++rank;
  }
  return rank;
}

std::size_t mat_rank(const FieldTable& F, Mat A) { return rref_in_place(F, A); }

std::optional<Mat> mat_inverse(const FieldTable& F, const Mat& A) {
  if (A.rows != A.cols) throw std::invalid_argument("mat_inverse: not square");
  const std::size_t n = A.rows;
  Mat aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug.at(i, j) = A.at(i, j);
    aug.at(i, n + i) = F.one();
  }
  rref_in_place(F, aug);
  // invertible exactly when the reduced left block is the identity
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (aug.at(i, j) != (i == j ? F.one() : 0)) return std::nullopt;
  Mat inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv.at(i, j) = aug.at(i, n + j);
  return inv;
}

Mat kernel_basis(const FieldTable& F, const Mat& A) {
  Mat R = A;
  std::size_t rank = rref_in_place(F, R);
  std::vector<std::size_t> pivot_col(rank);
  std::vector<char> is_pivot(A.cols, 0);
  for (std::size_t r = 0; r < rank; ++r) {
    std::size_t c = 0;
    while (R.at(r, c) == 0) ++c;
    pivot_col[r] = c;
    is_pivot[c] = 1;
  }
  Mat K(A.cols - rank, A.cols);
  std::size_t out = 0;
  for (std::size_t freec = 0; freec < A.cols; ++freec) {
    if (is_pivot[freec]) continue;
    K.at(out, freec) = F.one();
    for (std::size_t i = 0; i < rank; ++i)
      K.at(out, pivot_col[i]) = F.neg(R.at(i, freec));
    ++out;
  }
  return K;
}

std::optional<std::vector<Elem>> solve(const FieldTable& F, const Mat& A,
                                       std::span<const Elem> b) {
  if (b.size() != A.rows) throw std::invalid_argument("solve: shape mismatch");
  Mat aug(A.rows, A.cols + 1);
  for (std::size_t i = 0; i < A.rows; ++i) {
    for (std::size_t j = 0; j < A.cols; ++j) aug.at(i, j) = A.at(i, j);
    aug.at(i, A.cols) = b[i];
  }
  std::size_t rank = rref_in_place(F, aug);
  std::vector<Elem> x(A.cols, 0);
  for (std::size_t r = 0; r < rank; ++r) {
    std::size_t c = 0;
    while (c < aug.cols && aug.at(r, c) == 0) ++c;
    if (c == A.cols) return std::nullopt;  // pivot in the constant column
    x[c] = aug.at(r, A.cols);
  }
  return x;
}

Subspace::Subspace(FieldPtr F, std::size_t ambient, Mat spanning_rows)
    : F_(std::move(F)), ambient_(ambient) {
  if (spanning_rows.rows != 0 && spanning_rows.cols != ambient)
    throw std::invalid_argument("Subspace: spanning rows have wrong width");
  Mat R = spanning_rows;
  if (R.cols == 0) R.cols = ambient;
  std::size_t rank = rref_in_place(*F_, R);
  basis_ = Mat(rank, ambient);
  for (std::size_t i = 0; i < rank; ++i)
    for (std::size_t j = 0; j < ambient; ++j) basis_.at(i, j) = R.at(i, j);
}

bool Subspace::contains(std::span<const Elem> v) const {
  if (v.size() != ambient_) throw std::invalid_argument("Subspace::contains: bad width");
  // reduce v against the echelon basis
  std::vector<Elem> w(v.begin(), v.end());
  for (std::size_t i = 0; i < basis_.rows; ++i) {
    std::size_t c = 0;
    while (c < ambient_ && basis_.at(i, c) == 0) ++c;
    if (c == ambient_ || w[c] == 0) continue;
    Elem f = w[c];
    for (std::size_t j = 0; j < ambient_; ++j)
      w[j] = F_->sub(w[j], F_->mul(f, basis_.at(i, j)));
  }
  return std::all_of(w.begin(), w.end(), [](Elem x) { return x == 0; });
}

std::vector<std::vector<Elem>> Subspace::vectors() const {
  std::vector<std::vector<Elem>> out;
  const Elem q = F_->q();
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < dim(); ++i) count *= q;
  out.reserve(count);
  std::vector<Elem> coeff(dim(), 0);
  for (std::uint64_t it = 0; it < count; ++it) {
    std::vector<Elem> v(ambient_, 0);
    for (std::size_t i = 0; i < dim(); ++i) {
      if (coeff[i] == 0) continue;
      for (std::size_t j = 0; j < ambient_; ++j)
        v[j] = F_->add(v[j], F_->mul(coeff[i], basis_.at(i, j)));
    }
    out.push_back(std::move(v));
    for (std::size_t i = 0; i < coeff.size(); ++i) {
      if (++coeff[i] < q) break;
      coeff[i] = 0;
    }
  }
  return out;
}

bool Subspace::operator<(const Subspace& o) const {
  if (ambient_ != o.ambient_) return ambient_ < o.ambient_;
  if (basis_.rows != o.basis_.rows) return basis_.rows < o.basis_.rows;
  return basis_.a < o.basis_.a;
}

Subspace subspace_sum(const Subspace& U, const Subspace& W) {
  if (U.ambient() != W.ambient())
    throw std::invalid_argument("subspace_sum: ambient mismatch");
  Mat stack(U.dim() + W.dim(), U.ambient());
  for (std::size_t i = 0; i < U.dim(); ++i)
    for (std::size_t j = 0; j < U.ambient(); ++j) stack.at(i, j) = U.basis().at(i, j);
  for (std::size_t i = 0; i < W.dim(); ++i)
    for (std::size_t j = 0; j < U.ambient(); ++j)
      stack.at(U.dim() + i, j) = W.basis().at(i, j);
  return Subspace(U.table(), U.ambient(), std::move(stack));
}

Subspace subspace_intersection(const Subspace& U, const Subspace& W) {
  if (U.ambient() != W.ambient())
    throw std::invalid_argument("subspace_intersection: ambient mismatch");
  const FieldTable& F = *U.table();
  // x = a . U = b . W; solve the transposed stacked system for (a, b).
  Mat sys(U.ambient(), U.dim() + W.dim());
  for (std::size_t j = 0; j < U.ambient(); ++j) {
    for (std::size_t i = 0; i < U.dim(); ++i) sys.at(j, i) = U.basis().at(i, j);
    for (std::size_t i = 0; i < W.dim(); ++i)
      sys.at(j, U.dim() + i) = F.neg(W.basis().at(i, j));
  }
  Mat K = kernel_basis(F, sys);
  Mat span(K.rows, U.ambient());
  for (std::size_t r = 0; r < K.rows; ++r)
    for (std::size_t i = 0; i < U.dim(); ++i) {
      if (K.at(r, i) == 0) continue;
      for (std::size_t j = 0; j < U.ambient(); ++j)
        span.at(r, j) = F.add(span.at(r, j), F.mul(K.at(r, i), U.basis().at(i, j)));
    }
  return Subspace(U.table(), U.ambient(), std::move(span));
}

std::vector<Subspace> enumerate_subspaces(const FieldPtr& F, std::size_t d, std::size_t k) {
  if (k > d) return {};
  std::vector<Subspace> out;
  const Elem q = F->q();
  // choose pivot columns p_0 < ... < p_{k-1}; free entries are (i, c) with
  // c > p_i and c not a pivot column, yielding each echelon matrix once
  std::vector<std::size_t> piv(k);
  for (std::size_t i = 0; i < k; ++i) piv[i] = i;
  auto advance_pivots = [&]() -> bool {
    if (k == 0) return false;
    std::size_t i = k;
    while (i-- > 0) {
      if (piv[i] + (k - i) <= d - 1) {
        ++piv[i];
        for (std::size_t j = i + 1; j < k; ++j) piv[j] = piv[j - 1] + 1;
        return true;
      }
    }
    return false;
  };
  do {
    std::vector<char> is_piv(d, 0);
    for (std::size_t p : piv) is_piv[p] = 1;
    std::vector<std::pair<std::size_t, std::size_t>> free_pos;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t c = piv[i] + 1; c < d; ++c)
        if (!is_piv[c]) free_pos.emplace_back(i, c);
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < free_pos.size(); ++i) count *= q;
    std::vector<Elem> fill(free_pos.size(), 0);
    for (std::uint64_t it = 0; it < count; ++it) {
      Mat B(k, d);
      for (std::size_t i = 0; i < k; ++i) B.at(i, piv[i]) = F->one();
      for (std::size_t i = 0; i < free_pos.size(); ++i)
        B.at(free_pos[i].first, free_pos[i].second) = fill[i];
      Subspace S(F, d, B);
      if (S.dim() != k) throw std::logic_error("enumerate_subspaces: echelon rank drop");
      out.push_back(std::move(S));
      for (std::size_t i = 0; i < fill.size(); ++i) {
        if (++fill[i] < q) break;
        fill[i] = 0;
      }
    }
  } while (advance_pivots());
  return out;
}

std::uint64_t gaussian_binomial(unsigned d, unsigned k, std::uint64_t q) {
  if (k > d) return 0;
  // prod_{i<k} (q^(d-i) - 1) / (q^(i+1) - 1), evaluated as an exact integer
  // by cancelling one factor at a time
  std::uint64_t num = 1, den = 1;
  auto qpow = [&](unsigned e) {
    std::uint64_t r = 1;
    for (unsigned i = 0; i < e; ++i) r *= q;
    return r;
  };
  for (unsigned i = 0; i < k; ++i) {
    num *= qpow(d - i) - 1;
    den *= qpow(i + 1) - 1;
    if (num % den == 0) {
      num /= den;
      den = 1;
    }
  }
  return num / den;
}

std::vector<std::vector<Elem>> field_automorphisms(const FiniteRing& field) {
  if (!field.valid() || !field.is_field())
    throw std::invalid_argument("field_automorphisms: not a field");
  const Elem q = field.order();
  // the characteristic is the additive order of 1
  unsigned p = 0;
  Elem x = 0;
  do {
    x = field.add(x, field.one());
    ++p;
  } while (x != 0);
  std::vector<std::vector<Elem>> autos;
  // Frobenius x -> x^p generates the automorphism group
  std::vector<Elem> frob(q);
  for (Elem a = 0; a < q; ++a) {
    Elem v = field.one();
    for (unsigned i = 0; i < p; ++i) v = field.mul(v, a);
    frob[a] = v;
  }
  std::vector<Elem> cur(q);
  for (Elem a = 0; a < q; ++a) cur[a] = a;
  while (true) {
    autos.push_back(cur);
    std::vector<Elem> next(q);
    for (Elem a = 0; a < q; ++a) next[a] = frob[cur[a]];
    bool is_id = true;
    for (Elem a = 0; a < q; ++a)
      if (next[a] != a) {
        is_id = false;
        break;
      }
    if (is_id) break;
    cur = std::move(next);
  }
  return autos;
}

}  // namespace ringline
