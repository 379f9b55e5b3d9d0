#pragma once

// Dense linear algebra over small finite fields: flat operation tables,
// row-echelon reduction, kernels, and canonical subspaces of K^d.  Ambient
// dimensions stay in the single digits, so everything is plain dense code.

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "ringline/ring.hpp"

namespace ringline {

// Flat add/mul/neg/inv tables for one finite field, shared by pointer.
// get() memoizes per ring instance, so repeated lookups are cheap.
class FieldTable {
public:
  static std::shared_ptr<const FieldTable> get(const FiniteRing& field);

  const FiniteRing& field() const { return field_; }
  Elem q() const { return q_; }
  Elem one() const { return one_; }

  Elem add(Elem a, Elem b) const { return add_[a * q_ + b]; }
  Elem sub(Elem a, Elem b) const { return add_[a * q_ + neg_[b]]; }
  Elem mul(Elem a, Elem b) const { return mul_[a * q_ + b]; }
  Elem neg(Elem a) const { return neg_[a]; }
  Elem inv(Elem a) const;  // throws std::domain_error on 0

private:
  explicit FieldTable(const FiniteRing& field);

  FiniteRing field_;
  Elem q_ = 0;
  Elem one_ = 0;
  std::vector<Elem> add_, mul_, neg_, inv_;
};

using FieldPtr = std::shared_ptr<const FieldTable>;

// Row-major dense matrix with entries in a field (the field travels
// separately; Mat is plain data).
struct Mat {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Elem> a;

  Mat() = default;
  Mat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0) {}

  Elem& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
  Elem at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }

  static Mat identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  bool operator==(const Mat&) const = default;
};

Mat mat_mul(const FieldTable& F, const Mat& A, const Mat& B);
Mat mat_transpose(const Mat& A);
std::vector<Elem> mat_apply(const FieldTable& F, const Mat& A, std::span<const Elem> x);
std::vector<Elem> vec_mat(const FieldTable& F, std::span<const Elem> x, const Mat& A);

/// In-place reduced row echelon form; returns the rank.  Identity 1 at each
/// pivot, zeros above and below.
std::size_t rref_in_place(const FieldTable& F, Mat& A);
std::size_t mat_rank(const FieldTable& F, Mat A);
std::optional<Mat> mat_inverse(const FieldTable& F, const Mat& A);

/// Basis of {x : A x = 0} (column-vector kernel), one basis vector per row.
Mat kernel_basis(const FieldTable& F, const Mat& A);

/// One solution of A x = b with free variables set to zero.
std::optional<std::vector<Elem>> solve(const FieldTable& F, const Mat& A,
                                       std::span<const Elem> b);

// A subspace of K^d held as its unique reduced-row-echelon basis, which
// makes equality and ordering plain entry comparisons.
class Subspace {
public:
  Subspace() = default;
  /// Reduces the given spanning rows.
  Subspace(FieldPtr F, std::size_t ambient, Mat spanning_rows);

  const FieldPtr& table() const { return F_; }
  std::size_t ambient() const { return ambient_; }
  std::size_t dim() const { return basis_.rows; }
  const Mat& basis() const { return basis_; }

  bool contains(std::span<const Elem> v) const;
  /// All q^dim member vectors, in a deterministic order starting with 0.
  std::vector<std::vector<Elem>> vectors() const;

  bool operator==(const Subspace& o) const {
    return ambient_ == o.ambient_ && basis_ == o.basis_;
  }
  bool operator<(const Subspace& o) const;

private:
  FieldPtr F_;
  std::size_t ambient_ = 0;
  Mat basis_;
};

Subspace subspace_sum(const Subspace& U, const Subspace& W);
Subspace subspace_intersection(const Subspace& U, const Subspace& W);

/// All k-dimensional subspaces of K^d, deterministically ordered.
std::vector<Subspace> enumerate_subspaces(const FieldPtr& F, std::size_t d, std::size_t k);

/// Number of k-dimensional subspaces of (F_q)^d.
std::uint64_t gaussian_binomial(unsigned d, unsigned k, std::uint64_t q);

/// Value tables of all field automorphisms (the Frobenius powers), identity
/// first; size gf_k() for a Galois field.
std::vector<std::vector<Elem>> field_automorphisms(const FiniteRing& field);

}  // namespace ringline
