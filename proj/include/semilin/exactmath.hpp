#pragma once

// Arbitrary-precision scalars, dense matrices and the integer linear algebra
// (Hermite normal form, integer kernels, integer solving) the rest of the
// library is built on.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "semilin/error.hpp"

namespace semilin {

using Int = mpz_class;
using Rat = mpq_class;
using IntVec = std::vector<Int>;
using RatVec = std::vector<Rat>;

inline Rat make_rat(const Int& num, const Int& den) {
  if (den == 0) throw DimensionError("zero denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

inline Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline Int ceil_div(const Int& a, const Int& b) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline Int floor_rat(const Rat& r) { return floor_div(r.get_num(), r.get_den()); }
inline Int ceil_rat(const Rat& r) { return ceil_div(r.get_num(), r.get_den()); }

inline Int gcd(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Int lcm(const Int& a, const Int& b) {
  Int l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

/// g = s*a + t*b with g = gcd(a, b) >= 0.
struct ExtendedGcd {
  Int g, s, t;
};

inline ExtendedGcd xgcd(const Int& a, const Int& b) {
  ExtendedGcd r;
  mpz_gcdext(r.g.get_mpz_t(), r.s.get_mpz_t(), r.t.get_mpz_t(), a.get_mpz_t(),
             b.get_mpz_t());
  return r;
}

inline Int content(std::span<const Int> v) {
  Int g = 0;
  for (const auto& x : v) g = gcd(g, x);
  return g;
}

inline bool is_zero(std::span<const Int> v) {
  return std::all_of(v.begin(), v.end(), [](const Int& x) { return x == 0; });
}

inline bool is_zero(std::span<const Rat> v) {
  return std::all_of(v.begin(), v.end(), [](const Rat& x) { return x == 0; });
}

/// Divides by the content so the entries become coprime. Zero stays zero.
inline IntVec primitive(IntVec v) {
  Int g = content(v);
  if (g > 1)
    for (auto& x : v) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
  return v;
}

/// Scales a rational vector by the lcm of its denominators.
inline IntVec clear_denominators(std::span<const Rat> v) {
  Int l = 1;
  for (const auto& x : v) l = lcm(l, x.get_den());
  IntVec out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(x.get_num() * (l / x.get_den()));
  return out;
}

inline RatVec to_rat(std::span<const Int> v) { return RatVec(v.begin(), v.end()); }

template <class T>
T dot(std::span<const T> a, std::span<const T> b) {
  T s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Rat dot(std::span<const Int> a, std::span<const Rat> b) {
  Rat s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline std::string to_string(const Int& x) { return x.get_str(); }
inline std::string to_string(const Rat& x) { return x.get_str(); }

template <class T>
std::string to_string(const std::vector<T>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += v[i].get_str();
  }
  return s + ")";
}

/// Dense row-major matrix.
template <class T>
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static Matrix from_rows(const std::vector<std::vector<T>>& rows, std::size_t cols) {
    Matrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw DimensionError("ragged matrix rows");
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  static Matrix from_columns(const std::vector<std::vector<T>>& cols, std::size_t rows) {
    Matrix m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].size() != rows) throw DimensionError("ragged matrix columns");
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    }
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::vector<T> column(std::size_t c) const {
    std::vector<T> v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, c);
    return v;
  }

  std::vector<std::vector<T>> columns() const {
    std::vector<std::vector<T>> out;
    for (std::size_t j = 0; j < cols_; ++j) out.push_back(column(j));
    return out;
  }

  std::vector<std::vector<T>> row_vectors() const {
    std::vector<std::vector<T>> out;
    for (std::size_t i = 0; i < rows_; ++i) out.emplace_back(row(i).begin(), row(i).end());
    return out;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  std::vector<T> operator*(std::span<const T> v) const {
    if (v.size() != cols_) throw DimensionError("matrix-vector dimension mismatch");
    std::vector<T> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = dot<T>(row(i), v);
    return out;
  }

  Matrix operator*(const Matrix& o) const {
    if (cols_ != o.rows_) throw DimensionError("matrix product dimension mismatch");
    Matrix out(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const T& a = (*this)(i, k);
        if (a == 0) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) out(i, j) += a * o(k, j);
      }
    return out;
  }

  void swap_columns(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }

  /// Keeps the listed columns, in the given order.
  Matrix select_columns(std::span<const std::size_t> idx) const {
    Matrix out(rows_, idx.size());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < idx.size(); ++j) out(i, j) = (*this)(i, idx[j]);
    return out;
  }

  Matrix select_rows(std::span<const std::size_t> idx) const {
    Matrix out(idx.size(), cols_);
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(i, j) = (*this)(idx[i], j);
    return out;
  }

  bool operator==(const Matrix& o) const = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IntMat = Matrix<Int>;
using RatMat = Matrix<Rat>;

inline RatMat to_rat(const IntMat& m) {
  RatMat r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j);
  return r;
}

// ---------------------------------------------------------------------------
// Hermite normal form

/// Column Hermite normal form H = M * U.
///
/// H is in lower column-echelon form: the first `rank` columns are nonzero,
/// column j has its leading entry at `pivot_rows[j]` (strictly increasing),
/// that entry is positive, and every entry to its left in the same row lies in
/// [0, pivot). The remaining columns are zero and the matching columns of U
/// form a basis of the integer kernel of M.
struct HnfResult {
  IntMat H;
  IntMat U;
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_rows;
};

namespace detail {

template <class M>
void combine_columns(M& m, std::size_t p, std::size_t j, const Int& s, const Int& t,
                     const Int& u, const Int& v) {
  // (col_p, col_j) <- (s col_p + t col_j, u col_p + v col_j)
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Int a = m(i, p), b = m(i, j);
    m(i, p) = s * a + t * b;
    m(i, j) = u * a + v * b;
  }
}

template <class M>
void axpy_column(M& m, std::size_t dst, const Int& q, std::size_t src) {
  // col_dst -= q * col_src
  if (q == 0) return;
  for (std::size_t i = 0; i < m.rows(); ++i)
    if (m(i, src) != 0) m(i, dst) -= q * m(i, src);
}

template <class M>
void negate_column(M& m, std::size_t c) {
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, c) = -m(i, c);
}

}  // namespace detail

inline HnfResult hnf(const IntMat& M) {
  HnfResult r{M, IntMat::identity(M.cols()), 0, {}};
  IntMat& H = r.H;
  IntMat& U = r.U;
  const std::size_t cols = M.cols();
  std::size_t p = 0;
  for (std::size_t i = 0; i < M.rows() && p < cols; ++i) {
    std::size_t first = cols;
    for (std::size_t j = p; j < cols; ++j)
      if (H(i, j) != 0) {
        first = j;
        break;
      }
    if (first == cols) continue;
    H.swap_columns(p, first);
    U.swap_columns(p, first);
    for (std::size_t j = p + 1; j < cols; ++j) {
      if (H(i, j) == 0) continue;
      Int a = H(i, p), b = H(i, j);
      auto [g, s, t] = xgcd(a, b);
      Int u = -b / g, v = a / g;
      detail::combine_columns(H, p, j, s, t, u, v);
      detail::combine_columns(U, p, j, s, t, u, v);
    }
    if (H(i, p) < 0) {
      detail::negate_column(H, p);
      detail::negate_column(U, p);
    }
    for (std::size_t j = 0; j < p; ++j) {
      Int q = floor_div(H(i, j), H(i, p));
      detail::axpy_column(H, j, q, p);
      detail::axpy_column(U, j, q, p);
    }
    r.pivot_rows.push_back(i);
    ++p;
  }
  r.rank = p;
  return r;
}

/// Basis (as columns) of the integer kernel {z in Z^c : M z = 0}.
inline IntMat integer_kernel(const IntMat& M) {
  auto r = hnf(M);
  std::vector<std::size_t> idx;
  for (std::size_t j = r.rank; j < M.cols(); ++j) idx.push_back(j);
  return r.U.select_columns(idx);
}

/// Some integer x with M x = v, or nullopt when none exists.
inline std::optional<IntVec> solve_integer(const IntMat& M, std::span<const Int> v) {
  if (v.size() != M.rows()) throw DimensionError("solve_integer: right-hand side has wrong length");
  auto r = hnf(M);
  IntVec y(M.cols(), Int(0));
  IntVec residual(v.begin(), v.end());
  for (std::size_t j = 0; j < r.rank; ++j) {
    std::size_t pr = r.pivot_rows[j];
    const Int& piv = r.H(pr, j);
    if (residual[pr] % piv != 0) return std::nullopt;
    y[j] = residual[pr] / piv;
    for (std::size_t i = pr; i < M.rows(); ++i) residual[i] -= y[j] * r.H(i, j);
  }
  if (!is_zero(residual)) return std::nullopt;
  return r.U * std::span<const Int>(y);
}

// ---------------------------------------------------------------------------
// Rational linear algebra

/// Reduced row echelon form in place; returns the pivot columns.
inline std::vector<std::size_t> rref(RatMat& A) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < A.cols() && r < A.rows(); ++c) {
    std::size_t piv = A.rows();
    for (std::size_t i = r; i < A.rows(); ++i)
      if (A(i, c) != 0) {
        piv = i;
        break;
      }
    if (piv == A.rows()) continue;
    if (piv != r)
      for (std::size_t j = 0; j < A.cols(); ++j) std::swap(A(piv, j), A(r, j));
    Rat inv = 1 / A(r, c);
    for (std::size_t j = c; j < A.cols(); ++j) A(r, j) *= inv;
    for (std::size_t i = 0; i < A.rows(); ++i) {
      if (i == r || A(i, c) == 0) continue;
      Rat f = A(i, c);
      for (std::size_t j = c; j < A.cols(); ++j)
        if (A(r, j) != 0) A(i, j) -= f * A(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline std::size_t rank(RatMat A) { return rref(A).size(); }

inline std::size_t rank(const std::vector<RatVec>& rows, std::size_t cols) {
  if (rows.empty()) return 0;
  return rank(RatMat::from_rows(rows, cols));
}

inline std::size_t rank(const std::vector<IntVec>& rows, std::size_t cols) {
  if (rows.empty()) return 0;
  std::vector<RatVec> r;
  for (const auto& v : rows) r.push_back(to_rat(v));
  return rank(r, cols);
}

/// Basis of the rational null space {x : A x = 0}, as integer primitive vectors.
inline std::vector<IntVec> nullspace(const RatMat& A) {
  RatMat R = A;
  auto piv = rref(R);
  std::vector<bool> is_piv(A.cols(), false);
  for (auto c : piv) is_piv[c] = true;
  std::vector<IntVec> basis;
  for (std::size_t f = 0; f < A.cols(); ++f) {
    if (is_piv[f]) continue;
    RatVec x(A.cols(), Rat(0));
    x[f] = 1;
    for (std::size_t k = 0; k < piv.size(); ++k) x[piv[k]] = -R(k, f);
    basis.push_back(primitive(clear_denominators(x)));
  }
  return basis;
}

/// Unique solution of a square nonsingular system, or nullopt if singular.
inline std::optional<RatVec> solve_square(const RatMat& A, std::span<const Rat> b) {
  const std::size_t n = A.rows();
  if (A.cols() != n || b.size() != n) throw DimensionError("solve_square: not square");
  RatMat aug(n, n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = A(i, j);
    aug(i, n) = b[i];
  }
  auto piv = rref(aug);
  if (piv.size() < n || piv.back() >= n) return std::nullopt;
  RatVec x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = aug(i, n);
  return x;
}

/// Any solution of A x = b (free variables set to zero), or nullopt.
inline std::optional<RatVec> solve_any(const RatMat& A, std::span<const Rat> b) {
  RatMat aug(A.rows(), A.cols() + 1);
  for (std::size_t i = 0; i < A.rows(); ++i) {
    for (std::size_t j = 0; j < A.cols(); ++j) aug(i, j) = A(i, j);
    aug(i, A.cols()) = b[i];
  }
  auto piv = rref(aug);
  if (!piv.empty() && piv.back() == A.cols()) return std::nullopt;
  RatVec x(A.cols(), Rat(0));
  for (std::size_t k = 0; k < piv.size(); ++k) x[piv[k]] = aug(k, A.cols());
  return x;
}

inline Rat determinant(RatMat A) {
  const std::size_t n = A.rows();
  Rat det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = n;
    for (std::size_t i = c; i < n; ++i)
      if (A(i, c) != 0) {
        piv = i;
        break;
      }
    if (piv == n) return 0;
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(A(piv, j), A(c, j));
      det = -det;
    }
    det *= A(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (A(i, c) == 0) continue;
      Rat f = A(i, c) / A(c, c);
      for (std::size_t j = c; j < n; ++j) A(i, j) -= f * A(c, j);
    }
  }
  return det;
}

inline Int determinant(const IntMat& A) {
  Rat d = determinant(to_rat(A));
  return d.get_num();
}

}  // namespace semilin
