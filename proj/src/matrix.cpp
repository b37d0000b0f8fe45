#include "ris/matrix.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ris/error.hpp"
#include "ris/kernels.hpp"

namespace ris {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, cplx fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DomainError("ragged matrix initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::column(std::span<const cplx> values) {
  ComplexMatrix m(values.size(), 1);
  std::copy(values.begin(), values.end(), m.data_.begin());
  return m;
}

ComplexMatrix ComplexMatrix::row(std::span<const cplx> values) {
  ComplexMatrix m(1, values.size());
  std::copy(values.begin(), values.end(), m.data_.begin());
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const cplx> values) {
  ComplexMatrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix ComplexMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr,
                                   std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw DomainError("block out of range");
  ComplexMatrix out(nr, nc);
  for (std::size_t r = 0; r < nr; ++r) {
    std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>((r0 + r) * cols_ + c0), nc,
                out.data_.begin() + static_cast<std::ptrdiff_t>(r * nc));
  }
  return out;
}

void ComplexMatrix::set_block(std::size_t r0, std::size_t c0, const ComplexMatrix& b) {
  if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_) throw DomainError("block out of range");
  for (std::size_t r = 0; r < b.rows_; ++r) {
    std::copy_n(b.data_.begin() + static_cast<std::ptrdiff_t>(r * b.cols_), b.cols_,
                data_.begin() + static_cast<std::ptrdiff_t>((r0 + r) * cols_ + c0));
  }
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
  return out;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

double ComplexMatrix::frobenius_norm() const { return std::sqrt(kernels::cnorm2(data_)); }

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const cplx& v : data_) m = std::max(m, std::abs(v));
  return m;
}

bool ComplexMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](const cplx& v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
  });
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw DomainError("matrix sum: dimension mismatch");
  kernels::caxpy(1.0, rhs.data_, data_);
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) {
    throw DomainError("matrix difference: dimension mismatch");
  }
  kernels::caxpy(-1.0, rhs.data_, data_);
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
  for (cplx& v : data_) v *= s;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw DomainError("matrix product: dimension mismatch");
  ComplexMatrix out(a.rows(), b.cols());
  // Row-oriented: out[i,:] += a[i,k] * b[k,:]
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto out_row = out.row_span(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{}) continue;
      kernels::caxpy(aik, b.row_span(k), out_row);
    }
  }
  return out;
}

ComplexMatrix block_diagonal(std::span<const ComplexMatrix> blocks) {
  std::size_t n = 0, m = 0;
  for (const auto& b : blocks) {
    n += b.rows();
    m += b.cols();
  }
  ComplexMatrix out(n, m);
  std::size_t r = 0, c = 0;
  for (const auto& b : blocks) {
    out.set_block(r, c, b);
    r += b.rows();
    c += b.cols();
  }
  return out;
}

double symmetry_defect(const ComplexMatrix& m) {
  if (!m.is_square()) throw DomainError("symmetry defect of a non-square matrix");
  return (m - m.transpose()).frobenius_norm();
}

double unitarity_defect(const ComplexMatrix& m) {
  if (!m.is_square()) throw DomainError("unitarity defect of a non-square matrix");
  return (m.adjoint() * m - ComplexMatrix::identity(m.rows())).frobenius_norm();
}

std::vector<double> singular_values(const ComplexMatrix& m) {
  using EigenMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const EigenMat> view(m.data().data(), static_cast<Eigen::Index>(m.rows()),
                                  static_cast<Eigen::Index>(m.cols()));
  Eigen::JacobiSVD<EigenMat> svd(view);
  const auto& sv = svd.singularValues();
  return {sv.data(), sv.data() + sv.size()};
}

namespace {

double norm1(const ComplexMatrix& a) {
  double best = 0.0;
  for (std::size_t c = 0; c < a.cols(); ++c) {
    double s = 0.0;
    for (std::size_t r = 0; r < a.rows(); ++r) s += std::abs(a(r, c));
    best = std::max(best, s);
  }
  return best;
}

}  // namespace

LuDecomposition::LuDecomposition(const ComplexMatrix& a) : n_(a.rows()), lu_(a), perm_(a.rows()) {
  if (!a.is_square()) throw DomainError("LU of a non-square matrix");
  a_norm1_ = norm1(a);
  for (std::size_t i = 0; i < n_; ++i) perm_[i] = i;

  for (std::size_t k = 0; k < n_; ++k) {
    std::size_t pivot = k;
    double best = std::abs(lu_(k, k));
    for (std::size_t i = k + 1; i < n_; ++i) {
      const double v = std::abs(lu_(i, k));
      if (v > best) {
        best = v;
        pivot = i;
      }
    }
    if (best == 0.0) {
      singular_ = true;
      continue;
    }
    if (pivot != k) {
      std::swap_ranges(lu_.row_span(k).begin(), lu_.row_span(k).end(), lu_.row_span(pivot).begin());
      std::swap(perm_[k], perm_[pivot]);
    }
    const cplx inv_pivot = 1.0 / lu_(k, k);
    const auto tail = n_ - k - 1;
    for (std::size_t i = k + 1; i < n_; ++i) {
      const cplx l = lu_(i, k) * inv_pivot;
      lu_(i, k) = l;
      if (l != cplx{} && tail > 0) {
        kernels::caxpy(-l, lu_.row_span(k).subspan(k + 1, tail), lu_.row_span(i).subspan(k + 1, tail));
      }
    }
  }
}

ComplexMatrix LuDecomposition::solve(const ComplexMatrix& b) const {
  if (b.rows() != n_) throw DomainError("LU solve: right-hand side has wrong row count");
  if (singular_) {
    throw NumericalError("LU solve: matrix is singular",
                         std::numeric_limits<double>::infinity());
  }
  ComplexMatrix x(n_, b.cols());
  for (std::size_t i = 0; i < n_; ++i) {
    auto src = b.row_span(perm_[i]);
    std::copy(src.begin(), src.end(), x.row_span(i).begin());
  }
  // L y = P b
  for (std::size_t k = 0; k < n_; ++k) {
    for (std::size_t i = k + 1; i < n_; ++i) {
      const cplx l = lu_(i, k);
      if (l != cplx{}) kernels::caxpy(-l, x.row_span(k), x.row_span(i));
    }
  }
  // U x = y
  for (std::size_t kk = n_; kk-- > 0;) {
    for (std::size_t j = kk + 1; j < n_; ++j) {
      const cplx u = lu_(kk, j);
      if (u != cplx{}) kernels::caxpy(-u, x.row_span(j), x.row_span(kk));
    }
    const cplx inv = 1.0 / lu_(kk, kk);
    for (cplx& v : x.row_span(kk)) v *= inv;
  }
  return x;
}

ComplexMatrix LuDecomposition::inverse() const { return solve(ComplexMatrix::identity(n_)); }

double LuDecomposition::condition() const {
  if (singular_) return std::numeric_limits<double>::infinity();
  // cached; LuDecomposition is not shared across threads
  if (condition_ < 0.0) {
    const ComplexMatrix inv = inverse();
    condition_ = inv.all_finite() ? a_norm1_ * norm1(inv) : std::numeric_limits<double>::infinity();
  }
  return condition_;
}

ComplexMatrix solve_checked(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  LuDecomposition lu(a);
  const double cond = lu.condition();
  if (!(cond <= tolerance::max_condition)) {
    std::ostringstream msg;
    msg << what << ": matrix is singular or ill-conditioned (condition number " << cond << ")";
    throw NumericalError(msg.str(), cond);
  }
  return lu.solve(b);
}

}  // namespace ris
