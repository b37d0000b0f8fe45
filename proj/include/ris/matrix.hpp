#pragma once
// Dense complex matrices, row-major, with an LU factorization that refuses
// to hand back results from systems it cannot trust.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace ris {

using cplx = std::complex<double>;

namespace tolerance {
// Symmetry / unitarity / block-structure checks (absolute Frobenius).
inline constexpr double structural = 1e-10;
// Conversion round trips (relative Frobenius).
inline constexpr double round_trip = 1e-9;
// Linear solves beyond this 1-norm condition number raise NumericalError.
inline constexpr double max_condition = 1e12;
}  // namespace tolerance

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols, cplx fill = {});
  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }
  static ComplexMatrix column(std::span<const cplx> values);
  static ComplexMatrix row(std::span<const cplx> values);
  static ComplexMatrix diagonal(std::span<const cplx> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }
  bool is_square() const noexcept { return rows_ == cols_; }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<cplx> data() noexcept { return data_; }
  std::span<const cplx> data() const noexcept { return data_; }
  std::span<cplx> row_span(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const cplx> row_span(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  ComplexMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const ComplexMatrix& b);

  ComplexMatrix transpose() const;
  ComplexMatrix adjoint() const;

  double frobenius_norm() const;
  double max_abs() const;
  bool all_finite() const;

  ComplexMatrix& operator+=(const ComplexMatrix& rhs);
  ComplexMatrix& operator-=(const ComplexMatrix& rhs);
  ComplexMatrix& operator*=(cplx s);

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(cplx s, ComplexMatrix a);

ComplexMatrix block_diagonal(std::span<const ComplexMatrix> blocks);

// ||M - M^T||_F
double symmetry_defect(const ComplexMatrix& m);
// ||M^H M - I||_F
double unitarity_defect(const ComplexMatrix& m);

// Singular values in descending order.
std::vector<double> singular_values(const ComplexMatrix& m);

class LuDecomposition {
 public:
  explicit LuDecomposition(const ComplexMatrix& a);

  std::size_t dim() const noexcept { return n_; }
  // True when a pivot was exactly zero.
  bool singular() const noexcept { return singular_; }
  // ||A||_1 * ||A^-1||_1, +inf when singular.
  double condition() const;

  ComplexMatrix solve(const ComplexMatrix& b) const;
  ComplexMatrix inverse() const;

 private:
  std::size_t n_ = 0;
  ComplexMatrix lu_;
  std::vector<std::size_t> perm_;
  double a_norm1_ = 0.0;
  bool singular_ = false;
  mutable double condition_ = -1.0;
};

// A^-1 B; throws NumericalError (with the condition number) when A is
// singular or its condition exceeds tolerance::max_condition.
ComplexMatrix solve_checked(const ComplexMatrix& a, const ComplexMatrix& b, const char* what);

}  // namespace ris
