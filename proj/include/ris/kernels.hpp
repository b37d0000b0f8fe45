#pragma once
// Inner-loop kernels shared by the dense complex linear algebra, the
// objective evaluation and the quasi-Newton update.
//
// Every kernel has a scalar reference implementation. SIMD variants
// (AVX2+FMA on x86-64, NEON on aarch64) are compiled when the toolchain
// supports them and selected at runtime. The RIS_KERNELS environment
// variable ("scalar", "avx2", "neon") overrides the automatic choice.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace ris::kernels {

using cplx = std::complex<double>;

enum class Isa { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa);

struct KernelTable {
  Isa isa;

  // sum_i x_i * y_i (no conjugation)
  cplx (*cdotu)(std::size_t n, const cplx* x, const cplx* y);
  // sum_i conj(x_i) * y_i
  cplx (*cdotc)(std::size_t n, const cplx* x, const cplx* y);
  // y += a * x
  void (*caxpy)(std::size_t n, cplx a, const cplx* x, cplx* y);
  // sum_i |x_i|^2
  double (*cnorm2)(std::size_t n, const cplx* x);
  // sum_i |x_i| * |y_i|
  double (*cabsdot)(std::size_t n, const cplx* x, const cplx* y);
  // sum_i x_i * y_i
  double (*ddot)(std::size_t n, const double* x, const double* y);
  // out += a * x + b * y
  void (*daxpy2)(std::size_t n, double a, const double* x, double b,
                 const double* y, double* out);
};

const KernelTable& scalar_table();

// nullptr when the variant was not compiled in or the CPU lacks support.
const KernelTable* simd_table(Isa isa);

bool available(Isa isa);
std::vector<Isa> available_isas();

// Currently selected table. Selection is process-wide.
const KernelTable& active();
Isa active_isa();

// Throws DomainError when the requested variant is unavailable.
void select(Isa isa);

// Span conveniences routed through the active table.
cplx cdotu(std::span<const cplx> x, std::span<const cplx> y);
cplx cdotc(std::span<const cplx> x, std::span<const cplx> y);
void caxpy(cplx a, std::span<const cplx> x, std::span<cplx> y);
double cnorm2(std::span<const cplx> x);
double cabsdot(std::span<const cplx> x, std::span<const cplx> y);
double ddot(std::span<const double> x, std::span<const double> y);
void daxpy2(double a, std::span<const double> x, double b,
            std::span<const double> y, std::span<double> out);

}  // namespace ris::kernels
