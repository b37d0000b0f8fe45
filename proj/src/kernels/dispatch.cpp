#include <atomic>
#include <cstdlib>
#include <string>

#include "kernels_impl.hpp"
#include "ris/error.hpp"

namespace ris::kernels {
namespace {

bool cpu_supports(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(RIS_HAVE_AVX2_KERNELS)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::Neon:
#if defined(RIS_HAVE_NEON_KERNELS)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable* initial_table() {
  if (const char* env = std::getenv("RIS_KERNELS")) {
    const std::string want(env);
    for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon}) {
      if (want == isa_name(isa)) {
        if (isa == Isa::Scalar) return &scalar_table();
        if (const KernelTable* t = simd_table(isa)) return t;
      }
    }
  }
  for (Isa isa : {Isa::Avx2, Isa::Neon}) {
    if (const KernelTable* t = simd_table(isa)) return t;
  }
  return &scalar_table();
}

std::atomic<const KernelTable*>& active_slot() {
  static std::atomic<const KernelTable*> slot{initial_table()};
  return slot;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
    case Isa::Neon:
      return "neon";
  }
  return "unknown";
}

const KernelTable& scalar_table() { return detail::make_scalar_table(); }

const KernelTable* simd_table(Isa isa) {
  if (!cpu_supports(isa)) return nullptr;
  switch (isa) {
    case Isa::Scalar:
      return nullptr;
    case Isa::Avx2:
#if defined(RIS_HAVE_AVX2_KERNELS)
      return &detail::make_avx2_table();
#else
      return nullptr;
#endif
    case Isa::Neon:
#if defined(RIS_HAVE_NEON_KERNELS)
      return &detail::make_neon_table();
#else
      return nullptr;
#endif
  }
  return nullptr;
}

bool available(Isa isa) { return isa == Isa::Scalar || simd_table(isa) != nullptr; }

std::vector<Isa> available_isas() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon}) {
    if (available(isa)) out.push_back(isa);
  }
  return out;
}

const KernelTable& active() { return *active_slot().load(std::memory_order_acquire); }

Isa active_isa() { return active().isa; }

void select(Isa isa) {
  if (isa == Isa::Scalar) {
    active_slot().store(&scalar_table(), std::memory_order_release);
    return;
  }
  const KernelTable* t = simd_table(isa);
  if (t == nullptr) {
    throw DomainError("kernel variant not available: " + std::string(isa_name(isa)));
  }
  active_slot().store(t, std::memory_order_release);
}

namespace {
void require_same_size(std::size_t a, std::size_t b) {
  if (a != b) throw DomainError("kernel operands differ in length");
}
}  // namespace

cplx cdotu(std::span<const cplx> x, std::span<const cplx> y) {
  require_same_size(x.size(), y.size());
  return active().cdotu(x.size(), x.data(), y.data());
}

cplx cdotc(std::span<const cplx> x, std::span<const cplx> y) {
  require_same_size(x.size(), y.size());
  return active().cdotc(x.size(), x.data(), y.data());
}

void caxpy(cplx a, std::span<const cplx> x, std::span<cplx> y) {
  require_same_size(x.size(), y.size());
  active().caxpy(x.size(), a, x.data(), y.data());
}

double cnorm2(std::span<const cplx> x) { return active().cnorm2(x.size(), x.data()); }

double cabsdot(std::span<const cplx> x, std::span<const cplx> y) {
  require_same_size(x.size(), y.size());
  return active().cabsdot(x.size(), x.data(), y.data());
}

double ddot(std::span<const double> x, std::span<const double> y) {
  require_same_size(x.size(), y.size());
  return active().ddot(x.size(), x.data(), y.data());
}

void daxpy2(double a, std::span<const double> x, double b, std::span<const double> y,
            std::span<double> out) {
  require_same_size(x.size(), out.size());
  require_same_size(y.size(), out.size());
  active().daxpy2(out.size(), a, x.data(), b, y.data(), out.data());
}

}  // namespace ris::kernels
