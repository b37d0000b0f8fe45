#pragma once
// SISO channel realizations (LoS, Rayleigh, Rician with distance-based
// pathloss) and the end-to-end channel, simplified or mismatch-aware.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ris/matrix.hpp"
#include "ris/network.hpp"
#include "ris/rng.hpp"

namespace ris::chan {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double distance(Point a, Point b);

// RIS elements lie on a line parallel to the x axis, centered at ris_center,
// spaced ris_spacing wavelengths apart.
struct Geometry2D {
  Point tx{0.0, 0.0};
  Point rx{52.0, 0.0};
  Point ris_center{50.0, 2.0};
  double ris_spacing = 0.5;  // wavelengths
  double wavelength = 0.1;   // meters
  std::size_t n_i = 32;

  Point element(std::size_t n) const;
  // Throws DomainError unless every pairwise distance is positive.
  void validate() const;
};

enum class Link { RT, IT, RI };

struct PathlossParams {
  double c0_db = -30.0;
  double d0 = 1.0;
  double alpha_rt = 3.5;
  double alpha_it = 2.0;
  double alpha_ri = 2.8;

  double alpha(Link link) const;
  void validate() const;
};

// 10^(c0_db / 10) (d / d0)^-alpha_link. Throws DomainError for d <= 0.
double pathloss(double d, const PathlossParams& p, Link link);

// Linear Rician factors per link. K = 0 is Rayleigh.
struct RicianSpec {
  double k_rt = 0.0;
  double k_it = 0.0;
  double k_ri = 0.0;

  static double db_to_linear(double db);
};

// Unit-modulus entries with i.i.d. uniform phases.
std::vector<cplx> draw_los_vector(std::size_t n, RandomStream& rng);
// i.i.d. CN(0, 1).
std::vector<cplx> draw_rayleigh_vector(std::size_t n, RandomStream& rng);
// sqrt(K/(1+K)) LoS + sqrt(1/(1+K)) NLoS. Throws DomainError for k < 0 or
// a LoS matrix of the wrong shape.
ComplexMatrix draw_rician_matrix(std::size_t rows, std::size_t cols, double k,
                                 const ComplexMatrix& los, RandomStream& rng);

// e^{-j 2 pi d_n / lambda} from `from` to each RIS element.
std::vector<cplx> geometric_los_vector(const Geometry2D& g, Point from);

struct ChannelRealization {
  cplx h_rt{};
  std::vector<cplx> h_it;  // RIS <- transmitter, column
  std::vector<cplx> h_ri;  // receiver <- RIS, row
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  std::size_t n_i() const noexcept { return h_it.size(); }
  // Throws DomainError on mismatched lengths or non-finite entries.
  void validate() const;
};

// h_rt + h_ri Theta h_it
cplx assemble_simplified_channel(const ChannelRealization& real, const ComplexMatrix& theta);

// Matrix form H_RT + H_RI Theta H_IT.
ComplexMatrix assemble_simplified_channel(const ComplexMatrix& h_rt, const ComplexMatrix& h_ri,
                                          const ComplexMatrix& theta, const ComplexMatrix& h_it);

// (Gamma_R + I) T_RT (I + Gamma_T T_TT + T_TT)^-1 with T = S (I - Gamma S)^-1.
ComplexMatrix assemble_general_channel(const net::PartitionedScattering& s,
                                       const net::TerminationSet& term, const ComplexMatrix& theta);

// SISO 1 + N_I + 1 port scattering matrix with S_RT = h_rt, S_IT = h_it,
// S_RI = h_ri and zero self-scattering blocks. Reciprocal fills the mirrored
// blocks (S_TI = h_it^T, ...); otherwise they are zero, so only the forward
// path exists.
net::PartitionedScattering scattering_from_channels(const ChannelRealization& real,
                                                    bool reciprocal);

ChannelRealization draw_rayleigh_realization(std::size_t n_i, RandomStream& rng,
                                             bool with_direct = false);

// Per-link pathloss from the distance to the RIS center; LoS components from
// the array geometry.
ChannelRealization draw_geometry_realization(const Geometry2D& g, const PathlossParams& p,
                                             const RicianSpec& k, RandomStream& rng);

}  // namespace ris::chan
