#pragma once

// Reduction tables for x^k modulo a divisor of x^d - 1, the Laurent
// envelopes built from them, and hypocycloid geometry.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "gp/polynomial.hpp"

namespace gp {

using cplx = std::complex<double>;

// e(x) = exp(2 pi i x)
cplx unit_root(double x);
// e(t / n) for integers; t is reduced first so the argument stays in [0, 2pi).
cplx unit_root(std::int64_t t, std::uint64_t n);

// Column k holds the coefficients of x^k mod `poly`, for k = 0 .. d-1.
// With poly = Phi_d these are the c_{jk}; with a reducible divisor mu of
// x^d - 1 they are the b_{jk} of the g_mu envelope.
class ReductionTable {
 public:
  ReductionTable(const IntPolynomial& poly, std::uint64_t d);

  std::uint64_t d() const noexcept { return d_; }
  std::size_t degree() const noexcept { return degree_; }
  const IntPolynomial& poly() const noexcept { return poly_; }
  std::int64_t operator()(std::size_t j, std::size_t k) const { return table_[k * degree_ + j]; }
  std::span<const std::int64_t> column(std::size_t k) const {
    return {table_.data() + k * degree_, degree_};
  }

 private:
  IntPolynomial poly_;
  std::uint64_t d_;
  std::size_t degree_;
  std::vector<std::int64_t> table_;  // column-major
};

inline ReductionTable reduction_table(const IntPolynomial& poly, std::uint64_t d) {
  return ReductionTable(poly, d);
}

// A point of the torus T^s. Coordinates are checked to be unit modulus.
class TorusPoint {
 public:
  explicit TorusPoint(std::vector<cplx> coords, double tol = 1e-12);
  static TorusPoint from_angles(std::span<const double> turns);  // z_j = e(turns_j)

  std::span<const cplx> coords() const noexcept { return coords_; }
  std::size_t size() const noexcept { return coords_.size(); }

 private:
  std::vector<cplx> coords_;
};

// g(z) = sum_k prod_j z_{j+1}^{c_{jk}}, integer exponents, negative ones as
// reciprocals.
cplx eval_g(const ReductionTable& table, const TorusPoint& z);
// Same evaluation with the torus point given by angles in turns; avoids
// building TorusPoint objects inside hot loops.
cplx eval_g_turns(const ReductionTable& table, std::span<const double> turns);

struct SampleOptions {
  std::uint64_t max_points = 2'000'000;
};

// Stratified torus sampling: one seeded jittered point per cell of a
// samples_per_axis^s grid, or max_points seeded uniform points when the grid
// is larger than that. Deterministic for a fixed seed.
std::vector<cplx> sample_image(const ReductionTable& table, std::uint64_t samples_per_axis, std::uint64_t seed,
                               const SampleOptions& options = {});

// (q-1) e^{i theta} + e^{-i (q-1) theta}; traces the boundary of H_q.
cplx hypocycloid_boundary(std::uint64_t q, double theta);

// Filled q-cusped hypocycloid H_q centered at the origin with a cusp at q.
// H_1 = {1}, H_2 = [-2, 2]; for q >= 3 membership is a crossing-number test
// against a 10^4 segment polygon, widened by `tol` in distance.
class Hypocycloid {
 public:
  explicit Hypocycloid(std::uint64_t q, std::size_t segments = 10'000);

  std::uint64_t cusps() const noexcept { return q_; }
  bool contains(cplx z, double tol) const;
  double boundary_distance(cplx z) const;

 private:
  // Edges i -> i+1 whose y-range meets each horizontal slab.
  std::size_t slab_of(double y) const;
  double edge_distance(std::size_t i, cplx z) const;

  std::uint64_t q_;
  std::vector<cplx> polygon_;
  double y_lo_ = 0, slab_height_ = 1;
  std::vector<std::vector<std::uint32_t>> slabs_;
};

struct HypocycloidDecomposition {
  cplx h;
  bool inside;
};

// For prime d: h = (eta - e(k/n)) * e(k/((d-1)n)) and whether h lies in the
// filled (d-1)-cusped hypocycloid. For d = 3 the test is the exact segment
// |Im h| <= tol, |Re h| <= 2 + tol.
HypocycloidDecomposition hypocycloid_decompose(cplx eta, std::uint64_t n, std::uint64_t k, std::uint64_t d, double tol);
// Variant reusing a prebuilt hypocycloid for H_{d-1}.
HypocycloidDecomposition hypocycloid_decompose(cplx eta, std::uint64_t n, std::uint64_t k, const Hypocycloid& h_dm1, double tol);

}  // namespace gp
