#pragma once

// Imaginary quadratic fields K = Q(sqrt(-d)) with O_K = Z[alpha], the ring
// O_K / mO_K as 2x2 matrices, Weierstrass p on C / (Z + Z alpha), torsion
// points and ray class field periods.

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include "gp/laurent.hpp"
#include "gp/modring.hpp"
#include "gp/periods.hpp"
#include "gp/polynomial.hpp"

namespace gp {

struct FieldData {
  u64 d = 0;
  cplx alpha;
  IntPolynomial min_poly;         // x^2 + p1 x + p0
  i64 p0 = 0, p1 = 0;
  std::array<i64, 4> c_alpha{};   // row-major [[0, -p0], [1, -p1]]
  unsigned unit_count = 2;
  bool class_number_one = false;
};

// Class number one: d in {1, 2, 3, 7, 11, 19, 43, 67, 163}. Other squarefree
// d need allow_any_class_number.
FieldData field_data(u64 d, bool allow_any_class_number = false);

// x + y alpha in O_K / mO_K. Its matrix acts on coordinate vectors (a, b) of
// a + b alpha.
class OkElement {
 public:
  OkElement(const FieldData& field, i64 x, i64 y, u64 m);

  u64 x() const noexcept { return x_; }
  u64 y() const noexcept { return y_; }
  u64 modulus() const noexcept { return matrix_.modulus(); }
  u64 field_d() const noexcept { return d_; }
  const MatrixModN& matrix() const noexcept { return matrix_; }
  bool is_unit() const noexcept { return matrix_.det_unit(); }

 private:
  friend OkElement ok_mul(const OkElement&, const OkElement&);
  OkElement(u64 d, MatrixModN matrix);

  u64 d_;
  u64 x_, y_;
  MatrixModN matrix_;
};

OkElement ok_mul(const OkElement& a, const OkElement& b);

// Images of the units of O_K in O_K / mO_K, deduplicated.
std::vector<OkElement> unit_images(const FieldData& field, u64 m);

// Order of A in (O_K / mO_K)^x / O_K^x.
u64 quotient_order(const FieldData& field, const OkElement& a);

enum class Splitting { Split, Inert, Ramified };
const char* splitting_name(Splitting s) noexcept;

Splitting prime_splitting(u64 p, const FieldData& field);
u64 unit_group_order(u64 p, unsigned e, const FieldData& field);

// Element of quotient order exactly d: a seeded random unit B with d | r(B),
// replaced by B^(r/d). Throws ImpossibleOrder when d does not divide the
// unit group order and NotFound once the budget runs out.
OkElement find_ok_element(const FieldData& field, u64 m, u64 d, u64 seed, std::uint64_t budget = 1'000'000);

class LatticeContext {
 public:
  cplx tau() const noexcept { return tau_; }
  cplx g2() const noexcept { return g2_; }
  cplx g3() const noexcept { return g3_; }
  double tol() const noexcept { return tol_; }
  // c_k for k = 2, 3, ..., with p(u) = 1/u^2 + sum c_k u^(2k-2).
  const std::vector<cplx>& laurent_coeffs() const noexcept { return coeffs_; }
  // Largest |c_4 - c_2^2/3| / |c_4| style residual of the recursion checks.
  double recursion_residual() const noexcept { return recursion_residual_; }

 private:
  friend LatticeContext lattice_context(const FieldData& field, double tol);
  friend cplx wp(cplx z, const LatticeContext& ctx);
  friend cplx wp_prime(cplx z, const LatticeContext& ctx);

  cplx tau_, q_;
  cplx g2_, g3_;
  cplx e2_term_;  // pi^2/3 E2(tau)
  double tol_ = 1e-12;
  std::size_t q_terms_ = 0;
  std::vector<cplx> coeffs_;
  double recursion_residual_ = 0;
};

LatticeContext lattice_context(const FieldData& field, double tol = 1e-12);

inline constexpr double kPoleGuard = 1e-8;

// Throws PoleAtLattice within kPoleGuard of a lattice point.
cplx wp(cplx z, const LatticeContext& ctx);
cplx wp_prime(cplx z, const LatticeContext& ctx);

struct TorsionPoint {
  u64 a = 0, b = 0, m = 0;
  u64 order = 1;
  cplx lift;  // (a + b alpha) / m
  bool is_identity() const noexcept { return a == 0 && b == 0; }
};

TorsionPoint torsion_point(const FieldData& field, u64 m, u64 a, u64 b);
std::vector<TorsionPoint> torsion_points(const FieldData& field, u64 m);

// x, x^2 or x^3 according to the automorphism group of the curve.
cplx weber(cplx x, const FieldData& field);

// sum_{j < r} p(A^j z), r = quotient_order(A), with the Weber power applied
// to each term when `use_weber` is set.
cplx rcfp(const FieldData& field, const OkElement& a, const TorsionPoint& z, const LatticeContext& ctx,
          bool use_weber = false);

inline constexpr std::uint64_t kTorsionBudget = 1'000'000;

struct RcfpOptions {
  std::uint32_t color_modulus = 1;
  bool use_weber = false;
  std::uint64_t budget = kTorsionBudget;
};

// One point per non-identity (a, b), row-major index a*m + b, color a mod c.
Plot rcfp_plot(const FieldData& field, const OkElement& a, const LatticeContext& ctx, const RcfpOptions& options = {});

// w / (|w| + (m^2)^(1/root)); root = 4 gives w / (|w| + sqrt(m)).
cplx rescale_to_disc(cplx w, u64 m, double root = 4.0);

enum class Coordinate { X, Y };

struct TorsionPlotOptions {
  double s_max = 8.0;
  double gamma = 0.5;
  std::uint32_t color_modulus = 1;
  std::uint64_t budget = kTorsionBudget;
};

// p (X) or p' (Y) at every non-identity m-torsion point, sized
// s_max * order^(-gamma), colored by a mod c.
Plot torsion_coordinate_plot(const FieldData& field, u64 m, Coordinate coordinate, const LatticeContext& ctx,
                             const TorsionPlotOptions& options = {});

}  // namespace gp
