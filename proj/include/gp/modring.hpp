#pragma once

// Exact arithmetic in Z/nZ and in m x m matrices over Z/nZ.
//
// Moduli are 64-bit; every product goes through a 128-bit intermediate so
// n up to 2^63 is safe. Orders are computed by descending from a known
// multiple of the group exponent, one prime at a time, never by iterating.

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "gp/error.hpp"

namespace gp {

class IntPolynomial;

using u64 = std::uint64_t;
using i64 = std::int64_t;

inline u64 mulmod(u64 a, u64 b, u64 n) {
  return static_cast<u64>(static_cast<unsigned __int128>(a) * b % n);
}
inline u64 addmod(u64 a, u64 b, u64 n) {
  const u64 s = a + b;
  return (s >= n || s < a) ? s - n : s;
}
u64 powmod(u64 base, u64 exp, u64 n);
u64 gcd_u64(u64 a, u64 b);
u64 lcm_u64(u64 a, u64 b);
// Representative of x in [0, n) for any signed x.
u64 reduce_signed(i64 x, u64 n);
// Inverse of a modulo n; throws NotAUnit when gcd(a, n) != 1.
u64 invmod(u64 a, u64 n);

bool is_prime(u64 n);

// An element of Z/nZ. The value is always reduced.
class Residue {
 public:
  Residue(i64 value, u64 modulus);

  u64 value() const noexcept { return value_; }
  u64 modulus() const noexcept { return modulus_; }
  bool is_unit() const noexcept { return gcd_u64(value_, modulus_) == 1; }

  friend bool operator==(const Residue&, const Residue&) = default;

 private:
  u64 value_;
  u64 modulus_;
};

struct PrimePower {
  u64 p;
  unsigned e;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

// n = prod p^e with primes distinct and ascending.
struct FactoredModulus {
  u64 n = 1;
  std::vector<PrimePower> factors;

  u64 product() const;
};

// Trial division followed by Pollard rho (Brent) with deterministic seeds.
FactoredModulus factor(u64 n);

u64 euler_phi(u64 n);
u64 euler_phi(const FactoredModulus& f);
bool is_squarefree(u64 n);

// Least d >= 1 with a^d = 1 mod n.
u64 mul_order(const Residue& a);

// Square matrix over Z/nZ, row-major, entries reduced.
class MatrixModN {
 public:
  MatrixModN(std::size_t dim, u64 modulus, std::vector<i64> entries_row_major);
  static MatrixModN identity(std::size_t dim, u64 modulus);
  static MatrixModN zero(std::size_t dim, u64 modulus);
  static MatrixModN scalar(i64 value, std::size_t dim, u64 modulus);
  // Companion matrix of a monic polynomial: ones on the subdiagonal, the
  // negated low-order coefficients in the last column.
  static MatrixModN companion(const IntPolynomial& monic, u64 modulus);

  std::size_t dim() const noexcept { return dim_; }
  u64 modulus() const noexcept { return modulus_; }
  u64 operator()(std::size_t r, std::size_t c) const { return entries_[r * dim_ + c]; }
  std::span<const u64> entries() const noexcept { return entries_; }

  u64 det() const;
  bool det_unit() const noexcept { return det_unit_; }
  bool is_identity() const;

  MatrixModN operator*(const MatrixModN& rhs) const;
  MatrixModN operator+(const MatrixModN& rhs) const;
  MatrixModN scaled(u64 k) const;
  MatrixModN pow(u64 exp) const;
  MatrixModN transpose() const;
  MatrixModN reduced(u64 new_modulus) const;  // new_modulus must divide modulus
  std::vector<u64> apply(std::span<const u64> x) const;

  friend bool operator==(const MatrixModN& a, const MatrixModN& b) {
    return a.dim_ == b.dim_ && a.modulus_ == b.modulus_ && a.entries_ == b.entries_;
  }

 private:
  MatrixModN(std::size_t dim, u64 modulus, std::vector<u64> entries, bool);
  void refresh_det();

  std::size_t dim_;
  u64 modulus_;
  std::vector<u64> entries_;
  bool det_unit_ = false;
};

// Least d >= 1 with A^d = I mod n. Throws NotInvertible when det(A) is not a
// unit, Unsupported when p^m overflows 64 bits for some p | n.
u64 mat_order(const MatrixModN& a);

// Horner evaluation of Phi_d at A, compared against the zero matrix.
bool check_cyclotomic_vanishing(const MatrixModN& a, u64 d);
MatrixModN eval_poly(const IntPolynomial& poly, const MatrixModN& a);

// #GL_m(F_p) as a factored value: prod_{i<m} (p^m - p^i).
std::vector<PrimePower> gl_order_mod_p_factored(u64 p, unsigned m);

struct FindMatrixOptions {
  std::uint64_t candidate_budget = 1'000'000;
};

// A matrix of exact order d, optionally with Phi_d(A) = 0 mod n.
// Tries the companion matrix of Phi_d first, then seeded random matrices
// B, replaced by B^(ord(B)/d) when d | ord(B). NotFound means the budget ran
// out; ImpossibleOrder is only raised when a divisibility obstruction is known.
MatrixModN find_matrix(u64 n, std::size_t m, u64 d, bool require_vanishing, u64 seed,
                       const FindMatrixOptions& options = {});

// omega = 1 + p^max(e-a, 1) * beta mod p^e. Its order divides p^a.
Residue order_p_power_element(u64 p, unsigned e, unsigned a, const Residue& beta);

}  // namespace gp
