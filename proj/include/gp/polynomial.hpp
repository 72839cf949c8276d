#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace gp {

// Dense polynomial with exact integer coefficients in ascending degree order.
// The zero polynomial has no coefficients; otherwise the leading one is
// nonzero. Arithmetic throws Error(Overflow) instead of wrapping.
class IntPolynomial {
 public:
  IntPolynomial() = default;
  explicit IntPolynomial(std::vector<std::int64_t> coeffs);

  static IntPolynomial monomial(std::size_t degree, std::int64_t coeff = 1);
  // x^d - 1
  static IntPolynomial x_pow_minus_one(std::size_t d);

  const std::vector<std::int64_t>& coeffs() const noexcept { return coeffs_; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  // Degree of the zero polynomial is reported as -1.
  long degree() const noexcept { return static_cast<long>(coeffs_.size()) - 1; }
  std::int64_t leading() const { return coeffs_.empty() ? 0 : coeffs_.back(); }
  bool is_monic() const noexcept { return !coeffs_.empty() && coeffs_.back() == 1; }
  std::int64_t operator[](std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : 0; }

  std::int64_t eval(std::int64_t x) const;

  IntPolynomial operator+(const IntPolynomial& rhs) const;
  IntPolynomial operator-(const IntPolynomial& rhs) const;
  IntPolynomial operator*(const IntPolynomial& rhs) const;

  // Division by a monic divisor: returns (quotient, remainder).
  std::pair<IntPolynomial, IntPolynomial> divmod(const IntPolynomial& monic) const;

  std::string to_string() const;

  friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;

 private:
  void trim();
  std::vector<std::int64_t> coeffs_;
};

// Phi_d, via Phi_d = (x^d - 1) / prod_{k | d, k < d} Phi_k with exact division.
IntPolynomial cyclotomic(std::uint64_t d);

std::vector<std::uint64_t> divisors(std::uint64_t n);

}  // namespace gp
