#include "gp/polynomial.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <mutex>

#include "gp/error.hpp"

namespace gp {

namespace {

std::int64_t checked(__int128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
    throw Error(Errc::Overflow, "polynomial coefficient exceeds 64 bits");
  return static_cast<std::int64_t>(v);
}

}  // namespace

IntPolynomial::IntPolynomial(std::vector<std::int64_t> coeffs) : coeffs_(std::move(coeffs)) {
  trim();
}

IntPolynomial IntPolynomial::monomial(std::size_t degree, std::int64_t coeff) {
  std::vector<std::int64_t> c(degree + 1, 0);
  c[degree] = coeff;
  return IntPolynomial(std::move(c));
}

IntPolynomial IntPolynomial::x_pow_minus_one(std::size_t d) {
  std::vector<std::int64_t> c(d + 1, 0);
  c[0] = -1;
  c[d] += 1;
  return IntPolynomial(std::move(c));
}

void IntPolynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

std::int64_t IntPolynomial::eval(std::int64_t x) const {
  __int128 acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = checked(acc * x + *it);
  return static_cast<std::int64_t>(acc);
}

IntPolynomial IntPolynomial::operator+(const IntPolynomial& rhs) const {
  std::vector<std::int64_t> c(std::max(coeffs_.size(), rhs.coeffs_.size()), 0);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = checked(static_cast<__int128>((*this)[i]) + rhs[i]);
  return IntPolynomial(std::move(c));
}

IntPolynomial IntPolynomial::operator-(const IntPolynomial& rhs) const {
  std::vector<std::int64_t> c(std::max(coeffs_.size(), rhs.coeffs_.size()), 0);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = checked(static_cast<__int128>((*this)[i]) - rhs[i]);
  return IntPolynomial(std::move(c));
}

IntPolynomial IntPolynomial::operator*(const IntPolynomial& rhs) const {
  if (is_zero() || rhs.is_zero()) return {};
  std::vector<__int128> acc(coeffs_.size() + rhs.coeffs_.size() - 1, 0);
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j)
      acc[i + j] += static_cast<__int128>(coeffs_[i]) * rhs.coeffs_[j];
  std::vector<std::int64_t> c(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) c[i] = checked(acc[i]);
  return IntPolynomial(std::move(c));
}

std::pair<IntPolynomial, IntPolynomial> IntPolynomial::divmod(const IntPolynomial& monic) const {
  if (!monic.is_monic()) throw Error(Errc::NotMonic, "divisor " + monic.to_string() + " is not monic");
  const std::size_t dd = static_cast<std::size_t>(monic.degree());
  if (degree() < monic.degree()) return {IntPolynomial{}, *this};
  std::vector<std::int64_t> rem = coeffs_;
  std::vector<std::int64_t> quot(coeffs_.size() - dd, 0);
  for (std::size_t i = coeffs_.size(); i-- > dd;) {
    const std::int64_t q = rem[i];
    quot[i - dd] = q;
    if (q == 0) continue;
    for (std::size_t j = 0; j <= dd; ++j)
      rem[i - dd + j] = checked(static_cast<__int128>(rem[i - dd + j]) - static_cast<__int128>(q) * monic.coeffs_[j]);
  }
  rem.resize(dd);
  return {IntPolynomial(std::move(quot)), IntPolynomial(std::move(rem))};
}

std::string IntPolynomial::to_string() const {
  if (is_zero()) return "0";
  std::string out;
  for (std::size_t i = coeffs_.size(); i-- > 0;) {
    const std::int64_t c = coeffs_[i];
    if (c == 0) continue;
    if (!out.empty()) out += c < 0 ? " - " : " + ";
    else if (c < 0) out += "-";
    const std::uint64_t mag = c < 0 ? static_cast<std::uint64_t>(-(c + 1)) + 1 : static_cast<std::uint64_t>(c);
    if (mag != 1 || i == 0) out += std::to_string(mag);
    if (i >= 1) out += "x";
    if (i >= 2) out += "^" + std::to_string(i);
  }
  return out;
}

std::vector<std::uint64_t> divisors(std::uint64_t n) {
  std::vector<std::uint64_t> small, large;
  for (std::uint64_t k = 1; k * k <= n; ++k) {
    if (n % k) continue;
    small.push_back(k);
    if (k != n / k) large.push_back(n / k);
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

IntPolynomial cyclotomic(std::uint64_t d) {
  if (d == 0) throw Error(Errc::InvalidArgument, "cyclotomic index must be >= 1");
  static std::mutex mu;
  static std::map<std::uint64_t, IntPolynomial> cache;
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(d); it != cache.end()) return it->second;
  }
  IntPolynomial p = IntPolynomial::x_pow_minus_one(static_cast<std::size_t>(d));
  for (std::uint64_t k : divisors(d)) {
    if (k == d) break;
    auto [q, r] = p.divmod(cyclotomic(k));
    if (!r.is_zero()) throw Error(Errc::NotADivisor, "inexact cyclotomic division");
    p = std::move(q);
  }
  std::lock_guard lock(mu);
  cache.emplace(d, p);
  return p;
}

}  // namespace gp
