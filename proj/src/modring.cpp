#include "gp/modring.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <string>

#include "gp/polynomial.hpp"

namespace gp {

u64 powmod(u64 base, u64 exp, u64 n) {
  if (n == 1) return 0;
  u64 result = 1;
  base %= n;
  while (exp) {
    if (exp & 1) result = mulmod(result, base, n);
    base = mulmod(base, base, n);
    exp >>= 1;
  }
  return result;
}

u64 gcd_u64(u64 a, u64 b) { return std::gcd(a, b); }

u64 lcm_u64(u64 a, u64 b) {
  if (a == 0 || b == 0) return 0;
  const unsigned __int128 l = static_cast<unsigned __int128>(a / gcd_u64(a, b)) * b;
  if (l > std::numeric_limits<u64>::max()) throw Error(Errc::Overflow, "lcm exceeds 64 bits");
  return static_cast<u64>(l);
}

u64 reduce_signed(i64 x, u64 n) {
  if (x >= 0) return static_cast<u64>(x) % n;
  const u64 mag = static_cast<u64>(-(x + 1)) + 1;
  const u64 r = mag % n;
  return r == 0 ? 0 : n - r;
}

u64 invmod(u64 a, u64 n) {
  __int128 t = 0, new_t = 1;
  __int128 r = n, new_r = a % n;
  while (new_r != 0) {
    const __int128 q = r / new_r;
    t -= q * new_t;
    std::swap(t, new_t);
    r -= q * new_r;
    std::swap(r, new_r);
  }
  if (r != 1) throw Error(Errc::NotAUnit, std::to_string(a) + " is not a unit mod " + std::to_string(n));
  if (t < 0) t += n;
  return static_cast<u64>(t);
}

namespace {

bool miller_rabin_witness(u64 n, u64 a, u64 d, unsigned s) {
  u64 x = powmod(a, d, n);
  if (x == 1 || x == n - 1) return false;
  for (unsigned r = 1; r < s; ++r) {
    x = mulmod(x, x, n);
    if (x == n - 1) return false;
  }
  return true;
}

u64 pollard_brent(u64 n, u64 c) {
  if (n % 2 == 0) return 2;
  auto f = [&](u64 x) { return addmod(mulmod(x, x, n), c, n); };
  u64 y = 2, x = 2, g = 1, q = 1, ys = 2;
  const u64 m = 128;
  u64 r = 1;
  do {
    x = y;
    for (u64 i = 0; i < r; ++i) y = f(y);
    u64 k = 0;
    do {
      ys = y;
      for (u64 i = 0; i < std::min(m, r - k); ++i) {
        y = f(y);
        q = mulmod(q, x > y ? x - y : y - x, n);
      }
      g = gcd_u64(q, n);
      k += m;
    } while (k < r && g == 1);
    r *= 2;
  } while (g == 1);
  if (g == n) {
    do {
      ys = f(ys);
      g = gcd_u64(x > ys ? x - ys : ys - x, n);
    } while (g == 1);
  }
  return g;
}

void factor_into(u64 n, std::map<u64, unsigned>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    ++out[n];
    return;
  }
  for (u64 c = 1;; ++c) {
    const u64 g = pollard_brent(n, c);
    if (g != n && g != 1) {
      factor_into(g, out);
      factor_into(n / g, out);
      return;
    }
  }
}

}  // namespace

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull})
    if (miller_rabin_witness(n, a, d, s)) return false;
  return true;
}

Residue::Residue(i64 value, u64 modulus) : value_(0), modulus_(modulus) {
  if (modulus == 0) throw Error(Errc::InvalidArgument, "modulus must be >= 1");
  value_ = reduce_signed(value, modulus);
}

u64 FactoredModulus::product() const {
  u64 out = 1;
  for (const auto& [p, e] : factors)
    for (unsigned i = 0; i < e; ++i) out *= p;
  return out;
}

FactoredModulus factor(u64 n) {
  if (n == 0) throw Error(Errc::InvalidArgument, "cannot factor 0");
  FactoredModulus result;
  result.n = n;
  std::map<u64, unsigned> found;
  u64 rest = n;
  for (u64 p = 2; p < 1000 && p * p <= rest; ++p) {
    while (rest % p == 0) {
      ++found[p];
      rest /= p;
    }
  }
  factor_into(rest, found);
  for (const auto& [p, e] : found) result.factors.push_back({p, e});
  return result;
}

u64 euler_phi(const FactoredModulus& f) {
  u64 phi = 1;
  for (const auto& [p, e] : f.factors) {
    phi *= p - 1;
    for (unsigned i = 1; i < e; ++i) phi *= p;
  }
  return phi;
}

u64 euler_phi(u64 n) { return euler_phi(factor(n)); }

bool is_squarefree(u64 n) {
  if (n == 0) return false;
  for (const auto& pe : factor(n).factors)
    if (pe.e > 1) return false;
  return true;
}

namespace {

using Factored = std::map<u64, unsigned>;

void merge_max(Factored& into, const FactoredModulus& f) {
  for (const auto& [p, e] : f.factors) into[p] = std::max(into[p], e);
}

u64 ipow_checked(u64 base, unsigned exp) {
  unsigned __int128 acc = 1;
  for (unsigned i = 0; i < exp; ++i) {
    acc *= base;
    if (acc > std::numeric_limits<u64>::max()) throw Error(Errc::Overflow, "power exceeds 64 bits");
  }
  return static_cast<u64>(acc);
}

// Generic "descend from a multiple of the order" routine. `is_one(x)` tests
// the identity, `raise(x, k)` returns x^k.
template <class T, class IsOne, class Raise>
u64 order_from_exponent(const T& x, const Factored& exponent, IsOne is_one, Raise raise) {
  u64 order = 1;
  for (const auto& [q, t] : exponent) {
    T y = x;
    for (const auto& [q2, t2] : exponent)
      if (q2 != q) y = raise(y, ipow_checked(q2, t2));
    unsigned s = 0;
    while (!is_one(y)) {
      y = raise(y, q);
      if (++s > t) throw Error(Errc::InvalidArgument, "exponent is not a multiple of the order");
    }
    order = static_cast<u64>(static_cast<unsigned __int128>(order) * ipow_checked(q, s));
  }
  return order;
}

}  // namespace

u64 mul_order(const Residue& a) {
  const u64 n = a.modulus();
  if (!a.is_unit()) throw Error(Errc::NotAUnit, std::to_string(a.value()) + " is not a unit mod " + std::to_string(n));
  if (n == 1) return 1;
  Factored exponent;
  merge_max(exponent, factor(euler_phi(n)));
  return order_from_exponent(
      a.value(), exponent, [](u64 v) { return v == 1; }, [n](u64 v, u64 k) { return powmod(v, k, n); });
}

// ---------------------------------------------------------------------------
// MatrixModN

MatrixModN::MatrixModN(std::size_t dim, u64 modulus, std::vector<u64> entries, bool)
    : dim_(dim), modulus_(modulus), entries_(std::move(entries)) {
  refresh_det();
}

MatrixModN::MatrixModN(std::size_t dim, u64 modulus, std::vector<i64> entries_row_major)
    : dim_(dim), modulus_(modulus) {
  if (dim == 0) throw Error(Errc::InvalidArgument, "matrix dimension must be >= 1");
  if (modulus < 2) throw Error(Errc::InvalidArgument, "matrix modulus must be >= 2");
  if (entries_row_major.size() != dim * dim)
    throw Error(Errc::DimensionMismatch, "expected " + std::to_string(dim * dim) + " entries, got " +
                                             std::to_string(entries_row_major.size()));
  entries_.reserve(dim * dim);
  for (i64 v : entries_row_major) entries_.push_back(reduce_signed(v, modulus));
  refresh_det();
}

MatrixModN MatrixModN::identity(std::size_t dim, u64 modulus) { return scalar(1, dim, modulus); }

MatrixModN MatrixModN::zero(std::size_t dim, u64 modulus) { return scalar(0, dim, modulus); }

MatrixModN MatrixModN::scalar(i64 value, std::size_t dim, u64 modulus) {
  std::vector<i64> e(dim * dim, 0);
  for (std::size_t i = 0; i < dim; ++i) e[i * dim + i] = value;
  return MatrixModN(dim, modulus, std::move(e));
}

MatrixModN MatrixModN::companion(const IntPolynomial& monic, u64 modulus) {
  if (!monic.is_monic() || monic.degree() < 1)
    throw Error(Errc::NotMonic, "companion matrix needs a monic polynomial of degree >= 1");
  const std::size_t m = static_cast<std::size_t>(monic.degree());
  std::vector<i64> e(m * m, 0);
  for (std::size_t i = 1; i < m; ++i) e[i * m + (i - 1)] = 1;
  for (std::size_t i = 0; i < m; ++i) e[i * m + (m - 1)] = -monic[i];
  return MatrixModN(m, modulus, std::move(e));
}

void MatrixModN::refresh_det() { det_unit_ = gcd_u64(det(), modulus_) == 1; }

u64 MatrixModN::det() const {
  if (dim_ > 20) throw Error(Errc::Unsupported, "determinant limited to dimension <= 20");
  const u64 n = modulus_;
  const std::size_t full = std::size_t{1} << dim_;
  std::vector<u64> dp(full, 0);
  dp[0] = 1 % n;
  for (std::size_t mask = 1; mask < full; ++mask) {
    const std::size_t row = static_cast<std::size_t>(std::popcount(mask)) - 1;
    u64 acc = 0;
    unsigned above = 0;
    for (std::size_t c = dim_; c-- > 0;) {
      if (!(mask & (std::size_t{1} << c))) continue;
      const u64 term = mulmod((*this)(row, c), dp[mask ^ (std::size_t{1} << c)], n);
      acc = (above % 2 == 0) ? addmod(acc, term, n) : addmod(acc, term == 0 ? 0 : n - term, n);
      ++above;
    }
    dp[mask] = acc;
  }
  return dp[full - 1];
}

bool MatrixModN::is_identity() const {
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c)
      if ((*this)(r, c) != (r == c ? 1 % modulus_ : 0)) return false;
  return true;
}

MatrixModN MatrixModN::operator*(const MatrixModN& rhs) const {
  if (dim_ != rhs.dim_ || modulus_ != rhs.modulus_) throw Error(Errc::ModulusMismatch, "matrix shape/modulus mismatch");
  const u64 n = modulus_;
  std::vector<u64> out(dim_ * dim_, 0);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t k = 0; k < dim_; ++k) {
      const u64 a = (*this)(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < dim_; ++j)
        out[i * dim_ + j] = addmod(out[i * dim_ + j], mulmod(a, rhs(k, j), n), n);
    }
  MatrixModN r(dim_, n, std::move(out), true);
  return r;
}

MatrixModN MatrixModN::operator+(const MatrixModN& rhs) const {
  if (dim_ != rhs.dim_ || modulus_ != rhs.modulus_) throw Error(Errc::ModulusMismatch, "matrix shape/modulus mismatch");
  std::vector<u64> out(entries_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = addmod(entries_[i], rhs.entries_[i], modulus_);
  return MatrixModN(dim_, modulus_, std::move(out), true);
}

MatrixModN MatrixModN::scaled(u64 k) const {
  std::vector<u64> out(entries_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = mulmod(entries_[i], k % modulus_, modulus_);
  return MatrixModN(dim_, modulus_, std::move(out), true);
}

MatrixModN MatrixModN::pow(u64 exp) const {
  MatrixModN result = identity(dim_, modulus_);
  MatrixModN base = *this;
  while (exp) {
    if (exp & 1) result = result * base;
    exp >>= 1;
    if (exp) base = base * base;
  }
  return result;
}

MatrixModN MatrixModN::transpose() const {
  std::vector<u64> out(entries_.size());
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c) out[c * dim_ + r] = (*this)(r, c);
  return MatrixModN(dim_, modulus_, std::move(out), true);
}

MatrixModN MatrixModN::reduced(u64 new_modulus) const {
  if (new_modulus < 2 || modulus_ % new_modulus != 0)
    throw Error(Errc::ModulusMismatch, "reduction modulus must divide the current modulus");
  std::vector<u64> out(entries_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = entries_[i] % new_modulus;
  return MatrixModN(dim_, new_modulus, std::move(out), true);
}

std::vector<u64> MatrixModN::apply(std::span<const u64> x) const {
  if (x.size() != dim_) throw Error(Errc::DimensionMismatch, "vector length does not match matrix dimension");
  std::vector<u64> out(dim_, 0);
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c) out[r] = addmod(out[r], mulmod((*this)(r, c), x[c] % modulus_, modulus_), modulus_);
  return out;
}

// ---------------------------------------------------------------------------
// Orders in GL_m(Z/nZ)

namespace {

// A multiple of the exponent of GL_m(Z/p^eZ):
//   p^(e-1) * p^t * lcm_{k<=m}(p^k - 1), with p^t >= m.
void gl_exponent_multiple(u64 p, unsigned e, std::size_t m, Factored& out) {
  unsigned t = 0;
  for (u64 pt = 1; pt < m; pt *= p) ++t;
  out[p] = std::max(out[p], (e - 1) + t);
  for (std::size_t k = 1; k <= m; ++k) {
    u64 pk;
    try {
      pk = ipow_checked(p, static_cast<unsigned>(k));
    } catch (const Error&) {
      throw Error(Errc::Unsupported, "p^m exceeds 64 bits; group exponent cannot be factored");
    }
    merge_max(out, factor(pk - 1));
  }
  out.erase(1);
  for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
}

Factored gl_exponent_multiple(u64 n, std::size_t m) {
  Factored exponent;
  for (const auto& [p, e] : factor(n).factors) gl_exponent_multiple(p, e, m, exponent);
  return exponent;
}

bool divides_factored(u64 d, const Factored& f) {
  for (const auto& [q, t] : factor(d).factors) {
    auto it = f.find(q);
    if (it == f.end() || it->second < t) return false;
  }
  return true;
}

}  // namespace

u64 mat_order(const MatrixModN& a) {
  if (!a.det_unit())
    throw Error(Errc::NotInvertible, "det = " + std::to_string(a.det()) + " shares a factor with " +
                                         std::to_string(a.modulus()));
  return order_from_exponent(
      a, gl_exponent_multiple(a.modulus(), a.dim()), [](const MatrixModN& x) { return x.is_identity(); },
      [](const MatrixModN& x, u64 k) { return x.pow(k); });
}

MatrixModN eval_poly(const IntPolynomial& poly, const MatrixModN& a) {
  const u64 n = a.modulus();
  MatrixModN acc = MatrixModN::zero(a.dim(), n);
  for (auto it = poly.coeffs().rbegin(); it != poly.coeffs().rend(); ++it)
    acc = acc * a + MatrixModN::scalar(static_cast<i64>(reduce_signed(*it, n)), a.dim(), n);
  return acc;
}

bool check_cyclotomic_vanishing(const MatrixModN& a, u64 d) {
  const MatrixModN v = eval_poly(cyclotomic(d), a);
  return std::all_of(v.entries().begin(), v.entries().end(), [](u64 x) { return x == 0; });
}

std::vector<PrimePower> gl_order_mod_p_factored(u64 p, unsigned m) {
  std::map<u64, unsigned> acc;
  // prod_{i<m} (p^m - p^i) = p^(m(m-1)/2) * prod_{k=1..m} (p^k - 1)
  acc[p] += m * (m - 1) / 2;
  for (unsigned k = 1; k <= m; ++k)
    for (const auto& [q, t] : factor(ipow_checked(p, k) - 1).factors) acc[q] += t;
  std::vector<PrimePower> out;
  for (const auto& [q, t] : acc)
    if (t > 0 && q > 1) out.push_back({q, t});
  return out;
}

MatrixModN find_matrix(u64 n, std::size_t m, u64 d, bool require_vanishing, u64 seed,
                       const FindMatrixOptions& options) {
  if (m < 1 || d < 1) throw Error(Errc::InvalidArgument, "find_matrix needs m >= 1 and d >= 1");
  if (n < 2) throw Error(Errc::InvalidArgument, "find_matrix needs n >= 2");

  const Factored exponent = gl_exponent_multiple(n, m);
  if (!divides_factored(d, exponent))
    throw Error(Errc::ImpossibleOrder, "no element of order " + std::to_string(d) + " in GL_" +
                                           std::to_string(m) + "(Z/" + std::to_string(n) + ")");
  if (require_vanishing) {
    for (const auto& [p, e] : factor(n).factors) {
      Factored gl;
      for (const auto& [q, t] : gl_order_mod_p_factored(p, static_cast<unsigned>(m))) gl[q] = t;
      if (!divides_factored(d, gl))
        throw Error(Errc::ImpossibleOrder, std::to_string(d) + " does not divide #GL_" + std::to_string(m) +
                                               "(F_" + std::to_string(p) + ")");
    }
  }

  auto accept = [&](const MatrixModN& a) {
    return a.det_unit() && mat_order(a) == d && (!require_vanishing || check_cyclotomic_vanishing(a, d));
  };

  const IntPolynomial phi = cyclotomic(d);
  if (static_cast<std::size_t>(phi.degree()) == m && gcd_u64(reduce_signed(phi[0], n), n) == 1) {
    MatrixModN c = MatrixModN::companion(phi, n);
    if (accept(c)) return c;
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<u64> entry(0, n - 1);
  std::vector<i64> buf(m * m);
  for (std::uint64_t tried = 0; tried < options.candidate_budget; ++tried) {
    for (auto& x : buf) x = static_cast<i64>(entry(rng));
    MatrixModN b(m, n, buf);
    if (!b.det_unit()) continue;
    const u64 ord = mat_order(b);
    if (ord % d != 0) continue;
    MatrixModN a = b.pow(ord / d);
    if (!require_vanishing || check_cyclotomic_vanishing(a, d)) return a;
  }
  throw Error(Errc::NotFound, "no matrix of order " + std::to_string(d) + " found within " +
                                  std::to_string(options.candidate_budget) + " candidates");
}

Residue order_p_power_element(u64 p, unsigned e, unsigned a, const Residue& beta) {
  if (!is_prime(p)) throw Error(Errc::NotPrime, std::to_string(p) + " is not prime");
  if (a < 1 || a > e)
    throw Error(Errc::BadExponent, "need 1 <= a <= e, got a=" + std::to_string(a) + ", e=" + std::to_string(e));
  if (beta.value() % p == 0) throw Error(Errc::NotAUnit, "beta must be coprime to p");
  const u64 pe = ipow_checked(p, e);
  // a = e would give 1 + beta, which is never of p-power order for a unit
  // beta, so the shift is kept at least p.
  const u64 shift = ipow_checked(p, std::max(e - a, 1u));
  return Residue(static_cast<i64>(addmod(1 % pe, mulmod(shift % pe, beta.value() % pe, pe), pe)), pe);
}

}  // namespace gp
