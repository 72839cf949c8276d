#pragma once

// Exact and brute-force Weyl sums over the point sets
// Lambda_n = { (A^0 . x, ..., A^{s-1} . x) / n : x in (Z/nZ)^m }
// and a grid-restricted box discrepancy estimate.

#include <complex>
#include <cstdint>
#include <vector>

#include "gp/modring.hpp"

namespace gp {

// A matrix is kept as an integer lift so that f_v(A) can be evaluated over Z
// without reduction; the lift of a MatrixModN is its reduced entries.
class WeylInstance {
 public:
  WeylInstance(u64 n, std::size_t m, std::vector<i64> lift_row_major, std::vector<i64> v);
  WeylInstance(const MatrixModN& a, std::vector<i64> v);

  u64 n() const noexcept { return n_; }
  std::size_t m() const noexcept { return m_; }
  std::size_t s() const noexcept { return v_.size(); }
  const std::vector<i64>& lift() const noexcept { return lift_; }
  const std::vector<i64>& v() const noexcept { return v_; }
  MatrixModN matrix() const { return MatrixModN(m_, n_, lift_); }

 private:
  u64 n_;
  std::size_t m_;
  std::vector<i64> lift_;
  std::vector<i64> v_;
};

// f_v(A) (1, ..., 1)^T over Z with f_v(x) = v_0 + v_1 x + ... . Throws
// Overflow if an intermediate leaves 64 bits.
std::vector<i64> alpha_vector(const WeylInstance& inst);

// n^m when n divides every alpha_l, else 0. Integer only; throws Overflow
// if n^m does not fit in 64 bits.
u64 weyl_sum_exact(const WeylInstance& inst);

inline constexpr std::uint64_t kWeylBudget = 10'000'000;

// Direct sum over all x of e(sum_j v_j (A^j 1 . x) / n).
std::complex<double> weyl_sum_numeric(const WeylInstance& inst, std::uint64_t budget = kWeylBudget);

// Points stored as integer numerators over a common denominator n, so that
// grid cells can be computed exactly.
class LambdaSet {
 public:
  LambdaSet(u64 n, std::size_t s, std::vector<u64> numerators);

  u64 n() const noexcept { return n_; }
  std::size_t s() const noexcept { return s_; }
  std::size_t size() const noexcept { return s_ == 0 ? 0 : nums_.size() / s_; }
  u64 numerator(std::size_t point, std::size_t coord) const { return nums_[point * s_ + coord]; }
  double coord(std::size_t point, std::size_t c) const {
    return static_cast<double>(numerator(point, c)) / static_cast<double>(n_);
  }

 private:
  u64 n_;
  std::size_t s_;
  std::vector<u64> nums_;
};

LambdaSet build_lambda(const MatrixModN& a, std::size_t s, std::uint64_t budget = kWeylBudget);

struct DiscrepancyOptions {
  std::uint64_t seed = 0;
  std::uint64_t sampled_boxes = 100'000;
};

// max |count/N - vol| over boxes [a, b) whose corners lie on the grid
// {0, 1/g, ..., 1}^s. All boxes for s <= 2, seeded random boxes otherwise.
// A lower bound for the true discrepancy; refining the grid to a multiple of
// g can only raise it.
double discrepancy_estimate(const LambdaSet& set, std::uint64_t grid, const DiscrepancyOptions& options = {});

}  // namespace gp
