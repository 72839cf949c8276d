#include "gp/weyl.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "gp/error.hpp"
#include "gp/parallel.hpp"
#include "gp/periods.hpp"

namespace gp {

namespace {

i64 checked(__int128 v) {
  if (v > INT64_MAX || v < INT64_MIN) throw Error(Errc::Overflow, "alpha vector entry exceeds 64 bits");
  return static_cast<i64>(v);
}

u64 checked_power(u64 n, std::size_t m) {
  unsigned __int128 total = 1;
  for (std::size_t i = 0; i < m; ++i) {
    total *= n;
    if (total > UINT64_MAX) throw Error(Errc::Overflow, "n^m exceeds 64 bits");
  }
  return static_cast<u64>(total);
}

// Saturating n^m for budget checks.
u64 point_count(u64 n, std::size_t m) {
  unsigned __int128 total = 1;
  for (std::size_t i = 0; i < m && total <= UINT64_MAX; ++i) total *= n;
  return total > UINT64_MAX ? UINT64_MAX : static_cast<u64>(total);
}

// w[j] = A^j (1, ..., 1)^T mod n for j < s.
std::vector<std::vector<u64>> weight_vectors(const MatrixModN& a, std::size_t s) {
  std::vector<std::vector<u64>> w;
  w.reserve(s);
  std::vector<u64> cur(a.dim(), 1 % a.modulus());
  for (std::size_t j = 0; j < s; ++j) {
    w.push_back(cur);
    cur = a.apply(cur);
  }
  return w;
}

u64 dot_mod(const std::vector<u64>& w, const std::vector<u64>& x, u64 n) {
  u64 t = 0;
  for (std::size_t i = 0; i < w.size(); ++i) t = addmod(t, mulmod(w[i], x[i], n), n);
  return t;
}

void decode(u64 idx, u64 n, std::vector<u64>& x) {
  for (std::size_t i = x.size(); i-- > 0;) {
    x[i] = idx % n;
    idx /= n;
  }
}

}  // namespace

WeylInstance::WeylInstance(u64 n, std::size_t m, std::vector<i64> lift_row_major, std::vector<i64> v)
    : n_(n), m_(m), lift_(std::move(lift_row_major)), v_(std::move(v)) {
  if (n < 1) throw Error(Errc::InvalidArgument, "modulus n must be >= 1");
  if (m < 1) throw Error(Errc::InvalidArgument, "dimension m must be >= 1");
  if (lift_.size() != m * m)
    throw Error(Errc::DimensionMismatch, "matrix needs " + std::to_string(m * m) + " entries");
  if (v_.empty() || std::all_of(v_.begin(), v_.end(), [](i64 c) { return c == 0; }))
    throw Error(Errc::ZeroVector, "v must be nonzero");
  if (!matrix().det_unit()) throw Error(Errc::NotInvertible, "A is not invertible mod " + std::to_string(n));
}

WeylInstance::WeylInstance(const MatrixModN& a, std::vector<i64> v)
    : WeylInstance(a.modulus(), a.dim(),
                   std::vector<i64>(a.entries().begin(), a.entries().end()), std::move(v)) {}

std::vector<i64> alpha_vector(const WeylInstance& inst) {
  const std::size_t m = inst.m();
  std::vector<i64> power(m, 1), alpha(m, 0), next(m);
  for (std::size_t j = 0; j < inst.s(); ++j) {
    for (std::size_t l = 0; l < m; ++l)
      alpha[l] = checked(static_cast<__int128>(alpha[l]) + static_cast<__int128>(inst.v()[j]) * power[l]);
    if (j + 1 == inst.s()) break;
    for (std::size_t r = 0; r < m; ++r) {
      __int128 acc = 0;
      for (std::size_t c = 0; c < m; ++c) acc += static_cast<__int128>(inst.lift()[r * m + c]) * power[c];
      next[r] = checked(acc);
    }
    power.swap(next);
  }
  return alpha;
}

u64 weyl_sum_exact(const WeylInstance& inst) {
  const auto alpha = alpha_vector(inst);
  const auto n = static_cast<i64>(inst.n());
  for (i64 a : alpha)
    if (a % n != 0) return 0;
  return checked_power(inst.n(), inst.m());
}

std::complex<double> weyl_sum_numeric(const WeylInstance& inst, std::uint64_t budget) {
  const u64 n = inst.n();
  const std::size_t m = inst.m();
  const u64 count = point_count(n, m);
  if (count > budget)
    throw Error(Errc::BudgetExceeded,
                "Weyl sum needs " + std::to_string(count) + " terms, budget is " + std::to_string(budget), count);

  const auto w = weight_vectors(inst.matrix(), inst.s());
  std::vector<u64> vmod(inst.s());
  for (std::size_t j = 0; j < inst.s(); ++j) vmod[j] = reduce_signed(inst.v()[j], n);
  std::unique_ptr<RootTable> table;
  if (n <= kRootTableLimit) table = std::make_unique<RootTable>(n);

  constexpr std::size_t kChunk = 1 << 14;
  const std::size_t chunks = (count + kChunk - 1) / kChunk;
  std::vector<cplx> partial(chunks);
  parallel_chunks(count, kChunk, [&](std::size_t c, std::size_t begin, std::size_t end) {
    std::vector<u64> x(m);
    CompensatedSum acc;
    for (std::size_t idx = begin; idx < end; ++idx) {
      decode(idx, n, x);
      u64 t = 0;
      for (std::size_t j = 0; j < w.size(); ++j) t = addmod(t, mulmod(vmod[j], dot_mod(w[j], x, n), n), n);
      acc.add(table ? (*table)[t] : unit_root(static_cast<i64>(t), n));
    }
    partial[c] = acc.value();
  });
  CompensatedSum total;
  for (const cplx& p : partial) total.add(p);
  return total.value();
}

LambdaSet::LambdaSet(u64 n, std::size_t s, std::vector<u64> numerators) : n_(n), s_(s), nums_(std::move(numerators)) {
  if (n < 1) throw Error(Errc::InvalidArgument, "denominator must be >= 1");
  if (s < 1) throw Error(Errc::InvalidArgument, "point dimension must be >= 1");
  if (nums_.size() % s != 0) throw Error(Errc::DimensionMismatch, "numerator count is not a multiple of s");
  for (u64 v : nums_)
    if (v >= n) throw Error(Errc::InvalidArgument, "coordinate outside [0, 1)");
}

LambdaSet build_lambda(const MatrixModN& a, std::size_t s, std::uint64_t budget) {
  const u64 n = a.modulus();
  const std::size_t m = a.dim();
  const u64 count = point_count(n, m);
  if (count > budget)
    throw Error(Errc::BudgetExceeded,
                "Lambda set needs " + std::to_string(count) + " points, budget is " + std::to_string(budget), count);
  const auto w = weight_vectors(a, s);
  std::vector<u64> nums(count * s);
  std::vector<u64> x(m);
  for (u64 idx = 0; idx < count; ++idx) {
    decode(idx, n, x);
    for (std::size_t j = 0; j < s; ++j) nums[idx * s + j] = dot_mod(w[j], x, n);
  }
  return LambdaSet(n, s, std::move(nums));
}

namespace {

// Counts of points per grid cell, summed into an inclusive prefix table of
// shape (g+1)^s so any grid box count needs 2^s lookups.
class BoxCounter {
 public:
  BoxCounter(const LambdaSet& set, std::uint64_t g) : set_(set), g_(g), s_(set.s()) {
    cells_.resize(set.size() * s_);
    for (std::size_t p = 0; p < set.size(); ++p)
      for (std::size_t c = 0; c < s_; ++c)
        cells_[p * s_ + c] = static_cast<u64>(static_cast<unsigned __int128>(set.numerator(p, c)) * g / set.n());

    u64 table = 1;
    for (std::size_t c = 0; c < s_ && table <= kTableLimit; ++c) table *= g + 1;
    if (table > kTableLimit) return;

    stride_.assign(s_, 1);
    for (std::size_t c = s_ - 1; c-- > 0;) stride_[c] = stride_[c + 1] * (g + 1);
    prefix_.assign(table, 0);
    for (std::size_t p = 0; p < set.size(); ++p) {
      u64 off = 0;
      for (std::size_t c = 0; c < s_; ++c) off += (cells_[p * s_ + c] + 1) * stride_[c];
      ++prefix_[off];
    }
    for (std::size_t c = 0; c < s_; ++c)
      for (u64 i = 0; i < table; ++i)
        if ((i / stride_[c]) % (g + 1) != 0) prefix_[i] += prefix_[i - stride_[c]];
  }

  // Points with lo[c] <= cell[c] < hi[c] for every axis.
  u64 count(const std::vector<u64>& lo, const std::vector<u64>& hi) const {
    if (prefix_.empty()) {
      u64 total = 0;
      for (std::size_t p = 0; p < set_.size(); ++p) {
        bool in = true;
        for (std::size_t c = 0; c < s_ && in; ++c) in = cells_[p * s_ + c] >= lo[c] && cells_[p * s_ + c] < hi[c];
        total += in;
      }
      return total;
    }
    i64 total = 0;
    for (u64 mask = 0; mask < (u64{1} << s_); ++mask) {
      u64 off = 0;
      int sign = 1;
      for (std::size_t c = 0; c < s_; ++c) {
        if (mask >> c & 1) {
          off += lo[c] * stride_[c];
          sign = -sign;
        } else {
          off += hi[c] * stride_[c];
        }
      }
      total += sign * static_cast<i64>(prefix_[off]);
    }
    return static_cast<u64>(total);
  }

 private:
  static constexpr u64 kTableLimit = u64{1} << 24;
  const LambdaSet& set_;
  std::uint64_t g_;
  std::size_t s_;
  std::vector<u64> cells_;
  std::vector<u64> stride_;
  std::vector<u64> prefix_;
};

}  // namespace

double discrepancy_estimate(const LambdaSet& set, std::uint64_t grid, const DiscrepancyOptions& options) {
  if (grid < 2) throw Error(Errc::InvalidArgument, "grid must be >= 2");
  if (set.size() == 0) throw Error(Errc::EmptyPointSet, "discrepancy of an empty set");
  const std::size_t s = set.s();
  const BoxCounter counter(set, grid);
  const double inv_n = 1.0 / static_cast<double>(set.size());
  const double inv_g = 1.0 / static_cast<double>(grid);

  std::vector<u64> lo(s), hi(s);
  auto deviation = [&] {
    double vol = 1.0;
    for (std::size_t c = 0; c < s; ++c) vol *= static_cast<double>(hi[c] - lo[c]) * inv_g;
    return std::abs(static_cast<double>(counter.count(lo, hi)) * inv_n - vol);
  };

  double best = 0.0;
  if (s <= 2) {
    std::vector<std::pair<u64, u64>> spans;
    for (u64 a = 0; a < grid; ++a)
      for (u64 b = a + 1; b <= grid; ++b) spans.emplace_back(a, b);
    std::vector<std::size_t> pick(s, 0);
    while (true) {
      for (std::size_t c = 0; c < s; ++c) std::tie(lo[c], hi[c]) = spans[pick[c]];
      best = std::max(best, deviation());
      std::size_t c = 0;
      while (c < s && ++pick[c] == spans.size()) pick[c++] = 0;
      if (c == s) break;
    }
    return best;
  }

  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<u64> corner(0, grid);
  for (std::uint64_t k = 0; k < options.sampled_boxes; ++k) {
    for (std::size_t c = 0; c < s; ++c) {
      u64 a = corner(rng), b = corner(rng);
      while (a == b) b = corner(rng);
      lo[c] = std::min(a, b);
      hi[c] = std::max(a, b);
    }
    best = std::max(best, deviation());
  }
  return best;
}

}  // namespace gp
