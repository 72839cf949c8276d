#pragma once

// Gaussian periods eta_{n,omega}(k) and cyclic supercharacters
// theta_{n,m,A}(x), the colored point sets they produce, and animation frame
// batching.

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gp/laurent.hpp"
#include "gp/modring.hpp"

namespace gp {

// One plotted value. `index` is the linear row-major index of the source
// point (k for Gaussian periods, x_1 n^{m-1} + ... + x_m for vectors).
struct PlotPoint {
  std::uint64_t index = 0;
  cplx value;
  std::uint32_t color = 0;
  double size = 1.0;
};

// A point set together with the shape of its index space, so that vector
// indices can be recovered from the linear index.
struct Plot {
  std::uint64_t base = 0;      // n (or m for torsion plots)
  std::size_t index_dims = 1;  // number of index coordinates
  std::vector<PlotPoint> points;

  std::vector<std::uint64_t> index_vector(const PlotPoint& p) const;
};

// e(t/n) for all t < n, built once. Entries are bit-identical to
// unit_root(t, n), so using the table never changes results.
class RootTable {
 public:
  explicit RootTable(std::uint64_t n);
  std::uint64_t modulus() const noexcept { return n_; }
  cplx operator[](std::uint64_t t) const { return roots_[t]; }

 private:
  std::uint64_t n_;
  std::vector<cplx> roots_;
};

inline constexpr std::uint64_t kRootTableLimit = 1'000'000;

class PeriodSpec {
 public:
  PeriodSpec(std::uint64_t n, std::uint64_t omega, std::uint32_t color_modulus = 1);

  std::uint64_t n() const noexcept { return n_; }
  std::uint64_t omega() const noexcept { return omega_; }
  std::uint64_t d() const noexcept { return d_; }
  std::uint32_t color_modulus() const noexcept { return c_; }
  // Shared lazily built table of e(t/n); null when n exceeds kRootTableLimit.
  const RootTable* roots() const;

 private:
  std::uint64_t n_, omega_, d_;
  std::uint32_t c_;
  mutable std::shared_ptr<const RootTable> roots_;
};

// Sum of d unit-circle values e(omega^j k / n), each from the reduced residue
// omega^j k mod n. Compensated summation once d exceeds 1000.
cplx gaussian_period(const PeriodSpec& spec, std::uint64_t k);

// All n values in index order k = 0..n-1, color k mod c. Evaluated once per
// <omega>-orbit: an orbit of size s contributes (d/s) * sum over the orbit.
Plot gaussian_plot(const PeriodSpec& spec);

class SupercharSpec {
 public:
  SupercharSpec(MatrixModN a, std::uint32_t color_modulus = 1);

  std::uint64_t n() const noexcept { return a_.modulus(); }
  std::size_t m() const noexcept { return a_.dim(); }
  std::uint64_t d() const noexcept { return d_; }
  const MatrixModN& matrix() const noexcept { return a_; }
  std::uint32_t color_modulus() const noexcept { return c_; }
  // weights()[j] = A^j * (1, ..., 1)^T mod n, for j = 0..d-1.
  const std::vector<std::vector<std::uint64_t>>& weights() const noexcept { return weights_; }
  const RootTable* roots() const;

 private:
  MatrixModN a_;
  std::uint64_t d_;
  std::uint32_t c_;
  std::vector<std::vector<std::uint64_t>> weights_;
  mutable std::shared_ptr<const RootTable> roots_;
};

cplx supercharacter_value(const SupercharSpec& spec, std::span<const std::uint64_t> x);

inline constexpr std::uint64_t kDefaultPlotBudget = 20'000'000;

// n^m values in row-major order over x, color x_1 mod c.
// Throws BudgetExceeded (required = n^m) when n^m > budget.
Plot supercharacter_plot(const SupercharSpec& spec, std::uint64_t budget = kDefaultPlotBudget);

// ceil(n_points / C) half-open ranges covering [0, n_points) in order.
std::vector<std::pair<std::uint64_t, std::uint64_t>> frame_batches(std::uint64_t n_points, std::uint64_t batch);

// CSV with header `index,re,im,color` (one index coordinate) or
// `i0,...,i{m-1},re,im,color`; reals with 17 significant digits.
void write_points_csv(std::ostream& out, const Plot& plot);
std::string format_double(double v);

// Neumaier-compensated complex accumulator.
class CompensatedSum {
 public:
  void add(cplx v) {
    add_part(re_, re_c_, v.real());
    add_part(im_, im_c_, v.imag());
  }
  cplx value() const { return {re_ + re_c_, im_ + im_c_}; }

 private:
  static void add_part(double& sum, double& comp, double x) {
    const double t = sum + x;
    comp += (std::abs(sum) >= std::abs(x)) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double re_ = 0, re_c_ = 0, im_ = 0, im_c_ = 0;
};

}  // namespace gp
