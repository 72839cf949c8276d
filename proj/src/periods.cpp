#include "gp/periods.hpp"

#include <cstdio>
#include <mutex>
#include <ostream>
#include <string>

#include "gp/error.hpp"
#include "gp/parallel.hpp"

namespace gp {

namespace {

constexpr std::uint64_t kCompensateAbove = 1000;

std::shared_ptr<const RootTable> lazy_table(std::shared_ptr<const RootTable>& slot, std::uint64_t n) {
  static std::mutex mu;
  std::lock_guard lock(mu);
  if (!slot && n <= kRootTableLimit) slot = std::make_shared<const RootTable>(n);
  return slot;
}

}  // namespace

std::vector<std::uint64_t> Plot::index_vector(const PlotPoint& p) const {
  std::vector<std::uint64_t> out(index_dims, 0);
  std::uint64_t rest = p.index;
  for (std::size_t i = index_dims; i-- > 0;) {
    out[i] = rest % base;
    rest /= base;
  }
  return out;
}

RootTable::RootTable(std::uint64_t n) : n_(n) {
  roots_.reserve(n);
  for (std::uint64_t t = 0; t < n; ++t) roots_.push_back(unit_root(static_cast<std::int64_t>(t), n));
}

PeriodSpec::PeriodSpec(std::uint64_t n, std::uint64_t omega, std::uint32_t color_modulus)
    : n_(n), omega_(0), d_(0), c_(color_modulus) {
  if (n < 2) throw Error(Errc::InvalidArgument, "modulus n must be >= 2");
  if (color_modulus < 1) throw Error(Errc::InvalidArgument, "color modulus must be >= 1");
  const Residue w(static_cast<i64>(omega % n), n);
  if (!w.is_unit()) throw Error(Errc::NotAUnit, std::to_string(omega) + " is not a unit mod " + std::to_string(n));
  omega_ = w.value();
  d_ = mul_order(w);
}

const RootTable* PeriodSpec::roots() const { return lazy_table(roots_, n_).get(); }

cplx gaussian_period(const PeriodSpec& spec, std::uint64_t k) {
  const std::uint64_t n = spec.n();
  if (k >= n) throw Error(Errc::InvalidArgument, "k must lie in [0, n)");
  const RootTable* table = spec.roots();
  auto root = [&](std::uint64_t t) { return table ? (*table)[t] : unit_root(static_cast<std::int64_t>(t), n); };

  std::uint64_t x = k;
  if (spec.d() > kCompensateAbove) {
    CompensatedSum acc;
    for (std::uint64_t j = 0; j < spec.d(); ++j, x = mulmod(x, spec.omega(), n)) acc.add(root(x));
    return acc.value();
  }
  cplx acc = 0.0;
  for (std::uint64_t j = 0; j < spec.d(); ++j, x = mulmod(x, spec.omega(), n)) acc += root(x);
  return acc;
}

Plot gaussian_plot(const PeriodSpec& spec) {
  const std::uint64_t n = spec.n();
  const RootTable* table = spec.roots();
  auto root = [&](std::uint64_t t) { return table ? (*table)[t] : unit_root(static_cast<std::int64_t>(t), n); };

  Plot plot;
  plot.base = n;
  plot.index_dims = 1;
  plot.points.resize(n);
  std::vector<bool> seen(n, false);
  std::vector<std::uint64_t> orbit;
  for (std::uint64_t k = 0; k < n; ++k) {
    if (seen[k]) continue;
    orbit.clear();
    std::uint64_t x = k;
    do {
      orbit.push_back(x);
      seen[x] = true;
      x = mulmod(x, spec.omega(), n);
    } while (x != k);

    cplx sum;
    if (orbit.size() > kCompensateAbove) {
      CompensatedSum acc;
      for (std::uint64_t t : orbit) acc.add(root(t));
      sum = acc.value();
    } else {
      sum = 0.0;
      for (std::uint64_t t : orbit) sum += root(t);
    }
    const cplx value = sum * static_cast<double>(spec.d() / orbit.size());
    for (std::uint64_t t : orbit)
      plot.points[t] = PlotPoint{t, value, static_cast<std::uint32_t>(t % spec.color_modulus()), 1.0};
  }
  return plot;
}

SupercharSpec::SupercharSpec(MatrixModN a, std::uint32_t color_modulus) : a_(std::move(a)), d_(0), c_(color_modulus) {
  if (color_modulus < 1) throw Error(Errc::InvalidArgument, "color modulus must be >= 1");
  d_ = mat_order(a_);
  std::vector<std::uint64_t> w(a_.dim(), 1 % a_.modulus());
  weights_.reserve(d_);
  for (std::uint64_t j = 0; j < d_; ++j) {
    weights_.push_back(w);
    w = a_.apply(w);
  }
}

const RootTable* SupercharSpec::roots() const { return lazy_table(roots_, n()).get(); }

namespace {

cplx superchar_sum(const SupercharSpec& spec, std::span<const std::uint64_t> x, const RootTable* table) {
  const std::uint64_t n = spec.n();
  auto phase = [&](const std::vector<std::uint64_t>& w) {
    std::uint64_t t = 0;
    for (std::size_t i = 0; i < w.size(); ++i) t = addmod(t, mulmod(w[i], x[i], n), n);
    return table ? (*table)[t] : unit_root(static_cast<std::int64_t>(t), n);
  };
  if (spec.d() > kCompensateAbove) {
    CompensatedSum acc;
    for (const auto& w : spec.weights()) acc.add(phase(w));
    return acc.value();
  }
  cplx acc = 0.0;
  for (const auto& w : spec.weights()) acc += phase(w);
  return acc;
}

}  // namespace

cplx supercharacter_value(const SupercharSpec& spec, std::span<const std::uint64_t> x) {
  if (x.size() != spec.m())
    throw Error(Errc::DimensionMismatch, "x has " + std::to_string(x.size()) + " coordinates, expected " +
                                             std::to_string(spec.m()));
  std::vector<std::uint64_t> reduced(x.begin(), x.end());
  for (auto& v : reduced) v %= spec.n();
  return superchar_sum(spec, reduced, spec.roots());
}

Plot supercharacter_plot(const SupercharSpec& spec, std::uint64_t budget) {
  const std::uint64_t n = spec.n();
  const std::size_t m = spec.m();
  unsigned __int128 total = 1;
  for (std::size_t i = 0; i < m; ++i) {
    total *= n;
    if (total > UINT64_MAX) total = UINT64_MAX;
  }
  const auto count = static_cast<std::uint64_t>(total);
  if (count > budget)
    throw Error(Errc::BudgetExceeded,
                "supercharacter plot needs " + std::to_string(count) + " points, budget is " + std::to_string(budget),
                count);

  Plot plot;
  plot.base = n;
  plot.index_dims = m;
  plot.points.resize(count);
  const RootTable* table = spec.roots();
  parallel_chunks(count, 1 << 14, [&](std::size_t, std::size_t begin, std::size_t end) {
    std::vector<std::uint64_t> x(m);
    for (std::size_t idx = begin; idx < end; ++idx) {
      std::uint64_t rest = idx;
      for (std::size_t i = m; i-- > 0;) {
        x[i] = rest % n;
        rest /= n;
      }
      plot.points[idx] = PlotPoint{idx, superchar_sum(spec, x, table),
                                   static_cast<std::uint32_t>(x[0] % spec.color_modulus()), 1.0};
    }
  });
  return plot;
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> frame_batches(std::uint64_t n_points, std::uint64_t batch) {
  if (batch < 1) throw Error(Errc::InvalidArgument, "batch size C must be >= 1");
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  out.reserve((n_points + batch - 1) / batch);
  for (std::uint64_t start = 0; start < n_points; start += batch) out.emplace_back(start, std::min(n_points, start + batch));
  return out;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_points_csv(std::ostream& out, const Plot& plot) {
  if (plot.index_dims == 1) {
    out << "index,re,im,color\n";
  } else {
    for (std::size_t i = 0; i < plot.index_dims; ++i) out << 'i' << i << ',';
    out << "re,im,color\n";
  }
  std::string line;
  for (const PlotPoint& p : plot.points) {
    line.clear();
    if (plot.index_dims == 1) {
      line += std::to_string(p.index);
    } else {
      const auto iv = plot.index_vector(p);
      for (std::size_t i = 0; i < iv.size(); ++i) {
        if (i) line += ',';
        line += std::to_string(iv[i]);
      }
    }
    line += ',';
    line += format_double(p.value.real());
    line += ',';
    line += format_double(p.value.imag());
    line += ',';
    line += std::to_string(p.color);
    line += '\n';
    out << line;
  }
}

}  // namespace gp
