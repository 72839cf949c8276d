#include "gp/laurent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "gp/error.hpp"
#include "gp/modring.hpp"

namespace gp {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

cplx ipow(cplx z, std::int64_t e) {
  if (e < 0) return 1.0 / ipow(z, -e);
  cplx result = 1.0;
  while (e) {
    if (e & 1) result *= z;
    e >>= 1;
    if (e) z *= z;
  }
  return result;
}

double unit_double(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

cplx unit_root(double x) {
  const double frac = x - std::floor(x);
  return std::polar(1.0, kTwoPi * frac);
}

cplx unit_root(std::int64_t t, std::uint64_t n) {
  const std::uint64_t r = reduce_signed(t, n);
  return std::polar(1.0, kTwoPi * static_cast<double>(r) / static_cast<double>(n));
}

ReductionTable::ReductionTable(const IntPolynomial& poly, std::uint64_t d) : poly_(poly), d_(d), degree_(0) {
  if (!poly.is_monic()) throw Error(Errc::NotMonic, poly.to_string() + " is not monic");
  if (poly.degree() < 1) throw Error(Errc::InvalidArgument, "reducing polynomial must have degree >= 1");
  if (d < 1) throw Error(Errc::InvalidArgument, "d must be >= 1");
  if (!IntPolynomial::x_pow_minus_one(d).divmod(poly).second.is_zero())
    throw Error(Errc::NotADivisor, poly.to_string() + " does not divide x^" + std::to_string(d) + " - 1");

  degree_ = static_cast<std::size_t>(poly.degree());
  table_.assign(d * degree_, 0);
  // r <- x * r mod poly, starting from r = 1.
  std::vector<std::int64_t> r(degree_, 0);
  r[0] = 1;
  for (std::uint64_t k = 0; k < d; ++k) {
    std::copy(r.begin(), r.end(), table_.begin() + static_cast<std::ptrdiff_t>(k * degree_));
    const std::int64_t top = r[degree_ - 1];
    for (std::size_t j = degree_ - 1; j > 0; --j) r[j] = r[j - 1];
    r[0] = 0;
    if (top != 0) {
      for (std::size_t j = 0; j < degree_; ++j) {
        const __int128 v = static_cast<__int128>(r[j]) - static_cast<__int128>(top) * poly[j];
        if (v > INT64_MAX || v < INT64_MIN) throw Error(Errc::Overflow, "reduction table entry exceeds 64 bits");
        r[j] = static_cast<std::int64_t>(v);
      }
    }
  }
}

TorusPoint::TorusPoint(std::vector<cplx> coords, double tol) : coords_(std::move(coords)) {
  for (const cplx& z : coords_)
    if (std::abs(std::abs(z) - 1.0) > tol) throw Error(Errc::InvalidArgument, "torus coordinate off the unit circle");
}

TorusPoint TorusPoint::from_angles(std::span<const double> turns) {
  std::vector<cplx> c;
  c.reserve(turns.size());
  for (double t : turns) c.push_back(unit_root(t));
  return TorusPoint(std::move(c));
}

cplx eval_g(const ReductionTable& table, const TorusPoint& z) {
  if (z.size() != table.degree())
    throw Error(Errc::DimensionMismatch, "torus point has " + std::to_string(z.size()) + " coordinates, table degree is " +
                                             std::to_string(table.degree()));
  cplx sum = 0.0;
  for (std::uint64_t k = 0; k < table.d(); ++k) {
    cplx term = 1.0;
    for (std::size_t j = 0; j < table.degree(); ++j)
      if (const auto c = table(j, k); c != 0) term *= ipow(z.coords()[j], c);
    sum += term;
  }
  return sum;
}

cplx eval_g_turns(const ReductionTable& table, std::span<const double> turns) {
  if (turns.size() != table.degree()) throw Error(Errc::DimensionMismatch, "angle vector length != table degree");
  cplx sum = 0.0;
  for (std::uint64_t k = 0; k < table.d(); ++k) {
    double phase = 0.0;
    for (std::size_t j = 0; j < table.degree(); ++j) phase += static_cast<double>(table(j, k)) * turns[j];
    sum += unit_root(phase);
  }
  return sum;
}

std::vector<cplx> sample_image(const ReductionTable& table, std::uint64_t samples_per_axis, std::uint64_t seed,
                               const SampleOptions& options) {
  if (samples_per_axis < 1) throw Error(Errc::InvalidArgument, "samples_per_axis must be >= 1");
  const std::size_t s = table.degree();
  std::mt19937_64 rng(seed);
  std::vector<double> turns(s);
  std::vector<cplx> out;

  // Grid size, saturating at max_points + 1.
  std::uint64_t cells = 1;
  for (std::size_t j = 0; j < s && cells <= options.max_points; ++j) cells *= samples_per_axis;

  if (cells <= options.max_points) {
    out.reserve(cells);
    std::vector<std::uint64_t> idx(s, 0);
    const double step = 1.0 / static_cast<double>(samples_per_axis);
    for (std::uint64_t c = 0; c < cells; ++c) {
      for (std::size_t j = 0; j < s; ++j) turns[j] = (static_cast<double>(idx[j]) + unit_double(rng)) * step;
      out.push_back(eval_g_turns(table, turns));
      for (std::size_t j = 0; j < s; ++j) {
        if (++idx[j] < samples_per_axis) break;
        idx[j] = 0;
      }
    }
  } else {
    out.reserve(options.max_points);
    for (std::uint64_t c = 0; c < options.max_points; ++c) {
      for (auto& t : turns) t = unit_double(rng);
      out.push_back(eval_g_turns(table, turns));
    }
  }
  return out;
}

cplx hypocycloid_boundary(std::uint64_t q, double theta) {
  if (q < 1) throw Error(Errc::InvalidArgument, "hypocycloid needs at least one cusp");
  const double a = static_cast<double>(q - 1);
  return a * std::polar(1.0, theta) + std::polar(1.0, -a * theta);
}

Hypocycloid::Hypocycloid(std::uint64_t q, std::size_t segments) : q_(q) {
  if (q < 1) throw Error(Errc::InvalidArgument, "hypocycloid needs at least one cusp");
  if (q < 3) return;
  if (segments < 3) throw Error(Errc::InvalidArgument, "polygon needs at least 3 segments");
  polygon_.reserve(segments);
  for (std::size_t i = 0; i < segments; ++i)
    polygon_.push_back(hypocycloid_boundary(q, kTwoPi * static_cast<double>(i) / static_cast<double>(segments)));

  const std::size_t count = std::max<std::size_t>(1, segments / 8);
  y_lo_ = -static_cast<double>(q);
  slab_height_ = 2.0 * static_cast<double>(q) / static_cast<double>(count);
  slabs_.resize(count);
  const std::size_t n = polygon_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double a = polygon_[i].imag(), b = polygon_[(i + 1) % n].imag();
    const std::size_t lo = slab_of(std::min(a, b)), hi = slab_of(std::max(a, b));
    for (std::size_t s = lo; s <= hi; ++s) slabs_[s].push_back(static_cast<std::uint32_t>(i));
  }
}

std::size_t Hypocycloid::slab_of(double y) const {
  const double t = std::floor((y - y_lo_) / slab_height_);
  if (t <= 0) return 0;
  return std::min(slabs_.size() - 1, static_cast<std::size_t>(t));
}

double Hypocycloid::edge_distance(std::size_t i, cplx z) const {
  const cplx a = polygon_[i], b = polygon_[(i + 1) % polygon_.size()];
  const cplx ab = b - a;
  const double len2 = std::norm(ab);
  double t = len2 > 0 ? ((z - a) * std::conj(ab)).real() / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(z - (a + t * ab));
}

double Hypocycloid::boundary_distance(cplx z) const {
  if (q_ == 1) return std::abs(z - 1.0);
  if (q_ == 2) {
    const double dx = std::max(0.0, std::abs(z.real()) - 2.0);
    return std::hypot(dx, z.imag());
  }
  double best = INFINITY;
  for (std::size_t i = 0; i < polygon_.size(); ++i) best = std::min(best, edge_distance(i, z));
  return best;
}

bool Hypocycloid::contains(cplx z, double tol) const {
  if (q_ == 1) return std::abs(z - 1.0) <= tol;
  if (q_ == 2) return std::abs(z.imag()) <= tol && std::abs(z.real()) <= 2.0 + tol;
  const double radius = static_cast<double>(q_);
  if (std::abs(z) > radius + tol) return false;

  // Crossing number against the edges spanning this height.
  bool inside = false;
  if (z.imag() >= y_lo_ && z.imag() <= -y_lo_) {
    const std::size_t n = polygon_.size();
    for (std::uint32_t i : slabs_[slab_of(z.imag())]) {
      const cplx a = polygon_[i], b = polygon_[(i + 1) % n];
      if ((a.imag() > z.imag()) != (b.imag() > z.imag())) {
        const double x = a.real() + (z.imag() - a.imag()) * (b.real() - a.real()) / (b.imag() - a.imag());
        if (z.real() < x) inside = !inside;
      }
    }
  }
  if (inside) return true;
  // Edges within tol of z meet the slabs covering [y - tol, y + tol].
  const std::size_t lo = slab_of(z.imag() - tol), hi = slab_of(z.imag() + tol);
  for (std::size_t s = lo; s <= hi; ++s)
    for (std::uint32_t i : slabs_[s])
      if (edge_distance(i, z) <= tol) return true;
  return false;
}

HypocycloidDecomposition hypocycloid_decompose(cplx eta, std::uint64_t n, std::uint64_t k, const Hypocycloid& h_dm1, double tol) {
  const std::uint64_t dm1 = h_dm1.cusps();
  const double shift = static_cast<double>(k) / (static_cast<double>(dm1) * static_cast<double>(n));
  const cplx h = (eta - unit_root(static_cast<std::int64_t>(k), n)) * unit_root(shift);
  return {h, h_dm1.contains(h, tol)};
}

HypocycloidDecomposition hypocycloid_decompose(cplx eta, std::uint64_t n, std::uint64_t k, std::uint64_t d, double tol) {
  if (!is_prime(d)) throw Error(Errc::NotPrime, "hypocycloid decomposition needs prime d, got " + std::to_string(d));
  return hypocycloid_decompose(eta, n, k, Hypocycloid(d - 1), tol);
}

}  // namespace gp
