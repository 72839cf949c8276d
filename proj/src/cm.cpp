#include "gp/cm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "gp/error.hpp"
#include "gp/parallel.hpp"

namespace gp {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};
constexpr double kLaurentRadius = 0.4;
constexpr std::array<u64, 9> kClassNumberOne = {1, 2, 3, 7, 11, 19, 43, 67, 163};

u64 checked_mul(u64 a, u64 b) {
  const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  if (p > UINT64_MAX) throw Error(Errc::Overflow, "unit group order exceeds 64 bits");
  return static_cast<u64>(p);
}

u64 checked_pow(u64 p, unsigned e) {
  u64 r = 1;
  for (unsigned i = 0; i < e; ++i) r = checked_mul(r, p);
  return r;
}

u64 divisor_power_sum(u64 n, unsigned k) {
  u64 s = 0;
  for (u64 d = 1; d <= n; ++d)
    if (n % d == 0) s += checked_pow(d, k);
  return s;
}

// Horner in v^2 over c_k v^(2k-2), k = 2, 3, ...
cplx laurent_tail(const std::vector<cplx>& c, cplx v2) {
  cplx acc = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * v2 + c[i];
  return acc * v2;
}

// sum (2k-2) c_k v^(2k-3)
cplx laurent_tail_derivative(const std::vector<cplx>& c, cplx v) {
  const cplx v2 = v * v;
  cplx acc = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * v2 + c[i] * static_cast<double>(2 * (i + 2) - 2);
  return acc * v;
}

struct Reduced {
  cplx u;       // z minus a lattice point, Im u within half a period of 0
  cplx near;    // offset from u to its nearest lattice point
  double dist;  // |u - near|
};

Reduced reduce(cplx z, cplx tau) {
  const double b = std::round(z.imag() / tau.imag());
  cplx u = z - b * tau;
  u -= std::round(u.real());
  Reduced r{u, 0.0, std::abs(u)};
  for (int i = -1; i <= 1; ++i)
    for (int j = -1; j <= 1; ++j) {
      const cplx lambda = static_cast<double>(i) + static_cast<double>(j) * tau;
      const double dist = std::abs(u - lambda);
      if (dist < r.dist) {
        r.near = lambda;
        r.dist = dist;
      }
    }
  if (r.dist < kPoleGuard) throw Error(Errc::PoleAtLattice, "argument lies on a lattice point");
  return r;
}

}  // namespace

FieldData field_data(u64 d, bool allow_any_class_number) {
  if (d < 1) throw Error(Errc::InvalidArgument, "d must be a positive integer");
  if (!is_squarefree(d)) throw Error(Errc::NotSquarefree, std::to_string(d) + " is not squarefree");
  FieldData f;
  f.d = d;
  f.class_number_one = std::find(kClassNumberOne.begin(), kClassNumberOne.end(), d) != kClassNumberOne.end();
  if (!f.class_number_one && !allow_any_class_number)
    throw Error(Errc::ClassNumberNotOne, "Q(sqrt(-" + std::to_string(d) + ")) does not have class number one");

  const double root = std::sqrt(static_cast<double>(d));
  if (d % 4 == 3) {
    f.alpha = cplx(-0.5, root / 2.0);
    f.p1 = 1;
    f.p0 = static_cast<i64>((d + 1) / 4);
  } else {
    f.alpha = cplx(0.0, root);
    f.p1 = 0;
    f.p0 = static_cast<i64>(d);
  }
  f.min_poly = IntPolynomial({f.p0, f.p1, 1});
  f.c_alpha = {0, -f.p0, 1, -f.p1};
  f.unit_count = d == 1 ? 4 : d == 3 ? 6 : 2;
  return f;
}

OkElement::OkElement(const FieldData& field, i64 x, i64 y, u64 m)
    : d_(field.d),
      x_(0),
      y_(0),
      matrix_(MatrixModN::identity(2, m == 0 ? 1 : m)) {
  if (m < 1) throw Error(Errc::InvalidArgument, "modulus m must be >= 1");
  const __int128 x128 = x, y128 = y;
  auto entry = [&](__int128 v) { return static_cast<i64>(v % static_cast<__int128>(m)); };
  matrix_ = MatrixModN(2, m,
                       {entry(x128), entry(-static_cast<__int128>(field.p0) * y128), entry(y128),
                        entry(x128 - static_cast<__int128>(field.p1) * y128)});
  x_ = matrix_(0, 0);
  y_ = matrix_(1, 0);
}

OkElement::OkElement(u64 d, MatrixModN matrix) : d_(d), x_(matrix(0, 0)), y_(matrix(1, 0)), matrix_(std::move(matrix)) {}

OkElement ok_mul(const OkElement& a, const OkElement& b) {
  if (a.modulus() != b.modulus())
    throw Error(Errc::ModulusMismatch,
                "moduli " + std::to_string(a.modulus()) + " and " + std::to_string(b.modulus()) + " differ");
  if (a.field_d() != b.field_d()) throw Error(Errc::InvalidArgument, "elements belong to different fields");
  return OkElement(a.field_d(), a.matrix() * b.matrix());
}

std::vector<OkElement> unit_images(const FieldData& field, u64 m) {
  std::vector<std::pair<i64, i64>> units = {{1, 0}, {-1, 0}};
  if (field.d == 1) {
    units.insert(units.end(), {{0, 1}, {0, -1}});
  } else if (field.d == 3) {
    // alpha is a primitive cube root of unity and alpha^2 = -1 - alpha.
    units.insert(units.end(), {{0, 1}, {0, -1}, {-1, -1}, {1, 1}});
  }
  std::vector<OkElement> out;
  for (auto [x, y] : units) {
    OkElement e(field, x, y, m);
    if (std::none_of(out.begin(), out.end(), [&](const OkElement& o) { return o.matrix() == e.matrix(); }))
      out.push_back(e);
  }
  return out;
}

u64 quotient_order(const FieldData& field, const OkElement& a) {
  if (!a.is_unit()) throw Error(Errc::NotAUnit, "element is not a unit mod " + std::to_string(a.modulus()));
  const u64 r0 = mat_order(a.matrix());
  const auto units = unit_images(field, a.modulus());
  // <A> meets the unit image in a subgroup whose order divides gcd(r0, w).
  const u64 g = gcd_u64(r0, field.unit_count);
  const MatrixModN step = a.matrix().pow(r0 / g);
  MatrixModN cur = MatrixModN::identity(2, a.modulus());
  u64 hits = 0;
  for (u64 t = 0; t < g; ++t) {
    if (std::any_of(units.begin(), units.end(), [&](const OkElement& u) { return u.matrix() == cur; })) ++hits;
    cur = cur * step;
  }
  return r0 / hits;
}

const char* splitting_name(Splitting s) noexcept {
  switch (s) {
    case Splitting::Split: return "split";
    case Splitting::Inert: return "inert";
    case Splitting::Ramified: return "ramified";
  }
  return "?";
}

Splitting prime_splitting(u64 p, const FieldData& field) {
  if (!is_prime(p)) throw Error(Errc::NotPrime, std::to_string(p) + " is not prime");
  if (p == 2) {
    int roots = 0;
    for (i64 x = 0; x < 2; ++x)
      if (reduce_signed(x * x + field.p1 * x + field.p0, 2) == 0) ++roots;
    if (roots == 2) return Splitting::Split;
    if (roots == 0) return Splitting::Inert;
    return Splitting::Ramified;
  }
  const i64 disc = field.p1 * field.p1 - 4 * field.p0;
  const u64 dm = reduce_signed(disc, p);
  if (dm == 0) return Splitting::Ramified;
  return powmod(dm, (p - 1) / 2, p) == 1 ? Splitting::Split : Splitting::Inert;
}

u64 unit_group_order(u64 p, unsigned e, const FieldData& field) {
  if (e < 1) throw Error(Errc::BadExponent, "exponent must be >= 1");
  switch (prime_splitting(p, field)) {
    case Splitting::Inert: return checked_mul(checked_mul(p, p) - 1, checked_pow(p, 2 * (e - 1)));
    case Splitting::Split: {
      const u64 one = checked_mul(p - 1, checked_pow(p, e - 1));
      return checked_mul(one, one);
    }
    case Splitting::Ramified: return checked_mul(p - 1, checked_pow(p, 2 * e - 1));
  }
  return 0;
}

OkElement find_ok_element(const FieldData& field, u64 m, u64 d, u64 seed, std::uint64_t budget) {
  if (m < 2) throw Error(Errc::InvalidArgument, "modulus m must be >= 2");
  if (d < 1) throw Error(Errc::InvalidArgument, "order d must be >= 1");
  if (d == 1) return OkElement(field, 1, 0, m);
  // The quotient order divides #(O_K / mO_K)^x.
  u64 rest = d;
  for (const auto& [p, e] : factor(m).factors) rest /= gcd_u64(rest, unit_group_order(p, e, field) % rest);
  if (rest != 1)
    throw Error(Errc::ImpossibleOrder,
                std::to_string(d) + " does not divide the order of (O_K / " + std::to_string(m) + "O_K)^x");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<u64> coord(0, m - 1);
  for (std::uint64_t tries = 0; tries < budget; ++tries) {
    const i64 x = static_cast<i64>(coord(rng));
    const i64 y = static_cast<i64>(coord(rng));
    OkElement b(field, x, y, m);
    if (!b.is_unit()) continue;
    const u64 r = quotient_order(field, b);
    if (r % d != 0) continue;
    const MatrixModN power = b.matrix().pow(r / d);
    return OkElement(field, static_cast<i64>(power(0, 0)), static_cast<i64>(power(1, 0)), m);
  }
  throw Error(Errc::NotFound,
              "no element of quotient order " + std::to_string(d) + " found in " + std::to_string(budget) + " tries",
              budget);
}

LatticeContext lattice_context(const FieldData& field, double tol) {
  if (!(tol >= 1e-14 && tol <= 1e-6))
    throw Error(Errc::ToleranceOutOfRange, "tolerance must lie in [1e-14, 1e-6]");
  LatticeContext ctx;
  ctx.tol_ = tol;
  ctx.tau_ = field.alpha;
  ctx.q_ = std::exp(2.0 * kPi * kI * ctx.tau_);
  const double qa = std::abs(ctx.q_);

  // Divisor-sum q-expansions of E2, E4, E6.
  cplx e2 = 1.0, e4 = 1.0, e6 = 1.0, qn = 1.0;
  for (u64 n = 1; n < 200; ++n) {
    qn *= ctx.q_;
    if (std::pow(qa, static_cast<double>(n)) * std::pow(static_cast<double>(n), 6) < 1e-22) break;
    e2 -= 24.0 * static_cast<double>(divisor_power_sum(n, 1)) * qn;
    e4 += 240.0 * static_cast<double>(divisor_power_sum(n, 3)) * qn;
    e6 -= 504.0 * static_cast<double>(divisor_power_sum(n, 5)) * qn;
  }
  const double pi2 = kPi * kPi;
  ctx.g2_ = (4.0 * pi2 * pi2 / 3.0) * e4;
  ctx.g3_ = (8.0 * pi2 * pi2 * pi2 / 27.0) * e6;
  ctx.e2_term_ = (pi2 / 3.0) * e2;

  // |q^n w| <= |q|^(n - 1/2) after reduction.
  ctx.q_terms_ = 1;
  while (ctx.q_terms_ < 400 && std::pow(qa, static_cast<double>(ctx.q_terms_) + 0.5) > 1e-18) ++ctx.q_terms_;

  ctx.coeffs_ = {ctx.g2_ / 20.0, ctx.g3_ / 28.0};
  const double r2 = kLaurentRadius * kLaurentRadius;
  for (std::size_t k = 4; k < 400; ++k) {
    cplx s = 0.0;
    for (std::size_t j = 2; j + 2 <= k; ++j) s += ctx.coeffs_[j - 2] * ctx.coeffs_[k - j - 2];
    const cplx ck = 3.0 / (static_cast<double>(2 * k + 1) * static_cast<double>(k - 3)) * s;
    ctx.coeffs_.push_back(ck);
    // Square and hexagonal lattices have every second or third c_k zero, so
    // stop only after three consecutive negligible terms.
    bool small = k >= 8;
    for (std::size_t i = 0; i < 3 && small; ++i)
      small = std::abs(ctx.coeffs_[k - 2 - i]) * std::pow(r2, static_cast<double>(k - i - 1)) < 1e-18;
    if (small) break;
  }

  const cplx c2 = ctx.coeffs_[0], c3 = ctx.coeffs_[1], c4 = ctx.coeffs_[2], c5 = ctx.coeffs_[3];
  auto rel = [](cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };
  ctx.recursion_residual_ = std::max(rel(c4, c2 * c2 / 3.0), rel(c5, 3.0 * c2 * c3 / 11.0));
  return ctx;
}

cplx wp(cplx z, const LatticeContext& ctx) {
  const Reduced r = reduce(z, ctx.tau_);
  if (r.dist <= kLaurentRadius) {
    const cplx v = r.u - r.near;
    const cplx v2 = v * v;
    return 1.0 / v2 + laurent_tail(ctx.coeffs_, v2);
  }
  // pi^2 sum_n csc^2(pi (u + n tau)) - pi^2/3 E2, with csc^2(pi s) = -4w/(1-w)^2
  // for w = e(s), folded onto Im s >= 0 since it is even in s.
  const cplx s = r.u.imag() >= 0 ? r.u : -r.u;
  const cplx w = std::exp(2.0 * kPi * kI * s);
  cplx acc = -4.0 * w / ((1.0 - w) * (1.0 - w));
  for (std::size_t n = 1; n <= ctx.q_terms_; ++n) {
    const cplx nt = static_cast<double>(n) * ctx.tau_;
    const cplx x = std::exp(2.0 * kPi * kI * (nt + r.u));
    const cplx y = std::exp(2.0 * kPi * kI * (nt - r.u));
    acc -= 4.0 * x / ((1.0 - x) * (1.0 - x)) + 4.0 * y / ((1.0 - y) * (1.0 - y));
  }
  return kPi * kPi * acc - ctx.e2_term_;
}

cplx wp_prime(cplx z, const LatticeContext& ctx) {
  const Reduced r = reduce(z, ctx.tau_);
  if (r.dist <= kLaurentRadius) {
    const cplx v = r.u - r.near;
    return -2.0 / (v * v * v) + laurent_tail_derivative(ctx.coeffs_, v);
  }
  const bool flip = r.u.imag() < 0;
  const cplx s = flip ? -r.u : r.u;
  const cplx w = std::exp(2.0 * kPi * kI * s);
  const cplx two_pi_i = 2.0 * kPi * kI;
  cplx head = -4.0 * two_pi_i * w * (1.0 + w) / ((1.0 - w) * (1.0 - w) * (1.0 - w));
  if (flip) head = -head;
  cplx acc = head;
  for (std::size_t n = 1; n <= ctx.q_terms_; ++n) {
    const cplx nt = static_cast<double>(n) * ctx.tau_;
    const cplx x = std::exp(two_pi_i * (nt + r.u));
    const cplx y = std::exp(two_pi_i * (nt - r.u));
    acc -= 4.0 * two_pi_i * x * (1.0 + x) / ((1.0 - x) * (1.0 - x) * (1.0 - x));
    acc += 4.0 * two_pi_i * y * (1.0 + y) / ((1.0 - y) * (1.0 - y) * (1.0 - y));
  }
  return kPi * kPi * acc;
}

TorsionPoint torsion_point(const FieldData& field, u64 m, u64 a, u64 b) {
  if (m < 1) throw Error(Errc::InvalidArgument, "torsion level must be >= 1");
  TorsionPoint t;
  t.m = m;
  t.a = a % m;
  t.b = b % m;
  t.order = m / gcd_u64(gcd_u64(t.a, t.b), m);
  t.lift = (static_cast<double>(t.a) + static_cast<double>(t.b) * field.alpha) / static_cast<double>(m);
  return t;
}

std::vector<TorsionPoint> torsion_points(const FieldData& field, u64 m) {
  if (m < 2) throw Error(Errc::InvalidArgument, "torsion level must be >= 2");
  std::vector<TorsionPoint> out;
  out.reserve(m * m);
  for (u64 a = 0; a < m; ++a)
    for (u64 b = 0; b < m; ++b) out.push_back(torsion_point(field, m, a, b));
  return out;
}

cplx weber(cplx x, const FieldData& field) {
  if (field.d == 1) return x * x;
  if (field.d == 3) return x * x * x;
  return x;
}

cplx rcfp(const FieldData& field, const OkElement& a, const TorsionPoint& z, const LatticeContext& ctx,
          bool use_weber) {
  if (z.is_identity()) throw Error(Errc::IdentityTorsionPoint, "the identity is a pole of p");
  if (z.m != a.modulus()) throw Error(Errc::ModulusMismatch, "torsion level differs from the element modulus");
  const u64 r = quotient_order(field, a);
  std::vector<u64> ab = {z.a, z.b};
  CompensatedSum acc;
  for (u64 j = 0; j < r; ++j) {
    const cplx v = wp(torsion_point(field, z.m, ab[0], ab[1]).lift, ctx);
    acc.add(use_weber ? weber(v, field) : v);
    ab = a.matrix().apply(ab);
  }
  return acc.value();
}

namespace {

u64 checked_torsion_count(u64 m, std::uint64_t budget) {
  if (m < 2) throw Error(Errc::InvalidArgument, "torsion level must be >= 2");
  const unsigned __int128 count = static_cast<unsigned __int128>(m) * m;
  if (count > budget) {
    const u64 need = count > UINT64_MAX ? UINT64_MAX : static_cast<u64>(count);
    throw Error(Errc::BudgetExceeded,
                std::to_string(need) + " torsion points exceed the budget of " + std::to_string(budget), need);
  }
  return static_cast<u64>(count);
}

// f at every (a, b) != (0, 0), indexed a*m + b, evaluated once per pair
// {z, -z} and mirrored with the given parity.
template <class F>
std::vector<cplx> torsion_table(const FieldData& field, u64 m, bool odd, F f) {
  const u64 count = m * m;
  std::vector<cplx> table(count);
  auto neg = [m](u64 idx) { return ((m - idx / m) % m) * m + (m - idx % m) % m; };
  parallel_chunks(count, 4096, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t idx = std::max<std::size_t>(begin, 1); idx < end; ++idx)
      if (idx <= neg(idx)) table[idx] = f(torsion_point(field, m, idx / m, idx % m).lift);
  });
  for (u64 idx = 1; idx < count; ++idx)
    if (const u64 j = neg(idx); idx > j) table[idx] = odd ? -table[j] : table[j];
  return table;
}

}  // namespace

Plot rcfp_plot(const FieldData& field, const OkElement& a, const LatticeContext& ctx, const RcfpOptions& options) {
  const u64 m = a.modulus();
  const u64 count = checked_torsion_count(m, options.budget);
  if (options.color_modulus < 1) throw Error(Errc::InvalidArgument, "color modulus must be >= 1");
  const u64 r = quotient_order(field, a);
  const auto cache = torsion_table(field, m, false, [&](cplx z) {
    const cplx v = wp(z, ctx);
    return options.use_weber ? weber(v, field) : v;
  });

  Plot plot;
  plot.base = m;
  plot.index_dims = 2;
  plot.points.resize(count - 1);
  const MatrixModN& mat = a.matrix();
  parallel_chunks(count - 1, 4096, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const u64 idx = i + 1;
      u64 x = idx / m, y = idx % m;
      CompensatedSum acc;
      for (u64 j = 0; j < r; ++j) {
        acc.add(cache[x * m + y]);
        const u64 nx = addmod(mulmod(mat(0, 0), x, m), mulmod(mat(0, 1), y, m), m);
        const u64 ny = addmod(mulmod(mat(1, 0), x, m), mulmod(mat(1, 1), y, m), m);
        x = nx;
        y = ny;
      }
      plot.points[i] = PlotPoint{idx, acc.value(), static_cast<std::uint32_t>((idx / m) % options.color_modulus), 1.0};
    }
  });
  return plot;
}

cplx rescale_to_disc(cplx w, u64 m, double root) {
  if (m < 1) throw Error(Errc::InvalidArgument, "ideal generator must be >= 1");
  if (!(root > 0)) throw Error(Errc::InvalidArgument, "root must be positive");
  const double norm = static_cast<double>(m) * static_cast<double>(m);
  return w / (std::abs(w) + std::pow(norm, 1.0 / root));
}

Plot torsion_coordinate_plot(const FieldData& field, u64 m, Coordinate coordinate, const LatticeContext& ctx,
                             const TorsionPlotOptions& options) {
  const u64 count = checked_torsion_count(m, options.budget);
  if (options.color_modulus < 1) throw Error(Errc::InvalidArgument, "color modulus must be >= 1");
  const bool odd = coordinate == Coordinate::Y;
  const auto values = torsion_table(field, m, odd, [&](cplx z) { return odd ? wp_prime(z, ctx) : wp(z, ctx); });

  Plot plot;
  plot.base = m;
  plot.index_dims = 2;
  plot.points.reserve(count - 1);
  for (u64 idx = 1; idx < count; ++idx) {
    const u64 order = torsion_point(field, m, idx / m, idx % m).order;
    const double size = options.s_max * std::pow(1.0 / static_cast<double>(order), options.gamma);
    plot.points.push_back(
        PlotPoint{idx, values[idx], static_cast<std::uint32_t>((idx / m) % options.color_modulus), size});
  }
  return plot;
}

}  // namespace gp
