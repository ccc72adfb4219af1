#include "cavity/specfun.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace cavity {

namespace {

std::atomic<int> g_max_order{256};

constexpr cplx kI{0.0, 1.0};

void check_order(int l) {
  if (l < 0) throw std::domain_error("spherical Bessel order must be non-negative");
  if (l > g_max_order.load(std::memory_order_relaxed)) {
    throw std::domain_error("spherical Bessel order " + std::to_string(l) +
                            " exceeds the configured maximum " +
                            std::to_string(g_max_order.load()));
  }
}

void check_argument(cplx z) {
  if (z == cplx(0.0, 0.0)) throw std::domain_error("spherical Bessel argument is zero");
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw std::domain_error("spherical Bessel argument is not finite");
  }
}

// i^n, exact.
cplx ipow(int n) {
  switch (((n % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

bool on_positive_imag_axis(cplx z) { return z.real() == 0.0 && z.imag() > 0.0; }

// Orders l-1, l, l+1 of one solution.
struct Triple {
  Scaled lo, mid, hi;
};

// Upward recurrence f_{n+1} = (2n+1)/z f_n - f_{n-1}, started from n = -1, 0.
// Both Hankel functions are dominant (or neutral) in the upward direction.
// The running pair is renormalised by exact powers of two every step.
Triple hankel_triple(Wave kind, int l, cplx z) {
  const bool out = kind == Wave::outgoing;
  const cplx inv = 1.0 / z;
  cplx fm = 1.0;                // z h_{-1} / e^{+-iz}
  cplx f0 = out ? -kI : kI;     // z h_0 / e^{+-iz}
  const Scaled phase = Scaled::exp(out ? kI * z : -kI * z) * Scaled(inv);
  std::int64_t shift = 0;

  Triple t;
  auto capture = [&](int n, cplx v) {
    const Scaled s = Scaled::ldexp(v, shift) * phase;
    if (n == l - 1) t.lo = s;
    if (n == l) t.mid = s;
    if (n == l + 1) t.hi = s;
  };
  capture(-1, fm);
  capture(0, f0);
  for (int n = 0; n <= l; ++n) {
    const cplx f1 = (2.0 * n + 1.0) * inv * f0 - fm;
    fm = f0;
    f0 = f1;
    const double big = std::max({std::abs(fm.real()), std::abs(fm.imag()),
                                 std::abs(f0.real()), std::abs(f0.imag())});
    if (big > 0.0 && std::isfinite(big)) {
      const int e = std::ilogb(big);
      if (e > 16 || e < -16) {
        fm = cplx(std::ldexp(fm.real(), -e), std::ldexp(fm.imag(), -e));
        f0 = cplx(std::ldexp(f0.real(), -e), std::ldexp(f0.imag(), -e));
        shift += e;
      }
    }
    capture(n + 1, f0);
  }
  return t;
}

// Modified Lentz evaluation of rho_n = j_n / j_{n-1}
//   = 1/(b_0 + s/(b_1 + s/(b_2 + ...))),  b_k = (2(n+k)+1)/z,
// with s = -1 for j and s = +1 for the modified function i.
template <class T>
T ratio_cf(int n, T z, double s) {
  constexpr double tiny = 1e-300;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const T inv = T(1.0) / z;
  T f = (2.0 * n + 1.0) * inv;
  if (f == T(0.0)) f = tiny;
  T c = f;
  T d = 0.0;
  const long max_iter = 20000 + 8 * static_cast<long>(std::abs(z));
  for (long k = 1; k <= max_iter; ++k) {
    const T b = (2.0 * (n + k) + 1.0) * inv;
    d = b + s * d;
    if (d == T(0.0)) d = tiny;
    c = b + s / c;
    if (c == T(0.0)) c = tiny;
    d = T(1.0) / d;
    const T delta = c * d;
    f *= delta;
    if (std::abs(delta - T(1.0)) < eps) return T(1.0) / f;
  }
  throw std::runtime_error("continued fraction for the Bessel ratio did not converge");
}

struct KTriple {
  Scaled lo, mid, hi;
};

KTriple k_triple(int l, double x) {
  const double inv = 1.0 / x;
  double km = 1.0;  // x k_{-1} e^{x}
  double k0 = 1.0;  // x k_0 e^{x}
  std::int64_t shift = 0;
  KTriple t;
  const Scaled decay(cplx(inv), -x);
  auto capture = [&](int n, double v) {
    const Scaled s = Scaled::ldexp(cplx(v), shift) * decay;
    if (n == l - 1) t.lo = s;
    if (n == l) t.mid = s;
    if (n == l + 1) t.hi = s;
  };
  capture(-1, km);
  capture(0, k0);
  for (int n = 0; n <= l; ++n) {
    const double k1 = km + (2.0 * n + 1.0) * inv * k0;
    km = k0;
    k0 = k1;
    const int e = std::ilogb(k0);
    if (e > 16 && std::isfinite(k0)) {
      km = std::ldexp(km, -e);
      k0 = std::ldexp(k0, -e);
      shift += e;
    }
    capture(n + 1, k0);
  }
  return t;
}

// i_l(x) e^{-x} from the terminating expansion; accurate when x >= (l+2)^2.
double modified_i_closed(int l, double x) {
  double alt = 0.0, all = 0.0;
  double term = 1.0;
  for (int k = 0; k <= l; ++k) {
    alt += (k % 2 == 0) ? term : -term;
    all += term;
    term *= static_cast<double>(l + k + 1) * (l - k) / ((k + 1.0) * 2.0 * x);
  }
  const double sign = (l % 2 == 0) ? 1.0 : -1.0;
  return (alt - sign * std::exp(-2.0 * x) * all) / (2.0 * x);
}

// rho_{l+1} = i_{l+1}/i_l for the modified function.
double modified_ratio_top(int l, double x) {
  const double big = static_cast<double>(l + 2) * (l + 2);
  if (x >= big) return modified_i_closed(l + 1, x) / modified_i_closed(l, x);
  return ratio_cf<double>(l + 1, x, +1.0);
}

}  // namespace

int max_order() { return g_max_order.load(std::memory_order_relaxed); }

void set_max_order(int l_max) {
  if (l_max < 1) throw std::invalid_argument("maximum Bessel order must be >= 1");
  g_max_order.store(l_max, std::memory_order_relaxed);
}

namespace detail {

namespace {

double direct_threshold(int l) { return std::max(32.0, static_cast<double>(l + 2) * (l + 2)); }

// j_{l-1}, j_l from the Wronskian with the Hankel function h that decays in the
// half plane of z (h^(1) above the real axis, h^(2) below):
//   j_n = +-i / (z^2 (rho_{n+1} h_n - h_{n+1})),  rho_n = j_n / j_{n-1}.
std::pair<Scaled, Scaled> j_from_wronskian(int l, cplx z, const Triple& h, bool upper) {
  const cplx rho_hi = ratio_cf<cplx>(l + 1, z, -1.0);
  const cplx rho_mid = 1.0 / ((2.0 * l + 1.0) / z - rho_hi);
  const Scaled inv_z(1.0 / z);
  const Scaled num = Scaled(upper ? kI : -kI) * inv_z * inv_z;
  return {num / (h.lo * Scaled(rho_mid) - h.mid), num / (h.mid * Scaled(rho_hi) - h.hi)};
}

}  // namespace

AdjacentOrders hankel_orders_complex(Wave kind, int l, cplx z) {
  check_order(l);
  check_argument(z);
  // The Hankel function that grows off the real axis picks up a multiple of the
  // other one, amplified by e^{2|Im z|}, once the recurrence passes the turning
  // point l ~ |z|. There it is assembled as 2j - h_other instead.
  const bool dominant = (kind == Wave::ingoing && z.imag() > 0.5) ||
                        (kind == Wave::outgoing && z.imag() < -0.5);
  if (dominant && std::abs(z) < direct_threshold(l)) {
    const bool upper = z.imag() > 0.0;
    const Triple other = hankel_triple(upper ? Wave::outgoing : Wave::ingoing, l, z);
    const auto [j_lo, j_mid] = j_from_wronskian(l, z, other, upper);
    const Scaled two(2.0);
    return {l, z, two * j_lo - other.lo, two * j_mid - other.mid};
  }
  const Triple t = hankel_triple(kind, l, z);
  return {l, z, t.lo, t.mid};
}

AdjacentOrders bessel_j_orders_complex(int l, cplx z) {
  check_order(l);
  check_argument(z);
  if (std::abs(z) >= direct_threshold(l)) {
    // No turning point below order l: both Hankel recurrences are accurate.
    const Triple a = hankel_triple(Wave::outgoing, l, z);
    const Triple b = hankel_triple(Wave::ingoing, l, z);
    const Scaled half(0.5);
    return {l, z, (a.lo + b.lo) * half, (a.mid + b.mid) * half};
  }
  const bool upper = z.imag() >= 0.0;
  const Triple h = hankel_triple(upper ? Wave::outgoing : Wave::ingoing, l, z);
  const auto [j_lo, j_mid] = j_from_wronskian(l, z, h, upper);
  return {l, z, j_lo, j_mid};
}

AdjacentOrders modified_k_orders(int l, double x) {
  check_order(l);
  if (!(x > 0.0)) throw std::domain_error("modified Bessel argument must be positive");
  const KTriple k = k_triple(l, x);
  return {l, cplx(x), k.lo, k.mid};
}

AdjacentOrders modified_i_orders(int l, double x) {
  check_order(l);
  if (!(x > 0.0)) throw std::domain_error("modified Bessel argument must be positive");
  const KTriple k = k_triple(l, x);
  const double rho_hi = modified_ratio_top(l, x);
  const double rho_mid = 1.0 / ((2.0 * l + 1.0) / x + rho_hi);
  const Scaled inv_x2 = Scaled(1.0 / x) * Scaled(1.0 / x);
  // Wronskian i_n k_{n+1} + i_{n+1} k_n = 1/x^2; every term positive.
  const Scaled i_mid = inv_x2 / (k.hi + k.mid * Scaled(rho_hi));
  const Scaled i_lo = inv_x2 / (k.mid + k.lo * Scaled(rho_mid));
  return {l, cplx(x), i_lo, i_mid};
}

}  // namespace detail

AdjacentOrders hankel_orders(Wave kind, int l, cplx z) {
  if (!on_positive_imag_axis(z)) return detail::hankel_orders_complex(kind, l, z);
  const double x = z.imag();
  // h^(1)_n(ix) = -i^{-n} k_n(x);  h^(2)_n(ix) = 2 i^n i_n(x) + i^{-n} k_n(x).
  const AdjacentOrders k = detail::modified_k_orders(l, x);
  AdjacentOrders out{l, z, {}, {}};
  if (kind == Wave::outgoing) {
    out.prev = k.prev * Scaled(-ipow(-(l - 1)));
    out.cur = k.cur * Scaled(-ipow(-l));
  } else {
    const AdjacentOrders i = detail::modified_i_orders(l, x);
    out.prev = i.prev * Scaled(2.0 * ipow(l - 1)) + k.prev * Scaled(ipow(-(l - 1)));
    out.cur = i.cur * Scaled(2.0 * ipow(l)) + k.cur * Scaled(ipow(-l));
  }
  return out;
}

AdjacentOrders bessel_j_orders(int l, cplx z) {
  if (!on_positive_imag_axis(z)) return detail::bessel_j_orders_complex(l, z);
  const AdjacentOrders i = detail::modified_i_orders(l, z.imag());
  return {l, z, i.prev * Scaled(ipow(l - 1)), i.cur * Scaled(ipow(l))};
}

namespace {

BesselPair unscale(const AdjacentOrders& o, const char* what) {
  const ScaledPair p = o.scaled_pair();
  const cplx f = p.f.value();
  const cplx df = p.df.value();
  auto finite = [](cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); };
  if (!finite(f) || !finite(df)) {
    throw std::overflow_error(std::string(what) + ": magnitude exceeds the double range");
  }
  return {f, df};
}

}  // namespace

BesselPair hankel(Wave kind, int l, cplx z) {
  return unscale(hankel_orders(kind, l, z), "spherical Hankel function");
}

BesselPair bessel_j(int l, cplx z) { return unscale(bessel_j_orders(l, z), "spherical Bessel j"); }

ScaledPair hankel_imag_axis(Wave kind, int l, double xu) {
  if (!(xu > 0.0)) throw std::domain_error("imaginary-axis argument must be positive");
  return hankel_orders(kind, l, cplx(0.0, xu)).scaled_pair();
}

cplx dhat(const BesselPair& g, cplx x) {
  if (x == cplx(0.0, 0.0)) throw std::domain_error("Dhat evaluated at zero argument");
  return g.df + g.f / x;
}

}  // namespace cavity
