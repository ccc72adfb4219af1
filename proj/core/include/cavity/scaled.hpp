#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>

namespace cavity {

using cplx = std::complex<double>;

// Complex number held as mantissa * 2^bin_exp * exp(nat_exp).
//
// Renormalization only touches the integer binary exponent, which is exact, so
// long recurrences do not accumulate rounding in the scale. The natural-log part
// carries factors such as exp(-Im z) that are known analytically.
class Scaled {
 public:
  Scaled() = default;
  Scaled(cplx mantissa, double nat_exp = 0.0)  // NOLINT(implicit)
      : m_(mantissa), ne_(nat_exp) {
    normalize();
  }
  Scaled(double value) : Scaled(cplx(value, 0.0)) {}  // NOLINT(implicit)

  // mantissa * 2^bin_exp, exactly.
  static Scaled ldexp(cplx mantissa, std::int64_t bin_exp) {
    Scaled r(mantissa);
    if (!r.is_zero()) r.be_ += bin_exp;
    return r;
  }

  // exp(z) without forming it: the real part goes to the exponent.
  static Scaled exp(cplx z) { return Scaled(std::polar(1.0, z.imag()), z.real()); }

  const cplx& mantissa() const { return m_; }
  bool is_zero() const { return m_ == cplx(0.0, 0.0); }
  bool is_finite() const {
    return std::isfinite(m_.real()) && std::isfinite(m_.imag()) && std::isfinite(ne_);
  }

  // Natural logarithm of the scale factor: value() == mantissa() * exp(log_scale()).
  double log_scale() const { return be_ * kLn2 + ne_; }

  // log|value|; -inf for zero.
  double log_abs() const {
    if (is_zero()) return -INFINITY;
    return std::log(std::abs(m_)) + log_scale();
  }
  double arg() const { return std::arg(m_); }

  // Unscaled value; may overflow to inf or underflow to zero.
  cplx value() const { return value_at(0.0); }

  // Value expressed relative to exp(log_scale): value() == value_at(L) * exp(L).
  cplx value_at(double log_scale) const {
    if (is_zero()) return m_;
    const double total = this->log_scale() - log_scale;
    if (total > 720.0) {
      return cplx(m_.real() * HUGE_VAL, m_.imag() * HUGE_VAL);
    }
    if (total < -760.0) return {0.0, 0.0};
    // Split the target into whole powers of two and a small remainder.
    const double kb = std::nearbyint(log_scale / kLn2);
    const double rem = log_scale - kb * kLn2;
    const double shift = static_cast<double>(be_) - kb;
    if (shift > 3000.0 || shift < -3000.0) {
      // Only reachable when the natural part is huge and offsets the binary part.
      return m_ * std::exp(total);
    }
    const double f = std::exp(ne_ - rem);
    const int sh = static_cast<int>(shift);
    return cplx(std::ldexp(m_.real() * f, sh), std::ldexp(m_.imag() * f, sh));
  }

  Scaled operator-() const {
    Scaled r = *this;
    r.m_ = -r.m_;
    return r;
  }

  Scaled& operator*=(const Scaled& o) {
    m_ *= o.m_;
    be_ += o.be_;
    ne_ += o.ne_;
    normalize();
    return *this;
  }
  Scaled& operator/=(const Scaled& o) {
    m_ /= o.m_;
    be_ -= o.be_;
    ne_ -= o.ne_;
    normalize();
    return *this;
  }
  Scaled& operator+=(const Scaled& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) return *this = o;
    // Relative size o / this, in natural-log units.
    const double diff = (o.be_ - be_) * kLn2 + (o.ne_ - ne_);
    if (diff <= 0.0) {
      if (diff > -760.0) m_ += relative(o, *this);
    } else {
      if (diff < 760.0) {
        m_ = relative(*this, o) + o.m_;
      } else {
        m_ = o.m_;
      }
      be_ = o.be_;
      ne_ = o.ne_;
    }
    normalize();
    return *this;
  }
  Scaled& operator-=(const Scaled& o) { return *this += -o; }

  friend Scaled operator*(Scaled a, const Scaled& b) { return a *= b; }
  friend Scaled operator/(Scaled a, const Scaled& b) { return a /= b; }
  friend Scaled operator+(Scaled a, const Scaled& b) { return a += b; }
  friend Scaled operator-(Scaled a, const Scaled& b) { return a -= b; }

 private:
  static constexpr double kLn2 = 0.69314718055994530942;

  // Mantissa of a expressed in the scale of b.
  static cplx relative(const Scaled& a, const Scaled& b) {
    const double f = std::exp(a.ne_ - b.ne_);
    const auto shift = a.be_ - b.be_;
    if (shift < -2000) return {0.0, 0.0};
    if (shift > 2000) return a.m_ * std::exp((a.be_ - b.be_) * kLn2 + (a.ne_ - b.ne_));
    return cplx(std::ldexp(a.m_.real() * f, static_cast<int>(shift)),
                std::ldexp(a.m_.imag() * f, static_cast<int>(shift)));
  }

  void normalize() {
    const double big = std::max(std::abs(m_.real()), std::abs(m_.imag()));
    if (big == 0.0) {
      be_ = 0;
      ne_ = 0.0;
      return;
    }
    if (!std::isfinite(big)) return;
    // Fold whole powers of two out of the natural exponent so it stays small.
    if (std::abs(ne_) > 64.0 && std::abs(ne_) < 1e15) {
      const double k = std::trunc(ne_ / kLn2);
      be_ += static_cast<std::int64_t>(k);
      ne_ -= k * kLn2;
    }
    const int e = std::ilogb(big) + 1;
    if (e != 0) {
      m_ = cplx(std::ldexp(m_.real(), -e), std::ldexp(m_.imag(), -e));
      be_ += e;
    }
  }

  cplx m_{0.0, 0.0};
  std::int64_t be_ = 0;
  double ne_ = 0.0;
};

}  // namespace cavity
