#pragma once

#include <complex>

#include "cavity/scaled.hpp"

namespace cavity {

// Time dependence exp(-i w t): h^(1) is the outgoing wave, h^(2) the ingoing one.
enum class Wave { outgoing, ingoing };

struct BesselPair {
  cplx f;   // value
  cplx df;  // derivative with respect to the argument
};

struct ScaledPair {
  Scaled f;
  Scaled df;
};

// f_{l-1}(z) and f_l(z) sharing one scale. Every function of the spherical
// Bessel family satisfies
//   f_l'  = f_{l-1} - (l+1)/z f_l
//   Dhat f = f_l' + f_l/z = f_{l-1} - l/z f_l,
// so the pair is all that the scattering module needs. f_{-1} is well defined
// (h^(1)_{-1} = e^{iz}/z, j_{-1} = cos z/z).
struct AdjacentOrders {
  int l = 0;
  cplx z;
  Scaled prev;  // f_{l-1}
  Scaled cur;   // f_l

  // f_{l-1}/f_l, safe when both factors are out of double range.
  cplx ratio() const { return (prev / cur).value(); }
  Scaled derivative() const { return prev - cur * Scaled(cplx(l + 1) / z); }
  Scaled dhat() const { return prev - cur * Scaled(cplx(l) / z); }
  ScaledPair scaled_pair() const { return {cur, derivative()}; }
};

// Orders above this are rejected with std::domain_error. Default 256.
int max_order();
void set_max_order(int l_max);

// Spherical Hankel orders l-1 and l. A purely imaginary argument with positive
// imaginary part goes through the modified-Bessel route in real arithmetic.
AdjacentOrders hankel_orders(Wave kind, int l, cplx z);
// Regular spherical Bessel j, orders l-1 and l.
AdjacentOrders bessel_j_orders(int l, cplx z);

// Unscaled value and derivative. Throws std::domain_error for z == 0 or l out
// of range, std::overflow_error if the value is not representable.
BesselPair hankel(Wave kind, int l, cplx z);
BesselPair bessel_j(int l, cplx z);

// h_l at z = i*xu, xu > 0, as mantissa * exp(offset) so that products of the
// growing and decaying solutions stay in range.
ScaledPair hankel_imag_axis(Wave kind, int l, double xu);

// Dhat g = g' + g/x = (x g)'/x.
cplx dhat(const BesselPair& g, cplx x);

namespace detail {
// Complex-arithmetic route regardless of the argument; kept callable so the
// imaginary-axis path can be cross-checked against it.
AdjacentOrders hankel_orders_complex(Wave kind, int l, cplx z);
AdjacentOrders bessel_j_orders_complex(int l, cplx z);
// Modified functions on the positive real axis: k_0 = e^{-x}/x (2/pi times the
// textbook normalisation) and i_0 = sinh x / x.
AdjacentOrders modified_k_orders(int l, double x);
AdjacentOrders modified_i_orders(int l, double x);
}  // namespace detail

}  // namespace cavity
