"""Arbitrary-precision spherical Bessel/Hankel helpers used to generate frozen test values.

Everything here goes through mpmath's half-integer-order cylinder functions, which is
independent of the recurrence/continued-fraction code in the library.
"""
from mpmath import mp, mpf, mpc, besselj, bessely, sqrt, pi

mp.dps = 60


def _pref(z):
    return sqrt(pi / (2 * z))


def sph_j(l, z, derivative=0):
    nu = l + mpf(1) / 2
    if derivative == 0:
        return _pref(z) * besselj(nu, z)
    return _pref(z) * (besselj(nu, z, derivative=1) - besselj(nu, z) / (2 * z))


def sph_y(l, z, derivative=0):
    nu = l + mpf(1) / 2
    if derivative == 0:
        return _pref(z) * bessely(nu, z)
    return _pref(z) * (bessely(nu, z, derivative=1) - bessely(nu, z) / (2 * z))


def _sph_k(l, x, derivative=0):
    """Modified spherical k_l(x) = sqrt(2/(pi x)) K_{l+1/2}(x), so k_0 = e^{-x}/x."""
    from mpmath import besselk
    nu = l + mpf(1) / 2
    pref = sqrt(2 / (pi * x))
    if derivative == 0:
        return pref * besselk(nu, x)
    dk = -besselk(nu - 1, x) - nu / x * besselk(nu, x)
    return pref * (dk - besselk(nu, x) / (2 * x))


def hankel(kind, l, z, derivative=0):
    """kind 1 = outgoing h^(1) = j + i y, kind 2 = ingoing h^(2) = j - i y."""
    z = mpc(z)
    if kind == 1 and z.real == 0 and z.imag > 0:
        # j + i y cancels catastrophically here; h^(1)(ix) = -i^{-l} k_l(x).
        x = z.imag
        phase = mpc(0, 1) ** (-l)
        if derivative == 0:
            return -phase * _sph_k(l, x)
        return mpc(0, 1) * phase * _sph_k(l, x, 1)
    j = sph_j(l, z, derivative)
    y = sph_y(l, z, derivative)
    return j + 1j * y if kind == 1 else j - 1j * y


def dhat(f, df, z):
    return df + f / z


def wall_amplitude(pol, l, omega, radius, eps):
    """Wall amplitude built literally from the Q products (TE: eta=1, TM: eta=1/eps)."""
    kv = omega
    km = omega * sqrt(eps)
    xv, xm = kv * radius, km * radius

    def q(a_is_medium, d, ap_is_medium, dp):
        ka = km if a_is_medium else kv
        kap = km if ap_is_medium else kv
        f = hankel(d, l, ka * radius)
        g = hankel(dp, l, kap * radius)
        dg = hankel(dp, l, kap * radius, 1)
        return kap * f * dhat(g, dg, kap * radius)

    eta = 1 if pol == "TE" else 1 / eps
    num = q(True, 1, False, 1) - q(False, 1, True, 1) * eta
    den = q(True, 1, False, 2) - q(False, 2, True, 1) * eta
    return -num / den


def split(z):
    """Return (mantissa, exponent10) with z = mantissa * 10**exponent10."""
    if z == 0:
        return mpc(0), 0
    e = int(mp.floor(mp.log10(abs(z))))
    return z / mpf(10) ** e, e
