"""Reference integrals for channel_energy and atom_shift (mpmath tanh-sinh, 30 digits).

The integrand log|1 - s_b s_c| is formed from the standing-wave combination
1 - s_b = 2 M[j] / M[h^(2)], where M[f] = k_V h_M Dhat f_V - eta k_M f_V Dhat h_M,
so it stays accurate as u -> 0. The script checks that form against the literal
Q-product form at a few points before integrating.
"""
from mpmath import mp, mpf, mpc, sqrt, log, pi, quad, nstr
from mp_bessel import hankel, sph_j, dhat, wall_amplitude

mp.dps = 40


def lorentz_eps(u):
    return 1 + 1 / (1 + u * u + mpf("0.01") * u)


def terms(pol, l, u, radius, eps):
    """Return (M[h1], M[h2], M[j]) on the imaginary axis; eps=None means PEC."""
    omega = mpc(0, u)
    xv = omega * radius

    def vac(fn):
        return fn(xv, 0), fn(xv, 1)

    funcs = {
        "o": lambda z, d: hankel(1, l, z, d),
        "i": lambda z, d: hankel(2, l, z, d),
        "j": lambda z, d: sph_j(l, z, d),
    }
    if eps is None:
        out = []
        for key in "oij":
            f, df = vac(funcs[key])
            out.append(f if pol == "TE" else dhat(f, df, xv))
        return out
    km = omega * sqrt(eps)
    xm = km * radius
    hm, dhm = hankel(1, l, xm), hankel(1, l, xm, 1)
    eta = 1 if pol == "TE" else 1 / eps
    out = []
    for key in "oij":
        f, df = vac(funcs[key])
        out.append(omega * hm * dhat(f, df, xv) - eta * km * f * dhat(hm, dhm, xm))
    return out


def one_minus_sb(pol, l, u, radius, eps):
    # Leading small-x orders cancel in the TE terms; carry ~2 log10(1/u) extra digits.
    extra = int(2 * max(0, -mp.log10(u))) + 10
    with mp.workdps(40 + extra):
        mo, mi, mj = terms(pol, l, mpf(u), mpf(radius), lorentz_eps(mpf(u)) if eps is not None else None)
        return 2 * mj / mi


# The besselk route for h^(1)(ix) must agree with j + i y where the latter is still accurate.
for l in (0, 1, 4):
    for d in (0, 1):
        z = mpc(0, "1.3")
        a = hankel(1, l, z, d)
        b = sph_j(l, z, d) + 1j * __import__("mp_bessel").sph_y(l, z, d)
        assert abs(a - b) < mpf(10) ** -30 * abs(b), (l, d, a, b)

# Consistency of the two algebraic forms.
for u in (mpf("0.3"), mpf(2)):
    a = one_minus_sb("TM", 1, u, mpf(1), lorentz_eps(u))
    b = 1 - wall_amplitude("TM", 1, mpc(0, u), mpf(1), lorentz_eps(u))
    assert abs(a - b) < mpf(10) ** -25, (a, b)

# Channel energy, l = 1 TM and l = 2 TE, Lorentzian host (omega_p = omega_0 = 1, gamma = 0.01), R = 1.
results = {}
for pol, l in (("TM", 1), ("TE", 2), ("TM", 4)):
    f = lambda u: log(abs(one_minus_sb(pol, l, u, mpf(1), lorentz_eps(u))))
    # 1 - s_b is real on the imaginary axis; its zeros are log singularities
    # and must be breakpoints.
    g = lambda u: mp.re(one_minus_sb(pol, l, u, mpf(1), lorentz_eps(u)))
    grid = [mpf(10) ** (mpf(k) / 20 - 2) for k in range(0, 101)]
    roots = []
    for a, b in zip(grid, grid[1:]):
        if g(a) * g(b) < 0:
            # Bisection: the sign change may be a zero or a pole of 1 - s_b.
            for _ in range(140):
                m = (a + b) / 2
                if g(a) * g(m) <= 0:
                    b = m
                else:
                    a = m
            roots.append((a + b) / 2)
    pts = sorted(set([mpf(0), mpf("0.5"), mpf(2), mpf(8), mpf(40), mpf(200)] + roots))
    print(pol, l, "breakpoints", [nstr(r, 12) for r in roots])
    integral = quad(f, pts)
    results["channel_%s_l%d" % (pol.lower(), l)] = (2 * l + 1) * integral / (2 * pi)

# Atom shift, PEC wall, alpha(iu) = alpha0/(1+u^2), R = 0.05, alpha0 = 1e-6.
R, A0 = mpf("0.05"), mpf("1e-6")


def shift_integrand(u):
    with mp.workdps(40 + int(2 * max(0, -mp.log10(u))) + 10):
        return _shift_integrand(mpf(u))


def _shift_integrand(u):
    mo, mi, mj = terms("TM", 1, u, R, None)
    alpha = A0 / (1 + u * u)
    q = u ** 3 * alpha
    sc = (1 + 2 * q / 3) / (1 - 2 * q / 3)
    # (1 - s_b s_c)/(1 - s_b) = 1 + (s_c - 1) M[h1] / (2 M[j])
    return log(abs(1 + (sc - 1) * mo / (2 * mj)))


results["atom_shift_pec_R005_a1e-6"] = 3 * quad(shift_integrand, [0, 1, 20, 200, 4000]) / (2 * pi)

import os

lines = [
    "// Generated by tests/oracles/energy_reference.py (mpmath tanh-sinh). Do not edit.",
    "#pragma once",
    "",
    "namespace reference {",
    "// Lorentzian host omega_p = omega_0 = 1, gamma = 0.01, R = 1; includes the 2l+1 factor, units hbar*omega_ref.",
]
names = {
    "channel_tm_l1": "channel_energy_tm_l1",
    "channel_te_l2": "channel_energy_te_l2",
    "channel_tm_l4": "channel_energy_tm_l4",
    "atom_shift_pec_R005_a1e-6": "atom_shift_pec_r005_alpha1em6",
}
for k, v in results.items():
    print("%s = %s" % (k, nstr(v, 20)))
    if k.startswith("atom"):
        lines.append("// PEC wall, alpha0 = 1e-6, omega_0 = 1, R = 0.05.")
    lines.append("inline constexpr double %s = %s;" % (names[k], nstr(v, 20)))
lines.append("} // namespace reference")
path = os.path.join(os.path.dirname(__file__), "..", "unit", "energy_reference_values.hpp")
with open(path, "w") as fh:
    fh.write("\n".join(lines) + "\n")
