"""High-precision reference run for the figure3 command (Lorentzian host, R = c/omega_0).

u_l = (1/2pi) log|1 - s_b^TM(iu)| is evaluated from the literal Q-product form of the
TM wall amplitude at 120 significant digits, so the 1 - s_b cancellation at small u is
fully resolved. Output: tests/fixtures/figure3_golden.csv (l, u, u_l).
"""
import math
import os
from mpmath import mp, mpf, mpc, log, pi, nstr
from mp_bessel import wall_amplitude

mp.dps = 120

U_MIN, U_MAX, N_U, L_MAX = 1e-3, 10.0, 25, 8
OMEGA_P, OMEGA_0, GAMMA, RADIUS = 1.0, 1.0, 0.01, 1.0


def u_grid():
    # Same formula as the CLI's log grid, evaluated in binary64.
    ratio = U_MAX / U_MIN
    return [U_MIN * math.pow(ratio, i / (N_U - 1)) for i in range(N_U)]


def eps_imag(u):
    u = mpf(u)
    return 1 + mpf(OMEGA_P) ** 2 / (mpf(OMEGA_0) ** 2 + u * u + mpf(GAMMA) * u)


rows = []
for l in range(1, L_MAX + 1):
    for u in u_grid():
        s = wall_amplitude("TM", l, mpc(0, u), mpf(RADIUS), eps_imag(u))
        assert abs(s.imag) < mpf(10) ** -100
        ul = log(abs(1 - s)) / (2 * pi)
        rows.append((l, u, ul))

path = os.path.join(os.path.dirname(__file__), "..", "fixtures", "figure3_golden.csv")
with open(path, "w") as fh:
    fh.write("l,u_over_omega_ref,u_l_over_hbar\n")
    for l, u, ul in rows:
        fh.write("%d,%s,%s\n" % (l, repr(u), nstr(ul, 20, min_fixed=-30, max_fixed=30)))
print("wrote", os.path.normpath(path), len(rows), "rows")
