"""High-precision reference values for phi_t(u), psi_t(u).

Integrates the Riccati system with mpmath's Taylor ODE solver at 30 digits,
independently of the closed forms in the library. Output is pasted into
tests/test_kernel.cpp.
"""
import mpmath as mp

mp.mp.dps = 30


def rates(kind, p, y):
    if kind == "GaussOU":
        lam, th, sig = p
        return sig**2 * y**2 / 2 + lam * th * y, -lam * y
    if kind == "DGam":
        lam, th, sig, ap, am, bp, bm = p
        F = sig**2 * y**2 / 2 + lam * th * y + lam * bp * y / (ap - y) - lam * bm * y / (am + y)
        return F, -lam * y
    if kind == "CIR":
        lam, th, eta = p
        return lam * th * y, -lam * y + 2 * eta**2 * y**2
    if kind == "CIRJump":
        lam, th, eta, a, b = p
        return lam * th * y + lam * b * y / (a - y), -lam * y + 2 * eta**2 * y**2
    raise ValueError(kind)


def solve(kind, p, t, u):
    f = mp.odefun(lambda s, z: list(rates(kind, p, z[1])), 0, [mp.mpf(0), mp.mpf(u)])
    phi, psi = f(t)
    return phi, psi


cases = [
    ("GaussOU", (0.3, 0.5, 0.4), 2.0, 1.7),
    ("DGam", (0.02, 0.5, 0.3, 12, 10, 50, 5), 7.5, 3.2),
    ("DGam", (0.02, 0, 0, 50, 5, 50, 10), 10.0, -4.0),
    ("CIR", (0.026, 0.65, 0.5), 5.0, 0.15),
    ("CIR", (0.4, 0.2, 0.3), 3.0, -2.5),
    ("CIRJump", (0.3, 0.6, 0.15, 8.0, 0.7), 4.0, 1.1),
    ("CIRJump", (0.5, 0.1, 0.4, 1.25, 2.0), 2.0, 0.3),
    ("CIRJump", (0.5, 0.1, 0.4, 1.5625, 2.0), 2.0, 0.3),  # alpha*c = 1
]
for kind, p, t, u in cases:
    phi, psi = solve(kind, p, t, u)
    print(kind, p, t, u, mp.nstr(phi, 17), mp.nstr(psi, 17))
