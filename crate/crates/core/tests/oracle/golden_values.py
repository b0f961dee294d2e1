"""Independent high-precision oracle for the frozen values in tests/golden.rs.

Frequencies are first rounded to binary64 exactly as the Rust code forms them,
then every further operation runs in 50-digit mpmath arithmetic.

    python3 golden_values.py
"""
import mpmath as mp

mp.mp.dps = 50
C = mp.mpf(299792458)


def chi(omega, a, w1, w2, om1, sep, gamma):
    d1 = mp.mpf(omega) - mp.mpf(om1)
    d2 = d1 + mp.mpf(sep)
    return a * (w1**2 / (d1 + 1j * gamma) + w2**2 / (d2 + 1j * gamma))


def center_slope(a, w, sep, gamma):
    # d/dw of Re chi / 2 at the midpoint, equal Rabi frequencies
    half = mp.mpf(sep) / 2
    return a * w**2 * (gamma**2 - half**2) / (half**2 + gamma**2) ** 2


def second_derivative(x, a, w, sep, gamma):
    # n'' at offset x from the midpoint, equal Rabi frequencies
    half = mp.mpf(sep) / 2

    def g2(d):
        return 2 * d * (d * d - 3 * gamma**2) / (d * d + gamma**2) ** 3

    return a * w**2 / 2 * (g2(x - half) + g2(x + half))


def golden_small_set():
    two_pi = 2 * mp.pi
    a = mp.mpf("1e-9")
    w = float(2 * mp.pi * 1e6)
    sep = float(2 * mp.pi * 4e6)
    gamma = float(2 * mp.pi * 5e5)
    om1 = 2.43e15
    omega = om1 - sep / 4.0  # binary64, as in the Rust test
    x = chi(omega, a, mp.mpf(w), mp.mpf(w), om1, sep, mp.mpf(gamma))
    print("small set: Omega", repr(w), "Delta", repr(sep), "Gamma", repr(gamma))
    print("chi(w1 - Delta/4) re =", mp.nstr(x.real, 20), " im =", mp.nstr(x.imag, 20))
    print("n(w1 - Delta/4)      =", mp.nstr(1 + x.real / 2, 20))
    xg = chi(om1, a, mp.mpf(w), mp.mpf(w), om1, sep, mp.mpf(gamma))
    print("gain(w1)             =", mp.nstr(-(mp.mpf(om1) / C) * xg.imag, 20))


def golden_default_tuning():
    a = mp.mpf("1e-9")
    w = mp.mpf("1.730189e9")
    gamma = mp.mpf("1e12")
    target = mp.mpf("-3.1e-16")
    # dense pre-tabulated slope-vs-separation grid, log spaced over [2.01, 1000] Gamma
    n = 200000
    lo, hi = mp.log(2.01 * gamma), mp.log(1000 * gamma)
    grid = [mp.e ** (lo + (hi - lo) * k / n) for k in range(n + 1)]
    start = mp.mpf("4.8e12")
    best = None
    prev = center_slope(a, w, grid[0], gamma) - target
    for k in range(1, n + 1):
        cur = center_slope(a, w, grid[k], gamma) - target
        if prev * cur <= 0:
            dist = abs(mp.log(grid[k]) - mp.log(start))
            if best is None or dist < best[0]:
                best = (dist, grid[k - 1], grid[k])
        prev = cur
    _, l, h = best
    for _ in range(200):
        m = (l + h) / 2
        if (center_slope(a, w, l, gamma) - target) * (center_slope(a, w, m, gamma) - target) <= 0:
            h = m
        else:
            l = m
    sep = (l + h) / 2
    print("tuned separation     =", mp.nstr(sep, 20))
    # dense band maximum, 1e5 points over +/- pi * 1e6 rad/s
    npts = 100000
    half = mp.pi * mp.mpf(1e6)
    best = 0
    for k in range(npts + 1):
        x = -half + 2 * half * k / npts
        v = abs(second_derivative(x, a, w, sep, gamma))
        if v > best:
            best = v
    print("band |n''| (1 MHz)   =", mp.nstr(best, 20))


if __name__ == "__main__":
    golden_small_set()
    golden_default_tuning()
