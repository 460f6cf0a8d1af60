#!/usr/bin/env python3
"""Independent reference values frozen into the C++ tests.

Run: python3 tools/oracle_values.py
Needs mpmath and numpy. Nothing here shares code with the C++ library.
"""

import mpmath as mp
import numpy as np

mp.mp.dps = 30


def douglas_weight(n, s):
    # integral over [0, 2 pi] of |e^{int} - 1|^2 / |e^{it} - 1|^{1+2s}
    f = lambda t: (2 * mp.sin(n * t / 2)) ** 2 / (2 * mp.sin(t / 2)) ** (1 + 2 * s)
    pts = [mp.pi * k / max(1, n) for k in range(0, max(1, n) + 1)]
    return 2 * mp.quad(f, pts)


def disk_energy_defect(n, s):
    # integral over the unit disk of |grad z^n|^2 (1 - |z|^2)^{1-2s}
    return 2 * mp.pi * n * n * mp.beta(n, 2 - 2 * s)


def disk_energy_distance(n, s):
    # same with weight (1 - |z|)^{1-2s}
    q = 1 - 2 * s
    return 4 * mp.pi * n * n * mp.beta(2 * n, q + 1)


def exterior_energy_distance(n, s):
    q = 1 - 2 * s
    return 4 * mp.pi * n * n * mp.beta(2 * n - q, q + 1)


def centered_disk_a2(beta):
    # disk centered on a straight line, weight |y|^beta
    m = lambda b: 2 / mp.pi * mp.beta((b + 1) / 2, mp.mpf(3) / 2)
    return m(beta) * m(-beta)


def ellipse_operator_norm_l2(a, b, N):
    """Largest singular value of the mean-free Cauchy principal value operator on L2(ds),
    discretized in the angle parameter (not arclength)."""
    t = 2 * np.pi * np.arange(N) / N
    z = a * np.cos(t) + 1j * b * np.sin(t)
    dz = -a * np.sin(t) + 1j * b * np.cos(t)
    h = 2 * np.pi / N
    k = np.fft.fftfreq(N, 1.0 / N)
    k[N // 2] = 0
    D = np.real(np.fft.ifft(1j * k[:, None] * np.fft.fft(np.eye(N), axis=0), axis=0))
    diff = z[None, :] - z[:, None]
    np.fill_diagonal(diff, 1.0)
    K = dz[None, :] * h / diff / (2j * np.pi)
    np.fill_diagonal(K, 0.0)
    T = K - np.diag(K.sum(axis=1)) + 0.5 * np.eye(N)
    # diagonal limit of (f(zeta) - f(z)) / (zeta - z) dzeta, with f' by spectral differentiation
    T += (h / (2j * np.pi)) * D
    w = np.abs(dz) * h
    P = np.eye(N) - np.outer(np.ones(N), w) / w.sum()
    A = np.diag(np.sqrt(w)) @ P @ T @ P @ np.diag(1 / np.sqrt(w))
    Q = np.eye(N) - np.outer(np.sqrt(w), np.sqrt(w)) / w.sum()
    return np.linalg.svd(Q @ A @ Q, compute_uv=False)[0]


def main():
    print("douglas W(n,s), 2 pi W, disk energies")
    for n in (1, 2, 3, 5):
        for s in (0.25, 0.5, 0.75):
            s_ = mp.mpf(s)
            W = douglas_weight(n, s_)
            print(f"  n={n} s={s}: W={mp.nstr(W, 17)} 2piW={mp.nstr(2 * mp.pi * W, 17)} "
                  f"defect={mp.nstr(disk_energy_defect(n, s_), 17)} "
                  f"dist_i={mp.nstr(disk_energy_distance(n, s_), 17)} "
                  f"dist_e={mp.nstr(exterior_energy_distance(n, s_), 17)}")
    print("centered-disk A2 for |y|^beta")
    for beta in (0.5, -0.5, 0.0):
        print(f"  beta={beta}: {mp.nstr(centered_disk_a2(mp.mpf(beta)), 17)}")
    print("minkowski content of the unit circle: t<=1 ->", mp.nstr(4 * mp.pi, 17), " t=2 ->", mp.nstr(9 * mp.pi / 2, 17))
    print("koch box-counting dimension:", mp.nstr(mp.log(4) / mp.log(3), 17))
    for N in (256, 512):
        print(f"ellipse(2,1) L2 operator norm, angle grid N={N}: {ellipse_operator_norm_l2(2.0, 1.0, N):.12f}")


if __name__ == "__main__":
    main()
