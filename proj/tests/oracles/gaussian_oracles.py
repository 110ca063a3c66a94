"""Reference values for the unit tests, computed without the library.

phi(x) = sqrt(N) (pi w^2)^(-3/4) exp(-|x|^2 / (2 w^2)), so |phi|^2 is a
normal density of per-axis variance w^2/2 scaled by N. Pair separations of
two independent draws then have per-axis variance w^2.
"""
import numpy as np
from mpmath import mp, gamma, mpf, sqrt, pi

mp.dps = 30


def riesz_pair_mean(theta, w):
    # E |Z|^-theta for Z ~ N(0, w^2 I_3)
    return w ** (-theta) * mpf(2) ** (-theta / 2) * gamma((3 - theta) / 2) / gamma(mpf(3) / 2)


def massless_kinetic(w):
    # N * E|xi| with |phi_hat|^2 ~ exp(-w^2 xi^2): per-axis variance 1/(2 w^2)
    return 2 / (sqrt(pi) * w)


def lattice_inverse_kinetic(n, L, w):
    # (1/L^3) sum_{k != 0} |phi_hat(k)|^2 / |k|, continuum transform of phi
    q = 2 * np.pi / L * np.fft.fftfreq(n, 1.0 / n)
    kx, ky, kz = np.meshgrid(q, q, q, indexing="ij")
    k2 = kx**2 + ky**2 + kz**2
    phat2 = 8 * np.pi**1.5 * w**3 * np.exp(-w**2 * k2)
    k = np.sqrt(k2)
    k[0, 0, 0] = 1.0
    terms = phat2 / k
    terms[0, 0, 0] = 0.0
    return terms.sum() / L**3


if __name__ == "__main__":
    w = mpf(1)
    print("riesz_constant(1)      ", mp.nstr(4 * pi, 17))
    t = mpf("0.5")
    print("riesz_constant(0.5)    ", mp.nstr(2 ** (3 - t) * pi ** 1.5 * gamma((3 - t) / 2) / gamma(t / 2), 17))
    print("massless_kinetic w=1   ", mp.nstr(massless_kinetic(w), 17))
    print("coulomb_quadruple w=1  ", mp.nstr(riesz_pair_mean(mpf(1), w), 17))
    print("riesz_quadruple .5 w=1 ", mp.nstr(riesz_pair_mean(t, w), 17))
    print("inv_kinetic n32 L16 w1 ", repr(lattice_inverse_kinetic(32, 16.0, 1.0)))
    # E for m=1, beta=0.1, alpha=0.5, N=1, w=1 needs sqrt(k^2+1):
    n, L = 32, 16.0
    q = 2 * np.pi / L * np.fft.fftfreq(n, 1.0 / n)
    kx, ky, kz = np.meshgrid(q, q, q, indexing="ij")
    k2 = kx**2 + ky**2 + kz**2
    phat2 = 8 * np.pi**1.5 * np.exp(-k2)
    print("rel_kinetic m1 n32 L16 ", repr((phat2 * np.sqrt(k2 + 1)).sum() / L**3))
    print("massless lattice n32   ", repr((phat2 * np.sqrt(k2)).sum() / L**3))
