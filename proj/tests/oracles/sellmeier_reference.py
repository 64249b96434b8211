"""Reference refractive indices for the frozen material tests.

Evaluates the published dispersion formulas directly (mpmath, 30 digits),
independently of the C++ Sellmeier machinery:

  BBO    Eimerl et al., J. Appl. Phys. 62, 1968 (1987), 0.22-1.06 um
  quartz Ghosh, Opt. Commun. 163, 95 (1999), 0.198-2.0531 um

Run: python3 tests/oracles/sellmeier_reference.py
"""
from mpmath import mp, mpf, sqrt

mp.dps = 30


def bbo(lam_nm):
    x = (mpf(lam_nm) / 1000) ** 2
    no = sqrt(mpf("2.7359") + mpf("0.01878") / (x - mpf("0.01822")) - mpf("0.01354") * x)
    ne = sqrt(mpf("2.3753") + mpf("0.01224") / (x - mpf("0.01667")) - mpf("0.01516") * x)
    return no, ne


def quartz(lam_nm):
    x = (mpf(lam_nm) / 1000) ** 2
    no = sqrt(mpf("1.28604141") + mpf("1.07044083") * x / (x - mpf("1.00585997e-2"))
              + mpf("1.10202242") * x / (x - 100))
    ne = sqrt(mpf("1.28851804") + mpf("1.09509924") * x / (x - mpf("1.02101864e-2"))
              + mpf("1.15662475") * x / (x - 100))
    return no, ne


if __name__ == "__main__":
    for lam in (395, 532, 790, 1000):
        no, ne = bbo(lam)
        print(f"BBO    {lam:5d} nm  n_o={mp.nstr(no, 10)}  n_e={mp.nstr(ne, 10)}")
    for lam in (395, 589.3, 790, 1550):
        no, ne = quartz(lam)
        print(f"quartz {lam:7} nm  n_o={mp.nstr(no, 10)}  n_e={mp.nstr(ne, 10)}")
