"""Regenerates the frozen noise-averaged Bessel table used by test_theory.cpp.

Value: (1/L) * integral over d in [-L/2, L/2] of J_n(K (1 + d)), by mpmath quadrature.
"""
import mpmath

mpmath.mp.dps = 30

for n in [1, 2, 3]:
    for K in ["0.5", "2", "5", "23.7"]:
        for L in ["0.5", "1", "2"]:
            Kv, Lv = mpmath.mpf(K), mpmath.mpf(L)
            v = mpmath.quad(lambda d: mpmath.besselj(n, Kv * (1 + d)), [-Lv / 2, 0, Lv / 2]) / Lv
            print(f"    {{{n}, {K}, {L}, {mpmath.nstr(v, 20, min_fixed=0, max_fixed=0)}}},")
