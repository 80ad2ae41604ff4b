#!/usr/bin/env python3
"""Meijer-G kernel reference values via high-precision Mellin-Barnes quadrature.

The pdf kernel is G^{M,0}_{0,M}[x | -; m_1..m_M] and the cdf kernel is
G^{M,1}_{1,M+1}[x | 1; m_1..m_M, 0].  Both are evaluated here as contour
integrals along a vertical line, independent of any series expansion.
Cross-checked against mpmath.meijerg where the latter converges.
"""

import mpmath as mp

mp.mp.dps = 50


def pdf_kernel_mb(x, shapes, c=None):
    x = mp.mpf(x)
    if c is None:
        c = 0 if min(shapes) > 0.1 else -min(shapes) / 2 + 0.05

    def integrand(t):
        s = mp.mpc(c, t)
        w = mp.mpf(1)
        g = sum(mp.loggamma(m + s) for m in shapes)
        return (mp.e ** (g - s * mp.log(x))).real * w

    val = mp.quad(integrand, [0, 5, 20, 80, mp.inf]) / mp.pi
    return val


def cdf_kernel_mb(x, shapes):
    x = mp.mpf(x)
    if x == 0:
        return mp.mpf(0)
    c = -min(shapes) / 2

    def integrand(t):
        s = mp.mpc(c, t)
        g = sum(mp.loggamma(m + s) for m in shapes)
        return (-(mp.e ** (g - s * mp.log(x))) / s).real

    return mp.quad(integrand, [0, 5, 20, 80, mp.inf]) / mp.pi


def main():
    cases = [
        (1.0, [2.0]),
        (1.0, [1.0, 1.0]),
        (0.3, [0.5, 1.7]),
        (1.0, [0.5, 1.7]),
        (3.0, [0.5, 1.7]),
        (10.0, [0.5, 1.7]),
        (0.7, [0.5, 1.0, 2.5]),
        (2.0, [0.5, 1.0, 2.5]),
        (8.0, [0.5, 1.0, 2.5]),
        (1.5, [0.5, 1.0, 1.7, 2.5]),
        (6.0, [0.5, 1.0, 1.7, 2.5]),
        (25.0, [1.3, 2.6]),
        (0.05, [0.5, 0.5]),
        (2.0, [2.5, 2.5]),
        (4.0, [1.0, 1.0, 1.0]),
        (40.0, [0.5, 1.0, 2.5]),
    ]
    print("// (x, shapes, pdf_kernel, cdf_kernel)  [Mellin-Barnes, 50 dps]")
    for x, shapes in cases:
        p = pdf_kernel_mb(x, shapes)
        cdf = cdf_kernel_mb(x, shapes)
        # cross-check the pdf against mpmath.meijerg for distinct shapes
        distinct = all(
            abs(a - b) % 1 > 1e-9 and abs(abs(a - b) % 1 - 1) > 1e-9
            for i, a in enumerate(shapes)
            for b in shapes[i + 1 :]
        )
        tag = ""
        if distinct or len(shapes) == 1:
            ref = mp.meijerg([[], []], [list(shapes), []], mp.mpf(x))
            rel = abs(p - ref) / abs(ref)
            tag = "  // meijerg rel diff %.1e" % rel
        print(
            "    (%r, &%r[..], %s, %s),%s"
            % (x, shapes, mp.nstr(p, 22), mp.nstr(cdf, 22), tag)
        )

    # sanity: M=1 closed forms
    x, m = mp.mpf(3), mp.mpf(1.7)
    print("// M=1 pdf identity check:", mp.nstr(pdf_kernel_mb(3, [1.7]) - x**m * mp.e**-x, 8))
    print("// M=1 cdf identity check:",
          mp.nstr(cdf_kernel_mb(3, [1.7]) - mp.gammainc(m, 0, x), 8))
    # saturation: cdf -> prod Gamma(m)
    big = cdf_kernel_mb(2000, [0.5, 1.7])
    print("// cdf saturation [0.5,1.7] at x=2000:", mp.nstr(big, 22),
          " prodGamma:", mp.nstr(mp.gamma(0.5) * mp.gamma(1.7), 22))


if __name__ == "__main__":
    main()
