#!/usr/bin/env python3
"""Regenerates the high-precision reference constants frozen into the test
suite (tests/reference_values.hpp).

Uses mpmath at 50 digits. The C++ library never links against this; it is a
development-time tool only.
"""

import mpmath as mp

mp.mp.dps = 50


def s_matrix(beta, b):
    return (mp.sinh(beta) - 1j * mp.sin(2 * mp.pi * b)) / (
        mp.sinh(beta) + 1j * mp.sin(2 * mp.pi * b)
    )


def two_body_f(beta, b):
    """Eight-factor Barnes-G ratio over Gamma(1+z)Gamma(-z), z = i beta / 2 pi."""
    z = 1j * beta / (2 * mp.pi)
    bh = mp.mpf(1) / 2 - b
    num = [1 - b - z, 2 - b + z, 1 - bh - z, 2 - bh + z]
    den = [b - z, 1 + b + z, bh - z, 1 + bh + z]
    g = mp.mpf(1)
    for a in num:
        g *= mp.barnesg(a)
    for a in den:
        g /= mp.barnesg(a)
    return g / (mp.gamma(1 + z) * mp.gamma(-z))


def field_constant(b, g):
    integral = mp.quad(lambda t: t / mp.sin(t) if t != 0 else mp.mpf(1), [0, 2 * mp.pi * b])
    return (-1j / mp.sqrt(2 * mp.sin(mp.pi * b))) * mp.exp(integral / (2 * mp.pi)), integral


def coupling_g(b):
    return mp.sqrt(8 * mp.pi * b / (mp.mpf(1) / 2 - b))


def k2_ell_exp(b1, b2, b):
    """Brute-force 4-term K-transform of p(beta|l) = exp(sum l_a beta_a), n = 2."""
    s2 = mp.sin(2 * mp.pi * b)
    total = mp.mpf(0)
    for l1 in (0, 1):
        for l2 in (0, 1):
            bracket = 1 - 1j * (l1 - l2) * s2 / mp.sinh(b1 - b2)
            p = mp.exp(l1 * b1 + l2 * b2)
            total += (-1) ** (l1 + l2) * bracket * p
    return total


def cfmt(v, name):
    v = mp.mpc(v)
    return f"inline constexpr std::complex<double> {name}{{{mp.nstr(v.real, 17)}, {mp.nstr(v.imag, 17)}}};"


def rfmt(v, name):
    return f"inline constexpr double {name} = {mp.nstr(mp.mpf(v), 17)};"


lines = [
    "#pragma once",
    "",
    "// High-precision reference values, regenerated by tools/gen_reference_values.py.",
    "// Do not edit by hand.",
    "",
    "#include <complex>",
    "",
    "namespace sgff::ref {",
    "",
]

# --- log-gamma -------------------------------------------------------------
lines.append(cfmt(mp.loggamma(mp.mpc(4, 3)), "log_gamma_4_3i"))
lines.append(cfmt(mp.loggamma(mp.mpc(-2.5, 1.5)), "log_gamma_m2p5_1p5i"))

# --- Barnes G --------------------------------------------------------------
lines.append(rfmt(mp.log(mp.barnesg(mp.mpf(1) / 2)), "log_barnes_g_half"))
lines.append(cfmt(mp.log(mp.barnesg(mp.mpc(2.5, 1.5))), "log_barnes_g_2p5_1p5i"))
lines.append(cfmt(mp.barnesg(mp.mpc(-0.75, 0.5)), "barnes_g_m0p75_0p5i"))

# --- two-body F ------------------------------------------------------------
for btag, b in (("0p10", mp.mpf("0.10")), ("0p25", mp.mpf("0.25")), ("0p40", mp.mpf("0.40"))):
    lines.append(cfmt(two_body_f(1j * mp.pi, b), f"two_body_f_ipi_b{btag}"))
lines.append(cfmt(two_body_f(mp.mpc(0.8, 0.6), mp.mpf("0.25")), "two_body_f_0p8_0p6i_b0p25"))
lines.append(cfmt(two_body_f(mp.mpf("1.7"), mp.mpf("0.25")), "two_body_f_1p7_b0p25"))

# --- field p-function constant --------------------------------------------
b = mp.mpf("0.25")
g = coupling_g(b)
c, integral = field_constant(b, g)
lines.append(rfmt(integral, "tsin_integral_b0p25"))  # equals 2*Catalan for b = 1/4
lines.append(cfmt(c, "field_c_b0p25"))
ff1 = 2 * c * (2j * mp.pi * b / g)
lines.append(cfmt(ff1, "field_ff1_b0p25"))
lines.append(rfmt(abs(ff1) ** 2, "field_ff1_sq_b0p25"))

# --- K-transform, n = 2, ell-coupled synthetic -----------------------------
lines.append(cfmt(k2_ell_exp(mp.mpf("0.3"), mp.mpf("-0.7"), b), "k2_ell_exp_b0p25"))

# --- Bessel K0 (two-point shell oracle) ------------------------------------
for tag, x in (("1", 1), ("2", 2), ("4", 4)):
    lines.append(rfmt(mp.besselk(0, x), f"bessel_k0_{tag}"))

lines += ["", "}  // namespace sgff::ref", ""]

print("\n".join(lines))
