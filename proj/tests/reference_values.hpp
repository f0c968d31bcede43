#pragma once

// High-precision reference values, regenerated by tools/gen_reference_values.py.
// Do not edit by hand.

#include <complex>

namespace sgff::ref {

inline constexpr std::complex<double> log_gamma_4_3i{0.63480880458611736, 4.070588430111645};
inline constexpr std::complex<double> log_gamma_m2p5_1p5i{-3.7175134511917918, -7.7130655258341925};
inline constexpr double log_barnes_g_half = -0.50543305448969538;
inline constexpr std::complex<double> log_barnes_g_2p5_1p5i{-0.61687624616972977, -0.36903589411601945};
inline constexpr std::complex<double> barnes_g_m0p75_0p5i{0.13230154601255535, -0.52521192197193748};
inline constexpr std::complex<double> two_body_f_ipi_b0p10{0.85698947418322221, 0.0};
inline constexpr std::complex<double> two_body_f_ipi_b0p25{0.78934782078347506, 0.0};
inline constexpr std::complex<double> two_body_f_ipi_b0p40{0.85698947418322221, 0.0};
inline constexpr std::complex<double> two_body_f_0p8_0p6i_b0p25{0.63626785609066197, -0.27331179072803573};
inline constexpr std::complex<double> two_body_f_1p7_b0p25{1.0268674187481271, -0.3881369156512847};
inline constexpr double tsin_integral_b0p25 = 1.831931188354438;
inline constexpr std::complex<double> field_c_b0p25{0.0, -1.1255525930594807};
inline constexpr std::complex<double> field_ff1_b0p25{0.70533548858678368, 0.0};
inline constexpr double field_ff1_sq_b0p25 = 0.49749815145995685;
inline constexpr std::complex<double> k2_ell_exp_b0p25{-0.17612406533177332, 0.72606589271659403};
inline constexpr double bessel_k0_1 = 0.42102443824070833;
inline constexpr double bessel_k0_2 = 0.11389387274953344;
inline constexpr double bessel_k0_4 = 0.011159676085853024;

}  // namespace sgff::ref

