//! Scalar numerics shared across the crate.
//!
//! Transcendentals are routed through `libm` so the crate stays `no_std`;
//! the error function is implemented here directly (rational approximations
//! in four ranges) because the Gaussian tail probabilities needed by the
//! likelihood-based interval loss must stay accurate far into the tails,
//! where a naive `0.5 * (1 + erf)` loses all precision.

/// Natural exponential.
#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

/// Natural logarithm.
#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

/// `ln(1 + x)` accurate near zero.
#[inline]
pub fn ln_1p(x: f64) -> f64 {
    libm::log1p(x)
}

/// Square root.
#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

/// Largest integer value not above `x`.
#[inline]
pub fn floor(x: f64) -> f64 {
    libm::floor(x)
}

/// `ln(1 + exp(t))`, computed without overflow for large `|t|`.
///
/// For `t > 0` the identity `ln(1 + e^t) = t + ln(1 + e^-t)` keeps the
/// exponential argument non-positive.
#[inline]
pub fn softplus(t: f64) -> f64 {
    if t > 0.0 {
        t + ln_1p(exp(-t))
    } else {
        ln_1p(exp(t))
    }
}

/// Logistic sigmoid `1 / (1 + exp(-t))`, overflow-free.
#[inline]
pub fn sigmoid(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + exp(-t))
    } else {
        let e = exp(t);
        e / (1.0 + e)
    }
}

/// Sign with `sign(0) = 0`; used as the subgradient of `|.|` at the kink.
#[inline]
pub fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// `1 / sqrt(2 pi)`.
pub const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Standard normal density.
#[inline]
pub fn normal_pdf(x: f64) -> f64 {
    FRAC_1_SQRT_2PI * exp(-0.5 * x * x)
}

/// Standard normal distribution function `Phi(x)`.
///
/// Evaluated as `erfc(-x / sqrt(2)) / 2` so that deep left tails keep full
/// relative accuracy instead of cancelling against 1.
#[inline]
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / core::f64::consts::SQRT_2)
}

// The error-function implementation below is based on the FreeBSD msun
// library as distributed with the Go standard library (erf.go).
//
// ====================================================
// Copyright (C) 1993 by Sun Microsystems, Inc. All rights reserved.
//
// Developed at SunPro, a Sun Microsystems, Inc. business.
// Permission to use, copy, modify, and distribute this
// software is freely granted, provided that this notice
// is preserved.
// ====================================================

const ERX: f64 = 8.45062911510467529297e-01; // 0x3FEB0AC160000000

// Coefficients for approximation to erf in |x| <= 0.84375.
const EFX: f64 = 1.28379167095512586316e-01; // 0x3FC06EBA8214DB69
const EFX8: f64 = 1.02703333676410069053e+00; // 0x3FF06EBA8214DB69
const PP0: f64 = 1.28379167095512558561e-01; // 0x3FC06EBA8214DB68
const PP1: f64 = -3.25042107247001499370e-01; // 0xBFD4CD7D691CB913
const PP2: f64 = -2.84817495755985104766e-02; // 0xBF9D2A51DBD7194F
const PP3: f64 = -5.77027029648944159157e-03; // 0xBF77A291236668E4
const PP4: f64 = -2.37630166566501626084e-05; // 0xBEF8EAD6120016AC
const QQ1: f64 = 3.97917223959155352819e-01; // 0x3FD97779CDDADC09
const QQ2: f64 = 6.50222499887672944485e-02; // 0x3FB0A54C5536CEBA
const QQ3: f64 = 5.08130628187576562776e-03; // 0x3F74D022C4D36B0F
const QQ4: f64 = 1.32494738004321644526e-04; // 0x3F215DC9221C1A10
const QQ5: f64 = -3.96022827877536812320e-06; // 0xBED09C4342A26120

// Coefficients for approximation to erf in 0.84375 <= |x| <= 1.25.
const PA0: f64 = -2.36211856075265944077e-03; // 0xBF6359B8BEF77538
const PA1: f64 = 4.14856118683748331666e-01; // 0x3FDA8D00AD92B34D
const PA2: f64 = -3.72207876035701323847e-01; // 0xBFD7D240FBB8C3F1
const PA3: f64 = 3.18346619901161753674e-01; // 0x3FD45FCA805120E4
const PA4: f64 = -1.10894694282396677476e-01; // 0xBFBC63983D3E28EC
const PA5: f64 = 3.54783043256182359371e-02; // 0x3FA22A36599795EB
const PA6: f64 = -2.16637559486879084300e-03; // 0xBF61BF380A96073F
const QA1: f64 = 1.06420880400844228286e-01; // 0x3FBB3E6618EEE323
const QA2: f64 = 5.40397917702171048937e-01; // 0x3FE14AF092EB6F33
const QA3: f64 = 7.18286544141962662868e-02; // 0x3FB2635CD99FE9A7
const QA4: f64 = 1.26171219808761642112e-01; // 0x3FC02660E763351F
const QA5: f64 = 1.36370839120290507362e-02; // 0x3F8BEDC26B51DD1C
const QA6: f64 = 1.19844998467991074170e-02; // 0x3F888B545735151D

// Coefficients for approximation to erfc in 1.25 <= |x| <= 1/0.35.
const RA0: f64 = -9.86494403484714822705e-03; // 0xBF843412600D6435
const RA1: f64 = -6.93858572707181764372e-01; // 0xBFE63416E4BA7360
const RA2: f64 = -1.05586262253232909814e+01; // 0xC0251E0441B0E726
const RA3: f64 = -6.23753324503260060396e+01; // 0xC04F300AE4CBA38D
const RA4: f64 = -1.62396669462573470355e+02; // 0xC0644CB184282266
const RA5: f64 = -1.84605092906711035994e+02; // 0xC067135CEBCCABB2
const RA6: f64 = -8.12874355063065934246e+01; // 0xC054526557E4D2F2
const RA7: f64 = -9.81432934416914548592e+00; // 0xC023A0EFC69AC25C
const SA1: f64 = 1.96512716674392571292e+01; // 0x4033A6B9BD707687
const SA2: f64 = 1.37657754143519042600e+02; // 0x4061350C526AE721
const SA3: f64 = 4.34565877475229228821e+02; // 0x407B290DD58A1A71
const SA4: f64 = 6.45387271733267880336e+02; // 0x40842B1921EC2868
const SA5: f64 = 4.29008140027567833386e+02; // 0x407AD02157700314
const SA6: f64 = 1.08635005541779435134e+02; // 0x405B28A3EE48AE2C
const SA7: f64 = 6.57024977031928170135e+00; // 0x401A47EF8E484A93
const SA8: f64 = -6.04244152148580987438e-02; // 0xBFAEEFF2EE749A62

// Coefficients for approximation to erfc in 1/0.35 <= |x| <= 6.
const RB0: f64 = -9.86494292470009928597e-03; // 0xBF84341239E86F4A
const RB1: f64 = -7.99283237680523006574e-01; // 0xBFE993BA70C285DE
const RB2: f64 = -1.77579549177547519889e+01; // 0xC031C209555F995A
const RB3: f64 = -1.60636384855821916062e+02; // 0xC064145D43C5ED98
const RB4: f64 = -6.37566443368389627722e+02; // 0xC083EC881375F228
const RB5: f64 = -1.02509513161107724954e+03; // 0xC09004616A2E5992
const RB6: f64 = -4.83519191608651397019e+02; // 0xC07E384E9BDC383F
const SB1: f64 = 3.03380607434824582924e+01; // 0x403E568B261D5190
const SB2: f64 = 3.25792512996573918826e+02; // 0x40745CAE221B9F0A
const SB3: f64 = 1.53672958608443695994e+03; // 0x409802EB189D5118
const SB4: f64 = 3.19985821950859553908e+03; // 0x40A8FFB7688C246A
const SB5: f64 = 2.55305040643316442583e+03; // 0x40A3F219CEDF3BE6
const SB6: f64 = 4.74528541206955367215e+02; // 0x407DA874E79FE763
const SB7: f64 = -2.24409524465858183362e+01; // 0xC03670E242712D62

const VERY_TINY: f64 = 2.848094538889218e-306; // 0x0080000000000000
const SMALL: f64 = 3.725290298461914e-09; // 2**-28

/// Clear the low 32 bits of the mantissa; the split lets
/// `exp(-z*z - 0.5625)` be computed exactly enough for the tail formula.
#[inline]
fn trunc_low(x: f64) -> f64 {
    f64::from_bits(x.to_bits() & 0xffff_ffff_0000_0000)
}

/// Error function `erf(x)`.
pub fn erf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x == f64::INFINITY {
        return 1.0;
    }
    if x == f64::NEG_INFINITY {
        return -1.0;
    }
    let sign = x < 0.0;
    let x = if sign { -x } else { x };
    if x < 0.84375 {
        let temp = if x < SMALL {
            if x < VERY_TINY {
                // Avoid spurious underflow in x * efx.
                0.125 * (8.0 * x + EFX8 * x)
            } else {
                x + EFX * x
            }
        } else {
            let z = x * x;
            let r = PP0 + z * (PP1 + z * (PP2 + z * (PP3 + z * PP4)));
            let s = 1.0 + z * (QQ1 + z * (QQ2 + z * (QQ3 + z * (QQ4 + z * QQ5))));
            let y = r / s;
            x + x * y
        };
        return if sign { -temp } else { temp };
    }
    if x < 1.25 {
        let s = x - 1.0;
        let p = PA0 + s * (PA1 + s * (PA2 + s * (PA3 + s * (PA4 + s * (PA5 + s * PA6)))));
        let q = 1.0 + s * (QA1 + s * (QA2 + s * (QA3 + s * (QA4 + s * (QA5 + s * QA6)))));
        let temp = ERX + p / q;
        return if sign { -temp } else { temp };
    }
    if x >= 6.0 {
        // 1 - tiny, with the sign of x.
        return if sign { VERY_TINY - 1.0 } else { 1.0 - VERY_TINY };
    }
    let s = 1.0 / (x * x);
    let (big_r, big_s) = if x < 1.0 / 0.35 {
        let r = RA0 + s * (RA1 + s * (RA2 + s * (RA3 + s * (RA4 + s * (RA5 + s * (RA6 + s * RA7))))));
        let ss = 1.0
            + s * (SA1
                + s * (SA2 + s * (SA3 + s * (SA4 + s * (SA5 + s * (SA6 + s * (SA7 + s * SA8)))))));
        (r, ss)
    } else {
        let r = RB0 + s * (RB1 + s * (RB2 + s * (RB3 + s * (RB4 + s * (RB5 + s * RB6)))));
        let ss = 1.0
            + s * (SB1 + s * (SB2 + s * (SB3 + s * (SB4 + s * (SB5 + s * (SB6 + s * SB7))))));
        (r, ss)
    };
    let z = trunc_low(x);
    let r = exp(-z * z - 0.5625) * exp((z - x) * (z + x) + big_r / big_s);
    if sign {
        r / x - 1.0
    } else {
        1.0 - r / x
    }
}

/// Complementary error function `erfc(x) = 1 - erf(x)`, accurate for large
/// positive `x` where the direct difference would underflow to zero.
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x == f64::INFINITY {
        return 0.0;
    }
    if x == f64::NEG_INFINITY {
        return 2.0;
    }
    let sign = x < 0.0;
    let x = if sign { -x } else { x };
    if x < 0.84375 {
        let temp = if x < 1.38777878078144567553e-17 {
            // 2**-56: erfc(x) ~ 1 - x to full precision.
            x
        } else {
            let z = x * x;
            let r = PP0 + z * (PP1 + z * (PP2 + z * (PP3 + z * PP4)));
            let s = 1.0 + z * (QQ1 + z * (QQ2 + z * (QQ3 + z * (QQ4 + z * QQ5))));
            let y = r / s;
            if x < 0.25 {
                x + x * y
            } else {
                // Here 1 - erfc would lose a bit; work from 0.5.
                let r = x * y + (x - 0.5);
                return if sign { 1.0 + (r + 0.5) } else { 0.5 - r };
            }
        };
        return if sign { 1.0 + temp } else { 1.0 - temp };
    }
    if x < 1.25 {
        let s = x - 1.0;
        let p = PA0 + s * (PA1 + s * (PA2 + s * (PA3 + s * (PA4 + s * (PA5 + s * PA6)))));
        let q = 1.0 + s * (QA1 + s * (QA2 + s * (QA3 + s * (QA4 + s * (QA5 + s * QA6)))));
        return if sign {
            1.0 + ERX + p / q
        } else {
            1.0 - ERX - p / q
        };
    }
    if x < 28.0 {
        let s = 1.0 / (x * x);
        let (big_r, big_s) = if x < 1.0 / 0.35 {
            let r =
                RA0 + s * (RA1 + s * (RA2 + s * (RA3 + s * (RA4 + s * (RA5 + s * (RA6 + s * RA7))))));
            let ss = 1.0
                + s * (SA1
                    + s * (SA2
                        + s * (SA3 + s * (SA4 + s * (SA5 + s * (SA6 + s * (SA7 + s * SA8)))))));
            (r, ss)
        } else {
            if sign && x > 6.0 {
                return 2.0 - VERY_TINY; // x < -6
            }
            let r = RB0 + s * (RB1 + s * (RB2 + s * (RB3 + s * (RB4 + s * (RB5 + s * RB6)))));
            let ss = 1.0
                + s * (SB1 + s * (SB2 + s * (SB3 + s * (SB4 + s * (SB5 + s * (SB6 + s * SB7))))));
            (r, ss)
        };
        let z = trunc_low(x);
        let r = exp(-z * z - 0.5625) * exp((z - x) * (z + x) + big_r / big_s);
        return if sign { 2.0 - r / x } else { r / x };
    }
    if sign {
        2.0 - VERY_TINY
    } else {
        VERY_TINY * VERY_TINY
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values computed with mpmath at 50 decimal digits.
    const ERF_CASES: &[(f64, f64, f64)] = &[
        // (x, erf(x), erfc(x))
        (0.1, 0.112_462_916_018_284_9, 0.887_537_083_981_715_1),
        (0.25, 0.276_326_390_168_236_93, 0.723_673_609_831_763_1),
        (0.5, 0.520_499_877_813_046_5, 0.479_500_122_186_953_46),
        (0.84375, 0.767_225_661_232_341_6, 0.232_774_338_767_658_37),
        (1.0, 0.842_700_792_949_714_9, 0.157_299_207_050_285_13),
        (1.25, 0.922_900_128_256_458_2, 0.077_099_871_743_541_77),
        (2.0, 0.995_322_265_018_952_7, 0.004_677_734_981_047_266),
        (2.857_142_857_142_857, 0.999_946_687_688_611_7, 5.331_231_138_832_279_4e-5),
        (4.0, 0.999_999_984_582_742_1, 1.541_725_790_028_002e-8),
        (6.0, 1.0, 2.151_973_671_249_891_3e-17),
        (27.0, 1.0, 5.237_048_923_789_255e-319),
    ];

    fn assert_rel(got: f64, want: f64, rel: f64, what: &str) {
        if want == 0.0 {
            assert!(got.abs() <= rel, "{what}: got {got}, want 0");
            return;
        }
        let err = ((got - want) / want).abs();
        assert!(err <= rel, "{what}: got {got:e}, want {want:e}, rel err {err:e}");
    }

    #[test]
    fn erf_matches_reference_values() {
        for &(x, e, _) in ERF_CASES {
            assert_rel(erf(x), e, 1e-14, "erf");
            assert_rel(erf(-x), -e, 1e-14, "erf (negative)");
        }
    }

    #[test]
    fn erfc_matches_reference_values() {
        for &(x, _, ec) in ERF_CASES {
            assert_rel(erfc(x), ec, 1e-13, "erfc");
            assert_rel(erfc(-x), 2.0 - ec, 1e-14, "erfc (negative)");
        }
    }

    #[test]
    fn erf_edge_cases() {
        assert_eq!(erf(0.0), 0.0);
        assert_eq!(erf(f64::INFINITY), 1.0);
        assert_eq!(erf(f64::NEG_INFINITY), -1.0);
        assert!(erf(f64::NAN).is_nan());
        assert_eq!(erfc(f64::INFINITY), 0.0);
        assert_eq!(erfc(f64::NEG_INFINITY), 2.0);
        assert!(erfc(f64::NAN).is_nan());
        // Odd symmetry and complement identity on a small grid.
        let mut x = -5.0;
        while x <= 5.0 {
            assert!((erf(x) + erf(-x)).abs() < 1e-15);
            assert!((erf(x) + erfc(x) - 1.0).abs() < 1e-14);
            x += 0.173;
        }
    }

    #[test]
    fn normal_cdf_reference_values() {
        // Phi at 0, +-1, +-2, -sqrt(2), and a deep tail (mpmath).
        assert_rel(normal_cdf(0.0), 0.5, 1e-15, "Phi(0)");
        assert_rel(normal_cdf(1.0), 0.841_344_746_068_542_9, 1e-14, "Phi(1)");
        assert_rel(normal_cdf(-2.0), 0.022_750_131_948_179_2, 1e-13, "Phi(-2)");
        assert_rel(
            normal_cdf(-core::f64::consts::SQRT_2),
            0.078_649_603_525_142_57,
            1e-13,
            "Phi(-sqrt 2)",
        );
        assert_rel(normal_cdf(-10.0), 7.619_853_024_160_526e-24, 1e-12, "Phi(-10)");
        assert_rel(normal_cdf(-4.0), 3.167_124_183_311_992_2e-5, 1e-13, "Phi(-4)");
    }

    #[test]
    fn softplus_and_sigmoid_are_stable() {
        assert!((softplus(0.0) - core::f64::consts::LN_2).abs() < 1e-15);
        assert!((softplus(-1.0) - 0.313_261_687_518_222_83).abs() < 1e-15);
        // Large arguments: no overflow, correct asymptotes.
        assert_eq!(softplus(800.0), 800.0);
        assert_eq!(softplus(-800.0), 0.0);
        assert!((sigmoid(0.0) - 0.5).abs() < 1e-15);
        assert_eq!(sigmoid(800.0), 1.0);
        assert_eq!(sigmoid(-800.0), 0.0);
        // sigmoid(-t) = 1 - sigmoid(t)
        for t in [-3.0, -0.7, 0.0, 0.2, 5.0] {
            assert!((sigmoid(-t) + sigmoid(t) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn sign_convention_at_zero() {
        assert_eq!(sign(3.5), 1.0);
        assert_eq!(sign(-0.2), -1.0);
        assert_eq!(sign(0.0), 0.0);
        assert_eq!(sign(-0.0), 0.0);
    }
}
