//! Complex log-Gamma and Hurwitz zeta.
//!
//! `log_gamma` is the analytic continuation of `ln Γ` from the positive real
//! axis (Stirling series after an upward shift). `hurwitz_zeta` is continued
//! to `Re s <= 1` by Euler–Maclaurin summation.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// `B_2, B_4, ..., B_24`.
const BERNOULLI_EVEN: [f64; 12] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
];

/// `½ ln(2π)`.
pub const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

const STIRLING_MIN_RE: f64 = 15.0;
const STIRLING_TERMS: usize = 10;

fn is_nonpositive_integer(c: Complex64) -> bool {
    c.im == 0.0 && c.re <= 0.0 && c.re == c.re.round()
}

/// `ln Γ(c)`, real on the positive real axis and continued analytically
/// elsewhere (branch cut along the negative real axis).
pub fn log_gamma(c: Complex64) -> Result<Complex64> {
    if is_nonpositive_integer(c) {
        return Err(Error::Pole("log_gamma"));
    }
    if !(c.re.is_finite() && c.im.is_finite()) {
        return Err(Error::Domain(format!("log_gamma of non-finite {c}")));
    }
    if c.re < -1e7 {
        return Err(Error::Domain(format!(
            "log_gamma argument {c} too far left"
        )));
    }

    // ln Γ(c) = ln Γ(c + n) - Σ_{k<n} ln(c + k)
    let mut z = c;
    let mut correction = Complex64::new(0.0, 0.0);
    while z.re < STIRLING_MIN_RE {
        correction += z.ln();
        z += 1.0;
    }

    let inv = z.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut power = inv;
    for (k, b) in BERNOULLI_EVEN.iter().take(STIRLING_TERMS).enumerate() {
        let two_k = 2.0 * (k + 1) as f64;
        series += power * (b / (two_k * (two_k - 1.0)));
        power *= inv2;
    }
    Ok((z - 0.5) * z.ln() - z + HALF_LN_2PI + series - correction)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EulerMaclaurinParams {
    /// Length of the directly summed head.
    pub shift_terms: usize,
    /// Number of `B_{2k}` correction terms.
    pub bernoulli_order: usize,
}

impl Default for EulerMaclaurinParams {
    fn default() -> Self {
        EulerMaclaurinParams {
            shift_terms: 16,
            bernoulli_order: 8,
        }
    }
}

impl EulerMaclaurinParams {
    pub fn new(shift_terms: usize, bernoulli_order: usize) -> Result<Self> {
        if shift_terms < 8 {
            return Err(Error::InvalidConfig(
                "Euler-Maclaurin head needs N >= 8".into(),
            ));
        }
        if !(1..=12).contains(&bernoulli_order) {
            return Err(Error::InvalidConfig(
                "Bernoulli order must be in 1..=12".into(),
            ));
        }
        Ok(EulerMaclaurinParams {
            shift_terms,
            bernoulli_order,
        })
    }
}

/// `ζ_H(s, c) = Σ_{j>=0} (j + c)^{-s}` for `Re c > 0`, continued to all
/// `s != 1` with default parameters.
pub fn hurwitz_zeta(s: Complex64, c: Complex64) -> Result<Complex64> {
    hurwitz_zeta_with(s, c, EulerMaclaurinParams::default())
}

pub fn hurwitz_zeta_with(
    s: Complex64,
    c: Complex64,
    params: EulerMaclaurinParams,
) -> Result<Complex64> {
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole("hurwitz_zeta at s = 1"));
    }
    if !(c.re > 0.0) {
        return Err(Error::Domain(format!(
            "hurwitz_zeta needs Re c > 0, got {c}"
        )));
    }
    // The remainder is small only once |N + c| dominates |s|.
    let n = params.shift_terms.max((2.0 * s.norm()).ceil() as usize);
    let head: Complex64 = (0..n).map(|j| (-s * (c + j as f64).ln()).exp()).sum();

    let w = c + n as f64;
    let ln_w = w.ln();
    let w_pow = (-s * ln_w).exp(); // w^{-s}
    let one = Complex64::new(1.0, 0.0);
    let integral = w_pow * w / (s - one);
    let half = 0.5 * w_pow;

    let inv_w2 = (w * w).inv();
    let mut rising = s; // s (s+1) ... (s + 2k - 2)
    let mut power = w_pow / w; // w^{-s-2k+1}
    let mut factorial = 2.0; // (2k)!
    let mut tail = Complex64::new(0.0, 0.0);
    for k in 1..=params.bernoulli_order {
        tail += rising * power * (BERNOULLI_EVEN[k - 1] / factorial);
        let kf = k as f64;
        rising *= (s + (2.0 * kf - 1.0)) * (s + 2.0 * kf);
        power *= inv_w2;
        factorial *= (2.0 * kf + 1.0) * (2.0 * kf + 2.0);
    }
    Ok(head + integral + half + tail)
}

/// `∂_s ζ_H(0, 1 + c) = ln Γ(1 + c) - ½ ln(2π)`.
pub fn hurwitz_zeta_sderiv0(c: Complex64) -> Result<Complex64> {
    Ok(log_gamma(c + 1.0)? - HALF_LN_2PI)
}

/// `Γ(1 - ic) Γ(1 + ic) = cπ / sinh(cπ)`, with the removable point `c = 0`
/// mapped to its limit 1.
pub fn gamma_pair(c: Complex64) -> Result<Complex64> {
    if c == Complex64::new(0.0, 0.0) {
        return Ok(Complex64::new(1.0, 0.0));
    }
    if c.re == 0.0 && c.im == c.im.round() {
        return Err(Error::Domain(format!("gamma_pair has a pole at c = {c}")));
    }
    let x = c * PI;
    Ok(x / x.sinh())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1.0)
    }

    #[test]
    fn log_gamma_values() {
        assert!(log_gamma(c(1.0, 0.0)).unwrap().norm() < 1e-15);
        assert!(log_gamma(c(2.0, 0.0)).unwrap().norm() < 1e-15);
        let half = log_gamma(c(0.5, 0.0)).unwrap();
        assert!(close(half, c(0.5 * PI.ln(), 0.0), 1e-14), "{half}");
        // Γ(5) = 24
        assert!(close(
            log_gamma(c(5.0, 0.0)).unwrap(),
            c(24f64.ln(), 0.0),
            1e-14
        ));
        // Γ(-1/2) = -2√π, continuation carries arg = -π from the cut side above.
        let v = log_gamma(c(-0.5, 1e-300)).unwrap();
        assert!((v.re - (2.0 * PI.sqrt()).ln()).abs() < 1e-13);
    }

    #[test]
    fn log_gamma_pair_sum() {
        let sum = log_gamma(c(1.0, 1.0)).unwrap() + log_gamma(c(1.0, -1.0)).unwrap();
        assert!(close(sum, c((PI / PI.sinh()).ln(), 0.0), 1e-14), "{sum}");
    }

    #[test]
    fn log_gamma_conjugate_symmetry_and_recurrence() {
        for z in [c(0.3, 2.0), c(-3.7, 0.8), c(12.0, -40.0), c(0.01, 0.01)] {
            let a = log_gamma(z).unwrap();
            let b = log_gamma(z.conj()).unwrap();
            assert!(close(a, b.conj(), 1e-13));
            // ln Γ(z + 1) = ln Γ(z) + ln z on the continued branch
            let up = log_gamma(z + 1.0).unwrap();
            assert!(close(up, a + z.ln(), 1e-12), "{z}");
        }
    }

    #[test]
    fn log_gamma_poles() {
        for x in [0.0, -1.0, -7.0] {
            assert_eq!(log_gamma(c(x, 0.0)), Err(Error::Pole("log_gamma")));
        }
    }

    #[test]
    fn hurwitz_special_values() {
        let z2 = hurwitz_zeta(c(2.0, 0.0), c(1.0, 0.0)).unwrap();
        assert!((z2 - c(PI * PI / 6.0, 0.0)).norm() < 1e-13);
        let z0 = hurwitz_zeta(c(0.0, 0.0), c(1.7, 0.0)).unwrap();
        assert!((z0 - c(-1.2, 0.0)).norm() < 1e-13);
        let r0 = hurwitz_zeta(c(0.0, 0.0), c(1.0, 0.0)).unwrap();
        assert!((r0 - c(-0.5, 0.0)).norm() < 1e-14);
        // ζ_R(-1) = -1/12
        let rm1 = hurwitz_zeta(c(-1.0, 0.0), c(1.0, 0.0)).unwrap();
        assert!((rm1 - c(-1.0 / 12.0, 0.0)).norm() < 1e-13);
        // ζ_H(2, 1/2) = π²/2
        let h = hurwitz_zeta(c(2.0, 0.0), c(0.5, 0.0)).unwrap();
        assert!((h - c(PI * PI / 2.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn hurwitz_errors() {
        assert!(matches!(
            hurwitz_zeta(c(1.0, 0.0), c(1.0, 0.0)),
            Err(Error::Pole(_))
        ));
        assert!(matches!(
            hurwitz_zeta(c(2.0, 0.0), c(0.0, 1.0)),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            hurwitz_zeta(c(2.0, 0.0), c(-0.5, 0.0)),
            Err(Error::Domain(_))
        ));
        assert!(EulerMaclaurinParams::new(4, 8).is_err());
        assert!(EulerMaclaurinParams::new(16, 13).is_err());
    }

    #[test]
    fn sderiv0_values() {
        assert!((hurwitz_zeta_sderiv0(c(0.0, 0.0)).unwrap() + HALF_LN_2PI).norm() < 1e-15);
        assert!((hurwitz_zeta_sderiv0(c(1.0, 0.0)).unwrap() + HALF_LN_2PI).norm() < 1e-15);
        let t = 0.5;
        let pair =
            hurwitz_zeta_sderiv0(c(0.0, t)).unwrap() + hurwitz_zeta_sderiv0(c(0.0, -t)).unwrap();
        let expect = (t * PI / (t * PI).sinh()).ln() - (2.0 * PI).ln();
        assert!((pair - c(expect, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn sderiv0_matches_finite_difference() {
        let h = 1e-5;
        for cc in [c(0.3, 0.0), c(0.2, -1.4), c(-0.3, 2.5), c(0.45, 0.1)] {
            let arg = cc + 1.0;
            let fd = (hurwitz_zeta(c(h, 0.0), arg).unwrap()
                - hurwitz_zeta(c(-h, 0.0), arg).unwrap())
                / (2.0 * h);
            let exact = hurwitz_zeta_sderiv0(cc).unwrap();
            assert!((fd - exact).norm() < 1e-8, "{cc}: {fd} vs {exact}");
        }
    }

    #[test]
    fn gamma_pair_values() {
        let v = gamma_pair(c(1.0, 0.0)).unwrap();
        assert!((v.re - 0.272_029_054_982_133).abs() < 1e-12 && v.im == 0.0);
        assert_eq!(gamma_pair(c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        assert!((gamma_pair(c(0.0, 0.5)).unwrap() - c(PI / 2.0, 0.0)).norm() < 1e-14);
        assert!(gamma_pair(c(0.0, 1.0)).is_err());
        assert!(gamma_pair(c(0.0, -3.0)).is_err());
    }
}
