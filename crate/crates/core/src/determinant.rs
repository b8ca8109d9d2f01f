//! Zeta-regularized determinant `exp(-ζ'(0))`, computed three ways: the
//! closed form, the product over the `μ_k`, and `ζ'(0)` assembled from
//! Riemann/Hurwitz zeta values. Also the spectral zeta function itself.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::general;
use crate::model::{BranchCut, CutSide, MuValue, RationalSplit, StringConfig};
use crate::rational::{RationalSpectrum, Regime};
use crate::specfun::{hurwitz_zeta, hurwitz_zeta_sderiv0};

/// Maximum pairwise relative deviation accepted between determinant paths.
pub const AGREEMENT_TOL: f64 = 1e-8;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Closed-form determinant. Negative-axis cut: `4L/(2-α)`, with `2L` at
/// `α = 2` (`L` if also `a = L/2`). Positive-axis cut: `-4L/(2+α)`, with
/// `-2L` at `α = -2` (`-L` if also `a = L/2`).
pub fn det_closed(cfg: &StringConfig, cut: BranchCut) -> Complex64 {
    let l = cfg.length;
    let two = real(2.0);
    match cut.side {
        CutSide::NegAxis if cfg.alpha == two => real(if cfg.is_centered() { l } else { 2.0 * l }),
        CutSide::NegAxis => 4.0 * l / (two - cfg.alpha),
        CutSide::PosAxis if cfg.alpha == -two => {
            real(if cfg.is_centered() { -l } else { -2.0 * l })
        }
        CutSide::PosAxis => -4.0 * l / (two + cfg.alpha),
    }
}

/// Product accumulated as `mantissa * exp(log_scale)`.
#[derive(Debug, Clone, Copy)]
struct ScaledProduct {
    mantissa: Complex64,
    log_scale: f64,
}

impl ScaledProduct {
    fn new(start: Complex64) -> Self {
        ScaledProduct {
            mantissa: start,
            log_scale: 0.0,
        }
    }

    /// Multiply by `1 - exp(w)`.
    fn mul_one_minus_exp(&mut self, w: Complex64) {
        if w.re > 30.0 {
            // 1 - e^w = e^w (e^{-w} - 1)
            self.mantissa *= Complex64::from_polar(1.0, w.im) * ((-w).exp() - 1.0);
            self.log_scale += w.re;
        } else {
            self.mantissa *= 1.0 - w.exp();
        }
        let norm = self.mantissa.norm();
        if norm > 1e100 || (norm < 1e-100 && norm > 0.0) {
            self.mantissa /= norm;
            self.log_scale += norm.ln();
        }
    }

    fn log(&self) -> Complex64 {
        self.mantissa.ln() + self.log_scale
    }

    fn value(&self) -> Complex64 {
        self.mantissa * self.log_scale.exp()
    }
}

fn root_product(mus: &[MuValue], split: &RationalSplit, cut: BranchCut) -> ScaledProduct {
    let (start, sign) = match cut.side {
        CutSide::NegAxis => (real(2.0 * split.l0), -2.0),
        CutSide::PosAxis => (real(-2.0 * split.l0), 2.0),
    };
    let mut prod = ScaledProduct::new(start);
    for m in mus {
        let w = m.mu * (sign * split.l0);
        for _ in 0..m.multiplicity {
            prod.mul_one_minus_exp(w);
        }
    }
    prod
}

/// `2 L0 ∏ (1 - e^{-2 L0 μ_k})` (negative-axis cut) or
/// `-2 L0 ∏ (1 - e^{2 L0 μ_k})` (positive-axis cut).
pub fn det_from_roots(mus: &[MuValue], split: &RationalSplit, cut: BranchCut) -> Complex64 {
    root_product(mus, split, cut).value()
}

/// `ζ'(0)` and the integer `m` with `-ζ'(0) = Log det + 2πi m`, where `det`
/// is the root-product determinant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaPrime {
    pub value: Complex64,
    pub branch_integer: i64,
    /// `|-ζ'(0) - Log det - 2πi m|`; small when the paths agree.
    pub mismatch: f64,
}

impl ZetaPrime {
    fn against(value: Complex64, mus: &[MuValue], split: &RationalSplit, cut: BranchCut) -> Self {
        let log_det = root_product(mus, split, cut).log();
        let diff = -value - log_det;
        let m = (diff.im / (2.0 * PI)).round();
        let mismatch = (diff - I * (2.0 * PI * m)).norm();
        ZetaPrime {
            value,
            branch_integer: m as i64,
            mismatch,
        }
    }

    /// `exp(-ζ'(0))`.
    pub fn determinant(&self) -> Complex64 {
        (-self.value).exp()
    }
}

/// Principal `Log sinh(w)`, stable for large `|Re w|`.
fn log_sinh(w: Complex64) -> Complex64 {
    if w.re.abs() <= 30.0 {
        return w.sinh().ln();
    }
    let s = w.re.signum();
    let rest = ((1.0 - (-2.0 * s * w).exp()) * (0.5 * s)).ln();
    let raw = s * w + rest;
    Complex64::new(raw.re, wrap_angle(raw.im))
}

/// Map an angle into `(-π, π]`.
fn wrap_angle(theta: f64) -> f64 {
    let mut t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t -= 2.0 * PI;
    }
    t
}

fn root_count(mus: &[MuValue]) -> f64 {
    mus.iter().map(|m| f64::from(m.multiplicity)).sum()
}

/// `ζ'(0)` from the sum over `μ_k` of `L0 μ_k ∓ Log sinh(L0 μ_k)` terms.
pub fn zeta_prime0_simplified(
    mus: &[MuValue],
    split: &RationalSplit,
    cut: BranchCut,
) -> Result<ZetaPrime> {
    let l0 = split.l0;
    let n = root_count(mus);
    let mut value = real(-(n + 1.0) * LN_2 - l0.ln());
    for m in mus {
        let w = m.mu * l0;
        let sh = log_sinh(w);
        if !(sh.re.is_finite() && sh.im.is_finite()) {
            return Err(Error::Domain(format!(
                "sinh(L0 μ) vanishes at μ = {}",
                m.mu
            )));
        }
        let term = match cut.side {
            CutSide::NegAxis => w - sh,
            CutSide::PosAxis => -(w + sh),
        };
        value += term * f64::from(m.multiplicity);
    }
    if cut.side == CutSide::PosAxis {
        value += I * (PI * (1.0 - n));
    }
    Ok(ZetaPrime::against(value, mus, split, cut))
}

/// `ζ'(0)` assembled from `ζ_R(0)`, `ζ_R'(0)`, `ζ_H(0, 1 ∓ iμL0/π)` and
/// `∂_s ζ_H(0, 1 ∓ iμL0/π)`, with `-log μ_k` on the cut's branch.
pub fn zeta_prime0_hurwitz_path(
    mus: &[MuValue],
    split: &RationalSplit,
    cut: BranchCut,
) -> Result<ZetaPrime> {
    let l0 = split.l0;
    let ell = real((l0 / PI).ln());
    let zeta_r0 = hurwitz_zeta(real(0.0), real(1.0))?;
    let zeta_r0_prime = hurwitz_zeta_sderiv0(real(0.0))?;

    let (lattice_phase, upper_phase, lower_phase) = match cut.side {
        CutSide::NegAxis => (real(0.0), -0.5 * PI * I, 0.5 * PI * I),
        CutSide::PosAxis => (-PI * I, -0.5 * PI * I, -1.5 * PI * I),
    };
    let mut value = 2.0 * (ell + lattice_phase) * zeta_r0 + 2.0 * zeta_r0_prime;
    for m in mus {
        let x = m.mu * (l0 / PI);
        let shift_upper = -I * x; // ζ_H(·, 1 - i μ L0/π)
        let shift_lower = I * x; // ζ_H(·, 1 + i μ L0/π)
        let term = -cut.log(m.mu)?
            + (ell + upper_phase) * hurwitz_zeta(real(0.0), shift_upper + 1.0)?
            + (ell + lower_phase) * hurwitz_zeta(real(0.0), shift_lower + 1.0)?
            + hurwitz_zeta_sderiv0(shift_upper)?
            + hurwitz_zeta_sderiv0(shift_lower)?;
        value += term * f64::from(m.multiplicity);
    }
    Ok(ZetaPrime::against(value, mus, split, cut))
}

/// Spectral zeta function assembled from Riemann and Hurwitz zeta values;
/// valid for every `s` where those are defined (rational splits only).
pub fn zeta_assembled(
    mus: &[MuValue],
    split: &RationalSplit,
    s: Complex64,
    cut: BranchCut,
) -> Result<Complex64> {
    let l0 = split.l0;
    let scale = (s * (l0 / PI).ln()).exp(); // (π/L0)^{-s}
    let cos_half = (s * (0.5 * PI)).cos();
    let (lattice_phase, lower_phase) = match cut.side {
        CutSide::NegAxis => (real(1.0), (s * (0.5 * PI) * I).exp()),
        CutSide::PosAxis => ((-s * PI * I).exp(), (-s * (1.5 * PI) * I).exp()),
    };
    let upper_phase = (-s * (0.5 * PI) * I).exp();
    let mut value = 2.0 * lattice_phase * cos_half * scale * hurwitz_zeta(s, real(1.0))?;
    for m in mus {
        let x = m.mu * (l0 / PI);
        let term = cut.pow_neg(m.mu, s)?
            + scale
                * (upper_phase * hurwitz_zeta(s, 1.0 - I * x)?
                    + lower_phase * hurwitz_zeta(s, 1.0 + I * x)?);
        value += term * f64::from(m.multiplicity);
    }
    Ok(value)
}

/// Where the eigenvalues for a direct zeta sum come from.
#[derive(Debug, Clone, Copy)]
pub enum SpectrumSource {
    Rational {
        split: RationalSplit,
        alpha: Complex64,
    },
    General(StringConfig),
}

impl SpectrumSource {
    fn length(&self) -> f64 {
        match self {
            SpectrumSource::Rational { split, .. } => split.length(),
            SpectrumSource::General(cfg) => cfg.length,
        }
    }

    fn eigenvalues(&self, im_bound: f64) -> Result<Vec<(Complex64, u32)>> {
        let records = match self {
            SpectrumSource::Rational { split, alpha } => {
                RationalSpectrum::solve(split, *alpha)?.eigenvalues(im_bound)?
            }
            SpectrumSource::General(cfg) => general::enumerate_general(cfg, im_bound)?.0,
        };
        Ok(records
            .into_iter()
            .map(|r| (r.value, r.multiplicity))
            .collect())
    }
}

/// Truncated spectral zeta sum with a lattice-asymptotic tail correction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaEstimate {
    /// `partial + tail`.
    pub value: Complex64,
    pub partial: Complex64,
    pub tail: Complex64,
    /// Uncertainty of `value`.
    pub tail_bar: f64,
    /// Eigenvalues summed, with multiplicity.
    pub count: usize,
}

/// `Σ λ^{-s}` over eigenvalues with `|Im λ| <= im_bound` (`Re s > 1`).
///
/// The tail beyond `im_bound` is modeled by the lattice `j π i / L`; the
/// error bar is the model's relative mismatch on the outer half of the
/// computed spectrum, applied to the tail, plus an allowance of a few
/// eigenvalues at the truncation edge.
pub fn zeta_direct(
    source: &SpectrumSource,
    s: Complex64,
    cut: BranchCut,
    im_bound: f64,
) -> Result<ZetaEstimate> {
    if !(s.re > 1.0) {
        return Err(Error::Domain(format!(
            "direct zeta sum needs Re s > 1, got {s}"
        )));
    }
    let eigen = source.eigenvalues(im_bound)?;
    let length = source.length();

    let mut partial = Complex64::new(0.0, 0.0);
    let mut outer = Complex64::new(0.0, 0.0);
    let mut count = 0;
    for &(lambda, mult) in &eigen {
        let t = cut.pow_neg(lambda, s)? * f64::from(mult);
        partial += t;
        if lambda.im.abs() > 0.5 * im_bound {
            outer += t;
        }
        count += mult as usize;
    }

    let phase = match cut.side {
        CutSide::NegAxis => real(1.0),
        CutSide::PosAxis => (-s * PI * I).exp(),
    };
    let model_scale = 2.0 * phase * (s * 0.5 * PI).cos() * (s * (length / PI).ln()).exp();
    let j_all = (im_bound * length / PI).floor();
    let j_half = (0.5 * im_bound * length / PI).floor();
    let tail = model_scale * hurwitz_zeta(s, real(j_all + 1.0))?;
    let outer_model =
        model_scale * (hurwitz_zeta(s, real(j_half + 1.0))? - hurwitz_zeta(s, real(j_all + 1.0))?);
    let mismatch = if outer_model.norm() > 0.0 {
        (outer - outer_model).norm() / outer_model.norm()
    } else {
        1.0
    };
    let edge = 6.0 * im_bound.powf(-s.re) * (2.0 * PI * s.im.abs()).exp();
    let tail_bar = 2.0 * mismatch * tail.norm() + edge;
    Ok(ZetaEstimate {
        value: partial + tail,
        partial,
        tail,
        tail_bar,
        count,
    })
}

/// Regime of a configuration without reference to a split.
pub fn classify_config(cfg: &StringConfig) -> Regime {
    let two = real(2.0);
    if cfg.alpha == two || cfg.alpha == -two {
        if cfg.is_centered() {
            Regime::Trivial
        } else if cfg.alpha == two {
            Regime::AlphaPlus2
        } else {
            Regime::AlphaMinus2
        }
    } else {
        Regime::Generic
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeterminantReport {
    pub closed: Complex64,
    pub from_roots: Option<Complex64>,
    /// `exp(-ζ'(0))` from the Hurwitz-zeta assembly.
    pub zeta_path: Option<Complex64>,
    /// `ζ'(0)` from the Hurwitz-zeta assembly.
    pub zeta_prime: Option<Complex64>,
    pub branch_integer: Option<i64>,
    pub cut: BranchCut,
    pub regime: Regime,
    /// Maximum pairwise relative deviation (0 when only `closed` exists).
    pub agreement: f64,
}

fn relative_deviation(a: Complex64, b: Complex64) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).norm() / scale
    }
}

/// Closed, root-product and Hurwitz-path determinants with an agreement check.
/// Without a split only the closed form is populated.
pub fn determinant_report(
    cfg: &StringConfig,
    cut: BranchCut,
    split: Option<&RationalSplit>,
) -> Result<DeterminantReport> {
    let Some(split) = split else {
        return Ok(DeterminantReport {
            closed: det_closed(cfg, cut),
            from_roots: None,
            zeta_path: None,
            zeta_prime: None,
            branch_integer: None,
            cut,
            regime: classify_config(cfg),
            agreement: 0.0,
        });
    };
    if !split.matches(cfg) {
        return Err(Error::InvalidConfig(format!(
            "split p = {}, q = {} does not describe a = {} on L = {}",
            split.p, split.q, cfg.position, cfg.length
        )));
    }
    let spectrum = RationalSpectrum::solve(split, cfg.alpha)?;
    let effective = StringConfig {
        alpha: spectrum.alpha(),
        ..*cfg
    };
    let closed = det_closed(&effective, cut);
    let from_roots = det_from_roots(&spectrum.mus, split, cut);
    let simplified = zeta_prime0_simplified(&spectrum.mus, split, cut)?;
    let hurwitz = zeta_prime0_hurwitz_path(&spectrum.mus, split, cut)?;
    let zeta_path = hurwitz.determinant();

    let agreement = [
        relative_deviation(closed, from_roots),
        relative_deviation(closed, zeta_path),
        relative_deviation(from_roots, zeta_path),
        simplified.mismatch,
        hurwitz.mismatch,
    ]
    .into_iter()
    .fold(0.0, f64::max);
    if !(agreement <= AGREEMENT_TOL) {
        return Err(Error::Agreement {
            deviation: agreement,
            tolerance: AGREEMENT_TOL,
        });
    }
    Ok(DeterminantReport {
        closed,
        from_roots: Some(from_roots),
        zeta_path: Some(zeta_path),
        zeta_prime: Some(hurwitz.value),
        branch_integer: Some(hurwitz.branch_integer),
        cut,
        regime: spectrum.regime(),
        agreement,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cfg(l: f64, a: f64, alpha: f64) -> StringConfig {
        StringConfig::new(l, a, c(alpha, 0.0)).unwrap()
    }

    fn spectrum(p: u32, q: u32, alpha: Complex64) -> RationalSpectrum {
        RationalSpectrum::solve(&RationalSplit::new(1.0, p, q).unwrap(), alpha).unwrap()
    }

    #[test]
    fn closed_form_cases() {
        assert_eq!(
            det_closed(&cfg(1.0, 0.3, 1.0), BranchCut::neg()),
            c(4.0, 0.0)
        );
        assert_eq!(
            det_closed(&cfg(1.0, 0.5, 2.0), BranchCut::neg()),
            c(1.0, 0.0)
        );
        assert_eq!(
            det_closed(&cfg(1.0, 0.3, 2.0), BranchCut::neg()),
            c(2.0, 0.0)
        );
        assert_eq!(
            det_closed(&cfg(1.0, 0.7, 0.0), BranchCut::pos()),
            c(-2.0, 0.0)
        );
        assert_eq!(
            det_closed(&cfg(1.0, 0.3, -2.0), BranchCut::pos()),
            c(-2.0, 0.0)
        );
        assert_eq!(
            det_closed(&cfg(1.0, 0.5, -2.0), BranchCut::pos()),
            c(-1.0, 0.0)
        );
        assert_eq!(
            det_closed(&cfg(2.0, 0.5, 2.0), BranchCut::pos()),
            c(-2.0, 0.0)
        );
    }

    #[test]
    fn root_product_examples() {
        let sp = spectrum(1, 1, c(6.0, 0.0));
        let det = det_from_roots(&sp.mus, &sp.split, BranchCut::neg());
        assert!((det - c(-1.0, 0.0)).norm() < 1e-14);

        for alpha in [2.0, -2.0] {
            let sp = spectrum(1, 1, c(alpha, 0.0));
            assert_eq!(
                det_from_roots(&sp.mus, &sp.split, BranchCut::neg()),
                c(1.0, 0.0)
            );
            assert_eq!(
                det_from_roots(&sp.mus, &sp.split, BranchCut::pos()),
                c(-1.0, 0.0)
            );
        }

        let sp = spectrum(2, 1, c(0.0, 0.0));
        let det = det_from_roots(&sp.mus, &sp.split, BranchCut::neg());
        assert!((det - c(2.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn root_product_survives_huge_factors() {
        // μ with Re μ L0 far past the overflow threshold.
        let split = RationalSplit::new(1.0, 1, 1).unwrap();
        let mu = MuValue {
            mu: c(-2000.0, 0.3),
            z: c(0.0, 0.0),
            multiplicity: 1,
        };
        let prod = root_product(&[mu], &split, BranchCut::neg());
        assert!(prod.mantissa.norm().is_finite());
        assert!((prod.log().re - (2000.0 + 1.0f64.ln())).abs() < 1e-9);
    }

    #[test]
    fn simplified_path_examples() {
        let sp = spectrum(1, 1, c(0.0, 0.0));
        let zp = zeta_prime0_simplified(&sp.mus, &sp.split, BranchCut::neg()).unwrap();
        assert!((zp.value - c(-LN_2, 0.0)).norm() < 1e-14, "{:?}", zp);

        let sp = spectrum(1, 1, c(6.0, 0.0));
        let zp = zeta_prime0_simplified(&sp.mus, &sp.split, BranchCut::neg()).unwrap();
        assert!((zp.determinant() - c(-1.0, 0.0)).norm() < 1e-13);
        assert!(zp.mismatch < 1e-13);

        let sp = spectrum(2, 1, c(0.0, 0.0));
        let zp = zeta_prime0_simplified(&sp.mus, &sp.split, BranchCut::neg()).unwrap();
        assert!((zp.determinant() - c(2.0, 0.0)).norm() < 1e-13);
        assert!((zp.value - c(-LN_2, 0.0)).norm() < 1e-13 || zp.branch_integer != 0);
    }

    #[test]
    fn hurwitz_path_examples() {
        let sp = spectrum(1, 1, c(0.0, 0.0));
        let zp = zeta_prime0_hurwitz_path(&sp.mus, &sp.split, BranchCut::neg()).unwrap();
        assert!(zp.mismatch < 1e-12);
        assert!((zp.determinant() - c(2.0, 0.0)).norm() < 1e-12);

        let sp = spectrum(1, 1, c(6.0, 0.0));
        let zp = zeta_prime0_hurwitz_path(&sp.mus, &sp.split, BranchCut::neg()).unwrap();
        assert!((zp.determinant() - c(-1.0, 0.0)).norm() < 1e-12);

        let sp = spectrum(1, 1, c(0.0, 0.0));
        let zp = zeta_prime0_hurwitz_path(&sp.mus, &sp.split, BranchCut::pos()).unwrap();
        assert!((zp.determinant() - c(-2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn log_sinh_is_principal() {
        for w in [c(40.0, 1.0), c(-45.0, 3.0), c(100.0, -2.5), c(0.3, 0.2)] {
            let a = log_sinh(w);
            assert!(a.im > -PI && a.im <= PI);
            if w.re.abs() < 300.0 {
                let direct = w.sinh();
                assert!(((a.exp() - direct) / direct).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn zeta_undamped_lattice() {
        let split = RationalSplit::new(1.0, 1, 1).unwrap();
        let source = SpectrumSource::Rational {
            split,
            alpha: c(0.0, 0.0),
        };
        let z2 = zeta_direct(&source, c(2.0, 0.0), BranchCut::neg(), 200.0).unwrap();
        assert!(
            (z2.value - c(-1.0 / 3.0, 0.0)).norm() <= z2.tail_bar,
            "{:?}",
            z2
        );
        let z4 = zeta_direct(&source, c(4.0, 0.0), BranchCut::neg(), 200.0).unwrap();
        assert!((z4.value - c(1.0 / 45.0, 0.0)).norm() <= z4.tail_bar);

        let sp = spectrum(1, 1, c(0.0, 0.0));
        let a2 = zeta_assembled(&sp.mus, &sp.split, c(2.0, 0.0), BranchCut::neg()).unwrap();
        assert!((a2 - c(-1.0 / 3.0, 0.0)).norm() < 1e-13);
        assert!(zeta_direct(&source, c(1.0, 0.0), BranchCut::neg(), 10.0).is_err());
    }

    #[test]
    fn zeta_direct_matches_assembled_when_damped() {
        let split = RationalSplit::new(1.0, 1, 1).unwrap();
        let alpha = c(6.0, 0.0);
        let sp = RationalSpectrum::solve(&split, alpha).unwrap();
        for side in [BranchCut::neg(), BranchCut::pos()] {
            let direct = zeta_direct(
                &SpectrumSource::Rational { split, alpha },
                c(2.0, 0.0),
                side,
                300.0,
            )
            .unwrap();
            let assembled = zeta_assembled(&sp.mus, &split, c(2.0, 0.0), side).unwrap();
            assert!(
                (direct.value - assembled).norm() <= direct.tail_bar,
                "{direct:?} vs {assembled}"
            );
        }
    }

    #[test]
    fn report_paths_agree() {
        let split = RationalSplit::new(1.0, 1, 2).unwrap();
        let cf = StringConfig::from_split(&split, c(1.0, 0.0)).unwrap();
        let rep = determinant_report(&cf, BranchCut::neg(), Some(&split)).unwrap();
        assert!((rep.closed - c(4.0, 0.0)).norm() < 1e-15);
        assert!(rep.agreement < 1e-10);

        let split = RationalSplit::new(1.0, 1, 1).unwrap();
        let cf = cfg(1.0, 0.5, 2.0);
        let rep = determinant_report(&cf, BranchCut::neg(), Some(&split)).unwrap();
        assert_eq!(rep.regime, Regime::Trivial);
        assert!((rep.zeta_path.unwrap() - c(1.0, 0.0)).norm() < 1e-12);

        let split = RationalSplit::new(1.0, 2, 3).unwrap();
        let cf = cfg(1.0, 0.4, -2.0);
        let rep = determinant_report(&cf, BranchCut::pos(), Some(&split)).unwrap();
        assert_eq!(rep.regime, Regime::AlphaMinus2);
        assert!((rep.from_roots.unwrap() - c(-2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn report_without_split_or_with_wrong_split() {
        let cf = cfg(1.0, 0.61803, 0.0);
        let rep = determinant_report(&cf, BranchCut::neg(), None).unwrap();
        assert_eq!(rep.closed, c(2.0, 0.0));
        assert!(rep.from_roots.is_none() && rep.zeta_path.is_none());

        let split = RationalSplit::new(1.0, 1, 1).unwrap();
        assert!(matches!(
            determinant_report(&cf, BranchCut::neg(), Some(&split)),
            Err(Error::InvalidConfig(_))
        ));
    }
}
