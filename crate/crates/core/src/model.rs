//! Problem instance, branch-cut conventions and the raw spectral condition.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative tolerance used when comparing positions and exponents.
pub const REL_TOL: f64 = 1e-12;

/// Above this value of `|Re λ| L` the residual is evaluated in log-scaled form.
const SCALED_THRESHOLD: f64 = 30.0;

/// A string of length `L` damped at `a` with strength `alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StringConfig {
    pub length: f64,
    pub position: f64,
    pub alpha: Complex64,
}

impl StringConfig {
    pub fn new(length: f64, position: f64, alpha: Complex64) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "length must be positive, got {length}"
            )));
        }
        if !(position > 0.0 && position < length) {
            return Err(Error::InvalidConfig(format!(
                "position must lie in (0, {length}), got {position}"
            )));
        }
        if !(alpha.re.is_finite() && alpha.im.is_finite()) {
            return Err(Error::InvalidConfig("alpha must be finite".into()));
        }
        Ok(StringConfig {
            length,
            position,
            alpha,
        })
    }

    /// Configuration whose damping point sits at `p L0` with `L0 = L / (p + q)`.
    pub fn from_split(split: &RationalSplit, alpha: Complex64) -> Result<Self> {
        StringConfig::new(split.length(), split.p as f64 * split.l0, alpha)
    }

    /// The configuration with `a` replaced by `L - a`.
    pub fn mirrored(&self) -> Self {
        StringConfig {
            position: self.length - self.position,
            ..*self
        }
    }

    /// Length of the other piece, `L - a`.
    pub fn complement(&self) -> f64 {
        self.length - self.position
    }

    /// Whether `a = L/2` to relative tolerance.
    pub fn is_centered(&self) -> bool {
        (self.position - 0.5 * self.length).abs() <= REL_TOL * self.length
    }
}

/// Which ray the logarithm's branch cut runs along.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CutSide {
    /// Cut just below the negative real axis; arguments in `(-π, π]`.
    NegAxis,
    /// Cut just below the positive real axis; arguments in `[0, 2π)`.
    PosAxis,
}

impl CutSide {
    pub fn name(self) -> &'static str {
        match self {
            CutSide::NegAxis => "neg",
            CutSide::PosAxis => "pos",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchCut {
    pub side: CutSide,
    /// Angular margin on the excluded side of the cut.
    pub epsilon: f64,
}

impl BranchCut {
    pub const DEFAULT_EPSILON: f64 = 1e-6;

    pub fn new(side: CutSide) -> Self {
        BranchCut {
            side,
            epsilon: Self::DEFAULT_EPSILON,
        }
    }

    pub fn neg() -> Self {
        Self::new(CutSide::NegAxis)
    }

    pub fn pos() -> Self {
        Self::new(CutSide::PosAxis)
    }

    pub fn with_epsilon(self, epsilon: f64) -> Self {
        BranchCut { epsilon, ..self }
    }

    /// Argument of `lambda` in this cut's range. See [`cut_argument`].
    pub fn argument(&self, lambda: Complex64) -> Result<f64> {
        cut_argument(lambda, *self)
    }

    /// `log λ` with the imaginary part taken from [`cut_argument`].
    pub fn log(&self, lambda: Complex64) -> Result<Complex64> {
        let arg = self.argument(lambda)?;
        Ok(Complex64::new(lambda.norm().ln(), arg))
    }

    /// `λ^{-s} = exp(-s log λ)` on this branch.
    pub fn pow_neg(&self, lambda: Complex64, s: Complex64) -> Result<Complex64> {
        Ok((-s * self.log(lambda)?).exp())
    }
}

/// Argument of a nonzero `lambda` in `(-π, π]` (negative-axis cut) or
/// `[0, 2π)` (positive-axis cut).
///
/// Fails when the argument lies within `epsilon` of the cut ray on its
/// excluded side: `(π, π + ε]` for the negative-axis cut, `[-ε, 0)` for the
/// positive-axis cut.
pub fn cut_argument(lambda: Complex64, cut: BranchCut) -> Result<f64> {
    if lambda.re == 0.0 && lambda.im == 0.0 {
        return Err(Error::Domain("argument of zero".into()));
    }
    let mut arg = lambda.im.atan2(lambda.re);
    match cut.side {
        CutSide::NegAxis => {
            if arg <= -PI {
                arg = PI;
            }
            if arg < 0.0 && arg <= -PI + cut.epsilon {
                return Err(Error::OnCut {
                    arg: arg + 2.0 * PI,
                    epsilon: cut.epsilon,
                });
            }
            Ok(arg)
        }
        CutSide::PosAxis => {
            if arg < 0.0 {
                arg += 2.0 * PI;
                if arg >= 2.0 * PI - cut.epsilon {
                    return Err(Error::OnCut {
                        arg: arg - 2.0 * PI,
                        epsilon: cut.epsilon,
                    });
                }
            }
            Ok(arg + 0.0)
        }
    }
}

/// Decomposition `a = p L0`, `L - a = q L0` with coprime `p >= q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RationalSplit {
    pub p: u32,
    pub q: u32,
    pub l0: f64,
    /// Set when the caller's `(p, q)` had `p < q` and was swapped.
    pub swapped: bool,
}

impl RationalSplit {
    /// Split of a string of length `length` in the ratio `p : q`.
    pub fn new(length: f64, p: u32, q: u32) -> Result<Self> {
        if p == 0 || q == 0 {
            return Err(Error::InvalidConfig("p and q must be positive".into()));
        }
        if gcd(p, q) != 1 {
            return Err(Error::InvalidConfig(format!(
                "p = {p} and q = {q} are not coprime"
            )));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "length must be positive, got {length}"
            )));
        }
        let (p, q, swapped) = if p >= q { (p, q, false) } else { (q, p, true) };
        Ok(RationalSplit {
            p,
            q,
            l0: length / f64::from(p + q),
            swapped,
        })
    }

    /// Recover a split from a floating-point position by continued fractions,
    /// using denominators `p + q <= max_denominator`. Returns `None` unless
    /// the best approximant reproduces `a` to relative `1e-12`.
    pub fn from_position(length: f64, position: f64, max_denominator: u32) -> Option<Self> {
        let x = position / length;
        if !(x > 0.0 && x < 1.0) {
            return None;
        }
        let (num, den) = best_rational(x, max_denominator)?;
        if num == 0 || num >= den {
            return None;
        }
        let split = RationalSplit::new(length, num, den - num).ok()?;
        let a = f64::from(num) * split.l0;
        ((a - position).abs() <= REL_TOL * length).then_some(split)
    }

    pub fn length(&self) -> f64 {
        f64::from(self.p + self.q) * self.l0
    }

    /// Whether this split describes `cfg` (either orientation).
    pub fn matches(&self, cfg: &StringConfig) -> bool {
        let tol = REL_TOL * cfg.length.max(1.0);
        if (self.length() - cfg.length).abs() > tol {
            return false;
        }
        let a = f64::from(self.p) * self.l0;
        let b = f64::from(self.q) * self.l0;
        (a - cfg.position).abs() <= tol || (b - cfg.position).abs() <= tol
    }

    pub fn is_centered(&self) -> bool {
        self.p == 1 && self.q == 1
    }
}

pub(crate) fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Best continued-fraction convergent `num/den` of `x` with `den <= max_den`.
fn best_rational(x: f64, max_den: u32) -> Option<(u32, u32)> {
    let (mut h0, mut h1) = (0u64, 1u64);
    let (mut k0, mut k1) = (1u64, 0u64);
    let mut rest = x;
    let mut best = None;
    for _ in 0..64 {
        let a = rest.floor();
        if a > u32::MAX as f64 {
            break;
        }
        let a = a as u64;
        let h2 = a * h1 + h0;
        let k2 = a * k1 + k0;
        if k2 > u64::from(max_den) {
            break;
        }
        best = Some((h2 as u32, k2 as u32));
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = rest - a as f64;
        if frac.abs() < 1e-15 {
            break;
        }
        rest = 1.0 / frac;
    }
    best
}

/// A root `μ` of the reduced polynomial with `Im μ ∈ (-π/(2L0), π/(2L0)]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MuValue {
    pub mu: Complex64,
    /// `exp(2 L0 μ)`.
    pub z: Complex64,
    pub multiplicity: u32,
}

/// Which family an eigenvalue belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// `j π i / L0`, `j != 0`.
    Lattice { j: i64 },
    /// `μ_k + j π i / L0`.
    Shifted { k: usize, j: i64 },
    /// Located numerically; `j` is the ordinal by imaginary part (positive in
    /// the upper half-plane, negative in the lower, zero on the real axis).
    Located { j: i64 },
}

impl Family {
    pub fn tag(&self) -> &'static str {
        match self {
            Family::Lattice { .. } => "lattice",
            Family::Shifted { .. } => "shifted",
            Family::Located { .. } => "located",
        }
    }

    pub fn k(&self) -> Option<usize> {
        match self {
            Family::Shifted { k, .. } => Some(*k),
            _ => None,
        }
    }

    pub fn j(&self) -> i64 {
        match *self {
            Family::Lattice { j } | Family::Shifted { j, .. } | Family::Located { j } => j,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenvalueRecord {
    pub value: Complex64,
    pub family: Family,
    pub multiplicity: u32,
    /// `|residual| / max(1, |sinh(L λ)|)`.
    pub residual: f64,
}

/// Residual checks accept `|residual| <= RESIDUAL_TOL * max(1, |sinh(L λ)|)`.
pub const RESIDUAL_TOL: f64 = 1e-9;

/// A complex number stored as `mantissa * exp(log_scale)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledValue {
    pub mantissa: Complex64,
    pub log_scale: f64,
}

impl ScaledValue {
    pub fn unscaled(value: Complex64) -> Self {
        ScaledValue {
            mantissa: value,
            log_scale: 0.0,
        }
    }

    /// The represented value; may overflow to infinity.
    pub fn value(&self) -> Complex64 {
        self.mantissa * self.log_scale.exp()
    }

    /// `ln |value|` without overflow.
    pub fn ln_norm(&self) -> f64 {
        self.mantissa.norm().ln() + self.log_scale
    }
}

/// `sinh(L λ) + α sinh(a λ) sinh((L - a) λ)`.
///
/// When `|Re λ| L > 30` the dominant exponential is factored out and the
/// result is returned as a mantissa with a log-scale.
pub fn spectral_residual(lambda: Complex64, cfg: &StringConfig) -> ScaledValue {
    let (l, a, b) = (cfg.length, cfg.position, cfg.complement());
    if lambda.re.abs() * l <= SCALED_THRESHOLD {
        let value = (lambda * l).sinh() + cfg.alpha * (lambda * a).sinh() * (lambda * b).sinh();
        return ScaledValue::unscaled(value);
    }
    // residual = exp(-L λ) g(λ) / 4
    let terms = raw_terms(cfg);
    let log_mag = |r: Complex64, beta: f64| r.norm().ln() + (beta - l) * lambda.re;
    let shift = terms
        .iter()
        .filter(|(r, _)| *r != Complex64::new(0.0, 0.0))
        .map(|&(r, beta)| log_mag(r, beta))
        .fold(f64::NEG_INFINITY, f64::max);
    let mantissa = terms
        .iter()
        .map(|&(r, beta)| r * (lambda * (beta - l) - shift).exp())
        .sum::<Complex64>()
        * 0.25;
    ScaledValue {
        mantissa,
        log_scale: shift,
    }
}

/// `ln |sinh(w)|` evaluated without overflow.
pub(crate) fn ln_abs_sinh(w: Complex64) -> f64 {
    if w.re.abs() <= SCALED_THRESHOLD {
        return w.sinh().norm().ln();
    }
    let s = w.re.signum();
    s * w.re
        + (Complex64::new(1.0, 0.0) - (-2.0 * s * w).exp())
            .norm()
            .ln()
        - std::f64::consts::LN_2
}

/// `|residual(λ)| / max(1, |sinh(L λ)|)`.
pub fn relative_residual(lambda: Complex64, cfg: &StringConfig) -> f64 {
    let res = spectral_residual(lambda, cfg);
    if res.mantissa == Complex64::new(0.0, 0.0) {
        return 0.0;
    }
    let denom = ln_abs_sinh(lambda * cfg.length).max(0.0);
    (res.ln_norm() - denom).exp()
}

fn raw_terms(cfg: &StringConfig) -> [(Complex64, f64); 4] {
    let two = Complex64::new(2.0, 0.0);
    let (l, a) = (cfg.length, cfg.position);
    [
        (cfg.alpha - two, 0.0),
        (-cfg.alpha, 2.0 * a),
        (-cfg.alpha, 2.0 * (l - a)),
        (two + cfg.alpha, 2.0 * l),
    ]
}

/// `g(λ) = Σ r_j exp(β_j λ)` with `0 = β_0 < β_1 < ... < β_n`, all `r_j != 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpPolynomialForm {
    terms: Vec<(Complex64, f64)>,
}

impl ExpPolynomialForm {
    /// Build from arbitrary `(r, β)` pairs: sorts by `β`, merges equal
    /// exponents (relative `1e-12`) by summing, then drops zero coefficients.
    pub fn from_terms(mut terms: Vec<(Complex64, f64)>) -> Self {
        terms.sort_by(|x, y| x.1.total_cmp(&y.1));
        let scale = terms
            .iter()
            .map(|t| t.1.abs())
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        let mut merged: Vec<(Complex64, f64)> = Vec::with_capacity(terms.len());
        for (r, beta) in terms {
            match merged.last_mut() {
                Some(last) if (beta - last.1).abs() <= REL_TOL * scale => last.0 += r,
                _ => merged.push((r, beta)),
            }
        }
        merged.retain(|(r, _)| *r != Complex64::new(0.0, 0.0));
        ExpPolynomialForm { terms: merged }
    }

    pub fn terms(&self) -> &[(Complex64, f64)] {
        &self.terms
    }

    /// Largest exponent minus smallest.
    pub fn spread(&self) -> f64 {
        match (self.terms.first(), self.terms.last()) {
            (Some(first), Some(last)) => last.1 - first.1,
            _ => 0.0,
        }
    }

    fn log_shift(&self, re: f64) -> f64 {
        self.terms
            .iter()
            .map(|&(r, beta)| r.norm().ln() + beta * re)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `g(λ)` in scaled form.
    pub fn eval(&self, lambda: Complex64) -> ScaledValue {
        let shift = self.log_shift(lambda.re);
        let mantissa = self
            .terms
            .iter()
            .map(|&(r, beta)| r * (lambda * beta - shift).exp())
            .sum();
        ScaledValue {
            mantissa,
            log_scale: shift,
        }
    }

    /// `(g, g', Σ|r_j e^{β_j λ}|)` sharing one scale factor (returned last).
    pub fn eval_with_derivative(&self, lambda: Complex64) -> (Complex64, Complex64, f64, f64) {
        let shift = self.log_shift(lambda.re);
        let mut g = Complex64::new(0.0, 0.0);
        let mut dg = Complex64::new(0.0, 0.0);
        let mut mag = 0.0;
        for &(r, beta) in &self.terms {
            let t = r * (lambda * beta - shift).exp();
            g += t;
            dg += t * beta;
            mag += t.norm();
        }
        (g, dg, mag, shift)
    }
}

/// Exponential-polynomial form of the spectral condition,
/// `(α-2) - α e^{2aλ} - α e^{2(L-a)λ} + (2+α) e^{2Lλ}`, which equals
/// `4 e^{Lλ}` times [`spectral_residual`].
pub fn build_exp_form(cfg: &StringConfig) -> ExpPolynomialForm {
    ExpPolynomialForm::from_terms(raw_terms(cfg).to_vec())
}

/// Rectangle `{λ : |Re λ| < c1, |Im λ - center| <= halfwidth}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StripBox {
    pub c1: f64,
    pub center: f64,
    pub halfwidth: f64,
}

impl StripBox {
    pub fn new(c1: f64, center: f64, halfwidth: f64) -> Result<Self> {
        if !(c1 > 0.0 && halfwidth > 0.0) {
            return Err(Error::InvalidConfig(
                "strip box needs c1 > 0 and halfwidth > 0".into(),
            ));
        }
        Ok(StripBox {
            c1,
            center,
            halfwidth,
        })
    }
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

    #[test]
    fn residual_vanishes_on_lattice_and_at_origin() {
        let undamped = cfg(1.0, 0.5, 0.0);
        assert!(spectral_residual(c(0.0, PI), &undamped).value().norm() < 1e-15);
        for alpha in [0.0, 1.0, -3.5, 6.0] {
            let r = spectral_residual(c(0.0, 0.0), &cfg(2.0, 0.7, alpha));
            assert_eq!(r.value(), c(0.0, 0.0));
        }
    }

    #[test]
    fn residual_vanishes_at_tanh_root() {
        // a = L/2: tanh(Lλ/2) = -2/α; α = 6 gives λ = -ln 2.
        let r = spectral_residual(c(-std::f64::consts::LN_2, 0.0), &cfg(1.0, 0.5, 6.0));
        assert!(r.value().norm() < 1e-14, "{:?}", r);
    }

    #[test]
    fn scaled_residual_matches_direct_evaluation() {
        let cf = cfg(1.0, 0.3, 1.5);
        for lam in [c(31.0, 2.0), c(-35.0, 0.4), c(40.0, -7.0)] {
            let scaled = spectral_residual(lam, &cf);
            let direct = (lam).sinh() + cf.alpha * (lam * 0.3).sinh() * (lam * 0.7).sinh();
            let rel = (scaled.value() - direct).norm() / direct.norm();
            assert!(rel < 1e-12, "{lam}: {rel}");
        }
        // Far beyond the overflow threshold the scaled form stays finite.
        let huge = spectral_residual(c(2000.0, 1.0), &cf);
        assert!(huge.mantissa.norm().is_finite() && huge.log_scale > 1000.0);
    }

    #[test]
    fn exp_form_examples() {
        let f = build_exp_form(&cfg(1.0, 0.3, 1.0));
        let expect = [(-1.0, 0.0), (-1.0, 0.6), (-1.0, 1.4), (3.0, 2.0)];
        assert_eq!(f.terms().len(), 4);
        for (&(r, beta), (er, eb)) in f.terms().iter().zip(expect) {
            assert!((r - c(er, 0.0)).norm() < 1e-15 && (beta - eb).abs() < 1e-15);
        }

        let f = build_exp_form(&cfg(1.0, 0.5, 0.0));
        assert_eq!(f.terms(), &[(c(-2.0, 0.0), 0.0), (c(2.0, 0.0), 2.0)]);

        let f = build_exp_form(&cfg(1.0, 0.5, -2.0));
        assert_eq!(f.terms(), &[(c(-4.0, 0.0), 0.0), (c(4.0, 0.0), 1.0)]);
    }

    #[test]
    fn exp_form_drops_end_terms_at_critical_alpha() {
        let f = build_exp_form(&cfg(1.0, 0.3, 2.0));
        assert_eq!(f.terms().len(), 3);
        assert_eq!(f.terms()[0].1, 0.6);
        let f = build_exp_form(&cfg(1.0, 0.3, -2.0));
        assert_eq!(f.terms().len(), 3);
        assert_eq!(f.terms()[2].1, 1.4);
    }

    #[test]
    fn cut_argument_examples() {
        assert_eq!(cut_argument(c(-1.0, 0.0), BranchCut::neg()).unwrap(), PI);
        assert_eq!(cut_argument(c(-1.0, -0.0), BranchCut::neg()).unwrap(), PI);
        assert!((cut_argument(c(0.0, -1.0), BranchCut::pos()).unwrap() - 1.5 * PI).abs() < 1e-15);
        assert!((cut_argument(c(0.0, -1.0), BranchCut::neg()).unwrap() + 0.5 * PI).abs() < 1e-15);
        assert_eq!(cut_argument(c(1.0, -0.0), BranchCut::pos()).unwrap(), 0.0);
    }

    #[test]
    fn cut_argument_rejects_excluded_side() {
        let just_below_neg = c(-1.0, -1e-8);
        assert!(matches!(
            cut_argument(just_below_neg, BranchCut::neg()),
            Err(Error::OnCut { .. })
        ));
        assert!(cut_argument(just_below_neg, BranchCut::pos()).is_ok());

        let just_below_pos = c(1.0, -1e-8);
        assert!(matches!(
            cut_argument(just_below_pos, BranchCut::pos()),
            Err(Error::OnCut { .. })
        ));
        assert!(cut_argument(just_below_pos, BranchCut::neg()).is_ok());
        // Outside the margin the argument is fine.
        assert!(cut_argument(c(1.0, -1e-3), BranchCut::pos()).is_ok());
        assert!(cut_argument(c(0.0, 0.0), BranchCut::pos()).is_err());
    }

    #[test]
    fn split_normalizes_and_validates() {
        let s = RationalSplit::new(1.0, 1, 2).unwrap();
        assert_eq!((s.p, s.q, s.swapped), (2, 1, true));
        assert!((s.l0 - 1.0 / 3.0).abs() < 1e-16);
        assert!(RationalSplit::new(1.0, 2, 4).is_err());
        assert!(RationalSplit::new(1.0, 0, 1).is_err());

        let s = RationalSplit::new(1.0, 2, 3).unwrap();
        assert_eq!((s.p, s.q), (3, 2));
        assert!(s.matches(&cfg(1.0, 0.4, 0.0)));
        assert!(s.matches(&cfg(1.0, 0.6, 0.0)));
        assert!(!s.matches(&cfg(1.0, 0.5, 0.0)));
    }

    #[test]
    fn split_from_position() {
        let s = RationalSplit::from_position(1.0, 0.3, 100).unwrap();
        assert_eq!((s.p, s.q), (7, 3));
        let s = RationalSplit::from_position(2.0, 2.0 / 3.0, 100).unwrap();
        assert_eq!((s.p, s.q), (2, 1));
        assert!(RationalSplit::from_position(1.0, 0.5f64.sqrt(), 1000).is_none());
        assert!(RationalSplit::from_position(1.0, 0.3, 5).is_none());
    }

    #[test]
    fn config_validation() {
        assert!(StringConfig::new(0.0, 0.1, c(0.0, 0.0)).is_err());
        assert!(StringConfig::new(1.0, 1.0, c(0.0, 0.0)).is_err());
        assert!(StringConfig::new(1.0, 0.0, c(0.0, 0.0)).is_err());
        assert!(cfg(1.0, 0.5, 2.0).is_centered());
        assert!(!cfg(1.0, 0.3, 2.0).is_centered());
    }
}
