//! Spectrum for a rational damping position `a = p L0`, `L - a = q L0`.
//!
//! With `z = exp(2 L0 λ)` the spectral condition becomes
//! `(2+α) z^{p+q} - α z^p - α z^q + (α-2) = 0`. The root `z = 1` gives the
//! lattice `j π i / L0`; the remaining roots `z_k = exp(2 L0 μ_k)` give the
//! shifted families `μ_k + j π i / L0`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{
    relative_residual, EigenvalueRecord, Family, MuValue, RationalSplit, StringConfig, RESIDUAL_TOL,
};

/// `α` closer than this to `±2` is treated as exactly `±2`.
pub const SNAP_TOL: f64 = 1e-8;
/// Roots closer than this (relative to `max(1, |z|)`) are merged.
pub const CLUSTER_TOL: f64 = 1e-7;
pub const MAX_SWEEPS: usize = 500;
/// Roots with `|arg z|` below this are taken as positive reals.
const REAL_ROOT_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `α ∉ {±2}`: degree `p + q - 1`.
    Generic,
    /// `α = -2`, `p > q`: degree `p - 1`.
    AlphaMinus2,
    /// `α = 2`, `p > q`: degree `p - 1`.
    AlphaPlus2,
    /// `α = ±2`, `p = q = 1`: no shifted family.
    Trivial,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::Generic => "generic",
            Regime::AlphaMinus2 => "alpha_minus_2",
            Regime::AlphaPlus2 => "alpha_plus_2",
            Regime::Trivial => "trivial",
        }
    }

    /// Classify `alpha` for a split, snapping values within [`SNAP_TOL`] of `±2`.
    /// Returns the regime and the effective `alpha`.
    pub fn classify(split: &RationalSplit, alpha: Complex64) -> (Regime, Complex64) {
        let plus = Complex64::new(2.0, 0.0);
        let (regime, snapped) = if (alpha - plus).norm() <= SNAP_TOL {
            (Regime::AlphaPlus2, plus)
        } else if (alpha + plus).norm() <= SNAP_TOL {
            (Regime::AlphaMinus2, -plus)
        } else {
            return (Regime::Generic, alpha);
        };
        if snapped != alpha {
            log::warn!("alpha = {alpha} snapped to {snapped}");
        }
        if split.is_centered() {
            (Regime::Trivial, snapped)
        } else {
            (regime, snapped)
        }
    }
}

/// Reduced polynomial in `z`, coefficients highest degree first.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedPolynomial {
    pub coeffs: Vec<Complex64>,
    pub regime: Regime,
    /// `alpha` after snapping to `±2`.
    pub alpha: Complex64,
}

impl ReducedPolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Divide through by the leading coefficient.
    pub fn monic(&self) -> Vec<Complex64> {
        match self.coeffs.first() {
            Some(&lead) => self.coeffs.iter().map(|&c| c / lead).collect(),
            None => Vec::new(),
        }
    }
}

/// Polynomial whose roots are the `z_k` of the shifted families.
pub fn build_reduced_polynomial(split: &RationalSplit, alpha: Complex64) -> ReducedPolynomial {
    let (regime, alpha) = Regime::classify(split, alpha);
    let (p, q) = (split.p as usize, split.q as usize);
    let one = Complex64::new(1.0, 0.0);
    let two = Complex64::new(2.0, 0.0);
    let coeffs: Vec<Complex64> = match regime {
        Regime::Generic => (0..p + q)
            .rev()
            .map(|d| {
                if d >= p {
                    alpha + two
                } else if d >= q {
                    two
                } else {
                    two - alpha
                }
            })
            .collect(),
        Regime::AlphaMinus2 => (0..p)
            .rev()
            .map(|d| if d >= q { one } else { two })
            .collect(),
        Regime::AlphaPlus2 => (0..p)
            .rev()
            .map(|d| if d >= p - q { one } else { 0.5 * one })
            .collect(),
        Regime::Trivial => Vec::new(),
    };
    ReducedPolynomial {
        coeffs,
        regime,
        alpha,
    }
}

/// Horner evaluation of `p / p'` and the backward-error ratio
/// `|p(z)| / Σ |c_k| |z|^k`, switching to the reversed polynomial for `|z| > 1`.
fn newton_ratio(coeffs: &[Complex64], z: Complex64) -> (Complex64, f64) {
    let n = coeffs.len() - 1;
    let zero = Complex64::new(0.0, 0.0);
    if z.norm() <= 1.0 {
        let (mut p, mut dp, mut mag) = (zero, zero, 0.0);
        let zn = z.norm();
        for &c in coeffs {
            dp = dp * z + p;
            p = p * z + c;
            mag = mag * zn + c.norm();
        }
        (p / dp, p.norm() / mag)
    } else {
        // p(z) = z^n R(w), w = 1/z;  p/p' = z R / (n R - w R')
        let w = z.inv();
        let wn = w.norm();
        let (mut r, mut dr, mut mag) = (zero, zero, 0.0);
        for &c in coeffs.iter().rev() {
            dr = dr * w + r;
            r = r * w + c;
            mag = mag * wn + c.norm();
        }
        (z * r / (r * n as f64 - w * dr), r.norm() / mag)
    }
}

/// Initial guesses from the upper convex hull of `(k, ln|c_k|)`: one circle
/// per hull edge, with radius matching that group of root moduli.
fn initial_guesses(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    // lowest degree first
    let pts: Vec<(usize, f64)> = coeffs
        .iter()
        .rev()
        .enumerate()
        .filter(|(_, c)| c.norm() > 0.0)
        .map(|(k, c)| (k, c.norm().ln()))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &pt in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross =
                (b.0 as f64 - a.0 as f64) * (pt.1 - a.1) - (b.1 - a.1) * (pt.0 as f64 - a.0 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let sigma = 0.7;
    let mut guesses = Vec::with_capacity(n);
    for pair in hull.windows(2) {
        let (k0, l0) = pair[0];
        let (k1, l1) = pair[1];
        let count = k1 - k0;
        let radius = ((l0 - l1) / count as f64).exp();
        for i in 0..count {
            let theta =
                2.0 * PI * i as f64 / count as f64 + 2.0 * PI * k0 as f64 / n as f64 + sigma;
            guesses.push(Complex64::from_polar(radius, theta));
        }
    }
    guesses
}

/// All roots of a polynomial (highest degree first) by Aberth–Ehrlich
/// simultaneous iteration, with multiplicity.
pub fn find_roots_of(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let zero = Complex64::new(0.0, 0.0);
    let start = coeffs
        .iter()
        .position(|&c| c != zero)
        .unwrap_or(coeffs.len());
    let coeffs = &coeffs[start..];
    if coeffs.len() < 2 {
        return Err(Error::Domain("polynomial of degree < 1".into()));
    }
    // Exact zero roots.
    let nonzero_tail = coeffs.iter().rposition(|&c| c != zero).unwrap();
    let zero_roots = coeffs.len() - 1 - nonzero_tail;
    let coeffs = &coeffs[..=nonzero_tail];
    let mut roots = vec![zero; zero_roots];
    let n = coeffs.len() - 1;
    if n == 0 {
        return Ok(roots);
    }
    if n == 1 {
        roots.push(-coeffs[1] / coeffs[0]);
        return Ok(roots);
    }

    let tol = 4.0 * n as f64 * f64::EPSILON;
    let mut z = initial_guesses(coeffs);
    let mut done = vec![false; n];
    let mut sweeps = 0;
    while done.iter().any(|d| !d) {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                what: "Aberth iteration",
                iterations: sweeps,
            });
        }
        sweeps += 1;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (ratio, backward) = newton_ratio(coeffs, z[i]);
            if backward <= tol || !ratio.norm().is_finite() {
                done[i] = true;
                continue;
            }
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.norm().is_finite() {
                z[i] -= step;
            }
        }
    }

    // Newton polish, kept only where it lowers the backward error.
    for zi in z.iter_mut() {
        for _ in 0..2 {
            let (ratio, before) = newton_ratio(coeffs, *zi);
            let cand = *zi - ratio;
            if !cand.norm().is_finite() {
                break;
            }
            let (_, after) = newton_ratio(coeffs, cand);
            if after < before {
                *zi = cand;
            } else {
                break;
            }
        }
        let (_, backward) = newton_ratio(coeffs, *zi);
        if !(backward <= 1e-10) {
            return Err(Error::NoConvergence {
                what: "Aberth iteration",
                iterations: sweeps,
            });
        }
    }
    roots.extend(z);
    Ok(roots)
}

/// Roots of the reduced polynomial (empty for the trivial regime).
pub fn find_roots(poly: &ReducedPolynomial) -> Result<Vec<Complex64>> {
    if poly.regime == Regime::Trivial {
        return Ok(Vec::new());
    }
    find_roots_of(&poly.coeffs)
}

/// `μ_k = log(z_k) / (2 L0)` on the principal branch, so that
/// `Im μ_k ∈ (-π/(2L0), π/(2L0)]`. Clustered roots are merged with
/// multiplicity.
pub fn extract_mu(roots: &[Complex64], l0: f64) -> Result<Vec<MuValue>> {
    let mut clusters: Vec<(Complex64, u32)> = Vec::new();
    for &z in roots {
        if z.norm() <= f64::MIN_POSITIVE {
            return Err(Error::Domain("zero root of the reduced polynomial".into()));
        }
        let found = clusters.iter_mut().find(|(center, m)| {
            let mean = *center / f64::from(*m);
            (mean - z).norm() <= CLUSTER_TOL * mean.norm().max(1.0)
        });
        match found {
            Some((sum, m)) => {
                *sum += z;
                *m += 1;
            }
            None => clusters.push((z, 1)),
        }
    }
    Ok(clusters
        .into_iter()
        .map(|(sum, m)| {
            let z = sum / f64::from(m);
            let mut arg = z.arg();
            if arg <= -PI {
                arg = PI;
            }
            // Rounding noise must not put a real root just below the positive axis.
            if arg.abs() <= REAL_ROOT_TOL {
                arg = 0.0;
            }
            let mu = Complex64::new(z.norm().ln(), arg) / (2.0 * l0);
            MuValue {
                mu,
                z,
                multiplicity: m,
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductSign {
    /// `∏ (1 - e^{2 L0 μ_k})`
    Plus,
    /// `∏ (1 - e^{-2 L0 μ_k})`
    Minus,
}

/// `∏ (1 - e^{±2 L0 μ_k})` with multiplicities.
pub fn product_identity(mus: &[MuValue], split: &RationalSplit, sign: ProductSign) -> Complex64 {
    let s = match sign {
        ProductSign::Plus => 2.0,
        ProductSign::Minus => -2.0,
    };
    mus.iter()
        .map(|m| (Complex64::new(1.0, 0.0) - (m.mu * (s * split.l0)).exp()).powu(m.multiplicity))
        .product()
}

/// Closed value of [`product_identity`] for the regime.
pub fn expected_product(
    regime: Regime,
    split: &RationalSplit,
    alpha: Complex64,
    sign: ProductSign,
) -> Complex64 {
    let n = f64::from(split.p + split.q);
    let two = Complex64::new(2.0, 0.0);
    match (regime, sign) {
        (Regime::Generic, ProductSign::Plus) => 2.0 * n / (alpha + two),
        (Regime::Generic, ProductSign::Minus) => 2.0 * n / (two - alpha),
        (Regime::AlphaMinus2, ProductSign::Plus) | (Regime::AlphaPlus2, ProductSign::Minus) => {
            Complex64::new(n, 0.0)
        }
        (Regime::AlphaMinus2, ProductSign::Minus) | (Regime::AlphaPlus2, ProductSign::Plus) => {
            Complex64::new(0.5 * n, 0.0)
        }
        (Regime::Trivial, _) => Complex64::new(1.0, 0.0),
    }
}

/// Reduced polynomial together with its `μ_k`.
#[derive(Debug, Clone)]
pub struct RationalSpectrum {
    pub split: RationalSplit,
    pub poly: ReducedPolynomial,
    pub mus: Vec<MuValue>,
}

impl RationalSpectrum {
    pub fn solve(split: &RationalSplit, alpha: Complex64) -> Result<Self> {
        let poly = build_reduced_polynomial(split, alpha);
        let roots = find_roots(&poly)?;
        let mus = extract_mu(&roots, split.l0)?;
        Ok(RationalSpectrum {
            split: *split,
            poly,
            mus,
        })
    }

    pub fn regime(&self) -> Regime {
        self.poly.regime
    }

    /// Effective `alpha` (after snapping).
    pub fn alpha(&self) -> Complex64 {
        self.poly.alpha
    }

    /// Number of `μ_k` counted with multiplicity.
    pub fn root_count(&self) -> u32 {
        self.mus.iter().map(|m| m.multiplicity).sum()
    }

    pub fn config(&self) -> Result<StringConfig> {
        StringConfig::from_split(&self.split, self.alpha())
    }

    /// Eigenvalues with `0 < |Im λ| <= im_bound` (lattice) or `|Im λ| <= im_bound` (shifted).
    pub fn eigenvalues(&self, im_bound: f64) -> Result<Vec<EigenvalueRecord>> {
        if !(im_bound > 0.0) {
            return Err(Error::InvalidConfig("im_bound must be positive".into()));
        }
        let cfg = self.config()?;
        let spacing = PI / self.split.l0;
        let mut out = Vec::new();
        let mut push = |value: Complex64, family: Family, multiplicity: u32| -> Result<()> {
            let residual = relative_residual(value, &cfg);
            if !(residual <= RESIDUAL_TOL) {
                return Err(Error::Residual {
                    re: value.re,
                    im: value.im,
                    residual,
                });
            }
            out.push(EigenvalueRecord {
                value,
                family,
                multiplicity,
                residual,
            });
            Ok(())
        };

        let j_max = (im_bound / spacing).floor() as i64;
        for j in (-j_max..=j_max).filter(|&j| j != 0) {
            push(
                Complex64::new(0.0, j as f64 * spacing),
                Family::Lattice { j },
                1,
            )?;
        }
        for (k, m) in self.mus.iter().enumerate() {
            let lo = ((-im_bound - m.mu.im) / spacing).ceil() as i64;
            let hi = ((im_bound - m.mu.im) / spacing).floor() as i64;
            for j in lo..=hi {
                let value = m.mu + Complex64::new(0.0, j as f64 * spacing);
                push(value, Family::Shifted { k, j }, m.multiplicity)?;
            }
        }
        out.sort_by(|x, y| {
            x.value
                .im
                .total_cmp(&y.value.im)
                .then(x.value.re.total_cmp(&y.value.re))
        });
        Ok(out)
    }
}

/// All eigenvalues with `|Im λ| <= im_bound` for the split configuration.
pub fn enumerate_eigenvalues(
    split: &RationalSplit,
    alpha: Complex64,
    im_bound: f64,
) -> Result<Vec<EigenvalueRecord>> {
    RationalSpectrum::solve(split, alpha)?.eigenvalues(im_bound)
}
