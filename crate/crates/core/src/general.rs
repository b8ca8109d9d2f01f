//! Eigenvalues for an arbitrary damping position.
//!
//! The zeros of `g(λ) = Σ r_j e^{β_j λ}` lie in a vertical strip
//! `|Re λ| < c1`. The strip is tiled by rectangles; the zeros inside each one
//! are counted by tracking the phase of `g` around its boundary (argument
//! principle), rectangles are bisected until each holds one zero, and the
//! zero is polished by Newton's method on `g(λ)/λ`. The origin is always a
//! simple zero of `g` and is never reported.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{
    build_exp_form, relative_residual, EigenvalueRecord, ExpPolynomialForm, Family, StringConfig,
    StripBox, RESIDUAL_TOL,
};

/// `|g| / Σ|r_j e^{β_j λ}|` below this on a contour counts as a boundary zero.
const BOUNDARY_TOL: f64 = 1e-11;
/// Phase change allowed across one tracked segment.
const MAX_PHASE_STEP: f64 = PI / 4.0;
const MAX_PHASE_DEPTH: usize = 56;
const MAX_DILATIONS: usize = 5;
const MAX_NEWTON: usize = 100;
const STAGNATION_TOL: f64 = 1e-11;
const MAX_SUBDIVISIONS: usize = 40;
/// Imaginary parts below this are treated as real eigenvalues.
const REAL_AXIS_TOL: f64 = 1e-10;

/// Strip half-width and imaginary-part deviation bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalizationBound {
    pub c1: f64,
    pub c2: f64,
    /// Asymptotic spacing of the imaginary parts: `π/L`, or `π/max(a, L-a)`
    /// at `α = ±2`.
    pub spacing: f64,
}

impl LocalizationBound {
    /// Whether the `j`-th upper-half-plane eigenvalue (1-based) satisfies the bound.
    pub fn admits(&self, j: usize, lambda: Complex64) -> bool {
        lambda.re.abs() < self.c1 && (lambda.im - j as f64 * self.spacing).abs() < self.c2
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Rect {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Rect {
    fn center(&self) -> Complex64 {
        Complex64::new(
            0.5 * (self.re_min + self.re_max),
            0.5 * (self.im_min + self.im_max),
        )
    }

    fn width(&self) -> f64 {
        self.re_max - self.re_min
    }

    fn height(&self) -> f64 {
        self.im_max - self.im_min
    }

    fn contains_strictly(&self, z: Complex64, margin: f64) -> bool {
        z.re > self.re_min + margin
            && z.re < self.re_max - margin
            && z.im > self.im_min + margin
            && z.im < self.im_max - margin
    }

    fn origin_on_boundary(&self) -> bool {
        let tol = 1e-12 * (1.0 + self.width().max(self.height()));
        let in_re = self.re_min - tol <= 0.0 && 0.0 <= self.re_max + tol;
        let in_im = self.im_min - tol <= 0.0 && 0.0 <= self.im_max + tol;
        let near_edge = self.re_min.abs() <= tol
            || self.re_max.abs() <= tol
            || self.im_min.abs() <= tol
            || self.im_max.abs() <= tol;
        in_re && in_im && near_edge
    }

    /// Split at `frac` of the longer side.
    fn split(&self, frac: f64) -> (Rect, Rect) {
        if self.width() >= self.height() {
            let x = self.re_min + frac * self.width();
            (Rect { re_max: x, ..*self }, Rect { re_min: x, ..*self })
        } else {
            let y = self.im_min + frac * self.height();
            (Rect { im_max: y, ..*self }, Rect { im_min: y, ..*self })
        }
    }

    fn dilate(&self, factor: f64) -> Rect {
        let dx = 0.5 * factor * self.width();
        let dy = 0.5 * factor * self.height();
        Rect {
            re_min: self.re_min - dx,
            re_max: self.re_max + dx,
            im_min: self.im_min - dy,
            im_max: self.im_max + dy,
        }
    }
}

/// Scaled value of `g` at `z`, failing when `|g|` is negligible against its terms.
fn sample(form: &ExpPolynomialForm, z: Complex64) -> Result<Complex64> {
    let (g, _, mag, _) = form.eval_with_derivative(z);
    if !(g.norm() > BOUNDARY_TOL * mag) {
        return Err(Error::BoundaryZero { attempts: 0 });
    }
    Ok(g)
}

fn phase_between(from: Complex64, to: Complex64) -> f64 {
    (to / from).arg()
}

fn refine_phase(
    form: &ExpPolynomialForm,
    (p0, v0): (Complex64, Complex64),
    (p1, v1): (Complex64, Complex64),
    depth: usize,
) -> Result<f64> {
    let mid = 0.5 * (p0 + p1);
    let vm = sample(form, mid)?;
    let d0 = phase_between(v0, vm);
    let d1 = phase_between(vm, v1);
    if d0.abs() < MAX_PHASE_STEP && d1.abs() < MAX_PHASE_STEP {
        return Ok(d0 + d1);
    }
    if depth >= MAX_PHASE_DEPTH {
        return Err(Error::Quadrature(format!(
            "phase step unresolved near {mid}"
        )));
    }
    Ok(refine_phase(form, (p0, v0), (mid, vm), depth + 1)?
        + refine_phase(form, (mid, vm), (p1, v1), depth + 1)?)
}

/// Continuous change of `arg g` along the segment `a -> b`.
fn track_segment(form: &ExpPolynomialForm, a: Complex64, b: Complex64) -> Result<f64> {
    let len = (b - a).norm();
    let piece = (MAX_PHASE_STEP / form.spread().max(1e-3)).min(0.25);
    let pieces = ((len / piece).ceil() as usize).max(4);
    let mut total = 0.0;
    let mut prev = (a, sample(form, a)?);
    for k in 1..=pieces {
        let p = a + (b - a) * (k as f64 / pieces as f64);
        let next = (p, sample(form, p)?);
        total += refine_phase(form, prev, next, 0)?;
        prev = next;
    }
    Ok(total)
}

fn to_count(total_phase: f64) -> Result<i64> {
    let turns = total_phase / (2.0 * PI);
    let rounded = turns.round();
    if (turns - rounded).abs() > 1e-3 {
        return Err(Error::Quadrature(format!("non-integer winding {turns}")));
    }
    Ok(rounded as i64)
}

/// Winding number of `g` around `rect`, counter-clockwise.
fn winding(form: &ExpPolynomialForm, rect: &Rect) -> Result<i64> {
    let c = |re, im| Complex64::new(re, im);
    let corners = [
        c(rect.re_min, rect.im_min),
        c(rect.re_max, rect.im_min),
        c(rect.re_max, rect.im_max),
        c(rect.re_min, rect.im_max),
    ];
    let mut total = 0.0;
    for k in 0..4 {
        total += track_segment(form, corners[k], corners[(k + 1) % 4])?;
    }
    to_count(total)
}

/// Zeros of `g(λ)/λ` inside `rect`.
pub(crate) fn count_in_rect(form: &ExpPolynomialForm, rect: &Rect) -> Result<usize> {
    if rect.origin_on_boundary() {
        return Err(Error::BoundaryZero { attempts: 0 });
    }
    let mut n = winding(form, rect)?;
    if rect.contains_strictly(Complex64::new(0.0, 0.0), 0.0) {
        n -= 1;
    }
    usize::try_from(n).map_err(|_| Error::Quadrature(format!("negative zero count {n}")))
}

/// Number of zeros of `g(λ)/λ` in the box. A box with a zero on its boundary
/// is dilated by 1%, up to five times.
pub fn count_zeros(bx: &StripBox, form: &ExpPolynomialForm) -> Result<usize> {
    let mut rect = Rect {
        re_min: -bx.c1,
        re_max: bx.c1,
        im_min: bx.center - bx.halfwidth,
        im_max: bx.center + bx.halfwidth,
    };
    for _ in 0..MAX_DILATIONS {
        match count_in_rect(form, &rect) {
            Err(Error::BoundaryZero { .. }) => rect = rect.dilate(0.01),
            other => return other,
        }
    }
    Err(Error::BoundaryZero {
        attempts: MAX_DILATIONS,
    })
}

fn newton(seed: Complex64, form: &ExpPolynomialForm, multiplicity: u32) -> Result<Complex64> {
    let mut z = seed;
    let mut last_step = f64::INFINITY;
    for _ in 0..MAX_NEWTON {
        if z.norm() == 0.0 {
            return Err(Error::NoConvergence {
                what: "Newton iteration",
                iterations: 0,
            });
        }
        let (g, dg, mag, _) = form.eval_with_derivative(z);
        if g.norm() == 0.0 && mag > 0.0 {
            return Ok(z);
        }
        // h = g/λ,  h'/h = g'/g - 1/λ
        let log_deriv = dg / g - z.inv();
        let step = -f64::from(multiplicity) / log_deriv;
        if !step.norm().is_finite() {
            break;
        }
        z += step;
        let size = step.norm();
        let scale = z.norm().max(1.0);
        // Far from the origin rounding in e^{βλ} sets a floor on the step;
        // stop once steps are tiny and no longer shrinking.
        if size <= 4.0 * f64::EPSILON * scale
            || (size <= STAGNATION_TOL * scale && size >= 0.5 * last_step)
        {
            return Ok(z);
        }
        last_step = size;
    }
    Err(Error::NoConvergence {
        what: "Newton iteration",
        iterations: MAX_NEWTON,
    })
}

/// Newton iteration on `g(λ)/λ` from `seed`.
pub fn refine_zero(seed: Complex64, form: &ExpPolynomialForm) -> Result<Complex64> {
    newton(seed, form, 1)
}

/// Locate the `count` zeros of `g/λ` inside `rect`: Newton from the centre,
/// falling back to bisection by counting.
fn locate(
    form: &ExpPolynomialForm,
    rect: Rect,
    count: usize,
    depth: usize,
) -> Result<Vec<(Complex64, u32)>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    let size = rect.width().max(rect.height());
    let tiny = size <= 1e-7 * (1.0 + rect.center().norm());
    if count == 1 || tiny {
        let center = rect.center();
        if center.norm() > 1e-3 * size {
            let mult = count as u32;
            if let Ok(z) = newton(center, form, mult) {
                if rect.contains_strictly(z, 0.0) {
                    return Ok(vec![(z, mult)]);
                }
            }
        }
        if tiny {
            return Err(Error::NoConvergence {
                what: "zero refinement",
                iterations: depth,
            });
        }
    }
    if depth >= MAX_SUBDIVISIONS {
        return Err(Error::NoConvergence {
            what: "zero refinement",
            iterations: depth,
        });
    }
    for frac in [0.5, 0.57, 0.43, 0.61, 0.39] {
        let (lo, hi) = rect.split(frac);
        let counts = count_in_rect(form, &lo).and_then(|a| Ok((a, count_in_rect(form, &hi)?)));
        match counts {
            Ok((a, b)) if a + b == count => {
                let mut out = locate(form, lo, a, depth + 1)?;
                out.extend(locate(form, hi, b, depth + 1)?);
                return Ok(out);
            }
            Ok(_) | Err(Error::BoundaryZero { .. }) | Err(Error::Quadrature(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::NoConvergence {
        what: "zero refinement",
        iterations: depth,
    })
}

/// Smallest half-width (grown from `seed`) beyond which one end term of `g`
/// dominates the rest by a factor 2 on both sides, so no zero has
/// `|Re λ| >= c1`.
pub fn strip_half_width(form: &ExpPolynomialForm, seed: f64) -> f64 {
    let terms = form.terms();
    let (Some(&(r0, _)), Some(&(rn, bn))) = (terms.first(), terms.last()) else {
        return seed;
    };
    let dominated = |x: f64| {
        let right: f64 = terms[..terms.len() - 1]
            .iter()
            .map(|&(r, b)| r.norm() * (-(bn - b) * x).exp())
            .sum();
        let left: f64 = terms[1..]
            .iter()
            .map(|&(r, b)| r.norm() * (-b * x).exp())
            .sum();
        rn.norm() >= 2.0 * right && r0.norm() >= 2.0 * left
    };
    let mut c1 = if seed.is_finite() && seed > 0.0 {
        seed
    } else {
        1.0
    };
    while !dominated(c1) {
        c1 *= 1.25;
    }
    c1
}

fn strip_seed(cfg: &StringConfig) -> f64 {
    let alpha = cfg.alpha;
    let two = Complex64::new(2.0, 0.0);
    let shortest = cfg.position.min(cfg.complement()).min(0.5 * cfg.length);
    let denom = (two + alpha).norm().min((two - alpha).norm()).min(2.0);
    (8.0 * (1.0 + alpha.norm()) / denom).ln() / (2.0 * shortest)
}

fn is_critical(alpha: Complex64) -> bool {
    alpha == Complex64::new(2.0, 0.0) || alpha == Complex64::new(-2.0, 0.0)
}

/// Localization constants for a configuration.
pub fn localization_bound(cfg: &StringConfig) -> LocalizationBound {
    let form = build_exp_form(cfg);
    let c1 = strip_half_width(&form, strip_seed(cfg));
    if is_critical(cfg.alpha) {
        let longer = cfg.position.max(cfg.complement());
        LocalizationBound {
            c1,
            c2: 2.0 * PI / longer,
            spacing: PI / longer,
        }
    } else {
        LocalizationBound {
            c1,
            c2: 3.0 * PI / cfg.length,
            spacing: PI / cfg.length,
        }
    }
}

/// Continuous phase change of `g` along the horizontal line `Im λ = y`
/// from `Re = -c1` to `Re = c1`, nudging `y` off nearby zeros.
fn horizontal_edge(form: &ExpPolynomialForm, y: f64, c1: f64, h: f64) -> Result<(f64, f64)> {
    let mut last = Error::BoundaryZero { attempts: 0 };
    for attempt in 0..8 {
        let shift = [0.0, 0.037, -0.053, 0.071, -0.089, 0.103, -0.117, 0.131][attempt] * h;
        let yy = y + shift;
        if yy.abs() <= 1e-9 {
            continue;
        }
        match track_segment(form, Complex64::new(-c1, yy), Complex64::new(c1, yy)) {
            Ok(phase) => return Ok((yy, phase)),
            Err(e @ (Error::BoundaryZero { .. } | Error::Quadrature(_))) => last = e,
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

/// All eigenvalues with `|Im λ| <= im_bound`, sorted by imaginary part, with
/// the localization constants used.
pub fn enumerate_general(
    cfg: &StringConfig,
    im_bound: f64,
) -> Result<(Vec<EigenvalueRecord>, LocalizationBound)> {
    if !(im_bound > 0.0 && im_bound.is_finite()) {
        return Err(Error::InvalidConfig("im_bound must be positive".into()));
    }
    if is_critical(cfg.alpha) && cfg.is_centered() {
        return Err(Error::UnsupportedConfig(
            "alpha = ±2 with a = L/2: the exponential polynomial has merged exponents".into(),
        ));
    }
    let form = build_exp_form(cfg);
    let bound = localization_bound(cfg);
    let c1 = bound.c1;
    let h = PI / (2.0 * cfg.length);
    let k_max = ((im_bound + h) / h).ceil() as i64;

    // Horizontal edges at odd multiples of h/2 avoid the lattice and the real axis.
    let edges: Vec<(f64, f64)> = (-k_max - 1..=k_max)
        .into_par_iter()
        .map(|k| horizontal_edge(&form, (k as f64 + 0.5) * h, c1, h))
        .collect::<Result<_>>()?;

    let boxes: Vec<(Rect, usize)> = edges
        .par_windows(2)
        .map(|pair| {
            let ((y0, bottom), (y1, top)) = (pair[0], pair[1]);
            let right = track_segment(&form, Complex64::new(c1, y0), Complex64::new(c1, y1))?;
            let left = track_segment(&form, Complex64::new(-c1, y1), Complex64::new(-c1, y0))?;
            let mut n = to_count(bottom + right - top + left)?;
            if y0 < 0.0 && 0.0 < y1 {
                n -= 1;
            }
            let n = usize::try_from(n)
                .map_err(|_| Error::Quadrature(format!("negative zero count {n}")))?;
            Ok((
                Rect {
                    re_min: -c1,
                    re_max: c1,
                    im_min: y0,
                    im_max: y1,
                },
                n,
            ))
        })
        .collect::<Result<_>>()?;

    let found: Vec<(Complex64, u32)> = boxes
        .par_iter()
        .map(|&(rect, n)| locate(&form, rect, n, 0))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .filter(|(z, _)| z.im.abs() <= im_bound)
        .collect();

    let mut records = Vec::with_capacity(found.len());
    for (mut value, multiplicity) in found {
        if value.im.abs() <= REAL_AXIS_TOL {
            value.im = 0.0;
        }
        let residual = relative_residual(value, cfg);
        if !(residual <= RESIDUAL_TOL) {
            return Err(Error::Residual {
                re: value.re,
                im: value.im,
                residual,
            });
        }
        records.push(EigenvalueRecord {
            value,
            family: Family::Located { j: 0 },
            multiplicity,
            residual,
        });
    }
    records.sort_by(|x, y| {
        x.value
            .im
            .total_cmp(&y.value.im)
            .then(x.value.re.total_cmp(&y.value.re))
    });
    assign_ordinals(&mut records);
    Ok((records, bound))
}

/// Number the upper half-plane eigenvalues 1, 2, ... upward and the lower
/// ones -1, -2, ... downward (counting multiplicity); real ones get 0.
fn assign_ordinals(records: &mut [EigenvalueRecord]) {
    let mut j = 1i64;
    for r in records.iter_mut().filter(|r| r.value.im > REAL_AXIS_TOL) {
        r.family = Family::Located { j };
        j += i64::from(r.multiplicity);
    }
    let mut j = -1i64;
    for r in records
        .iter_mut()
        .rev()
        .filter(|r| r.value.im < -REAL_AXIS_TOL)
    {
        r.family = Family::Located { j };
        j -= i64::from(r.multiplicity);
    }
}
