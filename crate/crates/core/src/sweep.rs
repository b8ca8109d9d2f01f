//! Determinant as a function of real α along a grid.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::determinant::determinant_report;
use crate::error::{Error, Result};
use crate::model::{BranchCut, CutSide, RationalSplit, StringConfig};

/// Grid points are rounded to this many decimals so that `α = ±2` is hit exactly.
const GRID_DECIMALS: i32 = 9;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub alpha_start: f64,
    pub alpha_end: f64,
    pub step: f64,
    /// Points this close to the pole of the active cut are replaced by a gap marker.
    pub exclude_radius: f64,
    pub cut: BranchCut,
    pub length: f64,
    pub position: f64,
    /// When present, rows carry the root-product determinant as well.
    pub split: Option<RationalSplit>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.alpha_start,
            self.alpha_end,
            self.step,
            self.exclude_radius,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite || !(self.step > 0.0) || !(self.alpha_start < self.alpha_end) {
            return Err(Error::InvalidConfig(
                "sweep needs alpha_start < alpha_end and step > 0".into(),
            ));
        }
        if !(self.exclude_radius > 0.0) {
            return Err(Error::InvalidConfig(
                "exclude radius must be positive".into(),
            ));
        }
        StringConfig::new(self.length, self.position, Complex64::new(0.0, 0.0))?;
        Ok(())
    }

    /// Named presets: (a) negative-axis cut with `a = L/3`,
    /// (b) negative-axis cut with `a = L/2`, (c) and (d) the same for the
    /// positive-axis cut. `L = 1`, `α ∈ [-10, 10]`, step 0.05.
    pub fn preset(name: &str) -> Option<SweepSpec> {
        let (side, p, q) = match name {
            "a" => (CutSide::NegAxis, 1, 2),
            "b" => (CutSide::NegAxis, 1, 1),
            "c" => (CutSide::PosAxis, 1, 2),
            "d" => (CutSide::PosAxis, 1, 1),
            _ => return None,
        };
        let split = RationalSplit::new(1.0, p, q).ok()?;
        Some(SweepSpec {
            alpha_start: -10.0,
            alpha_end: 10.0,
            step: 0.05,
            exclude_radius: 1e-3,
            cut: BranchCut::new(side),
            length: 1.0,
            position: f64::from(p) / f64::from(p + q),
            split: Some(split),
        })
    }

    /// `α` where the closed form has its pole for this cut.
    pub fn pole(&self) -> f64 {
        match self.cut.side {
            CutSide::NegAxis => 2.0,
            CutSide::PosAxis => -2.0,
        }
    }

    pub fn grid(&self) -> Vec<f64> {
        let scale = 10f64.powi(GRID_DECIMALS);
        let n = ((self.alpha_end - self.alpha_start) / self.step + 1e-9).floor() as usize;
        (0..=n)
            .map(|k| ((self.alpha_start + k as f64 * self.step) * scale).round() / scale)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowKind {
    Regular,
    /// Break in the curve at a pole; carries no values.
    Gap,
    /// Value at the pole itself, where the closed form switches case.
    Isolated,
    Failed,
}

impl RowKind {
    pub fn name(self) -> &'static str {
        match self {
            RowKind::Regular => "",
            RowKind::Gap => "gap",
            RowKind::Isolated => "isolated",
            RowKind::Failed => "error",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub alpha: f64,
    pub closed: Option<Complex64>,
    pub numeric: Option<Complex64>,
    pub kind: RowKind,
    pub error: Option<String>,
}

fn evaluate(spec: &SweepSpec, alpha: f64, kind: RowKind) -> SweepRow {
    let result = StringConfig::new(spec.length, spec.position, Complex64::new(alpha, 0.0))
        .and_then(|cfg| determinant_report(&cfg, spec.cut, spec.split.as_ref()));
    match result {
        Ok(report) => SweepRow {
            alpha,
            closed: Some(report.closed),
            numeric: report.from_roots,
            kind,
            error: None,
        },
        Err(e) => SweepRow {
            alpha,
            closed: None,
            numeric: None,
            kind: RowKind::Failed,
            error: Some(e.to_string()),
        },
    }
}

/// Evaluate every grid point, in parallel, returning rows ordered by `α`.
/// Points within the exclusion radius of the pole collapse into one gap row,
/// followed by the exact pole value when the grid contains it.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let pole = spec.pole();
    let grid = spec.grid();
    let mut points: Vec<(f64, RowKind)> = Vec::with_capacity(grid.len() + 2);
    let mut gap_done = false;
    for alpha in grid {
        let d = (alpha - pole).abs();
        if d < spec.exclude_radius {
            if !gap_done {
                points.push((pole, RowKind::Gap));
                gap_done = true;
            }
            if d == 0.0 {
                points.push((alpha, RowKind::Isolated));
            }
        } else {
            points.push((alpha, RowKind::Regular));
        }
    }
    Ok(points
        .into_par_iter()
        .map(|(alpha, kind)| match kind {
            RowKind::Gap => SweepRow {
                alpha,
                closed: None,
                numeric: None,
                kind,
                error: None,
            },
            _ => evaluate(spec, alpha, kind),
        })
        .collect())
}
