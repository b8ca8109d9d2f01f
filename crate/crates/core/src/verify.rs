//! Self-checks run by the `verify` command.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::determinant::{
    det_closed, det_from_roots, determinant_report, zeta_assembled, zeta_direct, SpectrumSource,
};
use crate::error::{Error, Result};
use crate::general::{count_zeros, enumerate_general};
use crate::model::{
    build_exp_form, BranchCut, CutSide, EigenvalueRecord, RationalSplit, StringConfig, StripBox,
};
use crate::rational::{
    enumerate_eigenvalues, expected_product, product_identity, ProductSign, RationalSpectrum,
};
use crate::specfun::{gamma_pair, hurwitz_zeta, hurwitz_zeta_sderiv0, log_gamma};
use crate::sweep::{run_sweep, RowKind, SweepSpec};

pub const CHECK_NAMES: [&str; 10] = [
    "closed",
    "cut-relation",
    "prod",
    "degenerate",
    "agreement",
    "zeta",
    "general",
    "localization",
    "sweep",
    "specfun",
];

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Outcome = std::result::Result<String, String>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fail(e: Error) -> String {
    e.to_string()
}

/// Complex α with `|Re|, |Im| <= radius`, at least `gap` away from `±2`.
pub fn random_alpha(rng: &mut impl Rng, radius: f64, gap: f64) -> Complex64 {
    loop {
        let a = c(
            rng.gen_range(-radius..radius),
            rng.gen_range(-radius..radius),
        );
        if (a - 2.0).norm() > gap && (a + 2.0).norm() > gap {
            return a;
        }
    }
}

fn coprime(p: u32, q: u32) -> bool {
    crate::model::gcd(p, q) == 1
}

/// Expand records by multiplicity.
pub fn expand(records: &[EigenvalueRecord]) -> Vec<Complex64> {
    records
        .iter()
        .flat_map(|r| std::iter::repeat_n(r.value, r.multiplicity as usize))
        .collect()
}

/// Largest distance in a greedy nearest-neighbour matching of every point of
/// `a` with `|Im| <= bound` into `b`. `b` should extend somewhat past `bound`.
pub fn one_sided_match(a: &[Complex64], b: &[Complex64], bound: f64) -> f64 {
    let mut used = vec![false; b.len()];
    let mut worst = 0.0f64;
    for &x in a.iter().filter(|x| x.im.abs() <= bound) {
        let best = b
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .map(|(i, y)| (i, (x - y).norm()))
            .min_by(|u, v| u.1.total_cmp(&v.1));
        match best {
            Some((i, d)) => {
                used[i] = true;
                worst = worst.max(d);
            }
            None => return f64::INFINITY,
        }
    }
    worst
}

fn check_closed(_: &mut ChaCha8Rng) -> Outcome {
    let neg = BranchCut::neg();
    let pos = BranchCut::pos();
    let cases = [
        (0.3, 1.0, neg, 4.0),
        (0.3, 0.0, neg, 2.0),
        (0.3, -2.0, neg, 1.0),
        (0.3, 6.0, neg, -1.0),
        (0.3, 2.0, neg, 2.0),
        (0.5, 2.0, neg, 1.0),
        (0.3, -1.0, pos, -4.0),
        (0.3, 0.0, pos, -2.0),
        (0.3, -2.0, pos, -2.0),
        (0.5, -2.0, pos, -1.0),
    ];
    for (a, alpha, cut, want) in cases {
        let cfg = StringConfig::new(1.0, a, c(alpha, 0.0)).map_err(fail)?;
        let got = det_closed(&cfg, cut);
        ensure(got == c(want, 0.0), || {
            format!("closed a={a} alpha={alpha}: {got}")
        })?;
        let split = RationalSplit::from_position(1.0, a, 20).ok_or("no split")?;
        let sp = RationalSpectrum::solve(&split, cfg.alpha).map_err(fail)?;
        let roots = det_from_roots(&sp.mus, &split, cut);
        ensure((roots - got).norm() <= 1e-9, || {
            format!("roots a={a} alpha={alpha}: {roots}")
        })?;
    }
    Ok(format!("{} cases", cases.len()))
}

fn check_cut_relation(rng: &mut ChaCha8Rng) -> Outcome {
    let mut alphas: Vec<Complex64> = (0..50).map(|_| random_alpha(rng, 10.0, 0.0)).collect();
    alphas.extend([c(2.0, 0.0), c(-2.0, 0.0), c(0.0, 0.0)]);
    for a in [0.3, 0.5] {
        for &alpha in &alphas {
            let cfg = StringConfig::new(1.0, a, alpha).map_err(fail)?;
            let mirror = StringConfig::new(1.0, a, -alpha).map_err(fail)?;
            let lhs = det_closed(&cfg, BranchCut::pos());
            let rhs = -det_closed(&mirror, BranchCut::neg());
            ensure(lhs == rhs, || {
                format!("a={a} alpha={alpha}: {lhs} vs {rhs}")
            })?;
        }
    }
    Ok(format!("{} values of alpha", alphas.len()))
}

fn check_prod(rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst = 0.0f64;
    let mut count = 0;
    for p in 1..30u32 {
        for q in 1..=p.min(30 - p) {
            if !coprime(p, q) {
                continue;
            }
            let split = RationalSplit::new(1.0, p, q).map_err(fail)?;
            for _ in 0..3 {
                let alpha = random_alpha(rng, 10.0, 1e-3);
                let sp = RationalSpectrum::solve(&split, alpha).map_err(fail)?;
                for sign in [ProductSign::Plus, ProductSign::Minus] {
                    let got = product_identity(&sp.mus, &split, sign);
                    let want = expected_product(sp.regime(), &split, sp.alpha(), sign);
                    worst = worst.max(rel(got, want));
                }
                count += 1;
            }
        }
    }
    ensure(worst <= 1e-10, || {
        format!("worst relative error {worst:.3e}")
    })?;
    Ok(format!("{count} spectra, worst {worst:.1e}"))
}

fn check_degenerate(_: &mut ChaCha8Rng) -> Outcome {
    let mut worst = 0.0f64;
    for p in 2..=10u32 {
        for q in 1..p {
            if !coprime(p, q) {
                continue;
            }
            let split = RationalSplit::new(1.0, p, q).map_err(fail)?;
            let n = f64::from(p + q);
            for (alpha, plus, minus, neg, pos) in
                [(-2.0, n, 0.5 * n, 1.0, -2.0), (2.0, 0.5 * n, n, 2.0, -1.0)]
            {
                let sp = RationalSpectrum::solve(&split, c(alpha, 0.0)).map_err(fail)?;
                worst = worst
                    .max(rel(
                        product_identity(&sp.mus, &split, ProductSign::Plus),
                        c(plus, 0.0),
                    ))
                    .max(rel(
                        product_identity(&sp.mus, &split, ProductSign::Minus),
                        c(minus, 0.0),
                    ))
                    .max(rel(
                        det_from_roots(&sp.mus, &split, BranchCut::neg()),
                        c(neg, 0.0),
                    ))
                    .max(rel(
                        det_from_roots(&sp.mus, &split, BranchCut::pos()),
                        c(pos, 0.0),
                    ));
            }
        }
    }
    let split = RationalSplit::new(1.0, 1, 1).map_err(fail)?;
    for alpha in [2.0, -2.0] {
        let sp = RationalSpectrum::solve(&split, c(alpha, 0.0)).map_err(fail)?;
        ensure(sp.mus.is_empty(), || {
            "centred critical case has roots".into()
        })?;
        worst = worst
            .max(rel(
                det_from_roots(&sp.mus, &split, BranchCut::neg()),
                c(1.0, 0.0),
            ))
            .max(rel(
                det_from_roots(&sp.mus, &split, BranchCut::pos()),
                c(-1.0, 0.0),
            ));
    }
    ensure(worst <= 1e-10, || {
        format!("worst relative error {worst:.3e}")
    })?;
    Ok(format!("worst {worst:.1e}"))
}

fn random_split(rng: &mut ChaCha8Rng, max_sum: u32) -> RationalSplit {
    loop {
        let p = rng.gen_range(1..max_sum);
        let q = rng.gen_range(1..=max_sum - p);
        if coprime(p, q) {
            let length = rng.gen_range(0.5..3.0);
            if let Ok(s) = RationalSplit::new(length, p, q) {
                return s;
            }
        }
    }
}

fn check_agreement(rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let split = random_split(rng, 16);
        let alpha = random_alpha(rng, 10.0, 1e-3);
        let cfg = StringConfig::from_split(&split, alpha).map_err(fail)?;
        for cut in [BranchCut::neg(), BranchCut::pos()] {
            let report = determinant_report(&cfg, cut, Some(&split))
                .map_err(|e| format!("p={} q={} alpha={alpha}: {e}", split.p, split.q))?;
            worst = worst.max(report.agreement);
        }
    }
    Ok(format!("50 configs, worst {worst:.1e}"))
}

fn check_zeta(_: &mut ChaCha8Rng) -> Outcome {
    let split = RationalSplit::new(1.0, 1, 1).map_err(fail)?;
    let source = SpectrumSource::Rational {
        split,
        alpha: c(0.0, 0.0),
    };
    let neg = BranchCut::neg();
    let sp = RationalSpectrum::solve(&split, c(0.0, 0.0)).map_err(fail)?;
    for (s, want) in [(2.0, -1.0 / 3.0), (4.0, 1.0 / 45.0)] {
        let est = zeta_direct(&source, c(s, 0.0), neg, 1e4).map_err(fail)?;
        let err = (est.value - want).norm();
        ensure(est.tail_bar <= 1e-6 && err <= est.tail_bar, || {
            format!("direct s={s}: error {err:.2e}, bar {:.2e}", est.tail_bar)
        })?;
        let asm = zeta_assembled(&sp.mus, &split, c(s, 0.0), neg).map_err(fail)?;
        ensure((asm - want).norm() <= 1e-9, || {
            format!("assembled s={s}: {asm}")
        })?;
    }
    let alpha = c(6.0, 0.0);
    let sp = RationalSpectrum::solve(&split, alpha).map_err(fail)?;
    for cut in [neg, BranchCut::pos()] {
        let source = SpectrumSource::Rational { split, alpha };
        let est = zeta_direct(&source, c(2.0, 0.0), cut, 1e3).map_err(fail)?;
        let asm = zeta_assembled(&sp.mus, &split, c(2.0, 0.0), cut).map_err(fail)?;
        let err = (est.value - asm).norm();
        ensure(err <= est.tail_bar, || {
            format!("damped {}: {err:.2e}", cut.side.name())
        })?;
    }
    Ok("lattice and damped sums".into())
}

fn check_general(rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst = 0.0f64;
    for (p, q) in [(1u32, 2u32), (2, 3), (3, 4)] {
        let split = RationalSplit::new(1.0 / f64::from(p + q), p, q).map_err(fail)?;
        for _ in 0..3 {
            let alpha = random_alpha(rng, 5.0, 0.2);
            let cfg = StringConfig::from_split(&split, alpha).map_err(fail)?;
            let rat = expand(&enumerate_eigenvalues(&split, alpha, 21.0).map_err(fail)?);
            let (gen, _) = enumerate_general(&cfg, 21.0).map_err(fail)?;
            let gen = expand(&gen);
            let d = one_sided_match(&rat, &gen, 20.0).max(one_sided_match(&gen, &rat, 20.0));
            ensure(d <= 1e-9, || {
                format!("p={p} q={q} alpha={alpha}: mismatch {d:.2e}")
            })?;
            worst = worst.max(d);
        }
    }
    Ok(format!("9 configs, worst {worst:.1e}"))
}

fn check_localization(rng: &mut ChaCha8Rng) -> Outcome {
    for _ in 0..3 {
        let a = rng.gen_range(0.1..0.9);
        let alpha = random_alpha(rng, 5.0, 0.2);
        let cfg = StringConfig::new(1.0, a, alpha).map_err(fail)?;
        let (ev, bound) = enumerate_general(&cfg, 40.0).map_err(fail)?;
        for e in &ev {
            let j = e.family.j();
            ensure(e.value.re.abs() < bound.c1, || {
                format!("Re {} outside strip", e.value)
            })?;
            if j > 0 {
                ensure(bound.admits(j as usize, e.value), || {
                    format!("a={a} alpha={alpha}: lambda_{j} = {}", e.value)
                })?;
            }
        }
        let form = build_exp_form(&cfg);
        for _ in 0..4 {
            let b = rng.gen_range(2.0..30.0);
            let bx = StripBox::new(bound.c1, b - 1e-3, b).map_err(fail)?;
            let n = count_zeros(&bx, &form).map_err(fail)? as f64 + 1.0;
            let predicted = 2.0 * cfg.length * b / PI;
            ensure((n - predicted).abs() <= 3.0, || {
                format!("count {n} vs {predicted:.2}")
            })?;
        }
    }
    Ok("3 configs".into())
}

fn check_sweep(_: &mut ChaCha8Rng) -> Outcome {
    for name in ["a", "b", "c", "d"] {
        let spec = SweepSpec::preset(name).ok_or("missing preset")?;
        let rows = run_sweep(&spec).map_err(fail)?;
        for row in &rows {
            match row.kind {
                RowKind::Regular => {
                    let cfg =
                        StringConfig::new(1.0, spec.position, c(row.alpha, 0.0)).map_err(fail)?;
                    let want = det_closed(&cfg, spec.cut);
                    let num = row.numeric.ok_or("missing numeric value")?;
                    ensure((num - want).norm() <= 1e-9 * want.norm().max(1.0), || {
                        format!("preset {name} alpha={}: {num}", row.alpha)
                    })?;
                }
                RowKind::Isolated => {
                    let centered = spec.split.is_some_and(|s| s.is_centered());
                    let magnitude = if centered { 1.0 } else { 2.0 };
                    let want = match spec.cut.side {
                        CutSide::NegAxis => magnitude,
                        CutSide::PosAxis => -magnitude,
                    };
                    let num = row.numeric.ok_or("missing numeric value")?;
                    ensure(
                        row.closed == Some(c(want, 0.0)) && (num - want).norm() <= 1e-9,
                        || format!("preset {name} pole value {num}"),
                    )?;
                }
                RowKind::Gap => {}
                RowKind::Failed => return Err(format!("preset {name}: {:?}", row.error)),
            }
        }
    }
    Ok("4 presets".into())
}

fn check_specfun(rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let x: f64 = rng.gen_range(-5.0..5.0);
        if x.abs() < 1e-3 {
            continue;
        }
        let pair =
            (log_gamma(c(1.0, -x)).map_err(fail)? + log_gamma(c(1.0, x)).map_err(fail)?).exp();
        worst = worst.max(rel(pair, gamma_pair(c(x, 0.0)).map_err(fail)?));
        // ζ_H(0, c) = 1/2 - c
        let cc = c(rng.gen_range(0.1..4.0), rng.gen_range(-4.0..4.0));
        let z0 = hurwitz_zeta(c(0.0, 0.0), cc).map_err(fail)?;
        worst = worst.max((z0 - (0.5 - cc)).norm());
        let h = 1e-5;
        let fd = (hurwitz_zeta(c(h, 0.0), cc).map_err(fail)?
            - hurwitz_zeta(c(-h, 0.0), cc).map_err(fail)?)
            / (2.0 * h);
        let d = (fd - hurwitz_zeta_sderiv0(cc - 1.0).map_err(fail)?).norm();
        ensure(d <= 1e-8, || format!("s-derivative at c={cc}: {d:.2e}"))?;
    }
    let z2 = hurwitz_zeta(c(2.0, 0.0), c(1.0, 0.0)).map_err(fail)?;
    worst = worst.max(rel(z2, c(PI * PI / 6.0, 0.0)));
    let z0 = hurwitz_zeta(c(0.0, 0.0), c(1.0, 0.0)).map_err(fail)?;
    worst = worst.max((z0 - c(-0.5, 0.0)).norm());
    ensure(worst <= 1e-10, || format!("worst error {worst:.2e}"))?;
    Ok(format!("worst {worst:.1e}"))
}

fn runner(name: &str) -> fn(&mut ChaCha8Rng) -> Outcome {
    match name {
        "closed" => check_closed,
        "cut-relation" => check_cut_relation,
        "prod" => check_prod,
        "degenerate" => check_degenerate,
        "agreement" => check_agreement,
        "zeta" => check_zeta,
        "general" => check_general,
        "localization" => check_localization,
        "sweep" => check_sweep,
        _ => check_specfun,
    }
}

/// Run the named checks (all when `only` is empty). Each check draws from
/// its own generator seeded by `seed`, so results do not depend on the selection.
pub fn run_checks(seed: u64, only: &[String]) -> Result<Vec<CheckResult>> {
    if let Some(bad) = only.iter().find(|n| !CHECK_NAMES.contains(&n.as_str())) {
        return Err(Error::InvalidConfig(format!(
            "unknown check '{bad}' (known: {})",
            CHECK_NAMES.join(", ")
        )));
    }
    Ok(CHECK_NAMES
        .iter()
        .enumerate()
        .filter(|(_, n)| only.is_empty() || only.iter().any(|o| o == *n))
        .map(|(i, &name)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            match runner(name)(&mut rng) {
                Ok(detail) => CheckResult {
                    name,
                    passed: true,
                    detail,
                },
                Err(detail) => CheckResult {
                    name,
                    passed: false,
                    detail,
                },
            }
        })
        .collect())
}
