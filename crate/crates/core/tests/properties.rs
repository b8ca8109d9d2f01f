use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dampdet::determinant::{
    det_closed, det_from_roots, zeta_assembled, zeta_direct, SpectrumSource,
};
use dampdet::model::{build_exp_form, cut_argument, spectral_residual};
use dampdet::rational::{enumerate_eigenvalues, RationalSpectrum};
use dampdet::specfun::hurwitz_zeta;
use dampdet::{BranchCut, RationalSplit, StringConfig};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn coprime_pair(max_sum: u32) -> impl Strategy<Value = (u32, u32)> {
    (1..max_sum, 1..max_sum).prop_filter("coprime with bounded sum", move |&(p, q)| {
        p + q <= max_sum && gcd(p, q) == 1
    })
}

fn alpha_strategy() -> impl Strategy<Value = Complex64> {
    (-10.0..10.0f64, -10.0..10.0f64)
        .prop_map(|(re, im)| c(re, im))
        .prop_filter("away from ±2", |a| {
            (a - 2.0).norm() > 1e-3 && (a + 2.0).norm() > 1e-3
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn residual_is_symmetric_in_position(
        l in 0.2..4.0f64, frac in 0.01..0.99f64, alpha in alpha_strategy(),
        re in -5.0..5.0f64, im in -5.0..5.0f64,
    ) {
        let cfg = StringConfig::new(l, frac * l, alpha).unwrap();
        let lam = c(re, im);
        let r = spectral_residual(lam, &cfg).value();
        let m = spectral_residual(lam, &cfg.mirrored()).value();
        prop_assert!((r - m).norm() <= 1e-12 * r.norm().max(1e-300) + 1e-300);
    }

    #[test]
    fn exp_form_is_scaled_residual(
        l in 0.2..3.0f64, frac in 0.01..0.99f64, alpha in alpha_strategy(),
        r in 0.0..5.0f64, theta in 0.0..(2.0 * PI),
    ) {
        let cfg = StringConfig::new(l, frac * l, alpha).unwrap();
        let lam = Complex64::from_polar(r, theta);
        let g = build_exp_form(&cfg).eval(lam).value();
        // Direct evaluation of 4 e^{Lλ} (sinh Lλ + α sinh aλ sinh (L-a)λ)
        let a = cfg.position;
        let direct = 4.0 * (lam * l).exp()
            * ((lam * l).sinh() + alpha * (lam * a).sinh() * (lam * (l - a)).sinh());
        let scale: f64 = [2.0 + alpha.norm(), 2.0 * alpha.norm() + 2.0]
            .iter()
            .map(|m| m * (2.0 * l * r).exp())
            .fold(0.0, f64::max);
        prop_assert!((g - direct).norm() <= 1e-12 * direct.norm().max(1e-3 * scale));
    }

    #[test]
    fn hurwitz_recurrence(sre in -3.0..4.0f64, sim in -3.0..3.0f64, cre in 0.2..4.0f64, cim in -3.0..3.0f64) {
        let s = c(sre, sim);
        prop_assume!((s - 1.0).norm() > 1e-3);
        let a = c(cre, cim);
        let lhs = hurwitz_zeta(s, a).unwrap();
        let rhs = hurwitz_zeta(s, a + 1.0).unwrap() + a.powc(-s);
        prop_assert!((lhs - rhs).norm() <= 1e-10 * lhs.norm().max(1.0));
    }

    #[test]
    fn cut_relation_is_exact(frac in 0.01..0.99f64, alpha in (-10.0..10.0f64, -10.0..10.0f64)) {
        let alpha = c(alpha.0, alpha.1);
        let cfg = StringConfig::new(1.3, 1.3 * frac, alpha).unwrap();
        let mirror = StringConfig::new(1.3, 1.3 * frac, -alpha).unwrap();
        prop_assert_eq!(det_closed(&cfg, BranchCut::pos()), -det_closed(&mirror, BranchCut::neg()));
    }

    #[test]
    fn cut_argument_ranges(re in -10.0..10.0f64, im in -10.0..10.0f64) {
        let z = c(re, im);
        prop_assume!(z.norm() > 1e-9);
        if let Ok(t) = cut_argument(z, BranchCut::neg()) {
            prop_assert!(t > -PI && t <= PI);
        }
        if let Ok(t) = cut_argument(z, BranchCut::pos()) {
            prop_assert!((0.0..2.0 * PI).contains(&t));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn spectrum_is_independent_of_orientation((p, q) in coprime_pair(14), alpha in alpha_strategy(), l in 0.5..2.0f64) {
        let forward = enumerate_eigenvalues(&RationalSplit::new(l, p, q).unwrap(), alpha, 15.0).unwrap();
        let backward = enumerate_eigenvalues(&RationalSplit::new(l, q, p).unwrap(), alpha, 15.0).unwrap();
        let mut fa: Vec<Complex64> = forward.iter().map(|r| r.value).collect();
        let mut fb: Vec<Complex64> = backward.iter().map(|r| r.value).collect();
        prop_assert_eq!(fa.len(), fb.len());
        let key = |z: &Complex64| (z.im, z.re);
        fa.sort_by(|x, y| key(x).partial_cmp(&key(y)).unwrap());
        fb.sort_by(|x, y| key(x).partial_cmp(&key(y)).unwrap());
        for (x, y) in fa.iter().zip(&fb) {
            prop_assert!((x - y).norm() <= 1e-12 * x.norm().max(1.0));
        }
    }

    #[test]
    fn eigenvalues_solve_the_spectral_condition((p, q) in coprime_pair(20), alpha in alpha_strategy()) {
        let split = RationalSplit::new(1.0, p, q).unwrap();
        for r in enumerate_eigenvalues(&split, alpha, 30.0).unwrap() {
            prop_assert!(r.residual <= 1e-9);
        }
    }
}

#[test]
fn determinant_does_not_depend_on_position() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let alpha = c(rng.gen_range(-8.0..8.0), rng.gen_range(-8.0..8.0));
        if (alpha - 2.0).norm() < 1e-2 || (alpha + 2.0).norm() < 1e-2 {
            continue;
        }
        for cut in [BranchCut::neg(), BranchCut::pos()] {
            let dets: Vec<Complex64> = [(1, 1), (2, 1), (3, 2), (5, 3), (7, 4)]
                .iter()
                .map(|&(p, q)| {
                    let split = RationalSplit::new(1.7, p, q).unwrap();
                    let sp = RationalSpectrum::solve(&split, alpha).unwrap();
                    det_from_roots(&sp.mus, &split, cut)
                })
                .collect();
            for d in &dets[1..] {
                assert!(
                    (d - dets[0]).norm() <= 1e-9 * dets[0].norm(),
                    "{alpha}: {dets:?}"
                );
            }
        }
    }
}

#[test]
fn pole_of_closed_form() {
    for l in [0.5, 1.0, 3.0] {
        let mut last = 0.0;
        for k in 1..=12 {
            let alpha = 2.0 + 10f64.powi(-k);
            let cfg = StringConfig::new(l, 0.3 * l, c(alpha, 0.0)).unwrap();
            let det = det_closed(&cfg, BranchCut::neg());
            let product = det * (2.0 - alpha);
            assert!((product - c(4.0 * l, 0.0)).norm() <= 4.0 * f64::EPSILON * 4.0 * l);
            assert!(det.norm() > last);
            last = det.norm();

            let cfg = StringConfig::new(l, 0.3 * l, c(-alpha, 0.0)).unwrap();
            let det = det_closed(&cfg, BranchCut::pos());
            assert!((det * (2.0 - alpha) - c(-4.0 * l, 0.0)).norm() <= 16.0 * f64::EPSILON * l);
        }
    }
}

#[test]
fn continuous_through_opposite_critical_value() {
    for (p, q) in [(2, 1), (3, 2), (1, 1)] {
        let split = RationalSplit::new(1.0, p, q).unwrap();
        let at = |alpha: f64| {
            let sp = RationalSpectrum::solve(&split, c(alpha, 0.0)).unwrap();
            det_from_roots(&sp.mus, &split, BranchCut::neg())
        };
        let centre = at(-2.0);
        assert!((centre - 1.0).norm() < 1e-12);
        for eps in [1e-6, -1e-6] {
            let near = at(-2.0 + eps);
            assert!(
                (near - 4.0 / (4.0 - eps)).norm() < 1e-10,
                "{p}/{q} {eps}: {near}"
            );
            assert!((near - centre).norm() < 1e-6);
        }
    }
}

/// Convergents of the continued fraction of `x`.
fn convergents(x: f64, count: usize) -> Vec<(u32, u32)> {
    let (mut h0, mut h1, mut k0, mut k1) = (0u64, 1u64, 1u64, 0u64);
    let mut rest = x;
    let mut out = Vec::new();
    for _ in 0..count {
        let a = rest.floor();
        let (h, k) = (a as u64 * h1 + h0, a as u64 * k1 + k0);
        out.push((h as u32, k as u32));
        (h0, h1, k0, k1) = (h1, h, k1, k);
        rest = 1.0 / (rest - a);
    }
    out
}

#[test]
fn approximants_of_irrational_position_converge() {
    let x = 1.0 / 2f64.sqrt();
    let alpha = c(1.3, -0.7);
    let length = 1.0;
    let closed = det_closed(
        &StringConfig::new(length, x * length, alpha).unwrap(),
        BranchCut::neg(),
    );
    let mut used = 0;
    for (num, den) in convergents(x, 12) {
        if num == 0 || num >= den || den > 400 {
            continue;
        }
        let split = RationalSplit::new(length, num, den - num).unwrap();
        let sp = RationalSpectrum::solve(&split, alpha).unwrap();
        let det = det_from_roots(&sp.mus, &split, BranchCut::neg());
        assert!(
            (det - closed).norm() <= 1e-8 * closed.norm(),
            "{num}/{den}: {det} vs {closed}"
        );
        used += 1;
    }
    assert!(used >= 5);
}

#[test]
fn continued_fraction_recovers_splits() {
    for (a, p, q) in [(0.4, 2, 3), (0.25, 1, 3), (0.5, 1, 1), (3.0 / 7.0, 3, 4)] {
        let split = RationalSplit::from_position(2.0, 2.0 * a, 50).unwrap();
        assert_eq!(
            (split.p.min(split.q), split.p.max(split.q)),
            (p.min(q), p.max(q))
        );
    }
    assert!(RationalSplit::from_position(1.0, 1.0 / 2f64.sqrt(), 1000).is_none());
}

#[test]
fn direct_zeta_matches_assembled() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..10 {
        let (p, q) = loop {
            let p = rng.gen_range(1..8u32);
            let q = rng.gen_range(1..8u32);
            if gcd(p, q) == 1 {
                break (p, q);
            }
        };
        let alpha = c(rng.gen_range(-6.0..6.0), rng.gen_range(-6.0..6.0));
        let split = RationalSplit::new(rng.gen_range(0.5..2.0), p, q).unwrap();
        let sp = RationalSpectrum::solve(&split, alpha).unwrap();
        let cut = if i % 2 == 0 {
            BranchCut::neg()
        } else {
            BranchCut::pos()
        };
        for s in [2.0, 3.0, 4.0] {
            let source = SpectrumSource::Rational { split, alpha };
            let est = zeta_direct(&source, c(s, 0.0), cut, 2000.0).unwrap();
            let asm = zeta_assembled(&sp.mus, &split, c(s, 0.0), cut).unwrap();
            let err = (est.value - asm).norm();
            assert!(
                err <= est.tail_bar,
                "p={p} q={q} alpha={alpha} s={s}: {err:e} > {:e}",
                est.tail_bar
            );
        }
    }
}
