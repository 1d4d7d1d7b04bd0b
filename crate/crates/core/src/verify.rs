//! Built-in verification suite: cross-module checks with named pass/fail
//! results.
//!
//! Each check compares a measured figure with a bound. Error bounds are
//! multiplied by a tolerance scale (1 by default); threshold checks such as
//! the retrieval efficiency do not scale.

use crate::capacity::{capacity_thin, capacity_volume, fresnel_number, HologramGeometry};
use crate::dynamics::{
    excitation_balance, greens_solution, integrate_characteristics, BoundaryData,
};
use crate::eigenmodes::{compute_modes, ModeSet};
use crate::grid::UnitGrid;
use crate::kernels::Coupling;
use crate::memory_cycle::{mode_efficiency, one_pass_map, port_matrix, ModeCoefficients};
use crate::{Complex64, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Efficiency bound below which the readout-basis interpretation is flagged
/// rather than reported as a plain failure.
pub const EFFICIENCY_TARGET: f64 = 0.95;
pub const EFFICIENCY_FLAG_FLOOR: f64 = 0.90;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub measured: f64,
    pub tolerance: f64,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
    pub all_passed: bool,
}

impl VerifyReport {
    pub fn failed(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

fn upper(name: &str, measured: f64, tol: f64, scale: f64, detail: String) -> Check {
    let tolerance = tol * scale;
    Check {
        name: name.into(),
        passed: measured <= tolerance,
        measured,
        tolerance,
        detail,
    }
}

fn gl(n: usize) -> UnitGrid {
    UnitGrid::gauss_legendre(n).expect("n >= 2")
}

fn kappa(k: f64) -> Coupling {
    Coupling::new(k).expect("valid coupling")
}

/// Random smooth envelope `sum_m c_m cos(pi m t + m)`, `m < 4`, with
/// standard-normal-ish complex coefficients.
pub fn random_smooth(rng: &mut impl Rng) -> impl Fn(f64) -> Complex64 {
    let c: Vec<Complex64> = (0..4)
        .map(|_| Complex64::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)))
        .collect();
    move |t| {
        c.iter()
            .enumerate()
            .map(|(m, &cm)| cm * (std::f64::consts::PI * m as f64 * t + m as f64).cos())
            .sum()
    }
}

/// L-infinity distance of the output faces relative to the peak output.
pub fn face_error(b: &BoundaryData, c: Coupling) -> Result<f64> {
    let a = integrate_characteristics(b, c)?;
    let r = greens_solution(b, c, &b.grid_tau)?;
    let peak = r
        .alpha_out()
        .iter()
        .chain(r.beta_out())
        .map(|v| v.norm())
        .fold(0.0, f64::max);
    let diff = a
        .alpha_out()
        .iter()
        .zip(r.alpha_out())
        .chain(a.beta_out().iter().zip(r.beta_out()))
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    Ok(diff / peak.max(f64::MIN_POSITIVE))
}

fn leading_modes(scale: f64) -> Result<Vec<Check>> {
    let m = compute_modes(kappa(4.0), &gl(200), 3)?;
    let want = [0.988, -0.518, 0.043];
    let err = m
        .lambda
        .iter()
        .zip(want)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let changes: Vec<usize> = (0..3).map(|i| m.sign_changes(i)).collect();
    let mismatch = changes
        .iter()
        .enumerate()
        .map(|(i, &c)| c.abs_diff(i))
        .sum::<usize>() as f64;
    Ok(vec![
        upper(
            "leading_eigenvalues",
            err,
            0.01,
            scale,
            format!("lambda = {:?} at kappa = 4, n = 200", m.lambda),
        ),
        upper(
            "eigenfunction_sign_changes",
            mismatch,
            0.0,
            1.0,
            format!("sign changes {changes:?}, expected [0, 1, 2]"),
        ),
    ])
}

fn constraint(scale: f64) -> Result<Vec<Check>> {
    let (mut worst, mut worst_res) = (0.0f64, 0.0f64);
    for k in [0.5, 1.0, 2.0, 4.0, 8.0] {
        let m = compute_modes(kappa(k), &gl(200), 5)?;
        for (l, e) in m.lambda.iter().zip(&m.mu_estimates) {
            worst = worst.max((l * l + e.mu * e.mu - 1.0).abs());
            worst_res = worst_res.max(e.residual);
        }
    }
    Ok(vec![
        upper(
            "eigenvalue_constraint",
            worst,
            1e-6,
            scale,
            "max |lambda^2 + mu^2 - 1|, mu from the G1 projection, 5 modes, kappa in {0.5,1,2,4,8}"
                .into(),
        ),
        upper(
            "g1_projection_residual",
            worst_res,
            1e-3,
            scale,
            "max projection residual over the same modes".into(),
        ),
    ])
}

fn oracles(scale: f64) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let (mut worst, mut worst_ratio) = (0.0f64, 0.0f64);
    let mut ratios = Vec::new();
    for k in [1.0, 4.0] {
        for _ in 0..10 {
            let fa = random_smooth(&mut rng);
            let fb = random_smooth(&mut rng);
            let mut errs = [0.0; 2];
            for (e, n) in errs.iter_mut().zip([201, 401]) {
                let g = UnitGrid::trapezoid(n)?;
                let b = BoundaryData::from_fns(g.clone(), g, &fa, &fb);
                *e = face_error(&b, kappa(k))?;
            }
            worst = worst.max(errs[1]);
            let ratio = errs[0] / errs[1];
            ratios.push(ratio);
            worst_ratio = worst_ratio.max((ratio - 4.0).abs());
        }
    }
    let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().copied().fold(0.0, f64::max);
    Ok(vec![
        upper(
            "oracle_equivalence",
            worst,
            1e-3,
            scale,
            "Green's evaluator vs characteristics, max relative L-inf on output faces, n = 400, kappa in {1,4}".into(),
        ),
        upper(
            "oracle_second_order",
            worst_ratio,
            1.0,
            scale,
            format!("error ratio n=200/n=400 in [{lo:.3}, {hi:.3}], must lie in [3, 5]"),
        ),
    ])
}

fn conservation(scale: f64) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let g = UnitGrid::trapezoid(401)?;
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let b = BoundaryData::from_fns(
            g.clone(),
            g.clone(),
            random_smooth(&mut rng),
            random_smooth(&mut rng),
        );
        let f = integrate_characteristics(&b, kappa(4.0))?;
        worst = worst.max(excitation_balance(&f)?.defect);
    }
    Ok(upper(
        "excitation_conservation",
        worst,
        1e-4,
        scale,
        "max integrated defect over 10 random inputs, kappa = 4, n = 400".into(),
    ))
}

fn unitarity(scale: f64) -> Result<Vec<Check>> {
    let m = compute_modes(kappa(4.0), &gl(200), 8)?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let mut z = || Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let input = ModeCoefficients {
            light: (0..8).map(|_| z()).collect(),
            spin: (0..8).map(|_| z()).collect(),
            q: [0.0, 0.0],
        };
        let out = one_pass_map(&input, &m)?;
        worst = worst.max((out.energy() - input.energy()).abs() / input.energy());
    }
    let n = 60;
    let mw = compute_modes(kappa(4.0), &gl(n), n)?;
    let mr = compute_modes(kappa(25.0), &gl(n), n)?;
    let p = port_matrix(&mw, &mr)?;
    let rows = p
        .rows()
        .into_iter()
        .map(|r| (r.iter().map(|v| v.norm_sqr()).sum::<f64>() - 1.0).abs())
        .fold(0.0, f64::max);
    Ok(vec![
        upper(
            "one_pass_unitarity",
            worst,
            1e-10,
            scale,
            "relative energy change over 1000 random 8-mode inputs, kappa = 4".into(),
        ),
        upper(
            "cycle_row_norms",
            rows,
            1e-10,
            scale,
            format!(
                "max |row norm^2 - 1| of the {}-port cycle matrix, kappa 4 -> 25",
                3 * n
            ),
        ),
    ])
}

fn efficiency() -> Result<Vec<Check>> {
    let g = gl(200);
    let mw = compute_modes(kappa(4.0), &g, g.n())?;
    let mut totals = Vec::new();
    let mut at25 = None;
    for kr in [4.0, 8.0, 16.0, 25.0] {
        let mr = compute_modes(kappa(kr), &g, g.n())?;
        let e = mode_efficiency(0, &mw, &mr)?;
        totals.push(e.total);
        if kr == 25.0 {
            at25 = Some(e);
        }
    }
    let e = at25.expect("kappa_read = 25 in sweep");
    let detail = if e.total >= EFFICIENCY_TARGET {
        format!("total {:.6}, diagonal {:.6}", e.total, e.diagonal)
    } else if e.total >= EFFICIENCY_FLAG_FLOOR {
        format!(
            "total {:.6} below {EFFICIENCY_TARGET}: flagged, the readout-basis reprojection interpretation may account for the gap",
            e.total
        )
    } else {
        format!(
            "total {:.6} (diagonal {:.6}) below {EFFICIENCY_TARGET} and below the {EFFICIENCY_FLAG_FLOOR} flag band",
            e.total, e.diagonal
        )
    };
    let drops = totals
        .windows(2)
        .map(|w| (w[0] - w[1]).max(0.0))
        .fold(0.0, f64::max);
    Ok(vec![
        Check {
            name: "retrieval_efficiency".into(),
            passed: e.total >= EFFICIENCY_TARGET,
            measured: e.total,
            tolerance: EFFICIENCY_TARGET,
            detail,
        },
        Check {
            name: "efficiency_monotone_in_kappa_read".into(),
            passed: drops <= 0.0,
            measured: drops,
            tolerance: 0.0,
            detail: format!("mode-1 totals for kappa_read 4, 8, 16, 25: {totals:?}"),
        },
    ])
}

fn capacity_formulas(scale: f64) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let lam = 10f64.powf(rng.gen_range(-7.0..-5.0));
        let l = 10f64.powf(rng.gen_range(-3.0..0.0));
        let s = 10f64.powf(rng.gen_range(-6.0..-2.0));
        let eps = rng.gen_range(0.01..0.5);
        let g = HologramGeometry::new(lam, l, s, eps)?;
        let thin = s / (lam * l);
        let vol = (eps * eps * s / (lam * lam)).min(thin * thin);
        worst = worst
            .max((capacity_thin(&g) / thin - 1.0).abs())
            .max((capacity_volume(&g).value / vol - 1.0).abs());
    }
    let mut boundary = 0.0f64;
    for _ in 0..100 {
        let lam = 10f64.powf(rng.gen_range(-7.0..-5.0));
        let l = 10f64.powf(rng.gen_range(-3.0..0.0));
        let eps = rng.gen_range(0.01..0.5);
        let g = HologramGeometry::new(lam, l, eps * eps * l * l, eps)?;
        let p = eps * eps * g.cross_section() / (lam * lam);
        let f = fresnel_number(&g);
        boundary = boundary.max((p / (f * f) - 1.0).abs());
    }
    Ok(vec![
        upper(
            "capacity_formulas",
            worst,
            1e-12,
            scale,
            "max relative deviation over 1000 random geometries".into(),
        ),
        upper(
            "capacity_regime_boundary",
            boundary,
            1e-12,
            scale,
            "relative gap between branches at sqrt(S)/L = eps".into(),
        ),
    ])
}

/// Projects characteristics outputs on the eigenmodes and compares with the
/// beamsplitter coefficients.
pub fn cross_module_error(m: &ModeSet, n_dyn: usize, seed: u64) -> Result<f64> {
    let k = 3.min(m.n_modes());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut z = || Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let coeffs = ModeCoefficients {
        light: (0..k).map(|_| z()).collect(),
        spin: (0..k).map(|_| z()).collect(),
        q: [0.0, 0.0],
    };
    let g = UnitGrid::trapezoid(n_dyn)?;
    let forward: Vec<Vec<f64>> = (0..k)
        .map(|i| m.evaluate(i, &g.nodes))
        .collect::<Result<_>>()?;
    let synth = |c: &[Complex64]| -> Vec<Complex64> {
        // sum_i c_i phi_i(1 - x): reversal is exact on the symmetric grid
        (0..g.n())
            .map(|a| (0..k).map(|i| c[i] * forward[i][g.n() - 1 - a]).sum())
            .collect()
    };
    let b = BoundaryData::square(g.clone(), synth(&coeffs.light), synth(&coeffs.spin))?;
    let f = integrate_characteristics(&b, m.coupling)?;
    let sub = ModeSet {
        lambda: m.lambda[..k].to_vec(),
        mu: m.mu[..k].to_vec(),
        ..m.clone()
    };
    let want = one_pass_map(&coeffs, &sub)?;
    let mut worst = 0.0f64;
    for i in 0..k {
        let phi: Vec<Complex64> = forward[i].iter().map(|&v| v.into()).collect();
        let a = g.inner_product(&phi, f.alpha_out())?;
        let s = g.inner_product(&phi, f.beta_out())?;
        worst = worst
            .max((a - want.light[i]).norm())
            .max((s - want.spin[i]).norm());
    }
    Ok(worst)
}

fn cross_module(scale: f64) -> Result<Check> {
    let m = compute_modes(kappa(4.0), &gl(200), 3)?;
    let mut worst = 0.0f64;
    for seed in 0..3 {
        worst = worst.max(cross_module_error(&m, 401, seed)?);
    }
    Ok(upper(
        "mode_vs_field_projection",
        worst,
        5e-3,
        scale,
        "max coefficient error, characteristics n = 400 projected on modes 1-3, kappa = 4".into(),
    ))
}

/// Runs every check. Numerical failures inside a check propagate as errors.
pub fn run_suite(tolerance_scale: f64) -> Result<VerifyReport> {
    let s = tolerance_scale;
    let mut checks = leading_modes(s)?;
    checks.extend(constraint(s)?);
    checks.extend(oracles(s)?);
    checks.push(conservation(s)?);
    checks.extend(unitarity(s)?);
    checks.extend(efficiency()?);
    checks.extend(capacity_formulas(s)?);
    checks.push(cross_module(s)?);
    let all_passed = checks.iter().all(|c| c.passed);
    Ok(VerifyReport { checks, all_passed })
}
