use holovolume::dynamics::{greens_solution, integrate_characteristics};
use holovolume::eigenmodes::{compute_modes, cross_overlap};
use holovolume::{BoundaryData, Complex64, Coupling, UnitGrid};

fn reversed(m: &holovolume::ModeSet, i: usize, g: &UnitGrid) -> Vec<Complex64> {
    let rev: Vec<f64> = g.nodes.iter().map(|t| 1.0 - t).collect();
    m.evaluate(i, &rev)
        .unwrap()
        .into_iter()
        .map(Complex64::from)
        .collect()
}

/// A reversed eigenmode at the entrance leaves `mu^2` of its energy as light
/// and stores `lambda^2` in the spin wave.
#[test]
fn eigenmode_input_splits_energy_by_lambda() {
    for k in [1.0, 4.0] {
        let c = Coupling::new(k).unwrap();
        let m = compute_modes(c, &UnitGrid::gauss_legendre(200).unwrap(), 3).unwrap();
        let g = UnitGrid::trapezoid(401).unwrap();
        for i in 0..3 {
            let zero = vec![Complex64::new(0.0, 0.0); g.n()];
            let b = BoundaryData::square(g.clone(), reversed(&m, i, &g), zero).unwrap();
            let f = integrate_characteristics(&b, c).unwrap();
            let light = g.norm(f.alpha_out()).unwrap().powi(2);
            let spin = g.norm(f.beta_out()).unwrap().powi(2);
            assert!(
                (light - m.mu[i].powi(2)).abs() < 5e-3,
                "kappa {k} mode {i}: light {light}"
            );
            assert!(
                (spin - m.lambda[i].powi(2)).abs() < 5e-3,
                "kappa {k} mode {i}: spin {spin}"
            );
        }
    }
}

/// Same split from the Green's-function evaluator on a Gauss grid.
#[test]
fn greens_evaluator_agrees_on_gauss_nodes() {
    let c = Coupling::new(4.0).unwrap();
    let g = UnitGrid::gauss_legendre(64).unwrap();
    let m = compute_modes(c, &g, 2).unwrap();
    let zero = vec![Complex64::new(0.0, 0.0); g.n()];
    let b = BoundaryData::square(g.clone(), reversed(&m, 0, &g), zero).unwrap();
    let f = greens_solution(&b, c, &g).unwrap();
    let spin = g.norm(f.beta_out()).unwrap().powi(2);
    assert!((spin - m.lambda[0].powi(2)).abs() < 1e-6, "spin {spin}");
}

/// Modes of a complete set span the grid: Parseval holds for any sample
/// vector, and the partial sums of the captured energy only grow.
#[test]
fn full_mode_set_is_complete() {
    let g = UnitGrid::gauss_legendre(80).unwrap();
    let m = compute_modes(Coupling::new(8.0).unwrap(), &g, g.n()).unwrap();
    let f: Vec<f64> = g.nodes.iter().map(|x| (3.0 * x).sin() + x * x).collect();
    let total = g.norm(&f).unwrap().powi(2);
    let coeffs: Vec<f64> = (0..m.n_modes())
        .map(|i| g.inner_product_real(&m.samples(i).to_vec(), &f).unwrap())
        .collect();
    let captured: f64 = coeffs.iter().map(|c| c * c).sum();
    assert!((captured - total).abs() < 1e-12 * total);

    // the write/read overlap of complete sets is orthogonal
    let mr = compute_modes(Coupling::new(25.0).unwrap(), &g, g.n()).unwrap();
    let o = cross_overlap(&mr, &m).unwrap();
    let oo = o.t().dot(&o);
    for ((i, j), v) in oo.indexed_iter() {
        let want = if i == j { 1.0 } else { 0.0 };
        assert!((v - want).abs() < 1e-11, "({i}, {j}) = {v}");
    }
}

/// Light stored by the first `k` modes approaches the full-set value, with a
/// tail bounded by the eigenvalue of the first omitted mode.
#[test]
fn truncation_tail_is_bounded_by_next_eigenvalue() {
    let g = UnitGrid::gauss_legendre(120).unwrap();
    let c = Coupling::new(4.0).unwrap();
    let m = compute_modes(c, &g, g.n()).unwrap();
    let f: Vec<f64> = g.nodes.iter().map(|x| 1.0 + 0.5 * x).collect();
    let norm2 = g.norm(&f).unwrap().powi(2);
    let proj: Vec<f64> = (0..g.n())
        .map(|i| {
            let rev: Vec<f64> = m.samples(i).iter().rev().copied().collect();
            g.inner_product_real(&rev, &f).unwrap()
        })
        .collect();
    let stored = |k: usize| -> f64 { (0..k).map(|i| (m.lambda[i] * proj[i]).powi(2)).sum() };
    let full = stored(g.n());
    for k in 1..8 {
        let tail = full - stored(k);
        assert!(tail >= -1e-14);
        assert!(
            tail <= m.lambda[k].powi(2) * norm2 + 1e-14,
            "k = {k}: tail {tail}"
        );
    }
}

/// Both solvers agree and conserve excitation over the whole coupling range.
#[test]
fn solvers_agree_across_couplings() {
    use holovolume::dynamics::excitation_balance;
    use rand::SeedableRng;
    let g = UnitGrid::trapezoid(401).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(91);
    let b = BoundaryData::from_fns(
        g.clone(),
        g.clone(),
        holovolume::verify::random_smooth(&mut rng),
        holovolume::verify::random_smooth(&mut rng),
    );
    for k in [0.5, 1.0, 2.0, 4.0, 8.0] {
        let c = Coupling::new(k).unwrap();
        let a = integrate_characteristics(&b, c).unwrap();
        let r = greens_solution(&b, c, &g).unwrap();
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
        assert!(diff / peak <= 1e-3, "kappa {k}: {}", diff / peak);
        let defect = excitation_balance(&a).unwrap().defect;
        assert!(defect <= 1e-4, "kappa {k}: defect {defect}");
    }
}
