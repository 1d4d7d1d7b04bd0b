//! Mode-space maps of the write pass, the readout pass and the full cycle.
//!
//! Input coefficients are projections on the reversed eigenfunctions
//! `phi_i(1 - x)`; output coefficients are projections on `phi_i(x)`. One
//! pass acts on each mode as the beamsplitter
//!
//! ```text
//! [alpha_out]   [ mu      -i lambda ] [alpha_in]
//! [beta_out ] = [ -i lambda   mu    ] [beta_in ]
//! ```
//!
//! Between the passes the stored spin wave `sum_j b_j phi^W_j(xi)` is
//! re-expanded in the readout inputs `phi^R_i(1 - xi)`, which brings in the
//! overlap `f_ij = int phi^R_i(1 - xi) phi^W_j(xi) dxi`. The readout pass uses
//! the read set's own `(lambda_i, mu_i)`.

use crate::capacity::{diffraction_phase, HologramGeometry};
use crate::eigenmodes::{compute_modes, cross_overlap, ModeSet};
use crate::error::arg_err;
use crate::grid::UnitGrid;
use crate::kernels::Coupling;
#[allow(unused_imports)]
use crate::par::prelude::*;
use crate::{Complex64, Result};
use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycleConfig {
    pub kappa_write: Coupling,
    pub kappa_read: Coupling,
    pub n_modes: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geometry: Option<HologramGeometry>,
}

impl CycleConfig {
    pub fn new(kappa_write: Coupling, kappa_read: Coupling, n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(arg_err!("cycle needs at least one mode"));
        }
        Ok(Self {
            kappa_write,
            kappa_read,
            n_modes,
            geometry: None,
        })
    }

    pub fn with_geometry(mut self, g: HologramGeometry) -> Self {
        self.geometry = Some(g);
        self
    }
}

/// Amplitudes per temporal (light) and spatial (spin) eigenmode for one
/// transverse wavevector `q` (rad/m).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeCoefficients {
    pub light: Vec<Complex64>,
    pub spin: Vec<Complex64>,
    pub q: [f64; 2],
}

impl ModeCoefficients {
    pub fn vacuum(n: usize) -> Self {
        Self {
            light: vec![Complex64::new(0.0, 0.0); n],
            spin: vec![Complex64::new(0.0, 0.0); n],
            q: [0.0, 0.0],
        }
    }

    /// Light in mode `j` only.
    pub fn light_mode(n: usize, j: usize, amplitude: Complex64) -> Self {
        let mut c = Self::vacuum(n);
        c.light[j] = amplitude;
        c
    }

    pub fn with_q(mut self, q: [f64; 2]) -> Self {
        self.q = q;
        self
    }

    pub fn n_modes(&self) -> usize {
        self.light.len()
    }

    /// `sum |alpha_i|^2 + |beta_i|^2`.
    pub fn energy(&self) -> f64 {
        self.light
            .iter()
            .chain(&self.spin)
            .map(|v| v.norm_sqr())
            .sum()
    }

    fn check(&self, n: usize) -> Result<()> {
        if self.light.len() != n || self.spin.len() != n {
            return Err(arg_err!(
                "coefficient lengths ({}, {}) do not match {n} modes",
                self.light.len(),
                self.spin.len()
            ));
        }
        Ok(())
    }
}

/// Per-mode beamsplitter `[[mu, -i lambda], [-i lambda, mu]]`.
pub fn one_pass_map(input: &ModeCoefficients, m: &ModeSet) -> Result<ModeCoefficients> {
    input.check(m.n_modes())?;
    let mi = Complex64::new(0.0, -1.0);
    let (light, spin) = input
        .light
        .iter()
        .zip(&input.spin)
        .zip(m.lambda.iter().zip(&m.mu))
        .map(|((&a, &b), (&l, &u))| (a * u + mi * l * b, mi * l * a + b * u))
        .unzip();
    Ok(ModeCoefficients {
        light,
        spin,
        q: input.q,
    })
}

/// Overlap between the read and write bases: the write set's own matrix when
/// both sets share coupling and grid.
fn overlap_for(m_w: &ModeSet, m_r: &ModeSet) -> Result<Array2<f64>> {
    if m_w.coupling == m_r.coupling && m_w.grid == m_r.grid && m_w.n_modes() == m_r.n_modes() {
        Ok(m_w.overlap.clone())
    } else {
        cross_overlap(m_r, m_w)
    }
}

fn prefactor(cfg: &CycleConfig, q: [f64; 2]) -> Result<Complex64> {
    match &cfg.geometry {
        Some(g) => diffraction_phase(q, g.cell_length(), g),
        None => Ok(Complex64::new(1.0, 0.0)),
    }
}

fn check_sets(cfg: &CycleConfig, m_w: &ModeSet, m_r: &ModeSet) -> Result<()> {
    if m_w.n_modes() != cfg.n_modes || m_r.n_modes() != cfg.n_modes {
        return Err(arg_err!(
            "mode sets hold ({}, {}) modes, configuration expects {}",
            m_w.n_modes(),
            m_r.n_modes(),
            cfg.n_modes
        ));
    }
    if m_w.coupling != cfg.kappa_write || m_r.coupling != cfg.kappa_read {
        return Err(arg_err!(
            "mode set couplings do not match the configuration"
        ));
    }
    Ok(())
}

/// Write pass, basis change and readout pass in closed form:
///
/// ```text
/// alpha_out_i = P { mu_i alpha^R_i - i lambda_i sum_j f_ij [mu_j beta^W_j - i lambda_j alpha^W_j] }
/// ```
///
/// with `P = exp(-i q^2 L / 2 k0)` when a geometry is configured. The
/// returned `spin` holds the spin wave left after readout (without `P`).
pub fn full_cycle_map(
    light_write: &ModeCoefficients,
    spin_initial: &ModeCoefficients,
    light_read_in: &ModeCoefficients,
    cfg: &CycleConfig,
    m_w: &ModeSet,
    m_r: &ModeSet,
) -> Result<ModeCoefficients> {
    check_sets(cfg, m_w, m_r)?;
    let n = cfg.n_modes;
    for c in [light_write, spin_initial, light_read_in] {
        c.check(n)?;
    }
    let q = light_write.q;
    if spin_initial.q != q || light_read_in.q != q {
        return Err(arg_err!(
            "all cycle inputs must share one transverse wavevector"
        ));
    }
    let f = overlap_for(m_w, m_r)?;
    let mi = Complex64::new(0.0, -1.0);
    let stored: Array1<Complex64> = (0..n)
        .map(|j| spin_initial.spin[j] * m_w.mu[j] + mi * m_w.lambda[j] * light_write.light[j])
        .collect();
    let fc = f.mapv(|v| Complex64::new(v, 0.0));
    let read_spin_in = fc.dot(&stored);
    let p = prefactor(cfg, q)?;
    let light = (0..n)
        .map(|i| p * (light_read_in.light[i] * m_r.mu[i] + mi * m_r.lambda[i] * read_spin_in[i]))
        .collect();
    let spin = (0..n)
        .map(|i| mi * m_r.lambda[i] * light_read_in.light[i] + read_spin_in[i] * m_r.mu[i])
        .collect();
    Ok(ModeCoefficients { light, spin, q })
}

/// The same cycle through field samples: write [`one_pass_map`], synthesise
/// the stored spin wave on the grid, project it on the reversed read modes,
/// then read [`one_pass_map`].
pub fn composed_cycle(
    light_write: &ModeCoefficients,
    spin_initial: &ModeCoefficients,
    light_read_in: &ModeCoefficients,
    cfg: &CycleConfig,
    m_w: &ModeSet,
    m_r: &ModeSet,
) -> Result<ModeCoefficients> {
    check_sets(cfg, m_w, m_r)?;
    if m_w.grid != m_r.grid {
        return Err(arg_err!("write and read modes must share a grid"));
    }
    let n = cfg.n_modes;
    let write_in = ModeCoefficients {
        light: light_write.light.clone(),
        spin: spin_initial.spin.clone(),
        q: light_write.q,
    };
    let written = one_pass_map(&write_in, m_w)?;
    let grid: &UnitGrid = &m_w.grid;
    let npts = grid.n();
    let field: Vec<Complex64> = (0..npts)
        .map(|k| (0..n).map(|j| written.spin[j] * m_w.phi[[j, k]]).sum())
        .collect();
    let projected: Vec<Complex64> = (0..n)
        .map(|i| {
            (0..npts)
                .map(|k| field[k] * (grid.weights[k] * m_r.phi[[i, npts - 1 - k]]))
                .sum()
        })
        .collect();
    let read_in = ModeCoefficients {
        light: light_read_in.light.clone(),
        spin: projected,
        q: light_read_in.q,
    };
    let mut out = one_pass_map(&read_in, m_r)?;
    let p = prefactor(cfg, out.q)?;
    for v in &mut out.light {
        *v *= p;
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeEfficiency {
    /// `|lambda^R_j lambda^W_j f_jj|^2`.
    pub diagonal: f64,
    /// `sum_i |lambda^R_i lambda^W_j f_ij|^2` over the read set.
    pub total: f64,
}

/// Retrieved fraction of the light energy written into mode `j` (zero-based).
///
/// `total` only counts the modes present in `m_r`; pass a complete read set
/// for the full figure.
pub fn mode_efficiency(j: usize, m_w: &ModeSet, m_r: &ModeSet) -> Result<ModeEfficiency> {
    if j >= m_w.n_modes() || j >= m_r.n_modes() {
        return Err(arg_err!(
            "mode index {j} out of range for sets of ({}, {}) modes",
            m_w.n_modes(),
            m_r.n_modes()
        ));
    }
    let f = cross_overlap(m_r, m_w)?;
    let lw = m_w.lambda[j];
    let amp = |i: usize| m_r.lambda[i] * lw * f[[i, j]];
    Ok(ModeEfficiency {
        diagonal: amp(j).powi(2),
        total: (0..m_r.n_modes()).map(|i| amp(i).powi(2)).sum(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseBudget {
    /// Energy gain from the written mode to all retrieved modes.
    pub signal_gain_sq: f64,
    /// `1 - signal_gain_sq`: vacuum weight mixed into the retrieved light.
    pub vacuum_admixture: f64,
    /// Worst `|sum |M_ik|^2 - 1|` over the rows of the cycle's port matrix.
    pub row_norm_defect: f64,
}

/// Vacuum bookkeeping for retrieving mode `j`. The cycle is a passive
/// linear map, so unused vacuum ports keep the output variance at the vacuum
/// level exactly when every port-matrix row has unit norm.
pub fn noise_budget(j: usize, m_w: &ModeSet, m_r: &ModeSet) -> Result<NoiseBudget> {
    let e = mode_efficiency(j, m_w, m_r)?;
    let m = port_matrix(m_w, m_r)?;
    let row_norm_defect = m
        .rows()
        .into_iter()
        .map(|r| (r.iter().map(|v| v.norm_sqr()).sum::<f64>() - 1.0).abs())
        .fold(0.0, f64::max);
    Ok(NoiseBudget {
        signal_gain_sq: e.total,
        vacuum_admixture: 1.0 - e.total,
        row_norm_defect,
    })
}

/// Linear map of the cycle over all ports.
///
/// Inputs, in blocks of `N` modes: write light, initial spin, read light.
/// Outputs: light leaving the write pass, light leaving the read pass, spin
/// left after the read pass. Unitary when both sets span their grid.
pub fn port_matrix(m_w: &ModeSet, m_r: &ModeSet) -> Result<Array2<Complex64>> {
    let n = m_w.n_modes();
    if m_r.n_modes() != n {
        return Err(arg_err!("port matrix needs equal basis sizes"));
    }
    let f = cross_overlap(m_r, m_w)?;
    let mi = Complex64::new(0.0, -1.0);
    let re = |v: f64| Complex64::new(v, 0.0);
    let mut m = Array2::from_elem((3 * n, 3 * n), re(0.0));
    for i in 0..n {
        // write pass light output
        m[[i, i]] = re(m_w.mu[i]);
        m[[i, n + i]] = mi * m_w.lambda[i];
        // read light: mu_i a^R_i - i l_i sum_j f_ij (-i l_j a^W_j + mu_j b_j)
        m[[n + i, 2 * n + i]] = re(m_r.mu[i]);
        m[[2 * n + i, 2 * n + i]] = mi * m_r.lambda[i];
        for j in 0..n {
            let fij = f[[i, j]];
            let to_aw = mi * m_w.lambda[j] * fij;
            let to_b = re(m_w.mu[j] * fij);
            m[[n + i, j]] = mi * m_r.lambda[i] * to_aw;
            m[[n + i, n + j]] = mi * m_r.lambda[i] * to_b;
            m[[2 * n + i, j]] = to_aw * m_r.mu[i];
            m[[2 * n + i, n + j]] = to_b * m_r.mu[i];
        }
    }
    Ok(m)
}

/// JSON record of one cycle run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycleReport {
    pub kappa_write: f64,
    pub kappa_read: f64,
    /// One-based.
    pub mode_index: usize,
    pub diagonal_efficiency: f64,
    pub total_efficiency: f64,
    pub vacuum_admixture: f64,
    /// Argument of the diffraction prefactor in radians.
    pub prefactor_phase: f64,
}

pub fn cycle_report(
    j: usize,
    cfg: &CycleConfig,
    q: [f64; 2],
    m_w: &ModeSet,
    m_r: &ModeSet,
) -> Result<CycleReport> {
    let e = mode_efficiency(j, m_w, m_r)?;
    Ok(CycleReport {
        kappa_write: m_w.kappa(),
        kappa_read: m_r.kappa(),
        mode_index: j + 1,
        diagonal_efficiency: e.diagonal,
        total_efficiency: e.total,
        vacuum_admixture: 1.0 - e.total,
        prefactor_phase: prefactor(cfg, q)?.arg(),
    })
}

/// One row of an efficiency sweep.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub kappa_write: f64,
    pub kappa_read: f64,
    /// One-based.
    pub mode: usize,
    pub diagonal_eff: f64,
    pub total_eff: f64,
}

/// Efficiencies for every `(kappa_w, kappa_r, mode)` combination, with full
/// mode sets on `grid`. Rows come back sorted by key.
pub fn efficiency_sweep(
    kappa_write: &[f64],
    kappa_read: &[f64],
    modes: &[usize],
    grid: &UnitGrid,
) -> Result<Vec<SweepRow>> {
    if kappa_write.is_empty() || kappa_read.is_empty() || modes.is_empty() {
        return Err(arg_err!("sweep ranges must be non-empty"));
    }
    if let Some(&m) = modes.iter().find(|&&m| m == 0 || m > grid.n()) {
        return Err(arg_err!("mode {m} outside 1..={}", grid.n()));
    }
    let mut kappas: Vec<f64> = kappa_write.iter().chain(kappa_read).copied().collect();
    kappas.sort_by(f64::total_cmp);
    kappas.dedup();
    let sets: Vec<ModeSet> = if_rayon!(kappas.par_iter(), kappas.iter())
        .map(|&k| compute_modes(Coupling::new(k)?, grid, grid.n()))
        .collect::<Result<_>>()?;
    let find = |k: f64| {
        &sets[kappas
            .iter()
            .position(|&x| x == k)
            .expect("kappa collected")]
    };

    let mut cells = Vec::new();
    for &kw in kappa_write {
        for &kr in kappa_read {
            for &m in modes {
                cells.push((kw, kr, m));
            }
        }
    }
    let mut rows: Vec<SweepRow> = if_rayon!(cells.par_iter(), cells.iter())
        .map(|&(kw, kr, m)| {
            let e = mode_efficiency(m - 1, find(kw), find(kr))?;
            Ok(SweepRow {
                kappa_write: kw,
                kappa_read: kr,
                mode: m,
                diagonal_eff: e.diagonal,
                total_eff: e.total,
            })
        })
        .collect::<Result<_>>()?;
    rows.sort_by(|a, b| {
        a.kappa_write
            .total_cmp(&b.kappa_write)
            .then(a.kappa_read.total_cmp(&b.kappa_read))
            .then(a.mode.cmp(&b.mode))
    });
    rows.dedup();
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigenmodes::compute_modes;

    fn set(k: f64, n: usize, modes: usize) -> ModeSet {
        compute_modes(
            Coupling::new(k).unwrap(),
            &UnitGrid::gauss_legendre(n).unwrap(),
            modes,
        )
        .unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn ideal_swap() {
        let mut m = set(4.0, 16, 1);
        m.lambda = vec![1.0];
        m.mu = vec![0.0];
        let out = one_pass_map(&ModeCoefficients::light_mode(1, 0, c(1.0, 0.0)), &m).unwrap();
        assert_eq!(out.light[0], c(0.0, 0.0));
        assert_eq!(out.spin[0], c(0.0, -1.0));
    }

    #[test]
    fn zero_coupling_is_identity() {
        let m = set(0.0, 16, 3);
        let input = ModeCoefficients {
            light: vec![c(1.0, 2.0), c(-0.5, 0.0), c(0.0, 3.0)],
            spin: vec![c(0.1, 0.0), c(0.0, -1.0), c(2.0, 2.0)],
            q: [0.0, 0.0],
        };
        assert_eq!(one_pass_map(&input, &m).unwrap(), input);
    }

    #[test]
    fn length_mismatch() {
        let m = set(4.0, 16, 3);
        assert!(one_pass_map(&ModeCoefficients::vacuum(2), &m).is_err());
        let cfg = CycleConfig::new(m.coupling, m.coupling, 3).unwrap();
        let v = ModeCoefficients::vacuum(3);
        assert!(full_cycle_map(&ModeCoefficients::vacuum(4), &v, &v, &cfg, &m, &m).is_err());
        assert!(CycleConfig::new(m.coupling, m.coupling, 0).is_err());
        assert!(mode_efficiency(3, &m, &m).is_err());
    }

    #[test]
    fn cycle_of_vacuum_is_vacuum() {
        let m = set(4.0, 40, 4);
        let cfg = CycleConfig::new(m.coupling, m.coupling, 4).unwrap();
        let v = ModeCoefficients::vacuum(4);
        let out = full_cycle_map(&v, &v, &v, &cfg, &m, &m).unwrap();
        assert_eq!(out.energy(), 0.0);
    }

    #[test]
    fn single_mode_write_amplitudes() {
        let m = set(4.0, 60, 5);
        let cfg = CycleConfig::new(m.coupling, m.coupling, 5).unwrap();
        let v = ModeCoefficients::vacuum(5);
        let w = ModeCoefficients::light_mode(5, 1, c(1.0, 0.0));
        let out = full_cycle_map(&w, &v, &v, &cfg, &m, &m).unwrap();
        for i in 0..5 {
            let want = -m.lambda[i] * m.lambda[1] * m.overlap[[i, 1]];
            assert!((out.light[i] - c(want, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn two_cycle_paths_agree() {
        let mw = set(4.0, 60, 6);
        let mr = set(9.0, 60, 6);
        let cfg = CycleConfig::new(mw.coupling, mr.coupling, 6).unwrap();
        let a = ModeCoefficients {
            light: (0..6).map(|k| c(k as f64, 1.0)).collect(),
            spin: vec![c(0.0, 0.0); 6],
            q: [0.0, 0.0],
        };
        let b = ModeCoefficients {
            light: vec![c(0.0, 0.0); 6],
            spin: (0..6).map(|k| c(0.5, -(k as f64))).collect(),
            q: [0.0, 0.0],
        };
        let r = ModeCoefficients::light_mode(6, 2, c(0.3, 0.3));
        let x = full_cycle_map(&a, &b, &r, &cfg, &mw, &mr).unwrap();
        let y = composed_cycle(&a, &b, &r, &cfg, &mw, &mr).unwrap();
        for (p, q) in x
            .light
            .iter()
            .zip(&y.light)
            .chain(x.spin.iter().zip(&y.spin))
        {
            assert!((p - q).norm() < 1e-10);
        }
    }

    #[test]
    fn efficiency_bounds() {
        let m = set(4.0, 40, 40);
        let e = mode_efficiency(0, &m, &m).unwrap();
        assert!(e.diagonal <= e.total && e.total <= 1.0);
    }

    #[test]
    fn port_matrix_unitary_on_full_basis() {
        let mw = set(4.0, 30, 30);
        let mr = set(7.0, 30, 30);
        let b = noise_budget(0, &mw, &mr).unwrap();
        assert!(b.row_norm_defect < 1e-10, "{}", b.row_norm_defect);
        assert!((b.signal_gain_sq + b.vacuum_admixture - 1.0).abs() < 1e-15);
    }

    #[test]
    fn nothing_stored_at_zero_coupling() {
        let m = set(0.0, 20, 5);
        let b = noise_budget(0, &m, &m).unwrap();
        assert_eq!(b.signal_gain_sq, 0.0);
        assert_eq!(b.vacuum_admixture, 1.0);
    }

    #[test]
    fn prefactor_is_a_phase() {
        let m = set(4.0, 40, 3);
        let g = HologramGeometry::new(800e-9, 1e-2, 1e-4, 0.1).unwrap();
        let cfg = CycleConfig::new(m.coupling, m.coupling, 3)
            .unwrap()
            .with_geometry(g);
        let v = ModeCoefficients::vacuum(3);
        let energy = |q: [f64; 2]| {
            let w = ModeCoefficients::light_mode(3, 0, c(1.0, 0.0)).with_q(q);
            full_cycle_map(&w, &v.clone().with_q(q), &v.clone().with_q(q), &cfg, &m, &m)
                .unwrap()
                .light
                .iter()
                .map(|x| x.norm_sqr())
                .sum::<f64>()
        };
        let e0 = energy([0.0, 0.0]);
        for q in [[1e4, 0.0], [3e4, -2e4], [0.0, 5e5]] {
            assert!((energy(q) - e0).abs() < 1e-12);
        }
        let r = cycle_report(0, &cfg, [1e5, 0.0], &m, &m).unwrap();
        let k0 = g.k0();
        let want = -(1e10 * 1e-2 / (2.0 * k0));
        assert!(
            (Complex64::from_polar(1.0, r.prefactor_phase) - Complex64::from_polar(1.0, want))
                .norm()
                < 1e-12
        );
        let v = ModeCoefficients::vacuum(3);
        assert!(full_cycle_map(&v.clone().with_q([1.0, 0.0]), &v, &v, &cfg, &m, &m).is_err());
    }

    #[test]
    fn sweep_sorted_and_validated() {
        let g = UnitGrid::gauss_legendre(40).unwrap();
        let rows = efficiency_sweep(&[4.0], &[8.0, 4.0], &[2, 1], &g).unwrap();
        let keys: Vec<_> = rows.iter().map(|r| (r.kappa_read, r.mode)).collect();
        assert_eq!(keys, vec![(4.0, 1), (4.0, 2), (8.0, 1), (8.0, 2)]);
        assert!(efficiency_sweep(&[], &[4.0], &[1], &g).is_err());
        assert!(efficiency_sweep(&[4.0], &[4.0], &[0], &g).is_err());
    }
}
