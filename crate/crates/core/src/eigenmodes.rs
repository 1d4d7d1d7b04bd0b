//! Shared eigenfunctions of the write/readout kernels.
//!
//! The light-to-spin kernel `G0(1 - x, y)` factors as
//! `sum_i phi_i(y) lambda_i phi_i(1 - x)`: an SVD whose right vectors are the
//! time-reversed left vectors. Composing with the reversal `x -> 1 - x` turns
//! it into the symmetric eigenproblem of `K(x, y) = (kappa/2) J0(kappa sqrt(xy))`,
//! which is discretised on a quadrature grid (Nyström) as `W^1/2 K W^1/2` and
//! solved with cyclic Jacobi.
//!
//! The transmission eigenvalues `mu_i` are not derived from the constraint
//! `lambda^2 + mu^2 = 1`; they come from applying the discretised
//! `G1(y - x, 1) = delta(y - x) - (kappa/2) J1(kappa sqrt(y - x)) / sqrt(y - x)`
//! to `phi_i(1 - x)` and projecting on `phi_i`. The residual of that
//! projection measures how well the shared-eigenfunction property holds on
//! the grid.
//!
//! Sign convention: every `phi_i` is positive at the node nearest `1`, and
//! `lambda_i` carries the resulting sign.

use crate::error::arg_err;
use crate::grid::{legendre_values, GridScheme, UnitGrid};
use crate::kernels::Coupling;
use crate::linalg::jacobi_eigen;
#[allow(unused_imports)]
use crate::par::prelude::*;
use crate::{Error, Result};
use ndarray::{Array1, Array2, ArrayView1, Axis};
use serde::{Deserialize, Serialize};

/// Gauss–Legendre order for the Volterra integrals of `G1` on `[0, y]`.
const VOLTERRA_ORDER: usize = 96;

/// Largest projection residual (relative to `||phi_i|| = 1`) accepted for a
/// resolved mode.
pub const MU_RESIDUAL_TOL: f64 = 1e-3;

/// Eigenvalues below this magnitude are at the round-off floor of the
/// Nyström matrix.
pub const TRUNCATION_FLOOR: f64 = 10.0 * f64::EPSILON;

/// Relative size `|lambda_i / lambda_1|` below which an eigenvector is
/// dominated by round-off: its error grows like `eps / |lambda_i|`, so the
/// `G1` residual is reported but not enforced.
pub const RESOLUTION_FLOOR: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct ModeSet {
    pub coupling: Coupling,
    pub grid: UnitGrid,
    /// Row `i` holds `phi_i` sampled on the grid nodes.
    pub phi: Array2<f64>,
    pub lambda: Vec<f64>,
    /// Beamsplitter transmission with magnitude `sqrt(1 - lambda^2)`, so the
    /// one-pass map is exactly unitary. The sign comes from the `G1`
    /// projection for resolved modes and follows `lambda` beyond them (the
    /// pattern every resolved mode shows).
    pub mu: Vec<f64>,
    /// Raw `G1` projections with their residuals.
    pub mu_estimates: Vec<MuEstimate>,
    /// `f_ij = int phi_i(1 - xi) phi_j(xi) dxi`.
    pub overlap: Array2<f64>,
    /// Number of leading modes above [`RESOLUTION_FLOOR`]; only these are
    /// held to [`MU_RESIDUAL_TOL`].
    pub resolved: usize,
    pub warnings: Vec<String>,
}

/// `mu_i = <phi_i, G1 phi_i(1 - .)>` and `|| G1 phi_i(1 - .) - mu_i phi_i ||`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MuEstimate {
    pub mu: f64,
    pub residual: f64,
}

impl ModeSet {
    pub fn n_modes(&self) -> usize {
        self.lambda.len()
    }

    pub fn kappa(&self) -> f64 {
        self.coupling.kappa()
    }

    pub fn samples(&self, i: usize) -> ArrayView1<'_, f64> {
        self.phi.row(i)
    }

    /// `phi_i(x)` at arbitrary points via the grid's polynomial reconstruction.
    pub fn evaluate(&self, i: usize, points: &[f64]) -> Result<Vec<f64>> {
        if i >= self.n_modes() {
            return Err(arg_err!(
                "mode index {i} out of range 0..{}",
                self.n_modes()
            ));
        }
        let row = self.phi.row(i).to_vec();
        let r = self.grid.reconstruct(&row)?;
        Ok(points.iter().map(|&x| r.eval(x)).collect())
    }

    /// Interior sign changes of `phi_i`, ignoring samples below `1e-8` of the
    /// peak magnitude.
    pub fn sign_changes(&self, i: usize) -> usize {
        let row = self.phi.row(i);
        let peak = row.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let mut last = 0.0;
        let mut count = 0;
        for &v in row.iter().filter(|v| v.abs() > 1e-8 * peak) {
            if last != 0.0 && v.signum() != last {
                count += 1;
            }
            last = v.signum();
        }
        count
    }
}

/// Computes the leading `n_modes` eigenfunctions and eigenvalue pairs.
///
/// Fails with [`Error::Consistency`] if a resolved mode's `G1` projection
/// residual exceeds [`MU_RESIDUAL_TOL`]; modes below [`TRUNCATION_FLOOR`] are
/// kept but recorded in `warnings`.
pub fn compute_modes(c: Coupling, grid: &UnitGrid, n_modes: usize) -> Result<ModeSet> {
    let n = grid.n();
    if n_modes == 0 || n_modes > n {
        return Err(arg_err!("n_modes must lie in 1..={n}, got {n_modes}"));
    }
    if c.kappa() == 0.0 {
        return zero_coupling_modes(c, grid, n_modes);
    }

    let sqrt_w: Vec<f64> = grid.weights.iter().map(|w| w.sqrt()).collect();
    let rows: Vec<Vec<f64>> = if_rayon!((0..n).into_par_iter(), 0..n)
        .map(|i| {
            (0..n)
                .map(|j| sqrt_w[i] * c.g0_unchecked(grid.nodes[i], grid.nodes[j]) * sqrt_w[j])
                .collect()
        })
        .collect();
    let nystrom = Array2::from_shape_vec((n, n), rows.concat()).expect("n*n entries");
    let eig = jacobi_eigen(&nystrom)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.values[b]
            .abs()
            .total_cmp(&eig.values[a].abs())
            .then(a.cmp(&b))
    });

    let mut phi = Array2::zeros((n_modes, n));
    let mut lambda = Vec::with_capacity(n_modes);
    for (i, &k) in order.iter().take(n_modes).enumerate() {
        let col = eig.vectors.column(k);
        let mut row: Array1<f64> = col.iter().zip(&sqrt_w).map(|(v, s)| v / s).collect();
        if anchor_sign(row.view()) < 0.0 {
            row.mapv_inplace(|v| -v);
        }
        // the eigenvalue is invariant under the flip; its sign stays in lambda
        phi.row_mut(i).assign(&row);
        lambda.push(eig.values[k]);
    }

    let resolved = count_resolved(&lambda);
    let truncated = lambda.iter().filter(|l| l.abs() < TRUNCATION_FLOOR).count();
    let mut warnings = Vec::new();
    if truncated > 0 {
        warnings.push(format!(
            "{truncated} of {n_modes} modes have |lambda| below {TRUNCATION_FLOOR:e}; the grid cannot resolve them"
        ));
    }
    if resolved < n_modes {
        warnings.push(format!(
            "modes {}..{} lie below the round-off resolution floor; their G1 residuals are not enforced",
            resolved + 1,
            n_modes
        ));
    }

    let g1 = g1_operator(c, grid);
    let mu_estimates = project_mu(&g1, grid, &phi);
    for (i, est) in mu_estimates.iter().enumerate().take(resolved) {
        if !(est.residual <= MU_RESIDUAL_TOL) {
            return Err(Error::Consistency(format!(
                "G1 projection residual {:.3e} for mode {} at kappa = {} exceeds {MU_RESIDUAL_TOL:e}; refine the grid",
                est.residual,
                i + 1,
                c.kappa()
            )));
        }
    }
    let mu = lambda
        .iter()
        .zip(&mu_estimates)
        .enumerate()
        .map(|(i, (l, est))| {
            let mag = (1.0 - l * l).max(0.0).sqrt();
            let sign = if i < resolved { est.mu } else { *l };
            if sign < 0.0 {
                -mag
            } else {
                mag
            }
        })
        .collect();

    let overlap = overlap_between(grid, &phi, &phi);
    Ok(ModeSet {
        coupling: c,
        grid: grid.clone(),
        phi,
        lambda,
        mu,
        mu_estimates,
        overlap,
        resolved,
        warnings,
    })
}

/// `kappa = 0`: `G0` vanishes and `G1` is the identity, so any basis of
/// reversal-symmetric functions satisfies `G1 phi(1 - .) = phi` with
/// `mu = 1`. Even Legendre polynomials, orthonormalised on the grid, are used.
fn zero_coupling_modes(c: Coupling, grid: &UnitGrid, n_modes: usize) -> Result<ModeSet> {
    let n = grid.n();
    if n_modes > n.div_ceil(2) {
        return Err(arg_err!(
            "at kappa = 0 at most {} reversal-symmetric modes exist on a {n}-node grid",
            n.div_ceil(2)
        ));
    }
    let mut p = vec![0.0; 2 * n_modes];
    let mut phi = Array2::zeros((n_modes, n));
    for (k, &x) in grid.nodes.iter().enumerate() {
        legendre_values(2.0 * x - 1.0, &mut p);
        for i in 0..n_modes {
            phi[[i, k]] = p[2 * i];
        }
    }
    // modified Gram-Schmidt under the quadrature weights
    for i in 0..n_modes {
        for j in 0..i {
            let d = weighted_dot(grid, phi.row(i), phi.row(j));
            let pj = phi.row(j).to_owned();
            phi.row_mut(i).scaled_add(-d, &pj);
        }
        let norm = weighted_dot(grid, phi.row(i), phi.row(i)).sqrt();
        phi.row_mut(i).mapv_inplace(|v| v / norm);
        if anchor_sign(phi.row(i)) < 0.0 {
            phi.row_mut(i).mapv_inplace(|v| -v);
        }
    }
    let overlap = overlap_between(grid, &phi, &phi);
    Ok(ModeSet {
        coupling: c,
        grid: grid.clone(),
        phi,
        lambda: vec![0.0; n_modes],
        mu: vec![1.0; n_modes],
        mu_estimates: vec![
            MuEstimate {
                mu: 1.0,
                residual: 0.0
            };
            n_modes
        ],
        overlap,
        resolved: 0,
        warnings: vec!["kappa = 0: degenerate spectrum, all lambda vanish".into()],
    })
}

/// Re-derives `mu_i` from the discretised `G1` operator for every mode in
/// `m`. Errors if a resolved mode's residual exceeds [`MU_RESIDUAL_TOL`].
pub fn mu_from_g1(m: &ModeSet) -> Result<Vec<MuEstimate>> {
    if m.kappa() == 0.0 {
        return Ok(m.mu_estimates.clone());
    }
    let g1 = g1_operator(m.coupling, &m.grid);
    let est = project_mu(&g1, &m.grid, &m.phi);
    if let Some((i, e)) = est
        .iter()
        .enumerate()
        .take(m.resolved)
        .find(|(_, e)| !(e.residual <= MU_RESIDUAL_TOL))
    {
        return Err(Error::Consistency(format!(
            "G1 projection residual {:.3e} for mode {}",
            e.residual,
            i + 1
        )));
    }
    Ok(est)
}

/// Overlap matrix `f_ij` of a mode set with itself.
pub fn overlap_matrix(m: &ModeSet) -> Array2<f64> {
    overlap_between(&m.grid, &m.phi, &m.phi)
}

/// `f_ij = int phi^read_i(1 - xi) phi^write_j(xi) dxi` between two mode sets
/// on the same grid.
pub fn cross_overlap(read: &ModeSet, write: &ModeSet) -> Result<Array2<f64>> {
    if read.grid != write.grid {
        return Err(arg_err!(
            "cross overlap needs both mode sets on the same grid"
        ));
    }
    Ok(overlap_between(&read.grid, &read.phi, &write.phi))
}

fn overlap_between(grid: &UnitGrid, left: &Array2<f64>, right: &Array2<f64>) -> Array2<f64> {
    let n = grid.n();
    // reversed and weighted left factor: w_k phi_i(x_{n-1-k})
    let mut rev = left.clone();
    rev.invert_axis(Axis(1));
    for (mut col, &w) in rev.axis_iter_mut(Axis(1)).zip(&grid.weights) {
        col.mapv_inplace(|v| v * w);
    }
    debug_assert_eq!(rev.ncols(), n);
    rev.dot(&right.t())
}

/// Discretised `G1(y - x, 1)` acting on samples: `(G psi)_m = psi_m -
/// sum_k V_mk psi_k`, where row `m` of `V` integrates
/// `(kappa/2) J1(kappa sqrt(y_m - x)) / sqrt(y_m - x)` against the grid's
/// reconstruction of `psi` on `[0, y_m]`.
///
/// The kernel equals `(kappa^2/2) J1(z)/z` with `z = kappa sqrt(y - x)`, an
/// entire function of `y - x`, so a plain Gauss–Legendre rule on `[0, y_m]` is
/// spectrally accurate.
pub(crate) fn g1_operator(c: Coupling, grid: &UnitGrid) -> Array2<f64> {
    let n = grid.n();
    let rule = UnitGrid::gauss_legendre(VOLTERRA_ORDER).expect("order >= 2");
    let rows: Vec<Vec<f64>> = match grid.scheme {
        GridScheme::GaussLegendre => {
            // V = M diag(2l+1) P, with M_ml = int_0^{y_m} k(y_m - x) P_l(2x-1) dx
            // and P_lk = w_k P_l(2x_k - 1).
            let mut pw = Array2::zeros((n, n));
            let mut p = vec![0.0; n];
            for (k, (&x, &w)) in grid.nodes.iter().zip(&grid.weights).enumerate() {
                legendre_values(2.0 * x - 1.0, &mut p);
                for l in 0..n {
                    pw[[l, k]] = (2 * l + 1) as f64 * w * p[l];
                }
            }
            if_rayon!(grid.nodes.par_iter(), grid.nodes.iter())
                .map(|&y| {
                    let mut moments = vec![0.0; n];
                    let mut p = vec![0.0; n];
                    for (&u, &gw) in rule.nodes.iter().zip(&rule.weights) {
                        let x = y * u;
                        let kern = y * gw * c.greens_j1_unchecked(y - x);
                        legendre_values(2.0 * x - 1.0, &mut p);
                        for (m, &pl) in moments.iter_mut().zip(&p) {
                            *m += kern * pl;
                        }
                    }
                    let moments = Array1::from(moments);
                    moments.dot(&pw).to_vec()
                })
                .collect()
        }
        GridScheme::UniformTrapezoid => {
            let h = 1.0 / (n - 1) as f64;
            if_rayon!(grid.nodes.par_iter(), grid.nodes.iter())
                .map(|&y| {
                    let mut row = vec![0.0; n];
                    for (&u, &gw) in rule.nodes.iter().zip(&rule.weights) {
                        let x = y * u;
                        let kern = y * gw * c.greens_j1_unchecked(y - x);
                        for (k, l) in lagrange4_weights(x, h, n) {
                            row[k] += kern * l;
                        }
                    }
                    row
                })
                .collect()
        }
    };
    let mut op = Array2::from_shape_vec((n, n), rows.concat()).expect("n*n entries");
    op.mapv_inplace(|v| -v);
    for i in 0..n {
        op[[i, i]] += 1.0;
    }
    op
}

/// Stencil indices and weights of the uniform-grid four-point interpolant.
pub(crate) fn lagrange4_weights(x: f64, h: f64, n: usize) -> Vec<(usize, f64)> {
    let s = x / h;
    if n < 4 {
        let i = (s.floor().max(0.0) as usize).min(n - 2);
        let t = s - i as f64;
        return vec![(i, 1.0 - t), (i + 1, t)];
    }
    let i = (s.floor().max(0.0) as usize).clamp(1, n - 3) - 1;
    let t = s - i as f64;
    vec![
        (i, -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0),
        (i + 1, t * (t - 2.0) * (t - 3.0) / 2.0),
        (i + 2, -t * (t - 1.0) * (t - 3.0) / 2.0),
        (i + 3, t * (t - 1.0) * (t - 2.0) / 6.0),
    ]
}

fn project_mu(g1: &Array2<f64>, grid: &UnitGrid, phi: &Array2<f64>) -> Vec<MuEstimate> {
    let mut reversed = phi.clone();
    reversed.invert_axis(Axis(1));
    // column i of `applied` is G1 acting on phi_i(1 - .)
    let applied = g1.dot(&reversed.t());
    (0..phi.nrows())
        .map(|i| {
            let out = applied.column(i);
            let f = phi.row(i);
            let mu = weighted_dot(grid, f, out);
            let residual = grid
                .weights
                .iter()
                .zip(out.iter().zip(f.iter()))
                .map(|(w, (o, v))| w * (o - mu * v).powi(2))
                .sum::<f64>()
                .sqrt();
            MuEstimate { mu, residual }
        })
        .collect()
}

fn weighted_dot(grid: &UnitGrid, a: ArrayView1<'_, f64>, b: ArrayView1<'_, f64>) -> f64 {
    grid.weights
        .iter()
        .zip(a.iter().zip(b.iter()))
        .map(|(w, (x, y))| w * x * y)
        .sum()
}

fn count_resolved(lambda: &[f64]) -> usize {
    let lead = lambda.first().map_or(0.0, |l| l.abs());
    lambda
        .iter()
        .take_while(|l| l.abs() >= RESOLUTION_FLOOR * lead && l.abs() >= TRUNCATION_FLOOR)
        .count()
}

/// Sign of the sample nearest `1`, skipping values at the noise floor.
fn anchor_sign(row: ArrayView1<'_, f64>) -> f64 {
    let peak = row.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    row.iter()
        .rev()
        .find(|v| v.abs() > 1e-12 * peak)
        .map_or(1.0, |v| v.signum())
}

/// Serialised form of a [`ModeSet`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeSetDocument {
    pub kappa: f64,
    pub grid: GridDocument,
    pub modes: Vec<ModeDocument>,
    pub overlap: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridDocument {
    pub scheme: GridScheme,
    pub n: usize,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeDocument {
    pub index: usize,
    pub lambda: f64,
    pub mu: f64,
    pub mu_projected: f64,
    pub residual: f64,
    pub samples: Vec<f64>,
}

impl ModeSet {
    pub fn to_document(&self) -> ModeSetDocument {
        ModeSetDocument {
            kappa: self.kappa(),
            grid: GridDocument {
                scheme: self.grid.scheme,
                n: self.grid.n(),
                nodes: self.grid.nodes.clone(),
                weights: self.grid.weights.clone(),
            },
            modes: (0..self.n_modes())
                .map(|i| ModeDocument {
                    index: i + 1,
                    lambda: self.lambda[i],
                    mu: self.mu[i],
                    mu_projected: self.mu_estimates[i].mu,
                    residual: self.mu_estimates[i].residual,
                    samples: self.phi.row(i).to_vec(),
                })
                .collect(),
            overlap: self.overlap.outer_iter().map(|r| r.to_vec()).collect(),
            warnings: self.warnings.clone(),
        }
    }

    pub fn from_document(doc: &ModeSetDocument) -> Result<Self> {
        let n = doc.grid.n;
        if doc.grid.nodes.len() != n || doc.grid.weights.len() != n {
            return Err(arg_err!("grid arrays do not match n = {n}"));
        }
        let k = doc.modes.len();
        let mut phi = Array2::zeros((k, n));
        for (i, m) in doc.modes.iter().enumerate() {
            if m.samples.len() != n {
                return Err(arg_err!(
                    "mode {} has {} samples, expected {n}",
                    m.index,
                    m.samples.len()
                ));
            }
            phi.row_mut(i).assign(&ArrayView1::from(&m.samples[..]));
        }
        if doc.overlap.len() != k || doc.overlap.iter().any(|r| r.len() != k) {
            return Err(arg_err!("overlap must be {k}x{k}"));
        }
        let overlap = Array2::from_shape_vec((k, k), doc.overlap.concat()).expect("k*k entries");
        let lambda: Vec<f64> = doc.modes.iter().map(|m| m.lambda).collect();
        Ok(Self {
            coupling: Coupling::new(doc.kappa)?,
            grid: UnitGrid {
                scheme: doc.grid.scheme,
                nodes: doc.grid.nodes.clone(),
                weights: doc.grid.weights.clone(),
            },
            phi,
            resolved: count_resolved(&lambda),
            lambda,
            mu: doc.modes.iter().map(|m| m.mu).collect(),
            mu_estimates: doc
                .modes
                .iter()
                .map(|m| MuEstimate {
                    mu: m.mu_projected,
                    residual: m.residual,
                })
                .collect(),
            overlap,
            warnings: doc.warnings.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gl(n: usize) -> UnitGrid {
        UnitGrid::gauss_legendre(n).unwrap()
    }

    fn kappa(k: f64) -> Coupling {
        Coupling::new(k).unwrap()
    }

    #[test]
    fn figure_two_eigenvalues() {
        let m = compute_modes(kappa(4.0), &gl(200), 3).unwrap();
        for (got, want) in m.lambda.iter().zip([0.988, -0.518, 0.043]) {
            assert!((got - want).abs() <= 0.01, "{got} vs {want}");
        }
        assert_eq!(
            (0..3).map(|i| m.sign_changes(i)).collect::<Vec<_>>(),
            vec![0, 1, 2]
        );
    }

    #[test]
    fn orthonormal_and_ordered() {
        let g = gl(120);
        let m = compute_modes(kappa(4.0), &g, 6).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                let d = weighted_dot(&g, m.phi.row(i), m.phi.row(j));
                let id = if i == j { 1.0 } else { 0.0 };
                assert!((d - id).abs() < 1e-8);
            }
        }
        assert!(m.lambda.windows(2).all(|p| p[0].abs() >= p[1].abs()));
        assert!(m.lambda[3].abs() < m.lambda[2].abs() && m.lambda[2].abs() < 0.05);
        assert!(m.phi.rows().into_iter().all(|r| r[r.len() - 1] > 0.0));
    }

    #[test]
    fn constraint_and_sign_of_mu() {
        let m = compute_modes(kappa(4.0), &gl(200), 5).unwrap();
        for (l, e) in m.lambda.iter().zip(&m.mu_estimates) {
            assert!((l * l + e.mu * e.mu - 1.0).abs() < 1e-6);
            assert!(e.residual < 1e-8);
        }
        assert!((m.mu[0] - (1.0f64 - 0.988 * 0.988).sqrt()).abs() < 0.01);
        let again = mu_from_g1(&m).unwrap();
        assert_eq!(again, m.mu_estimates);
    }

    #[test]
    fn zero_coupling() {
        let g = gl(40);
        let m = compute_modes(kappa(0.0), &g, 4).unwrap();
        assert!(m.lambda.iter().all(|&l| l == 0.0));
        assert!(m.mu.iter().all(|&u| u == 1.0));
        assert!(mu_from_g1(&m)
            .unwrap()
            .iter()
            .all(|e| e.mu == 1.0 && e.residual == 0.0));
        // reversal-symmetric modes have identity overlap
        for i in 0..4 {
            for j in 0..4 {
                let id = if i == j { 1.0 } else { 0.0 };
                assert!((m.overlap[[i, j]] - id).abs() < 1e-12);
            }
        }
        assert!(compute_modes(kappa(0.0), &g, 30).is_err());
    }

    #[test]
    fn argument_errors() {
        assert!(compute_modes(kappa(4.0), &gl(10), 0).is_err());
        assert!(compute_modes(kappa(4.0), &gl(10), 11).is_err());
        let a = compute_modes(kappa(4.0), &gl(10), 2).unwrap();
        let b = compute_modes(kappa(4.0), &gl(12), 2).unwrap();
        assert!(cross_overlap(&a, &b).is_err());
        assert!(a.evaluate(5, &[0.5]).is_err());
    }

    #[test]
    fn overlap_is_symmetric_and_constant_mode_gives_one() {
        let m = compute_modes(kappa(4.0), &gl(200), 5).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                assert!((m.overlap[[i, j]] - m.overlap[[j, i]]).abs() < 1e-10);
            }
        }
        let g = gl(16);
        let ones = Array2::from_elem((1, 16), 1.0);
        assert!((overlap_between(&g, &ones, &ones)[[0, 0]] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn reversal_relation_with_original_kernel() {
        // sum_k w_k G0(1 - x_k, y) phi_i(1 - x_k) = lambda_i phi_i(y)
        let g = gl(100);
        let c = kappa(4.0);
        let m = compute_modes(c, &g, 3).unwrap();
        let n = g.n();
        for i in 0..3 {
            for (a, &y) in g.nodes.iter().enumerate() {
                let s: f64 = (0..n)
                    .map(|k| {
                        g.weights[k] * c.g0_unchecked(1.0 - g.nodes[k], y) * m.phi[[i, n - 1 - k]]
                    })
                    .sum();
                assert!((s - m.lambda[i] * m.phi[[i, a]]).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn grid_convergence_of_leading_eigenvalue() {
        for k in [1.0, 4.0, 8.0] {
            let a = compute_modes(kappa(k), &gl(100), 1).unwrap().lambda[0];
            let b = compute_modes(kappa(k), &gl(200), 1).unwrap().lambda[0];
            assert!((a - b).abs() < 1e-8, "kappa={k}");
        }
    }

    #[test]
    fn evaluate_matches_nystrom_extension() {
        let g = gl(80);
        let c = kappa(4.0);
        let m = compute_modes(c, &g, 2).unwrap();
        let pts = [0.0, 0.137, 0.5, 0.9, 1.0];
        for i in 0..2 {
            let vals = m.evaluate(i, &pts).unwrap();
            for (&x, v) in pts.iter().zip(vals) {
                let ext: f64 = (0..g.n())
                    .map(|k| g.weights[k] * c.g0_unchecked(x, g.nodes[k]) * m.phi[[i, k]])
                    .sum::<f64>()
                    / m.lambda[i];
                assert!((v - ext).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn trapezoid_grid_modes_agree_to_second_order() {
        let m = compute_modes(kappa(4.0), &UnitGrid::trapezoid(201).unwrap(), 3).unwrap();
        for (got, want) in m.lambda.iter().zip([0.98739611, -0.51713420, 0.04334630]) {
            assert!((got - want).abs() < 1e-4);
        }
        for e in &m.mu_estimates {
            assert!(e.residual < 1e-3);
        }
    }

    #[test]
    fn document_round_trip() {
        let m = compute_modes(kappa(2.0), &gl(24), 3).unwrap();
        let doc = m.to_document();
        let text = serde_json::to_string(&doc).unwrap();
        let back: ModeSetDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(back, doc);
        let rebuilt = ModeSet::from_document(&back).unwrap();
        assert_eq!(rebuilt.phi, m.phi);
        assert_eq!(rebuilt.lambda, m.lambda);
        assert_eq!(rebuilt.overlap, m.overlap);
    }
}
