//! Light and spin-wave envelopes on the unit square.
//!
//! The slow-envelope equations
//!
//! ```text
//! d alpha / d xi  = -i (kappa/2) beta
//! d beta  / d tau = -i (kappa/2) alpha
//! ```
//!
//! are solved two ways from the entrance data `alpha(0, tau)` and initial
//! spin wave `beta(xi, 0)`:
//!
//! * [`integrate_characteristics`] marches an implicit-trapezoid stencil over
//!   the whole square (uniform grids only);
//! * [`greens_solution`] evaluates the Bessel-kernel solution formulas by
//!   quadrature, on the four edges of the square only.
//!
//! Field arrays are indexed `[xi, tau]`.

use crate::error::arg_err;
use crate::grid::{Reconstruction, UnitGrid};
use crate::kernels::Coupling;
#[allow(unused_imports)]
use crate::par::prelude::*;
use crate::{Complex64, Result};
use ndarray::Array2;
use serde::{Deserialize, Serialize};

/// Entrance light `alpha(0, tau)` over `grid_tau` and initial spin wave
/// `beta(xi, 0)` over `grid_xi`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryData {
    pub grid_xi: UnitGrid,
    pub grid_tau: UnitGrid,
    pub alpha_in: Vec<Complex64>,
    pub beta_in: Vec<Complex64>,
}

impl BoundaryData {
    pub fn new(
        grid_xi: UnitGrid,
        grid_tau: UnitGrid,
        alpha_in: Vec<Complex64>,
        beta_in: Vec<Complex64>,
    ) -> Result<Self> {
        grid_tau.check_len(alpha_in.len())?;
        grid_xi.check_len(beta_in.len())?;
        Ok(Self {
            grid_xi,
            grid_tau,
            alpha_in,
            beta_in,
        })
    }

    /// Samples `alpha_in(tau)` and `beta_in(xi)` at the grid nodes.
    pub fn from_fns(
        grid_xi: UnitGrid,
        grid_tau: UnitGrid,
        alpha_in: impl Fn(f64) -> Complex64,
        beta_in: impl Fn(f64) -> Complex64,
    ) -> Self {
        let a = grid_tau.nodes.iter().map(|&t| alpha_in(t)).collect();
        let b = grid_xi.nodes.iter().map(|&x| beta_in(x)).collect();
        Self {
            grid_xi,
            grid_tau,
            alpha_in: a,
            beta_in: b,
        }
    }

    /// Same grid on both axes.
    pub fn square(
        grid: UnitGrid,
        alpha_in: Vec<Complex64>,
        beta_in: Vec<Complex64>,
    ) -> Result<Self> {
        Self::new(grid.clone(), grid, alpha_in, beta_in)
    }
}

/// Both envelopes along one edge of the square.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub alpha: Vec<Complex64>,
    pub beta: Vec<Complex64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FieldState {
    pub grid_xi: UnitGrid,
    pub grid_tau: UnitGrid,
    /// `xi = 0`, sampled over `tau`.
    pub entrance: Edge,
    /// `xi = 1`, sampled over `tau`.
    pub exit: Edge,
    /// `tau = 0`, sampled over `xi`.
    pub start: Edge,
    /// `tau = 1`, sampled over `xi`.
    pub end: Edge,
    /// Full `[xi, tau]` arrays when the solver produced them.
    pub interior: Option<Interior>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Interior {
    pub alpha: Array2<Complex64>,
    pub beta: Array2<Complex64>,
}

impl FieldState {
    /// Output light `alpha(1, tau)`.
    pub fn alpha_out(&self) -> &[Complex64] {
        &self.exit.alpha
    }

    /// Output spin wave `beta(xi, 1)`.
    pub fn beta_out(&self) -> &[Complex64] {
        &self.end.beta
    }

    pub fn alpha_in(&self) -> &[Complex64] {
        &self.entrance.alpha
    }

    pub fn beta_in(&self) -> &[Complex64] {
        &self.start.beta
    }

    fn from_interior(
        grid_xi: UnitGrid,
        grid_tau: UnitGrid,
        alpha: Array2<Complex64>,
        beta: Array2<Complex64>,
    ) -> Self {
        let (nx, nt) = alpha.dim();
        let row = |m: &Array2<Complex64>, i: usize| m.row(i).to_vec();
        let col = |m: &Array2<Complex64>, j: usize| m.column(j).to_vec();
        Self {
            entrance: Edge {
                alpha: row(&alpha, 0),
                beta: row(&beta, 0),
            },
            exit: Edge {
                alpha: row(&alpha, nx - 1),
                beta: row(&beta, nx - 1),
            },
            start: Edge {
                alpha: col(&alpha, 0),
                beta: col(&beta, 0),
            },
            end: Edge {
                alpha: col(&alpha, nt - 1),
                beta: col(&beta, nt - 1),
            },
            grid_xi,
            grid_tau,
            interior: Some(Interior { alpha, beta }),
        }
    }
}

/// Second-order implicit-trapezoid marching over the node lattice.
///
/// Each cell `(i, j) -> (i+1, j+1)` applies the trapezoid rule to both
/// equations along the cell edges and solves the resulting 2x2 system for the
/// new corner. Requires uniform grids on both axes.
pub fn integrate_characteristics(b: &BoundaryData, c: Coupling) -> Result<FieldState> {
    let (Some(hx), Some(ht)) = (b.grid_xi.spacing(), b.grid_tau.spacing()) else {
        return Err(arg_err!(
            "characteristics integrator needs uniform grids on both axes"
        ));
    };
    let (nx, nt) = (b.grid_xi.n(), b.grid_tau.n());
    let half = Complex64::new(0.0, 0.5 * c.kappa());
    let gx = half * (0.5 * hx);
    let gt = half * (0.5 * ht);
    let det = Complex64::new(1.0, 0.0) - gx * gt;

    let zero = Complex64::new(0.0, 0.0);
    let mut a = Array2::from_elem((nx, nt), zero);
    let mut s = Array2::from_elem((nx, nt), zero);
    for j in 0..nt {
        a[[0, j]] = b.alpha_in[j];
    }
    for i in 0..nx {
        s[[i, 0]] = b.beta_in[i];
    }
    // xi = 0 column: d beta / d tau with alpha known
    for j in 0..nt - 1 {
        s[[0, j + 1]] = s[[0, j]] - gt * (a[[0, j]] + a[[0, j + 1]]);
    }
    // tau = 0 row: d alpha / d xi with beta known
    for i in 0..nx - 1 {
        a[[i + 1, 0]] = a[[i, 0]] - gx * (s[[i, 0]] + s[[i + 1, 0]]);
    }
    for i in 0..nx - 1 {
        for j in 0..nt - 1 {
            let r1 = a[[i, j + 1]] - gx * s[[i, j + 1]];
            let r2 = s[[i + 1, j]] - gt * a[[i + 1, j]];
            a[[i + 1, j + 1]] = (r1 - gx * r2) / det;
            s[[i + 1, j + 1]] = (r2 - gt * r1) / det;
        }
    }
    Ok(FieldState::from_interior(
        b.grid_xi.clone(),
        b.grid_tau.clone(),
        a,
        s,
    ))
}

/// Evaluates the Bessel-kernel solution on the four edges of the square,
/// sampled at the nodes of `grid_out` on both axes.
///
/// Off-node values of the boundary data come from the input grids'
/// reconstructions (Legendre series or four-point Lagrange).
pub fn greens_solution(b: &BoundaryData, c: Coupling, grid_out: &UnitGrid) -> Result<FieldState> {
    let ev = GreensEvaluator::new(b, c)?;
    let edge = |points: Vec<(f64, f64)>| -> Edge {
        let vals: Vec<(Complex64, Complex64)> = if_rayon!(points.par_iter(), points.iter())
            .map(|&(x, t)| ev.eval(x, t))
            .collect();
        let (alpha, beta) = vals.into_iter().unzip();
        Edge { alpha, beta }
    };
    let nodes = &grid_out.nodes;
    Ok(FieldState {
        entrance: edge(nodes.iter().map(|&t| (0.0, t)).collect()),
        exit: edge(nodes.iter().map(|&t| (1.0, t)).collect()),
        start: edge(nodes.iter().map(|&x| (x, 0.0)).collect()),
        end: edge(nodes.iter().map(|&x| (x, 1.0)).collect()),
        grid_xi: grid_out.clone(),
        grid_tau: grid_out.clone(),
        interior: None,
    })
}

/// `(alpha, beta)` at arbitrary points of the unit square from the
/// Bessel-kernel solution.
pub fn greens_probe(
    b: &BoundaryData,
    c: Coupling,
    points: &[(f64, f64)],
) -> Result<Vec<(Complex64, Complex64)>> {
    for &(x, t) in points {
        if !(0.0..=1.0).contains(&x) || !(0.0..=1.0).contains(&t) {
            return Err(arg_err!(
                "probe point ({x}, {t}) lies outside the unit square"
            ));
        }
    }
    let ev = GreensEvaluator::new(b, c)?;
    Ok(if_rayon!(points.par_iter(), points.iter())
        .map(|&(x, t)| ev.eval(x, t))
        .collect())
}

struct GreensEvaluator {
    c: Coupling,
    alpha_in: Reconstruction<Complex64>,
    beta_in: Reconstruction<Complex64>,
    rule: UnitGrid,
}

impl GreensEvaluator {
    fn new(b: &BoundaryData, c: Coupling) -> Result<Self> {
        b.grid_tau.check_len(b.alpha_in.len())?;
        b.grid_xi.check_len(b.beta_in.len())?;
        // J0(kappa sqrt(s)) is entire in s with effective degree ~ kappa/2
        let order = (48.0 + 2.0 * c.kappa()).ceil().min(256.0) as usize;
        Ok(Self {
            c,
            alpha_in: b.grid_tau.reconstruct(&b.alpha_in)?,
            beta_in: b.grid_xi.reconstruct(&b.beta_in)?,
            rule: UnitGrid::gauss_legendre(order)?,
        })
    }

    fn eval(&self, xi: f64, tau: f64) -> (Complex64, Complex64) {
        let c = self.c;
        let mi = Complex64::new(0.0, -1.0);
        let mut alpha = self.alpha_in.eval(tau);
        let mut beta = self.beta_in.eval(xi);
        if c.kappa() == 0.0 {
            return (alpha, beta);
        }
        let (mut a_self, mut a_cross) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        let (mut b_self, mut b_cross) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        for (&u, &w) in self.rule.nodes.iter().zip(&self.rule.weights) {
            // tau' = tau u on [0, tau]
            let tp = tau * u;
            let a_tp = self.alpha_in.eval(tp);
            a_self += a_tp * (w * xi * c.greens_j1_unchecked(xi * (tau - tp)));
            b_cross += a_tp * (w * c.g0_unchecked(tau - tp, xi));
            // xi' = xi u on [0, xi]
            let xp = xi * u;
            let b_xp = self.beta_in.eval(xp);
            b_self += b_xp * (w * tau * c.greens_j1_unchecked(tau * (xi - xp)));
            a_cross += b_xp * (w * c.g0_unchecked(xi - xp, tau));
        }
        alpha += -a_self * tau + mi * a_cross * xi;
        beta += -b_self * xi + mi * b_cross * tau;
        (alpha, beta)
    }
}

/// Integrated excitation budget across the faces of the square.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExcitationBalance {
    pub in_total: f64,
    pub out_total: f64,
    /// `|out - in| / max(in, eps)`.
    pub defect: f64,
}

pub fn excitation_balance(f: &FieldState) -> Result<ExcitationBalance> {
    let e = |g: &UnitGrid, v: &[Complex64]| g.norm(v).map(|x| x * x);
    let in_total = e(&f.grid_tau, &f.entrance.alpha)? + e(&f.grid_xi, &f.start.beta)?;
    let out_total = e(&f.grid_tau, &f.exit.alpha)? + e(&f.grid_xi, &f.end.beta)?;
    Ok(ExcitationBalance {
        in_total,
        out_total,
        defect: (out_total - in_total).abs() / in_total.max(f64::EPSILON),
    })
}

/// JSON summary of a solve: boundary faces plus the balance record.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldSummary {
    pub kappa: f64,
    pub solver: String,
    pub xi_nodes: Vec<f64>,
    pub tau_nodes: Vec<f64>,
    pub alpha_in: Vec<Complex64>,
    pub alpha_out: Vec<Complex64>,
    pub beta_in: Vec<Complex64>,
    pub beta_out: Vec<Complex64>,
    pub balance: ExcitationBalance,
}

impl FieldState {
    pub fn summary(&self, c: Coupling, solver: &str) -> Result<FieldSummary> {
        Ok(FieldSummary {
            kappa: c.kappa(),
            solver: solver.to_string(),
            xi_nodes: self.grid_xi.nodes.clone(),
            tau_nodes: self.grid_tau.nodes.clone(),
            alpha_in: self.entrance.alpha.clone(),
            alpha_out: self.exit.alpha.clone(),
            beta_in: self.start.beta.clone(),
            beta_out: self.end.beta.clone(),
            balance: excitation_balance(self)?,
        })
    }

    /// Rows `(xi, tau, alpha, beta)`: every lattice point when the interior
    /// is known, otherwise the perimeter (each corner once).
    pub fn rows(&self) -> Vec<(f64, f64, Complex64, Complex64)> {
        let xs = &self.grid_xi.nodes;
        let ts = &self.grid_tau.nodes;
        if let Some(inner) = &self.interior {
            let mut out = Vec::with_capacity(xs.len() * ts.len());
            for (i, &x) in xs.iter().enumerate() {
                for (j, &t) in ts.iter().enumerate() {
                    out.push((x, t, inner.alpha[[i, j]], inner.beta[[i, j]]));
                }
            }
            return out;
        }
        let mut out = Vec::new();
        for (j, &t) in ts.iter().enumerate() {
            out.push((0.0, t, self.entrance.alpha[j], self.entrance.beta[j]));
        }
        for (j, &t) in ts.iter().enumerate() {
            out.push((1.0, t, self.exit.alpha[j], self.exit.beta[j]));
        }
        let inner_x = 1..xs.len().saturating_sub(1);
        for i in inner_x.clone() {
            out.push((xs[i], 0.0, self.start.alpha[i], self.start.beta[i]));
        }
        for i in inner_x {
            out.push((xs[i], 1.0, self.end.alpha[i], self.end.beta[i]));
        }
        out
    }
}
