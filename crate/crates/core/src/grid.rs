//! Quadrature rules on the unit interval `[0, 1]`.
//!
//! Every function in the crate is stored as samples at the nodes of a
//! [`UnitGrid`]; integrals and inner products use the grid's weights. Both
//! schemes are symmetric about `1/2`, so reversing the sample order evaluates
//! `f(1 - x)` exactly.

use crate::error::arg_err;
use crate::{Complex64, Result};
use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Sub};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridScheme {
    GaussLegendre,
    UniformTrapezoid,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnitGrid {
    pub scheme: GridScheme,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl UnitGrid {
    /// `n`-point Gauss–Legendre rule mapped to `[0, 1]`, exact for polynomials
    /// of degree `<= 2n - 1`.
    pub fn gauss_legendre(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(arg_err!("Gauss-Legendre rule needs n >= 2, got {n}"));
        }
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        // Roots are symmetric; solve for the upper half and mirror.
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-15 {
                    let (_, d) = legendre_with_derivative(n, x);
                    dp = d;
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            // x is the i-th largest root on [-1, 1]
            nodes[n - 1 - i] = 0.5 * (1.0 + x);
            nodes[i] = 1.0 - nodes[n - 1 - i];
            weights[n - 1 - i] = 0.5 * w;
            weights[i] = 0.5 * w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.5;
        }
        Ok(Self {
            scheme: GridScheme::GaussLegendre,
            nodes,
            weights,
        })
    }

    /// Uniform nodes `0, h, ..., 1` with trapezoidal weights.
    pub fn trapezoid(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(arg_err!("trapezoid rule needs n >= 2, got {n}"));
        }
        let h = 1.0 / (n - 1) as f64;
        let nodes = (0..n)
            .map(|i| if i == n - 1 { 1.0 } else { i as f64 * h })
            .collect();
        let mut weights = vec![h; n];
        weights[0] = 0.5 * h;
        weights[n - 1] = 0.5 * h;
        Ok(Self {
            scheme: GridScheme::UniformTrapezoid,
            nodes,
            weights,
        })
    }

    pub fn n(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_uniform(&self) -> bool {
        self.scheme == GridScheme::UniformTrapezoid
    }

    /// Node spacing of a uniform grid.
    pub fn spacing(&self) -> Option<f64> {
        self.is_uniform().then(|| 1.0 / (self.n() - 1) as f64)
    }

    /// `sum_i w_i f(x_i)`.
    pub fn integrate<T: Sample>(&self, samples: &[T]) -> Result<T> {
        self.check_len(samples.len())?;
        Ok(self
            .weights
            .iter()
            .zip(samples)
            .fold(T::default(), |acc, (&w, &f)| acc + f * w))
    }

    /// `sum_i w_i conj(f_i) g_i`.
    pub fn inner_product(&self, f: &[Complex64], g: &[Complex64]) -> Result<Complex64> {
        self.check_len(f.len())?;
        self.check_len(g.len())?;
        Ok(self
            .weights
            .iter()
            .zip(f.iter().zip(g))
            .map(|(&w, (a, b))| a.conj() * b * w)
            .sum())
    }

    /// Real-valued specialisation of [`UnitGrid::inner_product`].
    pub fn inner_product_real(&self, f: &[f64], g: &[f64]) -> Result<f64> {
        self.check_len(f.len())?;
        self.check_len(g.len())?;
        Ok(self
            .weights
            .iter()
            .zip(f.iter().zip(g))
            .map(|(&w, (a, b))| w * a * b)
            .sum())
    }

    /// `sqrt(sum_i w_i |f_i|^2)`.
    pub fn norm<T: Sample>(&self, f: &[T]) -> Result<f64> {
        self.check_len(f.len())?;
        Ok(self
            .weights
            .iter()
            .zip(f)
            .map(|(&w, v)| w * v.norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    /// Builds a continuous reconstruction of grid samples.
    ///
    /// Gauss–Legendre samples are expanded in Legendre polynomials (the
    /// unique interpolating polynomial of degree `n - 1`); uniform samples use
    /// local four-point Lagrange interpolation.
    pub fn reconstruct<T: Sample>(&self, samples: &[T]) -> Result<Reconstruction<T>> {
        self.check_len(samples.len())?;
        Ok(match self.scheme {
            GridScheme::GaussLegendre => {
                let n = self.n();
                let mut coeffs = vec![T::default(); n];
                let mut p = vec![0.0; n];
                for ((&x, &w), &f) in self.nodes.iter().zip(&self.weights).zip(samples) {
                    legendre_values(2.0 * x - 1.0, &mut p);
                    for (c, &pl) in coeffs.iter_mut().zip(&p) {
                        *c = *c + f * (w * pl);
                    }
                }
                for (l, c) in coeffs.iter_mut().enumerate() {
                    *c = *c * (2 * l + 1) as f64;
                }
                Reconstruction::Legendre(coeffs)
            }
            GridScheme::UniformTrapezoid => Reconstruction::Lagrange4(samples.to_vec()),
        })
    }

    pub(crate) fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n() {
            Err(arg_err!(
                "sample length {len} does not match grid size {}",
                self.n()
            ))
        } else {
            Ok(())
        }
    }
}

/// Scalar types that can be stored on a grid.
pub trait Sample:
    Copy + Default + Send + Sync + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn norm_sqr(&self) -> f64;
}

impl Sample for f64 {
    fn norm_sqr(&self) -> f64 {
        self * self
    }
}

impl Sample for Complex64 {
    fn norm_sqr(&self) -> f64 {
        Complex64::norm_sqr(self)
    }
}

/// Continuous extension of sampled data, see [`UnitGrid::reconstruct`].
#[derive(Clone, Debug)]
pub enum Reconstruction<T> {
    /// Coefficients of `P_l(2x - 1)`.
    Legendre(Vec<T>),
    /// Samples at uniform nodes.
    Lagrange4(Vec<T>),
}

impl<T: Sample> Reconstruction<T> {
    pub fn eval(&self, x: f64) -> T {
        match self {
            Reconstruction::Legendre(c) => {
                let t = 2.0 * x - 1.0;
                let mut acc = c[0];
                let (mut p_prev, mut p) = (1.0, t);
                for (l, &cl) in c.iter().enumerate().skip(1) {
                    acc = acc + cl * p;
                    let lf = l as f64;
                    let next = ((2.0 * lf + 1.0) * t * p - lf * p_prev) / (lf + 1.0);
                    p_prev = p;
                    p = next;
                }
                acc
            }
            Reconstruction::Lagrange4(v) => {
                let n = v.len();
                let h = 1.0 / (n - 1) as f64;
                let s = x / h;
                if n < 4 {
                    let i = (s.floor().max(0.0) as usize).min(n - 2);
                    let t = s - i as f64;
                    return v[i] * (1.0 - t) + v[i + 1] * t;
                }
                let i = (s.floor().max(0.0) as usize).clamp(1, n - 3) - 1;
                let t = s - i as f64;
                // nodes at t = 0, 1, 2, 3
                let l0 = -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0;
                let l1 = t * (t - 2.0) * (t - 3.0) / 2.0;
                let l2 = -t * (t - 1.0) * (t - 3.0) / 2.0;
                let l3 = t * (t - 1.0) * (t - 2.0) / 6.0;
                v[i] * l0 + v[i + 1] * l1 + v[i + 2] * l2 + v[i + 3] * l3
            }
        }
    }
}

/// `(P_n(x), P_n'(x))` on `[-1, 1]`.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Fills `out[l] = P_l(t)` for `l < out.len()`.
pub(crate) fn legendre_values(t: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    out[0] = 1.0;
    if out.len() > 1 {
        out[1] = t;
    }
    for l in 1..out.len().saturating_sub(1) {
        let lf = l as f64;
        out[l + 1] = ((2.0 * lf + 1.0) * t * out[l] - lf * out[l - 1]) / (lf + 1.0);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn too_few_nodes_rejected() {
        assert!(UnitGrid::gauss_legendre(1).is_err());
        assert!(UnitGrid::trapezoid(0).is_err());
    }

    #[test]
    fn gauss_two_point_moments() {
        let g = UnitGrid::gauss_legendre(2).unwrap();
        assert!((g.integrate(&[1.0, 1.0]).unwrap() - 1.0).abs() < 1e-15);
        let xs = g.nodes.clone();
        assert!((g.integrate(&xs).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn gauss_five_point_degree_nine() {
        let g = UnitGrid::gauss_legendre(5).unwrap();
        let f: Vec<f64> = g.nodes.iter().map(|x| x.powi(9)).collect();
        assert!((g.integrate(&f).unwrap() - 0.1).abs() < 1e-13);
    }

    #[test]
    fn gauss_weights_normalised_and_symmetric() {
        for n in [2, 3, 7, 64, 200, 401] {
            let g = UnitGrid::gauss_legendre(n).unwrap();
            let s: f64 = g.weights.iter().sum();
            assert!((s - 1.0).abs() < 1e-14, "n={n} sum={s}");
            assert!(g.weights.iter().all(|&w| w > 0.0));
            assert!(g.nodes.windows(2).all(|p| p[0] < p[1]));
            assert!(g.nodes[0] > 0.0 && g.nodes[n - 1] < 1.0);
            for i in 0..n {
                assert_eq!(g.nodes[i], 1.0 - g.nodes[n - 1 - i]);
                assert_eq!(g.weights[i], g.weights[n - 1 - i]);
            }
        }
    }

    #[test]
    fn trapezoid_small_cases() {
        let g = UnitGrid::trapezoid(2).unwrap();
        assert_eq!(g.nodes, vec![0.0, 1.0]);
        assert_eq!(g.weights, vec![0.5, 0.5]);
        let g = UnitGrid::trapezoid(3).unwrap();
        let f: Vec<f64> = g.nodes.iter().map(|x| x * x).collect();
        assert!((g.integrate(&f).unwrap() - 0.375).abs() < 1e-15);
        let g = UnitGrid::trapezoid(101).unwrap();
        let f: Vec<f64> = g.nodes.iter().map(|x| x * x).collect();
        assert!((g.integrate(&f).unwrap() - 1.0 / 3.0).abs() < 1e-4);
    }

    #[test]
    fn inner_product_cases() {
        let g = UnitGrid::gauss_legendre(8).unwrap();
        let one = vec![Complex64::new(1.0, 0.0); 8];
        let i = vec![Complex64::new(0.0, 1.0); 8];
        assert!((g.inner_product(&one, &one).unwrap() - 1.0).norm() < 1e-15);
        assert!((g.inner_product(&one, &i).unwrap() - Complex64::i()).norm() < 1e-15);
        // conjugate-linear in the first slot
        assert!((g.inner_product(&i, &one).unwrap() + Complex64::i()).norm() < 1e-15);

        let g = UnitGrid::gauss_legendre(40).unwrap();
        let pi = std::f64::consts::PI;
        let f: Vec<Complex64> = g.nodes.iter().map(|x| (pi * x).sin().into()).collect();
        let h: Vec<Complex64> = g
            .nodes
            .iter()
            .map(|x| (2.0 * pi * x).sin().into())
            .collect();
        assert!(g.inner_product(&f, &h).unwrap().norm() < 1e-12);
        assert!(g.inner_product(&f, &h[..39]).is_err());
    }

    #[test]
    fn reconstruction_reproduces_samples_and_polynomials() {
        let g = UnitGrid::gauss_legendre(12).unwrap();
        let poly = |x: f64| 1.0 - 3.0 * x + 0.5 * x.powi(7) - x.powi(11);
        let s: Vec<f64> = g.nodes.iter().map(|&x| poly(x)).collect();
        let r = g.reconstruct(&s).unwrap();
        for &x in &[0.0, 0.123, 0.5, 0.97, 1.0] {
            assert!((r.eval(x) - poly(x)).abs() < 1e-12);
        }
        let u = UnitGrid::trapezoid(11).unwrap();
        let cubic = |x: f64| 2.0 + x - 4.0 * x * x + x * x * x;
        let s: Vec<f64> = u.nodes.iter().map(|&x| cubic(x)).collect();
        let r = u.reconstruct(&s).unwrap();
        for &x in &[0.0, 0.05, 0.33, 0.999, 1.0] {
            assert!((r.eval(x) - cubic(x)).abs() < 1e-13);
        }
    }

    proptest! {
        #[test]
        fn gauss_exact_for_random_polynomials(
            n in 2usize..24,
            seed in proptest::collection::vec(-1.0f64..1.0, 48),
        ) {
            let g = UnitGrid::gauss_legendre(n).unwrap();
            let coeffs = &seed[..2 * n];
            let exact: f64 = coeffs.iter().enumerate().map(|(k, c)| c / (k + 1) as f64).sum();
            let samples: Vec<f64> = g.nodes.iter()
                .map(|&x| coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c))
                .collect();
            prop_assert!((g.integrate(&samples).unwrap() - exact).abs() < 1e-12);
        }
    }
}
