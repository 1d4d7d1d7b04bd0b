//! Transverse-mode capacity of thin and volume holograms, and the paraxial
//! diffraction phase.

use crate::error::arg_err;
use crate::{Complex64, Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

pub const DEFAULT_EPSILON: f64 = 0.1;

/// Physical sample geometry in SI units.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GeometryFields", into = "GeometryFields")]
pub struct HologramGeometry {
    wavelength: f64,
    cell_length: f64,
    cross_section: f64,
    epsilon: f64,
    k0: f64,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
struct GeometryFields {
    wavelength: f64,
    cell_length: f64,
    cross_section: f64,
    #[serde(default = "default_epsilon")]
    epsilon: f64,
}

fn default_epsilon() -> f64 {
    DEFAULT_EPSILON
}

impl TryFrom<GeometryFields> for HologramGeometry {
    type Error = Error;
    fn try_from(f: GeometryFields) -> Result<Self> {
        Self::new(f.wavelength, f.cell_length, f.cross_section, f.epsilon)
    }
}

impl From<HologramGeometry> for GeometryFields {
    fn from(g: HologramGeometry) -> Self {
        Self {
            wavelength: g.wavelength,
            cell_length: g.cell_length,
            cross_section: g.cross_section,
            epsilon: g.epsilon,
        }
    }
}

impl HologramGeometry {
    /// `wavelength` and `cell_length` in m, `cross_section` in m^2,
    /// `epsilon` in `(0, 0.5]`.
    pub fn new(
        wavelength: f64,
        cell_length: f64,
        cross_section: f64,
        epsilon: f64,
    ) -> Result<Self> {
        for (name, v) in [
            ("wavelength", wavelength),
            ("cell length", cell_length),
            ("cross section", cross_section),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(arg_err!("{name} must be positive and finite, got {v}"));
            }
        }
        if !(epsilon > 0.0 && epsilon <= 0.5) {
            return Err(arg_err!(
                "paraxial parameter must lie in (0, 0.5], got {epsilon}"
            ));
        }
        Ok(Self {
            wavelength,
            cell_length,
            cross_section,
            epsilon,
            k0: 2.0 * PI / wavelength,
        })
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    pub fn cell_length(&self) -> f64 {
        self.cell_length
    }

    pub fn cross_section(&self) -> f64 {
        self.cross_section
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Carrier wavenumber `2 pi / wavelength`.
    pub fn k0(&self) -> f64 {
        self.k0
    }
}

/// `S / (lambda L)`.
pub fn fresnel_number(g: &HologramGeometry) -> f64 {
    g.cross_section / (g.wavelength * g.cell_length)
}

/// Resolvable elements of a thin hologram, equal to the Fresnel number.
pub fn capacity_thin(g: &HologramGeometry) -> f64 {
    fresnel_number(g)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CapacityRegime {
    /// `eps^2 S / lambda^2` is the smaller bound (`sqrt(S)/L >= eps`).
    ParaxialLimited,
    /// `F_N^2` is the smaller bound.
    GeometryLimited,
}

impl CapacityRegime {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::ParaxialLimited => "paraxial-limited",
            Self::GeometryLimited => "geometry-limited",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolumeCapacity {
    pub value: f64,
    pub regime: CapacityRegime,
}

/// `min(eps^2 S / lambda^2, F_N^2)`.
///
/// Logs a warning if the estimate exceeds the `4 S / lambda^2` ceiling on
/// transverse modes; with `eps <= 0.5` this cannot happen.
pub fn capacity_volume(g: &HologramGeometry) -> VolumeCapacity {
    let paraxial = g.epsilon * g.epsilon * g.cross_section / (g.wavelength * g.wavelength);
    let f = fresnel_number(g);
    let geometric = f * f;
    let (value, regime) = if paraxial <= geometric {
        (paraxial, CapacityRegime::ParaxialLimited)
    } else {
        (geometric, CapacityRegime::GeometryLimited)
    };
    let ceiling = 4.0 * g.cross_section / (g.wavelength * g.wavelength);
    if value >= ceiling {
        log::warn!("volume capacity {value:e} reaches the 4S/lambda^2 ceiling {ceiling:e}");
    }
    VolumeCapacity { value, regime }
}

/// `exp(-i |q|^2 z / (2 k0))` for transverse wavevector `q` (rad/m) after a
/// propagation length `z` (m).
///
/// `|q| >= 2 pi / lambda` is a domain error; `|q| >= eps k0` is outside the
/// paraxial regime and only logs a warning.
pub fn diffraction_phase(q: [f64; 2], z: f64, g: &HologramGeometry) -> Result<Complex64> {
    let q2 = q[0] * q[0] + q[1] * q[1];
    if !q2.is_finite() || !z.is_finite() {
        return Err(Error::Domain(
            "wavevector and distance must be finite".into(),
        ));
    }
    let qn = q2.sqrt();
    if qn >= g.k0 {
        return Err(Error::Domain(format!(
            "|q| = {qn:e} rad/m is not below 2 pi / lambda = {:e}",
            g.k0
        )));
    }
    if qn >= g.epsilon * g.k0 {
        log::warn!(
            "|q| = {qn:e} rad/m exceeds the paraxial bound eps k0 = {:e}",
            g.epsilon * g.k0
        );
    }
    Ok(Complex64::from_polar(1.0, -q2 * z / (2.0 * g.k0)))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CapacityReport {
    pub wavelength: f64,
    #[serde(rename = "L")]
    pub cell_length: f64,
    #[serde(rename = "S")]
    pub cross_section: f64,
    pub epsilon: f64,
    pub fresnel_number: f64,
    pub capacity_thin: f64,
    pub capacity_volume: f64,
    pub regime: CapacityRegime,
}

pub fn capacity_report(g: &HologramGeometry) -> CapacityReport {
    let v = capacity_volume(g);
    CapacityReport {
        wavelength: g.wavelength,
        cell_length: g.cell_length,
        cross_section: g.cross_section,
        epsilon: g.epsilon,
        fresnel_number: fresnel_number(g),
        capacity_thin: capacity_thin(g),
        capacity_volume: v.value,
        regime: v.regime,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lab() -> HologramGeometry {
        HologramGeometry::new(800e-9, 1e-2, 1e-4, 0.1).unwrap()
    }

    #[test]
    fn validation() {
        assert!(HologramGeometry::new(0.0, 1.0, 1.0, 0.1).is_err());
        assert!(HologramGeometry::new(1e-6, -1.0, 1.0, 0.1).is_err());
        assert!(HologramGeometry::new(1e-6, 1.0, f64::NAN, 0.1).is_err());
        assert!(HologramGeometry::new(1e-6, 1.0, 1.0, 0.0).is_err());
        assert!(HologramGeometry::new(1e-6, 1.0, 1.0, 0.6).is_err());
        let g = lab();
        assert!((g.k0() * g.wavelength() - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn laboratory_numbers() {
        let g = lab();
        assert!((fresnel_number(&g) - 12500.0).abs() < 1e-8);
        assert_eq!(capacity_thin(&g), fresnel_number(&g));
        let v = capacity_volume(&g);
        assert!((v.value / 1.5625e6 - 1.0).abs() < 1e-12);
        assert_eq!(v.regime, CapacityRegime::ParaxialLimited);
        assert!(v.value >= capacity_thin(&g));
    }

    #[test]
    fn unit_fresnel_and_scaling() {
        let g = HologramGeometry::new(1e-6, 2.0, 2e-6, 0.1).unwrap();
        assert!((fresnel_number(&g) - 1.0).abs() < 1e-12);
        let long = HologramGeometry::new(1e-6, 4.0, 2e-6, 0.1).unwrap();
        assert!((fresnel_number(&long) - 0.5).abs() < 1e-12);
        let wide = HologramGeometry::new(1e-6, 2.0, 4e-6, 0.1).unwrap();
        assert!((capacity_thin(&wide) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn boundary_branches_equal() {
        let (l, eps) = (0.05, 0.2);
        let g = HologramGeometry::new(780e-9, l, eps * eps * l * l, eps).unwrap();
        let p = eps * eps * g.cross_section() / (g.wavelength() * g.wavelength());
        let f = fresnel_number(&g);
        assert!((p / (f * f) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn elongated_sample_is_geometry_limited() {
        let g = HologramGeometry::new(800e-9, 1.0, 1e-6, 0.1).unwrap();
        assert_eq!(capacity_volume(&g).regime, CapacityRegime::GeometryLimited);
    }

    #[test]
    fn phase_cases() {
        let g = lab();
        assert_eq!(
            diffraction_phase([0.0, 0.0], 1e-2, &g).unwrap(),
            Complex64::new(1.0, 0.0)
        );
        // |q|^2 z = 2 k0 pi
        let q = 1e5;
        let z = 2.0 * g.k0() * PI / (q * q);
        let p = diffraction_phase([q, 0.0], z, &g).unwrap();
        assert!((p + 1.0).norm() < 1e-12);
        assert!(diffraction_phase([g.k0(), 0.0], 1.0, &g).is_err());
        assert!(diffraction_phase([0.0, f64::NAN], 1.0, &g).is_err());
        // beyond eps k0 still evaluates
        assert!(diffraction_phase([0.3 * g.k0(), 0.0], 1e-3, &g).is_ok());
    }

    #[test]
    fn report_json_round_trip() {
        let r = capacity_report(&lab());
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.contains("\"regime\":\"paraxial-limited\""));
        assert_eq!(serde_json::from_str::<CapacityReport>(&s).unwrap(), r);
        let g: HologramGeometry =
            serde_json::from_str(r#"{"wavelength":8e-7,"cell_length":0.01,"cross_section":1e-4}"#)
                .unwrap();
        assert_eq!(g.epsilon(), DEFAULT_EPSILON);
        assert!(serde_json::from_str::<HologramGeometry>(
            r#"{"wavelength":-1,"cell_length":0.01,"cross_section":1e-4}"#
        )
        .is_err());
    }
}
