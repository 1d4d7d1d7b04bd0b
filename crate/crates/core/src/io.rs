//! CSV and JSON emission with fixed number formatting.
//!
//! CSV floats use 17 significant digits in scientific notation so files are
//! byte-stable and round-trip exactly. JSON uses serde_json's shortest
//! round-trip representation.

use crate::capacity::CapacityReport;
use crate::dynamics::FieldState;
use crate::eigenmodes::ModeSet;
use crate::memory_cycle::{CycleReport, SweepRow};
use crate::Result;
use serde::Serialize;
use std::io::Write;

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_writer(w)
}

fn finish<W: Write>(mut wr: csv::Writer<W>) -> Result<()> {
    wr.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> crate::Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => crate::Error::Io(e),
        other => crate::Error::Io(std::io::Error::other(format!("{other:?}"))),
    }
}

/// `node, phi_1, ..., phi_k` for the first `k` modes.
pub fn write_modes_csv<W: Write>(m: &ModeSet, k: usize, w: W) -> Result<()> {
    let k = k.min(m.n_modes());
    let mut wr = writer(w);
    let mut header = vec!["node".to_string()];
    header.extend((1..=k).map(|i| format!("phi{i}")));
    wr.write_record(&header).map_err(csv_err)?;
    for (a, &x) in m.grid.nodes.iter().enumerate() {
        let mut rec = vec![fmt_f64(x)];
        rec.extend((0..k).map(|i| fmt_f64(m.phi[[i, a]])));
        wr.write_record(&rec).map_err(csv_err)?;
    }
    finish(wr)
}

/// `xi, tau, re_alpha, im_alpha, re_beta, im_beta`.
pub fn write_field_csv<W: Write>(f: &FieldState, w: W) -> Result<()> {
    let mut wr = writer(w);
    wr.write_record(["xi", "tau", "re_alpha", "im_alpha", "re_beta", "im_beta"])
        .map_err(csv_err)?;
    for (x, t, a, b) in f.rows() {
        wr.write_record([x, t, a.re, a.im, b.re, b.im].map(fmt_f64))
            .map_err(csv_err)?;
    }
    finish(wr)
}

/// `kappa_write, kappa_read, mode, diagonal_eff, total_eff`.
pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], w: W) -> Result<()> {
    let mut wr = writer(w);
    wr.write_record([
        "kappa_write",
        "kappa_read",
        "mode",
        "diagonal_eff",
        "total_eff",
    ])
    .map_err(csv_err)?;
    for r in rows {
        wr.write_record([
            fmt_f64(r.kappa_write),
            fmt_f64(r.kappa_read),
            r.mode.to_string(),
            fmt_f64(r.diagonal_eff),
            fmt_f64(r.total_eff),
        ])
        .map_err(csv_err)?;
    }
    finish(wr)
}

pub fn write_cycle_csv<W: Write>(reports: &[CycleReport], w: W) -> Result<()> {
    let mut wr = writer(w);
    wr.write_record([
        "kappa_write",
        "kappa_read",
        "mode_index",
        "diagonal_efficiency",
        "total_efficiency",
        "vacuum_admixture",
        "prefactor_phase",
    ])
    .map_err(csv_err)?;
    for r in reports {
        wr.write_record([
            fmt_f64(r.kappa_write),
            fmt_f64(r.kappa_read),
            r.mode_index.to_string(),
            fmt_f64(r.diagonal_efficiency),
            fmt_f64(r.total_efficiency),
            fmt_f64(r.vacuum_admixture),
            fmt_f64(r.prefactor_phase),
        ])
        .map_err(csv_err)?;
    }
    finish(wr)
}

pub fn write_capacity_csv<W: Write>(r: &CapacityReport, w: W) -> Result<()> {
    let mut wr = writer(w);
    wr.write_record([
        "wavelength",
        "L",
        "S",
        "epsilon",
        "fresnel_number",
        "capacity_thin",
        "capacity_volume",
        "regime",
    ])
    .map_err(csv_err)?;
    wr.write_record([
        fmt_f64(r.wavelength),
        fmt_f64(r.cell_length),
        fmt_f64(r.cross_section),
        fmt_f64(r.epsilon),
        fmt_f64(r.fresnel_number),
        fmt_f64(r.capacity_thin),
        fmt_f64(r.capacity_volume),
        r.regime.as_str().to_string(),
    ])
    .map_err(csv_err)?;
    finish(wr)
}

/// Pretty-printed JSON followed by a newline.
pub fn write_json<T: Serialize, W: Write>(value: &T, mut w: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::{capacity_report, HologramGeometry};

    #[test]
    fn float_format_round_trips() {
        for x in [0.0, -1.5, 1.0 / 3.0, 6.02214076e23, f64::MIN_POSITIVE] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
        }
        assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
    }

    #[test]
    fn capacity_csv_layout() {
        let g = HologramGeometry::new(800e-9, 1e-2, 1e-4, 0.1).unwrap();
        let mut buf = Vec::new();
        write_capacity_csv(&capacity_report(&g), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.split("\r\n").collect();
        assert!(lines[0].starts_with("wavelength,L,S,epsilon"));
        assert!(lines[1].ends_with(",paraxial-limited"));
        assert_eq!(lines.len(), 3);
    }
}
