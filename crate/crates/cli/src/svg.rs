//! Minimal SVG plots emitted as text. Sanity pictures only; the numbers live
//! in the CSV files.

use holovolume::memory_cycle::SweepRow;
use holovolume::ModeSet;
use std::fmt::Write;

const W: f64 = 640.0;
const H: f64 = 400.0;
const PAD: f64 = 56.0;

fn header(out: &mut String) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
}

/// First three eigenfunctions: bold, thin and dashed, as in the usual
/// presentation of the leading modes.
pub fn modes_plot(m: &ModeSet) -> String {
    let k = m.n_modes().min(3);
    let nodes = &m.grid.nodes;
    let (lo, hi) = (0..k)
        .flat_map(|i| m.phi.row(i).to_vec())
        .fold((0.0f64, 0.0f64), |(a, b), v| (a.min(v), b.max(v)));
    let span = (hi - lo).max(1e-12);
    let sx = |x: f64| PAD + x * (W - 2.0 * PAD);
    let sy = |y: f64| H - PAD - (y - lo) / span * (H - 2.0 * PAD);

    let mut out = String::new();
    header(&mut out);
    let _ = writeln!(
        out,
        r#"<rect x="{PAD}" y="{PAD}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        W - 2.0 * PAD,
        H - 2.0 * PAD
    );
    if lo < 0.0 && hi > 0.0 {
        let y0 = sy(0.0);
        let _ = writeln!(
            out,
            r##"<line x1="{PAD}" y1="{y0:.2}" x2="{}" y2="{y0:.2}" stroke="#999"/>"##,
            W - PAD
        );
    }
    for (t, label) in [(0.0, "0"), (0.5, "0.5"), (1.0, "1")] {
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{}" text-anchor="middle">{label}</text>"#,
            sx(t),
            H - PAD + 16.0
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{}" text-anchor="middle">x</text>"#,
        W / 2.0,
        H - 12.0
    );
    for (v, anchor) in [(lo, lo), (hi, hi)] {
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{:.2}" text-anchor="end">{v:.2}</text>"#,
            PAD - 6.0,
            sy(anchor) + 4.0
        );
    }
    let styles = [
        ("3", "none", "bold"),
        ("1", "none", "thin"),
        ("1.5", "6,4", "dashed"),
    ];
    for i in 0..k {
        let (width, dash, name) = styles[i];
        let mut d = String::new();
        for (a, &x) in nodes.iter().enumerate() {
            let cmd = if a == 0 { 'M' } else { 'L' };
            let _ = write!(d, "{cmd}{:.2},{:.2} ", sx(x), sy(m.phi[[i, a]]));
        }
        let _ = writeln!(
            out,
            r#"<path d="{}" fill="none" stroke="black" stroke-width="{width}" stroke-dasharray="{dash}"/>"#,
            d.trim_end()
        );
        let ly = PAD + 16.0 + 18.0 * i as f64;
        let lx = W - PAD - 170.0;
        let _ = writeln!(
            out,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="black" stroke-width="{width}" stroke-dasharray="{dash}"/>"#,
            lx + 30.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}">phi{} ({name}), lambda = {:.3}</text>"#,
            lx + 36.0,
            ly + 4.0,
            i + 1,
            m.lambda[i]
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{PAD}" y="{}">kappa = {}</text>"#,
        PAD - 12.0,
        m.kappa()
    );
    out.push_str("</svg>\n");
    out
}

/// Grey-scale map of total efficiency for one mode over the swept
/// `(kappa_write, kappa_read)` pairs.
pub fn efficiency_heatmap(rows: &[SweepRow], mode: usize) -> String {
    let mut kw: Vec<f64> = rows.iter().map(|r| r.kappa_write).collect();
    let mut kr: Vec<f64> = rows.iter().map(|r| r.kappa_read).collect();
    for v in [&mut kw, &mut kr] {
        v.sort_by(f64::total_cmp);
        v.dedup();
    }
    let cw = (W - 2.0 * PAD) / kr.len().max(1) as f64;
    let ch = (H - 2.0 * PAD) / kw.len().max(1) as f64;
    let mut out = String::new();
    header(&mut out);
    for r in rows.iter().filter(|r| r.mode == mode) {
        let i = kw.iter().position(|&k| k == r.kappa_write).unwrap_or(0);
        let j = kr.iter().position(|&k| k == r.kappa_read).unwrap_or(0);
        let level = (255.0 * (1.0 - r.total_eff.clamp(0.0, 1.0))).round() as u8;
        let (x, y) = (PAD + j as f64 * cw, PAD + i as f64 * ch);
        let _ = writeln!(
            out,
            r##"<rect x="{x:.2}" y="{y:.2}" width="{cw:.2}" height="{ch:.2}" fill="rgb({level},{level},{level})" stroke="#888"/>"##
        );
        let text = if level > 128 { "black" } else { "white" };
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" fill="{text}">{:.3}</text>"#,
            x + cw / 2.0,
            y + ch / 2.0 + 4.0,
            r.total_eff
        );
    }
    for (j, k) in kr.iter().enumerate() {
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{}" text-anchor="middle">{k}</text>"#,
            PAD + (j as f64 + 0.5) * cw,
            H - PAD + 16.0
        );
    }
    for (i, k) in kw.iter().enumerate() {
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{:.2}" text-anchor="end">{k}</text>"#,
            PAD - 6.0,
            PAD + (i as f64 + 0.5) * ch + 4.0
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{}" text-anchor="middle">kappa_read</text>"#,
        W / 2.0,
        H - 12.0
    );
    let _ = writeln!(
        out,
        r#"<text x="14" y="{:.2}" transform="rotate(-90 14 {:.2})" text-anchor="middle">kappa_write</text>"#,
        H / 2.0,
        H / 2.0
    );
    let _ = writeln!(
        out,
        r#"<text x="{PAD}" y="{}">total efficiency, mode {mode}</text>"#,
        PAD - 12.0
    );
    out.push_str("</svg>\n");
    out
}
