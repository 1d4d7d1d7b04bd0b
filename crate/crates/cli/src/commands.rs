use crate::config::{Format, RunConfig, Solver};
use crate::{svg, CliError};
use holovolume::capacity::{capacity_report, HologramGeometry, DEFAULT_EPSILON};
use holovolume::dynamics::{excitation_balance, greens_solution, integrate_characteristics};
use holovolume::eigenmodes::compute_modes;
use holovolume::memory_cycle::{cycle_report, efficiency_sweep, CycleConfig};
use holovolume::verify::{run_suite, EFFICIENCY_FLAG_FLOOR, EFFICIENCY_TARGET};
use holovolume::{io, BoundaryData, Complex64, Coupling, UnitGrid};
use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

const MODE_GRID_N: usize = 200;

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>, CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    File::create(&path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

fn write_text(dir: &Path, name: &str, text: &str) -> Result<(), CliError> {
    use std::io::Write;
    let mut w = create(dir, name)?;
    w.write_all(text.as_bytes())
        .and_then(|_| w.flush())
        .map_err(|e| CliError::Io(format!("cannot write {name}: {e}")))
}

fn single(name: &str, v: &Option<Vec<f64>>, default: f64) -> Result<f64, CliError> {
    match v.as_deref() {
        None => Ok(default),
        Some([x]) => Ok(*x),
        Some(_) => Err(CliError::Usage(format!(
            "--{name} takes a single value here"
        ))),
    }
}

fn geometry(cfg: &RunConfig, required: bool) -> Result<Option<HologramGeometry>, CliError> {
    match (cfg.wavelength, cfg.cell_length, cfg.cross_section) {
        (Some(l), Some(len), Some(s)) => Ok(Some(HologramGeometry::new(
            l,
            len,
            s,
            cfg.epsilon.unwrap_or(DEFAULT_EPSILON),
        )?)),
        (None, None, None) if !required => Ok(None),
        _ => Err(CliError::Usage(
            "geometry needs --wavelength, --cell-length and --cross-section".into(),
        )),
    }
}

pub fn modes(cfg: &RunConfig) -> Result<(), CliError> {
    let formats = cfg.formats(&[Format::Csv, Format::Json, Format::Svg])?;
    let c = Coupling::new(cfg.kappa.unwrap_or(4.0))?;
    let grid = UnitGrid::gauss_legendre(cfg.grid_n(MODE_GRID_N)?)?;
    let m = compute_modes(c, &grid, cfg.n_modes.unwrap_or(3))?;
    if c.kappa() == 0.0 {
        println!("kappa = 0: degenerate spectrum, every lambda vanishes and mu = 1");
    }
    println!(
        "{:>5} {:>22} {:>22} {:>12}",
        "mode", "lambda", "mu", "residual"
    );
    for i in 0..m.n_modes() {
        println!(
            "{:>5} {:>22.15} {:>22.15} {:>12.3e}",
            i + 1,
            m.lambda[i],
            m.mu[i],
            m.mu_estimates[i].residual
        );
    }
    for w in &m.warnings {
        eprintln!("warning: {w}");
    }
    for f in formats {
        match f {
            Format::Json => io::write_json(&m.to_document(), create(&cfg.out, "modes.json")?)?,
            Format::Csv => io::write_modes_csv(&m, m.n_modes(), create(&cfg.out, "modes.csv")?)?,
            Format::Svg => write_text(&cfg.out, "modes.svg", &svg::modes_plot(&m))?,
        }
    }
    Ok(())
}

fn waveform(spec: &str, grid: &UnitGrid, c: Coupling) -> Result<Vec<Complex64>, CliError> {
    let bad = || CliError::Usage(format!("cannot parse input waveform '{spec}'"));
    let (kind, arg) = spec.split_once(':').unwrap_or((spec, ""));
    match kind {
        "flat" => Ok(vec![Complex64::new(1.0, 0.0); grid.n()]),
        "gaussian" => {
            let (c0, w) = arg.split_once(',').ok_or_else(bad)?;
            let c0: f64 = c0.trim().parse().map_err(|_| bad())?;
            let w: f64 = w.trim().parse().map_err(|_| bad())?;
            if !(w > 0.0) {
                return Err(CliError::Usage("gaussian width must be positive".into()));
            }
            Ok(grid
                .nodes
                .iter()
                .map(|&t| Complex64::new((-(t - c0).powi(2) / (2.0 * w * w)).exp(), 0.0))
                .collect())
        }
        "eigenmode" => {
            let i: usize = arg.trim().parse().map_err(|_| bad())?;
            if i == 0 {
                return Err(CliError::Usage("eigenmode index is one-based".into()));
            }
            let m = compute_modes(c, &UnitGrid::gauss_legendre(MODE_GRID_N)?, i)?;
            // the mode couples fully when it enters time-reversed
            let rev: Vec<f64> = grid.nodes.iter().map(|t| 1.0 - t).collect();
            Ok(m.evaluate(i - 1, &rev)?
                .into_iter()
                .map(|v| Complex64::new(v, 0.0))
                .collect())
        }
        "file" => read_waveform(Path::new(arg), grid),
        _ => Err(bad()),
    }
}

fn read_waveform(path: &Path, grid: &UnitGrid) -> Result<Vec<Complex64>, CliError> {
    let mut rd = csv::Reader::from_path(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (k, rec) in rd.records().enumerate() {
        let rec = rec.map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        let num = |i: usize| -> Result<f64, CliError> {
            rec.get(i)
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| CliError::Usage(format!("{}: bad row {}", path.display(), k + 1)))
        };
        let (t, re, im) = (num(0)?, num(1)?, num(2)?);
        match grid.nodes.get(k) {
            Some(&x) if (x - t).abs() <= 1e-9 => out.push(Complex64::new(re, im)),
            _ => {
                return Err(CliError::Usage(format!(
                    "{}: row {} is not at grid node {k} of the {}-node grid",
                    path.display(),
                    k + 1,
                    grid.n()
                )))
            }
        }
    }
    if out.len() != grid.n() {
        return Err(CliError::Usage(format!(
            "{}: {} rows for a {}-node grid",
            path.display(),
            out.len(),
            grid.n()
        )));
    }
    Ok(out)
}

pub fn dynamics(cfg: &RunConfig) -> Result<(), CliError> {
    let formats = cfg.formats(&[Format::Csv, Format::Json])?;
    let c = Coupling::new(cfg.kappa.unwrap_or(4.0))?;
    let grid = UnitGrid::trapezoid(cfg.grid_n(401)?)?;
    let spec = cfg.input.as_deref().unwrap_or("eigenmode:1");
    let alpha = waveform(spec, &grid, c)?;
    let zero = vec![Complex64::new(0.0, 0.0); grid.n()];
    let b = BoundaryData::square(grid.clone(), alpha, zero)?;
    let solver = cfg.solver.unwrap_or(Solver::Characteristics);
    let (f, name) = match solver {
        Solver::Characteristics => (integrate_characteristics(&b, c)?, "characteristics"),
        Solver::Greens => (greens_solution(&b, c, &grid)?, "greens"),
    };
    let bal = excitation_balance(&f)?;
    let e_light = grid.norm(f.alpha_out())?.powi(2);
    let e_spin = grid.norm(f.beta_out())?.powi(2);
    println!("solver            {name}");
    println!("input energy      {:.12}", bal.in_total);
    println!("output light      {e_light:.12}");
    println!("output spin       {e_spin:.12}");
    println!("balance defect    {:.3e}", bal.defect);
    for fmt in formats {
        match fmt {
            Format::Csv => io::write_field_csv(&f, create(&cfg.out, "dynamics.csv")?)?,
            Format::Json => {
                io::write_json(&f.summary(c, name)?, create(&cfg.out, "dynamics.json")?)?
            }
            Format::Svg => unreachable!("filtered by formats()"),
        }
    }
    Ok(())
}

fn efficiency_note(total: f64) -> Option<String> {
    if total >= EFFICIENCY_TARGET {
        None
    } else if total >= EFFICIENCY_FLAG_FLOOR {
        Some(format!(
            "total efficiency {total:.6} is below {EFFICIENCY_TARGET}; flagged: the readout-basis reprojection between unequal couplings may account for the gap"
        ))
    } else {
        Some(format!(
            "total efficiency {total:.6} is below {EFFICIENCY_TARGET}"
        ))
    }
}

pub fn cycle(cfg: &RunConfig) -> Result<(), CliError> {
    let formats = cfg.formats(&[Format::Csv, Format::Json])?;
    let kw = Coupling::new(single("kappa-write", &cfg.kappa_write, 4.0)?)?;
    let kr = Coupling::new(single("kappa-read", &cfg.kappa_read, 25.0)?)?;
    let grid = UnitGrid::gauss_legendre(cfg.grid_n(MODE_GRID_N)?)?;
    let mode = match cfg.mode.as_deref() {
        None => 1,
        Some([m]) if *m >= 1 => *m,
        Some(_) => {
            return Err(CliError::Usage(
                "--mode takes one index >= 1 for cycle".into(),
            ))
        }
    };
    let n = grid.n();
    let mw = compute_modes(kw, &grid, n)?;
    let mr = compute_modes(kr, &grid, n)?;
    let mut cc = CycleConfig::new(kw, kr, n)?;
    if let Some(g) = geometry(cfg, false)? {
        cc = cc.with_geometry(g);
    }
    let r = cycle_report(mode - 1, &cc, cfg.q.unwrap_or([0.0, 0.0]), &mw, &mr)?;
    println!("kappa_write          {}", r.kappa_write);
    println!("kappa_read           {}", r.kappa_read);
    println!("mode                 {}", r.mode_index);
    println!("diagonal efficiency  {:.12}", r.diagonal_efficiency);
    println!("total efficiency     {:.12}", r.total_efficiency);
    println!("vacuum admixture     {:.12}", r.vacuum_admixture);
    println!("prefactor phase      {:.12}", r.prefactor_phase);
    if let Some(note) = efficiency_note(r.total_efficiency) {
        println!("note: {note}");
    }
    for fmt in formats {
        match fmt {
            Format::Json => io::write_json(&r, create(&cfg.out, "cycle.json")?)?,
            Format::Csv => {
                io::write_cycle_csv(std::slice::from_ref(&r), create(&cfg.out, "cycle.csv")?)?
            }
            Format::Svg => unreachable!("filtered by formats()"),
        }
    }
    Ok(())
}

pub fn sweep(cfg: &RunConfig) -> Result<(), CliError> {
    let formats = cfg.formats(&[Format::Csv, Format::Json, Format::Svg])?;
    let kw = cfg.kappa_write.clone().unwrap_or_else(|| vec![4.0]);
    let kr = cfg
        .kappa_read
        .clone()
        .unwrap_or_else(|| vec![4.0, 8.0, 16.0, 25.0]);
    let modes = cfg.mode.clone().unwrap_or_else(|| vec![1]);
    if kw.is_empty() || kr.is_empty() || modes.is_empty() {
        return Err(CliError::Usage("sweep ranges must not be empty".into()));
    }
    let grid = UnitGrid::gauss_legendre(cfg.grid_n(MODE_GRID_N)?)?;
    let rows = efficiency_sweep(&kw, &kr, &modes, &grid)?;
    println!(
        "{:>12} {:>12} {:>5} {:>16} {:>16}",
        "kappa_write", "kappa_read", "mode", "diagonal_eff", "total_eff"
    );
    for r in &rows {
        println!(
            "{:>12} {:>12} {:>5} {:>16.12} {:>16.12}",
            r.kappa_write, r.kappa_read, r.mode, r.diagonal_eff, r.total_eff
        );
    }
    let plot_mode = if modes.contains(&1) { 1 } else { modes[0] };
    for fmt in formats {
        match fmt {
            Format::Csv => io::write_sweep_csv(&rows, create(&cfg.out, "sweep.csv")?)?,
            Format::Json => io::write_json(&rows, create(&cfg.out, "sweep.json")?)?,
            Format::Svg => write_text(
                &cfg.out,
                "sweep.svg",
                &svg::efficiency_heatmap(&rows, plot_mode),
            )?,
        }
    }
    Ok(())
}

pub fn capacity(cfg: &RunConfig) -> Result<(), CliError> {
    let formats = cfg.formats(&[Format::Csv, Format::Json])?;
    let g = geometry(cfg, true)?.expect("required geometry");
    let r = capacity_report(&g);
    println!("fresnel number    {:.6e}", r.fresnel_number);
    println!("capacity thin     {:.6e}", r.capacity_thin);
    println!(
        "capacity volume   {:.6e} ({})",
        r.capacity_volume,
        r.regime.as_str()
    );
    for fmt in formats {
        match fmt {
            Format::Json => io::write_json(&r, create(&cfg.out, "capacity.json")?)?,
            Format::Csv => io::write_capacity_csv(&r, create(&cfg.out, "capacity.csv")?)?,
            Format::Svg => unreachable!("filtered by formats()"),
        }
    }
    Ok(())
}

pub fn verify(cfg: &RunConfig) -> Result<(), CliError> {
    let formats = cfg.formats(&[Format::Json])?;
    let scale = cfg.tolerance_scale.unwrap_or(1.0);
    if !(scale >= 0.0 && scale.is_finite()) {
        return Err(CliError::Usage(format!(
            "tolerance scale must be finite and >= 0, got {scale}"
        )));
    }
    let report = run_suite(scale)?;
    for c in &report.checks {
        println!(
            "{} {:<36} measured {:.6e} bound {:.3e}  {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.measured,
            c.tolerance,
            c.detail
        );
    }
    if formats.contains(&Format::Json) {
        io::write_json(&report, create(&cfg.out, "verify.json")?)?;
    }
    if report.all_passed {
        Ok(())
    } else {
        let names: Vec<&str> = report.failed().map(|c| c.name.as_str()).collect();
        Err(CliError::Numeric(format!(
            "failed checks: {}",
            names.join(", ")
        )))
    }
}
