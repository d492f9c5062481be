//! Experiment driver behind the `run` subcommand.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::compare::{oracle_stats, OracleStats};
use crate::config::{ExitMode, Mode, Model, RunConfig};
use crate::dynamics::{BoundaryMap, CoherentLabel, SolverOptions};
use crate::error::{Error, Result};
use crate::grid::GridField;
use crate::heavy::{husimi_grid, imf_landscape, HeavyModel, HeavySemiclassics, SemiclassicalOptions};
use crate::plane::Window;
use crate::rotor::quantum::{evolve_observables, exact_decomposed_kernels};
use crate::rotor::semiclassical::{domain_d, ExitChoice, RotorMap, RotorSemiclassics};
use crate::stokes::{CausticSearch, StokesGeometry};

/// Execute `cfg`, writing into `cfg.output`. Returns the files written.
pub fn run(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    cfg.validate()?;
    fs::create_dir_all(&cfg.output)?;
    let out = Outputs { dir: cfg.output.clone(), header: cfg.entries(), written: Vec::new() };
    match cfg.model {
        Model::Heavy => run_heavy(cfg, out),
        Model::Rotor => run_rotor(cfg, out),
    }
}

struct Outputs {
    dir: PathBuf,
    header: Vec<(String, String)>,
    written: Vec<PathBuf>,
}

impl Outputs {
    fn grid(&mut self, name: &str, mut field: GridField) -> Result<()> {
        let mut meta = self.header.clone();
        meta.append(&mut field.metadata);
        field.metadata = meta;
        let path = self.dir.join(name);
        field.write_to(std::io::BufWriter::new(fs::File::create(&path)?))?;
        self.written.push(path);
        Ok(())
    }

    /// Text file with the config echoed as `# key = value` lines.
    fn text(&mut self, name: &str, body: &str) -> Result<()> {
        let mut s = String::new();
        for (k, v) in &self.header {
            let _ = writeln!(s, "# {k} = {v}");
        }
        s.push_str(body);
        let path = self.dir.join(name);
        fs::write(&path, s)?;
        self.written.push(path);
        Ok(())
    }
}

fn options(cfg: &RunConfig) -> SemiclassicalOptions {
    SemiclassicalOptions {
        solver: SolverOptions { seeds_per_axis: cfg.seeds, ..SolverOptions::default() },
        caustic_search: CausticSearch { v_radius: cfg.v_radius, ..CausticSearch::default() },
        caustic_half_width: cfg.qprime_half_width(),
        amplitude_cutoff: cfg.amplitude_cutoff,
        caustic_cutoff: cfg.caustic_cutoff,
        unfiltered: false,
    }
}

/// Fixed exit label: the configured one, or the real label closest to
/// the image of the anchor.
fn exit_label<M: BoundaryMap>(cfg: &RunConfig, map: &M) -> Result<CoherentLabel> {
    let image = CoherentLabel::from_exit_q(map.propagate(map.anchor())?.q_out);
    Ok(CoherentLabel::new(cfg.q_out.unwrap_or(image.q), cfg.p_out.unwrap_or(image.p)))
}

fn qprime_window<M: BoundaryMap>(cfg: &RunConfig, map: &M) -> Window {
    Window::centered(map.anchor(), cfg.qprime_half_width() * cfg.hbar.sqrt())
}

fn run_heavy(cfg: &RunConfig, mut out: Outputs) -> Result<Vec<PathBuf>> {
    let spins = cfg.spin_sequence()?;
    let model = HeavyModel::new(cfg.heavy_params(), cfg.entrance(), spins[0], spins[1])?;
    match cfg.mode {
        Mode::Husimi | Mode::OracleCompare => {
            let sc = HeavySemiclassics::new(model, options(cfg));
            let lw = cfg.label_window();
            let (exact, semi) = husimi_grid(&sc, &lw)?;
            let labels = lw.labels();
            let dist: Vec<f64> = labels.iter().map(|l| sc.caustic_distance(l)).collect();
            let stats = oracle_stats(exact.real_values().unwrap(), semi.real_values().unwrap(), &dist, cfg.hbar);
            let prefix = if cfg.mode == Mode::Husimi { "husimi" } else { "oracle" };
            out.grid(&format!("{prefix}_exact.grid"), exact)?;
            out.grid(&format!("{prefix}_semiclassical.grid"), semi)?;
            let mut body = stats_report(&stats);
            body.push_str(&caustic_report(&sc.geometry));
            if cfg.mode == Mode::Husimi {
                body.push_str(&branch_report(&labels, |l| sc.kernel(l).map(|(_, b)| b)));
            }
            out.text(&format!("{prefix}_report.txt"), &body)?;
        }
        Mode::Imf => {
            let exit = exit_label(cfg, &model)?;
            let w = qprime_window(cfg, &model);
            out.grid("imf.grid", imf_landscape(&model, &exit, &w, cfg.nx, cfg.ny))?;
        }
        Mode::Caustics => {
            let sc = HeavySemiclassics::new(model, options(cfg));
            out.text("caustics.txt", &caustic_report(&sc.geometry))?;
        }
        Mode::SpinEvolution | Mode::DomainD => unreachable!("rejected by validate"),
    }
    Ok(out.written)
}

fn run_rotor(cfg: &RunConfig, mut out: Outputs) -> Result<Vec<PathBuf>> {
    let p = cfg.kick_params();
    let spins = cfg.spin_sequence()?;
    let entrance = cfg.entrance();
    match cfg.mode {
        Mode::SpinEvolution => {
            let obs = evolve_observables(&entrance, &spins[0], &p, cfg.step_count())?;
            let mut body = String::from("n,s_z,c,P\n");
            for (n, o) in obs.iter().enumerate() {
                let _ = writeln!(body, "{n},{:.16e},{:.16e},{:.16e}", o.s_z, o.c, o.p);
            }
            out.text("spin_evolution.csv", &body)?;
        }
        Mode::Imf | Mode::DomainD => {
            let map = RotorMap::new(p, entrance, spins)?;
            let w = qprime_window(cfg, &map);
            let choice = match cfg.exit {
                ExitMode::Fixed => ExitChoice::Fixed(exit_label(cfg, &map)?),
                ExitMode::Own => ExitChoice::Own,
            };
            let d = domain_d(&map, choice, &w, cfg.nx, cfg.ny, cfg.cutoff);
            let mut meta = Vec::new();
            if let ExitChoice::Fixed(l) = choice {
                meta.push(("exit_label".to_string(), format!("{} {}", l.q, l.p)));
            }
            meta.push(("closed_in_window".to_string(), d.closed_in_window().to_string()));
            let name = if cfg.mode == Mode::Imf { "imf.grid" } else { "domain_d.grid" };
            out.grid(name, d.to_grid(meta))?;
        }
        Mode::Caustics => {
            let map = RotorMap::new(p, entrance, spins)?;
            let sc = RotorSemiclassics::new(map, options(cfg));
            out.text("caustics.txt", &caustic_report(&sc.geometry))?;
        }
        Mode::OracleCompare => {
            let map = RotorMap::new(p, entrance, spins.clone())?;
            let sc = RotorSemiclassics::new(map, options(cfg));
            let lw = cfg.label_window();
            let labels = lw.labels();
            let exact: Vec<f64> =
                exact_decomposed_kernels(&entrance, &labels, &spins, &p)?.iter().map(|k| k.norm_sqr()).collect();
            let semi: Vec<f64> =
                labels.par_iter().map(|l| sc.kernel(l).map(|(k, _)| k.norm_sqr()).unwrap_or(f64::NAN)).collect();
            let dist: Vec<f64> = labels.iter().map(|l| sc.caustic_distance(l)).collect();
            let stats = oracle_stats(&exact, &semi, &dist, cfg.hbar);
            let (ax, ay) = lw.axes();
            let kind = |k: &str| vec![("kind".to_string(), k.to_string())];
            out.grid("oracle_exact.grid", GridField::real(ax.clone(), ay.clone(), exact, kind("exact")))?;
            out.grid("oracle_semiclassical.grid", GridField::real(ax, ay, semi, kind("semiclassical")))?;
            let mut body = stats_report(&stats);
            body.push_str(&caustic_report(&sc.geometry));
            out.text("oracle_report.txt", &body)?;
        }
        Mode::Husimi => unreachable!("rejected by validate"),
    }
    Ok(out.written)
}

fn stats_report(s: &OracleStats) -> String {
    format!(
        "compare points {} near_caustic {} median {:.6e} p90 {:.6e} max {:.6e}\n",
        s.count, s.near_caustic, s.median, s.p90, s.max
    )
}

fn c(z: C64) -> String {
    format!("{:.12e} {:.12e}", z.re, z.im)
}

/// One `caustic` record per caustic followed by its Stokes lines, each
/// line a `line` record and its vertices as `point` records giving `Q'`
/// and the image `Q''`.
pub fn caustic_report(g: &StokesGeometry) -> String {
    let mut s = String::new();
    let all = g.caustics.iter().map(|x| (x, "kept")).chain(g.ignored.iter().map(|x| (x, "ignored")));
    for (i, (cp, status)) in all.enumerate() {
        let zero = cp.source_zero.map_or("none".to_string(), c);
        let _ = writeln!(
            s,
            "caustic {i} kind {} status {status} qprime {} image {:.12e} {:.12e} action {} zero {zero} in_region {}",
            cp.kind.tag(),
            c(cp.qprime),
            cp.image.q,
            cp.image.p,
            c(cp.action),
            g.regions.iter().any(|r| r.caustic.qprime != cp.qprime && r.contains(cp.qprime)),
        );
        for l in g.lines.iter().filter(|l| l.caustic.qprime == cp.qprime) {
            let _ = writeln!(
                s,
                "line {i} direction {:.6} active {} termination {:?} points {}",
                l.direction,
                l.active,
                l.termination,
                l.points.len()
            );
            for (p, e) in l.points.iter().zip(&l.exit_points) {
                let _ = writeln!(s, "point {} {}", c(*p), c(*e));
            }
        }
    }
    s
}

fn branch_report<F>(labels: &[CoherentLabel], branches: F) -> String
where
    F: Fn(&CoherentLabel) -> Result<Vec<crate::dynamics::SaddleBranch>> + Sync,
{
    let rows: Vec<String> = labels
        .par_iter()
        .map(|l| match branches(l) {
            Ok(bs) => {
                let phys = bs.iter().filter(|b| b.physical).count();
                let near = bs.iter().any(|b| b.physical && b.near_v_psc);
                format!("label {:.6} {:.6} branches {} physical {phys} near_v_psc {near}\n", l.q, l.p, bs.len())
            }
            Err(e) => format!("label {:.6} {:.6} error {}\n", l.q, l.p, e.kind()),
        })
        .collect();
    rows.concat()
}

/// Record for failed runs, one line of JSON.
pub fn error_record(e: &Error) -> String {
    let msg = e.to_string().replace('\\', "\\\\").replace('"', "\\\"");
    format!("{{\"error\":\"{}\",\"exit_code\":{},\"message\":\"{msg}\"}}", e.kind(), e.exit_code())
}

/// Read a config file, then apply overrides in order.
pub fn load_config(file: Option<&Path>, overrides: &[(String, String)]) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    if let Some(f) = file {
        let text = fs::read_to_string(f).map_err(|e| Error::Config(format!("{}: {e}", f.display())))?;
        cfg.apply_text(&text)?;
    }
    for (k, v) in overrides {
        cfg.set(k, v)?;
    }
    Ok(cfg)
}
