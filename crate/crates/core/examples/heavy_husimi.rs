//! Exact and semiclassical Husimi functions of the heavy curve-crossing
//! model, written as two grid files.
//!
//! cargo run --release --example heavy_husimi -- [out_dir] [n]

use caustics::compare::oracle_stats;
use caustics::heavy::{husimi_grid, LabelWindow, SemiclassicalOptions};
use caustics::{HeavyModel, HeavySemiclassics};

fn main() -> caustics::Result<()> {
    let mut args = std::env::args().skip(1);
    let dir = args.next().unwrap_or_else(|| "out/heavy_husimi".into());
    let n: usize = args.next().map(|s| s.parse().expect("grid size")).unwrap_or(64);
    std::fs::create_dir_all(&dir)?;

    let sc = HeavySemiclassics::new(HeavyModel::reference(), SemiclassicalOptions::default());
    let window = LabelWindow { nq: n, np: n, ..LabelWindow::reference() };
    let (exact, semi) = husimi_grid(&sc, &window)?;

    let dist: Vec<f64> = window.labels().iter().map(|l| sc.caustic_distance(l)).collect();
    let s = oracle_stats(exact.real_values().unwrap(), semi.real_values().unwrap(), &dist, sc.model.params.hbar);
    println!("{} compared points, median relative error {:.3}, p90 {:.3}", s.count, s.median, s.p90);

    let peak = exact.real_values().unwrap().iter().copied().fold(0.0, f64::max);
    println!("exact peak |K|^2 = {peak:.4}");
    for c in &sc.geometry.caustics {
        println!("{} at Q' = {:.4}, image ({:.3}, {:.3})", c.kind.tag(), c.qprime, c.image.q, c.image.p);
    }

    exact.write_to(std::fs::File::create(format!("{dir}/exact.grid"))?)?;
    semi.write_to(std::fs::File::create(format!("{dir}/semiclassical.grid"))?)?;
    println!("wrote {dir}/exact.grid and {dir}/semiclassical.grid");
    Ok(())
}
