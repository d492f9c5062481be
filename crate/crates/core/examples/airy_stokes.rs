//! Stokes geometry of the fold normal form, where the exact answer is the
//! Airy function: three Stokes rays at 120 degrees, one of them inactive.

use caustics::stokes::{describe_caustic, trace_stokes, FoldNormalForm, StokesOptions, StokesRegion};
use caustics::{Window, C64};

fn main() -> caustics::Result<()> {
    let map = FoldNormalForm;
    let caustic = describe_caustic(&map, C64::new(0.0, 0.0), 0.0).expect("fold point");
    let opts = StokesOptions::new(Window::centered(C64::new(0.0, 0.0), 3.0));
    let lines = trace_stokes(&map, &caustic, &opts)?;
    for l in &lines {
        let worst = l.re_delta.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        println!(
            "ray at {:7.2} deg: {} vertices, max |Re dF| = {worst:.1e}, {}",
            l.direction.to_degrees(),
            l.points.len(),
            if l.active { "active" } else { "inactive" }
        );
    }
    let region = StokesRegion::from_lines(&lines).expect("two active rays");
    for q in [C64::new(0.0, -0.3), C64::new(0.0, 0.3), C64::new(0.5, 0.0)] {
        println!("Q' = {q}: {}", if region.contains(q) { "unphysical" } else { "physical" });
    }
    Ok(())
}
