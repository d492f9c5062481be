//! Bloch vector of the spin-kicked rotor for a regular and a chaotic kick
//! strength. The transverse component `c` keeps oscillating in the regular
//! case and dies out in the chaotic one.

use caustics::rotor::quantum::evolve_observables;
use caustics::{CoherentLabel, KickParams, SpinState};

fn main() -> caustics::Result<()> {
    let start = CoherentLabel::new(0.0, 1.5);
    let steps = 50;
    let mut runs = Vec::new();
    for kick in [0.4, 2.4] {
        let p = KickParams { kick, steps, ..KickParams::default() };
        runs.push((kick, evolve_observables(&start, &SpinState::UP, &p, steps)?));
    }
    println!("{:>3} {:>22} {:>22}", "n", "K=0.4  s_z     c     P", "K=2.4  s_z     c     P");
    for n in (0..=steps).step_by(5) {
        let row: Vec<String> =
            runs.iter().map(|(_, o)| format!("{:7.3} {:6.3} {:6.3}", o[n].s_z, o[n].c, o[n].p)).collect();
        println!("{n:>3} {}", row.join("   "));
    }
    for (kick, o) in &runs {
        let mean_c = o[10..=50].iter().map(|x| x.c).sum::<f64>() / 41.0;
        println!("K = {kick}: mean c over steps 10..50 = {mean_c:.4}, P(50) = {:.4}", o[50].p);
    }
    Ok(())
}
