//! One-kick decomposed kernel of the spin-kicked rotor: split-step exact
//! result against the Stokes-filtered sum over complex trajectories.

use caustics::compare::oracle_stats;
use caustics::heavy::{LabelWindow, SemiclassicalOptions};
use caustics::rotor::quantum::exact_decomposed_kernels;
use caustics::rotor::semiclassical::{RotorMap, RotorSemiclassics};
use caustics::{CoherentLabel, KickParams, SpinState};

fn main() -> caustics::Result<()> {
    let p = KickParams { kick: 0.4, steps: 1, ..KickParams::default() };
    let entrance = CoherentLabel::new(0.0, 1.5);
    let spins = [SpinState::UP, SpinState::UP];
    let sc = RotorSemiclassics::new(RotorMap::new(p, entrance, spins.to_vec())?, SemiclassicalOptions::default());

    let window = LabelWindow { q: (-0.5, 3.5), p: (-0.5, 3.5), nq: 16, np: 16 };
    let labels = window.labels();
    let exact: Vec<f64> =
        exact_decomposed_kernels(&entrance, &labels, &spins, &p)?.iter().map(|k| k.norm_sqr()).collect();
    let semi: Vec<f64> = labels.iter().map(|l| sc.kernel(l).map_or(f64::NAN, |(k, _)| k.norm_sqr())).collect();
    let dist: Vec<f64> = labels.iter().map(|l| sc.caustic_distance(l)).collect();

    let best = (0..labels.len()).max_by(|&a, &b| exact[a].total_cmp(&exact[b])).unwrap();
    let (_, branches) = sc.kernel(&labels[best])?;
    println!(
        "peak at ({:.3}, {:.3}): exact {:.5}, semiclassical {:.5}",
        labels[best].q, labels[best].p, exact[best], semi[best]
    );
    for b in &branches {
        println!("  Q' = {:.4}  F = {:.4}  physical {}", b.qprime, b.action, b.physical);
    }
    let s = oracle_stats(&exact, &semi, &dist, p.hbar);
    println!("{} points: median relative error {:.4}, p90 {:.4}", s.count, s.median, s.p90);
    Ok(())
}
