//! Phase-space caustics of the heavy model, their classification, and the
//! Stokes lines bounding the branch-exclusion regions.

use caustics::stokes::Termination;
use caustics::{HeavyModel, HeavySemiclassics};

fn main() {
    let sc = HeavySemiclassics::new(HeavyModel::reference(), Default::default());
    let g = &sc.geometry;
    println!("kept caustics (Im F below the relevance cutoff):");
    for c in &g.caustics {
        println!(
            "  {} Q' = {:.4}  image ({:.3}, {:.3})  Im F = {:.3}  |J| = {:.1e}",
            c.kind.tag(),
            c.qprime,
            c.image.q,
            c.image.p,
            c.action.im,
            c.jac_residual
        );
    }
    println!("ignored: {}", g.ignored.len());
    for c in &g.ignored {
        println!("  {} Q' = {:.4}  Im F = {:.3}", c.kind.tag(), c.qprime, c.action.im);
    }
    for l in &g.lines {
        let end = l.points.last().unwrap();
        let how = match l.termination {
            Termination::Singularity => "at a log singularity",
            Termination::Window => "at the window edge",
            Termination::ArcLength => "at the arc-length limit",
            Termination::Lost => "(tracking lost)",
        };
        println!(
            "line from {:.3} at {:6.1} deg, {}, {} vertices, ends {:.3} {how}",
            l.caustic.qprime,
            l.direction.to_degrees(),
            if l.active { "active" } else { "inactive" },
            l.points.len(),
            end
        );
    }
    println!("{} unphysical region(s)", g.regions.len());
}
