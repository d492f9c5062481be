//! The relevant domain `D = {Q' : Im F(Q') <= 1.151}` of a three-kick
//! decomposed kernel, and where its v-PSCs sit relative to the unphysical
//! regions of a-PSCs.
//!
//! cargo run --release --example domain_contraction -- [fixed|own] [n]

use caustics::rotor::semiclassical::{
    default_domain_window, domain_d, in_a_psc_region, ExitChoice, RotorMap, DOMAIN_CUTOFF,
};
use caustics::stokes::{find_caustics, CausticSearch, StokesOptions};
use caustics::{BoundaryMap, CausticKind, CoherentLabel, StokesGeometry};

fn main() -> caustics::Result<()> {
    let mut args = std::env::args().skip(1);
    let own = args.next().as_deref() == Some("own");
    let n: usize = args.next().map(|s| s.parse().expect("grid size")).unwrap_or(128);
    for kick in [0.4, 2.4] {
        let map = RotorMap::three_kicks(kick);
        let window = default_domain_window(&map);
        let choice = if own {
            ExitChoice::Own
        } else {
            ExitChoice::Fixed(CoherentLabel::from_exit_q(map.propagate(map.anchor())?.q_out))
        };
        let d = domain_d(&map, choice, &window, n, n, DOMAIN_CUTOFF);
        let all = find_caustics(&map, &window, &CausticSearch::default());
        let geo = StokesGeometry::from_caustics(&map, all, |c| d.contains(c.qprime), &StokesOptions::new(window));
        println!(
            "K = {kick}: area(D) = {:.3}, closed in window: {}, {} caustics in D, {} regions",
            d.area(),
            d.closed_in_window(),
            geo.caustics.len(),
            geo.regions.len()
        );
        for c in geo.caustics.iter().filter(|c| c.kind == CausticKind::VPsc) {
            let inside = in_a_psc_region(&geo, c.qprime);
            println!("   v-PSC at {:.3}: {}", c.qprime, if inside { "inside an a-PSC region" } else { "free" });
        }
    }
    Ok(())
}
