//! The spin influence functional `Z(q)` for both models, its zeros in the
//! complex plane, and the effective potential `iħ ln Z` near one of them.

use caustics::spin::{eff_potential_kick, find_z_zeros, influence_heavy, ZModel};
use caustics::{HeavyParams, KickParams, SpinState, Window, C64};

fn main() {
    let hp = HeavyParams::default();
    let heavy = ZModel::Heavy { params: hp, inp: SpinState::UP, out: SpinState::UP };
    println!("heavy model, Z(q) for up -> up:");
    for q in [-1.0, 0.0, 1.0] {
        println!("  Z({q:+.1}) = {:.5}", influence_heavy(C64::new(q, 0.0), &SpinState::UP, &SpinState::UP, &hp));
    }
    for z in find_z_zeros(&Window::centered(C64::new(0.0, 0.0), 6.0), &heavy) {
        println!("  zero at {z:.5}");
    }

    let kp = KickParams::default();
    let kick = ZModel::Kick { params: kp, inp: SpinState::UP, out: SpinState::UP };
    let zeros = find_z_zeros(&Window::new((0.0, std::f64::consts::TAU), (-3.0, 3.0)), &kick);
    println!("kicked rotor, zeros of Z in one period:");
    for z in &zeros {
        println!("  {z:.5}");
    }
    if let Some(&z) = zeros.first() {
        println!("effective potential approaching {z:.3}:");
        for r in [1e-1, 1e-2, 1e-3] {
            let v = eff_potential_kick(z + r, &SpinState::UP, &SpinState::UP, &kp).expect("off the zero");
            println!("  |q - z| = {r:.0e}: V = {:.4}, V' = {:.3e}", v.value, v.d1);
        }
    }
}
