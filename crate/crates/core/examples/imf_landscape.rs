//! `Im F(Q')` of the heavy model for one exit label, with the zeros of the
//! influence functional that make the action diverge logarithmically.

use caustics::heavy::imf_landscape;
use caustics::{BoundaryMap, CoherentLabel, HeavyModel, Window};

fn main() -> caustics::Result<()> {
    let model = HeavyModel::reference();
    let exit = CoherentLabel::new(0.0, -0.8);
    let window = Window::centered(model.anchor(), 3.0);
    let field = imf_landscape(&model, &exit, &window, 81, 81);

    println!("zeros of Z in q:");
    for z in model.z_zeros() {
        println!("  {z:.4}");
    }
    let vals = field.real_values().unwrap();
    let (i, min) =
        vals.iter().copied().enumerate().fold((0, f64::INFINITY), |a, (i, v)| if v < a.1 { (i, v) } else { a });
    let (x, y) = field.point(i);
    println!("min Im F = {min:.4} at Q' = {x:.3}{y:+.3}i");

    // coarse text rendering: '#' below the relevance cutoff, '.' above
    let cut = caustics::heavy::imf_cutoff(model.params.hbar, caustics::heavy::CAUSTIC_CUTOFF);
    for row in (0..81).rev().step_by(4) {
        let line: String = (0..81).step_by(2).map(|col| if vals[row * 81 + col] <= cut { '#' } else { '.' }).collect();
        println!("{line}");
    }
    std::fs::create_dir_all("out")?;
    field.write_to(std::fs::File::create("out/imf_landscape.grid")?)?;
    Ok(())
}
