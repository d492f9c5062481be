//! Writing and reading the plain-text grid format.

use caustics::{Axis, GridField};

fn main() -> caustics::Result<()> {
    let x = Axis::new("q", -1.0, 1.0, 3);
    let y = Axis::new("p", 0.0, 1.0, 2);
    let values: Vec<f64> = (0..6).map(|i| (i as f64).sqrt()).collect();
    let field = GridField::real(x, y, values, vec![("hbar".into(), "0.25".into()), ("kind".into(), "exact".into())]);
    let text = field.to_text();
    print!("{text}");
    let back = GridField::parse(text.as_bytes())?;
    assert_eq!(back, field);
    println!("round trip ok, kind = {}", back.meta("kind").unwrap_or("?"));
    Ok(())
}
