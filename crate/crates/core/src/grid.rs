//! Sampled fields on rectangular grids and their text format.
//!
//! ```text
//! # caustics-grid v1
//! # param hbar 0.25
//! # axis q -2 2 64
//! # axis p -3 1 64
//! # values real
//! v00 v01 ...
//! ```
//! One line per value of the second axis; complex values are written as
//! `re im` pairs.

use std::io::{BufRead, Write};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

pub const FORMAT_TAG: &str = "caustics-grid v1";

#[derive(Clone, Debug, PartialEq)]
pub struct Axis {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub len: usize,
}

impl Axis {
    pub fn new(name: &str, min: f64, max: f64, len: usize) -> Self {
        Axis { name: name.to_string(), min, max, len }
    }

    pub fn values(&self) -> Vec<f64> {
        crate::plane::linspace(self.min, self.max, self.len)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum GridValues {
    Real(Vec<f64>),
    Complex(Vec<C64>),
}

impl GridValues {
    pub fn len(&self) -> usize {
        match self {
            GridValues::Real(v) => v.len(),
            GridValues::Complex(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Row-major field: index `iy * x.len + ix`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridField {
    pub x: Axis,
    pub y: Axis,
    pub values: GridValues,
    pub metadata: Vec<(String, String)>,
}

impl GridField {
    pub fn real(x: Axis, y: Axis, values: Vec<f64>, metadata: Vec<(String, String)>) -> Self {
        assert_eq!(values.len(), x.len * y.len, "value count must match the axes");
        GridField { x, y, values: GridValues::Real(values), metadata }
    }

    pub fn complex(x: Axis, y: Axis, values: Vec<C64>, metadata: Vec<(String, String)>) -> Self {
        assert_eq!(values.len(), x.len * y.len, "value count must match the axes");
        GridField { x, y, values: GridValues::Complex(values), metadata }
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn real_values(&self) -> Option<&[f64]> {
        match &self.values {
            GridValues::Real(v) => Some(v),
            GridValues::Complex(_) => None,
        }
    }

    /// Position of grid point `i`.
    pub fn point(&self, i: usize) -> (f64, f64) {
        let xs = self.x.values();
        let ys = self.y.values();
        (xs[i % self.x.len], ys[i / self.x.len])
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# {FORMAT_TAG}")?;
        for (k, v) in &self.metadata {
            writeln!(w, "# param {k} {v}")?;
        }
        for a in [&self.x, &self.y] {
            writeln!(w, "# axis {} {:.16e} {:.16e} {}", a.name, a.min, a.max, a.len)?;
        }
        let kind = match self.values {
            GridValues::Real(_) => "real",
            GridValues::Complex(_) => "complex",
        };
        writeln!(w, "# values {kind}")?;
        if self.x.len == 0 {
            return Ok(());
        }
        let mut line = String::new();
        for row in 0..self.y.len {
            line.clear();
            for col in 0..self.x.len {
                if col > 0 {
                    line.push(' ');
                }
                let i = row * self.x.len + col;
                match &self.values {
                    GridValues::Real(v) => line.push_str(&format!("{:.16e}", v[i])),
                    GridValues::Complex(v) => line.push_str(&format!("{:.16e} {:.16e}", v[i].re, v[i].im)),
                }
            }
            writeln!(w, "{line}")?;
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }

    pub fn parse<R: BufRead>(r: R) -> Result<GridField> {
        let bad = |m: &str| Error::Parse(m.to_string());
        let mut lines = r.lines();
        let first = lines.next().ok_or_else(|| bad("empty input"))??;
        if first.trim() != format!("# {FORMAT_TAG}") {
            return Err(bad("missing format tag"));
        }
        let mut metadata = Vec::new();
        let mut axes = Vec::new();
        let mut complex = None;
        let mut nums: Vec<f64> = Vec::new();
        for line in lines {
            let line = line?;
            if let Some(rest) = line.strip_prefix("# ") {
                let (tag, body) = rest.split_once(' ').ok_or_else(|| bad("bare header line"))?;
                match tag {
                    "param" => {
                        let (k, v) = body.split_once(' ').unwrap_or((body, ""));
                        metadata.push((k.to_string(), v.to_string()));
                    }
                    "axis" => {
                        let f: Vec<&str> = body.split_whitespace().collect();
                        if f.len() != 4 {
                            return Err(bad("axis needs name, min, max, len"));
                        }
                        let num = |s: &str| s.parse::<f64>().map_err(|_| bad("axis bound"));
                        axes.push(Axis {
                            name: f[0].to_string(),
                            min: num(f[1])?,
                            max: num(f[2])?,
                            len: f[3].parse().map_err(|_| bad("axis length"))?,
                        });
                    }
                    "values" => complex = Some(body.trim() == "complex"),
                    _ => return Err(bad("unknown header tag")),
                }
                continue;
            }
            for tok in line.split_whitespace() {
                nums.push(tok.parse().map_err(|_| bad("value"))?);
            }
        }
        let (Some(complex), [x, y]) = (complex, &axes[..]) else {
            return Err(bad("need two axes and a values line"));
        };
        let n = x.len * y.len;
        let values = if complex {
            if nums.len() != 2 * n {
                return Err(bad("complex value count"));
            }
            GridValues::Complex(nums.chunks(2).map(|c| C64::new(c[0], c[1])).collect())
        } else {
            if nums.len() != n {
                return Err(bad("value count"));
            }
            GridValues::Real(nums)
        };
        Ok(GridField { x: x.clone(), y: y.clone(), values, metadata })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn golden_two_by_two() {
        let f = GridField::real(
            Axis::new("q", -1.0, 1.0, 2),
            Axis::new("p", 0.0, 0.5, 2),
            vec![1.0, 0.25, -3.0e-5, 0.1],
            vec![("hbar".into(), "0.25".into())],
        );
        let want = "# caustics-grid v1\n\
# param hbar 0.25\n\
# axis q -1.0000000000000000e0 1.0000000000000000e0 2\n\
# axis p 0.0000000000000000e0 5.0000000000000000e-1 2\n\
# values real\n\
1.0000000000000000e0 2.5000000000000000e-1\n\
-3.0000000000000001e-5 1.0000000000000001e-1\n";
        assert_eq!(f.to_text(), want);
    }

    #[test]
    fn empty_grid_is_header_only() {
        let f = GridField::real(Axis::new("q", 0.0, 0.0, 0), Axis::new("p", 0.0, 0.0, 0), vec![], vec![]);
        let t = f.to_text();
        assert!(t.lines().all(|l| l.starts_with('#')));
        assert_eq!(GridField::parse(t.as_bytes()).unwrap(), f);
    }

    #[test]
    fn rejects_wrong_tag() {
        assert!(matches!(GridField::parse("# other v2\n".as_bytes()), Err(Error::Parse(_))));
    }

    proptest! {
        #[test]
        fn round_trip(vals in proptest::collection::vec(-1e6..1e6f64, 6), cplx in any::<bool>()) {
            let x = Axis::new("ReQ'", -0.3, 1.7, 3);
            let y = Axis::new("ImQ'", 0.1, 0.2, 2);
            let meta = vec![("note".to_string(), "two words".to_string())];
            let f = if cplx {
                let z = vals.iter().zip(vals.iter().rev()).map(|(a, b)| C64::new(*a, *b)).collect();
                GridField::complex(x, y, z, meta)
            } else {
                GridField::real(x, y, vals, meta)
            };
            prop_assert_eq!(GridField::parse(f.to_text().as_bytes()).unwrap(), f);
        }
    }
}
