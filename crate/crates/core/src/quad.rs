//! Adaptive Gauss–Kronrod (7/15) quadrature for complex integrands on a
//! finite real interval.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn kronrod<F: Fn(f64) -> C64>(f: &F, a: f64, b: f64) -> (C64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        k += s * WGK[j];
        if j % 2 == 1 {
            g += s * WG[j / 2];
        }
    }
    (k * h, ((k - g) * h).norm())
}

#[derive(Clone, Copy, Debug)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub max_depth: usize,
    /// Initial uniform panels before adaptive bisection.
    pub panels: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions { abs_tol: 1e-10, max_depth: 40, panels: 16 }
    }
}

/// `∫_a^b f(x) dx` to absolute error `opts.abs_tol`.
pub fn integrate<F: Fn(f64) -> C64>(f: F, a: f64, b: f64, opts: &QuadOptions) -> Result<C64> {
    let n = opts.panels.max(1);
    let width = (b - a) / n as f64;
    // Each panel gets its share of the tolerance.
    let tol = opts.abs_tol / n as f64;
    let mut total = C64::new(0.0, 0.0);
    for i in 0..n {
        let lo = a + width * i as f64;
        let hi = if i + 1 == n { b } else { lo + width };
        total += adapt(&f, lo, hi, tol, 0, opts.max_depth)?;
    }
    Ok(total)
}

fn adapt<F: Fn(f64) -> C64>(f: &F, a: f64, b: f64, tol: f64, depth: usize, max_depth: usize) -> Result<C64> {
    let (val, err) = kronrod(f, a, b);
    if err <= tol || err <= 1e-15 * val.norm() {
        return Ok(val);
    }
    if depth >= max_depth {
        return Err(Error::QuadratureFailure { depth, a, b });
    }
    let m = 0.5 * (a + b);
    Ok(adapt(f, a, m, 0.5 * tol, depth + 1, max_depth)? + adapt(f, m, b, 0.5 * tol, depth + 1, max_depth)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_moment() {
        let v = integrate(|x| C64::new((-x * x).exp(), 0.0), -8.0, 8.0, &QuadOptions::default()).unwrap();
        assert!((v.re - std::f64::consts::PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn oscillatory_fourier_pair() {
        // ∫ exp(-x²/2 + i k x) = √(2π) exp(-k²/2)
        let k = 7.0;
        let v = integrate(|x| C64::new(-0.5 * x * x, k * x).exp(), -12.0, 12.0, &QuadOptions::default()).unwrap();
        let expect = (2.0 * std::f64::consts::PI).sqrt() * (-k * k / 2.0f64).exp();
        assert!((v - expect).norm() < 1e-12, "{v}");
    }

    #[test]
    fn depth_limit_reports_failure() {
        let opts = QuadOptions { abs_tol: 1e-300, max_depth: 2, panels: 1 };
        let err = integrate(|x| C64::new((50.0 * x).sin(), 0.0), 0.0, 10.0, &opts).unwrap_err();
        assert!(matches!(err, Error::QuadratureFailure { .. }));
    }
}
