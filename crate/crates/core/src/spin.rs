//! Two-level algebra for the internal degree of freedom.
//!
//! Everything here is a pure function of its arguments. The propagators are
//! evaluated in closed form through the even functions `cos √w` and
//! `sin √w / √w` of `w = a² + b²`, so no square-root branch ever leaks into
//! a result.

use std::ops::Mul;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::plane::Window;

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Below this modulus the influence functional is treated as vanishing.
pub const ZERO_THRESHOLD: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpinState {
    pub up: C64,
    pub down: C64,
}

impl SpinState {
    pub const UP: SpinState = SpinState { up: C64 { re: 1.0, im: 0.0 }, down: C64 { re: 0.0, im: 0.0 } };
    pub const DOWN: SpinState = SpinState { up: C64 { re: 0.0, im: 0.0 }, down: C64 { re: 1.0, im: 0.0 } };

    /// Normalized state proportional to `(up, down)`.
    pub fn normalized(up: C64, down: C64) -> Self {
        let n = (up.norm_sqr() + down.norm_sqr()).sqrt();
        SpinState { up: up / n, down: down / n }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.up.norm_sqr() + self.down.norm_sqr()
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &SpinState) -> C64 {
        self.up.conj() * other.up + self.down.conj() * other.down
    }

    pub fn label(&self) -> String {
        if *self == Self::UP {
            "up".into()
        } else if *self == Self::DOWN {
            "down".into()
        } else {
            format!("({},{})", self.up, self.down)
        }
    }
}

/// 2×2 complex matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpinMatrix(pub [C64; 4]);

impl SpinMatrix {
    pub const IDENTITY: SpinMatrix =
        SpinMatrix([C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0)]);
    pub const SIGMA_X: SpinMatrix =
        SpinMatrix([C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
    pub const SIGMA_Y: SpinMatrix =
        SpinMatrix([C64::new(0.0, 0.0), C64::new(0.0, -1.0), C64::new(0.0, 1.0), C64::new(0.0, 0.0)]);
    pub const SIGMA_Z: SpinMatrix =
        SpinMatrix([C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(-1.0, 0.0)]);

    pub fn scale(&self, s: C64) -> SpinMatrix {
        SpinMatrix(self.0.map(|x| x * s))
    }

    pub fn add(&self, other: &SpinMatrix) -> SpinMatrix {
        let [a, b, c, d] = self.0;
        let [e, f, g, h] = other.0;
        SpinMatrix([a + e, b + f, c + g, d + h])
    }

    pub fn dagger(&self) -> SpinMatrix {
        let [a, b, c, d] = self.0;
        SpinMatrix([a.conj(), c.conj(), b.conj(), d.conj()])
    }

    pub fn apply(&self, v: &SpinState) -> SpinState {
        let [a, b, c, d] = self.0;
        SpinState { up: a * v.up + b * v.down, down: c * v.up + d * v.down }
    }

    /// `⟨out|self|inp⟩`
    pub fn element(&self, out: &SpinState, inp: &SpinState) -> C64 {
        out.inner(&self.apply(inp))
    }

    pub fn max_abs_diff(&self, other: &SpinMatrix) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }
}

impl Mul for SpinMatrix {
    type Output = SpinMatrix;
    fn mul(self, rhs: SpinMatrix) -> SpinMatrix {
        let [a, b, c, d] = self.0;
        let [e, f, g, h] = rhs.0;
        SpinMatrix([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h])
    }
}

/// `cos √w` and `sin √w / √w` together with their first two derivatives in `w`.
#[derive(Clone, Copy, Debug)]
struct EvenTrig {
    c: C64,
    s: C64,
    dc: C64,
    ds: C64,
    d2c: C64,
    d2s: C64,
}

// Power series converge fast for |w| < 1 and avoid the 1/w cancellations in
// the closed-form derivatives.
const SERIES_RADIUS: f64 = 1.0;
const SERIES_TERMS: usize = 22;

fn even_trig(w: C64) -> EvenTrig {
    if w.norm() < SERIES_RADIUS {
        // c = Σ (-w)^k/(2k)!, s = Σ (-w)^k/(2k+1)!
        let mut c = C64::new(0.0, 0.0);
        let mut s = C64::new(0.0, 0.0);
        let mut dc = C64::new(0.0, 0.0);
        let mut ds = C64::new(0.0, 0.0);
        let mut d2c = C64::new(0.0, 0.0);
        let mut d2s = C64::new(0.0, 0.0);
        let mut fact_even = 1.0; // (2k)!
        let mut fact_odd = 1.0; // (2k+1)!
        let mut wk = C64::new(1.0, 0.0); // (-w)^k
        let mut wk1 = C64::new(0.0, 0.0); // (-w)^(k-1)
        let mut wk2 = C64::new(0.0, 0.0); // (-w)^(k-2)
        for k in 0..SERIES_TERMS {
            let kf = k as f64;
            c += wk / fact_even;
            s += wk / fact_odd;
            if k >= 1 {
                // d/dw (-w)^k = -k (-w)^(k-1)
                dc -= wk1 * kf / fact_even;
                ds -= wk1 * kf / fact_odd;
            }
            if k >= 2 {
                d2c += wk2 * (kf * (kf - 1.0)) / fact_even;
                d2s += wk2 * (kf * (kf - 1.0)) / fact_odd;
            }
            wk2 = wk1;
            wk1 = wk;
            wk *= -w;
            fact_even *= (2.0 * kf + 1.0) * (2.0 * kf + 2.0);
            fact_odd *= (2.0 * kf + 2.0) * (2.0 * kf + 3.0);
        }
        EvenTrig { c, s, dc, ds, d2c, d2s }
    } else {
        let om = w.sqrt();
        let c = om.cos();
        let s = om.sin() / om;
        let dc = -s / 2.0;
        let ds = (c - s) / (2.0 * w);
        let d2c = -ds / 2.0;
        let d2s = -(s / 2.0 + 3.0 * ds) / (2.0 * w);
        EvenTrig { c, s, dc, ds, d2c, d2s }
    }
}

/// `exp(-i (c0·1 + a σ_z + b σ_x))` in closed form.
pub fn su2_exp(a: C64, b: C64, c0: C64) -> SpinMatrix {
    let t = even_trig(a * a + b * b);
    let phase = (-I * c0).exp();
    let gen = SpinMatrix::SIGMA_Z.scale(a).add(&SpinMatrix::SIGMA_X.scale(b));
    SpinMatrix::IDENTITY.scale(t.c).add(&gen.scale(-I * t.s)).scale(phase)
}

/// Value and first two derivatives of a scalar function of `q`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub value: C64,
    pub d1: C64,
    pub d2: C64,
}

/// Matrix element `⟨out| exp(-i(a σ_z + b σ_x)) |in⟩` and its first two
/// derivatives in `a`, at fixed `b`.
fn element_jet_in_a(a: C64, b: C64, inp: &SpinState, out: &SpinState) -> Jet {
    let t = even_trig(a * a + b * b);
    let e1 = out.inner(inp);
    let ez = SpinMatrix::SIGMA_Z.element(out, inp);
    let ex = SpinMatrix::SIGMA_X.element(out, inp);
    let gen = a * ez + b * ex;
    let value = t.c * e1 - I * t.s * gen;
    let d1 = 2.0 * a * t.dc * e1 - I * (2.0 * a * t.ds * gen + t.s * ez);
    let d2 =
        (2.0 * t.dc + 4.0 * a * a * t.d2c) * e1 - I * ((2.0 * t.ds + 4.0 * a * a * t.d2s) * gen + 4.0 * a * t.ds * ez);
    Jet { value, d1, d2 }
}

/// Chain rule for `exp(-i c0(q)) · m(a(q))`.
fn compose(m: Jet, a1: C64, a2: C64, c0: C64, c1: C64, c2: C64) -> Jet {
    let mq = a1 * m.d1;
    let mqq = a2 * m.d1 + a1 * a1 * m.d2;
    let ph = (-I * c0).exp();
    Jet {
        value: ph * m.value,
        d1: ph * (mq - I * c1 * m.value),
        d2: ph * (mqq - 2.0 * I * c1 * mq - I * c2 * m.value - c1 * c1 * m.value),
    }
}

/// Parameters of the infinitely heavy two-state curve-crossing model
/// `H = -ħ σ_z F q + ħ σ_x J`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HeavyParams {
    pub hbar: f64,
    pub force: f64,
    pub coupling: f64,
    pub time: f64,
}

impl Default for HeavyParams {
    fn default() -> Self {
        HeavyParams { hbar: 0.25, force: 1.0, coupling: 0.75, time: 1.5 }
    }
}

impl HeavyParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.hbar > 0.0) || !(self.time >= 0.0) {
            return Err(Error::Config(format!("heavy model needs hbar > 0 and t >= 0, got {self:?}")));
        }
        Ok(())
    }
}

/// Parameters of the spin-kicked rotor
/// `V(q) = K cos q + ħ σ_z δK cos q + ħ σ_x J`, kicked once per unit time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KickParams {
    pub hbar: f64,
    pub kick: f64,
    pub spin_kick: f64,
    pub coupling: f64,
    pub steps: usize,
}

impl Default for KickParams {
    fn default() -> Self {
        KickParams { hbar: 0.25, kick: 0.4, spin_kick: 1.0, coupling: 0.75, steps: 3 }
    }
}

impl KickParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.hbar > 0.0) {
            return Err(Error::Config(format!("kicked rotor needs hbar > 0, got {}", self.hbar)));
        }
        Ok(())
    }
}

/// Influence functional `Z(q) = ⟨out| exp(-i V(q) t/ħ) |in⟩` of the heavy model.
pub fn influence_heavy(q: C64, inp: &SpinState, out: &SpinState, p: &HeavyParams) -> C64 {
    influence_heavy_jet(q, inp, out, p).value
}

pub fn influence_heavy_jet(q: C64, inp: &SpinState, out: &SpinState, p: &HeavyParams) -> Jet {
    let a1 = C64::from(-p.force * p.time);
    let m = element_jet_in_a(a1 * q, C64::from(p.coupling * p.time), inp, out);
    let zero = C64::new(0.0, 0.0);
    compose(m, a1, zero, zero, zero, zero)
}

/// Influence functional `Z(q) = ⟨out| exp(-i V(q)/ħ) |in⟩` of one rotor kick.
pub fn influence_kick(q: C64, inp: &SpinState, out: &SpinState, p: &KickParams) -> C64 {
    influence_kick_jet(q, inp, out, p).value
}

pub fn influence_kick_jet(q: C64, inp: &SpinState, out: &SpinState, p: &KickParams) -> Jet {
    let (cq, sq) = (q.cos(), q.sin());
    let m = element_jet_in_a(p.spin_kick * cq, C64::from(p.coupling), inp, out);
    let k = p.kick / p.hbar;
    compose(m, -p.spin_kick * sq, -p.spin_kick * cq, k * cq, -k * sq, -k * cq)
}

/// `scale · ln Z` with analytic derivatives; principal logarithm.
fn log_jet(z: Jet, scale: C64, q: C64) -> Result<EffectiveJet> {
    if z.value.norm() < ZERO_THRESHOLD {
        return Err(Error::ZeroOfInfluenceFunctional { q });
    }
    let r1 = z.d1 / z.value;
    let r2 = z.d2 / z.value;
    Ok(EffectiveJet { value: scale * z.value.ln(), d1: scale * r1, d2: scale * (r2 - r1 * r1), z: z.value })
}

/// Effective action or potential, its derivatives, and the raw `Z` (so that
/// callers can keep the logarithm continuous along a path).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EffectiveJet {
    pub value: C64,
    pub d1: C64,
    pub d2: C64,
    pub z: C64,
}

/// `S_eff(q) = -iħ ln Z(q)` for the heavy model.
pub fn eff_action_heavy(q: C64, inp: &SpinState, out: &SpinState, p: &HeavyParams) -> Result<EffectiveJet> {
    log_jet(influence_heavy_jet(q, inp, out, p), -I * p.hbar, q)
}

/// `V_eff(q) = iħ ln Z_n(q)` for one rotor kick.
pub fn eff_potential_kick(q: C64, inp: &SpinState, out: &SpinState, p: &KickParams) -> Result<EffectiveJet> {
    log_jet(influence_kick_jet(q, inp, out, p), I * p.hbar, q)
}

/// Which influence functional to search for zeros.
#[derive(Clone, Copy, Debug)]
pub enum ZModel {
    Heavy { params: HeavyParams, inp: SpinState, out: SpinState },
    Kick { params: KickParams, inp: SpinState, out: SpinState },
}

impl ZModel {
    pub fn jet(&self, q: C64) -> Jet {
        match self {
            ZModel::Heavy { params, inp, out } => influence_heavy_jet(q, inp, out, params),
            ZModel::Kick { params, inp, out } => influence_kick_jet(q, inp, out, params),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ZeroSearch {
    pub seeds_per_axis: usize,
    pub newton_tol: f64,
    pub max_iter: usize,
    pub accept: f64,
    pub dedup_radius: f64,
}

impl Default for ZeroSearch {
    fn default() -> Self {
        ZeroSearch { seeds_per_axis: 40, newton_tol: 1e-13, max_iter: 50, accept: 1e-10, dedup_radius: 1e-6 }
    }
}

/// Newton polish of a zero of `Z` from `start`. `None` when it does not converge.
pub fn polish_zero(model: &ZModel, start: C64, opts: &ZeroSearch) -> Option<C64> {
    let mut q = start;
    for _ in 0..opts.max_iter {
        let j = model.jet(q);
        if !j.value.is_finite() || !j.d1.is_finite() || j.d1.norm() == 0.0 {
            return None;
        }
        if j.value.norm() < opts.newton_tol {
            return Some(q);
        }
        let step = j.value / j.d1;
        q -= step;
        if step.norm() < 1e-15 * (1.0 + q.norm()) {
            break;
        }
    }
    (model.jet(q).value.norm() < opts.accept).then_some(q)
}

/// All zeros of `Z` inside `window`, sorted by real then imaginary part.
pub fn find_z_zeros(window: &Window, model: &ZModel) -> Vec<C64> {
    find_z_zeros_with(window, model, &ZeroSearch::default())
}

pub fn find_z_zeros_with(window: &Window, model: &ZModel, opts: &ZeroSearch) -> Vec<C64> {
    let mut found: Vec<C64> = Vec::new();
    for seed in window.seeds(opts.seeds_per_axis, opts.seeds_per_axis) {
        let Some(q) = polish_zero(model, seed, opts) else { continue };
        if !window.contains(q) {
            continue;
        }
        if found.iter().all(|z| (z - q).norm() > opts.dedup_radius) {
            found.push(q);
        }
    }
    crate::plane::sort_points(&mut found);
    found
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    // Truncated power series of exp(-i G), G = c0 + a σ_z + b σ_x.
    fn series_exp(a: C64, b: C64, c0: C64, terms: usize) -> SpinMatrix {
        let g = SpinMatrix::IDENTITY
            .scale(c0)
            .add(&SpinMatrix::SIGMA_Z.scale(a))
            .add(&SpinMatrix::SIGMA_X.scale(b))
            .scale(-I);
        let mut term = SpinMatrix::IDENTITY;
        let mut sum = SpinMatrix::IDENTITY;
        for k in 1..terms {
            term = (term * g).scale(C64::from(1.0 / k as f64));
            sum = sum.add(&term);
        }
        sum
    }

    fn heavy_ref() -> HeavyParams {
        HeavyParams::default()
    }

    fn kick_ref() -> KickParams {
        KickParams { kick: 0.4, ..KickParams::default() }
    }

    #[test]
    fn pauli_squares() {
        for s in [SpinMatrix::SIGMA_X, SpinMatrix::SIGMA_Y, SpinMatrix::SIGMA_Z] {
            assert!((s * s).max_abs_diff(&SpinMatrix::IDENTITY) < 1e-15);
        }
    }

    #[test]
    fn su2_exp_trivial_generators() {
        let z = c(0.0, 0.0);
        assert!(su2_exp(z, z, z).max_abs_diff(&SpinMatrix::IDENTITY) < 1e-15);
        let c0 = c(0.7, -0.2);
        let expect = SpinMatrix::IDENTITY.scale((-I * c0).exp());
        assert!(su2_exp(z, z, c0).max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn su2_exp_matches_power_series() {
        let (a, b, c0) = (c(0.3, 0.1), c(0.7, 0.0), c(0.2, 0.0));
        let d = su2_exp(a, b, c0).max_abs_diff(&series_exp(a, b, c0, 60));
        assert!(d < 1e-12, "{d}");
        // outside the series radius
        let (a, b, c0) = (c(1.9, -0.4), c(0.8, 0.3), c(-0.5, 0.1));
        let d = su2_exp(a, b, c0).max_abs_diff(&series_exp(a, b, c0, 80));
        assert!(d < 1e-12, "{d}");
    }

    #[test]
    fn su2_exp_small_omega_is_smooth() {
        // a² + b² = 0 with a, b ≠ 0: nilpotent generator, exp = 1 - i G.
        let (a, b) = (c(1.0, 0.0), c(0.0, 1.0));
        let d = su2_exp(a, b, c(0.0, 0.0)).max_abs_diff(&series_exp(a, b, c(0.0, 0.0), 10));
        assert!(d < 1e-14, "{d}");
    }

    #[test]
    fn heavy_influence_closed_forms() {
        let p = heavy_ref();
        let z = influence_heavy(c(0.0, 0.0), &SpinState::UP, &SpinState::UP, &p);
        assert!((z - c(1.125f64.cos(), 0.0)).norm() < 1e-15);

        let p2 = HeavyParams { time: std::f64::consts::FRAC_PI_2 / 0.75, ..p };
        let z = influence_heavy(c(0.0, 0.0), &SpinState::UP, &SpinState::DOWN, &p2);
        assert!((z.norm() - 1.0).abs() < 1e-14);

        for q in [c(0.5, 0.0), c(0.3, -0.7), c(-1.2, 0.4)] {
            let om = (p.coupling * p.coupling + p.force * p.force * q * q).sqrt();
            let expect = (om * p.time).cos() + I * p.force * q * (om * p.time).sin() / om;
            let got = influence_heavy(q, &SpinState::UP, &SpinState::UP, &p);
            assert!((got - expect).norm() < 1e-13, "{q}");
        }
    }

    #[test]
    fn heavy_influence_matches_series() {
        let p = heavy_ref();
        let q = c(0.5, 0.0);
        let m = series_exp(-p.force * p.time * q, c(p.coupling * p.time, 0.0), c(0.0, 0.0), 60);
        let expect = m.element(&SpinState::UP, &SpinState::UP);
        let got = influence_heavy(q, &SpinState::UP, &SpinState::UP, &p);
        assert!((got - expect).norm() < 1e-12);
    }

    #[test]
    fn kick_influence_limits() {
        let p = KickParams { spin_kick: 0.0, coupling: 0.0, kick: 1.3, ..KickParams::default() };
        for q in [c(0.3, 0.0), c(1.0, 0.4), c(-2.0, -0.3)] {
            let expect = (-I * p.kick * q.cos() / p.hbar).exp();
            let got = influence_kick(q, &SpinState::UP, &SpinState::UP, &p);
            assert!((got - expect).norm() < 1e-13);
        }
        let p = KickParams { spin_kick: 0.0, coupling: 0.75, kick: 1.3, ..KickParams::default() };
        for q in [c(0.3, 0.0), c(1.0, 0.4)] {
            let expect = (-I * p.kick * q.cos() / p.hbar).exp() * 0.75f64.cos();
            let got = influence_kick(q, &SpinState::UP, &SpinState::UP, &p);
            assert!((got - expect).norm() < 1e-13);
        }
    }

    #[test]
    fn kick_influence_matches_series() {
        let p = kick_ref();
        let q = c(1.0, 0.2);
        let m = series_exp(p.spin_kick * q.cos(), c(p.coupling, 0.0), p.kick * q.cos() / p.hbar, 80);
        let expect = m.element(&SpinState::UP, &SpinState::UP);
        let got = influence_kick(q, &SpinState::UP, &SpinState::UP, &p);
        assert!((got - expect).norm() < 1e-12, "{}", (got - expect).norm());
        let omt = (p.coupling * p.coupling + (p.spin_kick * q.cos()).powi(2)).sqrt();
        let closed =
            (-I * p.kick * q.cos() / p.hbar).exp() * (omt.cos() - I * (p.spin_kick * q.cos() / omt) * omt.sin());
        assert!((got - closed).norm() < 1e-12);
    }

    fn fd_check(f: impl Fn(C64) -> EffectiveJet, q: C64) {
        let h = 1e-6;
        let j = f(q);
        let fd1 = (f(q + h).value - f(q - h).value) / (2.0 * h);
        let fd2 = (f(q + h).d1 - f(q - h).d1) / (2.0 * h);
        assert!((fd1 - j.d1).norm() <= 1e-7 * j.d1.norm().max(1.0), "d1 {} vs {}", fd1, j.d1);
        assert!((fd2 - j.d2).norm() <= 1e-7 * j.d2.norm().max(1.0), "d2 {} vs {}", fd2, j.d2);
    }

    #[test]
    fn effective_action_derivatives() {
        let p = heavy_ref();
        fd_check(|q| eff_action_heavy(q, &SpinState::UP, &SpinState::UP, &p).unwrap(), c(0.3, 0.0));
        fd_check(|q| eff_action_heavy(q, &SpinState::UP, &SpinState::DOWN, &p).unwrap(), c(-0.4, 0.2));
        let k = kick_ref();
        fd_check(|q| eff_potential_kick(q, &SpinState::UP, &SpinState::UP, &k).unwrap(), c(0.4, 0.1));
        fd_check(|q| eff_potential_kick(q, &SpinState::DOWN, &SpinState::UP, &k).unwrap(), c(2.1, -0.3));
    }

    #[test]
    fn effective_action_on_real_axis() {
        let p = heavy_ref();
        for k in 0..=60 {
            let q = c(-3.0 + 0.1 * k as f64, 0.0);
            let s = eff_action_heavy(q, &SpinState::UP, &SpinState::UP, &p).unwrap();
            assert!(s.value.im >= -1e-14);
            assert!((s.value.im + p.hbar * s.z.norm().ln()).abs() < 1e-14);
        }
    }

    #[test]
    fn decoupled_kick_potential() {
        let p = KickParams { spin_kick: 0.0, coupling: 0.0, kick: 0.9, ..KickParams::default() };
        let q = c(0.7, 0.2);
        let v = eff_potential_kick(q, &SpinState::UP, &SpinState::UP, &p).unwrap();
        assert!((v.value - p.kick * q.cos()).norm() < 1e-13);
        assert!((v.d1 + p.kick * q.sin()).norm() < 1e-13);
        let p = KickParams { coupling: 0.75, ..p };
        let v = eff_potential_kick(q, &SpinState::UP, &SpinState::UP, &p).unwrap();
        let konst = I * p.hbar * C64::from(0.75f64.cos()).ln();
        assert!((v.value - p.kick * q.cos() - konst).norm() < 1e-13);
        assert!((v.d1 + p.kick * q.sin()).norm() < 1e-13);
    }

    #[test]
    fn zero_of_z_is_reported() {
        let p = HeavyParams { time: std::f64::consts::FRAC_PI_2 / 0.75, ..heavy_ref() };
        let err = eff_action_heavy(c(0.0, 0.0), &SpinState::UP, &SpinState::UP, &p).unwrap_err();
        assert!(matches!(err, Error::ZeroOfInfluenceFunctional { .. }));
    }

    #[test]
    fn zeros_heavy_model() {
        let model = ZModel::Heavy { params: heavy_ref(), inp: SpinState::UP, out: SpinState::UP };
        let real_axis = Window::new((-3.0, 3.0), (-1e-9, 1e-9));
        assert!(find_z_zeros(&real_axis, &model).is_empty());

        let tuned = ZModel::Heavy {
            params: HeavyParams { time: std::f64::consts::FRAC_PI_2 / 0.75, ..heavy_ref() },
            inp: SpinState::UP,
            out: SpinState::UP,
        };
        let zs = find_z_zeros(&Window::new((-1.0, 1.0), (-1.0, 1.0)), &tuned);
        assert!(zs.iter().any(|z| z.norm() < 1e-10), "{zs:?}");

        let zs = find_z_zeros(&Window::new((-3.0, 3.0), (-3.0, 3.0)), &model);
        assert!(!zs.is_empty());
        let opts = ZeroSearch::default();
        for z in &zs {
            assert!(model.jet(*z).value.norm() < 1e-10);
            let again = polish_zero(&model, *z, &opts).unwrap();
            assert!((again - z).norm() < 1e-9);
        }
        for w in zs.windows(2) {
            assert!(w[0].re < w[1].re || (w[0].re == w[1].re && w[0].im <= w[1].im));
        }
    }
}
