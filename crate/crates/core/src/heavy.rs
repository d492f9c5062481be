//! The infinitely heavy two-state curve-crossing model.
//!
//! With no kinetic term the position is conserved and the whole time
//! evolution is one kick by the effective action `S(q) = -iħ ln Z(q)`.
//! The kernel is a single Gaussian integral over `x` with exponent
//! `Φ(x) = S(x) + (i/2)(x-q')² + (i/2)(x-q'')² + p'(x-q'/2) - p''(x-q''/2)`.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::dynamics::{
    entrance_terms, initial_point, solve_boundary, BoundaryMap, CoherentLabel, ComplexPoint, MapSample, SaddleBranch,
    SolverOptions, INITIAL_TANGENT,
};
use crate::error::Result;
use crate::grid::{Axis, GridField};
use crate::plane::Window;
use crate::quad::{integrate, QuadOptions};
use crate::spin::{eff_action_heavy, find_z_zeros, influence_heavy, HeavyParams, SpinState, ZModel};
use crate::stokes::{filter_branches, flag_near_v_psc, CausticSearch, StokesGeometry, StokesOptions};

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Default amplitude cutoff for dropping branches, `exp(-Im F/ħ) < ε`.
pub const AMPLITUDE_CUTOFF: f64 = 1e-6;

/// Default relevance cutoff for caustics, `exp(-Im F/ħ) < ε`. At `ħ = 0.25`
/// this is `Im F = 1.151`.
pub const CAUSTIC_CUTOFF: f64 = 1e-2;

/// `Im F` above which a contribution is smaller than `eps`.
pub fn imf_cutoff(hbar: f64, eps: f64) -> f64 {
    hbar * (1.0 / eps).ln()
}

/// One heavy-model kernel family with fixed entrance label and spins.
#[derive(Clone, Debug)]
pub struct HeavyModel {
    pub params: HeavyParams,
    pub entrance: CoherentLabel,
    pub spin_in: SpinState,
    pub spin_out: SpinState,
    zeros: Vec<C64>,
}

impl HeavyModel {
    pub fn new(params: HeavyParams, entrance: CoherentLabel, spin_in: SpinState, spin_out: SpinState) -> Result<Self> {
        params.validate()?;
        let mut m = HeavyModel { params, entrance, spin_in, spin_out, zeros: Vec::new() };
        let w = Window::centered(C64::new(entrance.q, 0.0), 6.0);
        m.zeros = find_z_zeros(&w, &m.z_model());
        Ok(m)
    }

    pub fn reference() -> Self {
        Self::new(HeavyParams::default(), CoherentLabel::default(), SpinState::UP, SpinState::UP)
            .expect("valid defaults")
    }

    pub fn z_model(&self) -> ZModel {
        ZModel::Heavy { params: self.params, inp: self.spin_in, out: self.spin_out }
    }

    /// Zeros of `Z` in `q` within 6 of the entrance position.
    pub fn z_zeros(&self) -> &[C64] {
        &self.zeros
    }

    /// `Q'` at which the trajectory starts on `x`.
    pub fn qprime_of(&self, x: C64) -> C64 {
        SQRT_2 * x - I * self.entrance.entrance_p()
    }

    pub fn z(&self, x: C64) -> C64 {
        influence_heavy(x, &self.spin_in, &self.spin_out, &self.params)
    }

    /// `Φ(x)` and its first two derivatives for a given exit label.
    pub fn exponent(&self, x: C64, exit: &CoherentLabel) -> Result<[C64; 3]> {
        let s = eff_action_heavy(x, &self.spin_in, &self.spin_out, &self.params)?;
        let (qa, pa) = (self.entrance.q, self.entrance.p);
        let (qb, pb) = (exit.q, exit.p);
        let phi = s.value + 0.5 * I * (x - qa) * (x - qa) + 0.5 * I * (x - qb) * (x - qb) + pa * (x - 0.5 * qa)
            - pb * (x - 0.5 * qb);
        let d1 = s.d1 + I * (x - qa) + I * (x - qb) + pa - pb;
        let d2 = s.d2 + 2.0 * I;
        Ok([phi, d1, d2])
    }

    /// `K = (πħ)^{-1/2} ∫ e^{iΦ(x)/ħ} dx` by adaptive quadrature.
    pub fn exact_kernel(&self, exit: &CoherentLabel) -> Result<C64> {
        self.exact_kernel_with(exit, PhaseConvention::Midpoint)
    }

    pub fn exact_kernel_with(&self, exit: &CoherentLabel, conv: PhaseConvention) -> Result<C64> {
        let h = self.params.hbar;
        let (qa, pa) = (self.entrance.q, self.entrance.p);
        let (qb, pb) = (exit.q, exit.p);
        let (oa, ob) = match conv {
            PhaseConvention::Midpoint => (0.5 * qa, 0.5 * qb),
            PhaseConvention::Shifted => (qa, qb),
        };
        let f = |x: f64| {
            let gauss = -((x - qa) * (x - qa) + (x - qb) * (x - qb)) / (2.0 * h);
            let phase = (pa * (x - oa) - pb * (x - ob)) / h;
            self.z(C64::from(x)) * C64::new(gauss, phase).exp()
        };
        let half = 8.0 * h.sqrt();
        let integral = integrate(f, qa.min(qb) - half, qa.max(qb) + half, &QuadOptions::default())?;
        Ok(integral / (PI * h).sqrt())
    }
}

/// Phase convention of the coherent-state wavefunction:
/// `Midpoint` is `e^{ip(x-q/2)/ħ}`, `Shifted` is `e^{ip(x-q)/ħ}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhaseConvention {
    Midpoint,
    Shifted,
}

impl BoundaryMap for HeavyModel {
    fn entrance(&self) -> CoherentLabel {
        self.entrance
    }

    fn hbar(&self) -> f64 {
        self.params.hbar
    }

    fn propagate(&self, qprime: C64) -> Result<MapSample> {
        let z0 = initial_point(qprime, &self.entrance);
        let x = z0.q;
        let s = eff_action_heavy(x, &self.spin_in, &self.spin_out, &self.params)?;
        let p_out = z0.p + s.d1;
        let q_out = (x - I * p_out) / SQRT_2;
        let jac = 1.0 - 0.5 * I * s.d2;
        let core = entrance_terms(x, &self.entrance) + s.value;
        Ok(MapSample::from_trajectory(q_out, jac, ComplexPoint { q: x, p: p_out }, INITIAL_TANGENT.0, core))
    }

    fn nearest_z_zero(&self, qprime: C64) -> Option<(f64, C64)> {
        let x = initial_point(qprime, &self.entrance).q;
        self.zeros.iter().map(|&z| ((z - x).norm(), z)).min_by(|a, b| a.0.total_cmp(&b.0))
    }

    fn singularities(&self, window: &Window) -> Vec<C64> {
        self.zeros.iter().map(|&z| self.qprime_of(z)).filter(|q| window.contains(*q)).collect()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SemiclassicalOptions {
    pub solver: SolverOptions,
    pub caustic_search: CausticSearch,
    /// Half-width of the `Q'` window searched for caustics, in units of `√ħ`.
    pub caustic_half_width: f64,
    pub amplitude_cutoff: f64,
    pub caustic_cutoff: f64,
    /// Keep every branch found: no Stokes filtering, no amplitude cutoff.
    pub unfiltered: bool,
}

impl Default for SemiclassicalOptions {
    fn default() -> Self {
        SemiclassicalOptions {
            solver: SolverOptions::default(),
            caustic_search: CausticSearch::default(),
            caustic_half_width: 12.0,
            amplitude_cutoff: AMPLITUDE_CUTOFF,
            caustic_cutoff: CAUSTIC_CUTOFF,
            unfiltered: false,
        }
    }
}

/// Semiclassical kernel machinery for one entrance label: the Stokes
/// geometry in the `Q'` plane does not depend on the exit label, so it is
/// built once.
#[derive(Clone, Debug)]
pub struct HeavySemiclassics {
    pub model: HeavyModel,
    pub geometry: StokesGeometry,
    pub options: SemiclassicalOptions,
    seeds: Vec<C64>,
}

impl HeavySemiclassics {
    pub fn new(model: HeavyModel, options: SemiclassicalOptions) -> Self {
        let half = options.caustic_half_width * model.params.hbar.sqrt();
        let window = Window::centered(model.anchor(), half);
        let cutoff = imf_cutoff(model.params.hbar, options.caustic_cutoff);
        let stokes = StokesOptions::new(window);
        let geometry = StokesGeometry::build(&model, &window, &options.caustic_search, cutoff, &stokes);
        let seeds = options.solver.seeds(&model);
        HeavySemiclassics { model, geometry, options, seeds }
    }

    /// Filtered kernel `Σ E e^{iF/ħ}` and every branch found.
    pub fn kernel(&self, exit: &CoherentLabel) -> Result<(C64, Vec<SaddleBranch>)> {
        let h = self.model.params.hbar;
        let mut branches = solve_boundary(&self.model, exit, &self.seeds, &self.options.solver)?;
        if !self.options.unfiltered {
            filter_branches(&mut branches, &self.geometry, h, self.options.amplitude_cutoff);
        }
        flag_near_v_psc(&mut branches, &self.geometry, h.sqrt());
        Ok((crate::dynamics::physical_sum(&branches, h), branches))
    }

    /// Smallest distance in the exit-label plane from `exit` to the image
    /// of a detected caustic.
    pub fn caustic_distance(&self, exit: &CoherentLabel) -> f64 {
        self.geometry
            .caustics
            .iter()
            .chain(self.geometry.ignored.iter())
            .map(|c| (c.image.q - exit.q).hypot(c.image.p - exit.p))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Exit window in the `(q'', p'')` plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LabelWindow {
    pub q: (f64, f64),
    pub p: (f64, f64),
    pub nq: usize,
    pub np: usize,
}

impl LabelWindow {
    pub fn reference() -> Self {
        LabelWindow { q: (-2.0, 2.0), p: (-3.0, 1.0), nq: 64, np: 64 }
    }

    /// Row-major labels: `p` outer, `q` inner.
    pub fn labels(&self) -> Vec<CoherentLabel> {
        let w = Window::new(self.q, self.p);
        w.seeds(self.nq, self.np).into_iter().map(|z| CoherentLabel::new(z.re, z.im)).collect()
    }

    pub fn axes(&self) -> (Axis, Axis) {
        (Axis::new("q", self.q.0, self.q.1, self.nq), Axis::new("p", self.p.0, self.p.1, self.np))
    }
}

fn model_metadata(m: &HeavyModel) -> Vec<(String, String)> {
    vec![
        ("model".into(), "heavy".into()),
        ("hbar".into(), format!("{}", m.params.hbar)),
        ("F".into(), format!("{}", m.params.force)),
        ("J".into(), format!("{}", m.params.coupling)),
        ("t".into(), format!("{}", m.params.time)),
        ("q_in".into(), format!("{}", m.entrance.q)),
        ("p_in".into(), format!("{}", m.entrance.p)),
        ("spin_in".into(), m.spin_in.label()),
        ("spin_out".into(), m.spin_out.label()),
    ]
}

/// Exact and semiclassical Husimi fields `|K|²` over the exit window.
/// Points where the semiclassical solver finds no root are `NaN`.
pub fn husimi_grid(sc: &HeavySemiclassics, window: &LabelWindow) -> Result<(GridField, GridField)> {
    let labels = window.labels();
    let exact: Vec<f64> =
        labels.par_iter().map(|l| sc.model.exact_kernel(l).map(|k| k.norm_sqr())).collect::<Result<_>>()?;
    let semi: Vec<f64> =
        labels.par_iter().map(|l| sc.kernel(l).map(|(k, _)| k.norm_sqr()).unwrap_or(f64::NAN)).collect();
    let (ax, ay) = window.axes();
    let mut meta = model_metadata(&sc.model);
    meta.push(("kind".into(), "exact".into()));
    let e = GridField::real(ax.clone(), ay.clone(), exact, meta.clone());
    *meta.last_mut().unwrap() = ("kind".into(), "semiclassical".into());
    let s = GridField::real(ax, ay, semi, meta);
    Ok((e, s))
}

/// `Im F(Q')` over a `Q'` window for a fixed exit label. `Im F` does not
/// depend on the branch of the logarithm; zeros of `Z` give `+∞`.
pub fn imf_landscape(model: &HeavyModel, exit: &CoherentLabel, window: &Window, nx: usize, ny: usize) -> GridField {
    let pts = window.seeds(nx, ny);
    let vals: Vec<f64> = pts
        .par_iter()
        .map(|&q| match model.propagate(q) {
            Ok(s) => s.action_at(exit).im,
            Err(_) => f64::INFINITY,
        })
        .collect();
    let mut meta = model_metadata(model);
    meta.push(("q_out".into(), format!("{}", exit.q)));
    meta.push(("p_out".into(), format!("{}", exit.p)));
    for (i, z) in model.singularities(window).iter().enumerate() {
        meta.push((format!("z_zero_{i}"), format!("{} {}", z.re, z.im)));
    }
    GridField::real(
        Axis::new("ReQ'", window.re.0, window.re.1, nx),
        Axis::new("ImQ'", window.im.0, window.im.1, ny),
        vals,
        meta,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::coherent_overlap;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn zero_time_is_overlap() {
        let p = HeavyParams { time: 0.0, ..HeavyParams::default() };
        let e = CoherentLabel::new(0.3, -0.4);
        let m = HeavyModel::new(p, e, SpinState::UP, SpinState::UP).unwrap();
        assert!((m.exact_kernel(&e).unwrap() - 1.0).norm() < 1e-10);
        let x = CoherentLabel::new(-0.5, 0.9);
        assert!((m.exact_kernel(&x).unwrap() - coherent_overlap(&x, &e, 0.25)).norm() < 1e-10);
    }

    #[test]
    fn hermiticity() {
        let p = HeavyParams::default();
        let a = CoherentLabel::new(0.2, -0.3);
        let b = CoherentLabel::new(-0.4, 0.6);
        let s1 = SpinState::normalized(c(0.6, 0.0), c(0.0, 0.8));
        let s2 = SpinState::DOWN;
        // H -> -H reverses time
        let rev = HeavyParams { force: -p.force, coupling: -p.coupling, ..p };
        let ab = HeavyModel::new(p, a, s1, s2).unwrap().exact_kernel(&b).unwrap();
        let ba = HeavyModel::new(rev, b, s2, s1).unwrap().exact_kernel(&a).unwrap();
        assert!((ab - ba.conj()).norm() < 1e-10);
    }

    #[test]
    fn phase_convention_drops_out_of_husimi() {
        let m = HeavyModel::new(HeavyParams::default(), CoherentLabel::new(0.3, 0.7), SpinState::UP, SpinState::UP)
            .unwrap();
        for l in [CoherentLabel::new(0.0, 0.5), CoherentLabel::new(-1.0, -0.8)] {
            let a = m.exact_kernel_with(&l, PhaseConvention::Midpoint).unwrap().norm_sqr();
            let b = m.exact_kernel_with(&l, PhaseConvention::Shifted).unwrap().norm_sqr();
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn jacobian_is_half_phi_second_derivative() {
        let m = HeavyModel::reference();
        let exit = CoherentLabel::new(0.4, -0.2);
        for q in [c(0.1, 0.2), c(-0.7, 0.4), c(1.3, -0.5)] {
            let s = m.propagate(q).unwrap();
            let phi = m.exponent(s.end.q, &exit).unwrap();
            assert!((s.jac + 0.5 * I * phi[2]).norm() < 1e-10);
        }
    }

    #[test]
    fn saddles_are_one_step_trajectories() {
        let sc = HeavySemiclassics::new(HeavyModel::reference(), SemiclassicalOptions::default());
        let exit = CoherentLabel::new(0.3, 0.2);
        let (_, bs) = sc.kernel(&exit).unwrap();
        for b in bs {
            let s = sc.model.propagate(b.qprime).unwrap();
            let phi = sc.model.exponent(s.end.q, &exit).unwrap();
            assert!(phi[1].norm() < 1e-9, "{phi:?}");
            assert!((s.q_out - exit.exit_q()).norm() < 1e-10);
            assert!((s.action_at(&exit) - phi[0]).norm() < 1e-12);
        }
    }

    #[test]
    fn uncoupled_semiclassics_is_exact() {
        let p = HeavyParams { coupling: 0.0, ..HeavyParams::default() };
        let m = HeavyModel::new(p, CoherentLabel::default(), SpinState::UP, SpinState::UP).unwrap();
        let sc = HeavySemiclassics::new(m, SemiclassicalOptions::default());
        for l in [CoherentLabel::new(0.0, 1.5), CoherentLabel::new(0.4, 1.0), CoherentLabel::new(-0.3, 2.0)] {
            let (k, bs) = sc.kernel(&l).unwrap();
            assert_eq!(bs.iter().filter(|b| b.physical).count(), 1);
            let ex = sc.model.exact_kernel(&l).unwrap();
            assert!((k - ex).norm() < 1e-9, "{k} {ex}");
        }
    }
}
