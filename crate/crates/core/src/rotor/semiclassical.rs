//! Complex trajectories of the effective standard map
//! `p̄_n = p̄_{n-1} - V'_n(q̄_{n-1})`, `q̄_n = q̄_{n-1} + p̄_n`,
//! with `V_n = iħ ln Z_n` and `Z_n = ⟨η_n| e^{-iV̂(q)/ħ} |η_{n-1}⟩`.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::dynamics::{
    entrance_terms, initial_point, physical_sum, solve_boundary, BoundaryMap, CoherentLabel, ComplexPoint, MapSample,
    SaddleBranch, INITIAL_TANGENT,
};
use crate::error::{Error, Result};
use crate::grid::{Axis, GridField};
use crate::heavy::{imf_cutoff, SemiclassicalOptions};
use crate::plane::Window;
use crate::spin::{eff_potential_kick, find_z_zeros, KickParams, SpinState, ZModel};
use crate::stokes::{filter_branches, flag_near_v_psc, CausticKind, CausticPoint, StokesGeometry, StokesOptions};

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Relevance cutoff on `Im F` used for the physical domain.
pub const DOMAIN_CUTOFF: f64 = 1.151;

/// Points and tangents of one trajectory, `n = 0..N`.
#[derive(Clone, Debug)]
pub struct EffectiveTrajectory {
    pub points: Vec<ComplexPoint>,
    pub tangent: Vec<(C64, C64)>,
    /// Entrance terms plus `Σ [p̄_n²/2 - V_n(q̄_{n-1})]`.
    pub core_action: C64,
}

impl EffectiveTrajectory {
    pub fn end(&self) -> ComplexPoint {
        *self.points.last().unwrap()
    }

    /// `∂Q''/∂Q'`
    pub fn jac(&self) -> C64 {
        let (dq, dp) = *self.tangent.last().unwrap();
        (dq - I * dp) / SQRT_2
    }

    /// Largest residual of the map equations along the trajectory.
    pub fn map_residual(&self, rotor: &RotorMap) -> f64 {
        let mut worst: f64 = 0.0;
        for n in 1..self.points.len() {
            let (a, b) = (self.points[n - 1], self.points[n]);
            let Ok(v) = rotor.potential(n, a.q) else { return f64::INFINITY };
            worst = worst.max((b.p - a.p + v.d1).norm()).max((b.q - a.q - b.p).norm());
        }
        worst
    }
}

/// The effective map for a decomposed kernel with spins `η_0 … η_N`.
#[derive(Clone, Debug)]
pub struct RotorMap {
    pub params: KickParams,
    pub entrance: CoherentLabel,
    pub spins: Vec<SpinState>,
    /// Zeros of each `Z_n` with `Re q ∈ [0, 2π)`.
    zeros: Vec<Vec<C64>>,
}

impl RotorMap {
    pub fn new(params: KickParams, entrance: CoherentLabel, spins: Vec<SpinState>) -> Result<Self> {
        params.validate()?;
        if spins.is_empty() {
            return Err(Error::Config("spin sequence needs at least one state".into()));
        }
        let strip = Window::new((0.0, 2.0 * PI), (-3.0, 3.0));
        let zeros = spins
            .windows(2)
            .map(|w| {
                let model = ZModel::Kick { params, inp: w[0], out: w[1] };
                let mut z = find_z_zeros(&strip, &model);
                z.retain(|q| q.re < 2.0 * PI - 1e-9);
                z
            })
            .collect();
        Ok(RotorMap { params, entrance, spins, zeros })
    }

    /// Three kicks with spin up throughout, from `(0, 1.5)`.
    pub fn three_kicks(kick: f64) -> Self {
        let p = KickParams { kick, steps: 3, ..KickParams::default() };
        Self::new(p, CoherentLabel::new(0.0, 1.5), vec![SpinState::UP; 4]).expect("valid defaults")
    }

    pub fn steps(&self) -> usize {
        self.spins.len() - 1
    }

    pub fn zeros(&self, step: usize) -> &[C64] {
        &self.zeros[step - 1]
    }

    /// `V_n` and derivatives at `q` for kick `n ≥ 1`.
    pub fn potential(&self, n: usize, q: C64) -> Result<crate::spin::EffectiveJet> {
        eff_potential_kick(q, &self.spins[n - 1], &self.spins[n], &self.params)
    }

    pub fn trajectory(&self, qprime: C64) -> Result<EffectiveTrajectory> {
        let z0 = initial_point(qprime, &self.entrance);
        let mut pts = Vec::with_capacity(self.spins.len());
        let mut tan = Vec::with_capacity(self.spins.len());
        pts.push(z0);
        tan.push(INITIAL_TANGENT);
        let mut action = entrance_terms(z0.q, &self.entrance);
        let (mut q, mut p) = (z0.q, z0.p);
        let (mut dq, mut dp) = INITIAL_TANGENT;
        for n in 1..self.spins.len() {
            let v = self.potential(n, q)?;
            p -= v.d1;
            dp -= v.d2 * dq;
            action += 0.5 * p * p - v.value;
            q += p;
            dq += dp;
            pts.push(ComplexPoint { q, p });
            tan.push((dq, dp));
        }
        Ok(EffectiveTrajectory { points: pts, tangent: tan, core_action: action })
    }

    /// Distance from `q` to the nearest zero of `Z_n`, periodically.
    fn zero_distance(&self, n: usize, q: C64) -> Option<(f64, C64)> {
        let shift = (q.re / (2.0 * PI)).floor() * 2.0 * PI;
        let local = q - shift;
        self.zeros[n - 1]
            .iter()
            .flat_map(|&z| [z - 2.0 * PI, z, z + 2.0 * PI])
            .map(|z| ((z - local).norm(), z + shift))
            .min_by(|a, b| a.0.total_cmp(&b.0))
    }
}

impl BoundaryMap for RotorMap {
    fn entrance(&self) -> CoherentLabel {
        self.entrance
    }

    fn hbar(&self) -> f64 {
        self.params.hbar
    }

    fn propagate(&self, qprime: C64) -> Result<MapSample> {
        let t = self.trajectory(qprime)?;
        let end = t.end();
        let q_out = (end.q - I * end.p) / SQRT_2;
        Ok(MapSample::from_trajectory(q_out, t.jac(), end, t.tangent.last().unwrap().0, t.core_action))
    }

    fn nearest_z_zero(&self, qprime: C64) -> Option<(f64, C64)> {
        // kick points are q̄_0 … q̄_{N-1}; follow the trajectory until it fails
        let z0 = initial_point(qprime, &self.entrance);
        let (mut q, mut p) = (z0.q, z0.p);
        let mut best: Option<(f64, C64)> = None;
        for n in 1..self.spins.len() {
            if let Some(d) = self.zero_distance(n, q) {
                if best.is_none_or(|b| d.0 < b.0) {
                    best = Some(d);
                }
            }
            let Ok(v) = self.potential(n, q) else { break };
            p -= v.d1;
            q += p;
        }
        best
    }

    fn singularity_distance(&self, qprime: C64) -> Option<(f64, C64)> {
        // linearize q̄_n(Q') to map the kick-point distance back to Q'
        let z0 = initial_point(qprime, &self.entrance);
        let (mut q, mut p) = (z0.q, z0.p);
        let (mut dq, mut dp) = INITIAL_TANGENT;
        let mut best: Option<(f64, C64)> = None;
        for n in 1..self.spins.len() {
            if let Some((_, z)) = self.zero_distance(n, q) {
                if dq.norm() > 0.0 {
                    let shift = (z - q) / dq;
                    if best.is_none_or(|b| shift.norm() < b.0) {
                        best = Some((shift.norm(), qprime + shift));
                    }
                }
            }
            let Ok(v) = self.potential(n, q) else { break };
            p -= v.d1;
            dp -= v.d2 * dq;
            q += p;
            dq += dp;
        }
        best
    }
}

/// Semiclassical decomposed kernel with Stokes filtering.
#[derive(Clone, Debug)]
pub struct RotorSemiclassics {
    pub map: RotorMap,
    pub geometry: StokesGeometry,
    pub options: SemiclassicalOptions,
    seeds: Vec<C64>,
}

impl RotorSemiclassics {
    pub fn new(map: RotorMap, options: SemiclassicalOptions) -> Self {
        let h = map.params.hbar;
        let geometry = if options.unfiltered {
            StokesGeometry::default()
        } else {
            let window = Window::centered(map.anchor(), options.caustic_half_width * h.sqrt());
            let cutoff = imf_cutoff(h, options.caustic_cutoff);
            StokesGeometry::build(&map, &window, &options.caustic_search, cutoff, &StokesOptions::new(window))
        };
        let seeds = options.solver.seeds(&map);
        RotorSemiclassics { map, geometry, options, seeds }
    }

    /// Without caustic search or amplitude cutoff: every branch found counts.
    pub fn unfiltered(map: RotorMap) -> Self {
        Self::new(map, SemiclassicalOptions { unfiltered: true, ..Default::default() })
    }

    pub fn kernel(&self, exit: &CoherentLabel) -> Result<(C64, Vec<SaddleBranch>)> {
        let h = self.map.params.hbar;
        let mut bs = solve_boundary(&self.map, exit, &self.seeds, &self.options.solver)?;
        if !self.options.unfiltered {
            filter_branches(&mut bs, &self.geometry, h, self.options.amplitude_cutoff);
        }
        flag_near_v_psc(&mut bs, &self.geometry, h.sqrt());
        Ok((physical_sum(&bs, h), bs))
    }

    pub fn caustic_distance(&self, exit: &CoherentLabel) -> f64 {
        self.geometry
            .caustics
            .iter()
            .chain(&self.geometry.ignored)
            .map(|c| (c.image.q - exit.q).hypot(c.image.p - exit.p))
            .fold(f64::INFINITY, f64::min)
    }
}

/// How the exit boundary terms enter `Im F(Q')` on a landscape.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExitChoice {
    /// A fixed real exit label.
    Fixed(CoherentLabel),
    /// The real label whose `Q''` is the trajectory's own endpoint, so that
    /// every `Q'` is a saddle of some kernel.
    Own,
}

/// `Im F` at `qprime`; `+∞` when a kick lands on a zero of `Z`.
pub fn imf_at<M: BoundaryMap + ?Sized>(map: &M, qprime: C64, exit: ExitChoice) -> f64 {
    match map.propagate(qprime) {
        Ok(s) => {
            let label = match exit {
                ExitChoice::Fixed(l) => l,
                ExitChoice::Own => CoherentLabel::from_exit_q(s.q_out),
            };
            let v = s.action_at(&label).im;
            if v.is_finite() {
                v
            } else {
                f64::INFINITY
            }
        }
        Err(_) => f64::INFINITY,
    }
}

/// Window of half-width `3√ħ` around the real anchor.
pub fn default_domain_window<M: BoundaryMap + ?Sized>(map: &M) -> Window {
    Window::centered(map.anchor(), 3.0 * map.hbar().sqrt())
}

#[derive(Clone, Debug)]
pub struct DomainD {
    pub window: Window,
    pub nx: usize,
    pub ny: usize,
    pub cutoff: f64,
    pub imf: Vec<f64>,
    pub mask: Vec<bool>,
}

impl DomainD {
    pub fn area(&self) -> f64 {
        self.mask.iter().filter(|&&m| m).count() as f64 * self.window.cell_area(self.nx, self.ny)
    }

    pub fn contains(&self, q: C64) -> bool {
        if !self.window.contains(q) || self.nx < 2 || self.ny < 2 {
            return false;
        }
        let fx = (q.re - self.window.re.0) / (self.window.re.1 - self.window.re.0) * (self.nx - 1) as f64;
        let fy = (q.im - self.window.im.0) / (self.window.im.1 - self.window.im.0) * (self.ny - 1) as f64;
        self.mask[fy.round() as usize * self.nx + fx.round() as usize]
    }

    /// `Im F` on the window boundary is above the cutoff everywhere.
    pub fn closed_in_window(&self) -> bool {
        let (nx, ny) = (self.nx, self.ny);
        (0..nx).all(|i| !self.mask[i] && !self.mask[(ny - 1) * nx + i])
            && (0..ny).all(|j| !self.mask[j * nx] && !self.mask[j * nx + nx - 1])
    }

    pub fn to_grid(&self, metadata: Vec<(String, String)>) -> GridField {
        let mut meta = metadata;
        meta.push(("cutoff".into(), format!("{}", self.cutoff)));
        meta.push(("area".into(), format!("{:.16e}", self.area())));
        GridField::real(
            Axis::new("ReQ'", self.window.re.0, self.window.re.1, self.nx),
            Axis::new("ImQ'", self.window.im.0, self.window.im.1, self.ny),
            self.imf.clone(),
            meta,
        )
    }
}

/// `D = {Q' | Im F(Q') ≤ cutoff}` sampled on `window`.
pub fn domain_d<M: BoundaryMap + ?Sized>(
    map: &M,
    exit: ExitChoice,
    window: &Window,
    nx: usize,
    ny: usize,
    cutoff: f64,
) -> DomainD {
    let imf: Vec<f64> = window.seeds(nx, ny).par_iter().map(|&q| imf_at(map, q, exit)).collect();
    let mask = imf.iter().map(|&v| v <= cutoff).collect();
    DomainD { window: *window, nx, ny, cutoff, imf, mask }
}

/// v-PSCs of the geometry (relevant or not) with `Q'` inside `D`.
pub fn v_psc_in_domain<'a>(geometry: &'a StokesGeometry, domain: &DomainD) -> Vec<&'a CausticPoint> {
    geometry
        .caustics
        .iter()
        .chain(&geometry.ignored)
        .filter(|c| c.kind == CausticKind::VPsc && domain.contains(c.qprime))
        .collect()
}

/// Whether `q` lies in an unphysical region bounded by a-PSC Stokes lines.
pub fn in_a_psc_region(geometry: &StokesGeometry, q: C64) -> bool {
    geometry.regions_of(CausticKind::APsc).any(|r| r.contains(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{coherent_overlap, tangent_map_check};
    use crate::rotor::quantum::exact_decomposed_kernel;

    fn free() -> KickParams {
        KickParams { kick: 0.0, spin_kick: 0.0, coupling: 0.0, ..KickParams::default() }
    }

    #[test]
    fn zero_steps_is_overlap() {
        let e = CoherentLabel::new(0.0, 1.5);
        let map = RotorMap::new(KickParams::default(), e, vec![SpinState::UP]).unwrap();
        let sc = RotorSemiclassics::unfiltered(map);
        let x = CoherentLabel::new(0.3, 1.2);
        let (k, bs) = sc.kernel(&x).unwrap();
        assert_eq!(bs.len(), 1);
        assert!((k - coherent_overlap(&x, &e, 0.25)).norm() < 1e-12);
    }

    #[test]
    fn free_particle_is_exact() {
        let e = CoherentLabel::new(0.0, 1.5);
        let map = RotorMap::new(free(), e, vec![SpinState::UP; 2]).unwrap();
        let sc = RotorSemiclassics::unfiltered(map);
        for x in [CoherentLabel::new(1.5, 1.5), CoherentLabel::new(0.9, 1.9)] {
            let (k, _) = sc.kernel(&x).unwrap();
            let want = exact_decomposed_kernel(&e, &x, &[SpinState::UP; 2], &free()).unwrap();
            assert!((k - want).norm() < 1e-9, "{k} {want}");
        }
    }

    #[test]
    fn decoupled_trajectory_is_standard_map() {
        let p = KickParams { spin_kick: 0.0, coupling: 0.0, kick: 0.4, ..KickParams::default() };
        let e = CoherentLabel::new(0.3, 1.5);
        let map = RotorMap::new(p, e, vec![SpinState::UP; 4]).unwrap();
        let t = map.trajectory(e.exit_q()).unwrap();
        let (mut q, mut pp) = (0.3f64, 1.5f64);
        for pt in &t.points[1..] {
            pp += 0.4 * q.sin();
            q += pp;
            assert!((pt.q - q).norm() < 1e-12 && (pt.p - pp).norm() < 1e-12);
        }
    }

    #[test]
    fn spin_coupling_shifts_action_by_constant() {
        let e = CoherentLabel::new(0.3, 1.5);
        let a = RotorMap::new(
            KickParams { spin_kick: 0.0, coupling: 0.0, ..KickParams::default() },
            e,
            vec![SpinState::UP; 4],
        )
        .unwrap();
        let b =
            RotorMap::new(KickParams { spin_kick: 0.0, ..KickParams::default() }, e, vec![SpinState::UP; 4]).unwrap();
        let q = C64::new(0.1, 0.3);
        let (ta, tb) = (a.trajectory(q).unwrap(), b.trajectory(q).unwrap());
        for (x, y) in ta.points.iter().zip(&tb.points) {
            assert!((x.q - y.q).norm() < 1e-12 && (x.p - y.p).norm() < 1e-12);
        }
        // V_eff gains iħ ln cos J per kick
        let shift = -3.0 * I * 0.25 * C64::from(0.75f64.cos()).ln();
        assert!((tb.core_action - ta.core_action - shift).norm() < 1e-12);
    }

    #[test]
    fn map_residuals_and_tangent() {
        let map = RotorMap::three_kicks(0.4);
        for q in [C64::new(-0.9, -0.9), C64::new(-1.1, -1.3), C64::new(-0.5, -1.0)] {
            let t = map.trajectory(q).unwrap();
            assert!(t.map_residual(&map) < 1e-12);
            assert!(tangent_map_check(&map, q).unwrap() < 1e-6);
        }
    }

    #[test]
    fn action_slope_matches_boundary_term() {
        let map = RotorMap::three_kicks(0.4);
        let exit = CoherentLabel::new(4.0, 1.4);
        let q = C64::new(-0.8, -1.1);
        let h = 1e-5;
        let f = |z: C64| map.propagate(z).unwrap().action_at(&exit);
        let fd = (f(q + h) - f(q - h)) / (2.0 * h);
        let s = map.propagate(q).unwrap();
        assert!((fd - s.action_slope_at(&exit)).norm() < 1e-6);
        let g = |z: C64| map.propagate(z).unwrap().analytic_action;
        assert!(((g(q + h) - g(q - h)) / (2.0 * h) - s.analytic_slope).norm() < 1e-6);
    }

    #[test]
    fn empty_domain_for_minus_infinity() {
        let map = RotorMap::three_kicks(0.4);
        let w = default_domain_window(&map);
        let d = domain_d(&map, ExitChoice::Own, &w, 8, 8, f64::NEG_INFINITY);
        assert_eq!(d.area(), 0.0);
    }
}
