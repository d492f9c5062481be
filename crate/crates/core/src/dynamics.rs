//! Complexified trajectories under coherent-state boundary conditions.
//!
//! A trajectory is labelled by its initial `Q'`; the entrance label fixes
//! `P' = (p' - i q')/√2` and the exit label fixes `Q'' = (q'' - i p'')/√2`.
//! Any model that can push `Q'` through to `Q''` together with the tangent
//! map implements [`BoundaryMap`], and [`solve_boundary`] finds the saddle
//! branches of a kernel from it.

use std::f64::consts::SQRT_2;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::plane::{sort_points, Window};

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Complexified phase-space point `(q̄, p̄)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexPoint {
    pub q: C64,
    pub p: C64,
}

/// Canonical pair `Q = (q̄ - i p̄)/√2`, `P = (p̄ - i q̄)/√2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KlauderVars {
    pub big_q: C64,
    pub big_p: C64,
}

impl From<ComplexPoint> for KlauderVars {
    fn from(z: ComplexPoint) -> Self {
        KlauderVars { big_q: (z.q - I * z.p) / SQRT_2, big_p: (z.p - I * z.q) / SQRT_2 }
    }
}

impl From<KlauderVars> for ComplexPoint {
    fn from(k: KlauderVars) -> Self {
        ComplexPoint { q: (k.big_q + I * k.big_p) / SQRT_2, p: (k.big_p + I * k.big_q) / SQRT_2 }
    }
}

/// Real phase-space label of a coherent state.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct CoherentLabel {
    pub q: f64,
    pub p: f64,
}

impl CoherentLabel {
    pub fn new(q: f64, p: f64) -> Self {
        CoherentLabel { q, p }
    }

    /// `P' = (p - i q)/√2`, the value fixed at the entrance.
    pub fn entrance_p(&self) -> C64 {
        C64::new(self.p, -self.q) / SQRT_2
    }

    /// `Q'' = (q - i p)/√2`, the value fixed at the exit. For an entrance
    /// label the same number is the real-trajectory anchor of `Q'`.
    pub fn exit_q(&self) -> C64 {
        C64::new(self.q, -self.p) / SQRT_2
    }

    /// The unique real label whose exit value is `big_q`.
    pub fn from_exit_q(big_q: C64) -> Self {
        CoherentLabel { q: SQRT_2 * big_q.re, p: -SQRT_2 * big_q.im }
    }
}

/// `(q̄₀, p̄₀)` for initial parameter `Q'` under the entrance condition.
pub fn initial_point(qprime: C64, entrance: &CoherentLabel) -> ComplexPoint {
    KlauderVars { big_q: qprime, big_p: entrance.entrance_p() }.into()
}

/// `(∂q̄₀/∂Q', ∂p̄₀/∂Q')`.
pub const INITIAL_TANGENT: (C64, C64) = (C64 { re: 1.0 / SQRT_2, im: 0.0 }, C64 { re: 0.0, im: 1.0 / SQRT_2 });

/// Result of pushing one `Q'` through a map.
#[derive(Clone, Copy, Debug)]
pub struct MapSample {
    pub q_out: C64,
    /// `∂Q''/∂Q'`
    pub jac: C64,
    pub end: ComplexPoint,
    /// `∂q̄_N/∂Q'`
    pub end_dq: C64,
    /// Entrance boundary terms plus the bulk action; no exit terms.
    pub core_action: C64,
    /// Action with the exit label taken from the trajectory's own endpoint,
    /// minus the label-only term [`exit_label_term`]. Analytic in `Q'`; two
    /// branches ending at the same `Q''` differ in it exactly as in the full
    /// action.
    pub analytic_action: C64,
    /// `d/dQ'` of `analytic_action`.
    pub analytic_slope: C64,
}

impl MapSample {
    /// Assemble a sample from a trajectory whose core action satisfies
    /// `d core/dQ' = p̄_N ∂q̄_N/∂Q'` (true for any map built from a
    /// stationary discrete action), which gives `dG/dQ' = -i√2 jac q̄_N`.
    pub fn from_trajectory(q_out: C64, jac: C64, end: ComplexPoint, end_dq: C64, core_action: C64) -> Self {
        let x = end.q;
        MapSample {
            q_out,
            jac,
            end,
            end_dq,
            core_action,
            analytic_action: core_action + 0.5 * I * x * x - I * SQRT_2 * q_out * x,
            analytic_slope: -I * SQRT_2 * jac * x,
        }
    }

    /// Action with a fixed exit label.
    pub fn action_at(&self, exit: &CoherentLabel) -> C64 {
        let x = self.end.q;
        let dx = x - exit.q;
        self.core_action + 0.5 * I * dx * dx - exit.p * (x - 0.5 * exit.q)
    }

    /// `d/dQ'` of [`MapSample::action_at`]: only the exit boundary term
    /// survives, `i√2 (Q''(Q') - Q''_exit) ∂q̄_N/∂Q'`.
    pub fn action_slope_at(&self, exit: &CoherentLabel) -> C64 {
        I * SQRT_2 * (self.q_out - exit.exit_q()) * self.end_dq
    }
}

/// Label-only part of the exit boundary terms.
pub fn exit_label_term(exit: &CoherentLabel) -> C64 {
    C64::new(exit.p * exit.q / 2.0, exit.q * exit.q / 2.0)
}

/// A symplectic map from `Q'` to the trajectory endpoint.
pub trait BoundaryMap: Sync {
    fn entrance(&self) -> CoherentLabel;

    fn hbar(&self) -> f64;

    fn propagate(&self, qprime: C64) -> Result<MapSample>;

    /// Distance from the trajectory's kick points to the closest zero of the
    /// corresponding influence functional, with that zero. `None` for maps
    /// without an internal degree of freedom.
    fn nearest_z_zero(&self, _qprime: C64) -> Option<(f64, C64)> {
        None
    }

    /// Estimated distance in the `Q'` plane to the nearest logarithmic
    /// singularity of the action, with its estimated location.
    fn singularity_distance(&self, qprime: C64) -> Option<(f64, C64)> {
        self.nearest_z_zero(qprime).map(|(d, _)| (d, qprime))
    }

    /// Position of `q` zeros in the `Q'` plane (log singularities of the
    /// action) near `window`; empty for maps without them.
    fn singularities(&self, _window: &Window) -> Vec<C64> {
        Vec::new()
    }

    /// `Q'` of the real trajectory started at the entrance label.
    fn anchor(&self) -> C64 {
        self.entrance().exit_q()
    }
}

/// One stationary-phase contribution `E exp(iF/ħ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SaddleBranch {
    pub qprime: C64,
    pub action: C64,
    pub amplitude: C64,
    pub jac: C64,
    pub physical: bool,
    pub near_v_psc: bool,
    pub caustic_proximity: bool,
}

impl SaddleBranch {
    pub fn contribution(&self, hbar: f64) -> C64 {
        self.amplitude * (I * self.action / hbar).exp()
    }
}

/// Sum of the contributions of the branches flagged physical.
pub fn physical_sum(branches: &[SaddleBranch], hbar: f64) -> C64 {
    branches.iter().filter(|b| b.physical).map(|b| b.contribution(hbar)).sum()
}

#[derive(Clone, Copy, Debug)]
pub struct SolverOptions {
    pub seeds_per_axis: usize,
    /// Seed window half-width in units of `√ħ`.
    pub seed_half_width: f64,
    pub residual_tol: f64,
    pub dedup_radius: f64,
    pub max_iter: usize,
    pub max_halvings: usize,
    pub caustic_jac: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            seeds_per_axis: 24,
            seed_half_width: 4.0,
            residual_tol: 1e-11,
            dedup_radius: 1e-7,
            max_iter: 60,
            max_halvings: 8,
            caustic_jac: 1e-8,
        }
    }
}

impl SolverOptions {
    pub fn seed_window<M: BoundaryMap + ?Sized>(&self, map: &M) -> Window {
        Window::centered(map.anchor(), self.seed_half_width * map.hbar().sqrt())
    }

    pub fn seeds<M: BoundaryMap + ?Sized>(&self, map: &M) -> Vec<C64> {
        self.seed_window(map).seeds(self.seeds_per_axis, self.seeds_per_axis)
    }
}

/// Damped Newton on `Q''(Q') = target` from one seed.
pub fn newton_boundary<M: BoundaryMap + ?Sized>(map: &M, target: C64, seed: C64, opts: &SolverOptions) -> Option<C64> {
    let mut q = seed;
    let mut s = map.propagate(q).ok()?;
    let mut res = (s.q_out - target).norm();
    for _ in 0..opts.max_iter {
        if res < opts.residual_tol * 1e-2 {
            break;
        }
        if s.jac.norm() == 0.0 || !s.jac.is_finite() {
            return None;
        }
        let step = (s.q_out - target) / s.jac;
        let mut lambda = 1.0;
        let mut accepted = None;
        for _ in 0..=opts.max_halvings {
            let trial = q - lambda * step;
            if let Ok(ts) = map.propagate(trial) {
                let tres = (ts.q_out - target).norm();
                if tres.is_finite() && tres < res {
                    accepted = Some((trial, ts, tres));
                    break;
                }
            }
            lambda *= 0.5;
        }
        let Some((nq, ns, nres)) = accepted else { break };
        let moved = (nq - q).norm();
        q = nq;
        s = ns;
        res = nres;
        if q.norm() > 1e3 {
            return None;
        }
        if moved < 1e-15 * (1.0 + q.norm()) {
            break;
        }
    }
    (res < opts.residual_tol).then_some(q)
}

/// Branch of `jac^{-1/2}` at `qprime`, transported continuously along the
/// straight segment from the map's anchor where the principal branch is used.
pub fn transported_amplitude<M: BoundaryMap + ?Sized>(map: &M, qprime: C64) -> Result<C64> {
    let start = map.anchor();
    let eval = |z: C64| -> Result<C64> {
        match map.propagate(z) {
            Ok(s) => Ok(s.jac),
            // step around an isolated singularity sitting on the path
            Err(Error::ZeroOfInfluenceFunctional { .. }) => map.propagate(z + C64::new(0.0, 1e-6)).map(|s| s.jac),
            Err(e) => Err(e),
        }
    };
    let mut prev_jac = eval(start)?;
    let mut amp = 1.0 / prev_jac.sqrt();
    let mut t: f64 = 0.0;
    let mut dt: f64 = 1.0 / 64.0;
    while t < 1.0 {
        let tn = (t + dt).min(1.0);
        let jac = eval(start + (qprime - start) * tn)?;
        // refine when the phase of jac moves too far in one step
        let turn = (jac / prev_jac).arg().abs();
        if turn > 0.5 && dt > 1e-9 {
            dt *= 0.5;
            continue;
        }
        let cand = 1.0 / jac.sqrt();
        amp = if (cand - amp).norm() <= (cand + amp).norm() { cand } else { -cand };
        prev_jac = jac;
        t = tn;
        if turn < 0.1 {
            dt = (dt * 2.0).min(1.0 / 16.0);
        }
    }
    Ok(amp)
}

/// Boundary roots `Q''(Q') = exit.exit_q()` from `seeds`, packaged as
/// branches. Sorted by `Re Q'` then `Im Q'`. All branches start physical.
pub fn solve_boundary<M: BoundaryMap + ?Sized>(
    map: &M,
    exit: &CoherentLabel,
    seeds: &[C64],
    opts: &SolverOptions,
) -> Result<Vec<SaddleBranch>> {
    let target = exit.exit_q();
    let mut seeds = seeds.to_vec();
    // linear prediction from the anchor reaches exits outside the seed window
    if let Ok(s) = map.propagate(map.anchor()) {
        let guess = map.anchor() + (target - s.q_out) / s.jac;
        if guess.is_finite() {
            seeds.push(guess);
        }
    }
    let mut roots: Vec<C64> = seeds.par_iter().filter_map(|&s| newton_boundary(map, target, s, opts)).collect();
    sort_points(&mut roots);
    let mut unique: Vec<C64> = Vec::new();
    for r in roots {
        if unique.iter().all(|u| (u - r).norm() > opts.dedup_radius) {
            unique.push(r);
        }
    }
    if unique.is_empty() {
        return Err(Error::NoRoots { seeds: seeds.len() });
    }
    unique.iter().map(|&r| branch_at(map, r, exit, opts)).collect()
}

/// Package a converged root as a branch.
pub fn branch_at<M: BoundaryMap + ?Sized>(
    map: &M,
    root: C64,
    exit: &CoherentLabel,
    opts: &SolverOptions,
) -> Result<SaddleBranch> {
    let s = map.propagate(root)?;
    let amplitude = transported_amplitude(map, root)?;
    Ok(SaddleBranch {
        qprime: root,
        action: s.action_at(exit),
        amplitude,
        jac: s.jac,
        physical: true,
        near_v_psc: false,
        caustic_proximity: s.jac.norm() < opts.caustic_jac,
    })
}

/// Relative error of the analytic tangent map against a central difference
/// of `Q''(Q')` with step `1e-6 (1 + |Q'|)`.
pub fn tangent_map_check<M: BoundaryMap + ?Sized>(map: &M, qprime: C64) -> Result<f64> {
    let h = 1e-6 * (1.0 + qprime.norm());
    let s = map.propagate(qprime)?;
    let fd = (map.propagate(qprime + h)?.q_out - map.propagate(qprime - h)?.q_out) / (2.0 * h);
    Ok((fd - s.jac).norm() / s.jac.norm().max(1e-300))
}

/// The zero-step map: `Q'' = Q'`.
#[derive(Clone, Copy, Debug)]
pub struct IdentityMap {
    pub entrance: CoherentLabel,
    pub hbar: f64,
}

impl BoundaryMap for IdentityMap {
    fn entrance(&self) -> CoherentLabel {
        self.entrance
    }

    fn hbar(&self) -> f64 {
        self.hbar
    }

    fn propagate(&self, qprime: C64) -> Result<MapSample> {
        let z = initial_point(qprime, &self.entrance);
        Ok(MapSample::from_trajectory(
            qprime,
            C64::new(1.0, 0.0),
            z,
            INITIAL_TANGENT.0,
            entrance_terms(z.q, &self.entrance),
        ))
    }
}

/// `(i/2)(q̄₀ - q')² + p'(q̄₀ - q'/2)`
pub fn entrance_terms(x0: C64, entrance: &CoherentLabel) -> C64 {
    let d = x0 - entrance.q;
    0.5 * I * d * d + entrance.p * (x0 - 0.5 * entrance.q)
}

/// `⟨q''p''|q'p'⟩` for `ψ_qp(x) = (πħ)^{-1/4} exp[-(x-q)²/(2ħ) + i p (x - q/2)/ħ]`.
pub fn coherent_overlap(exit: &CoherentLabel, entrance: &CoherentLabel, hbar: f64) -> C64 {
    let dq = exit.q - entrance.q;
    let dp = exit.p - entrance.p;
    let theta = (entrance.p * exit.q - exit.p * entrance.q) / (2.0 * hbar);
    C64::new(-(dq * dq + dp * dp) / (4.0 * hbar), theta).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[derive(Clone, Copy)]
    struct Linear {
        a: C64,
    }

    impl BoundaryMap for Linear {
        fn entrance(&self) -> CoherentLabel {
            CoherentLabel::default()
        }
        fn hbar(&self) -> f64 {
            0.25
        }
        fn propagate(&self, qprime: C64) -> Result<MapSample> {
            let z = initial_point(qprime, &self.entrance());
            Ok(MapSample::from_trajectory(self.a * qprime, self.a, z, INITIAL_TANGENT.0, C64::new(0.0, 0.0)))
        }
    }

    #[test]
    fn anchor_reproduces_real_label() {
        let e = CoherentLabel::new(0.3, -1.2);
        let z = initial_point(e.exit_q(), &e);
        assert!((z.q - e.q).norm() < 1e-15 && (z.p - e.p).norm() < 1e-15);
    }

    #[test]
    fn initial_point_substitution() {
        let z = initial_point(C64::new(1.0, 0.0), &CoherentLabel::default());
        assert!((z.q - C64::new(1.0 / SQRT_2, 0.0)).norm() < 1e-16);
        assert!((z.p - C64::new(0.0, 1.0 / SQRT_2)).norm() < 1e-16);
    }

    proptest! {
        #[test]
        fn klauder_round_trip(qr in -5.0..5.0f64, qi in -5.0..5.0f64, lq in -3.0..3.0f64, lp in -3.0..3.0f64) {
            let e = CoherentLabel::new(lq, lp);
            let qp = C64::new(qr, qi);
            let k = KlauderVars::from(initial_point(qp, &e));
            prop_assert!((k.big_q - qp).norm() < 1e-15 * (1.0 + qp.norm()) * 4.0);
            prop_assert!((k.big_p - e.entrance_p()).norm() < 1e-15 * 8.0);
        }

        #[test]
        fn exit_label_bijection(qr in -5.0..5.0f64, qi in -5.0..5.0f64) {
            let z = C64::new(qr, qi);
            prop_assert!((CoherentLabel::from_exit_q(z).exit_q() - z).norm() < 1e-15 * 8.0);
        }
    }

    #[test]
    fn identity_map_single_unit_root() {
        let e = CoherentLabel::new(0.4, -0.7);
        let map = IdentityMap { entrance: e, hbar: 0.25 };
        let opts = SolverOptions::default();
        let b = solve_boundary(&map, &e, &opts.seeds(&map), &opts).unwrap();
        assert_eq!(b.len(), 1);
        assert!((b[0].qprime - e.exit_q()).norm() < 1e-12);
        assert!((b[0].jac - 1.0).norm() < 1e-15);
        assert!((b[0].amplitude - 1.0).norm() < 1e-15);
        // zero-time action reproduces the coherent overlap
        let k = b[0].contribution(0.25);
        assert!((k - coherent_overlap(&e, &e, 0.25)).norm() < 1e-12);
    }

    #[test]
    fn linear_map_tangent_is_exact() {
        let m = Linear { a: C64::new(1.3, -0.4) };
        assert!(tangent_map_check(&m, C64::new(0.2, 0.9)).unwrap() < 1e-9);
    }

    #[test]
    fn no_roots_is_an_error() {
        let m = Linear { a: C64::new(0.0, 0.0) };
        let opts = SolverOptions { seeds_per_axis: 3, ..SolverOptions::default() };
        let err = solve_boundary(&m, &CoherentLabel::new(1.0, 1.0), &opts.seeds(&m), &opts).unwrap_err();
        assert!(matches!(err, Error::NoRoots { seeds: 9 }));
    }

    #[test]
    fn overlap_closed_form_is_hermitian() {
        let a = CoherentLabel::new(0.3, 1.1);
        let b = CoherentLabel::new(-0.8, 0.2);
        let ab = coherent_overlap(&a, &b, 0.25);
        let ba = coherent_overlap(&b, &a, 0.25);
        assert!((ab - ba.conj()).norm() < 1e-15);
    }
}
