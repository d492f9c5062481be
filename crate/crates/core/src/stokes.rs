//! Phase-space caustics, Stokes lines and the unphysical-branch rule.
//!
//! Caustics are zeros of `J(Q') = ∂Q''/∂Q'`. Near a fold the two branches
//! ending at the same `Q''` sit at `Q'_c ± u` and their action difference
//! `ΔF` grows like `u³`. Stokes lines are the curves `Re ΔF = 0` on which the
//! branch at `Q'` is the subdominant one (`Im ΔF > 0`); three leave every
//! fold. The line pointing back toward the real-trajectory anchor carries no
//! switching, and the other two bound the region of `Q'` whose branches are
//! excluded from the kernel.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::dynamics::{BoundaryMap, CoherentLabel, MapSample, SaddleBranch};
use crate::error::{Error, Result};
use crate::plane::{sort_points, Window};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CausticKind {
    /// Folding of the nonlinear dynamics.
    APsc,
    /// Created by a zero of the influence functional.
    VPsc,
}

impl CausticKind {
    pub fn tag(&self) -> &'static str {
        match self {
            CausticKind::APsc => "a-PSC",
            CausticKind::VPsc => "v-PSC",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CausticPoint {
    pub qprime: C64,
    pub kind: CausticKind,
    /// The nearby zero of `Z` (in `q`) for a v-PSC.
    pub source_zero: Option<C64>,
    /// Exit label at which the two branches coalesce.
    pub image: CoherentLabel,
    /// Action at the caustic with its own exit label.
    pub action: C64,
    /// `Q'` of the two coalescing branches at a small offset from the caustic.
    pub branch_pair: [C64; 2],
    pub jac_residual: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct CausticSearch {
    pub seeds_per_axis: usize,
    pub fd_step: f64,
    pub max_iter: usize,
    pub accept: f64,
    pub dedup_radius: f64,
    /// v-PSC classification radius in units of `√ħ`.
    pub v_radius: f64,
}

impl Default for CausticSearch {
    fn default() -> Self {
        CausticSearch {
            seeds_per_axis: 40,
            fd_step: 1e-6,
            max_iter: 60,
            accept: 1e-8,
            dedup_radius: 1e-6,
            v_radius: 1.0,
        }
    }
}

fn jac_at<M: BoundaryMap + ?Sized>(map: &M, q: C64) -> Option<C64> {
    map.propagate(q).ok().map(|s| s.jac).filter(|j| j.is_finite())
}

fn polish_caustic<M: BoundaryMap + ?Sized>(map: &M, seed: C64, opts: &CausticSearch) -> Option<C64> {
    let mut q = seed;
    let h = opts.fd_step;
    for _ in 0..opts.max_iter {
        let j = jac_at(map, q)?;
        if j.norm() < opts.accept * 1e-4 {
            break;
        }
        let dj = (jac_at(map, q + h)? - jac_at(map, q - h)?) / (2.0 * h);
        if dj.norm() == 0.0 || !dj.is_finite() {
            return None;
        }
        let step = j / dj;
        q -= step;
        if !q.is_finite() || q.norm() > 1e3 {
            return None;
        }
        if step.norm() < 1e-14 * (1.0 + q.norm()) {
            break;
        }
    }
    (jac_at(map, q)?.norm() < opts.accept).then_some(q)
}

/// Zeros of the tangent map inside `window`, classified a-PSC / v-PSC.
pub fn find_caustics<M: BoundaryMap + ?Sized>(map: &M, window: &Window, opts: &CausticSearch) -> Vec<CausticPoint> {
    let seeds = window.seeds(opts.seeds_per_axis, opts.seeds_per_axis);
    let mut roots: Vec<C64> =
        seeds.par_iter().filter_map(|&s| polish_caustic(map, s, opts)).filter(|q| window.contains(*q)).collect();
    sort_points(&mut roots);
    let mut unique: Vec<C64> = Vec::new();
    for r in roots {
        if unique.iter().all(|u| (u - r).norm() > opts.dedup_radius) {
            unique.push(r);
        }
    }
    unique.into_iter().filter_map(|q| describe_caustic(map, q, opts.v_radius * map.hbar().sqrt())).collect()
}

/// Classify a polished caustic with v-PSC radius `r_v` (in `q` units).
pub fn describe_caustic<M: BoundaryMap + ?Sized>(map: &M, q: C64, r_v: f64) -> Option<CausticPoint> {
    let s = map.propagate(q).ok()?;
    let image = CoherentLabel::from_exit_q(s.q_out);
    let (kind, source_zero) = match map.nearest_z_zero(q) {
        Some((d, z)) if d < r_v => (CausticKind::VPsc, Some(z)),
        _ => (CausticKind::APsc, None),
    };
    let offset = 1e-3 * map.hbar().sqrt();
    let partner = track_partner(map, q + offset, s.q_out, q - offset).unwrap_or(q - offset);
    Some(CausticPoint {
        qprime: q,
        kind,
        source_zero,
        image,
        action: s.action_at(&image),
        branch_pair: [q + offset, partner],
        jac_residual: s.jac.norm(),
    })
}

/// The other root `P` of `Q''(P) = Q''(q)` near `guess`.
fn track_partner<M: BoundaryMap + ?Sized>(map: &M, q: C64, _unused: C64, guess: C64) -> Option<C64> {
    let target = map.propagate(q).ok()?.q_out;
    partner_newton(map, target, guess).map(|(p, _)| p)
}

fn partner_newton<M: BoundaryMap + ?Sized>(map: &M, target: C64, guess: C64) -> Option<(C64, MapSample)> {
    let mut p = guess;
    for _ in 0..60 {
        let s = map.propagate(p).ok()?;
        let r = s.q_out - target;
        if r.norm() < 1e-13 * (1.0 + target.norm()) {
            return Some((p, s));
        }
        if s.jac.norm() == 0.0 {
            return None;
        }
        let step = r / s.jac;
        p -= step;
        if !p.is_finite() {
            return None;
        }
        if step.norm() < 1e-15 {
            break;
        }
    }
    let s = map.propagate(p).ok()?;
    ((s.q_out - target).norm() < 1e-10).then_some((p, s))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    ArcLength,
    Window,
    Singularity,
    Lost,
}

#[derive(Clone, Debug)]
pub struct StokesLine {
    pub caustic: CausticPoint,
    /// Vertices in the `Q'` plane, starting at the caustic.
    pub points: Vec<C64>,
    /// The same vertices mapped to the `Q''` plane.
    pub exit_points: Vec<C64>,
    /// Initial direction (radians).
    pub direction: f64,
    /// `Re ΔF` at each vertex after the caustic (continuous branch).
    pub re_delta: Vec<f64>,
    /// `Im ΔF` at each vertex after the caustic.
    pub im_delta: Vec<f64>,
    pub termination: Termination,
    /// `Q'` of the singularity the line ran into, if any.
    pub end_singularity: Option<C64>,
    /// Whether this line bounds the unphysical region.
    pub active: bool,
}

impl StokesLine {
    pub fn arc_length(&self) -> f64 {
        self.points.windows(2).map(|w| (w[1] - w[0]).norm()).sum()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct StokesOptions {
    /// March step in units of `√ħ`.
    pub step: f64,
    pub corrector_tol: f64,
    pub arc_length_limit: f64,
    /// Distance (in `q`) from a zero of `Z` at which a line is stopped.
    pub singular_radius: f64,
    pub window: Window,
}

impl StokesOptions {
    pub fn new(window: Window) -> Self {
        StokesOptions { step: 0.02, corrector_tol: 1e-8, arc_length_limit: 6.0, singular_radius: 5e-3, window }
    }
}

/// Action difference between the branch at `q` and its partner, with
/// `Re ΔF` kept on the branch nearest `prev`.
struct PairState {
    q: C64,
    q_out: C64,
    partner: C64,
    delta: C64,
    slope: C64,
    /// `dP/dQ'`
    ratio: C64,
}

fn pair_state<M: BoundaryMap + ?Sized>(
    map: &M,
    q: C64,
    partner_guess: C64,
    prev_delta: Option<C64>,
) -> Option<PairState> {
    let s = map.propagate(q).ok()?;
    let (partner, ps) = partner_newton(map, s.q_out, partner_guess)?;
    if (partner - q).norm() < 1e-9 {
        return None;
    }
    let mut delta = s.analytic_action - ps.analytic_action;
    if let Some(prev) = prev_delta {
        let period = 2.0 * PI * map.hbar();
        let k = ((prev.re - delta.re) / period).round();
        delta.re += k * period;
    }
    // dΔG/dQ' with dP/dQ' = J(Q')/J(P)
    let ratio = s.jac / ps.jac;
    let slope = s.analytic_slope - ps.analytic_slope * ratio;
    Some(PairState { q, q_out: s.q_out, partner, delta, slope, ratio })
}

fn wrap_angle(a: f64) -> f64 {
    let mut x = a % (2.0 * PI);
    if x > PI {
        x -= 2.0 * PI;
    }
    if x <= -PI {
        x += 2.0 * PI;
    }
    x
}

/// Directions of the three subdominant Stokes rays from the local cubic
/// normal form `ΔF ≈ c u³`.
pub fn fold_directions<M: BoundaryMap + ?Sized>(map: &M, caustic: &CausticPoint) -> Option<[f64; 3]> {
    let r = (0.02 * map.hbar().sqrt()).min(0.05 * fold_scale(map, caustic.qprime)?);
    let mut acc = C64::new(0.0, 0.0);
    let n = 8;
    for k in 0..n {
        let u = C64::from_polar(r, 2.0 * PI * k as f64 / n as f64);
        let st = pair_state(map, caustic.qprime + u, caustic.qprime - u, Some(C64::new(0.0, 0.0)))?;
        acc += st.delta / (u * u * u);
    }
    let c = acc / n as f64;
    let base = (PI / 2.0 - c.arg()) / 3.0;
    Some([base, base + 2.0 * PI / 3.0, base + 4.0 * PI / 3.0].map(wrap_angle))
}

/// Radius `|J'/J''|` over which the fold normal form holds.
pub fn fold_scale<M: BoundaryMap + ?Sized>(map: &M, q: C64) -> Option<f64> {
    let h = 1e-4 * map.hbar().sqrt();
    let j = |z: C64| jac_at(map, z);
    let (jp, j0, jm) = (j(q + h)?, j(q)?, j(q - h)?);
    let d1 = (jp - jm) / (2.0 * h);
    let d2 = (jp - 2.0 * j0 + jm) / (h * h);
    let s = d1.norm() / d2.norm();
    Some(if s.is_finite() { s } else { f64::MAX })
}

/// Trace the three Stokes lines of `caustic`; mark as active the two that
/// do not point toward `map.anchor()`.
pub fn trace_stokes<M: BoundaryMap + ?Sized>(
    map: &M,
    caustic: &CausticPoint,
    opts: &StokesOptions,
) -> Result<Vec<StokesLine>> {
    let dirs = fold_directions(map, caustic).ok_or(Error::BranchTrackingLost { at: caustic.qprime })?;
    let mut lines: Vec<StokesLine> = dirs.iter().map(|&d| march(map, caustic, d, opts)).collect();
    let toward_anchor = (map.anchor() - caustic.qprime).arg();
    let inactive = (0..3)
        .min_by(|&a, &b| {
            let da = wrap_angle(lines[a].direction - toward_anchor).abs();
            let db = wrap_angle(lines[b].direction - toward_anchor).abs();
            da.total_cmp(&db)
        })
        .unwrap();
    for (i, l) in lines.iter_mut().enumerate() {
        l.active = i != inactive;
    }
    Ok(lines)
}

fn march<M: BoundaryMap + ?Sized>(map: &M, caustic: &CausticPoint, direction: f64, opts: &StokesOptions) -> StokesLine {
    let h = opts.step * map.hbar().sqrt();
    let mut line = StokesLine {
        caustic: *caustic,
        points: vec![caustic.qprime],
        exit_points: vec![caustic.image.exit_q()],
        direction,
        re_delta: Vec::new(),
        im_delta: Vec::new(),
        termination: Termination::ArcLength,
        end_singularity: None,
        active: false,
    };
    let dir0 = C64::from_polar(1.0, direction);
    let scale = fold_scale(map, caustic.qprime).unwrap_or(0.0);
    // first vertex where the pair is separated but the fold form still holds
    let r0 = (3.0 * h).min(0.2 * scale);
    let q0 = caustic.qprime + r0 * dir0;
    let zero = Some(C64::new(0.0, 0.0));
    let Some(mut st) = pair_state(map, q0, caustic.qprime - r0 * dir0, zero).and_then(|s| correct(map, s, opts)) else {
        line.termination = Termination::Lost;
        return line;
    };
    line.points.push(st.q);
    line.exit_points.push(st.q_out);
    line.re_delta.push(st.delta.re);
    line.im_delta.push(st.delta.im);
    let mut heading = dir0;
    let mut arc = r0;
    let mut step = h.min(0.5 * r0);
    while arc < opts.arc_length_limit {
        let mut tangent = C64::new(0.0, 1.0) * st.slope.conj();
        if tangent.norm() == 0.0 {
            line.termination = Termination::Lost;
            break;
        }
        tangent /= tangent.norm();
        if (tangent * heading.conj()).re < 0.0 {
            tangent = -tangent;
        }
        let next = loop {
            let q_pred = st.q + step * tangent;
            let p_guess = st.partner + st.ratio * (q_pred - st.q);
            let candidate = pair_state(map, q_pred, p_guess, Some(st.delta)).and_then(|s| correct(map, s, opts));
            let reach = (10.0 * st.ratio.norm()).max(10.0) * step;
            match candidate {
                Some(c) if (c.partner - p_guess).norm() < reach && (c.q - st.q).norm() < 3.0 * step => break Some(c),
                _ if step > h / 4096.0 => step *= 0.5,
                _ => break None,
            }
        };
        let Some(next) = next else {
            line.termination = Termination::Lost;
            let blocked = map.propagate(st.q + step * tangent).map_or(true, |s| !s.jac.is_finite());
            let log_scale = map.hbar() / st.slope.norm();
            if blocked || log_scale < opts.singular_radius {
                line.termination = Termination::Singularity;
                line.end_singularity = Some(st.q);
            }
            if let Some(z) = singular_end(map, &st, 5.0 * opts.singular_radius) {
                line.termination = Termination::Singularity;
                line.end_singularity = Some(z);
            }
            break;
        };
        step = (1.5 * step).min(h);
        heading = (next.q - st.q) / (next.q - st.q).norm();
        arc += (next.q - st.q).norm();
        st = next;
        line.points.push(st.q);
        line.exit_points.push(st.q_out);
        line.re_delta.push(st.delta.re);
        line.im_delta.push(st.delta.im);
        if !opts.window.contains(st.q) {
            line.termination = Termination::Window;
            break;
        }
        if let Some(z) = singular_end(map, &st, opts.singular_radius) {
            line.termination = Termination::Singularity;
            line.end_singularity = Some(z);
            break;
        }
    }
    line
}

/// Singularity reached by either member of the pair, located in the `Q'` plane.
fn singular_end<M: BoundaryMap + ?Sized>(map: &M, st: &PairState, radius: f64) -> Option<C64> {
    if let Some((d, z)) = map.singularity_distance(st.q) {
        if d < radius {
            return Some(z);
        }
    }
    let (d, _) = map.singularity_distance(st.partner)?;
    let d = d / st.ratio.norm().max(1e-300);
    (d < radius).then_some(st.q)
}

/// Newton on `Re ΔF = 0` across the line.
fn correct<M: BoundaryMap + ?Sized>(map: &M, mut st: PairState, opts: &StokesOptions) -> Option<PairState> {
    for _ in 0..30 {
        if st.delta.re.abs() < opts.corrector_tol {
            return Some(st);
        }
        let g = st.slope;
        if g.norm() == 0.0 {
            return None;
        }
        let dq = -st.delta.re * g.conj() / g.norm_sqr();
        let q = st.q + dq;
        let guess = st.partner + st.ratio * dq;
        st = pair_state(map, q, guess, Some(st.delta))?;
    }
    (st.delta.re.abs() < opts.corrector_tol).then_some(st)
}

/// Closed polygon in the `Q'` plane whose branches are unphysical.
#[derive(Clone, Debug)]
pub struct StokesRegion {
    pub caustic: CausticPoint,
    pub boundary: Vec<C64>,
}

impl StokesRegion {
    /// Bounded by the two active lines of a caustic; lines that do not meet
    /// are closed far out along the wedge between them.
    pub fn from_lines(lines: &[StokesLine]) -> Option<StokesRegion> {
        let active: Vec<&StokesLine> = lines.iter().filter(|l| l.active).collect();
        let inactive = lines.iter().find(|l| !l.active)?;
        if active.len() != 2 || active.iter().any(|l| l.points.len() < 2) {
            return None;
        }
        let (a, b) = (active[0], active[1]);
        let c = a.caustic.qprime;
        let mut boundary: Vec<C64> = a.points.clone();
        let a_end = *a.points.last().unwrap();
        let b_end = *b.points.last().unwrap();
        let joined = match (a.end_singularity, b.end_singularity) {
            (Some(x), Some(y)) => (x - y).norm() < 0.1,
            _ => false,
        };
        if !joined {
            let far = 10.0 * (a.arc_length() + b.arc_length() + 1.0);
            let out = |l: &StokesLine| {
                let n = l.points.len();
                let d = l.points[n - 1] - l.points[n - 2];
                l.points[n - 1] + far * d / d.norm()
            };
            // bisector pointing away from the inactive line
            let bis = -C64::from_polar(1.0, inactive.direction);
            boundary.push(out(a));
            boundary.push(c + 2.0 * far * bis);
            boundary.push(out(b));
            let _ = (a_end, b_end);
        }
        boundary.extend(b.points.iter().rev());
        Some(StokesRegion { caustic: a.caustic, boundary })
    }

    /// Even-odd ray casting.
    pub fn contains(&self, z: C64) -> bool {
        let pts = &self.boundary;
        let n = pts.len();
        if n < 3 {
            return false;
        }
        let mut inside = false;
        let mut j = n - 1;
        for i in 0..n {
            let (a, b) = (pts[i], pts[j]);
            if (a.im > z.im) != (b.im > z.im) {
                let x = a.re + (z.im - a.im) * (b.re - a.re) / (b.im - a.im);
                if z.re < x {
                    inside = !inside;
                }
            }
            j = i;
        }
        inside
    }
}

/// Caustics, their Stokes lines and the unphysical regions, for a fixed
/// entrance label. Independent of the exit label.
#[derive(Clone, Debug, Default)]
pub struct StokesGeometry {
    pub caustics: Vec<CausticPoint>,
    pub lines: Vec<StokesLine>,
    pub regions: Vec<StokesRegion>,
    /// Caustics with `Im F` above the relevance cutoff; no lines traced.
    pub ignored: Vec<CausticPoint>,
}

impl StokesGeometry {
    /// Find caustics in `window`, keep those with `Im F ≤ cutoff`, and trace
    /// their Stokes lines.
    pub fn build<M: BoundaryMap + ?Sized>(
        map: &M,
        window: &Window,
        search: &CausticSearch,
        cutoff: f64,
        stokes: &StokesOptions,
    ) -> Self {
        Self::from_caustics(map, find_caustics(map, window, search), |c| c.action.im <= cutoff, stokes)
    }

    /// Trace the Stokes lines of the caustics selected by `keep`.
    pub fn from_caustics<M, F>(map: &M, all: Vec<CausticPoint>, keep: F, stokes: &StokesOptions) -> Self
    where
        M: BoundaryMap + ?Sized,
        F: Fn(&CausticPoint) -> bool,
    {
        let (keep, ignored): (Vec<_>, Vec<_>) = all.into_iter().partition(|c| keep(c));
        let traced: Vec<Vec<StokesLine>> =
            keep.par_iter().map(|c| trace_stokes(map, c, stokes).unwrap_or_default()).collect();
        let regions = traced.iter().filter_map(|ls| StokesRegion::from_lines(ls)).collect();
        StokesGeometry { caustics: keep, lines: traced.into_iter().flatten().collect(), regions, ignored }
    }

    pub fn in_unphysical_region(&self, qprime: C64) -> bool {
        self.regions.iter().any(|r| r.contains(qprime))
    }

    /// Regions of a given caustic kind.
    pub fn regions_of(&self, kind: CausticKind) -> impl Iterator<Item = &StokesRegion> {
        self.regions.iter().filter(move |r| r.caustic.kind == kind)
    }
}

/// Mark branches whose `Q'` lies in an unphysical region, or whose
/// amplitude `exp(-Im F/ħ)` falls below `amp_cutoff`, as unphysical.
pub fn filter_branches(branches: &mut [SaddleBranch], geometry: &StokesGeometry, hbar: f64, amp_cutoff: f64) {
    let max_im = hbar * (1.0 / amp_cutoff).ln();
    for b in branches.iter_mut() {
        if b.action.im > max_im || geometry.in_unphysical_region(b.qprime) {
            b.physical = false;
        }
    }
}

/// Flag branches whose trajectories pass near a v-PSC of the geometry.
pub fn flag_near_v_psc(branches: &mut [SaddleBranch], geometry: &StokesGeometry, radius: f64) {
    for b in branches.iter_mut() {
        b.near_v_psc =
            geometry.caustics.iter().any(|c| c.kind == CausticKind::VPsc && (c.qprime - b.qprime).norm() < radius);
    }
}

/// Fold normal form `Q'' = Q'²`, action `-2Q'³/3`: the stationary points of
/// `x³/3 - a x` with `a = Q''`, the geometry of the Airy integral.
#[derive(Clone, Copy, Debug, Default)]
pub struct FoldNormalForm;

impl BoundaryMap for FoldNormalForm {
    fn entrance(&self) -> CoherentLabel {
        CoherentLabel::default()
    }

    fn hbar(&self) -> f64 {
        1.0
    }

    fn propagate(&self, qprime: C64) -> Result<MapSample> {
        let x = qprime;
        Ok(MapSample {
            q_out: x * x,
            jac: 2.0 * x,
            end: crate::dynamics::ComplexPoint { q: x, p: C64::new(0.0, 0.0) },
            end_dq: C64::new(1.0, 0.0),
            core_action: C64::new(0.0, 0.0),
            analytic_action: -2.0 / 3.0 * x * x * x,
            analytic_slope: -2.0 * x * x,
        })
    }

    // the real axis of the Airy integral
    fn anchor(&self) -> C64 {
        C64::new(0.0, 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn airy_lines() -> Vec<StokesLine> {
        let map = FoldNormalForm;
        let cs = find_caustics(
            &map,
            &Window::new((-1.0, 1.0), (-1.0, 1.0)),
            &CausticSearch { seeds_per_axis: 5, ..Default::default() },
        );
        assert_eq!(cs.len(), 1);
        assert!(cs[0].qprime.norm() < 1e-8);
        let opts = StokesOptions { arc_length_limit: 0.8, ..StokesOptions::new(Window::new((-2.0, 2.0), (-2.0, 2.0))) };
        trace_stokes(&map, &cs[0], &opts).unwrap()
    }

    #[test]
    fn airy_stokes_rays() {
        // Stokes rays of Ai(-a) in the a = Q'² plane: arg a = ±60°, 180°.
        let lines = airy_lines();
        assert_eq!(lines.len(), 3);
        let mut got: Vec<f64> = lines
            .iter()
            .map(|l| {
                // vertex nearest radius 0.5 in the a-plane
                let v = l
                    .points
                    .iter()
                    .copied()
                    .min_by(|a, b| ((a * a).norm() - 0.5).abs().total_cmp(&((b * b).norm() - 0.5).abs()))
                    .unwrap();
                (v * v).arg().to_degrees()
            })
            .collect();
        got.sort_by(f64::total_cmp);
        let want = [-180.0, -60.0, 60.0];
        for w in want {
            let d = got.iter().map(|g| {
                let x = (g - w).rem_euclid(360.0);
                x.min(360.0 - x)
            });
            assert!(d.fold(f64::INFINITY, f64::min) < 2.0, "{got:?}");
        }
    }

    #[test]
    fn airy_vertices_on_level_set() {
        for l in airy_lines() {
            assert!(l.re_delta.iter().all(|r| r.abs() < 1e-6));
            let s = l.im_delta[0].signum();
            assert!(l.im_delta.iter().all(|v| v.signum() == s));
            assert!(s > 0.0);
        }
    }

    #[test]
    fn airy_exit_images() {
        for l in airy_lines() {
            assert_eq!(l.points.len(), l.exit_points.len());
            for (q, e) in l.points.iter().zip(&l.exit_points) {
                assert!((q * q - e).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn airy_unphysical_wedge() {
        let lines = airy_lines();
        let region = StokesRegion::from_lines(&lines).unwrap();
        // x = -i s: exponentially growing saddle of the Airy integral
        assert!(region.contains(C64::new(0.0, -0.3)));
        assert!(!region.contains(C64::new(0.3, 0.0)));
        assert!(!region.contains(C64::new(-0.3, 0.0)));
        assert!(!region.contains(C64::new(0.0, 0.3)));
    }

    #[test]
    fn linear_map_has_no_caustics() {
        let map = crate::dynamics::IdentityMap { entrance: CoherentLabel::default(), hbar: 0.25 };
        assert!(find_caustics(&map, &Window::new((-2.0, 2.0), (-2.0, 2.0)), &CausticSearch::default()).is_empty());
    }

    #[test]
    fn polygon_membership() {
        let caustic = CausticPoint {
            qprime: C64::new(0.0, 0.0),
            kind: CausticKind::APsc,
            source_zero: None,
            image: CoherentLabel::default(),
            action: C64::new(0.0, 0.0),
            branch_pair: [C64::new(0.0, 0.0); 2],
            jac_residual: 0.0,
        };
        let r = StokesRegion {
            caustic,
            boundary: vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(1.0, 1.0), C64::new(0.0, 1.0)],
        };
        assert!(r.contains(C64::new(0.5, 0.5)));
        assert!(!r.contains(C64::new(1.5, 0.5)));
        let mut bs = vec![SaddleBranch {
            qprime: C64::new(3.0, 3.0),
            action: C64::new(0.0, 0.1),
            amplitude: C64::new(1.0, 0.0),
            jac: C64::new(1.0, 0.0),
            physical: true,
            near_v_psc: false,
            caustic_proximity: false,
        }];
        let geo = StokesGeometry { regions: vec![r], ..Default::default() };
        filter_branches(&mut bs, &geo, 0.25, 1e-6);
        assert!(bs[0].physical);
        bs[0].qprime = C64::new(0.5, 0.5);
        filter_branches(&mut bs, &geo, 0.25, 1e-6);
        assert!(!bs[0].physical);
    }
}
