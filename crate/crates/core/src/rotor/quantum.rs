//! Split-step evolution of the spin-kicked rotor.
//!
//! One period is `Û = exp[-i p̂²/(2ħ)] exp[-i V̂(q̂)/ħ]`: the kick acts
//! pointwise as a 2×2 unitary, the drift is diagonal in momentum.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use rustfft::{Fft, FftPlanner};

use crate::dynamics::CoherentLabel;
use crate::error::{Error, Result};
use crate::spin::{influence_kick, su2_exp, KickParams, SpinState};

/// Momentum mass allowed in the outer eighth of the band on each side.
pub const TAIL_LIMIT: f64 = 1e-10;

/// Rotor grid size used by [`evolve_observables`].
pub const ROTOR_POINTS: usize = 512;

/// Line grid size used by [`exact_decomposed_kernel`].
pub const LINE_POINTS: usize = 1024;

/// Uniform periodic grid and its FFT plans.
#[derive(Clone)]
pub struct Lattice {
    pub x0: f64,
    pub length: f64,
    pub hbar: f64,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for Lattice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Lattice")
            .field("x0", &self.x0)
            .field("length", &self.length)
            .field("points", &self.len())
            .finish()
    }
}

impl Lattice {
    pub fn new(x0: f64, length: f64, points: usize, hbar: f64) -> Result<Self> {
        if !points.is_power_of_two() {
            return Err(Error::Config(format!("grid size must be a power of two, got {points}")));
        }
        let mut planner = FftPlanner::new();
        Ok(Lattice { x0, length, hbar, fwd: planner.plan_fft_forward(points), inv: planner.plan_fft_inverse(points) })
    }

    /// `[0, 2π)`; momenta `ħm`.
    pub fn rotor(points: usize, hbar: f64) -> Result<Self> {
        Self::new(0.0, 2.0 * PI, points, hbar)
    }

    pub fn len(&self) -> usize {
        self.fwd.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dx(&self) -> f64 {
        self.length / self.len() as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x0 + j as f64 * self.dx()
    }

    /// Momentum of FFT bin `k`.
    pub fn p(&self, k: usize) -> f64 {
        let m = self.len() as i64;
        let k = k as i64;
        let signed = if k < m / 2 { k } else { k - m };
        2.0 * PI * self.hbar * signed as f64 / self.length
    }

    /// `exp(-i p²/(2ħ))` on every component, with the band-edge check.
    fn drift(&self, comps: &mut [&mut Vec<C64>]) -> Result<()> {
        let m = self.len();
        let mut tail = 0.0;
        let mut total = 0.0;
        for c in comps.iter_mut() {
            self.fwd.process(c);
            for (k, v) in c.iter_mut().enumerate() {
                let w = v.norm_sqr();
                total += w;
                let edge = k.min(m - k);
                if edge > 3 * m / 8 {
                    tail += w;
                }
                let p = self.p(k);
                *v *= C64::from_polar(1.0 / m as f64, -p * p / (2.0 * self.hbar));
            }
            self.inv.process(c);
        }
        if total > 0.0 && tail / total > TAIL_LIMIT {
            return Err(Error::GridTooCoarse { tail: tail / total });
        }
        Ok(())
    }
}

/// `(πħ)^{-1/4} exp[-(x-q)²/(2ħ) + i p (x - q/2)/ħ]`
pub fn coherent_wavefunction(x: f64, label: &CoherentLabel, hbar: f64) -> C64 {
    let d = x - label.q;
    C64::new(-d * d / (2.0 * hbar), label.p * (x - 0.5 * label.q) / hbar).exp() / (PI * hbar).powf(0.25)
}

/// Two-component wavefunction on a [`Lattice`].
#[derive(Clone, Debug)]
pub struct SpinorField {
    pub lattice: Lattice,
    pub up: Vec<C64>,
    pub down: Vec<C64>,
}

/// Bloch vector of the reduced spin state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpinObservables {
    pub s_z: f64,
    pub c: f64,
    pub p: f64,
    pub norm: f64,
}

impl SpinorField {
    /// `|label⟩ ⊗ |spin⟩` on the line, sampled directly.
    pub fn coherent_line(lattice: Lattice, label: &CoherentLabel, spin: &SpinState) -> Self {
        let f: Vec<C64> =
            (0..lattice.len()).map(|j| coherent_wavefunction(lattice.x(j), label, lattice.hbar)).collect();
        SpinorField {
            up: f.iter().map(|v| v * spin.up).collect(),
            down: f.iter().map(|v| v * spin.down).collect(),
            lattice,
        }
    }

    /// Periodized coherent state on the rotor, renormalized.
    pub fn coherent_rotor(lattice: Lattice, label: &CoherentLabel, spin: &SpinState) -> Self {
        let h = lattice.hbar;
        let reach = (12.0 * h.sqrt() / (2.0 * PI)).ceil() as i64 + 1;
        let mut f: Vec<C64> = (0..lattice.len())
            .map(|j| {
                (-reach..=reach).map(|w| coherent_wavefunction(lattice.x(j) + 2.0 * PI * w as f64, label, h)).sum()
            })
            .collect();
        let n = (f.iter().map(|v| v.norm_sqr()).sum::<f64>() * lattice.dx()).sqrt();
        f.iter_mut().for_each(|v| *v /= n);
        SpinorField {
            up: f.iter().map(|v| v * spin.up).collect(),
            down: f.iter().map(|v| v * spin.down).collect(),
            lattice,
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.up.iter().chain(&self.down).map(|v| v.norm_sqr()).sum::<f64>() * self.lattice.dx()
    }

    pub fn observables(&self) -> SpinObservables {
        let dx = self.lattice.dx();
        let mut zz = 0.0;
        let mut cross = C64::new(0.0, 0.0);
        for (u, d) in self.up.iter().zip(&self.down) {
            zz += u.norm_sqr() - d.norm_sqr();
            cross += u.conj() * d;
        }
        let s_z = zz * dx;
        // ⟨σx⟩ = 2 Re(u* d), ⟨σy⟩ = 2 Im(u* d)
        let c = 2.0 * cross.norm() * dx;
        SpinObservables { s_z, c, p: s_z.hypot(c), norm: self.norm_sqr() }
    }

    /// `Σ_j φ*(x_j) ψ_comp(x_j) dx`
    pub fn project(&self, bra: &[C64], spin: &SpinState) -> C64 {
        let dx = self.lattice.dx();
        let s: C64 = bra
            .iter()
            .zip(self.up.iter().zip(&self.down))
            .map(|(b, (u, d))| b.conj() * (spin.up.conj() * u + spin.down.conj() * d))
            .sum();
        s * dx
    }
}

/// One Floquet period: kick, then drift.
pub fn floquet_step(state: &mut SpinorField, p: &KickParams) -> Result<()> {
    for j in 0..state.lattice.len() {
        let cq = state.lattice.x(j).cos();
        let u = su2_exp(C64::from(p.spin_kick * cq), C64::from(p.coupling), C64::from(p.kick * cq / p.hbar));
        let v = u.apply(&SpinState { up: state.up[j], down: state.down[j] });
        state.up[j] = v.up;
        state.down[j] = v.down;
    }
    let lat = state.lattice.clone();
    lat.drift(&mut [&mut state.up, &mut state.down])
}

/// Bloch vector after each of `steps` periods, starting from
/// `|initial⟩ ⊗ |spin⟩` on the rotor; entry 0 is the initial state. The grid
/// is doubled from [`ROTOR_POINTS`] until the band-edge check passes.
pub fn evolve_observables(
    initial: &CoherentLabel,
    spin: &SpinState,
    p: &KickParams,
    steps: usize,
) -> Result<Vec<SpinObservables>> {
    p.validate()?;
    let mut points = ROTOR_POINTS;
    loop {
        match evolve_on(points, initial, spin, p, steps) {
            Err(Error::GridTooCoarse { .. }) if points < 1 << 16 => points *= 2,
            other => return other,
        }
    }
}

fn evolve_on(
    points: usize,
    initial: &CoherentLabel,
    spin: &SpinState,
    p: &KickParams,
    steps: usize,
) -> Result<Vec<SpinObservables>> {
    let mut st = SpinorField::coherent_rotor(Lattice::rotor(points, p.hbar)?, initial, spin);
    let mut out = vec![st.observables()];
    for _ in 0..steps {
        floquet_step(&mut st, p)?;
        out.push(st.observables());
    }
    Ok(out)
}

/// Line window for kernel oracles: `|x - q'| ≤ 8√ħ + N|p'| + 6`.
pub fn line_lattice(entrance: &CoherentLabel, steps: usize, hbar: f64, points: usize) -> Result<Lattice> {
    let half = 8.0 * hbar.sqrt() + steps as f64 * entrance.p.abs() + 6.0;
    Lattice::new(entrance.q - half, 2.0 * half, points, hbar)
}

/// `⟨q''p''| Z_N(q̂) T ... T Z_1(q̂) |q'p'⟩` with the drift `T` in between,
/// on the line. `spins` holds `η_0 … η_N`.
pub fn exact_decomposed_kernel(
    entrance: &CoherentLabel,
    exit: &CoherentLabel,
    spins: &[SpinState],
    p: &KickParams,
) -> Result<C64> {
    exact_decomposed_kernel_on(entrance, exit, spins, p, LINE_POINTS)
}

pub fn exact_decomposed_kernel_on(
    entrance: &CoherentLabel,
    exit: &CoherentLabel,
    spins: &[SpinState],
    p: &KickParams,
    points: usize,
) -> Result<C64> {
    let lat = line_lattice(entrance, spins.len().saturating_sub(1), p.hbar, points)?;
    let mut psi = decomposed_state(&lat, entrance, spins, p)?;
    let bra: Vec<C64> = (0..lat.len()).map(|j| coherent_wavefunction(lat.x(j), exit, p.hbar)).collect();
    let s: C64 = bra.iter().zip(psi.iter_mut()).map(|(b, v)| b.conj() * *v).sum();
    Ok(s * lat.dx())
}

/// The scalar wavefunction `Z_N T … T Z_1 |q'p'⟩` (drift after every kick).
pub fn decomposed_state(
    lat: &Lattice,
    entrance: &CoherentLabel,
    spins: &[SpinState],
    p: &KickParams,
) -> Result<Vec<C64>> {
    let mut psi: Vec<C64> = (0..lat.len()).map(|j| coherent_wavefunction(lat.x(j), entrance, p.hbar)).collect();
    for w in spins.windows(2) {
        for (j, v) in psi.iter_mut().enumerate() {
            *v *= influence_kick(C64::from(lat.x(j)), &w[0], &w[1], p);
        }
        lat.drift(&mut [&mut psi])?;
    }
    Ok(psi)
}

/// Exact decomposed kernels for many exit labels from one evolution.
pub fn exact_decomposed_kernels(
    entrance: &CoherentLabel,
    exits: &[CoherentLabel],
    spins: &[SpinState],
    p: &KickParams,
) -> Result<Vec<C64>> {
    let lat = line_lattice(entrance, spins.len().saturating_sub(1), p.hbar, LINE_POINTS)?;
    let psi = decomposed_state(&lat, entrance, spins, p)?;
    Ok(exits
        .iter()
        .map(|e| {
            let s: C64 = (0..lat.len()).map(|j| coherent_wavefunction(lat.x(j), e, p.hbar).conj() * psi[j]).sum();
            s * lat.dx()
        })
        .collect())
}

/// `⟨q''p'', η''| Û^N |q'p', η'⟩` with the full spinor on the line.
pub fn full_kernel(
    entrance: &CoherentLabel,
    exit: &CoherentLabel,
    spin_in: &SpinState,
    spin_out: &SpinState,
    p: &KickParams,
    steps: usize,
) -> Result<C64> {
    let lat = line_lattice(entrance, steps, p.hbar, LINE_POINTS)?;
    let mut st = SpinorField::coherent_line(lat, entrance, spin_in);
    for _ in 0..steps {
        floquet_step(&mut st, p)?;
    }
    let bra: Vec<C64> = (0..st.lattice.len()).map(|j| coherent_wavefunction(st.lattice.x(j), exit, p.hbar)).collect();
    Ok(st.project(&bra, spin_out))
}
