//! Flat `key = value` run configuration.
//!
//! ```text
//! # comment
//! model = rotor
//! mode = domain-d
//! kick = 2.4
//! cutoff = 1.151
//! ```

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::dynamics::CoherentLabel;
use crate::error::{Error, Result};
use crate::spin::{HeavyParams, KickParams, SpinState};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Model {
    Heavy,
    Rotor,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Husimi,
    Imf,
    Caustics,
    SpinEvolution,
    OracleCompare,
    DomainD,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitMode {
    Fixed,
    Own,
}

macro_rules! keyword_enum {
    ($ty:ident { $($name:literal => $var:ident),* $(,)? }) => {
        impl FromStr for $ty {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($name => Ok($ty::$var),)*
                    _ => Err(Error::Config(format!(
                        "unknown {} `{s}` (expected one of: {})",
                        stringify!($ty).to_lowercase(),
                        [$($name),*].join(", ")
                    ))),
                }
            }
        }
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(match self { $($ty::$var => $name,)* })
            }
        }
    };
}

keyword_enum!(Model { "heavy" => Heavy, "rotor" => Rotor });
keyword_enum!(Mode {
    "husimi" => Husimi,
    "imf" => Imf,
    "caustics" => Caustics,
    "spin-evolution" => SpinEvolution,
    "oracle-compare" => OracleCompare,
    "domain-d" => DomainD,
});
keyword_enum!(ExitMode { "fixed" => Fixed, "own" => Own });

/// Everything a run needs. Optional fields fall back to model- and
/// mode-dependent defaults, see the accessors.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub model: Model,
    pub mode: Mode,
    pub hbar: f64,
    // heavy model
    pub force: f64,
    pub coupling: f64,
    pub time: f64,
    // kicked rotor
    pub kick: f64,
    pub spin_kick: f64,
    pub steps: Option<usize>,
    // labels and spins
    pub q_in: Option<f64>,
    pub p_in: Option<f64>,
    pub spins: Option<String>,
    pub q_out: Option<f64>,
    pub p_out: Option<f64>,
    pub exit: ExitMode,
    // exit-label window
    pub q_min: Option<f64>,
    pub q_max: Option<f64>,
    pub p_min: Option<f64>,
    pub p_max: Option<f64>,
    pub nq: Option<usize>,
    pub np: Option<usize>,
    // Q' window, half-width in units of √ħ
    pub half_width: Option<f64>,
    pub nx: usize,
    pub ny: usize,
    pub seeds: usize,
    pub cutoff: f64,
    pub amplitude_cutoff: f64,
    pub caustic_cutoff: f64,
    pub v_radius: f64,
    pub output: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        let k = KickParams::default();
        let h = HeavyParams::default();
        RunConfig {
            model: Model::Heavy,
            mode: Mode::Husimi,
            hbar: 0.25,
            force: h.force,
            coupling: h.coupling,
            time: h.time,
            kick: k.kick,
            spin_kick: k.spin_kick,
            steps: None,
            q_in: None,
            p_in: None,
            spins: None,
            q_out: None,
            p_out: None,
            exit: ExitMode::Fixed,
            q_min: None,
            q_max: None,
            p_min: None,
            p_max: None,
            nq: None,
            np: None,
            half_width: None,
            nx: 128,
            ny: 128,
            seeds: 24,
            cutoff: 1.151,
            amplitude_cutoff: crate::heavy::AMPLITUDE_CUTOFF,
            caustic_cutoff: crate::heavy::CAUSTIC_CUTOFF,
            v_radius: 1.0,
            output: PathBuf::from("out"),
        }
    }
}

/// Every accepted key, in header order.
pub const KEYS: &[&str] = &[
    "model",
    "mode",
    "hbar",
    "force",
    "coupling",
    "time",
    "kick",
    "spin_kick",
    "steps",
    "q_in",
    "p_in",
    "spins",
    "q_out",
    "p_out",
    "exit",
    "q_min",
    "q_max",
    "p_min",
    "p_max",
    "nq",
    "np",
    "half_width",
    "nx",
    "ny",
    "seeds",
    "cutoff",
    "amplitude_cutoff",
    "caustic_cutoff",
    "v_radius",
    "output",
];

fn num<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| Error::Config(format!("`{key}` needs a number, got `{v}`")))
}

fn opt<T: FromStr>(key: &str, v: &str) -> Result<Option<T>> {
    if v == "auto" {
        Ok(None)
    } else {
        num(key, v).map(Some)
    }
}

fn show<T: fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(|| "auto".to_string(), |x| x.to_string())
}

impl RunConfig {
    /// Apply one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        match key.trim() {
            "model" => self.model = v.parse()?,
            "mode" => self.mode = v.parse()?,
            "hbar" => self.hbar = num(key, v)?,
            "force" => self.force = num(key, v)?,
            "coupling" => self.coupling = num(key, v)?,
            "time" => self.time = num(key, v)?,
            "kick" | "K" => self.kick = num(key, v)?,
            "spin_kick" => self.spin_kick = num(key, v)?,
            "steps" => self.steps = opt(key, v)?,
            "q_in" => self.q_in = opt(key, v)?,
            "p_in" => self.p_in = opt(key, v)?,
            "spins" => self.spins = if v == "auto" { None } else { Some(v.to_string()) },
            "q_out" => self.q_out = opt(key, v)?,
            "p_out" => self.p_out = opt(key, v)?,
            "exit" => self.exit = v.parse()?,
            "q_min" => self.q_min = opt(key, v)?,
            "q_max" => self.q_max = opt(key, v)?,
            "p_min" => self.p_min = opt(key, v)?,
            "p_max" => self.p_max = opt(key, v)?,
            "nq" => self.nq = opt(key, v)?,
            "np" => self.np = opt(key, v)?,
            "half_width" => self.half_width = opt(key, v)?,
            "nx" => self.nx = num(key, v)?,
            "ny" => self.ny = num(key, v)?,
            "seeds" => self.seeds = num(key, v)?,
            "cutoff" => self.cutoff = num(key, v)?,
            "amplitude_cutoff" => self.amplitude_cutoff = num(key, v)?,
            "caustic_cutoff" => self.caustic_cutoff = num(key, v)?,
            "v_radius" => self.v_radius = num(key, v)?,
            "output" => self.output = PathBuf::from(v),
            other => return Err(Error::Config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    /// Parse a config file body on top of the defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        cfg.apply_text(text)?;
        Ok(cfg)
    }

    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) =
                line.split_once('=').ok_or_else(|| Error::Config(format!("line {}: expected key = value", n + 1)))?;
            self.set(k, v).map_err(|e| match e {
                Error::Config(m) => Error::Config(format!("line {}: {m}", n + 1)),
                e => e,
            })?;
        }
        Ok(())
    }

    /// Resolved `(key, value)` pairs for every key.
    pub fn entries(&self) -> Vec<(String, String)> {
        let spins = self.spin_sequence().map(|s| spin_string(&s)).unwrap_or_else(|_| show(&self.spins));
        let (q_in, p_in) = (self.entrance().q, self.entrance().p);
        let vals: Vec<String> = vec![
            self.model.to_string(),
            self.mode.to_string(),
            self.hbar.to_string(),
            self.force.to_string(),
            self.coupling.to_string(),
            self.time.to_string(),
            self.kick.to_string(),
            self.spin_kick.to_string(),
            self.step_count().to_string(),
            q_in.to_string(),
            p_in.to_string(),
            spins,
            show(&self.q_out),
            show(&self.p_out),
            self.exit.to_string(),
            self.label_window().q.0.to_string(),
            self.label_window().q.1.to_string(),
            self.label_window().p.0.to_string(),
            self.label_window().p.1.to_string(),
            self.label_window().nq.to_string(),
            self.label_window().np.to_string(),
            self.qprime_half_width().to_string(),
            self.nx.to_string(),
            self.ny.to_string(),
            self.seeds.to_string(),
            self.cutoff.to_string(),
            self.amplitude_cutoff.to_string(),
            self.caustic_cutoff.to_string(),
            self.v_radius.to_string(),
            self.output.display().to_string(),
        ];
        KEYS.iter().map(|k| k.to_string()).zip(vals).collect()
    }

    pub fn heavy_params(&self) -> HeavyParams {
        HeavyParams { hbar: self.hbar, force: self.force, coupling: self.coupling, time: self.time }
    }

    pub fn kick_params(&self) -> KickParams {
        KickParams {
            hbar: self.hbar,
            kick: self.kick,
            spin_kick: self.spin_kick,
            coupling: self.coupling,
            steps: self.step_count(),
        }
    }

    /// Kicks: 50 for spin evolution, 1 for the rotor oracle comparison,
    /// 3 otherwise.
    pub fn step_count(&self) -> usize {
        self.steps.unwrap_or(match self.mode {
            Mode::SpinEvolution => 50,
            Mode::OracleCompare => 1,
            _ => 3,
        })
    }

    pub fn entrance(&self) -> CoherentLabel {
        let p_default = match self.model {
            Model::Heavy => 0.0,
            Model::Rotor => 1.5,
        };
        CoherentLabel::new(self.q_in.unwrap_or(0.0), self.p_in.unwrap_or(p_default))
    }

    /// Spins `η_0 … η_N` from a string over `u`/`d`; all up by default.
    pub fn spin_sequence(&self) -> Result<Vec<SpinState>> {
        let want = match (self.model, self.mode) {
            (Model::Heavy, _) | (Model::Rotor, Mode::SpinEvolution) => 2,
            (Model::Rotor, _) => self.step_count() + 1,
        };
        let Some(s) = &self.spins else {
            return Ok(vec![SpinState::UP; want]);
        };
        let seq: Vec<SpinState> = s
            .chars()
            .map(|c| match c {
                'u' => Ok(SpinState::UP),
                'd' => Ok(SpinState::DOWN),
                _ => Err(Error::Config(format!("spins: `{c}` is not u or d"))),
            })
            .collect::<Result<_>>()?;
        if seq.len() != want {
            return Err(Error::Config(format!("spins: need {want} states, got {}", seq.len())));
        }
        Ok(seq)
    }

    /// Exit-label window; the reference window for the heavy model, a `4√ħ` square
    /// around the classical one-kick image for the rotor.
    pub fn label_window(&self) -> crate::heavy::LabelWindow {
        let (q, p, n) = match self.model {
            Model::Heavy => ((-2.0, 2.0), (-3.0, 1.0), 64),
            Model::Rotor => {
                let e = self.entrance();
                let p1 = e.p - self.kick * e.q.sin();
                let (qc, r) = (e.q + p1, 4.0 * self.hbar.sqrt());
                ((qc - r, qc + r), (p1 - r, p1 + r), 16)
            }
        };
        crate::heavy::LabelWindow {
            q: (self.q_min.unwrap_or(q.0), self.q_max.unwrap_or(q.1)),
            p: (self.p_min.unwrap_or(p.0), self.p_max.unwrap_or(p.1)),
            nq: self.nq.unwrap_or(n),
            np: self.np.unwrap_or(n),
        }
    }

    /// Half-width of the `Q'` window in units of `√ħ`.
    pub fn qprime_half_width(&self) -> f64 {
        self.half_width.unwrap_or(match (self.model, self.mode) {
            (Model::Heavy, Mode::Imf) => 6.0,
            (Model::Rotor, Mode::Imf | Mode::DomainD) => 3.0,
            _ => 12.0,
        })
    }

    pub fn validate(&self) -> Result<()> {
        use Mode::*;
        match (self.model, self.mode) {
            (Model::Heavy, SpinEvolution | DomainD) => {
                return Err(Error::Config(format!("mode {} needs the rotor model", self.mode)));
            }
            (Model::Rotor, Husimi) => {
                return Err(Error::Config("husimi needs the heavy model; use oracle-compare for the rotor".into()));
            }
            _ => {}
        }
        if self.nx < 2 || self.ny < 2 || self.seeds < 1 {
            return Err(Error::Config("nx, ny need at least 2 points and seeds at least 1".into()));
        }
        let w = self.label_window();
        if !(w.q.0 < w.q.1 && w.p.0 < w.p.1) {
            return Err(Error::Config("exit window bounds must be increasing".into()));
        }
        if !(self.qprime_half_width() > 0.0) {
            return Err(Error::Config("half_width must be positive".into()));
        }
        self.heavy_params().validate()?;
        self.kick_params().validate()?;
        self.spin_sequence()?;
        Ok(())
    }
}

fn spin_string(s: &[SpinState]) -> String {
    s.iter().map(|x| if *x == SpinState::DOWN { 'd' } else { 'u' }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_and_overrides() {
        let mut c = RunConfig::parse("# domain run\nmodel = rotor\nmode = domain-d\nkick = 0.4\n\ncutoff=2\n").unwrap();
        assert_eq!((c.model, c.mode, c.kick, c.cutoff), (Model::Rotor, Mode::DomainD, 0.4, 2.0));
        c.set("K", "2.4").unwrap();
        assert_eq!(c.kick, 2.4);
        assert_eq!(c.step_count(), 3);
        assert_eq!(c.spin_sequence().unwrap().len(), 4);
        c.validate().unwrap();
    }

    #[test]
    fn unknown_key_is_rejected() {
        let e = RunConfig::parse("model = heavy\ncolour = red\n").unwrap_err();
        assert!(matches!(e, Error::Config(ref m) if m.contains("line 2") && m.contains("colour")));
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn bad_values() {
        assert!(RunConfig::parse("mode = movie").is_err());
        assert!(RunConfig::parse("hbar = small").is_err());
        assert!(RunConfig::parse("just words").is_err());
        let c = RunConfig::parse("model = heavy\nmode = domain-d").unwrap();
        assert!(c.validate().is_err());
        let c = RunConfig::parse("model = rotor\nmode = imf\nspins = uux").unwrap();
        assert!(c.validate().is_err());
    }

    #[test]
    fn every_key_is_echoed_and_round_trips() {
        let c = RunConfig::parse("model = rotor\nmode = spin-evolution\nkick = 2.4").unwrap();
        let e = c.entries();
        assert_eq!(e.iter().map(|(k, _)| k.as_str()).collect::<Vec<_>>(), KEYS);
        let text: String = e.iter().map(|(k, v)| format!("{k} = {v}\n")).collect();
        let back = RunConfig::parse(&text).unwrap();
        assert_eq!(back.entries(), e);
    }
}
