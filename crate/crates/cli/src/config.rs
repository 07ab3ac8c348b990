use std::path::{Path, PathBuf};

use rydfibre::pair::{BasisWindow, ManifoldMode, DEFAULT_MAX_BASIS};
use rydfibre::propagators::{CylQuadParams, Environment, Medium};
use rydfibre::solver::Pt2Options;
use rydfibre::AtomState;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    C6Table,
    ScanZ,
    ScanPhi,
    ScanAxis,
    Forster,
    Channels,
    Quad,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::C6Table => "c6-table",
            Scenario::ScanZ => "scan-z",
            Scenario::ScanPhi => "scan-phi",
            Scenario::ScanAxis => "scan-axis",
            Scenario::Forster => "forster",
            Scenario::Channels => "channels",
            Scenario::Quad => "quad",
        }
    }

    pub fn is_geometric(self) -> bool {
        !matches!(self, Scenario::C6Table | Scenario::Forster)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverMode {
    Pt2,
    Diag,
    Both,
}

impl SolverMode {
    pub fn pt2(self) -> bool {
        matches!(self, SolverMode::Pt2 | SolverMode::Both)
    }

    pub fn diag(self) -> bool {
        matches!(self, SolverMode::Diag | SolverMode::Both)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Surroundings {
    Vacuum,
    HalfSpace,
    Cylinder,
}

/// One grid axis: a single value, an explicit list, a linear range with a
/// step, or a geometric range with a factor. Ranges include `stop`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Axis {
    Value(f64),
    List(Vec<f64>),
    Linear { start: f64, stop: f64, step: f64 },
    Geometric { start: f64, stop: f64, factor: f64 },
}

impl Axis {
    pub fn values(&self) -> Result<Vec<f64>, String> {
        let out = match self {
            Axis::Value(v) => vec![*v],
            Axis::List(v) => v.clone(),
            Axis::Linear { start, stop, step } => {
                if !(*step > 0.0) || stop < start {
                    return Err(format!("range {start}..{stop} with step {step} is empty"));
                }
                let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
                (0..count).map(|k| start + step * k as f64).collect()
            }
            Axis::Geometric { start, stop, factor } => {
                if !(*factor > 1.0) || !(*start > 0.0) || stop < start {
                    return Err(format!("geometric range {start}..{stop} with factor {factor} is empty"));
                }
                let mut v = vec![*start];
                loop {
                    let next = v[v.len() - 1] * factor;
                    if next > stop * (1.0 + 1e-12) {
                        break v;
                    }
                    v.push(next);
                }
            }
        };
        if out.is_empty() {
            return Err("empty grid".into());
        }
        if out.iter().any(|v| !v.is_finite()) {
            return Err("non-finite grid value".into());
        }
        Ok(out)
    }
}

/// Geometry grid. Lengths in nm, angles in rad. `r_b` defaults to `r_a`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub fibre_radius: Option<Axis>,
    pub r_a: Option<Axis>,
    pub r_b: Option<Axis>,
    #[serde(default = "zero_axis")]
    pub dphi: Axis,
    pub dz: Option<Axis>,
    #[serde(default = "zero_axis")]
    pub theta: Axis,
    #[serde(default = "zero_axis")]
    pub phi: Axis,
}

fn zero_axis() -> Axis {
    Axis::Value(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateConfig {
    pub n: u32,
    pub l: u32,
    /// `2J`.
    pub j2: u32,
    /// `2 M_J`.
    pub mj2: i32,
}

impl StateConfig {
    pub fn state(&self) -> Result<AtomState, String> {
        AtomState::new(self.n, self.l, self.j2, self.mj2).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BasisConfig {
    /// `n` window half-width around each atom's level.
    pub half_width: u32,
    pub l_max: u32,
    pub cutoff_ghz: f64,
    /// Defaults to the degenerate manifold for S-S pairs, single otherwise.
    pub manifold: Option<ManifoldMode>,
    pub max_size: usize,
}

impl Default for BasisConfig {
    fn default() -> Self {
        let w = BasisWindow::around(30, 10);
        Self { half_width: 10, l_max: w.l_max, cutoff_ghz: w.cutoff_ghz, manifold: None, max_size: DEFAULT_MAX_BASIS }
    }
}

impl BasisConfig {
    pub fn window(&self, a: &AtomState, b: &AtomState) -> BasisWindow {
        let lo = a.n.min(b.n);
        let hi = a.n.max(b.n);
        BasisWindow {
            n_min: lo.saturating_sub(self.half_width).max(1),
            n_max: hi + self.half_width,
            l_max: self.l_max,
            cutoff_ghz: self.cutoff_ghz,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct C6Config {
    pub n: Vec<u32>,
    /// Orbital part of the `nL_J, M_J` level paired with itself; S1/2 by default.
    #[serde(default)]
    pub l: u32,
    #[serde(default = "one")]
    pub j2: u32,
    #[serde(default = "one_i")]
    pub mj2: i32,
}

fn one() -> u32 {
    1
}

fn one_i() -> i32 {
    1
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForsterConfig {
    pub n_min: u32,
    pub n_max: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
    /// File stem; the scenario name when absent.
    pub name: Option<String>,
    pub formats: Vec<Format>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { dir: PathBuf::from("out"), name: None, formats: vec![Format::Csv, Format::Json, Format::Svg] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub scenario: Option<Scenario>,
    pub state: Option<StateConfig>,
    /// Atom B; atom A's state when absent.
    pub state_b: Option<StateConfig>,
    #[serde(default = "default_surroundings")]
    pub environment: Surroundings,
    /// Static permittivity of the fibre material.
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_solver")]
    pub solver: SolverMode,
    #[serde(default)]
    pub quadrupole: bool,
    pub grid: Option<GridConfig>,
    #[serde(default)]
    pub basis: BasisConfig,
    #[serde(default)]
    pub pt2: Pt2Options,
    #[serde(default)]
    pub quadrature: CylQuadParams,
    pub c6: Option<C6Config>,
    pub forster: Option<ForsterConfig>,
    pub defects: Option<PathBuf>,
    pub threads: Option<usize>,
    #[serde(default)]
    pub output: OutputConfig,
}

fn default_surroundings() -> Surroundings {
    Surroundings::Cylinder
}

fn default_epsilon() -> f64 {
    Medium::SILICA.epsilon()
}

fn default_solver() -> SolverMode {
    SolverMode::Pt2
}

/// Grid axes expanded to value lists, in iteration order (outermost first).
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub fibre_radius: Vec<f64>,
    pub r_a: Vec<f64>,
    pub r_b: Option<Vec<f64>>,
    pub dphi: Vec<f64>,
    pub dz: Vec<f64>,
    pub theta: Vec<f64>,
    pub phi: Vec<f64>,
}

impl Grid {
    pub fn len(&self) -> usize {
        self.fibre_radius.len()
            * self.r_a.len()
            * self.r_b.as_ref().map_or(1, Vec::len)
            * self.dphi.len()
            * self.dz.len()
            * self.theta.len()
            * self.phi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl ScanConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
        let parsed = if is_json {
            serde_json::from_str(&text).map_err(|e| e.to_string())
        } else {
            toml::from_str(&text).map_err(|e| e.to_string())
        };
        parsed.map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn scenario(&self) -> Result<Scenario, CliError> {
        self.scenario.ok_or_else(|| CliError::Config("no scenario given".into()))
    }

    pub fn environment(&self) -> Result<Environment, CliError> {
        let medium = Medium::new(self.epsilon).map_err(|e| CliError::Config(e.to_string()))?;
        Ok(match self.environment {
            Surroundings::Vacuum => Environment::Vacuum,
            Surroundings::HalfSpace => Environment::HalfSpace { medium },
            Surroundings::Cylinder => Environment::Cylinder { medium, quadrature: self.quadrature },
        })
    }

    pub fn states(&self) -> Result<(AtomState, AtomState), CliError> {
        let a = self.state.ok_or_else(|| CliError::Config("missing [state]".into()))?;
        let b = self.state_b.unwrap_or(a);
        let bad = |e: String| CliError::Config(format!("state: {e}"));
        Ok((a.state().map_err(bad)?, b.state().map_err(bad)?))
    }

    pub fn manifold(&self, a: &AtomState, b: &AtomState) -> ManifoldMode {
        self.basis.manifold.unwrap_or_else(|| ManifoldMode::default_for(a, b))
    }

    pub fn grid(&self) -> Result<Grid, CliError> {
        let g = self.grid.as_ref().ok_or_else(|| CliError::Config("missing [grid]".into()))?;
        let axis = |name: &str, a: &Option<Axis>| -> Result<Vec<f64>, CliError> {
            a.as_ref()
                .ok_or_else(|| CliError::Config(format!("grid.{name} is required")))?
                .values()
                .map_err(|e| CliError::Config(format!("grid.{name}: {e}")))
        };
        let fixed = |name: &str, a: &Axis| a.values().map_err(|e| CliError::Config(format!("grid.{name}: {e}")));
        Ok(Grid {
            fibre_radius: axis("fibre_radius", &g.fibre_radius)?,
            r_a: axis("r_a", &g.r_a)?,
            r_b: g.r_b.as_ref().map(|_| axis("r_b", &g.r_b)).transpose()?,
            dphi: fixed("dphi", &g.dphi)?,
            dz: axis("dz", &g.dz)?,
            theta: fixed("theta", &g.theta)?,
            phi: fixed("phi", &g.phi)?,
        })
    }

    /// Checks everything the scenario needs before any computation.
    pub fn validate(&self) -> Result<(), CliError> {
        let scenario = self.scenario()?;
        if !(self.epsilon > 1.0) {
            return Err(CliError::Config(format!("epsilon = {} must exceed 1", self.epsilon)));
        }
        if self.threads == Some(0) {
            return Err(CliError::Config("threads must be positive".into()));
        }
        if self.output.formats.is_empty() {
            return Err(CliError::Config("output.formats is empty".into()));
        }
        match scenario {
            Scenario::C6Table => {
                let c6 = self.c6.as_ref().ok_or_else(|| CliError::Config("c6-table needs [c6]".into()))?;
                if c6.n.is_empty() {
                    return Err(CliError::Config("c6.n is empty".into()));
                }
                for n in &c6.n {
                    AtomState::new(*n, c6.l, c6.j2, c6.mj2).map_err(|e| CliError::Config(format!("c6: {e}")))?;
                }
                let dz = self
                    .grid
                    .as_ref()
                    .and_then(|g| g.dz.as_ref())
                    .ok_or_else(|| CliError::Config("c6-table needs grid.dz".into()))?
                    .values()
                    .map_err(|e| CliError::Config(format!("grid.dz: {e}")))?;
                if dz.len() < 4 {
                    return Err(CliError::Config("c6-table needs at least 4 separations in grid.dz".into()));
                }
            }
            Scenario::Forster => {
                let f = self.forster.ok_or_else(|| CliError::Config("forster needs [forster]".into()))?;
                if f.n_min < 4 || f.n_min > f.n_max {
                    return Err(CliError::Config(format!("forster range {}..{} is empty", f.n_min, f.n_max)));
                }
            }
            _ => {
                self.states()?;
                self.environment()?;
                let g = self.grid()?;
                if g.is_empty() {
                    return Err(CliError::Config("empty grid".into()));
                }
                if scenario == Scenario::Quad && !self.quadrupole {
                    return Err(CliError::Config("the quad scenario needs quadrupole = true".into()));
                }
                if scenario == Scenario::Channels && !self.solver.pt2() {
                    return Err(CliError::Config("the channels scenario is perturbative; use solver = \"pt2\"".into()));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axes_include_stop() {
        let lin = Axis::Linear { start: 100.0, stop: 500.0, step: 100.0 }.values().unwrap();
        assert_eq!(lin, vec![100.0, 200.0, 300.0, 400.0, 500.0]);
        let geo = Axis::Geometric { start: 1.0, stop: 8.0, factor: 2.0 }.values().unwrap();
        assert_eq!(geo, vec![1.0, 2.0, 4.0, 8.0]);
        assert_eq!(Axis::Value(3.0).values().unwrap(), vec![3.0]);
    }

    #[test]
    fn degenerate_axes_are_rejected() {
        assert!(Axis::List(vec![]).values().is_err());
        assert!(Axis::Linear { start: 1.0, stop: 0.0, step: 0.1 }.values().is_err());
        assert!(Axis::Linear { start: 0.0, stop: 1.0, step: 0.0 }.values().is_err());
        assert!(Axis::Geometric { start: 1.0, stop: 2.0, factor: 1.0 }.values().is_err());
        assert!(Axis::List(vec![f64::NAN]).values().is_err());
    }

    #[test]
    fn untagged_axes_parse_from_toml() {
        #[derive(Deserialize)]
        struct T {
            a: Axis,
            b: Axis,
            c: Axis,
        }
        let t: T = toml::from_str("a = 2.0\nb = [1.0, 2.0]\nc = { start = 1.0, stop = 4.0, factor = 2.0 }").unwrap();
        assert_eq!(t.a, Axis::Value(2.0));
        assert_eq!(t.b, Axis::List(vec![1.0, 2.0]));
        assert!(matches!(t.c, Axis::Geometric { .. }));
    }
}
