use std::collections::BTreeMap;
use std::f64::consts::PI;

use rayon::prelude::*;
use rydfibre::models::{forster_scan, pipi_ratio, sigma_model, EtaCoefficients};
use rydfibre::pair::{build_basis, BasisWindow, Channel, ChannelFilter, PairBasis};
use rydfibre::propagators::{propagator, Environment, PairGeometry, PropagatorTensor};
use rydfibre::solver::{channel_contributions, diag_shift, fit_c6, pt2, Method, PotentialBreakdown, TrackedShift};
use rydfibre::{Atom, AtomState, Error, QuantizationAxis};
use serde::{Deserialize, Serialize};

use crate::config::{Grid, ScanConfig, Scenario};
use crate::CliError;

/// Coordinate columns of the geometric scenarios: lengths in um, angles in rad.
pub const GEOMETRY_COLUMNS: [&str; 7] = ["a_um", "r_a_um", "r_b_um", "dphi_rad", "dz_um", "theta_rad", "phi_rad"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointError {
    pub kind: String,
    pub message: String,
}

impl PointError {
    fn new(e: &Error) -> Self {
        let kind = match e {
            Error::QuasiResonance { .. } => "quasi-resonance",
            Error::TrackingFailed { .. } => "tracking-failed",
            Error::NoAsymptote => "no-asymptote",
            Error::BasisTooLarge { .. } => "basis-too-large",
            Error::EmptyBasis(_) => "empty-basis",
            Error::Geometry(_) => "geometry",
            Error::QuadratureNonConvergence { .. } => "quadrature",
            Error::RadialNonConvergence(_) => "radial",
            _ => "error",
        };
        Self { kind: kind.into(), message: e.to_string() }
    }
}

/// One grid point. `values` holds every quantity that could be evaluated;
/// keys starting with `model:` come from the closed-form models.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub index: usize,
    pub values: BTreeMap<String, f64>,
    pub errors: Vec<PointError>,
}

impl Record {
    fn new(index: usize) -> Self {
        Self { index, values: BTreeMap::new(), errors: Vec::new() }
    }

    fn set(&mut self, key: impl Into<String>, v: f64) {
        self.values.insert(key.into(), v);
    }

    fn keep<T>(&mut self, r: rydfibre::Result<T>) -> Option<T> {
        r.map_err(|e| self.errors.push(PointError::new(&e))).ok()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataFile {
    pub name: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub version: String,
    pub timestamp_unix: u64,
    pub data_files: Vec<DataFile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultSet {
    pub scenario: Scenario,
    pub config: ScanConfig,
    /// CSV column order: coordinates first, then values.
    pub columns: Vec<String>,
    pub records: Vec<Record>,
    pub provenance: Provenance,
}

impl ResultSet {
    pub fn failed_points(&self) -> usize {
        self.records.iter().filter(|r| !r.errors.is_empty()).count()
    }
}

/// Shared read-only inputs of one run.
pub struct Inputs<'a> {
    pub atom: &'a Atom,
    pub config: &'a ScanConfig,
    pub provenance: Provenance,
}

pub fn run(inputs: &Inputs) -> Result<ResultSet, CliError> {
    let cfg = inputs.config;
    cfg.validate()?;
    let scenario = cfg.scenario()?;
    let (columns, records) = match scenario {
        Scenario::Forster => forster(inputs)?,
        Scenario::C6Table => c6_table(inputs)?,
        _ => geometric(inputs, scenario)?,
    };
    Ok(ResultSet { scenario, config: cfg.clone(), columns, records, provenance: inputs.provenance.clone() })
}

fn forster(inputs: &Inputs) -> Result<(Vec<String>, Vec<Record>), CliError> {
    let f = inputs.config.forster.expect("validated");
    let scan = forster_scan(inputs.atom, f.n_min, f.n_max).map_err(|e| CliError::Config(e.to_string()))?;
    let mut records = Vec::new();
    for (i, row) in scan.rows.iter().enumerate() {
        let mut r = Record::new(i);
        r.set("n", row.n as f64);
        r.set("delta1_ghz", row.delta1);
        r.set("delta2_ghz", row.delta2);
        r.set("delta1_over_delta2", row.ratio);
        let flipped = i > 0 && scan.rows[i - 1].delta2.signum() != row.delta2.signum();
        r.set("delta2_sign_change", if flipped { 1.0 } else { 0.0 });
        records.push(r);
    }
    Ok((strings(&["n", "delta1_ghz", "delta2_ghz", "delta1_over_delta2", "delta2_sign_change"]), records))
}

fn lateral_at(cfg: &ScanConfig, dz: f64) -> PairGeometry {
    let first = |a: &Option<crate::config::Axis>, default: f64| {
        a.as_ref().and_then(|a| a.values().ok()).and_then(|v| v.first().copied()).unwrap_or(default)
    };
    let g = cfg.grid.as_ref().expect("validated");
    PairGeometry::lateral(first(&g.fibre_radius, 200.0), first(&g.r_a, 250.0), dz)
}

fn c6_table(inputs: &Inputs) -> Result<(Vec<String>, Vec<Record>), CliError> {
    let cfg = inputs.config;
    let c6 = cfg.c6.as_ref().expect("validated");
    let env = cfg.environment()?;
    let dz = cfg.grid.as_ref().and_then(|g| g.dz.as_ref()).expect("validated").values().map_err(CliError::Config)?;
    let mut dz = dz;
    dz.sort_by(f64::total_cmp);
    let method = if cfg.solver.diag() { Method::Diag } else { Method::Pt2 };

    let bases: Vec<Result<PairBasis, PointError>> = c6
        .n
        .iter()
        .map(|&n| {
            let s = AtomState::new(n, c6.l, c6.j2, c6.mj2)?;
            build_basis(inputs.atom, (s, s), &cfg.basis.window(&s, &s), false, cfg.manifold(&s, &s))
        })
        .map(|b| b.map_err(|e| PointError::new(&e)))
        .collect();
    let tasks: Vec<(usize, f64)> = (0..c6.n.len()).flat_map(|i| dz.iter().map(move |z| (i, *z))).collect();
    let samples: Vec<Option<Result<f64, PointError>>> = tasks
        .par_iter()
        .map(|&(i, z)| {
            let b = bases[i].as_ref().ok()?;
            let g = lateral_at(cfg, z);
            let u = propagator(&g, &env, false).and_then(|p| shift(inputs, b, &g.axis, &p, method));
            Some(u.map_err(|e| PointError::new(&e)))
        })
        .collect();

    let mut records = Vec::new();
    for (i, &n) in c6.n.iter().enumerate() {
        let mut r = Record::new(i);
        r.set("n", n as f64);
        let b = match &bases[i] {
            Ok(b) => b,
            Err(e) => {
                r.errors.push(e.clone());
                records.push(r);
                continue;
            }
        };
        r.set("basis_size", b.len() as f64);
        // short-range points may fail (strong mixing); the fit only needs the tail
        let mut pts = Vec::new();
        let mut unused = 0;
        for (k, z) in dz.iter().enumerate() {
            match &samples[i * dz.len() + k] {
                Some(Ok(u)) => pts.push((z / 1000.0, *u)),
                _ => unused += 1,
            }
        }
        r.set("failed_samples", unused as f64);
        if let Some(fit) = r.keep(fit_c6(&pts)) {
            r.set("c6_ghz_um6", fit.c6);
            r.set("c6_alt_ghz_um6", -fit.c6);
            r.set("r_vdw_um", fit.r_vdw);
            r.set("fit_residual", fit.residual);
            r.set("fit_points", (pts.len() - fit.window_start) as f64);
        }
        records.push(r);
    }
    let columns = strings(&["n", "c6_ghz_um6", "c6_alt_ghz_um6", "r_vdw_um", "fit_residual", "fit_points", "failed_samples", "basis_size"]);
    Ok((columns, records))
}

fn filter(cfg: &ScanConfig) -> ChannelFilter {
    if cfg.quadrupole {
        ChannelFilter::all()
    } else {
        ChannelFilter::dipole_only()
    }
}

fn shift(inputs: &Inputs, b: &PairBasis, axis: &QuantizationAxis, p: &PropagatorTensor, method: Method) -> rydfibre::Result<f64> {
    let cfg = inputs.config;
    match method {
        Method::Pt2 => Ok(pt2(inputs.atom, b, axis, p, &filter(cfg), &cfg.pt2)?.u_total),
        Method::Diag => Ok(diag_shift(inputs.atom, b, axis, p, &filter(cfg), cfg.basis.max_size)?.shift),
    }
}

fn points(grid: &Grid) -> Vec<[f64; 7]> {
    let mut out = Vec::with_capacity(grid.len());
    for &a in &grid.fibre_radius {
        for &ra in &grid.r_a {
            let rbs = grid.r_b.clone().unwrap_or_else(|| vec![f64::NAN]);
            for rb in rbs {
                let rb = if rb.is_nan() { ra } else { rb };
                for &dphi in &grid.dphi {
                    for &dz in &grid.dz {
                        for &th in &grid.theta {
                            for &ph in &grid.phi {
                                out.push([a, ra, rb, dphi, dz, th, ph]);
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

fn value_columns(cfg: &ScanConfig, scenario: Scenario) -> Vec<String> {
    let mut c: Vec<String> = Vec::new();
    let mut add = |names: &[&str]| c.extend(names.iter().map(|s| s.to_string()));
    match scenario {
        Scenario::Channels => {
            add(&["u_total_ghz", "u0_ghz", "vacuum_allowed_ghz", "fibre_enabled_ghz", "vacuum_allowed_over_u0", "fibre_enabled_over_u0"]);
            let names: Vec<String> = Channel::ALL.iter().map(|ch| format!("channel:{}", ch.label())).collect();
            c.extend(names);
        }
        Scenario::Quad => {
            for m in methods(cfg) {
                let m = method_name(m);
                c.extend([format!("u_dd_{m}_ghz"), format!("u_quad_{m}_ghz"), format!("quad_fraction_{m}")]);
            }
        }
        _ => {
            if cfg.solver.pt2() {
                add(&[
                    "u_pt2_ghz",
                    "u0_pt2_ghz",
                    "ratio_pt2",
                    "path_vac_vac_ghz",
                    "path_vac_fib_ghz",
                    "path_fib_fib_ghz",
                    "first_order_ghz",
                ]);
                if cfg.quadrupole {
                    add(&["quadrupole_pt2_ghz"]);
                }
            }
            if cfg.solver.diag() {
                add(&["u_diag_ghz", "u0_diag_ghz", "ratio_diag", "overlap_min", "manifold_spread_ghz"]);
            }
            add(&["model:pipi_ratio"]);
            if scenario == Scenario::ScanAxis {
                add(&["model:sigma_plus", "model:eta1", "model:eta2"]);
            }
        }
    }
    c.push("basis_size".into());
    c
}

fn methods(cfg: &ScanConfig) -> Vec<Method> {
    let mut m = Vec::new();
    if cfg.solver.pt2() {
        m.push(Method::Pt2);
    }
    if cfg.solver.diag() {
        m.push(Method::Diag);
    }
    m
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Pt2 => "pt2",
        Method::Diag => "diag",
    }
}

fn geometric(inputs: &Inputs, scenario: Scenario) -> Result<(Vec<String>, Vec<Record>), CliError> {
    let cfg = inputs.config;
    let env = cfg.environment()?;
    let grid = cfg.grid()?;
    let (a, b) = cfg.states()?;
    let window: BasisWindow = cfg.basis.window(&a, &b);
    let basis = build_basis(inputs.atom, (a, b), &window, cfg.quadrupole, cfg.manifold(&a, &b));
    let pts = points(&grid);
    let records: Vec<Record> = pts
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            let mut r = Record::new(i);
            for (k, name) in GEOMETRY_COLUMNS.iter().enumerate() {
                let v = if matches!(k, 0 | 1 | 2 | 4) { p[k] / 1000.0 } else { p[k] };
                r.set(*name, v);
            }
            match &basis {
                Ok(b) => {
                    r.set("basis_size", b.len() as f64);
                    let axis = QuantizationAxis::new(p[5], p[6]);
                    let g = PairGeometry { fibre_radius: p[0], r_a: p[1], r_b: p[2], dphi: p[3], dz: p[4], axis };
                    evaluate(inputs, scenario, &env, b, &g, &mut r);
                }
                Err(e) => r.errors.push(PointError::new(e)),
            }
            r
        })
        .collect();
    let mut columns = strings(&GEOMETRY_COLUMNS);
    columns.extend(value_columns(cfg, scenario));
    Ok((columns, records))
}

fn evaluate(inputs: &Inputs, scenario: Scenario, env: &Environment, b: &PairBasis, g: &PairGeometry, r: &mut Record) {
    let cfg = inputs.config;
    let atom = inputs.atom;
    let grads = cfg.quadrupole;
    let Some(prop) = r.keep(propagator(g, env, grads)) else { return };
    let axis = g.axis;
    match scenario {
        Scenario::Channels => {
            if let Some(c) = r.keep(channel_contributions(atom, b, &axis, &prop, &cfg.pt2)) {
                r.set("u_total_ghz", c.u_total);
                r.set("u0_ghz", c.u0);
                r.set("vacuum_allowed_ghz", c.vacuum_allowed);
                r.set("fibre_enabled_ghz", c.fibre_enabled);
                r.set("vacuum_allowed_over_u0", c.vacuum_allowed_over_u0);
                r.set("fibre_enabled_over_u0", c.fibre_enabled_over_u0);
                for ch in Channel::ALL {
                    r.set(format!("channel:{}", ch.label()), c.channels.get(&ch).copied().unwrap_or(0.0));
                }
            }
        }
        Scenario::Quad => {
            for m in methods(cfg) {
                let name = method_name(m);
                let with = r.keep(shift(inputs, b, &axis, &prop, m));
                let dd = match m {
                    Method::Pt2 => r.keep(pt2(atom, b, &axis, &prop, &ChannelFilter::dipole_only(), &cfg.pt2).map(|p| p.u_total)),
                    Method::Diag => {
                        r.keep(diag_shift(atom, b, &axis, &prop, &ChannelFilter::dipole_only(), cfg.basis.max_size).map(|d| d.shift))
                    }
                };
                if let (Some(with), Some(dd)) = (with, dd) {
                    r.set(format!("u_dd_{name}_ghz"), dd);
                    r.set(format!("u_quad_{name}_ghz"), with - dd);
                    r.set(format!("quad_fraction_{name}"), (with - dd) / dd);
                }
            }
        }
        _ => {
            let vac = if env.is_vacuum() { None } else { r.keep(propagator(g, &Environment::Vacuum, grads)) };
            let vac = vac.as_ref().unwrap_or(&prop);
            if cfg.solver.pt2() {
                let full: Option<PotentialBreakdown> = r.keep(pt2(atom, b, &axis, &prop, &filter(cfg), &cfg.pt2));
                let free = r.keep(pt2(atom, b, &axis, vac, &filter(cfg), &cfg.pt2));
                if let Some(f) = &full {
                    r.set("u_pt2_ghz", f.u_total);
                    r.set("path_vac_vac_ghz", f.u0);
                    r.set("path_vac_fib_ghz", f.u_vacfib);
                    r.set("path_fib_fib_ghz", f.u_fibfib);
                    r.set("first_order_ghz", f.first_order);
                    if cfg.quadrupole {
                        r.set("quadrupole_pt2_ghz", f.quadrupole);
                    }
                }
                if let Some(v) = &free {
                    r.set("u0_pt2_ghz", v.u_total);
                }
                if let (Some(f), Some(v)) = (&full, &free) {
                    r.set("ratio_pt2", f.u_total / v.u_total);
                }
            }
            if cfg.solver.diag() {
                let full: Option<TrackedShift> = r.keep(diag_shift(atom, b, &axis, &prop, &filter(cfg), cfg.basis.max_size));
                let free = r.keep(diag_shift(atom, b, &axis, vac, &filter(cfg), cfg.basis.max_size));
                if let Some(f) = &full {
                    r.set("u_diag_ghz", f.shift);
                    r.set("overlap_min", f.overlaps.iter().copied().fold(f64::INFINITY, f64::min));
                    r.set("manifold_spread_ghz", f.spread());
                }
                if let Some(v) = &free {
                    r.set("u0_diag_ghz", v.shift);
                }
                if let (Some(f), Some(v)) = (&full, &free) {
                    r.set("ratio_diag", f.shift / v.shift);
                }
            }
            if g.is_lateral() {
                r.set("model:pipi_ratio", pipi_ratio(g.dz.abs(), prop.t1[(2, 2)]));
                if scenario == Scenario::ScanAxis {
                    let dz = g.dz.abs();
                    // vacuum maximum, reached at theta = pi/2
                    let norm = (3.0 / (4.0 * PI * dz.powi(3))).powi(2);
                    r.set("model:sigma_plus", sigma_model(axis.theta, axis.phi, dz, &prop.t1) / norm);
                    let c = EtaCoefficients::from_tensor(dz, &prop.t1);
                    r.set("model:eta1", c.eta1);
                    r.set("model:eta2", c.eta2);
                }
            }
        }
    }
}

fn strings(s: &[&str]) -> Vec<String> {
    s.iter().map(|s| s.to_string()).collect()
}
