use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use rydfibre_cli::config::{Scenario, ScanConfig};
use rydfibre_cli::scan::{run, Inputs};
use rydfibre_cli::{load_atom, output, CliError};

const AFTER_HELP: &str = "\
CSV columns (lengths in um, angles in rad, energies in GHz; empty cell = not evaluated):
  scan-z, scan-phi, scan-axis, channels, quad:
    a_um, r_a_um, r_b_um, dphi_rad, dz_um, theta_rad, phi_rad, then
  scan-*:    u_pt2_ghz, u0_pt2_ghz, ratio_pt2, path_vac_vac_ghz, path_vac_fib_ghz,
             path_fib_fib_ghz, first_order_ghz, [quadrupole_pt2_ghz], u_diag_ghz,
             u0_diag_ghz, ratio_diag, overlap_min, manifold_spread_ghz,
             model:pipi_ratio, [scan-axis: model:sigma_plus, model:eta1, model:eta2]
  channels:  u_total_ghz, u0_ghz, vacuum_allowed_ghz, fibre_enabled_ghz,
             vacuum_allowed_over_u0, fibre_enabled_over_u0, channel:<name>
  quad:      u_dd_<method>_ghz, u_quad_<method>_ghz, quad_fraction_<method>
  c6-table:  n, c6_ghz_um6 (U = -C6/r^6), c6_alt_ghz_um6 (U = +C6/r^6), r_vdw_um,
             fit_residual, fit_points, failed_samples
  forster:   n, delta1_ghz, delta2_ghz, delta1_over_delta2,
             delta2_sign_change (1 on the first row after Delta2 changed sign)
  every scenario ends with basis_size (where applicable) and error.
Columns named model:* come from the closed-form models, not the full solver.

Exit codes: 0 success, 2 configuration error, 3 some points failed.";

/// Nonretarded van der Waals scans for Rydberg atom pairs near a nanofibre.
#[derive(Parser, Debug)]
#[command(version, after_help = AFTER_HELP)]
struct Args {
    /// Scenario to run; overrides the config file.
    scenario: Scenario,
    /// TOML or JSON configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `output.dir`.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Worker threads; overrides `threads`.
    #[arg(long)]
    threads: Option<usize>,
    /// Quantum-defect table; overrides `defects`.
    #[arg(long)]
    defects: Option<PathBuf>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(args) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("rydfibre: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(args: Args) -> Result<u8, CliError> {
    let mut cfg = ScanConfig::load(&args.config)?;
    cfg.scenario = Some(args.scenario);
    if let Some(d) = args.out_dir {
        cfg.output.dir = d;
    }
    if args.threads.is_some() {
        cfg.threads = args.threads;
    }
    if args.defects.is_some() {
        cfg.defects = args.defects;
    }
    cfg.validate()?;
    if let Some(n) = cfg.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Run(format!("thread pool: {e}")))?;
    }
    let (atom, provenance) = load_atom(cfg.defects.as_deref())?;
    let results = run(&Inputs { atom: &atom, config: &cfg, provenance })?;
    let stem = cfg.output.name.clone().unwrap_or_else(|| args.scenario.name().to_string());
    for path in output::emit(&results, &cfg.output.dir, &stem, &cfg.output.formats)? {
        eprintln!("wrote {}", path.display());
    }
    let failed = results.failed_points();
    eprintln!("{} points, {failed} failed", results.records.len());
    Ok(if failed > 0 { 3 } else { 0 })
}
