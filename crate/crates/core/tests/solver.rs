use std::f64::consts::PI;

use faer::Mat;
use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use proptest::prelude::*;
use rydfibre::models::pipi_ratio;
use rydfibre::pair::*;
use rydfibre::propagators::*;
use rydfibre::solver::*;
use rydfibre::units::{BOHR_NM, HARTREE_GHZ};
use rydfibre::*;

fn st(n: u32, l: u32, j2: u32, m2: i32) -> AtomState {
    AtomState::new(n, l, j2, m2).unwrap()
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn near_fibre(dz: f64) -> (PairGeometry, Environment) {
    (PairGeometry::lateral(200.0, 250.0, dz), Environment::HalfSpace { medium: Medium::SILICA })
}

fn restrict(basis: &PairBasis, keep: usize) -> PairBasis {
    let mut b = basis.clone();
    b.states.truncate(keep);
    b
}

#[test]
fn zero_coupling_gives_zero_shift() {
    let h = Mat::from_fn(5, 5, |i, j| if i == j { c(i as f64 * 3.0) } else { c(0.0) });
    let t = diagonalize_track(h.as_ref(), 0..1).unwrap();
    assert_eq!(t.shift, 0.0);
}

#[test]
fn two_level_closed_form() {
    let (v, d) = (0.03, 2.0);
    let h = Mat::from_fn(2, 2, |i, j| match (i, j) {
        (0, 0) => c(0.0),
        (1, 1) => c(d),
        _ => c(v),
    });
    let t = diagonalize_track(h.as_ref(), 0..1).unwrap();
    let exact = (d - (d * d + 4.0 * v * v).sqrt()) / 2.0;
    assert!((t.shift - exact).abs() < 1e-15);
    assert!((t.shift + v * v / d).abs() < 2.0 * v.powi(4) / d.powi(3));
}

#[test]
fn strong_mixing_is_reported() {
    let h = Mat::from_fn(2, 2, |i, j| if i == j { c(0.0) } else { c(1.0) });
    // exactly degenerate: both eigenvectors have weight 1/2, still trackable
    assert!(diagonalize_track(h.as_ref(), 0..1).is_ok());
    // initial state spread evenly over three eigenvectors
    let q = |i: usize, k: usize| Complex64::from_polar(1.0 / 3f64.sqrt(), 2.0 * PI * (i * k) as f64 / 3.0);
    let h = Mat::from_fn(3, 3, |i, j| (0..3).map(|k| q(i, k) * (k as f64 + 1.0) * q(j, k).conj()).sum::<Complex64>());
    match diagonalize_track(h.as_ref(), 0..1) {
        Err(Error::TrackingFailed { overlap }) => assert!((overlap - 1.0 / 3.0).abs() < 1e-12),
        other => panic!("{other:?}"),
    }
}

#[test]
fn tracking_is_phase_invariant() {
    let h = Mat::from_fn(4, 4, |i, j| {
        if i == j {
            c([0.0, 1.0, -2.0, 3.0][i])
        } else {
            Complex64::from_polar(0.05 * (i + j) as f64, 0.3 * (i as f64 - j as f64))
        }
    });
    let phases = [0.3, -1.2, 2.2, 0.7];
    let g = Mat::from_fn(4, 4, |i, j| {
        h[(i, j)] * Complex64::from_polar(1.0, phases[i]) * Complex64::from_polar(1.0, -phases[j])
    });
    let a = diagonalize_track(h.as_ref(), 0..2).unwrap();
    let b = diagonalize_track(g.as_ref(), 0..2).unwrap();
    assert!((a.shift - b.shift).abs() < 1e-13);
}

/// Second-order sum written directly from the dipole vectors and the
/// propagator, without the assembly code.
fn brute_force_pt2(atom: &Atom, basis: &PairBasis, axis: &QuantizationAxis, t: &Matrix3<f64>) -> f64 {
    let init = basis.initial();
    let mut u = 0.0;
    for s in &basis.states[basis.manifold_len..] {
        let (Ok(da), Ok(db)) = (atom.dipole_vector(&init.a, &s.a, axis), atom.dipole_vector(&init.b, &s.b, axis)) else {
            continue;
        };
        let tt: Matrix3<Complex64> = t.map(c);
        let v: Complex64 = (da.transpose() * tt * db)[(0, 0)];
        let scale = HARTREE_GHZ * 4.0 * PI * BOHR_NM.powi(3);
        u += (v * scale).norm_sqr() / s.detuning;
    }
    u
}

#[test]
fn pt2_matches_brute_force_oracle() {
    let atom = Atom::rubidium87();
    for (init, axis) in [
        ((st(30, 0, 1, 1), st(30, 0, 1, 1)), QuantizationAxis::Z),
        ((st(32, 1, 3, 3), st(32, 1, 3, 3)), QuantizationAxis::new(0.7, 0.4)),
        ((st(31, 2, 5, -1), st(31, 0, 1, 1)), QuantizationAxis::new(1.3, -0.2)),
    ] {
        let full = build_basis(&atom, init, &BasisWindow::around(init.0.n, 4), false, ManifoldMode::Single).unwrap();
        let basis = restrict(&full, 12);
        let g = PairGeometry { fibre_radius: 200.0, r_a: 260.0, r_b: 240.0, dphi: 0.2, dz: 500.0, axis };
        let env = Environment::HalfSpace { medium: Medium::SILICA };
        let prop = propagator(&g, &env, false).unwrap();
        let opts = Pt2Options { resonance_floor_ghz: 0.0, ..Pt2Options::default() };
        let got = pt2(&atom, &basis, &axis, &prop, &ChannelFilter::dipole_only(), &opts).unwrap();
        let want = brute_force_pt2(&atom, &basis, &axis, &prop.total());
        assert!((got.u_total - want).abs() <= 1e-12 * want.abs(), "{} vs {want}", got.u_total);
    }
}

#[test]
fn decomposition_and_channel_closure() {
    let atom = Atom::rubidium87();
    let s = st(30, 0, 1, 1);
    let basis = build_basis(&atom, (s, s), &BasisWindow::around(30, 4), false, ManifoldMode::Degenerate).unwrap();
    for dz in [300.0, 700.0, 2000.0] {
        let (g, env) = near_fibre(dz);
        let prop = propagator(&g, &env, false).unwrap();
        let b = pt2(&atom, &basis, &g.axis, &prop, &ChannelFilter::dipole_only(), &Pt2Options::default()).unwrap();
        let paths = b.u0 + b.u_vacfib + b.u_fibfib + b.first_order;
        assert!((paths - b.u_total).abs() <= 1e-10 * b.u_total.abs());
        let channels: f64 = b.channels.values().sum::<f64>() + b.quadrupole + b.first_order;
        assert!((channels - b.u_total).abs() <= 1e-10 * b.u_total.abs());
        assert!(b.channel(Channel::SigmaSame) != 0.0);
    }
}

#[test]
fn vacuum_has_no_surface_terms_and_is_repulsive_for_30s() {
    let atom = Atom::rubidium87();
    let s = st(30, 0, 1, 1);
    let basis = build_basis(&atom, (s, s), &BasisWindow::around(30, 10), false, ManifoldMode::Degenerate).unwrap();
    let g = PairGeometry::lateral(200.0, 250.0, 1000.0);
    let prop = propagator(&g, &Environment::Vacuum, false).unwrap();
    let b = pt2(&atom, &basis, &g.axis, &prop, &ChannelFilter::dipole_only(), &Pt2Options::default()).unwrap();
    assert_eq!(b.u_vacfib, 0.0);
    assert_eq!(b.u_fibfib, 0.0);
    assert_eq!(b.u_total, b.u0);
    assert!(b.u_total > 0.0);
    assert_eq!(b.channel(Channel::PiSigma), 0.0);
    assert_eq!(b.channel(Channel::SigmaSame), 0.0);
    // M_J independence of the S-pair shift
    let spread = b.manifold_shifts.iter().fold(0.0f64, |a, v| a.max((v - b.u_total).abs()));
    assert!(spread < 0.2 * b.u_total, "{:?}", b.manifold_shifts);
}

#[test]
fn diagonalization_approaches_pt2_for_weak_coupling() {
    let atom = Atom::rubidium87();
    let s = st(30, 0, 1, 1);
    let basis = build_basis(&atom, (s, s), &BasisWindow::around(30, 3), false, ManifoldMode::Single).unwrap();
    let (g, env) = near_fibre(500.0);
    let prop = propagator(&g, &env, false).unwrap();
    let filter = ChannelFilter::dipole_only();
    let u = pt2(&atom, &basis, &g.axis, &prop, &filter, &Pt2Options::default()).unwrap().u_total;
    let c = PairCouplings::new(&atom, &basis, &g.axis, &prop, &filter).unwrap();
    let sparse = c.sparse(&c.pattern());
    for lambda in [1e-2, 1e-3] {
        let shift = track_sparse(&sparse.hamiltonian(lambda), basis.manifold()).unwrap().shift;
        let rel = (shift / (lambda * lambda) - u).abs() / u.abs();
        assert!(rel < 50.0 * lambda * lambda + 1e-6, "lambda {lambda}: rel {rel}");
    }
}

#[test]
fn single_pi_pi_channel_reproduces_the_model_for_any_n() {
    let atom = Atom::rubidium87();
    let (g, env) = near_fibre(450.0);
    let prop = propagator(&g, &env, false).unwrap();
    let model = pipi_ratio(g.dz, prop.t1[(2, 2)]);
    for n in [30, 45] {
        let s = st(n, 0, 1, 1);
        let full = build_basis(&atom, (s, s), &BasisWindow::around(n, 10), false, ManifoldMode::Single).unwrap();
        // initial pair plus its strongest pi-pi partner
        let k = pt2(&atom, &full, &g.axis, &prop, &ChannelFilter::only(Channel::PiPi), &Pt2Options::default())
            .unwrap()
            .top[0]
            .index;
        let basis = PairBasis { states: vec![full.states[0], full.states[k]], ..full.clone() };
        let b = pt2(&atom, &basis, &g.axis, &prop, &ChannelFilter::only(Channel::PiPi), &Pt2Options::default()).unwrap();
        let ratio = b.u_total / b.u0;
        assert!((ratio - model).abs() < 1e-10 * model, "n={n}: {ratio} vs {model}");
    }
}

#[test]
fn quasi_resonance_is_refused() {
    let atom = Atom::rubidium87();
    let p = st(38, 1, 3, 3);
    let basis = build_basis(&atom, (p, p), &BasisWindow::around(38, 3), false, ManifoldMode::Single).unwrap();
    // the S(n)S(n+1) channel is sigma-sigma, so only the surface opens it
    let g = PairGeometry::lateral(200.0, 250.0, 2000.0);
    let prop = propagator(&g, &Environment::Vacuum, false).unwrap();
    assert!(pt2(&atom, &basis, &g.axis, &prop, &ChannelFilter::dipole_only(), &Pt2Options::default()).is_ok());
    let (g, env) = near_fibre(600.0);
    let prop = propagator(&g, &env, false).unwrap();
    let err = pt2(&atom, &basis, &g.axis, &prop, &ChannelFilter::dipole_only(), &Pt2Options::default()).unwrap_err();
    match err {
        Error::QuasiResonance { pair, detuning_ghz, .. } => {
            assert!(detuning_ghz.abs() < 0.5);
            assert!(pair.contains("38S") && pair.contains("39S"), "{pair}");
        }
        e => panic!("unexpected {e}"),
    }
}

#[test]
fn quadrupole_contribution() {
    let atom = Atom::rubidium87();
    let s = st(30, 0, 1, 1);
    let w = BasisWindow { cutoff_ghz: 200.0, ..BasisWindow::around(30, 3) };
    let g = PairGeometry::lateral(200.0, 250.0, 800.0);
    let prop = propagator(&g, &Environment::Vacuum, true).unwrap();
    let opts = Pt2Options::default();
    let dd = build_basis(&atom, (s, s), &w, false, ManifoldMode::Degenerate).unwrap();
    assert_eq!(quad_contribution(&atom, &dd, &g.axis, &prop, Method::Pt2, &opts, 5000).unwrap(), 0.0);
    let qb = build_basis(&atom, (s, s), &w, true, ManifoldMode::Degenerate).unwrap();
    let uq = quad_contribution(&atom, &qb, &g.axis, &prop, Method::Pt2, &opts, 5000).unwrap();
    let u = pt2(&atom, &qb, &g.axis, &prop, &ChannelFilter::dipole_only(), &opts).unwrap().u_total;
    assert!(uq != 0.0 && (uq / u).abs() < 0.05, "{uq} vs {u}");
}

#[test]
fn auto_widen_converges_for_30s() {
    let atom = Atom::rubidium87();
    let s = st(30, 0, 1, 1);
    let g = PairGeometry::lateral(200.0, 250.0, 1000.0);
    let prop = propagator(&g, &Environment::Vacuum, false).unwrap();
    let report = auto_widen(BasisWindow::around(30, 3), WIDEN_TOL, 10, |w| {
        let b = build_basis(&atom, (s, s), w, false, ManifoldMode::Degenerate)?;
        Ok(pt2(&atom, &b, &g.axis, &prop, &ChannelFilter::dipole_only(), &Pt2Options::default())?.u_total)
    })
    .unwrap();
    assert!(report.converged);
    let (_, last) = report.history[report.history.len() - 2];
    assert!((report.value - last).abs() < WIDEN_TOL * report.value.abs());
}

#[test]
fn fit_c6_exact_power_law() {
    let samples: Vec<(f64, f64)> = (0..20).map(|i| {
        let r = 0.5 + 0.1 * i as f64;
        (r, 0.37 / r.powi(6))
    }).collect();
    let f = fit_c6(&samples).unwrap();
    assert!((f.c6 + 0.37).abs() < 1e-15);
    assert!(f.residual < 1e-14);
    assert_eq!(f.r_vdw, 0.5);
}

#[test]
fn fit_c6_finds_the_asymptotic_window() {
    // U = A/r^6 (1 + b/r^3): deviation above 5% below r = (b/0.05)^(1/3)
    let (a, b) = (2.0, 0.3);
    let samples: Vec<(f64, f64)> = (0..60).map(|i| {
        let r = 0.3 + 0.05 * i as f64;
        (r, a / r.powi(6) * (1.0 + b / r.powi(3)))
    }).collect();
    let f = fit_c6(&samples).unwrap();
    assert!((f.c6 + a).abs() < 0.02 * a);
    assert!(f.r_vdw > 1.5 && f.r_vdw < 2.0, "{}", f.r_vdw);
}

#[test]
fn fit_c6_errors() {
    assert!(matches!(fit_c6(&[(1.0, 1.0), (2.0, 1.0), (3.0, 1.0)]), Err(Error::InvalidInput(_))));
    assert!(matches!(fit_c6(&[(1.0, 1.0), (0.5, 1.0), (3.0, 1.0), (4.0, 1.0)]), Err(Error::InvalidInput(_))));
    let flat: Vec<_> = (1..10).map(|i| (i as f64, 1.0 / i as f64)).collect();
    assert!(matches!(fit_c6(&flat), Err(Error::NoAsymptote)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn two_level_tracking_matches_closed_form(v in -0.5f64..0.5, d in prop_oneof![-20.0f64..-1.5, 1.5f64..20.0]) {
        let h = Mat::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => c(0.0),
            (1, 1) => c(d),
            _ => c(v),
        });
        let t = diagonalize_track(h.as_ref(), 0..1).unwrap();
        let exact = (d - d.signum() * (d * d + 4.0 * v * v).sqrt()) / 2.0;
        prop_assert!((t.shift - exact).abs() < 1e-12 * d.abs());
    }

    #[test]
    fn dipole_norm_is_axis_independent(theta in 0.0f64..PI, phi in 0.0f64..(2.0 * PI), m in 0usize..2) {
        let atom = Atom::rubidium87();
        let from = st(30, 0, 1, [-1, 1][m]);
        for to in [st(30, 1, 3, 3), st(30, 1, 3, 1), st(29, 1, 1, -1)] {
            let Ok(z) = atom.dipole_vector(&from, &to, &QuantizationAxis::Z) else { continue };
            let r = atom.dipole_vector(&from, &to, &QuantizationAxis::new(theta, phi)).unwrap();
            let n2 = |v: &Vector3<Complex64>| v.iter().map(|x| x.norm_sqr()).sum::<f64>();
            prop_assert!((n2(&z) - n2(&r)).abs() < 1e-12 * n2(&z));
        }
    }
}
