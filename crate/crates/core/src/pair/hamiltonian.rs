use std::collections::HashMap;
use std::f64::consts::PI;

use faer::Mat;
use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

use super::channel::{coupling_kind, ChannelFilter, Coupling};
use super::PairBasis;
use crate::atomic::{Atom, AtomState, QuantizationAxis};
use crate::error::{Error, Result};
use crate::propagators::{GradientBlock, PropagatorTensor, Tensor3, Tensor4};
use crate::units::{inv_nm_pow_to_bohr, HARTREE_GHZ};

/// Largest basis the dense assembly accepts unless told otherwise.
pub const DEFAULT_MAX_BASIS: usize = 6000;

type C = Complex64;

/// Matrix element split into its free-space and surface-reflected parts (GHz).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SplitElement {
    pub free: C,
    pub reflected: C,
}

impl SplitElement {
    pub fn total(&self) -> C {
        self.free + self.reflected
    }
}

/// One propagator part rescaled so that contracting it with atomic-unit
/// multipoles gives GHz.
#[derive(Debug, Clone)]
struct ScaledPart {
    t: Matrix3<f64>,
    grad_a: Tensor3,
    grad_b: Tensor3,
    hess_ab: Tensor4,
}

impl ScaledPart {
    fn new(t: &Matrix3<f64>, grads: Option<&GradientBlock>) -> Self {
        let s = 4.0 * PI * HARTREE_GHZ;
        let g = grads.copied().unwrap_or(GradientBlock::ZERO);
        let (s3, s4, s5) = (s * inv_nm_pow_to_bohr(3), s * inv_nm_pow_to_bohr(4), s * inv_nm_pow_to_bohr(5));
        let mut out = Self { t: t * s3, grad_a: g.grad_a, grad_b: g.grad_b, hess_ab: g.hess_ab };
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    out.grad_a[i][j][k] *= s4;
                    out.grad_b[i][j][k] *= s4;
                    for l in 0..3 {
                        out.hess_ab[i][j][k][l] *= s5;
                    }
                }
            }
        }
        out
    }

    /// `d_A . T . d_B`
    fn dd(&self, da: &Vector3<C>, db: &Vector3<C>) -> C {
        let mut acc = C::new(0.0, 0.0);
        for i in 0..3 {
            for j in 0..3 {
                acc += da[i] * self.t[(i, j)] * db[j];
            }
        }
        acc
    }

    /// `d_A . (T (x) grad_B) : Q_B = sum d_i (d_{B,k} T_ij) Q_kj`
    fn dq(&self, da: &Vector3<C>, qb: &Matrix3<C>) -> C {
        let mut acc = C::new(0.0, 0.0);
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    acc += da[i] * self.grad_b[i][j][k] * qb[(k, j)];
                }
            }
        }
        acc
    }

    /// `Q_A : (grad_A (x) T) . d_B = sum Q_ik (d_{A,k} T_ij) d_j`
    fn qd(&self, qa: &Matrix3<C>, db: &Vector3<C>) -> C {
        let mut acc = C::new(0.0, 0.0);
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    acc += qa[(i, k)] * self.grad_a[i][j][k] * db[j];
                }
            }
        }
        acc
    }

    /// `Q_A : (grad_A (x) T (x) grad_B) : Q_B = sum Q_ik (d_{A,k} d_{B,l} T_ij) Q_lj`
    fn qq(&self, qa: &Matrix3<C>, qb: &Matrix3<C>) -> C {
        let mut acc = C::new(0.0, 0.0);
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        acc += qa[(i, k)] * self.hess_ab[i][j][k][l] * qb[(l, j)];
                    }
                }
            }
        }
        acc
    }
}

/// Transition multipoles among the distinct single-atom states of one atom.
///
/// Entries are indexed `[to * n + from]` and already carry the electron charge:
/// `d = -<to|r|from>`, `Q = <to| -(1/2) r r |from>`.
#[derive(Debug)]
struct Multipoles {
    index: HashMap<AtomState, usize>,
    n: usize,
    dipole: Vec<Option<Vector3<C>>>,
    quadrupole: Vec<Option<Matrix3<C>>>,
    /// For each `from`, the `to` states with a nonzero multipole.
    reachable: Vec<Vec<usize>>,
}

impl Multipoles {
    fn new(atom: &Atom, states: &[AtomState], axis: &QuantizationAxis, quadrupole: bool) -> Result<Self> {
        let mut uniq: Vec<AtomState> = states.to_vec();
        uniq.sort();
        uniq.dedup();
        let n = uniq.len();
        let index = uniq.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let mut dipole = vec![None; n * n];
        let mut quad = vec![None; n * n];
        for (t, to) in uniq.iter().enumerate() {
            for (f, from) in uniq.iter().enumerate() {
                if Atom::dipole_coupled(from, to) {
                    dipole[t * n + f] = Some(-atom.dipole_vector(from, to, axis)?);
                } else if quadrupole && (Atom::quadrupole_coupled(from, to) || (to.l > 0 && to.l == from.l && to.j2 == from.j2 && to.mj2 == from.mj2)) {
                    quad[t * n + f] = Some(atom.quadrupole_tensor(from, to, axis)?);
                }
            }
        }
        let reachable = (0..n)
            .map(|f| (0..n).filter(|&t| dipole[t * n + f].is_some() || quad[t * n + f].is_some()).collect())
            .collect();
        Ok(Self { index, n, dipole, quadrupole: quad, reachable })
    }
}

/// Matrix-element engine for one basis at one geometry point.
///
/// Implements `H = (1/eps0)[d.T.d + d.(T(x)grad).Q + Q.(grad(x)T).d + Q.(grad(x)T(x)grad).Q]`
/// with every quadrupole contraction using the Frobenius rule `a : b = sum a_ij b_ji`.
#[derive(Debug)]
pub struct PairCouplings<'a> {
    basis: &'a PairBasis,
    filter: ChannelFilter,
    a: Multipoles,
    b: Multipoles,
    /// Per basis state, the index of its A and B state in the multipole tables.
    slots: Vec<(usize, usize)>,
    parts: [ScaledPart; 2],
}

impl<'a> PairCouplings<'a> {
    pub fn new(
        atom: &Atom,
        basis: &'a PairBasis,
        axis: &QuantizationAxis,
        propagator: &PropagatorTensor,
        filter: &ChannelFilter,
    ) -> Result<Self> {
        let quad = basis.quadrupole && filter.wants_quadrupole();
        if quad && (propagator.grad0.is_none() || propagator.grad1.is_none()) {
            return Err(Error::InvalidInput("quadrupole couplings need propagator gradients".into()));
        }
        let sa: Vec<AtomState> = basis.states.iter().map(|s| s.a).collect();
        let sb: Vec<AtomState> = basis.states.iter().map(|s| s.b).collect();
        let a = Multipoles::new(atom, &sa, axis, quad)?;
        let b = Multipoles::new(atom, &sb, axis, quad)?;
        let slots = basis.states.iter().map(|s| (a.index[&s.a], b.index[&s.b])).collect();
        Ok(Self {
            basis,
            filter: *filter,
            a,
            b,
            slots,
            parts: [
                ScaledPart::new(&propagator.t0, propagator.grad0.as_ref()),
                ScaledPart::new(&propagator.t1, propagator.grad1.as_ref()),
            ],
        })
    }

    pub fn basis(&self) -> &PairBasis {
        self.basis
    }

    /// `<i| V |j>`, zero for couplings rejected by the filter.
    pub fn element(&self, i: usize, j: usize) -> SplitElement {
        let (si, sj) = (&self.basis.states[i], &self.basis.states[j]);
        let Some(kind) = coupling_kind(sj, si) else {
            return SplitElement::default();
        };
        if !self.filter.allows(kind) {
            return SplitElement::default();
        }
        let ka = self.slots[i].0 * self.a.n + self.slots[j].0;
        let kb = self.slots[i].1 * self.b.n + self.slots[j].1;
        let eval = |p: &ScaledPart| -> C {
            match kind {
                Coupling::Dipole(_) => match (&self.a.dipole[ka], &self.b.dipole[kb]) {
                    (Some(da), Some(db)) => p.dd(da, db),
                    _ => C::new(0.0, 0.0),
                },
                Coupling::DipoleQuadrupole => match (&self.a.dipole[ka], &self.b.quadrupole[kb]) {
                    (Some(da), Some(qb)) => p.dq(da, qb),
                    _ => C::new(0.0, 0.0),
                },
                Coupling::QuadrupoleDipole => match (&self.a.quadrupole[ka], &self.b.dipole[kb]) {
                    (Some(qa), Some(db)) => p.qd(qa, db),
                    _ => C::new(0.0, 0.0),
                },
                Coupling::QuadrupoleQuadrupole => match (&self.a.quadrupole[ka], &self.b.quadrupole[kb]) {
                    (Some(qa), Some(qb)) => p.qq(qa, qb),
                    _ => C::new(0.0, 0.0),
                },
            }
        };
        SplitElement { free: eval(&self.parts[0]), reflected: eval(&self.parts[1]) }
    }

    /// Basis pairs `(i, j)` with `i <= j` whose element can be nonzero,
    /// ordered by `j` then `i`.
    pub fn pattern(&self) -> Vec<(usize, usize)> {
        let mut by_a: Vec<Vec<usize>> = vec![Vec::new(); self.a.n];
        for (i, &(ia, _)) in self.slots.iter().enumerate() {
            by_a[ia].push(i);
        }
        let mut out = Vec::new();
        for (j, &(ja, jb)) in self.slots.iter().enumerate() {
            let start = out.len();
            for &ia in &self.a.reachable[ja] {
                for &i in &by_a[ia] {
                    let ib = self.slots[i].1;
                    let kb = ib * self.b.n + jb;
                    if i <= j && (self.b.dipole[kb].is_some() || self.b.quadrupole[kb].is_some()) {
                        out.push((i, j));
                    }
                }
            }
            out[start..].sort_unstable();
        }
        out
    }

    /// Nonzero couplings over `pattern`, upper triangle including the diagonal.
    pub fn sparse(&self, pattern: &[(usize, usize)]) -> SparseCouplings {
        let entries = pattern
            .iter()
            .filter_map(|&(i, j)| {
                let e = self.element(i, j);
                (e.free != C::new(0.0, 0.0) || e.reflected != C::new(0.0, 0.0)).then_some((i, j, e))
            })
            .collect();
        SparseCouplings { detunings: self.basis.states.iter().map(|s| s.detuning).collect(), entries }
    }

    /// Coupling columns `V[:, cols]` for every basis row, split by part.
    pub fn columns(&self, cols: std::ops::Range<usize>) -> (Mat<C>, Mat<C>) {
        let n = self.basis.len();
        let m = cols.len();
        let mut free = Mat::<C>::zeros(n, m);
        let mut refl = Mat::<C>::zeros(n, m);
        for (c, j) in cols.enumerate() {
            for i in 0..n {
                let e = self.element(i, j);
                free[(i, c)] = e.free;
                refl[(i, c)] = e.reflected;
            }
        }
        (free, refl)
    }

    /// Full coupling matrices. Only the upper triangle is evaluated; the lower
    /// one is its conjugate.
    pub fn matrix(&self, max_basis: usize) -> Result<InteractionMatrix> {
        let n = self.basis.len();
        if n > max_basis {
            return Err(Error::BasisTooLarge { size: n, max: max_basis });
        }
        let mut free = Mat::<C>::zeros(n, n);
        let mut refl = Mat::<C>::zeros(n, n);
        for j in 0..n {
            for i in 0..=j {
                let e = self.element(i, j);
                free[(i, j)] = e.free;
                refl[(i, j)] = e.reflected;
                free[(j, i)] = e.free.conj();
                refl[(j, i)] = e.reflected.conj();
            }
        }
        Ok(InteractionMatrix {
            detunings: self.basis.states.iter().map(|s| s.detuning).collect(),
            free,
            reflected: refl,
        })
    }
}

/// Assembled pair Hamiltonian in GHz, relative to the initial pair energy.
///
/// The diagonal holds the pair energies `-Delta_kl`, so the initial pair sits
/// at zero and a state above it has a negative detuning.
#[derive(Debug, Clone)]
pub struct InteractionMatrix {
    pub detunings: Vec<f64>,
    pub free: Mat<C>,
    pub reflected: Mat<C>,
}

impl InteractionMatrix {
    pub fn dim(&self) -> usize {
        self.detunings.len()
    }

    pub fn coupling(&self) -> Mat<C> {
        &self.free + &self.reflected
    }

    /// `diag(-Delta) + lambda V`.
    pub fn hamiltonian(&self, lambda: f64) -> Mat<C> {
        let n = self.dim();
        Mat::from_fn(n, n, |i, j| {
            let v = (self.free[(i, j)] + self.reflected[(i, j)]) * lambda;
            if i == j {
                v - self.detunings[i]
            } else {
                v
            }
        })
    }

    pub fn total(&self) -> Mat<C> {
        self.hamiltonian(1.0)
    }
}

/// Upper-triangle coupling list with the same content as [`InteractionMatrix`].
#[derive(Debug, Clone)]
pub struct SparseCouplings {
    pub detunings: Vec<f64>,
    pub entries: Vec<(usize, usize, SplitElement)>,
}

impl SparseCouplings {
    /// `diag(-Delta) + lambda V`.
    pub fn hamiltonian(&self, lambda: f64) -> SparseHermitian {
        let mut diagonal: Vec<f64> = self.detunings.iter().map(|d| -d).collect();
        let mut upper = Vec::with_capacity(self.entries.len());
        for &(i, j, e) in &self.entries {
            let v = e.total() * lambda;
            if i == j {
                diagonal[i] += v.re;
            } else if v != C::new(0.0, 0.0) {
                upper.push((i, j, v));
            }
        }
        SparseHermitian { diagonal, upper }
    }
}

/// Hermitian matrix given by its real diagonal and strict upper triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseHermitian {
    pub diagonal: Vec<f64>,
    pub upper: Vec<(usize, usize, C)>,
}

impl SparseHermitian {
    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    /// Collects the nonzero entries of a dense Hermitian matrix (upper triangle read).
    pub fn from_dense(h: faer::MatRef<'_, C>) -> Self {
        let n = h.nrows();
        let mut upper = Vec::new();
        for j in 0..n {
            for i in 0..j {
                if h[(i, j)] != C::new(0.0, 0.0) {
                    upper.push((i, j, h[(i, j)]));
                }
            }
        }
        Self { diagonal: (0..n).map(|i| h[(i, i)].re).collect(), upper }
    }
}

/// Assembles the full interaction matrix with the default size guard.
pub fn assemble(
    atom: &Atom,
    basis: &PairBasis,
    axis: &QuantizationAxis,
    propagator: &PropagatorTensor,
    filter: &ChannelFilter,
) -> Result<InteractionMatrix> {
    if basis.len() > DEFAULT_MAX_BASIS {
        return Err(Error::BasisTooLarge { size: basis.len(), max: DEFAULT_MAX_BASIS });
    }
    PairCouplings::new(atom, basis, axis, propagator, filter)?.matrix(DEFAULT_MAX_BASIS)
}
