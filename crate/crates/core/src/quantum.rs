//! Dense multiqubit operators, states, observables and noise models.
//!
//! Conventions: ħ = 1, and site 0 is the leftmost Kronecker factor, so the
//! basis state `|q0 q1 … q_{n-1}⟩` has index `q0·2^{n-1} + … + q_{n-1}`.

use std::fmt;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

pub type C64 = nalgebra::Complex<f64>;
pub type CMatrix = DMatrix<C64>;

/// Largest supported register.
pub const MAX_QUBITS: usize = 5;

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const PSD_TOL: f64 = -1e-10;
const IMAG_TOL: f64 = 1e-10;
/// Eigenvalues closer than this are merged into one measurement outcome.
const DEGENERACY_TOL: f64 = 1e-9;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

pub fn pauli_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)])
}

pub fn pauli_y() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)])
}

pub fn pauli_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)])
}

/// `|0⟩⟨1|`, the amplitude-damping (relaxation) operator.
pub fn lowering() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(0., 0.), c(0., 0.)])
}

fn check_qubits(qubits: usize) -> Result<()> {
    if qubits == 0 || qubits > MAX_QUBITS {
        return Err(Error::Config(format!(
            "qubit count {qubits} outside supported range 1..={MAX_QUBITS}"
        )));
    }
    Ok(())
}

/// `I ⊗ … ⊗ op ⊗ … ⊗ I` with `op` at position `site`.
pub fn embed_single_site(op: &CMatrix, site: usize, qubits: usize) -> Result<CMatrix> {
    check_qubits(qubits)?;
    if op.nrows() != 2 || op.ncols() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: op.nrows().max(op.ncols()),
        });
    }
    if site >= qubits {
        return Err(Error::SiteOutOfRange { site, qubits });
    }
    let left = identity(1 << site);
    let right = identity(1 << (qubits - site - 1));
    Ok(left.kronecker(op).kronecker(&right))
}

/// Tensor product of single-qubit Paulis, e.g. `"ZXI"`; site 0 is the first character.
pub fn pauli_string(labels: &str) -> Result<CMatrix> {
    let qubits = labels.chars().count();
    check_qubits(qubits)?;
    let mut out = identity(1);
    for ch in labels.chars() {
        let factor = match ch.to_ascii_uppercase() {
            'I' => identity(2),
            'X' => pauli_x(),
            'Y' => pauli_y(),
            'Z' => pauli_z(),
            other => return Err(Error::Config(format!("unknown Pauli label '{other}'"))),
        };
        out = out.kronecker(&factor);
    }
    Ok(out)
}

pub fn qubits_for_dim(dim: usize) -> Option<usize> {
    if dim >= 2 && dim.is_power_of_two() {
        Some(dim.trailing_zeros() as usize)
    } else {
        None
    }
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Largest entrywise modulus of `m - m†`.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

fn require_square(m: &CMatrix) -> Result<()> {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return Err(Error::InvalidMatrix(format!(
            "expected a non-empty square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(())
}

fn require_finite(m: &CMatrix) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidMatrix("non-finite entry".into()))
    }
}

/// Hermitian, unit-trace, positive semidefinite state.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let rho = Self::from_matrix_unchecked(matrix)?;
        let herm = hermiticity_defect(&rho.matrix);
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (defect {herm:e})")));
        }
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        rho.check_positive()?;
        Ok(rho)
    }

    /// Wraps an integrator output. Only shape and finiteness are checked; the
    /// caller is responsible for reporting trace and Hermiticity drift.
    pub(crate) fn from_matrix_unchecked(matrix: CMatrix) -> Result<Self> {
        require_square(&matrix)?;
        require_finite(&matrix)?;
        Ok(Self { matrix })
    }

    /// `|ψ⟩⟨ψ|` for a (not necessarily normalized) state vector.
    pub fn from_pure(psi: &DVector<C64>) -> Result<Self> {
        let norm = psi.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidState("zero or non-finite state vector".into()));
        }
        let psi = psi / C64::from(norm);
        Self::new(&psi * psi.adjoint())
    }

    /// Computational basis state from a bit string such as `"01"`.
    pub fn basis(bits: &str) -> Result<Self> {
        Self::product(bits)
    }

    /// Product of single-qubit states labelled `0`, `1`, `+`, `-`, `r` (|+i⟩), `l` (|−i⟩).
    pub fn product(labels: &str) -> Result<Self> {
        let qubits = labels.chars().count();
        check_qubits(qubits)?;
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut psi = DVector::from_element(1, c(1., 0.));
        for ch in labels.chars() {
            let local = match ch {
                '0' => [c(1., 0.), c(0., 0.)],
                '1' => [c(0., 0.), c(1., 0.)],
                '+' => [c(h, 0.), c(h, 0.)],
                '-' => [c(h, 0.), c(-h, 0.)],
                'r' | 'R' => [c(h, 0.), c(0., h)],
                'l' | 'L' => [c(h, 0.), c(0., -h)],
                other => return Err(Error::Config(format!("unknown state label '{other}'"))),
            };
            psi = psi.kronecker(&DVector::from_column_slice(&local));
        }
        Self::from_pure(&psi)
    }

    pub fn maximally_mixed(qubits: usize) -> Result<Self> {
        check_qubits(qubits)?;
        let dim = 1usize << qubits;
        Self::new(identity(dim) / C64::from(dim as f64))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        let herm = (&self.matrix + self.matrix.adjoint()) * C64::from(0.5);
        SymmetricEigen::new(herm).eigenvalues.min()
    }

    /// Optional positivity check; integrators are not positivity preserving.
    pub fn check_positive(&self) -> Result<()> {
        let min = self.min_eigenvalue();
        if min < PSD_TOL {
            return Err(Error::InvalidState(format!(
                "not positive semidefinite (min eigenvalue {min:e})"
            )));
        }
        Ok(())
    }

    pub fn kron(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix {
            matrix: self.matrix.kronecker(&other.matrix),
        }
    }
}

/// Hermitian observable with its spectral decomposition, degenerate
/// eigenvalues merged into a single projector.
#[derive(Clone, Debug)]
pub struct Observable {
    matrix: CMatrix,
    eigenvalues: Vec<f64>,
    projectors: Vec<CMatrix>,
}

impl Observable {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        require_square(&matrix)?;
        require_finite(&matrix)?;
        let defect = hermiticity_defect(&matrix);
        if defect > HERMITIAN_TOL {
            return Err(Error::InvalidMatrix(format!(
                "observable is not Hermitian (defect {defect:e})"
            )));
        }
        let eig = SymmetricEigen::new(matrix.clone());
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

        let dim = matrix.nrows();
        let mut eigenvalues: Vec<f64> = Vec::new();
        let mut projectors: Vec<CMatrix> = Vec::new();
        let mut members: Vec<usize> = Vec::new();
        for &k in &order {
            let value = eig.eigenvalues[k];
            let v = eig.eigenvectors.column(k);
            let proj = v * v.adjoint();
            match eigenvalues.last() {
                Some(&last) if (value - last).abs() <= DEGENERACY_TOL => {
                    let n = members.last_mut().unwrap();
                    *projectors.last_mut().unwrap() += proj;
                    // running mean of the merged eigenvalues
                    *n += 1;
                    let e = eigenvalues.last_mut().unwrap();
                    *e += (value - *e) / *n as f64;
                }
                _ => {
                    eigenvalues.push(value);
                    projectors.push(proj);
                    members.push(1);
                }
            }
        }
        debug_assert_eq!(members.iter().sum::<usize>(), dim);
        Ok(Self {
            matrix,
            eigenvalues,
            projectors,
        })
    }

    pub fn pauli(labels: &str) -> Result<Self> {
        Self::new(pauli_string(labels)?)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Distinct eigenvalues, ascending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Spectral projectors matching [`Observable::eigenvalues`].
    pub fn projectors(&self) -> &[CMatrix] {
        &self.projectors
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum JumpKind {
    Relaxation,
    Dephasing,
    Custom(String),
}

impl fmt::Display for JumpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JumpKind::Relaxation => f.write_str("relaxation"),
            JumpKind::Dephasing => f.write_str("dephasing"),
            JumpKind::Custom(tag) => write!(f, "custom:{tag}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JumpLabel {
    pub site: Option<usize>,
    pub kind: JumpKind,
}

impl fmt::Display for JumpLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.site {
            Some(site) => write!(f, "{}[{}]", self.kind, site),
            None => write!(f, "{}", self.kind),
        }
    }
}

/// Jump operator `L` together with the cached product `L†L`.
#[derive(Clone, Debug)]
pub struct JumpOperator {
    matrix: CMatrix,
    gram: CMatrix,
    label: JumpLabel,
}

impl JumpOperator {
    fn with_label(matrix: CMatrix, label: JumpLabel) -> Self {
        let gram = matrix.adjoint() * &matrix;
        Self {
            matrix,
            gram,
            label,
        }
    }

    /// Arbitrary jump operator, e.g. a correlated `Z⊗Z` dephasing term.
    pub fn custom(tag: impl Into<String>, matrix: CMatrix) -> Result<Self> {
        require_square(&matrix)?;
        require_finite(&matrix)?;
        if qubits_for_dim(matrix.nrows()).is_none() {
            return Err(Error::InvalidMatrix(format!(
                "dimension {} is not a power of two",
                matrix.nrows()
            )));
        }
        Ok(Self::with_label(
            matrix,
            JumpLabel {
                site: None,
                kind: JumpKind::Custom(tag.into()),
            },
        ))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// `L†L`.
    pub fn gram(&self) -> &CMatrix {
        &self.gram
    }

    pub fn label(&self) -> &JumpLabel {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

pub fn relaxation_jump(site: usize, qubits: usize) -> Result<JumpOperator> {
    let m = embed_single_site(&lowering(), site, qubits)?;
    Ok(JumpOperator::with_label(
        m,
        JumpLabel {
            site: Some(site),
            kind: JumpKind::Relaxation,
        },
    ))
}

pub fn dephasing_jump(site: usize, qubits: usize) -> Result<JumpOperator> {
    let m = embed_single_site(&pauli_z(), site, qubits)?;
    Ok(JumpOperator::with_label(
        m,
        JumpLabel {
            site: Some(site),
            kind: JumpKind::Dephasing,
        },
    ))
}

#[derive(Clone, Debug)]
pub struct NoiseTerm {
    pub jump: JumpOperator,
    /// Rate in inverse time units.
    pub rate: f64,
}

/// Weighted sum of dissipators `Σ_i λ_i 𝓛_i`.
#[derive(Clone, Debug, Default)]
pub struct NoiseModel {
    terms: Vec<NoiseTerm>,
}

impl NoiseModel {
    pub fn new(terms: Vec<NoiseTerm>) -> Result<Self> {
        if let Some(first) = terms.first() {
            let dim = first.jump.dim();
            for t in &terms {
                if t.jump.dim() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        found: t.jump.dim(),
                    });
                }
            }
        }
        for t in &terms {
            if !(t.rate >= 0.0) || !t.rate.is_finite() {
                return Err(Error::InvalidNoise(format!(
                    "rate {} for {} must be finite and non-negative",
                    t.rate,
                    t.jump.label()
                )));
            }
        }
        Ok(Self { terms })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// Independent relaxation and dephasing on every qubit, the T1/T2 model.
    /// Rates are given per qubit as `(relaxation, dephasing)`.
    pub fn t1_t2(rates: &[(f64, f64)]) -> Result<Self> {
        let q = rates.len();
        let mut terms = Vec::with_capacity(2 * q);
        for (site, &(relax, dephase)) in rates.iter().enumerate() {
            terms.push(NoiseTerm {
                jump: relaxation_jump(site, q)?,
                rate: relax,
            });
            terms.push(NoiseTerm {
                jump: dephasing_jump(site, q)?,
                rate: dephase,
            });
        }
        Self::new(terms)
    }

    pub fn terms(&self) -> &[NoiseTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The rate vector λ̄.
    pub fn rates(&self) -> Vec<f64> {
        self.terms.iter().map(|t| t.rate).collect()
    }

    /// Same jump operators with a new rate vector.
    pub fn with_rates(&self, rates: &[f64]) -> Result<Self> {
        if rates.len() != self.terms.len() {
            return Err(Error::DimensionMismatch {
                expected: self.terms.len(),
                found: rates.len(),
            });
        }
        let terms = self
            .terms
            .iter()
            .zip(rates)
            .map(|(t, &rate)| NoiseTerm {
                jump: t.jump.clone(),
                rate,
            })
            .collect();
        Self::new(terms)
    }

    /// True when some `rate·horizon ≥ 0.5`, i.e. the weak-noise expansion is
    /// unlikely to hold. Advisory only.
    pub fn weak_noise_advisory(&self, horizon: f64) -> bool {
        self.terms.iter().any(|t| t.rate * horizon >= 0.5)
    }

    pub fn dim(&self) -> Option<usize> {
        self.terms.first().map(|t| t.jump.dim())
    }
}

/// `Re Tr(𝓞ρ)`; errors if the imaginary part exceeds 1e-10.
pub fn expectation(obs: &Observable, rho: &DensityMatrix) -> Result<f64> {
    trace_product(obs.matrix(), rho.matrix())
}

pub(crate) fn trace_product(a: &CMatrix, b: &CMatrix) -> Result<f64> {
    if a.nrows() != b.nrows() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            found: b.nrows(),
        });
    }
    let n = a.nrows();
    let mut tr = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            tr += a[(i, j)] * b[(j, i)];
        }
    }
    if tr.im.abs() > IMAG_TOL {
        return Err(Error::ImaginaryExpectation(tr.im));
    }
    Ok(tr.re)
}

/// `LρL† − ½(L†Lρ + ρL†L)`.
pub fn dissipator_apply(jump: &JumpOperator, rho: &CMatrix) -> Result<CMatrix> {
    if jump.dim() != rho.nrows() || rho.nrows() != rho.ncols() {
        return Err(Error::DimensionMismatch {
            expected: jump.dim(),
            found: rho.nrows(),
        });
    }
    Ok(dissipator_unchecked(jump, rho))
}

pub(crate) fn dissipator_unchecked(jump: &JumpOperator, rho: &CMatrix) -> CMatrix {
    let l = jump.matrix();
    let gram = jump.gram();
    let half = C64::from(0.5);
    l * rho * l.adjoint() - (gram * rho + rho * gram) * half
}
