//! Dense complex states on structured Hilbert spaces.
//!
//! Every system handled here has `n <= 256`, so density matrices are plain
//! dense `n x n` arrays. Partial traces are computed by index arithmetic on
//! the mixed-radix labels rather than by reshaping into tensors.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::modes::{to_zero_based, ModeStructure};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;

/// Tolerance for algebraic identities on exactly representable inputs.
pub const EXACT_TOL: f64 = 1e-12;
/// Slack allowed below zero for eigenvalues of a density matrix.
pub const PSD_TOL: f64 = 1e-10;

const ZERO: C64 = C64::new(0.0, 0.0);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PureStateVector {
    structure: ModeStructure,
    amplitudes: Vec<C64>,
}

impl PureStateVector {
    /// Wraps amplitudes that must already be normalized.
    pub fn new(structure: ModeStructure, amplitudes: Vec<C64>) -> Result<Self> {
        check_len(&structure, amplitudes.len())?;
        let norm = norm_sqr(&amplitudes);
        if (norm - 1.0).abs() > EXACT_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self {
            structure,
            amplitudes,
        })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(structure: ModeStructure, mut amplitudes: Vec<C64>) -> Result<Self> {
        check_len(&structure, amplitudes.len())?;
        let norm = norm_sqr(&amplitudes);
        if norm <= f64::MIN_POSITIVE || !norm.is_finite() {
            return Err(Error::NotNormalized(norm));
        }
        let scale = 1.0 / norm.sqrt();
        amplitudes.iter_mut().for_each(|a| *a *= scale);
        Ok(Self {
            structure,
            amplitudes,
        })
    }

    /// Computational basis state `|level>`.
    pub fn basis(structure: ModeStructure, level: usize) -> Result<Self> {
        if level == 0 || level > structure.dim() {
            return Err(Error::OutOfRange {
                what: "level",
                value: level,
                max: structure.dim(),
            });
        }
        let mut amplitudes = vec![ZERO; structure.dim()];
        amplitudes[level - 1] = C64::new(1.0, 0.0);
        Ok(Self {
            structure,
            amplitudes,
        })
    }

    pub(crate) fn from_parts_unchecked(structure: ModeStructure, amplitudes: Vec<C64>) -> Self {
        Self {
            structure,
            amplitudes,
        }
    }

    pub fn structure(&self) -> &ModeStructure {
        &self.structure
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    /// Amplitude of `|level>`, 1-based.
    pub fn amplitude(&self, level: usize) -> C64 {
        self.amplitudes[level - 1]
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amplitudes)
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> C64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Reduced density matrix on the kept modes, computed from the vector
    /// without forming the full projector.
    pub fn reduce(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let layout = TraceLayout::new(&self.structure, keep)?;
        let k = layout.kept_dim;
        let mut out = CMatrix::zeros(k, k);
        for group in &layout.groups {
            for &(ka, la) in group {
                let a = self.amplitudes[la];
                if a == ZERO {
                    continue;
                }
                for &(kb, lb) in group {
                    out[(ka, kb)] += a * self.amplitudes[lb].conj();
                }
            }
        }
        Ok(DensityMatrix {
            structure: layout.kept,
            matrix: out,
        })
    }

    /// Purity of the single-mode reduction of mode `m` (1-based).
    pub fn mode_purity(&self, mode: usize) -> Result<f64> {
        Ok(self.reduce(&[mode])?.purity())
    }
}

fn check_len(structure: &ModeStructure, len: usize) -> Result<()> {
    if len != structure.dim() {
        return Err(Error::DimensionMismatch(format!(
            "{len} amplitudes for a {structure} system of dimension {}",
            structure.dim()
        )));
    }
    Ok(())
}

fn norm_sqr(amplitudes: &[C64]) -> f64 {
    amplitudes.iter().map(|a| a.norm_sqr()).sum()
}

/// Levels grouped by their traced-out label, each entry carrying the kept
/// index and the full level (both 0-based).
struct TraceLayout {
    kept: ModeStructure,
    kept_dim: usize,
    groups: Vec<Vec<(usize, usize)>>,
}

impl TraceLayout {
    fn new(structure: &ModeStructure, keep: &[usize]) -> Result<Self> {
        let kept = structure.substructure(keep)?;
        let keep0 = to_zero_based(keep);
        let traced0: Vec<usize> = (0..structure.mode_count())
            .filter(|m| !keep0.contains(m))
            .collect();
        let kept_dim = kept.dim();
        let traced_dim = structure.dim() / kept_dim;
        let mut groups = vec![Vec::with_capacity(kept_dim); traced_dim];
        for level in 0..structure.dim() {
            let k = structure.project_index(level, &keep0);
            let t = structure.project_index(level, &traced0);
            groups[t].push((k, level));
        }
        Ok(Self {
            kept,
            kept_dim,
            groups,
        })
    }
}

/// A density matrix together with the mode structure it lives on.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    structure: ModeStructure,
    matrix: CMatrix,
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues descending.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector for `values[k]`.
    pub vectors: CMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn from_matrix(structure: ModeStructure, matrix: CMatrix) -> Result<Self> {
        let n = structure.dim();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix for a {structure} system",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let rho = Self { structure, matrix };
        rho.validate()?;
        Ok(rho)
    }

    pub(crate) fn from_matrix_unchecked(structure: ModeStructure, matrix: CMatrix) -> Self {
        Self { structure, matrix }
    }

    pub fn validate(&self) -> Result<()> {
        let herm = self.hermiticity_error();
        if herm > EXACT_TOL {
            return Err(Error::InvalidInput(format!(
                "density matrix not Hermitian (deviation {herm:e})"
            )));
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > EXACT_TOL || tr.im.abs() > EXACT_TOL {
            return Err(Error::InvalidInput(format!("density matrix trace {tr}")));
        }
        let eig = self.eigh();
        if let Some(&low) = eig.values.last() {
            if low < -PSD_TOL {
                return Err(Error::InvalidInput(format!(
                    "density matrix has negative eigenvalue {low:e}"
                )));
            }
        }
        Ok(())
    }

    pub fn structure(&self) -> &ModeStructure {
        &self.structure
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Entry `<row|rho|col>` addressed by 1-based levels.
    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.matrix[(row - 1, col - 1)]
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    pub fn hermiticity_error(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `tr(rho^2)` for Hermitian `rho`, i.e. the sum of squared magnitudes.
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let layout = TraceLayout::new(&self.structure, keep)?;
        let k = layout.kept_dim;
        let mut out = CMatrix::zeros(k, k);
        for group in &layout.groups {
            for &(ka, la) in group {
                for &(kb, lb) in group {
                    out[(ka, kb)] += self.matrix[(la, lb)];
                }
            }
        }
        Ok(DensityMatrix {
            structure: layout.kept,
            matrix: out,
        })
    }

    pub fn eigh(&self) -> HermitianEigen {
        let eig = SymmetricEigen::new(self.matrix.clone());
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vectors = CMatrix::from_fn(self.dim(), order.len(), |i, c| {
            eig.eigenvectors[(i, order[c])]
        });
        HermitianEigen { values, vectors }
    }

    /// Largest elementwise modulus difference.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        self.matrix
            .iter()
            .zip(other.matrix.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `U rho U^dagger` for a full-space unitary.
    pub(crate) fn conjugate_by(&self, u: &CMatrix) -> DensityMatrix {
        DensityMatrix {
            structure: self.structure.clone(),
            matrix: u * &self.matrix * u.adjoint(),
        }
    }
}

/// `|v><v|`.
pub fn outer(v: &PureStateVector) -> DensityMatrix {
    let n = v.amplitudes.len();
    let a = &v.amplitudes;
    DensityMatrix {
        structure: v.structure.clone(),
        matrix: CMatrix::from_fn(n, n, |i, j| a[i] * a[j].conj()),
    }
}

pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    rho.partial_trace(keep)
}

pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.purity()
}

/// `sum_k w_k |v_k><v_k|` with positive weights summing to one.
pub fn mix(states: &[PureStateVector], weights: &[f64]) -> Result<DensityMatrix> {
    if states.is_empty() || states.len() != weights.len() {
        return Err(Error::InvalidWeights(format!(
            "{} states with {} weights",
            states.len(),
            weights.len()
        )));
    }
    if let Some(w) = weights.iter().find(|&&w| !w.is_finite() || w <= 0.0) {
        return Err(Error::InvalidWeights(format!("nonpositive weight {w}")));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > EXACT_TOL {
        return Err(Error::InvalidWeights(format!("weights sum to {total}")));
    }
    let structure = states[0].structure.clone();
    if let Some(bad) = states.iter().find(|s| s.structure != structure) {
        return Err(Error::DimensionMismatch(format!(
            "mixing {structure} with {}",
            bad.structure
        )));
    }
    let n = structure.dim();
    let mut matrix = CMatrix::zeros(n, n);
    for (state, &w) in states.iter().zip(weights) {
        let a = &state.amplitudes;
        for i in 0..n {
            if a[i] == ZERO {
                continue;
            }
            let wi = a[i] * w;
            for j in 0..n {
                matrix[(i, j)] += wi * a[j].conj();
            }
        }
    }
    Ok(DensityMatrix { structure, matrix })
}

#[derive(Serialize, Deserialize)]
struct DensityMatrixJson {
    structure: ModeStructure,
    real: Vec<Vec<f64>>,
    imag: Vec<Vec<f64>>,
}

impl Serialize for DensityMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.dim();
        let rows = |f: fn(&C64) -> f64| -> Vec<Vec<f64>> {
            (0..n)
                .map(|i| (0..n).map(|j| f(&self.matrix[(i, j)])).collect())
                .collect()
        };
        DensityMatrixJson {
            structure: self.structure.clone(),
            real: rows(|z| z.re),
            imag: rows(|z| z.im),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DensityMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let json = DensityMatrixJson::deserialize(deserializer)?;
        let n = json.structure.dim();
        let shape_ok = |rows: &Vec<Vec<f64>>| rows.len() == n && rows.iter().all(|r| r.len() == n);
        if !shape_ok(&json.real) || !shape_ok(&json.imag) {
            return Err(D::Error::custom(format!(
                "matrix must be {n}x{n} for structure {}",
                json.structure
            )));
        }
        let matrix = CMatrix::from_fn(n, n, |i, j| C64::new(json.real[i][j], json.imag[i][j]));
        DensityMatrix::from_matrix(json.structure, matrix).map_err(D::Error::custom)
    }
}
