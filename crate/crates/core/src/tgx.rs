//! ME TGX tuples, TGX pure states and local-unitary dressing.
//!
//! A tuple's equal phaseless superposition is maximally entangled exactly
//! when its size is in `L*`, no two levels agree on all modes but one, and
//! every mode uses its labels as evenly as possible. Enumeration generates
//! candidates with those constraints and then certifies each survivor with
//! the ent itself.

use std::cmp::Ordering;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::entcore::{lstar, EntMeasure, LStarSet};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, DensityMatrix, PureStateVector, C64};
use crate::modes::ModeStructure;

/// Tolerance on `1 - ent` for ME certification.
pub const ME_TOL: f64 = 1e-10;
/// Tolerance on `U^dagger U - I` for local unitaries.
pub const UNITARY_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MeTgxTuple {
    structure: ModeStructure,
    levels: Vec<usize>,
}

impl MeTgxTuple {
    /// Sorts `levels` and certifies them as an ME TGX tuple.
    pub fn certify(structure: &ModeStructure, levels: &[usize]) -> Result<Self> {
        let sorted = canonical_levels(structure, levels)?;
        let measure = EntMeasure::new(structure)?;
        if !certifies(&measure, structure, &sorted)? {
            return Err(Error::InvalidTuple {
                levels: sorted,
                reason: format!("not maximally entangled in {structure}"),
            });
        }
        Ok(Self {
            structure: structure.clone(),
            levels: sorted,
        })
    }

    pub fn structure(&self) -> &ModeStructure {
        &self.structure
    }

    /// Strictly ascending 1-based levels.
    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Equal-weight phaseless superposition of the tuple's levels.
    pub fn state(&self) -> PureStateVector {
        equal_superposition(&self.structure, &self.levels)
    }
}

impl PartialOrd for MeTgxTuple {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MeTgxTuple {
    fn cmp(&self, other: &Self) -> Ordering {
        self.levels.cmp(&other.levels)
    }
}

impl Serialize for MeTgxTuple {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.levels.serialize(serializer)
    }
}

impl std::fmt::Display for MeTgxTuple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.levels.iter().map(|l| l.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

fn canonical_levels(structure: &ModeStructure, levels: &[usize]) -> Result<Vec<usize>> {
    let mut sorted = levels.to_vec();
    sorted.sort_unstable();
    let invalid = |reason: String| Error::InvalidTuple {
        levels: levels.to_vec(),
        reason,
    };
    if sorted.is_empty() {
        return Err(invalid("empty".into()));
    }
    if sorted[0] == 0 || *sorted.last().unwrap() > structure.dim() {
        return Err(invalid(format!(
            "levels must lie in 1..={}",
            structure.dim()
        )));
    }
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(invalid("duplicate level".into()));
    }
    Ok(sorted)
}

fn equal_superposition(structure: &ModeStructure, levels: &[usize]) -> PureStateVector {
    let amp = C64::new(1.0 / (levels.len() as f64).sqrt(), 0.0);
    let mut amplitudes = vec![C64::new(0.0, 0.0); structure.dim()];
    for &l in levels {
        amplitudes[l - 1] = amp;
    }
    PureStateVector::from_parts_unchecked(structure.clone(), amplitudes)
}

fn certifies(measure: &EntMeasure, structure: &ModeStructure, sorted: &[usize]) -> Result<bool> {
    let e = measure.of(&equal_superposition(structure, sorted))?;
    Ok(e.value() >= 1.0 - ME_TOL)
}

/// Whether the equal phaseless superposition of `levels` has ent 1.
pub fn is_me_tuple(structure: &ModeStructure, levels: &[usize]) -> Result<bool> {
    let sorted = canonical_levels(structure, levels)?;
    certifies(&EntMeasure::new(structure)?, structure, &sorted)
}

/// Result of [`enumerate_me_tuples`].
#[derive(Clone, Debug, Serialize)]
pub struct TupleList {
    pub structure: ModeStructure,
    #[serde(rename = "L")]
    pub levels: usize,
    /// `L` is not in `L*`, so no tuple can certify.
    pub outside_lstar: bool,
    pub tuples: Vec<MeTgxTuple>,
}

/// Per-level data the candidate search consults.
struct LevelTable {
    /// `labels[level][m]`, 0-based.
    labels: Vec<Vec<usize>>,
    /// `rest[level][m]`: projection onto all modes except `m`.
    rest: Vec<Vec<usize>>,
}

impl LevelTable {
    fn new(s: &ModeStructure) -> Self {
        let modes = s.mode_count();
        let complements: Vec<Vec<usize>> = (0..modes)
            .map(|m| (0..modes).filter(|&k| k != m).collect())
            .collect();
        let labels = (0..s.dim())
            .map(|i| (0..modes).map(|m| s.digit(i, m)).collect())
            .collect();
        let rest = (0..s.dim())
            .map(|i| complements.iter().map(|c| s.project_index(i, c)).collect())
            .collect();
        Self { labels, rest }
    }
}

/// Depth-first candidate search with per-mode balance and injectivity
/// constraints.
struct Search<'a> {
    table: &'a LevelTable,
    dims: &'a [usize],
    n: usize,
    size: usize,
    /// floor(L / n_m) and L mod n_m.
    quota: Vec<(usize, usize)>,
    counts: Vec<Vec<usize>>,
    full: Vec<usize>,
    deficit: Vec<usize>,
    used: Vec<Vec<bool>>,
    chosen: Vec<usize>,
    found: Vec<Vec<usize>>,
}

impl<'a> Search<'a> {
    fn new(table: &'a LevelTable, s: &'a ModeStructure, size: usize) -> Self {
        let dims = s.dims();
        let quota: Vec<(usize, usize)> = dims.iter().map(|&d| (size / d, size % d)).collect();
        Self {
            table,
            dims,
            n: s.dim(),
            size,
            counts: dims.iter().map(|&d| vec![0; d]).collect(),
            full: vec![0; dims.len()],
            deficit: dims.iter().zip(&quota).map(|(&d, &(q, _))| d * q).collect(),
            used: dims.iter().map(|&d| vec![false; s.dim() / d]).collect(),
            quota,
            chosen: Vec::with_capacity(size),
            found: Vec::new(),
        }
    }

    fn admissible(&self, level: usize) -> bool {
        let left = self.size - self.chosen.len() - 1;
        (0..self.dims.len()).all(|m| {
            let a = self.table.labels[level][m];
            let (q, r) = self.quota[m];
            let c = self.counts[m][a];
            if self.used[m][self.table.rest[level][m]] || c > q || (c == q && self.full[m] == r) {
                return false;
            }
            let deficit = self.deficit[m] - usize::from(c < q);
            deficit <= left
        })
    }

    fn push(&mut self, level: usize) {
        for m in 0..self.dims.len() {
            let a = self.table.labels[level][m];
            let q = self.quota[m].0;
            let c = self.counts[m][a];
            if c < q {
                self.deficit[m] -= 1;
            } else {
                self.full[m] += 1;
            }
            self.counts[m][a] += 1;
            self.used[m][self.table.rest[level][m]] = true;
        }
        self.chosen.push(level);
    }

    fn pop(&mut self) {
        let level = self.chosen.pop().expect("nonempty");
        for m in 0..self.dims.len() {
            let a = self.table.labels[level][m];
            let q = self.quota[m].0;
            self.counts[m][a] -= 1;
            if self.counts[m][a] < q {
                self.deficit[m] += 1;
            } else {
                self.full[m] -= 1;
            }
            self.used[m][self.table.rest[level][m]] = false;
        }
    }

    fn run_from(&mut self, first: usize) {
        if self.admissible(first) {
            self.push(first);
            self.descend(first + 1);
            self.pop();
        }
    }

    fn descend(&mut self, start: usize) {
        if self.chosen.len() == self.size {
            self.found
                .push(self.chosen.iter().map(|&l| l + 1).collect());
            return;
        }
        let needed = self.size - self.chosen.len();
        for level in start..=(self.n - needed) {
            if self.admissible(level) {
                self.push(level);
                self.descend(level + 1);
                self.pop();
            }
        }
    }
}

/// All ME TGX tuples of size `L`, lexicographically sorted.
///
/// `L` outside `L*` is accepted but yields an empty list with
/// `outside_lstar` set.
pub fn enumerate_me_tuples(structure: &ModeStructure, size: usize) -> Result<TupleList> {
    let set = lstar(structure)?;
    enumerate_with(structure, &set, size)
}

pub(crate) fn enumerate_with(
    structure: &ModeStructure,
    set: &LStarSet,
    size: usize,
) -> Result<TupleList> {
    let top = structure.dim_over_max();
    if size < 2 || size > top {
        return Err(Error::OutOfRange {
            what: "L",
            value: size,
            max: top,
        });
    }
    if !set.contains(size) {
        return Ok(TupleList {
            structure: structure.clone(),
            levels: size,
            outside_lstar: true,
            tuples: Vec::new(),
        });
    }
    let table = LevelTable::new(structure);
    let candidates: Vec<Vec<usize>> = (0..=structure.dim() - size)
        .into_par_iter()
        .map(|first| {
            let mut search = Search::new(&table, structure, size);
            search.run_from(first);
            search.found
        })
        .collect::<Vec<_>>()
        .concat();

    let measure = EntMeasure::new(structure)?;
    let tuples = candidates
        .into_par_iter()
        .map(|levels| {
            if certifies(&measure, structure, &levels)? {
                Ok(MeTgxTuple {
                    structure: structure.clone(),
                    levels,
                })
            } else {
                Err(Error::Internal(format!(
                    "candidate {levels:?} in {structure} failed ME certification"
                )))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TupleList {
        structure: structure.clone(),
        levels: size,
        outside_lstar: false,
        tuples,
    })
}

/// `sum_h x_h e^{i phi_h} |l_h>` on the tuple's levels.
///
/// Defaults are equal amplitudes `1/sqrt(L)` and zero phases. Given
/// amplitudes must already be normalized.
pub fn build_tgx_state(
    tuple: &MeTgxTuple,
    amplitudes: Option<&[f64]>,
    phases: Option<&[f64]>,
) -> Result<PureStateVector> {
    let size = tuple.len();
    let check_len = |what: &str, len: usize| {
        if len == size {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!(
                "{len} {what} for a tuple of {size} levels"
            )))
        }
    };
    let default_amp = 1.0 / (size as f64).sqrt();
    let amps: Vec<f64> = match amplitudes {
        Some(a) => {
            check_len("amplitudes", a.len())?;
            a.to_vec()
        }
        None => vec![default_amp; size],
    };
    let phis: Vec<f64> = match phases {
        Some(p) => {
            check_len("phases", p.len())?;
            p.to_vec()
        }
        None => vec![0.0; size],
    };
    let mut out = vec![C64::new(0.0, 0.0); tuple.structure.dim()];
    for ((&l, &x), &phi) in tuple.levels.iter().zip(&amps).zip(&phis) {
        out[l - 1] = C64::from_polar(x, phi);
    }
    PureStateVector::new(tuple.structure.clone(), out)
}

/// One unitary per mode.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalUnitarySet {
    unitaries: Vec<CMatrix>,
}

impl LocalUnitarySet {
    pub fn new(unitaries: Vec<CMatrix>) -> Result<Self> {
        for u in &unitaries {
            if !u.is_square() {
                return Err(Error::DimensionMismatch(format!(
                    "local unitary of shape {}x{}",
                    u.nrows(),
                    u.ncols()
                )));
            }
            let dev = unitarity_error(u);
            if dev > UNITARY_TOL {
                return Err(Error::NotUnitary(dev));
            }
        }
        Ok(Self { unitaries })
    }

    pub fn identity(structure: &ModeStructure) -> Self {
        Self {
            unitaries: structure
                .dims()
                .iter()
                .map(|&d| CMatrix::identity(d, d))
                .collect(),
        }
    }

    /// Independent Haar unitaries on every mode from one seeded stream.
    pub fn haar(structure: &ModeStructure, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::haar_with(structure, &mut rng)
    }

    pub fn haar_with<R: Rng + ?Sized>(structure: &ModeStructure, rng: &mut R) -> Self {
        Self {
            unitaries: structure
                .dims()
                .iter()
                .map(|&d| crate::verify::haar_unitary_with(d, rng))
                .collect(),
        }
    }

    pub fn unitaries(&self) -> &[CMatrix] {
        &self.unitaries
    }

    fn check(&self, structure: &ModeStructure) -> Result<()> {
        let sizes: Vec<usize> = self.unitaries.iter().map(|u| u.nrows()).collect();
        if sizes != structure.dims() {
            return Err(Error::DimensionMismatch(format!(
                "local unitaries of sizes {sizes:?} on {structure}"
            )));
        }
        Ok(())
    }

    /// `U^(1) (x) ... (x) U^(N)`, mode 1 most significant.
    pub fn kron(&self) -> CMatrix {
        self.unitaries
            .iter()
            .skip(1)
            .fold(self.unitaries[0].clone(), |acc, u| acc.kronecker(u))
    }
}

pub(crate) fn unitarity_error(u: &CMatrix) -> f64 {
    let n = u.nrows();
    let prod = u.adjoint() * u;
    (&prod - CMatrix::identity(n, n))
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// Objects a local unitary set can act on.
pub trait ApplyLu: Sized {
    fn apply_lu(&self, lus: &LocalUnitarySet) -> Result<Self>;
}

impl ApplyLu for PureStateVector {
    fn apply_lu(&self, lus: &LocalUnitarySet) -> Result<Self> {
        let s = self.structure();
        lus.check(s)?;
        let mut amps = self.amplitudes().to_vec();
        for (m, u) in lus.unitaries.iter().enumerate() {
            let stride = s.stride(m);
            let d = s.dims()[m];
            let mut next = vec![C64::new(0.0, 0.0); amps.len()];
            for (i, slot) in next.iter_mut().enumerate() {
                let a = s.digit(i, m);
                let base = i - a * stride;
                *slot = (0..d).map(|b| u[(a, b)] * amps[base + b * stride]).sum();
            }
            amps = next;
        }
        Ok(PureStateVector::from_parts_unchecked(s.clone(), amps))
    }
}

impl ApplyLu for DensityMatrix {
    fn apply_lu(&self, lus: &LocalUnitarySet) -> Result<Self> {
        lus.check(self.structure())?;
        Ok(self.conjugate_by(&lus.kron()))
    }
}

pub fn apply_lu<T: ApplyLu>(target: &T, lus: &LocalUnitarySet) -> Result<T> {
    target.apply_lu(lus)
}
