//! Mode structures and index arithmetic.
//!
//! A system is a tensor product of `N` modes with dimensions `n_1, ..., n_N`.
//! Basis states are addressed either by a *scalar level* in `1..=n` or by a
//! *vector index* of per-mode labels, each label in `1..=n_m`. Levels and
//! labels are 1-based everywhere in this crate; the mixed radix puts mode 1
//! in the most significant position, so in `2x3` the vector `{2,3}` is level 6.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The ordered per-mode dimensions of a multipartite Hilbert space.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct ModeStructure {
    dims: Vec<usize>,
    // strides[m] = product of dims after m
    strides: Vec<usize>,
    total: usize,
}

impl ModeStructure {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidStructure("no modes".into()));
        }
        if let Some(&d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidStructure(format!(
                "mode dimension {d} < 2 in {dims:?}"
            )));
        }
        let mut strides = vec![1usize; dims.len()];
        let mut total: usize = 1;
        for m in (0..dims.len()).rev() {
            strides[m] = total;
            total = total
                .checked_mul(dims[m])
                .ok_or_else(|| Error::InvalidStructure(format!("{dims:?} overflows")))?;
        }
        Ok(Self {
            dims,
            strides,
            total,
        })
    }

    /// `N` qubits, `2^N`.
    pub fn qubits(count: usize) -> Result<Self> {
        Self::new(vec![2; count])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Number of modes `N`.
    pub fn mode_count(&self) -> usize {
        self.dims.len()
    }

    /// Total dimension `n`.
    pub fn dim(&self) -> usize {
        self.total
    }

    /// Dimension of mode `m` (1-based).
    pub fn mode_dim(&self, mode: usize) -> Result<usize> {
        self.check_mode(mode)?;
        Ok(self.dims[mode - 1])
    }

    pub fn max_dim(&self) -> usize {
        *self.dims.iter().max().expect("nonempty")
    }

    /// `n / n_max`, the largest number of levels an entangled tuple can use.
    pub fn dim_over_max(&self) -> usize {
        self.total / self.max_dim()
    }

    pub fn is_bipartite(&self) -> bool {
        self.dims.len() == 2
    }

    fn check_mode(&self, mode: usize) -> Result<()> {
        if mode == 0 || mode > self.dims.len() {
            return Err(Error::OutOfRange {
                what: "mode",
                value: mode,
                max: self.dims.len(),
            });
        }
        Ok(())
    }

    fn check_level(&self, level: usize) -> Result<()> {
        if level == 0 || level > self.total {
            return Err(Error::OutOfRange {
                what: "level",
                value: level,
                max: self.total,
            });
        }
        Ok(())
    }

    /// 0-based label of mode index `m` (0-based) for 0-based level `index`.
    #[inline]
    pub(crate) fn digit(&self, index: usize, m: usize) -> usize {
        (index / self.strides[m]) % self.dims[m]
    }

    /// Level step of 0-based mode `m`.
    #[inline]
    pub(crate) fn stride(&self, m: usize) -> usize {
        self.strides[m]
    }

    /// Inverse indical register: level -> per-mode labels.
    pub fn scalar_to_vector(&self, level: usize) -> Result<VectorIndex> {
        self.check_level(level)?;
        let index = level - 1;
        Ok(VectorIndex(
            (0..self.dims.len())
                .map(|m| self.digit(index, m) + 1)
                .collect(),
        ))
    }

    /// Indical register: per-mode labels -> level.
    pub fn vector_to_scalar(&self, v: &VectorIndex) -> Result<usize> {
        if v.0.len() != self.dims.len() {
            return Err(Error::DimensionMismatch(format!(
                "vector index has {} labels, structure has {} modes",
                v.0.len(),
                self.dims.len()
            )));
        }
        let mut index = 0;
        for (m, (&label, &d)) in v.0.iter().zip(&self.dims).enumerate() {
            if label == 0 || label > d {
                return Err(Error::OutOfRange {
                    what: "label",
                    value: label,
                    max: d,
                });
            }
            index += (label - 1) * self.strides[m];
        }
        Ok(index + 1)
    }

    /// Extreme bipartition `(m | mbar)` with the bigger side identified.
    ///
    /// When both sides have equal dimension the complement is taken as the
    /// bigger side.
    pub fn bipartition(&self, mode: usize) -> Result<Bipartition> {
        self.check_mode(mode)?;
        let n_m = self.dims[mode - 1];
        let n_rest = self.total / n_m;
        let rest: Vec<usize> = (1..=self.dims.len()).filter(|&k| k != mode).collect();
        let big_modes = if n_m > n_rest {
            vec![mode]
        } else {
            rest.clone()
        };
        Ok(Bipartition {
            mode,
            rest,
            small_dim: n_m.min(n_rest),
            big_dim: n_m.max(n_rest),
            big_modes,
        })
    }

    fn check_mode_list(&self, modes: &[usize]) -> Result<()> {
        let bad = |reason: &str| Error::InvalidModes {
            modes: modes.to_vec(),
            reason: reason.into(),
        };
        if modes.is_empty() {
            return Err(bad("empty"));
        }
        if modes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(bad("must be strictly ascending"));
        }
        if modes[0] == 0 || *modes.last().unwrap() > self.dims.len() {
            return Err(bad("mode out of range"));
        }
        Ok(())
    }

    /// The structure formed by the listed modes, in ascending order.
    pub fn substructure(&self, modes: &[usize]) -> Result<ModeStructure> {
        self.check_mode_list(modes)?;
        ModeStructure::new(modes.iter().map(|&m| self.dims[m - 1]).collect())
    }

    /// Level of the restriction of `level`'s vector index to `modes`, counted
    /// in the substructure of those modes.
    pub fn project_level(&self, level: usize, modes: &[usize]) -> Result<usize> {
        self.check_level(level)?;
        self.check_mode_list(modes)?;
        Ok(self.project_index(level - 1, &to_zero_based(modes)) + 1)
    }

    /// 0-based projection of a 0-based level onto 0-based ascending modes.
    #[inline]
    pub(crate) fn project_index(&self, index: usize, modes0: &[usize]) -> usize {
        modes0
            .iter()
            .fold(0, |acc, &m| acc * self.dims[m] + self.digit(index, m))
    }
}

pub(crate) fn to_zero_based(modes: &[usize]) -> Vec<usize> {
    modes.iter().map(|&m| m - 1).collect()
}

impl TryFrom<Vec<usize>> for ModeStructure {
    type Error = Error;

    fn try_from(dims: Vec<usize>) -> Result<Self> {
        Self::new(dims)
    }
}

impl From<ModeStructure> for Vec<usize> {
    fn from(s: ModeStructure) -> Self {
        s.dims
    }
}

impl fmt::Display for ModeStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.dims.iter().map(|d| d.to_string()).collect();
        f.write_str(&parts.join("x"))
    }
}

/// Parses `"2x3x5"`; each factor may also be a power such as `"2^4"`.
impl FromStr for ModeStructure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let text = s.trim();
        if text.is_empty() {
            return Err(Error::InvalidStructure("empty".into()));
        }
        let parse_int = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidStructure(format!("cannot parse {t:?} in {s:?}")))
        };
        let mut dims = Vec::new();
        for factor in text.split(['x', 'X', '×']) {
            match factor.split_once('^') {
                Some((base, exp)) => {
                    let base = parse_int(base)?;
                    let exp = parse_int(exp)?;
                    if exp == 0 {
                        return Err(Error::InvalidStructure(format!("zero exponent in {s:?}")));
                    }
                    dims.extend(std::iter::repeat_n(base, exp));
                }
                None => dims.push(parse_int(factor)?),
            }
        }
        ModeStructure::new(dims)
    }
}

/// Per-mode coincidence labels of one basis state, 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VectorIndex(pub Vec<usize>);

impl VectorIndex {
    pub fn labels(&self) -> &[usize] {
        &self.0
    }
}

impl fmt::Display for VectorIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Extreme bipartition of one mode against the rest.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bipartition {
    /// Focal mode `m`, 1-based.
    pub mode: usize,
    /// All other modes, ascending.
    pub rest: Vec<usize>,
    pub small_dim: usize,
    pub big_dim: usize,
    /// Modes on the bigger side: either `[mode]` or `rest`.
    pub big_modes: Vec<usize>,
}
