//! Reduction-purity bounds, the `L*` minimization and the normalized ent.
//!
//! For a pure state whose support is `L` levels of equal weight, the mode-`m`
//! reduction can be no purer-than-balanced: its purity is at least
//! [`mpsrp_purity`]`(n_m, L)`. Averaging the rescaled purities
//! `(n_m P - 1) / (n_m - 1)` over modes and minimizing over `L` gives the
//! levels count(s) `L*` that support maximal full `N`-partite entanglement
//! and the floor value `M*` used to normalize the ent.

use std::collections::BTreeMap;

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::PureStateVector;
use crate::modes::ModeStructure;

type Rational = Ratio<i128>;

/// Normalization slack accepted by [`ent_pure`].
const NORM_TOL: f64 = 1e-10;

/// Minimum simultaneous mode-`n_m` reduction purity of an `L`-level,
/// equal-weight pure parent: `L mod n_m` labels carry `floor(L/n_m) + 1`
/// levels and the rest carry `floor(L/n_m)`.
pub fn mpsrp_purity(n_m: usize, levels: usize) -> Result<f64> {
    let exact = mpsrp_purity_exact(n_m, levels)?;
    Ok(*exact.numer() as f64 / *exact.denom() as f64)
}

pub fn mpsrp_purity_exact(n_m: usize, levels: usize) -> Result<Ratio<i128>> {
    if n_m == 0 || levels == 0 {
        return Err(Error::InvalidInput(format!(
            "mpsrp purity needs positive arguments, got n_m={n_m}, L={levels}"
        )));
    }
    let (n, l) = (n_m as i128, levels as i128);
    let (q, r) = (l / n, l % n);
    let sum_sq = r * (q + 1) * (q + 1) + (n - r) * q * q;
    Ok(Rational::new(sum_sq, l * l))
}

/// Mean over modes of `(n_m P_m - 1) / (n_m - 1)` with `P_m` the MPSRP at `L`.
fn objective(structure: &ModeStructure, levels: usize) -> Rational {
    let sum = structure
        .dims()
        .iter()
        .map(|&n_m| {
            let p = mpsrp_purity_exact(n_m, levels).expect("positive arguments");
            let n = n_m as i128;
            (p * n - 1) / (n - 1)
        })
        .fold(Rational::from_integer(0), |a, b| a + b);
    sum / structure.mode_count() as i128
}

fn to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// The argmin levels counts `L*` of a system.
#[derive(Clone, Debug, PartialEq)]
pub struct LStarSet {
    pub structure: ModeStructure,
    /// Ascending.
    pub values: Vec<usize>,
    /// Minimized objective `M*`.
    pub min_mean: f64,
    pub per_l_mean: BTreeMap<usize, f64>,
}

impl LStarSet {
    pub fn min_value(&self) -> usize {
        self.values[0]
    }

    pub fn contains(&self, levels: usize) -> bool {
        self.values.contains(&levels)
    }
}

impl Serialize for LStarSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Json<'a> {
            dims: &'a [usize],
            #[serde(rename = "Lstar")]
            lstar: &'a [usize],
            #[serde(rename = "M_star")]
            m_star: f64,
            table: &'a BTreeMap<usize, f64>,
        }
        Json {
            dims: self.structure.dims(),
            lstar: &self.values,
            m_star: self.min_mean,
            table: &self.per_l_mean,
        }
        .serialize(serializer)
    }
}

/// Evaluates the objective for every `L` in `2..=n/n_max` and keeps all exact
/// minimizers.
pub fn lstar(structure: &ModeStructure) -> Result<LStarSet> {
    let top = structure.dim_over_max();
    if top < 2 {
        return Err(Error::UnsupportedSystem(structure.to_string()));
    }
    let table: Vec<(usize, Rational)> = (2..=top).map(|l| (l, objective(structure, l))).collect();
    let best = table.iter().map(|(_, v)| *v).min().expect("nonempty range");
    Ok(LStarSet {
        structure: structure.clone(),
        values: table
            .iter()
            .filter(|(_, v)| *v == best)
            .map(|(l, _)| *l)
            .collect(),
        min_mean: to_f64(best),
        per_l_mean: table.iter().map(|&(l, v)| (l, to_f64(v))).collect(),
    })
}

/// Normalized full `N`-partite entanglement of a pure state, in `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct EntValue(f64);

impl EntValue {
    pub fn value(self) -> f64 {
        self.0
    }
}

/// The ent for one mode structure, with `M*` computed once.
#[derive(Clone, Debug)]
pub struct EntMeasure {
    structure: ModeStructure,
    m_star: f64,
}

impl EntMeasure {
    pub fn new(structure: &ModeStructure) -> Result<Self> {
        let set = lstar(structure)?;
        Ok(Self {
            structure: structure.clone(),
            m_star: set.min_mean,
        })
    }

    pub fn m_star(&self) -> f64 {
        self.m_star
    }

    /// `(1/N) sum_m (n_m P^(m) - 1) / (n_m - 1)` over single-mode reductions.
    pub fn mean_rescaled_purity(&self, v: &PureStateVector) -> Result<f64> {
        self.check(v)?;
        let dims = self.structure.dims();
        let mut total = 0.0;
        for (m, &n_m) in dims.iter().enumerate() {
            let p = v.mode_purity(m + 1)?;
            total += (n_m as f64 * p - 1.0) / (n_m as f64 - 1.0);
        }
        Ok(total / dims.len() as f64)
    }

    pub fn of(&self, v: &PureStateVector) -> Result<EntValue> {
        let mean = self.mean_rescaled_purity(v)?;
        let upsilon = (1.0 - mean) / (1.0 - self.m_star);
        Ok(EntValue(upsilon.clamp(0.0, 1.0)))
    }

    fn check(&self, v: &PureStateVector) -> Result<()> {
        if v.structure() != &self.structure {
            return Err(Error::DimensionMismatch(format!(
                "state on {} measured with ent for {}",
                v.structure(),
                self.structure
            )));
        }
        let norm = v.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(())
    }
}

/// Affinely normalized ent: 0 for product states, 1 when the mean rescaled
/// purity reaches `M*`.
pub fn ent_pure(v: &PureStateVector) -> Result<EntValue> {
    EntMeasure::new(v.structure())?.of(v)
}

/// Unit-hyperspherical coordinates: `x_1 = cos t_1`,
/// `x_h = cos t_h prod_{i<h} sin t_i`, `x_L = prod_{i<L} sin t_i`.
pub fn hyperspherical(angles: &[f64]) -> Result<Vec<f64>> {
    let half_pi = std::f64::consts::FRAC_PI_2;
    if let Some(&a) = angles.iter().find(|&&a| !(0.0..=half_pi).contains(&a)) {
        return Err(Error::AngleOutOfRange(a));
    }
    let mut coords = Vec::with_capacity(angles.len() + 1);
    let mut sines = 1.0;
    for &a in angles {
        coords.push(sines * a.cos());
        sines *= a.sin();
    }
    coords.push(sines);
    Ok(coords)
}
