//! Decomposition sampling.
//!
//! A rank-`r` state `sum_k lambda_k |Phi_k><Phi_k|` has one pure-state
//! decomposition per `D x D` unitary `U` (`D >= r`):
//! `p_j = sum_k |U_jk|^2 lambda_k` and
//! `|w_j> = p_j^{-1/2} sum_k U_jk sqrt(lambda_k) |Phi_k>`.
//! A mixed state is MME only if every such decomposition has average ent 1;
//! sampling many unitaries is a necessary test of that.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::entcore::{mpsrp_purity, EntMeasure};
use crate::error::{Error, Result};
use crate::linalg::{mix, CMatrix, DensityMatrix, PureStateVector, C64};
use crate::mme::MmeState;
use crate::modes::ModeStructure;
use crate::tgx::{build_tgx_state, unitarity_error, MeTgxTuple, UNITARY_TOL};

/// Decomposition weights below this are treated as absent.
pub const NULL_PROB: f64 = 1e-14;
const ORTHO_TOL: f64 = 1e-10;
const SPECTRUM_TOL: f64 = 1e-12;
const PURITY_TOL: f64 = 1e-9;
/// Eigenvalues closer than this are reported as degenerate.
const DEGENERACY_TOL: f64 = 1e-9;

/// Haar-random `d x d` unitary from a seed.
pub fn haar_unitary(d: usize, seed: u64) -> CMatrix {
    haar_unitary_with(d, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// QR of a complex Gaussian matrix, with the phases of `R`'s diagonal moved
/// into `Q` so the result is Haar distributed.
pub fn haar_unitary_with<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    let g = DMatrix::from_fn(d, d, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im) * FRAC_1_SQRT_2
    });
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 {
            rjj / rjj.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// `((a, b), (-b*, a*))` with `a = cos theta`, `b = sin theta e^{i chi}`.
pub fn u2(theta: f64, chi: f64) -> CMatrix {
    let a = C64::new(theta.cos(), 0.0);
    let b = C64::from_polar(theta.sin(), chi);
    CMatrix::from_row_slice(2, 2, &[a, b, -b.conj(), a.conj()])
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridPoint {
    pub theta: f64,
    pub chi: f64,
}

impl GridPoint {
    pub fn unitary(&self) -> CMatrix {
        u2(self.theta, self.chi)
    }
}

/// `theta_i = i pi / (2T)` for `i < T` and `chi_k = 2 pi k / C` for `k < C`,
/// theta-major. Both grids are half-open so that `theta = pi/4` is hit for
/// every even `T`.
pub fn u2_grid(theta_points: usize, chi_points: usize) -> impl Iterator<Item = GridPoint> {
    (0..theta_points).flat_map(move |i| {
        (0..chi_points).map(move |k| GridPoint {
            theta: i as f64 * FRAC_PI_2 / theta_points as f64,
            chi: 2.0 * PI * k as f64 / chi_points as f64,
        })
    })
}

/// A pure-state decomposition generated by one unitary.
#[derive(Clone, Debug)]
pub struct DecompositionSample {
    pub unitary: CMatrix,
    /// `p_j`, with values below [`NULL_PROB`] set to zero.
    pub probs: Vec<f64>,
    /// `|w_j>`, absent where `p_j = 0`.
    pub states: Vec<Option<PureStateVector>>,
}

impl DecompositionSample {
    /// `sum_j p_j |w_j><w_j|`.
    pub fn reconstruct(&self) -> Result<DensityMatrix> {
        let (states, probs): (Vec<PureStateVector>, Vec<f64>) = self
            .states
            .iter()
            .zip(&self.probs)
            .filter_map(|(s, &p)| s.clone().map(|s| (s, p)))
            .unzip();
        let total: f64 = probs.iter().sum();
        // mixing requires an exact unit sum; the dropped weights are < 1e-14
        let probs: Vec<f64> = probs.iter().map(|p| p / total).collect();
        mix(&states, &probs)
    }

    /// `sum_j p_j ent(w_j)` over the nonzero-weight states.
    pub fn average_ent(&self, measure: &EntMeasure) -> Result<f64> {
        let mut total = 0.0;
        for (state, &p) in self.states.iter().zip(&self.probs) {
            if let Some(w) = state {
                total += p * measure.of(w)?.value();
            }
        }
        Ok(total)
    }
}

fn check_spectrum(spectrum: &[f64]) -> Result<()> {
    if let Some(bad) = spectrum.iter().find(|&&l| !l.is_finite() || l < 0.0) {
        return Err(Error::InvalidWeights(format!("spectrum entry {bad}")));
    }
    let total: f64 = spectrum.iter().sum();
    if (total - 1.0).abs() > SPECTRUM_TOL {
        return Err(Error::InvalidWeights(format!("spectrum sums to {total}")));
    }
    Ok(())
}

fn check_orthonormal(states: &[PureStateVector]) -> Result<()> {
    for (a, sa) in states.iter().enumerate() {
        for (b, sb) in states.iter().enumerate().skip(a) {
            let expected = if a == b { 1.0 } else { 0.0 };
            let dev = (sa.inner(sb) - expected).norm();
            if dev > ORTHO_TOL {
                return Err(Error::InvalidInput(format!(
                    "eigenstates {} and {} deviate from orthonormality by {dev:e}",
                    a + 1,
                    b + 1
                )));
            }
        }
    }
    Ok(())
}

/// Decomposition of `sum_k spectrum_k |eigenstates_k><eigenstates_k|` induced
/// by `u`, which may be larger than the rank.
pub fn decompose(
    spectrum: &[f64],
    eigenstates: &[PureStateVector],
    u: &CMatrix,
) -> Result<DecompositionSample> {
    if spectrum.len() != eigenstates.len() || spectrum.is_empty() {
        return Err(Error::DimensionMismatch(format!(
            "{} eigenvalues for {} eigenstates",
            spectrum.len(),
            eigenstates.len()
        )));
    }
    check_spectrum(spectrum)?;
    check_orthonormal(eigenstates)?;
    decompose_unchecked(spectrum, eigenstates, u)
}

fn decompose_unchecked(
    spectrum: &[f64],
    eigenstates: &[PureStateVector],
    u: &CMatrix,
) -> Result<DecompositionSample> {
    let rank = spectrum.len();
    if !u.is_square() || u.nrows() < rank {
        return Err(Error::DimensionMismatch(format!(
            "decomposition unitary {}x{} for rank {rank}",
            u.nrows(),
            u.ncols()
        )));
    }
    let dev = unitarity_error(u);
    if dev > UNITARY_TOL {
        return Err(Error::NotUnitary(dev));
    }
    let structure = eigenstates[0].structure().clone();
    let n = structure.dim();
    let roots: Vec<f64> = spectrum.iter().map(|l| l.sqrt()).collect();
    let d = u.nrows();
    let mut probs = Vec::with_capacity(d);
    let mut states = Vec::with_capacity(d);
    for j in 0..d {
        let p: f64 = (0..rank).map(|k| u[(j, k)].norm_sqr() * spectrum[k]).sum();
        if p < NULL_PROB {
            probs.push(0.0);
            states.push(None);
            continue;
        }
        let mut amps = vec![C64::new(0.0, 0.0); n];
        for k in 0..rank {
            let c = u[(j, k)] * roots[k];
            if c.norm_sqr() == 0.0 {
                continue;
            }
            for (slot, a) in amps.iter_mut().zip(eigenstates[k].amplitudes()) {
                *slot += c * a;
            }
        }
        probs.push(p);
        states.push(Some(PureStateVector::normalized(structure.clone(), amps)?));
    }
    Ok(DecompositionSample {
        unitary: u.clone(),
        probs,
        states,
    })
}

/// Spectrum and eigenbasis of a state under test.
#[derive(Clone, Debug)]
pub struct SpectralData {
    pub structure: ModeStructure,
    pub spectrum: Vec<f64>,
    pub states: Vec<PureStateVector>,
    /// The eigenbasis came from a numerical solver with repeated eigenvalues,
    /// so results hold for that particular basis only.
    pub degenerate_basis: bool,
}

impl SpectralData {
    pub fn new(spectrum: Vec<f64>, states: Vec<PureStateVector>) -> Result<Self> {
        if spectrum.len() != states.len() || states.is_empty() {
            return Err(Error::DimensionMismatch(format!(
                "{} eigenvalues for {} eigenstates",
                spectrum.len(),
                states.len()
            )));
        }
        check_spectrum(&spectrum)?;
        check_orthonormal(&states)?;
        Ok(Self {
            structure: states[0].structure().clone(),
            spectrum,
            states,
            degenerate_basis: false,
        })
    }

    pub fn from_mme(state: &MmeState) -> Self {
        Self {
            structure: state.structure().clone(),
            spectrum: state.spectrum().to_vec(),
            states: state.eigenstates(),
            degenerate_basis: false,
        }
    }

    /// Eigen-decomposes a raw matrix, keeping eigenvalues above `1e-10`.
    pub fn from_density(rho: &DensityMatrix) -> Result<Self> {
        let eig = rho.eigh();
        let keep: Vec<usize> = (0..eig.values.len())
            .filter(|&i| eig.values[i] > crate::linalg::PSD_TOL)
            .collect();
        let kept: Vec<f64> = keep.iter().map(|&i| eig.values[i]).collect();
        let total: f64 = kept.iter().sum();
        let spectrum: Vec<f64> = kept.iter().map(|l| l / total).collect();
        let states = keep
            .iter()
            .map(|&i| {
                let col: Vec<C64> = eig.vectors.column(i).iter().copied().collect();
                PureStateVector::normalized(rho.structure().clone(), col)
            })
            .collect::<Result<Vec<_>>>()?;
        let degenerate_basis = spectrum
            .windows(2)
            .any(|w| (w[0] - w[1]).abs() < DEGENERACY_TOL);
        Ok(Self {
            structure: rho.structure().clone(),
            spectrum,
            states,
            degenerate_basis,
        })
    }

    pub fn rank(&self) -> usize {
        self.spectrum.len()
    }

    pub fn decompose(&self, u: &CMatrix) -> Result<DecompositionSample> {
        decompose_unchecked(&self.spectrum, &self.states, u)
    }

    pub fn density(&self) -> DensityMatrix {
        let n = self.structure.dim();
        let mut m = CMatrix::zeros(n, n);
        for (s, &l) in self.states.iter().zip(&self.spectrum) {
            let a = s.amplitudes();
            for i in 0..n {
                for j in 0..n {
                    m[(i, j)] += a[i] * a[j].conj() * l;
                }
            }
        }
        DensityMatrix::from_matrix_unchecked(self.structure.clone(), m)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StrategyKind {
    Grid,
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Strategy {
    /// `U^[2](theta, chi)` grid; rank 2 only.
    Grid {
        theta_points: usize,
        chi_points: usize,
    },
    /// `samples` Haar unitaries for each `D` in `d_min..=d_max`.
    Random {
        samples: usize,
        d_min: usize,
        d_max: usize,
        seed: u64,
    },
}

impl Strategy {
    pub fn default_grid() -> Self {
        Self::Grid {
            theta_points: 20,
            chi_points: 20,
        }
    }

    /// 100 samples for each `D` from `r` to `r^2`.
    pub fn default_random(rank: usize, seed: u64) -> Self {
        Self::Random {
            samples: 100,
            d_min: rank,
            d_max: rank * rank,
            seed,
        }
    }

    pub fn kind(&self) -> StrategyKind {
        match self {
            Self::Grid { .. } => StrategyKind::Grid,
            Self::Random { .. } => StrategyKind::Random,
        }
    }
}

/// Which decomposition attained the minimum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Argmin {
    Grid { theta: f64, chi: f64 },
    Random { d: usize, index: usize, seed: u64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct EntEstimate {
    pub strategy: StrategyKind,
    pub samples: usize,
    pub min_avg: f64,
    pub max_avg: f64,
    pub argmin: Argmin,
    pub degenerate_basis: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub averages: Option<Vec<f64>>,
}

enum Sampler {
    Grid(Vec<GridPoint>),
    Random(Vec<(usize, usize)>, u64),
}

impl Sampler {
    fn len(&self) -> usize {
        match self {
            Self::Grid(p) => p.len(),
            Self::Random(p, _) => p.len(),
        }
    }

    fn unitary(&self, i: usize) -> CMatrix {
        match self {
            Self::Grid(p) => p[i].unitary(),
            Self::Random(p, seed) => {
                let (d, index) = p[i];
                haar_unitary_with(d, &mut sample_rng(*seed, d, index))
            }
        }
    }

    fn argmin(&self, i: usize) -> Argmin {
        match self {
            Self::Grid(p) => Argmin::Grid {
                theta: p[i].theta,
                chi: p[i].chi,
            },
            Self::Random(p, seed) => Argmin::Random {
                d: p[i].0,
                index: p[i].1,
                seed: *seed,
            },
        }
    }
}

/// Independent stream per `(D, index)` so results do not depend on how the
/// samples are split across threads.
fn sample_rng(seed: u64, d: usize, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((d as u64) << 32) | index as u64);
    rng
}

/// Minimum over sampled decompositions of the average ent.
pub fn min_avg_ent(data: &SpectralData, strategy: Strategy) -> Result<EntEstimate> {
    min_avg_ent_with(data, strategy, false)
}

/// As [`min_avg_ent`], optionally keeping every per-sample average in order.
pub fn min_avg_ent_with(
    data: &SpectralData,
    strategy: Strategy,
    keep_averages: bool,
) -> Result<EntEstimate> {
    let rank = data.rank();
    let sampler = match strategy {
        Strategy::Grid {
            theta_points,
            chi_points,
        } => {
            if rank != 2 {
                return Err(Error::InvalidInput(format!(
                    "grid strategy needs rank 2, state has rank {rank}"
                )));
            }
            Sampler::Grid(u2_grid(theta_points, chi_points).collect())
        }
        Strategy::Random {
            samples,
            d_min,
            d_max,
            seed,
        } => {
            if d_min < rank || d_max < d_min {
                return Err(Error::InvalidInput(format!(
                    "decomposition sizes {d_min}..={d_max} invalid for rank {rank}"
                )));
            }
            let points = (d_min..=d_max)
                .flat_map(|d| (0..samples).map(move |i| (d, i)))
                .collect();
            Sampler::Random(points, seed)
        }
    };
    if sampler.len() == 0 {
        return Err(Error::InvalidInput("no decompositions to sample".into()));
    }
    let measure = EntMeasure::new(&data.structure)?;
    let averages = (0..sampler.len())
        .into_par_iter()
        .map(|i| data.decompose(&sampler.unitary(i))?.average_ent(&measure))
        .collect::<Result<Vec<f64>>>()?;
    let (best, min_avg) =
        averages
            .iter()
            .copied()
            .enumerate()
            .fold(
                (0, f64::INFINITY),
                |acc, (i, v)| if v < acc.1 { (i, v) } else { acc },
            );
    let max_avg = averages.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(EntEstimate {
        strategy: strategy.kind(),
        samples: averages.len(),
        min_avg,
        max_avg,
        argmin: sampler.argmin(best),
        degenerate_basis: data.degenerate_basis,
        averages: keep_averages.then_some(averages),
    })
}

/// One decomposition state's single-mode reduction purity.
#[derive(Clone, Debug, Serialize)]
pub struct PurityEntry {
    pub j: usize,
    pub mode: usize,
    pub purity: f64,
    pub expected: f64,
    pub deviates: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PurityReport {
    pub entries: Vec<PurityEntry>,
    pub clean: bool,
}

/// Compares every mode reduction purity of every `|w_j>` against the MPSRP
/// for tuple size `levels`. `j` is 1-based; null-weight states are skipped.
pub fn reduction_purity_report(
    sample: &DecompositionSample,
    levels: usize,
) -> Result<PurityReport> {
    let mut entries = Vec::new();
    for (j, state) in sample.states.iter().enumerate() {
        let Some(w) = state else { continue };
        for (m, &n_m) in w.structure().dims().iter().enumerate() {
            let purity = w.mode_purity(m + 1)?;
            let expected = mpsrp_purity(n_m, levels)?;
            entries.push(PurityEntry {
                j: j + 1,
                mode: m + 1,
                purity,
                expected,
                deviates: (purity - expected).abs() > PURITY_TOL,
            });
        }
    }
    let clean = entries.iter().all(|e| !e.deviates);
    Ok(PurityReport { entries, clean })
}

/// The rank-2 comparison states on `2x2x2x2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `Phi+_{1,16}`, `Phi+_{4,13}`: compatible ME tuples.
    Mme,
    /// `Phi+_{1,16}`, `Phi+_{2,15}`: disjoint supports, not compatible.
    ESpacewise,
    /// `Phi+_{1,16}`, `Phi-_{1,16}`: orthogonal by cancellation.
    ESelfspace,
    /// `|1>`, `|16>`.
    Separable,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::Mme,
        Family::ESpacewise,
        Family::ESelfspace,
        Family::Separable,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Mme => "mme",
            Self::ESpacewise => "e_spacewise",
            Self::ESelfspace => "e_selfspace",
            Self::Separable => "separable",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mme" => Ok(Self::Mme),
            "e_spacewise" | "spacewise" => Ok(Self::ESpacewise),
            "e_selfspace" | "selfspace" => Ok(Self::ESelfspace),
            "separable" | "sep" => Ok(Self::Separable),
            other => Err(Error::InvalidInput(format!("unknown family {other:?}"))),
        }
    }
}

/// Eigenstates and spectrum of a comparison family member. Zero weights are
/// allowed so the pure-state end of a sweep is included.
pub fn comparison_spectral(kind: Family, spectrum: [f64; 2]) -> Result<SpectralData> {
    let s = ModeStructure::qubits(4)?;
    let pair = |a: usize, b: usize, sign: f64| -> Result<PureStateVector> {
        let t = MeTgxTuple::certify(&s, &[a, b])?;
        let phases = [0.0, if sign < 0.0 { PI } else { 0.0 }];
        build_tgx_state(&t, None, Some(&phases))
    };
    let states = match kind {
        Family::Mme => vec![pair(1, 16, 1.0)?, pair(4, 13, 1.0)?],
        Family::ESpacewise => vec![pair(1, 16, 1.0)?, pair(2, 15, 1.0)?],
        Family::ESelfspace => vec![pair(1, 16, 1.0)?, pair(1, 16, -1.0)?],
        Family::Separable => vec![
            PureStateVector::basis(s.clone(), 1)?,
            PureStateVector::basis(s.clone(), 16)?,
        ],
    };
    SpectralData::new(spectrum.to_vec(), states)
}

pub fn comparison_family(kind: Family, spectrum: [f64; 2]) -> Result<DensityMatrix> {
    Ok(comparison_spectral(kind, spectrum)?.density())
}

/// One point of a spectrum sweep.
#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub family: Family,
    pub lambda1: f64,
    pub upsilon_min: f64,
}

/// `lambda1` on `points` evenly spaced values in `[1/2, 1]` (both ends
/// included), `lambda2 = 1 - lambda1`, grid-minimized average ent.
pub fn sweep(
    family: Family,
    points: usize,
    theta_points: usize,
    chi_points: usize,
) -> Result<Vec<SweepRow>> {
    let lambdas: Vec<f64> = match points {
        0 => Vec::new(),
        1 => vec![0.5],
        _ => (0..points)
            .map(|i| 0.5 + 0.5 * i as f64 / (points - 1) as f64)
            .collect(),
    };
    lambdas
        .into_iter()
        .map(|l1| {
            let data = comparison_spectral(family, [l1, 1.0 - l1])?;
            let est = min_avg_ent(
                &data,
                Strategy::Grid {
                    theta_points,
                    chi_points,
                },
            )?;
            Ok(SweepRow {
                family,
                lambda1: l1,
                upsilon_min: est.min_avg,
            })
        })
        .collect()
}

/// Average ent at every grid point, for surface plots.
#[derive(Clone, Debug, Serialize)]
pub struct SurfacePoint {
    pub theta: f64,
    pub chi: f64,
    pub avg_ent: f64,
}

pub fn grid_surface(
    data: &SpectralData,
    theta_points: usize,
    chi_points: usize,
) -> Result<Vec<SurfacePoint>> {
    let points: Vec<GridPoint> = u2_grid(theta_points, chi_points).collect();
    let est = min_avg_ent_with(
        data,
        Strategy::Grid {
            theta_points,
            chi_points,
        },
        true,
    )?;
    let averages = est.averages.expect("averages kept");
    Ok(points
        .iter()
        .zip(averages)
        .map(|(p, avg_ent)| SurfacePoint {
            theta: p.theta,
            chi: p.chi,
            avg_ent,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entcore::ent_pure;
    use crate::linalg::outer;
    use std::f64::consts::FRAC_PI_4;

    fn st(text: &str) -> ModeStructure {
        text.parse().unwrap()
    }

    fn pair_state(s: &ModeStructure, a: usize, b: usize) -> PureStateVector {
        MeTgxTuple::certify(s, &[a, b]).unwrap().state()
    }

    #[test]
    fn haar_is_unitary_and_deterministic() {
        for d in 1..=5 {
            let u = haar_unitary(d, 7);
            assert!(unitarity_error(&u) < 1e-12);
            assert_eq!(u, haar_unitary(d, 7));
        }
        assert!((haar_unitary(1, 3)[(0, 0)].norm() - 1.0).abs() < 1e-14);
        assert_ne!(haar_unitary(3, 1), haar_unitary(3, 2));
    }

    #[test]
    fn haar_first_moment() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let draws = 10_000;
        let mean: f64 = (0..draws)
            .map(|_| haar_unitary_with(2, &mut rng)[(0, 0)].norm_sqr())
            .sum::<f64>()
            / draws as f64;
        assert!((mean - 0.5).abs() < 0.02, "{mean}");
    }

    #[test]
    fn grid_shape() {
        let pts: Vec<GridPoint> = u2_grid(20, 20).collect();
        assert_eq!(pts.len(), 400);
        assert_eq!(pts[0].theta, 0.0);
        let id = pts[0].unitary();
        assert!((id[(0, 0)].norm() - 1.0).abs() < 1e-15 && id[(0, 1)].norm() < 1e-15);
        assert!(pts
            .iter()
            .any(|p| (p.theta - FRAC_PI_4).abs() < 1e-15 && p.chi == 0.0));
        for p in &pts {
            assert!(unitarity_error(&p.unitary()) < 1e-14);
        }
    }

    #[test]
    fn identity_recovers_spectral_decomposition() {
        let s = st("2^4");
        let states = vec![pair_state(&s, 1, 16), pair_state(&s, 4, 13)];
        let sample = decompose(&[0.7, 0.3], &states, &CMatrix::identity(2, 2)).unwrap();
        assert_eq!(sample.probs, vec![0.7, 0.3]);
        for (w, v) in sample.states.iter().zip(&states) {
            assert!((w.as_ref().unwrap().inner(v).norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn selfspace_balanced_mixer_collapses_to_products() {
        let data = comparison_spectral(Family::ESelfspace, [0.5, 0.5]).unwrap();
        let sample = data.decompose(&u2(FRAC_PI_4, 0.0)).unwrap();
        let measure = EntMeasure::new(&data.structure).unwrap();
        for w in sample.states.iter().flatten() {
            let support: Vec<usize> = (1..=16).filter(|&l| w.amplitude(l).norm() > 1e-9).collect();
            assert!(support == vec![1] || support == vec![16], "{support:?}");
            assert!(measure.of(w).unwrap().value() < 1e-12);
        }
    }

    #[test]
    fn every_decomposition_of_mme_is_maximal() {
        let data = comparison_spectral(Family::Mme, [0.7, 0.3]).unwrap();
        let measure = EntMeasure::new(&data.structure).unwrap();
        for seed in 0..20 {
            let sample = data
                .decompose(&haar_unitary(2 + (seed as usize % 3), seed))
                .unwrap();
            for w in sample.states.iter().flatten() {
                assert!((measure.of(w).unwrap().value() - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn decompose_errors() {
        let s = st("2^4");
        let states = vec![pair_state(&s, 1, 16), pair_state(&s, 4, 13)];
        let one = CMatrix::identity(1, 1);
        assert!(decompose(&[0.7, 0.3], &states, &one).is_err());
        let mut bad = CMatrix::identity(2, 2);
        bad[(0, 1)] = C64::new(1.0, 0.0);
        assert!(matches!(
            decompose(&[0.7, 0.3], &states, &bad),
            Err(Error::NotUnitary(_))
        ));
        assert!(decompose(&[0.6, 0.3], &states, &CMatrix::identity(2, 2)).is_err());
        let clash = vec![pair_state(&s, 1, 16), pair_state(&s, 1, 16)];
        assert!(decompose(&[0.5, 0.5], &clash, &CMatrix::identity(2, 2)).is_err());
    }

    #[test]
    fn null_weight_states_are_dropped() {
        let s = st("2^4");
        let states = vec![pair_state(&s, 1, 16), pair_state(&s, 4, 13)];
        // D = 3 with a row that never touches the first two columns
        let mut u = CMatrix::identity(3, 3);
        u[(0, 0)] = C64::new(0.0, 0.0);
        u[(0, 2)] = C64::new(1.0, 0.0);
        u[(2, 2)] = C64::new(0.0, 0.0);
        u[(2, 0)] = C64::new(1.0, 0.0);
        let sample = decompose(&[0.7, 0.3], &states, &u).unwrap();
        assert_eq!(sample.probs[0], 0.0);
        assert!(sample.states[0].is_none());
        let rho = mix(&states, &[0.7, 0.3]).unwrap();
        assert!(sample.reconstruct().unwrap().max_abs_diff(&rho) < 1e-12);
    }

    #[test]
    fn two_by_five_grid_is_flat() {
        let s = st("2x5");
        let data = SpectralData::new(
            vec![0.7, 0.3],
            vec![pair_state(&s, 1, 10), pair_state(&s, 2, 8)],
        )
        .unwrap();
        let est = min_avg_ent(&data, Strategy::default_grid()).unwrap();
        assert_eq!(est.samples, 400);
        assert!((est.min_avg - 1.0).abs() < 1e-9);
    }

    #[test]
    fn separable_floor_and_selfspace_zero() {
        let sep = comparison_spectral(Family::Separable, [0.7, 0.3]).unwrap();
        let est = min_avg_ent(&sep, Strategy::default_grid()).unwrap();
        assert!(est.min_avg.abs() < 1e-9);
        let selfspace = comparison_spectral(Family::ESelfspace, [0.5, 0.5]).unwrap();
        let est = min_avg_ent(&selfspace, Strategy::default_grid()).unwrap();
        assert!(est.min_avg.abs() < 1e-6);
        assert_eq!(
            est.argmin,
            Argmin::Grid {
                theta: FRAC_PI_4,
                chi: 0.0
            }
        );
    }

    #[test]
    fn selfspace_grid_matches_closed_form() {
        // at equal weights the average is 1 - sin^2(2 theta) cos^2(chi)
        let data = comparison_spectral(Family::ESelfspace, [0.5, 0.5]).unwrap();
        let surface = grid_surface(&data, 8, 6).unwrap();
        for p in surface {
            let closed = 1.0 - (2.0 * p.theta).sin().powi(2) * p.chi.cos().powi(2);
            assert!((p.avg_ent - closed).abs() < 1e-10, "{p:?}");
        }
    }

    #[test]
    fn random_strategy_is_worker_independent() {
        let data = comparison_spectral(Family::ESpacewise, [0.6, 0.4]).unwrap();
        let strategy = Strategy::Random {
            samples: 10,
            d_min: 2,
            d_max: 4,
            seed: 5,
        };
        let a = min_avg_ent_with(&data, strategy, true).unwrap();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let b = pool.install(|| min_avg_ent_with(&data, strategy, true).unwrap());
        assert_eq!(a.averages, b.averages);
        assert_eq!(a.samples, 30);
        assert!(a.min_avg < 1.0);
    }

    #[test]
    fn grid_refuses_higher_rank() {
        let s = st("2^4");
        let data = SpectralData::new(
            vec![0.5, 0.3, 0.2],
            vec![
                pair_state(&s, 1, 16),
                pair_state(&s, 4, 13),
                pair_state(&s, 6, 11),
            ],
        )
        .unwrap();
        assert!(min_avg_ent(&data, Strategy::default_grid()).is_err());
        let bad = Strategy::Random {
            samples: 1,
            d_min: 2,
            d_max: 4,
            seed: 0,
        };
        assert!(min_avg_ent(&data, bad).is_err());
    }

    #[test]
    fn purity_reports() {
        let s = st("2x5");
        let data = SpectralData::new(
            vec![0.7, 0.3],
            vec![pair_state(&s, 1, 10), pair_state(&s, 2, 8)],
        )
        .unwrap();
        let sample = data.decompose(&haar_unitary(3, 4)).unwrap();
        let report = reduction_purity_report(&sample, 2).unwrap();
        assert!(report.clean);
        assert!(report.entries.iter().all(|e| (e.purity - 0.5).abs() < 1e-9));
        // the mode-2 reductions differ between decomposition states
        let reds: Vec<DensityMatrix> = sample
            .states
            .iter()
            .flatten()
            .map(|w| w.reduce(&[2]).unwrap())
            .collect();
        assert!(reds[0].max_abs_diff(&reds[1]) > 1e-6);

        let spacewise = comparison_spectral(Family::ESpacewise, [0.5, 0.5]).unwrap();
        let sample = spacewise.decompose(&u2(FRAC_PI_4, 0.0)).unwrap();
        assert!(!reduction_purity_report(&sample, 2).unwrap().clean);
    }

    #[test]
    fn from_density_flags_degeneracy() {
        let rho = comparison_family(Family::Mme, [0.5, 0.5]).unwrap();
        let data = SpectralData::from_density(&rho).unwrap();
        assert_eq!(data.rank(), 2);
        assert!(data.degenerate_basis);
        let rho = comparison_family(Family::Mme, [0.7, 0.3]).unwrap();
        let data = SpectralData::from_density(&rho).unwrap();
        assert!(!data.degenerate_basis);
        assert!((data.spectrum[0] - 0.7).abs() < 1e-12);
        assert!(data.density().max_abs_diff(&rho) < 1e-12);
    }

    #[test]
    fn sweep_ends() {
        let rows = sweep(Family::Mme, 5, 4, 4).unwrap();
        assert_eq!(rows.len(), 5);
        assert_eq!(rows[0].lambda1, 0.5);
        assert_eq!(rows[4].lambda1, 1.0);
        assert!(rows.iter().all(|r| (r.upsilon_min - 1.0).abs() < 1e-9));
        let sep = sweep(Family::Separable, 3, 4, 4).unwrap();
        assert!(sep.iter().all(|r| r.upsilon_min.abs() < 1e-9));
        let pure = comparison_spectral(Family::Mme, [1.0, 0.0]).unwrap();
        assert!((ent_pure(&pure.states[0]).unwrap().value() - 1.0).abs() < 1e-12);
        let _ = outer(&pure.states[0]);
    }
}
