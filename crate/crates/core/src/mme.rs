//! MME compatibility, maximal MME rank search and MME state construction.
//!
//! Two ME TGX tuples can be eigenstates of one MME state when, for every mode
//! `m`, projecting all their levels onto the bigger side `B_m` of the extreme
//! bipartition `(m | mbar)` never gives the same value twice. That is the
//! vanishing of `tr_{B_m}(|Phi_k><Phi_l|)` for `k != l`, read off the
//! supports. Because the condition is pairwise, the maximal MME rank is the
//! maximum clique of the compatibility graph on ME tuples of size `min L*`.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use rand::seq::SliceRandom;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::entcore::{lstar, LStarSet};
use crate::error::{Error, Result};
use crate::linalg::{mix, DensityMatrix, PureStateVector};
use crate::modes::ModeStructure;
use crate::tgx::{enumerate_with, is_me_tuple, ApplyLu, LocalUnitarySet, MeTgxTuple};

/// Default node budget of the exact search.
pub const DEFAULT_BUDGET: u64 = 200_000_000;
/// Largest tuple count the dense compatibility graph is built for.
pub const MAX_GRAPH_VERTICES: usize = 20_000;
const SPECTRUM_TOL: f64 = 1e-12;

/// A repeated projected level on one mode line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Conflict {
    /// Focal mode `m`, 1-based.
    pub mode: usize,
    /// Projected level on `B_m`, 1-based.
    pub projected: usize,
    /// 1-based positions of the tuples holding the two occurrences (equal for
    /// a repeat inside one tuple).
    pub first: usize,
    pub second: usize,
}

impl From<Conflict> for Error {
    fn from(c: Conflict) -> Self {
        Error::Incompatible {
            mode: c.mode,
            projected: c.projected,
            first: c.first,
            second: c.second,
        }
    }
}

/// `B_m` of every mode, 0-based.
fn big_sides(s: &ModeStructure) -> Vec<Vec<usize>> {
    (1..=s.mode_count())
        .map(|m| {
            let b = s.bipartition(m).expect("mode in range");
            b.big_modes.iter().map(|&k| k - 1).collect()
        })
        .collect()
}

/// First repeat on any mode line, scanning modes in order and levels in
/// tuple order.
pub fn first_conflict(s: &ModeStructure, tuples: &[&[usize]]) -> Option<Conflict> {
    for (m, side) in big_sides(s).iter().enumerate() {
        let mut seen: HashMap<usize, usize> = HashMap::new();
        for (t, levels) in tuples.iter().enumerate() {
            for &l in levels.iter() {
                let p = s.project_index(l - 1, side) + 1;
                if let Some(&first) = seen.get(&p) {
                    return Some(Conflict {
                        mode: m + 1,
                        projected: p,
                        first: first + 1,
                        second: t + 1,
                    });
                }
                seen.insert(p, t);
            }
        }
    }
    None
}

fn check_uniform(tuples: &[MeTgxTuple]) -> Result<()> {
    let Some(head) = tuples.first() else {
        return Ok(());
    };
    for t in tuples {
        if t.structure() != head.structure() {
            return Err(Error::InvalidInput(format!(
                "tuples from {} and {}",
                head.structure(),
                t.structure()
            )));
        }
        if t.len() != head.len() {
            return Err(Error::InvalidInput(format!(
                "tuples of sizes {} and {}",
                head.len(),
                t.len()
            )));
        }
    }
    Ok(())
}

/// Whether the tuples can jointly be the eigenstates of an MME state.
pub fn compatible(tuples: &[MeTgxTuple]) -> Result<bool> {
    Ok(conflict(tuples)?.is_none())
}

/// The first failing mode line, if any.
pub fn conflict(tuples: &[MeTgxTuple]) -> Result<Option<Conflict>> {
    check_uniform(tuples)?;
    let Some(head) = tuples.first() else {
        return Ok(None);
    };
    let sets: Vec<&[usize]> = tuples.iter().map(|t| t.levels()).collect();
    Ok(first_conflict(head.structure(), &sets))
}

/// `floor(min_m n_B(m) / min L*)`.
pub fn loose_bound(s: &ModeStructure) -> Result<usize> {
    Ok(loose_bound_at(s, lstar(s)?.min_value()))
}

fn loose_bound_at(s: &ModeStructure, levels: usize) -> usize {
    let min_big = (1..=s.mode_count())
        .map(|m| s.bipartition(m).expect("mode in range").big_dim)
        .min()
        .expect("at least one mode");
    min_big / levels
}

/// Per-tuple occupancy of every mode line, concatenated across modes.
fn projection_masks(s: &ModeStructure, tuples: &[MeTgxTuple]) -> Vec<FixedBitSet> {
    let sides = big_sides(s);
    let widths: Vec<usize> = sides
        .iter()
        .map(|side| side.iter().map(|&k| s.dims()[k]).product())
        .collect();
    let offsets: Vec<usize> = widths
        .iter()
        .scan(0, |acc, w| {
            let o = *acc;
            *acc += w;
            Some(o)
        })
        .collect();
    let total: usize = widths.iter().sum();
    tuples
        .par_iter()
        .map(|t| {
            let mut mask = FixedBitSet::with_capacity(total);
            for (side, &off) in sides.iter().zip(&offsets) {
                for &l in t.levels() {
                    mask.insert(off + s.project_index(l - 1, side));
                }
            }
            mask
        })
        .collect()
}

/// First-fit in lexicographic order against the union of accepted masks;
/// needs no adjacency matrix.
fn lex_first_fit(masks: &[FixedBitSet]) -> Vec<usize> {
    let Some(first) = masks.first() else {
        return Vec::new();
    };
    let mut used = FixedBitSet::with_capacity(first.len());
    let mut clique = Vec::new();
    for (i, m) in masks.iter().enumerate() {
        if used.is_disjoint(m) {
            used.union_with(m);
            clique.push(i);
        }
    }
    clique
}

/// Dense compatibility graph over lexicographically sorted tuples.
struct CompatGraph {
    adj: Vec<FixedBitSet>,
}

impl CompatGraph {
    fn new(masks: &[FixedBitSet]) -> Self {
        let n = masks.len();
        let adj = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut row = FixedBitSet::with_capacity(n);
                for j in 0..n {
                    if i != j && masks[i].is_disjoint(&masks[j]) {
                        row.insert(j);
                    }
                }
                row
            })
            .collect();
        Self { adj }
    }

    fn len(&self) -> usize {
        self.adj.len()
    }

    fn all(&self) -> FixedBitSet {
        let mut p = FixedBitSet::with_capacity(self.len());
        p.insert_range(..);
        p
    }

    /// First-fit clique following `order`; returned sorted.
    fn first_fit(&self, order: &[usize]) -> Vec<usize> {
        let mut cand = self.all();
        let mut clique = Vec::new();
        for &v in order {
            if cand.contains(v) {
                clique.push(v);
                cand.intersect_with(&self.adj[v]);
            }
        }
        clique.sort_unstable();
        clique
    }
}

struct Budget {
    limit: Option<u64>,
    used: u64,
}

impl Budget {
    fn tick(&mut self) -> bool {
        self.used += 1;
        self.limit.is_none_or(|l| self.used <= l)
    }
}

/// Maximum clique by the vertex-suffix method: `c[i]` is the clique number
/// of the subgraph on vertices `i..`, computed from the last vertex down.
struct Exact<'a> {
    g: &'a CompatGraph,
    c: Vec<usize>,
    best: Vec<usize>,
    stack: Vec<usize>,
    found: bool,
    aborted: bool,
    budget: &'a mut Budget,
}

impl Exact<'_> {
    fn expand(&mut self, mut p: FixedBitSet) {
        if !self.budget.tick() {
            self.aborted = true;
            return;
        }
        if p.is_clear() {
            if self.stack.len() > self.best.len() {
                self.best = self.stack.clone();
                self.found = true;
            }
            return;
        }
        while let Some(j) = p.minimum() {
            let size = self.stack.len();
            if size + p.count_ones(..) <= self.best.len() || size + self.c[j] <= self.best.len() {
                return;
            }
            p.set(j, false);
            let mut q = p.clone();
            q.intersect_with(&self.g.adj[j]);
            self.stack.push(j);
            self.expand(q);
            self.stack.pop();
            if self.found || self.aborted {
                return;
            }
        }
    }

    /// Runs until `c` is complete or a clique of size `stop_at` appears.
    fn run(&mut self, stop_at: usize) {
        let n = self.g.len();
        for i in (0..n).rev() {
            self.found = false;
            let mut p = self.g.adj[i].clone();
            p.remove_range(..i + 1);
            self.stack.push(i);
            self.expand(p);
            self.stack.pop();
            self.c[i] = self.best.len();
            if self.aborted {
                return;
            }
            if self.best.len() >= stop_at {
                // vertices below i are unexplored; the target bounds them
                self.c[..i].iter_mut().for_each(|x| *x = stop_at);
                return;
            }
        }
    }

    /// Lexicographically first clique of size `target`, using `c` as bounds.
    fn lex_first(&mut self, target: usize, mut p: FixedBitSet) -> bool {
        self.budget.used += 1;
        if self.stack.len() == target {
            return true;
        }
        while let Some(j) = p.minimum() {
            let size = self.stack.len();
            if size + self.c[j] < target || size + p.count_ones(..) < target {
                return false;
            }
            p.set(j, false);
            let mut q = p.clone();
            q.intersect_with(&self.g.adj[j]);
            self.stack.push(j);
            if self.lex_first(target, q) {
                return true;
            }
            self.stack.pop();
        }
        false
    }
}

/// How an `R_MME` value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    /// The exact search finished: no larger compatible set exists.
    Proven,
    /// A compatible set reached the loose bound, which caps the rank.
    BoundAttained,
    /// The node budget ran out; the value is the best found.
    Inconclusive,
    /// Greedy search; the value is a lower bound.
    Heuristic,
}

impl SearchStatus {
    pub fn is_exact(self) -> bool {
        matches!(self, Self::Proven | Self::BoundAttained)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    Exhaustive,
    /// First-fit from lexicographic order, then from `restarts - 1` random
    /// orders.
    Greedy {
        restarts: usize,
        seed: u64,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchOptions {
    pub mode: SearchMode,
    /// Node limit of the exact search; `None` is unlimited.
    pub budget_nodes: Option<u64>,
    /// Tuple size to search, which must be in `L*`. Defaults to `min L*`.
    pub levels: Option<usize>,
    /// Search every `L` in `L*` and report the largest rank.
    pub all_lstar: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            mode: SearchMode::Exhaustive,
            budget_nodes: Some(DEFAULT_BUDGET),
            levels: None,
            all_lstar: false,
        }
    }
}

impl SearchOptions {
    pub fn greedy(restarts: usize, seed: u64) -> Self {
        Self {
            mode: SearchMode::Greedy { restarts, seed },
            ..Self::default()
        }
    }
}

/// Search outcome for one tuple size.
#[derive(Clone, Debug, Serialize)]
pub struct LevelRank {
    #[serde(rename = "L")]
    pub levels: usize,
    pub tuple_count: usize,
    #[serde(rename = "R_MME")]
    pub r_mme: usize,
    pub status: SearchStatus,
}

#[derive(Clone, Debug, Serialize)]
pub struct MmeRankReport {
    pub structure: ModeStructure,
    #[serde(rename = "Lstar")]
    pub lstar: Vec<usize>,
    #[serde(rename = "L_used")]
    pub l_used: usize,
    pub r_tilde: usize,
    #[serde(rename = "R_MME")]
    pub r_mme: usize,
    pub witness: Vec<MeTgxTuple>,
    pub exhaustive: bool,
    pub status: SearchStatus,
    pub tuple_count: usize,
    pub nodes: u64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub per_l: Vec<LevelRank>,
}

struct LevelOutcome {
    levels: usize,
    tuples: Vec<MeTgxTuple>,
    clique: Vec<usize>,
    status: SearchStatus,
    nodes: u64,
}

fn search_level(
    s: &ModeStructure,
    set: &LStarSet,
    levels: usize,
    opts: &SearchOptions,
) -> Result<LevelOutcome> {
    let tuples = enumerate_with(s, set, levels)?.tuples;
    let bound = loose_bound_at(s, levels);
    let outcome = |clique, status, nodes| LevelOutcome {
        levels,
        tuples: tuples.clone(),
        clique,
        status,
        nodes,
    };
    if tuples.is_empty() {
        return Ok(outcome(Vec::new(), SearchStatus::Proven, 0));
    }
    let masks = projection_masks(s, &tuples);
    let seed_clique = lex_first_fit(&masks);
    // the lexicographic first-fit is the lex-smallest clique of its size
    if seed_clique.len() >= bound {
        return Ok(outcome(seed_clique, SearchStatus::BoundAttained, 1));
    }
    if tuples.len() > MAX_GRAPH_VERTICES {
        return Err(Error::UnsupportedSystem(format!(
            "{s}: {} ME tuples at L={levels} exceed the graph limit {MAX_GRAPH_VERTICES}",
            tuples.len()
        )));
    }
    let g = CompatGraph::new(&masks);
    let lex: Vec<usize> = (0..g.len()).collect();
    match opts.mode {
        SearchMode::Greedy { restarts, seed } => {
            let best = (1..restarts.max(1))
                .into_par_iter()
                .map(|r| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(r as u64);
                    let mut order = lex.clone();
                    order.shuffle(&mut rng);
                    g.first_fit(&order)
                })
                .chain(rayon::iter::once(seed_clique))
                .reduce_with(pick)
                .expect("at least one restart");
            let status = if best.len() >= bound {
                SearchStatus::BoundAttained
            } else {
                SearchStatus::Heuristic
            };
            Ok(outcome(best, status, restarts.max(1) as u64))
        }
        SearchMode::Exhaustive => {
            let mut budget = Budget {
                limit: opts.budget_nodes,
                used: 0,
            };
            let mut exact = Exact {
                g: &g,
                c: vec![0; g.len()],
                best: Vec::new(),
                stack: Vec::new(),
                found: false,
                aborted: false,
                budget: &mut budget,
            };
            exact.run(bound);
            if exact.aborted {
                let best = pick(exact.best.clone(), seed_clique);
                let nodes = exact.budget.used;
                return Ok(outcome(best, SearchStatus::Inconclusive, nodes));
            }
            let target = exact.best.len();
            exact.stack.clear();
            let all = g.all();
            if !exact.lex_first(target, all) {
                return Err(Error::Internal(format!(
                    "{s}: no clique of size {target} in the witness pass"
                )));
            }
            let clique = exact.stack.clone();
            let status = if target >= bound {
                SearchStatus::BoundAttained
            } else {
                SearchStatus::Proven
            };
            let nodes = exact.budget.used;
            Ok(outcome(clique, status, nodes))
        }
    }
}

/// Larger clique, ties to the lexicographically smaller.
fn pick(a: Vec<usize>, b: Vec<usize>) -> Vec<usize> {
    match a.len().cmp(&b.len()) {
        std::cmp::Ordering::Greater => a,
        std::cmp::Ordering::Less => b,
        std::cmp::Ordering::Equal => a.min(b),
    }
}

/// Largest compatible set of ME TGX tuples.
pub fn max_mme_rank(s: &ModeStructure, opts: &SearchOptions) -> Result<MmeRankReport> {
    let set = lstar(s)?;
    let r_tilde = loose_bound_at(s, set.min_value());
    let sizes: Vec<usize> = match (opts.all_lstar, opts.levels) {
        (true, _) => set.values.clone(),
        (false, Some(l)) => {
            if !set.contains(l) {
                return Err(Error::InvalidInput(format!(
                    "L={l} is not in L* = {:?} of {s}",
                    set.values
                )));
            }
            vec![l]
        }
        (false, None) => vec![set.min_value()],
    };
    let mut outcomes = Vec::with_capacity(sizes.len());
    for &l in &sizes {
        outcomes.push(search_level(s, &set, l, opts)?);
    }
    let per_l = if opts.all_lstar {
        outcomes
            .iter()
            .map(|o| LevelRank {
                levels: o.levels,
                tuple_count: o.tuples.len(),
                r_mme: o.clique.len(),
                status: o.status,
            })
            .collect()
    } else {
        Vec::new()
    };
    let nodes = outcomes.iter().map(|o| o.nodes).sum();
    let best = outcomes
        .into_iter()
        .reduce(|a, b| {
            if b.clique.len() > a.clique.len() {
                b
            } else {
                a
            }
        })
        .expect("at least one size");
    let witness: Vec<MeTgxTuple> = best
        .clique
        .iter()
        .map(|&i| best.tuples[i].clone())
        .collect();
    Ok(MmeRankReport {
        structure: s.clone(),
        lstar: set.values.clone(),
        l_used: best.levels,
        r_tilde,
        r_mme: witness.len(),
        exhaustive: best.status.is_exact(),
        status: best.status,
        tuple_count: best.tuples.len(),
        nodes,
        witness,
        per_l,
    })
}

/// A mixed state on certified, mutually compatible ME TGX eigenstates.
#[derive(Clone, Debug)]
pub struct MmeState {
    structure: ModeStructure,
    tuples: Vec<MeTgxTuple>,
    spectrum: Vec<f64>,
    lu: Option<LocalUnitarySet>,
}

impl MmeState {
    pub fn new(
        tuples: Vec<MeTgxTuple>,
        spectrum: Vec<f64>,
        lu: Option<LocalUnitarySet>,
    ) -> Result<Self> {
        let head = tuples
            .first()
            .ok_or_else(|| Error::InvalidInput("no eigenstate tuples".into()))?;
        let structure = head.structure().clone();
        if let Some(c) = conflict(&tuples)? {
            return Err(c.into());
        }
        if spectrum.len() != tuples.len() {
            return Err(Error::InvalidWeights(format!(
                "{} eigenvalues for {} tuples",
                spectrum.len(),
                tuples.len()
            )));
        }
        if let Some(bad) = spectrum.iter().find(|&&l| !(l > 0.0 && l <= 1.0)) {
            return Err(Error::InvalidWeights(format!(
                "eigenvalue {bad} outside (0, 1]"
            )));
        }
        let total: f64 = spectrum.iter().sum();
        if (total - 1.0).abs() > SPECTRUM_TOL {
            return Err(Error::InvalidWeights(format!("spectrum sums to {total}")));
        }
        if let Some(lu) = &lu {
            // surfaces size mismatches now rather than at first use
            PureStateVector::basis(structure.clone(), 1)?.apply_lu(lu)?;
        }
        Ok(Self {
            structure,
            tuples,
            spectrum,
            lu,
        })
    }

    pub fn structure(&self) -> &ModeStructure {
        &self.structure
    }

    pub fn tuples(&self) -> &[MeTgxTuple] {
        &self.tuples
    }

    pub fn spectrum(&self) -> &[f64] {
        &self.spectrum
    }

    pub fn lu(&self) -> Option<&LocalUnitarySet> {
        self.lu.as_ref()
    }

    pub fn rank(&self) -> usize {
        self.tuples.len()
    }

    /// Rank 1: a pure ME state rather than a strictly mixed one.
    pub fn is_trivial(&self) -> bool {
        self.rank() == 1
    }

    /// `|Phi'_k>`: tuple states with the local unitaries applied.
    pub fn eigenstates(&self) -> Vec<PureStateVector> {
        self.tuples
            .iter()
            .map(|t| {
                let v = t.state();
                match &self.lu {
                    Some(lu) => v.apply_lu(lu).expect("sizes checked at construction"),
                    None => v,
                }
            })
            .collect()
    }

    pub fn density(&self) -> DensityMatrix {
        mix(&self.eigenstates(), &self.spectrum).expect("spectrum checked at construction")
    }
}

/// Builds the state and its density matrix.
pub fn construct(
    s: &ModeStructure,
    tuples: Vec<MeTgxTuple>,
    spectrum: Vec<f64>,
    lu: Option<LocalUnitarySet>,
) -> Result<(MmeState, DensityMatrix)> {
    if let Some(t) = tuples.iter().find(|t| t.structure() != s) {
        return Err(Error::DimensionMismatch(format!(
            "tuple {t} belongs to {}, not {s}",
            t.structure()
        )));
    }
    let state = MmeState::new(tuples, spectrum, lu)?;
    let rho = state.density();
    Ok((state, rho))
}

#[derive(Clone, Debug, Serialize)]
pub struct TupleCheck {
    pub levels: Vec<usize>,
    pub me: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExampleReport {
    pub structure: ModeStructure,
    pub tuples: Vec<TupleCheck>,
    pub all_me: bool,
    pub set_compatible: bool,
    pub pairwise_compatible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conflict: Option<Conflict>,
}

impl ExampleReport {
    pub fn passed(&self) -> bool {
        self.all_me && self.set_compatible && self.pairwise_compatible
    }
}

/// Certifies each tuple and the set; never fails, failures are in the report.
pub fn validate_example_set(s: &ModeStructure, tuples: &[Vec<usize>]) -> ExampleReport {
    let checks: Vec<TupleCheck> = tuples
        .iter()
        .map(|levels| match is_me_tuple(s, levels) {
            Ok(me) => TupleCheck {
                levels: levels.clone(),
                me,
                error: None,
            },
            Err(e) => TupleCheck {
                levels: levels.clone(),
                me: false,
                error: Some(e.to_string()),
            },
        })
        .collect();
    let in_range = checks.iter().all(|c| c.error.is_none());
    let sets: Vec<&[usize]> = tuples.iter().map(|t| t.as_slice()).collect();
    let conflict = if in_range {
        first_conflict(s, &sets)
    } else {
        None
    };
    let pairwise = in_range
        && (0..sets.len())
            .all(|i| (i + 1..sets.len()).all(|j| first_conflict(s, &[sets[i], sets[j]]).is_none()));
    ExampleReport {
        structure: s.clone(),
        all_me: !checks.is_empty() && checks.iter().all(|c| c.me),
        tuples: checks,
        set_compatible: in_range && conflict.is_none(),
        pairwise_compatible: pairwise,
        conflict,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::C64;

    fn st(text: &str) -> ModeStructure {
        text.parse().unwrap()
    }

    fn tuples(s: &ModeStructure, sets: &[&[usize]]) -> Vec<MeTgxTuple> {
        sets.iter()
            .map(|l| MeTgxTuple::certify(s, l).unwrap())
            .collect()
    }

    fn rank(text: &str) -> MmeRankReport {
        max_mme_rank(&st(text), &SearchOptions::default()).unwrap()
    }

    #[test]
    fn compatible_examples() {
        let q = st("2^4");
        assert!(compatible(&tuples(&q, &[&[1, 16], &[4, 13]])).unwrap());
        let bad = tuples(&q, &[&[1, 16], &[2, 15]]);
        assert!(!compatible(&bad).unwrap());
        assert_eq!(conflict(&bad).unwrap().unwrap().mode, 4);
        let s = st("2x5");
        assert!(!compatible(&tuples(&s, &[&[1, 10], &[2, 10]])).unwrap());
        assert!(compatible(&tuples(&s, &[&[1, 10], &[2, 8]])).unwrap());
        assert!(compatible(&[]).unwrap());
    }

    #[test]
    fn compatible_rejects_mixed_inputs() {
        let a = MeTgxTuple::certify(&st("2x5"), &[1, 10]).unwrap();
        let b = MeTgxTuple::certify(&st("2x4"), &[1, 8]).unwrap();
        assert!(matches!(compatible(&[a, b]), Err(Error::InvalidInput(_))));
        let q = st("2^4");
        let two = MeTgxTuple::certify(&q, &[1, 16]).unwrap();
        let four = MeTgxTuple::certify(&q, &[1, 8, 10, 15]).unwrap();
        assert!(compatible(&[two, four]).is_err());
    }

    #[test]
    fn loose_bound_examples() {
        assert_eq!(loose_bound(&st("2^4")).unwrap(), 4);
        assert_eq!(loose_bound(&st("2^5")).unwrap(), 8);
        assert_eq!(loose_bound(&st("2x3")).unwrap(), 1);
        assert_eq!(loose_bound(&st("2x9")).unwrap(), 4);
        assert_eq!(loose_bound(&st("3x3x4")).unwrap(), 1);
        assert!(loose_bound(&st("7")).is_err());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank("2x4").r_mme, 2);
        assert_eq!(rank("2x2x2").r_mme, 1);
        assert_eq!(rank("2x6").r_mme, 3);
        let r = rank("3x3x3");
        assert_eq!((r.r_mme, r.r_tilde), (3, 3));
        let r = rank("2^4");
        assert_eq!(r.r_mme, 4);
        assert!(r.exhaustive);
        let w: Vec<Vec<usize>> = r.witness.iter().map(|t| t.levels().to_vec()).collect();
        assert_eq!(w, vec![vec![1, 16], vec![4, 13], vec![6, 11], vec![7, 10]]);
        assert!(compatible(&r.witness).unwrap());
    }

    #[test]
    fn five_qubits_needs_the_exact_search() {
        let r = rank("2^5");
        assert_eq!((r.r_tilde, r.r_mme), (8, 5));
        assert_eq!(r.status, SearchStatus::Proven);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let opts = SearchOptions {
            budget_nodes: Some(3),
            ..SearchOptions::default()
        };
        let r = max_mme_rank(&st("2^5"), &opts).unwrap();
        assert_eq!(r.status, SearchStatus::Inconclusive);
        assert!(!r.exhaustive);
        assert!(r.r_mme >= 1 && compatible(&r.witness).unwrap());
    }

    #[test]
    fn greedy_reports_lower_bound() {
        let r = max_mme_rank(&st("2^5"), &SearchOptions::greedy(50, 1)).unwrap();
        assert!(!r.exhaustive);
        assert!(r.r_mme <= 5 && r.r_mme >= 1);
        assert!(compatible(&r.witness).unwrap());
    }

    #[test]
    fn level_override_and_all_lstar() {
        let s = st("2^4");
        let opts = SearchOptions {
            levels: Some(3),
            ..SearchOptions::default()
        };
        assert!(max_mme_rank(&s, &opts).is_err());
        let opts = SearchOptions {
            levels: Some(4),
            ..SearchOptions::default()
        };
        let r = max_mme_rank(&s, &opts).unwrap();
        assert_eq!(r.l_used, 4);
        assert_eq!(r.r_mme, 2);
        let opts = SearchOptions {
            all_lstar: true,
            ..SearchOptions::default()
        };
        let r = max_mme_rank(&s, &opts).unwrap();
        assert_eq!(r.per_l.len(), 4);
        assert_eq!((r.l_used, r.r_mme), (2, 4));
    }

    #[test]
    fn construct_two_by_four_matches_matrix() {
        let s = st("2x4");
        let (state, rho) =
            construct(&s, tuples(&s, &[&[1, 8], &[2, 7]]), vec![0.6, 0.4], None).unwrap();
        assert!(!state.is_trivial());
        for (r, c, v) in [
            (1, 1, 0.3),
            (1, 8, 0.3),
            (8, 8, 0.3),
            (2, 7, 0.2),
            (7, 7, 0.2),
        ] {
            assert!((rho.entry(r, c) - C64::new(v, 0.0)).norm() < 1e-15);
        }
        let nonzero = rho.matrix().iter().filter(|z| z.norm() > 0.0).count();
        assert_eq!(nonzero, 8);
        let eig = rho.eigh();
        assert!((eig.values[0] - 0.6).abs() < 1e-12 && (eig.values[1] - 0.4).abs() < 1e-12);
    }

    #[test]
    fn construct_refusals() {
        let q = st("2^4");
        let err = construct(&q, tuples(&q, &[&[1, 16], &[2, 15]]), vec![0.5, 0.5], None);
        assert!(matches!(err, Err(Error::Incompatible { mode: 4, .. })));
        let ok = tuples(&q, &[&[1, 16], &[4, 13]]);
        assert!(construct(&q, ok.clone(), vec![0.5, 0.4], None).is_err());
        assert!(construct(&q, ok.clone(), vec![1.0], None).is_err());
        assert!(construct(&q, ok.clone(), vec![1.2, -0.2], None).is_err());
        let wrong_lu = LocalUnitarySet::identity(&st("2x2"));
        assert!(construct(&q, ok, vec![0.5, 0.5], Some(wrong_lu)).is_err());

        let (single, rho) = construct(&q, tuples(&q, &[&[1, 16]]), vec![1.0], None).unwrap();
        assert!(single.is_trivial());
        assert!((rho.purity() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dressed_state_keeps_spectrum() {
        let q = st("2^4");
        let lu = LocalUnitarySet::haar(&q, 9);
        let (_, rho) = construct(
            &q,
            tuples(&q, &[&[1, 16], &[4, 13]]),
            vec![0.7, 0.3],
            Some(lu),
        )
        .unwrap();
        rho.validate().unwrap();
        let eig = rho.eigh();
        assert!((eig.values[0] - 0.7).abs() < 1e-10 && (eig.values[1] - 0.3).abs() < 1e-10);
    }

    #[test]
    fn example_set_reports() {
        let r = validate_example_set(
            &st("3x3x3"),
            &[vec![1, 14, 27], vec![6, 16, 20], vec![8, 12, 22]],
        );
        assert!(r.passed());
        let r = validate_example_set(&st("2x2x9"), &[vec![1, 11, 21, 36], vec![4, 14, 24, 34]]);
        assert!(r.passed());
        let r = validate_example_set(&st("2^4"), &[vec![1, 16], vec![2, 15]]);
        assert!(r.all_me && !r.set_compatible && !r.pairwise_compatible);
        let r = validate_example_set(&st("2^4"), &[vec![1, 99]]);
        assert!(!r.all_me && r.tuples[0].error.is_some());
    }

    #[test]
    fn report_json_fields() {
        let json = serde_json::to_value(rank("2x4")).unwrap();
        assert_eq!(json["R_MME"], 2);
        assert_eq!(json["L_used"], 2);
        assert_eq!(json["r_tilde"], 2);
        assert_eq!(json["witness"], serde_json::json!([[1, 6], [3, 8]]));
        assert_eq!(json["status"], "bound_attained");
        assert_eq!(
            serde_json::to_value(rank("2^5")).unwrap()["status"],
            "proven"
        );
    }

    #[test]
    fn graph_free_first_fit_matches_graph() {
        for text in ["2x6", "2^5", "3x3x3", "2x2x3x3"] {
            let s = st(text);
            let set = lstar(&s).unwrap();
            let ts = enumerate_with(&s, &set, set.min_value()).unwrap().tuples;
            let masks = projection_masks(&s, &ts);
            let g = CompatGraph::new(&masks);
            let lex: Vec<usize> = (0..g.len()).collect();
            assert_eq!(lex_first_fit(&masks), g.first_fit(&lex), "{text}");
        }
    }

    #[test]
    fn large_bipartite_needs_no_graph() {
        // 55440 tuples, over the graph limit, but first-fit reaches the bound
        let r = rank("5x11");
        assert_eq!(r.tuple_count, 55_440);
        assert_eq!((r.r_mme, r.status), (2, SearchStatus::BoundAttained));
    }
}
