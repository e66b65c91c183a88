//! Independent oracles: brute force written without the library's search or
//! partial-trace code, compared against the library.

use itertools::Itertools;
use mme::entcore::lstar;
use mme::mme::{compatible, max_mme_rank, SearchOptions};
use mme::modes::ModeStructure;
use mme::tables::factorizations;
use mme::tgx::{enumerate_me_tuples, MeTgxTuple};
use mme::verify::{comparison_spectral, min_avg_ent, Family, SpectralData, Strategy};
use num_complex::Complex64;

/// 0-based mixed-radix digits, mode 1 most significant.
fn digits(dims: &[usize], mut index: usize) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for (slot, &d) in out.iter_mut().zip(dims).rev() {
        *slot = index % d;
        index /= d;
    }
    out
}

/// Reduction of mode `m` (0-based) of a state given as (level, amplitude) pairs.
fn reduced(dims: &[usize], amps: &[(usize, Complex64)], m: usize) -> Vec<Vec<Complex64>> {
    let d = dims[m];
    let mut rho = vec![vec![Complex64::new(0.0, 0.0); d]; d];
    for &(i, a) in amps {
        for &(j, b) in amps {
            let (di, dj) = (digits(dims, i), digits(dims, j));
            let rest_equal = (0..dims.len()).all(|k| k == m || di[k] == dj[k]);
            if rest_equal {
                rho[di[m]][dj[m]] += a * b.conj();
            }
        }
    }
    rho
}

fn purity(rho: &[Vec<Complex64>]) -> f64 {
    rho.iter().flatten().map(|z| z.norm_sqr()).sum()
}

/// Mean rescaled reduction purity of the equal superposition over 0-based `levels`.
fn mean_rescaled_purity(dims: &[usize], levels: &[usize]) -> f64 {
    let amp = Complex64::new(1.0 / (levels.len() as f64).sqrt(), 0.0);
    let amps: Vec<(usize, Complex64)> = levels.iter().map(|&l| (l, amp)).collect();
    let total: f64 = (0..dims.len())
        .map(|m| {
            let n = dims[m] as f64;
            (n * purity(&reduced(dims, &amps, m)) - 1.0) / (n - 1.0)
        })
        .sum();
    total / dims.len() as f64
}

fn structures_up_to(n_max: usize) -> Vec<ModeStructure> {
    (4..=n_max)
        .flat_map(factorizations)
        .filter(|f| f.len() >= 2)
        .map(|f| ModeStructure::new(f).unwrap())
        .collect()
}

#[test]
fn enumeration_matches_brute_force_up_to_16() {
    for s in structures_up_to(16) {
        let set = lstar(&s).unwrap();
        for l in 2..=s.dim_over_max() {
            let brute: Vec<Vec<usize>> = (0..s.dim())
                .combinations(l)
                .filter(|c| (mean_rescaled_purity(s.dims(), c) - set.min_mean).abs() < 1e-10)
                .map(|c| c.iter().map(|x| x + 1).collect())
                .collect();
            let listed: Vec<Vec<usize>> = enumerate_me_tuples(&s, l)
                .unwrap()
                .tuples
                .iter()
                .map(|t| t.levels().to_vec())
                .collect();
            assert_eq!(listed, brute, "{s} L={l}");
            if !set.contains(l) {
                assert!(brute.is_empty(), "{s} L={l}");
            }
        }
    }
}

/// Operator `|a><b|` traced over the larger side of the `m|rest` split.
fn cross_term_on_small_side(s: &ModeStructure, a: &[usize], b: &[usize], m: usize) -> f64 {
    let dims = s.dims();
    let rest_dim = s.dim() / dims[m];
    let big_is_mode = dims[m] > rest_dim;
    let key = |l: usize| {
        let d = digits(dims, l - 1);
        let rest: Vec<usize> = (0..dims.len()).filter(|&k| k != m).map(|k| d[k]).collect();
        if big_is_mode {
            (vec![d[m]], rest)
        } else {
            (rest, vec![d[m]])
        }
    };
    // entries keyed by (small-side label of a, small-side label of b)
    let mut acc = std::collections::HashMap::new();
    for &i in a {
        for &j in b {
            let ((big_i, small_i), (big_j, small_j)) = (key(i), key(j));
            if big_i == big_j {
                *acc.entry((small_i, small_j)).or_insert(0.0) += 1.0;
            }
        }
    }
    acc.values().map(|v: &f64| v * v).sum::<f64>().sqrt()
}

#[test]
fn compatibility_is_vanishing_cross_terms() {
    for dims in ["2x4", "2x6", "2x2x2x2", "3x6", "3x3x3", "2^5"] {
        let s: ModeStructure = dims.parse().unwrap();
        let ts = enumerate_me_tuples(&s, lstar(&s).unwrap().min_value())
            .unwrap()
            .tuples;
        for pair in ts.iter().combinations(2).take(400) {
            let vanish = (0..s.mode_count()).all(|m| {
                cross_term_on_small_side(&s, pair[0].levels(), pair[1].levels(), m) == 0.0
            });
            let lib = compatible(&[pair[0].clone(), pair[1].clone()]).unwrap();
            assert_eq!(lib, vanish, "{dims} {} {}", pair[0], pair[1]);
        }
    }
}

#[test]
fn compatible_pairs_are_exactly_those_with_unit_grid_minimum() {
    for dims in ["2x2x2x2", "2x5", "3x3x3"] {
        let s: ModeStructure = dims.parse().unwrap();
        let ts = enumerate_me_tuples(&s, lstar(&s).unwrap().min_value())
            .unwrap()
            .tuples;
        let disjoint = ts
            .iter()
            .combinations(2)
            .filter(|p| p[0].levels().iter().all(|l| !p[1].levels().contains(l)));
        for pair in disjoint.take(60) {
            let data =
                SpectralData::new(vec![0.5, 0.5], vec![pair[0].state(), pair[1].state()]).unwrap();
            let est = min_avg_ent(
                &data,
                Strategy::Grid {
                    theta_points: 8,
                    chi_points: 8,
                },
            )
            .unwrap();
            let lib = compatible(&[pair[0].clone(), pair[1].clone()]).unwrap();
            assert_eq!(
                lib,
                (est.min_avg - 1.0).abs() < 1e-9,
                "{dims} {} {}",
                pair[0],
                pair[1]
            );
        }
    }
}

#[test]
fn bipartite_rank_closed_form() {
    for (ns, nb) in (2..=5).flat_map(|a| (a..=12).map(move |b| (a, b))) {
        let s = ModeStructure::new(vec![ns, nb]).unwrap();
        let r = max_mme_rank(&s, &SearchOptions::default()).unwrap();
        assert_eq!(r.r_mme, nb / ns, "{s}");
        assert!(r.status.is_exact(), "{s}");
    }
}

/// Dense `(theta, chi)` scan of the spacewise family at `lambda = (1/2, 1/2)`,
/// with reductions computed by hand. Regenerates `SPACEWISE_ORACLE` in the
/// acceptance suite.
#[test]
fn spacewise_oracle_at_half() {
    let dims = [2, 2, 2, 2];
    let r = 0.5f64.sqrt();
    // |e1> on {1,16}, |e2> on {2,15}, 0-based levels
    let e = [[(0usize, r), (15, r)], [(1, r), (14, r)]];
    let mut best = f64::INFINITY;
    let steps = 200;
    for ti in 0..=steps {
        let theta = std::f64::consts::FRAC_PI_2 * ti as f64 / steps as f64;
        for ci in 0..steps {
            let chi = std::f64::consts::TAU * ci as f64 / steps as f64;
            let a = Complex64::new(theta.cos(), 0.0);
            let b = Complex64::from_polar(theta.sin(), chi);
            let rows = [[a, b], [-b.conj(), a.conj()]];
            let mut avg = 0.0;
            for u in rows {
                let mut amps = Vec::new();
                for (k, ek) in e.iter().enumerate() {
                    for &(l, x) in ek {
                        amps.push((l, u[k] * 0.5f64.sqrt() * x));
                    }
                }
                let p: f64 = amps.iter().map(|(_, z)| z.norm_sqr()).sum();
                if p < 1e-14 {
                    continue;
                }
                let norm = p.sqrt();
                let w: Vec<(usize, Complex64)> = amps.iter().map(|&(l, z)| (l, z / norm)).collect();
                let mean: f64 = (0..4)
                    .map(|m| 2.0 * purity(&reduced(&dims, &w, m)) - 1.0)
                    .sum::<f64>()
                    / 4.0;
                avg += p * (1.0 - mean);
            }
            best = best.min(avg);
        }
    }
    assert!((best - 0.75).abs() < 1e-9, "oracle {best}");
    let lib = min_avg_ent(
        &comparison_spectral(Family::ESpacewise, [0.5, 0.5]).unwrap(),
        Strategy::default_grid(),
    )
    .unwrap();
    assert!((lib.min_avg - best).abs() < 1e-9);
}

#[test]
fn example_tuple_certification_agrees_with_brute_purity() {
    let s: ModeStructure = "2x2x3x3".parse().unwrap();
    let set = lstar(&s).unwrap();
    for levels in [[1, 5, 9, 28, 32, 36], [11, 15, 16, 20, 24, 25]] {
        let zero: Vec<usize> = levels.iter().map(|l| l - 1).collect();
        assert!((mean_rescaled_purity(s.dims(), &zero) - set.min_mean).abs() < 1e-12);
        assert!(MeTgxTuple::certify(&s, &levels).is_ok());
    }
}
