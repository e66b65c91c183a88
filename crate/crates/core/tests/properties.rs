use mme::entcore::{ent_pure, hyperspherical, lstar, EntMeasure};
use mme::mme::{compatible, max_mme_rank, SearchOptions};
use mme::modes::ModeStructure;
use mme::tgx::{apply_lu, enumerate_me_tuples, LocalUnitarySet, MeTgxTuple};
use mme::verify::{haar_unitary, reduction_purity_report, SpectralData};
use proptest::prelude::*;

fn structure() -> impl Strategy<Value = ModeStructure> {
    prop::collection::vec(2usize..=4, 2..=4)
        .prop_filter("n <= 36", |d| d.iter().product::<usize>() <= 36)
        .prop_map(|d| ModeStructure::new(d).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hyperspherical_is_normalized(angles in prop::collection::vec(0.0..=std::f64::consts::FRAC_PI_2, 1..=8)) {
        let x = hyperspherical(&angles).unwrap();
        prop_assert_eq!(x.len(), angles.len() + 1);
        prop_assert!((x.iter().map(|v| v * v).sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(x.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn scalar_vector_roundtrip(s in structure(), seed in any::<u64>()) {
        let level = 1 + (seed as usize) % s.dim();
        let v = s.scalar_to_vector(level).unwrap();
        prop_assert_eq!(s.vector_to_scalar(&v).unwrap(), level);
        for (label, &n) in v.labels().iter().zip(s.dims()) {
            prop_assert!((1..=n).contains(label));
        }
    }

    #[test]
    fn two_qubit_anchor(theta in 0.0..std::f64::consts::FRAC_PI_2) {
        let s = ModeStructure::qubits(2).unwrap();
        let psi = mme::tgx::build_tgx_state(
            &MeTgxTuple::certify(&s, &[1, 4]).unwrap(),
            Some(&[theta.cos(), theta.sin()]),
            None,
        ).unwrap();
        let want = (2.0 * theta).sin().powi(2);
        prop_assert!((ent_pure(&psi).unwrap().value() - want).abs() < 1e-10);
    }

    #[test]
    fn bipartite_lstar_is_small_dim(ns in 2usize..=6, extra in 0usize..=6) {
        let nb = (ns + extra).min(12);
        let s = ModeStructure::new(vec![ns, nb]).unwrap();
        prop_assert_eq!(lstar(&s).unwrap().values, vec![ns]);
    }

    #[test]
    fn listed_tuples_have_unit_ent(s in structure(), pick in any::<usize>()) {
        let set = lstar(&s).unwrap();
        for &l in &set.values {
            let ts = enumerate_me_tuples(&s, l).unwrap().tuples;
            prop_assert!(!ts.is_empty());
            let t = &ts[pick % ts.len()];
            prop_assert!((ent_pure(&t.state()).unwrap().value() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn lu_preserves_ent(s in structure(), seed in any::<u64>(), pick in any::<usize>()) {
        let set = lstar(&s).unwrap();
        let ts = enumerate_me_tuples(&s, set.min_value()).unwrap().tuples;
        let t = &ts[pick % ts.len()];
        let m = EntMeasure::new(&s).unwrap();
        let dressed = apply_lu(&t.state(), &LocalUnitarySet::haar(&s, seed)).unwrap();
        prop_assert!((m.of(&dressed).unwrap().value() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn witness_subsets_stay_compatible(s in structure(), mask in any::<u32>()) {
        let r = max_mme_rank(&s, &SearchOptions::default()).unwrap();
        prop_assert!(r.r_mme <= r.r_tilde.max(1));
        prop_assert!(compatible(&r.witness).unwrap());
        let subset: Vec<MeTgxTuple> = r.witness.iter().enumerate()
            .filter(|(i, _)| mask >> (i % 32) & 1 == 1)
            .map(|(_, t)| t.clone())
            .collect();
        if !subset.is_empty() {
            prop_assert!(compatible(&subset).unwrap());
        }
    }

    #[test]
    fn decompositions_reconstruct_and_keep_purities(seed in any::<u64>(), d in 3usize..=9) {
        let s = ModeStructure::qubits(4).unwrap();
        let tuples = [[1, 16], [4, 13], [6, 11]]
            .iter()
            .map(|l| MeTgxTuple::certify(&s, l).unwrap())
            .collect();
        let (state, rho) = mme::mme::construct(&s, tuples, vec![0.5, 0.3, 0.2], None).unwrap();
        let data = SpectralData::from_mme(&state);
        let sample = data.decompose(&haar_unitary(d, seed)).unwrap();
        prop_assert!((sample.probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(sample.reconstruct().unwrap().max_abs_diff(&rho) < 1e-10);
        prop_assert!(reduction_purity_report(&sample, 2).unwrap().clean);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn bipartite_rank_is_floor_ratio(ns in 2usize..=6, nb in 2usize..=12) {
        prop_assume!(nb >= ns);
        let s = ModeStructure::new(vec![ns, nb]).unwrap();
        let r = max_mme_rank(&s, &SearchOptions::default()).unwrap();
        prop_assert_eq!(r.r_mme, nb / ns);
        prop_assert!(r.status.is_exact());
    }
}
