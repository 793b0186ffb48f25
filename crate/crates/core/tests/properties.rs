//! Property tests for the structural invariants.

use proptest::prelude::*;

use psic_core::certify::{mixed_witness_states, psic_witness_states, vpsic_witness_states};
use psic_core::harness::check_interlacing;
use psic_core::json::{self, PovmDocument};
use psic_core::operator::random_isometry;
use psic_core::povm::{born_probabilities, gen_random, gen_with_complement, tensor_povm, validate, POVM_TOL};
use psic_core::span::{bipartite_complement, SPAN_TOL};
use psic_core::states::{random_density, rng};
use psic_core::tomography::{linear_inversion, statistics_distance};
use psic_core::{hs_inner, inertia, operator_span, rank_pm, HermitianMatrix};

fn traceless(d: usize, seed: u64) -> HermitianMatrix {
    let h = HermitianMatrix::random(d, &mut rng(seed));
    &h - &HermitianMatrix::identity(d).scale(h.trace() / d as f64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn real_coordinates_are_an_isometry(d in 1usize..6, s in any::<u64>(), t in any::<u64>()) {
        let a = HermitianMatrix::random(d, &mut rng(s));
        let b = HermitianMatrix::random(d, &mut rng(t));
        let inner = hs_inner(&a, &b).unwrap();
        let coords = a.to_real_coords().dot(&b.to_real_coords());
        prop_assert!((inner - coords).abs() <= 1e-10 * (1.0 + a.norm() * b.norm()));
        let back = HermitianMatrix::from_real_coords(d, a.to_real_coords().as_slice()).unwrap();
        prop_assert!(back.max_abs_diff(&a) <= 1e-14);
    }

    #[test]
    fn inertia_counts_add_up(d in 1usize..7, s in any::<u64>()) {
        let t = HermitianMatrix::random(d, &mut rng(s));
        let i = inertia(&t, 1e-8).unwrap();
        prop_assert_eq!(i.positive + i.negative + i.zero, d);
        prop_assert_eq!(rank_pm(&t, 1e-8).unwrap(), i.positive.min(i.negative));
    }

    #[test]
    fn random_povms_are_valid(d in 1usize..5, n in 1usize..12, s in any::<u64>()) {
        let p = gen_random(d, n, s).unwrap();
        prop_assert!(validate(&p, POVM_TOL).is_empty());
        prop_assert!(operator_span(&p, SPAN_TOL).dim() <= n.min(d * d));
    }

    #[test]
    fn tensor_spans_multiply(da in 2usize..4, db in 2usize..4, na in 1usize..10, nb in 1usize..10, s in any::<u64>()) {
        let a = gen_random(da, na, s).unwrap();
        let b = gen_random(db, nb, s.wrapping_add(1)).unwrap();
        let ra = operator_span(&a, SPAN_TOL).dim();
        let rb = operator_span(&b, SPAN_TOL).dim();
        prop_assert_eq!(operator_span(&tensor_povm(&a, &b), SPAN_TOL).dim(), ra * rb);
        prop_assert!(bipartite_complement(&a, &b, SPAN_TOL).report.holds(1e-9));
    }

    #[test]
    fn complement_generator_is_recovered(d in 2usize..5, s in any::<u64>()) {
        let g = traceless(d, s);
        let p = gen_with_complement(d, std::slice::from_ref(&g)).unwrap();
        let comp = psic_core::complement(&operator_span(&p, SPAN_TOL));
        prop_assert_eq!(comp.dim(), 1);
        prop_assert!(comp.residual(&g.normalized().unwrap()) <= 1e-8);
    }

    #[test]
    fn witnesses_have_equal_statistics(d in 2usize..5, s in any::<u64>()) {
        let g = traceless(d, s);
        let p = gen_with_complement(d, std::slice::from_ref(&g)).unwrap();
        let w = mixed_witness_states(&g, 1e-8).unwrap();
        prop_assert!(statistics_distance(&p, &w.first, &w.second).unwrap() <= 1e-9);
        prop_assert!(w.separation() > 1e-6);
        if rank_pm(&g, 1e-8).unwrap() == 1 {
            let v = vpsic_witness_states(&g, 1e-8).unwrap();
            prop_assert!(statistics_distance(&p, &v.first, &v.second).unwrap() <= 1e-9);
        }
    }

    #[test]
    fn rank_two_complement_gives_pure_witness(d in 2usize..5, s in any::<u64>()) {
        let mut diag = vec![0.0; d];
        diag[0] = 1.0;
        diag[1] = -1.0;
        let u = random_isometry(d, d, &mut rng(s));
        let g = HermitianMatrix::from_real_diagonal(&diag).conjugate_by(&u);
        let p = gen_with_complement(d, std::slice::from_ref(&g)).unwrap();
        let w = psic_witness_states(&g, 1e-8).unwrap();
        prop_assert!(w.first_vector.is_some() && w.second_vector.is_some());
        prop_assert!(statistics_distance(&p, &w.first, &w.second).unwrap() <= 1e-9);
    }

    #[test]
    fn compressions_interlace(n in 2usize..7, k in 1usize..6, s in any::<u64>()) {
        let k = k.min(n);
        let t = HermitianMatrix::random(n, &mut rng(s));
        let cols: Vec<usize> = (0..k).collect();
        let u = random_isometry(n, n, &mut rng(s ^ 0x5eed));
        let rep = check_interlacing(&t.conjugate_by(&u), &cols, 1e-9).unwrap();
        prop_assert!(rep.pass && rep.rank_pm_monotone);
    }

    #[test]
    fn linear_inversion_recovers_the_span_component(d in 2usize..4, n in 1usize..12, s in any::<u64>()) {
        let p = gen_random(d, n, s).unwrap();
        let rho = random_density(d, &mut rng(s ^ 1));
        let est = linear_inversion(&p, &born_probabilities(&p, &rho).unwrap()).unwrap();
        let span = operator_span(&p, SPAN_TOL);
        prop_assert!(span.project(&(&est.estimate - &rho)).norm() <= 1e-8);
        prop_assert!((est.estimate.trace() - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn povm_json_round_trips(d in 1usize..4, n in 1usize..8, s in any::<u64>()) {
        let p = gen_random(d, n, s).unwrap();
        let text = json::to_string(&PovmDocument::from_povm(&p, None)).unwrap();
        let doc: PovmDocument = serde_json::from_str(&text).unwrap();
        let q = doc.to_povm().unwrap();
        for (a, b) in p.effects().iter().zip(q.effects()) {
            prop_assert_eq!(a.as_matrix(), b.as_matrix());
        }
        prop_assert_eq!(json::to_string(&doc).unwrap(), text);
    }
}
