//! Invariants checked over randomly drawn algebras, elements and measures.

use std::sync::{Arc, OnceLock};

use proptest::prelude::*;

use effana::algebra::laws;
use effana::constructions::{atomic_basis, example_4_6, powerset_algebra, scale_algebra};
use effana::measure::{atomic_bound_check, random_integer_measure, random_measure};
use effana::rdp::{check_rdp, rdp_decompose};
use effana::symbolic::{
    self, disjoint, member, mu_ex23, sym_oplus, truncated_bound_table, SymbolicElement,
};
use effana::variation::{
    check_variation_theorems, variation_bruteforce, CheckStatus, VariationTable,
};
use effana::{EffectAlgebra, ElementId, Measure, Mode};

const TOL: f64 = 1e-9;

fn algebras() -> &'static [Arc<EffectAlgebra>] {
    static ALGEBRAS: OnceLock<Vec<Arc<EffectAlgebra>>> = OnceLock::new();
    ALGEBRAS.get_or_init(|| {
        let mut out = vec![Arc::new(example_4_6())];
        out.extend((1..=4).map(|n| Arc::new(powerset_algebra(n).unwrap())));
        out.extend((1..=8).map(|k| Arc::new(scale_algebra(k).unwrap())));
        out.push(symbolic::restriction(2).unwrap().algebra().clone());
        out
    })
}

fn measure(l: &Arc<EffectAlgebra>, dim: usize, seed: u64, integral: bool) -> Measure {
    if integral {
        random_integer_measure(l, dim, seed).unwrap()
    } else {
        random_measure(l, dim, seed).unwrap()
    }
}

/// An algebra together with a measure on it.
fn algebra_and_measure() -> impl Strategy<Value = (Arc<EffectAlgebra>, Measure)> {
    (0..algebras().len(), 1usize..=3, any::<u64>(), any::<bool>()).prop_map(|(i, dim, seed, integral)| {
        let l = algebras()[i].clone();
        let mu = measure(&l, dim, seed, integral);
        (l, mu)
    })
}

fn element(l: &EffectAlgebra, raw: usize) -> ElementId {
    ElementId(raw % l.size())
}

fn symbolic_element(max_index: u32) -> impl Strategy<Value = SymbolicElement> {
    prop_oneof![
        Just(SymbolicElement::Empty),
        Just(SymbolicElement::Full),
        (1..=max_index).prop_map(SymbolicElement::B),
        (1..=max_index).prop_map(SymbolicElement::BComp),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn dp_matches_bruteforce((l, mu) in algebra_and_measure(), raw in any::<usize>()) {
        let e = element(&l, raw);
        for mode in [Mode::Multiset, Mode::Set] {
            let table = VariationTable::new(&mu, mode);
            let brute = variation_bruteforce(&mu, e, mode).unwrap();
            prop_assert!((table.at(e) - brute).abs() <= TOL * (1.0 + brute), "{mode} at {}", l.name(e));
        }
    }

    #[test]
    fn modes_agree((_l, mu) in algebra_and_measure()) {
        let multi = VariationTable::new(&mu, Mode::Multiset);
        let set = VariationTable::new(&mu, Mode::Set);
        for (a, b) in multi.values.iter().zip(&set.values) {
            prop_assert!((a - b).abs() <= TOL * (1.0 + a));
        }
    }

    #[test]
    fn witnesses_sum_to_their_element((l, mu) in algebra_and_measure(), raw in any::<usize>()) {
        let e = element(&l, raw);
        for mode in [Mode::Multiset, Mode::Set] {
            let r = VariationTable::new(&mu, mode).result(e);
            prop_assert_eq!(l.orthosum(&r.witness.parts), Some(e));
            prop_assert!(r.witness.parts.iter().all(|&p| p != l.zero()));
            if mode == Mode::Set {
                let mut parts = r.witness.parts.clone();
                parts.dedup();
                prop_assert_eq!(parts.len(), r.witness.parts.len());
            }
        }
    }

    #[test]
    fn variation_is_monotone_superadditive_and_dominates_norm((l, mu) in algebra_and_measure()) {
        let v = VariationTable::new(&mu, Mode::Multiset);
        prop_assert_eq!(v.at(l.zero()), 0.0);
        for a in l.elements() {
            prop_assert!(mu.norm_at(a) <= v.at(a) + TOL);
            for b in l.elements() {
                if l.leq(a, b) {
                    prop_assert!(v.at(a) <= v.at(b) + TOL);
                }
                if let Some(s) = l.oplus(a, b) {
                    prop_assert!(v.at(a) + v.at(b) <= v.at(s) + TOL);
                }
            }
        }
    }

    #[test]
    fn theorem_checks_pass((_l, mu) in algebra_and_measure()) {
        for mode in [Mode::Multiset, Mode::Set] {
            let report = check_variation_theorems(&mu, mode);
            for c in &report.checks {
                prop_assert!(c.status != CheckStatus::Failed, "{} failed", c.id);
            }
        }
    }

    #[test]
    fn orthosum_is_permutation_invariant(i in 0..algebras().len(), raws in prop::collection::vec(any::<usize>(), 1..5), shift in any::<usize>()) {
        let l = &algebras()[i];
        let parts: Vec<ElementId> = raws.iter().map(|&r| element(l, r)).collect();
        let mut rotated = parts.clone();
        rotated.rotate_left(shift % parts.len());
        let mut reversed = parts.clone();
        reversed.reverse();
        let s = l.orthosum(&parts);
        prop_assert_eq!(s, l.orthosum(&rotated));
        prop_assert_eq!(s, l.orthosum(&reversed));
    }

    #[test]
    fn difference_inverts_sum(i in 0..algebras().len(), ra in any::<usize>(), rc in any::<usize>()) {
        let l = &algebras()[i];
        let (a, c) = (element(l, ra), element(l, rc));
        let d = l.ominus(a, c);
        prop_assert_eq!(d.is_some(), l.leq(c, a));
        if let Some(d) = d {
            prop_assert_eq!(l.oplus(d, c), Some(a));
        }
    }

    #[test]
    fn order_is_bounded_partial_order(i in 0..algebras().len(), ra in any::<usize>(), rb in any::<usize>(), rc in any::<usize>()) {
        let l = &algebras()[i];
        let (a, b, c) = (element(l, ra), element(l, rb), element(l, rc));
        prop_assert!(l.leq(a, a));
        prop_assert!(l.leq(l.zero(), a) && l.leq(a, l.unit()));
        if l.leq(a, b) && l.leq(b, a) {
            prop_assert_eq!(a, b);
        }
        if l.leq(a, b) && l.leq(b, c) {
            prop_assert!(l.leq(a, c));
        }
        prop_assert_eq!(l.oplus(a, l.orthosupplement(a)), Some(l.unit()));
    }

    #[test]
    fn measures_are_finitely_additive((l, mu) in algebra_and_measure(), raws in prop::collection::vec(any::<usize>(), 1..6)) {
        let parts: Vec<ElementId> = raws.iter().map(|&r| element(&l, r)).collect();
        if let Some(s) = l.orthosum(&parts) {
            let mut total = vec![0.0; mu.dim()];
            for &p in &parts {
                for (t, x) in total.iter_mut().zip(mu.value(p).coords()) {
                    *t += x;
                }
            }
            for (t, x) in total.iter().zip(mu.value(s).coords()) {
                prop_assert!((t - x).abs() <= TOL * (1.0 + x.abs()) * parts.len() as f64);
            }
        }
    }

    #[test]
    fn rdp_decompositions_refine(i in 0..algebras().len(), rc in any::<usize>(), raws in prop::collection::vec(any::<usize>(), 1..4)) {
        let l = &algebras()[i];
        if !check_rdp(l).holds {
            return Ok(());
        }
        let parts: Vec<ElementId> = raws.iter().map(|&r| element(l, r)).collect();
        let Some(s) = l.orthosum(&parts) else { return Ok(()) };
        let c = element(l, rc);
        if !l.leq(c, s) {
            return Ok(());
        }
        let pieces = rdp_decompose(l, c, &parts).unwrap().expect("RDP algebras split every c ≤ Σ parts");
        prop_assert_eq!(pieces.len(), parts.len());
        prop_assert_eq!(l.orthosum(&pieces), Some(c));
        for (&piece, &part) in pieces.iter().zip(&parts) {
            prop_assert!(l.leq(piece, part));
        }
    }

    #[test]
    fn atomic_bound_holds_on_rdp_algebras((l, mu) in algebra_and_measure()) {
        if !check_rdp(&l).holds {
            return Ok(());
        }
        if let Some(basis) = atomic_basis(&l) {
            let report = atomic_bound_check(&mu, &basis).unwrap();
            prop_assert!(report.violations.is_empty());
        }
    }

    #[test]
    fn scale_measures_are_linear(k in 1usize..=8, seed in any::<u64>()) {
        let l = Arc::new(scale_algebra(k).unwrap());
        let mu = random_measure(&l, 1, seed).unwrap();
        let atom = l.atoms()[0];
        let step = mu.value(atom).coords()[0];
        let mut x = l.zero();
        for j in 0..=k {
            let expected = step * j as f64;
            prop_assert!((mu.value(x).coords()[0] - expected).abs() <= TOL * (1.0 + expected.abs()) * k as f64);
            if j < k {
                x = l.oplus(x, atom).unwrap();
            }
        }
    }

    #[test]
    fn symbolic_witnesses_verify(s in symbolic_element(20), t in symbolic_element(20)) {
        let answer = disjoint(s, t).unwrap();
        prop_assert!(answer.verify(s, t).unwrap());
        if let Some(w) = answer.witness {
            prop_assert!(member(s, w).unwrap() && member(t, w).unwrap());
        }
    }

    #[test]
    fn symbolic_sums_are_disjoint_unions(s in symbolic_element(6), t in symbolic_element(6), x in 1u64..2000) {
        if let Some(u) = sym_oplus(s, t) {
            let (in_s, in_t) = (member(s, x).unwrap(), member(t, x).unwrap());
            prop_assert!(!(in_s && in_t));
            prop_assert_eq!(member(u, x).unwrap(), in_s || in_t);
            prop_assert_eq!(mu_ex23(s) + mu_ex23(t), mu_ex23(u));
        }
    }

    #[test]
    fn orthosupplement_is_complement(s in symbolic_element(6), x in 1u64..2000) {
        prop_assert_ne!(member(s, x).unwrap(), member(s.orthosupplement(), x).unwrap());
    }

    #[test]
    fn uniform_bound_is_max_sup_norm(n in 1u32..60) {
        let table = truncated_bound_table(n).unwrap();
        let max = table.rows.iter().map(|r| r.sup_norm).fold(0.0, f64::max);
        prop_assert_eq!(table.uniform_bound, max);
        for r in &table.rows {
            prop_assert!(r.pointwise_bound <= table.uniform_bound);
        }
    }
}

#[test]
fn derived_laws_hold_on_every_sample_algebra() {
    for l in algebras() {
        assert_eq!(laws::cancellation_failure(l), None);
        assert_eq!(laws::positivity_failure(l), None);
        assert_eq!(laws::order_failure(l), None);
        assert_eq!(laws::difference_failure(l), None);
    }
}
