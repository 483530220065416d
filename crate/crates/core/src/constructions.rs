//! Standard effect algebras and atomic bases.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::algebra::{EffectAlgebra, EffectAlgebraTable, ElementId};
use crate::error::{Error, Result};
use crate::DEFAULT_MAX_SIZE;

/// Largest `n` accepted by [`powerset_algebra`]. The dense sum table still
/// has to fit the carrier size limit.
pub const MAX_POWERSET_POINTS: usize = 16;

fn subset_label(mask: u128, points: &[String]) -> String {
    if mask == 0 {
        return "∅".to_owned();
    }
    let inner: Vec<&str> = points
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, p)| p.as_str())
        .collect();
    format!("{{{}}}", inner.join(","))
}

/// All subsets of `{1..n}` under disjoint union. Element `i` is the subset
/// whose bitmask is `i`.
pub fn powerset_algebra(n: usize) -> Result<EffectAlgebra> {
    powerset_algebra_with_limit(n, DEFAULT_MAX_SIZE)
}

pub fn powerset_algebra_with_limit(n: usize, limit: usize) -> Result<EffectAlgebra> {
    if !(1..=MAX_POWERSET_POINTS).contains(&n) {
        return Err(Error::Precondition(format!(
            "powerset algebras need 1 ≤ n ≤ {MAX_POWERSET_POINTS}, got {n}"
        )));
    }
    let size = 1usize << n;
    if size > limit {
        return Err(Error::TooLarge { size, limit });
    }
    let points: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let names = (0..size).map(|m| subset_label(m as u128, &points)).collect();
    let mut table = EffectAlgebraTable::with_limit(names, ElementId(0), ElementId(size - 1), limit)?;
    for a in 0..size {
        for b in a..size {
            if a & b == 0 {
                table.define(ElementId(a), ElementId(b), ElementId(a | b))?;
            }
        }
    }
    EffectAlgebra::with_limit(table, limit)
}

/// `{0, 1/k, …, 1}` with `i/k ⊕ j/k = (i+j)/k` whenever `i + j ≤ k`.
pub fn scale_algebra(k: usize) -> Result<EffectAlgebra> {
    scale_algebra_with_limit(k, DEFAULT_MAX_SIZE)
}

pub fn scale_algebra_with_limit(k: usize, limit: usize) -> Result<EffectAlgebra> {
    if k == 0 {
        return Err(Error::Precondition("scale algebras need k ≥ 1".into()));
    }
    let names = (0..=k)
        .map(|i| match i {
            0 => "0".to_owned(),
            i if i == k => "1".to_owned(),
            i => format!("{i}/{k}"),
        })
        .collect();
    let mut table = EffectAlgebraTable::with_limit(names, ElementId(0), ElementId(k), limit)?;
    for i in 0..=k {
        for j in i..=k - i {
            table.define(ElementId(i), ElementId(j), ElementId(i + j))?;
        }
    }
    EffectAlgebra::with_limit(table, limit)
}

/// A family of subsets of a finite universe, to be read as an effect algebra
/// of sets under disjoint union.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SetFamilySpec {
    pub universe: Vec<String>,
    pub members: Vec<Vec<String>>,
    /// Element labels, one per member. Defaults to set notation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

/// Builds the effect algebra of sets given by `spec`.
///
/// `A ⊕ B` is defined iff `A ∩ B = ∅` and `A ∪ B` is in the family. The
/// family must contain `∅` and the universe and be closed under complement;
/// beyond that not every family yields an effect algebra, and axiom failures
/// come back as [`Error::Axioms`].
pub fn set_family_algebra(spec: &SetFamilySpec) -> Result<EffectAlgebra> {
    let points = &spec.universe;
    if points.len() > 128 {
        return Err(Error::InvalidFamily("universes are limited to 128 points".into()));
    }
    let mut point_index = HashMap::new();
    for (i, p) in points.iter().enumerate() {
        if point_index.insert(p.as_str(), i).is_some() {
            return Err(Error::InvalidFamily(format!("point `{p}` listed twice")));
        }
    }
    let full: u128 = if points.len() == 128 {
        u128::MAX
    } else {
        (1u128 << points.len()) - 1
    };

    let mut masks = Vec::with_capacity(spec.members.len());
    let mut index_of = HashMap::new();
    for member in &spec.members {
        let mut mask = 0u128;
        for p in member {
            let i = *point_index
                .get(p.as_str())
                .ok_or_else(|| Error::InvalidFamily(format!("`{p}` is not a point of the universe")))?;
            mask |= 1 << i;
        }
        if index_of.insert(mask, masks.len()).is_some() {
            return Err(Error::InvalidFamily(format!(
                "member {} listed twice",
                subset_label(mask, points)
            )));
        }
        masks.push(mask);
    }
    let zero = *index_of
        .get(&0)
        .ok_or_else(|| Error::InvalidFamily("the empty set is missing".into()))?;
    let unit = *index_of
        .get(&full)
        .ok_or_else(|| Error::InvalidFamily("the universe is missing".into()))?;
    if let Some(&m) = masks.iter().find(|&&m| !index_of.contains_key(&(full & !m))) {
        return Err(Error::InvalidFamily(format!(
            "the complement of {} is missing",
            subset_label(m, points)
        )));
    }

    let names = match &spec.labels {
        Some(labels) if labels.len() != masks.len() => {
            return Err(Error::InvalidFamily(format!(
                "{} labels for {} members",
                labels.len(),
                masks.len()
            )))
        }
        Some(labels) => labels.clone(),
        None => masks.iter().map(|&m| subset_label(m, points)).collect(),
    };
    let mut table = EffectAlgebraTable::new(names, ElementId(zero), ElementId(unit))?;
    for (i, &a) in masks.iter().enumerate() {
        for (j, &b) in masks.iter().enumerate().skip(i) {
            if a & b == 0 {
                if let Some(&k) = index_of.get(&(a | b)) {
                    table.define(ElementId(i), ElementId(j), ElementId(k))?;
                }
            }
        }
    }
    EffectAlgebra::new(table)
}

/// Labels of the half-plane algebra, in index order.
pub const EXAMPLE_4_6_LABELS: [&str; 6] = ["∅", "X⁺", "X⁻", "Y⁺", "Y⁻", "ℝ²"];

/// The four half-planes `x ≥ 0`, `x < 0`, `y ≥ 0`, `y < 0` of the plane,
/// together with `∅` and the plane, under disjoint union.
///
/// Each half-plane is represented by the quadrants it meets, which keeps
/// exactly the disjointness relations of the planar sets.
pub fn example_4_6() -> EffectAlgebra {
    let q = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let spec = SetFamilySpec {
        universe: q(&["Q1", "Q2", "Q3", "Q4"]),
        members: vec![
            q(&[]),
            q(&["Q1", "Q4"]),
            q(&["Q2", "Q3"]),
            q(&["Q1", "Q2"]),
            q(&["Q3", "Q4"]),
            q(&["Q1", "Q2", "Q3", "Q4"]),
        ],
        labels: Some(EXAMPLE_4_6_LABELS.iter().map(|s| s.to_string()).collect()),
    };
    set_family_algebra(&spec).expect("the half-plane family is an effect algebra")
}

/// Checks that `basis` is an orthogonal multiset of atoms summing to 1.
pub fn check_atomic_basis(l: &EffectAlgebra, basis: &[ElementId]) -> Result<()> {
    let atoms = l.atoms();
    if let Some(b) = basis.iter().find(|b| !atoms.contains(b)) {
        return Err(Error::Precondition(format!("basis member `{}` is not an atom", l.name(*b))));
    }
    match l.orthosum(basis) {
        Some(u) if u == l.unit() => Ok(()),
        Some(s) => Err(Error::Precondition(format!(
            "basis sums to `{}` rather than the unit",
            l.name(s)
        ))),
        None => Err(Error::Precondition("basis is not orthogonal".into())),
    }
}

/// The first atomic basis in nondecreasing index order, if any exists.
pub fn atomic_basis(l: &EffectAlgebra) -> Option<Vec<ElementId>> {
    fn go(l: &EffectAlgebra, atoms: &[ElementId], from: usize, rest: ElementId, acc: &mut Vec<ElementId>) -> bool {
        if rest == l.zero() {
            return true;
        }
        for (i, &a) in atoms.iter().enumerate().skip(from) {
            if let Some(next) = l.ominus(rest, a) {
                acc.push(a);
                if go(l, atoms, i, next, acc) {
                    return true;
                }
                acc.pop();
            }
        }
        false
    }
    let atoms = l.atoms();
    let mut acc = Vec::new();
    go(l, &atoms, 0, l.unit(), &mut acc).then_some(acc)
}

/// A sub-multiset of the atomic basis whose orthosum is `a`, preferring to
/// include earlier basis members.
pub fn atomic_decompose(l: &EffectAlgebra, basis: &[ElementId], a: ElementId) -> Result<Option<Vec<ElementId>>> {
    check_atomic_basis(l, basis)?;
    let mut failed = HashSet::new();
    let mut acc = Vec::new();
    Ok(subset_sum(l, basis, 0, a, &mut failed, &mut acc).then_some(acc))
}

fn subset_sum(
    l: &EffectAlgebra,
    basis: &[ElementId],
    i: usize,
    rest: ElementId,
    failed: &mut HashSet<(usize, ElementId)>,
    acc: &mut Vec<ElementId>,
) -> bool {
    if rest == l.zero() {
        return true;
    }
    if i == basis.len() || failed.contains(&(i, rest)) {
        return false;
    }
    if let Some(next) = l.ominus(rest, basis[i]) {
        acc.push(basis[i]);
        if subset_sum(l, basis, i + 1, next, failed, acc) {
            return true;
        }
        acc.pop();
    }
    if subset_sum(l, basis, i + 1, rest, failed, acc) {
        return true;
    }
    failed.insert((i, rest));
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::validate_axioms;

    fn id(l: &EffectAlgebra, name: &str) -> ElementId {
        l.lookup(name).unwrap()
    }

    #[test]
    fn powerset_basics() {
        let l = powerset_algebra(1).unwrap();
        assert_eq!(l.names(), &["∅", "{1}"]);
        let l = powerset_algebra(3).unwrap();
        assert_eq!(l.size(), 8);
        assert_eq!(l.atoms(), vec![ElementId(1), ElementId(2), ElementId(4)]);
        assert_eq!(l.orthosupplement(id(&l, "{1,3}")), id(&l, "{2}"));
        let l = powerset_algebra(2).unwrap();
        assert_eq!(l.orthosupplement(id(&l, "{1}")), id(&l, "{2}"));
    }

    #[test]
    fn powerset_guards() {
        assert!(powerset_algebra(0).is_err());
        assert!(powerset_algebra(17).is_err());
        assert!(matches!(powerset_algebra(10), Err(Error::TooLarge { .. })));
        assert_eq!(powerset_algebra_with_limit(10, 1024).unwrap().size(), 1024);
    }

    #[test]
    fn scale_basics() {
        assert_eq!(scale_algebra(1).unwrap().size(), 2);
        let l = scale_algebra(10).unwrap();
        assert_eq!(l.size(), 11);
        assert_eq!(l.oplus(id(&l, "3/10"), id(&l, "4/10")), Some(id(&l, "7/10")));
        assert_eq!(l.oplus(id(&l, "7/10"), id(&l, "4/10")), None);
        assert_eq!(l.ominus(id(&l, "7/10"), id(&l, "3/10")), Some(id(&l, "4/10")));
        assert!(l.leq(id(&l, "2/10"), id(&l, "9/10")));
        let l = scale_algebra(4).unwrap();
        assert_eq!(l.atoms(), vec![id(&l, "1/4")]);
        let l = scale_algebra(5).unwrap();
        assert_eq!(l.atoms(), vec![id(&l, "1/5")]);
        assert!(scale_algebra(0).is_err());
    }

    #[test]
    fn full_family_matches_powerset() {
        let universe: Vec<String> = ["1", "2", "3"].iter().map(|s| s.to_string()).collect();
        let members = (0..8u32)
            .map(|m| (0..3).filter(|i| m >> i & 1 == 1).map(|i| universe[i].clone()).collect())
            .collect();
        let l = set_family_algebra(&SetFamilySpec { universe, members, labels: None }).unwrap();
        assert_eq!(l.table(), powerset_algebra(3).unwrap().table());
    }

    #[test]
    fn family_missing_a_complement_is_rejected() {
        let s = |xs: &[&str]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        let spec = SetFamilySpec {
            universe: s(&["a", "b", "c"]),
            members: vec![s(&[]), s(&["a"]), s(&["a", "b", "c"])],
            labels: None,
        };
        assert!(matches!(set_family_algebra(&spec), Err(Error::InvalidFamily(_))));
    }

    #[test]
    fn family_failing_the_axioms_is_reported() {
        // all subsets of {a,b,c,d} except {a,b} and {c,d}: {a} ⊕ ({b} ⊕ {c})
        // exists while {a} ⊕ {b} does not
        let universe: Vec<String> = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
        let members = (0..16u32)
            .filter(|&m| m != 0b0011 && m != 0b1100)
            .map(|m| (0..4).filter(|i| m >> i & 1 == 1).map(|i| universe[i].clone()).collect())
            .collect();
        let spec = SetFamilySpec { universe, members, labels: None };
        match set_family_algebra(&spec) {
            Err(Error::Axioms(report)) => {
                assert!(report.violations.iter().any(|v| v.axiom == crate::algebra::Axiom::E2))
            }
            other => panic!("expected an axiom failure, got {other:?}"),
        }
    }

    #[test]
    fn example_4_6_structure() {
        let l = example_4_6();
        assert!(validate_axioms(l.table()).unwrap().valid);
        let [empty, xp, xm, yp, ym, plane] = EXAMPLE_4_6_LABELS.map(|n| id(&l, n));
        assert_eq!(l.atoms(), vec![xp, xm, yp, ym]);
        assert_eq!(l.oplus(xp, xm), Some(plane));
        assert_eq!(l.oplus(yp, ym), Some(plane));
        assert_eq!(l.oplus(xp, ym), None);
        assert_eq!(l.orthosum(&[xp, yp]), None);
        assert_eq!(l.ominus(plane, xp), Some(xm));
        assert_eq!(l.orthosupplement(yp), ym);
        assert!(l.leq(yp, plane));
        assert!(!l.leq(yp, xp));
        // exactly the sums ∅⊕a and the two complementary pairs
        let defined: usize = l.table().defined_pairs().count();
        assert_eq!(defined, 6 + 2);
        assert_eq!(l.orthosupplement(empty), plane);
    }

    #[test]
    fn atomic_bases() {
        let l = powerset_algebra(3).unwrap();
        let basis = atomic_basis(&l).unwrap();
        assert_eq!(basis, vec![ElementId(1), ElementId(2), ElementId(4)]);
        assert_eq!(
            atomic_decompose(&l, &basis, id(&l, "{1,3}")).unwrap(),
            Some(vec![id(&l, "{1}"), id(&l, "{3}")])
        );

        let l = scale_algebra(4).unwrap();
        let basis = atomic_basis(&l).unwrap();
        assert_eq!(basis, vec![ElementId(1); 4]);
        assert_eq!(
            atomic_decompose(&l, &basis, id(&l, "3/4")).unwrap(),
            Some(vec![ElementId(1); 3])
        );

        let l = example_4_6();
        let xp = id(&l, "X⁺");
        let xm = id(&l, "X⁻");
        assert_eq!(atomic_basis(&l), Some(vec![xp, xm]));
        assert_eq!(atomic_decompose(&l, &[xp, xm], id(&l, "Y⁺")).unwrap(), None);
        assert!(atomic_decompose(&l, &[xp], xp).is_err());
    }

    #[test]
    fn singleton_basis_decomposes_every_subset() {
        for n in 1..=5 {
            let l = powerset_algebra(n).unwrap();
            let basis: Vec<_> = (0..n).map(|i| ElementId(1 << i)).collect();
            for a in l.elements() {
                let parts = atomic_decompose(&l, &basis, a).unwrap().unwrap();
                let expected: Vec<_> = basis.iter().copied().filter(|b| a.0 & b.0 != 0).collect();
                assert_eq!(parts, expected);
            }
        }
    }
}
