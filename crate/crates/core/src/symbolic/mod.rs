//! An infinite effect algebra of subsets of `ℕ = {1, 2, …}`.
//!
//! With `p_n` the `n`-th prime and `A_n = {p_n^m : m ≥ 1}`, set
//!
//! ```text
//! B_k = A_1 ∪ A_3 ∪ … ∪ A_{2k-1} ∪ A_{2k} ∪ A_{2k+2} ∪ …
//! ```
//!
//! The carrier is `{∅, ℕ} ∪ {B_k, B_kᶜ : k ≥ 1}` under disjoint union. Any two
//! distinct non-empty members other than a complementary pair intersect, so
//! the only nontrivial sums are `B_k ⊕ B_kᶜ = ℕ`. Membership is decided by
//! factoring, and every non-disjointness claim comes with an explicit
//! element of the intersection.
//!
//! For use with the finite machinery, [`restriction`] materialises the
//! elements with index at most `N` as an ordinary [`EffectAlgebra`].

pub mod primes;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::algebra::{EffectAlgebra, EffectAlgebraTable, ElementId};
use crate::error::{Error, Result};
use crate::measure::{Measure, MeasureFamily, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SymbolicElement {
    Empty,
    Full,
    B(u32),
    BComp(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kind {
    Empty,
    Full,
    B,
    BComp,
}

impl Kind {
    pub const ALL: [Kind; 4] = [Kind::Empty, Kind::Full, Kind::B, Kind::BComp];
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Empty => "∅",
            Kind::Full => "ℕ",
            Kind::B => "B_i",
            Kind::BComp => "B_iᶜ",
        })
    }
}

impl SymbolicElement {
    /// `B_k`; panics unless `k ≥ 1`.
    pub fn b(k: u32) -> Self {
        assert!(k >= 1, "B_k needs k ≥ 1");
        SymbolicElement::B(k)
    }

    /// `B_kᶜ`; panics unless `k ≥ 1`.
    pub fn b_comp(k: u32) -> Self {
        assert!(k >= 1, "B_kᶜ needs k ≥ 1");
        SymbolicElement::BComp(k)
    }

    pub fn kind(self) -> Kind {
        match self {
            SymbolicElement::Empty => Kind::Empty,
            SymbolicElement::Full => Kind::Full,
            SymbolicElement::B(_) => Kind::B,
            SymbolicElement::BComp(_) => Kind::BComp,
        }
    }

    pub fn index(self) -> Option<u32> {
        match self {
            SymbolicElement::B(k) | SymbolicElement::BComp(k) => Some(k),
            _ => None,
        }
    }

    pub fn orthosupplement(self) -> Self {
        match self {
            SymbolicElement::Empty => SymbolicElement::Full,
            SymbolicElement::Full => SymbolicElement::Empty,
            SymbolicElement::B(k) => SymbolicElement::BComp(k),
            SymbolicElement::BComp(k) => SymbolicElement::B(k),
        }
    }

    /// Inverse of the `Display` form: `∅`, `ℕ`, `B3`, `B3ᶜ`.
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "∅" => return Some(SymbolicElement::Empty),
            "ℕ" => return Some(SymbolicElement::Full),
            _ => {}
        }
        let rest = s.strip_prefix('B')?;
        let (digits, comp) = match rest.strip_suffix('ᶜ') {
            Some(d) => (d, true),
            None => (rest, false),
        };
        let k: u32 = digits.parse().ok().filter(|&k| k >= 1)?;
        Some(if comp { SymbolicElement::BComp(k) } else { SymbolicElement::B(k) })
    }
}

impl fmt::Display for SymbolicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymbolicElement::Empty => f.write_str("∅"),
            SymbolicElement::Full => f.write_str("ℕ"),
            SymbolicElement::B(k) => write!(f, "B{k}"),
            SymbolicElement::BComp(k) => write!(f, "B{k}ᶜ"),
        }
    }
}

/// Whether a prime with index `n` has its powers in `B_k`: odd `n` with
/// `(n + 1) / 2 ≤ k`, or even `n` with `n / 2 ≥ k`.
pub fn prime_class_in_b(n: u64, k: u32) -> bool {
    let k = k as u64;
    if n % 2 == 1 {
        n.div_ceil(2) <= k
    } else {
        n / 2 >= k
    }
}

fn member_given(e: SymbolicElement, class: Option<u64>) -> bool {
    match e {
        SymbolicElement::Empty => false,
        SymbolicElement::Full => true,
        SymbolicElement::B(k) => class.is_some_and(|n| prime_class_in_b(n, k)),
        SymbolicElement::BComp(k) => !class.is_some_and(|n| prime_class_in_b(n, k)),
    }
}

fn check_positive(zero: bool) -> Result<()> {
    if zero {
        Err(Error::Precondition("members are natural numbers starting at 1".into()))
    } else {
        Ok(())
    }
}

/// `x ∈ e` for `x ≥ 1`.
pub fn member(e: SymbolicElement, x: u64) -> Result<bool> {
    check_positive(x == 0)?;
    if matches!(e, SymbolicElement::Empty | SymbolicElement::Full) {
        return Ok(e == SymbolicElement::Full);
    }
    let class = match primes::prime_power(x) {
        Some((p, _)) => Some(primes::prime_index(p)?),
        None => None,
    };
    Ok(member_given(e, class))
}

/// `x ∈ e` for arbitrarily large `x` whose smallest prime factor is in the
/// cached table.
pub fn member_big(e: SymbolicElement, x: &BigUint) -> Result<bool> {
    check_positive(x.bits() == 0)?;
    if let Ok(small) = x.try_into() {
        return member(e, small);
    }
    if matches!(e, SymbolicElement::Empty | SymbolicElement::Full) {
        return Ok(e == SymbolicElement::Full);
    }
    let class = match primes::prime_power_big(x)? {
        Some((p, _)) => Some(primes::prime_index(p)?),
        None => None,
    };
    Ok(member_given(e, class))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisjointnessAnswer {
    pub disjoint: bool,
    /// A natural number in both sets when they are not disjoint.
    pub witness: Option<u64>,
    /// Prime index `n` such that every power of `p_n` lies in both sets.
    pub witness_class: Option<u64>,
}

impl DisjointnessAnswer {
    /// Re-checks the witness by membership tests.
    pub fn verify(&self, s: SymbolicElement, t: SymbolicElement) -> Result<bool> {
        match self.witness {
            None => Ok(self.disjoint),
            Some(w) => Ok(!self.disjoint && member(s, w)? && member(t, w)?),
        }
    }
}

/// Index `n` of a prime whose powers all lie in `s ∩ t`, or `None` when the
/// sets are disjoint.
///
/// * `B_i ∩ B_j` and `ℕ ∩ B_j` contain `A_1`;
/// * `B_i ∩ B_jᶜ` contains `A_{2i}` for `i < j` and `A_{2i-1}` for `i > j`;
/// * `B_iᶜ ∩ B_jᶜ` contains `A_{2(i+j)+1}`, and `ℕ ∩ B_jᶜ` contains `A_{4j+1}`.
pub fn intersection_class(s: SymbolicElement, t: SymbolicElement) -> Option<u64> {
    use SymbolicElement::*;
    match (s, t) {
        (Empty, _) | (_, Empty) => None,
        (Full, Full) | (Full, B(_)) | (B(_), Full) | (B(_), B(_)) => Some(1),
        (Full, BComp(j)) | (BComp(j), Full) => Some(4 * j as u64 + 1),
        (B(i), BComp(j)) | (BComp(j), B(i)) => match i.cmp(&j) {
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Less => Some(2 * i as u64),
            std::cmp::Ordering::Greater => Some(2 * i as u64 - 1),
        },
        (BComp(i), BComp(j)) => Some(2 * (i as u64 + j as u64) + 1),
    }
}

/// Decides `s ∩ t = ∅`, with the smallest power of the prime from
/// [`intersection_class`] as witness otherwise.
pub fn disjoint(s: SymbolicElement, t: SymbolicElement) -> Result<DisjointnessAnswer> {
    let Some(n) = intersection_class(s, t) else {
        return Ok(DisjointnessAnswer {
            disjoint: true,
            witness: None,
            witness_class: None,
        });
    };
    let p = nth_prime_checked(n)?;
    Ok(DisjointnessAnswer {
        disjoint: false,
        witness: Some(p),
        witness_class: Some(n),
    })
}

fn nth_prime_checked(n: u64) -> Result<u64> {
    usize::try_from(n)
        .ok()
        .and_then(primes::nth_prime)
        .ok_or_else(|| Error::Precondition(format!("prime index {n} exceeds the cached table")))
}

/// The first `count` powers `p_n^1, …, p_n^count` of the prime shared by `s`
/// and `t`.
pub fn witness_family(s: SymbolicElement, t: SymbolicElement, count: u32) -> Result<Vec<BigUint>> {
    let Some(n) = intersection_class(s, t) else {
        return Ok(Vec::new());
    };
    let p = BigUint::from(nth_prime_checked(n)?);
    Ok((1..=count).map(|m| p.pow(m)).collect())
}

/// The partial sum: `∅ ⊕ x = x`, `B_k ⊕ B_kᶜ = ℕ`, undefined otherwise.
pub fn sym_oplus(s: SymbolicElement, t: SymbolicElement) -> Option<SymbolicElement> {
    use SymbolicElement::*;
    match (s, t) {
        (Empty, x) | (x, Empty) => Some(x),
        (B(i), BComp(j)) | (BComp(j), B(i)) if i == j => Some(Full),
        _ => None,
    }
}

/// Whether the left fold of `⊕` over `parts` is defined.
pub fn is_orthogonal(parts: &[SymbolicElement]) -> bool {
    orthosum(parts).is_some()
}

pub fn orthosum(parts: &[SymbolicElement]) -> Option<SymbolicElement> {
    parts.iter().try_fold(SymbolicElement::Empty, |acc, &p| sym_oplus(acc, p))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// Every pair of these kinds is orthogonal.
    Always,
    /// Orthogonal exactly when the indices agree.
    SameIndexOnly,
    /// No pair of these kinds is orthogonal.
    Never,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KindCase {
    pub left: Kind,
    pub right: Kind,
    pub verdict: Verdict,
    /// Concrete index pairs checked against [`sym_oplus`] and [`disjoint`].
    pub instances: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrthogonalityCertificate {
    /// One row per unordered pair of kinds.
    pub cases: Vec<KindCase>,
    /// Rules producing a defined sum of two elements: `∅ ⊕ x` and
    /// `B_k ⊕ B_kᶜ`.
    pub orthogonality_rules: usize,
    /// Largest number of non-empty members of an orthogonal multiset.
    pub max_nonempty_members: usize,
    /// Every case row agreed with the instance checks.
    pub consistent: bool,
}

impl fmt::Display for OrthogonalityCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.cases {
            writeln!(f, "{:<5} {:<5} {:?} ({} instances)", c.left, c.right, c.verdict, c.instances)?;
        }
        writeln!(
            f,
            "{} orthogonality rules; orthogonal multisets have at most {} non-empty members",
            self.orthogonality_rules, self.max_nonempty_members
        )
    }
}

/// Largest index used by the instance checks of the certificate.
pub const CERTIFICATE_MAX_INDEX: u32 = 20;

fn kind_instances(kind: Kind) -> Vec<SymbolicElement> {
    match kind {
        Kind::Empty => vec![SymbolicElement::Empty],
        Kind::Full => vec![SymbolicElement::Full],
        Kind::B => (1..=CERTIFICATE_MAX_INDEX).map(SymbolicElement::B).collect(),
        Kind::BComp => (1..=CERTIFICATE_MAX_INDEX).map(SymbolicElement::BComp).collect(),
    }
}

fn verdict(left: Kind, right: Kind) -> Verdict {
    match (left, right) {
        (Kind::Empty, _) | (_, Kind::Empty) => Verdict::Always,
        (Kind::B, Kind::BComp) | (Kind::BComp, Kind::B) => Verdict::SameIndexOnly,
        _ => Verdict::Never,
    }
}

/// Case analysis over pairs of kinds, each row confirmed on all index pairs
/// up to [`CERTIFICATE_MAX_INDEX`].
///
/// A sub-family of an orthogonal family is orthogonal, so the members of
/// an orthogonal multiset are pairwise orthogonal. Among non-empty
/// elements only complementary pairs `B_k, B_kᶜ` are, and no three
/// non-empty elements are pairwise complementary; hence at most two
/// non-empty members.
pub fn orthogonal_pairs_certificate() -> Result<OrthogonalityCertificate> {
    let mut cases = Vec::new();
    let mut consistent = true;
    for (i, &left) in Kind::ALL.iter().enumerate() {
        for &right in &Kind::ALL[i..] {
            let v = verdict(left, right);
            let mut instances = 0;
            for s in kind_instances(left) {
                for t in kind_instances(right) {
                    instances += 1;
                    let defined = sym_oplus(s, t).is_some();
                    let expected = match v {
                        Verdict::Always => true,
                        Verdict::SameIndexOnly => s.index() == t.index(),
                        Verdict::Never => false,
                    };
                    let answer = disjoint(s, t)?;
                    consistent &= defined == expected && answer.verify(s, t)?;
                    consistent &= defined == answer.disjoint;
                }
            }
            cases.push(KindCase {
                left,
                right,
                verdict: v,
                instances,
            });
        }
    }

    // pairwise orthogonality of non-empty elements, over a small index range
    let pool: Vec<SymbolicElement> = [Kind::Full, Kind::B, Kind::BComp]
        .into_iter()
        .flat_map(|k| kind_instances(k).into_iter().take(3))
        .collect();
    let pairwise = |xs: &[SymbolicElement]| {
        xs.iter()
            .enumerate()
            .all(|(i, &a)| xs[i + 1..].iter().all(|&b| sym_oplus(a, b).is_some()))
    };
    let mut max_nonempty = 1;
    for (i, &a) in pool.iter().enumerate() {
        for (j, &b) in pool.iter().enumerate().skip(i) {
            if pairwise(&[a, b]) {
                max_nonempty = max_nonempty.max(2);
                consistent &= is_orthogonal(&[a, b]);
            }
            for &c in &pool[j..] {
                if pairwise(&[a, b, c]) || is_orthogonal(&[a, b, c]) {
                    max_nonempty = max_nonempty.max(3);
                }
            }
        }
    }

    Ok(OrthogonalityCertificate {
        cases,
        orthogonality_rules: 2,
        max_nonempty_members: max_nonempty,
        consistent,
    })
}

/// `μ(B_n) = n`, `μ(B_nᶜ) = −n`, `μ(∅) = μ(ℕ) = 0`.
pub fn mu_ex23(e: SymbolicElement) -> f64 {
    match e {
        SymbolicElement::Empty | SymbolicElement::Full => 0.0,
        SymbolicElement::B(n) => n as f64,
        SymbolicElement::BComp(n) => -(n as f64),
    }
}

/// `μ_i(B_n) = i` if `n = i` and `0` otherwise; `μ_i(B_nᶜ) = −μ_i(B_n)`.
pub fn mu_ex33(i: u32, e: SymbolicElement) -> f64 {
    assert!(i >= 1, "members are indexed from 1");
    match e {
        SymbolicElement::B(n) if n == i => i as f64,
        SymbolicElement::BComp(n) if n == i => -(i as f64),
        _ => 0.0,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub i: u32,
    /// `sup_e |μ_i(e)|`.
    pub sup_norm: f64,
    /// `max_{j ≤ N} |μ_j(B_i)|`.
    pub pointwise_bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundTable {
    pub rows: Vec<BoundRow>,
    /// `max_{i ≤ N} sup_e |μ_i(e)|`.
    pub uniform_bound: f64,
}

/// Bounds of `μ_1, …, μ_N`. Each `μ_i` vanishes off `{B_i, B_iᶜ}`, so
/// suprema over the carrier reduce to indices `≤ N`.
pub fn truncated_bound_table(n: u32) -> Result<BoundTable> {
    if n == 0 {
        return Err(Error::Precondition("N must be at least 1".into()));
    }
    let elements: Vec<SymbolicElement> = restriction_elements(n);
    let rows: Vec<BoundRow> = (1..=n)
        .map(|i| BoundRow {
            i,
            sup_norm: elements.iter().map(|&e| mu_ex33(i, e).abs()).fold(0.0, f64::max),
            pointwise_bound: (1..=n).map(|j| mu_ex33(j, SymbolicElement::B(i)).abs()).fold(0.0, f64::max),
        })
        .collect();
    let uniform_bound = rows.iter().map(|r| r.sup_norm).fold(0.0, f64::max);
    Ok(BoundTable { rows, uniform_bound })
}

fn restriction_elements(n: u32) -> Vec<SymbolicElement> {
    let mut out = vec![SymbolicElement::Empty];
    out.extend((1..=n).map(SymbolicElement::B));
    out.extend((1..=n).map(SymbolicElement::BComp));
    out.push(SymbolicElement::Full);
    out
}

/// The elements with index at most `N` as a finite effect algebra of size
/// `2N + 2`: `∅` at 0, `B_k` at `k`, `B_kᶜ` at `N + k` and `ℕ` at `2N + 1`.
#[derive(Clone, Debug)]
pub struct SymbolicRestriction {
    n: u32,
    algebra: Arc<EffectAlgebra>,
}

impl SymbolicRestriction {
    pub fn algebra(&self) -> &Arc<EffectAlgebra> {
        &self.algebra
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn id_of(&self, e: SymbolicElement) -> Option<ElementId> {
        let n = self.n as usize;
        match e {
            SymbolicElement::Empty => Some(ElementId(0)),
            SymbolicElement::Full => Some(ElementId(2 * n + 1)),
            SymbolicElement::B(k) if k <= self.n => Some(ElementId(k as usize)),
            SymbolicElement::BComp(k) if k <= self.n => Some(ElementId(n + k as usize)),
            _ => None,
        }
    }

    pub fn element(&self, id: ElementId) -> SymbolicElement {
        let n = self.n as usize;
        match id.0 {
            0 => SymbolicElement::Empty,
            i if i <= n => SymbolicElement::B(i as u32),
            i if i <= 2 * n => SymbolicElement::BComp((i - n) as u32),
            i if i == 2 * n + 1 => SymbolicElement::Full,
            i => panic!("element index {i} out of range"),
        }
    }

    /// `B_1, …, B_N`.
    pub fn b_ids(&self) -> Vec<ElementId> {
        (1..=self.n as usize).map(ElementId).collect()
    }

    /// A measure given elementwise on the symbolic carrier.
    pub fn measure(&self, f: impl Fn(SymbolicElement) -> f64) -> Result<Measure> {
        let values = self
            .algebra
            .elements()
            .map(|id| Value::scalar(f(self.element(id))))
            .collect();
        Measure::new(self.algebra.clone(), values)
    }
}

pub fn restriction(n: u32) -> Result<SymbolicRestriction> {
    restriction_with_limit(n, crate::DEFAULT_MAX_SIZE)
}

pub fn restriction_with_limit(n: u32, limit: usize) -> Result<SymbolicRestriction> {
    if n == 0 {
        return Err(Error::Precondition("N must be at least 1".into()));
    }
    let elements = restriction_elements(n);
    let names = elements.iter().map(|e| e.to_string()).collect();
    let unit = ElementId(elements.len() - 1);
    let mut table = EffectAlgebraTable::with_limit(names, ElementId(0), unit, limit)?;
    for (i, &s) in elements.iter().enumerate() {
        for (j, &t) in elements.iter().enumerate().skip(i) {
            if let Some(u) = sym_oplus(s, t) {
                let k = elements.iter().position(|&x| x == u).expect("closed under ⊕");
                table.define(ElementId(i), ElementId(j), ElementId(k))?;
            }
        }
    }
    let algebra = Arc::new(EffectAlgebra::with_limit(table, limit)?);
    Ok(SymbolicRestriction { n, algebra })
}

/// `μ` restricted to indices `≤ N`.
pub fn ex23_measure(r: &SymbolicRestriction) -> Result<Measure> {
    r.measure(mu_ex23)
}

/// `μ_1, …, μ_N` restricted to indices `≤ N`.
pub fn ex33_family(r: &SymbolicRestriction) -> Result<MeasureFamily> {
    let members = (1..=r.n())
        .map(|i| r.measure(|e| mu_ex33(i, e)))
        .collect::<Result<Vec<_>>>()?;
    MeasureFamily::new(members)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{sup_norm, unboundedness_witness_search, SearchStop};
    use SymbolicElement::*;

    #[test]
    fn membership_examples() {
        assert!(member(B(5), 2).unwrap());
        for k in 1..=30 {
            assert!(!member(B(k), 6).unwrap());
            assert!(member(BComp(k), 6).unwrap());
            assert!(!member(B(k), 1).unwrap());
        }
        assert!(member(B(2), 49).unwrap());
        assert!(!member(B(3), 49).unwrap());
        assert!(member(Full, 1).unwrap());
        assert!(!member(Empty, 7).unwrap());
        assert!(member(B(1), 0).is_err());
    }

    #[test]
    fn membership_by_direct_definition() {
        // B_k as a union of A_n, enumerated for small primes and exponents
        for k in 1..=6u32 {
            for n in 1..=30usize {
                let p = primes::nth_prime(n).unwrap();
                let odd_part = n % 2 == 1 && n.div_ceil(2) <= k as usize;
                let even_part = n % 2 == 0 && n / 2 >= k as usize;
                let expected = odd_part || even_part;
                let mut x = p;
                for _ in 0..3 {
                    assert_eq!(member(B(k), x).unwrap(), expected, "p_{n}^m in B_{k}");
                    x *= p;
                }
            }
        }
    }

    #[test]
    fn large_members() {
        // p_10001 = 104743 is odd-indexed, so its powers lie in B_k iff k ≥ 5001
        assert!(!member(B(5000), 104_743).unwrap());
        assert!(member(B(5001), 104_743).unwrap());
        let x = BigUint::from(419u32).pow(50);
        // 419 = p_81
        assert!(member_big(B(41), &x).unwrap());
        assert!(!member_big(B(40), &x).unwrap());
        assert!(member_big(BComp(40), &x).unwrap());
    }

    #[test]
    fn disjointness_examples() {
        assert!(disjoint(B(1), BComp(1)).unwrap().disjoint);
        let a = disjoint(B(2), B(3)).unwrap();
        assert_eq!((a.disjoint, a.witness), (false, Some(2)));
        let a = disjoint(BComp(2), BComp(3)).unwrap();
        assert_eq!(a.witness, Some(31));
        assert!(a.verify(BComp(2), BComp(3)).unwrap());
    }

    #[test]
    fn witnesses_verify_for_all_small_pairs() {
        let mut all = vec![Empty, Full];
        for k in 1..=20 {
            all.push(B(k));
            all.push(BComp(k));
        }
        for &s in &all {
            for &t in &all {
                let a = disjoint(s, t).unwrap();
                assert!(a.verify(s, t).unwrap(), "{s} {t}");
                assert_eq!(a.disjoint, sym_oplus(s, t).is_some(), "{s} {t}");
            }
        }
    }

    #[test]
    fn oplus_examples() {
        assert_eq!(sym_oplus(B(4), BComp(4)), Some(Full));
        assert_eq!(sym_oplus(B(2), B(3)), None);
        assert_eq!(sym_oplus(Empty, B(7)), Some(B(7)));
        assert_eq!(sym_oplus(Full, Empty), Some(Full));
        assert!(!is_orthogonal(&[B(1), BComp(1), B(2)]));
        assert!(is_orthogonal(&[Empty; 9]));
    }

    #[test]
    fn certificate() {
        let c = orthogonal_pairs_certificate().unwrap();
        assert_eq!(c.cases.len(), 10);
        assert!(c.consistent);
        assert_eq!(c.orthogonality_rules, 2);
        assert_eq!(c.max_nonempty_members, 2);
        let same = c.cases.iter().filter(|x| x.verdict == Verdict::SameIndexOnly).count();
        assert_eq!(same, 1);
    }

    #[test]
    fn labels_round_trip() {
        for e in [Empty, Full, B(1), BComp(12)] {
            assert_eq!(SymbolicElement::parse(&e.to_string()), Some(e));
        }
        assert_eq!(SymbolicElement::parse("B0"), None);
    }

    #[test]
    fn measures_and_bounds() {
        assert_eq!(mu_ex23(B(5)), 5.0);
        assert_eq!(mu_ex23(Full), 0.0);
        assert_eq!(mu_ex23(BComp(7)), -7.0);
        assert_eq!(mu_ex33(3, B(3)), 3.0);
        assert_eq!(mu_ex33(3, B(5)), 0.0);
        assert_eq!(mu_ex33(4, BComp(4)), -4.0);

        let t = truncated_bound_table(1).unwrap();
        assert_eq!(t.rows, vec![BoundRow { i: 1, sup_norm: 1.0, pointwise_bound: 1.0 }]);
        assert_eq!(truncated_bound_table(5).unwrap().uniform_bound, 5.0);
    }

    #[test]
    fn restriction_layout() {
        let r = restriction(4).unwrap();
        let l = r.algebra();
        assert_eq!(l.size(), 10);
        assert_eq!(r.id_of(B(3)), Some(ElementId(3)));
        assert_eq!(r.id_of(BComp(3)), Some(ElementId(7)));
        assert_eq!(r.id_of(B(5)), None);
        for id in l.elements() {
            assert_eq!(r.id_of(r.element(id)), Some(id));
            assert_eq!(l.name(id), r.element(id).to_string());
        }
        assert_eq!(l.oplus(ElementId(2), ElementId(6)), Some(l.unit()));
        assert_eq!(l.oplus(ElementId(2), ElementId(3)), None);
    }

    #[test]
    fn restricted_measures() {
        let r = restriction(10).unwrap();
        assert_eq!(sup_norm(&ex23_measure(&r).unwrap()), 10.0);
        let fam = ex33_family(&r).unwrap();
        assert_eq!(fam.pointwise_bound(r.id_of(B(3)).unwrap()), 3.0);
        assert_eq!(fam.uniform_bound(), 10.0);
        let w = unboundedness_witness_search(&fam, &r.b_ids(), 10).unwrap();
        assert_eq!(w.picks.len(), 1);
        assert_eq!(w.stop, SearchStop::Exhausted);
    }
}
