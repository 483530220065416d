//! Additive maps from a finite effect algebra into `ℝ^d`.

mod space;

use std::fmt;
use std::ops::{Add, Sub};
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{EffectAlgebra, ElementId};
use crate::constructions::check_atomic_basis;
use crate::error::{Error, Result};
use crate::rdp::check_rdp;
use crate::DEFAULT_TOLERANCE;

pub use space::MeasureSpace;

/// A point of `ℝ^d` with the Euclidean norm. Complex values are `d = 2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Value(Vec<f64>);

impl Value {
    /// # Panics
    ///
    /// If `coords` is empty.
    pub fn new(coords: Vec<f64>) -> Self {
        assert!(!coords.is_empty(), "values have at least one coordinate");
        Value(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        Value::new(vec![0.0; dim])
    }

    pub fn scalar(x: f64) -> Self {
        Value(vec![x])
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        match self.0.as_slice() {
            [x] => x.abs(),
            coords => coords.iter().map(|x| x * x).sum::<f64>().sqrt(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0.0)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|x| x.fract() == 0.0)
    }

    /// Largest coordinate difference.
    pub fn distance_max(&self, other: &Value) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl Add for &Value {
    type Output = Value;

    fn add(self, rhs: &Value) -> Value {
        debug_assert_eq!(self.dim(), rhs.dim());
        Value(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Value {
    type Output = Value;

    fn sub(self, rhs: &Value) -> Value {
        debug_assert_eq!(self.dim(), rhs.dim());
        Value(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0.as_slice() {
            [x] => write!(f, "{x}"),
            coords => {
                write!(f, "(")?;
                for (i, x) in coords.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdditivityViolation {
    pub a: ElementId,
    pub b: ElementId,
    pub sum: ElementId,
    pub labels: [String; 3],
    /// `μ(a) + μ(b)`.
    pub expected: Value,
    /// `μ(a ⊕ b)`.
    pub found: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdditivityReport {
    /// Tolerance actually applied: zero when every value is an integer.
    pub tolerance: f64,
    pub checked: usize,
    pub violations: Vec<AdditivityViolation>,
}

impl AdditivityReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for AdditivityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "additive on all {} defined pairs", self.checked);
        }
        let v = &self.violations[0];
        write!(
            f,
            "{} of {} pairs violate additivity, first at {} ⊕ {} = {}: {} ≠ {}",
            self.violations.len(),
            self.checked,
            v.labels[0],
            v.labels[1],
            v.labels[2],
            v.expected,
            v.found
        )
    }
}

/// Lists every defined pair `(a, b)` (one orientation, `a ≤ b` by index)
/// with `μ(a ⊕ b) ≠ μ(a) + μ(b)`.
pub fn validate_measure(l: &EffectAlgebra, values: &[Value], tolerance: f64) -> Result<AdditivityReport> {
    if values.len() != l.size() {
        return Err(Error::Precondition(format!(
            "{} values for a carrier of size {}",
            values.len(),
            l.size()
        )));
    }
    let dim = values[0].dim();
    if let Some(v) = values.iter().find(|v| v.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: v.dim(),
        });
    }
    let tolerance = if values.iter().all(Value::is_integral) {
        0.0
    } else {
        tolerance
    };
    let mut report = AdditivityReport {
        tolerance,
        checked: 0,
        violations: Vec::new(),
    };
    for (a, b, c) in l.table().defined_pairs() {
        report.checked += 1;
        let expected = &values[a.0] + &values[b.0];
        if expected.distance_max(&values[c.0]) > tolerance {
            report.violations.push(AdditivityViolation {
                a,
                b,
                sum: c,
                labels: [l.name(a).to_owned(), l.name(b).to_owned(), l.name(c).to_owned()],
                expected,
                found: values[c.0].clone(),
            });
        }
    }
    Ok(report)
}

/// A validated additive map on one algebra.
#[derive(Clone, Debug)]
pub struct Measure {
    algebra: Arc<EffectAlgebra>,
    values: Vec<Value>,
}

impl Measure {
    pub fn new(algebra: Arc<EffectAlgebra>, values: Vec<Value>) -> Result<Self> {
        Self::with_tolerance(algebra, values, DEFAULT_TOLERANCE)
    }

    pub fn with_tolerance(algebra: Arc<EffectAlgebra>, values: Vec<Value>, tolerance: f64) -> Result<Self> {
        let report = validate_measure(&algebra, &values, tolerance)?;
        if !report.is_valid() {
            return Err(Error::NotAdditive(report));
        }
        Ok(Measure { algebra, values })
    }

    pub fn zero(algebra: Arc<EffectAlgebra>, dim: usize) -> Self {
        let values = vec![Value::zeros(dim); algebra.size()];
        Measure { algebra, values }
    }

    pub fn algebra(&self) -> &Arc<EffectAlgebra> {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.values[0].dim()
    }

    #[inline]
    pub fn value(&self, a: ElementId) -> &Value {
        &self.values[a.0]
    }

    #[inline]
    pub fn norm_at(&self, a: ElementId) -> f64 {
        self.values[a.0].norm()
    }

    pub fn values(&self) -> &[Value] {
        &self.values
    }

    pub fn is_integral(&self) -> bool {
        self.values.iter().all(Value::is_integral)
    }

    /// Restriction to a sub-algebra given by the old index of each new element.
    pub fn restricted(&self, algebra: Arc<EffectAlgebra>, kept: &[ElementId]) -> Result<Self> {
        let values = kept.iter().map(|&a| self.values[a.0].clone()).collect();
        Measure::new(algebra, values)
    }
}

/// `max_a ‖μ(a)‖`.
pub fn sup_norm(mu: &Measure) -> f64 {
    mu.algebra().elements().map(|a| mu.norm_at(a)).fold(0.0, f64::max)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtomicBoundReport {
    /// `Σ_b ‖μ(b)‖` over the basis.
    pub bound: f64,
    pub max_norm: f64,
    pub argmax: ElementId,
    /// `max_norm / bound`, or 0 when the bound is 0.
    pub max_ratio: f64,
    /// Elements with `‖μ(a)‖ > bound`.
    pub violations: Vec<ElementId>,
}

/// Checks `‖μ(a)‖ ≤ Σ_{b ∈ basis} ‖μ(b)‖` for every element.
///
/// Only meaningful for RDP algebras with an atomic basis; anything else is
/// rejected as a precondition failure.
pub fn atomic_bound_check(mu: &Measure, basis: &[ElementId]) -> Result<AtomicBoundReport> {
    let l = mu.algebra();
    check_atomic_basis(l, basis)?;
    if !check_rdp(l).holds {
        return Err(Error::Precondition(
            "the algebra does not have the Riesz decomposition property".into(),
        ));
    }
    let bound: f64 = basis.iter().fold(0.0, |acc, &b| acc + mu.norm_at(b));
    let tolerance = if mu.is_integral() && mu.dim() == 1 {
        0.0
    } else {
        DEFAULT_TOLERANCE * basis.len().max(1) as f64
    };
    let mut report = AtomicBoundReport {
        bound,
        max_norm: 0.0,
        argmax: l.zero(),
        max_ratio: 0.0,
        violations: Vec::new(),
    };
    for a in l.elements() {
        let norm = mu.norm_at(a);
        if norm > report.max_norm {
            report.max_norm = norm;
            report.argmax = a;
        }
        if norm > bound + tolerance {
            report.violations.push(a);
        }
    }
    if bound > 0.0 {
        report.max_ratio = report.max_norm / bound;
    }
    Ok(report)
}

/// A finite sequence of measures on one algebra, all of the same dimension.
#[derive(Clone, Debug)]
pub struct MeasureFamily {
    members: Vec<Measure>,
}

impl MeasureFamily {
    pub fn new(members: Vec<Measure>) -> Result<Self> {
        let Some(first) = members.first() else {
            return Err(Error::Precondition("a measure family needs at least one member".into()));
        };
        for m in &members[1..] {
            if !Arc::ptr_eq(m.algebra(), first.algebra()) && m.algebra().table() != first.algebra().table() {
                return Err(Error::Precondition("family members live on different algebras".into()));
            }
            if m.dim() != first.dim() {
                return Err(Error::DimensionMismatch {
                    expected: first.dim(),
                    found: m.dim(),
                });
            }
        }
        Ok(MeasureFamily { members })
    }

    pub fn members(&self) -> &[Measure] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn algebra(&self) -> &Arc<EffectAlgebra> {
        self.members[0].algebra()
    }

    /// `max_i ‖μ_i(a)‖`.
    pub fn pointwise_bound(&self, a: ElementId) -> f64 {
        self.members.iter().map(|m| m.norm_at(a)).fold(0.0, f64::max)
    }

    /// `max_i max_a ‖μ_i(a)‖`.
    pub fn uniform_bound(&self) -> f64 {
        self.members.iter().map(sup_norm).fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pick {
    pub element: ElementId,
    /// Position of the measure in the family.
    pub member: usize,
    pub norm: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SearchStop {
    /// The requested number of picks was reached.
    StepsReached,
    /// No pool element orthogonal to the picks so far reaches the threshold
    /// with a later member.
    Exhausted,
}

/// Picks `b_0, b_1, …` that are jointly orthogonal, with strictly increasing
/// member indices `i_0 < i_1 < …` and `‖μ_{i_k}(b_k)‖ > k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnboundednessWitness {
    pub picks: Vec<Pick>,
    pub stop: SearchStop,
}

/// Greedy search for an orthogonal sequence on which the family is large.
///
/// The k-th pick (counting from zero) must be orthogonal to the sum of the
/// earlier picks, use a member after the previous one and have norm strictly
/// above `k`. Pool elements are tried in order, and for each element the
/// members in increasing order. Returns `None` if not even the first pick
/// exists.
pub fn unboundedness_witness_search(
    family: &MeasureFamily,
    pool: &[ElementId],
    steps: usize,
) -> Option<UnboundednessWitness> {
    let l = family.algebra();
    let mut picks: Vec<Pick> = Vec::new();
    let mut covered = l.zero();
    let mut next_member = 0;
    let stop = loop {
        if picks.len() == steps {
            break SearchStop::StepsReached;
        }
        let threshold = picks.len() as f64;
        let found = pool.iter().find_map(|&b| {
            let joined = l.oplus(covered, b)?;
            (next_member..family.len()).find_map(|i| {
                let norm = family.members[i].norm_at(b);
                (norm > threshold).then_some((joined, Pick { element: b, member: i, norm }))
            })
        });
        match found {
            Some((joined, pick)) => {
                covered = joined;
                next_member = pick.member + 1;
                picks.push(pick);
            }
            None => break SearchStop::Exhausted,
        }
    };
    if picks.is_empty() {
        None
    } else {
        Some(UnboundednessWitness { picks, stop })
    }
}

/// A measure with real coordinates drawn uniformly from `[-10, 10]` on a
/// set of free elements, extended to the whole carrier by additivity.
pub fn random_measure(algebra: &Arc<EffectAlgebra>, dim: usize, seed: u64) -> Result<Measure> {
    let space = MeasureSpace::new(algebra);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = space.sample_real(dim, &mut rng)?;
    Measure::new(algebra.clone(), values)
}

/// Like [`random_measure`] with integer coordinates, so additivity and all
/// derived sums are exact.
pub fn random_integer_measure(algebra: &Arc<EffectAlgebra>, dim: usize, seed: u64) -> Result<Measure> {
    let space = MeasureSpace::new(algebra);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = space.sample_integer(dim, &mut rng)?;
    Measure::new(algebra.clone(), values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{example_4_6, powerset_algebra, scale_algebra};

    fn scalar_values(xs: &[f64]) -> Vec<Value> {
        xs.iter().map(|&x| Value::scalar(x)).collect()
    }

    fn ex46_measure() -> Measure {
        let l = Arc::new(example_4_6());
        // ∅, X⁺, X⁻, Y⁺, Y⁻, ℝ²
        Measure::new(l, scalar_values(&[0.0, 1.0, 1.0, 5.0, -3.0, 2.0])).unwrap()
    }

    #[test]
    fn example_4_6_measure_is_valid_with_sup_norm_5() {
        let mu = ex46_measure();
        assert_eq!(sup_norm(&mu), 5.0);
    }

    #[test]
    fn non_additive_assignment_is_reported() {
        let l = powerset_algebra(2).unwrap();
        // masks: ∅, {1}, {2}, {1,2}
        let report = validate_measure(&l, &scalar_values(&[0.0, 1.0, 1.0, 3.0]), 1e-9).unwrap();
        assert_eq!(report.violations.len(), 1);
        let v = &report.violations[0];
        assert_eq!((v.a, v.b), (ElementId(1), ElementId(2)));
        assert_eq!(report.tolerance, 0.0);
    }

    #[test]
    fn zero_map_is_a_measure() {
        let l = Arc::new(example_4_6());
        let mu = Measure::new(l.clone(), vec![Value::zeros(3); 6]).unwrap();
        assert_eq!(sup_norm(&mu), 0.0);
    }

    #[test]
    fn nonzero_value_at_zero_is_rejected() {
        let l = Arc::new(scale_algebra(1).unwrap());
        assert!(matches!(
            Measure::new(l, scalar_values(&[1.0, 1.0])),
            Err(Error::NotAdditive(_))
        ));
    }

    #[test]
    fn mixed_dimensions_are_rejected() {
        let l = Arc::new(scale_algebra(1).unwrap());
        let values = vec![Value::zeros(1), Value::zeros(2)];
        assert!(matches!(Measure::new(l, values), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn sup_norm_on_powerset_2() {
        let l = Arc::new(powerset_algebra(2).unwrap());
        let mu = Measure::new(l, scalar_values(&[0.0, 3.0, -4.0, -1.0])).unwrap();
        assert_eq!(sup_norm(&mu), 4.0);
    }

    #[test]
    fn atomic_bound_on_powerset_3() {
        let l = Arc::new(powerset_algebra(3).unwrap());
        // value of a subset is the sum of its members
        let values = (0..8u32)
            .map(|mask| Value::scalar((0..3).filter(|i| mask >> i & 1 == 1).map(|i| i as f64 + 1.0).sum()))
            .collect();
        let mu = Measure::new(l, values).unwrap();
        let basis = [ElementId(1), ElementId(2), ElementId(4)];
        let report = atomic_bound_check(&mu, &basis).unwrap();
        assert_eq!(report.bound, 6.0);
        assert_eq!(report.max_norm, 6.0);
        assert_eq!(report.max_ratio, 1.0);
        assert!(report.violations.is_empty());
    }

    #[test]
    fn atomic_bound_on_scale_is_tight() {
        let l = Arc::new(scale_algebra(4).unwrap());
        let c = -2.5;
        let values = (0..5).map(|i| Value::scalar(i as f64 * c)).collect();
        let mu = Measure::new(l, values).unwrap();
        let report = atomic_bound_check(&mu, &[ElementId(1); 4]).unwrap();
        assert_eq!(report.bound, 10.0);
        assert_eq!(report.max_norm, 10.0);
        let zero = Measure::zero(mu.algebra().clone(), 1);
        let report = atomic_bound_check(&zero, &[ElementId(1); 4]).unwrap();
        assert_eq!((report.bound, report.max_norm, report.max_ratio), (0.0, 0.0, 0.0));
    }

    #[test]
    fn atomic_bound_rejects_unmet_hypotheses() {
        let mu = ex46_measure();
        // a valid atomic basis, but the algebra is not RDP
        assert!(matches!(
            atomic_bound_check(&mu, &[ElementId(1), ElementId(2)]),
            Err(Error::Precondition(_))
        ));
        let l = Arc::new(scale_algebra(4).unwrap());
        let zero = Measure::zero(l, 1);
        assert!(atomic_bound_check(&zero, &[ElementId(1); 3]).is_err());
        assert!(atomic_bound_check(&zero, &[ElementId(2), ElementId(2)]).is_err());
    }

    #[test]
    fn family_bounds() {
        let mu = ex46_measure();
        let zero = Measure::zero(mu.algebra().clone(), 1);
        let fam = MeasureFamily::new(vec![mu.clone()]).unwrap();
        assert_eq!(fam.uniform_bound(), sup_norm(&mu));
        assert_eq!(fam.pointwise_bound(ElementId(4)), 3.0);
        let fam = MeasureFamily::new(vec![zero.clone(), zero.clone()]).unwrap();
        assert_eq!(fam.uniform_bound(), 0.0);
        assert!(MeasureFamily::new(vec![]).is_err());
        let other = Measure::zero(Arc::new(scale_algebra(3).unwrap()), 1);
        assert!(MeasureFamily::new(vec![zero, other]).is_err());
    }

    #[test]
    fn witness_search_on_zero_family_is_absent() {
        let l = Arc::new(powerset_algebra(3).unwrap());
        let fam = MeasureFamily::new(vec![Measure::zero(l.clone(), 1); 3]).unwrap();
        let pool: Vec<_> = l.elements().collect();
        assert_eq!(unboundedness_witness_search(&fam, &pool, 5), None);
    }

    #[test]
    fn witness_search_stops_on_a_bounded_measure() {
        let mu = ex46_measure();
        let pool: Vec<_> = mu.algebra().elements().collect();
        let fam = MeasureFamily::new(vec![mu]).unwrap();
        let w = unboundedness_witness_search(&fam, &pool, 10).unwrap();
        // one member, so at most one pick
        assert_eq!(w.picks.len(), 1);
        assert_eq!(w.stop, SearchStop::Exhausted);
        assert_eq!(w.picks[0].element, ElementId(1));
    }

    #[test]
    fn witness_search_builds_orthogonal_picks() {
        // μ_i({i+1}) = i + 1 on powerset {1..4}
        let l = Arc::new(powerset_algebra(4).unwrap());
        let members = (0..4)
            .map(|i| {
                let values = (0..16u32)
                    .map(|mask| Value::scalar(if mask >> i & 1 == 1 { i as f64 + 1.0 } else { 0.0 }))
                    .collect();
                Measure::new(l.clone(), values).unwrap()
            })
            .collect();
        let fam = MeasureFamily::new(members).unwrap();
        let pool = [ElementId(1), ElementId(2), ElementId(4), ElementId(8)];
        let w = unboundedness_witness_search(&fam, &pool, 10).unwrap();
        let got: Vec<_> = w.picks.iter().map(|p| (p.element, p.member, p.norm)).collect();
        assert_eq!(
            got,
            vec![
                (ElementId(1), 0, 1.0),
                (ElementId(2), 1, 2.0),
                (ElementId(4), 2, 3.0),
                (ElementId(8), 3, 4.0)
            ]
        );
        assert_eq!(w.stop, SearchStop::Exhausted);
        let parts: Vec<_> = w.picks.iter().map(|p| p.element).collect();
        assert!(l.orthosum(&parts).is_some());
        let w = unboundedness_witness_search(&fam, &pool, 2).unwrap();
        assert_eq!(w.stop, SearchStop::StepsReached);
    }

    #[test]
    fn random_measures_are_deterministic_and_valid() {
        let l = Arc::new(powerset_algebra(3).unwrap());
        let a = random_measure(&l, 1, 7).unwrap();
        let b = random_measure(&l, 1, 7).unwrap();
        assert_eq!(a.values(), b.values());
        assert_ne!(a.values(), random_measure(&l, 1, 8).unwrap().values());
    }

    #[test]
    fn random_measure_on_scale_is_linear() {
        let l = Arc::new(scale_algebra(5).unwrap());
        let mu = random_measure(&l, 2, 1).unwrap();
        let step = mu.value(ElementId(1)).clone();
        for i in 0..=5 {
            let expected: Vec<f64> = step.coords().iter().map(|x| x * i as f64).collect();
            assert!(mu.value(ElementId(i)).distance_max(&Value::new(expected)) < 1e-9);
        }
    }

    #[test]
    fn random_measure_on_example_4_6_respects_both_splittings() {
        let l = Arc::new(example_4_6());
        let mu = random_integer_measure(&l, 1, 3).unwrap();
        let v = |i: usize| mu.value(ElementId(i)).coords()[0];
        assert_eq!(v(1) + v(2), v(5));
        assert_eq!(v(3) + v(4), v(5));
        assert!(mu.is_integral());
    }
}
