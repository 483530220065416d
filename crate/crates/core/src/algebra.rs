//! Finite effect algebras given by an explicit partial-sum table.
//!
//! An [`EffectAlgebraTable`] is raw data: labels, the two distinguished
//! elements and a dense `size × size` matrix of partial sums. Passing it
//! through [`validate_axioms`] checks commutativity, associativity,
//! orthosupplementation and the zero-one law; [`EffectAlgebra::new`] then
//! precomputes the induced order, the partial difference and the
//! orthosupplement map so every query is a table lookup.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::DEFAULT_MAX_SIZE;

/// Index of an element inside one algebra's carrier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ElementId(pub usize);

impl ElementId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

const UNDEFINED: u32 = u32::MAX;

/// Labels, distinguished elements and the partial sum of a candidate effect
/// algebra. Nothing about the axioms is assumed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EffectAlgebraTable {
    names: Vec<String>,
    zero: ElementId,
    unit: ElementId,
    sum: Vec<u32>,
}

impl EffectAlgebraTable {
    pub fn new(names: Vec<String>, zero: ElementId, unit: ElementId) -> Result<Self> {
        Self::with_limit(names, zero, unit, DEFAULT_MAX_SIZE)
    }

    /// Like [`EffectAlgebraTable::new`] with an explicit carrier size limit.
    pub fn with_limit(
        names: Vec<String>,
        zero: ElementId,
        unit: ElementId,
        limit: usize,
    ) -> Result<Self> {
        let size = names.len();
        if size > limit {
            return Err(Error::TooLarge { size, limit });
        }
        for id in [zero, unit] {
            if id.0 >= size {
                return Err(Error::IndexOutOfRange { index: id.0, size });
            }
        }
        if zero == unit {
            return Err(Error::Degenerate);
        }
        let mut seen = HashMap::with_capacity(size);
        for (i, name) in names.iter().enumerate() {
            if seen.insert(name.as_str(), i).is_some() {
                return Err(Error::DuplicateLabel(name.clone()));
            }
        }
        Ok(Self {
            names,
            zero,
            unit,
            sum: vec![UNDEFINED; size * size],
        })
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, id: ElementId) -> &str {
        &self.names[id.0]
    }

    #[inline]
    pub fn zero(&self) -> ElementId {
        self.zero
    }

    #[inline]
    pub fn unit(&self) -> ElementId {
        self.unit
    }

    pub fn lookup(&self, name: &str) -> Option<ElementId> {
        self.names.iter().position(|n| n == name).map(ElementId)
    }

    #[inline]
    pub fn get(&self, a: ElementId, b: ElementId) -> Option<ElementId> {
        match self.sum[a.0 * self.size() + b.0] {
            UNDEFINED => None,
            c => Some(ElementId(c as usize)),
        }
    }

    fn check_range(&self, id: ElementId) -> Result<()> {
        if id.0 < self.size() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: id.0,
                size: self.size(),
            })
        }
    }

    /// Records `a ⊕ b = c` and its mirror image `b ⊕ a = c`.
    ///
    /// Re-defining a pair with the same result is a no-op; a different result
    /// is a structural error.
    pub fn define(&mut self, a: ElementId, b: ElementId, c: ElementId) -> Result<()> {
        for id in [a, b, c] {
            self.check_range(id)?;
        }
        for (x, y) in [(a, b), (b, a)] {
            if let Some(prev) = self.get(x, y) {
                if prev != c {
                    return Err(Error::ConflictingSum {
                        a: self.names[x.0].clone(),
                        b: self.names[y.0].clone(),
                        first: self.names[prev.0].clone(),
                        second: self.names[c.0].clone(),
                    });
                }
            }
        }
        let n = self.size();
        self.sum[a.0 * n + b.0] = c.0 as u32;
        self.sum[b.0 * n + a.0] = c.0 as u32;
        Ok(())
    }

    /// Writes a single, possibly asymmetric, entry of the sum matrix.
    pub fn set_entry(&mut self, a: ElementId, b: ElementId, c: Option<ElementId>) -> Result<()> {
        self.check_range(a)?;
        self.check_range(b)?;
        if let Some(c) = c {
            self.check_range(c)?;
        }
        let n = self.size();
        self.sum[a.0 * n + b.0] = c.map_or(UNDEFINED, |c| c.0 as u32);
        Ok(())
    }

    pub fn elements(&self) -> impl Iterator<Item = ElementId> + '_ {
        (0..self.size()).map(ElementId)
    }

    /// Every defined sum `(a, b, a ⊕ b)` with `a ≤ b` by index.
    pub fn defined_pairs(&self) -> impl Iterator<Item = (ElementId, ElementId, ElementId)> + '_ {
        let n = self.size();
        (0..n).flat_map(move |a| {
            (a..n).filter_map(move |b| {
                self.get(ElementId(a), ElementId(b))
                    .map(|c| (ElementId(a), ElementId(b), c))
            })
        })
    }

    /// Sub-table on the elements in `keep` (in the given order), keeping every
    /// sum whose operands and result all survive.
    pub fn restricted(&self, keep: &[ElementId]) -> Result<EffectAlgebraTable> {
        let mut remap = vec![None; self.size()];
        for (new, old) in keep.iter().enumerate() {
            self.check_range(*old)?;
            remap[old.0] = Some(ElementId(new));
        }
        let missing = |id: ElementId| Error::Precondition(format!(
            "restriction must keep `{}`",
            self.names[id.0]
        ));
        let zero = remap[self.zero.0].ok_or_else(|| missing(self.zero))?;
        let unit = remap[self.unit.0].ok_or_else(|| missing(self.unit))?;
        let names = keep.iter().map(|id| self.names[id.0].clone()).collect();
        let mut table = EffectAlgebraTable::with_limit(names, zero, unit, usize::MAX)?;
        for &a in keep {
            for &b in keep {
                if let Some(c) = self.get(a, b) {
                    if let (Some(na), Some(nb), Some(nc)) = (remap[a.0], remap[b.0], remap[c.0]) {
                        table.set_entry(na, nb, Some(nc))?;
                    }
                }
            }
        }
        Ok(table)
    }
}

/// Which axiom a violation belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axiom {
    /// Commutativity.
    E1,
    /// Associativity.
    E2,
    /// Orthosupplementation.
    E3,
    /// Zero-one law.
    E4,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub axiom: Axiom,
    pub elements: Vec<ElementId>,
    pub labels: Vec<String>,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    /// Total number of violations found; `violations` keeps at most
    /// [`ValidationReport::MAX_LISTED`] of them.
    pub violation_count: usize,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub const MAX_LISTED: usize = 256;

    fn push(&mut self, table: &EffectAlgebraTable, axiom: Axiom, elements: &[ElementId], detail: String) {
        self.violation_count += 1;
        if self.violations.len() < Self::MAX_LISTED {
            self.violations.push(Violation {
                axiom,
                elements: elements.to_vec(),
                labels: elements.iter().map(|&e| table.name(e).to_owned()).collect(),
                detail,
            });
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.valid {
            return write!(f, "valid");
        }
        write!(f, "{} violation(s)", self.violation_count)?;
        if let Some(v) = self.violations.first() {
            write!(f, ", first: {} at ({}) {}", v.axiom, v.labels.join(", "), v.detail)?;
        }
        Ok(())
    }
}

/// Checks E1–E4 on a table.
///
/// Structural defects (size 1, out-of-range distinguished elements, a pair
/// whose two orientations are defined with different results) are returned
/// as errors; axiom failures are listed in the report.
pub fn validate_axioms(table: &EffectAlgebraTable) -> Result<ValidationReport> {
    let n = table.size();
    if n < 2 || table.zero == table.unit {
        return Err(Error::Degenerate);
    }
    let ids = || (0..n).map(ElementId);
    for a in ids() {
        for b in ids() {
            if let (Some(x), Some(y)) = (table.get(a, b), table.get(b, a)) {
                if x != y {
                    return Err(Error::ConflictingSum {
                        a: table.name(a).to_owned(),
                        b: table.name(b).to_owned(),
                        first: table.name(x).to_owned(),
                        second: table.name(y).to_owned(),
                    });
                }
            }
        }
    }

    let mut report = ValidationReport::default();
    let unit = table.unit;

    for a in ids() {
        for b in ids() {
            if table.get(a, b).is_some() && table.get(b, a).is_none() {
                report.push(table, Axiom::E1, &[a, b], "only one orientation is defined".into());
            }
        }
    }

    // p ⊕ (q ⊕ r) defined forces p ⊕ q and (p ⊕ q) ⊕ r with the same value.
    for q in ids() {
        for r in ids() {
            let Some(qr) = table.get(q, r) else { continue };
            for p in ids() {
                let Some(lhs) = table.get(p, qr) else { continue };
                match table.get(p, q).and_then(|pq| table.get(pq, r)) {
                    Some(rhs) if rhs == lhs => {}
                    Some(rhs) => report.push(
                        table,
                        Axiom::E2,
                        &[p, q, r],
                        format!("(p⊕q)⊕r = {} but p⊕(q⊕r) = {}", table.name(rhs), table.name(lhs)),
                    ),
                    None => report.push(
                        table,
                        Axiom::E2,
                        &[p, q, r],
                        "p⊕(q⊕r) is defined but (p⊕q)⊕r is not".into(),
                    ),
                }
            }
        }
    }

    for a in ids() {
        let count = ids().filter(|&q| table.get(a, q) == Some(unit)).count();
        if count != 1 {
            report.push(table, Axiom::E3, &[a], format!("{count} orthosupplements"));
        }
    }

    for p in ids() {
        if p != table.zero && table.get(unit, p).is_some() {
            report.push(table, Axiom::E4, &[unit, p], "unit ⊕ p defined for p ≠ 0".into());
        }
    }

    report.valid = report.violation_count == 0;
    Ok(report)
}

/// A validated finite effect algebra with precomputed order, difference and
/// orthosupplements. Immutable.
#[derive(Clone, Debug)]
pub struct EffectAlgebra {
    table: EffectAlgebraTable,
    order: Vec<bool>,
    diff: Vec<u32>,
    orthosupp: Vec<ElementId>,
}

impl EffectAlgebra {
    pub fn new(table: EffectAlgebraTable) -> Result<Self> {
        Self::with_limit(table, DEFAULT_MAX_SIZE)
    }

    pub fn with_limit(table: EffectAlgebraTable, limit: usize) -> Result<Self> {
        let n = table.size();
        if n > limit {
            return Err(Error::TooLarge { size: n, limit });
        }
        let report = validate_axioms(&table)?;
        if !report.valid {
            return Err(Error::Axioms(report));
        }

        let mut order = vec![false; n * n];
        let mut diff = vec![UNDEFINED; n * n];
        for b in 0..n {
            for c in 0..n {
                if let Some(a) = table.get(ElementId(b), ElementId(c)) {
                    // b ⊕ c = a, so c ≤ a and a ⊖ c = b
                    order[c * n + a.0] = true;
                    diff[a.0 * n + c] = b as u32;
                }
            }
        }
        let orthosupp = (0..n)
            .map(|a| ElementId(diff[table.unit.0 * n + a] as usize))
            .collect();

        Ok(Self {
            table,
            order,
            diff,
            orthosupp,
        })
    }

    pub fn table(&self) -> &EffectAlgebraTable {
        &self.table
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.table.size()
    }

    #[inline]
    pub fn zero(&self) -> ElementId {
        self.table.zero
    }

    #[inline]
    pub fn unit(&self) -> ElementId {
        self.table.unit
    }

    pub fn name(&self, id: ElementId) -> &str {
        self.table.name(id)
    }

    pub fn names(&self) -> &[String] {
        self.table.names()
    }

    pub fn lookup(&self, name: &str) -> Result<ElementId> {
        self.table
            .lookup(name)
            .ok_or_else(|| Error::UnknownElement(name.to_owned()))
    }

    pub fn elements(&self) -> impl Iterator<Item = ElementId> + '_ {
        self.table.elements()
    }

    #[inline]
    pub fn oplus(&self, a: ElementId, b: ElementId) -> Option<ElementId> {
        self.table.get(a, b)
    }

    #[inline]
    pub fn orthogonal(&self, a: ElementId, b: ElementId) -> bool {
        self.table.get(a, b).is_some()
    }

    /// The unique `b` with `b ⊕ c = a`, if `c ≤ a`.
    #[inline]
    pub fn ominus(&self, a: ElementId, c: ElementId) -> Option<ElementId> {
        match self.diff[a.0 * self.size() + c.0] {
            UNDEFINED => None,
            b => Some(ElementId(b as usize)),
        }
    }

    #[inline]
    pub fn orthosupplement(&self, a: ElementId) -> ElementId {
        self.orthosupp[a.0]
    }

    #[inline]
    pub fn leq(&self, a: ElementId, b: ElementId) -> bool {
        self.order[a.0 * self.size() + b.0]
    }

    #[inline]
    pub fn lt(&self, a: ElementId, b: ElementId) -> bool {
        a != b && self.leq(a, b)
    }

    /// Elements below `a`, in index order.
    pub fn below(&self, a: ElementId) -> impl Iterator<Item = ElementId> + '_ {
        self.elements().filter(move |&b| self.leq(b, a))
    }

    /// Left fold of `⊕` over `parts`; the empty family sums to zero.
    pub fn orthosum(&self, parts: &[ElementId]) -> Option<ElementId> {
        parts
            .iter()
            .try_fold(self.zero(), |acc, &p| self.oplus(acc, p))
    }

    /// Minimal nonzero elements, in index order.
    pub fn atoms(&self) -> Vec<ElementId> {
        let zero = self.zero();
        self.elements()
            .filter(|&a| a != zero)
            .filter(|&a| !self.elements().any(|b| b != zero && self.lt(b, a)))
            .collect()
    }
}

/// Checks on laws that follow from E1–E4. Each returns the first offending
/// tuple, so `None` means the law holds.
pub mod laws {
    use super::{EffectAlgebra, ElementId};

    /// `a ⊕ b = a ⊕ c ⇒ b = c`.
    pub fn cancellation_failure(l: &EffectAlgebra) -> Option<(ElementId, ElementId, ElementId)> {
        for a in l.elements() {
            for b in l.elements() {
                let Some(ab) = l.oplus(a, b) else { continue };
                for c in l.elements() {
                    if c != b && l.oplus(a, c) == Some(ab) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    /// `a ⊕ b = 0 ⇒ a = b = 0`.
    pub fn positivity_failure(l: &EffectAlgebra) -> Option<(ElementId, ElementId)> {
        let zero = l.zero();
        l.elements()
            .flat_map(|a| l.elements().map(move |b| (a, b)))
            .find(|&(a, b)| l.oplus(a, b) == Some(zero) && (a != zero || b != zero))
    }

    /// Recomputes `≤` from its definition and checks it is a partial order
    /// with bottom 0 and top 1 that agrees with the precomputed matrix.
    pub fn order_failure(l: &EffectAlgebra) -> Option<String> {
        let leq = |a: ElementId, b: ElementId| l.elements().any(|r| l.oplus(a, r) == Some(b));
        for a in l.elements() {
            if !leq(a, a) {
                return Some(format!("{} is not reflexive", l.name(a)));
            }
            if !leq(l.zero(), a) || !leq(a, l.unit()) {
                return Some(format!("{} is not between 0 and 1", l.name(a)));
            }
            for b in l.elements() {
                let ab = leq(a, b);
                if ab != l.leq(a, b) {
                    return Some(format!("order matrix disagrees at ({}, {})", l.name(a), l.name(b)));
                }
                if a != b && ab && leq(b, a) {
                    return Some(format!("{} and {} violate antisymmetry", l.name(a), l.name(b)));
                }
                for c in l.elements() {
                    if ab && leq(b, c) && !leq(a, c) {
                        return Some(format!(
                            "transitivity fails at ({}, {}, {})",
                            l.name(a),
                            l.name(b),
                            l.name(c)
                        ));
                    }
                }
            }
        }
        None
    }

    /// `a ⊖ c` is defined exactly when `c ≤ a`, and then `(a ⊖ c) ⊕ c = a`.
    pub fn difference_failure(l: &EffectAlgebra) -> Option<(ElementId, ElementId)> {
        for a in l.elements() {
            for c in l.elements() {
                let ok = match l.ominus(a, c) {
                    Some(b) => l.leq(c, a) && l.oplus(b, c) == Some(a),
                    None => !l.leq(c, a),
                };
                if !ok {
                    return Some((a, c));
                }
            }
        }
        None
    }
}
