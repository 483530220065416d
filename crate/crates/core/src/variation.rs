//! Decompositions of an element and the variation `|μ|` of a measure.
//!
//! A decomposition of `e` is a finite family of nonzero elements whose
//! orthosum is `e`. The variation at `e` is the largest value of
//! `Σ ‖μ(eᵢ)‖` over all decompositions.
//!
//! Two readings of "family" are supported. In [`Mode::Multiset`] a part may
//! repeat (in the scale algebra `½ ⊕ ½ = 1`); in [`Mode::Set`] all parts are
//! distinct elements. Merging two equal parts `p, p` into `p ⊕ p` leaves the
//! sum of norms unchanged because `μ(p ⊕ p) = 2μ(p)`, so both modes give the
//! same variation; they differ only in which decompositions are listed.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::{EffectAlgebra, ElementId};
use crate::error::{Error, Result};
use crate::measure::Measure;
use crate::rdp::check_rdp;
use crate::DEFAULT_TOLERANCE;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Multiset,
    Set,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "multiset" => Ok(Mode::Multiset),
            "set" => Ok(Mode::Set),
            other => Err(format!("unknown mode `{other}` (expected `multiset` or `set`)")),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Multiset => "multiset",
            Mode::Set => "set",
        })
    }
}

/// Nonzero parts, sorted by index, whose orthosum is `target`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub parts: Vec<ElementId>,
    pub target: ElementId,
    pub mode: Mode,
}

/// Depth-first enumeration of decompositions, choosing parts in
/// nondecreasing (multiset) or increasing (set) index order so each family
/// is produced once.
pub struct Decompositions<'a> {
    algebra: &'a EffectAlgebra,
    target: ElementId,
    mode: Mode,
    max_parts: usize,
    parts: Vec<ElementId>,
    // one frame per chosen part plus the root: what is left to cover, and
    // the next candidate index
    frames: Vec<Frame>,
}

struct Frame {
    remaining: ElementId,
    cursor: usize,
    emitted: bool,
}

impl Iterator for Decompositions<'_> {
    type Item = Decomposition;

    fn next(&mut self) -> Option<Decomposition> {
        let l = self.algebra;
        let n = l.size();
        loop {
            let depth = self.parts.len();
            let frame = self.frames.last_mut()?;
            if frame.remaining == l.zero() {
                if !frame.emitted {
                    frame.emitted = true;
                    return Some(Decomposition {
                        parts: self.parts.clone(),
                        target: self.target,
                        mode: self.mode,
                    });
                }
            } else if depth < self.max_parts {
                let remaining = frame.remaining;
                let next = (frame.cursor..n)
                    .map(ElementId)
                    .find_map(|d| (d != l.zero()).then(|| l.ominus(remaining, d).map(|r| (d, r))).flatten());
                if let Some((d, rest)) = next {
                    frame.cursor = d.0 + 1;
                    self.parts.push(d);
                    let cursor = match self.mode {
                        Mode::Multiset => d.0,
                        Mode::Set => d.0 + 1,
                    };
                    self.frames.push(Frame {
                        remaining: rest,
                        cursor,
                        emitted: false,
                    });
                    continue;
                }
            }
            self.frames.pop();
            self.parts.pop();
        }
    }
}

pub fn enumerate_decompositions(l: &EffectAlgebra, e: ElementId, mode: Mode) -> Decompositions<'_> {
    enumerate_decompositions_bounded(l, e, mode, usize::MAX)
}

/// Decompositions with at most `max_parts` parts.
pub fn enumerate_decompositions_bounded(
    l: &EffectAlgebra,
    e: ElementId,
    mode: Mode,
    max_parts: usize,
) -> Decompositions<'_> {
    Decompositions {
        algebra: l,
        target: e,
        mode,
        max_parts,
        parts: Vec::new(),
        frames: vec![Frame {
            remaining: e,
            cursor: 0,
            emitted: false,
        }],
    }
}

/// `Σ ‖μ(p)‖`, accumulated in index order.
pub fn norm_sum(mu: &Measure, parts: &[ElementId]) -> f64 {
    let mut sorted = parts.to_vec();
    sorted.sort_unstable();
    sorted.iter().fold(0.0, |acc, &p| acc + mu.norm_at(p))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VariationResult {
    pub value: f64,
    pub witness: Decomposition,
}

/// The variation at every element, with an optimal decomposition for each.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VariationTable {
    pub mode: Mode,
    pub values: Vec<f64>,
    pub witnesses: Vec<Vec<ElementId>>,
}

impl VariationTable {
    pub fn new(mu: &Measure, mode: Mode) -> Self {
        let witnesses = match mode {
            Mode::Multiset => multiset_witnesses(mu),
            Mode::Set => set_witnesses(mu),
        };
        let values = witnesses.iter().map(|w| norm_sum(mu, w)).collect();
        VariationTable {
            mode,
            values,
            witnesses,
        }
    }

    #[inline]
    pub fn at(&self, e: ElementId) -> f64 {
        self.values[e.0]
    }

    pub fn result(&self, e: ElementId) -> VariationResult {
        VariationResult {
            value: self.values[e.0],
            witness: Decomposition {
                parts: self.witnesses[e.0].clone(),
                target: e,
                mode: self.mode,
            },
        }
    }
}

/// `V(e) = max_{0 ≠ d ≤ e} ‖μ(d)‖ + V(e ⊖ d)`, `V(0) = 0`.
///
/// Any decomposition of `e` is a first part `d` followed by a decomposition
/// of `e ⊖ d`, so the recursion ranges over exactly the multiset
/// decompositions. Ties go to the lowest index `d`.
fn multiset_witnesses(mu: &Measure) -> Vec<Vec<ElementId>> {
    let l = mu.algebra();
    let n = l.size();
    let zero = l.zero();
    // x < e implies strictly fewer elements below x
    let mut order: Vec<ElementId> = l.elements().collect();
    let height: Vec<usize> = order.iter().map(|&e| l.below(e).count()).collect();
    order.sort_by_key(|e| height[e.0]);

    let mut best = vec![0.0f64; n];
    let mut choice = vec![zero; n];
    for &e in &order {
        if e == zero {
            continue;
        }
        let mut top = f64::NEG_INFINITY;
        for d in l.below(e) {
            if d == zero {
                continue;
            }
            let rest = l.ominus(e, d).expect("d ≤ e");
            let v = mu.norm_at(d) + best[rest.0];
            if v > top {
                top = v;
                choice[e.0] = d;
            }
        }
        best[e.0] = top;
    }

    l.elements()
        .map(|e| {
            let mut parts = Vec::new();
            let mut rest = e;
            while rest != zero {
                let d = choice[rest.0];
                parts.push(d);
                rest = l.ominus(rest, d).expect("d ≤ rest");
            }
            parts.sort_unstable();
            parts
        })
        .collect()
}

/// `W(r, m)`: best decomposition of `r` into distinct parts with index `≥ m`.
fn set_witnesses(mu: &Measure) -> Vec<Vec<ElementId>> {
    struct Solver<'a> {
        mu: &'a Measure,
        n: usize,
        // None: not computed; Some(None): infeasible; Some(Some((v, d)))
        memo: Vec<Option<Option<(f64, usize)>>>,
    }

    impl Solver<'_> {
        fn solve(&mut self, r: ElementId, m: usize) -> Option<(f64, usize)> {
            let l = self.mu.algebra().clone();
            if r == l.zero() {
                return Some((0.0, usize::MAX));
            }
            let key = r.0 * (self.n + 1) + m;
            if let Some(cached) = self.memo[key] {
                return cached;
            }
            let mut best: Option<(f64, usize)> = None;
            for d in (m..self.n).map(ElementId) {
                if d == l.zero() {
                    continue;
                }
                let Some(rest) = l.ominus(r, d) else { continue };
                if let Some((tail, _)) = self.solve(rest, d.0 + 1) {
                    let v = self.mu.norm_at(d) + tail;
                    if best.is_none_or(|(b, _)| v > b) {
                        best = Some((v, d.0));
                    }
                }
            }
            self.memo[key] = Some(best);
            best
        }
    }

    let l = mu.algebra();
    let n = l.size();
    let mut solver = Solver {
        mu,
        n,
        memo: vec![None; n * (n + 1)],
    };
    l.elements()
        .map(|e| {
            let mut parts = Vec::new();
            let (mut rest, mut m) = (e, 0);
            while rest != l.zero() {
                let (_, d) = solver.solve(rest, m).expect("every element is its own decomposition");
                parts.push(ElementId(d));
                rest = l.ominus(rest, ElementId(d)).expect("d ≤ rest");
                m = d + 1;
            }
            parts
        })
        .collect()
}

/// `|μ|(e)` with an optimal decomposition.
pub fn variation(mu: &Measure, e: ElementId, mode: Mode) -> VariationResult {
    VariationTable::new(mu, mode).result(e)
}

/// Largest carrier accepted by [`variation_bruteforce`].
pub const BRUTEFORCE_MAX_SIZE: usize = 64;

/// `|μ|(e)` as a maximum over the full enumeration of decompositions.
pub fn variation_bruteforce(mu: &Measure, e: ElementId, mode: Mode) -> Result<f64> {
    let l = mu.algebra();
    if l.size() > BRUTEFORCE_MAX_SIZE {
        return Err(Error::TooLarge {
            size: l.size(),
            limit: BRUTEFORCE_MAX_SIZE,
        });
    }
    Ok(enumerate_decompositions(l, e, mode)
        .map(|d| norm_sum(mu, &d.parts))
        .fold(f64::NEG_INFINITY, f64::max))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Passed,
    Failed,
    Skipped,
}

/// The elements at which an inequality `lhs ≤ rhs` is tightest, loosest or
/// violated, depending on the check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Extremal {
    pub elements: Vec<ElementId>,
    pub labels: Vec<String>,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub id: String,
    pub statement: String,
    pub status: CheckStatus,
    pub checked: usize,
    /// For a failed check the worst violation; otherwise the instance with
    /// the largest slack `rhs − lhs`.
    pub extremal: Option<Extremal>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub mode: Mode,
    pub rdp: bool,
    pub tolerance: f64,
    /// `|μ|` at every element, in carrier order.
    pub variation: Vec<f64>,
    pub checks: Vec<CheckEntry>,
    /// Whether `|μ|` is itself additive.
    pub variation_is_measure: bool,
    /// First orthogonal pair `(e, f)` with `|μ|(e ⊕ f) ≠ |μ|(e) + |μ|(f)`;
    /// `lhs` is `|μ|(e) + |μ|(f)`, `rhs` is `|μ|(e ⊕ f)`.
    pub non_additive_at: Option<Extremal>,
}

impl TheoremReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Failed)
    }

    pub fn check(&self, id: &str) -> Option<&CheckEntry> {
        self.checks.iter().find(|c| c.id == id)
    }
}

impl fmt::Display for TheoremReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "mode: {}  rdp: {}  tolerance: {:e}",
            self.mode,
            if self.rdp { "holds" } else { "fails" },
            self.tolerance
        )?;
        for c in &self.checks {
            let status = match c.status {
                CheckStatus::Passed => "PASS",
                CheckStatus::Failed => "FAIL",
                CheckStatus::Skipped => "SKIP",
            };
            write!(f, "[{status}] {:<22} {} ({} instances)", c.id, c.statement, c.checked)?;
            if let Some(x) = &c.extremal {
                write!(f, "; extremal at ({}): {} vs {}", x.labels.join(", "), x.lhs, x.rhs)?;
            }
            writeln!(f)?;
        }
        match &self.non_additive_at {
            None => writeln!(f, "|μ| is additive"),
            Some(x) => writeln!(
                f,
                "|μ| is not additive: |μ|({}) + |μ|({}) = {} but |μ|({} ⊕ {}) = {}",
                x.labels[0], x.labels[1], x.lhs, x.labels[0], x.labels[1], x.rhs
            ),
        }
    }
}

/// Accumulates instances of one inequality `lhs ≤ rhs + tolerance`.
struct Inequality<'a> {
    l: &'a EffectAlgebra,
    id: &'static str,
    statement: &'static str,
    tolerance: f64,
    checked: usize,
    worst: Option<(f64, Extremal)>,
    loosest: Option<(f64, Extremal)>,
}

impl<'a> Inequality<'a> {
    fn new(l: &'a EffectAlgebra, id: &'static str, statement: &'static str, tolerance: f64) -> Self {
        Inequality {
            l,
            id,
            statement,
            tolerance,
            checked: 0,
            worst: None,
            loosest: None,
        }
    }

    fn record(&mut self, elements: &[ElementId], lhs: f64, rhs: f64) {
        self.checked += 1;
        let gap = lhs - rhs;
        let make = || Extremal {
            elements: elements.to_vec(),
            labels: elements.iter().map(|&e| self.l.name(e).to_owned()).collect(),
            lhs,
            rhs,
        };
        if gap > self.tolerance {
            if self.worst.as_ref().is_none_or(|(g, _)| gap > *g) {
                self.worst = Some((gap, make()));
            }
        } else if self.loosest.as_ref().is_none_or(|(g, _)| -gap > *g) {
            self.loosest = Some((-gap, make()));
        }
    }

    fn finish(self) -> CheckEntry {
        let (status, extremal) = match (self.worst, self.loosest) {
            (Some((_, w)), _) => (CheckStatus::Failed, Some(w)),
            (None, l) => (CheckStatus::Passed, l.map(|(_, x)| x)),
        };
        CheckEntry {
            id: self.id.to_owned(),
            statement: self.statement.to_owned(),
            status,
            checked: self.checked,
            extremal,
        }
    }
}

fn skipped(id: &str, statement: &str) -> CheckEntry {
    CheckEntry {
        id: id.to_owned(),
        statement: statement.to_owned(),
        status: CheckStatus::Skipped,
        checked: 0,
        extremal: None,
    }
}

/// Largest orthogonal families enumerated by the partial-sum check.
pub const PARTIAL_SUM_MAX_PARTS: usize = 5;

pub fn check_variation_theorems(mu: &Measure, mode: Mode) -> TheoremReport {
    check_variation_theorems_with(mu, mode, DEFAULT_TOLERANCE)
}

/// Evaluates the structural properties of `|μ|` on every applicable
/// instance:
///
/// * super-additivity `|μ|(e) + |μ|(f) ≤ |μ|(e ⊕ f)`;
/// * sub-additivity `|μ|(e ⊕ f) ≤ |μ|(e) + |μ|(f)`, on RDP algebras only;
/// * `‖μ(a)‖ ≤ |μ|(a)` and monotonicity of `|μ|`;
/// * `sup_{b≤a} ‖μ(b)‖ ≤ |μ|(a) ≤ 4 sup_{b≤a} ‖μ(b)‖`, the upper bound for
///   real and planar values only;
/// * `Σ‖μ(aᵢ)‖ ≤ |μ|(⊕aᵢ) ≤ |μ|(1)` for orthogonal families of up to
///   [`PARTIAL_SUM_MAX_PARTS`] parts.
///
/// Comparisons are exact for integer scalar measures.
pub fn check_variation_theorems_with(mu: &Measure, mode: Mode, tolerance: f64) -> TheoremReport {
    let l = mu.algebra().as_ref();
    let tol = if mu.is_integral() && mu.dim() == 1 { 0.0 } else { tolerance };
    let table = VariationTable::new(mu, mode);
    let v = |e: ElementId| table.at(e);
    let rdp = check_rdp(l).holds;

    let mut sup = Inequality::new(l, "superadditivity", "|μ|(e) + |μ|(f) ≤ |μ|(e⊕f)", tol);
    let mut sub = Inequality::new(l, "subadditivity", "|μ|(e⊕f) ≤ |μ|(e) + |μ|(f)", tol);
    let mut non_additive_at = None;
    for (e, f, ef) in l.table().defined_pairs() {
        let (sum, joined) = (v(e) + v(f), v(ef));
        sup.record(&[e, f], sum, joined);
        sub.record(&[e, f], joined, sum);
        if non_additive_at.is_none() && (sum - joined).abs() > tol {
            non_additive_at = Some(Extremal {
                elements: vec![e, f],
                labels: vec![l.name(e).to_owned(), l.name(f).to_owned()],
                lhs: sum,
                rhs: joined,
            });
        }
    }

    let mut norm = Inequality::new(l, "norm_below_variation", "‖μ(a)‖ ≤ |μ|(a)", tol);
    let mut mono = Inequality::new(l, "monotonicity", "a ≤ b ⇒ |μ|(a) ≤ |μ|(b)", tol);
    let mut lower = Inequality::new(l, "sandwich_lower", "sup_{b≤a} ‖μ(b)‖ ≤ |μ|(a)", tol);
    let mut upper = Inequality::new(l, "sandwich_upper", "|μ|(a) ≤ 4 sup_{b≤a} ‖μ(b)‖", tol);
    for a in l.elements() {
        norm.record(&[a], mu.norm_at(a), v(a));
        for b in l.elements().filter(|&b| l.leq(a, b)) {
            mono.record(&[a, b], v(a), v(b));
        }
        let local_sup = l.below(a).map(|b| mu.norm_at(b)).fold(0.0, f64::max);
        lower.record(&[a], local_sup, v(a));
        upper.record(&[a], v(a), 4.0 * local_sup);
    }

    let ptol = tol * PARTIAL_SUM_MAX_PARTS as f64;
    let mut partial = Inequality::new(l, "partial_sums", "Σ‖μ(aᵢ)‖ ≤ |μ|(⊕aᵢ) ≤ |μ|(1)", ptol);
    let top = v(l.unit());
    for e in l.elements() {
        for d in enumerate_decompositions_bounded(l, e, Mode::Multiset, PARTIAL_SUM_MAX_PARTS) {
            let s = norm_sum(mu, &d.parts);
            let parts = if d.parts.is_empty() { vec![e] } else { d.parts };
            partial.record(&parts, s, v(e));
            partial.record(&parts, v(e), top);
        }
    }

    let mut checks = vec![sup.finish()];
    checks.push(if rdp {
        sub.finish()
    } else {
        skipped("subadditivity", "|μ|(e⊕f) ≤ |μ|(e) + |μ|(f) (requires RDP)")
    });
    checks.push(norm.finish());
    checks.push(mono.finish());
    checks.push(lower.finish());
    checks.push(if mu.dim() <= 2 {
        upper.finish()
    } else {
        skipped("sandwich_upper", "|μ|(a) ≤ 4 sup_{b≤a} ‖μ(b)‖ (real and planar values only)")
    });
    checks.push(partial.finish());

    TheoremReport {
        mode,
        rdp,
        tolerance: tol,
        variation: table.values,
        checks,
        variation_is_measure: non_additive_at.is_none(),
        non_additive_at,
    }
}
