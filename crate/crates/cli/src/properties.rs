//! The seeded invariant suite: standard and mutated algebras, random
//! measures on each, and every structural check run against them.
//!
//! A failure is minimised by repeatedly deleting a pair `{a, a⊥}` from the
//! carrier while the restricted table still validates and still fails.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use clap::Args;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use effana::algebra::{laws, validate_axioms};
use effana::constructions::{atomic_basis, example_4_6, powerset_algebra_with_limit, scale_algebra_with_limit};
use effana::format::{AlgebraFile, AlgebraRef, MeasureFile};
use effana::measure::{atomic_bound_check, random_integer_measure, random_measure, validate_measure};
use effana::mutate::mutated_tables;
use effana::rdp::{check_rdp, rdp_decompose};
use effana::symbolic;
use effana::variation::{
    check_variation_theorems_with, enumerate_decompositions_bounded, variation_bruteforce, CheckStatus,
    VariationTable,
};
use effana::{EffectAlgebra, ElementId, Measure, Mode, Value};

use crate::{csv_string, to_json, Cli, CmdResult, Format, Outcome};

#[derive(Args, Debug)]
pub struct PropertiesArgs {
    /// Sizes n for powerset(n), scale(n) and the prime-power restriction.
    #[arg(long, value_delimiter = ',', default_values_t = vec![1, 2, 3, 4])]
    pub sizes: Vec<usize>,
    /// Random measures per algebra.
    #[arg(long, default_value_t = 10)]
    pub measures: usize,
    /// Randomly mutated tables added to the algebra matrix.
    #[arg(long, default_value_t = 20)]
    pub mutated: usize,
    /// Report the variation at the unit one too high, to exercise failure
    /// reporting.
    #[arg(long, hide = true)]
    pub inject_fault: bool,
}

/// Carriers at most this large are compared against brute-force
/// enumeration in multiset mode.
const ORACLE_MAX_SIZE: usize = 16;
/// Same, for set mode.
const SET_ORACLE_MAX_SIZE: usize = 8;

struct Env {
    tolerance: f64,
    inject_fault: bool,
}

impl Env {
    fn tol(&self, mu: &Measure) -> f64 {
        if mu.is_integral() {
            0.0
        } else {
            self.tolerance
        }
    }
}

type AlgebraCheck = fn(&EffectAlgebra, &mut ChaCha8Rng) -> bool;
type MeasureCheck = fn(&Measure, &Env) -> bool;

fn algebra_checks() -> Vec<(&'static str, AlgebraCheck)> {
    vec![
        ("algebra.axioms", |l, _| validate_axioms(l.table()).is_ok_and(|r| r.valid)),
        ("algebra.cancellation", |l, _| laws::cancellation_failure(l).is_none()),
        ("algebra.positivity", |l, _| laws::positivity_failure(l).is_none()),
        ("algebra.order", |l, _| laws::order_failure(l).is_none()),
        ("algebra.difference", |l, _| laws::difference_failure(l).is_none()),
        ("algebra.orthosum_permutation", orthosum_permutation),
        ("rdp.decompose", rdp_decompositions),
    ]
}

fn measure_checks() -> Vec<(&'static str, MeasureCheck)> {
    vec![
        ("measure.additive", |mu, env| {
            validate_measure(mu.algebra(), mu.values(), env.tol(mu)).is_ok_and(|r| r.is_valid())
        }),
        ("measure.finite_additivity", finite_additivity),
        ("measure.atomic_bound", atomic_bound),
        ("variation.dp_equals_bruteforce", dp_equals_bruteforce),
        ("variation.modes_agree", |mu, env| {
            let a = VariationTable::new(mu, Mode::Multiset);
            let b = VariationTable::new(mu, Mode::Set);
            a.values.iter().zip(&b.values).all(|(x, y)| (x - y).abs() <= env.tolerance)
        }),
        ("variation.additive_on_rdp", |mu, env| {
            !check_rdp(mu.algebra()).holds
                || check_variation_theorems_with(mu, Mode::Multiset, env.tolerance).variation_is_measure
        }),
    ]
}

const THEOREM_IDS: [&str; 7] = [
    "superadditivity",
    "subadditivity",
    "norm_below_variation",
    "monotonicity",
    "sandwich_lower",
    "sandwich_upper",
    "partial_sums",
];

fn theorem_check(id: &str, mu: &Measure, env: &Env, mode: Mode) -> Option<bool> {
    let report = check_variation_theorems_with(mu, mode, env.tolerance);
    let entry = report.check(id)?;
    match entry.status {
        CheckStatus::Skipped => None,
        s => Some(s == CheckStatus::Passed),
    }
}

fn orthosum_permutation(l: &EffectAlgebra, rng: &mut ChaCha8Rng) -> bool {
    l.elements().all(|e| {
        enumerate_decompositions_bounded(l, e, Mode::Multiset, 4).take(64).all(|d| {
            let mut parts = d.parts;
            (0..3).all(|_| {
                parts.shuffle(rng);
                l.orthosum(&parts) == Some(e)
            })
        })
    })
}

fn rdp_decompositions(l: &EffectAlgebra, _: &mut ChaCha8Rng) -> bool {
    if !check_rdp(l).holds {
        return true;
    }
    l.elements().all(|e| {
        enumerate_decompositions_bounded(l, e, Mode::Multiset, 3).take(32).all(|d| {
            l.below(e).all(|c| {
                rdp_decompose(l, c, &d.parts).is_ok_and(|xs| {
                    xs.is_some_and(|xs| {
                        l.orthosum(&xs) == Some(c) && xs.iter().zip(&d.parts).all(|(x, p)| l.leq(*x, *p))
                    })
                })
            })
        })
    })
}

fn finite_additivity(mu: &Measure, env: &Env) -> bool {
    let l = mu.algebra();
    let tol = 5.0 * env.tol(mu);
    l.elements().all(|e| {
        enumerate_decompositions_bounded(l, e, Mode::Multiset, 5).all(|d| {
            let total = d
                .parts
                .iter()
                .fold(Value::zeros(mu.dim()), |acc, &p| &acc + mu.value(p));
            total.distance_max(mu.value(e)) <= tol
        })
    })
}

fn atomic_bound(mu: &Measure, _: &Env) -> bool {
    let l = mu.algebra();
    if !check_rdp(l).holds {
        return true;
    }
    match atomic_basis(l) {
        None => true,
        Some(basis) => atomic_bound_check(mu, &basis).is_ok_and(|r| r.violations.is_empty()),
    }
}

fn dp_equals_bruteforce(mu: &Measure, env: &Env) -> bool {
    let l = mu.algebra();
    if l.size() > ORACLE_MAX_SIZE {
        return true;
    }
    let modes: &[Mode] = if l.size() <= SET_ORACLE_MAX_SIZE {
        &[Mode::Multiset, Mode::Set]
    } else {
        &[Mode::Multiset]
    };
    modes.iter().all(|&mode| {
        let table = VariationTable::new(mu, mode);
        l.elements().all(|e| {
            let mut dp = table.at(e);
            if env.inject_fault && e == l.unit() {
                dp += 1.0;
            }
            variation_bruteforce(mu, e, mode).is_ok_and(|b| (dp - b).abs() <= 1e-9)
        })
    })
}

struct Tally {
    passed: usize,
    failed: usize,
}

struct FirstFailure {
    check: String,
    origin: String,
    measure: Measure,
}

fn algebra_matrix(args: &PropertiesArgs, seed: u64, limit: usize) -> Vec<(String, EffectAlgebra)> {
    let mut out = vec![("example-4.6".to_owned(), example_4_6())];
    for &n in &args.sizes {
        if let Ok(l) = powerset_algebra_with_limit(n, limit) {
            out.push((format!("powerset({n})"), l));
        }
        if let Ok(l) = scale_algebra_with_limit(n, limit) {
            out.push((format!("scale({n})"), l));
        }
        if let Ok(r) = symbolic::restriction_with_limit(n as u32, limit) {
            out.push((format!("prime-power restriction({n})"), r.algebra().as_ref().clone()));
        }
    }
    for m in mutated_tables(seed, args.mutated) {
        if let Ok(l) = EffectAlgebra::with_limit(m.table, limit) {
            out.push((m.origin, l));
        }
    }
    out
}

pub fn run(cli: &Cli, args: &PropertiesArgs) -> CmdResult {
    let env = Env {
        tolerance: cli.tolerance,
        inject_fault: args.inject_fault,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let algebras = algebra_matrix(args, cli.seed, cli.max_size);
    let mut tallies: BTreeMap<String, Tally> = BTreeMap::new();
    let mut first: Option<FirstFailure> = None;
    let mut record = |id: &str, ok: bool, origin: &str, mu: &Measure, first: &mut Option<FirstFailure>| {
        let t = tallies.entry(id.to_owned()).or_insert(Tally { passed: 0, failed: 0 });
        if ok {
            t.passed += 1;
        } else {
            t.failed += 1;
            if first.is_none() {
                *first = Some(FirstFailure {
                    check: id.to_owned(),
                    origin: origin.to_owned(),
                    measure: mu.clone(),
                });
            }
        }
    };

    for (origin, l) in &algebras {
        let l = Arc::new(l.clone());
        let zero = Measure::zero(l.clone(), 1);
        for (id, check) in algebra_checks() {
            let ok = check(&l, &mut rng);
            record(id, ok, origin, &zero, &mut first);
        }
        for j in 0..args.measures {
            let seed: u64 = rng.gen();
            let dim = 1 + j % 3;
            let made = if j % 2 == 0 {
                random_integer_measure(&l, dim, seed)
            } else {
                random_measure(&l, dim, seed)
            };
            let mu = match made {
                Ok(mu) => mu,
                Err(_) => {
                    record("measure.generate", false, origin, &zero, &mut first);
                    continue;
                }
            };
            record("measure.generate", true, origin, &mu, &mut first);
            for (id, check) in measure_checks() {
                let ok = check(&mu, &env);
                record(id, ok, origin, &mu, &mut first);
            }
            for mode in [Mode::Multiset, Mode::Set] {
                for id in THEOREM_IDS {
                    if let Some(ok) = theorem_check(id, &mu, &env, mode) {
                        record(&format!("theorems.{id}.{mode}"), ok, origin, &mu, &mut first);
                    }
                }
            }
        }
    }

    let total: usize = tallies.values().map(|t| t.passed + t.failed).sum();
    let failed: usize = tallies.values().map(|t| t.failed).sum();
    let minimized = first.as_ref().map(|f| minimize(f, &env, &mut rng));

    let output = match cli.format {
        Format::Csv => {
            let mut rows = vec![vec!["check".to_owned(), "passed".to_owned(), "failed".to_owned()]];
            rows.extend(
                tallies
                    .iter()
                    .map(|(id, t)| vec![id.clone(), t.passed.to_string(), t.failed.to_string()]),
            );
            csv_string(&rows)
        }
        Format::Json => to_json(&json!({
            "seed": cli.seed,
            "algebras": algebras.len(),
            "checks": tallies.iter().map(|(id, t)| json!({"check": id, "passed": t.passed, "failed": t.failed}))
                .collect::<Vec<_>>(),
            "total": total,
            "failed": failed,
            "counterexample": minimized.as_ref().map(|(f, mu)| json!({
                "check": f.check,
                "origin": f.origin,
                "algebra": AlgebraFile::from_algebra(mu.algebra()),
                "measure": MeasureFile::from_measure(mu, AlgebraRef::Inline(AlgebraFile::from_algebra(mu.algebra()))),
            })),
        })),
        Format::Text => {
            let mut s = String::new();
            let sizes: Vec<String> = args.sizes.iter().map(|n| n.to_string()).collect();
            writeln!(
                s,
                "seed {}, sizes {}, {} algebras, {} measures each",
                cli.seed,
                sizes.join(","),
                algebras.len(),
                args.measures
            )
            .unwrap();
            for (id, t) in &tallies {
                let status = if t.failed == 0 { "PASS" } else { "FAIL" };
                writeln!(s, "{status} {id:<40} {}/{}", t.passed, t.passed + t.failed).unwrap();
            }
            writeln!(s, "total: {total} checks, {failed} failed").unwrap();
            if let Some((f, mu)) = &minimized {
                let l = mu.algebra();
                writeln!(
                    s,
                    "counterexample for {} from {}, minimised to {} elements:",
                    f.check,
                    f.origin,
                    l.size()
                )
                .unwrap();
                writeln!(s, "{}", AlgebraFile::from_algebra(l).to_json()).unwrap();
                writeln!(s, "{}", MeasureFile::from_measure(mu, AlgebraRef::Path("algebra.json".into())).to_json())
                    .unwrap();
            }
            s
        }
    };
    Ok(Outcome::with_code(output, failed > 0))
}

/// Re-evaluates check `id` on a measure.
fn still_fails(id: &str, mu: &Measure, env: &Env, rng: &mut ChaCha8Rng) -> bool {
    if let Some((_, check)) = algebra_checks().into_iter().find(|(c, _)| *c == id) {
        return !check(mu.algebra(), rng);
    }
    if let Some((_, check)) = measure_checks().into_iter().find(|(c, _)| *c == id) {
        return !check(mu, env);
    }
    if let Some(rest) = id.strip_prefix("theorems.") {
        if let Some((name, mode)) = rest.rsplit_once('.') {
            if let Ok(mode) = mode.parse::<Mode>() {
                return theorem_check(name, mu, env, mode) == Some(false);
            }
        }
    }
    false
}

fn minimize<'a>(f: &'a FirstFailure, env: &Env, rng: &mut ChaCha8Rng) -> (&'a FirstFailure, Measure) {
    let mut mu = f.measure.clone();
    'shrink: loop {
        let l = mu.algebra().clone();
        for a in l.elements() {
            let b = l.orthosupplement(a);
            if a == l.zero() || a == l.unit() || b < a {
                continue;
            }
            let keep: Vec<ElementId> = l.elements().filter(|&x| x != a && x != b).collect();
            let Ok(table) = l.table().restricted(&keep) else { continue };
            let Ok(smaller) = EffectAlgebra::new(table) else { continue };
            let Ok(candidate) = mu.restricted(Arc::new(smaller), &keep) else { continue };
            if still_fails(&f.check, &candidate, env, rng) {
                mu = candidate;
                continue 'shrink;
            }
        }
        break;
    }
    (f, mu)
}
