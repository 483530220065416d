//! Seeded generation of effect algebra tables that differ from the standard
//! constructions: relabelled carriers, random families of sets and single
//! entry edits. Only tables passing axiom validation are returned.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{validate_axioms, EffectAlgebra, EffectAlgebraTable, ElementId};
use crate::constructions::{example_4_6, powerset_algebra, scale_algebra, set_family_algebra, SetFamilySpec};
use crate::error::{Error, Result};

/// The same partial sum with element `i` renamed to position `perm[i]`.
pub fn permuted(table: &EffectAlgebraTable, perm: &[usize]) -> Result<EffectAlgebraTable> {
    let n = table.size();
    let mut seen = vec![false; n];
    if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
        return Err(Error::Precondition(format!("not a permutation of 0..{n}")));
    }
    let mut names = vec![String::new(); n];
    for (i, &p) in perm.iter().enumerate() {
        names[p] = table.names()[i].clone();
    }
    let map = |e: ElementId| ElementId(perm[e.0]);
    let mut out = EffectAlgebraTable::with_limit(names, map(table.zero()), map(table.unit()), usize::MAX)?;
    for a in table.elements() {
        for b in table.elements() {
            out.set_entry(map(a), map(b), table.get(a, b).map(map))?;
        }
    }
    Ok(out)
}

/// A family on `points` points generated by a few random subsets, closed
/// under complement. It need not satisfy the axioms.
pub fn random_set_family<R: Rng>(rng: &mut R, points: usize) -> SetFamilySpec {
    let full: u32 = (1 << points) - 1;
    let mut masks = vec![0, full];
    for _ in 0..rng.gen_range(1..=points + 1) {
        let m = rng.gen_range(0..=full);
        for x in [m, full & !m] {
            if !masks.contains(&x) {
                masks.push(x);
            }
        }
    }
    masks.sort_unstable();
    let universe: Vec<String> = (1..=points).map(|i| format!("x{i}")).collect();
    let members = masks
        .iter()
        .map(|&m| (0..points).filter(|i| m >> i & 1 == 1).map(|i| universe[i].clone()).collect())
        .collect();
    SetFamilySpec {
        universe,
        members,
        labels: None,
    }
}

/// How a mutated table was obtained.
#[derive(Clone, Debug)]
pub struct MutatedTable {
    pub origin: String,
    pub table: EffectAlgebraTable,
}

fn seeds() -> Vec<(String, EffectAlgebra)> {
    let mut out = vec![("example-4.6".to_owned(), example_4_6())];
    for n in 1..=4 {
        out.push((format!("powerset({n})"), powerset_algebra(n).expect("small powerset")));
    }
    for k in 1..=8 {
        out.push((format!("scale({k})"), scale_algebra(k).expect("small scale")));
    }
    out
}

/// Up to `count` tables that pass validation, drawn deterministically from
/// `seed`. Candidates are relabellings of standard algebras, random set
/// families, and standard tables with one unordered pair removed or
/// redirected. At most `64 · count` candidates are tried.
pub fn mutated_tables(seed: u64, count: usize) -> Vec<MutatedTable> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bases = seeds();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count.saturating_mul(64) {
        if out.len() == count {
            break;
        }
        let (base_name, base) = bases.choose(&mut rng).expect("nonempty");
        let candidate = match rng.gen_range(0..4) {
            0 => {
                let mut perm: Vec<usize> = (0..base.size()).collect();
                perm.shuffle(&mut rng);
                permuted(base.table(), &perm).ok().map(|t| (format!("{base_name} relabelled {perm:?}"), t))
            }
            1 => {
                let points = rng.gen_range(2..=5);
                let spec = random_set_family(&mut rng, points);
                set_family_algebra(&spec).ok().map(|l| {
                    let members: Vec<String> = l.names().to_vec();
                    (format!("set family {{{}}}", members.join(", ")), l.table().clone())
                })
            }
            2 => {
                let pairs: Vec<_> = base.table().defined_pairs().collect();
                let &(a, b, _) = pairs.choose(&mut rng).expect("0 ⊕ 0 is always defined");
                let mut t = base.table().clone();
                t.set_entry(a, b, None).expect("in range");
                t.set_entry(b, a, None).expect("in range");
                Some((format!("{base_name} without {} ⊕ {}", base.name(a), base.name(b)), t))
            }
            _ => {
                let n = base.size();
                let (a, b, c) = (
                    ElementId(rng.gen_range(0..n)),
                    ElementId(rng.gen_range(0..n)),
                    ElementId(rng.gen_range(0..n)),
                );
                let mut t = base.table().clone();
                t.set_entry(a, b, Some(c)).expect("in range");
                t.set_entry(b, a, Some(c)).expect("in range");
                Some((
                    format!("{base_name} with {} ⊕ {} = {}", base.name(a), base.name(b), base.name(c)),
                    t,
                ))
            }
        };
        if let Some((origin, table)) = candidate {
            if validate_axioms(&table).is_ok_and(|r| r.valid) {
                out.push(MutatedTable { origin, table });
            }
        }
    }
    out
}
