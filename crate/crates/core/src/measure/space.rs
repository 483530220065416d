use std::collections::BTreeMap;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;

use crate::algebra::{EffectAlgebra, ElementId};
use crate::error::{Error, Result};
use crate::measure::Value;

type Q = Ratio<i128>;

/// The linear space of real measures on an algebra, described by a set of
/// free elements and, for every element, its value as a rational
/// combination of the free ones.
///
/// Built by Gauss–Jordan elimination of the constraints
/// `μ(a) + μ(b) − μ(a ⊕ b) = 0`. Columns are ordered with atoms last so that
/// atoms are preferred as free variables.
#[derive(Clone, Debug)]
pub struct MeasureSpace {
    free: Vec<ElementId>,
    /// Per element: (free variable position, coefficient).
    expressions: Vec<Vec<(usize, Q)>>,
}

type Row = BTreeMap<usize, Q>;

impl MeasureSpace {
    pub fn new(l: &EffectAlgebra) -> Self {
        let zero = l.zero();
        let atoms = l.atoms();
        let mut columns: Vec<ElementId> = l
            .elements()
            .filter(|&a| a != zero && !atoms.contains(&a))
            .collect();
        columns.extend(atoms.iter().copied());
        let mut position = vec![usize::MAX; l.size()];
        for (p, a) in columns.iter().enumerate() {
            position[a.0] = p;
        }

        // pivot column → row in reduced form
        let mut pivots: BTreeMap<usize, Row> = BTreeMap::new();
        for (a, b, c) in l.table().defined_pairs() {
            if a == zero || b == zero {
                continue;
            }
            let mut row = Row::new();
            for (id, coef) in [(a, 1), (b, 1), (c, -1)] {
                *row.entry(position[id.0]).or_insert_with(Q::zero) += Q::from_integer(coef);
            }
            row.retain(|_, v| !v.is_zero());
            let row = reduce(row, &pivots);
            let Some((&lead, &coef)) = row.iter().next() else { continue };
            let row: Row = row.into_iter().map(|(k, v)| (k, v / coef)).collect();
            for other in pivots.values_mut() {
                if let Some(f) = other.get(&lead).copied() {
                    axpy(other, -f, &row);
                }
            }
            pivots.insert(lead, row);
        }

        let free_positions: Vec<usize> = (0..columns.len()).filter(|p| !pivots.contains_key(p)).collect();
        let free_index: BTreeMap<usize, usize> =
            free_positions.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let free = free_positions.iter().map(|&p| columns[p]).collect();

        let expressions = l
            .elements()
            .map(|a| {
                if a == zero {
                    return Vec::new();
                }
                let p = position[a.0];
                match pivots.get(&p) {
                    Some(row) => row
                        .iter()
                        .filter(|(&k, _)| k != p)
                        .map(|(k, v)| (free_index[k], -*v))
                        .collect(),
                    None => vec![(free_index[&p], Q::from_integer(1))],
                }
            })
            .collect();

        MeasureSpace { free, expressions }
    }

    /// Elements whose values can be chosen freely.
    pub fn free_elements(&self) -> &[ElementId] {
        &self.free
    }

    /// Dimension of the space of scalar measures.
    pub fn dimension(&self) -> usize {
        self.free.len()
    }

    /// Extends values on the free elements to the whole carrier.
    pub fn extend(&self, free_values: &[Value]) -> Result<Vec<Value>> {
        if free_values.len() != self.free.len() {
            return Err(Error::Precondition(format!(
                "expected {} free values, got {}",
                self.free.len(),
                free_values.len()
            )));
        }
        let dim = free_values.first().map_or(1, Value::dim);
        Ok(self
            .expressions
            .iter()
            .map(|expr| {
                let mut coords = vec![0.0; dim];
                for (k, coef) in expr {
                    let c = ratio_to_f64(coef);
                    for (x, y) in coords.iter_mut().zip(free_values[*k].coords()) {
                        *x += c * y;
                    }
                }
                Value::new(coords)
            })
            .collect())
    }

    pub(crate) fn sample_real<R: Rng>(&self, dim: usize, rng: &mut R) -> Result<Vec<Value>> {
        check_dim(dim)?;
        let free: Vec<Value> = (0..self.free.len())
            .map(|_| Value::new((0..dim).map(|_| rng.gen_range(-10.0..=10.0)).collect()))
            .collect();
        if free.is_empty() {
            return Ok(vec![Value::zeros(dim); self.expressions.len()]);
        }
        self.extend(&free)
    }

    /// Integer free values, scaled by the common denominator of all
    /// expressions so every derived value is an integer too.
    pub(crate) fn sample_integer<R: Rng>(&self, dim: usize, rng: &mut R) -> Result<Vec<Value>> {
        check_dim(dim)?;
        let scale = self
            .expressions
            .iter()
            .flatten()
            .fold(1i128, |acc, (_, q)| acc.lcm(q.denom()));
        let free: Vec<Vec<i128>> = (0..self.free.len())
            .map(|_| (0..dim).map(|_| rng.gen_range(-9i128..=9) * scale).collect())
            .collect();
        Ok(self
            .expressions
            .iter()
            .map(|expr| {
                let coords = (0..dim)
                    .map(|d| {
                        let total = expr
                            .iter()
                            .fold(Q::zero(), |acc, (k, coef)| acc + coef * Q::from_integer(free[*k][d]));
                        debug_assert!(total.is_integer());
                        total.to_integer() as f64
                    })
                    .collect();
                Value::new(coords)
            })
            .collect())
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        Err(Error::Precondition("measure dimension must be at least 1".into()))
    } else {
        Ok(())
    }
}

fn ratio_to_f64(q: &Q) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

fn reduce(mut row: Row, pivots: &BTreeMap<usize, Row>) -> Row {
    let hits: Vec<(usize, Q)> = row
        .iter()
        .filter(|(k, _)| pivots.contains_key(k))
        .map(|(k, v)| (*k, *v))
        .collect();
    for (k, f) in hits {
        axpy(&mut row, -f, &pivots[&k]);
    }
    row
}

/// `target += factor · source`, dropping entries that cancel.
fn axpy(target: &mut Row, factor: Q, source: &Row) {
    for (k, v) in source {
        let entry = target.entry(*k).or_insert_with(Q::zero);
        *entry += factor * v;
        if entry.is_zero() {
            target.remove(k);
        }
    }
}
