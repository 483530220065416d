//! JSON file formats for algebras and measures.
//!
//! Algebra documents list every defined sum once per unordered pair:
//!
//! ```json
//! {"names": ["0", "1/2", "1"], "zero": "0", "unit": "1",
//!  "sums": [["0", "0", "0"], ["0", "1/2", "1/2"], ["0", "1", "1"], ["1/2", "1/2", "1"]]}
//! ```
//!
//! Measure documents name their algebra (a path or an inline algebra
//! document) and give one value vector per element; scalars are accepted for
//! one-dimensional measures:
//!
//! ```json
//! {"algebra": "scale2.json", "dim": 1, "values": {"0": [0], "1/2": [1.5], "1": [3]}}
//! ```

use std::fmt;
use std::sync::Arc;

use serde::de::{MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::{EffectAlgebra, EffectAlgebraTable, ElementId};
use crate::error::{Error, Result};
use crate::measure::{Measure, Value};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub names: Vec<String>,
    pub zero: String,
    pub unit: String,
    pub sums: Vec<[String; 3]>,
}

impl AlgebraFile {
    pub fn from_algebra(l: &EffectAlgebra) -> Self {
        let t = l.table();
        AlgebraFile {
            names: t.names().to_vec(),
            zero: l.name(l.zero()).to_owned(),
            unit: l.name(l.unit()).to_owned(),
            sums: t
                .defined_pairs()
                .map(|(a, b, c)| [t.name(a).to_owned(), t.name(b).to_owned(), t.name(c).to_owned()])
                .collect(),
        }
    }

    /// Builds the (unvalidated, symmetrised) table.
    pub fn to_table(&self, limit: usize) -> Result<EffectAlgebraTable> {
        let find = |name: &str| {
            self.names
                .iter()
                .position(|n| n == name)
                .map(ElementId)
                .ok_or_else(|| Error::UnknownElement(name.to_owned()))
        };
        let mut table =
            EffectAlgebraTable::with_limit(self.names.clone(), find(&self.zero)?, find(&self.unit)?, limit)?;
        for [a, b, c] in &self.sums {
            table.define(find(a)?, find(b)?, find(c)?)?;
        }
        Ok(table)
    }

    pub fn to_algebra(&self, limit: usize) -> Result<EffectAlgebra> {
        EffectAlgebra::with_limit(self.to_table(limit)?, limit)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("algebra documents always serialise")
    }
}

pub fn parse_algebra(json: &str, limit: usize) -> Result<EffectAlgebra> {
    let file: AlgebraFile = serde_json::from_str(json)?;
    file.to_algebra(limit)
}

/// Where a measure document's algebra lives.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgebraRef {
    Path(String),
    Inline(AlgebraFile),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ValueRepr {
    Scalar(f64),
    Vector(Vec<f64>),
}

impl ValueRepr {
    fn into_vec(self) -> Vec<f64> {
        match self {
            ValueRepr::Scalar(x) => vec![x],
            ValueRepr::Vector(v) => v,
        }
    }
}

/// Name → value pairs, kept in document order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct NamedValues(pub Vec<(String, ValueRepr)>);

impl Serialize for NamedValues {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for NamedValues {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct NamedValuesVisitor;

        impl<'de> Visitor<'de> for NamedValuesVisitor {
            type Value = NamedValues;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a map from element names to values")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> std::result::Result<NamedValues, A::Error> {
                let mut out = Vec::with_capacity(access.size_hint().unwrap_or(0));
                while let Some((k, v)) = access.next_entry()? {
                    out.push((k, v));
                }
                Ok(NamedValues(out))
            }
        }

        deserializer.deserialize_map(NamedValuesVisitor)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureFile {
    pub algebra: AlgebraRef,
    pub dim: usize,
    pub values: NamedValues,
}

impl MeasureFile {
    pub fn from_measure(mu: &Measure, algebra: AlgebraRef) -> Self {
        let l = mu.algebra();
        let values = l
            .elements()
            .map(|a| {
                let v = mu.value(a).coords().to_vec();
                (l.name(a).to_owned(), ValueRepr::Vector(v))
            })
            .collect();
        MeasureFile {
            algebra,
            dim: mu.dim(),
            values: NamedValues(values),
        }
    }

    /// Value vectors in carrier order; every element must be given exactly once.
    pub fn values_for(&self, l: &EffectAlgebra) -> Result<Vec<Value>> {
        if self.dim == 0 {
            return Err(Error::Precondition("measure dimension must be at least 1".into()));
        }
        let mut slots: Vec<Option<Value>> = vec![None; l.size()];
        for (name, v) in &self.values.0 {
            let id = l.lookup(name)?;
            let coords = v.clone().into_vec();
            if coords.len() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    found: coords.len(),
                });
            }
            if slots[id.0].replace(Value::new(coords)).is_some() {
                return Err(Error::Precondition(format!("element `{name}` is given twice")));
            }
        }
        slots
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                v.ok_or_else(|| Error::Precondition(format!("no value for element `{}`", l.names()[i])))
            })
            .collect()
    }

    pub fn to_measure(&self, algebra: Arc<EffectAlgebra>, tolerance: f64) -> Result<Measure> {
        let values = self.values_for(&algebra)?;
        Measure::with_tolerance(algebra, values, tolerance)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("measure documents always serialise")
    }
}

pub fn parse_measure(json: &str) -> Result<MeasureFile> {
    Ok(serde_json::from_str(json)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions;

    #[test]
    fn algebra_document_reloads_to_the_same_table() {
        let l = constructions::example_4_6();
        let doc = AlgebraFile::from_algebra(&l);
        // ∅⊕a for six elements, plus two complementary pairs
        assert_eq!(doc.sums.len(), 8);
        let back = parse_algebra(&doc.to_json(), 512).unwrap();
        assert_eq!(back.table(), l.table());
    }

    #[test]
    fn unknown_names_are_rejected() {
        let json = r#"{"names": ["0", "1"], "zero": "0", "unit": "2", "sums": []}"#;
        assert!(matches!(parse_algebra(json, 512), Err(Error::UnknownElement(_))));
        let json = r#"{"names": ["0", "1"], "zero": "0", "unit": "1", "sums": [["0", "x", "1"]]}"#;
        assert!(matches!(parse_algebra(json, 512), Err(Error::UnknownElement(_))));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = parse_algebra("{\n  \"names\": [,\n}", 512).unwrap_err();
        let Error::Json(e) = err else { panic!("expected a JSON error") };
        assert_eq!(e.line(), 2);
    }

    #[test]
    fn measure_document_accepts_scalars_and_keeps_order() {
        let l = Arc::new(constructions::scale_algebra(2).unwrap());
        let json = r#"{"algebra": "scale2.json", "dim": 1,
                       "values": {"1": [3], "0": 0, "1/2": [1.5]}}"#;
        let file = parse_measure(json).unwrap();
        assert_eq!(file.values.0[0].0, "1");
        assert_eq!(file.algebra, AlgebraRef::Path("scale2.json".into()));
        let mu = file.to_measure(l.clone(), 1e-9).unwrap();
        assert_eq!(mu.value(ElementId(2)).coords(), &[3.0]);

        let missing = r#"{"algebra": "x", "dim": 1, "values": {"0": 0, "1": 2}}"#;
        assert!(parse_measure(missing).unwrap().to_measure(l.clone(), 1e-9).is_err());
        let wrong_dim = r#"{"algebra": "x", "dim": 2, "values": {"0": 0, "1/2": 1, "1": 2}}"#;
        assert!(matches!(
            parse_measure(wrong_dim).unwrap().to_measure(l, 1e-9),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn inline_algebra_reference() {
        let l = constructions::powerset_algebra(1).unwrap();
        let mu = Measure::zero(Arc::new(l.clone()), 2);
        let file = MeasureFile::from_measure(&mu, AlgebraRef::Inline(AlgebraFile::from_algebra(&l)));
        let back = parse_measure(&file.to_json()).unwrap();
        assert_eq!(back, file);
    }
}
