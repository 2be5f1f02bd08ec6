use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{data_err, usage, Result};
use crate::exact::rational::{format_rational, parse_rational, Rational};
use crate::modforms::{in_plus_progression, EigenformHalf};
use crate::quadform::{FormIndex, HalfIntegralForm};

/// Fourier coefficients `c_F(h)` keyed by canonical class representatives.
#[derive(Clone, Debug)]
pub struct CoefficientTable {
    pub genus: usize,
    pub weight: u32,
    entries: BTreeMap<HalfIntegralForm, Rational>,
    index: FormIndex,
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    form: String,
    value: String,
}

#[derive(Serialize, Deserialize)]
struct ParamJson {
    m: u64,
    c: String,
}

impl CoefficientTable {
    /// Builds a table over the classes of `index`; every key must already be canonical.
    pub fn from_canonical(weight: u32, index: FormIndex, entries: BTreeMap<HalfIntegralForm, Rational>) -> Result<Self> {
        let genus = index.forms().first().map_or(0, |h| h.size());
        for h in entries.keys() {
            if index.canonical(h)? != h {
                return Err(usage!("table key {h} is not the canonical representative of its class"));
            }
        }
        Ok(CoefficientTable { genus, weight, entries, index })
    }

    /// Accepts arbitrary representatives and moves each onto its canonical class.
    pub fn from_forms(genus: usize, weight: u32, values: Vec<(HalfIntegralForm, Rational)>) -> Result<Self> {
        if let Some((h, _)) = values.iter().find(|(h, _)| h.size() != genus) {
            return Err(usage!("form {h} does not have size {genus}"));
        }
        let d_max = values.iter().map(|(h, _)| h.disc()).max().unwrap_or(0);
        let index = FormIndex::new(genus, d_max)?;
        let mut entries = BTreeMap::new();
        for (h, v) in values {
            let c = index.canonical(&h)?.clone();
            if let Some(old) = entries.insert(c.clone(), v.clone()) {
                if old != v {
                    return Err(data_err!("class of {c} appears twice with values {} and {}", format_rational(&old), format_rational(&v)));
                }
            }
        }
        Ok(CoefficientTable { genus, weight, entries, index })
    }

    pub fn index(&self) -> &FormIndex {
        &self.index
    }

    pub fn d_max(&self) -> u64 {
        self.index.d_max()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in the enumeration order: ascending `D`, then encoding.
    pub fn iter(&self) -> impl Iterator<Item = (&HalfIntegralForm, &Rational)> {
        self.index.forms().iter().filter_map(|h| self.entries.get(h).map(|v| (h, v)))
    }

    /// `c_F(h)` for any representative of a tabulated class.
    pub fn get(&self, h: &HalfIntegralForm) -> Result<&Rational> {
        let c = self.index.canonical(h)?;
        self.entries.get(c).ok_or_else(|| usage!("class of {h} (canonical {c}) is missing from the table"))
    }

    pub fn set(&mut self, h: &HalfIntegralForm, v: Rational) -> Result<()> {
        let c = self.index.canonical(h)?.clone();
        self.entries.insert(c, v);
        Ok(())
    }

    /// Every enumerated class is present.
    pub fn is_complete(&self) -> bool {
        self.index.forms().iter().all(|h| self.entries.contains_key(h))
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<EntryJson> = self.iter().map(|(h, v)| EntryJson { form: h.encoding(), value: format_rational(v) }).collect();
        serde_json::to_string_pretty(&rows).expect("table serialization")
    }

    pub fn from_json(text: &str, weight: u32) -> Result<Self> {
        let rows: Vec<EntryJson> = serde_json::from_str(text).map_err(|e| usage!("malformed coefficient table: {e}"))?;
        let mut values = Vec::with_capacity(rows.len());
        for r in rows {
            values.push((HalfIntegralForm::parse(&r.form)?, parse_rational(&r.value)?));
        }
        let genus = values.first().map_or(0, |(h, _)| h.size());
        if genus == 0 {
            return Err(usage!("coefficient table is empty"));
        }
        Self::from_forms(genus, weight, values)
    }
}

/// A candidate `c` on `D_k` up to `bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaassParameter {
    pub k: u32,
    pub bound: u64,
    pub values: BTreeMap<u64, Rational>,
}

impl MaassParameter {
    pub fn new(k: u32, bound: u64, values: BTreeMap<u64, Rational>) -> Result<Self> {
        if let Some(m) = values.keys().find(|&&m| m == 0 || m > bound || !in_plus_progression(m, k)) {
            return Err(usage!("parameter index {m} is outside D_{k} up to {bound}"));
        }
        Ok(MaassParameter { k, bound, values })
    }

    /// `m -> c_g(m)` on `D_k` up to `bound`.
    pub fn from_eigenform(g: &EigenformHalf, bound: u64) -> Result<Self> {
        if g.expansion.precision() as u64 <= bound {
            return Err(usage!("g is known below q^{} only, parameter bound is {bound}", g.expansion.precision()));
        }
        let values = (1..=bound).filter(|&m| in_plus_progression(m, g.k)).map(|m| (m, g.c(m).unwrap().clone())).collect();
        Ok(MaassParameter { k: g.k, bound, values })
    }

    /// `c(m)`, or a usage error naming the uncovered index.
    pub fn get(&self, m: u64) -> Result<&Rational> {
        self.values.get(&m).ok_or_else(|| usage!("parameter does not cover c({m})"))
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<ParamJson> = self.values.iter().map(|(&m, c)| ParamJson { m, c: format_rational(c) }).collect();
        serde_json::to_string_pretty(&rows).expect("parameter serialization")
    }

    pub fn from_json(text: &str, k: u32) -> Result<Self> {
        let rows: Vec<ParamJson> = serde_json::from_str(text).map_err(|e| usage!("malformed parameter file: {e}"))?;
        let bound = rows.iter().map(|r| r.m).max().unwrap_or(0);
        let mut values = BTreeMap::new();
        for r in rows {
            values.insert(r.m, parse_rational(&r.c)?);
        }
        Self::new(k, bound, values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};

    #[test]
    fn json_round_trip_canonicalizes() {
        let values = vec![
            (HalfIntegralForm::parse("2,1;1,2").unwrap(), int(1)),
            (HalfIntegralForm::parse("2,-1;-1,2").unwrap(), int(1)),
            (HalfIntegralForm::parse("2,0;0,2").unwrap(), rat(-3, 2)),
        ];
        let t = CoefficientTable::from_forms(2, 10, values).unwrap();
        assert_eq!(t.len(), 2);
        assert!(t.is_complete());
        let back = CoefficientTable::from_json(&t.to_json(), 10).unwrap();
        assert_eq!(back.to_json(), t.to_json());
        assert_eq!(back.get(&HalfIntegralForm::parse("2,0;0,2").unwrap()).unwrap(), &rat(-3, 2));
    }

    #[test]
    fn conflicting_duplicates_are_rejected() {
        let values = vec![(HalfIntegralForm::parse("2,1;1,2").unwrap(), int(1)), (HalfIntegralForm::parse("2,-1;-1,2").unwrap(), int(2))];
        assert!(matches!(CoefficientTable::from_forms(2, 10, values), Err(crate::Error::Data(_))));
    }

    #[test]
    fn parameter_domain() {
        assert!(MaassParameter::new(9, 10, BTreeMap::from([(3, int(1))])).is_ok());
        assert!(MaassParameter::new(9, 10, BTreeMap::from([(5, int(1))])).is_err());
        let p = MaassParameter::new(6, 10, BTreeMap::from([(4, int(1)), (5, rat(1, 3))])).unwrap();
        assert_eq!(MaassParameter::from_json(&p.to_json(), 6).unwrap().values, p.values);
    }
}
