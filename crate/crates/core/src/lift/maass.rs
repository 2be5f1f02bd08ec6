use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use super::coeff::{maass_combination, ClassData};
use super::table::{CoefficientTable, MaassParameter};
use crate::error::{internal, usage, Result};
use crate::exact::arith::{big_pow, is_square, isqrt};
use crate::exact::rational::{format_rational, Rational};
use crate::exact::MatrixQ;
use crate::modforms::in_plus_progression;
use crate::quadform::HalfIntegralForm;
use crate::siegel::PhiTable;

#[derive(Clone, Debug, Serialize)]
pub struct MaassReport {
    pub checked: usize,
    pub pass: bool,
    /// `(form, table value, value predicted by c)` where they differ.
    pub failures: Vec<(String, String, String)>,
}

fn phi_for<'a>(classes: &'a BTreeMap<HalfIntegralForm, ClassData>, h: &HalfIntegralForm) -> Result<&'a PhiTable> {
    classes.get(h).map(|cd| &cd.phi).ok_or_else(|| usage!("no local data for class {h}"))
}

/// Checks `c_F(h) = sum d^(k-1) phi(d; h) c(d^-2 D_h)` on every tabulated class.
pub fn maass_verify(table: &CoefficientTable, c: &MaassParameter, classes: &BTreeMap<HalfIntegralForm, ClassData>) -> Result<MaassReport> {
    let mut failures = Vec::new();
    let mut checked = 0;
    for (h, v) in table.iter() {
        let phi = phi_for(classes, h)?;
        let predicted = maass_combination(phi, c.k, |m| c.get(m).cloned())?;
        checked += 1;
        if &predicted != v {
            failures.push((h.encoding(), format_rational(v), format_rational(&predicted)));
        }
    }
    Ok(MaassReport { checked, pass: failures.is_empty(), failures })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SolutionKind {
    Empty,
    Unique,
    Affine,
}

/// Solution set of the Maass system truncated at `bound`.
#[derive(Clone, Debug, Serialize)]
pub struct MaassSolution {
    pub kind: SolutionKind,
    pub bound: u64,
    /// Unknowns `c(m)`, in column order.
    pub indices: Vec<u64>,
    pub equations: usize,
    pub particular: Option<Vec<String>>,
    pub kernel: Vec<Vec<String>>,
    #[serde(skip)]
    pub particular_exact: Option<Vec<Rational>>,
    #[serde(skip)]
    pub kernel_exact: Vec<Vec<Rational>>,
}

impl MaassSolution {
    pub fn particular_parameter(&self, k: u32) -> Option<MaassParameter> {
        let p = self.particular_exact.as_ref()?;
        let values = self.indices.iter().copied().zip(p.iter().cloned()).collect();
        MaassParameter::new(k, self.bound, values).ok()
    }
}

/// Solves for `c(m)`, `m` in `D_k` up to `bound`, from every class with `D_h <= bound`.
///
/// Classes with larger `D_h` are ignored, so the result certifies the relations
/// only on the truncated range.
pub fn maass_solve(table: &CoefficientTable, k: u32, bound: u64, classes: &BTreeMap<HalfIntegralForm, ClassData>) -> Result<MaassSolution> {
    if bound > table.d_max() {
        return Err(usage!("solver bound {bound} exceeds the table bound {}", table.d_max()));
    }
    let indices: Vec<u64> = (1..=bound).filter(|&m| in_plus_progression(m, k)).collect();
    let col: BTreeMap<u64, usize> = indices.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (h, v) in table.iter().filter(|(h, _)| h.disc() <= bound) {
        let phi = phi_for(classes, h)?;
        let mut row = vec![Rational::zero(); indices.len()];
        let disc = h.disc();
        for (&d, w) in &phi.entries {
            let m = disc / (d * d);
            let j = *col.get(&m).ok_or_else(|| internal!("index {m} from {h} is not in D_{k}"))?;
            row[j] += Rational::from_integer(big_pow(d as i64, k - 1) * w);
        }
        rows.push(row);
        rhs.push(v.clone());
    }
    let equations = rows.len();
    let m = MatrixQ::from_rows(indices.len(), rows)?;
    let sol = m.solve_affine(&rhs)?;
    let fmt = |v: &Vec<Rational>| v.iter().map(format_rational).collect::<Vec<_>>();
    Ok(match sol {
        None => MaassSolution {
            kind: SolutionKind::Empty,
            bound,
            indices,
            equations,
            particular: None,
            kernel: Vec::new(),
            particular_exact: None,
            kernel_exact: Vec::new(),
        },
        Some(s) => MaassSolution {
            kind: if s.kernel.is_empty() { SolutionKind::Unique } else { SolutionKind::Affine },
            bound,
            indices,
            equations,
            particular: Some(fmt(&s.particular)),
            kernel: s.kernel.iter().map(fmt).collect(),
            particular_exact: Some(s.particular),
            kernel_exact: s.kernel,
        },
    })
}

/// `sum_{d | f_h} d^(k-1) phi(d; h) (f_h / d)^k`, which vanishes when `d_h = 1` and `n = 2 mod 4`.
pub fn weighted_phi_sum(phi: &PhiTable, k: u32) -> Result<Rational> {
    maass_combination(phi, k, |m| {
        let fm = isqrt(m as u128) as i64;
        if fm as u64 * fm as u64 != m {
            return Err(internal!("d^-2 D_h = {m} is not a square although d_h = 1"));
        }
        Ok(Rational::from_integer(big_pow(fm, k)))
    })
}

pub fn lemma11_check(phi: &PhiTable, k: u32) -> Result<bool> {
    let n = phi.h.size() / 2;
    if phi.h.size() % 2 == 1 || n % 4 != 2 {
        return Err(usage!("the vanishing sum needs n = 2 mod 4, got size {}", phi.h.size()));
    }
    if phi.h.disc_data()?.d != 1 {
        return Err(usage!("the vanishing sum needs d_h = 1, {} has D = {}", phi.h, phi.h.disc()));
    }
    Ok(weighted_phi_sum(phi, k)?.is_zero())
}

/// `c'(m) = c(m) + a f_m^k` on squares, `c(m)` elsewhere.
pub fn square_shift(c: &MaassParameter, a: &Rational) -> MaassParameter {
    let mut out = c.clone();
    for (&m, v) in out.values.iter_mut() {
        if is_square(m as i128) {
            *v += a * Rational::from_integer(big_pow(isqrt(m as u128) as i64, c.k));
        }
    }
    out
}

/// `m -> f_m^k` on squares: the direction of the shift above.
pub fn square_direction(indices: &[u64], k: u32) -> Vec<Rational> {
    indices
        .iter()
        .map(|&m| if is_square(m as i128) { Rational::from_integer(big_pow(isqrt(m as u128) as i64, k)) } else { Rational::zero() })
        .collect()
}
