use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use super::table::CoefficientTable;
use crate::error::{capability, internal, precondition, usage, Result};
use crate::exact::arith::{big_pow, kronecker};
use crate::exact::rational::{format_rational, Rational};
use crate::exact::{intmat, QuadExt};
use crate::modforms::{EigenformHalf, EigenformInt, NewformPlusTable};
use crate::quadform::disc::{disc_split, psi_p};
use crate::quadform::form::border;
use crate::quadform::padic::{eta, is_maximal, radical_dim, Place};
use crate::quadform::{EvenLattice, HalfIntegralForm};
use crate::siegel::lpoly::{lambda_from, lambda_normalized_from};

/// `(a, x)` with `x = S alpha` integral, standing for `(a, alpha)` in `T_S^+`.
pub type JacobiKey = (i128, Vec<i128>);

/// Coefficients `c(a, alpha)` of a Jacobi form of index `S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiTable {
    pub index: EvenLattice,
    pub entries: BTreeMap<JacobiKey, Rational>,
}

impl JacobiTable {
    pub fn new(index: EvenLattice) -> Self {
        JacobiTable { index, entries: BTreeMap::new() }
    }

    /// `D(a, alpha) = det S (2a - S[alpha])`, the determinant of the bordered matrix.
    pub fn disc(&self, key: &JacobiKey) -> i128 {
        key_disc(&self.index, key)
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Row {
            a: String,
            x: Vec<String>,
            #[serde(rename = "D")]
            d: String,
            value: String,
        }
        let rows: Vec<Row> = self
            .entries
            .iter()
            .map(|(key, v)| Row {
                a: key.0.to_string(),
                x: key.1.iter().map(|x| x.to_string()).collect(),
                d: self.disc(key).to_string(),
                value: format_rational(v),
            })
            .collect();
        serde_json::to_string_pretty(&serde_json::json!({ "index": self.index.encoding(), "entries": rows })).expect("jacobi serialization")
    }
}

fn key_disc(s: &EvenLattice, key: &JacobiKey) -> i128 {
    let adj = intmat::adjugate(s.gram());
    s.det() * 2 * key.0 - intmat::quad_value(&adj, &key.1)
}

/// Keys with `0 < D(a, alpha) <= bound` and `|x_i| <= radius`, ascending.
pub fn jacobi_keys(s: &EvenLattice, bound: u64, radius: i128) -> Vec<JacobiKey> {
    let m = s.rank();
    let det = s.det();
    let adj = intmat::adjugate(s.gram());
    let mut keys = Vec::new();
    let mut x = vec![-radius; m];
    loop {
        let q = intmat::quad_value(&adj, &x);
        // 0 < 2a det - q <= bound
        let a_min = q.div_euclid(2 * det) + 1;
        let mut a = a_min;
        while 2 * a * det - q <= bound as i128 {
            keys.push((a, x.clone()));
            a += 1;
        }
        let mut i = 0;
        while i < m {
            x[i] += 1;
            if x[i] <= radius {
                break;
            }
            x[i] = -radius;
            i += 1;
        }
        if i == m {
            break;
        }
    }
    keys.sort();
    keys
}

fn default_radius(s: &EvenLattice) -> i128 {
    (0..s.rank()).map(|i| s.gram()[i][i]).max().unwrap_or(1)
}

/// `(a, alpha) -> c_F(1/2 [[S, S alpha], [alpha^t S, 2a]])` for `D <= bound`.
pub fn fj_extract(table: &CoefficientTable, s: &EvenLattice, bound: u64) -> Result<JacobiTable> {
    if s.rank() + 1 != table.genus {
        return Err(usage!("index of rank {} does not fit genus {}", s.rank(), table.genus));
    }
    if bound > table.d_max() {
        return Err(usage!("extraction bound {bound} exceeds the table bound {}", table.d_max()));
    }
    let half = s.half();
    let mut out = JacobiTable::new(s.clone());
    for key in jacobi_keys(s, bound, default_radius(s)) {
        let h = border(&half, key.0, &key.1)?;
        let v = table.get(&h)?.clone();
        out.entries.insert(key, v);
    }
    Ok(out)
}

/// Whether `c(a, alpha)` depends only on `D(a, alpha)`.
#[derive(Clone, Debug, Serialize)]
pub struct MTypeReport {
    pub ok: bool,
    pub witness: Option<(JacobiKey, JacobiKey)>,
    #[serde(skip)]
    pub function: BTreeMap<i128, Rational>,
}

pub fn mtype_check(jt: &JacobiTable) -> MTypeReport {
    let mut function: BTreeMap<i128, (JacobiKey, Rational)> = BTreeMap::new();
    for (key, v) in &jt.entries {
        let d = jt.disc(key);
        match function.get(&d) {
            Some((first, w)) if w != v => {
                return MTypeReport { ok: false, witness: Some((first.clone(), key.clone())), function: BTreeMap::new() };
            }
            Some(_) => {}
            None => {
                function.insert(d, (key.clone(), v.clone()));
            }
        }
    }
    MTypeReport { ok: true, witness: None, function: function.into_iter().map(|(d, (_, v))| (d, v)).collect() }
}

fn cg(g: &EigenformHalf, m: i128) -> Result<Rational> {
    if m <= 0 {
        return Ok(Rational::zero());
    }
    g.c(m as u64).cloned().ok_or_else(|| usage!("c_g({m}) is needed but g is known below q^{} only", g.expansion.precision()))
}

/// `(a, alpha) -> c_g(D(a, alpha))` for an index of determinant 2.
pub fn inks_det2(g: &EigenformHalf, s: &EvenLattice, bound: u64) -> Result<JacobiTable> {
    if s.det() != 2 {
        return Err(usage!("index {s} has determinant {}, expected 2", s.det()));
    }
    let mut out = JacobiTable::new(s.clone());
    for key in jacobi_keys(s, bound, default_radius(s)) {
        let v = cg(g, key_disc(s, &key))?;
        out.entries.insert(key, v);
    }
    Ok(out)
}

/// `p^((k-1/2) f_p(N)) l_{p,S,N}(alpha_p)` as an integer.
fn lsn_normalized(s: &EvenLattice, p: u64, n_value: u64, parity: u8, a_p: &BigInt, k: u32) -> Result<BigInt> {
    let data = disc_split(n_value, parity)?;
    let f = data.fp_at(p) as i64;
    let psi = psi_p(n_value, parity, p);
    let base = lambda_normalized_from(f, psi, a_p, k, p);
    let pk = big_pow(p as i64, k);
    Ok(match radical_dim(s, p) {
        0 => base,
        1 => {
            let e = eta(s, Place::Prime(p))?;
            base + &pk * e * lambda_normalized_from(f - 1, psi, a_p, k, p)
        }
        2 => {
            let chi = if f >= 1 {
                let reduced = (n_value / (p * p)) as i128;
                kronecker(if parity == 1 { -reduced } else { reduced }, p as i128)
            } else {
                0
            };
            base - &pk * chi * lambda_normalized_from(f - 1, psi, a_p, k, p) - &pk * &pk * lambda_normalized_from(f - 2, psi, a_p, k, p)
        }
        r => return Err(precondition!("radical of dimension {r} at {p}: index {s} is not maximal")),
    })
}

/// `c_Phi(a, alpha)` of the Jacobi eigenform attached to a level one `f`,
/// with `d`, `f` and the local factors taken at `D(a, alpha)`.
pub fn thm31_coeff(s: &EvenLattice, g: &EigenformHalf, f: &EigenformInt, key: &JacobiKey, b: u64, d: u64) -> Result<Rational> {
    if b * d != 1 {
        return Err(capability!("Jacobi eigenforms with b d = {} need newforms of level b d, only b = d = 1 is supported", b * d));
    }
    if !is_maximal(s) {
        return Err(precondition!("index {s} is not maximal"));
    }
    let n = (s.rank() + 1) / 2;
    let k = g.k;
    if (k as usize + n) % 2 == 1 {
        return Err(usage!("k = {k} and n = {n} have different parity"));
    }
    let parity = (n % 2) as u8;
    let big_d = key_disc(s, key);
    if big_d <= 0 {
        return Err(usage!("key {key:?} is not in T_S^+"));
    }
    let data = disc_split(big_d as u64, parity)?;
    let mut value = cg(g, data.d as i128)?;
    for &p in data.fp.keys() {
        value *= Rational::from_integer(lsn_normalized(s, p, big_d as u64, parity, f.a_p(p)?, k)?);
    }
    Ok(value)
}

/// `Phi^B_{g,h}` with `S = 2B`, `D_B = p`; `h` may be the zero table.
pub fn phi_bgh(b: &HalfIntegralForm, g: &EigenformHalf, h: &NewformPlusTable, bound: u64) -> Result<JacobiTable> {
    let p = b.disc();
    if !crate::exact::arith::is_prime(p) || b.size() % 2 == 0 {
        return Err(usage!("B must have odd size and prime D_B, got {b} with D = {p}"));
    }
    if h.p != p && !h.coeffs.is_empty() {
        return Err(usage!("h lives at level 4 * {} but D_B = {p}", h.p));
    }
    let k = g.k;
    let s = b.lattice();
    let pk = Rational::from_integer(big_pow(p as i64, k));
    let x = QuadExt::half_power(p, -1);
    let mut out = JacobiTable::new(s.clone());
    for key in jacobi_keys(&s, bound, default_radius(&s)) {
        let big_d = key_disc(&s, &key);
        let mut v = cg(g, big_d)?;
        if big_d % (p * p) as i128 == 0 {
            v -= &pk * cg(g, big_d / (p * p) as i128)?;
        }
        if !h.coeffs.is_empty() {
            if big_d as u64 >= h.precision {
                return Err(usage!("c_h({big_d}) is needed but h is known below {} only", h.precision));
            }
            let ch = h.c(big_d as u64);
            if !ch.is_zero() {
                v += ch * h_term(big_d as u64, k, p, &x)?;
            }
        }
        out.entries.insert(key, v);
    }
    Ok(out)
}

/// `2^(-b_p(D)) p^(f_p(D)/2) (lambda_{p,D} - p^(1/2) lambda_{p,D/p^2})(p^(-1/2))`.
fn h_term(big_d: u64, k: u32, p: u64, x: &QuadExt) -> Result<Rational> {
    let parity = (k % 2) as u8;
    let data = disc_split(big_d, parity)?;
    let f = data.fp_at(p) as i64;
    let psi = psi_p(big_d, parity, p);
    let lam = lambda_from(p, f, psi).sub(&lambda_from(p, f - 1, psi).scale(&QuadExt::sqrt_p(p)));
    let value = &lam.eval(x)? * &QuadExt::half_power(p, f);
    let mut r = value.to_rational().ok_or_else(|| internal!("h-term at D = {big_d} is irrational"))?;
    if psi != 0 {
        r /= Rational::from_integer(2.into());
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lift::coeff::lift_table;
    use crate::modforms::{level1_eigenform, plus_eigenform};
    use crate::siegel::CapabilityTable;
    use num_traits::One;

    fn s2() -> EvenLattice {
        EvenLattice::parse("2").unwrap()
    }

    #[test]
    fn keys_for_index_two() {
        let keys = jacobi_keys(&s2(), 8, 2);
        for key in &keys {
            let d = key_disc(&s2(), key);
            assert_eq!(d, 4 * key.0 - key.1[0] * key.1[0]);
            assert!(d > 0 && d <= 8);
        }
        assert!(keys.contains(&(1, vec![0])));
        assert!(keys.contains(&(1, vec![1])));
        assert!(keys.contains(&(2, vec![-2])));
    }

    #[test]
    fn m_type_detection() {
        let mut jt = JacobiTable::new(s2());
        jt.entries.insert((1, vec![1]), Rational::one());
        assert!(mtype_check(&jt).ok);
        // D = 3 twice with different values
        jt.entries.insert((3, vec![3]), Rational::zero());
        let r = mtype_check(&jt);
        assert!(!r.ok);
        assert_eq!(r.witness, Some(((1, vec![1]), (3, vec![3]))));
    }

    #[test]
    fn prop31_chain_in_genus_two() {
        let g = plus_eigenform(9, 120).unwrap();
        let f = level1_eigenform(18, 20).unwrap();
        let lt = lift_table(2, &g, &f, 40, &CapabilityTable::default()).unwrap();
        let fj = fj_extract(&lt.route_b, &s2(), 40).unwrap();
        let inks = inks_det2(&g, &s2(), 40).unwrap();
        assert_eq!(fj, inks);
        for (key, v) in &fj.entries {
            assert_eq!(&thm31_coeff(&s2(), &g, &f, key, 1, 1).unwrap(), v);
        }
        let m = mtype_check(&fj);
        assert!(m.ok);
        assert_eq!(m.function.get(&7), g.c(7));
    }

    #[test]
    fn zero_inputs() {
        let mut g = plus_eigenform(9, 60).unwrap();
        g.expansion = g.expansion.scale(&Rational::zero());
        assert!(inks_det2(&g, &s2(), 30).unwrap().entries.values().all(|v| v.is_zero()));
        let f = level1_eigenform(18, 20).unwrap();
        assert!(thm31_coeff(&s2(), &g, &f, &(3, vec![1]), 1, 1).unwrap().is_zero());
        assert!(matches!(thm31_coeff(&s2(), &g, &f, &(3, vec![1]), 2, 1), Err(crate::Error::Capability(_))));
        assert!(matches!(inks_det2(&g, &EvenLattice::parse("4").unwrap(), 30), Err(crate::Error::Usage(_))));
    }

    #[test]
    fn h_term_without_conductor_is_one() {
        // p = 3, D = 4 * 5 with f_3 = 0
        for (d, p) in [(20u64, 3u64), (8, 3), (11, 5)] {
            let parity = 1;
            let psi = psi_p(d, parity, p);
            let expect = if psi != 0 { Rational::new(1.into(), 2.into()) } else { Rational::one() };
            assert_eq!(h_term(d, 9, p, &QuadExt::half_power(p, -1)).unwrap(), expect);
        }
    }

    #[test]
    fn zero_h_reduces_to_g_terms() {
        let g = plus_eigenform(9, 200).unwrap();
        let b = HalfIntegralForm::parse("6").unwrap();
        let h = NewformPlusTable::zero(9, 3, 1, 0);
        let jt = phi_bgh(&b, &g, &h, 100).unwrap();
        for (key, v) in &jt.entries {
            let d = jt.disc(key);
            let mut expect = g.c(d as u64).unwrap().clone();
            if d % 9 == 0 {
                expect -= Rational::from_integer(big_pow(3, 9)) * g.c(d as u64 / 9).unwrap();
            }
            assert_eq!(v, &expect);
        }
    }
}
