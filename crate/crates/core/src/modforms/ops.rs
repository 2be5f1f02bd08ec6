use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use super::level1::EigenformInt;
use super::plus::{in_plus_progression, EigenformHalf};
use crate::error::{data_err, usage, Result};
use crate::exact::arith::{big_pow, kronecker, primes_up_to};
use crate::exact::rational::{format_rational, rat_pow, Rational};
use crate::exact::QExpansion;
use crate::quadform::disc::disc_split;
use crate::siegel::lpoly::lambda_normalized;

fn signed_m(m: u64, k: u32) -> i128 {
    if k % 2 == 1 {
        -(m as i128)
    } else {
        m as i128
    }
}

fn k_of(g: &QExpansion) -> Result<u32> {
    let tw = g.twice_weight();
    if tw < 1 || tw % 2 == 0 {
        return Err(usage!("expected a half-integral weight form, got weight {tw}/2"));
    }
    Ok(((tw - 1) / 2) as u32)
}

/// `sum c(a^2 m) q^m`.
pub fn u_sq(a: u64, g: &QExpansion) -> QExpansion {
    let a2 = (a * a) as usize;
    let prec = (g.precision() + a2 - 1) / a2;
    QExpansion::new(g.twice_weight(), (0..prec).map(|m| g.coeffs()[a2 * m].clone()).collect())
}

/// `T~(p^2)`: `c'(m) = c(p^2 m) + ((-1)^k m / p) p^(k-1) c(m) + p^(2k-1) c(m / p^2)`
/// at every `m`. For `p = 2` the plus-space operator is this followed by
/// discarding indices off the progression, see [`shimura_match`].
pub fn hecke_half_t2(p: u64, g: &QExpansion) -> Result<QExpansion> {
    let k = k_of(g)?;
    let p2 = (p * p) as usize;
    let prec = (g.precision() + p2 - 1) / p2;
    let mid = Rational::from_integer(big_pow(p as i64, k - 1));
    let low = Rational::from_integer(big_pow(p as i64, 2 * k - 1));
    let coeffs = (0..prec)
        .map(|m| {
            let mut c = g.coeffs()[p2 * m].clone();
            let chi = kronecker(signed_m(m as u64, k), p as i128);
            if chi != 0 {
                c += &mid * &g.coeffs()[m] * Rational::from_integer(chi.into());
            }
            if m % p2 == 0 {
                c += &low * &g.coeffs()[m / p2];
            }
            c
        })
        .collect();
    Ok(QExpansion::new(g.twice_weight(), coeffs))
}

/// Outcome of checking `T~(p^2) g = a_p g`.
#[derive(Clone, Debug, Serialize)]
pub struct ShimuraReport {
    pub k: u32,
    pub weight: u32,
    pub primes: Vec<u64>,
    pub eigenvalues: Vec<String>,
}

/// Confirms `T~(p^2) g = a_p(f) g` on the plus progression for every `p <= p_max`
/// and records the pairing.
pub fn shimura_match(g: &mut EigenformHalf, f: &EigenformInt, p_max: u64) -> Result<ShimuraReport> {
    if f.weight != 2 * g.k {
        return Err(data_err!("weight {} form cannot correspond to weight {}+1/2", f.weight, g.k));
    }
    let mut primes = Vec::new();
    let mut eigenvalues = Vec::new();
    for p in primes_up_to(p_max) {
        let a_p = Rational::from_integer(f.a_p(p)?.clone());
        let tg = hecke_half_t2(p, &g.expansion)?;
        let n = tg.precision();
        if g.expansion.truncate(n).is_zero() {
            return Err(usage!("precision {} leaves no nonzero coefficient to compare at p = {p}", g.expansion.precision()));
        }
        for m in (0..n).filter(|&m| in_plus_progression(m as u64, g.k)) {
            let expect = &a_p * &g.expansion.coeffs()[m];
            if tg.coeffs()[m] != expect {
                return Err(data_err!(
                    "T~({p}^2) g has c({m}) = {} but a_{p} c({m}) = {}",
                    format_rational(&tg.coeffs()[m]),
                    format_rational(&expect)
                ));
            }
        }
        primes.push(p);
        eigenvalues.push(format_rational(&a_p));
    }
    g.matched = Some(f.weight);
    Ok(ShimuraReport { k: g.k, weight: f.weight, primes, eigenvalues })
}

/// `g | P(l)` by its definition next to the closed form claimed for it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct POpReport {
    pub ell: u64,
    /// `g - l^(1-k) g | (T~(l^2) - U_k(l^2))`.
    pub definition: QExpansion,
    /// `sum (1 - ((-1)^k m / l)) (c(m) - l^k c(m / l^2)) q^m`.
    pub proof: QExpansion,
    pub agree: bool,
    /// First index where the two expansions differ.
    pub first_difference: Option<usize>,
}

impl POpReport {
    /// Which display the comparison singles out.
    pub fn verdict(&self) -> String {
        if self.agree {
            format!(
                "definition normalization l^(1-k) agrees with the closed form (1 - ((-1)^k m/l))(c(m) - l^k c(m/l^2)) for l = {} through q^{}",
                self.ell,
                self.definition.precision() - 1
            )
        } else {
            format!("definition and closed form disagree for l = {} at q^{}", self.ell, self.first_difference.unwrap_or_default())
        }
    }
}

pub fn p_op(ell: u64, g: &QExpansion) -> Result<POpReport> {
    p_op_normalized(ell, g, None)
}

/// As [`p_op`] with the factor in front of `T~ - U` replaced by `l^e` when given.
pub fn p_op_normalized(ell: u64, g: &QExpansion, exponent: Option<i64>) -> Result<POpReport> {
    let k = k_of(g)?;
    let e = exponent.unwrap_or(1 - k as i64);
    let t = hecke_half_t2(ell, g)?;
    let u = u_sq(ell, g);
    let factor = rat_pow(&Rational::from_integer(ell.into()), e);
    let definition = g.sub(&t.sub(&u)?.scale(&factor))?;
    let n = definition.precision();
    let lk = Rational::from_integer(big_pow(ell as i64, k));
    let l2 = (ell * ell) as usize;
    let proof_coeffs = (0..n)
        .map(|m| {
            let chi = kronecker(signed_m(m as u64, k), ell as i128);
            let mut c = g.coeffs()[m].clone();
            if m % l2 == 0 {
                c -= &lk * &g.coeffs()[m / l2];
            }
            c * Rational::from_integer((1 - chi as i64).into())
        })
        .collect();
    let proof = QExpansion::new(g.twice_weight(), proof_coeffs);
    let first_difference = (0..n).find(|&m| definition.coeffs()[m] != proof.coeffs()[m]);
    Ok(POpReport { ell, definition, proof, agree: first_difference.is_none(), first_difference })
}

/// Tally of `c_g(m) = c_g(d_m) prod_q Lambda_{q,m}` over `m <= m_max` in the plus progression.
#[derive(Clone, Debug, Serialize)]
pub struct FactorizationReport {
    pub k: u32,
    pub m_max: u64,
    pub checked: usize,
    pub failures: Vec<u64>,
}

pub fn factorization_check(g: &EigenformHalf, f: &EigenformInt, m_max: u64) -> Result<FactorizationReport> {
    if g.expansion.precision() as u64 <= m_max {
        return Err(usage!("g is known below q^{} only, cannot check up to {m_max}", g.expansion.precision()));
    }
    let k = g.k;
    let parity = (k % 2) as u8;
    let mut checked = 0;
    let mut failures = Vec::new();
    for m in 1..=m_max {
        if !in_plus_progression(m, k) {
            continue;
        }
        let data = disc_split(m, parity)?;
        let mut prod = BigInt::from(1);
        for &q in data.fp.keys() {
            prod *= lambda_normalized(q, m, parity, f.a_p(q)?, k)?;
        }
        let lhs = g.c(m).cloned().unwrap_or_else(Rational::zero);
        let rhs = g.c(data.d).cloned().unwrap_or_else(Rational::zero) * Rational::from_integer(prod);
        checked += 1;
        if lhs != rhs {
            failures.push(m);
        }
    }
    Ok(FactorizationReport { k, m_max, checked, failures })
}
