//! The factorisation `b_p(h, s) = gamma_{p,h}(t) F_{p,h}(t)`, the normalised
//! `F~_{p,h}` and the local weights `phi_p(j; h)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::capability::CapabilityTable;
use super::lpoly::{lambda_from, lambda_normalized_from};
use super::series::siegel_bruteforce;
use crate::error::{capability, data_err, internal, usage, Result};
use crate::exact::arith::{big_pow, factor, kronecker};
use crate::exact::laurent::{symmetric_to_y, LaurentJson};
use crate::exact::rational::{format_rational, Rational};
use crate::exact::{LaurentPolyQuad, QuadExt};
use crate::quadform::HalfIntegralForm;

type IntPoly = Vec<BigInt>;

fn poly_mul_trunc(a: &[BigInt], b: &[BigInt], len: usize) -> IntPoly {
    let mut out = vec![BigInt::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// Power series inverse of an integer polynomial with constant term 1.
fn series_inverse(a: &[BigInt], len: usize) -> IntPoly {
    assert!(a[0].is_one());
    let mut inv = vec![BigInt::zero(); len];
    if len > 0 {
        inv[0] = BigInt::one();
    }
    for i in 1..len {
        let mut s = BigInt::zero();
        for j in 1..=i.min(a.len() - 1) {
            s += &a[j] * &inv[i - j];
        }
        inv[i] = -s;
    }
    inv
}

/// `gamma_{p,h}(X) = (1 - X) prod_{j<=n} (1 - p^(2j) X^2) / (1 - chi p^n X)` as
/// `(numerator, denominator)` coefficient lists, `chi = ((-1)^n d_h / p)`.
pub fn gamma_poly(n: u32, chi: i8, p: u64) -> (IntPoly, IntPoly) {
    let mut num: IntPoly = vec![BigInt::one(), -BigInt::one()];
    for j in 1..=n {
        let factor = vec![BigInt::one(), BigInt::zero(), -big_pow(p as i64, 2 * j)];
        num = poly_mul_trunc(&num, &factor, num.len() + 2);
    }
    let den = if chi == 0 { vec![BigInt::one()] } else { vec![BigInt::one(), -BigInt::from(chi) * big_pow(p as i64, n)] };
    (num, den)
}

/// `chi = ((-1)^n d_h / p)` for a form of size `2n`.
pub fn gamma_character(h: &HalfIntegralForm, p: u64) -> Result<i8> {
    let data = h.disc_data()?;
    let fund = if data.parity == 1 { -(data.d as i128) } else { data.d as i128 };
    Ok(kronecker(fund, p as i128))
}

/// Everything local about `h` at `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalSiegelData {
    pub h: HalfIntegralForm,
    pub p: u64,
    pub n: u32,
    pub bcoeffs: Vec<i128>,
    pub gamma_num: IntPoly,
    pub gamma_den: IntPoly,
    pub f_coeffs: IntPoly,
    pub ftilde: LaurentPolyQuad,
    pub fp: u32,
    pub psi: i8,
    pub phi_local: Vec<Rational>,
}

impl LocalSiegelData {
    /// Brute-forces `b_p` up to `t^j_max` (at least `t^(f_p)`) and reconstructs `F`.
    pub fn compute(h: &HalfIntegralForm, p: u64, j_max: Option<u32>, caps: &CapabilityTable) -> Result<Self> {
        let m = h.size();
        if m % 2 == 1 || !(m == 2 || m == 4) {
            return Err(capability!("local Siegel data is implemented for sizes 2 and 4, got {m}"));
        }
        let n = (m / 2) as u32;
        let data = h.disc_data()?;
        let fp = data.fp_at(p);
        let psi = data.psi_at(p);
        let j_max = j_max.unwrap_or(fp);
        if j_max < fp {
            return Err(usage!("j_max = {j_max} is below f_p = {fp}, F would be underdetermined"));
        }
        let limit = caps.j_max(m, p).unwrap_or(0);
        if fp > limit {
            return Err(capability!("form {h} needs Siegel coefficients up to t^{fp} at p = {p}, beyond the capability limit {limit}"));
        }
        let bcoeffs = siegel_bruteforce(h, p, j_max, caps)?;
        let chi = gamma_character(h, p)?;
        let (gamma_num, gamma_den) = gamma_poly(n, chi, p);
        let f_coeffs = reconstruct_f(&bcoeffs, &gamma_num, &gamma_den, n, p, fp).map_err(|e| data_err!("form {h} at p = {p}: {e}"))?;
        let ftilde = ftilde_from(&f_coeffs, n, p, fp);
        if !ftilde.is_symmetric() {
            return Err(internal!("F~ for {h} at {p} violates the functional equation"));
        }
        let phi_local = phi_local_from(&ftilde, p, fp, psi)?;
        Ok(LocalSiegelData { h: h.clone(), p, n, bcoeffs, gamma_num, gamma_den, f_coeffs, ftilde, fp, psi, phi_local })
    }

    /// `gamma F` expanded up to `t^j_max`, for comparison with `bcoeffs`.
    pub fn gamma_times_f(&self) -> IntPoly {
        let len = self.bcoeffs.len();
        let inv_den = series_inverse(&self.gamma_den, len);
        poly_mul_trunc(&poly_mul_trunc(&self.gamma_num, &inv_den, len), &self.f_coeffs, len)
    }

    pub fn to_json(&self) -> SiegelReport {
        SiegelReport {
            form: self.h.encoding(),
            p: self.p,
            b: self.bcoeffs.iter().map(|x| x.to_string()).collect(),
            f: self.f_coeffs.iter().map(|x| x.to_string()).collect(),
            ftilde: self.ftilde.to_json(),
            phi_local: self.phi_local.iter().map(format_rational).collect(),
        }
    }
}

/// Wire form of [`LocalSiegelData`].
#[derive(Clone, Debug, Serialize)]
pub struct SiegelReport {
    pub form: String,
    pub p: u64,
    pub b: Vec<String>,
    #[serde(rename = "F")]
    pub f: Vec<String>,
    #[serde(rename = "Ftilde")]
    pub ftilde: LaurentJson,
    pub phi_local: Vec<String>,
}

/// `F` of degree `2 f_p` from `b = gamma F`, using coefficients up to `t^(f_p)`
/// and the functional equation for the rest; every known coefficient is checked.
pub fn reconstruct_f(b: &[i128], num: &[BigInt], den: &[BigInt], n: u32, p: u64, fp: u32) -> std::result::Result<IntPoly, String> {
    let len = b.len();
    let fp = fp as usize;
    if len <= fp {
        return Err(format!("only {len} Siegel coefficients for f_p = {fp}"));
    }
    let bb: IntPoly = b.iter().map(|&x| BigInt::from(x)).collect();
    // F = b * den / num as power series
    let approx = poly_mul_trunc(&poly_mul_trunc(&bb, den, len), &series_inverse(num, len), len);
    if !approx[0].is_one() {
        return Err(format!("constant term of F is {}, expected 1", approx[0]));
    }
    let deg = 2 * fp;
    let mut f = vec![BigInt::zero(); deg + 1];
    for i in 0..=fp {
        f[i] = approx[i].clone();
        f[deg - i] = &approx[i] * big_pow(p as i64, (2 * n + 1) * (fp - i) as u32);
    }
    for (i, a) in approx.iter().enumerate() {
        let expect = f.get(i).cloned().unwrap_or_default();
        if *a != expect {
            return Err(format!("coefficient {i} of F is {a} by division but {expect} by the functional equation"));
        }
    }
    Ok(f)
}

/// `F~(X) = X^(-f) F(p^(-n-1/2) X)`.
pub fn ftilde_from(f: &[BigInt], n: u32, p: u64, fp: u32) -> LaurentPolyQuad {
    let mut out = LaurentPolyQuad::zero(p);
    for (i, c) in f.iter().enumerate() {
        let scale = QuadExt::half_power(p, -((2 * n + 1) as i64) * i as i64);
        let term = scale.scale(&Rational::from_integer(c.clone()));
        out = out.add(&LaurentPolyQuad::monomial(term, i as i64 - fp as i64));
    }
    out
}

/// Solves `F~ = sum_j phi_p(j) p^(-j/2) lambda_{p, p^(-2j) D}` by back-substitution
/// from the top degree; each `lambda` has leading term `X^(f - j)`.
pub fn phi_local_from(ftilde: &LaurentPolyQuad, p: u64, fp: u32, psi: i8) -> Result<Vec<Rational>> {
    let mut rest = ftilde.clone();
    let mut out = Vec::with_capacity(fp as usize + 1);
    for j in 0..=fp as i64 {
        let top = rest.coeff(fp as i64 - j);
        let phi = (&top * &QuadExt::half_power(p, j)).to_rational().ok_or_else(|| internal!("phi_{p}({j}) is irrational: {top}"))?;
        let basis = lambda_from(p, fp as i64 - j, psi).scale(&QuadExt::half_power(p, -j).scale(&phi));
        rest = rest.sub(&basis);
        out.push(phi);
    }
    if !rest.is_zero() {
        return Err(internal!("residual {rest} after expanding F~ in the lambda basis at p = {p}"));
    }
    Ok(out)
}

/// `p^(f (k - 1/2)) F~(alpha_p)` from `a_p = p^(k - 1/2) (alpha_p + 1/alpha_p)`,
/// through the expansion of `F~` in powers of `Y = X + 1/X`.
pub fn normalized_value(ftilde: &LaurentPolyQuad, fp: u32, a_p: &BigInt, k: u32) -> Result<Rational> {
    let p = ftilde.prime();
    let q = symmetric_to_y(ftilde)?;
    let mut acc = QuadExt::zero(p);
    let a = Rational::from_integer(a_p.clone());
    for (i, c) in q.coeffs().iter().enumerate() {
        let e = (fp as i64 - i as i64) * (2 * k as i64 - 1);
        let term = (c * &QuadExt::half_power(p, e)).scale(&crate::exact::rational::rat_pow(&a, i as i64));
        acc = &acc + &term;
    }
    acc.to_rational().ok_or_else(|| internal!("normalized value of F~ at p = {p} is irrational: {acc}"))
}

/// Kohnen's weights `phi(d; h)` for all `d | f_h`, with their local factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiTable {
    pub h: HalfIntegralForm,
    pub f: u64,
    pub entries: BTreeMap<u64, BigInt>,
    pub local: BTreeMap<(u64, u32), Rational>,
}

impl PhiTable {
    pub fn compute(h: &HalfIntegralForm, caps: &CapabilityTable) -> Result<Self> {
        let locals = local_data_for(h, caps)?;
        Self::from_local(h, &locals)
    }

    pub fn from_local(h: &HalfIntegralForm, locals: &[LocalSiegelData]) -> Result<Self> {
        let data = h.disc_data()?;
        let mut local = BTreeMap::new();
        for ld in locals {
            for (j, v) in ld.phi_local.iter().enumerate() {
                local.insert((ld.p, j as u32), v.clone());
            }
        }
        let mut entries = BTreeMap::new();
        for d in crate::exact::arith::divisors(data.f) {
            let mut v = Rational::one();
            for (p, e) in factor(d as i128) {
                v *= local.get(&(p, e)).cloned().ok_or_else(|| internal!("missing phi_{p}({e}) for {h}"))?;
            }
            if !v.is_integer() {
                return Err(data_err!("phi({d}; {h}) = {v} is not an integer"));
            }
            entries.insert(d, v.to_integer());
        }
        Ok(PhiTable { h: h.clone(), f: data.f, entries, local })
    }

    pub fn phi(&self, d: u64) -> Result<&BigInt> {
        self.entries.get(&d).ok_or_else(|| usage!("{d} does not divide f_h = {} for {}", self.f, self.h))
    }
}

/// Local data at every prime dividing `f_h`.
pub fn local_data_for(h: &HalfIntegralForm, caps: &CapabilityTable) -> Result<Vec<LocalSiegelData>> {
    let data = h.disc_data()?;
    data.fp.keys().map(|&p| LocalSiegelData::compute(h, p, None, caps)).collect()
}

pub fn phi(d: u64, h: &HalfIntegralForm, caps: &CapabilityTable) -> Result<BigInt> {
    let table = PhiTable::compute(h, caps)?;
    table.phi(d).cloned()
}

/// `p^(f(k-1/2)) sum_j phi_p(j) p^(-j/2) lambda_{p,p^(-2j)D}(alpha_p)`
/// evaluated through the integer `Lambda`s: `sum_j phi_p(j) p^((k-1) j) Lambda_{f-j}`.
pub fn local_factor_via_phi(ld: &LocalSiegelData, a_p: &BigInt, k: u32) -> Rational {
    let mut acc = Rational::zero();
    for (j, phi) in ld.phi_local.iter().enumerate() {
        let lam = lambda_normalized_from(ld.fp as i64 - j as i64, ld.psi, a_p, k, ld.p);
        acc += phi * Rational::from_integer(big_pow(ld.p as i64, (k - 1) * j as u32) * lam);
    }
    acc
}

/// True when every coefficient of `gamma F` agrees with the brute-forced ones.
pub fn product_matches(ld: &LocalSiegelData) -> bool {
    ld.gamma_times_f().iter().zip(&ld.bcoeffs).all(|(a, b)| *a == BigInt::from(*b))
}
