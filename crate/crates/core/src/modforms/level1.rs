use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{capability, internal, usage, Result};
use crate::exact::arith::{primes_up_to, sigma};
use crate::exact::rational::Rational;
use crate::exact::{MatrixQ, QExpansion};

/// A normalized Hecke eigenform in `S_{2k}(SL_2(Z))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenformInt {
    pub weight: u32,
    pub expansion: QExpansion,
    pub eigenvalues: BTreeMap<u64, BigInt>,
}

impl EigenformInt {
    pub fn a(&self, n: usize) -> Option<BigInt> {
        self.expansion.coeff(n).map(|c| c.to_integer())
    }

    /// `a_p`, or a usage error when `p` is beyond the precision.
    pub fn a_p(&self, p: u64) -> Result<&BigInt> {
        self.eigenvalues
            .get(&p)
            .ok_or_else(|| usage!("a_{p} is beyond the precision {} of the weight {} eigenform", self.expansion.precision(), self.weight))
    }
}

/// `E_w = 1 - (2w / B_w) sum sigma_{w-1}(n) q^n` for `w` in {4, 6}.
pub fn eisenstein(w: u32, precision: usize) -> Result<QExpansion> {
    let c: i64 = match w {
        4 => 240,
        6 => -504,
        _ => return Err(usage!("only E_4 and E_6 are provided, not E_{w}")),
    };
    let mut coeffs = vec![BigInt::zero(); precision];
    if precision > 0 {
        coeffs[0] = BigInt::one();
    }
    for (n, slot) in coeffs.iter_mut().enumerate().skip(1) {
        *slot = sigma(n as u64, w - 1) * c;
    }
    Ok(QExpansion::from_bigints(2 * w as i64, coeffs))
}

/// `E_4^a E_6^b` with `4a + 6b = w`.
fn monomials(w: u32, precision: usize) -> Result<Vec<QExpansion>> {
    let e4 = eisenstein(4, precision)?;
    let e6 = eisenstein(6, precision)?;
    let mut out = Vec::new();
    for b in 0..=w / 6 {
        let rest = w - 6 * b;
        if rest % 4 == 0 {
            out.push(e4.pow(rest / 4).mul(&e6.pow(b)));
        }
    }
    Ok(out)
}

/// Cusp forms inside the span of the monomials: combinations with vanishing
/// constant term, returned in echelon form.
fn cusp_basis(w: u32, precision: usize) -> Result<Vec<QExpansion>> {
    if w % 2 == 1 || w < 4 {
        return Ok(Vec::new());
    }
    let monos = monomials(w, precision)?;
    let constant = MatrixQ::from_rows(monos.len(), vec![monos.iter().map(|f| f.coeffs()[0].clone()).collect()])?;
    let combos = constant.kernel();
    let rows: Vec<Vec<Rational>> =
        combos.iter().map(|v| (0..precision).map(|m| v.iter().zip(&monos).map(|(c, f)| c * &f.coeffs()[m]).sum()).collect()).collect();
    let mat = MatrixQ::from_rows(precision, rows)?;
    let (echelon, pivots) = mat.rref();
    Ok((0..pivots.len()).map(|i| QExpansion::new(2 * w as i64, echelon.row(i).to_vec())).collect())
}

/// `dim S_w(SL_2(Z))`, from the rank of the cusp combinations of `E_4^a E_6^b`.
pub fn level1_cusp_dim(w: u32, precision: usize) -> Result<usize> {
    Ok(cusp_basis(w, precision)?.len())
}

/// The normalized eigenform of weight `2k` when the cusp space is one dimensional.
pub fn level1_eigenform(two_k: u32, precision: usize) -> Result<EigenformInt> {
    if precision < 2 {
        return Err(usage!("precision {precision} is too small for an eigenform"));
    }
    let basis = cusp_basis(two_k, precision)?;
    if basis.len() != 1 {
        return Err(capability!("S_{two_k}(SL_2(Z)) has dimension {}, only one dimensional spaces are supported", basis.len()));
    }
    let f = &basis[0];
    let a1 = f.coeffs()[1].clone();
    if a1.is_zero() {
        return Err(internal!("weight {two_k} cusp form has vanishing first coefficient"));
    }
    let f = f.scale(&a1.recip());
    if f.integer_coeffs().is_none() {
        return Err(internal!("weight {two_k} eigenform has non-integral coefficients"));
    }
    let eigenvalues = primes_up_to(precision as u64 - 1).into_iter().map(|p| (p, f.coeffs()[p as usize].to_integer())).collect();
    Ok(EigenformInt { weight: two_k, expansion: f, eigenvalues })
}
