//! The Laurent polynomials `l_e`, `lambda_{p,N}` and `l_{p,S,N}`, and their
//! integer-normalized values at Satake parameters.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{precondition, Result};
use crate::exact::arith::{big_pow, kronecker};
use crate::exact::rational::int;
use crate::exact::{LaurentPolyQuad, QuadExt};
use crate::quadform::disc::{disc_split, psi_p};
use crate::quadform::padic::{eta, is_maximal, radical_dim, Place};
use crate::quadform::EvenLattice;

/// `l_e(X) = (X^(e+1) - X^(-e-1)) / (X - X^-1)` for `e >= 0`, and 0 for `e < 0`.
pub fn l_poly(p: u64, e: i64) -> LaurentPolyQuad {
    let mut out = LaurentPolyQuad::zero(p);
    for i in 0..=e.max(-1) {
        out = out.add(&LaurentPolyQuad::monomial(QuadExt::one(p), e - 2 * i));
    }
    out
}

/// `l_f - psi p^(-1/2) l_(f-1)`, which is `lambda_{p,N}` for `f = f_p(N)`,
/// `psi = psi_p((-1)^n N)`.
pub fn lambda_from(p: u64, f: i64, psi: i8) -> LaurentPolyQuad {
    let c = QuadExt::half_power(p, -1).scale(&int(-(psi as i64)));
    l_poly(p, f).add(&l_poly(p, f - 1).scale(&c))
}

/// Local data of a discriminant value `N` at `p`: `(f_p(N), psi_p((-1)^n N))`.
pub fn local_data(n_value: u64, parity: u8, p: u64) -> Result<(i64, i8)> {
    let data = disc_split(n_value, parity)?;
    Ok((data.fp_at(p) as i64, psi_p(n_value, parity, p)))
}

/// `lambda_{p, p^(-2 shift) N}` for a discriminant value `N`.
pub fn lambda_poly(p: u64, n_value: u64, parity: u8, shift: i64) -> Result<LaurentPolyQuad> {
    let (f, psi) = local_data(n_value, parity, p)?;
    Ok(lambda_from(p, f - shift, psi))
}

/// `l_{p,S,N}` for a maximal even lattice `S` of rank `2n - 1`.
pub fn lsn_poly(p: u64, s: &EvenLattice, n_value: u64, parity: u8) -> Result<LaurentPolyQuad> {
    if !is_maximal(s) {
        return Err(precondition!("lattice {s} is not maximal"));
    }
    let lam = |shift| lambda_poly(p, n_value, parity, shift);
    match radical_dim(s, p) {
        0 => lam(0),
        1 => {
            let e = eta(s, Place::Prime(p))?;
            let c = QuadExt::half_power(p, 1).scale(&int(e as i64));
            Ok(lam(0)?.add(&lam(1)?.scale(&c)))
        }
        2 => {
            let pp = (p * p) as u128;
            let chi = if (n_value as u128) % pp == 0 {
                let x = (n_value as u128 / pp) as i128;
                kronecker(if parity % 2 == 1 { -x } else { x }, p as i128)
            } else {
                0
            };
            let c1 = QuadExt::half_power(p, 1).scale(&int(-(chi as i64)));
            let c2 = QuadExt::from_int(p, -(p as i64));
            Ok(lam(0)?.add(&lam(1)?.scale(&c1)).add(&lam(2)?.scale(&c2)))
        }
        s_p => Err(precondition!("radical dimension {s_p} at {p} is impossible for a maximal lattice")),
    }
}

/// `beta_j = p^((k - 1/2) j) l_j(alpha_p)` via `beta_(j+1) = a_p beta_j - p^(2k-1) beta_(j-1)`.
pub fn beta_eval(j: i64, a_p: &BigInt, k: u32, p: u64) -> BigInt {
    if j < 0 {
        return BigInt::zero();
    }
    let q = big_pow(p as i64, 2 * k - 1);
    let (mut prev, mut cur) = (BigInt::zero(), BigInt::one());
    for _ in 0..j {
        let next = a_p * &cur - &q * &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `Lambda = p^((k - 1/2) f) (l_f - psi p^(-1/2) l_(f-1))(alpha_p)`, an integer.
pub fn lambda_normalized_from(f: i64, psi: i8, a_p: &BigInt, k: u32, p: u64) -> BigInt {
    beta_eval(f, a_p, k, p) - BigInt::from(psi) * big_pow(p as i64, k - 1) * beta_eval(f - 1, a_p, k, p)
}

/// `Lambda_{p,N}` for a discriminant value `N`.
pub fn lambda_normalized(p: u64, n_value: u64, parity: u8, a_p: &BigInt, k: u32) -> Result<BigInt> {
    let (f, psi) = local_data(n_value, parity, p)?;
    Ok(lambda_normalized_from(f, psi, a_p, k, p))
}
