//! The splitting `N = d * f^2` of a discriminant value and the local
//! characters attached to it.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{internal, usage, Result};
use crate::exact::arith::{factor, is_square, legendre, squarefree_split, valuation};

/// `N` together with `d` (absolute fundamental discriminant of
/// `Q(sqrt((-1)^n N))`), `f = sqrt(N / d)` and the local data at `p | 2N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiscriminantData {
    pub n_value: u64,
    pub parity: u8,
    pub d: u64,
    pub f: u64,
    /// `ord_p f` for every prime dividing `f`.
    pub fp: BTreeMap<u64, u32>,
    /// `psi_p((-1)^n N)` for `p | 2N`; it is 1 at every other prime.
    pub psi: BTreeMap<u64, i8>,
}

impl DiscriminantData {
    pub fn fp_at(&self, p: u64) -> u32 {
        self.fp.get(&p).copied().unwrap_or(0)
    }

    pub fn psi_at(&self, p: u64) -> i8 {
        self.psi.get(&p).copied().unwrap_or(1)
    }

    pub fn signed(&self) -> i128 {
        signed(self.n_value, self.parity)
    }
}

fn signed(n: u64, parity: u8) -> i128 {
    if parity % 2 == 1 {
        -(n as i128)
    } else {
        n as i128
    }
}

/// True when `(-1)^parity * N` is 0 or 1 mod 4.
pub fn is_discriminant(n: u64, parity: u8) -> bool {
    n > 0 && matches!(signed(n, parity).rem_euclid(4), 0 | 1)
}

/// Fundamental discriminant of `Q(sqrt x)` for a non-square `x`, or 1.
pub fn fundamental_discriminant(x: i128) -> i128 {
    let (core, _) = squarefree_split(x);
    if core == 1 || core.rem_euclid(4) == 1 {
        core
    } else {
        4 * core
    }
}

pub fn disc_split(n: u64, parity: u8) -> Result<DiscriminantData> {
    if !is_discriminant(n, parity) {
        return Err(usage!("{n} is not a discriminant for parity {parity}: (-1)^n N must be 0 or 1 mod 4"));
    }
    let x = signed(n, parity);
    let d = fundamental_discriminant(x).unsigned_abs() as u64;
    if n % d != 0 || !is_square((n / d) as i128) {
        return Err(internal!("N/d is not a square for N = {n}, d = {d}"));
    }
    let f = crate::exact::arith::isqrt((n / d) as u128) as u64;
    let fp = factor(f as i128).into_iter().collect();
    let mut psi = BTreeMap::new();
    for p in factor(2 * n as i128).into_iter().map(|(p, _)| p) {
        psi.insert(p, psi_of(x, p));
    }
    Ok(DiscriminantData { n_value: n, parity, d, f, fp, psi })
}

/// 1, -1 or 0 according as `Q_p(sqrt x)` is `Q_p`, unramified or ramified.
pub fn psi_of(x: i128, p: u64) -> i8 {
    assert!(x != 0);
    let v = valuation(x, p);
    if v % 2 == 1 {
        return 0;
    }
    let u = x / (p as i128).pow(v);
    if p == 2 {
        match u.rem_euclid(8) {
            1 => 1,
            5 => -1,
            _ => 0,
        }
    } else {
        legendre(u, p)
    }
}

/// `psi_p((-1)^n N)`.
pub fn psi_p(n: u64, parity: u8, p: u64) -> i8 {
    psi_of(signed(n, parity), p)
}

/// `f_p(N) = ord_p f_N` for a discriminant value `N`.
pub fn f_p(n: u64, parity: u8, p: u64) -> Result<u32> {
    Ok(disc_split(n, parity)?.fp_at(p))
}
