use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{capability, usage, Result};
use crate::exact::arith::sigma;
use crate::exact::rational::Rational;
use crate::exact::{MatrixQ, QExpansion};

/// A Hecke eigenform in `S^+_{k+1/2}(4)`, scaled to primitive integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenformHalf {
    pub k: u32,
    pub expansion: QExpansion,
    /// Weight `2k` of the level one form it corresponds to, once matched.
    pub matched: Option<u32>,
}

impl EigenformHalf {
    pub fn c(&self, m: u64) -> Option<&Rational> {
        self.expansion.coeff(m as usize)
    }
}

/// `theta = 1 + 2 sum_{n>=1} q^(n^2)`, weight 1/2.
pub fn theta_series(precision: usize) -> QExpansion {
    let mut coeffs = vec![BigInt::zero(); precision];
    for n in 0.. {
        let sq = n * n;
        if sq >= precision {
            break;
        }
        coeffs[sq] = if n == 0 { BigInt::one() } else { BigInt::from(2) };
    }
    QExpansion::from_bigints(1, coeffs)
}

/// `F_2 = sum_{n odd} sigma_1(n) q^n`, weight 2 on `Gamma_0(4)`.
pub fn f2_series(precision: usize) -> QExpansion {
    let coeffs = (0..precision).map(|n| if n % 2 == 1 { sigma(n as u64, 1) } else { BigInt::zero() }).collect();
    QExpansion::from_bigints(4, coeffs)
}

/// `m` lies in the progression `(-1)^k m = 0, 1 mod 4`.
pub fn in_plus_progression(m: u64, k: u32) -> bool {
    let r = (m % 4) as i64;
    let signed = if k % 2 == 1 { -r } else { r };
    matches!(signed.rem_euclid(4), 0 | 1)
}

pub fn min_precision(k: u32) -> usize {
    4 * k as usize + 10
}

/// Echelon basis of `S^+_{k+1/2}(4)` cut out of `span{theta^(2k+1-4j) F_2^j}`
/// by `c(0) = 0` and `c(m) = 0` off the progression.
pub fn plus_cusp_space(k: u32, precision: usize) -> Result<Vec<QExpansion>> {
    if precision < min_precision(k) {
        return Err(usage!("precision {precision} is below the bound {} for weight {k}+1/2", min_precision(k)));
    }
    let theta = theta_series(precision);
    let f2 = f2_series(precision);
    let monos: Vec<QExpansion> = (0..=(2 * k + 1) / 4).map(|j| theta.pow(2 * k + 1 - 4 * j).mul(&f2.pow(j))).collect();
    let mut cond = Vec::new();
    for m in 0..precision {
        if m == 0 || !in_plus_progression(m as u64, k) {
            cond.push(monos.iter().map(|f| f.coeffs()[m].clone()).collect());
        }
    }
    let combos = MatrixQ::from_rows(monos.len(), cond)?.kernel();
    let rows: Vec<Vec<Rational>> =
        combos.iter().map(|v| (0..precision).map(|m| v.iter().zip(&monos).map(|(c, f)| c * &f.coeffs()[m]).sum()).collect()).collect();
    let (echelon, pivots) = MatrixQ::from_rows(precision, rows)?.rref();
    Ok((0..pivots.len()).map(|i| QExpansion::new(2 * k as i64 + 1, echelon.row(i).to_vec())).collect())
}

/// The plus-space eigenform when `S^+_{k+1/2}(4)` is one dimensional.
pub fn plus_eigenform(k: u32, precision: usize) -> Result<EigenformHalf> {
    let basis = plus_cusp_space(k, precision)?;
    if basis.len() != 1 {
        return Err(capability!("S^+_{k}+1/2(4) has dimension {}, only one dimensional spaces are supported", basis.len()));
    }
    Ok(EigenformHalf { k, expansion: primitive(&basis[0]), matched: None })
}

/// Scales to coprime integer coefficients with the first nonzero one positive.
pub fn primitive(f: &QExpansion) -> QExpansion {
    let den = f.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = f.coeffs().iter().map(|c| c.numer() * (&den / c.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() {
        return f.clone();
    }
    let sign = ints.iter().find(|c| !c.is_zero()).map_or(1, |c| if c.is_negative() { -1 } else { 1 });
    let g = g * sign;
    QExpansion::from_bigints(f.twice_weight(), ints.into_iter().map(|c| c / &g).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modforms::level1::level1_cusp_dim;

    #[test]
    fn generator_expansions() {
        let theta = theta_series(10);
        assert_eq!(theta, QExpansion::from_ints(1, &[1, 2, 0, 0, 2, 0, 0, 0, 0, 2]));
        let f2 = f2_series(8);
        assert_eq!(f2, QExpansion::from_ints(4, &[0, 1, 0, 4, 0, 6, 0, 8]));
        let t4 = theta.pow(4);
        assert_eq!(t4.coeff(4), Some(&Rational::from_integer(24.into())));
    }

    #[test]
    fn four_squares_oracle() {
        // r_4(n) = 8 sigma(n) - 32 sigma(n / 4)
        let t4 = theta_series(60).pow(4);
        for n in 1..60u64 {
            let mut r = sigma(n, 1) * 8;
            if n % 4 == 0 {
                r -= sigma(n / 4, 1) * 32;
            }
            assert_eq!(t4.coeffs()[n as usize], Rational::from_integer(r));
        }
    }

    #[test]
    fn plus_space_dimensions_match_level_one() {
        for two_k in [12u32, 14, 16, 18, 20, 22, 26] {
            let k = two_k / 2;
            let prec = min_precision(k) + 20;
            assert_eq!(plus_cusp_space(k, prec).unwrap().len(), level1_cusp_dim(two_k, prec).unwrap(), "2k = {two_k}");
        }
    }

    #[test]
    fn weight_13_2_eigenform() {
        let g = plus_eigenform(6, 60).unwrap();
        let expect = [(1, 1), (4, -56), (5, 120), (8, -240), (9, 9), (12, 1440)];
        for (m, c) in expect {
            assert_eq!(g.c(m).unwrap(), &Rational::from_integer(c.into()), "c({m})");
        }
        for m in 0..60 {
            if !in_plus_progression(m, 6) {
                assert!(g.c(m).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn weight_19_2_eigenform_matches_igusa_cusp_form() {
        // c(D) of the Maass lift of weight 10
        let g = plus_eigenform(9, 60).unwrap();
        let expect = [(3, 1), (4, -2), (7, -16), (8, 36), (11, 99), (12, -272)];
        for (m, c) in expect {
            assert_eq!(g.c(m).unwrap(), &Rational::from_integer(c.into()), "c({m})");
        }
    }

    #[test]
    fn low_precision_is_rejected() {
        assert!(matches!(plus_cusp_space(6, 10), Err(crate::Error::Usage(_))));
    }
}
