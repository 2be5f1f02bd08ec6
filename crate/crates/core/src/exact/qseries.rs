//! Truncated q-expansions with exact rational coefficients.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::rational::{format_rational, Rational};
use crate::error::{usage, Result};

/// `sum_{m < precision} coeffs[m] q^m`, of weight `twice_weight / 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QExpansion {
    twice_weight: i64,
    coeffs: Vec<Rational>,
}

impl QExpansion {
    pub fn new(twice_weight: i64, coeffs: Vec<Rational>) -> Self {
        QExpansion { twice_weight, coeffs }
    }

    pub fn from_ints(twice_weight: i64, coeffs: &[i64]) -> Self {
        Self::new(twice_weight, coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn from_bigints(twice_weight: i64, coeffs: Vec<BigInt>) -> Self {
        Self::new(twice_weight, coeffs.into_iter().map(Rational::from_integer).collect())
    }

    pub fn zero(twice_weight: i64, precision: usize) -> Self {
        Self::new(twice_weight, vec![Rational::zero(); precision])
    }

    pub fn one(precision: usize) -> Self {
        let mut out = Self::zero(0, precision);
        if precision > 0 {
            out.coeffs[0] = Rational::one();
        }
        out
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn twice_weight(&self) -> i64 {
        self.twice_weight
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `q^m`, or `None` beyond the precision.
    pub fn coeff(&self, m: usize) -> Option<&Rational> {
        self.coeffs.get(m)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn truncate(&self, precision: usize) -> Self {
        let n = precision.min(self.precision());
        Self::new(self.twice_weight, self.coeffs[..n].to_vec())
    }

    pub fn with_weight(mut self, twice_weight: i64) -> Self {
        self.twice_weight = twice_weight;
        self
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.twice_weight != other.twice_weight {
            return Err(usage!("cannot add q-expansions of weights {}/2 and {}/2", self.twice_weight, other.twice_weight));
        }
        let n = self.precision().min(other.precision());
        Ok(Self::new(self.twice_weight, (0..n).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect()))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.twice_weight, self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Cauchy product truncated to the smaller precision; weights add.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.precision().min(other.precision());
        let (a, da) = to_integral(&self.coeffs[..n]);
        let (b, db) = to_integral(&other.coeffs[..n]);
        let prod = convolve(&a, &b, n);
        let den = da * db;
        let coeffs = prod.into_iter().map(|c| Rational::new(c, den.clone())).collect();
        Self::new(self.twice_weight + other.twice_weight, coeffs)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.precision());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// `[m, c(m)]` pairs as strings, `m` ascending.
    pub fn to_pairs(&self) -> Vec<[String; 2]> {
        self.coeffs.iter().enumerate().map(|(m, c)| [m.to_string(), format_rational(c)]).collect()
    }

    /// The integer coefficients, if every coefficient is integral.
    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs.iter().map(|c| c.is_integer().then(|| c.to_integer())).collect()
    }
}

fn to_integral(coeffs: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints = coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
    (ints, den)
}

fn convolve(a: &[BigInt], b: &[BigInt], n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n];
    let sa: Vec<(usize, &BigInt)> = a.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
    let sb: Vec<(usize, &BigInt)> = b.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
    let (outer, inner) = if sa.len() <= sb.len() { (sa, sb) } else { (sb, sa) };
    for (i, x) in outer {
        for (j, y) in inner.iter() {
            if i + j >= n {
                break;
            }
            out[i + j] += x * *y;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;

    #[test]
    fn small_products() {
        let f = QExpansion::from_ints(0, &[1, 1, 0, 0]);
        assert_eq!(f.mul(&f), QExpansion::from_ints(0, &[1, 2, 1, 0]));
        let g = QExpansion::new(3, vec![rat(1, 2), rat(-3, 4), rat(5, 1)]);
        assert_eq!(g.mul(&QExpansion::one(5)), g);
    }

    #[test]
    fn sum_of_two_squares() {
        let n = 30i64;
        let mut s = vec![0i64; n as usize];
        for k in -6i64..=6 {
            if k * k < n {
                s[(k * k) as usize] += 1;
            }
        }
        let sq = QExpansion::from_ints(0, &s).pow(2);
        for m in 0..n {
            let count = (-6i64..=6).flat_map(|a| (-6i64..=6).map(move |b| (a, b))).filter(|(a, b)| a * a + b * b == m).count();
            assert_eq!(sq.coeff(m as usize).unwrap(), &Rational::from_integer(count.into()));
        }
        assert_eq!(&sq.coeffs()[..5], QExpansion::from_ints(0, &[1, 4, 4, 0, 4]).coeffs());
    }

    #[test]
    fn precision_is_the_minimum() {
        let f = QExpansion::from_ints(1, &[1, 1, 1, 1, 1]);
        let g = QExpansion::from_ints(4, &[1, 1]);
        let h = f.mul(&g);
        assert_eq!(h.precision(), 2);
        assert_eq!(h.twice_weight(), 5);
        assert!(f.add(&g).is_err());
    }
}
