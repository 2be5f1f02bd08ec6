//! Local invariants of quadratic forms: Hilbert symbols, Hasse invariants,
//! the sign `eta_v`, Witt indices, radicals mod p and maximality.

use std::fmt;

use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::form::EvenLattice;
use crate::error::{usage, Result};
use crate::exact::arith::{legendre, prime_divisors, squarefree_split, valuation};
use crate::exact::intmat::{self, IMat};
use crate::exact::rational::Rational;

/// A place of Q.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Place {
    Infinity,
    Prime(u64),
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinity => write!(f, "inf"),
            Place::Prime(p) => write!(f, "{p}"),
        }
    }
}

/// Squarefree integer in the square class of a nonzero rational.
pub fn square_class(x: &Rational) -> i128 {
    assert!(!x.is_zero(), "square class of zero");
    let n = (x.numer() * x.denom()).to_i128().expect("square class representative overflows i128");
    squarefree_split(n).0
}

fn split_p(x: i128, p: u64) -> (u32, i128) {
    let v = valuation(x, p);
    (v, x / (p as i128).pow(v))
}

/// Hilbert symbol on nonzero integers.
pub fn hilbert_int(a: i128, b: i128, v: Place) -> i8 {
    assert!(a != 0 && b != 0, "Hilbert symbol of zero");
    match v {
        Place::Infinity => {
            if a < 0 && b < 0 {
                -1
            } else {
                1
            }
        }
        Place::Prime(2) => {
            let (alpha, u) = split_p(a, 2);
            let (beta, w) = split_p(b, 2);
            let eps = |x: i128| (x.rem_euclid(4) == 3) as u32;
            let omega = |x: i128| matches!(x.rem_euclid(8), 3 | 5) as u32;
            let e = eps(u) * eps(w) + alpha * omega(w) + beta * omega(u);
            if e % 2 == 0 {
                1
            } else {
                -1
            }
        }
        Place::Prime(p) => {
            let (alpha, u) = split_p(a, p);
            let (beta, w) = split_p(b, p);
            let mut s: i8 = if (alpha * beta) % 2 == 1 && p % 4 == 3 { -1 } else { 1 };
            if beta % 2 == 1 {
                s *= legendre(u, p);
            }
            if alpha % 2 == 1 {
                s *= legendre(w, p);
            }
            s
        }
    }
}

pub fn hilbert(a: &Rational, b: &Rational, v: Place) -> i8 {
    hilbert_int(square_class(a), square_class(b), v)
}

/// Diagonal entries of some rational diagonalisation of a nonsingular symmetric matrix.
pub fn diagonalize(s: &[Vec<Rational>]) -> Vec<Rational> {
    let n = s.len();
    let mut m: Vec<Vec<Rational>> = s.to_vec();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        if m[k][k].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !m[j][j].is_zero()) {
                m.swap(k, j);
                for row in m.iter_mut() {
                    row.swap(k, j);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !m[k][j].is_zero()) {
                // e_k <- e_k + e_j gives diagonal entry 2 m[k][j]
                for i in 0..n {
                    let v = &m[k][i] + &m[j][i];
                    m[k][i] = v;
                }
                for i in 0..n {
                    let v = &m[i][k] + &m[i][j];
                    m[i][k] = v;
                }
            }
        }
        let piv = m[k][k].clone();
        assert!(!piv.is_zero(), "singular matrix in diagonalisation");
        for i in k + 1..n {
            let f = &m[i][k] / &piv;
            if f.is_zero() {
                continue;
            }
            for j in k..n {
                let v = &m[i][j] - &f * &m[k][j];
                m[i][j] = v;
            }
            for j in k..n {
                let v = &m[j][i] - &f * &m[j][k];
                m[j][i] = v;
            }
        }
        out.push(piv);
    }
    out
}

pub fn to_rational_matrix(s: &IMat) -> Vec<Vec<Rational>> {
    s.iter().map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect()).collect()
}

/// Hasse invariant `prod_{i < j} (a_i, a_j)_v` of a diagonalisation `diag(a_1..a_r)`.
pub fn hasse_diag(diag: &[Rational], v: Place) -> i8 {
    let cls: Vec<i128> = diag.iter().map(square_class).collect();
    let mut h = 1;
    for i in 0..cls.len() {
        for j in i + 1..cls.len() {
            h *= hilbert_int(cls[i], cls[j], v);
        }
    }
    h
}

pub fn hasse(s: &[Vec<Rational>], v: Place) -> i8 {
    hasse_diag(&diagonalize(s), v)
}

/// The variant `prod_{i <= j} (a_i, a_j)_v = hasse * (det, -1)_v`, which is the
/// one entering `eta_v`.
pub fn hasse_inclusive(s: &IMat, v: Place) -> i8 {
    hasse(&to_rational_matrix(s), v) * hilbert_int(det_class(s), -1, v)
}

fn det_class(s: &IMat) -> i128 {
    squarefree_split(intmat::det(s)).0
}

/// `eta_v(S) = h_v(S) (det S, (-1)^(n-1) det S)_v (-1,-1)_v^(n(n-1)/2)` for `S` of rank `2n - 1`.
pub fn eta(s: &EvenLattice, v: Place) -> Result<i8> {
    let r = s.rank();
    if r % 2 == 0 {
        return Err(usage!("eta needs odd rank, got {r}"));
    }
    let n = (r + 1) / 2;
    let d = det_class(s.gram());
    let sign = if (n - 1) % 2 == 0 { 1 } else { -1 };
    let mut e = hasse_inclusive(s.gram(), v) * hilbert_int(d, sign * d, v);
    if (n * (n - 1) / 2) % 2 == 1 {
        e *= hilbert_int(-1, -1, v);
    }
    Ok(e)
}

fn is_local_square(x: i128, p: u64) -> bool {
    let (v, u) = split_p(x, p);
    v % 2 == 0 && if p == 2 { u.rem_euclid(8) == 1 } else { legendre(u, p) == 1 }
}

/// Witt index over `Q_p` from rank, determinant class and Hasse invariant.
fn witt_from_invariants(rank: usize, d: i128, eps: i8, p: u64) -> usize {
    let isotropic = match rank {
        0 | 1 => false,
        2 => is_local_square(-d, p),
        3 => hilbert_int(-1, -d, Place::Prime(p)) == eps,
        4 => !is_local_square(d, p) || eps == hilbert_int(-1, -1, Place::Prime(p)),
        _ => true,
    };
    if !isotropic {
        return 0;
    }
    // split off a hyperbolic plane: d' = -d, eps' = eps (-1, -d)
    let d2 = squarefree_split(-d).0;
    let eps2 = eps * hilbert_int(-1, d2, Place::Prime(p));
    1 + witt_from_invariants(rank - 2, d2, eps2, p)
}

/// Witt index of a nonsingular symmetric integer matrix over `Q_p`.
pub fn witt_index(s: &IMat, p: u64) -> usize {
    let eps = hasse(&to_rational_matrix(s), Place::Prime(p));
    witt_from_invariants(s.len(), det_class(s), eps, p)
}

/// Dimension of the radical of `(L/pL, S[x]/2 mod p)`.
///
/// At `p = 2` this is the quadratic radical: vectors in the kernel of the polar
/// form `S mod 2` on which `S[x]/2` also vanishes.
pub fn radical_dim(s: &EvenLattice, p: u64) -> usize {
    let g = s.gram();
    let r = s.rank();
    if p != 2 {
        return r - intmat::rank_mod(g, p);
    }
    let ker = intmat::kernel_mod(g, 2);
    // q restricted to the polar radical is additive, so it is either zero or kills a hyperplane
    let q_nonzero = ker.iter().any(|x| {
        let xi: Vec<i128> = x.iter().map(|&c| c as i128).collect();
        (intmat::quad_value(g, &xi) / 2) % 2 != 0
    });
    ker.len() - usize::from(q_nonzero)
}

/// True when no even integral lattice strictly contains `L`.
pub fn is_maximal(s: &EvenLattice) -> bool {
    let d = s.det();
    prime_divisors(d).into_iter().filter(|&p| d % (p as i128 * p as i128) == 0).all(|p| overlattice_vector(s, p).is_none())
}

/// A vector `x` not in `pL` with `Sx = 0 mod p` and `S[x] = 0 mod 2p^2`, if any.
/// Then `L + Z x/p` is an even integral overlattice.
pub fn overlattice_vector(s: &EvenLattice, p: u64) -> Option<Vec<i128>> {
    let g = s.gram();
    let basis = intmat::kernel_mod(g, p);
    let k = basis.len();
    let modulus = 2 * (p as i128) * (p as i128);
    let total = (p as u128).checked_pow(k as u32).expect("kernel too large to enumerate");
    for idx in 1..total {
        let mut coeffs = Vec::with_capacity(k);
        let mut t = idx;
        for _ in 0..k {
            coeffs.push((t % p as u128) as i128);
            t /= p as u128;
        }
        let x: Vec<i128> =
            (0..s.rank()).map(|i| coeffs.iter().zip(&basis).map(|(c, b)| c * b[i] as i128).sum::<i128>() % p as i128).collect();
        if intmat::quad_value(g, &x) % modulus == 0 {
            return Some(x);
        }
    }
    None
}

/// Comparison of the Witt index with `eta_p`: which of `n = 2 nu + 2 - eta`
/// and `2n - 1 = 2 nu + 2 - eta` holds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WittDiagnostic {
    pub p: u64,
    pub n: usize,
    pub witt_index: usize,
    pub eta: i8,
    pub holds_for_n: bool,
    pub holds_for_rank: bool,
}

pub fn witt_diagnostic(s: &EvenLattice, p: u64) -> Result<WittDiagnostic> {
    let e = eta(s, Place::Prime(p))?;
    let nu = witt_index(s.gram(), p);
    let n = (s.rank() + 1) / 2;
    let rhs = 2 * nu as i64 + 2 - e as i64;
    Ok(WittDiagnostic { p, n, witt_index: nu, eta: e, holds_for_n: rhs == n as i64, holds_for_rank: rhs == s.rank() as i64 })
}

/// All places relevant to a form: infinity and the primes dividing `2 det S`.
pub fn bad_places(det: i128) -> Vec<Place> {
    let mut places = vec![Place::Infinity];
    places.extend(prime_divisors(2 * det).into_iter().map(Place::Prime));
    places
}

/// Hilbert symbol by search: `(a, b)_p = 1` iff `a x^2 + b y^2` takes a nonzero
/// square value in `Q_p`, which is witnessed by small integers `x, y`. Test oracle only.
pub fn hilbert_bruteforce(a: i128, b: i128, p: u64) -> i8 {
    let range = (p as i128).pow(if p == 2 { 4 } else { 3 });
    for x in 0..range {
        for y in 0..range {
            let t = a * x * x + b * y * y;
            if t != 0 && is_local_square(t, p) {
                return 1;
            }
        }
    }
    -1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};
    use crate::quadform::form::EvenLattice;
    use proptest::prelude::*;

    #[test]
    fn hilbert_examples() {
        for v in [Place::Infinity, Place::Prime(2), Place::Prime(3), Place::Prime(5)] {
            assert_eq!(hilbert(&int(1), &int(7), v), 1);
        }
        assert_eq!(hilbert_int(-1, -1, Place::Infinity), -1);
        assert_eq!(hilbert_int(-1, -1, Place::Prime(2)), -1);
        assert_eq!(hilbert_bruteforce(-1, -1, 2), -1);
        assert_eq!(hilbert(&rat(2, 9), &int(3), Place::Prime(5)), 1);
    }

    #[test]
    fn hilbert_matches_bruteforce() {
        let vals = [-15i128, -6, -5, -3, -2, -1, 1, 2, 3, 5, 6, 7, 10, 12, 18];
        for p in [2u64, 3, 5] {
            for &a in &vals {
                for &b in &vals {
                    assert_eq!(hilbert_int(a, b, Place::Prime(p)), hilbert_bruteforce(a, b, p), "({a},{b})_{p}");
                }
            }
        }
    }

    #[test]
    fn hasse_examples() {
        let id = to_rational_matrix(&intmat::identity(4));
        for v in [Place::Infinity, Place::Prime(2), Place::Prime(3)] {
            assert_eq!(hasse(&id, v), 1);
        }
        let d = vec![int(2), int(3)];
        assert_eq!(hasse_diag(&d, Place::Prime(5)), 1);
        assert_eq!(hasse_diag(&[int(1), int(-1)], Place::Infinity), 1);
    }

    #[test]
    fn eta_pinned_values() {
        // A1 + A2 has det(2B)/2 = 3
        let s = EvenLattice::parse("2,0,0;0,2,1;0,1,2").unwrap();
        assert_eq!(eta(&s, Place::Prime(3)).unwrap(), -1);
        assert_eq!(eta(&s, Place::Infinity).unwrap(), -1);
        assert_eq!(eta(&s, Place::Prime(5)).unwrap(), 1);
        assert_eq!(eta(&s, Place::Prime(2)).unwrap(), 1);
        let one = EvenLattice::parse("6").unwrap();
        assert_eq!(eta(&one, Place::Infinity).unwrap(), 1);
        assert_eq!(eta(&one, Place::Prime(3)).unwrap(), 1);
        assert!(eta(&EvenLattice::parse("2,1;1,2").unwrap(), Place::Infinity).is_err());
    }

    #[test]
    fn inclusive_hasse_matches_direct_product() {
        let s = EvenLattice::parse("2,0,0;0,2,1;0,1,2").unwrap();
        let diag = diagonalize(&to_rational_matrix(s.gram()));
        let cls: Vec<i128> = diag.iter().map(square_class).collect();
        for v in bad_places(s.det()) {
            let mut direct = 1;
            for i in 0..3 {
                for j in i..3 {
                    direct *= hilbert_int(cls[i], cls[j], v);
                }
            }
            assert_eq!(hasse_inclusive(s.gram(), v), direct);
        }
        // with the strict product alone eta_3 would come out +1
        assert_eq!(hasse(&to_rational_matrix(s.gram()), Place::Prime(3)), 1);
        assert_eq!(hasse_inclusive(s.gram(), Place::Prime(3)), -1);
    }

    #[test]
    fn witt_relation_on_ternary_forms() {
        for p in [2u64, 3, 5, 7] {
            let b = crate::quadform::find_prime_disc_form(p, 3).unwrap();
            let diag = witt_diagnostic(&b.lattice(), p).unwrap();
            assert!(diag.holds_for_rank, "{diag:?}");
            assert!(!diag.holds_for_n, "{diag:?}");
        }
    }

    #[test]
    fn witt_examples() {
        assert_eq!(witt_index(&vec![vec![0, 1], vec![1, 0]], 3), 1);
        assert_eq!(witt_index(&intmat::identity(3), 5), 1);
        // norm form of the quaternions ramified at 2 and infinity
        assert_eq!(witt_index(&intmat::identity(4), 2), 0);
        assert_eq!(witt_index(&intmat::identity(4), 3), 2);
    }

    #[test]
    fn radical_examples() {
        let s = EvenLattice::parse("2,0,0;0,2,0;0,0,2").unwrap();
        assert_eq!(radical_dim(&s, 3), 0);
        let s = EvenLattice::parse("2,0;0,10").unwrap();
        assert_eq!(radical_dim(&s, 5), 1);
        let s = EvenLattice::parse("18,9;9,18").unwrap();
        assert_eq!(radical_dim(&s, 3), 2);
        let s = EvenLattice::parse("8,4;4,8").unwrap();
        assert_eq!(radical_dim(&s, 2), 2);
        // (2): q(x) = x^2 is nonzero on the polar radical
        assert_eq!(radical_dim(&EvenLattice::parse("2").unwrap(), 2), 0);
    }

    #[test]
    fn maximality_examples() {
        assert!(is_maximal(&EvenLattice::parse("2,1;1,2").unwrap()));
        assert!(is_maximal(&EvenLattice::parse("2,0,0;0,2,0;0,0,2").unwrap()));
        assert!(!is_maximal(&EvenLattice::parse("2,0,0;0,2,0;0,0,8").unwrap()));
        // E8 is unimodular
        let e8 = "2,-1,0,0,0,0,0,0;-1,2,-1,0,0,0,0,0;0,-1,2,-1,0,0,0,-1;0,0,-1,2,-1,0,0,0;\
                  0,0,0,-1,2,-1,0,0;0,0,0,0,-1,2,-1,0;0,0,0,0,0,-1,2,0;0,0,-1,0,0,0,0,2";
        let e8 = EvenLattice::parse(&e8.replace(' ', "")).unwrap();
        assert_eq!(e8.det(), 1);
        assert!(is_maximal(&e8));
    }

    fn random_unimodular(seed: &[i128]) -> IMat {
        // product of elementary matrices
        let mut u = intmat::identity(3);
        for (k, &c) in seed.iter().enumerate() {
            let (i, j) = [(0, 1), (1, 2), (2, 0), (1, 0), (2, 1), (0, 2)][k % 6];
            let mut e = intmat::identity(3);
            e[i][j] = c;
            u = intmat::matmul(&u, &e);
        }
        u
    }

    proptest! {
        #[test]
        fn hilbert_reciprocity(a in -300i128..300, b in -300i128..300) {
            prop_assume!(a != 0 && b != 0);
            let prod: i8 = bad_places(a * b).into_iter().map(|v| hilbert_int(a, b, v)).product();
            prop_assert_eq!(prod, 1);
        }

        #[test]
        fn hasse_is_a_class_invariant(seed in proptest::collection::vec(-2i128..3, 6), which in 0usize..4) {
            let s = [ "2,0,0;0,2,1;0,1,2", "2,1,1;1,4,1;1,1,6", "4,2,0;2,6,3;0,3,10", "2,0,0;0,6,0;0,0,10"][which];
            let s = EvenLattice::parse(s).unwrap();
            let u = random_unimodular(&seed);
            let t = intmat::congruence(s.gram(), &u);
            // also rescale the diagonalisation by squares
            for v in bad_places(s.det()) {
                prop_assert_eq!(hasse(&to_rational_matrix(s.gram()), v), hasse(&to_rational_matrix(&t), v));
                let d: Vec<Rational> = diagonalize(&to_rational_matrix(&t)).into_iter().map(|x| x * int(9)).collect();
                prop_assert_eq!(hasse_diag(&d, v), hasse(&to_rational_matrix(&t), v));
            }
        }
    }
}
