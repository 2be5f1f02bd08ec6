//! Brute-force Siegel series: `b_p(h, s) = sum_alpha e_p(-tr(h alpha)) nu(alpha)^(-s)`
//! over symmetric `alpha` in `Q_p / Z_p`, truncated by the power of `t = p^(-s)`.
//!
//! The `alpha` with `nu(alpha) = p^j` are grouped by the lattice
//! `M = alpha Z^m + Z^m`, an overlattice of `Z^m` of index `p^j`. Writing
//! `M = W diag(p^-a) Z^m` with `W` unimodular, the `alpha` belonging to `M` are
//! exactly `W beta W^t` with `beta_ik` in `p^-min(a_i, a_k) Z / Z` and
//! `nu(beta) = p^j`, and `tr(h alpha) = tr(W^t h W beta)`.

use rayon::prelude::*;

use super::capability::CapabilityTable;
use crate::error::{internal, usage, Result};
use crate::exact::arith::valuation;
use crate::exact::intmat::{self, IMat};
use crate::exact::rational::Rational;
use crate::quadform::HalfIntegralForm;

/// `nu(alpha)` for a symmetric matrix whose denominators are powers of `p`;
/// returns the exponent `e` with `nu = p^e`.
pub fn nu_exponent(alpha: &[Vec<Rational>], p: u64) -> Result<u32> {
    let mut top = 0u32;
    for x in alpha.iter().flatten() {
        let den = x.denom();
        let d: i128 = den.try_into().map_err(|_| usage!("denominator too large"))?;
        let v = if d == 1 { 0 } else { valuation(d, p) };
        if (p as i128).pow(v) != d {
            return Err(usage!("denominator {d} is not a power of {p}"));
        }
        top = top.max(v);
    }
    let scale = Rational::from_integer((p as i128).pow(top).into());
    let scaled: IMat =
        alpha.iter().map(|r| r.iter().map(|x| (x * &scale).to_integer().try_into().expect("small entries")).collect()).collect();
    Ok(nu_of_scaled(&scaled, p, top))
}

/// `nu` exponent of `beta = B / p^j` for an integer matrix `B`.
fn nu_of_scaled(b: &IMat, p: u64, j: u32) -> u32 {
    let (_, d, _) = intmat::smith(b);
    d.iter().map(|&x| if x == 0 { 0 } else { j.saturating_sub(valuation(x, p).min(j)) }).sum()
}

/// Upper triangular `C` with diagonal `p^(a_i)`, `sum a_i = j`, and entries above
/// the diagonal reduced modulo the diagonal entry of their column: one per
/// overlattice `C^-1 Z^m` of `Z^m` of index `p^j`.
pub fn hermite_forms(m: usize, p: u64, j: u32) -> Vec<IMat> {
    let mut out = Vec::new();
    let mut exps = vec![0u32; m];
    fn split(k: usize, left: u32, exps: &mut Vec<u32>, all: &mut Vec<Vec<u32>>) {
        if k + 1 == exps.len() {
            exps[k] = left;
            all.push(exps.clone());
            return;
        }
        for a in 0..=left {
            exps[k] = a;
            split(k + 1, left - a, exps, all);
        }
    }
    let mut all = Vec::new();
    split(0, j, &mut exps, &mut all);
    for a in all {
        let diag: Vec<i128> = a.iter().map(|&e| (p as i128).pow(e)).collect();
        let slots: Vec<(usize, usize)> = (0..m).flat_map(|i| (0..i).map(move |k| (k, i))).collect();
        let mut c: IMat = (0..m).map(|r| (0..m).map(|s| if r == s { diag[r] } else { 0 }).collect()).collect();
        fn fill(idx: usize, slots: &[(usize, usize)], diag: &[i128], c: &mut IMat, out: &mut Vec<IMat>) {
            if idx == slots.len() {
                out.push(c.clone());
                return;
            }
            let (k, i) = slots[idx];
            for v in 0..diag[i] {
                c[k][i] = v;
                fill(idx + 1, slots, diag, c, out);
            }
            c[k][i] = 0;
        }
        fill(0, &slots, &diag, &mut c, &mut out);
    }
    out
}

/// Counts of `alpha` with `nu(alpha) = p^j`, indexed by `p^j tr(h alpha) mod p^j`.
pub fn trace_counts(h: &HalfIntegralForm, p: u64, j: u32) -> Vec<u64> {
    let q = (p as i128).pow(j);
    let m = h.size();
    let lattices = hermite_forms(m, p, j);
    let zero = || vec![0u64; q as usize];
    lattices
        .par_iter()
        .map(|c| {
            let mut counts = zero();
            lattice_counts(h.even(), c, p, j, &mut counts);
            counts
        })
        .reduce(zero, |mut a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
            a
        })
}

fn lattice_counts(s: &IMat, c: &IMat, p: u64, j: u32, counts: &mut [u64]) {
    let m = s.len();
    let q = (p as i128).pow(j);
    let (_, d, w) = intmat::smith(c);
    let a: Vec<u32> = d.iter().map(|&x| valuation(x, p)).collect();
    // S' = W^t S W is the doubled form in the new coordinates
    let s2 = intmat::congruence(s, &w);
    let slots: Vec<(usize, usize)> = (0..m).flat_map(|i| (i..m).map(move |k| (i, k))).collect();
    let steps: Vec<i128> = slots.iter().map(|&(i, k)| (p as i128).pow(j - a[i].min(a[k]))).collect();
    let ranges: Vec<i128> = slots.iter().map(|&(i, k)| (p as i128).pow(a[i].min(a[k]))).collect();
    // trace weight of each slot: S'_ii / 2 on the diagonal, S'_ik off it
    let weights: Vec<i128> = slots.iter().map(|&(i, k)| if i == k { s2[i][i] / 2 } else { s2[i][k] }).collect();
    let mut digits = vec![0i128; slots.len()];
    let mut b: IMat = vec![vec![0; m]; m];
    loop {
        let mut t = 0i128;
        for (idx, &(i, k)) in slots.iter().enumerate() {
            let v = digits[idx] * steps[idx];
            b[i][k] = v;
            b[k][i] = v;
            t += weights[idx] * v;
        }
        if nu_of_scaled(&b, p, j) == j {
            counts[t.rem_euclid(q) as usize] += 1;
        }
        let mut idx = 0;
        loop {
            if idx == slots.len() {
                return;
            }
            digits[idx] += 1;
            if digits[idx] < ranges[idx] {
                break;
            }
            digits[idx] = 0;
            idx += 1;
        }
    }
}

/// `sum_t counts[t] zeta^t` for a primitive `p^j`-th root of unity `zeta`,
/// which must be a rational integer.
pub fn reduce_cyclotomic(counts: &[u64], p: u64, j: u32) -> Result<i128> {
    if j == 0 {
        return Ok(counts[0] as i128);
    }
    let step = (p as usize).pow(j - 1);
    for r in 0..step {
        let coset: Vec<u64> = (0..p as usize).map(|i| counts[r + i * step]).collect();
        let tail = if r == 0 { &coset[1..] } else { &coset[..] };
        if tail.iter().any(|&x| x != tail[0]) {
            return Err(internal!("character sum at p = {p}, j = {j} is not a rational integer (coset {r})"));
        }
    }
    Ok(counts[0] as i128 - counts[step] as i128)
}

/// Coefficients of `t^0 .. t^j_max` of `b_p(h, s)`.
pub fn siegel_bruteforce(h: &HalfIntegralForm, p: u64, j_max: u32, caps: &CapabilityTable) -> Result<Vec<i128>> {
    caps.check(h.size(), p, j_max)?;
    (0..=j_max).map(|j| reduce_cyclotomic(&trace_counts(h, p, j), p, j)).collect()
}

/// Reference implementation: every symmetric `alpha` in `p^-j_max Z / Z`,
/// sorted by `nu` directly. Feasible only for tiny `p^j_max`.
pub fn siegel_naive(h: &HalfIntegralForm, p: u64, j_max: u32) -> Result<Vec<i128>> {
    let m = h.size();
    let q = (p as i128).pow(j_max);
    let s = h.even();
    let slots: Vec<(usize, usize)> = (0..m).flat_map(|i| (i..m).map(move |k| (i, k))).collect();
    let mut counts: Vec<Vec<u64>> = (0..=j_max).map(|j| vec![0u64; (p as usize).pow(j)]).collect();
    let mut digits = vec![0i128; slots.len()];
    let mut b: IMat = vec![vec![0; m]; m];
    loop {
        let mut t = 0i128;
        for (idx, &(i, k)) in slots.iter().enumerate() {
            b[i][k] = digits[idx];
            b[k][i] = digits[idx];
            t += digits[idx] * if i == k { s[i][i] / 2 } else { s[i][k] };
        }
        let e = nu_of_scaled(&b, p, j_max);
        if e <= j_max {
            // alpha = B / p^j_max has nu = p^e and trace t / p^j_max, i.e. t / p^(j_max - e) / p^e
            let shift = (p as i128).pow(j_max - e);
            let te = t.rem_euclid(q);
            debug_assert_eq!(te % shift, 0);
            counts[e as usize][(te / shift) as usize] += 1;
        }
        let mut idx = 0;
        loop {
            if idx == slots.len() {
                return (0..=j_max).map(|j| reduce_cyclotomic(&counts[j as usize], p, j)).collect();
            }
            digits[idx] += 1;
            if digits[idx] < q {
                break;
            }
            digits[idx] = 0;
            idx += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};

    #[test]
    fn nu_examples() {
        assert_eq!(nu_exponent(&[vec![int(1), int(2)], vec![int(2), int(5)]], 3).unwrap(), 0);
        assert_eq!(nu_exponent(&[vec![rat(1, 3), int(0)], vec![int(0), rat(1, 3)]], 3).unwrap(), 2);
        assert_eq!(nu_exponent(&[vec![rat(1, 25), int(0)], vec![int(0), rat(1, 5)]], 5).unwrap(), 3);
        assert!(nu_exponent(&[vec![rat(1, 6)]], 2).is_err());
    }

    #[test]
    fn hermite_form_counts() {
        // number of index p^j overlattices of Z^2 is (p^(j+1) - 1) / (p - 1)
        for p in [2u64, 3, 5] {
            for j in 0..4 {
                let expect = ((p as usize).pow(j + 1) - 1) / (p as usize - 1);
                assert_eq!(hermite_forms(2, p, j).len(), expect);
            }
        }
    }

    #[test]
    fn lattice_method_matches_naive() {
        let caps = CapabilityTable::default();
        for (form, p, j) in
            [("2,1;1,2", 2u64, 3u32), ("2,1;1,2", 3, 2), ("2,0;0,2", 2, 3), ("2,1;1,4", 5, 2), ("4,2;2,4", 3, 2), ("2,0;0,6", 3, 2)]
        {
            let h = HalfIntegralForm::parse(form).unwrap();
            assert_eq!(siegel_bruteforce(&h, p, j, &caps).unwrap(), siegel_naive(&h, p, j).unwrap(), "{form} at {p}");
        }
        let h = HalfIntegralForm::parse("2,1,1,1;1,2,1,1;1,1,2,0;1,1,0,2").unwrap();
        assert_eq!(siegel_bruteforce(&h, 2, 1, &caps).unwrap(), siegel_naive(&h, 2, 1).unwrap());
    }

    #[test]
    fn constant_term_is_one() {
        let caps = CapabilityTable::default();
        let h = HalfIntegralForm::parse("2,1;1,2").unwrap();
        for p in [2, 3, 5] {
            assert_eq!(siegel_bruteforce(&h, p, 1, &caps).unwrap()[0], 1);
        }
    }

    #[test]
    fn capability_is_enforced() {
        let caps = CapabilityTable::default();
        let h = HalfIntegralForm::parse("2,1;1,2").unwrap();
        assert_eq!(siegel_bruteforce(&h, 2, 40, &caps).unwrap_err().exit_code(), 3);
    }
}
