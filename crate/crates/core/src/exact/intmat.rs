//! Small dense integer matrices: determinants, adjugates, Smith normal form
//! and linear algebra over F_p.

pub type IMat = Vec<Vec<i128>>;

pub fn identity(n: usize) -> IMat {
    (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect()
}

pub fn transpose(a: &IMat) -> IMat {
    let cols = a.first().map_or(0, |r| r.len());
    (0..cols).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}

pub fn matmul(a: &IMat, b: &IMat) -> IMat {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter().map(|r| (0..cols).map(|j| (0..inner).map(|k| r[k] * b[k][j]).sum()).collect()).collect()
}

pub fn mat_vec(a: &IMat, x: &[i128]) -> Vec<i128> {
    a.iter().map(|r| r.iter().zip(x).map(|(u, v)| u * v).sum()).collect()
}

/// `x^t A x`.
pub fn quad_value(a: &IMat, x: &[i128]) -> i128 {
    x.iter().zip(mat_vec(a, x)).map(|(u, v)| u * v).sum()
}

/// `A[U] = U^t A U`.
pub fn congruence(a: &IMat, u: &IMat) -> IMat {
    matmul(&matmul(&transpose(u), a), u)
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det(a: &IMat) -> i128 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    let mut m = a.clone();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            let Some(r) = (k + 1..n).find(|&r| m[r][k] != 0) else {
                return 0;
            };
            m.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

fn minor(a: &IMat, row: usize, col: usize) -> IMat {
    a.iter()
        .enumerate()
        .filter(|(i, _)| *i != row)
        .map(|(_, r)| r.iter().enumerate().filter(|(j, _)| *j != col).map(|(_, &x)| x).collect())
        .collect()
}

/// Adjugate, so that `A * adj(A) = det(A) * I`.
pub fn adjugate(a: &IMat) -> IMat {
    let n = a.len();
    if n == 1 {
        return vec![vec![1]];
    }
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let s = if (i + j) % 2 == 0 { 1 } else { -1 };
                    s * det(&minor(a, j, i))
                })
                .collect()
        })
        .collect()
}

/// Inverse of a unimodular matrix.
pub fn unimodular_inverse(a: &IMat) -> IMat {
    let d = det(a);
    assert!(d == 1 || d == -1, "matrix is not unimodular");
    adjugate(a).into_iter().map(|r| r.into_iter().map(|x| x * d).collect()).collect()
}

/// Leading principal minors `d_1, ..., d_n`.
pub fn leading_minors(a: &IMat) -> Vec<i128> {
    (1..=a.len()).map(|k| det(&a[..k].iter().map(|r| r[..k].to_vec()).collect())).collect()
}

pub fn is_positive_definite(a: &IMat) -> bool {
    leading_minors(a).iter().all(|&d| d > 0)
}

/// Smith normal form: `(u, d, v)` with `u * a * v = diag(d)`, `u`, `v`
/// unimodular and `d[i] | d[i + 1]`, all `d[i] >= 0`. Square input only.
pub fn smith(a: &IMat) -> (IMat, Vec<i128>, IMat) {
    let n = a.len();
    let mut m = a.clone();
    let mut u = identity(n);
    let mut v = identity(n);
    for t in 0..n {
        loop {
            // smallest nonzero entry in the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    if m[i][j] != 0 && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                break;
            };
            m.swap(t, pi);
            u.swap(t, pi);
            for r in m.iter_mut() {
                r.swap(t, pj);
            }
            for r in v.iter_mut() {
                r.swap(t, pj);
            }
            let piv = m[t][t];
            let mut clean = true;
            for i in t + 1..n {
                let q = m[i][t].div_euclid(piv);
                if q != 0 {
                    for j in 0..n {
                        m[i][j] -= q * m[t][j];
                        u[i][j] -= q * u[t][j];
                    }
                }
                clean &= m[i][t] == 0;
            }
            for j in t + 1..n {
                let q = m[t][j].div_euclid(piv);
                if q != 0 {
                    for i in 0..n {
                        m[i][j] -= q * m[i][t];
                        v[i][j] -= q * v[i][t];
                    }
                }
                clean &= m[t][j] == 0;
            }
            if !clean {
                continue;
            }
            // pivot must divide the rest of the block
            let bad = (t + 1..n).flat_map(|i| (t + 1..n).map(move |j| (i, j))).find(|&(i, j)| m[i][j] % piv != 0);
            match bad {
                Some((i, _)) => {
                    for j in 0..n {
                        m[t][j] += m[i][j];
                        u[t][j] += u[i][j];
                    }
                }
                None => break,
            }
        }
        if m[t][t] < 0 {
            for j in 0..n {
                m[t][j] = -m[t][j];
                u[t][j] = -u[t][j];
            }
        }
    }
    let d = (0..n).map(|i| m[i][i]).collect();
    (u, d, v)
}

fn modp(x: i128, p: u64) -> u64 {
    x.rem_euclid(p as i128) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    super::arith::mod_pow(a, p - 2, p)
}

/// Row echelon form over F_p, returning the reduced matrix and pivot columns.
fn rref_mod(a: &IMat, p: u64) -> (Vec<Vec<u64>>, Vec<usize>) {
    let mut m: Vec<Vec<u64>> = a.iter().map(|r| r.iter().map(|&x| modp(x, p)).collect()).collect();
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, pr);
        let inv = inv_mod(m[r][c], p);
        for x in m[r].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for j in 0..cols {
                    m[i][j] = (m[i][j] + p * p - f * m[r][j] % p) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

/// Rank over F_p (`p` prime).
pub fn rank_mod(a: &IMat, p: u64) -> usize {
    rref_mod(a, p).1.len()
}

/// Basis of the right kernel over F_p, entries in `0..p`.
pub fn kernel_mod(a: &IMat, p: u64) -> Vec<Vec<u64>> {
    let cols = a.first().map_or(0, |r| r.len());
    let (m, pivots) = rref_mod(a, p);
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = vec![0u64; cols];
            v[f] = 1;
            for (i, &c) in pivots.iter().enumerate() {
                v[c] = (p - m[i][f]) % p;
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn diag_of(u: &IMat, a: &IMat, v: &IMat) -> IMat {
        matmul(&matmul(u, a), v)
    }

    #[test]
    fn determinants() {
        assert_eq!(det(&vec![vec![2, 1], vec![1, 2]]), 3);
        assert_eq!(det(&vec![vec![0, 1], vec![1, 0]]), -1);
        assert_eq!(det(&vec![vec![2, 0, 0], vec![0, 2, 1], vec![0, 1, 2]]), 6);
    }

    #[test]
    fn smith_example() {
        let a = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        let (u, d, v) = smith(&a);
        assert_eq!(d, vec![2, 6, 12]);
        let dm = diag_of(&u, &a, &v);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(dm[i][j], if i == j { d[i] } else { 0 });
            }
        }
    }

    #[test]
    fn kernel_over_f2() {
        let a = vec![vec![2, 1], vec![1, 2]];
        assert_eq!(rank_mod(&a, 3), 1);
        assert_eq!(kernel_mod(&a, 3), vec![vec![1, 1]]);
        assert_eq!(rank_mod(&a, 2), 2);
    }

    proptest! {
        #[test]
        fn smith_is_a_factorisation(e in proptest::collection::vec(-9i128..10, 9)) {
            let a: IMat = (0..3).map(|i| e[3 * i..3 * i + 3].to_vec()).collect();
            let (u, d, v) = smith(&a);
            prop_assert_eq!(det(&u).abs(), 1);
            prop_assert_eq!(det(&v).abs(), 1);
            let dm = diag_of(&u, &a, &v);
            for i in 0..3 {
                for j in 0..3 {
                    prop_assert_eq!(dm[i][j], if i == j { d[i] } else { 0 });
                }
            }
            for i in 0..2 {
                prop_assert!(d[i + 1] == 0 || (d[i] != 0 && d[i + 1] % d[i] == 0));
            }
            prop_assert_eq!(d.iter().product::<i128>(), det(&a).abs());
            let ui = unimodular_inverse(&u);
            prop_assert_eq!(matmul(&u, &ui), identity(3));
        }
    }
}
