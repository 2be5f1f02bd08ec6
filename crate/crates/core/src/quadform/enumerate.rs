//! Enumeration of GL_m(Z)-classes of positive definite half-integral forms
//! of small size, and lookup of arbitrary forms in such a list.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::form::HalfIntegralForm;
use crate::error::{capability, data_err, usage, Result};
use crate::exact::arith::isqrt;
use crate::exact::intmat::{self, IMat};

/// Largest `D` accepted by [`enumerate_forms`] for each size.
pub fn max_disc(m: usize) -> u64 {
    match m {
        1 => 100_000,
        2 => 5_000,
        3 => 400,
        4 => 256,
        _ => 0,
    }
}

/// `lambda_m` with `prod s_ii <= lambda_m det S` for Minkowski-reduced `S`, as a fraction.
fn hermite_product_bound(m: usize) -> (i128, i128) {
    match m {
        1 => (1, 1),
        2 => (4, 3),
        3 => (2, 1),
        4 => (4, 1),
        _ => unreachable!(),
    }
}

/// Nonzero `x` with `S[x] <= bound`, from the box `|x_i| <= sqrt(bound (S^-1)_ii)`.
pub fn short_vectors(s: &IMat, bound: i128) -> Vec<(Vec<i128>, i128)> {
    let m = s.len();
    let det = intmat::det(s);
    let adj = intmat::adjugate(s);
    let radius: Vec<i128> = (0..m).map(|i| isqrt((bound * adj[i][i] / det).max(0) as u128) as i128).collect();
    let mut out = Vec::new();
    let mut x: Vec<i128> = radius.iter().map(|r| -r).collect();
    if m == 0 {
        return out;
    }
    loop {
        if x.iter().any(|&c| c != 0) {
            let q = intmat::quad_value(s, &x);
            if q <= bound {
                out.push((x.clone(), q));
            }
        }
        let mut i = 0;
        loop {
            if i == m {
                return out;
            }
            if x[i] < radius[i] {
                x[i] += 1;
                break;
            }
            x[i] = -radius[i];
            i += 1;
        }
    }
}

/// Pairwise size reduction with sorting of the diagonal; returns `(S[U], U)`.
pub fn greedy_reduce(s: &IMat) -> (IMat, IMat) {
    let m = s.len();
    let mut u = intmat::identity(m);
    let mut t = s.clone();
    loop {
        let mut changed = false;
        for j in 0..m {
            for i in 0..m {
                if i == j || t[j][j] == 0 {
                    continue;
                }
                // b_i <- b_i - q b_j with q the nearest integer to t_ij / t_jj
                let q = (2 * t[i][j] + t[j][j]).div_euclid(2 * t[j][j]);
                if q != 0 {
                    let mut e = intmat::identity(m);
                    e[j][i] = -q;
                    t = intmat::congruence(&t, &e);
                    u = intmat::matmul(&u, &e);
                    changed = true;
                }
            }
        }
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by_key(|&i| (t[i][i], i));
        if order.iter().enumerate().any(|(k, &i)| k != i) {
            let mut perm = vec![vec![0i128; m]; m];
            for (k, &i) in order.iter().enumerate() {
                perm[i][k] = 1;
            }
            t = intmat::congruence(&t, &perm);
            u = intmat::matmul(&u, &perm);
            changed = true;
        }
        if !changed {
            return (t, u);
        }
    }
}

/// Some `U` with `T[U] = S`, if the two forms are isometric.
pub fn isometry(s: &IMat, t: &IMat) -> Option<IMat> {
    let m = s.len();
    if t.len() != m || intmat::det(s) != intmat::det(t) {
        return None;
    }
    let bound = (0..m).map(|i| s[i][i]).max().unwrap_or(0);
    let vecs = short_vectors(t, bound);
    let candidates: Vec<Vec<&Vec<i128>>> = (0..m).map(|i| vecs.iter().filter(|(_, q)| *q == s[i][i]).map(|(v, _)| v).collect()).collect();
    let tv: Vec<Vec<i128>> = vecs.iter().map(|(v, _)| intmat::mat_vec(t, v)).collect();
    let tv_of = |v: &Vec<i128>| -> Vec<i128> {
        let k = vecs.iter().position(|(w, _)| w == v).expect("vector from list");
        tv[k].clone()
    };
    let mut chosen: Vec<&Vec<i128>> = Vec::with_capacity(m);
    let mut images: Vec<Vec<i128>> = Vec::with_capacity(m);
    fn search<'a>(
        i: usize,
        s: &IMat,
        candidates: &[Vec<&'a Vec<i128>>],
        chosen: &mut Vec<&'a Vec<i128>>,
        images: &mut Vec<Vec<i128>>,
        tv_of: &dyn Fn(&Vec<i128>) -> Vec<i128>,
    ) -> bool {
        if i == s.len() {
            return true;
        }
        for v in &candidates[i] {
            let ok = (0..i).all(|j| images[j].iter().zip(v.iter()).map(|(a, b)| a * b).sum::<i128>() == s[j][i]);
            if ok {
                chosen.push(v);
                images.push(tv_of(v));
                if search(i + 1, s, candidates, chosen, images, tv_of) {
                    return true;
                }
                chosen.pop();
                images.pop();
            }
        }
        false
    }
    if search(0, s, &candidates, &mut chosen, &mut images, &tv_of) {
        let u: IMat = (0..m).map(|r| chosen.iter().map(|v| v[r]).collect()).collect();
        Some(u)
    } else {
        None
    }
}

/// Class invariants used to bucket forms before isometry testing.
fn class_key(s: &IMat) -> (i128, Vec<usize>) {
    let bound = 8;
    let mut counts = vec![0usize; bound as usize / 2];
    for (_, q) in short_vectors(s, bound) {
        counts[(q / 2 - 1) as usize] += 1;
    }
    (intmat::det(s), counts)
}

/// Ordering used to pick one representative per class: smallest diagonal,
/// then largest off-diagonal entries read row by row.
fn canonical_order(s: &IMat) -> (Vec<i128>, Vec<i128>) {
    let m = s.len();
    let diag = (0..m).map(|i| s[i][i]).collect();
    let off = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).map(|(i, j)| -s[i][j]).collect();
    (diag, off)
}

fn candidates_with_diagonal(m: usize, diag: &[i128], det_max: i128) -> Vec<IMat> {
    let (num, den) = hermite_product_bound(m);
    let prod: i128 = diag.iter().product();
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    let mut s: IMat = (0..m).map(|i| (0..m).map(|j| if i == j { diag[i] } else { 0 }).collect()).collect();
    fn rec(k: usize, pairs: &[(usize, usize)], s: &mut IMat, out: &mut Vec<IMat>, det_max: i128, prod: i128, num: i128, den: i128) {
        if k == pairs.len() {
            let d = intmat::det(s);
            if d > 0 && d <= det_max && prod * den <= num * d && intmat::is_positive_definite(s) {
                out.push(s.clone());
            }
            return;
        }
        let (i, j) = pairs[k];
        let r = s[i][i] / 2;
        for v in -r..=r {
            s[i][j] = v;
            s[j][i] = v;
            rec(k + 1, pairs, s, out, det_max, prod, num, den);
        }
        s[i][j] = 0;
        s[j][i] = 0;
    }
    rec(0, &pairs, &mut s, &mut out, det_max, prod, num, den);
    out
}

fn diagonals(m: usize, limit: i128) -> Vec<Vec<i128>> {
    // non-decreasing even diagonals with product at most `limit`
    fn rec(m: usize, start: i128, prod: i128, limit: i128, cur: &mut Vec<i128>, out: &mut Vec<Vec<i128>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        let mut v = start;
        while prod * v.pow((m - cur.len()) as u32) <= limit {
            cur.push(v);
            rec(m, v, prod * v, limit, cur, out);
            cur.pop();
            v += 2;
        }
    }
    let mut out = Vec::new();
    rec(m, 2, 1, limit, &mut Vec::new(), &mut out);
    out
}

/// One representative per GL_m(Z)-class of forms `h` of size `m` with `D_h <= d_max`,
/// ordered by `D`, then by encoding.
pub fn enumerate_forms(m: usize, d_max: u64) -> Result<Vec<HalfIntegralForm>> {
    if !(1..=4).contains(&m) {
        return Err(capability!("form enumeration supports sizes 1 to 4, got {m}"));
    }
    if d_max > max_disc(m) {
        return Err(capability!("D_max = {d_max} exceeds the limit {} for size {m}", max_disc(m)));
    }
    // det(2h) = D for even m and 2D for odd m
    let det_max = d_max as i128 * if m % 2 == 1 { 2 } else { 1 };
    let (num, den) = hermite_product_bound(m);
    let diags = diagonals(m, det_max * num / den);
    let candidates: Vec<IMat> = diags.par_iter().flat_map_iter(|d| candidates_with_diagonal(m, d, det_max)).collect();

    let mut buckets: BTreeMap<(i128, Vec<usize>), Vec<IMat>> = BTreeMap::new();
    let keyed: Vec<((i128, Vec<usize>), IMat)> = candidates.into_par_iter().map(|s| (class_key(&s), s)).collect();
    for (k, s) in keyed {
        buckets.entry(k).or_default().push(s);
    }
    let reps: Vec<IMat> = buckets
        .into_par_iter()
        .flat_map_iter(|(_, mut group)| {
            group.sort_by_key(canonical_order);
            let mut classes: Vec<IMat> = Vec::new();
            for s in group {
                if !classes.iter().any(|c| isometry(c, &s).is_some()) {
                    classes.push(s);
                }
            }
            classes
        })
        .collect();
    let mut forms: Vec<HalfIntegralForm> =
        reps.into_iter().map(|s| HalfIntegralForm::from_even(s).expect("positive definite candidate")).collect();
    forms.sort_by(|a, b| (a.disc(), a.encoding()).cmp(&(b.disc(), b.encoding())));
    Ok(forms)
}

/// Lookup of arbitrary forms among the classes of a fixed enumeration.
#[derive(Clone, Debug)]
pub struct FormIndex {
    m: usize,
    d_max: u64,
    forms: Vec<HalfIntegralForm>,
    buckets: BTreeMap<(i128, Vec<usize>), Vec<usize>>,
}

impl FormIndex {
    pub fn new(m: usize, d_max: u64) -> Result<Self> {
        Ok(Self::from_forms(m, d_max, enumerate_forms(m, d_max)?))
    }

    pub fn from_forms(m: usize, d_max: u64, forms: Vec<HalfIntegralForm>) -> Self {
        let mut buckets: BTreeMap<(i128, Vec<usize>), Vec<usize>> = BTreeMap::new();
        for (i, f) in forms.iter().enumerate() {
            buckets.entry(class_key(f.even())).or_default().push(i);
        }
        FormIndex { m, d_max, forms, buckets }
    }

    pub fn forms(&self) -> &[HalfIntegralForm] {
        &self.forms
    }

    pub fn d_max(&self) -> u64 {
        self.d_max
    }

    /// Position of the class of `h` in [`FormIndex::forms`].
    pub fn position(&self, h: &HalfIntegralForm) -> Result<usize> {
        if h.size() != self.m {
            return Err(usage!("form {h} has size {}, index holds size {}", h.size(), self.m));
        }
        if h.disc() > self.d_max {
            return Err(usage!("form {h} has D = {} beyond the indexed bound {}", h.disc(), self.d_max));
        }
        let (t, _) = greedy_reduce(h.even());
        let key = class_key(&t);
        self.buckets
            .get(&key)
            .and_then(|idx| idx.iter().copied().find(|&i| isometry(self.forms[i].even(), &t).is_some()))
            .ok_or_else(|| data_err!("no class found for {h}; the enumeration is incomplete"))
    }

    pub fn canonical(&self, h: &HalfIntegralForm) -> Result<&HalfIntegralForm> {
        Ok(&self.forms[self.position(h)?])
    }
}

/// Some form of size `m` in {1, 3} with `D = p`.
pub fn find_prime_disc_form(p: u64, m: usize) -> Result<HalfIntegralForm> {
    match m {
        1 => HalfIntegralForm::from_even(vec![vec![2 * p as i128]]),
        3 => enumerate_forms(3, p)?
            .into_iter()
            .find(|b| b.disc() == p)
            .ok_or_else(|| data_err!("no ternary form with D = {p} found among classes with D <= {p}")),
        _ => Err(usage!("prime discriminant forms are available for sizes 1 and 3, got {m}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// GL_2(Z)-reduced binary forms `[a, b, c]` with `0 <= b <= a <= c` and `4ac - b^2 = n`.
    fn binary_class_count(n: i128) -> usize {
        let mut count = 0;
        for a in 1..=n {
            for b in 0..=a {
                if (n + b * b) % (4 * a) == 0 {
                    let c = (n + b * b) / (4 * a);
                    if c >= a {
                        count += 1;
                    }
                }
            }
        }
        count
    }

    #[test]
    fn binary_examples() {
        let f = enumerate_forms(2, 4).unwrap();
        let ds: Vec<u64> = f.iter().map(|h| h.disc()).collect();
        assert_eq!(ds, vec![3, 4]);
        assert!(enumerate_forms(2, 2).unwrap().is_empty());
        let unary: Vec<String> = enumerate_forms(1, 5).unwrap().iter().map(|h| h.encoding()).collect();
        assert_eq!(unary, vec!["2", "4", "6", "8", "10"]);
        assert_eq!(enumerate_forms(5, 10).unwrap_err().exit_code(), 3);
    }

    #[test]
    fn binary_counts_match_reduced_forms() {
        let forms = enumerate_forms(2, 150).unwrap();
        for n in 1..=150u64 {
            let got = forms.iter().filter(|h| h.disc() == n).count();
            assert_eq!(got, binary_class_count(n as i128), "D = {n}");
        }
    }

    /// Classes reached by all even matrices with small entries, via the index.
    fn bounded_entry_classes(m: usize, d_max: u64, diag: i128, off: i128, index: &FormIndex) -> std::collections::BTreeSet<usize> {
        let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (i..m).map(move |j| (i, j))).collect();
        let mut seen = std::collections::BTreeSet::new();
        let mut s = vec![vec![0i128; m]; m];
        fn rec(
            k: usize,
            pairs: &[(usize, usize)],
            s: &mut IMat,
            diag: i128,
            off: i128,
            d_max: u64,
            index: &FormIndex,
            seen: &mut std::collections::BTreeSet<usize>,
        ) {
            if k == pairs.len() {
                if let Ok(h) = HalfIntegralForm::from_even(s.clone()) {
                    if h.disc() <= d_max {
                        seen.insert(index.position(&h).unwrap());
                    }
                }
                return;
            }
            let (i, j) = pairs[k];
            let range: Vec<i128> = if i == j { (1..=diag / 2).map(|v| 2 * v).collect() } else { (-off..=off).collect() };
            for v in range {
                s[i][j] = v;
                s[j][i] = v;
                rec(k + 1, pairs, s, diag, off, d_max, index, seen);
            }
        }
        rec(0, &pairs, &mut s, diag, off, d_max, index, &mut seen);
        seen
    }

    #[test]
    fn ternary_and_quaternary_completeness() {
        for (m, d_max, diag, off) in [(3usize, 12u64, 8i128, 4i128), (4, 16, 4, 2)] {
            let index = FormIndex::new(m, d_max).unwrap();
            // every bounded-entry matrix lands in some enumerated class
            let seen = bounded_entry_classes(m, d_max, diag, off, &index);
            let forms = index.forms();
            for (i, h) in forms.iter().enumerate() {
                let small = h
                    .even()
                    .iter()
                    .enumerate()
                    .all(|(r, row)| row.iter().enumerate().all(|(c, &x)| if r == c { x <= diag } else { x.abs() <= off }));
                assert!(!small || seen.contains(&i), "class {h} not reached");
                for g in &forms[..i] {
                    assert!(isometry(g.even(), h.even()).is_none(), "{g} and {h} are isometric");
                }
            }
        }
    }

    #[test]
    fn index_finds_transformed_forms() {
        let index = FormIndex::new(4, 24).unwrap();
        let u = vec![vec![1, 2, 0, -1], vec![0, 1, 3, 0], vec![0, 0, 1, 2], vec![0, 0, 0, 1]];
        for (i, h) in index.forms().iter().enumerate() {
            let t = h.transform(&u).unwrap();
            assert_eq!(index.position(&t).unwrap(), i);
        }
    }

    #[test]
    fn prime_disc_forms() {
        assert_eq!(find_prime_disc_form(5, 1).unwrap().encoding(), "10");
        for p in [2, 3, 5, 7] {
            assert_eq!(find_prime_disc_form(p, 3).unwrap().disc(), p);
        }
    }
}
