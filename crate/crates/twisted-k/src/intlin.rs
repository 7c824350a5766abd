//! Exact integer linear algebra: Hermite and Smith normal forms, kernel
//! bases, and a sparse column echelon with combination tracking.
//!
//! Everything works over `BigInt`; no floating point, no tolerances.  The
//! echelon form is the workhorse for lattice-membership questions (ideal
//! membership, inverting an injective restriction map): a set of columns is
//! absorbed one by one with extended-gcd pivoting, after which any vector of
//! the generated lattice reduces to zero and the tracked combination is a
//! certificate.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

/// Dense integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigInt>,
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMat { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        IntMat::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> IntMat {
        let mut t = IntMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.at(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.at(i, j) + a * other.at(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn is_zero_row(&self, i: usize) -> bool {
        self.row(i).iter().all(Zero::is_zero)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// row_a = x*row_a + y*row_b, row_b = u*row_a + v*row_b (two-row unimodular update).
    fn combine_rows(&mut self, a: usize, b: usize, x: &BigInt, y: &BigInt, u: &BigInt, v: &BigInt) {
        for j in 0..self.cols {
            let pa = self.at(a, j).clone();
            let pb = self.at(b, j).clone();
            self.set(a, j, x * &pa + y * &pb);
            self.set(b, j, u * &pa + v * &pb);
        }
    }

    fn add_multiple_of_row(&mut self, dst: usize, src: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.at(dst, j) + c * self.at(src, j);
            self.set(dst, j, v);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.at(i, j).clone();
            self.set(i, j, v);
        }
    }
}

/// Row-style Hermite normal form.  Returns (h, u) with u unimodular and
/// u * a = h; pivots are positive, entries above a pivot lie in [0, pivot),
/// zero rows are at the bottom.
pub fn hnf_with_transform(a: &IntMat) -> (IntMat, IntMat) {
    let mut h = a.clone();
    let mut u = IntMat::identity(a.rows);
    let mut pivot_row = 0;
    for col in 0..h.cols {
        // Find a row at or below pivot_row with a nonzero entry in this column.
        let Some(nz) = (pivot_row..h.rows).find(|&i| !h.at(i, col).is_zero()) else {
            continue;
        };
        h.swap_rows(pivot_row, nz);
        u.swap_rows(pivot_row, nz);
        for i in pivot_row + 1..h.rows {
            if h.at(i, col).is_zero() {
                continue;
            }
            let p = h.at(pivot_row, col).clone();
            let q = h.at(i, col).clone();
            if (&q % &p).is_zero() {
                let c = -(&q / &p);
                h.add_multiple_of_row(i, pivot_row, &c);
                u.add_multiple_of_row(i, pivot_row, &c);
            } else {
                let eg = p.extended_gcd(&q);
                // [x y; -q/g p/g] is unimodular: x*p + y*q = g.
                let (x, y, g) = (eg.x, eg.y, eg.gcd);
                let (nu, nv) = (-&q / &g, &p / &g);
                h.combine_rows(pivot_row, i, &x, &y, &nu, &nv);
                u.combine_rows(pivot_row, i, &x, &y, &nu, &nv);
            }
        }
        if h.at(pivot_row, col).is_negative() {
            h.negate_row(pivot_row);
            u.negate_row(pivot_row);
        }
        // Reduce entries above the pivot into [0, pivot).
        let p = h.at(pivot_row, col).clone();
        for i in 0..pivot_row {
            let q = h.at(i, col).div_floor(&p);
            let c = -q;
            h.add_multiple_of_row(i, pivot_row, &c);
            u.add_multiple_of_row(i, pivot_row, &c);
        }
        pivot_row += 1;
        if pivot_row == h.rows {
            break;
        }
    }
    (h, u)
}

/// Hermite normal form without the transform.
pub fn hnf(a: &IntMat) -> IntMat {
    hnf_with_transform(a).0
}

/// Basis of the right kernel {x : a·x = 0}, one basis vector per row of the
/// result, canonicalized by HNF.  The kernel lattice is saturated, so this
/// basis is unique.
pub fn right_kernel(a: &IntMat) -> IntMat {
    let (h, u) = hnf_with_transform(&a.transpose());
    let rows: Vec<Vec<BigInt>> = (0..h.rows)
        .filter(|&i| h.is_zero_row(i))
        .map(|i| u.row(i).to_vec())
        .collect();
    if rows.is_empty() {
        return IntMat::zeros(0, a.cols);
    }
    hnf(&IntMat::from_rows(rows))
}

/// Diagonal of the Smith normal form: nonnegative d_1 | d_2 | … | d_r
/// followed by zeros, length min(rows, cols).
pub fn snf_diagonal(a: &IntMat) -> Vec<BigInt> {
    let mut m = a.clone();
    let n = m.rows.min(m.cols);
    let mut t = 0;
    while t < n {
        // Select the entry of smallest nonzero magnitude in the trailing block.
        let mut best: Option<(usize, usize)> = None;
        for i in t..m.rows {
            for j in t..m.cols {
                if m.at(i, j).is_zero() {
                    continue;
                }
                if best.map_or(true, |(bi, bj)| m.at(i, j).abs() < m.at(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else {
            break;
        };
        m.swap_rows(t, bi);
        swap_cols(&mut m, t, bj);
        // Clear the pivot row and column by remainders; restart if any
        // remainder survives (it is strictly smaller than the pivot).
        let mut dirty = false;
        for i in t + 1..m.rows {
            if m.at(i, t).is_zero() {
                continue;
            }
            let q = -(m.at(i, t) / m.at(t, t));
            m.add_multiple_of_row(i, t, &q);
            dirty = dirty || !m.at(i, t).is_zero();
        }
        for j in t + 1..m.cols {
            if m.at(t, j).is_zero() {
                continue;
            }
            let q = -(m.at(t, j) / m.at(t, t));
            add_multiple_of_col(&mut m, j, t, &q);
            dirty = dirty || !m.at(t, j).is_zero();
        }
        if dirty {
            continue;
        }
        // Enforce divisibility of the trailing block by the pivot.
        let p = m.at(t, t).clone();
        let offender = (t + 1..m.rows)
            .flat_map(|i| (t + 1..m.cols).map(move |j| (i, j)))
            .find(|&(i, j)| !(m.at(i, j) % &p).is_zero());
        if let Some((i, _)) = offender {
            m.add_multiple_of_row(t, i, &BigInt::one());
            continue;
        }
        t += 1;
    }
    (0..n).map(|i| m.at(i, i).abs()).collect()
}

fn swap_cols(m: &mut IntMat, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..m.rows {
        let x = m.at(i, a).clone();
        let y = m.at(i, b).clone();
        m.set(i, a, y);
        m.set(i, b, x);
    }
}

fn add_multiple_of_col(m: &mut IntMat, dst: usize, src: usize, c: &BigInt) {
    if c.is_zero() {
        return;
    }
    for i in 0..m.rows {
        let v = m.at(i, dst) + c * m.at(i, src);
        m.set(i, dst, v);
    }
}

/// Sparse column vector over an ordered row index type `R`, carrying a
/// combination record over key type `K`.  Invariant maintained by
/// [`SparseEchelon`]: entries = Σ combo[k] · (original column k).
#[derive(Debug, Clone)]
pub struct SparseVec<R: Ord + Clone, K: Ord + Clone> {
    pub entries: BTreeMap<R, BigInt>,
    pub combo: BTreeMap<K, BigInt>,
}

impl<R: Ord + Clone, K: Ord + Clone> SparseVec<R, K> {
    pub fn new() -> Self {
        SparseVec { entries: BTreeMap::new(), combo: BTreeMap::new() }
    }

    pub fn column(entries: BTreeMap<R, BigInt>, key: K) -> Self {
        let mut combo = BTreeMap::new();
        combo.insert(key, BigInt::one());
        let mut v = SparseVec { entries, combo };
        v.prune();
        v
    }

    fn prune(&mut self) {
        self.entries.retain(|_, c| !c.is_zero());
        self.combo.retain(|_, c| !c.is_zero());
    }

    /// Leading entry: the nonzero entry with the largest row key.
    pub fn leading(&self) -> Option<(&R, &BigInt)> {
        self.entries.iter().next_back()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    fn scale(&mut self, c: &BigInt) {
        for v in self.entries.values_mut() {
            *v *= c;
        }
        for v in self.combo.values_mut() {
            *v *= c;
        }
        self.prune();
    }

    /// self += c * other, entries and combination alike.
    fn axpy(&mut self, c: &BigInt, other: &Self) {
        if c.is_zero() {
            return;
        }
        for (r, v) in &other.entries {
            let e = self.entries.entry(r.clone()).or_insert_with(BigInt::zero);
            *e += c * v;
        }
        for (k, v) in &other.combo {
            let e = self.combo.entry(k.clone()).or_insert_with(BigInt::zero);
            *e += c * v;
        }
        self.prune();
    }
}

impl<R: Ord + Clone, K: Ord + Clone> Default for SparseVec<R, K> {
    fn default() -> Self {
        Self::new()
    }
}

/// Integer column echelon keyed by leading row, with extended-gcd pivot
/// merging.  After inserting a set of columns, the pivots form a basis of the
/// lattice those columns generate, and [`SparseEchelon::solve`] decides
/// lattice membership with a certificate.
#[derive(Debug, Clone, Default)]
pub struct SparseEchelon<R: Ord + Clone, K: Ord + Clone> {
    pivots: BTreeMap<R, SparseVec<R, K>>,
}

impl<R: Ord + Clone, K: Ord + Clone> SparseEchelon<R, K> {
    pub fn new() -> Self {
        SparseEchelon { pivots: BTreeMap::new() }
    }

    pub fn pivot_count(&self) -> usize {
        self.pivots.len()
    }

    pub fn insert(&mut self, mut v: SparseVec<R, K>) {
        loop {
            let Some((r, lead)) = v.leading() else {
                return;
            };
            let r = r.clone();
            let lead = lead.clone();
            match self.pivots.get_mut(&r) {
                None => {
                    if lead.is_negative() {
                        v.scale(&BigInt::from(-1));
                    }
                    self.pivots.insert(r, v);
                    return;
                }
                Some(p) => {
                    let a = p.leading().expect("pivot nonzero").1.clone();
                    if (&lead % &a).is_zero() {
                        let q = -(&lead / &a);
                        let p_snapshot = p.clone();
                        v.axpy(&q, &p_snapshot);
                    } else {
                        // Replace the pivot by the gcd combination, keep
                        // reducing the complementary part.
                        let eg = a.extended_gcd(&lead);
                        let (x, y, g) = (eg.x, eg.y, eg.gcd);
                        let mut np = p.clone();
                        np.scale(&x);
                        np.axpy(&y, &v);
                        let old_p = std::mem::replace(p, np);
                        v.scale(&(&a / &g));
                        v.axpy(&(-(&lead / &g)), &old_p);
                    }
                }
            }
        }
    }

    /// Express `target` as an integer combination of the inserted columns.
    /// Returns the combination keyed like the columns, or None if the target
    /// is not in the lattice they generate.
    pub fn solve(&self, target: &BTreeMap<R, BigInt>) -> Option<BTreeMap<K, BigInt>> {
        let mut t: BTreeMap<R, BigInt> =
            target.iter().filter(|(_, c)| !c.is_zero()).map(|(r, c)| (r.clone(), c.clone())).collect();
        let mut combo: BTreeMap<K, BigInt> = BTreeMap::new();
        loop {
            t.retain(|_, c| !c.is_zero());
            let Some((r, lead)) = t.iter().next_back().map(|(r, c)| (r.clone(), c.clone())) else {
                break;
            };
            let p = self.pivots.get(&r)?;
            let a = p.leading().expect("pivot nonzero").1;
            if !(&lead % a).is_zero() {
                return None;
            }
            let q = &lead / a;
            for (row, v) in &p.entries {
                let e = t.entry(row.clone()).or_insert_with(BigInt::zero);
                *e -= &q * v;
            }
            for (k, v) in &p.combo {
                let e = combo.entry(k.clone()).or_insert_with(BigInt::zero);
                *e += &q * v;
            }
        }
        combo.retain(|_, c| !c.is_zero());
        Some(combo)
    }
}

/// Order of the quotient L / span(image), where L ⊆ Z^n is the saturated
/// lattice spanned by the rows of `kernel_basis` and every column of
/// `image_cols` lies inside L.  Returns None when the quotient is infinite.
pub fn lattice_quotient_order(kernel_basis: &IntMat, image_cols: &IntMat) -> Option<BigInt> {
    let k = kernel_basis.rows;
    if k == 0 {
        return Some(BigInt::one());
    }
    // Solve kernel_basisᵀ · X = image_cols; integrality is guaranteed because
    // the kernel lattice is saturated and the image lies inside it.
    let mut ech: SparseEchelon<usize, usize> = SparseEchelon::new();
    for b in 0..k {
        let mut entries = BTreeMap::new();
        for j in 0..kernel_basis.cols {
            let v = kernel_basis.at(b, j).clone();
            if !v.is_zero() {
                entries.insert(j, v);
            }
        }
        ech.insert(SparseVec::column(entries, b));
    }
    let mut x = IntMat::zeros(k, image_cols.cols);
    for c in 0..image_cols.cols {
        let mut target = BTreeMap::new();
        for j in 0..image_cols.rows {
            let v = image_cols.at(j, c).clone();
            if !v.is_zero() {
                target.insert(j, v);
            }
        }
        let combo = ech.solve(&target).expect("image column outside kernel lattice");
        for (b, v) in combo {
            x.set(b, c, v);
        }
    }
    let d = snf_diagonal(&x);
    let nonzero: Vec<&BigInt> = d.iter().filter(|v| !v.is_zero()).collect();
    if nonzero.len() < k {
        return None;
    }
    Some(nonzero.into_iter().product())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMat {
        IntMat::from_i64_rows(rows)
    }

    #[test]
    fn hnf_reproduces_known_form() {
        let a = m(&[vec![2, 3, 6, 2], vec![5, 6, 1, 6], vec![8, 3, 1, 1]]);
        let (h, u) = hnf_with_transform(&a);
        assert_eq!(u.mul(&a), h, "transform must satisfy u*a = h");
        // Pivots positive, strictly increasing pivot columns, zero rows last.
        let mut last_col = None;
        for i in 0..h.rows {
            if h.is_zero_row(i) {
                continue;
            }
            let col = (0..h.cols).find(|&j| !h.at(i, j).is_zero()).unwrap();
            assert!(h.at(i, col) > &BigInt::zero());
            assert!(last_col.map_or(true, |c| col > c));
            last_col = Some(col);
        }
    }

    #[test]
    fn hnf_entries_above_pivot_are_reduced() {
        let a = m(&[vec![4, 0], vec![0, 4], vec![1, 1]]);
        let h = hnf(&a);
        for i in 0..h.rows {
            if h.is_zero_row(i) {
                continue;
            }
            let col = (0..h.cols).find(|&j| !h.at(i, j).is_zero()).unwrap();
            let p = h.at(i, col).clone();
            for above in 0..i {
                assert!(h.at(above, col) >= &BigInt::zero() && h.at(above, col) < &p);
            }
        }
    }

    #[test]
    fn kernel_vectors_annihilate_matrix() {
        let a = m(&[vec![2, 4, 4], vec![-6, 6, 12]]);
        let k = right_kernel(&a);
        assert_eq!(k.rows, 1);
        for i in 0..k.rows {
            for r in 0..a.rows {
                let s: BigInt = (0..a.cols).map(|j| a.at(r, j) * k.at(i, j)).sum();
                assert!(s.is_zero(), "kernel row {i} fails relation {r}");
            }
        }
    }

    #[test]
    fn kernel_of_dimension_row_is_primitive() {
        // gcd(3, 6) = 3; kernel of (3 6) is spanned by (2, -1).
        let a = m(&[vec![3, 6]]);
        let k = right_kernel(&a);
        assert_eq!(k.rows, 1);
        assert_eq!(k.at(0, 0), &BigInt::from(2));
        assert_eq!(k.at(0, 1), &BigInt::from(-1));
    }

    #[test]
    fn snf_of_textbook_matrix() {
        // Invariant factors 2, 6, 12 (|det| = 144).
        let a = m(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let d = snf_diagonal(&a);
        let dv: Vec<i64> = d.iter().map(|x| i64::try_from(x).unwrap()).collect();
        assert_eq!(dv, vec![2, 6, 12]);
    }

    #[test]
    fn snf_divisibility_chain_on_random_small_matrices() {
        // Deterministic pseudo-random sweep; no external RNG needed here.
        let mut seed: i64 = 1;
        for _ in 0..50 {
            let mut rows = vec![];
            for _ in 0..3 {
                let mut row = vec![];
                for _ in 0..3 {
                    seed = (seed.wrapping_mul(1103515245).wrapping_add(12345)) % 1000;
                    row.push(seed % 7 - 3);
                }
                rows.push(row);
            }
            let d = snf_diagonal(&m(&rows));
            for w in d.windows(2) {
                if !w[1].is_zero() {
                    assert!(w[0].is_zero() || (&w[1] % &w[0]).is_zero(), "chain broken for {rows:?}: {d:?}");
                }
            }
        }
    }

    #[test]
    fn echelon_solves_lattice_membership() {
        // Columns (2,0), (0,3), (1,1) generate all of Z^2? gcd along rows:
        // (1,1) = c3; (2,0) = ..., lattice is Z^2 since det[[2,1],[0,1]] = 2,
        // det[[0,1],[3,1]] = -3, gcd(2,3)=1.
        let cols = [vec![2i64, 0], vec![0, 3], vec![1, 1]];
        let mut ech: SparseEchelon<usize, usize> = SparseEchelon::new();
        for (k, col) in cols.iter().enumerate() {
            let mut entries = BTreeMap::new();
            for (r, &v) in col.iter().enumerate() {
                if v != 0 {
                    entries.insert(r, BigInt::from(v));
                }
            }
            ech.insert(SparseVec::column(entries, k));
        }
        let mut target = BTreeMap::new();
        target.insert(0usize, BigInt::from(1));
        let combo = ech.solve(&target).expect("(1,0) lies in the lattice");
        // Verify the certificate by recombining.
        let mut check = vec![BigInt::zero(), BigInt::zero()];
        for (k, c) in &combo {
            for (r, &v) in cols[*k].iter().enumerate() {
                check[r] += c * BigInt::from(v);
            }
        }
        assert_eq!(check, vec![BigInt::from(1), BigInt::zero()]);
    }

    #[test]
    fn echelon_rejects_nonmembers() {
        // Column (2,0) alone: (1,0) is not in the lattice.
        let mut ech: SparseEchelon<usize, usize> = SparseEchelon::new();
        let mut entries = BTreeMap::new();
        entries.insert(0usize, BigInt::from(2));
        ech.insert(SparseVec::column(entries, 0usize));
        let mut target = BTreeMap::new();
        target.insert(0usize, BigInt::from(1));
        assert!(ech.solve(&target).is_none());
    }

    #[test]
    fn quotient_order_of_scaled_kernel() {
        // L = kernel of (2 3) in Z^2 = span{(3,-2)}; image = 5·(3,-2).
        let kernel = m(&[vec![3, -2]]);
        let image = m(&[vec![15], vec![-10]]);
        let ord = lattice_quotient_order(&kernel, &image).unwrap();
        assert_eq!(ord, BigInt::from(5));
    }

    #[test]
    fn quotient_order_detects_infinite_quotient() {
        let kernel = m(&[vec![1, 0], vec![0, 1]]);
        let image = m(&[vec![2], vec![0]]);
        assert_eq!(lattice_quotient_order(&kernel, &image), None);
    }
}
