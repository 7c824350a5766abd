//! Simple root systems in Dynkin-label coordinates.
//!
//! A weight is a vector of integer labels (coordinates in the
//! fundamental-weight basis); the i-th simple root is row i of the Cartan
//! matrix in the same basis, so reflections and dominance tests are pure
//! integer arithmetic.  The basic inner product B (highest root of squared
//! length 2) is carried as an exact rational Gram matrix.

use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Mutex;

/// Dynkin labels of a weight; length equals the rank.
pub type Weight = Vec<i64>;

pub fn add_w(a: &[i64], b: &[i64]) -> Weight {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_w(a: &[i64], b: &[i64]) -> Weight {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn neg_w(a: &[i64]) -> Weight {
    a.iter().map(|x| -x).collect()
}

pub fn scale_w(c: i64, a: &[i64]) -> Weight {
    a.iter().map(|x| c * x).collect()
}

pub fn is_dominant(a: &[i64]) -> bool {
    a.iter().all(|&x| x >= 0)
}

/// Simple Lie type families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

/// A validated simple Lie type, e.g. A2, D4, E8.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LieType {
    family: Family,
    rank: usize,
}

impl LieType {
    /// Validates the (family, rank) pair: A_r r≥1, B_r r≥2, C_r r≥3,
    /// D_r r≥4, E_6/E_7/E_8, F_4, G_2.
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B => rank >= 2,
            Family::C => rank >= 3,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(LieType { family, rank })
        } else {
            Err(Error::InvalidLieType(
                format!("{family:?}{rank}"),
                "rank out of range for this family".into(),
            ))
        }
    }

    /// Parses strings like "A2", "E7" (family letter + rank, no separator).
    pub fn parse(s: &str) -> Result<Self> {
        let err = |m: &str| Error::InvalidLieType(s.to_string(), m.into());
        let mut chars = s.chars();
        let fam = match chars.next() {
            Some('A' | 'a') => Family::A,
            Some('B' | 'b') => Family::B,
            Some('C' | 'c') => Family::C,
            Some('D' | 'd') => Family::D,
            Some('E' | 'e') => Family::E,
            Some('F' | 'f') => Family::F,
            Some('G' | 'g') => Family::G,
            _ => return Err(err("expected a family letter A-G")),
        };
        let rank: usize = chars.as_str().parse().map_err(|_| err("expected a numeric rank"))?;
        LieType::new(fam, rank)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }
}

impl fmt::Display for LieType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)
    }
}

/// Root-system data for one simple type, immutable after construction.
#[derive(Debug)]
pub struct RootSystem {
    pub lie_type: LieType,
    /// cartan[i][j] = ⟨α_i, α_j∨⟩; row i is the i-th simple root in labels.
    pub cartan: Vec<Vec<i64>>,
    pub simple_roots: Vec<Weight>,
    pub positive_roots: Vec<Weight>,
    pub rho: Weight,
    pub highest_root: Weight,
    pub dual_coxeter: i64,
    /// Gram matrix of B on the fundamental-weight basis.
    pub gram: Vec<Vec<BigRational>>,
    /// B♭(α_i∨) = 2α_i / B(α_i, α_i), integral in every simple type.
    pub coroot_images: Vec<Weight>,
    /// comark[i] = B(ω_i, highest_root); level(μ) = Σ μ_i · comark[i].
    pub comarks: Vec<i64>,
    /// A reduced word for the longest Weyl element (indices of simple
    /// reflections, applied left to right).
    pub longest_word: Vec<usize>,
}

static CACHE: Lazy<Mutex<HashMap<LieType, &'static RootSystem>>> = Lazy::new(|| Mutex::new(HashMap::new()));

impl RootSystem {
    /// Shared, lazily built instance for a valid Lie type.
    pub fn get(t: LieType) -> &'static RootSystem {
        let mut cache = CACHE.lock().expect("root system cache poisoned");
        cache.entry(t).or_insert_with(|| Box::leak(Box::new(build_root_system(t))))
    }

    pub fn rank(&self) -> usize {
        self.lie_type.rank()
    }

    fn check_rank(&self, w: &[i64]) -> Result<()> {
        if w.len() == self.rank() {
            Ok(())
        } else {
            Err(Error::RankMismatch { got: w.len(), want: self.rank() })
        }
    }

    /// s_i(x) = x − ⟨x, α_i∨⟩ α_i; the pairing is the i-th label.
    pub fn reflect_simple(&self, x: &[i64], i: usize) -> Weight {
        sub_w(x, &scale_w(x[i], &self.cartan[i]))
    }

    /// Basic inner product B(a, b), exact.
    pub fn inner(&self, a: &[i64], b: &[i64]) -> Result<BigRational> {
        self.check_rank(a)?;
        self.check_rank(b)?;
        let mut acc = BigRational::zero();
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                if bj == 0 {
                    continue;
                }
                acc += &self.gram[i][j] * BigRational::from(BigInt::from(ai * bj));
            }
        }
        Ok(acc)
    }

    /// B(μ, α_max), an integer for every weight (coroot pairing).
    pub fn level(&self, w: &[i64]) -> i64 {
        w.iter().zip(&self.comarks).map(|(x, c)| x * c).sum()
    }

    /// Height pairing B(x, ρ)·(scale); monotone under making dominant.
    /// Used only for orderings, so any positive multiple works: this is the
    /// exact rational B(x, ρ) cleared to an integer via a fixed denominator.
    pub fn height_key(&self, w: &[i64]) -> BigRational {
        self.inner(w, &self.rho).expect("rank checked")
    }

    /// Strictly-dominant representative of μ+ρ with reflection parity.
    /// None iff μ+ρ lies on a reflection wall (the antisymmetrized orbit sum
    /// vanishes).
    pub fn dominant_reduce_shifted(&self, mu: &[i64]) -> Option<(Weight, i64)> {
        let mut x = add_w(mu, &self.rho);
        let mut sign = 1i64;
        loop {
            match (0..self.rank()).find(|&i| x[i] < 0) {
                Some(i) => {
                    x = self.reflect_simple(&x, i);
                    sign = -sign;
                }
                None => break,
            }
        }
        if x.iter().any(|&c| c == 0) {
            return None;
        }
        Some((sub_w(&x, &self.rho), sign))
    }

    /// μ* = −w_0 μ, computed through a stored reduced word for w_0.
    pub fn dual_weight(&self, mu: &[i64]) -> Weight {
        let mut x = mu.to_vec();
        for &i in &self.longest_word {
            x = self.reflect_simple(&x, i);
        }
        neg_w(&x)
    }

    /// (−1)^{length(w_0)} = (−1)^{|R_+|}.
    pub fn sign_longest_element(&self) -> i64 {
        if self.positive_roots.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Full signed Weyl orbit of a strictly dominant weight (free orbit).
    /// Intended for small ranks; the orbit has |W| elements.
    pub fn weyl_orbit_signed(&self, x: &[i64]) -> Vec<(Weight, i64)> {
        assert!(x.iter().all(|&c| c > 0), "orbit seed must be strictly dominant");
        let mut seen: HashMap<Weight, i64> = HashMap::new();
        let mut stack = vec![(x.to_vec(), 1i64)];
        seen.insert(x.to_vec(), 1);
        while let Some((w, s)) = stack.pop() {
            for i in 0..self.rank() {
                if w[i] == 0 {
                    continue;
                }
                let r = self.reflect_simple(&w, i);
                if !seen.contains_key(&r) {
                    seen.insert(r.clone(), -s);
                    stack.push((r, -s));
                }
            }
        }
        let mut out: Vec<(Weight, i64)> = seen.into_iter().collect();
        out.sort();
        out
    }
}

/// Cartan matrix in the convention cartan[i][j] = ⟨α_i, α_j∨⟩.
fn cartan_matrix(t: LieType) -> Vec<Vec<i64>> {
    let r = t.rank();
    let mut c = vec![vec![0i64; r]; r];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 2;
    }
    let chain = |c: &mut Vec<Vec<i64>>, i: usize, j: usize| {
        c[i][j] = -1;
        c[j][i] = -1;
    };
    match t.family() {
        Family::A => {
            for i in 0..r - 1 {
                chain(&mut c, i, i + 1);
            }
        }
        Family::B => {
            // α_r short: the (r−1, r) bond doubles toward the short root.
            for i in 0..r - 1 {
                chain(&mut c, i, i + 1);
            }
            c[r - 2][r - 1] = -2;
            c[r - 1][r - 2] = -1;
        }
        Family::C => {
            // α_r long: mirror of type B.
            for i in 0..r - 1 {
                chain(&mut c, i, i + 1);
            }
            c[r - 2][r - 1] = -1;
            c[r - 1][r - 2] = -2;
        }
        Family::D => {
            for i in 0..r - 2 {
                chain(&mut c, i, i + 1);
            }
            chain(&mut c, r - 3, r - 1);
        }
        Family::E => {
            // Nodes: chain 1-3-4-5-…-r with node 2 attached to node 4.
            chain(&mut c, 0, 2);
            for i in 2..r - 1 {
                chain(&mut c, i, i + 1);
            }
            chain(&mut c, 1, 3);
        }
        Family::F => {
            chain(&mut c, 0, 1);
            chain(&mut c, 2, 3);
            c[1][2] = -2;
            c[2][1] = -1;
        }
        Family::G => {
            // α_1 short, α_2 long.
            c[0][1] = -1;
            c[1][0] = -3;
        }
    }
    c
}

/// Half squared lengths d_i = B(α_i, α_i)/2, normalized so long roots get 1.
/// Derived from the Cartan asymmetry d_i·c[i][j] = d_j·c[j][i] by propagation
/// along the Dynkin diagram.
fn half_lengths(cartan: &[Vec<i64>]) -> Vec<BigRational> {
    let r = cartan.len();
    let mut d: Vec<Option<BigRational>> = vec![None; r];
    d[0] = Some(BigRational::one());
    // Propagate along edges until all are fixed; the diagram is connected.
    loop {
        let mut progressed = false;
        for i in 0..r {
            for j in 0..r {
                if i == j || cartan[i][j] == 0 {
                    continue;
                }
                if let (Some(di), None) = (d[i].clone(), &d[j]) {
                    // cartan[i][j] = (α_i, α_j)/d_j ⇒ d_j = d_i · c[j][i] / c[i][j].
                    let ratio = BigRational::new(BigInt::from(cartan[j][i]), BigInt::from(cartan[i][j]));
                    d[j] = Some(di * ratio);
                    progressed = true;
                }
            }
        }
        if d.iter().all(Option::is_some) {
            break;
        }
        assert!(progressed, "Dynkin diagram must be connected");
    }
    let d: Vec<BigRational> = d.into_iter().map(Option::unwrap).collect();
    let max = d.iter().cloned().fold(BigRational::zero(), |a, b| if b > a { b } else { a });
    d.into_iter().map(|x| x / &max).collect()
}

/// Inverse of a small rational matrix by Gauss-Jordan elimination.
fn invert_rational(m: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m.to_vec();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&i| !a[i][col].is_zero()).expect("matrix invertible");
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] /= &p;
            inv[col][j] /= &p;
        }
        for i in 0..n {
            if i == col || a[i][col].is_zero() {
                continue;
            }
            let f = a[i][col].clone();
            for j in 0..n {
                let av = &a[col][j] * &f;
                a[i][j] -= av;
                let iv = &inv[col][j] * &f;
                inv[i][j] -= iv;
            }
        }
    }
    inv
}

/// Positive roots by string closure from the simple roots, together with the
/// highest root (unique maximal height).
fn positive_roots_closure(cartan: &[Vec<i64>]) -> (Vec<Weight>, Weight) {
    let r = cartan.len();
    // Track (labels, simple-root coordinates); height = Σ coordinates.
    let mut seen: HashSet<Weight> = HashSet::new();
    let mut by_height: Vec<Vec<(Weight, Vec<i64>)>> = vec![Vec::new()];
    let mut first: Vec<(Weight, Vec<i64>)> = Vec::new();
    for i in 0..r {
        let mut coords = vec![0i64; r];
        coords[i] = 1;
        first.push((cartan[i].clone(), coords));
        seen.insert(cartan[i].clone());
    }
    by_height.push(first);
    let mut h = 1;
    while !by_height[h].is_empty() {
        let mut next: Vec<(Weight, Vec<i64>)> = Vec::new();
        for (beta, coords) in by_height[h].clone() {
            for i in 0..r {
                // Down-string length q: how far beta − tα_i stays a root.
                let mut q = 0i64;
                let mut probe = sub_w(&beta, &cartan[i]);
                while seen.contains(&probe) {
                    q += 1;
                    probe = sub_w(&probe, &cartan[i]);
                }
                // String rule: beta + α_i is a root iff q − ⟨beta, α_i∨⟩ ≥ 1.
                if q - beta[i] >= 1 {
                    let up = add_w(&beta, &cartan[i]);
                    if seen.insert(up.clone()) {
                        let mut c2 = coords.clone();
                        c2[i] += 1;
                        next.push((up, c2));
                    }
                }
            }
        }
        by_height.push(next);
        h += 1;
    }
    let highest = by_height
        .iter()
        .rev()
        .find(|lvl| !lvl.is_empty())
        .and_then(|lvl| lvl.first())
        .expect("nonempty root system")
        .0
        .clone();
    let mut all: Vec<Weight> = Vec::new();
    for lvl in &by_height {
        for (w, _) in lvl {
            all.push(w.clone());
        }
    }
    (all, highest)
}

fn build_root_system(t: LieType) -> RootSystem {
    let r = t.rank();
    let cartan = cartan_matrix(t);
    let d = half_lengths(&cartan);
    // Gram of B on fundamental weights: C · G = diag(d)  ⇒  G = C⁻¹ diag(d).
    let c_rat: Vec<Vec<BigRational>> =
        cartan.iter().map(|row| row.iter().map(|&x| BigRational::from(BigInt::from(x))).collect()).collect();
    let c_inv = invert_rational(&c_rat);
    let mut gram: Vec<Vec<BigRational>> =
        (0..r).map(|i| (0..r).map(|j| &c_inv[i][j] * &d[j]).collect()).collect();
    let (positive_roots, highest_root) = positive_roots_closure(&cartan);
    // Normalize explicitly so B(α_max, α_max) = 2 (a no-op for the d chosen
    // above, kept as a guard).
    let theta_sq = quadratic(&gram, &highest_root);
    let scale = BigRational::from(BigInt::from(2)) / theta_sq;
    if !scale.is_one() {
        for row in gram.iter_mut() {
            for v in row.iter_mut() {
                *v *= &scale;
            }
        }
    }
    let rho: Weight = vec![1; r];
    // comark[i] = B(ω_i, θ): θ∨ = θ for the long highest root, so these are
    // the coroot pairings ⟨ω_i, θ∨⟩, necessarily integers.
    let comarks: Vec<i64> = (0..r)
        .map(|i| {
            let mut e = vec![0i64; r];
            e[i] = 1;
            let v = inner_with(&gram, &e, &highest_root);
            rational_to_i64(&v)
        })
        .collect();
    let dual_coxeter = 1 + rho.iter().zip(&comarks).map(|(x, c)| x * c).sum::<i64>();
    // Coroot images B♭(α_i∨) = α_i / d_i, integral in every simple type.
    let coroot_images: Vec<Weight> = (0..r)
        .map(|i| {
            cartan[i]
                .iter()
                .map(|&x| {
                    let v = BigRational::from(BigInt::from(x)) / &d[i];
                    rational_to_i64(&v)
                })
                .collect()
        })
        .collect();
    // Reduced word for w_0: walk ρ down to −ρ by simple reflections.
    let mut longest_word = Vec::new();
    let mut x = rho.clone();
    let neg_rho = neg_w(&rho);
    while x != neg_rho {
        let i = (0..r).find(|&i| x[i] > 0).expect("walk to -rho cannot stall");
        x = sub_w(&x, &scale_w(x[i], &cartan[i]));
        longest_word.push(i);
    }
    assert_eq!(longest_word.len(), positive_roots.len(), "w_0 length equals |R_+|");
    RootSystem {
        lie_type: t,
        simple_roots: cartan.clone(),
        cartan,
        positive_roots,
        rho,
        highest_root,
        dual_coxeter,
        gram,
        coroot_images,
        comarks,
        longest_word,
    }
}

fn inner_with(gram: &[Vec<BigRational>], a: &[i64], b: &[i64]) -> BigRational {
    let mut acc = BigRational::zero();
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            if bj == 0 {
                continue;
            }
            acc += &gram[i][j] * BigRational::from(BigInt::from(ai * bj));
        }
    }
    acc
}

fn quadratic(gram: &[Vec<BigRational>], a: &[i64]) -> BigRational {
    inner_with(gram, a, a)
}

fn rational_to_i64(v: &BigRational) -> i64 {
    assert!(v.is_integer(), "expected an integer, got {v}");
    i64::try_from(v.numer()).expect("value fits in i64")
}
