//! Koszul-complex machinery over the representation ring: chain-map lifts of
//! Adams operations along the fusion-ideal resolution, integer Koszul
//! homology via Smith normal form, and the induced action on the
//! exterior-algebra generators η_i of the nonequivariant theory.
//!
//! The fusion ideal of a type-A twist is generated by a regular sequence
//! y_1, …, y_r; the associated Koszul complex resolves the fusion algebra
//! over R(G).  An Adams operation lifts to a chain map whose zeroth slot is
//! the monomial lift V_μ ↦ ±V_{ℓμ+(ℓ−1)ρ}; the next slot is found by solving
//! Σ_j m_j·y_j^{(ℓn)} = ψ̃_0(y_i^{(n)}) exactly in R(G).  Tensoring with Z
//! turns the chain map into an integer matrix acting on the kernel lattice of
//! the dimension row-vector, whose HNF basis represents the η generators.

use crate::intlin::{lattice_quotient_order, right_kernel, IntMat, SparseEchelon, SparseVec};
use crate::repring::{multiply, virtual_dimension, weyl_dimension, RepRingElement};
use crate::rootsys::{add_w, scale_w, RootSystem, Weight};
use crate::verlinde::{ideal_generators, weights_up_to_level, TwistedContext};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// A type-A twisted context together with its fusion-ideal generators, their
/// dimensions, and the coefficient order c = gcd of the dimensions.
#[derive(Debug, Clone)]
pub struct KoszulContext {
    ctx: TwistedContext,
    generators: Vec<RepRingElement>,
    weights: Vec<Weight>,
    dims: Vec<BigInt>,
    c: BigInt,
}

impl KoszulContext {
    pub fn new(ctx: TwistedContext) -> Result<Self> {
        let generators = ideal_generators(&ctx)?;
        let rs = ctx.rs();
        let mut weights = Vec::with_capacity(generators.len());
        let mut dims = Vec::with_capacity(generators.len());
        for g in &generators {
            let (w, coeff) = g.terms().iter().next().expect("generators are irreducible");
            assert!(coeff.is_one() && g.terms().len() == 1, "generators are irreducible");
            weights.push(w.clone());
            dims.push(weyl_dimension(rs, w)?);
        }
        let c = dims.iter().fold(BigInt::zero(), |g, d| g.gcd(d));
        Ok(KoszulContext { ctx, generators, weights, dims, c })
    }

    pub fn ctx(&self) -> &TwistedContext {
        &self.ctx
    }

    pub fn generators(&self) -> &[RepRingElement] {
        &self.generators
    }

    pub fn generator_weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn dims(&self) -> &[BigInt] {
        &self.dims
    }

    pub fn coefficient_order(&self) -> &BigInt {
        &self.c
    }
}

/// Chain map covering ψ^ℓ between two Koszul complexes: the slot-zero images,
/// the solved slot-one matrix over R(G), and its dimension augmentation.
#[derive(Debug, Clone)]
pub struct ChainMapLift {
    /// ψ̃_0(y_i^{(n)}), each a single signed irreducible.
    pub psi0_images: Vec<RepRingElement>,
    /// Row i solves Σ_j psi1_matrix[i][j]·y_j^{(ℓn)} = psi0_images[i].
    pub psi1_matrix: Vec<Vec<RepRingElement>>,
    /// Entrywise virtual dimension of psi1_matrix.
    pub augmented: Vec<Vec<BigInt>>,
}

/// HNF-canonical basis of the kernel lattice of the dimension row-vector;
/// its rows represent the exterior generators η_1, …, η_{r−1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtaBasis {
    pub twist: i64,
    pub kernel_basis: Vec<Vec<BigInt>>,
}

/// ψ^ℓ on exterior generators: images[i] lists the coefficients of
/// ψ^ℓ(η_i^{(n)}) in the target EtaBasis, reduced into [0, modulus).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdamsEtaMap {
    pub modulus: BigInt,
    pub images: Vec<Vec<BigInt>>,
}

/// Homology of the integer Koszul complex on a list of positive dimensions:
/// the exterior algebra over Z_c on (length − 1) generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KoszulHomology {
    pub coefficient_order: BigInt,
    pub generator_count: usize,
    /// |H_d| for d = 0, …, length − 1, computed by Smith normal form.
    pub degree_orders: Vec<BigInt>,
}

/// The monomial chain-map lift of ψ^ℓ on a single irreducible V_μ:
/// V_{ℓμ+(ℓ−1)ρ} for ℓ > 0, (−1)^{|R_+|} V_{−ℓμ*+(−ℓ−1)ρ} for ℓ < 0.
fn monomial_lift(rs: &RootSystem, ell: i64, mu: &[i64]) -> RepRingElement {
    assert!(ell != 0, "slot-zero lift needs ℓ ≠ 0");
    let mut out = RepRingElement::zero();
    if ell > 0 {
        out.add_term(add_w(&scale_w(ell, mu), &scale_w(ell - 1, &rs.rho)), BigInt::one());
    } else {
        let dual = rs.dual_weight(mu);
        out.add_term(
            add_w(&scale_w(-ell, &dual), &scale_w(-ell - 1, &rs.rho)),
            BigInt::from(rs.sign_longest_element()),
        );
    }
    out
}

/// Express `target` as Σ_j m_j·gens[j] in R(G), allowing only dominant
/// weights of level ≤ support_bound in the m_j.  The integer linear system
/// over the V_μ basis is solved by sparse echelon reduction; any solution is
/// certified by re-multiplication.  Returns None when no solution exists
/// within the bound.
pub fn express_in_ideal(
    rs: &'static RootSystem,
    target: &RepRingElement,
    gens: &[RepRingElement],
    support_bound: i64,
) -> Result<Option<Vec<RepRingElement>>> {
    if gens.is_empty() {
        return Err(Error::Unsupported("cannot express a class in an empty generator list".into()));
    }
    if target.is_zero() {
        return Ok(Some(vec![RepRingElement::zero(); gens.len()]));
    }
    let mut ech: SparseEchelon<Weight, (usize, Weight)> = SparseEchelon::new();
    for mu in weights_up_to_level(rs, support_bound) {
        let v = RepRingElement::irreducible(&mu);
        for (j, g) in gens.iter().enumerate() {
            let prod = multiply(rs, &v, g);
            ech.insert(SparseVec::column(prod.terms().clone(), (j, mu.clone())));
        }
    }
    let Some(combo) = ech.solve(target.terms()) else {
        return Ok(None);
    };
    let mut ms = vec![RepRingElement::zero(); gens.len()];
    for ((j, mu), c) in combo {
        ms[j].add_term(mu, c);
    }
    let mut check = RepRingElement::zero();
    for (m, g) in ms.iter().zip(gens) {
        check = check.add(&multiply(rs, m, g));
    }
    assert_eq!(&check, target, "solver certificate: re-multiplication must reproduce the target");
    Ok(Some(ms))
}

/// Solve one chain-map row.  With a forced bound, make a single attempt;
/// otherwise escalate: start just above the level gap between target and
/// generators, double, and finish at the conservative
/// target-plus-generator-level cap.
fn solve_row(
    rs: &'static RootSystem,
    target: &RepRingElement,
    dst: &KoszulContext,
    forced_bound: Option<i64>,
) -> Result<Vec<RepRingElement>> {
    if let Some(b) = forced_bound {
        return express_in_ideal(rs, target, &dst.generators, b)?
            .ok_or(Error::SupportBoundExceeded(b));
    }
    let target_level =
        target.terms().keys().map(|w| rs.level(w)).max().expect("nonzero chain-map target");
    let gen_levels: Vec<i64> = dst.weights.iter().map(|w| rs.level(w)).collect();
    let min_gen = *gen_levels.iter().min().expect("nonempty generators");
    let max_gen = *gen_levels.iter().max().expect("nonempty generators");
    let cap = target_level + max_gen;
    let mut bound = (target_level - min_gen + 2).max(2);
    loop {
        if let Some(ms) = express_in_ideal(rs, target, &dst.generators, bound.min(cap))? {
            return Ok(ms);
        }
        if bound >= cap {
            return Err(Error::SupportBoundExceeded(cap));
        }
        bound *= 2;
    }
}

/// Lift ψ^ℓ to a chain map from the twist-n Koszul complex to the twist-ℓn
/// one, with the automatic support-bound ladder.
pub fn lift_chain_map(src: &KoszulContext, dst: &KoszulContext, ell: i64) -> Result<ChainMapLift> {
    lift_chain_map_bounded(src, dst, ell, None)
}

/// Lift ψ^ℓ to a chain map.  The slot-one matrix is solved generator by
/// generator and the exact chain identity is verified before returning.  A
/// forced support bound replaces the escalation ladder with one attempt.
pub fn lift_chain_map_bounded(
    src: &KoszulContext,
    dst: &KoszulContext,
    ell: i64,
    support_bound: Option<i64>,
) -> Result<ChainMapLift> {
    if src.ctx.lie_type() != dst.ctx.lie_type() {
        return Err(Error::ContextMismatch(format!(
            "chain map needs one group, got {} and {}",
            src.ctx.lie_type(),
            dst.ctx.lie_type()
        )));
    }
    if ell == 0 {
        return Err(Error::ZeroTwist);
    }
    if dst.ctx.twist() != ell * src.ctx.twist() {
        return Err(Error::ContextMismatch(format!(
            "target twist {} is not {ell}·{}",
            dst.ctx.twist(),
            src.ctx.twist()
        )));
    }
    let rs = src.ctx.rs();
    let psi0_images: Vec<RepRingElement> =
        src.weights.iter().map(|w| monomial_lift(rs, ell, w)).collect();
    let mut psi1_matrix = Vec::with_capacity(psi0_images.len());
    let mut augmented = Vec::with_capacity(psi0_images.len());
    let scale = BigInt::from(ell).pow(rs.positive_roots.len() as u32);
    for (i, img) in psi0_images.iter().enumerate() {
        let row = solve_row(rs, img, dst, support_bound)?;
        let mut acc = RepRingElement::zero();
        for (m, g) in row.iter().zip(&dst.generators) {
            acc = acc.add(&multiply(rs, m, g));
        }
        assert_eq!(&acc, img, "chain identity fails in row {i}");
        let arow: Vec<BigInt> = row.iter().map(|m| virtual_dimension(rs, m)).collect();
        let total: BigInt = arow.iter().zip(&dst.dims).map(|(a, d)| a * d).sum();
        assert_eq!(total, &scale * &src.dims[i], "augmented identity fails in row {i}");
        psi1_matrix.push(row);
        augmented.push(arow);
    }
    Ok(ChainMapLift { psi0_images, psi1_matrix, augmented })
}

/// HNF-canonical basis of {v ∈ Z^r : Σ v_i·dims[i] = 0}.
pub fn kernel_basis_of_dims(dims: &[BigInt]) -> Vec<Vec<BigInt>> {
    let row: Vec<BigInt> = dims.to_vec();
    let k = right_kernel(&IntMat::from_rows(vec![row]));
    (0..k.rows).map(|i| k.row(i).to_vec()).collect()
}

/// The exterior generators η_1, …, η_{r−1} of a Koszul context, as the
/// canonical kernel basis of its dimension vector.  Rank-1 contexts have no
/// exterior generators and are rejected.
pub fn eta_basis(kctx: &KoszulContext) -> Result<EtaBasis> {
    if kctx.dims.len() < 2 {
        return Err(Error::Unsupported(
            "rank 1 has no exterior generators (coefficient group only)".into(),
        ));
    }
    let kernel_basis = kernel_basis_of_dims(&kctx.dims);
    assert_eq!(kernel_basis.len(), kctx.dims.len() - 1, "dimension vector is nonzero");
    Ok(EtaBasis { twist: kctx.ctx.twist(), kernel_basis })
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(out: &mut Vec<Vec<usize>>, cur: &mut Vec<usize>, start: usize, n: usize, k: usize) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(out, cur, i + 1, n, k);
            cur.pop();
        }
    }
    rec(&mut out, &mut cur, 0, n, k);
    out
}

fn binomial_usize(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut b = BigInt::one();
    for i in 0..k {
        b = b * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    b
}

/// Boundary ∂_k of the integer Koszul complex on `dims`, as a matrix from
/// ∧^k Z^r to ∧^{k−1} Z^r in the lexicographic subset bases.
fn koszul_boundary(dims: &[i64], k: usize, from: &[Vec<usize>], to: &[Vec<usize>]) -> IntMat {
    assert!(k >= 1);
    let mut m = IntMat::zeros(to.len(), from.len());
    for (col, s) in from.iter().enumerate() {
        for (t, &i) in s.iter().enumerate() {
            let mut face = s.clone();
            face.remove(t);
            let row = to.binary_search(&face).expect("face is a valid subset");
            let sign = if t % 2 == 0 { 1 } else { -1 };
            let v = m.at(row, col) + BigInt::from(sign * dims[i]);
            m.set(row, col, v);
        }
    }
    m
}

/// Homology of the integer Koszul complex on multiplication by `dims`,
/// computed degree by degree through Smith normal form and checked against
/// the exterior algebra over Z_c on (r−1) generators.
pub fn koszul_homology(dims: &[i64]) -> KoszulHomology {
    assert!(!dims.is_empty() && dims.iter().all(|&d| d > 0), "dims must be positive");
    let r = dims.len();
    let c = dims.iter().fold(0i64, |g, &d| g.gcd(&d));
    let subsets: Vec<Vec<Vec<usize>>> = (0..=r).map(|k| combinations(r, k)).collect();
    let mut degree_orders = Vec::with_capacity(r);
    for k in 0..r {
        let kernel = if k == 0 {
            let mut id = IntMat::zeros(1, 1);
            id.set(0, 0, BigInt::one());
            id
        } else {
            right_kernel(&koszul_boundary(dims, k, &subsets[k], &subsets[k - 1]))
        };
        let image = koszul_boundary(dims, k + 1, &subsets[k + 1], &subsets[k]);
        let order = lattice_quotient_order(&kernel, &image)
            .expect("Koszul homology on positive integers is finite");
        degree_orders.push(order);
    }
    let top = right_kernel(&koszul_boundary(dims, r, &subsets[r], &subsets[r - 1]));
    assert_eq!(top.rows, 0, "top boundary is injective for positive dims");
    for (k, order) in degree_orders.iter().enumerate() {
        let expect = BigInt::from(c).pow(
            u32::try_from(binomial_usize(r - 1, k)).expect("small exponent"),
        );
        assert_eq!(order, &expect, "H_{k} must be free of rank C(r-1,{k}) over Z_c");
    }
    KoszulHomology {
        coefficient_order: BigInt::from(c),
        generator_count: r - 1,
        degree_orders,
    }
}

/// Express `w` in a row-HNF basis; None when w is outside the lattice.
fn express_in_row_basis(basis: &[Vec<BigInt>], w: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut residual = w.to_vec();
    let mut coords = Vec::with_capacity(basis.len());
    for b in basis {
        let pivot = b.iter().position(|x| !x.is_zero()).expect("basis rows are nonzero");
        let (q, rem) = residual[pivot].div_rem(&b[pivot]);
        if !rem.is_zero() {
            return None;
        }
        for (x, y) in residual.iter_mut().zip(b) {
            *x -= &q * y;
        }
        coords.push(q);
    }
    if residual.iter().any(|x| !x.is_zero()) {
        return None;
    }
    Some(coords)
}

/// ψ^ℓ on the exterior generators, routed through a freshly solved chain map.
pub fn adams_on_generators(src: &KoszulContext, dst: &KoszulContext, ell: i64) -> Result<AdamsEtaMap> {
    let lift = lift_chain_map(src, dst, ell)?;
    adams_on_generators_with_lift(src, dst, &lift)
}

/// ψ^ℓ on the exterior generators for a given chain-map lift: push each
/// source kernel-basis vector through the augmented matrix, land it in the
/// target kernel lattice, and reduce the coordinates modulo c(G, ℓn).  The
/// result is independent of the lift choice because lifts differ by
/// syzygies, whose augmentations lie in c·(kernel lattice).
pub fn adams_on_generators_with_lift(
    src: &KoszulContext,
    dst: &KoszulContext,
    lift: &ChainMapLift,
) -> Result<AdamsEtaMap> {
    let src_basis = eta_basis(src)?;
    let dst_basis = eta_basis(dst)?;
    let r = dst.dims.len();
    let mut images = Vec::with_capacity(src_basis.kernel_basis.len());
    for v in &src_basis.kernel_basis {
        let w: Vec<BigInt> = (0..r)
            .map(|j| v.iter().zip(&lift.augmented).map(|(vi, row)| vi * &row[j]).sum())
            .collect();
        let coords = express_in_row_basis(&dst_basis.kernel_basis, &w).ok_or_else(|| {
            Error::Unsupported(format!(
                "chain-map image {w:?} escapes the kernel lattice spanned by {:?}",
                dst_basis.kernel_basis
            ))
        })?;
        images.push(coords.into_iter().map(|x| x.mod_floor(&dst.c)).collect());
    }
    Ok(AdamsEtaMap { modulus: dst.c.clone(), images })
}
