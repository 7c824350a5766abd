//! Fusion (Verlinde) algebras: the twisted K-theory of a simple, simply
//! connected group acting on itself, realized as R(G)/I_k with basis the
//! level-k alcove weights.
//!
//! The twist is an integer n with |n| ≥ h∨ for a nonzero algebra; the level
//! is k = |n| − h∨.  Products are computed in R(G) and projected back by
//! affine alcove reduction, which also realizes the quotient relations of the
//! Verlinde ideal.

use crate::repring::{multiply, weyl_dimension, RepRingElement};
use crate::rootsys::{add_w, is_dominant, scale_w, sub_w, Family, LieType, RootSystem, Weight};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use std::collections::BTreeMap;

/// A twist level over one root system: the ambient data for one fusion
/// algebra.
#[derive(Debug, Clone, Copy)]
pub struct TwistedContext {
    rs: &'static RootSystem,
    n: i64,
}

impl TwistedContext {
    pub fn new(t: LieType, n: i64) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroTwist);
        }
        Ok(TwistedContext { rs: RootSystem::get(t), n })
    }

    pub fn rs(&self) -> &'static RootSystem {
        self.rs
    }

    pub fn lie_type(&self) -> LieType {
        self.rs.lie_type
    }

    pub fn twist(&self) -> i64 {
        self.n
    }

    /// Verlinde level k = |n| − h∨; negative means the zero algebra.
    pub fn level(&self) -> i64 {
        self.n.abs() - self.rs.dual_coxeter
    }

    /// The alcove bound N = |n| on B(μ+ρ, α_max).
    pub fn alcove_bound(&self) -> i64 {
        self.n.abs()
    }
}

/// Element of a fusion algebra: basis weights in Λ*_k with integer
/// coefficients, tagged by group and twist.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerlindeClass {
    group: LieType,
    twist: i64,
    terms: BTreeMap<Weight, BigInt>,
}

impl VerlindeClass {
    pub fn zero(group: LieType, twist: i64) -> Self {
        VerlindeClass { group, twist, terms: BTreeMap::new() }
    }

    /// Basis class W_μ; μ must lie in Λ*_k of the context.
    pub fn basis(ctx: &TwistedContext, mu: &[i64]) -> Result<Self> {
        if !is_dominant(mu) || ctx.rs.level(mu) > ctx.level() {
            return Err(Error::ContextMismatch(format!(
                "weight {mu:?} is not a level-{} alcove weight",
                ctx.level()
            )));
        }
        let mut out = VerlindeClass::zero(ctx.lie_type(), ctx.twist());
        out.add_term(mu.to_vec(), BigInt::from(1));
        Ok(out)
    }

    pub fn group(&self) -> LieType {
        self.group
    }

    pub fn twist(&self) -> i64 {
        self.twist
    }

    pub fn terms(&self) -> &BTreeMap<Weight, BigInt> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: Weight, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(w).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add_assign_scaled(&mut self, c: &BigInt, other: &Self) {
        assert_eq!(self.group, other.group, "group mismatch");
        assert_eq!(self.twist, other.twist, "twist mismatch");
        for (w, v) in &other.terms {
            self.add_term(w.clone(), c * v);
        }
    }

    pub fn scaled(&self, c: &BigInt) -> Self {
        let mut out = VerlindeClass::zero(self.group, self.twist);
        for (w, v) in &self.terms {
            out.add_term(w.clone(), c * v);
        }
        out
    }

    /// Lift to R(G) by sending each basis class to its irreducible.
    pub fn lift(&self) -> RepRingElement {
        RepRingElement::from_terms(self.terms.iter().map(|(w, c)| (w.clone(), c.clone())))
    }

    /// JSON form: {"group": "...", "twist": n, "terms": [...]}, terms sorted
    /// by weight.
    pub fn to_json(&self) -> Result<serde_json::Value> {
        let mut items = Vec::new();
        for (w, c) in &self.terms {
            let c64 = i64::try_from(c)
                .map_err(|_| Error::Unsupported("coefficient exceeds JSON integer range".into()))?;
            items.push(serde_json::json!({"weight": w, "coeff": c64}));
        }
        Ok(serde_json::json!({
            "group": self.group.to_string(),
            "twist": self.twist,
            "terms": items,
        }))
    }
}

/// All dominant weights of level ≤ k (the fusion basis Λ*_k), sorted.
pub fn level_weights(ctx: &TwistedContext) -> Vec<Weight> {
    weights_up_to_level(ctx.rs, ctx.level())
}

/// Dominant weights μ with B(μ, α_max) ≤ bound, sorted.
pub fn weights_up_to_level(rs: &RootSystem, bound: i64) -> Vec<Weight> {
    let mut out = Vec::new();
    if bound < 0 {
        return out;
    }
    let mut current = vec![0i64; rs.rank()];
    enumerate(&mut out, &mut current, 0, bound, &rs.comarks);
    out.sort();
    out
}

fn enumerate(out: &mut Vec<Weight>, current: &mut Weight, idx: usize, budget: i64, comarks: &[i64]) {
    if idx == current.len() {
        out.push(current.clone());
        return;
    }
    let step = comarks[idx];
    let mut used = 0i64;
    let mut label = 0i64;
    while used <= budget {
        current[idx] = label;
        enumerate(out, current, idx + 1, budget - used, comarks);
        label += 1;
        used += step;
    }
    current[idx] = 0;
}

/// Reduce μ+ρ into the open level-|n| alcove, tracking reflection parity.
/// None iff μ+ρ meets an affine wall (the class projects to zero).
pub fn alcove_reduce(ctx: &TwistedContext, mu: &[i64]) -> Option<(Weight, i64)> {
    let rs = ctx.rs;
    let n = ctx.alcove_bound();
    let theta = &rs.highest_root;
    let mut x = add_w(mu, &rs.rho);
    let mut sign = 1i64;
    loop {
        if let Some(i) = (0..rs.rank()).find(|&i| x[i] < 0) {
            x = rs.reflect_simple(&x, i);
            sign = -sign;
            continue;
        }
        if x.iter().any(|&c| c == 0) {
            return None;
        }
        let t = rs.level(&x);
        if t == n {
            return None;
        }
        if t > n {
            // Reflection through the affine wall B(x, α_max) = n.
            x = sub_w(&x, &scale_w(t - n, theta));
            sign = -sign;
            continue;
        }
        return Some((sub_w(&x, &rs.rho), sign));
    }
}

/// Pushforward R(G) → R_k(G): alcove reduction term by term, dropping walls.
pub fn pushforward(ctx: &TwistedContext, a: &RepRingElement) -> VerlindeClass {
    let mut out = VerlindeClass::zero(ctx.lie_type(), ctx.twist());
    for (mu, c) in a.terms() {
        if let Some((lam, s)) = alcove_reduce(ctx, mu) {
            out.add_term(lam, c * BigInt::from(s));
        }
    }
    out
}

/// Fusion product: lift to R(G), multiply, project back.
pub fn fusion_multiply(a: &VerlindeClass, b: &VerlindeClass) -> Result<VerlindeClass> {
    if a.group() != b.group() || a.twist() != b.twist() {
        return Err(Error::ContextMismatch(format!(
            "cannot fuse ({}, twist {}) with ({}, twist {})",
            a.group(),
            a.twist(),
            b.group(),
            b.twist()
        )));
    }
    if a.is_zero() || b.is_zero() {
        return Ok(VerlindeClass::zero(a.group(), a.twist()));
    }
    let ctx = TwistedContext::new(a.group(), a.twist())?;
    let prod = multiply(ctx.rs(), &a.lift(), &b.lift());
    Ok(pushforward(&ctx, &prod))
}

/// Generators of the fusion ideal in type A: V_{(|n|−r)L_1}, …, V_{(|n|−1)L_1}.
pub fn ideal_generators(ctx: &TwistedContext) -> Result<Vec<RepRingElement>> {
    let t = ctx.lie_type();
    if t.family() != Family::A {
        return Err(Error::Unsupported(format!(
            "fusion ideal generators are only constructed for type A, got {t}"
        )));
    }
    let n = ctx.alcove_bound();
    let r = ctx.rs.rank() as i64;
    if n < ctx.rs.dual_coxeter {
        return Err(Error::Unsupported(format!(
            "twist {n} is below the dual Coxeter number {}",
            ctx.rs.dual_coxeter
        )));
    }
    Ok((1..=r)
        .map(|i| {
            let mut w = vec![0i64; r as usize];
            w[0] = n - r + i - 1;
            RepRingElement::irreducible(&w)
        })
        .collect())
}

/// c(G, n): gcd of the dimensions of the fusion ideal generators, the
/// coefficient order of the nonequivariant twisted theory.
pub fn c_invariant(ctx: &TwistedContext) -> Result<BigInt> {
    let gens = ideal_generators(ctx)?;
    let mut g = BigInt::zero();
    for y in &gens {
        let d = weyl_dimension(ctx.rs(), y.terms().keys().next().expect("single term"))?;
        g = g.gcd(&d);
    }
    Ok(g)
}
