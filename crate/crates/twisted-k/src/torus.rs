//! Restriction to the maximal torus: the quotient ring
//! R(T)/(e^χ − 1 : χ in the twist lattice), an independent model of the
//! twisted theory used as a cross-check oracle.
//!
//! For twist n the translation lattice is n·B♭(Q∨), spanned by n times the
//! coroot images; cosets of the weight lattice modulo it are finite for
//! n ≠ 0 and are canonicalized through a Hermite-normal-form basis.  A fusion
//! basis class W_μ restricts to the signed Weyl-orbit sum of e^{μ+ρ} (times a
//! global sign), and Adams operations act by scaling exponents.

use crate::intlin::{hnf, IntMat};
use crate::rootsys::{add_w, scale_w, LieType, Weight};
use crate::verlinde::{TwistedContext, VerlindeClass};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::BTreeMap;

/// Canonicalization data for one twisted torus quotient.
#[derive(Debug, Clone)]
pub struct TorusQuotient {
    ctx: TwistedContext,
    /// Row-HNF basis of the translation lattice; full rank, so the pivot of
    /// row i sits on the diagonal.
    lattice: Vec<Vec<i64>>,
}

impl TorusQuotient {
    pub fn new(ctx: TwistedContext) -> Self {
        let rs = ctx.rs();
        let rows: Vec<Vec<BigInt>> = rs
            .coroot_images
            .iter()
            .map(|v| scale_w(ctx.twist(), v).into_iter().map(BigInt::from).collect())
            .collect();
        let h = hnf(&IntMat::from_rows(rows));
        let r = rs.rank();
        let mut lattice = Vec::with_capacity(r);
        for i in 0..r {
            let row: Vec<i64> = (0..r).map(|j| i64::try_from(h.at(i, j)).expect("small lattice entries")).collect();
            assert!(row[i] != 0, "translation lattice has full rank for a nonzero twist");
            lattice.push(row);
        }
        TorusQuotient { ctx, lattice }
    }

    pub fn ctx(&self) -> &TwistedContext {
        &self.ctx
    }

    /// Row-HNF basis of the translation lattice.
    pub fn lattice(&self) -> &[Vec<i64>] {
        &self.lattice
    }

    /// Number of cosets: the product of the HNF diagonal.
    pub fn coset_count(&self) -> i64 {
        (0..self.lattice.len()).map(|i| self.lattice[i][i]).product()
    }

    /// Canonical coset representative: reduce against the HNF rows top-down,
    /// leaving each coordinate in [0, diagonal).
    pub fn canonical_coset(&self, chi: &[i64]) -> Weight {
        let mut v = chi.to_vec();
        for (i, row) in self.lattice.iter().enumerate() {
            let q = v[i].div_euclid(row[i]);
            if q != 0 {
                for (x, y) in v.iter_mut().zip(row) {
                    *x -= q * y;
                }
            }
        }
        v
    }

    /// Signed Weyl antisymmetrization of e^{μ+ρ} in the quotient: the class
    /// of J(e^{μ+ρ}).  Exact zero when μ+ρ meets a finite wall or the orbit
    /// cancels modulo the lattice.
    pub fn weyl_antisymmetrization(&self, mu: &[i64]) -> TorusClass {
        let rs = self.ctx.rs();
        let mut out = TorusClass::zero(self.ctx.lie_type(), self.ctx.twist());
        let Some((lam, sign)) = rs.dominant_reduce_shifted(mu) else {
            return out;
        };
        let seed = add_w(&lam, &rs.rho);
        for (w, s) in rs.weyl_orbit_signed(&seed) {
            out.add_term(self.canonical_coset(&w), BigInt::from(s * sign));
        }
        out
    }

    /// i*(W_μ) extended linearly: (−1)^{|R_+|} J(e^{μ+ρ}) per basis class.
    pub fn restrict(&self, a: &VerlindeClass) -> Result<TorusClass> {
        if a.group() != self.ctx.lie_type() || a.twist() != self.ctx.twist() {
            return Err(Error::ContextMismatch(format!(
                "restrict expects ({}, twist {}), got ({}, twist {})",
                self.ctx.lie_type(),
                self.ctx.twist(),
                a.group(),
                a.twist()
            )));
        }
        let global = BigInt::from(self.ctx.rs().sign_longest_element());
        let mut out = TorusClass::zero(self.ctx.lie_type(), self.ctx.twist());
        for (mu, c) in a.terms() {
            let j = self.weyl_antisymmetrization(mu);
            out.add_assign_scaled(&(c * &global), &j);
        }
        Ok(out)
    }

    /// ψ^ℓ on the torus side: e^χ ↦ e^{ℓχ}, canonicalized at twist ℓn.
    /// The target quotient is returned alongside the image.
    pub fn adams(&self, ell: i64, a: &TorusClass) -> Result<(TorusQuotient, TorusClass)> {
        if ell == 0 {
            return Err(Error::ZeroTwist);
        }
        let target_ctx = TwistedContext::new(self.ctx.lie_type(), ell * self.ctx.twist())?;
        let target = TorusQuotient::new(target_ctx);
        let mut out = TorusClass::zero(target_ctx.lie_type(), target_ctx.twist());
        for (chi, c) in a.terms() {
            out.add_term(target.canonical_coset(&scale_w(ell, chi)), c.clone());
        }
        Ok((target, out))
    }

    /// Product in the quotient ring (convolution of exponents).
    pub fn multiply(&self, a: &TorusClass, b: &TorusClass) -> TorusClass {
        let mut out = TorusClass::zero(self.ctx.lie_type(), self.ctx.twist());
        for (x, cx) in a.terms() {
            for (y, cy) in b.terms() {
                out.add_term(self.canonical_coset(&add_w(x, y)), cx * cy);
            }
        }
        out
    }
}

/// Element of the torus quotient ring: canonical coset keys with integer
/// coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusClass {
    group: LieType,
    twist: i64,
    terms: BTreeMap<Weight, BigInt>,
}

impl TorusClass {
    pub fn zero(group: LieType, twist: i64) -> Self {
        TorusClass { group, twist, terms: BTreeMap::new() }
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

    pub fn add_term(&mut self, coset: Weight, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(coset).or_insert_with(BigInt::zero);
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

    /// JSON form: like a fusion class but keyed by "coset".
    pub fn to_json(&self) -> Result<serde_json::Value> {
        let mut items = Vec::new();
        for (w, c) in &self.terms {
            let c64 = i64::try_from(c)
                .map_err(|_| Error::Unsupported("coefficient exceeds JSON integer range".into()))?;
            items.push(serde_json::json!({"coset": w, "coeff": c64}));
        }
        Ok(serde_json::json!({
            "group": self.group.to_string(),
            "twist": self.twist,
            "terms": items,
        }))
    }
}
