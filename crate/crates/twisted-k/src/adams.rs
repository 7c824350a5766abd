//! Adams operations on twisted K-theory classes: the affine scaling map on
//! fusion bases, the power formula on the coefficient group, the forgetful
//! map, and the twist-sign-flip correspondence.
//!
//! On a basis class W_μ at twist n the operation ψ^ℓ lands in twist ℓn:
//! W_{ℓμ+(ℓ−1)ρ} for ℓ > 0, a signed dual form for ℓ < 0, and zero for
//! ℓ = 0.  The alcove-reduction step is kept in the code path even though the
//! image weight of a basis class is provably already reduced; linear
//! combinations then extend the map additively.

use crate::repring::weyl_dimension;
use crate::rootsys::{add_w, scale_w, RootSystem, Weight};
use crate::verlinde::{alcove_reduce, c_invariant, level_weights, TwistedContext, VerlindeClass};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

fn check_class(ctx: &TwistedContext, a: &VerlindeClass) -> Result<()> {
    if a.group() != ctx.lie_type() || a.twist() != ctx.twist() {
        return Err(Error::ContextMismatch(format!(
            "class tagged ({}, twist {}) used in context ({}, twist {})",
            a.group(),
            a.twist(),
            ctx.lie_type(),
            ctx.twist()
        )));
    }
    Ok(())
}

/// ψ^ℓ on a fusion class, landing at twist ℓn.  Linear over basis classes:
/// W_μ ↦ W_{ℓμ+(ℓ−1)ρ} (ℓ > 0), (−1)^{|R_+|} W_{−ℓμ*+(−ℓ−1)ρ} (ℓ < 0),
/// 0 (ℓ = 0, the zero-twist codomain collapses).
pub fn adams_equivariant(ctx: &TwistedContext, ell: i64, a: &VerlindeClass) -> Result<VerlindeClass> {
    check_class(ctx, a)?;
    if ell == 0 {
        return Ok(VerlindeClass::zero(ctx.lie_type(), 0));
    }
    let target = TwistedContext::new(ctx.lie_type(), ell * ctx.twist())?;
    let rs = ctx.rs();
    let mut out = VerlindeClass::zero(ctx.lie_type(), target.twist());
    for (mu, c) in a.terms() {
        let (img, sign) = if ell > 0 {
            (add_w(&scale_w(ell, mu), &scale_w(ell - 1, &rs.rho)), 1)
        } else {
            let dual = rs.dual_weight(mu);
            (
                add_w(&scale_w(-ell, &dual), &scale_w(-ell - 1, &rs.rho)),
                rs.sign_longest_element(),
            )
        };
        if let Some((w, s)) = alcove_reduce(&target, &img) {
            out.add_term(w, c * BigInt::from(sign * s));
        }
    }
    Ok(out)
}

/// ψ^ℓ on the coefficient group: k ↦ ℓ^{|R_+|}·k reduced modulo c(G, ℓn).
/// Returns the canonical residue together with the modulus; ℓ = 0 collapses
/// to (0, None).
pub fn adams_coefficient(
    rs: &'static RootSystem,
    n: i64,
    ell: i64,
    kval: &BigInt,
) -> Result<(BigInt, Option<BigInt>)> {
    if n == 0 {
        return Err(Error::ZeroTwist);
    }
    if ell == 0 {
        return Ok((BigInt::zero(), None));
    }
    let target = TwistedContext::new(rs.lie_type, ell * n)?;
    let c = c_invariant(&target)?;
    let pow = BigInt::from(ell).pow(rs.positive_roots.len() as u32);
    Ok(((pow * kval).mod_floor(&c), Some(c)))
}

/// Forgetful map to nonequivariant coefficients: Σ coeff(μ)·dim V_μ reduced
/// modulo c(G, n).  Returns (residue, modulus).
pub fn forgetful(ctx: &TwistedContext, a: &VerlindeClass) -> Result<(BigInt, BigInt)> {
    check_class(ctx, a)?;
    let c = c_invariant(ctx)?;
    let mut s = BigInt::zero();
    for (mu, coeff) in a.terms() {
        s += coeff * weyl_dimension(ctx.rs(), mu)?;
    }
    Ok((s.mod_floor(&c), c))
}

/// The ψ^{−1} correspondence between the twist n and twist −n bases
/// (n ≥ h∨): each row is (μ, sign, μ*) with sign = (−1)^{|R_+|} and
/// μ* = −w_0 μ.
pub fn negative_twist_iso(ctx: &TwistedContext) -> Result<Vec<(Weight, i64, Weight)>> {
    let h = ctx.rs().dual_coxeter;
    if ctx.twist() < h {
        return Err(Error::ContextMismatch(format!(
            "twist-sign correspondence needs twist ≥ {h}, got {}",
            ctx.twist()
        )));
    }
    let sign = ctx.rs().sign_longest_element();
    Ok(level_weights(ctx)
        .into_iter()
        .map(|mu| {
            let dual = ctx.rs().dual_weight(&mu);
            (mu, sign, dual)
        })
        .collect())
}
