//! The representation ring R(G): exact dimensions, weight diagrams, tensor
//! products, and the classical Adams operations.
//!
//! Elements are finite integer combinations of irreducibles V_μ indexed by
//! dominant highest weights.  Weight diagrams come from the string-saturation
//! property of irreducible diagrams plus the Freudenthal recursion; tensor
//! products use the shifted-reduction (Brauer–Klimyk) rule, which is uniform
//! across all simple types.

use crate::rootsys::{add_w, is_dominant, scale_w, sub_w, LieType, RootSystem, Weight};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use once_cell::sync::Lazy;
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

/// Virtual representation: dominant highest weights with nonzero integer
/// coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepRingElement {
    terms: BTreeMap<Weight, BigInt>,
}

impl RepRingElement {
    pub fn zero() -> Self {
        RepRingElement { terms: BTreeMap::new() }
    }

    /// The irreducible V_μ; μ must be dominant.
    pub fn irreducible(mu: &[i64]) -> Self {
        assert!(is_dominant(mu), "irreducible needs a dominant weight, got {mu:?}");
        let mut terms = BTreeMap::new();
        terms.insert(mu.to_vec(), BigInt::one());
        RepRingElement { terms }
    }

    pub fn from_terms(pairs: impl IntoIterator<Item = (Weight, BigInt)>) -> Self {
        let mut e = RepRingElement::zero();
        for (w, c) in pairs {
            e.add_term(w, c);
        }
        e
    }

    pub fn terms(&self) -> &BTreeMap<Weight, BigInt> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: Weight, c: BigInt) {
        assert!(is_dominant(&w), "representation ring keys must be dominant, got {w:?}");
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(w).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            // Re-borrow immutably to find and drop the zero entry.
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add_assign_scaled(&mut self, c: &BigInt, other: &Self) {
        if c.is_zero() {
            return;
        }
        for (w, v) in &other.terms {
            self.add_term(w.clone(), c * v);
        }
    }

    pub fn scaled(&self, c: &BigInt) -> Self {
        let mut out = RepRingElement::zero();
        out.add_assign_scaled(c, self);
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign_scaled(&BigInt::one(), other);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign_scaled(&BigInt::from(-1), other);
        out
    }

    /// JSON form: sorted list of {"weight": [...], "coeff": n}.
    pub fn to_json(&self) -> Result<serde_json::Value> {
        let mut items = Vec::new();
        for (w, c) in &self.terms {
            let c64 = i64::try_from(c)
                .map_err(|_| Error::Unsupported("coefficient exceeds JSON integer range".into()))?;
            items.push(serde_json::json!({"weight": w, "coeff": c64}));
        }
        Ok(serde_json::Value::Array(items))
    }
}

/// Exact Weyl dimension ∏_{α>0} B(μ+ρ, α)/B(ρ, α).
pub fn weyl_dimension(rs: &RootSystem, mu: &[i64]) -> Result<BigInt> {
    if !is_dominant(mu) {
        return Err(Error::NonDominant(mu.to_vec()));
    }
    let shifted = add_w(mu, &rs.rho);
    let mut num = BigRational::one();
    let mut den = BigRational::one();
    for alpha in &rs.positive_roots {
        num *= rs.inner(&shifted, alpha)?;
        den *= rs.inner(&rs.rho, alpha)?;
    }
    let q = num / den;
    assert!(q.is_integer(), "Weyl dimension must be an integer");
    Ok(q.to_integer())
}

/// Virtual dimension of an element (the augmentation R(G) → Z).
pub fn virtual_dimension(rs: &RootSystem, a: &RepRingElement) -> BigInt {
    let mut acc = BigInt::zero();
    for (w, c) in a.terms() {
        acc += c * weyl_dimension(rs, w).expect("stored keys are dominant");
    }
    acc
}

type WeightMap = BTreeMap<Weight, BigInt>;

static DIAGRAM_CACHE: Lazy<Mutex<HashMap<(LieType, Weight), Arc<WeightMap>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// Full weight diagram of V_λ with multiplicities (Freudenthal recursion).
pub fn weight_multiplicities(rs: &RootSystem, lambda: &[i64]) -> Result<Arc<WeightMap>> {
    if !is_dominant(lambda) {
        return Err(Error::NonDominant(lambda.to_vec()));
    }
    let key = (rs.lie_type, lambda.to_vec());
    if let Some(hit) = DIAGRAM_CACHE.lock().expect("diagram cache poisoned").get(&key) {
        return Ok(Arc::clone(hit));
    }
    let computed = Arc::new(freudenthal(rs, lambda));
    DIAGRAM_CACHE
        .lock()
        .expect("diagram cache poisoned")
        .entry(key)
        .or_insert(computed.clone());
    Ok(computed)
}

fn freudenthal(rs: &RootSystem, lambda: &[i64]) -> WeightMap {
    // Support first: walk down from λ; ν − α_i belongs to the diagram iff
    // the α_i-string up from ν (of length p) satisfies p + ⟨ν, α_i∨⟩ ≥ 1.
    let mut support: Vec<Weight> = vec![lambda.to_vec()];
    let mut seen: HashMap<Weight, usize> = HashMap::new();
    seen.insert(lambda.to_vec(), 0);
    let mut frontier = vec![lambda.to_vec()];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for nu in frontier {
            for i in 0..rs.rank() {
                let mut p = 0i64;
                let mut probe = add_w(&nu, &rs.cartan[i]);
                while seen.contains_key(&probe) {
                    p += 1;
                    probe = add_w(&probe, &rs.cartan[i]);
                }
                if p + nu[i] >= 1 {
                    let down = sub_w(&nu, &rs.cartan[i]);
                    if !seen.contains_key(&down) {
                        seen.insert(down.clone(), support.len());
                        support.push(down.clone());
                        next.push(down);
                    }
                }
            }
        }
        frontier = next;
    }
    // The walk above explores breadth-first by depth, which is exactly
    // height order, so `support` is already sorted by decreasing height.
    let shifted_lambda = add_w(lambda, &rs.rho);
    let lambda_sq = rs.inner(&shifted_lambda, &shifted_lambda).expect("rank ok");
    let mut mult: Vec<BigInt> = vec![BigInt::zero(); support.len()];
    mult[0] = BigInt::one();
    for idx in 1..support.len() {
        let nu = &support[idx];
        let mut sum = BigRational::zero();
        for alpha in &rs.positive_roots {
            let mut t = 1i64;
            loop {
                let up = add_w(nu, &scale_w(t, alpha));
                let Some(&uidx) = seen.get(&up) else {
                    break;
                };
                let ip = rs.inner(&up, alpha).expect("rank ok");
                sum += ip * BigRational::from(mult[uidx].clone());
                t += 1;
            }
        }
        let shifted_nu = add_w(nu, &rs.rho);
        let denom = &lambda_sq - rs.inner(&shifted_nu, &shifted_nu).expect("rank ok");
        let value = BigRational::from(BigInt::from(2)) * sum / denom;
        assert!(value.is_integer(), "Freudenthal multiplicity must be integral");
        mult[idx] = value.to_integer();
        assert!(mult[idx].is_positive(), "diagram support carries positive multiplicity");
    }
    support.into_iter().zip(mult).collect()
}

static TENSOR_CACHE: Lazy<Mutex<HashMap<(LieType, Weight, Weight), RepRingElement>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// V_λ ⊗ V_μ decomposed into irreducibles (shifted-reduction rule).
pub fn tensor_decompose(rs: &RootSystem, lambda: &[i64], mu: &[i64]) -> Result<RepRingElement> {
    if !is_dominant(lambda) {
        return Err(Error::NonDominant(lambda.to_vec()));
    }
    if !is_dominant(mu) {
        return Err(Error::NonDominant(mu.to_vec()));
    }
    // Iterate the smaller diagram; cache on the ordered pair.
    let (a, b) = if weyl_dimension(rs, lambda)? <= weyl_dimension(rs, mu)? {
        (mu.to_vec(), lambda.to_vec())
    } else {
        (lambda.to_vec(), mu.to_vec())
    };
    let key = (rs.lie_type, a.clone(), b.clone());
    if let Some(hit) = TENSOR_CACHE.lock().expect("tensor cache poisoned").get(&key) {
        return Ok(hit.clone());
    }
    let mut out = RepRingElement::zero();
    for (nu, m) in weight_multiplicities(rs, &b)?.iter() {
        if let Some((tau, sign)) = rs.dominant_reduce_shifted(&add_w(&a, nu)) {
            out.add_term(tau, m * BigInt::from(sign));
        }
    }
    TENSOR_CACHE
        .lock()
        .expect("tensor cache poisoned")
        .entry(key)
        .or_insert(out.clone());
    Ok(out)
}

/// Product in R(G), bilinear over tensor_decompose.
pub fn multiply(rs: &RootSystem, a: &RepRingElement, b: &RepRingElement) -> RepRingElement {
    let mut out = RepRingElement::zero();
    for (la, ca) in a.terms() {
        for (mu, cb) in b.terms() {
            let t = tensor_decompose(rs, la, mu).expect("stored keys are dominant");
            out.add_assign_scaled(&(ca * cb), &t);
        }
    }
    out
}

/// Decompose a W-invariant virtual character (weight ↦ coefficient) into
/// irreducibles by repeatedly stripping the highest remaining weight.
fn decompose_character(rs: &RootSystem, mut chi: WeightMap) -> RepRingElement {
    let mut out = RepRingElement::zero();
    loop {
        chi.retain(|_, c| !c.is_zero());
        let Some(top) = chi
            .keys()
            .max_by(|a, b| {
                let ha = rs.height_key(a);
                let hb = rs.height_key(b);
                ha.cmp(&hb).then_with(|| a.cmp(b))
            })
            .cloned()
        else {
            break;
        };
        assert!(is_dominant(&top), "top weight of a W-invariant character is dominant");
        let c = chi.get(&top).expect("present").clone();
        for (nu, m) in weight_multiplicities(rs, &top).expect("dominant").iter() {
            let e = chi.entry(nu.clone()).or_insert_with(BigInt::zero);
            *e -= &c * m;
        }
        out.add_term(top, c);
    }
    out
}

static ADAMS_CACHE: Lazy<Mutex<HashMap<(LieType, i64, Weight), RepRingElement>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// Classical Adams operation ψ^ℓ on R(G): on characters, e^ν ↦ e^{ℓν}.
/// ψ^0 is the augmentation (virtual dimension times the unit); ψ^{-1} is
/// conjugation.
pub fn adams_classical(rs: &RootSystem, ell: i64, a: &RepRingElement) -> RepRingElement {
    if ell == 0 {
        let d = virtual_dimension(rs, a);
        let mut out = RepRingElement::zero();
        out.add_term(vec![0; rs.rank()], d);
        return out;
    }
    if ell == 1 {
        return a.clone();
    }
    let mut out = RepRingElement::zero();
    for (lam, c) in a.terms() {
        let key = (rs.lie_type, ell, lam.clone());
        let hit = ADAMS_CACHE.lock().expect("adams cache poisoned").get(&key).cloned();
        let psi = match hit {
            Some(v) => v,
            None => {
                let mut scaled: WeightMap = BTreeMap::new();
                for (nu, m) in weight_multiplicities(rs, lam).expect("dominant").iter() {
                    let e = scaled.entry(scale_w(ell, nu)).or_insert_with(BigInt::zero);
                    *e += m;
                }
                let v = decompose_character(rs, scaled);
                ADAMS_CACHE
                    .lock()
                    .expect("adams cache poisoned")
                    .entry(key)
                    .or_insert(v.clone());
                v
            }
        };
        out.add_assign_scaled(c, &psi);
    }
    out
}

/// Exterior powers Λ^0 … Λ^kmax of the irreducible V_λ, by elementary
/// symmetric functions of the weight multiset.
pub fn exterior_powers(rs: &RootSystem, lambda: &[i64], kmax: usize) -> Result<Vec<RepRingElement>> {
    let diagram = weight_multiplicities(rs, lambda)?;
    // e_k over the multiset: DP in characters, one weight block at a time.
    let mut polys: Vec<WeightMap> = vec![BTreeMap::new(); kmax + 1];
    polys[0].insert(vec![0; rs.rank()], BigInt::one());
    for (w, m) in diagram.iter() {
        let m_usize = usize::try_from(m).expect("multiplicity fits usize");
        let mut next: Vec<WeightMap> = vec![BTreeMap::new(); kmax + 1];
        for k in 0..=kmax {
            for j in 0..=k.min(m_usize) {
                let binom = binomial(m_usize, j);
                let jw = scale_w(j as i64, w);
                for (v, c) in &polys[k - j] {
                    let e = next[k].entry(add_w(v, &jw)).or_insert_with(BigInt::zero);
                    *e += &binom * c;
                }
            }
        }
        polys = next;
    }
    Ok(polys.into_iter().map(|chi| decompose_character(rs, chi)).collect())
}

fn binomial(n: usize, k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}
