//! The quantum torus attached to an anti-symmetric integer matrix:
//! monomials with Weyl normalization, centrality tests, center lattices at
//! a root of unity, and the rank / PI-degree over the center.
//!
//! Scalars are powers of the quantum parameter. At a root of unity of
//! order `m''` (the order of its square) exponents live modulo `2 m''`;
//! generically they live in `Z`. No cyclotomic arithmetic is needed for
//! any verified statement.

use crate::error::{Error, Result};
use crate::lattice::{antisym_normal_form, gcd, kernel_lattice, kernel_mod, Int, IntMat, Lattice};
use crate::ntriang::SmallVertex;
use crate::trace::TraceMatrices;
use crate::unity::RootParams;
use num_bigint::BigUint;
use std::collections::BTreeMap;

/// Exponent arithmetic for the quantum parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalarMode {
    Generic,
    /// exponents of q-hat modulo `2 m''`
    Root {
        m2: Int,
    },
}

impl ScalarMode {
    fn normalize(&self, e: Int) -> Int {
        match self {
            ScalarMode::Generic => e,
            ScalarMode::Root { m2 } => e.rem_euclid(2 * m2),
        }
    }
}

/// `q^scalar * x^exps` with the Weyl product rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusMonomial {
    pub exps: Vec<Int>,
    pub scalar: Int,
}

/// Weyl-normalized monomial `x^k` (scalar exponent zero).
pub fn weyl(k: &[Int], p: &IntMat) -> Result<TorusMonomial> {
    if k.len() != p.nrows() {
        return Err(Error::DimensionMismatch(k.len(), p.nrows()));
    }
    Ok(TorusMonomial {
        exps: k.to_vec(),
        scalar: 0,
    })
}

/// `<k1, k2>_P = k1 P k2^T`.
pub fn pairing(k1: &[Int], k2: &[Int], p: &IntMat) -> Int {
    let pk2 = p.row_mul(k2); // k2 P, and P anti-symmetric: k1 P k2^T = -(k2 P) k1^T
    -k1.iter().zip(&pk2).map(|(&a, &b)| a * b).sum::<Int>()
}

/// `x^{k1} x^{k2} = q^{<k1,k2>_P} x^{k1+k2}`.
pub fn mul_monomials(
    a: &TorusMonomial,
    b: &TorusMonomial,
    p: &IntMat,
    mode: ScalarMode,
) -> TorusMonomial {
    let bracket = pairing(&a.exps, &b.exps, p);
    let exps = a.exps.iter().zip(&b.exps).map(|(&x, &y)| x + y).collect();
    TorusMonomial {
        exps,
        scalar: mode.normalize(a.scalar + b.scalar + bracket),
    }
}

/// A finite linear combination with coefficients that are integer Laurent
/// combinations of the quantum parameter (maps scalar exponent -> integer).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TorusElement {
    pub terms: BTreeMap<Vec<Int>, BTreeMap<Int, Int>>,
}

impl TorusElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_monomial(m: &TorusMonomial) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(m.exps.clone(), BTreeMap::from([(m.scalar, 1)]));
        TorusElement { terms }
    }

    pub fn one(dim: usize) -> Self {
        Self::from_monomial(&TorusMonomial {
            exps: vec![0; dim],
            scalar: 0,
        })
    }

    fn insert(&mut self, exps: Vec<Int>, qexp: Int, coef: Int, mode: ScalarMode) {
        if coef == 0 {
            return;
        }
        let entry = self.terms.entry(exps.clone()).or_default();
        let q = mode.normalize(qexp);
        let c = entry.entry(q).or_insert(0);
        *c += coef;
        if *c == 0 {
            entry.remove(&q);
        }
        if entry.is_empty() {
            self.terms.remove(&exps);
        }
    }

    pub fn add(&self, other: &Self, mode: ScalarMode) -> Self {
        let mut out = self.clone();
        for (exps, coeffs) in &other.terms {
            for (&q, &c) in coeffs {
                out.insert(exps.clone(), q, c, mode);
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, cs)| (e.clone(), cs.iter().map(|(&q, &c)| (q, -c)).collect()))
            .collect();
        TorusElement { terms }
    }

    pub fn mul(&self, other: &Self, p: &IntMat, mode: ScalarMode) -> Self {
        let mut out = TorusElement::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let bracket = pairing(e1, e2, p);
                let exps: Vec<Int> = e1.iter().zip(e2).map(|(&x, &y)| x + y).collect();
                for (&q1, &a) in c1 {
                    for (&q2, &b) in c2 {
                        out.insert(exps.clone(), q1 + q2 + bracket, a * b, mode);
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// `x^k` central in the torus at a root of unity of order `m''` iff
/// `k P = 0 mod m''` (row test).
pub fn is_central(k: &[Int], p: &IntMat, m2: Int) -> bool {
    assert!(m2 >= 1);
    p.row_mul(k).iter().all(|&x| x.rem_euclid(m2) == 0)
}

/// Exponent lattice of the center at a root of unity.
pub fn center_lattice(p: &IntMat, m2: Int) -> Lattice {
    kernel_mod(p, m2)
}

/// Exponent lattice of the center for generic quantum parameter: the exact
/// integer kernel of P.
pub fn generic_center(p: &IntMat) -> Lattice {
    kernel_lattice(p)
}

/// Rank of the torus over its center: the ambient index of the center
/// lattice (always finite at a root of unity).
pub fn rank_over_center(p: &IntMat, m2: Int) -> BigUint {
    center_lattice(p, m2)
        .ambient_index()
        .finite()
        .expect("center lattice has full rank mod m''")
}

fn integer_sqrt(x: &BigUint) -> Option<BigUint> {
    let root = x.sqrt();
    (&root * &root == *x).then_some(root)
}

/// PI-degree: the square root of the rank, cross-checked against the
/// product `prod m''/gcd(m'', h_i)` over the anti-symmetric invariants.
pub fn pi_degree(p: &IntMat, m2: Int) -> Result<BigUint> {
    let rank = rank_over_center(p, m2);
    let root = integer_sqrt(&rank).ok_or_else(|| Error::NotPerfectSquare(rank.to_string()))?;
    let nf = antisym_normal_form(p)?;
    let mut prod = BigUint::from(1u32);
    for h in &nf.invariants {
        prod *= BigUint::from((m2 / gcd(m2, *h)) as u128);
    }
    if prod != root {
        return Err(Error::PropertyViolation(format!(
            "PI-degree mismatch: sqrt(rank) = {root}, invariant product = {prod}"
        )));
    }
    Ok(root)
}

/// The center-generating lattices of the trace torus at an odd root.
pub struct SkeinCenterLattices {
    /// `{ k : k K = 0 mod m' }`
    pub lambda_m_prime: Lattice,
    /// alternating boundary generators, one per (even component, 1..n-1)
    pub boundary_gens: Vec<Vec<Int>>,
    pub lambda_boundary: Lattice,
    /// `lambda_m_prime + <boundary>`
    pub lambda_z: Lattice,
}

/// Position of `u_j` on edge label `lab` of component `comp` inside the
/// `V'` order of `tm`.
fn u_position(tm: &TraceMatrices, comp: usize, lab: usize, j: Int) -> usize {
    let ev = &tm.ev;
    let nm1 = (ev.n - 1) as usize;
    let b = ev
        .blocks
        .iter()
        .position(|blk| blk.comp == comp && blk.label == lab)
        .expect("edge block");
    // blocks list u_{n-1}, ..., u_1
    ev.interior_len + b * nm1 + (ev.n - 1 - j) as usize
}

/// Compute the lattices of the center theorem at an odd root of unity.
pub fn skein_center_lattices(
    tm: &TraceMatrices,
    params: &RootParams,
) -> Result<SkeinCenterLattices> {
    if !params.odd_order {
        return Err(Error::OddOrderRequired(params.m2));
    }
    let m_prime = params.m_prime as Int;
    let lambda_m_prime = kernel_mod(&tm.k, m_prime);

    let n = tm.n;
    let dim = tm.ev.v_a.len();
    let mut boundary_gens = Vec::new();
    let spans = crate::trace::component_spans(&tm.ev);
    for (comp, span) in &spans {
        let r_i = span.end - span.start;
        if r_i % 2 != 0 {
            continue;
        }
        for j in 1..n {
            let mut gen = vec![0; dim];
            for k in 1..=r_i {
                gen[u_position(tm, *comp, k, j)] = if k % 2 == 1 { 1 } else { -1 };
            }
            boundary_gens.push(gen);
        }
    }
    let lambda_boundary = Lattice::from_rows(dim, &boundary_gens);
    let lambda_z = lambda_m_prime.sum(&lambda_boundary);
    Ok(SkeinCenterLattices {
        lambda_m_prime,
        boundary_gens,
        lambda_boundary,
        lambda_z,
    })
}

/// Closed-form rank of the trace torus over its center at an odd root:
/// `d^(r - t) * m^((n^2-1) r - t (n-1))`.
pub fn rank_closed_form(params: &RootParams, r: i64, t: usize) -> BigUint {
    let n = params.n as i64;
    let exp = (n * n - 1) * r - (t as i64) * (n - 1);
    BigUint::from(params.d).pow((r - t as i64) as u32) * BigUint::from(params.m).pow(exp as u32)
}

/// A label for a `V'` vertex, used when emitting center lattices.
pub fn vertex_label(v: &SmallVertex) -> String {
    format!("f{}:{},{},{}", v.face, v.i, v.j, v.k)
}
