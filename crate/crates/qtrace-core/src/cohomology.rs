//! CW cochain complex of the compact surface built from the triangulation
//! (0-cells = punctures, 1-cells = edges, 2-cells = faces), cocycle counts
//! over cyclic coefficients, and the exact-sequence index identity tying
//! the balanced lattice to restricted cocycles.

use crate::error::{Error, Result};
use crate::lattice::{kernel_count_mod, kernel_mod, Int, IntMat, Lattice};
use crate::surface::{Slot, Triangulation};
use num_bigint::BigUint;

/// Integer coboundary matrices; `d1 * d0 = 0` exactly.
pub struct CochainComplex {
    /// `E x V`: (d0 f)(e) = f(head e) - f(tail e)
    pub d0: IntMat,
    /// `F x E`: signed sum of a face's sides
    pub d1: IntMat,
}

/// Orientation of each 1-cell: boundary edges follow the positive boundary
/// orientation; interior edges the walk direction of their
/// lexicographically smaller side.
pub fn cochain_complex(t: &Triangulation) -> CochainComplex {
    let nv = t.puncture_count;
    let ne = t.edges.len();
    let nf = t.n_faces();

    let mut d0 = IntMat::zeros(ne, nv);
    for (e, edge) in t.edges.iter().enumerate() {
        let (f, s) = edge.a;
        let tail = t.corner_class(f, s.start_corner());
        let head = t.corner_class(f, s.end_corner());
        d0.add_at(e, head, 1);
        d0.add_at(e, tail, -1);
    }

    let mut d1 = IntMat::zeros(nf, ne);
    for f in 0..nf {
        for s in Slot::ALL {
            let e = t.edge_id(f, s);
            let sign = if t.edges[e].a == (f, s) { 1 } else { -1 };
            d1.add_at(f, e, sign);
        }
    }
    CochainComplex { d0, d1 }
}

/// `|Z^1(Sigma-bar, Z_k)|`, computed from the Smith form of `d1`.
pub fn cocycle_count(t: &Triangulation, k: Int) -> BigUint {
    assert!(k >= 1);
    let cc = cochain_complex(t);
    kernel_count_mod(&cc.d1, k)
}

/// `|Z^1(Sigma-bar, Z_n)_l| = |l C^1 ∩ Z^1|` for `l | n`; substituting
/// `x = l y` identifies it with the kernel count modulo `n / l`.
pub fn restricted_cocycle_count(t: &Triangulation, n: Int, l: Int) -> Result<BigUint> {
    if l < 1 || n % l != 0 {
        return Err(Error::NotADivisor(l as u64, n as u64));
    }
    let cc = cochain_complex(t);
    Ok(kernel_count_mod(&cc.d1, n / l))
}

/// `[L ∩ k Z^m : N Z^m]` for a full-rank lattice `L` containing `N Z^m`.
pub fn intersection_index(lat: &Lattice, k: Int, n_big: Int) -> Result<BigUint> {
    let m = lat.ambient();
    let inter = lat.intersect(&Lattice::scaled_ambient(m, k));
    let sub = Lattice::scaled_ambient(m, n_big);
    match inter.index_of(&sub)? {
        crate::lattice::Index::Finite(x) => Ok(x),
        crate::lattice::Index::Infinite => Err(Error::PropertyViolation(
            "intersection lattice is not full rank".into(),
        )),
    }
}

/// Cardinality consequence of the exact sequence
/// `0 -> N Z^V -> Lambda ∩ k Z^V -> Z^1(Z_n)_l -> 0` for the balanced
/// lattice of the reduced vertex set. Returns (lattice index, cocycle count).
pub fn exact_sequence_check(t: &Triangulation, n: Int, k: Int) -> Result<(BigUint, BigUint)> {
    assert!(k >= 1 && n >= 2);
    let l = crate::lattice::gcd(k, n);
    let nn = k * n / l;
    let balanced = crate::ntriang::balanced_lattice(t, n);
    let index = intersection_index(&balanced, k, nn)?;
    let count = restricted_cocycle_count(t, n, l)?;
    Ok((index, count))
}

/// Same identity for the X-vertex-set balanced lattice of the extended
/// triangulation (`{ k : k H = 0 mod n }` over `V_lambda`), counted on the
/// base surface.
pub fn exact_sequence_check_extended(
    base: &Triangulation,
    tm: &crate::trace::TraceMatrices,
    k: Int,
) -> Result<(BigUint, BigUint)> {
    let n = tm.n;
    let l = crate::lattice::gcd(k, n);
    let nn = k * n / l;
    let balanced = kernel_mod(&tm.h, n);
    let index = intersection_index(&balanced, k, nn)?;
    let count = restricted_cocycle_count(base, n, l)?;
    Ok((index, count))
}
