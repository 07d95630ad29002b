//! The boundary-fan triangulation, its reduced trace matrices and block
//! identities, the palindromic boundary lattice, and the reduced center
//! and rank theorems.
//!
//! Boundary fans: on a component with `r >= 2` punctures, consecutive
//! boundary edge pairs `(e_{2k-1}, e_{2k})` bound a triangle with an arc;
//! when `r` is odd the last edge `e_r` sits in one extra triangle bounded
//! by two arcs. Components with `r = 1` need no arcs.

use crate::error::{Error, Result};
use crate::lattice::{kernel_mod, Index, Int, IntMat, Lattice};
use crate::ntriang::{
    canonical, face_points, h_matrix, quiver_matrix, vertex_on_slot, OrderedVertices, SmallVertex,
};
use crate::surface::{classify, parse_surface, Gluing, SideRef, Slot, SurfaceSpec, Triangulation};
use crate::trace::{g_matrix, kbar_matrix, BlockReport};
use crate::unity::RootParams;
use num_bigint::BigUint;
use serde::Serialize;

/// A triangulation whose boundary-adjacent faces are fans, plus the
/// per-component boundary bookkeeping.
#[derive(Clone, Debug)]
pub struct MuTriangulation {
    pub t: Triangulation,
    pub comps: Vec<MuComponent>,
}

/// Boundary component of the fan triangulation. Edge labels follow the
/// positive orientation with the fan pattern anchored at label 1.
#[derive(Clone, Debug)]
pub struct MuComponent {
    pub r: usize,
    /// boundary edge ids by 1-based label
    pub edges: Vec<usize>,
    /// true when `r` is even
    pub even: bool,
}

/// Build the boundary-fan triangulation for a surface. Supported shapes:
/// any surface whose components all have one boundary puncture (kept
/// as-is), and disks with `r >= 4` (built from scratch). A disk with
/// `r = 3` is refused: its fan arc would be isotopic to a boundary edge.
pub fn mu_triangulation(t: &Triangulation) -> Result<MuTriangulation> {
    let inv = classify(t);
    if !inv.essentially_bordered {
        return Err(Error::NoBoundary);
    }
    if !inv.no_interior_punctures {
        return Err(Error::InteriorPuncture);
    }

    if inv.punctures_per_component.iter().all(|&r| r == 1) {
        // no fan arcs required; the given triangulation is already of the
        // required shape
        return finish_mu(t);
    }

    let is_disk = inv.boundary_component_count == 1 && inv.euler_compact == 1;
    if !is_disk {
        return Err(Error::NotTriangulable(format!(
            "boundary-fan construction implemented for disks and surfaces with one puncture \
             per boundary component; got b={}, chi={}",
            inv.boundary_component_count, inv.euler_compact
        )));
    }
    let r = inv.punctures_per_component[0];
    if r == 3 {
        return Err(Error::NotTriangulable(
            "on a triangle, fan arcs are isotopic to boundary edges".into(),
        ));
    }
    finish_mu(&parse_surface(&polygon_mu_spec(r))?)
}

/// Fan triangulation of the disk with `r >= 4` boundary punctures.
///
/// Faces `0..floor(r/2)` are the fans: slots `(e1, e2, e3)` are the arc,
/// the odd boundary edge `e_{2k-1}` and the even one `e_{2k}`. The
/// interior polygon is fanned from the first puncture; when `r` is odd
/// the last interior face carries the boundary edge `e_r` on its `e3`.
pub fn polygon_mu_spec(r: usize) -> SurfaceSpec {
    assert!(r >= 4);
    let m = r / 2;
    let fans = m as i64;
    let mut faces: Vec<i64> = (0..fans).collect();
    let mut gluings = Vec::new();

    if r.is_multiple_of(2) {
        if m == 2 {
            // interior bigon degenerates: the two fan arcs coincide
            gluings.push(Gluing {
                a: SideRef(0, Slot::E1),
                b: SideRef(1, Slot::E1),
            });
        } else {
            // interior faces G_t (t = 1..m-2) fanned from p_1:
            // e1 = diagonal d_t, e2 = arc a_{t+1}, e3 = diagonal d_{t+1}
            for t in 0..(m - 2) as i64 {
                faces.push(fans + t);
            }
            for t in 0..(m - 2) as i64 {
                let g = fans + t;
                gluings.push(Gluing {
                    a: SideRef(g, Slot::E2),
                    b: SideRef(t + 1, Slot::E1),
                });
                if t == 0 {
                    gluings.push(Gluing {
                        a: SideRef(g, Slot::E1),
                        b: SideRef(0, Slot::E1),
                    });
                } else {
                    gluings.push(Gluing {
                        a: SideRef(g, Slot::E1),
                        b: SideRef(g - 1, Slot::E3),
                    });
                }
                if t == (m - 2) as i64 - 1 {
                    gluings.push(Gluing {
                        a: SideRef(g, Slot::E3),
                        b: SideRef(fans - 1, Slot::E1),
                    });
                }
            }
        }
    } else {
        // odd r: fans cover e_1..e_{r-1}; interior polygon has sides
        // a_1..a_m and e_r, fanned from p_1 with the last face holding e_r
        let inner = m - 1; // interior faces
        for t in 0..inner as i64 {
            faces.push(fans + t);
        }
        for t in 0..inner as i64 {
            let g = fans + t;
            // e1 side: previous diagonal (or the first fan arc)
            if t == 0 {
                gluings.push(Gluing {
                    a: SideRef(g, Slot::E1),
                    b: SideRef(0, Slot::E1),
                });
            } else {
                gluings.push(Gluing {
                    a: SideRef(g, Slot::E1),
                    b: SideRef(g - 1, Slot::E3),
                });
            }
            // e2 side: the next fan arc
            gluings.push(Gluing {
                a: SideRef(g, Slot::E2),
                b: SideRef(t + 1, Slot::E1),
            });
            // e3 of the last face is the boundary edge e_r; inner faces
            // pass their e3 to the next interior face (handled above)
        }
    }
    SurfaceSpec {
        name: format!("mu-polygon-{r}"),
        faces,
        gluings,
    }
}

/// Derive the per-component labeled boundary structure and verify the fan
/// pattern (odd labels on `e2` slots, even labels on `e3` slots, the last
/// odd edge on the `e3` slot of a one-boundary-edge face).
fn finish_mu(t: &Triangulation) -> Result<MuTriangulation> {
    let mut comps = Vec::new();
    for ci in 0..t.boundary_components.len() {
        let cycle = &t.boundary_components[ci].edges;
        let r = cycle.len();
        if r == 1 {
            comps.push(MuComponent {
                r,
                edges: cycle.clone(),
                even: false,
            });
            continue;
        }
        let slot_of = |e: usize| t.edges[e].a.1;
        let boundary_slots_of_face = |f: usize| {
            Slot::ALL
                .iter()
                .filter(|&&s| t.is_boundary_slot(f, s))
                .count()
        };
        // candidate rotations: label-1 edge must be an e2 slot
        let mut chosen: Option<Vec<usize>> = None;
        'rot: for start in 0..r {
            let rot: Vec<usize> = (0..r).map(|i| cycle[(start + i) % r]).collect();
            for (idx, &e) in rot.iter().enumerate() {
                let lab = idx + 1;
                let ok = if r.is_multiple_of(2) {
                    if lab % 2 == 1 {
                        slot_of(e) == Slot::E2
                    } else {
                        slot_of(e) == Slot::E3
                    }
                } else if lab == r {
                    slot_of(e) == Slot::E3 && boundary_slots_of_face(t.edges[e].a.0) == 1
                } else if lab % 2 == 1 {
                    slot_of(e) == Slot::E2 && boundary_slots_of_face(t.edges[e].a.0) == 2
                } else {
                    slot_of(e) == Slot::E3 && boundary_slots_of_face(t.edges[e].a.0) == 2
                };
                if !ok {
                    continue 'rot;
                }
            }
            chosen = Some(rot);
            break;
        }
        let Some(edges) = chosen else {
            return Err(Error::NotTriangulable(
                "boundary edges do not follow the fan pattern".into(),
            ));
        };
        comps.push(MuComponent {
            r,
            edges,
            even: r.is_multiple_of(2),
        });
    }
    Ok(MuTriangulation {
        t: t.clone(),
        comps,
    })
}

/// Ordered vertex data of a fan triangulation:
/// `[interior | comp_1 (W_1, U_1, V_1) | comp_2 ... ]`.
#[derive(Clone, Debug)]
pub struct MuVertices {
    pub n: Int,
    pub vbar: OrderedVertices,
    pub interior_len: usize,
    pub comps: Vec<MuCompRanges>,
}

#[derive(Clone, Debug)]
pub struct MuCompRanges {
    pub r: usize,
    /// block count of W_i (equals that of U_i)
    pub pairs: usize,
    pub w: std::ops::Range<usize>,
    pub u: std::ops::Range<usize>,
    pub v: std::ops::Range<usize>,
}

impl MuCompRanges {
    pub fn all(&self) -> Vec<usize> {
        self.w
            .clone()
            .chain(self.u.clone())
            .chain(self.v.clone())
            .collect()
    }
}

pub fn mu_vertices(mu: &MuTriangulation, n: Int) -> MuVertices {
    let t = &mu.t;
    // interior = canonical vertices not on boundary slots
    let mut interior = std::collections::BTreeSet::new();
    for f in 0..t.n_faces() {
        for (i, j, k) in face_points(n) {
            let v = canonical(t, SmallVertex::new(f, i, j, k), n);
            let on_boundary = v
                .slot()
                .map(|s| t.is_boundary_slot(v.face, s))
                .unwrap_or(false);
            if !on_boundary {
                interior.insert(v);
            }
        }
    }
    let mut verts: Vec<SmallVertex> = interior.into_iter().collect();
    let interior_len = verts.len();

    let mut comps = Vec::new();
    for comp in &mu.comps {
        let r = comp.r;
        let w_start = verts.len();
        let mut pairs = 0usize;
        if r >= 2 {
            // W_i: w-vertices on odd labels, (r - j, n - k) lexicographic
            let last_odd = if comp.even { r - 1 } else { r - 2 };
            for j in (1..=last_odd).rev().filter(|j| j % 2 == 1) {
                let (f, s) = t.edges[comp.edges[j - 1]].a;
                debug_assert_eq!(s, Slot::E2);
                for k in (1..n).rev() {
                    verts.push(SmallVertex::new(f, 0, k, n - k));
                }
                pairs += 1;
            }
        }
        let u_start = verts.len();
        if r >= 2 {
            let last_even = if comp.even { r } else { r - 1 };
            for j in (1..=last_even).rev().filter(|j| j % 2 == 0) {
                let (f, s) = t.edges[comp.edges[j - 1]].a;
                debug_assert_eq!(s, Slot::E3);
                for k in (1..n).rev() {
                    verts.push(SmallVertex::new(f, k, 0, n - k));
                }
            }
        }
        let v_start = verts.len();
        if !comp.even {
            // V_i: vertices of the last edge by walk position, descending
            let (f, s) = t.edges[comp.edges[r - 1]].a;
            for k in (1..n).rev() {
                verts.push(vertex_on_slot(f, s, k, n));
            }
        }
        let v_end = verts.len();
        comps.push(MuCompRanges {
            r,
            pairs,
            w: w_start..u_start,
            u: u_start..v_start,
            v: v_start..v_end,
        });
    }

    MuVertices {
        n,
        vbar: OrderedVertices::new(verts),
        interior_len,
        comps,
    }
}

/// Trace matrices of the fan triangulation over the `MuVertices` order.
pub struct ReducedMatrices {
    pub n: Int,
    pub mv: MuVertices,
    pub kbar: IntMat,
    pub qbar: IntMat,
    pub hbar: IntMat,
    pub pbar: IntMat,
}

pub fn reduced_matrices(mu: &MuTriangulation, n: Int) -> Result<ReducedMatrices> {
    let mv = mu_vertices(mu, n);
    let qbar = quiver_matrix(&mu.t, n, &mv.vbar);
    let hbar = h_matrix(&mu.t, n, &mv.vbar, &qbar)?;
    let kbar = kbar_matrix(&mu.t, n, &mv.vbar, &mv.vbar)?;
    let pbar = kbar.matmul(&qbar).matmul(&kbar.transpose());
    Ok(ReducedMatrices {
        n,
        mv,
        kbar,
        qbar,
        hbar,
        pbar,
    })
}

fn reversed_rows(m: &IntMat) -> IntMat {
    IntMat::from_fn(m.nrows(), m.ncols(), |r, c| m.at(m.nrows() - 1 - r, c))
}

/// Expected `P_i` block for one boundary component.
fn expected_p_block(n: Int, comp: &MuCompRanges) -> IntMat {
    let nm1 = (n - 1) as usize;
    let pairs = comp.pairs;
    let vlen = comp.v.len();
    let total = 2 * pairs * nm1 + vlen;
    let mut want = IntMat::zeros(total, total);
    let neg_n_eye = |want: &mut IntMat, r0: usize, c0: usize, sign: Int| {
        for d in 0..nm1 {
            want.set(r0 + d, c0 + d, sign * n);
        }
    };
    // W rows
    for s in 0..pairs {
        neg_n_eye(&mut want, s * nm1, s * nm1, -1); // (A; pairs)
        neg_n_eye(&mut want, s * nm1, (pairs + s) * nm1, 1); // -(A; pairs)
    }
    // U rows
    for s in 0..pairs {
        neg_n_eye(&mut want, (pairs + s) * nm1, (pairs + s) * nm1, -1); // (A; pairs)
        if comp.r.is_multiple_of(2) {
            // (B; pairs): cyclic
            let tcol = if s == 0 { pairs - 1 } else { s - 1 };
            neg_n_eye(&mut want, (pairs + s) * nm1, tcol * nm1, 1);
        } else {
            // (B_O; pairs): shift without the wrap block
            if s > 0 {
                neg_n_eye(&mut want, (pairs + s) * nm1, (s - 1) * nm1, 1);
            }
            // (E^T; pairs): first U block row carries n I' against V_i
            if s == 0 {
                let v0 = 2 * pairs * nm1;
                for d in 0..nm1 {
                    want.set(pairs * nm1 + d, v0 + (nm1 - 1 - d), n);
                }
            }
        }
    }
    // V rows (odd component)
    if vlen > 0 {
        let v0 = 2 * pairs * nm1;
        if pairs > 0 {
            // (E; pairs): n I against the last W block, and -nI on V x V
            neg_n_eye(&mut want, v0, (pairs - 1) * nm1, 1);
            neg_n_eye(&mut want, v0, v0, -1);
        } else {
            // r = 1: -nI + nI'
            for d in 0..nm1 {
                want.set(v0 + d, v0 + d, -n);
                want.add_at(v0 + d, v0 + (nm1 - 1 - d), n);
            }
        }
    }
    want
}

/// Expected `S_i` block of `K_boundary` for one component.
fn expected_s_block(n: Int, comp: &MuCompRanges) -> IntMat {
    let nm1 = (n - 1) as usize;
    let g = g_matrix(n);
    let gp = reversed_rows(&g);
    let pairs = comp.pairs;
    let vlen = comp.v.len();
    let total = 2 * pairs * nm1 + vlen;
    let mut want = IntMat::zeros(total, total);
    let put = |want: &mut IntMat, r0: usize, c0: usize, m: &IntMat| {
        for r in 0..nm1 {
            for c in 0..nm1 {
                want.add_at(r0 + r, c0 + c, m.at(r, c));
            }
        }
    };
    for s in 0..pairs {
        put(&mut want, s * nm1, s * nm1, &g); // (G;) on W x W
        put(&mut want, s * nm1, (pairs + s) * nm1, &g); // (G;) on W x U
        put(&mut want, (pairs + s) * nm1, (pairs + s) * nm1, &g); // U x U
        if comp.r.is_multiple_of(2) {
            let tcol = if s == 0 { pairs - 1 } else { s - 1 };
            put(&mut want, (pairs + s) * nm1, tcol * nm1, &g); // (G~;)
        } else {
            if s > 0 {
                put(&mut want, (pairs + s) * nm1, (s - 1) * nm1, &g); // (G~_O;)
            }
            if s == 0 {
                put(&mut want, pairs * nm1, 2 * pairs * nm1, &gp); // (E_G^T;)
            }
        }
    }
    if vlen > 0 {
        let v0 = 2 * pairs * nm1;
        if pairs > 0 {
            put(&mut want, v0, (pairs - 1) * nm1, &g); // (E_G;)
        }
        if pairs > 0 {
            put(&mut want, v0, v0, &g); // G on V x V
        } else {
            // r = 1: G + G'
            put(&mut want, v0, v0, &g);
            put(&mut want, v0, v0, &gp);
        }
    }
    want
}

/// Check the reduced block identities and report them one by one.
///
/// On a polygon every elongation meets a face at most once and the entries
/// of `P'` lie in `{0, n}`. On other surfaces a face can meet the same
/// puncture at two corners, a path then crosses it twice, and entries of
/// `n Z` up to `3n` occur (observed: `2n` on the annulus at n = 3); the
/// weaker containment is all the center theorem uses.
pub fn reduced_blocks(mu: &MuTriangulation, rm: &ReducedMatrices) -> BlockReport {
    let inv = classify(&mu.t);
    let polygon = inv.boundary_component_count == 1 && inv.euler_compact == 1;
    let mut rep = BlockReport::default();
    let n = rm.n;
    let mv = &rm.mv;
    let interior: Vec<usize> = (0..mv.interior_len).collect();
    let boundary: Vec<usize> = (mv.interior_len..mv.vbar.len()).collect();

    let kq = rm.kbar.matmul(&rm.qbar);

    rep.expect_eq(
        "reduced_kq_interior_cols",
        &kq.submatrix(&interior, &interior),
        &IntMat::identity(interior.len()).scale(-2 * n),
    );
    rep.expect_eq(
        "reduced_kq_interior_cols_zero",
        &kq.submatrix(&boundary, &interior),
        &IntMat::zeros(boundary.len(), interior.len()),
    );

    // P' entries: {0, n} on polygons, nonnegative multiples of n otherwise
    let pprime = kq.submatrix(&interior, &boundary);
    let mut ok = true;
    let mut cx = None;
    'p: for r in 0..pprime.nrows() {
        for c in 0..pprime.ncols() {
            let v = pprime.at(r, c);
            let good = if polygon {
                v == 0 || v == n
            } else {
                v >= 0 && v <= 3 * n && v % n == 0
            };
            if !good {
                ok = false;
                cx = Some((r, c, v as i64, 0i64));
                break 'p;
            }
        }
    }
    let id = if polygon {
        "reduced_p_prime_in_zero_n"
    } else {
        "reduced_p_prime_in_nz"
    };
    rep.expect(id, ok, cx);

    // P block-diagonal with the prescribed component blocks
    let p = kq.submatrix(&boundary, &boundary);
    let mut want_p = IntMat::zeros(p.nrows(), p.ncols());
    let mut want_s = IntMat::zeros(p.nrows(), p.ncols());
    for comp in &mv.comps {
        let idx: Vec<usize> = comp.all().iter().map(|&i| i - mv.interior_len).collect();
        let bp = expected_p_block(n, comp);
        let bs = expected_s_block(n, comp);
        for (rr, &gr) in idx.iter().enumerate() {
            for (cc, &gc) in idx.iter().enumerate() {
                want_p.set(gr, gc, bp.at(rr, cc));
                want_s.set(gr, gc, bs.at(rr, cc));
            }
        }
    }
    rep.expect_eq("reduced_p_blocks", &p, &want_p);

    // K_boundary = diag(S_i)
    let k_bdry = rm.kbar.submatrix(&boundary, &boundary);
    rep.expect_eq("reduced_k_boundary_blocks", &k_bdry, &want_s);

    // inherited identity
    rep.expect_eq(
        "reduced_kbar_h_identity",
        &rm.kbar.matmul(&rm.hbar),
        &IntMat::identity(mv.vbar.len()).scale(n),
    );

    // Pbar anti-symmetric with entries in nZ
    let mut ok = rm.pbar.is_antisymmetric();
    let mut cx = None;
    if ok {
        'q: for r in 0..rm.pbar.nrows() {
            for c in 0..rm.pbar.ncols() {
                if rm.pbar.at(r, c) % n != 0 {
                    ok = false;
                    cx = Some((r, c, rm.pbar.at(r, c) as i64, 0i64));
                    break 'q;
                }
            }
        }
    }
    rep.expect("reduced_pbar_antisymmetric_nz", ok, cx);

    rep
}

/// The reduced boundary lattice: per even component, vectors constant on
/// each edge's block; per odd component, constant palindromic blocks.
pub struct ReducedLattices {
    pub lambda_m_prime: Lattice,
    pub boundary_gens: Vec<Vec<Int>>,
    pub lambda_boundary: Lattice,
    pub lambda_z: Lattice,
}

pub fn reduced_lattices(rm: &ReducedMatrices, params: &RootParams) -> Result<ReducedLattices> {
    if !params.odd_order {
        return Err(Error::OddOrderRequired(params.m2));
    }
    let n = rm.n;
    let nm1 = (n - 1) as usize;
    let dim = rm.mv.vbar.len();
    let lambda_m_prime = kernel_mod(&rm.kbar, params.m_prime as Int);

    let mut gens: Vec<Vec<Int>> = Vec::new();
    for comp in &rm.mv.comps {
        // block starts (each block lists coordinate indices n-1, ..., 1)
        let mut block_starts: Vec<usize> = Vec::new();
        let mut s = comp.w.start;
        while s < comp.w.end {
            block_starts.push(s);
            s += nm1;
        }
        let mut s = comp.u.start;
        while s < comp.u.end {
            block_starts.push(s);
            s += nm1;
        }
        if !comp.v.is_empty() {
            block_starts.push(comp.v.start);
        }
        let coord_offset = |j: Int| (n - 1 - j) as usize;
        if comp.r % 2 == 0 {
            for j in 1..n {
                let mut g = vec![0; dim];
                for &b in &block_starts {
                    g[b + coord_offset(j)] = 1;
                }
                gens.push(g);
            }
        } else {
            // palindromic: e_j + e_{n-j}, plus the middle one when n even
            for j in 1..n {
                if j > n - j {
                    break;
                }
                let mut g = vec![0; dim];
                for &b in &block_starts {
                    g[b + coord_offset(j)] += 1;
                    if n - j != j {
                        g[b + coord_offset(n - j)] += 1;
                    }
                }
                gens.push(g);
            }
        }
    }
    let lambda_boundary = Lattice::from_rows(dim, &gens);
    let lambda_z = lambda_m_prime.sum(&lambda_boundary);
    Ok(ReducedLattices {
        lambda_m_prime,
        boundary_gens: gens,
        lambda_boundary,
        lambda_z,
    })
}

/// The reduced center theorem as a lattice equality:
/// `kernel_mod(Pbar, m'') = lambda_z`.
pub fn reduced_center_check(rm: &ReducedMatrices, params: &RootParams) -> Result<bool> {
    let lat = reduced_lattices(rm, params)?;
    let center = kernel_mod(&rm.pbar, params.m2 as Int);
    Ok(center == lat.lambda_z)
}

/// Closed-form reduced rank:
/// `d^(r-t) m^(|Vbar| - t(n-1) - (b-t) floor(n/2))`.
pub fn reduced_rank_closed_form(
    params: &RootParams,
    r: i64,
    t: usize,
    b: usize,
    vbar_len: usize,
) -> BigUint {
    let n = params.n as i64;
    let exp = vbar_len as i64 - (t as i64) * (n - 1) - ((b - t) as i64) * (n / 2);
    BigUint::from(params.d).pow((r - t as i64) as u32) * BigUint::from(params.m).pow(exp as u32)
}

/// Computed reduced rank (ambient index of the center lattice), checked
/// against the closed form.
pub fn reduced_rank(
    mu: &MuTriangulation,
    rm: &ReducedMatrices,
    params: &RootParams,
) -> Result<BigUint> {
    if !params.odd_order {
        return Err(Error::OddOrderRequired(params.m2));
    }
    let center = kernel_mod(&rm.pbar, params.m2 as Int);
    let got = match center.ambient_index() {
        Index::Finite(x) => x,
        Index::Infinite => {
            return Err(Error::PropertyViolation(
                "reduced center lattice not full rank".into(),
            ))
        }
    };
    let inv = classify(&mu.t);
    let want = reduced_rank_closed_form(
        params,
        inv.r,
        inv.t,
        inv.boundary_component_count,
        rm.mv.vbar.len(),
    );
    if got != want {
        return Err(Error::FormulaMismatch {
            got: got.to_string(),
            want: want.to_string(),
        });
    }
    Ok(got)
}

/// Reversal helpers for vectors of length `n - 1`.
pub fn reversed(v: &[Int]) -> Vec<Int> {
    v.iter().rev().copied().collect()
}

fn g_prime(n: Int) -> IntMat {
    reversed_rows(&g_matrix(n))
}

/// Report of the reversal identities and brute-force image counts.
#[derive(Clone, Debug, Serialize)]
pub struct ReversalReport {
    pub n: u64,
    pub m_prime: u64,
    pub reverse_identity: bool,
    pub palindrome_identity: bool,
    pub im_mu: u128,
    pub im_mu_expected: u128,
    pub im_nu_palindromic: u128,
    pub im_nu_expected: u128,
}

impl ReversalReport {
    pub fn all_pass(&self) -> bool {
        self.reverse_identity
            && self.palindrome_identity
            && self.im_mu == self.im_mu_expected
            && self.im_nu_palindromic == self.im_nu_expected
    }
}

/// Enumerate `(Z_{m'})^{n-1}` images of `p -> 2 p G`, over all or only
/// palindromic inputs.
fn image_count(n: Int, m_prime: Int, palindromic_only: bool) -> u128 {
    let g = g_matrix(n);
    let nm1 = (n - 1) as usize;
    let mut images = std::collections::BTreeSet::new();
    let mut v = vec![0 as Int; nm1];
    'grid: loop {
        let pal = v.iter().zip(v.iter().rev()).all(|(a, b)| a == b);
        if !palindromic_only || pal {
            let mut img = g.row_mul(&v);
            for x in img.iter_mut() {
                *x = (2 * *x).rem_euclid(m_prime);
            }
            images.insert(img);
        }
        let mut i = 0;
        loop {
            if i == nm1 {
                break 'grid;
            }
            v[i] += 1;
            if v[i] < m_prime {
                break;
            }
            v[i] = 0;
            i += 1;
        }
    }
    images.len() as u128
}

/// Check the reversal identities of `G` and the image-size formulas for
/// the maps `p -> 2 p G` (all inputs, and palindromic inputs).
pub fn reversal_properties(n: u64, m_prime: u64) -> Result<ReversalReport> {
    if m_prime.is_multiple_of(2) {
        return Err(Error::OddOrderRequired(m_prime));
    }
    let ni = n as Int;
    let mp = m_prime as Int;
    let g = g_matrix(ni);
    let gp = g_prime(ni);
    let nm1 = (ni - 1) as usize;

    // deterministic "random" sample plus small exhaustive boxes
    let mut samples: Vec<Vec<Int>> = Vec::new();
    let mut x: i64 = 12345;
    for _ in 0..64 {
        let mut v = vec![0; nm1];
        for slot in v.iter_mut() {
            x = x
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            *slot = ((x >> 33) % 7 - 3) as Int;
        }
        samples.push(v);
    }
    let mut reverse_identity = true;
    let mut palindrome_identity = true;
    for k in &samples {
        let lhs = g.row_mul(&reversed(k));
        let mid = gp.row_mul(k);
        let rhs = reversed(&g.row_mul(k));
        if lhs != mid || mid != rhs {
            reverse_identity = false;
        }
        // (k + rev k)(G + G') = 2 k G + 2 rev(k G)
        let sum: Vec<Int> = k.iter().zip(reversed(k)).map(|(&a, b)| a + b).collect();
        let gg = g.add_mat(&gp);
        let lhs = gg.row_mul(&sum);
        let kg = g.row_mul(k);
        let rhs: Vec<Int> = kg
            .iter()
            .zip(reversed(&kg))
            .map(|(&a, b)| 2 * a + 2 * b)
            .collect();
        if lhs != rhs {
            palindrome_identity = false;
        }
    }

    // the image formulas use d = gcd(2n, m') and m = m'/d
    let d = crate::lattice::gcd(2 * ni, mp);
    let m = (mp / d) as u128;
    let im_mu = image_count(ni, mp, false);
    let im_mu_expected = (mp as u128) * m.pow(n as u32 - 2);
    let im_nu_palindromic = image_count(ni, mp, true);
    let im_nu_expected = m.pow((n / 2) as u32);
    Ok(ReversalReport {
        n,
        m_prime,
        reverse_identity,
        palindrome_identity,
        im_mu,
        im_mu_expected,
        im_nu_palindromic,
        im_nu_expected,
    })
}
