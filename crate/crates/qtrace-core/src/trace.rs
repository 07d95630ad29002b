//! Skeletons of small vertices, the triangle kernel, the trace transition
//! matrices `Kbar`, `C`, `K`, the anti-symmetric `P` matrices, and the
//! block-structure identities they satisfy.
//!
//! The left-turn elongation rule and the segment-value rule are pinned
//! operationally: a path entering a face through slot `y` exits through
//! `y.next()`, and a segment of weight `a` entering through `y` contributes
//! the vertex at walk position `a` on `y`. Together with the quiver
//! orientation in `ntriang` these are exactly the conventions under which
//! `Kbar * Hbar = n I`, `A = -n I` and the cyclic `B` pattern hold; the
//! identity tests below keep them frozen.

use crate::error::{Error, Result};
use crate::lattice::{Int, IntMat};
use crate::ntriang::{
    ext_vertices, h_matrix, quiver_matrix, small_vertices, vertex_on_slot, ExtVertices,
    OrderedVertices, SmallVertex,
};
use crate::surface::{ExtendedTriangulation, Slot, Triangulation};
use serde::Serialize;
use std::collections::HashMap;

/// The Z3-invariant triangle kernel `j k' + k i' + i' j`, evaluated after
/// simultaneously rotating both coordinate triples until `i' <= i` and
/// `j' >= j`.
pub fn kbar_p3(v: (Int, Int, Int), w: (Int, Int, Int), n: Int) -> Result<Int> {
    debug_assert_eq!(v.0 + v.1 + v.2, n);
    debug_assert_eq!(w.0 + w.1 + w.2, n);
    let mut x = v;
    let mut y = w;
    for _ in 0..3 {
        let (i, j, k) = x;
        let (i2, j2, k2) = y;
        if i2 <= i && j2 >= j {
            return Ok(j * k2 + k * i2 + i2 * j);
        }
        x = (x.1, x.2, x.0);
        y = (y.1, y.2, y.0);
    }
    Err(Error::NoAdmissibleRotation(v.0, v.1, v.2, w.0, w.1, w.2))
}

/// Per-face multiset of segment values of the elongated graph at `v`:
/// `skl[face]` lists face-local coordinates with multiplicity.
pub type Skeleton = HashMap<usize, Vec<(Int, Int, Int)>>;

/// Left-turn elongation of the weighted tripod at `v` (face-local
/// representation). Terminates through boundary edges; an interior
/// puncture in the way shows up as an `ElongationLoop`.
pub fn skeleton(t: &Triangulation, n: Int, v: SmallVertex) -> Result<Skeleton> {
    let mut skl: Skeleton = HashMap::new();
    skl.entry(v.face).or_default().push((v.i, v.j, v.k));
    let cap = 3 * t.n_faces() + 2;
    for slot in Slot::ALL {
        let weight = match slot {
            Slot::E1 => v.i,
            Slot::E2 => v.j,
            Slot::E3 => v.k,
        };
        if weight == 0 {
            continue;
        }
        let mut side = (v.face, slot);
        let mut steps = 0usize;
        while let Some((g, entry)) = t.glued_to(side.0, side.1) {
            steps += 1;
            if steps > cap {
                return Err(Error::ElongationLoop(cap));
            }
            let y = vertex_on_slot(g, entry, weight, n);
            skl.entry(g).or_default().push((y.i, y.j, y.k));
            side = (g, entry.next());
        }
    }
    Ok(skl)
}

/// `Kbar(u, v)`: the kernel summed over the segments of the elongation of
/// `u` inside a face containing `v`. When `v` lies on a shared edge the two
/// face choices must agree.
pub fn kbar_matrix(
    t: &Triangulation,
    n: Int,
    rows: &OrderedVertices,
    cols: &OrderedVertices,
) -> Result<IntMat> {
    let mut out = IntMat::zeros(rows.len(), cols.len());
    let col_reps: Vec<Vec<SmallVertex>> = cols
        .verts()
        .iter()
        .map(|&v| {
            let mut reps = vec![v];
            if let Some(slot) = v.slot() {
                if let Some((g, gs)) = t.glued_to(v.face, slot) {
                    reps.push(vertex_on_slot(g, gs, n - v.slot_pos().unwrap(), n));
                }
            }
            reps
        })
        .collect();

    for (r, &u) in rows.verts().iter().enumerate() {
        let skl = skeleton(t, n, u)?;
        for (c, reps) in col_reps.iter().enumerate() {
            let mut val: Option<Int> = None;
            for rep in reps {
                let mut acc = 0;
                if let Some(segs) = skl.get(&rep.face) {
                    for &y in segs {
                        acc += kbar_p3(y, (rep.i, rep.j, rep.k), n)?;
                    }
                }
                match val {
                    None => val = Some(acc),
                    Some(prev) if prev != acc => {
                        return Err(Error::WellDefinednessViolation(r, c));
                    }
                    _ => {}
                }
            }
            out.set(r, c, val.unwrap_or(0));
        }
    }
    Ok(out)
}

/// Trace matrices of an extended triangulation, plus the base-surface
/// family, in the canonical vertex orders.
pub struct TraceMatrices {
    pub n: Int,
    pub ev: ExtVertices,
    /// `Kbar` of the extended triangulation over `[interior | W | U]`
    pub kbar_star: IntMat,
    pub qbar_star: IntMat,
    pub hbar_star: IntMat,
    /// change of variables, `V' x Vbar*`
    pub c: IntMat,
    /// `K = (C Kbar*)|_{V' x V}`
    pub k: IntMat,
    /// `Q` restricted to `V x V`
    pub q_x: IntMat,
    /// `H` restricted to `V x V'`
    pub h: IntMat,
    /// `P = K Q K^t` on `V' x V'`
    pub p: IntMat,
    /// base-surface reduced vertex set and matrices
    pub base_verts: OrderedVertices,
    pub kbar: IntMat,
    pub qbar: IntMat,
    pub hbar: IntMat,
    /// `Pbar = Kbar Qbar Kbar^t`
    pub pbar: IntMat,
}

impl TraceMatrices {
    /// `K` with its row and column vertex labels, for JSON export.
    pub fn labeled_k(&self) -> crate::ntriang::LabeledMat {
        crate::ntriang::LabeledMat {
            rows: self.ev.v_a.clone(),
            cols: self.ev.v_x.clone(),
            mat: self.k.clone(),
        }
    }

    /// `P` with its vertex labels.
    pub fn labeled_p(&self) -> crate::ntriang::LabeledMat {
        crate::ntriang::LabeledMat {
            rows: self.ev.v_a.clone(),
            cols: self.ev.v_a.clone(),
            mat: self.p.clone(),
        }
    }
}

pub fn trace_matrices(ext: &ExtendedTriangulation, n: Int) -> Result<TraceMatrices> {
    if ext.base.has_interior_puncture() {
        return Err(Error::InteriorPuncture);
    }
    let te = &ext.extended;
    let ev = ext_vertices(ext, n);

    let qbar_star = quiver_matrix(te, n, &ev.vbar_star);
    let hbar_star = h_matrix(te, n, &ev.vbar_star, &qbar_star)?;
    let kbar_star = kbar_matrix(te, n, &ev.vbar_star, &ev.vbar_star)?;

    let c = c_matrix(ext, &ev);
    let ck = c.matmul(&kbar_star);
    let x_cols: Vec<usize> = ev
        .v_x
        .verts()
        .iter()
        .map(|&v| ev.vbar_star.pos(v).expect("V inside Vbar*"))
        .collect();
    let all_rows: Vec<usize> = (0..ev.v_a.len()).collect();
    let k = ck.submatrix(&all_rows, &x_cols);

    let q_x = qbar_star.submatrix(&x_cols, &x_cols);
    let a_cols: Vec<usize> = ev
        .v_a
        .verts()
        .iter()
        .map(|&v| ev.vbar_star.pos(v).expect("V' inside Vbar*"))
        .collect();
    let h = hbar_star.submatrix(&x_cols, &a_cols);

    let p = k.matmul(&q_x).matmul(&k.transpose());

    let base_verts = small_vertices(&ext.base, n);
    let qbar = quiver_matrix(&ext.base, n, &base_verts);
    let hbar = h_matrix(&ext.base, n, &base_verts, &qbar)?;
    let kbar = kbar_matrix(&ext.base, n, &base_verts, &base_verts)?;
    let pbar = kbar.matmul(&qbar).matmul(&kbar.transpose());

    Ok(TraceMatrices {
        n,
        ev,
        kbar_star,
        qbar_star,
        hbar_star,
        c,
        k,
        q_x,
        h,
        p,
        base_verts,
        kbar,
        qbar,
        hbar,
        pbar,
    })
}

/// The change-of-variable matrix: identity on `V'`, with `C(v, p(v)) = -1`
/// for `v` in an attached triangle off the attaching edge, where
/// `p(v) = (0, n-k, k)` in the same triangle.
pub fn c_matrix(ext: &ExtendedTriangulation, ev: &ExtVertices) -> IntMat {
    let n = ev.n;
    let rows = &ev.v_a;
    let cols = &ev.vbar_star;
    let mut c = IntMat::zeros(rows.len(), cols.len());
    for (r, &v) in rows.verts().iter().enumerate() {
        c.set(r, cols.pos(v).expect("V' in Vbar*"), 1);
        if v.face >= ext.original_faces && v.k > 0 {
            let p = SmallVertex::new(v.face, 0, n - v.k, v.k);
            c.set(r, cols.pos(p).expect("p(v) in Vbar*"), -1);
        }
    }
    c
}

/// `G_{ij} = i (n - j)` for `i <= j`, `j (n - i)` otherwise (size n-1).
pub fn g_matrix(n: Int) -> IntMat {
    let s = (n - 1) as usize;
    IntMat::from_fn(s, s, |r, c| {
        let (i, j) = ((r + 1) as Int, (c + 1) as Int);
        if i <= j {
            i * (n - j)
        } else {
            j * (n - i)
        }
    })
}

/// `E_{ij} = i - j + 1` on and below the diagonal.
pub fn e_matrix(n: Int) -> IntMat {
    let s = (n - 1) as usize;
    IntMat::from_fn(s, s, |r, c| {
        let (i, j) = ((r + 1) as Int, (c + 1) as Int);
        if i >= j {
            i - j + 1
        } else {
            0
        }
    })
}

/// First row `n - j`, subdiagonal `-n`.
pub fn f_matrix(n: Int) -> IntMat {
    let s = (n - 1) as usize;
    IntMat::from_fn(s, s, |r, c| {
        let (i, j) = ((r + 1) as Int, (c + 1) as Int);
        if i == 1 {
            n - j
        } else if i == j + 1 {
            -n
        } else {
            0
        }
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaCheck {
    pub id: String,
    pub pass: bool,
    /// first failing (row, col, got, want), if any
    pub counterexample: Option<(usize, usize, i64, i64)>,
}

#[derive(Clone, Debug, Serialize, Default)]
pub struct BlockReport {
    pub checks: Vec<LemmaCheck>,
}

impl BlockReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn expect_eq(&mut self, id: &str, got: &IntMat, want: &IntMat) {
        assert_eq!(
            (got.nrows(), got.ncols()),
            (want.nrows(), want.ncols()),
            "{id}: shape"
        );
        for r in 0..got.nrows() {
            for c in 0..got.ncols() {
                if got.at(r, c) != want.at(r, c) {
                    self.checks.push(LemmaCheck {
                        id: id.into(),
                        pass: false,
                        counterexample: Some((r, c, got.at(r, c) as i64, want.at(r, c) as i64)),
                    });
                    return;
                }
            }
        }
        self.checks.push(LemmaCheck {
            id: id.into(),
            pass: true,
            counterexample: None,
        });
    }

    pub fn expect(
        &mut self,
        id: &str,
        pass: bool,
        counterexample: Option<(usize, usize, i64, i64)>,
    ) {
        self.checks.push(LemmaCheck {
            id: id.into(),
            pass,
            counterexample,
        });
    }
}

fn index_ranges(ev: &ExtVertices) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
    let il = ev.interior_len;
    let wl = ev.w_len();
    (
        (0..il).collect(),
        (il..il + wl).collect(),
        (il + wl..il + 2 * wl).collect(),
    )
}

/// Contiguous per-component block spans of the W (equivalently U) family.
pub fn component_spans(ev: &ExtVertices) -> Vec<(usize, std::ops::Range<usize>)> {
    let mut spans = Vec::new();
    let mut start = 0usize;
    while start < ev.blocks.len() {
        let comp = ev.blocks[start].comp;
        let mut end = start;
        while end < ev.blocks.len() && ev.blocks[end].comp == comp {
            end += 1;
        }
        spans.push((comp, start..end));
        start = end;
    }
    spans
}

/// Check every block-structure identity of the extended trace matrices,
/// one named entry per identity.
pub fn verify_blocks(tm: &TraceMatrices) -> BlockReport {
    let mut rep = BlockReport::default();
    let n = tm.n;
    let ev = &tm.ev;
    let nm1 = (n - 1) as usize;
    let (interior, wr, ur) = index_ranges(ev);
    let spans = component_spans(ev);

    let kq = tm.kbar_star.matmul(&tm.qbar_star);

    // interior columns of Kbar* Qbar*: [-2nI; O; O]
    rep.expect_eq(
        "kq_interior_cols",
        &kq.submatrix(&interior, &interior),
        &IntMat::identity(interior.len()).scale(-2 * n),
    );
    rep.expect_eq(
        "kq_interior_cols_zero_w",
        &kq.submatrix(&wr, &interior),
        &IntMat::zeros(wr.len(), interior.len()),
    );
    rep.expect_eq(
        "kq_interior_cols_zero_u",
        &kq.submatrix(&ur, &interior),
        &IntMat::zeros(ur.len(), interior.len()),
    );

    // A = -nI on W x W
    let a = kq.submatrix(&wr, &wr);
    rep.expect_eq("matrix_a", &a, &IntMat::identity(wr.len()).scale(-n));

    // B on U x W: block diagonal per component, cyclic inside
    let b = kq.submatrix(&ur, &wr);
    let want_b = {
        let mut want = IntMat::zeros(b.nrows(), b.ncols());
        for (_, span) in &spans {
            let blocks = span.end - span.start;
            for s in 0..blocks {
                let tcol = if blocks == 1 {
                    s
                } else if s == 0 {
                    blocks - 1
                } else {
                    s - 1
                };
                for d in 0..nm1 {
                    want.set((span.start + s) * nm1 + d, (span.start + tcol) * nm1 + d, n);
                }
            }
        }
        want
    };
    rep.expect_eq("matrix_b", &b, &want_b);

    // D + C1 A over nZ
    let d = kq.submatrix(&interior, &wr);
    let c1 = tm.c.submatrix(&interior, &wr);
    let dca = d.add_mat(&c1.matmul(&a));
    let mut dca_ok = true;
    let mut dca_cx = None;
    'outer: for r in 0..dca.nrows() {
        for c in 0..dca.ncols() {
            if dca.at(r, c) % n != 0 {
                dca_ok = false;
                dca_cx = Some((r, c, dca.at(r, c) as i64, 0i64));
                break 'outer;
            }
        }
    }
    rep.expect("matrix_dc_mod_n", dca_ok, dca_cx);

    // C in block form [I C1 O; O -I I]
    rep.expect_eq(
        "c_block_interior_u",
        &tm.c.submatrix(&interior, &ur),
        &IntMat::zeros(interior.len(), ur.len()),
    );
    let u_rows: Vec<usize> = (ev.interior_len..ev.v_a.len()).collect();
    rep.expect_eq(
        "c_block_u_w",
        &tm.c.submatrix(&u_rows, &wr),
        &IntMat::identity(wr.len()).scale(-1),
    );
    rep.expect_eq(
        "c_block_u_u",
        &tm.c.submatrix(&u_rows, &ur),
        &IntMat::identity(ur.len()),
    );

    // K32 - K22 = diag(L_i), cyclic blocks of G
    let k22 = tm.kbar_star.submatrix(&wr, &wr);
    let k32 = tm.kbar_star.submatrix(&ur, &wr);
    let l = k32.sub_mat(&k22);
    let g = g_matrix(n);
    let want_l = {
        let mut want = IntMat::zeros(l.nrows(), l.ncols());
        for (_, span) in &spans {
            let blocks = span.end - span.start;
            if blocks == 1 {
                continue; // L_i = O when r_i = 1
            }
            for s in 0..blocks {
                let off = if s == 0 { blocks - 1 } else { s - 1 };
                for dr in 0..nm1 {
                    for dc in 0..nm1 {
                        want.set(
                            (span.start + s) * nm1 + dr,
                            (span.start + s) * nm1 + dc,
                            -g.at(dr, dc),
                        );
                        want.add_at(
                            (span.start + s) * nm1 + dr,
                            (span.start + off) * nm1 + dc,
                            g.at(dr, dc),
                        );
                    }
                }
            }
        }
        want
    };
    rep.expect_eq("matrix_k32_k22", &l, &want_l);

    // K Q = [-2nI, D + C1 A; O, B - A]
    let kq_x = tm.k.matmul(&tm.q_x);
    let want_kq = {
        let il = interior.len();
        let mut want = IntMat::zeros(tm.k.nrows(), tm.q_x.ncols());
        for i in 0..il {
            want.set(i, i, -2 * n);
        }
        for r in 0..il {
            for c in 0..wr.len() {
                want.set(r, il + c, dca.at(r, c));
            }
        }
        let ba = b.sub_mat(&a);
        for r in 0..ur.len() {
            for c in 0..wr.len() {
                want.set(il + r, il + c, ba.at(r, c));
            }
        }
        want
    };
    rep.expect_eq("kq_block_form", &kq_x, &want_kq);

    // det(B_i - A_i) = 2^{n-1} n^{r_i (n-1)} for odd r_i
    for (comp, span) in &spans {
        let r_i = span.end - span.start;
        if r_i % 2 == 0 {
            continue;
        }
        let idx: Vec<usize> = (span.start * nm1..span.end * nm1).collect();
        let bi = b.submatrix(&idx, &idx);
        let ai = IntMat::identity(idx.len()).scale(-n);
        let det = bi.sub_mat(&ai).det();
        let want: Int =
            (0..n - 1).fold(1, |acc, _| acc * 2) * (0..r_i * nm1).fold(1 as Int, |acc, _| acc * n);
        rep.expect(
            &format!("det_b_minus_a_component_{comp}"),
            det == want,
            if det == want {
                None
            } else {
                Some((0, 0, det as i64, want as i64))
            },
        );
    }

    // EF = G
    rep.expect_eq("ef_equals_g", &e_matrix(n).matmul(&f_matrix(n)), &g);

    // restriction of C Kbar* to V' x (Vbar* minus V) vanishes
    let ck = tm.c.matmul(&tm.kbar_star);
    let all_rows: Vec<usize> = (0..ev.v_a.len()).collect();
    rep.expect_eq(
        "ck_vanishes_off_v",
        &ck.submatrix(&all_rows, &ur),
        &IntMat::zeros(ev.v_a.len(), ur.len()),
    );

    // invertibility identities
    rep.expect_eq(
        "kbar_h_identity",
        &tm.kbar.matmul(&tm.hbar),
        &IntMat::identity(tm.base_verts.len()).scale(n),
    );
    rep.expect_eq(
        "kbar_star_h_identity",
        &tm.kbar_star.matmul(&tm.hbar_star),
        &IntMat::identity(ev.vbar_star.len()).scale(n),
    );
    rep.expect_eq(
        "k_h_identity",
        &tm.k.matmul(&tm.h),
        &IntMat::identity(ev.v_x.len()).scale(n),
    );

    // antisymmetrization identity in its square form, and the divisibility
    // consequence for the extended P
    rep.expect_eq(
        "p_antisymmetrization_bar",
        &tm.kbar.sub_mat(&tm.kbar.transpose()).scale(n),
        &tm.pbar,
    );
    let mut nz_ok = true;
    let mut nz_cx = None;
    'nz: for r in 0..tm.p.nrows() {
        for c in 0..tm.p.ncols() {
            if tm.p.at(r, c) % n != 0 || tm.p.at(r, c) != -tm.p.at(c, r) {
                nz_ok = false;
                nz_cx = Some((r, c, tm.p.at(r, c) as i64, 0i64));
                break 'nz;
            }
        }
    }
    rep.expect("p_antisymmetric_entries_in_nz", nz_ok, nz_cx);

    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{attach_triangles, builtin_examples, parse_surface};

    #[test]
    fn kbar_p3_spec_values() {
        assert_eq!(kbar_p3((1, 1, 1), (0, 2, 1), 3).unwrap(), 1);
        assert_eq!(kbar_p3((1, 1, 1), (1, 1, 1), 3).unwrap(), 3);
        assert_eq!(kbar_p3((1, 1, 0), (1, 0, 1), 2).unwrap(), 0);
    }

    #[test]
    fn kbar_p3_is_z3_invariant() {
        for n in 2..=4 {
            let pts = crate::ntriang::face_points(n);
            for &v in &pts {
                for &w in &pts {
                    let base = kbar_p3(v, w, n).unwrap();
                    let rot = |(a, b, c): (Int, Int, Int)| (b, c, a);
                    let mut x = v;
                    let mut y = w;
                    for _ in 0..2 {
                        x = rot(x);
                        y = rot(y);
                        assert_eq!(kbar_p3(x, y, n).unwrap(), base, "{v:?} {w:?} n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn kernel_matches_g_matrix_on_attached_coordinates() {
        // Kbar_tau(u_i, w_j) = 0 and Kbar_tau(v_i, w_j) = Kbar_tau(w_i, w_j) = G_ij
        for n in 2..=5 {
            let g = g_matrix(n);
            for i in 1..n {
                for j in 1..n {
                    let u = (i, 0, n - i);
                    let v = (n - i, i, 0);
                    let w = (0, i, n - i);
                    let wj = (0, j, n - j);
                    assert_eq!(kbar_p3(u, wj, n).unwrap(), 0);
                    let gij = g.at((i - 1) as usize, (j - 1) as usize);
                    assert_eq!(kbar_p3(v, wj, n).unwrap(), gij);
                    assert_eq!(kbar_p3(w, wj, n).unwrap(), gij);
                }
            }
        }
    }

    #[test]
    fn skeleton_main_segment_only_inside_plain_triangle() {
        let t = parse_surface(&crate::surface::triangle()).unwrap();
        for n in 2..=4 {
            for v in crate::ntriang::small_vertices(&t, n).verts() {
                let skl = skeleton(&t, n, *v).unwrap();
                assert_eq!(skl.len(), 1);
                assert_eq!(skl[&v.face], vec![(v.i, v.j, v.k)]);
            }
        }
    }

    #[test]
    fn skeleton_of_attached_u_vertices() {
        // Extended triangle: u_i of an attached face contributes exactly
        // v_i to one neighboring attached face.
        let t = parse_surface(&crate::surface::triangle()).unwrap();
        let ext = attach_triangles(&t).unwrap();
        let n = 3;
        let ev = crate::ntriang::ext_vertices(&ext, n);
        for b in 0..ev.blocks.len() {
            for i in 1..n {
                let u = ev.u_vertex(b, i);
                let skl = skeleton(&ext.extended, n, u).unwrap();
                assert_eq!(skl[&u.face], vec![(i, 0, n - i)]);
                let mut found_vi = 0;
                for (&f, segs) in &skl {
                    if f == u.face || f < ext.original_faces {
                        continue;
                    }
                    assert_eq!(segs, &vec![(n - i, i, 0)]);
                    found_vi += 1;
                }
                assert_eq!(found_vi, 1);
            }
        }

        // Annulus: each boundary component has one edge, so the elongation
        // returns to its own attached face carrying v_i.
        let t = parse_surface(&crate::surface::annulus()).unwrap();
        let ext = attach_triangles(&t).unwrap();
        let ev = crate::ntriang::ext_vertices(&ext, n);
        for b in 0..ev.blocks.len() {
            for i in 1..n {
                let u = ev.u_vertex(b, i);
                let skl = skeleton(&ext.extended, n, u).unwrap();
                let mut own = skl[&u.face].clone();
                own.sort();
                let mut want = vec![(i, 0, n - i), (n - i, i, 0)];
                want.sort();
                assert_eq!(own, want, "skl(u_i) = u_i + v_i when r = 1");
            }
        }
    }

    #[test]
    fn kbar_times_h_at_n_five() {
        // the invertibility identities at the top of the tested range
        let t = parse_surface(&crate::surface::pentagon()).unwrap();
        let ext = attach_triangles(&t).unwrap();
        let tm = trace_matrices(&ext, 5).unwrap();
        assert_eq!(
            tm.kbar.matmul(&tm.hbar),
            IntMat::identity(tm.base_verts.len()).scale(5)
        );
        assert_eq!(
            tm.k.matmul(&tm.h),
            IntMat::identity(tm.ev.v_x.len()).scale(5)
        );
        assert!(verify_blocks(&tm).all_pass());
    }

    #[test]
    fn kbar_times_h_is_n_identity() {
        for spec in builtin_examples() {
            let t = parse_surface(&spec).unwrap();
            let ext = attach_triangles(&t).unwrap();
            for n in 2..=4 {
                let tm = trace_matrices(&ext, n).unwrap();
                let id_base = IntMat::identity(tm.base_verts.len()).scale(n);
                assert_eq!(
                    tm.kbar.matmul(&tm.hbar),
                    id_base,
                    "{} n={} base",
                    spec.name,
                    n
                );
                let id_star = IntMat::identity(tm.ev.vbar_star.len()).scale(n);
                assert_eq!(
                    tm.kbar_star.matmul(&tm.hbar_star),
                    id_star,
                    "{} n={} star",
                    spec.name,
                    n
                );
                let id_x = IntMat::identity(tm.ev.v_x.len()).scale(n);
                assert_eq!(tm.k.matmul(&tm.h), id_x, "{} n={} K H", spec.name, n);
            }
        }
    }

    #[test]
    fn p_identities() {
        for spec in builtin_examples() {
            let t = parse_surface(&spec).unwrap();
            let ext = attach_triangles(&t).unwrap();
            for n in 2..=4 {
                let tm = trace_matrices(&ext, n).unwrap();
                // the antisymmetrization identity in its well-typed (square)
                // form: n(Kbar - Kbar^T) = Pbar
                let nk = tm.kbar.sub_mat(&tm.kbar.transpose()).scale(n);
                assert_eq!(nk, tm.pbar, "{} n={}", spec.name, n);
                // P and Pbar anti-symmetric with entries in nZ
                for m in [&tm.p, &tm.pbar] {
                    assert!(m.is_antisymmetric());
                    for r in 0..m.nrows() {
                        for c in 0..m.ncols() {
                            assert_eq!(m.at(r, c) % n, 0);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn block_lemmas_hold_on_fixtures() {
        for spec in builtin_examples() {
            let t = parse_surface(&spec).unwrap();
            let ext = attach_triangles(&t).unwrap();
            for n in 2..=4 {
                let tm = trace_matrices(&ext, n).unwrap();
                let rep = verify_blocks(&tm);
                for chk in &rep.checks {
                    assert!(
                        chk.pass,
                        "{} n={} lemma {} fails: {:?}",
                        spec.name, n, chk.id, chk.counterexample
                    );
                }
            }
        }
    }

    #[test]
    fn ef_g_example_n3() {
        let e = e_matrix(3);
        let f = f_matrix(3);
        let g = g_matrix(3);
        assert_eq!(e, IntMat::from_rows(&[vec![1, 0], vec![2, 1]]));
        assert_eq!(f, IntMat::from_rows(&[vec![2, 1], vec![-3, 0]]));
        assert_eq!(g, IntMat::from_rows(&[vec![2, 1], vec![1, 2]]));
        assert_eq!(e.matmul(&f), g);
    }

    #[test]
    fn det_b_minus_a_small_cases() {
        // n=2, r_i=1: B_i - A_i = (4), det 4
        let t = parse_surface(&crate::surface::annulus()).unwrap();
        let ext = attach_triangles(&t).unwrap();
        let tm = trace_matrices(&ext, 2).unwrap();
        assert!(verify_blocks(&tm).all_pass());

        // n=2, r_i=3 (triangle): det(B_i - A_i) = 16
        let t = parse_surface(&crate::surface::triangle()).unwrap();
        let ext = attach_triangles(&t).unwrap();
        let tm = trace_matrices(&ext, 2).unwrap();
        let kq = tm.kbar_star.matmul(&tm.qbar_star);
        let (_, wr, ur) = index_ranges(&tm.ev);
        let b = kq.submatrix(&ur, &wr);
        let a = IntMat::identity(3).scale(-2);
        assert_eq!(b.sub_mat(&a).det(), 16);
    }

    #[test]
    fn well_definedness_of_kbar_on_shared_edges() {
        let t = parse_surface(&crate::surface::pentagon()).unwrap();
        let verts = small_vertices(&t, 5);
        assert!(kbar_matrix(&t, 5, &verts, &verts).is_ok());
    }

    #[test]
    fn labeled_export_round_trips() {
        let t = parse_surface(&crate::surface::square()).unwrap();
        let ext = attach_triangles(&t).unwrap();
        let tm = trace_matrices(&ext, 2).unwrap();
        let json = tm.labeled_k().to_json();
        assert_eq!(json["rows"].as_array().unwrap().len(), tm.k.nrows());
        assert_eq!(json["entries"][0].as_array().unwrap().len(), tm.k.ncols());
        let p = tm.labeled_p().to_json();
        assert_eq!(p["rows"], p["cols"]);
    }
}
