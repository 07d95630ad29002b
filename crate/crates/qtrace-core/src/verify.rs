//! The invariant suite: every cross-cutting property the library promises,
//! run against one surface over a grid of `n` and root orders, with a
//! machine-readable pass/fail/skip report.

use crate::cohomology::{
    cochain_complex, cocycle_count, exact_sequence_check, exact_sequence_check_extended,
    restricted_cocycle_count,
};
use crate::error::Result;
use crate::lattice::{antisym_normal_form, kernel_mod, Int, IntMat, Lattice};
use crate::ntriang::{quiver_matrix, small_vertices};
use crate::reduced::{
    mu_triangulation, reduced_blocks, reduced_lattices, reduced_matrices, reduced_rank,
    reversal_properties,
};
use crate::surface::{attach_triangles, classify, parse_surface, SurfaceSpec};
use crate::torus::{
    center_lattice, generic_center, is_central, mul_monomials, pairing, rank_closed_form,
    skein_center_lattices, weyl, ScalarMode,
};
use crate::trace::{kbar_p3, trace_matrices, verify_blocks};
use crate::unity::derive_params;
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub n_values: Vec<u64>,
    pub orders: Vec<u64>,
    pub seed: u64,
    pub max_dim: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            n_values: vec![2, 3],
            orders: vec![3, 5],
            seed: 1,
            max_dim: 2000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteCheck {
    pub id: String,
    pub n: Option<u64>,
    pub order: Option<u64>,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub surface: String,
    pub seed: u64,
    pub checks: Vec<SuiteCheck>,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn failures(&self) -> Vec<&SuiteCheck> {
        self.checks
            .iter()
            .filter(|c| c.status == CheckStatus::Fail)
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("suite serialization")
    }

    fn push(&mut self, id: &str, n: Option<u64>, order: Option<u64>, pass: bool, detail: String) {
        self.checks.push(SuiteCheck {
            id: id.into(),
            n,
            order,
            status: if pass {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            detail,
        });
    }

    fn skip(&mut self, id: &str, n: Option<u64>, order: Option<u64>, why: &str) {
        self.checks.push(SuiteCheck {
            id: id.into(),
            n,
            order,
            status: CheckStatus::Skipped,
            detail: why.into(),
        });
    }
}

fn random_vector(rng: &mut ChaCha8Rng, len: usize, bound: Int) -> Vec<Int> {
    (0..len).map(|_| rng.gen_range(-bound..=bound)).collect()
}

/// Run every applicable invariant on one surface.
pub fn run_suite(spec: &SurfaceSpec, opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut rep = SuiteReport {
        surface: spec.name.clone(),
        seed: opts.seed,
        checks: Vec::new(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    let t = parse_surface(spec)?;
    let inv = classify(&t);
    rep.push(
        "classify_idempotent",
        None,
        None,
        classify(&t) == inv,
        String::new(),
    );
    rep.push(
        "boundary_edge_totals",
        None,
        None,
        inv.punctures_per_component.iter().sum::<usize>() == inv.boundary_edge_count,
        String::new(),
    );

    // kernel triangle symmetry, surface-independent
    let mut z3_ok = true;
    for n in 2..=4 {
        for &v in &crate::ntriang::face_points(n) {
            for &w in &crate::ntriang::face_points(n) {
                let base = kbar_p3(v, w, n)?;
                let r1 = kbar_p3((v.1, v.2, v.0), (w.1, w.2, w.0), n)?;
                if r1 != base {
                    z3_ok = false;
                }
            }
        }
    }
    rep.push(
        "triangle_kernel_z3_invariance",
        None,
        None,
        z3_ok,
        String::new(),
    );

    // cochain complex checks run even with interior punctures
    let cc = cochain_complex(&t);
    rep.push(
        "cochain_d1_d0_zero",
        None,
        None,
        cc.d1.matmul(&cc.d0).is_zero(),
        String::new(),
    );
    for d in [1u128, 2, 3, 5] {
        if !inv.essentially_bordered {
            // closed components make the top coboundary rows dependent and
            // the d^r count no longer applies
            rep.skip("cocycle_count_d_pow_r", None, Some(d as u64), "no boundary");
            continue;
        }
        let got = cocycle_count(&t, d as Int);
        let want = BigUint::from(d.pow(inv.r.max(0) as u32));
        rep.push(
            "cocycle_count_d_pow_r",
            None,
            Some(d as u64),
            got == want,
            format!("d={d}: {got} vs {want}"),
        );
    }
    for (n, dv) in [(6i128, 2i128), (6, 3), (4, 2)] {
        let lhs = cocycle_count(&t, n);
        let rhs = restricted_cocycle_count(&t, n, dv)? * cocycle_count(&t, dv);
        rep.push(
            "cocycle_surjectivity_identity",
            None,
            None,
            lhs == rhs,
            format!("n={n} d={dv}"),
        );
    }

    // torus mechanics on small matrices, surface-independent
    {
        let mut mats = vec![IntMat::from_rows(&[vec![0, 1], vec![-1, 0]])];
        for _ in 0..3 {
            let m = 3;
            let mut p = IntMat::zeros(m, m);
            for r in 0..m {
                for c in r + 1..m {
                    let v = rng.gen_range(-3..=3);
                    p.set(r, c, v);
                    p.set(c, r, -v);
                }
            }
            mats.push(p);
        }
        let mut ok = true;
        for p in &mats {
            let m = p.nrows();
            for m2 in 1..=5 as Int {
                let lat = center_lattice(p, m2);
                for _ in 0..60 {
                    let k = random_vector(&mut rng, m, m2);
                    if lat.contains(&k) != is_central(&k, p, m2) {
                        ok = false;
                    }
                }
            }
        }
        rep.push(
            "center_membership_matches_row_test",
            None,
            None,
            ok,
            String::new(),
        );
    }

    if !inv.no_interior_punctures {
        rep.skip("trace_identities", None, None, "interior punctures present");
        rep.skip("center_theorem", None, None, "interior punctures present");
        return Ok(rep);
    }
    if !inv.essentially_bordered {
        rep.skip("trace_identities", None, None, "no boundary");
        return Ok(rep);
    }

    let ext = attach_triangles(&t)?;
    let all_odd = inv.punctures_per_component.iter().all(|r| r % 2 == 1);

    for &nu in &opts.n_values {
        let n = nu as Int;
        let verts = small_vertices(&t, n);
        if verts.len() > opts.max_dim {
            rep.skip("trace_identities", Some(nu), None, "dimension cap");
            continue;
        }
        // cardinalities
        let binom2 = n * (n - 1) / 2;
        let want_vbar = (n * n - 1) * inv.r as Int - binom2 * inv.boundary_edge_count as Int;
        rep.push(
            "cardinality_vbar",
            Some(nu),
            None,
            verts.len() as Int == want_vbar,
            format!("{} vs {}", verts.len(), want_vbar),
        );
        let q = quiver_matrix(&t, n, &verts);
        rep.push(
            "quiver_antisymmetric",
            Some(nu),
            None,
            q.is_antisymmetric(),
            String::new(),
        );

        let tm = trace_matrices(&ext, n)?;
        rep.push(
            "cardinality_v_x",
            Some(nu),
            None,
            tm.ev.v_x.len() as Int == (n * n - 1) * inv.r as Int,
            String::new(),
        );

        let blocks = verify_blocks(&tm);
        for chk in &blocks.checks {
            rep.push(
                &format!("block_{}", chk.id),
                Some(nu),
                None,
                chk.pass,
                chk.counterexample
                    .map(|c| format!("{c:?}"))
                    .unwrap_or_default(),
            );
        }

        // balance equivalence: k Hbar = 0 mod n  <=>  k in row lattice of Kbar
        let row_lattice = Lattice::from_mat(&tm.kbar);
        let balanced = kernel_mod(&tm.hbar, n);
        let mut equiv_ok = true;
        for _ in 0..100 {
            let k = random_vector(&mut rng, tm.base_verts.len(), n + 2);
            if balanced.contains(&k) != row_lattice.contains(&k) {
                equiv_ok = false;
            }
        }
        // every row of Kbar is balanced, and balanced vectors solve k = c Kbar
        for r in 0..tm.kbar.nrows() {
            if !balanced.contains(&tm.kbar.row(r)) {
                equiv_ok = false;
            }
        }
        for r in 0..balanced.basis().nrows() {
            if row_lattice.coords(&balanced.basis().row(r)).is_none() {
                equiv_ok = false;
            }
        }
        rep.push(
            "balanced_criteria_equivalence",
            Some(nu),
            None,
            equiv_ok,
            String::new(),
        );

        // generic center: trivial exactly when every component is odd
        if all_odd {
            rep.push(
                "generic_center_trivial",
                Some(nu),
                None,
                generic_center(&tm.p) == Lattice::zero(tm.p.nrows()),
                String::new(),
            );
        } else {
            rep.skip(
                "generic_center_trivial",
                Some(nu),
                None,
                "even boundary component present",
            );
        }

        // torus commutation on random pairs
        let mut comm_ok = true;
        for _ in 0..1000 {
            let k1 = random_vector(&mut rng, tm.p.nrows(), 3);
            let k2 = random_vector(&mut rng, tm.p.nrows(), 3);
            let a = weyl(&k1, &tm.p)?;
            let b = weyl(&k2, &tm.p)?;
            let ab = mul_monomials(&a, &b, &tm.p, ScalarMode::Generic);
            let ba = mul_monomials(&b, &a, &tm.p, ScalarMode::Generic);
            if ab.scalar - ba.scalar != 2 * pairing(&k1, &k2, &tm.p) || ab.exps != ba.exps {
                comm_ok = false;
            }
            let inv_a = weyl(&k1.iter().map(|&x| -x).collect::<Vec<_>>(), &tm.p)?;
            let unit = mul_monomials(&a, &inv_a, &tm.p, ScalarMode::Generic);
            if unit.scalar != 0 || unit.exps.iter().any(|&x| x != 0) {
                comm_ok = false;
            }
        }
        rep.push(
            "torus_commutation_relations",
            Some(nu),
            None,
            comm_ok,
            String::new(),
        );

        // anti-symmetric normal form verification and paired SNF factors
        let nf = antisym_normal_form(&tm.p)?;
        rep.push(
            "antisym_nf_verified",
            Some(nu),
            None,
            nf.verify(&tm.p),
            String::new(),
        );
        let snf = crate::lattice::smith_normal_form(&tm.p);
        let snf_inv = snf.invariants();
        let mut paired = Vec::new();
        for &h in &nf.invariants {
            paired.push(crate::lattice::odd_part(h));
            paired.push(crate::lattice::odd_part(h));
        }
        let mut snf_odd: Vec<Int> = snf_inv
            .iter()
            .map(|&x| crate::lattice::odd_part(x))
            .collect();
        snf_odd.sort_unstable();
        paired.sort_unstable();
        rep.push(
            "antisym_odd_parts_pair_with_snf",
            Some(nu),
            None,
            snf_odd == paired,
            String::new(),
        );

        // exact sequence identity on both balanced lattices
        for k in [3 as Int, 5, 9] {
            let (lhs, rhs) = exact_sequence_check(&t, n, k)?;
            rep.push(
                "exact_sequence_reduced",
                Some(nu),
                None,
                lhs == rhs,
                format!("k={k}: {lhs} vs {rhs}"),
            );
            let (lhs, rhs) = exact_sequence_check_extended(&t, &tm, k)?;
            rep.push(
                "exact_sequence_extended",
                Some(nu),
                None,
                lhs == rhs,
                format!("k={k}: {lhs} vs {rhs}"),
            );
        }

        // image counts for the G-maps at the orders' m' values
        if nu <= 5 {
            for &order in &opts.orders {
                let params = derive_params(nu, order);
                if params.m_prime % 2 == 1 && params.m_prime <= 15 {
                    let rr = reversal_properties(nu, params.m_prime)?;
                    rep.push(
                        "g_image_counts",
                        Some(nu),
                        Some(order),
                        rr.all_pass(),
                        format!("m'={}", params.m_prime),
                    );
                }
            }
        }

        for &order in &opts.orders {
            let params = derive_params(nu, order);
            let m2 = order as Int;
            if !params.odd_order {
                rep.skip("center_theorem", Some(nu), Some(order), "even order");
                continue;
            }
            let lats = skein_center_lattices(&tm, &params)?;
            let center = center_lattice(&tm.p, m2);
            rep.push(
                "center_theorem",
                Some(nu),
                Some(order),
                center == lats.lambda_z,
                String::new(),
            );
            let mut bd_ok = true;
            for g in &lats.boundary_gens {
                if !is_central(g, &tm.p, m2) {
                    bd_ok = false;
                }
            }
            rep.push(
                "boundary_vectors_central",
                Some(nu),
                Some(order),
                bd_ok,
                String::new(),
            );
            let rank = center.ambient_index().finite();
            let want = rank_closed_form(&params, inv.r, inv.t);
            rep.push(
                "rank_theorem",
                Some(nu),
                Some(order),
                rank.as_ref() == Some(&want),
                format!("{rank:?} vs {want}"),
            );
            // squared product of anti-symmetric invariants
            let mut prod = BigUint::from(1u32);
            for &h in &nf.invariants {
                prod *= BigUint::from((m2 / crate::lattice::gcd(m2, h)) as u128);
            }
            rep.push(
                "squared_product_rank",
                Some(nu),
                Some(order),
                Some(&prod * &prod) == rank,
                String::new(),
            );
        }

        // reduced family
        match mu_triangulation(&t) {
            Ok(mu) => {
                let rm = reduced_matrices(&mu, n)?;
                let rblocks = reduced_blocks(&mu, &rm);
                for chk in &rblocks.checks {
                    rep.push(
                        &format!("reduced_{}", chk.id),
                        Some(nu),
                        None,
                        chk.pass,
                        chk.counterexample
                            .map(|c| format!("{c:?}"))
                            .unwrap_or_default(),
                    );
                }
                for &order in &opts.orders {
                    let params = derive_params(nu, order);
                    if !params.odd_order {
                        rep.skip(
                            "reduced_center_theorem",
                            Some(nu),
                            Some(order),
                            "even order",
                        );
                        continue;
                    }
                    let lats = reduced_lattices(&rm, &params)?;
                    let center = kernel_mod(&rm.pbar, order as Int);
                    rep.push(
                        "reduced_center_theorem",
                        Some(nu),
                        Some(order),
                        center == lats.lambda_z,
                        String::new(),
                    );
                    rep.push(
                        "reduced_boundary_in_center",
                        Some(nu),
                        Some(order),
                        lats.lambda_boundary.is_sublattice_of(&center),
                        String::new(),
                    );
                    let rank_ok = reduced_rank(&mu, &rm, &params).is_ok();
                    rep.push(
                        "reduced_rank_theorem",
                        Some(nu),
                        Some(order),
                        rank_ok,
                        String::new(),
                    );
                }
            }
            Err(e) => {
                rep.skip("reduced_suite", Some(nu), None, &format!("{e}"));
            }
        }
    }

    Ok(rep)
}
