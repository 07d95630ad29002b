//! End-to-end analysis pipeline: parse, classify, build trace matrices,
//! compute center lattices, rank and PI-degree, run the block identities
//! and the anti-symmetric normal form, and assemble a deterministic JSON
//! report.

use crate::error::{Error, Result};
use crate::lattice::{antisym_normal_form, kernel_mod, odd_part, Index, Int, Lattice};
use crate::reduced::{
    mu_triangulation, reduced_blocks, reduced_lattices, reduced_matrices, reduced_rank_closed_form,
};
use crate::surface::{attach_triangles, classify, parse_surface, SurfaceInvariants, SurfaceSpec};
use crate::torus::{rank_closed_form, skein_center_lattices};
use crate::trace::{trace_matrices, verify_blocks, LemmaCheck};
use crate::unity::{derive_params, RootParams};
use num_bigint::BigUint;
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Clone, Debug)]
pub struct AnalyzeOptions {
    pub n: u64,
    pub order: u64,
    pub reduced: bool,
    pub max_dim: usize,
    pub seed: u64,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            n: 2,
            order: 3,
            reduced: false,
            max_dim: 2000,
            seed: 1,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub schema: u32,
    pub surface: String,
    pub n: u64,
    pub order: u64,
    pub reduced: bool,
    pub seed: u64,
    pub invariants: SurfaceInvariants,
    pub params: RootParams,
    pub warnings: Vec<String>,
    pub dims: BTreeMap<String, usize>,
    pub lemma_checks: Vec<LemmaCheck>,
    /// HNF basis of the center lattice, rows labeled by `center_labels`
    pub center_basis: Option<Vec<Vec<i64>>>,
    pub center_labels: Option<Vec<String>>,
    pub lambda_m_prime_basis: Option<Vec<Vec<i64>>>,
    pub lambda_boundary_gens: Option<Vec<Vec<i64>>>,
    pub computed_rank: Option<String>,
    pub closed_form_rank: Option<String>,
    pub rank_match: Option<bool>,
    pub pi_degree: Option<String>,
    pub antisym_invariants: Option<Vec<i64>>,
    pub antisym_odd_parts: Option<Vec<i64>>,
    pub antisym_pattern_ok: Option<bool>,
    pub antisym_verified: Option<bool>,
    pub squared_product_rank_ok: Option<bool>,
    /// informational only: whether the boundary lattice lies in the exact
    /// integer kernel of the reduced P matrix
    pub boundary_in_integer_kernel: Option<bool>,
    pub all_checks_pass: bool,
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }

    pub fn summary(&self) -> String {
        let mut lines = Vec::new();
        lines.push(format!(
            "surface {} (n = {}, order m'' = {}{})",
            self.surface,
            self.n,
            self.order,
            if self.reduced { ", reduced" } else { "" }
        ));
        lines.push(format!(
            "  boundary edges {}, chi {}, r {}, components {:?}, even components {}",
            self.invariants.boundary_edge_count,
            self.invariants.euler,
            self.invariants.r,
            self.invariants.punctures_per_component,
            self.invariants.t,
        ));
        for (k, v) in &self.dims {
            lines.push(format!("  dim {k} = {v}"));
        }
        for chk in &self.lemma_checks {
            lines.push(format!(
                "  [{}] {}{}",
                if chk.pass { "ok" } else { "FAIL" },
                chk.id,
                chk.counterexample
                    .map(|(r, c, g, w)| format!(" at ({r},{c}): got {g}, want {w}"))
                    .unwrap_or_default()
            ));
        }
        if let (Some(rank), Some(form)) = (&self.computed_rank, &self.closed_form_rank) {
            lines.push(format!(
                "  rank over center = {} (closed form {}, match: {})",
                rank,
                form,
                self.rank_match.unwrap_or(false)
            ));
        }
        if let Some(pi) = &self.pi_degree {
            lines.push(format!("  PI-degree = {pi}"));
        }
        if let Some(inv) = &self.antisym_invariants {
            lines.push(format!(
                "  anti-symmetric invariants h = {:?}, odd parts {:?}, pattern ok: {}",
                inv,
                self.antisym_odd_parts.as_ref().unwrap(),
                self.antisym_pattern_ok.unwrap_or(false)
            ));
        }
        for w in &self.warnings {
            lines.push(format!("  warning: {w}"));
        }
        lines.push(format!("  all checks pass: {}", self.all_checks_pass));
        lines.join("\n")
    }
}

/// Invariant-factor pattern of `P`: invariants are `n z_i`; the odd parts
/// of the `z_i` are 1 for the first `(r - t)/2` and `Odd(n)` for the rest,
/// with the expected total block count.
fn odd_part_pattern(h: &[Int], n: Int, r: i64, t: usize, expected_blocks: i64) -> bool {
    if h.len() as i64 != expected_blocks {
        return false;
    }
    let half = ((r - t as i64) / 2).max(0) as usize;
    for (i, &hi) in h.iter().enumerate() {
        if hi % n != 0 {
            return false;
        }
        let want = if i < half { 1 } else { odd_part(n) };
        if odd_part(hi / n) != want {
            return false;
        }
    }
    true
}

fn rank_of(center: &Lattice) -> Result<BigUint> {
    match center.ambient_index() {
        Index::Finite(x) => Ok(x),
        Index::Infinite => Err(Error::PropertyViolation(
            "center lattice is not of full rank".into(),
        )),
    }
}

fn isqrt(x: &BigUint) -> Option<BigUint> {
    let root = x.sqrt();
    (&root * &root == *x).then_some(root)
}

/// Run the full pipeline on a surface spec.
pub fn analyze(spec: &SurfaceSpec, opts: &AnalyzeOptions) -> Result<AnalysisReport> {
    let t = parse_surface(spec)?;
    let inv = classify(&t);
    let params = derive_params(opts.n, opts.order);
    let n = opts.n as Int;
    let m2 = opts.order as Int;

    let mut warnings = Vec::new();
    let mut dims = BTreeMap::new();
    let mut report = AnalysisReport {
        schema: 1,
        surface: spec.name.clone(),
        n: opts.n,
        order: opts.order,
        reduced: opts.reduced,
        seed: opts.seed,
        invariants: inv.clone(),
        params,
        warnings: Vec::new(),
        dims: BTreeMap::new(),
        lemma_checks: Vec::new(),
        center_basis: None,
        center_labels: None,
        lambda_m_prime_basis: None,
        lambda_boundary_gens: None,
        computed_rank: None,
        closed_form_rank: None,
        rank_match: None,
        pi_degree: None,
        antisym_invariants: None,
        antisym_odd_parts: None,
        antisym_pattern_ok: None,
        antisym_verified: None,
        squared_product_rank_ok: None,
        boundary_in_integer_kernel: None,
        all_checks_pass: false,
    };

    if !inv.no_interior_punctures {
        warnings.push("interior punctures present: trace-matrix operations skipped".into());
        report.warnings = warnings;
        report.all_checks_pass = true;
        return Ok(report);
    }
    if !inv.essentially_bordered {
        return Err(Error::NoBoundary);
    }
    let odd = params.odd_order;
    if !odd {
        warnings.push("even order m'': center and rank theorem checks skipped".into());
    }

    let (center_labels, blocks_pass) = if opts.reduced {
        let mu = mu_triangulation(&t)?;
        let rm = reduced_matrices(&mu, n)?;
        if rm.mv.vbar.len() > opts.max_dim {
            return Err(Error::DimensionCap(rm.mv.vbar.len(), opts.max_dim));
        }
        dims.insert("vbar_mu".into(), rm.mv.vbar.len());
        let block_rep = reduced_blocks(&mu, &rm);
        report.lemma_checks = block_rep.checks.clone();

        if odd {
            let lats = reduced_lattices(&rm, &params)?;
            let center = kernel_mod(&rm.pbar, m2);
            report.lemma_checks.push(LemmaCheck {
                id: "reduced_center_equality".into(),
                pass: center == lats.lambda_z,
                counterexample: None,
            });
            report.lambda_m_prime_basis = Some(lats.lambda_m_prime.to_json_rows());
            report.lambda_boundary_gens = Some(
                lats.boundary_gens
                    .iter()
                    .map(|g| g.iter().map(|&x| x as i64).collect())
                    .collect(),
            );
            report.center_basis = Some(center.to_json_rows());
            let rank = rank_of(&center)?;
            let formula = reduced_rank_closed_form(
                &params,
                inv.r,
                inv.t,
                inv.boundary_component_count,
                rm.mv.vbar.len(),
            );
            report.computed_rank = Some(rank.to_string());
            report.closed_form_rank = Some(formula.to_string());
            report.rank_match = Some(rank == formula);
            if let Some(root) = isqrt(&rank) {
                report.pi_degree = Some(root.to_string());
            }
            // informational: is the boundary lattice in the exact kernel?
            let int_kernel = crate::lattice::kernel_lattice(&rm.pbar);
            report.boundary_in_integer_kernel =
                Some(lats.lambda_boundary.is_sublattice_of(&int_kernel));
        }
        let labels: Vec<String> = rm
            .mv
            .vbar
            .verts()
            .iter()
            .map(crate::torus::vertex_label)
            .collect();
        let expected_blocks = (rm.mv.vbar.len() as i64
            - inv.t as i64 * (n as i64 - 1)
            - (inv.boundary_component_count - inv.t) as i64 * (n as i64 / 2))
            / 2;
        finish_antisym(
            &mut report,
            &rm.pbar,
            n,
            inv.r,
            inv.t,
            expected_blocks,
            m2,
            odd,
        )?;
        (labels, block_rep.all_pass())
    } else {
        let ext = attach_triangles(&t)?;
        let tm = trace_matrices(&ext, n)?;
        if tm.ev.vbar_star.len() > opts.max_dim {
            return Err(Error::DimensionCap(tm.ev.vbar_star.len(), opts.max_dim));
        }
        dims.insert("vbar".into(), tm.base_verts.len());
        dims.insert("vbar_star".into(), tm.ev.vbar_star.len());
        dims.insert("v_x".into(), tm.ev.v_x.len());
        dims.insert("v_a".into(), tm.ev.v_a.len());
        let block_rep = verify_blocks(&tm);
        report.lemma_checks = block_rep.checks.clone();

        if odd {
            let lats = skein_center_lattices(&tm, &params)?;
            let center = kernel_mod(&tm.p, m2);
            report.lemma_checks.push(LemmaCheck {
                id: "center_equality".into(),
                pass: center == lats.lambda_z,
                counterexample: None,
            });
            report.lambda_m_prime_basis = Some(lats.lambda_m_prime.to_json_rows());
            report.lambda_boundary_gens = Some(
                lats.boundary_gens
                    .iter()
                    .map(|g| g.iter().map(|&x| x as i64).collect())
                    .collect(),
            );
            report.center_basis = Some(center.to_json_rows());
            let rank = rank_of(&center)?;
            let formula = rank_closed_form(&params, inv.r, inv.t);
            report.computed_rank = Some(rank.to_string());
            report.closed_form_rank = Some(formula.to_string());
            report.rank_match = Some(rank == formula);
            if let Some(root) = isqrt(&rank) {
                report.pi_degree = Some(root.to_string());
            }
        }
        let labels: Vec<String> = tm
            .ev
            .v_a
            .verts()
            .iter()
            .map(crate::torus::vertex_label)
            .collect();
        let expected_blocks =
            ((n as i64 * n as i64 - 1) * inv.r - inv.t as i64 * (n as i64 - 1)) / 2;
        finish_antisym(
            &mut report,
            &tm.p,
            n,
            inv.r,
            inv.t,
            expected_blocks,
            m2,
            odd,
        )?;
        (labels, block_rep.all_pass())
    };

    report.center_labels = Some(center_labels);
    report.dims = dims;
    report.warnings = warnings;
    report.all_checks_pass = blocks_pass
        && report.lemma_checks.iter().all(|c| c.pass)
        && report.rank_match.unwrap_or(true)
        && report.antisym_pattern_ok.unwrap_or(true)
        && report.antisym_verified.unwrap_or(true)
        && report.squared_product_rank_ok.unwrap_or(true);
    Ok(report)
}

#[allow(clippy::too_many_arguments)]
fn finish_antisym(
    report: &mut AnalysisReport,
    p: &crate::lattice::IntMat,
    n: Int,
    r: i64,
    t: usize,
    expected_blocks: i64,
    m2: Int,
    odd: bool,
) -> Result<()> {
    let nf = antisym_normal_form(p)?;
    report.antisym_verified = Some(nf.verify(p));
    report.antisym_invariants = Some(nf.invariants.iter().map(|&x| x as i64).collect());
    report.antisym_odd_parts = Some(
        nf.invariants
            .iter()
            .map(|&h| {
                if h % n == 0 {
                    odd_part(h / n) as i64
                } else {
                    -1
                }
            })
            .collect(),
    );
    report.antisym_pattern_ok = Some(odd_part_pattern(&nf.invariants, n, r, t, expected_blocks));
    if odd {
        // squared-product identity against the SNF-index rank
        let rank = rank_of(&kernel_mod(p, m2))?;
        let mut prod = BigUint::from(1u32);
        for &h in &nf.invariants {
            prod *= BigUint::from((m2 / crate::lattice::gcd(m2, h)) as u128);
        }
        report.squared_product_rank_ok = Some(&prod * &prod == rank);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::builtin;

    #[test]
    fn analyze_t3_spot_values() {
        let spec = builtin("T3").unwrap();
        let rep = analyze(
            &spec,
            &AnalyzeOptions {
                n: 2,
                order: 3,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(rep.computed_rank.as_deref(), Some("729"));
        assert_eq!(rep.pi_degree.as_deref(), Some("27"));
        assert!(rep.all_checks_pass, "{}", rep.summary());
    }

    #[test]
    fn analyze_s4_spot_values() {
        let spec = builtin("S4").unwrap();
        let rep = analyze(
            &spec,
            &AnalyzeOptions {
                n: 2,
                order: 3,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(rep.computed_rank.as_deref(), Some("6561"));
        assert!(rep.all_checks_pass);

        let rep = analyze(
            &spec,
            &AnalyzeOptions {
                n: 2,
                order: 3,
                reduced: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(rep.computed_rank.as_deref(), Some("81"));
        assert!(rep.all_checks_pass, "{}", rep.summary());
    }

    #[test]
    fn analyze_is_deterministic() {
        let spec = builtin("P5").unwrap();
        let opts = AnalyzeOptions {
            n: 2,
            order: 3,
            ..Default::default()
        };
        let a = analyze(&spec, &opts).unwrap().to_json();
        let b = analyze(&spec, &opts).unwrap().to_json();
        assert_eq!(a, b);
    }

    #[test]
    fn reduced_and_plain_agree_on_shared_quantities() {
        for name in ["S4", "P5", "A11"] {
            let spec = builtin(name).unwrap();
            let plain = analyze(
                &spec,
                &AnalyzeOptions {
                    n: 2,
                    order: 3,
                    ..Default::default()
                },
            )
            .unwrap();
            let reduced = analyze(
                &spec,
                &AnalyzeOptions {
                    n: 2,
                    order: 3,
                    reduced: true,
                    ..Default::default()
                },
            )
            .unwrap();
            assert_eq!(plain.invariants, reduced.invariants, "{name}");
            assert_eq!(plain.params, reduced.params, "{name}");
        }
    }

    #[test]
    fn analyze_even_order_downgrades() {
        let spec = builtin("T3").unwrap();
        let rep = analyze(
            &spec,
            &AnalyzeOptions {
                n: 2,
                order: 4,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(rep.computed_rank.is_none());
        assert!(!rep.warnings.is_empty());
        assert!(rep.all_checks_pass, "{}", rep.summary());
    }

    #[test]
    fn analyze_interior_puncture_blocks_trace() {
        let spec = crate::surface::SurfaceSpec {
            name: "sphere3".into(),
            faces: vec![0, 1],
            gluings: vec![
                crate::surface::Gluing {
                    a: crate::surface::SideRef(0, crate::surface::Slot::E1),
                    b: crate::surface::SideRef(1, crate::surface::Slot::E1),
                },
                crate::surface::Gluing {
                    a: crate::surface::SideRef(0, crate::surface::Slot::E2),
                    b: crate::surface::SideRef(1, crate::surface::Slot::E3),
                },
                crate::surface::Gluing {
                    a: crate::surface::SideRef(0, crate::surface::Slot::E3),
                    b: crate::surface::SideRef(1, crate::surface::Slot::E2),
                },
            ],
        };
        let rep = analyze(&spec, &AnalyzeOptions::default()).unwrap();
        assert!(rep.lemma_checks.is_empty());
        assert!(rep.warnings.iter().any(|w| w.contains("interior")));
    }

    #[test]
    fn dimension_cap_applies() {
        let spec = builtin("P5").unwrap();
        let err = analyze(
            &spec,
            &AnalyzeOptions {
                n: 3,
                order: 3,
                max_dim: 10,
                ..Default::default()
            },
        )
        .unwrap_err();
        assert!(matches!(err, Error::DimensionCap(_, 10)));
    }
}
