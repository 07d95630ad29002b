//! The invariant suite on surfaces beyond the built-in examples: a hexagon
//! triangulated around a central triangle (no vertex fan), an annulus with
//! two punctures on one boundary circle and one on the other, a disk with
//! an interior puncture, and a one-holed torus. The theorems are
//! triangulation-independent, so these exercise skeleton paths, gluing
//! patterns and a non-planar topology the fixtures never produce.

use qtrace_core::surface::{Gluing, SideRef, Slot, SurfaceSpec};
use qtrace_core::verify::{run_suite, CheckStatus, SuiteOptions};

fn hexagon_central() -> SurfaceSpec {
    // faces (p1,p2,p3), (p3,p4,p5), (p5,p6,p1) around the core (p1,p3,p5)
    SurfaceSpec {
        name: "hex-central".into(),
        faces: vec![0, 1, 2, 3],
        gluings: vec![
            Gluing {
                a: SideRef(0, Slot::E3),
                b: SideRef(3, Slot::E1),
            },
            Gluing {
                a: SideRef(1, Slot::E3),
                b: SideRef(3, Slot::E2),
            },
            Gluing {
                a: SideRef(2, Slot::E3),
                b: SideRef(3, Slot::E3),
            },
        ],
    }
}

fn annulus_21() -> SurfaceSpec {
    // outer circle punctures p, q; inner circle puncture s; three faces
    SurfaceSpec {
        name: "A21".into(),
        faces: vec![0, 1, 2],
        gluings: vec![
            Gluing {
                a: SideRef(0, Slot::E2),
                b: SideRef(1, Slot::E3),
            },
            Gluing {
                a: SideRef(0, Slot::E3),
                b: SideRef(2, Slot::E3),
            },
            Gluing {
                a: SideRef(1, Slot::E2),
                b: SideRef(2, Slot::E2),
            },
        ],
    }
}

#[test]
fn hexagon_central_triangle_suite() {
    let spec = hexagon_central();
    let inv = qtrace_core::surface::classify(&qtrace_core::surface::parse_surface(&spec).unwrap());
    assert_eq!(inv.punctures_per_component, vec![6]);
    assert_eq!(inv.r, 5);
    let opts = SuiteOptions {
        n_values: vec![2, 3],
        orders: vec![3, 9],
        ..Default::default()
    };
    let rep = run_suite(&spec, &opts).unwrap();
    assert!(
        rep.all_pass(),
        "failures: {:?}",
        rep.failures()
            .iter()
            .map(|c| (&c.id, c.n, c.order))
            .collect::<Vec<_>>()
    );
    // the hexagon is a disk, so the boundary-fan (reduced) checks must
    // actually have run rather than being skipped
    assert!(rep
        .checks
        .iter()
        .any(|c| c.id == "reduced_center_theorem" && c.status == CheckStatus::Pass));
}

#[test]
fn asymmetric_annulus_suite() {
    let spec = annulus_21();
    let inv = qtrace_core::surface::classify(&qtrace_core::surface::parse_surface(&spec).unwrap());
    assert_eq!(inv.boundary_component_count, 2);
    let mut rs = inv.punctures_per_component.clone();
    rs.sort_unstable();
    assert_eq!(rs, vec![1, 2]);
    assert_eq!(inv.r, 3);
    assert_eq!(inv.t, 1);
    let opts = SuiteOptions {
        n_values: vec![2, 3],
        orders: vec![3, 15],
        ..Default::default()
    };
    let rep = run_suite(&spec, &opts).unwrap();
    assert!(
        rep.all_pass(),
        "failures: {:?}",
        rep.failures()
            .iter()
            .map(|c| (&c.id, c.n, c.order))
            .collect::<Vec<_>>()
    );
    // this shape is outside the boundary-fan construction; the reduced
    // part must be skipped, not failed
    assert!(rep
        .checks
        .iter()
        .any(|c| c.id == "reduced_suite" && c.status == CheckStatus::Skipped));
}

fn punctured_disk() -> SurfaceSpec {
    // disk with two boundary punctures and one interior puncture
    SurfaceSpec {
        name: "disk-2-1".into(),
        faces: vec![0, 1],
        gluings: vec![
            Gluing {
                a: SideRef(0, Slot::E2),
                b: SideRef(1, Slot::E3),
            },
            Gluing {
                a: SideRef(0, Slot::E3),
                b: SideRef(1, Slot::E2),
            },
        ],
    }
}

#[test]
fn interior_puncture_gates_trace_but_not_cohomology() {
    let spec = punctured_disk();
    let t = qtrace_core::surface::parse_surface(&spec).unwrap();
    let inv = qtrace_core::surface::classify(&t);
    assert_eq!(inv.punctures_interior, 1);
    assert_eq!(inv.punctures_boundary, 2);
    assert_eq!(inv.euler, 0);
    assert_eq!(inv.r, 2);
    let opts = SuiteOptions {
        n_values: vec![2, 3],
        orders: vec![3],
        ..Default::default()
    };
    let rep = run_suite(&spec, &opts).unwrap();
    assert!(
        rep.all_pass(),
        "failures: {:?}",
        rep.failures()
            .iter()
            .map(|c| (&c.id, c.n, c.order))
            .collect::<Vec<_>>()
    );
    assert!(rep
        .checks
        .iter()
        .any(|c| c.id == "trace_identities" && c.status == CheckStatus::Skipped));
    // cocycle counts and the balanced-lattice exact sequence still ran
    assert!(rep
        .checks
        .iter()
        .any(|c| c.id == "cocycle_count_d_pow_r" && c.status == CheckStatus::Pass));
}

fn one_holed_torus() -> SurfaceSpec {
    // genus one, one boundary circle with a single puncture
    SurfaceSpec {
        name: "torus-1".into(),
        faces: vec![0, 1, 2],
        gluings: vec![
            Gluing {
                a: SideRef(0, Slot::E2),
                b: SideRef(1, Slot::E1),
            },
            Gluing {
                a: SideRef(0, Slot::E3),
                b: SideRef(2, Slot::E1),
            },
            Gluing {
                a: SideRef(1, Slot::E2),
                b: SideRef(2, Slot::E2),
            },
            Gluing {
                a: SideRef(1, Slot::E3),
                b: SideRef(2, Slot::E3),
            },
        ],
    }
}

#[test]
fn genus_one_suite() {
    let spec = one_holed_torus();
    let inv = qtrace_core::surface::classify(&qtrace_core::surface::parse_surface(&spec).unwrap());
    assert_eq!(inv.euler_compact, -1);
    assert_eq!(inv.punctures_per_component, vec![1]);
    assert_eq!(inv.r, 2);
    let opts = SuiteOptions {
        n_values: vec![2, 3],
        orders: vec![3, 9, 15],
        ..Default::default()
    };
    let rep = run_suite(&spec, &opts).unwrap();
    assert!(
        rep.all_pass(),
        "failures: {:?}",
        rep.failures()
            .iter()
            .map(|c| (&c.id, c.n, c.order))
            .collect::<Vec<_>>()
    );
    // the single-puncture boundary needs no fan arcs, so the reduced
    // theorems run here too
    assert!(rep
        .checks
        .iter()
        .any(|c| c.id == "reduced_rank_theorem" && c.status == CheckStatus::Pass));
}
