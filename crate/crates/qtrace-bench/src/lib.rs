//! Benchmark helpers: canned inputs shared by the criterion benches.

use qtrace_core::lattice::IntMat;
use qtrace_core::surface::{builtin, parse_surface, ExtendedTriangulation, Triangulation};

pub fn fixture(name: &str) -> Triangulation {
    parse_surface(&builtin(name).expect("builtin fixture")).expect("fixture parses")
}

pub fn extended(name: &str) -> ExtendedTriangulation {
    qtrace_core::surface::attach_triangles(&fixture(name)).expect("extension")
}

/// Deterministic anti-symmetric matrix for normal-form benches.
pub fn antisym(size: usize) -> IntMat {
    let mut p = IntMat::zeros(size, size);
    let mut x: i64 = 42;
    for r in 0..size {
        for c in r + 1..size {
            x = x
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            let v = ((x >> 33) % 9 - 4) as i128;
            p.set(r, c, v);
            p.set(c, r, -v);
        }
    }
    p
}
