//! Combinatorial ideal triangulations of punctured bordered surfaces.
//!
//! A surface is described by faces with three slots `e1, e2, e3` in
//! counterclockwise order and a list of orientation-reversing gluings.
//! Unglued slots are boundary edges. Corners, punctures, boundary
//! components and Euler characteristics are all derived from the gluing
//! combinatorics.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub type FaceId = i64;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum Slot {
    #[serde(rename = "e1")]
    E1,
    #[serde(rename = "e2")]
    E2,
    #[serde(rename = "e3")]
    E3,
}

impl Slot {
    pub const ALL: [Slot; 3] = [Slot::E1, Slot::E2, Slot::E3];

    pub fn idx(self) -> usize {
        match self {
            Slot::E1 => 0,
            Slot::E2 => 1,
            Slot::E3 => 2,
        }
    }

    pub fn from_idx(i: usize) -> Slot {
        Slot::ALL[i % 3]
    }

    /// Next slot counterclockwise.
    pub fn next(self) -> Slot {
        Slot::from_idx(self.idx() + 1)
    }

    pub fn prev(self) -> Slot {
        Slot::from_idx(self.idx() + 2)
    }

    /// Corner at which this slot starts (corner k is the vertex v_{k+1}).
    pub fn start_corner(self) -> usize {
        self.idx()
    }

    /// Corner at which this slot ends.
    pub fn end_corner(self) -> usize {
        (self.idx() + 1) % 3
    }

    pub fn name(self) -> &'static str {
        match self {
            Slot::E1 => "e1",
            Slot::E2 => "e2",
            Slot::E3 => "e3",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct SideRef(pub FaceId, pub Slot);

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Gluing {
    pub a: SideRef,
    pub b: SideRef,
}

/// Raw description of a triangulated surface; see the JSON schema
/// `{"name": .., "faces": [..], "gluings": [{"a": [f,"e1"], "b": [g,"e2"]}]}`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SurfaceSpec {
    pub name: String,
    pub faces: Vec<FaceId>,
    pub gluings: Vec<Gluing>,
}

impl SurfaceSpec {
    pub fn from_json(s: &str) -> Result<SurfaceSpec> {
        serde_json::from_str(s).map_err(|e| Error::BadInput(format!("surface spec: {e}")))
    }

    /// Deterministic serialization: faces sorted, gluings sorted by their
    /// lexicographically smaller side.
    pub fn to_canonical_json(&self) -> String {
        let mut spec = self.clone();
        spec.faces.sort_unstable();
        for g in &mut spec.gluings {
            let ka = (g.a.0, g.a.1.idx());
            let kb = (g.b.0, g.b.1.idx());
            if kb < ka {
                std::mem::swap(&mut g.a, &mut g.b);
            }
        }
        spec.gluings
            .sort_by_key(|g| (g.a.0, g.a.1.idx(), g.b.0, g.b.1.idx()));
        serde_json::to_string_pretty(&spec).expect("spec serialization")
    }
}

/// One edge of the triangulation: a glued pair of slots or a single
/// boundary slot.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Edge {
    pub a: (usize, Slot),
    pub b: Option<(usize, Slot)>,
}

impl Edge {
    pub fn is_boundary(self) -> bool {
        self.b.is_none()
    }
}

#[derive(Clone, Debug)]
pub struct BoundaryComponent {
    /// Boundary edges in positive cyclic order (surface on the left).
    pub edges: Vec<usize>,
    /// Corner classes of the punctures; `punctures[k]` starts `edges[k]`.
    pub punctures: Vec<usize>,
}

impl BoundaryComponent {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_even(&self) -> bool {
        self.edges.len().is_multiple_of(2)
    }
}

/// A validated triangulation with all derived combinatorics.
#[derive(Clone, Debug)]
pub struct Triangulation {
    pub spec: SurfaceSpec,
    pub faces: Vec<FaceId>,
    /// glued[(face, slot)] = partner side, if any
    glued: BTreeMap<(usize, Slot), (usize, Slot)>,
    pub edges: Vec<Edge>,
    edge_of: BTreeMap<(usize, Slot), usize>,
    pub boundary_edges: Vec<usize>,
    /// corner -> puncture class (corner index = 3*face + corner)
    corner_class: Vec<usize>,
    pub puncture_count: usize,
    pub puncture_is_boundary: Vec<bool>,
    pub boundary_components: Vec<BoundaryComponent>,
    pub face_component: Vec<usize>,
    pub n_face_components: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceInvariants {
    pub punctures_interior: usize,
    pub punctures_boundary: usize,
    /// number of boundary edges, i.e. #(dSigma)
    pub boundary_edge_count: usize,
    pub euler_compact: i64,
    pub euler: i64,
    pub r: i64,
    pub boundary_component_count: usize,
    pub punctures_per_component: Vec<usize>,
    /// number of even boundary components
    pub t: usize,
    pub essentially_bordered: bool,
    pub no_interior_punctures: bool,
    pub triangulable: bool,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        if self.0[x] != x {
            let r = self.find(self.0[x]);
            self.0[x] = r;
        }
        self.0[x]
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Validate a spec and derive corner classes, edges and boundary structure.
pub fn parse_surface(spec: &SurfaceSpec) -> Result<Triangulation> {
    let faces = spec.faces.clone();
    if faces.is_empty() {
        return Err(Error::BadInput("surface has no faces".into()));
    }
    let mut face_index = BTreeMap::new();
    for (i, &f) in faces.iter().enumerate() {
        if face_index.insert(f, i).is_some() {
            return Err(Error::BadInput(format!("duplicate face id {f}")));
        }
    }

    let mut glued: BTreeMap<(usize, Slot), (usize, Slot)> = BTreeMap::new();
    for g in &spec.gluings {
        let fa = *face_index.get(&g.a.0).ok_or(Error::UnknownFace(g.a.0))?;
        let fb = *face_index.get(&g.b.0).ok_or(Error::UnknownFace(g.b.0))?;
        let sa = (fa, g.a.1);
        let sb = (fb, g.b.1);
        if sa == sb {
            return Err(Error::SelfGluedSlot(g.a.1.name().into(), g.a.0));
        }
        if fa == fb {
            // Two slots of a single face always share a corner, so gluing a
            // face to itself is a self-folded triangle.
            return Err(Error::SelfFoldedTriangle(g.a.0));
        }
        for s in [sa, sb] {
            if glued.contains_key(&s) {
                return Err(Error::DuplicateGluing(s.1.name().into(), faces[s.0]));
            }
        }
        glued.insert(sa, sb);
        glued.insert(sb, sa);
    }

    // Edges: glued pairs plus boundary slots, in deterministic order.
    let mut edges = Vec::new();
    let mut edge_of = BTreeMap::new();
    for fi in 0..faces.len() {
        for s in Slot::ALL {
            let side = (fi, s);
            if edge_of.contains_key(&side) {
                continue;
            }
            let edge = match glued.get(&side) {
                Some(&other) => Edge {
                    a: side,
                    b: Some(other),
                },
                None => Edge { a: side, b: None },
            };
            let id = edges.len();
            edges.push(edge);
            edge_of.insert(side, id);
            if let Some(other) = edge.b {
                edge_of.insert(other, id);
            }
        }
    }
    let boundary_edges: Vec<usize> = (0..edges.len())
        .filter(|&e| edges[e].is_boundary())
        .collect();

    // Corner classes: orientation-reversing gluing identifies the start of
    // one side with the end of the other.
    let ncorners = 3 * faces.len();
    let mut uf = UnionFind::new(ncorners);
    for (&(f, s), &(g, t)) in &glued {
        uf.union(3 * f + s.start_corner(), 3 * g + t.end_corner());
        uf.union(3 * f + s.end_corner(), 3 * g + t.start_corner());
    }
    let mut rep_to_class = BTreeMap::new();
    let mut corner_class = vec![0usize; ncorners];
    for c in 0..ncorners {
        let r = uf.find(c);
        let next = rep_to_class.len();
        let id = *rep_to_class.entry(r).or_insert(next);
        corner_class[c] = id;
    }
    let puncture_count = rep_to_class.len();

    // A puncture is a boundary puncture iff some corner in its class is
    // adjacent to an unglued slot.
    let mut puncture_is_boundary = vec![false; puncture_count];
    for f in 0..faces.len() {
        for s in Slot::ALL {
            if !glued.contains_key(&(f, s)) {
                puncture_is_boundary[corner_class[3 * f + s.start_corner()]] = true;
                puncture_is_boundary[corner_class[3 * f + s.end_corner()]] = true;
            }
        }
    }

    // Boundary components: walk boundary edges in the positive direction.
    // After a boundary slot (f, s), rotate through the fan at its end
    // corner until the next unglued slot.
    let next_boundary = |start: (usize, Slot)| -> (usize, Slot) {
        let mut cur = (start.0, start.1.next());
        for _ in 0..ncorners + 1 {
            match glued.get(&cur) {
                None => return cur,
                Some(&(g, t)) => cur = (g, t.next()),
            }
        }
        unreachable!("boundary walk did not terminate");
    };
    let mut seen = vec![false; edges.len()];
    let mut boundary_components = Vec::new();
    for &e in &boundary_edges {
        if seen[e] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut punctures = Vec::new();
        let mut side = edges[e].a;
        loop {
            let id = edge_of[&side];
            if seen[id] {
                break;
            }
            seen[id] = true;
            cycle.push(id);
            punctures.push(corner_class[3 * side.0 + side.1.start_corner()]);
            side = next_boundary(side);
        }
        boundary_components.push(BoundaryComponent {
            edges: cycle,
            punctures,
        });
    }

    // Face connectivity.
    let mut fuf = UnionFind::new(faces.len());
    for (&(f, _), &(g, _)) in &glued {
        fuf.union(f, g);
    }
    let mut comp_map = BTreeMap::new();
    let mut face_component = vec![0usize; faces.len()];
    for f in 0..faces.len() {
        let r = fuf.find(f);
        let next = comp_map.len();
        face_component[f] = *comp_map.entry(r).or_insert(next);
    }

    Ok(Triangulation {
        spec: spec.clone(),
        faces,
        glued,
        edges,
        edge_of,
        boundary_edges,
        corner_class,
        puncture_count,
        puncture_is_boundary,
        boundary_components,
        face_component,
        n_face_components: comp_map.len(),
    })
}

impl Triangulation {
    pub fn n_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn glued_to(&self, face: usize, slot: Slot) -> Option<(usize, Slot)> {
        self.glued.get(&(face, slot)).copied()
    }

    pub fn is_boundary_slot(&self, face: usize, slot: Slot) -> bool {
        !self.glued.contains_key(&(face, slot))
    }

    pub fn edge_id(&self, face: usize, slot: Slot) -> usize {
        self.edge_of[&(face, slot)]
    }

    pub fn corner_class(&self, face: usize, corner: usize) -> usize {
        self.corner_class[3 * face + corner]
    }

    pub fn has_interior_puncture(&self) -> bool {
        self.puncture_is_boundary.iter().any(|&b| !b)
    }
}

/// Puncture-preserving surface invariants derived from the triangulation.
pub fn classify(t: &Triangulation) -> SurfaceInvariants {
    let v = t.puncture_count as i64;
    let e = t.edges.len() as i64;
    let f = t.faces.len() as i64;
    let euler_compact = v - e + f;
    let punctures_interior = t.puncture_is_boundary.iter().filter(|&&b| !b).count();
    let punctures_boundary = t.puncture_count - punctures_interior;
    // Removing a boundary puncture keeps the homotopy type; removing an
    // interior one drops chi by 1.
    let euler = euler_compact - punctures_interior as i64;
    let boundary_edge_count = t.boundary_edges.len();
    let r = boundary_edge_count as i64 - euler;
    let punctures_per_component: Vec<usize> =
        t.boundary_components.iter().map(|c| c.len()).collect();
    let tcount = punctures_per_component
        .iter()
        .filter(|&&r| r % 2 == 0)
        .count();

    // Every face component must reach the boundary for the surface to be
    // essentially bordered.
    let mut component_has_boundary = vec![false; t.n_face_components];
    for &e in &t.boundary_edges {
        component_has_boundary[t.face_component[t.edges[e].a.0]] = true;
    }
    let essentially_bordered = component_has_boundary.iter().all(|&b| b);

    SurfaceInvariants {
        punctures_interior,
        punctures_boundary,
        boundary_edge_count,
        euler_compact,
        euler,
        r,
        boundary_component_count: t.boundary_components.len(),
        punctures_per_component,
        t: tcount,
        essentially_bordered,
        no_interior_punctures: punctures_interior == 0,
        triangulable: !t.faces.is_empty(),
    }
}

/// A triangulation together with one triangle attached along each
/// boundary edge (at the attached triangle's `e1` slot).
#[derive(Clone, Debug)]
pub struct ExtendedTriangulation {
    pub base: Triangulation,
    pub extended: Triangulation,
    /// number of original faces; faces `>= original_faces` are attached
    pub original_faces: usize,
    /// attached face index (in `extended`) for each base boundary edge id
    pub attached_for_edge: BTreeMap<usize, usize>,
}

/// Attach one triangle per boundary edge, glued boundary-edge-to-`e1`.
pub fn attach_triangles(t: &Triangulation) -> Result<ExtendedTriangulation> {
    if t.boundary_edges.is_empty() {
        return Err(Error::NoBoundary);
    }
    let mut spec = t.spec.clone();
    let mut next_id = t.faces.iter().copied().max().unwrap_or(0) + 1;
    let mut attached_for_edge = BTreeMap::new();
    let original_faces = t.faces.len();
    // Deterministic order: component order, then positive edge order.
    let mut count = 0usize;
    for comp in &t.boundary_components {
        for &e in &comp.edges {
            let (f, s) = t.edges[e].a;
            spec.faces.push(next_id);
            spec.gluings.push(Gluing {
                a: SideRef(next_id, Slot::E1),
                b: SideRef(t.faces[f], s),
            });
            attached_for_edge.insert(e, original_faces + count);
            next_id += 1;
            count += 1;
        }
    }
    let extended = parse_surface(&spec)?;
    Ok(ExtendedTriangulation {
        base: t.clone(),
        extended,
        original_faces,
        attached_for_edge,
    })
}

/// The named example surfaces: triangle, square, pentagon, annulus.
pub fn builtin_examples() -> Vec<SurfaceSpec> {
    vec![triangle(), square(), pentagon(), annulus()]
}

pub fn builtin(name: &str) -> Option<SurfaceSpec> {
    builtin_examples().into_iter().find(|s| s.name == name)
}

/// T3: ideal triangle (disk with three boundary punctures).
pub fn triangle() -> SurfaceSpec {
    SurfaceSpec {
        name: "T3".into(),
        faces: vec![0],
        gluings: vec![],
    }
}

/// S4: square, two faces glued along the diagonal.
pub fn square() -> SurfaceSpec {
    SurfaceSpec {
        name: "S4".into(),
        faces: vec![0, 1],
        gluings: vec![Gluing {
            a: SideRef(0, Slot::E3),
            b: SideRef(1, Slot::E1),
        }],
    }
}

/// P5: pentagon, fan of three faces.
pub fn pentagon() -> SurfaceSpec {
    SurfaceSpec {
        name: "P5".into(),
        faces: vec![0, 1, 2],
        gluings: vec![
            Gluing {
                a: SideRef(0, Slot::E3),
                b: SideRef(1, Slot::E1),
            },
            Gluing {
                a: SideRef(1, Slot::E3),
                b: SideRef(2, Slot::E1),
            },
        ],
    }
}

/// A11: annulus with one boundary puncture per boundary component.
pub fn annulus() -> SurfaceSpec {
    SurfaceSpec {
        name: "A11".into(),
        faces: vec![0, 1],
        gluings: vec![
            Gluing {
                a: SideRef(0, Slot::E2),
                b: SideRef(1, Slot::E2),
            },
            Gluing {
                a: SideRef(0, Slot::E3),
                b: SideRef(1, Slot::E3),
            },
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn classify_named(spec: &SurfaceSpec) -> SurfaceInvariants {
        classify(&parse_surface(spec).unwrap())
    }

    #[test]
    fn triangle_invariants() {
        let inv = classify_named(&triangle());
        assert_eq!(inv.boundary_edge_count, 3);
        assert_eq!(inv.euler_compact, 1);
        assert_eq!(inv.euler, 1);
        assert_eq!(inv.r, 2);
        assert_eq!(inv.boundary_component_count, 1);
        assert_eq!(inv.punctures_per_component, vec![3]);
        assert_eq!(inv.t, 0);
        assert!(inv.essentially_bordered && inv.no_interior_punctures);
    }

    #[test]
    fn square_invariants() {
        let t = parse_surface(&square()).unwrap();
        let inv = classify(&t);
        assert_eq!(inv.boundary_edge_count, 4);
        assert_eq!(inv.punctures_boundary, 4);
        assert_eq!(t.edges.len() - t.boundary_edges.len(), 1);
        assert_eq!(inv.euler, 1);
        assert_eq!(inv.r, 3);
        assert_eq!(inv.punctures_per_component, vec![4]);
        assert_eq!(inv.t, 1);
    }

    #[test]
    fn pentagon_invariants() {
        let inv = classify_named(&pentagon());
        assert_eq!(inv.boundary_edge_count, 5);
        assert_eq!(inv.euler, 1);
        assert_eq!(inv.r, 4);
        assert_eq!(inv.punctures_per_component, vec![5]);
    }

    #[test]
    fn annulus_invariants() {
        let inv = classify_named(&annulus());
        assert_eq!(inv.boundary_edge_count, 2);
        assert_eq!(inv.euler_compact, 0);
        assert_eq!(inv.euler, 0);
        assert_eq!(inv.r, 2);
        assert_eq!(inv.boundary_component_count, 2);
        assert_eq!(inv.punctures_per_component, vec![1, 1]);
        assert_eq!(inv.t, 0);
        assert_eq!(inv.punctures_boundary, 2);
    }

    #[test]
    fn thrice_punctured_sphere_is_closed() {
        let spec = SurfaceSpec {
            name: "sphere3".into(),
            faces: vec![0, 1],
            gluings: vec![
                Gluing {
                    a: SideRef(0, Slot::E1),
                    b: SideRef(1, Slot::E1),
                },
                Gluing {
                    a: SideRef(0, Slot::E2),
                    b: SideRef(1, Slot::E3),
                },
                Gluing {
                    a: SideRef(0, Slot::E3),
                    b: SideRef(1, Slot::E2),
                },
            ],
        };
        let t = parse_surface(&spec).unwrap();
        let inv = classify(&t);
        assert_eq!(inv.boundary_edge_count, 0);
        assert_eq!(inv.euler_compact, 2);
        assert_eq!(inv.punctures_interior, 3);
        assert_eq!(inv.euler, -1);
        assert!(!inv.essentially_bordered);
        assert!(matches!(attach_triangles(&t), Err(Error::NoBoundary)));
    }

    #[test]
    fn validation_errors() {
        let dup = SurfaceSpec {
            name: "dup".into(),
            faces: vec![0, 1, 2],
            gluings: vec![
                Gluing {
                    a: SideRef(0, Slot::E1),
                    b: SideRef(1, Slot::E1),
                },
                Gluing {
                    a: SideRef(0, Slot::E1),
                    b: SideRef(2, Slot::E1),
                },
            ],
        };
        assert!(matches!(
            parse_surface(&dup),
            Err(Error::DuplicateGluing(_, _))
        ));

        let self_slot = SurfaceSpec {
            name: "self".into(),
            faces: vec![0],
            gluings: vec![Gluing {
                a: SideRef(0, Slot::E1),
                b: SideRef(0, Slot::E1),
            }],
        };
        assert!(matches!(
            parse_surface(&self_slot),
            Err(Error::SelfGluedSlot(_, _))
        ));

        let folded = SurfaceSpec {
            name: "folded".into(),
            faces: vec![0],
            gluings: vec![Gluing {
                a: SideRef(0, Slot::E1),
                b: SideRef(0, Slot::E2),
            }],
        };
        assert!(matches!(
            parse_surface(&folded),
            Err(Error::SelfFoldedTriangle(0))
        ));
    }

    #[test]
    fn attach_adds_one_face_per_boundary_edge() {
        for spec in builtin_examples() {
            let t = parse_surface(&spec).unwrap();
            let ext = attach_triangles(&t).unwrap();
            assert_eq!(
                ext.extended.n_faces(),
                t.n_faces() + t.boundary_edges.len(),
                "{}",
                spec.name
            );
            // every attached face has exactly its e1 slot glued
            for f in ext.original_faces..ext.extended.n_faces() {
                assert!(!ext.extended.is_boundary_slot(f, Slot::E1));
                assert!(ext.extended.is_boundary_slot(f, Slot::E2));
                assert!(ext.extended.is_boundary_slot(f, Slot::E3));
            }
            // the extended surface has no boundary edges on original faces
            for f in 0..ext.original_faces {
                for s in Slot::ALL {
                    assert!(!ext.extended.is_boundary_slot(f, s));
                }
            }
        }
    }

    #[test]
    fn classify_is_stable_and_consistent() {
        for spec in builtin_examples() {
            let t = parse_surface(&spec).unwrap();
            let a = classify(&t);
            let b = classify(&t);
            assert_eq!(a, b);
            let total: usize = a.punctures_per_component.iter().sum();
            assert_eq!(total, a.boundary_edge_count, "{}", spec.name);
        }
    }

    #[test]
    fn spec_json_round_trip() {
        for spec in builtin_examples() {
            let json = spec.to_canonical_json();
            let back = SurfaceSpec::from_json(&json).unwrap();
            assert_eq!(back.to_canonical_json(), json);
        }
    }
}
