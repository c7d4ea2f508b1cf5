//! Triangulated punctured bordered surfaces and their n-triangulations.
//!
//! A face is an ideal triangle with corners `v1, v2, v3` and edge slots
//! `e_a = v_a v_{a+1}` (indices mod 3). Small vertices of a face are integer
//! barycentric points `(i, j, k)`, `i + j + k = n`, minus the corners. On slot
//! `a` the point at position `s` (its coordinate toward `v_{a+1}`) is glued to
//! position `n - s` on the partner slot: gluings always reverse orientation.

use std::collections::{BTreeSet, HashMap};

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Pt = [i64; 3];

/// A (face index, slot in 1..=3) pair.
pub type SlotRef = (usize, u8);

/// `v_a` as a coordinate index.
fn corner_index(a: u8) -> usize {
    (a as usize - 1) % 3
}

/// The coordinate index of `v_{a+1}`.
fn next_index(a: u8) -> usize {
    a as usize % 3
}

pub fn next_slot(a: u8) -> u8 {
    a % 3 + 1
}

pub fn prev_slot(a: u8) -> u8 {
    (a + 1) % 3 + 1
}

/// The point at position `s` on slot `a`.
pub fn slot_point(n: i64, a: u8, s: i64) -> Pt {
    let mut p = [0; 3];
    p[next_index(a)] = s;
    p[corner_index(a)] = n - s;
    p
}

/// The slot(s) a point lies on, with its position there.
pub fn point_slots(p: &Pt) -> Vec<(u8, i64)> {
    (1..=3u8)
        .filter(|&a| p[(corner_index(a) + 2) % 3] == 0)
        .map(|a| (a, p[next_index(a)]))
        .collect()
}

/// The rotation `(i, j, k) ↦ (k, i, j)` taking `v1 → v2 → v3`.
pub fn rotate(p: &Pt) -> Pt {
    [p[2], p[0], p[1]]
}

pub fn is_corner(n: i64, p: &Pt) -> bool {
    p.contains(&n)
}

/// Small vertices of one face in canonical order (top row first, then
/// decreasing `j` within a row).
pub fn triangle_points(n: i64) -> Vec<Pt> {
    let mut out = Vec::new();
    for i in (0..=n).rev() {
        for j in (0..=n - i).rev() {
            let p = [i, j, n - i - j];
            if !is_corner(n, &p) {
                out.push(p);
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct GluingJson {
    a: (String, u8),
    b: (String, u8),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct SurfaceJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<i64>,
    faces: Vec<String>,
    #[serde(default)]
    gluings: Vec<GluingJson>,
}

/// `(face name, slot)` glued to `(face name, slot)`.
pub type Gluing = ((String, u8), (String, u8));

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangulatedSurface {
    faces: Vec<String>,
    partner: Vec<[Option<SlotRef>; 3]>,
    /// For faces added by [`TriangulatedSurface::extend`]: the boundary slot they are attached to.
    attached: Vec<Option<SlotRef>>,
}

impl TriangulatedSurface {
    pub fn new(faces: Vec<String>, gluings: &[Gluing]) -> Result<Self> {
        if faces.is_empty() {
            return Err(Error::InvalidSurface("no faces".into()));
        }
        let mut index = HashMap::new();
        for (i, f) in faces.iter().enumerate() {
            if index.insert(f.clone(), i).is_some() {
                return Err(Error::InvalidSurface(format!("duplicate face `{f}`")));
            }
        }
        let lookup = |(f, a): &(String, u8)| -> Result<SlotRef> {
            let fi = *index
                .get(f)
                .ok_or_else(|| Error::InvalidSurface(format!("unknown face `{f}`")))?;
            if !(1..=3).contains(a) {
                return Err(Error::InvalidSurface(format!("slot {a} of `{f}` is not in 1..=3")));
            }
            Ok((fi, *a))
        };
        let mut partner = vec![[None; 3]; faces.len()];
        for (x, y) in gluings {
            let (sx, sy) = (lookup(x)?, lookup(y)?);
            if sx == sy {
                return Err(Error::InvalidSurface(format!(
                    "slot {} of `{}` glued to itself",
                    x.1, x.0
                )));
            }
            for (s, o, name) in [(sx, sy, x), (sy, sx, y)] {
                let cell = &mut partner[s.0][s.1 as usize - 1];
                if cell.is_some() {
                    return Err(Error::InvalidSurface(format!(
                        "slot {} of `{}` glued twice",
                        name.1, name.0
                    )));
                }
                *cell = Some(o);
            }
        }
        let s = Self {
            attached: vec![None; faces.len()],
            faces,
            partner,
        };
        s.check_triangulable()?;
        Ok(s)
    }

    /// Parse the surface JSON; also returns its optional `n`.
    pub fn from_json(v: &serde_json::Value) -> Result<(Self, Option<i64>)> {
        let raw: SurfaceJson =
            serde_json::from_value(v.clone()).map_err(|e| Error::Parse(format!("surface JSON: {e}")))?;
        let gl: Vec<_> = raw.gluings.into_iter().map(|g| (g.a, g.b)).collect();
        Ok((Self::new(raw.faces, &gl)?, raw.n))
    }

    pub fn to_json(&self, n: Option<i64>) -> serde_json::Value {
        let gluings = self
            .gluings()
            .into_iter()
            .map(|((f, a), (g, b))| GluingJson {
                a: (self.faces[f].clone(), a),
                b: (self.faces[g].clone(), b),
            })
            .collect();
        serde_json::to_value(SurfaceJson {
            n,
            faces: self.faces.clone(),
            gluings,
        })
        .expect("surface serializes")
    }

    /// A single ideal triangle.
    pub fn triangle() -> Self {
        Self::new(vec!["f0".into()], &[]).unwrap()
    }

    /// A fan triangulation of the ideal polygon with `m >= 3` vertices:
    /// face `t` is glued to face `t+1` along slot 3 / slot 1.
    pub fn polygon(m: usize) -> Self {
        assert!(m >= 3);
        let faces: Vec<String> = (0..m - 2).map(|t| format!("f{t}")).collect();
        let gl: Vec<_> = (0..m.saturating_sub(3))
            .map(|t| ((faces[t].clone(), 3u8), (faces[t + 1].clone(), 1u8)))
            .collect();
        Self::new(faces, &gl).unwrap()
    }

    /// Two triangles forming an annulus with one puncture on each boundary circle.
    pub fn annulus() -> Self {
        let f = |s: &str, a: u8| (s.to_string(), a);
        Self::new(
            vec!["f0".into(), "f1".into()],
            &[(f("f0", 1), f("f1", 2)), (f("f0", 2), f("f1", 3))],
        )
        .unwrap()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn face_names(&self) -> &[String] {
        &self.faces
    }

    pub fn face_index(&self, name: &str) -> Result<usize> {
        self.faces
            .iter()
            .position(|f| f == name)
            .ok_or_else(|| Error::InvalidSurface(format!("unknown face `{name}`")))
    }

    pub fn partner(&self, face: usize, slot: u8) -> Option<SlotRef> {
        self.partner[face][slot as usize - 1]
    }

    /// Each gluing once, as (smaller slot, larger slot).
    pub fn gluings(&self) -> Vec<(SlotRef, SlotRef)> {
        let mut out = Vec::new();
        for f in 0..self.faces.len() {
            for a in 1..=3u8 {
                if let Some(o) = self.partner(f, a) {
                    if (f, a) < o {
                        out.push(((f, a), o));
                    }
                }
            }
        }
        out
    }

    pub fn boundary_slots(&self) -> Vec<SlotRef> {
        (0..self.faces.len())
            .flat_map(|f| (1..=3u8).map(move |a| (f, a)))
            .filter(|&(f, a)| self.partner(f, a).is_none())
            .collect()
    }

    pub fn num_boundary_edges(&self) -> usize {
        self.boundary_slots().len()
    }

    pub fn attached_to(&self, face: usize) -> Option<SlotRef> {
        self.attached[face]
    }

    pub fn is_attached(&self, face: usize) -> bool {
        self.attached[face].is_some()
    }

    pub fn has_self_glued_face(&self) -> bool {
        self.gluings().iter().any(|((f, _), (g, _))| f == g)
    }

    /// Ideal-vertex classes of the corners `(face, m)`; returns the class of
    /// every corner and the number of classes.
    pub fn ideal_vertices(&self) -> (Vec<[usize; 3]>, usize) {
        let nf = self.faces.len();
        let mut uf = UnionFind::<usize>::new(3 * nf);
        for ((f, a), (g, b)) in self.gluings() {
            let c = |face: usize, m: u8| 3 * face + (m as usize - 1) % 3;
            // v_a(f) ~ v_{b+1}(g), v_{a+1}(f) ~ v_b(g)
            uf.union(c(f, a), c(g, next_slot(b)));
            uf.union(c(f, next_slot(a)), c(g, b));
        }
        let labels = uf.into_labeling();
        let mut remap = HashMap::new();
        let mut out = vec![[0; 3]; nf];
        for f in 0..nf {
            for m in 0..3 {
                let l = labels[3 * f + m];
                let next = remap.len();
                out[f][m] = *remap.entry(l).or_insert(next);
            }
        }
        (out, remap.len())
    }

    /// Ideal vertices not touching the boundary.
    pub fn interior_punctures(&self) -> usize {
        let (cls, count) = self.ideal_vertices();
        let mut on_boundary = vec![false; count];
        for (f, corners) in cls.iter().enumerate() {
            for m in 1..=3u8 {
                // v_m lies on e_m and e_{m-1}
                if self.partner(f, m).is_none() || self.partner(f, prev_slot(m)).is_none() {
                    on_boundary[corners[m as usize - 1]] = true;
                }
            }
        }
        on_boundary.iter().filter(|b| !**b).count()
    }

    pub fn has_interior_punctures(&self) -> bool {
        self.interior_punctures() > 0
    }

    pub fn num_edges(&self) -> usize {
        self.gluings().len() + self.num_boundary_edges()
    }

    /// Euler characteristic of the punctured surface (boundary ideal points
    /// do not change the homotopy type; interior punctures each remove one).
    pub fn euler_characteristic(&self) -> i64 {
        let (_, v) = self.ideal_vertices();
        v as i64 - self.num_edges() as i64 + self.faces.len() as i64 - self.interior_punctures() as i64
    }

    /// Connected components as lists of face indices.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::<usize>::new(self.faces.len());
        for ((f, _), (g, _)) in self.gluings() {
            uf.union(f, g);
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for f in 0..self.faces.len() {
            groups.entry(uf.find(f)).or_default().push(f);
        }
        let mut out: Vec<_> = groups.into_values().collect();
        out.sort();
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    fn check_triangulable(&self) -> Result<()> {
        let (cls, _) = self.ideal_vertices();
        for comp in self.components() {
            let set: BTreeSet<usize> = comp.iter().copied().collect();
            let verts: BTreeSet<usize> = comp.iter().flat_map(|&f| cls[f]).collect();
            let boundary = comp
                .iter()
                .flat_map(|&f| (1..=3u8).map(move |a| (f, a)))
                .filter(|&(f, a)| self.partner(f, a).is_none())
                .count() as i64;
            let glued = self.gluings().iter().filter(|((f, _), _)| set.contains(f)).count() as i64;
            let f = comp.len() as i64;
            let chi_closed = verts.len() as i64 - (glued + boundary) + f;
            if boundary == 0 && chi_closed == 2 && verts.len() <= 2 {
                return Err(Error::InvalidSurface("sphere with at most two punctures".into()));
            }
            if boundary > 0 && chi_closed == 1 && boundary <= 2 && verts.len() as i64 == boundary {
                return Err(Error::InvalidSurface("monogon or bigon".into()));
            }
        }
        Ok(())
    }

    /// Attach one triangle to every boundary edge, glued along its slot 1.
    /// Attached faces are named `<face>~<slot>`.
    pub fn extend(&self) -> Self {
        let mut out = self.clone();
        for (f, a) in self.boundary_slots() {
            let t = out.faces.len();
            out.faces.push(format!("{}~{}", self.faces[f], a));
            out.partner.push([Some((f, a)), None, None]);
            out.partner[f][a as usize - 1] = Some((t, 1));
            out.attached.push(Some((f, a)));
        }
        out
    }
}

/// The small vertices of a surface: union-find classes of `(face, point)`.
#[derive(Clone, Debug)]
pub struct SmallVertices {
    n: i64,
    reps: Vec<(usize, Pt)>,
    ids: Vec<String>,
    class: HashMap<(usize, Pt), usize>,
    members: Vec<Vec<(usize, Pt)>>,
}

impl SmallVertices {
    pub fn new(s: &TriangulatedSurface, n: i64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Precondition(format!("n must be at least 2, got {n}")));
        }
        let pts = triangle_points(n);
        let all: Vec<(usize, Pt)> = (0..s.num_faces())
            .flat_map(|f| pts.iter().map(move |p| (f, *p)))
            .collect();
        let pos: HashMap<(usize, Pt), usize> = all.iter().enumerate().map(|(i, x)| (*x, i)).collect();
        let mut uf = UnionFind::<usize>::new(all.len());
        for ((f, a), (g, b)) in s.gluings() {
            for t in 1..n {
                uf.union(pos[&(f, slot_point(n, a, t))], pos[&(g, slot_point(n, b, n - t))]);
            }
        }
        // `all` is already in representative order, so the first member of a
        // class is its representative.
        let mut root_to_class = HashMap::new();
        let mut reps = Vec::new();
        let mut members: Vec<Vec<(usize, Pt)>> = Vec::new();
        let mut class = HashMap::new();
        for (i, x) in all.iter().enumerate() {
            let r = uf.find(i);
            let c = *root_to_class.entry(r).or_insert_with(|| {
                reps.push(*x);
                members.push(Vec::new());
                reps.len() - 1
            });
            members[c].push(*x);
            class.insert(*x, c);
        }
        let ids = reps
            .iter()
            .map(|(f, p)| format!("{}({},{},{})", s.face_names()[*f], p[0], p[1], p[2]))
            .collect();
        Ok(Self {
            n,
            reps,
            ids,
            class,
            members,
        })
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn rep(&self, v: usize) -> (usize, Pt) {
        self.reps[v]
    }

    /// All `(face, point)` representatives of class `v`.
    pub fn members(&self, v: usize) -> &[(usize, Pt)] {
        &self.members[v]
    }

    pub fn class_of(&self, face: usize, p: &Pt) -> Option<usize> {
        self.class.get(&(face, *p)).copied()
    }

    pub fn position(&self, id: &str) -> Result<usize> {
        self.ids
            .iter()
            .position(|x| x == id)
            .ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    /// Whether `v` lies on a boundary edge of the surface.
    pub fn on_boundary(&self, s: &TriangulatedSurface, v: usize) -> bool {
        self.members[v]
            .iter()
            .any(|(f, p)| point_slots(p).iter().any(|(a, _)| s.partner(*f, *a).is_none()))
    }
}

/// `V̄_λ`, `V_λ`, `V′_λ` as index lists into the small vertices of `S*`.
#[derive(Clone, Debug)]
pub struct VertexSets {
    pub extended_surface: TriangulatedSurface,
    pub all: SmallVertices,
    pub reduced: Vec<usize>,
    pub x_set: Vec<usize>,
    pub a_set: Vec<usize>,
}

impl VertexSets {
    pub fn new(s: &TriangulatedSurface, n: i64) -> Result<Self> {
        let ext = s.extend();
        let all = SmallVertices::new(&ext, n)?;
        let base = s.num_faces();
        let mut reduced = Vec::new();
        let mut x_set = Vec::new();
        let mut a_set = Vec::new();
        for v in 0..all.len() {
            let (f, p) = all.rep(v);
            if f < base {
                reduced.push(v);
                x_set.push(v);
                a_set.push(v);
                continue;
            }
            // Vertices of attached triangles that are not on the attaching edge.
            if p[1] != 0 {
                x_set.push(v);
            }
            if p[0] != 0 {
                a_set.push(v);
            }
        }
        Ok(Self {
            extended_surface: ext,
            all,
            reduced,
            x_set,
            a_set,
        })
    }
}

pub fn binom2(n: i64) -> i64 {
    n * (n - 1) / 2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slot_geometry() {
        let n = 3;
        // e3 point (n-k, 0, k) glues to e1 point (n-k, k, 0)
        for k in 1..n {
            let p = [n - k, 0, k];
            let (a, s) = point_slots(&p)[0];
            assert_eq!(a, 3);
            assert_eq!(slot_point(n, 3, s), p);
            assert_eq!(slot_point(n, 1, n - s), [n - k, k, 0]);
        }
        assert_eq!(next_slot(3), 1);
        assert_eq!(prev_slot(1), 3);
        assert_eq!(rotate(&[3, 0, 0]), [0, 3, 0]);
    }

    #[test]
    fn small_vertex_counts() {
        let t = SmallVertices::new(&TriangulatedSurface::triangle(), 3).unwrap();
        assert_eq!(t.len(), 7);
        let q = SmallVertices::new(&TriangulatedSurface::polygon(4), 2).unwrap();
        assert_eq!(q.len(), 5);
    }

    #[test]
    fn rejects_degenerate_descriptions() {
        assert!(TriangulatedSurface::new(vec![], &[]).is_err());
        let f = |a| ("f0".to_string(), a);
        assert!(TriangulatedSurface::new(vec!["f0".into()], &[(f(1), f(1))]).is_err());
        assert!(TriangulatedSurface::new(
            vec!["f0".into(), "f1".into()],
            &[(f(1), ("f1".into(), 1)), (f(1), ("f1".into(), 2))]
        )
        .is_err());
        assert!(TriangulatedSurface::new(vec!["f0".into()], &[(f(4), f(1))]).is_err());
    }

    #[test]
    fn extend_counts() {
        assert_eq!(TriangulatedSurface::triangle().extend().num_faces(), 4);
        assert_eq!(TriangulatedSurface::polygon(4).extend().num_faces(), 6);
        let closed = TriangulatedSurface::new(
            vec!["a".into(), "b".into()],
            &[
                (("a".into(), 1), ("b".into(), 1)),
                (("a".into(), 2), ("b".into(), 3)),
                (("a".into(), 3), ("b".into(), 2)),
            ],
        )
        .unwrap();
        assert_eq!(closed.extend(), closed);
        assert_eq!(closed.euler_characteristic(), -1);
    }

    #[test]
    fn annulus_shape() {
        let a = TriangulatedSurface::annulus();
        assert_eq!(a.euler_characteristic(), 0);
        assert_eq!(a.num_boundary_edges(), 2);
        assert!(!a.has_interior_punctures());
        assert!(!a.has_self_glued_face());
        assert_eq!(a.ideal_vertices().1, 2);
    }

    #[test]
    fn vertex_set_sizes() {
        for s in [
            TriangulatedSurface::triangle(),
            TriangulatedSurface::polygon(4),
            TriangulatedSurface::polygon(5),
            TriangulatedSurface::annulus(),
        ] {
            for n in 2..=4 {
                let vs = VertexSets::new(&s, n).unwrap();
                let d = s.num_boundary_edges() as i64;
                let chi = s.euler_characteristic();
                assert_eq!(vs.x_set.len() as i64, (n * n - 1) * (d - chi));
                assert_eq!(vs.a_set.len(), vs.x_set.len());
                assert_eq!(vs.reduced.len() as i64, vs.x_set.len() as i64 - binom2(n) * d);
                let plain = SmallVertices::new(&s, n).unwrap();
                assert_eq!(plain.ids(), &vs.all.ids()[..plain.len()]);
            }
        }
        let vs = VertexSets::new(&TriangulatedSurface::polygon(4), 3).unwrap();
        assert_eq!(vs.x_set.len(), 24);
        assert_eq!(vs.reduced.len(), 12);
    }

    #[test]
    fn json_roundtrip() {
        let v = serde_json::json!({"n":3,"faces":["f0","f1"],"gluings":[{"a":["f0",3],"b":["f1",1]}]});
        let (s, n) = TriangulatedSurface::from_json(&v).unwrap();
        assert_eq!(n, Some(3));
        assert_eq!(s, TriangulatedSurface::polygon(4));
        assert_eq!(s.to_json(Some(3)), v);
    }
}
