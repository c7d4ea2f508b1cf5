//! Structure matrices Q̄/Q, P̄/P, K̄/K, H̄/H and C of a triangulated surface,
//! skeletons, the balanced lattice, and the A-to-X transition maps.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::imat::IMat;
use crate::lattice::Lattice;
use crate::par::{self, Exec};
use crate::qtorus::{MonomialMap, TorusElement, TorusPresentation};
use crate::surface::{
    is_corner, next_slot, point_slots, rotate, slot_point, triangle_points, Pt, SmallVertices, TriangulatedSurface,
    VertexSets,
};

// ---------------------------------------------------------------------------
// Single-triangle formulas on barycentric points.

const ARROWS: [Pt; 3] = [[1, -1, 0], [-1, 0, 1], [0, 1, -1]];

fn diff(a: &Pt, b: &Pt) -> Pt {
    [b[0] - a[0], b[1] - a[1], b[2] - a[2]]
}

/// Whether two points share a side of the triangle.
pub fn share_side(u: &Pt, v: &Pt) -> bool {
    (0..3).any(|c| u[c] == 0 && v[c] == 0)
}

/// Signed adjacency of the weighted quiver: arrows run counterclockwise on
/// the sides (weight 1) and parallel to them inside (weight 2).
pub fn q_tri(n: i64, u: &Pt, v: &Pt) -> i64 {
    if is_corner(n, u) || is_corner(n, v) {
        return 0;
    }
    let w = if share_side(u, v) { 1 } else { 2 };
    if ARROWS.contains(&diff(u, v)) {
        w
    } else if ARROWS.contains(&diff(v, u)) {
        -w
    } else {
        0
    }
}

fn rotations(u: &Pt, v: &Pt) -> [(Pt, Pt); 3] {
    let (u1, v1) = (rotate(u), rotate(v));
    let (u2, v2) = (rotate(&u1), rotate(&v1));
    [(*u, *v), (u1, v1), (u2, v2)]
}

/// Evaluate a rotation-invariant function given on a fundamental region;
/// when several rotations qualify they must agree.
fn invariant_extension(
    u: &Pt,
    v: &Pt,
    qualifies: impl Fn(&Pt, &Pt) -> bool,
    value: impl Fn(&Pt, &Pt) -> i64,
    what: &str,
) -> i64 {
    let mut found: Option<i64> = None;
    for (a, b) in rotations(u, v) {
        if qualifies(&a, &b) {
            let x = value(&a, &b);
            if let Some(prev) = found {
                assert_eq!(prev, x, "{what} ambiguous at {u:?}, {v:?}");
            }
            found = Some(x);
        }
    }
    found.unwrap_or_else(|| panic!("{what}: no rotation qualifies for {u:?}, {v:?}"))
}

pub fn p_tri(n: i64, u: &Pt, v: &Pt) -> i64 {
    invariant_extension(
        u,
        v,
        |a, b| (a[0] <= b[0] && a[1] <= b[1]) || (a[0] >= b[0] && a[1] >= b[1]),
        |a, b| n * (a[0] * b[1] - a[1] * b[0]),
        "P",
    )
}

pub fn k_tri(u: &Pt, v: &Pt) -> i64 {
    invariant_extension(
        u,
        v,
        |a, b| b[0] <= a[0] && b[1] >= a[1],
        |a, b| a[1] * b[2] + a[2] * b[0] + b[0] * a[1],
        "K",
    )
}

/// H̄ for a pair inside one triangle.
pub fn h_tri(n: i64, u: &Pt, v: &Pt) -> i64 {
    if share_side(u, v) {
        // +1 on the diagonal, -1 toward the head of a boundary arrow.
        if u == v {
            1
        } else if q_tri(n, u, v) > 0 {
            -1
        } else {
            0
        }
    } else {
        -q_tri(n, u, v) / 2
    }
}

/// The four triangle matrices on `triangle_points(n)`.
#[derive(Clone, Debug)]
pub struct TriangleMatrices {
    pub n: i64,
    pub points: Vec<Pt>,
    pub q: IMat,
    pub p: IMat,
    pub k: IMat,
    pub h: IMat,
}

impl TriangleMatrices {
    pub fn new(n: i64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Precondition(format!("n must be at least 2, got {n}")));
        }
        let pts = triangle_points(n);
        let m = pts.len();
        let f = |g: &dyn Fn(&Pt, &Pt) -> i64| IMat::from_fn(m, m, |r, c| g(&pts[r], &pts[c]));
        Ok(Self {
            n,
            q: f(&|a, b| q_tri(n, a, b)),
            p: f(&|a, b| p_tri(n, a, b)),
            k: f(&|a, b| k_tri(a, b)),
            h: f(&|a, b| h_tri(n, a, b)),
            points: pts,
        })
    }

    pub fn index_of(&self, p: &Pt) -> Option<usize> {
        self.points.iter().position(|x| x == p)
    }

    pub fn ids(&self) -> Vec<String> {
        self.points
            .iter()
            .map(|p| format!("f0({},{},{})", p[0], p[1], p[2]))
            .collect()
    }

    pub fn interior(&self) -> Vec<bool> {
        self.points.iter().map(|p| !p.contains(&0)).collect()
    }

    pub fn family(&self) -> MatrixFamily {
        MatrixFamily {
            n: self.n,
            ids: self.ids(),
            q: self.q.clone(),
            p: self.p.clone(),
            k: self.k.clone(),
            h: self.h.clone(),
            interior: self.interior(),
        }
    }
}

// ---------------------------------------------------------------------------
// Skeletons.

/// One contribution `Y(s)` of a skeleton: a point in a face.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SkeletonPoint {
    pub face: usize,
    pub point: Pt,
}

fn require_skeleton_ok(s: &TriangulatedSurface) -> Result<()> {
    if s.has_self_glued_face() {
        return Err(Error::Precondition(
            "a face is glued to itself; skeletons need embedded faces".into(),
        ));
    }
    if s.has_interior_punctures() {
        return Err(Error::Precondition("surface has interior punctures".into()));
    }
    Ok(())
}

/// The skeleton of the small vertex at `(face, p)` over all faces: the main
/// segment plus one `Y(s)` per elongated segment, turning left at each edge.
pub fn skeleton_from(s: &TriangulatedSurface, n: i64, face: usize, p: &Pt) -> Result<Vec<SkeletonPoint>> {
    require_skeleton_ok(s)?;
    let mut out = vec![SkeletonPoint { face, point: *p }];
    let cap = 3 * s.num_faces() + 3;
    for a in 1..=3u8 {
        let w = p[a as usize - 1];
        if w == 0 {
            continue;
        }
        let (mut f, mut slot) = (face, a);
        let mut steps = 0;
        while let Some((g, b)) = s.partner(f, slot) {
            steps += 1;
            if steps > cap {
                return Err(Error::Internal(format!(
                    "elongation from {}{p:?} did not reach the boundary within {cap} steps",
                    s.face_names()[face]
                )));
            }
            // Entering g through e_b and turning left around v_{b+1}.
            out.push(SkeletonPoint {
                face: g,
                point: slot_point(n, b, w),
            });
            f = g;
            slot = next_slot(b);
        }
    }
    out.sort();
    Ok(out)
}

/// `sk_τ(v)` for a small-vertex class, restricted to face `tau`.
pub fn skeleton(s: &TriangulatedSurface, sv: &SmallVertices, v: usize, tau: usize) -> Result<Vec<Pt>> {
    let (f, p) = sv.rep(v);
    Ok(skeleton_from(s, sv.n(), f, &p)?
        .into_iter()
        .filter(|x| x.face == tau)
        .map(|x| x.point)
        .collect())
}

// ---------------------------------------------------------------------------
// Reduced matrices of a surface.

/// Q̄_λ: the face quivers summed (extension by zero).
pub fn reduced_q(s: &TriangulatedSurface, sv: &SmallVertices) -> IMat {
    let n = sv.n();
    let pts = triangle_points(n);
    let mut q = IMat::zeros(sv.len(), sv.len());
    for f in 0..s.num_faces() {
        for a in &pts {
            for b in &pts {
                let w = q_tri(n, a, b);
                if w != 0 {
                    let (u, v) = (sv.class_of(f, a).unwrap(), sv.class_of(f, b).unwrap());
                    q[(u, v)] += w;
                }
            }
        }
    }
    q
}

/// Class indices on each boundary slot.
fn boundary_classes(s: &TriangulatedSurface, sv: &SmallVertices) -> Vec<Vec<usize>> {
    let n = sv.n();
    s.boundary_slots()
        .into_iter()
        .map(|(f, a)| (1..n).map(|t| sv.class_of(f, &slot_point(n, a, t)).unwrap()).collect())
        .collect()
}

fn reduced_h(s: &TriangulatedSurface, sv: &SmallVertices, q: &IMat) -> IMat {
    let m = sv.len();
    let mut same_edge = vec![vec![false; m]; m];
    for edge in boundary_classes(s, sv) {
        for &u in &edge {
            for &v in &edge {
                same_edge[u][v] = true;
            }
        }
    }
    IMat::from_fn(m, m, |u, v| {
        if same_edge[u][v] {
            if u == v {
                1
            } else if q[(u, v)] > 0 {
                -1
            } else {
                0
            }
        } else {
            -q[(u, v)] / 2
        }
    })
}

/// The reduced matrices of a surface on its small vertices.
#[derive(Clone, Debug)]
pub struct ReducedMatrices {
    pub n: i64,
    pub vertices: SmallVertices,
    pub q: IMat,
    pub p: IMat,
    pub k: IMat,
    pub h: IMat,
    /// Per vertex: not on a boundary edge.
    pub interior: Vec<bool>,
}

impl ReducedMatrices {
    pub fn new(s: &TriangulatedSurface, n: i64) -> Result<Self> {
        Self::new_with(s, n, Exec::default())
    }

    pub fn new_with(s: &TriangulatedSurface, n: i64, exec: Exec) -> Result<Self> {
        require_skeleton_ok(s)?;
        let sv = SmallVertices::new(s, n)?;
        let m = sv.len();
        let q = reduced_q(s, &sv);
        let idx: Vec<usize> = (0..m).collect();
        let skels: Vec<Vec<SkeletonPoint>> = par::map(exec, &idx, |&v| {
            let (f, p) = sv.rep(v);
            skeleton_from(s, n, f, &p)
        })
        .into_iter()
        .collect::<Result<_>>()?;

        let mut p = IMat::zeros(m, m);
        for u in 0..m {
            for v in 0..m {
                let mut acc = 0;
                for a in &skels[u] {
                    for b in skels[v].iter().filter(|b| b.face == a.face) {
                        acc += p_tri(n, &a.point, &b.point);
                    }
                }
                p[(u, v)] = acc;
            }
        }

        // K̄(u, v) from every face containing v; all choices must agree.
        let rows: Vec<Result<Vec<i64>>> = par::map(exec, &idx, |&u| {
            (0..m)
                .map(|v| {
                    let mut value = None;
                    for (tau, pt) in sv.members(v) {
                        let x: i64 = skels[u]
                            .iter()
                            .filter(|y| y.face == *tau)
                            .map(|y| k_tri(&y.point, pt))
                            .sum();
                        match value {
                            None => value = Some(x),
                            Some(prev) if prev != x => {
                                return Err(Error::Internal(format!(
                                    "K({}, {}) depends on the containing face: {prev} vs {x}",
                                    sv.ids()[u],
                                    sv.ids()[v]
                                )))
                            }
                            _ => {}
                        }
                    }
                    Ok(value.unwrap())
                })
                .collect()
        });
        let k = IMat::from_rows(rows.into_iter().collect::<Result<_>>()?);
        let h = reduced_h(s, &sv, &q);
        let interior = (0..m).map(|v| !sv.on_boundary(s, v)).collect();
        Ok(Self {
            n,
            vertices: sv,
            q,
            p,
            k,
            h,
            interior,
        })
    }

    pub fn ids(&self) -> &[String] {
        self.vertices.ids()
    }

    pub fn family(&self) -> MatrixFamily {
        MatrixFamily {
            n: self.n,
            ids: self.ids().to_vec(),
            q: self.q.clone(),
            p: self.p.clone(),
            k: self.k.clone(),
            h: self.h.clone(),
            interior: self.interior.clone(),
        }
    }
}

// ---------------------------------------------------------------------------
// Extended matrices.

#[derive(Clone, Debug)]
pub struct SurfaceMatrices {
    pub n: i64,
    pub surface: TriangulatedSurface,
    pub reduced: ReducedMatrices,
    /// Reduced matrices of the extended surface S*.
    pub star: ReducedMatrices,
    pub sets: VertexSets,
    /// V_λ × V_λ.
    pub q: IMat,
    /// V′_λ × V′_λ.
    pub p: IMat,
    /// V′_λ × V_λ.
    pub k: IMat,
    /// V_λ × V′_λ.
    pub h: IMat,
    /// V′_λ × V̄_{λ*}.
    pub c: IMat,
}

impl SurfaceMatrices {
    pub fn new(s: &TriangulatedSurface, n: i64) -> Result<Self> {
        Self::new_with(s, n, Exec::default())
    }

    pub fn new_with(s: &TriangulatedSurface, n: i64, exec: Exec) -> Result<Self> {
        let reduced = ReducedMatrices::new_with(s, n, exec)?;
        let sets = VertexSets::new(s, n)?;
        let ext = &sets.extended_surface;
        let star = ReducedMatrices::new_with(ext, n, exec)?;
        let all = &sets.all;
        debug_assert_eq!(all.ids(), star.ids());

        let mut c = IMat::zeros(sets.a_set.len(), all.len());
        for (r, &v) in sets.a_set.iter().enumerate() {
            c[(r, v)] = 1;
            let (f, pt) = all.rep(v);
            if ext.is_attached(f) {
                let pv = all.class_of(f, &[0, n - pt[2], pt[2]]).unwrap();
                c[(r, pv)] = -1;
            }
        }

        let ck = c.mul(&star.k);
        let in_x: Vec<bool> = {
            let mut b = vec![false; all.len()];
            sets.x_set.iter().for_each(|&v| b[v] = true);
            b
        };
        for r in 0..ck.rows() {
            for v in 0..all.len() {
                if !in_x[v] && ck[(r, v)] != 0 {
                    return Err(Error::Internal(format!(
                        "(C K*)({}, {}) = {} but must vanish off V",
                        all.ids()[sets.a_set[r]],
                        all.ids()[v],
                        ck[(r, v)]
                    )));
                }
            }
        }
        let rows_a: Vec<usize> = (0..sets.a_set.len()).collect();
        let k = ck.select(&rows_a, &sets.x_set);
        let p = c.mul(&star.p).mul(&c.transpose());
        let q = star.q.select(&sets.x_set, &sets.x_set);
        let h = star.h.select(&sets.x_set, &sets.a_set);
        Ok(Self {
            n,
            surface: s.clone(),
            reduced,
            star,
            sets,
            q,
            p,
            k,
            h,
            c,
        })
    }

    pub fn x_ids(&self) -> Vec<String> {
        self.sets
            .x_set
            .iter()
            .map(|&v| self.sets.all.ids()[v].clone())
            .collect()
    }

    pub fn a_ids(&self) -> Vec<String> {
        self.sets
            .a_set
            .iter()
            .map(|&v| self.sets.all.ids()[v].clone())
            .collect()
    }

    /// Verify the reduced identities plus the extended ones.
    pub fn verify(&self) -> Report {
        self.verify_with(Exec::default())
    }

    pub fn verify_with(&self, exec: Exec) -> Report {
        let mut report = self.reduced.family().verify_with(exec);
        let n = self.n;
        let (x_ids, a_ids) = (self.x_ids(), self.a_ids());
        report.checks.push(compare(
            "extended: H K = n Id",
            &self.h.mul(&self.k),
            &IMat::identity(x_ids.len()).scale(n),
            &x_ids,
            &x_ids,
        ));
        report.checks.push(compare(
            "extended: K Q K^t = P",
            &self.k.mul(&self.q).mul(&self.k.transpose()),
            &self.p,
            &a_ids,
            &a_ids,
        ));
        // Restrictions to V̄_λ reproduce the reduced matrices.
        let m = self.reduced.vertices.len();
        let red_x: Vec<usize> = (0..m).collect();
        let red_ids = self.reduced.ids().to_vec();
        report.checks.push(compare(
            "extended: P restricted to reduced vertices",
            &self.p.select(&red_x, &red_x),
            &self.reduced.p,
            &red_ids,
            &red_ids,
        ));
        report.checks.push(compare(
            "extended: K restricted to reduced vertices",
            &self.k.select(&red_x, &red_x),
            &self.reduced.k,
            &red_ids,
            &red_ids,
        ));
        report
    }
}

// ---------------------------------------------------------------------------
// Identity verification.

/// A square matrix family on one vertex list.
#[derive(Clone, Debug)]
pub struct MatrixFamily {
    pub n: i64,
    pub ids: Vec<String>,
    pub q: IMat,
    pub p: IMat,
    pub k: IMat,
    pub h: IMat,
    pub interior: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub row: String,
    pub col: String,
    pub expected: i64,
    pub got: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }
}

fn compare(name: &str, got: &IMat, expected: &IMat, rows: &[String], cols: &[String]) -> Check {
    let counterexample = got.first_difference(expected).map(|(r, c)| Counterexample {
        row: rows[r].clone(),
        col: cols[c].clone(),
        expected: expected[(r, c)],
        got: got[(r, c)],
    });
    Check {
        name: name.to_string(),
        passed: counterexample.is_none(),
        counterexample,
    }
}

impl MatrixFamily {
    pub fn verify(&self) -> Report {
        self.verify_with(Exec::default())
    }

    pub fn verify_with(&self, exec: Exec) -> Report {
        type Job<'a> = Box<dyn Fn() -> Check + Sync + Send + 'a>;
        let n = self.n;
        let ids = &self.ids;
        let m = ids.len();
        let jobs: Vec<Job> = vec![
            Box::new(|| {
                compare(
                    "n(K - K^t) = P",
                    &self.k.sub(&self.k.transpose()).scale(n),
                    &self.p,
                    ids,
                    ids,
                )
            }),
            Box::new(|| compare("H^t - H = Q", &self.h.transpose().sub(&self.h), &self.q, ids, ids)),
            Box::new(|| {
                compare(
                    "H K = n Id",
                    &self.h.mul(&self.k),
                    &IMat::identity(m).scale(n),
                    ids,
                    ids,
                )
            }),
            Box::new(|| {
                compare(
                    "K Q K^t = P",
                    &self.k.mul(&self.q).mul(&self.k.transpose()),
                    &self.p,
                    ids,
                    ids,
                )
            }),
            Box::new(|| {
                // Only columns at interior vertices are constrained.
                let pq = self.p.mul(&self.q);
                let cols: Vec<usize> = (0..m).filter(|&v| self.interior[v]).collect();
                let all: Vec<usize> = (0..m).collect();
                let got = pq.select(&all, &cols);
                let expected = IMat::from_fn(m, cols.len(), |u, c| if u == cols[c] { -4 * n * n } else { 0 });
                let col_ids: Vec<String> = cols.iter().map(|&c| ids[c].clone()).collect();
                compare("P Q interior columns = -4n^2 Id / 0", &got, &expected, ids, &col_ids)
            }),
        ];
        Report {
            checks: par::map(exec, &jobs, |j| j()),
        }
    }
}

// ---------------------------------------------------------------------------
// Balanced lattice.

pub(crate) fn balanced_triangle_vector(n: i64, pts: &[Pt], vals: &[i64]) -> bool {
    (0..n).any(|a| {
        (0..n).any(|b| {
            pts.iter()
                .zip(vals)
                .all(|(p, v)| (v - a * p[0] - b * p[1]).rem_euclid(n) == 0)
        })
    })
}

/// Balanced vectors on a vertex set, with three independent membership tests.
#[derive(Clone, Debug)]
pub struct BalancedLattice {
    pub n: i64,
    pub ids: Vec<String>,
    /// Rows indexed by c, columns by the vertices.
    k: IMat,
    /// Vertices × c-index.
    h: IMat,
    c_ids: Vec<String>,
    /// For each face of the relevant surface: the vertex index (if any) of
    /// every triangle point.
    pullbacks: Vec<Vec<Option<usize>>>,
    span: Lattice,
}

impl BalancedLattice {
    /// The reduced lattice Λ̄_λ on V̄_λ.
    pub fn reduced(s: &TriangulatedSurface, n: i64) -> Result<Self> {
        let r = ReducedMatrices::new(s, n)?;
        let sv = &r.vertices;
        let pts = triangle_points(n);
        let pullbacks = (0..s.num_faces())
            .map(|f| pts.iter().map(|p| sv.class_of(f, p)).collect())
            .collect();
        Ok(Self::build(
            n,
            sv.ids().to_vec(),
            sv.ids().to_vec(),
            r.k,
            r.h,
            pullbacks,
        ))
    }

    /// The extended lattice Λ_λ on V_λ (vectors balanced on S*, vanishing
    /// off V_λ).
    pub fn extended(m: &SurfaceMatrices) -> Self {
        let n = m.n;
        let pts = triangle_points(n);
        let pos: HashMap<usize, usize> = m.sets.x_set.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let ext = &m.sets.extended_surface;
        let pullbacks = (0..ext.num_faces())
            .map(|f| {
                pts.iter()
                    .map(|p| m.sets.all.class_of(f, p).and_then(|v| pos.get(&v).copied()))
                    .collect()
            })
            .collect();
        Self::build(n, m.x_ids(), m.a_ids(), m.k.clone(), m.h.clone(), pullbacks)
    }

    fn build(
        n: i64,
        ids: Vec<String>,
        c_ids: Vec<String>,
        k: IMat,
        h: IMat,
        pullbacks: Vec<Vec<Option<usize>>>,
    ) -> Self {
        let rows: Vec<Vec<i64>> = (0..k.rows()).map(|r| k.row(r).to_vec()).collect();
        let span = Lattice::from_generators(ids.len(), &rows);
        Self {
            n,
            ids,
            k,
            h,
            c_ids,
            pullbacks,
            span,
        }
    }

    pub fn dim(&self) -> usize {
        self.ids.len()
    }

    /// Every face pullback lies in the triangle's balanced lattice.
    pub fn balanced_by_faces(&self, k: &[i64]) -> bool {
        let pts = triangle_points(self.n);
        self.pullbacks.iter().all(|pb| {
            let vals: Vec<i64> = pb.iter().map(|v| v.map_or(0, |v| k[v])).collect();
            balanced_triangle_vector(self.n, &pts, &vals)
        })
    }

    /// `kH ∈ (nZ)^V`.
    pub fn balanced_by_h(&self, k: &[i64]) -> bool {
        self.h.vec_mul(k).iter().all(|x| x % self.n == 0)
    }

    /// `k` is an integer combination of the rows of K.
    pub fn in_row_span(&self, k: &[i64]) -> bool {
        self.span.contains(k)
    }

    pub fn contains(&self, k: &[i64]) -> bool {
        self.balanced_by_h(k)
    }

    /// `c = kH/n`, checked against `cK = k`.
    pub fn solve(&self, k: &[i64]) -> Result<Vec<i64>> {
        let kh = self.h.vec_mul(k);
        if let Some(i) = kh.iter().position(|x| x % self.n != 0) {
            return Err(Error::Unbalanced(self.c_ids[i].clone()));
        }
        let c: Vec<i64> = kh.iter().map(|x| x / self.n).collect();
        if self.k.vec_mul(&c) != k {
            return Err(Error::Internal("c K != k for c = kH/n".into()));
        }
        Ok(c)
    }

    /// Generators: the rows of K.
    pub fn basis(&self) -> Vec<Vec<i64>> {
        (0..self.k.rows()).map(|r| self.k.row(r).to_vec()).collect()
    }
}

/// Generators of the triangle's balanced lattice: `k_1`, `k_2`, `n e_v`.
pub fn triangle_balanced_generators(n: i64) -> Vec<Vec<i64>> {
    let pts = triangle_points(n);
    let mut g = vec![
        pts.iter().map(|p| p[0]).collect::<Vec<_>>(),
        pts.iter().map(|p| p[1]).collect(),
    ];
    for i in 0..pts.len() {
        let mut e = vec![0; pts.len()];
        e[i] = n;
        g.push(e);
    }
    g
}

// ---------------------------------------------------------------------------
// Transition maps.

/// `ψ: a^c ↦ x^{cK}` with its inverse on balanced monomials.
#[derive(Clone, Debug)]
pub struct Transition {
    pub map: MonomialMap,
    pub lattice: BalancedLattice,
}

impl Transition {
    pub fn reduced(s: &TriangulatedSurface, n: i64) -> Result<Self> {
        let r = ReducedMatrices::new(s, n)?;
        let ids = r.ids().to_vec();
        let a = TorusPresentation::new(ids.clone(), r.p.clone())?;
        let x = TorusPresentation::new(ids, r.q.clone())?;
        Ok(Self {
            map: MonomialMap::new(&a, &x, r.k.clone())?,
            lattice: BalancedLattice::reduced(s, n)?,
        })
    }

    pub fn extended(m: &SurfaceMatrices) -> Result<Self> {
        let a = TorusPresentation::new(m.a_ids(), m.p.clone())?;
        let x = TorusPresentation::new(m.x_ids(), m.q.clone())?;
        Ok(Self {
            map: MonomialMap::new(&a, &x, m.k.clone())?,
            lattice: BalancedLattice::extended(m),
        })
    }

    pub fn a_torus(&self) -> &Arc<TorusPresentation> {
        self.map.source()
    }

    pub fn x_torus(&self) -> &Arc<TorusPresentation> {
        self.map.target()
    }

    pub fn apply(&self, a: &TorusElement) -> Result<TorusElement> {
        self.map.apply(a)
    }

    /// `x^k ↦ a^{kH/n}`; fails on unbalanced exponents.
    pub fn inverse(&self, x: &TorusElement) -> Result<TorusElement> {
        if !Arc::ptr_eq(x.presentation(), self.x_torus()) && **x.presentation() != **self.x_torus() {
            return Err(Error::PresentationMismatch);
        }
        let mut terms = Vec::new();
        for (k, c) in x.terms() {
            terms.push((self.lattice.solve(k)?, c.clone()));
        }
        Ok(TorusElement::from_terms_unchecked(self.a_torus(), terms))
    }
}

// ---------------------------------------------------------------------------
// JSON dump.

/// `{"rows":[ids],"cols":[ids],"entries":[[r,c,v],..]}` with zeros omitted.
pub fn matrix_json(m: &IMat, rows: &[String], cols: &[String]) -> serde_json::Value {
    let mut entries = Vec::new();
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            if m[(r, c)] != 0 {
                entries.push(serde_json::json!([r, c, m[(r, c)]]));
            }
        }
    }
    serde_json::json!({ "rows": rows, "cols": cols, "entries": entries })
}

/// Boundary-edge membership used by callers that need it per vertex.
pub fn on_boundary_edge(s: &TriangulatedSurface, face: usize, p: &Pt) -> bool {
    point_slots(p).iter().any(|(a, _)| s.partner(face, *a).is_none())
}
