//! Compatible paths in the dual graph of the n-triangulation, their exponent
//! vectors, and the corner-arc traces and transport matrices built from them.
//!
//! Paths are enumerated in the frame of `v_1` (top corner) and rotated to the
//! other corners. In that frame row `r` (from the top) holds the upward small
//! triangles `U(r, c)`, `c = 1..=r`, and the downward ones `D(r, c)` between
//! `U(r, c)` and `U(r, c + 1)`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imat::IMat;
use crate::par::{self, Exec};
use crate::qmatrix::QMatrix;
use crate::qtorus::{TorusElement, TorusPresentation};
use crate::scalars::LaurentScalar;
use crate::structmat::q_tri;
use crate::surface::{rotate, triangle_points, Pt};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// `C(v)`: counterclockwise around the corner.
    Ccw,
    /// `C̄(v)`: clockwise around the corner.
    Cw,
}

impl Orientation {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "ccw" | "C" => Ok(Orientation::Ccw),
            "cw" | "Cbar" => Ok(Orientation::Cw),
            _ => Err(Error::Parse(format!("orientation must be ccw or cw, got `{s}`"))),
        }
    }
}

/// `C(v_m)_{ij}` or `C̄(v_m)_{ij}`: `i` is the state at the endpoint on the
/// edge `v_m v_{m+2}` (left in the corner's frame), `j` the one on
/// `v_m v_{m+1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StatedCornerArc {
    pub n: i64,
    pub corner: u8,
    pub orientation: Orientation,
    pub i: usize,
    pub j: usize,
}

impl StatedCornerArc {
    pub fn new(n: i64, corner: u8, orientation: Orientation, i: usize, j: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Precondition(format!("n must be at least 2, got {n}")));
        }
        if !(1..=3).contains(&corner) {
            return Err(Error::Parse(format!("corner must be 1, 2 or 3, got {corner}")));
        }
        let range = 1..=n as usize;
        if !range.contains(&i) || !range.contains(&j) {
            return Err(Error::Parse(format!("states must lie in 1..={n}, got ({i}, {j})")));
        }
        Ok(Self {
            n,
            corner,
            orientation,
            i,
            j,
        })
    }

    pub fn is_bad(&self) -> bool {
        self.i < self.j
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum DualNode {
    /// Upward small triangle `(row, col)`.
    Up(usize, usize),
    /// Downward small triangle `(row, col)`.
    Down(usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Step {
    Right,
    Left,
    Up,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompatiblePath {
    pub arc: StatedCornerArc,
    /// Nodes in travel order, in the frame of `v_1`.
    pub nodes: Vec<DualNode>,
    /// `steps[t]` joins `nodes[t]` and `nodes[t + 1]`.
    pub steps: Vec<Step>,
}

// Vertices of the small triangles in the v_1 frame.
fn up_top(n: i64, r: usize, c: usize) -> Pt {
    let (r, c) = (r as i64, c as i64);
    [n - r + 1, c - 1, r - c]
}
fn up_bottom_left(n: i64, r: usize, c: usize) -> Pt {
    let (r, c) = (r as i64, c as i64);
    [n - r, c - 1, r - c + 1]
}
fn up_bottom_right(n: i64, r: usize, c: usize) -> Pt {
    let (r, c) = (r as i64, c as i64);
    [n - r, c, r - c]
}

fn edge(a: Pt, b: Pt) -> (Pt, Pt) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// The small edge crossed by each dual segment, plus the boundary edges at the
/// two endpoints.
fn crossed_edges(n: i64, p: &CompatiblePath) -> HashSet<(Pt, Pt)> {
    let mut out = HashSet::new();
    let boundary = |node: &DualNode, left: bool| match *node {
        DualNode::Up(r, c) if left => edge(up_top(n, r, c), up_bottom_left(n, r, c)),
        DualNode::Up(r, c) => edge(up_top(n, r, c), up_bottom_right(n, r, c)),
        DualNode::Down(..) => unreachable!("paths end at upward triangles"),
    };
    let ccw = p.arc.orientation == Orientation::Ccw;
    out.insert(boundary(p.nodes.first().unwrap(), ccw));
    out.insert(boundary(p.nodes.last().unwrap(), !ccw));
    for w in p.nodes.windows(2) {
        let (up, down) = match (w[0], w[1]) {
            (DualNode::Up(r, c), DualNode::Down(rd, cd)) | (DualNode::Down(rd, cd), DualNode::Up(r, c)) => {
                ((r, c), (rd, cd))
            }
            _ => unreachable!("the dual graph is bipartite"),
        };
        let ((r, c), (rd, cd)) = (up, down);
        let e = if r == rd && c == cd {
            edge(up_top(n, r, c), up_bottom_right(n, r, c))
        } else if r == rd && c == cd + 1 {
            edge(up_top(n, r, c), up_bottom_left(n, r, c))
        } else {
            debug_assert!(r + 1 == rd && c == cd);
            edge(up_bottom_left(n, r, c), up_bottom_right(n, r, c))
        };
        out.insert(e);
    }
    out
}

fn all_points(n: i64) -> Vec<Pt> {
    let mut v = Vec::new();
    for i in (0..=n).rev() {
        for j in (0..=n - i).rev() {
            v.push([i, j, n - i - j]);
        }
    }
    v
}

const PRIMAL_STEPS: [Pt; 6] = [[1, -1, 0], [-1, 1, 0], [1, 0, -1], [-1, 0, 1], [0, 1, -1], [0, -1, 1]];

fn add(p: &Pt, d: &Pt) -> Pt {
    [p[0] + d[0], p[1] + d[1], p[2] + d[2]]
}

/// Enumerate the compatible paths of a corner arc, in lexicographic order of
/// their step sequences.
pub fn compatible_paths(arc: &StatedCornerArc) -> Vec<CompatiblePath> {
    let n = arc.n as usize;
    let mut out = Vec::new();
    if arc.is_bad() {
        return out;
    }
    match arc.orientation {
        Orientation::Ccw => {
            // From row i on the left edge to row j on the right edge.
            let (start, end) = (arc.i, arc.j);
            let mut nodes = vec![DualNode::Up(start, 1)];
            let mut steps = Vec::new();
            dfs_ccw(end, &mut nodes, &mut steps, &mut |nodes, steps| {
                out.push(CompatiblePath {
                    arc: *arc,
                    nodes: nodes.to_vec(),
                    steps: steps.to_vec(),
                })
            });
        }
        Orientation::Cw => {
            // Decreasing numbering: state s sits in row n + 1 - s.
            let (start, end) = (n + 1 - arc.j, n + 1 - arc.i);
            let mut nodes = vec![DualNode::Up(start, start)];
            let mut steps = Vec::new();
            dfs_cw(end, &mut nodes, &mut steps, &mut |nodes, steps| {
                out.push(CompatiblePath {
                    arc: *arc,
                    nodes: nodes.to_vec(),
                    steps: steps.to_vec(),
                })
            });
        }
    }
    out
}

fn dfs_ccw(end: usize, nodes: &mut Vec<DualNode>, steps: &mut Vec<Step>, emit: &mut dyn FnMut(&[DualNode], &[Step])) {
    let go = |node: DualNode,
              step: Step,
              nodes: &mut Vec<DualNode>,
              steps: &mut Vec<Step>,
              emit: &mut dyn FnMut(&[DualNode], &[Step])| {
        nodes.push(node);
        steps.push(step);
        dfs_ccw(end, nodes, steps, emit);
        nodes.pop();
        steps.pop();
    };
    match *nodes.last().unwrap() {
        DualNode::Up(r, c) if c == r => {
            if r == end {
                emit(nodes, steps);
            }
        }
        DualNode::Up(r, c) => go(DualNode::Down(r, c), Step::Right, nodes, steps, emit),
        DualNode::Down(r, c) => {
            go(DualNode::Up(r, c + 1), Step::Right, nodes, steps, emit);
            if r > end {
                go(DualNode::Up(r - 1, c), Step::Up, nodes, steps, emit);
            }
        }
    }
}

fn dfs_cw(end: usize, nodes: &mut Vec<DualNode>, steps: &mut Vec<Step>, emit: &mut dyn FnMut(&[DualNode], &[Step])) {
    let go = |node: DualNode,
              step: Step,
              nodes: &mut Vec<DualNode>,
              steps: &mut Vec<Step>,
              emit: &mut dyn FnMut(&[DualNode], &[Step])| {
        nodes.push(node);
        steps.push(step);
        dfs_cw(end, nodes, steps, emit);
        nodes.pop();
        steps.pop();
    };
    match *nodes.last().unwrap() {
        DualNode::Up(r, 1) => {
            if r == end {
                emit(nodes, steps);
            }
        }
        DualNode::Up(r, c) => go(DualNode::Down(r, c - 1), Step::Left, nodes, steps, emit),
        DualNode::Down(r, c) => {
            go(DualNode::Up(r, c), Step::Left, nodes, steps, emit);
            if r > end && c < r {
                go(DualNode::Up(r - 1, c), Step::Up, nodes, steps, emit);
            }
        }
    }
}

/// `k_p` over `triangle_points(n)`, already moved to the arc's corner.
///
/// `k'_p` is `n` on the small vertices left of the path (the corner's side
/// for `C`, the opposite side for `C̄`), found by flooding the small edges not
/// crossed by the path; then `k_p = k'_p - k_1` or `k'_p - k_2 - k_3` in the
/// frame of `v_1`.
pub fn path_exponent(p: &CompatiblePath) -> Vec<i64> {
    let n = p.arc.n;
    let cut = crossed_edges(n, p);
    let seed: Pt = match p.arc.orientation {
        Orientation::Ccw => [n, 0, 0],
        Orientation::Cw => [0, n, 0],
    };
    let mut left: HashSet<Pt> = HashSet::from([seed]);
    let mut stack = vec![seed];
    while let Some(u) = stack.pop() {
        for d in &PRIMAL_STEPS {
            let v = add(&u, d);
            if v.iter().any(|&x| x < 0) || cut.contains(&edge(u, v)) || left.contains(&v) {
                continue;
            }
            left.insert(v);
            stack.push(v);
        }
    }
    let value = |pt: &Pt| -> i64 {
        let kp = if left.contains(pt) { n } else { 0 };
        match p.arc.orientation {
            Orientation::Ccw => kp - pt[0],
            Orientation::Cw => kp - pt[1] - pt[2],
        }
    };
    // Value at ρ^{m-1}(pt) is the v_1-frame value at pt.
    let mut by_point: HashMap<Pt, i64> = HashMap::new();
    for pt in all_points(n) {
        let mut q = pt;
        for _ in 1..p.arc.corner {
            q = rotate(&q);
        }
        by_point.insert(q, value(&pt));
    }
    triangle_points(n).iter().map(|pt| by_point[pt]).collect()
}

/// The reduced X-torus of the triangle, on ids `f0(i,j,k)`.
pub fn triangle_torus(n: i64) -> Arc<TorusPresentation> {
    static CACHE: OnceLock<Mutex<HashMap<i64, Arc<TorusPresentation>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    guard
        .entry(n)
        .or_insert_with(|| {
            let pts = triangle_points(n);
            let ids = pts.iter().map(|p| format!("f0({},{},{})", p[0], p[1], p[2])).collect();
            let q = IMat::from_fn(pts.len(), pts.len(), |r, c| q_tri(n, &pts[r], &pts[c]));
            TorusPresentation::new(ids, q).expect("triangle quiver is antisymmetric")
        })
        .clone()
}

/// `Σ_{p ∈ P(α)} x^{k_p}`.
pub fn trace_corner(arc: &StatedCornerArc) -> TorusElement {
    let pres = triangle_torus(arc.n);
    let mut terms: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
    for p in compatible_paths(arc) {
        *terms.entry(path_exponent(&p)).or_default() += 1;
    }
    TorusElement::from_terms_unchecked(&pres, terms.into_iter().map(|(k, c)| (k, LaurentScalar::from(c))))
}

/// `M_m` (orientation `Ccw`, entries `C(v_m)_{ij}`) or `M̄_m` (orientation
/// `Cw`, entries `C̄(v_m)_{ji}`).
pub fn transport_matrix(n: i64, m: u8, orientation: Orientation) -> Result<QMatrix> {
    transport_matrix_with(n, m, orientation, Exec::default())
}

pub fn transport_matrix_with(n: i64, m: u8, orientation: Orientation, exec: Exec) -> Result<QMatrix> {
    let size = n as usize;
    let mut arcs = Vec::with_capacity(size * size);
    for r in 1..=size {
        for c in 1..=size {
            arcs.push(match orientation {
                Orientation::Ccw => StatedCornerArc::new(n, m, orientation, r, c)?,
                Orientation::Cw => StatedCornerArc::new(n, m, orientation, c, r)?,
            });
        }
    }
    let entries = par::map(exec, &arcs, trace_corner);
    QMatrix::new(&triangle_torus(n), size, size, entries)
}
