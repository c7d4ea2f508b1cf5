//! Simple stated arcs on a surface: cutting along interior edges, the reduced
//! and extended X-traces, the projection `pr`, and A-traces.
//!
//! An arc is a list of passes `(face, entry slot, exit slot)`. Cut along every
//! edge it crosses, it becomes one corner arc per face; the trace is the state
//! sum over the crossed edges of the products of corner traces, folded back
//! into the glued torus.

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imat::IMat;
use crate::par::{self, Exec};
use crate::qtorus::{MonomialMap, TorusElement, TorusPresentation};
use crate::scalars::LaurentScalar;
use crate::structmat::reduced_q;
use crate::surface::{next_slot, prev_slot, triangle_points, SlotRef, SmallVertices, TriangulatedSurface};
use crate::weight::{weight_pairing, WeightVector};

use super::context::SurfaceContext;
use super::counit::AttachMonoid;
use super::paths::{trace_corner, Orientation, StatedCornerArc};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    #[default]
    Fwd,
    Rev,
}

/// The arc JSON: `{"passes":[["f0",1,3],["f1",1,2]],"start_state":2,"end_state":1,"orientation":"fwd"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimpleArcSpec {
    pub passes: Vec<(String, u8, u8)>,
    pub start_state: usize,
    pub end_state: usize,
    #[serde(default)]
    pub orientation: Direction,
}

impl SimpleArcSpec {
    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        serde_json::from_value(v.clone()).map_err(|e| Error::Parse(format!("arc JSON: {e}")))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("plain data")
    }

    /// The same arc written in the forward direction.
    pub fn forward(&self) -> Self {
        match self.orientation {
            Direction::Fwd => self.clone(),
            Direction::Rev => Self {
                passes: self.passes.iter().rev().map(|(f, a, b)| (f.clone(), *b, *a)).collect(),
                start_state: self.end_state,
                end_state: self.start_state,
                orientation: Direction::Fwd,
            },
        }
    }

    /// Check the arc against a surface and resolve face names.
    pub fn resolve(&self, s: &TriangulatedSurface, n: i64) -> Result<ResolvedArc> {
        let fwd = self.forward();
        if fwd.passes.is_empty() {
            return Err(Error::InvalidArc("no passes".into()));
        }
        for st in [fwd.start_state, fwd.end_state] {
            if st < 1 || st as i64 > n {
                return Err(Error::InvalidArc(format!("state {st} is not in 1..={n}")));
            }
        }
        let mut passes = Vec::with_capacity(fwd.passes.len());
        let mut seen = HashSet::new();
        for (name, a, b) in &fwd.passes {
            let f = s
                .face_index(name)
                .map_err(|_| Error::InvalidArc(format!("unknown face `{name}`")))?;
            if !(1..=3).contains(a) || !(1..=3).contains(b) {
                return Err(Error::InvalidArc(format!("slots of `{name}` must lie in 1..=3")));
            }
            if a == b {
                return Err(Error::InvalidArc(format!(
                    "pass through `{name}` enters and exits by slot {a}"
                )));
            }
            if !seen.insert(f) {
                return Err(Error::InvalidArc(format!("face `{name}` is visited twice")));
            }
            passes.push((f, *a, *b));
        }
        let (f0, a0, _) = passes[0];
        let (fl, _, bl) = *passes.last().unwrap();
        if s.partner(f0, a0).is_some() {
            return Err(Error::InvalidArc("the arc must start on a boundary edge".into()));
        }
        if s.partner(fl, bl).is_some() {
            return Err(Error::InvalidArc("the arc must end on a boundary edge".into()));
        }
        for (x, y) in passes.iter().tuple_windows() {
            if s.partner(x.0, x.2) != Some((y.0, y.1)) {
                return Err(Error::InvalidArc(format!(
                    "slot {} of `{}` is not glued to slot {} of `{}`",
                    x.2,
                    s.face_names()[x.0],
                    y.1,
                    s.face_names()[y.0]
                )));
            }
        }
        Ok(ResolvedArc {
            passes,
            start_state: fwd.start_state,
            end_state: fwd.end_state,
        })
    }
}

/// A validated forward arc with face indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolvedArc {
    pub passes: Vec<(usize, u8, u8)>,
    pub start_state: usize,
    pub end_state: usize,
}

impl ResolvedArc {
    pub fn start_slot(&self) -> SlotRef {
        (self.passes[0].0, self.passes[0].1)
    }

    pub fn end_slot(&self) -> SlotRef {
        let (f, _, b) = *self.passes.last().unwrap();
        (f, b)
    }
}

/// The corner arc traced by one pass with the given entry and exit states.
pub fn pass_arc(n: i64, a: u8, b: u8, s_in: usize, s_out: usize) -> Result<StatedCornerArc> {
    if b == next_slot(a) {
        StatedCornerArc::new(n, b, Orientation::Ccw, s_in, s_out)
    } else if b == prev_slot(a) {
        StatedCornerArc::new(n, a, Orientation::Cw, s_out, s_in)
    } else {
        Err(Error::InvalidArc(format!("entry and exit slot are both {a}")))
    }
}

type Terms = BTreeMap<Vec<i64>, LaurentScalar>;

/// Fold one tensor term (an exponent per visited face) into an exponent over
/// the small vertices, requiring agreement wherever copies are glued.
fn fold(s: &TriangulatedSurface, sv: &SmallVertices, faces: &[usize], exps: &[&Vec<i64>]) -> Result<Vec<i64>> {
    let pts = triangle_points(sv.n());
    let mut vals: Vec<Option<i64>> = vec![None; sv.len()];
    let mut set = |v: usize, x: i64, what: &str| -> Result<()> {
        match vals[v] {
            Some(y) if y != x => Err(Error::Internal(format!(
                "matching condition fails at {} ({what}): {y} vs {x}",
                sv.ids()[v]
            ))),
            _ => {
                vals[v] = Some(x);
                Ok(())
            }
        }
    };
    for (&f, k) in faces.iter().zip(exps) {
        for (p, &x) in pts.iter().zip(k.iter()) {
            set(
                sv.class_of(f, p).expect("every face point has a class"),
                x,
                "crossed edge",
            )?;
        }
    }
    let visited: HashSet<usize> = faces.iter().copied().collect();
    for f in (0..s.num_faces()).filter(|f| !visited.contains(f)) {
        for p in &pts {
            set(sv.class_of(f, p).unwrap(), 0, "untouched face")?;
        }
    }
    Ok(vals.into_iter().map(|v| v.unwrap_or(0)).collect())
}

/// The state sum over the edges crossed by `passes`, folded to exponents over
/// `sv`.
fn state_sum(
    s: &TriangulatedSurface,
    sv: &SmallVertices,
    passes: &[(usize, u8, u8)],
    start: usize,
    end: usize,
    exec: Exec,
) -> Result<Terms> {
    let n = sv.n();
    let inner = passes.len() - 1;
    let assignments: Vec<Vec<usize>> = (0..inner).map(|_| 1..=n as usize).multi_cartesian_product().collect();
    let assignments = if inner == 0 { vec![vec![]] } else { assignments };
    let faces: Vec<usize> = passes.iter().map(|p| p.0).collect();
    let partial = par::map(exec, &assignments, |states| -> Result<Terms> {
        let mut per_face = Vec::with_capacity(passes.len());
        for (t, &(_, a, b)) in passes.iter().enumerate() {
            let s_in = if t == 0 { start } else { states[t - 1] };
            let s_out = if t == inner { end } else { states[t] };
            let tr = trace_corner(&pass_arc(n, a, b, s_in, s_out)?);
            if tr.is_zero() {
                return Ok(Terms::new());
            }
            per_face.push(tr.terms().map(|(k, c)| (k.clone(), c.clone())).collect::<Vec<_>>());
        }
        let mut out = Terms::new();
        for combo in per_face.iter().map(|v| v.iter()).multi_cartesian_product() {
            let exps: Vec<&Vec<i64>> = combo.iter().map(|(k, _)| k).collect();
            let k = fold(s, sv, &faces, &exps)?;
            let c = combo.iter().fold(LaurentScalar::one(), |acc, (_, c)| &acc * c);
            add_term(&mut out, k, c);
        }
        Ok(out)
    });
    let mut out = Terms::new();
    for p in partial {
        for (k, c) in p? {
            add_term(&mut out, k, c);
        }
    }
    Ok(out)
}

fn add_term(t: &mut Terms, k: Vec<i64>, c: LaurentScalar) {
    let e = t.entry(k).or_insert_with(LaurentScalar::zero);
    *e = &*e + &c;
}

/// The reduced (`extended = false`) or extended X-trace of a simple arc.
pub fn trace_arc(ctx: &SurfaceContext, arc: &SimpleArcSpec, extended: bool) -> Result<TorusElement> {
    trace_arc_with(ctx, arc, extended, Exec::default())
}

pub fn trace_arc_with(ctx: &SurfaceContext, arc: &SimpleArcSpec, extended: bool, exec: Exec) -> Result<TorusElement> {
    let r = arc.resolve(&ctx.surface, ctx.n)?;
    if !extended {
        let terms = state_sum(
            &ctx.surface,
            &ctx.matrices.reduced.vertices,
            &r.passes,
            r.start_state,
            r.end_state,
            exec,
        )?;
        return Ok(TorusElement::from_terms_unchecked(ctx.reduced_torus(), terms));
    }
    // ι pushes each endpoint across its attached triangle, from e_1 to e_2.
    let t_start = ctx.attached[&r.start_slot()];
    let t_end = ctx.attached[&r.end_slot()];
    let mut passes = vec![(t_start, 2, 1)];
    passes.extend(r.passes.iter().copied());
    passes.push((t_end, 1, 2));
    let sets = &ctx.matrices.sets;
    let terms = state_sum(
        ctx.extended_surface(),
        &sets.all,
        &passes,
        r.start_state,
        r.end_state,
        exec,
    )?;
    let in_x: HashSet<usize> = sets.x_set.iter().copied().collect();
    let mut out = Vec::with_capacity(terms.len());
    for (k, c) in terms {
        if let Some(v) = (0..k.len()).find(|v| !in_x.contains(v) && k[*v] != 0) {
            return Err(Error::Internal(format!(
                "extended trace has exponent {} at {}",
                k[v],
                sets.all.ids()[v]
            )));
        }
        out.push((sets.x_set.iter().map(|&v| k[v]).collect(), c));
    }
    Ok(TorusElement::from_terms_unchecked(ctx.extended_torus(), out))
}

/// `pr: T(Q_λ; B_λ) → reduced torus`: `x^k ↦ x^{ι*k}` for `k ∈ B̄_λ`, 0 for
/// `k ∈ B_λ \ B̄_λ`.
pub fn projection_pr(ctx: &SurfaceContext, e: &TorusElement) -> Result<TorusElement> {
    if **e.presentation() != **ctx.extended_torus() {
        return Err(Error::PresentationMismatch);
    }
    let n = ctx.n;
    let sets = &ctx.matrices.sets;
    let all = &sets.all;
    let monoid = AttachMonoid::new(n);
    let pts = triangle_points(n);
    let mut full_pos = vec![None; all.len()];
    for (i, &v) in sets.x_set.iter().enumerate() {
        full_pos[v] = Some(i);
    }
    let value = |k: &[i64], v: usize| full_pos[v].map_or(0, |i| k[i]);

    // ι*: a reduced vertex on the attaching edge of T at (n-j, j, 0) reads
    // T's (0, j, n-j); every other reduced vertex reads itself.
    let reduced_ids = ctx.matrices.reduced.ids();
    let mut source = Vec::with_capacity(reduced_ids.len());
    for id in reduced_ids {
        let v = all.position(id)?;
        let mut src = v;
        for &(f, p) in all.members(v) {
            if ctx.extended_surface().is_attached(f) && p[2] == 0 {
                src = all.class_of(f, &[0, p[1], n - p[1]]).expect("e_2 point");
            }
        }
        source.push(src);
    }

    let mut attached: Vec<usize> = ctx.attached.values().copied().collect();
    attached.sort_unstable();
    let mut out = Vec::new();
    for (k, c) in e.terms() {
        let mut in_bar = true;
        for &t in &attached {
            let pb: Vec<i64> = pts.iter().map(|p| value(k, all.class_of(t, p).unwrap())).collect();
            if !monoid.in_b(&pb) {
                return Err(Error::OutsideMonoid(format!(
                    "restriction to `{}` is {pb:?}",
                    ctx.extended_surface().face_names()[t]
                )));
            }
            in_bar &= monoid.in_b_bar(&pb);
        }
        if in_bar {
            out.push((source.iter().map(|&v| value(k, v)).collect::<Vec<_>>(), c.clone()));
        }
    }
    let mut terms = Terms::new();
    for (k, c) in out {
        add_term(&mut terms, k, c);
    }
    Ok(TorusElement::from_terms_unchecked(ctx.reduced_torus(), terms))
}

/// The A-trace: `ψ⁻¹` of the X-trace.
pub fn trace_a(ctx: &SurfaceContext, arc: &SimpleArcSpec, extended: bool) -> Result<TorusElement> {
    let x = trace_arc(ctx, arc, extended)?;
    if extended {
        ctx.extended.inverse(&x)
    } else {
        ctx.reduced.inverse(&x)
    }
}

/// `n⟨d_e(α), ϖ_i⟩` for the endpoints of an arc on one boundary edge:
/// `(outgoing, state)` pairs, outgoing contributing `w_s̄` and incoming `-w_s`.
pub fn boundary_degree_expected(n: i64, i: usize, endpoints: &[(bool, usize)]) -> i64 {
    let size = n as usize;
    let d = endpoints.iter().fold(WeightVector::zero(size), |acc, &(out, s)| {
        if out {
            acc.add(&WeightVector::w(size, size + 1 - s))
        } else {
            acc.add(&WeightVector::w(size, s).neg())
        }
    });
    let r = weight_pairing(&d, &WeightVector::fundamental(size, i)) * n;
    assert!(r.is_integer());
    r.to_integer()
}

/// The boundary small vertices of `s` with their position `i` along the
/// edge: the `i`-th has `v_a`-coordinate `i` and `v_{a+1}`-coordinate `n - i`.
pub fn boundary_vertices(s: &TriangulatedSurface, sv: &SmallVertices) -> Vec<(SlotRef, usize, usize)> {
    let n = sv.n();
    let mut out = Vec::new();
    for (f, a) in s.boundary_slots() {
        let (x, y) = (a as usize - 1, next_slot(a) as usize - 1);
        for i in 1..n {
            let mut p = [0; 3];
            p[x] = i;
            p[y] = n - i;
            out.push(((f, a), i as usize, sv.class_of(f, &p).unwrap()));
        }
    }
    out
}

/// Degree checks of a trace at every boundary vertex: `(id, expected, got)`
/// for each mismatch.
pub fn boundary_homogeneity(
    ctx: &SurfaceContext,
    arc: &SimpleArcSpec,
    e: &TorusElement,
    extended: bool,
) -> Result<Vec<(String, i64, Option<i64>)>> {
    use crate::qtorus::Degree;
    let r = arc.resolve(&ctx.surface, ctx.n)?;
    let (surface, sv, start, end) = if extended {
        let (ts, te) = (ctx.attached[&r.start_slot()], ctx.attached[&r.end_slot()]);
        (ctx.extended_surface(), &ctx.matrices.sets.all, (ts, 2), (te, 2))
    } else {
        (
            &ctx.surface,
            &ctx.matrices.reduced.vertices,
            r.start_slot(),
            r.end_slot(),
        )
    };
    let mut bad = Vec::new();
    for (slot, i, v) in boundary_vertices(surface, sv) {
        let mut ends = Vec::new();
        if slot == start {
            ends.push((false, r.start_state));
        }
        if slot == end {
            ends.push((true, r.end_state));
        }
        let want = boundary_degree_expected(ctx.n, i, &ends);
        let id = &sv.ids()[v];
        // attached j = 0 vertices are not coordinates of the extended torus
        if e.presentation().position(id).is_err() {
            continue;
        }
        let got = match e.degree_in(id)? {
            Degree::Zero => continue,
            Degree::Homogeneous(d) => Some(d),
            Degree::Inhomogeneous => None,
        };
        if got != Some(want) {
            bad.push((id.clone(), want, got));
        }
    }
    Ok(bad)
}

/// The cutting homomorphism along an interior edge: `x_v ↦ [x_{v'} x_{v''}]_Weyl`
/// on the reduced tori, with `v'`, `v''` the two copies of a vertex on the edge.
#[derive(Clone, Debug)]
pub struct CutMap {
    pub map: MonomialMap,
    pub cut_surface: TriangulatedSurface,
    /// Groups of target indices cut from the same source vertex.
    pub copies: Vec<Vec<usize>>,
}

impl CutMap {
    pub fn new(s: &TriangulatedSurface, n: i64, edge: SlotRef) -> Result<Self> {
        let other = s
            .partner(edge.0, edge.1)
            .ok_or_else(|| Error::Precondition("the cut edge must be interior".into()))?;
        let names = s.face_names();
        let gluings: Vec<_> = s
            .gluings()
            .into_iter()
            .filter(|&(x, y)| !(x == edge && y == other || x == other && y == edge))
            .map(|((f, a), (g, b))| ((names[f].clone(), a), (names[g].clone(), b)))
            .collect();
        let cut = TriangulatedSurface::new(names.to_vec(), &gluings)?;
        let sv = SmallVertices::new(s, n)?;
        let cv = SmallVertices::new(&cut, n)?;
        let source = TorusPresentation::new(sv.ids().to_vec(), reduced_q(s, &sv))?;
        let target = TorusPresentation::new(cv.ids().to_vec(), reduced_q(&cut, &cv))?;
        let mut h = IMat::zeros(sv.len(), cv.len());
        let mut groups: Vec<Vec<usize>> = vec![Vec::new(); sv.len()];
        for w in 0..cv.len() {
            let (f, p) = cv.rep(w);
            let v = sv.class_of(f, &p).unwrap();
            h[(v, w)] = 1;
            groups[v].push(w);
        }
        Ok(Self {
            map: MonomialMap::new(&source, &target, h)?,
            cut_surface: cut,
            copies: groups.into_iter().filter(|g| g.len() > 1).collect(),
        })
    }

    pub fn source(&self) -> &Arc<TorusPresentation> {
        self.map.source()
    }

    pub fn target(&self) -> &Arc<TorusPresentation> {
        self.map.target()
    }

    pub fn apply(&self, e: &TorusElement) -> Result<TorusElement> {
        self.map.apply(e)
    }

    /// Whether `k` on the cut surface has matching exponents on every pair of
    /// copies, i.e. is the image of a monomial.
    pub fn in_image(&self, k: &[i64]) -> bool {
        self.copies.iter().all(|g| g.iter().all(|&w| k[w] == k[g[0]]))
    }
}

/// Every simple arc with one pass per face, in the order of their pass lists,
/// with all endpoint states. Used as a test corpus.
pub fn arc_corpus(s: &TriangulatedSurface, n: i64) -> Vec<SimpleArcSpec> {
    let names = s.face_names();
    let mut routes: Vec<Vec<(usize, u8, u8)>> = Vec::new();
    fn extend(s: &TriangulatedSurface, route: &mut Vec<(usize, u8, u8)>, out: &mut Vec<Vec<(usize, u8, u8)>>) {
        let (f, a, _) = *route.last().unwrap();
        for b in [next_slot(a), prev_slot(a)] {
            route.last_mut().unwrap().2 = b;
            match s.partner(f, b) {
                None => out.push(route.clone()),
                Some((g, c)) if !route.iter().any(|r| r.0 == g) => {
                    route.push((g, c, 0));
                    extend(s, route, out);
                    route.pop();
                }
                Some(_) => {}
            }
        }
        route.last_mut().unwrap().2 = 0;
    }
    for (f, a) in s.boundary_slots() {
        let mut route = vec![(f, a, 0)];
        extend(s, &mut route, &mut routes);
    }
    let mut out = Vec::new();
    for r in routes {
        for i in 1..=n as usize {
            for j in 1..=n as usize {
                out.push(SimpleArcSpec {
                    passes: r.iter().map(|&(f, a, b)| (names[f].clone(), a, b)).collect(),
                    start_state: i,
                    end_state: j,
                    orientation: Direction::Fwd,
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(passes: &[(&str, u8, u8)], s: usize, e: usize) -> SimpleArcSpec {
        SimpleArcSpec {
            passes: passes.iter().map(|(f, a, b)| (f.to_string(), *a, *b)).collect(),
            start_state: s,
            end_state: e,
            orientation: Direction::Fwd,
        }
    }

    #[test]
    fn json_round_trip_and_reverse() {
        let v = serde_json::json!({"passes":[["f0",1,3],["f1",1,2]],"start_state":2,"end_state":1,"orientation":"rev"});
        let a = SimpleArcSpec::from_json(&v).unwrap();
        assert_eq!(SimpleArcSpec::from_json(&a.to_json()).unwrap(), a);
        let f = a.forward();
        assert_eq!(f, arc(&[("f1", 2, 1), ("f0", 3, 1)], 1, 2));
    }

    #[test]
    fn validation() {
        let q = TriangulatedSurface::polygon(4);
        assert!(arc(&[("f0", 1, 3), ("f1", 1, 2)], 1, 1).resolve(&q, 2).is_ok());
        let bad = [
            arc(&[("f0", 1, 1)], 1, 1),
            arc(&[("f0", 1, 2), ("f1", 1, 2)], 1, 1),
            arc(&[("f0", 3, 1)], 1, 1),
            arc(&[("f0", 1, 3), ("f1", 1, 2)], 3, 1),
            arc(&[("g", 1, 3)], 1, 1),
            arc(&[], 1, 1),
        ];
        for a in bad {
            assert!(matches!(a.resolve(&q, 2), Err(Error::InvalidArc(_))), "{a:?}");
        }
    }

    #[test]
    fn single_pass_is_corner_trace() {
        let n = 3;
        let ctx = SurfaceContext::new(&TriangulatedSurface::triangle(), n).unwrap();
        for (a, b) in [(1u8, 2u8), (2, 3), (3, 1), (2, 1), (3, 2), (1, 3)] {
            for i in 1..=3 {
                for j in 1..=3 {
                    let t = trace_arc(&ctx, &arc(&[("f0", a, b)], i, j), false).unwrap();
                    let c = trace_corner(&pass_arc(n, a, b, i, j).unwrap());
                    let want: Vec<_> = c.terms().map(|(k, c)| (k.clone(), c.clone())).collect();
                    let got: Vec<_> = t.terms().map(|(k, c)| (k.clone(), c.clone())).collect();
                    assert_eq!(got, want);
                }
            }
        }
    }

    #[test]
    fn boundary_degree_closed_form() {
        for n in 2..=4i64 {
            for i in 1..n as usize {
                for s in 1..=n as usize {
                    let sbar = n as usize + 1 - s;
                    let out = n * i64::from(sbar <= i) - i as i64;
                    let inc = -(n * i64::from(s <= i) - i as i64);
                    assert_eq!(boundary_degree_expected(n, i, &[(true, s)]), out);
                    assert_eq!(boundary_degree_expected(n, i, &[(false, s)]), inc);
                }
            }
        }
    }

    #[test]
    fn cut_map_splits_edge_vertices() {
        let s = TriangulatedSurface::polygon(4);
        let n = 3;
        let cut = CutMap::new(&s, n, (0, 3)).unwrap();
        assert_eq!(cut.copies.len(), (n - 1) as usize);
        let src = cut.source().clone();
        for id in src.ids() {
            let img = cut.apply(&TorusElement::generator(&src, id).unwrap()).unwrap();
            let (k, c) = img.as_monomial().unwrap();
            assert!(c.is_one());
            assert!(cut.in_image(k));
            let v = src.position(id).unwrap();
            let copies = cut.map.matrix().row(v).iter().sum::<i64>();
            assert_eq!(k.iter().sum::<i64>(), copies);
            assert!(
                copies == 1
                    || cut
                        .copies
                        .iter()
                        .any(|g| g.iter().all(|&w| cut.map.matrix()[(v, w)] == 1))
            );
        }
        assert!(CutMap::new(&s, n, (0, 1)).is_err());
    }

    fn surfaces() -> Vec<TriangulatedSurface> {
        vec![TriangulatedSurface::triangle(), TriangulatedSurface::polygon(4)]
    }

    #[test]
    fn corpus_shapes() {
        // triangle: 6 routes; quadrilateral: 4 single-face routes + 8 crossing ones
        assert_eq!(arc_corpus(&TriangulatedSurface::triangle(), 2).len(), 6 * 4);
        let q = arc_corpus(&TriangulatedSurface::polygon(4), 2);
        assert_eq!(q.len(), 12 * 4);
        assert!(q.iter().all(|a| a.resolve(&TriangulatedSurface::polygon(4), 2).is_ok()));
    }

    #[test]
    fn lifting_square_commutes() {
        for n in 2..=3 {
            for s in surfaces() {
                let ctx = SurfaceContext::new(&s, n).unwrap();
                for a in arc_corpus(&s, n) {
                    let red = trace_arc(&ctx, &a, false).unwrap();
                    let ext = trace_arc(&ctx, &a, true).unwrap();
                    assert_eq!(projection_pr(&ctx, &ext).unwrap(), red, "n={n} {a:?}");
                }
            }
        }
    }

    #[test]
    fn traces_are_homogeneous_on_the_boundary() {
        for n in 2..=3 {
            for s in surfaces() {
                let ctx = SurfaceContext::new(&s, n).unwrap();
                for a in arc_corpus(&s, n) {
                    for ext in [false, true] {
                        let t = trace_arc(&ctx, &a, ext).unwrap();
                        let bad = boundary_homogeneity(&ctx, &a, &t, ext).unwrap();
                        assert!(bad.is_empty(), "n={n} ext={ext} {a:?}: {bad:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn a_traces_round_trip() {
        let s = TriangulatedSurface::polygon(4);
        let ctx = SurfaceContext::new(&s, 3).unwrap();
        for a in arc_corpus(&s, 3).iter().step_by(5) {
            for ext in [false, true] {
                let x = trace_arc(&ctx, a, ext).unwrap();
                let tr = trace_a(&ctx, a, ext).unwrap();
                let psi = if ext { &ctx.extended } else { &ctx.reduced };
                assert_eq!(psi.apply(&tr).unwrap(), x);
            }
        }
    }

    #[test]
    fn bad_endpoint_states_vanish() {
        let s = TriangulatedSurface::polygon(4);
        let ctx = SurfaceContext::new(&s, 3).unwrap();
        // the last pass (f1, 1, 2) is C(v_2)_{s, end}; with a single-state
        // route through f0 forced to be bad, everything vanishes
        let a = arc(&[("f0", 2, 3), ("f1", 1, 2)], 1, 3);
        assert!(trace_arc(&ctx, &a, false).unwrap().is_zero());
    }

    #[test]
    fn pr_of_one_and_of_b_minus_b_bar() {
        let s = TriangulatedSurface::triangle();
        let n = 2;
        let ctx = SurfaceContext::new(&s, n).unwrap();
        let one = TorusElement::one(ctx.extended_torus());
        assert_eq!(
            projection_pr(&ctx, &one).unwrap(),
            TorusElement::one(ctx.reduced_torus())
        );
        // -b_{ijk} with k > 0 in one attached triangle: in B but not in B̄.
        let t = ctx.attached[&(0, 1)];
        let all = &ctx.matrices.sets.all;
        let x_ids = ctx.matrices.x_ids();
        let mut k = vec![0; x_ids.len()];
        let v = all.class_of(t, &[0, 1, 1]).unwrap();
        k[x_ids.iter().position(|x| *x == all.ids()[v]).unwrap()] = -n;
        let e = TorusElement::monomial(ctx.extended_torus(), k.clone()).unwrap();
        assert!(projection_pr(&ctx, &e).unwrap().is_zero());
        k.iter_mut().for_each(|x| *x = -*x);
        let e = TorusElement::monomial(ctx.extended_torus(), k).unwrap();
        assert!(matches!(projection_pr(&ctx, &e), Err(Error::OutsideMonoid(_))));
    }

    #[test]
    fn traces_are_balanced_and_lift_on_larger_surfaces() {
        for s in [TriangulatedSurface::polygon(5), TriangulatedSurface::annulus()] {
            let ctx = SurfaceContext::new(&s, 2).unwrap();
            for a in arc_corpus(&s, 2) {
                let red = trace_arc(&ctx, &a, false).unwrap();
                let ext = trace_arc(&ctx, &a, true).unwrap();
                assert!(red.terms().all(|(k, _)| ctx.reduced.lattice.contains(k)));
                assert!(ext.terms().all(|(k, _)| ctx.extended.lattice.contains(k)));
                assert_eq!(projection_pr(&ctx, &ext).unwrap(), red);
            }
        }
    }

    #[test]
    fn sequential_and_parallel_state_sums_agree() {
        let s = TriangulatedSurface::polygon(5);
        let ctx = SurfaceContext::new(&s, 3).unwrap();
        for a in arc_corpus(&s, 3).iter().step_by(7) {
            let x = trace_arc_with(&ctx, a, true, Exec::Sequential).unwrap();
            let y = trace_arc_with(&ctx, a, true, Exec::Parallel).unwrap();
            assert_eq!(x, y);
        }
    }
}
