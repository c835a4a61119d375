//! Closed webs as rotation systems, braid-closure resolutions, face reduction
//! and the Kuperberg bracket.
//!
//! Every edge is directed from a source to a sink. Thick edges are stored in
//! that direction as well (reversed from the usual picture); the flag is kept
//! for dumps only.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::braid::LinkDiagram;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WebError {
    #[error("resolution has {got} bits, diagram has {want} crossings")]
    LengthMismatch { got: usize, want: usize },
    #[error("malformed web: {0}")]
    Malformed(String),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum VertexKind {
    Source,
    Sink,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Vertex {
    pub kind: VertexKind,
    /// Incident edges in counterclockwise order.
    pub rot: [usize; 3],
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Edge {
    pub src: Option<usize>,
    pub dst: Option<usize>,
    pub thick: bool,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.src.is_none()
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize)]
pub struct Web {
    pub vertices: BTreeMap<usize, Vertex>,
    pub edges: BTreeMap<usize, Edge>,
}

/// A reducible face, found by face tracing.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Reducible {
    Circle {
        edge: usize,
    },
    /// Digon with source `s`, sink `t` and its two edges (both `s → t`).
    Digon {
        s: usize,
        t: usize,
        edges: [usize; 2],
    },
    /// Square `v₀ v₁ v₂ v₃` (sources at even indices); side `f[i]` joins
    /// `v_i` and `v_{i+1}`: `f₀ = v₀→v₁`, `f₁ = v₂→v₁`, `f₂ = v₂→v₃`, `f₃ = v₀→v₃`.
    Square {
        v: [usize; 4],
        f: [usize; 4],
    },
}

impl Reducible {
    fn rank(&self) -> u8 {
        match self {
            Reducible::Circle { .. } => 0,
            Reducible::Digon { .. } => 1,
            Reducible::Square { .. } => 2,
        }
    }
}

/// Result of joining an edge ending at a dying vertex with one leaving another.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Join {
    pub kept: usize,
    pub removed: Option<usize>,
    pub became_loop: bool,
}

impl Web {
    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn loops(&self) -> Vec<usize> {
        self.edges
            .iter()
            .filter(|(_, e)| e.is_loop())
            .map(|(&i, _)| i)
            .collect()
    }

    fn rot_index(&self, v: usize, e: usize) -> usize {
        self.vertices[&v]
            .rot
            .iter()
            .position(|&x| x == e)
            .expect("edge incident to vertex")
    }

    /// Rotation at `v` starting from `e`.
    pub fn rot_from(&self, v: usize, e: usize) -> [usize; 3] {
        let r = self.vertices[&v].rot;
        let i = self.rot_index(v, e);
        [r[i], r[(i + 1) % 3], r[(i + 2) % 3]]
    }

    fn replace_in_rot(&mut self, v: usize, old: usize, new: usize) {
        let i = self.rot_index(v, old);
        self.vertices.get_mut(&v).unwrap().rot[i] = new;
    }

    pub fn validate(&self) -> Result<(), WebError> {
        let bad = |m: String| Err(WebError::Malformed(m));
        for (&id, e) in &self.edges {
            if e.src.is_none() != e.dst.is_none() {
                return bad(format!("edge {id} has one endpoint"));
            }
            if let (Some(s), Some(t)) = (e.src, e.dst) {
                match (self.vertices.get(&s), self.vertices.get(&t)) {
                    (Some(a), Some(b))
                        if a.kind == VertexKind::Source && b.kind == VertexKind::Sink =>
                    {
                        if !a.rot.contains(&id) || !b.rot.contains(&id) {
                            return bad(format!("edge {id} missing from rotation"));
                        }
                    }
                    _ => return bad(format!("edge {id} is not source to sink")),
                }
            }
        }
        for (&v, vx) in &self.vertices {
            let distinct: BTreeSet<_> = vx.rot.iter().collect();
            if distinct.len() != 3 {
                return bad(format!("vertex {v} repeats an edge"));
            }
            for e in vx.rot {
                let Some(ed) = self.edges.get(&e) else {
                    return bad(format!("vertex {v} references missing edge {e}"));
                };
                let end = if vx.kind == VertexKind::Source {
                    ed.src
                } else {
                    ed.dst
                };
                if end != Some(v) {
                    return bad(format!("edge {e} does not end at {v}"));
                }
            }
        }
        Ok(())
    }

    /// Face boundaries, each a cyclic list of darts `(edge, forward)`,
    /// rotated to start at its smallest dart.
    pub fn faces(&self) -> Vec<Vec<(usize, bool)>> {
        let mut seen = BTreeSet::new();
        let mut out = vec![];
        for (&e, ed) in &self.edges {
            if ed.is_loop() {
                continue;
            }
            for fwd in [true, false] {
                if seen.contains(&(e, fwd)) {
                    continue;
                }
                let mut face = vec![];
                let mut d = (e, fwd);
                while seen.insert(d) {
                    face.push(d);
                    let ed = &self.edges[&d.0];
                    let at = if d.1 { ed.dst } else { ed.src }.unwrap();
                    let next = self.rot_from(at, d.0)[1];
                    // leave a sink backwards, a source forwards
                    d = (next, self.vertices[&at].kind == VertexKind::Source);
                }
                let m = (0..face.len()).min_by_key(|&i| face[i]).unwrap();
                face.rotate_left(m);
                out.push(face);
            }
        }
        out.sort();
        out
    }

    /// All faces on which a circle, digon or square relation applies, in
    /// canonical order: circles, then digons, then squares, each by smallest dart.
    pub fn reducible_faces(&self) -> Vec<Reducible> {
        let mut out: Vec<Reducible> = self
            .loops()
            .into_iter()
            .map(|edge| Reducible::Circle { edge })
            .collect();
        for face in self.faces() {
            let vert = |d: (usize, bool)| {
                let e = &self.edges[&d.0];
                if d.1 { e.src } else { e.dst }.unwrap()
            };
            match face.len() {
                2 => {
                    let fwd = if face[0].1 { face[0] } else { face[1] };
                    let e = &self.edges[&fwd.0];
                    out.push(Reducible::Digon {
                        s: e.src.unwrap(),
                        t: e.dst.unwrap(),
                        edges: [face[0].0, face[1].0],
                    });
                }
                4 => {
                    let mut f = face.clone();
                    if !f[0].1 {
                        f.rotate_left(1);
                    }
                    let v = [vert(f[0]), vert(f[1]), vert(f[2]), vert(f[3])];
                    let distinct: BTreeSet<_> = v.iter().collect();
                    if distinct.len() == 4 {
                        out.push(Reducible::Square {
                            v,
                            f: [f[0].0, f[1].0, f[2].0, f[3].0],
                        });
                    }
                }
                _ => {}
            }
        }
        out.sort_by_key(|r| r.rank());
        out
    }

    /// The canonical reducible face.
    pub fn find_reducible_face(&self) -> Result<Option<Reducible>, WebError> {
        if self.is_empty() {
            return Ok(None);
        }
        self.reducible_faces()
            .into_iter()
            .next()
            .map(Some)
            .ok_or_else(|| WebError::Malformed("no face with at most four sides".into()))
    }

    /// Remove a loop.
    pub fn remove_loop(&mut self, e: usize) {
        let ed = self.edges.remove(&e).expect("loop exists");
        assert!(ed.is_loop());
    }

    /// Join `a` (ending at a vertex about to be deleted) with `d` (leaving
    /// another such vertex). `a` keeps its id.
    fn join(&mut self, a: usize, d: usize) -> Join {
        if a == d {
            let e = self.edges.get_mut(&a).unwrap();
            e.src = None;
            e.dst = None;
            return Join {
                kept: a,
                removed: None,
                became_loop: true,
            };
        }
        let de = self.edges.remove(&d).unwrap();
        let x = de.dst;
        let ae = self.edges.get_mut(&a).unwrap();
        ae.dst = x;
        ae.thick = ae.thick && de.thick;
        if let Some(x) = x {
            self.replace_in_rot(x, d, a);
        }
        Join {
            kept: a,
            removed: Some(d),
            became_loop: false,
        }
    }

    fn delete_vertices(&mut self, vs: &[usize]) {
        for v in vs {
            self.vertices.remove(v);
        }
    }

    /// Remove a digon: joins the outer edge at `t` with the outer edge at `s`.
    pub fn digon_death(&mut self, s: usize, t: usize, disks: [usize; 2]) -> Join {
        let third = |w: &Web, v: usize| {
            *w.vertices[&v]
                .rot
                .iter()
                .find(|e| !disks.contains(e))
                .expect("third edge")
        };
        let (a, d) = (third(self, t), third(self, s));
        for e in disks {
            self.edges.remove(&e);
        }
        let j = self.join(a, d);
        self.delete_vertices(&[s, t]);
        j
    }

    /// Reconnect `e: a → b` and `f: c → d` into `e: a → d`, `f: c → b`.
    pub fn saddle(&mut self, e: usize, f: usize) {
        let b = self.edges[&e].dst.unwrap();
        let d = self.edges[&f].dst.unwrap();
        self.edges.get_mut(&e).unwrap().dst = Some(d);
        self.edges.get_mut(&f).unwrap().dst = Some(b);
        self.replace_in_rot(b, e, f);
        self.replace_in_rot(d, f, e);
    }

    /// Remove the seam arc between sink `t` and source `s` joined by `disk`;
    /// the two remaining pairs of edges are joined. Returns both joins, left
    /// pair first (second edge after `disk` at `t`).
    pub fn unzip(&mut self, t: usize, s: usize, disk: usize) -> [Join; 2] {
        let [_, a, b] = self.rot_from(t, disk);
        let [_, c, d] = self.rot_from(s, disk);
        self.edges.remove(&disk);
        let j1 = self.join(a, d);
        let j2 = self.join(b, c);
        self.delete_vertices(&[s, t]);
        [j1, j2]
    }

    /// Create sink `t` and source `s` joined by `disk`, cutting `left` and
    /// `right` (edges or loops). The cut-off tails get ids `tails`.
    /// Rotation at `t` is `[disk, left, right]`, at `s` `[disk, tails[1], tails[0]]`.
    pub fn zip(
        &mut self,
        t: usize,
        s: usize,
        disk: usize,
        left: usize,
        right: usize,
        tails: [usize; 2],
    ) {
        for (e, tail) in [(left, tails[0]), (right, tails[1])] {
            let old = self.edges.remove(&e).unwrap();
            if old.is_loop() {
                self.edges.insert(
                    tail,
                    Edge {
                        src: Some(s),
                        dst: Some(t),
                        thick: old.thick,
                    },
                );
            } else {
                let x = old.dst.unwrap();
                self.edges.insert(
                    e,
                    Edge {
                        src: old.src,
                        dst: Some(t),
                        thick: old.thick,
                    },
                );
                self.edges.insert(
                    tail,
                    Edge {
                        src: Some(s),
                        dst: Some(x),
                        thick: old.thick,
                    },
                );
                self.replace_in_rot(x, e, tail);
            }
        }
        let (l, r) = (
            self.in_edge_id(left, tails[0]),
            self.in_edge_id(right, tails[1]),
        );
        self.edges.insert(
            disk,
            Edge {
                src: Some(s),
                dst: Some(t),
                thick: true,
            },
        );
        self.vertices.insert(
            t,
            Vertex {
                kind: VertexKind::Sink,
                rot: [disk, l, r],
            },
        );
        self.vertices.insert(
            s,
            Vertex {
                kind: VertexKind::Source,
                rot: [disk, tails[1], tails[0]],
            },
        );
    }

    fn in_edge_id(&self, e: usize, tail: usize) -> usize {
        if self.edges.contains_key(&e) {
            e
        } else {
            tail
        }
    }

    pub fn rename_edge(&mut self, old: usize, new: usize) {
        if old == new {
            return;
        }
        let e = self.edges.remove(&old).unwrap();
        for v in [e.src, e.dst].into_iter().flatten() {
            self.replace_in_rot(v, old, new);
        }
        self.edges.insert(new, e);
    }

    /// Apply a reduction to one branch. For squares, `branch` 0 joins
    /// `v₀v₁` / `v₂v₃` outer edges, branch 1 joins `v₁v₂` / `v₃v₀`.
    pub fn apply_reduction(&mut self, r: &Reducible, branch: usize) {
        match *r {
            Reducible::Circle { edge } => self.remove_loop(edge),
            Reducible::Digon { s, t, edges } => {
                self.digon_death(s, t, edges);
            }
            Reducible::Square { v, f } => {
                for step in square_steps(v, f, branch) {
                    match step {
                        SquareStep::Saddle(e, g) => self.saddle(e, g),
                        SquareStep::Digon { s, t, disks } => {
                            self.digon_death(s, t, disks);
                        }
                    }
                }
            }
        }
    }

    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (id, v) in &self.vertices {
            let k = if v.kind == VertexKind::Source {
                "source"
            } else {
                "sink"
            };
            s += &format!("v{id} {k} [{}]\n", v.rot.map(|e| format!("e{e}")).join(" "));
        }
        for (id, e) in &self.edges {
            let t = if e.thick { "thick" } else { "thin" };
            match (e.src, e.dst) {
                (Some(a), Some(b)) => s += &format!("e{id} v{a} -> v{b} {t}\n"),
                _ => s += &format!("e{id} loop {t}\n"),
            }
        }
        s
    }
}

/// Elementary steps of a square removal.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SquareStep {
    Saddle(usize, usize),
    Digon {
        s: usize,
        t: usize,
        disks: [usize; 2],
    },
}

/// Saddle two opposite sides, then remove the two digons this creates.
pub fn square_steps(v: [usize; 4], f: [usize; 4], branch: usize) -> [SquareStep; 3] {
    if branch == 0 {
        // afterwards f1 = v2→v3, f3 = v0→v1
        [
            SquareStep::Saddle(f[1], f[3]),
            SquareStep::Digon {
                s: v[0],
                t: v[1],
                disks: [f[0], f[3]],
            },
            SquareStep::Digon {
                s: v[2],
                t: v[3],
                disks: [f[1], f[2]],
            },
        ]
    } else {
        // afterwards f0 = v0→v3, f2 = v2→v1
        [
            SquareStep::Saddle(f[0], f[2]),
            SquareStep::Digon {
                s: v[0],
                t: v[3],
                disks: [f[0], f[3]],
            },
            SquareStep::Digon {
                s: v[2],
                t: v[1],
                disks: [f[1], f[2]],
            },
        ]
    }
}

impl fmt::Display for Web {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dump())
    }
}

/// Resolution of a braid closure: `bits[k] = 0` gives the thick-edge web at
/// a positive crossing and the oriented smoothing at a negative one.
#[derive(Clone, Debug)]
pub struct WebResolution {
    pub bits: Vec<u8>,
    pub web: Web,
}

impl WebResolution {
    pub fn weight(&self) -> usize {
        self.bits.iter().map(|&b| b as usize).sum()
    }
}

pub fn is_thick_at(sign: i8, bit: u8) -> bool {
    (sign > 0) == (bit == 0)
}

/// Edge id conventions for resolution webs of an `n`-crossing closure.
pub fn tail_edge(k: usize, side: usize) -> usize {
    4 * k + side
}
pub fn thick_edge(k: usize) -> usize {
    4 * k + 2
}
pub fn loop_edge(n: usize, pos: usize) -> usize {
    4 * n + pos
}
pub fn sink_vertex(k: usize) -> usize {
    2 * k
}
pub fn source_vertex(k: usize) -> usize {
    2 * k + 1
}

/// Edge of a resolution web passing through the location of crossing `k`
/// at `pos`, just below it: the tail leaving the previous thick crossing on
/// that position, or the loop if there is none.
pub fn edge_below(d: &LinkDiagram, bits: &[u8], k: usize, pos: usize) -> usize {
    let n = d.crossings.len();
    for j in 1..=n {
        let c = (k + n - j) % n;
        let cr = &d.crossings[c];
        if (cr.pos == pos || cr.pos + 1 == pos) && is_thick_at(cr.sign, bits[c]) {
            return tail_edge(c, usize::from(cr.pos != pos));
        }
    }
    loop_edge(n, pos)
}

pub fn resolve(d: &LinkDiagram, bits: &[u8]) -> Result<Web, WebError> {
    let n = d.crossings.len();
    if bits.len() != n {
        return Err(WebError::LengthMismatch {
            got: bits.len(),
            want: n,
        });
    }
    let mut w = Web::default();
    let thick: Vec<bool> = d
        .crossings
        .iter()
        .zip(bits)
        .map(|(c, &b)| is_thick_at(c.sign, b))
        .collect();
    for (k, c) in d.crossings.iter().enumerate() {
        if !thick[k] {
            continue;
        }
        let (t, s) = (sink_vertex(k), source_vertex(k));
        let l = edge_below(d, bits, k, c.pos);
        let r = edge_below(d, bits, k, c.pos + 1);
        w.vertices.insert(
            t,
            Vertex {
                kind: VertexKind::Sink,
                rot: [thick_edge(k), l, r],
            },
        );
        w.vertices.insert(
            s,
            Vertex {
                kind: VertexKind::Source,
                rot: [thick_edge(k), tail_edge(k, 1), tail_edge(k, 0)],
            },
        );
        w.edges.insert(
            thick_edge(k),
            Edge {
                src: Some(s),
                dst: Some(t),
                thick: true,
            },
        );
    }
    // tails: from the source at k to the sink of the next thick crossing on that position
    for (k, c) in d.crossings.iter().enumerate() {
        if !thick[k] {
            continue;
        }
        for side in 0..2 {
            let pos = c.pos + side;
            let next = (1..=n)
                .map(|j| (k + j) % n)
                .find(|&j| {
                    let cj = &d.crossings[j];
                    thick[j] && (cj.pos == pos || cj.pos + 1 == pos)
                })
                .unwrap();
            w.edges.insert(
                tail_edge(k, side),
                Edge {
                    src: Some(source_vertex(k)),
                    dst: Some(sink_vertex(next)),
                    thick: false,
                },
            );
        }
    }
    for pos in 0..d.strands {
        let touched = d
            .crossings
            .iter()
            .enumerate()
            .any(|(k, c)| thick[k] && (c.pos == pos || c.pos + 1 == pos));
        if !touched {
            w.edges.insert(
                loop_edge(n, pos),
                Edge {
                    src: None,
                    dst: None,
                    thick: false,
                },
            );
        }
    }
    debug_assert!(w.validate().is_ok(), "{:?}", w.validate());
    Ok(w)
}

/// Bits of the oriented resolution: every crossing smoothed.
pub fn oriented_bits(d: &LinkDiagram) -> Vec<u8> {
    d.crossings.iter().map(|c| u8::from(c.sign > 0)).collect()
}

pub fn oriented_resolution(d: &LinkDiagram) -> WebResolution {
    let bits = oriented_bits(d);
    let web = resolve(d, &bits).expect("bit count matches");
    WebResolution { bits, web }
}

/// One path through the reduction tree: the moves applied in order, with
/// the branch taken at each square. Circle and digon moves carry a free dot
/// label (3 and 2 choices respectively).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ReductionPath {
    pub moves: Vec<(Reducible, usize)>,
}

impl ReductionPath {
    /// Number of free labels at each labelled move.
    pub fn site_dims(&self) -> Vec<usize> {
        self.moves
            .iter()
            .filter_map(|(r, _)| match r {
                Reducible::Circle { .. } => Some(3),
                Reducible::Digon { .. } => Some(2),
                Reducible::Square { .. } => None,
            })
            .collect()
    }

    /// Quantum degree shifts of each label value, per site.
    pub fn site_degrees(&self) -> Vec<Vec<i64>> {
        self.site_dims()
            .into_iter()
            .map(|d| if d == 3 { vec![-2, 0, 2] } else { vec![-1, 1] })
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.site_dims().iter().product()
    }
}

/// All paths of the canonical reduction tree.
#[derive(Clone, Debug)]
pub struct ReductionTree {
    pub root: Web,
    pub paths: Vec<ReductionPath>,
}

impl ReductionTree {
    pub fn graded_rank(&self) -> Laurent {
        let mut total = Laurent::zero();
        for p in &self.paths {
            let mut t = Laurent::one();
            for d in p.site_degrees() {
                t = t.mul(&Laurent::from_terms(d.iter().map(|&k| (k, 1))));
            }
            total = total.add(&t);
        }
        total
    }

    pub fn rank(&self) -> usize {
        self.paths.iter().map(|p| p.rank()).sum()
    }
}

pub fn reduce_web(w: &Web) -> Result<ReductionTree, WebError> {
    let mut paths = vec![];
    reduce_rec(w.clone(), vec![], &mut paths)?;
    Ok(ReductionTree {
        root: w.clone(),
        paths,
    })
}

fn reduce_rec(
    w: Web,
    prefix: Vec<(Reducible, usize)>,
    out: &mut Vec<ReductionPath>,
) -> Result<(), WebError> {
    let Some(r) = w.find_reducible_face()? else {
        out.push(ReductionPath { moves: prefix });
        return Ok(());
    };
    let branches = if matches!(r, Reducible::Square { .. }) {
        2
    } else {
        1
    };
    for b in 0..branches {
        let mut w2 = w.clone();
        w2.apply_reduction(&r, b);
        let mut p = prefix.clone();
        p.push((r.clone(), b));
        reduce_rec(w2, p, out)?;
    }
    Ok(())
}

/// Kuperberg bracket with the canonical face choice.
pub fn kuperberg_bracket(w: &Web) -> Result<Laurent, WebError> {
    kuperberg_bracket_with(w, &mut |_: &[Reducible]| 0)
}

/// Kuperberg bracket where `choose` picks which reducible face to use.
pub fn kuperberg_bracket_with(
    w: &Web,
    choose: &mut dyn FnMut(&[Reducible]) -> usize,
) -> Result<Laurent, WebError> {
    if w.is_empty() {
        return Ok(Laurent::one());
    }
    let faces = w.reducible_faces();
    if faces.is_empty() {
        return Err(WebError::Malformed(
            "no face with at most four sides".into(),
        ));
    }
    let r = &faces[choose(&faces) % faces.len()];
    Ok(match r {
        Reducible::Circle { .. } | Reducible::Digon { .. } => {
            let mut w2 = w.clone();
            w2.apply_reduction(r, 0);
            let f = if matches!(r, Reducible::Circle { .. }) {
                Laurent::qint(3)
            } else {
                Laurent::qint(2)
            };
            f.mul(&kuperberg_bracket_with(&w2, choose)?)
        }
        Reducible::Square { .. } => {
            let mut total = Laurent::zero();
            for b in 0..2 {
                let mut w2 = w.clone();
                w2.apply_reduction(r, b);
                total = total.add(&kuperberg_bracket_with(&w2, choose)?);
            }
            total
        }
    })
}

/// Laurent polynomial in `q` with integer coefficients.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize)]
pub struct Laurent(pub BTreeMap<i64, i64>);

impl Laurent {
    pub fn zero() -> Self {
        Laurent(BTreeMap::new())
    }
    pub fn one() -> Self {
        Laurent::monomial(0, 1)
    }
    pub fn monomial(e: i64, c: i64) -> Self {
        Laurent::from_terms([(e, c)])
    }
    pub fn from_terms(t: impl IntoIterator<Item = (i64, i64)>) -> Self {
        let mut m = BTreeMap::new();
        for (e, c) in t {
            *m.entry(e).or_insert(0) += c;
        }
        m.retain(|_, c| *c != 0);
        Laurent(m)
    }
    /// Quantum integer `[n] = q^{1−n} + q^{3−n} + … + q^{n−1}`.
    pub fn qint(n: i64) -> Self {
        Laurent::from_terms((0..n).map(|i| (1 - n + 2 * i, 1)))
    }
    pub fn add(&self, o: &Self) -> Self {
        Laurent::from_terms(self.0.iter().chain(&o.0).map(|(&e, &c)| (e, c)))
    }
    pub fn scale(&self, c: i64) -> Self {
        Laurent::from_terms(self.0.iter().map(|(&e, &x)| (e, x * c)))
    }
    pub fn shift(&self, k: i64) -> Self {
        Laurent(self.0.iter().map(|(&e, &c)| (e + k, c)).collect())
    }
    pub fn mul(&self, o: &Self) -> Self {
        Laurent::from_terms(
            self.0
                .iter()
                .flat_map(|(&e1, &c1)| o.0.iter().map(move |(&e2, &c2)| (e1 + e2, c1 * c2))),
        )
    }
    /// Value at `q = 1`.
    pub fn at_one(&self) -> i64 {
        self.0.values().sum()
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(&e, &c)| match e {
                0 => format!("{c}"),
                _ if c == 1 => format!("q^{e}"),
                _ if c == -1 => format!("-q^{e}"),
                _ => format!("{c}q^{e}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + ").replace("+ -", "- "))
    }
}
