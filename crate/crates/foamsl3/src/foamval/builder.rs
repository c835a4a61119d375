use std::collections::BTreeMap;

use crate::web::{square_steps, Reducible, ReductionPath, SquareStep, VertexKind, Web};

use super::{ClosedFoam, Facet, FoamError};

/// Dots placed by a movie step: a fixed number, or an open site whose label
/// `l` puts `table[l]` dots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Dots {
    Fixed(u32),
    Site(Vec<u32>),
}

/// Which side of a pairing a reduction path is read as.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    /// Creation foams `∅ → W`: circle label `k` is `x^k`, digon label `l` is `l` dots.
    Basis,
    /// Removal foams `W → ∅` dual to the basis: `x^{2−k}` and `1 − l` dots.
    Cobasis,
}

/// A web slice moving through a movie, with the facet attached to each edge
/// and the seam arc through each vertex.
#[derive(Clone, Debug)]
pub struct Track {
    pub web: Web,
    edge_sheet: BTreeMap<usize, usize>,
    vert_arc: BTreeMap<usize, usize>,
}

/// Accumulates the abstract pre-foam swept out by one or two tracks.
///
/// Euler characteristics are collected step by step, as the change in the
/// part of each facet already swept: a new circle or membrane adds a disk
/// (+1), a saddle or a seam death glues along an arc (−1 per joined pair).
#[derive(Clone, Debug, Default)]
pub struct FoamBuilder {
    parent: Vec<usize>,
    chi: Vec<i64>,
    dots: Vec<u32>,
    sheet_sites: Vec<Vec<usize>>,
    arc_parent: Vec<usize>,
    triples: Vec<(usize, [usize; 3])>,
    sites: Vec<Vec<u32>>,
}

fn find(p: &mut [usize], mut x: usize) -> usize {
    while p[x] != x {
        p[x] = p[p[x]];
        x = p[x];
    }
    x
}

impl FoamBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    fn new_sheet(&mut self, chi: i64) -> usize {
        self.parent.push(self.parent.len());
        self.chi.push(chi);
        self.dots.push(0);
        self.sheet_sites.push(vec![]);
        self.parent.len() - 1
    }

    fn new_arc(&mut self) -> usize {
        self.arc_parent.push(self.arc_parent.len());
        self.arc_parent.len() - 1
    }

    fn root(&mut self, s: usize) -> usize {
        find(&mut self.parent, s)
    }

    fn union(&mut self, a: usize, b: usize) -> usize {
        let (a, b) = (self.root(a), self.root(b));
        if a == b {
            return a;
        }
        self.parent[b] = a;
        self.chi[a] += self.chi[b];
        self.dots[a] += self.dots[b];
        let moved = std::mem::take(&mut self.sheet_sites[b]);
        self.sheet_sites[a].extend(moved);
        a
    }

    fn add_chi(&mut self, s: usize, d: i64) {
        let r = self.root(s);
        self.chi[r] += d;
    }

    fn put_dots(&mut self, s: usize, d: Dots) -> Option<usize> {
        let r = self.root(s);
        match d {
            Dots::Fixed(n) => {
                self.dots[r] += n;
                None
            }
            Dots::Site(t) => {
                self.sites.push(t);
                let id = self.sites.len() - 1;
                self.sheet_sites[r].push(id);
                Some(id)
            }
        }
    }

    pub fn site_count(&self) -> usize {
        self.sites.len()
    }

    fn record(&mut self, t: &Track, v: usize) {
        let vx = &t.web.vertices[&v];
        let s = vx.rot.map(|e| t.edge_sheet[&e]);
        // oriented order: counterclockwise at sources, clockwise at sinks
        let tri = match vx.kind {
            VertexKind::Source => s,
            VertexKind::Sink => [s[0], s[2], s[1]],
        };
        self.triples.push((t.vert_arc[&v], tri));
    }

    /// Start from the empty web.
    pub fn empty_track(&mut self) -> Track {
        Track {
            web: Web::default(),
            edge_sheet: BTreeMap::new(),
            vert_arc: BTreeMap::new(),
        }
    }

    /// Cut the foam along `w`: two tracks sharing its facets and seams, one
    /// for each side.
    pub fn split_at(&mut self, w: &Web) -> (Track, Track) {
        let mut t = self.empty_track();
        t.web = w.clone();
        for (&e, ed) in &w.edges {
            let s = self.new_sheet(if ed.is_loop() { 0 } else { 1 });
            t.edge_sheet.insert(e, s);
        }
        for &v in w.vertices.keys() {
            let a = self.new_arc();
            t.vert_arc.insert(v, a);
        }
        for &v in w.vertices.keys() {
            self.record(&t, v);
        }
        (t.clone(), t)
    }

    pub fn dot(&mut self, t: &Track, e: usize, d: Dots) -> Option<usize> {
        let s = t.edge_sheet[&e];
        self.put_dots(s, d)
    }

    pub fn cup(&mut self, t: &mut Track, e: usize, d: Dots) -> Result<Option<usize>, FoamError> {
        if t.web.edges.contains_key(&e) {
            return Err(FoamError::Boundary(format!("edge {e} already exists")));
        }
        t.web.edges.insert(
            e,
            crate::web::Edge {
                src: None,
                dst: None,
                thick: false,
            },
        );
        let s = self.new_sheet(1);
        t.edge_sheet.insert(e, s);
        Ok(self.put_dots(s, d))
    }

    pub fn cap(&mut self, t: &mut Track, e: usize, d: Dots) -> Result<Option<usize>, FoamError> {
        if !t.web.edges.get(&e).is_some_and(|x| x.is_loop()) {
            return Err(FoamError::Boundary(format!("edge {e} is not a circle")));
        }
        let s = t.edge_sheet.remove(&e).unwrap();
        t.web.remove_loop(e);
        self.add_chi(s, 1);
        Ok(self.put_dots(s, d))
    }

    fn after_join(&mut self, t: &mut Track, j: crate::web::Join) {
        let a = t.edge_sheet[&j.kept];
        let m = match j.removed {
            Some(d) => {
                let sd = t.edge_sheet.remove(&d).unwrap();
                self.union(a, sd)
            }
            None => self.root(a),
        };
        self.chi[m] -= 1;
        t.edge_sheet.insert(j.kept, m);
    }

    fn seam_death(&mut self, t: &mut Track, s: usize, tt: usize) {
        self.record(t, s);
        self.record(t, tt);
        let (a, b) = (
            t.vert_arc.remove(&s).unwrap(),
            t.vert_arc.remove(&tt).unwrap(),
        );
        let (a, b) = (find(&mut self.arc_parent, a), find(&mut self.arc_parent, b));
        self.arc_parent[b] = a;
    }

    pub fn digon_death(
        &mut self,
        t: &mut Track,
        s: usize,
        tt: usize,
        disks: [usize; 2],
        d: Dots,
    ) -> Result<Option<usize>, FoamError> {
        for e in disks {
            let ok = t
                .web
                .edges
                .get(&e)
                .is_some_and(|x| x.src == Some(s) && x.dst == Some(tt));
            if !ok {
                return Err(FoamError::Boundary(format!("edge {e} is not a digon side")));
            }
        }
        let site = self.dot(t, disks[0], d);
        self.seam_death(t, s, tt);
        let j = t.web.digon_death(s, tt, disks);
        for e in disks {
            t.edge_sheet.remove(&e);
        }
        self.after_join(t, j);
        Ok(site)
    }

    /// Split edge `e` by a new digon: `e` ends at the new sink `tt`, `tail`
    /// leaves the new source `s`, and `sides` run `s → tt`.
    pub fn digon_birth(
        &mut self,
        t: &mut Track,
        e: usize,
        tt: usize,
        s: usize,
        tail: usize,
        sides: [usize; 2],
    ) -> Result<(), FoamError> {
        use crate::web::{Edge, Vertex};
        let Some(old) = t.web.edges.get(&e).cloned() else {
            return Err(FoamError::Boundary(format!("no edge {e}")));
        };
        let sheet = t.edge_sheet[&e];
        let w = &mut t.web;
        let keep = if old.is_loop() {
            // the circle is cut open; the tail closes it up through the digon
            w.edges.remove(&e);
            t.edge_sheet.remove(&e);
            w.edges.insert(
                tail,
                Edge {
                    src: Some(s),
                    dst: Some(tt),
                    thick: old.thick,
                },
            );
            tail
        } else {
            let x = old.dst.unwrap();
            w.edges.insert(
                e,
                Edge {
                    src: old.src,
                    dst: Some(tt),
                    thick: old.thick,
                },
            );
            w.edges.insert(
                tail,
                Edge {
                    src: Some(s),
                    dst: Some(x),
                    thick: old.thick,
                },
            );
            let i = w.vertices[&x].rot.iter().position(|&y| y == e).unwrap();
            w.vertices.get_mut(&x).unwrap().rot[i] = tail;
            e
        };
        for d in sides {
            w.edges.insert(
                d,
                Edge {
                    src: Some(s),
                    dst: Some(tt),
                    thick: !old.thick,
                },
            );
        }
        let (a, out) = if old.is_loop() {
            (keep, keep)
        } else {
            (e, tail)
        };
        w.vertices.insert(
            tt,
            Vertex {
                kind: VertexKind::Sink,
                rot: [a, sides[0], sides[1]],
            },
        );
        w.vertices.insert(
            s,
            Vertex {
                kind: VertexKind::Source,
                rot: [out, sides[1], sides[0]],
            },
        );
        t.edge_sheet.insert(tail, sheet);
        for d in sides {
            let n = self.new_sheet(1);
            t.edge_sheet.insert(d, n);
        }
        let arc = self.new_arc();
        t.vert_arc.insert(tt, arc);
        t.vert_arc.insert(s, arc);
        self.record(t, tt);
        self.record(t, s);
        Ok(())
    }

    pub fn saddle(&mut self, t: &mut Track, e: usize, f: usize) {
        t.web.saddle(e, f);
        let m = self.union(t.edge_sheet[&e], t.edge_sheet[&f]);
        self.chi[m] -= 1;
        t.edge_sheet.insert(e, m);
        t.edge_sheet.insert(f, m);
    }

    pub fn unzip(
        &mut self,
        t: &mut Track,
        tt: usize,
        s: usize,
        disk: usize,
    ) -> [crate::web::Join; 2] {
        self.seam_death(t, s, tt);
        let js = t.web.unzip(tt, s, disk);
        t.edge_sheet.remove(&disk);
        for j in js {
            self.after_join(t, j);
        }
        js
    }

    #[allow(clippy::too_many_arguments)]
    pub fn zip(
        &mut self,
        t: &mut Track,
        tt: usize,
        s: usize,
        disk: usize,
        left: usize,
        right: usize,
        tails: [usize; 2],
    ) {
        let (sl, sr) = (t.edge_sheet[&left], t.edge_sheet[&right]);
        let l_loop = t.web.edges[&left].is_loop();
        let r_loop = t.web.edges[&right].is_loop();
        t.web.zip(tt, s, disk, left, right, tails);
        if l_loop {
            t.edge_sheet.remove(&left);
        }
        if r_loop {
            t.edge_sheet.remove(&right);
        }
        t.edge_sheet.insert(tails[0], sl);
        t.edge_sheet.insert(tails[1], sr);
        let m = self.new_sheet(1);
        t.edge_sheet.insert(disk, m);
        let arc = self.new_arc();
        t.vert_arc.insert(tt, arc);
        t.vert_arc.insert(s, arc);
        self.record(t, tt);
        self.record(t, s);
    }

    pub fn rename(&mut self, t: &mut Track, old: usize, new: usize) {
        if old == new {
            return;
        }
        t.web.rename_edge(old, new);
        let s = t.edge_sheet.remove(&old).unwrap();
        t.edge_sheet.insert(new, s);
    }

    /// Play a reduction path as a removal movie, opening one site per
    /// labelled move. Returns the new site ids in order.
    pub fn play_path(
        &mut self,
        t: &mut Track,
        p: &ReductionPath,
        role: Role,
    ) -> Result<Vec<usize>, FoamError> {
        let mut sites = vec![];
        for (r, branch) in &p.moves {
            match *r {
                Reducible::Circle { edge } => {
                    let table = match role {
                        Role::Basis => vec![0, 1, 2],
                        Role::Cobasis => vec![2, 1, 0],
                    };
                    sites.extend(self.cap(t, edge, Dots::Site(table))?);
                }
                Reducible::Digon { s, t: tt, edges } => {
                    let table = match role {
                        Role::Basis => vec![0, 1],
                        Role::Cobasis => vec![1, 0],
                    };
                    sites.extend(self.digon_death(t, s, tt, edges, Dots::Site(table))?);
                }
                Reducible::Square { v, f } => {
                    for step in square_steps(v, f, *branch) {
                        match step {
                            SquareStep::Saddle(a, b) => self.saddle(t, a, b),
                            SquareStep::Digon { s, t: tt, disks } => {
                                self.digon_death(t, s, tt, disks, Dots::Fixed(0))?;
                            }
                        }
                    }
                }
            }
        }
        Ok(sites)
    }

    /// Close up. Every track must have reached the empty web.
    pub fn finish(mut self, tracks: &[&Track]) -> Result<ClosedFoam, FoamError> {
        if tracks.iter().any(|t| !t.web.is_empty()) {
            return Err(FoamError::NotClosed);
        }
        let n = self.parent.len();
        let mut index = BTreeMap::new();
        let mut facets = vec![];
        for s in 0..n {
            let r = self.root(s);
            if let std::collections::btree_map::Entry::Vacant(v) = index.entry(r) {
                v.insert(facets.len());
                facets.push(Facet {
                    chi: self.chi[r],
                    dots: self.dots[r],
                    sites: self.sheet_sites[r].clone(),
                    boundary: 0,
                });
            }
        }
        let mut seams: BTreeMap<usize, [usize; 3]> = BTreeMap::new();
        let triples = std::mem::take(&mut self.triples);
        for (arc, tri) in triples {
            let a = find(&mut self.arc_parent, arc);
            let tri = tri.map(|s| index[&self.root(s)]);
            match seams.get(&a) {
                None => {
                    seams.insert(a, tri);
                }
                Some(prev) => {
                    let same = (0..3).any(|k| (0..3).all(|i| prev[i] == tri[(i + k) % 3]));
                    if !same {
                        return Err(FoamError::Irreducible(format!(
                            "seam orientation mismatch: {prev:?} vs {tri:?}"
                        )));
                    }
                }
            }
        }
        let seams: Vec<[usize; 3]> = seams.into_values().collect();
        for tri in &seams {
            for &f in tri {
                facets[f].boundary += 1;
            }
        }
        let foam = ClosedFoam {
            facets,
            seams,
            sites: self.sites,
        };
        foam.check()?;
        Ok(foam)
    }
}
