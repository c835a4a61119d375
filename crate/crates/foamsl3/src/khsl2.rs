//! Khovanov homology over a field from the cube of smoothings, with the
//! all-`X` generator of the oriented resolution.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::braid::{BraidWord, LinkDiagram};
use crate::coeff::Field;
use crate::complex::HomologyEntry;
use crate::linalg::Matrix;

/// The circle of every arc in one smoothing.
#[derive(Clone, Debug)]
struct Smoothing {
    circle_of: Vec<usize>,
    circles: usize,
}

/// Crossing `k` is smoothed the oriented way in state `mask`.
fn oriented_at(d: &LinkDiagram, mask: usize, k: usize) -> bool {
    let bit = mask >> k & 1 == 1;
    (d.crossings[k].sign > 0) != bit
}

fn smoothing(d: &LinkDiagram, mask: usize) -> Smoothing {
    let mut parent: Vec<usize> = (0..d.n_arcs).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let mut union = |a: usize, b: usize| {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra.max(rb)] = ra.min(rb);
    };
    for (k, c) in d.crossings.iter().enumerate() {
        let [il, ir, ol, or] = c.arcs;
        if oriented_at(d, mask, k) {
            union(il, ol);
            union(ir, or);
        } else {
            union(il, ir);
            union(ol, or);
        }
    }
    let mut ids = BTreeMap::new();
    let circle_of = (0..d.n_arcs)
        .map(|a| {
            let r = find(&mut parent, a);
            let n = ids.len();
            *ids.entry(r).or_insert(n)
        })
        .collect();
    Smoothing {
        circle_of,
        circles: ids.len(),
    }
}

/// The cube of smoothings of a diagram. Generators of a vertex are bitmasks
/// over its circles, a set bit standing for `X`.
#[derive(Clone, Debug)]
pub struct Sl2Complex {
    pub diagram: LinkDiagram,
    smoothings: Vec<Smoothing>,
}

impl Sl2Complex {
    pub fn new(d: &LinkDiagram) -> Self {
        let n = d.crossings.len();
        let smoothings = (0..1usize << n)
            .into_par_iter()
            .map(|m| smoothing(d, m))
            .collect();
        Sl2Complex {
            diagram: d.clone(),
            smoothings,
        }
    }

    fn n_minus(&self) -> i64 {
        self.diagram.n_minus() as i64
    }

    fn n_plus(&self) -> i64 {
        self.diagram.n_plus() as i64
    }

    fn masks(&self, h: i64) -> Vec<usize> {
        let w = h + self.n_minus();
        (0..self.smoothings.len())
            .filter(|m| m.count_ones() as i64 == w)
            .collect()
    }

    fn offsets(&self, h: i64) -> BTreeMap<usize, usize> {
        let mut off = 0;
        self.masks(h)
            .into_iter()
            .map(|m| {
                let o = off;
                off += 1 << self.smoothings[m].circles;
                (m, o)
            })
            .collect()
    }

    pub fn dim(&self, h: i64) -> usize {
        self.masks(h)
            .iter()
            .map(|&m| 1usize << self.smoothings[m].circles)
            .sum()
    }

    pub fn qdegs(&self, h: i64) -> Vec<i64> {
        let shift = h + self.n_plus() - self.n_minus();
        let mut out = vec![];
        for m in self.masks(h) {
            let c = self.smoothings[m].circles;
            for g in 0..1usize << c {
                out.push(c as i64 - 2 * g.count_ones() as i64 + shift);
            }
        }
        out
    }

    /// `d: C^h → C^{h+1}`, rows indexed by `C^{h+1}`.
    pub fn differential<F: Field>(&self, h: i64) -> Matrix<F> {
        let (src, dst) = (self.offsets(h), self.offsets(h + 1));
        let mut m = Matrix::<F>::zero(self.dim(h + 1), self.dim(h));
        for (&v, &o) in &src {
            let s = &self.smoothings[v];
            for k in (0..self.diagram.crossings.len()).filter(|k| v >> k & 1 == 0) {
                let w = v | 1 << k;
                let t = &self.smoothings[w];
                let sign = if (v & ((1 << k) - 1)).count_ones() % 2 == 0 {
                    F::one()
                } else {
                    F::one().neg()
                };
                // target circle of each source circle
                let mut image = vec![usize::MAX; s.circles];
                for a in 0..self.diagram.n_arcs {
                    image[s.circle_of[a]] = t.circle_of[a];
                }
                for g in 0..1usize << s.circles {
                    for (tg, c) in edge_image(&image, g, s, t, &self.diagram, k) {
                        if c != 0 {
                            let r = dst[&w] + tg;
                            let x = m.get(r, o + g).add(&sign.mul(&F::from_int(c)));
                            m.set(r, o + g, x);
                        }
                    }
                }
            }
        }
        m
    }

    /// Bigraded ranks.
    pub fn homology<F: Field>(&self) -> Vec<HomologyEntry> {
        let lo = -self.n_minus();
        let hi = self.n_plus();
        let ds: Vec<Matrix<F>> = (lo - 1..=hi).map(|h| self.differential(h)).collect();
        let mut out = vec![];
        for h in lo..=hi {
            let qs = self.qdegs(h);
            let (qin, qout) = (self.qdegs(h - 1), self.qdegs(h + 1));
            let din = &ds[(h - lo) as usize];
            let dout = &ds[(h - lo + 1) as usize];
            let mut grades: Vec<i64> = qs.clone();
            grades.sort();
            grades.dedup();
            for q in grades {
                let cols: Vec<usize> = (0..qs.len()).filter(|&i| qs[i] == q).collect();
                let rows_out: Vec<usize> = (0..qout.len()).filter(|&i| qout[i] == q).collect();
                let cols_in: Vec<usize> = (0..qin.len()).filter(|&i| qin[i] == q).collect();
                let z = cols.len() - dout.submatrix(&rows_out, &cols).rank();
                let b = din.submatrix(&cols, &cols_in).rank();
                if z > b {
                    out.push(HomologyEntry {
                        h,
                        q: Some(q),
                        rank: z - b,
                        torsion: vec![],
                    });
                }
            }
        }
        out
    }

    fn oriented_mask(&self) -> usize {
        (0..self.diagram.crossings.len())
            .filter(|&k| self.diagram.crossings[k].sign < 0)
            .map(|k| 1 << k)
            .sum()
    }

    /// The all-`X` generator of the oriented resolution, in `C⁰`.
    pub fn psi_chain<F: Field>(&self) -> Vec<F> {
        let m = self.oriented_mask();
        let off = self.offsets(0)[&m];
        let mut v = vec![F::zero(); self.dim(0)];
        v[off + (1 << self.smoothings[m].circles) - 1] = F::one();
        v
    }
}

/// Merge or split on the circles touched by crossing `k`; identity labels
/// elsewhere.
fn edge_image(
    image: &[usize],
    g: usize,
    s: &Smoothing,
    t: &Smoothing,
    d: &LinkDiagram,
    k: usize,
) -> Vec<(usize, i64)> {
    let arcs = d.crossings[k].arcs;
    let mut base = 0usize;
    for (c, &tc) in image.iter().enumerate() {
        if g >> c & 1 == 1 {
            base |= 1 << tc;
        }
    }
    let touched = |sm: &Smoothing| {
        let mut v: Vec<usize> = arcs.iter().map(|&a| sm.circle_of[a]).collect();
        v.sort();
        v.dedup();
        v
    };
    let (src, tgt) = (touched(s), touched(t));
    if t.circles < s.circles {
        // merge: `1·1 = 1`, `1·X = X`, `X·X = 0`
        debug_assert_eq!((src.len(), tgt.len()), (2, 1));
        match (g >> src[0] & 1) + (g >> src[1] & 1) {
            2 => vec![],
            _ => vec![(base, 1)],
        }
    } else {
        // split: `1 ↦ 1⊗X + X⊗1`, `X ↦ X⊗X`
        debug_assert_eq!((src.len(), tgt.len()), (1, 2));
        let rest = base & !(1 << tgt[0]) & !(1 << tgt[1]);
        if g >> src[0] & 1 == 1 {
            vec![(rest | 1 << tgt[0] | 1 << tgt[1], 1)]
        } else {
            vec![(rest | 1 << tgt[0], 1), (rest | 1 << tgt[1], 1)]
        }
    }
}

pub fn kh_homology<F: Field>(d: &LinkDiagram) -> Vec<HomologyEntry> {
    Sl2Complex::new(d).homology::<F>()
}

/// Whether the class of `ψ̃` on the closure of `b` vanishes.
pub fn psi_vanishes<F: Field>(b: &BraidWord) -> bool {
    let c = Sl2Complex::new(&b.closure_diagram());
    c.differential::<F>(-1).spans(&c.psi_chain::<F>())
}
