//! The resolution cube of a braid closure: vertex modules from reduction
//! trees, edge maps from zip/unzip foams, homology and filtration levels.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::braid::LinkDiagram;
use crate::coeff::{Euclid, Field, Potential, Ring};
use crate::foamval::{gram_matrix, pairing_matrix, FoamError, FoamWord, MixedRadix, Step};
use crate::linalg::Matrix;
use crate::web::{
    edge_below, kuperberg_bracket, loop_edge, reduce_web, resolve, sink_vertex, source_vertex,
    tail_edge, thick_edge, Laurent, ReductionTree, Web, WebError,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error(transparent)]
    Foam(#[from] FoamError),
    #[error(transparent)]
    Web(#[from] WebError),
    #[error("differential entry breaks the grading: {0}")]
    Degree(String),
    #[error("closure is not a knot")]
    NotAKnot,
    #[error("potential needs three distinct roots in the coefficient field")]
    RootsNotDistinct,
}

#[derive(Clone, Debug)]
pub struct CubeVertex {
    pub bits: Vec<u8>,
    pub web: Web,
    pub tree: ReductionTree,
    /// Quantum degree of each generator.
    pub qdegs: Vec<i64>,
    pub h: i64,
}

impl CubeVertex {
    pub fn rank(&self) -> usize {
        self.qdegs.len()
    }
}

/// Edge map between adjacent vertices; `matrix` already carries the sign.
#[derive(Clone, Debug)]
pub struct CubeEdge<R> {
    pub from: usize,
    pub to: usize,
    pub crossing: usize,
    pub matrix: Matrix<R>,
}

#[derive(Clone, Debug)]
pub struct CubeComplex<R> {
    pub diagram: LinkDiagram,
    pub pot: Potential<R>,
    pub n_plus: usize,
    pub n_minus: usize,
    /// Indexed by the resolution bits read as a binary number, bit `k` for crossing `k`.
    pub vertices: Vec<CubeVertex>,
    pub edges: Vec<CubeEdge<R>>,
    /// Whether the potential is homogeneous (graded rather than filtered).
    pub graded: bool,
}

fn bits_of(mask: usize, n: usize) -> Vec<u8> {
    (0..n).map(|k| ((mask >> k) & 1) as u8).collect()
}

/// The elementary foam for flipping crossing `k` from 0 to 1, with edge ids
/// renamed to the canonical ids of the target resolution.
pub fn edge_foam(d: &LinkDiagram, bits: &[u8], k: usize) -> Result<FoamWord, ComplexError> {
    let w = resolve(d, bits)?;
    let c = &d.crossings[k];
    let n = d.crossings.len();
    let (t, s, disk) = (sink_vertex(k), source_vertex(k), thick_edge(k));
    let steps = if c.sign > 0 {
        let mut sim = w.clone();
        let joins = sim.unzip(t, s, disk);
        let mut steps = vec![Step::Unzip { t, s, disk }];
        for (i, j) in joins.iter().enumerate() {
            if j.became_loop {
                steps.push(Step::Rename {
                    old: j.kept,
                    new: loop_edge(n, c.pos + i),
                });
            }
        }
        steps
    } else {
        let left = edge_below(d, bits, k, c.pos);
        let right = edge_below(d, bits, k, c.pos + 1);
        vec![Step::Zip {
            t,
            s,
            disk,
            left,
            right,
            tails: [tail_edge(k, 0), tail_edge(k, 1)],
        }]
    };
    let f = FoamWord::new(w, steps)?;
    let mut to = bits.to_vec();
    to[k] = 1;
    if f.codomain()? != resolve(d, &to)? {
        return Err(FoamError::Boundary(format!(
            "edge foam at crossing {k} misses the target web"
        ))
        .into());
    }
    Ok(f)
}

fn vertex_qdegs(tree: &ReductionTree, shift: i64) -> Vec<i64> {
    let mut out = vec![];
    for p in &tree.paths {
        let degs = p.site_degrees();
        let dims: Vec<usize> = degs.iter().map(|d| d.len()).collect();
        for combo in MixedRadix::new(&dims) {
            out.push(shift + combo.iter().zip(&degs).map(|(&l, d)| d[l]).sum::<i64>());
        }
    }
    out
}

pub fn build_complex<R: Ring>(
    d: &LinkDiagram,
    pot: &Potential<R>,
) -> Result<CubeComplex<R>, ComplexError> {
    let n = d.crossings.len();
    let (np, nm) = (d.n_plus(), d.n_minus());
    let verts: Vec<(CubeVertex, Matrix<R>)> = (0..1usize << n)
        .into_par_iter()
        .map(|mask| -> Result<_, ComplexError> {
            let bits = bits_of(mask, n);
            let web = resolve(d, &bits)?;
            let tree = reduce_web(&web)?;
            let weight = bits.iter().filter(|&&b| b == 1).count() as i64;
            let qdegs = vertex_qdegs(&tree, -weight + 3 * np as i64 - 2 * nm as i64);
            let mut ev = crate::foamval::Evaluator::new(pot.clone());
            let g = gram_matrix(&mut ev, &tree)?;
            let ginv = g
                .transpose()
                .solve(&Matrix::identity(g.rows))
                .ok_or(FoamError::SingularGram)?;
            Ok((
                CubeVertex {
                    bits,
                    web,
                    tree,
                    qdegs,
                    h: weight - np as i64,
                },
                ginv,
            ))
        })
        .collect::<Result<_, _>>()?;
    let (vertices, ginvs): (Vec<CubeVertex>, Vec<Matrix<R>>) = verts.into_iter().unzip();
    let pairs: Vec<(usize, usize)> = (0..1usize << n)
        .flat_map(|m| {
            (0..n)
                .filter(move |&k| m >> k & 1 == 0)
                .map(move |k| (m, k))
        })
        .collect();
    let edges: Vec<CubeEdge<R>> = pairs
        .into_par_iter()
        .map(|(from, k)| -> Result<_, ComplexError> {
            let to = from | 1 << k;
            let f = edge_foam(d, &vertices[from].bits, k)?;
            let mut ev = crate::foamval::Evaluator::new(pot.clone());
            let p = pairing_matrix(&mut ev, &vertices[from].tree, &f, &vertices[to].tree)?;
            // P[i][j] = Σ_k X[k][i] G′[k][j]  ⇒  X = (G′ᵀ)⁻¹ Pᵀ
            let mut x = ginvs[to].mul(&p.transpose());
            if (from & ((1 << k) - 1)).count_ones() % 2 == 1 {
                x = x.scale(&R::from_int(-1));
            }
            Ok(CubeEdge {
                from,
                to,
                crossing: k,
                matrix: x,
            })
        })
        .collect::<Result<_, _>>()?;
    let c = CubeComplex {
        diagram: d.clone(),
        graded: pot.is_homogeneous(),
        pot: pot.clone(),
        n_plus: np,
        n_minus: nm,
        vertices,
        edges,
    };
    c.check_degrees()?;
    Ok(c)
}

impl<R: Ring> CubeComplex<R> {
    pub fn h_min(&self) -> i64 {
        -(self.n_plus as i64)
    }

    pub fn h_max(&self) -> i64 {
        self.n_minus as i64
    }

    /// Vertices in homological degree `h`, with the offset of each block.
    fn blocks(&self, h: i64) -> Vec<(usize, usize)> {
        let mut off = 0;
        let mut out = vec![];
        for (i, v) in self.vertices.iter().enumerate() {
            if v.h == h {
                out.push((i, off));
                off += v.rank();
            }
        }
        out
    }

    pub fn dim(&self, h: i64) -> usize {
        self.vertices
            .iter()
            .filter(|v| v.h == h)
            .map(|v| v.rank())
            .sum()
    }

    pub fn qdegs(&self, h: i64) -> Vec<i64> {
        self.vertices
            .iter()
            .filter(|v| v.h == h)
            .flat_map(|v| v.qdegs.iter().copied())
            .collect()
    }

    /// Offset of vertex `v`'s block within its homological degree.
    pub fn offset(&self, v: usize) -> usize {
        let h = self.vertices[v].h;
        self.blocks(h).into_iter().find(|b| b.0 == v).unwrap().1
    }

    /// `d: C^h → C^{h+1}`; rows index `C^{h+1}`.
    pub fn differential(&self, h: i64) -> Matrix<R> {
        let src = self.blocks(h);
        let dst = self.blocks(h + 1);
        let mut m = Matrix::zero(self.dim(h + 1), self.dim(h));
        for e in &self.edges {
            let Some(&(_, co)) = src.iter().find(|b| b.0 == e.from) else {
                continue;
            };
            let ro = dst.iter().find(|b| b.0 == e.to).unwrap().1;
            for i in 0..e.matrix.rows {
                for j in 0..e.matrix.cols {
                    let x = e.matrix.get(i, j);
                    if !x.is_zero() {
                        m.set(ro + i, co + j, x.clone());
                    }
                }
            }
        }
        m
    }

    pub fn verify_d_squared(&self) -> bool {
        (self.h_min()..self.h_max() - 1).all(|h| {
            self.differential(h + 1)
                .mul(&self.differential(h))
                .is_zero()
        })
    }

    /// Every nonzero entry `c·U^m` from a generator of degree `q` to one of
    /// degree `q′` has `q′ + 2m = q` when graded; when filtered, `q′ ≤ q`
    /// with `q′ ≡ q (mod 2)`.
    fn check_degrees(&self) -> Result<(), ComplexError> {
        for e in &self.edges {
            let (qs, qt) = (&self.vertices[e.from].qdegs, &self.vertices[e.to].qdegs);
            for (i, &qi) in qt.iter().enumerate().take(e.matrix.rows) {
                for (j, &qj) in qs.iter().enumerate().take(e.matrix.cols) {
                    let x = e.matrix.get(i, j);
                    if x.is_zero() {
                        continue;
                    }
                    let ok = if self.graded {
                        x.weight().is_some_and(|m| qi + 2 * m as i64 == qj)
                    } else {
                        qi <= qj && (qj - qi) % 2 == 0
                    };
                    if !ok {
                        return Err(ComplexError::Degree(format!(
                            "edge {}→{}: entry {x} from q={} to q={}",
                            e.from, e.to, qj, qi
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn graded_euler_characteristic(&self) -> Laurent {
        let mut total = Laurent::zero();
        for v in &self.vertices {
            let sign = if v.h % 2 == 0 { 1 } else { -1 };
            for &q in &v.qdegs {
                total = total.add(&Laurent::monomial(q, sign));
            }
        }
        total
    }
}

/// `Σ_v (−1)^{|v|−n₊} q^{−|v|+3n₊−2n₋} ⟨W_v⟩`.
pub fn bracket_euler_characteristic(d: &LinkDiagram) -> Result<Laurent, ComplexError> {
    let n = d.crossings.len();
    let (np, nm) = (d.n_plus() as i64, d.n_minus() as i64);
    let mut total = Laurent::zero();
    for mask in 0..1usize << n {
        let bits = bits_of(mask, n);
        let weight = mask.count_ones() as i64;
        let sign = if (weight - np) % 2 == 0 { 1 } else { -1 };
        let b = kuperberg_bracket(&resolve(d, &bits)?)?;
        total = total.add(&b.shift(-weight + 3 * np - 2 * nm).scale(sign));
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Torsion {
    pub k: u64,
    pub mult: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyEntry {
    pub h: i64,
    pub q: Option<i64>,
    pub rank: usize,
    pub torsion: Vec<Torsion>,
}

pub fn total_rank(hs: &[HomologyEntry]) -> usize {
    hs.iter().map(|e| e.rank).sum()
}

impl<F: Field> CubeComplex<F> {
    /// Ranks of `H^h`, split by quantum degree when graded.
    pub fn homology_over_field(&self) -> Vec<HomologyEntry> {
        let mut out = vec![];
        for h in self.h_min()..=self.h_max() {
            let din = self.differential(h - 1);
            let dout = self.differential(h);
            let qs = self.qdegs(h);
            if self.graded {
                let (qin, qout) = (self.qdegs(h - 1), self.qdegs(h + 1));
                let mut levels: Vec<i64> = qs.clone();
                levels.sort();
                levels.dedup();
                for q in levels {
                    let sel =
                        |v: &[i64]| -> Vec<usize> { (0..v.len()).filter(|&i| v[i] == q).collect() };
                    let (here, before, after) = (sel(&qs), sel(&qin), sel(&qout));
                    let r_out = dout.submatrix(&after, &here).rank();
                    let r_in = din.submatrix(&here, &before).rank();
                    let rank = here.len() - r_out - r_in;
                    if rank > 0 {
                        out.push(HomologyEntry {
                            h,
                            q: Some(q),
                            rank,
                            torsion: vec![],
                        });
                    }
                }
            } else {
                let rank = qs.len() - dout.rank() - din.rank();
                if rank > 0 {
                    out.push(HomologyEntry {
                        h,
                        q: None,
                        rank,
                        torsion: vec![],
                    });
                }
            }
        }
        out
    }

    /// Filtration levels of `H⁰`: `j` appears `dim F_j H − dim F_{j−1} H`
    /// times, where `F_j` is spanned by generators of degree at most `j`.
    pub fn filtration_levels(&self) -> Vec<i64> {
        let d0 = self.differential(0);
        let dm = self.differential(-1);
        let qs = self.qdegs(0);
        let z = Matrix::from_columns(qs.len(), &d0.kernel());
        let rz = z.cols;
        let rb = dm.rank();
        let all_cols_z: Vec<usize> = (0..z.cols).collect();
        let all_cols_b: Vec<usize> = (0..dm.cols).collect();
        let dim_at = |j: i64| -> usize {
            let hi: Vec<usize> = (0..qs.len()).filter(|&i| qs[i] > j).collect();
            let zj = rz - z.submatrix(&hi, &all_cols_z).rank();
            let bj = rb - dm.submatrix(&hi, &all_cols_b).rank();
            zj - bj
        };
        let (Some(&lo), Some(&hi)) = (qs.iter().min(), qs.iter().max()) else {
            return vec![];
        };
        let mut out = vec![];
        let mut prev = 0;
        for j in lo..=hi {
            let cur = dim_at(j);
            for _ in prev..cur {
                out.push(j);
            }
            prev = cur;
        }
        out
    }
}

impl<E: Euclid> CubeComplex<E> {
    /// Free ranks and torsion of `H^h` over a Euclidean domain, by Smith
    /// normal form; torsion `E/(f)` is reported with `k = size(f)`.
    pub fn homology_over_pid(&self) -> Vec<HomologyEntry> {
        let mut out = vec![];
        let mut prev: Option<crate::linalg::Smith<E>> = None;
        for h in self.h_min()..=self.h_max() {
            let s_in = prev
                .take()
                .unwrap_or_else(|| self.differential(h - 1).smith());
            let s_out = self.differential(h).smith();
            let rank = self.dim(h) - s_out.rank() - s_in.rank();
            let mut torsion: Vec<Torsion> = vec![];
            for f in &s_in.diag {
                if f.is_unit() {
                    continue;
                }
                let k = f.size().unwrap_or(0);
                match torsion.iter_mut().find(|t| t.k == k) {
                    Some(t) => t.mult += 1,
                    None => torsion.push(Torsion { k, mult: 1 }),
                }
            }
            torsion.sort_by_key(|t| t.k);
            if rank > 0 || !torsion.is_empty() {
                out.push(HomologyEntry {
                    h,
                    q: None,
                    rank,
                    torsion,
                });
            }
            prev = Some(s_out);
        }
        out
    }
}
