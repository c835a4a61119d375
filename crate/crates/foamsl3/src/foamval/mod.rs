//! Abstract pre-foams: movie words, closing up, evaluation and the pairing
//! used to read off matrix entries.

mod builder;
mod eval;

use thiserror::Error;

use crate::coeff::{Potential, Ring};
use crate::web::{ReductionPath, ReductionTree, Web};

pub use crate::linalg::Matrix;
pub use builder::{Dots, FoamBuilder, Role, Track};
pub use eval::{coproduct_of_one, Evaluator, MixedRadix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FoamError {
    #[error("irreducible configuration: {0}")]
    Irreducible(String),
    #[error("boundary mismatch: {0}")]
    Boundary(String),
    #[error("foam is not closed")]
    NotClosed,
    #[error("Gram matrix is singular over the coefficient ring")]
    SingularGram,
}

/// A connected regular region of a closed pre-foam.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    pub chi: i64,
    pub dots: u32,
    /// Open dot sites lying on this facet.
    pub sites: Vec<usize>,
    /// Number of boundary circles, one per singular-circle slot.
    pub boundary: usize,
}

impl Facet {
    pub fn genus(&self) -> i64 {
        (2 - self.boundary as i64 - self.chi) / 2
    }
}

/// Abstract closed pre-foam. `seams[c]` lists the facets on singular circle
/// `c` in their oriented cyclic order. Open sites are dot parameters: site
/// `s` with label `l` adds `sites[s][l]` dots to the facet holding it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedFoam {
    pub facets: Vec<Facet>,
    pub seams: Vec<[usize; 3]>,
    pub sites: Vec<Vec<u32>>,
}

impl ClosedFoam {
    pub fn check(&self) -> Result<(), FoamError> {
        for (i, f) in self.facets.iter().enumerate() {
            let twice = 2 - f.boundary as i64 - f.chi;
            if twice < 0 || twice % 2 != 0 {
                return Err(FoamError::Irreducible(format!(
                    "facet {i} has chi {} with {} boundary circles",
                    f.chi, f.boundary
                )));
            }
        }
        Ok(())
    }

    /// Number of open sites' label combinations.
    pub fn width(&self) -> usize {
        self.sites.iter().map(|s| s.len()).product()
    }

    /// Disjoint union; sites of `o` come after those of `self`.
    pub fn disjoint_union(&self, o: &ClosedFoam) -> ClosedFoam {
        let (nf, ns) = (self.facets.len(), self.sites.len());
        let mut facets = self.facets.clone();
        facets.extend(o.facets.iter().map(|f| Facet {
            sites: f.sites.iter().map(|s| s + ns).collect(),
            ..f.clone()
        }));
        let mut seams = self.seams.clone();
        seams.extend(o.seams.iter().map(|t| t.map(|f| f + nf)));
        let mut sites = self.sites.clone();
        sites.extend(o.sites.iter().cloned());
        ClosedFoam {
            facets,
            seams,
            sites,
        }
    }
}

/// An elementary movie step. Vertex and edge ids refer to the slice the step
/// acts on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Cup {
        edge: usize,
        dots: u32,
    },
    Cap {
        edge: usize,
        dots: u32,
    },
    Dot {
        edge: usize,
        dots: u32,
    },
    Saddle {
        e: usize,
        f: usize,
    },
    /// Seam arc birth: new sink `t` and source `s` joined by `disk`.
    Zip {
        t: usize,
        s: usize,
        disk: usize,
        left: usize,
        right: usize,
        tails: [usize; 2],
    },
    Unzip {
        t: usize,
        s: usize,
        disk: usize,
    },
    /// Half-theta creation on `edge`.
    DigonCup {
        edge: usize,
        t: usize,
        s: usize,
        tail: usize,
        sides: [usize; 2],
    },
    /// Half-theta annihilation; `dots` go on `disks[0]`.
    DigonCap {
        s: usize,
        t: usize,
        disks: [usize; 2],
        dots: u32,
    },
    /// Half of a square removal (saddle then two digon caps), one branch.
    SquareHalf {
        v: [usize; 4],
        f: [usize; 4],
        branch: usize,
    },
    Rename {
        old: usize,
        new: usize,
    },
}

/// A foam given as a movie between two closed webs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoamWord {
    pub domain: Web,
    pub steps: Vec<Step>,
}

impl FoamWord {
    pub fn identity(w: &Web) -> Self {
        FoamWord {
            domain: w.clone(),
            steps: vec![],
        }
    }

    pub fn new(domain: Web, steps: Vec<Step>) -> Result<Self, FoamError> {
        let f = FoamWord { domain, steps };
        f.codomain()?;
        Ok(f)
    }

    pub fn codomain(&self) -> Result<Web, FoamError> {
        let mut b = FoamBuilder::new();
        let (_, mut t) = b.split_at(&self.domain);
        self.play(&mut b, &mut t)?;
        Ok(t.web)
    }

    pub fn compose(&self, g: &FoamWord) -> Result<FoamWord, FoamError> {
        if self.codomain()? != g.domain {
            return Err(FoamError::Boundary("codomain and domain differ".into()));
        }
        let mut steps = self.steps.clone();
        steps.extend(g.steps.iter().cloned());
        Ok(FoamWord {
            domain: self.domain.clone(),
            steps,
        })
    }

    /// Play the word on a track of `b`.
    pub fn play(&self, b: &mut FoamBuilder, t: &mut Track) -> Result<(), FoamError> {
        if t.web != self.domain {
            return Err(FoamError::Boundary("track is not at the domain web".into()));
        }
        for st in &self.steps {
            play_step(b, t, st)?;
        }
        Ok(())
    }

    pub fn close_up(&self) -> Result<ClosedFoam, FoamError> {
        if !self.domain.is_empty() {
            return Err(FoamError::NotClosed);
        }
        let mut b = FoamBuilder::new();
        let mut t = b.empty_track();
        self.play(&mut b, &mut t)?;
        b.finish(&[&t])
    }
}

fn play_step(b: &mut FoamBuilder, t: &mut Track, st: &Step) -> Result<(), FoamError> {
    let need = |t: &Track, e: usize| {
        if t.web.edges.contains_key(&e) {
            Ok(())
        } else {
            Err(FoamError::Boundary(format!("no edge {e}")))
        }
    };
    let need_v = |t: &Track, v: usize| {
        if t.web.vertices.contains_key(&v) {
            Ok(())
        } else {
            Err(FoamError::Boundary(format!("no vertex {v}")))
        }
    };
    match *st {
        Step::Cup { edge, dots } => {
            b.cup(t, edge, Dots::Fixed(dots))?;
        }
        Step::Cap { edge, dots } => {
            b.cap(t, edge, Dots::Fixed(dots))?;
        }
        Step::Dot { edge, dots } => {
            need(t, edge)?;
            b.dot(t, edge, Dots::Fixed(dots));
        }
        Step::Saddle { e, f } => {
            need(t, e)?;
            need(t, f)?;
            if t.web.edges[&e].is_loop() || t.web.edges[&f].is_loop() || e == f {
                return Err(FoamError::Boundary("saddle needs two distinct arcs".into()));
            }
            b.saddle(t, e, f);
        }
        Step::Zip {
            t: tt,
            s,
            disk,
            left,
            right,
            tails,
        } => {
            need(t, left)?;
            need(t, right)?;
            if left == right || t.web.vertices.contains_key(&tt) || t.web.vertices.contains_key(&s)
            {
                return Err(FoamError::Boundary("bad zip".into()));
            }
            b.zip(t, tt, s, disk, left, right, tails);
        }
        Step::Unzip { t: tt, s, disk } => {
            need_v(t, tt)?;
            need_v(t, s)?;
            let ok = t
                .web
                .edges
                .get(&disk)
                .is_some_and(|e| e.src == Some(s) && e.dst == Some(tt));
            if !ok {
                return Err(FoamError::Boundary(format!(
                    "edge {disk} does not join {s} to {tt}"
                )));
            }
            b.unzip(t, tt, s, disk);
        }
        Step::DigonCup {
            edge,
            t: tt,
            s,
            tail,
            sides,
        } => {
            b.digon_birth(t, edge, tt, s, tail, sides)?;
        }
        Step::DigonCap {
            s,
            t: tt,
            disks,
            dots,
        } => {
            b.digon_death(t, s, tt, disks, Dots::Fixed(dots))?;
        }
        Step::SquareHalf { v, f, branch } => {
            use crate::web::{square_steps, SquareStep};
            for e in f {
                need(t, e)?;
            }
            for sq in square_steps(v, f, branch) {
                match sq {
                    SquareStep::Saddle(e, g) => b.saddle(t, e, g),
                    SquareStep::Digon { s, t: tt, disks } => {
                        b.digon_death(t, s, tt, disks, Dots::Fixed(0))?;
                    }
                }
            }
        }
        Step::Rename { old, new } => {
            need(t, old)?;
            b.rename(t, old, new);
        }
    }
    Ok(())
}

pub fn evaluate_closed<R: Ring>(foam: &ClosedFoam, pot: &Potential<R>) -> R {
    let mut ev = Evaluator::new(pot.clone());
    let v = ev.evaluate(foam);
    assert_eq!(v.len(), 1, "foam has open sites");
    v[0].clone()
}

/// `⟨f, g⟩` for `f: ∅ → W`, `g: W → ∅`.
pub fn pair<R: Ring>(f: &FoamWord, g: &FoamWord, pot: &Potential<R>) -> Result<R, FoamError> {
    Ok(evaluate_closed(&f.compose(g)?.close_up()?, pot))
}

/// Closed foam `c_j ∘ mid ∘ b_i`, cut at the domain `w` of `mid`: the lower
/// side plays `lower` as basis, the upper side plays `mid` and then `upper`
/// as cobasis of the codomain. Sites: lower labels, then upper labels.
pub fn pairing_foam(
    w: &Web,
    lower: &ReductionPath,
    mid: &FoamWord,
    upper: &ReductionPath,
) -> Result<ClosedFoam, FoamError> {
    let mut b = FoamBuilder::new();
    let (mut lo, mut up) = b.split_at(w);
    b.play_path(&mut lo, lower, Role::Basis)?;
    mid.play(&mut b, &mut up)?;
    b.play_path(&mut up, upper, Role::Cobasis)?;
    b.finish(&[&lo, &up])
}

/// Offsets of each path's block in the flattened basis of a tree.
pub fn block_offsets(tree: &ReductionTree) -> Vec<usize> {
    let mut out = vec![0];
    for p in &tree.paths {
        out.push(out.last().unwrap() + p.rank());
    }
    out
}

/// Matrix of `⟨c_j ∘ mid ∘ b_i⟩`, rows over the basis of `lower` (a tree of
/// `mid`'s domain), columns over the cobasis of `upper`.
pub fn pairing_matrix<R: Ring>(
    ev: &mut Evaluator<R>,
    lower: &ReductionTree,
    mid: &FoamWord,
    upper: &ReductionTree,
) -> Result<Matrix<R>, FoamError> {
    let (ol, ou) = (block_offsets(lower), block_offsets(upper));
    let mut m = Matrix::zero(*ol.last().unwrap(), *ou.last().unwrap());
    for (i, pi) in lower.paths.iter().enumerate() {
        for (j, pj) in upper.paths.iter().enumerate() {
            let foam = pairing_foam(&lower.root, pi, mid, pj)?;
            let vals = ev.evaluate(&foam);
            let w = pj.rank();
            for (k, v) in vals.into_iter().enumerate() {
                m.set(ol[i] + k / w, ou[j] + k % w, v);
            }
        }
    }
    Ok(m)
}

/// Gram matrix `G[i][j] = ⟨b_i, c_j⟩` of a tree.
pub fn gram_matrix<R: Ring>(
    ev: &mut Evaluator<R>,
    tree: &ReductionTree,
) -> Result<Matrix<R>, FoamError> {
    pairing_matrix(ev, tree, &FoamWord::identity(&tree.root), tree)
}

/// Matrix `X` of `mid` in the trees' bases: `mid(b_i) = Σ_k X[k][i] b′_k`.
pub fn morphism_matrix<R: Ring>(
    ev: &mut Evaluator<R>,
    lower: &ReductionTree,
    mid: &FoamWord,
    upper: &ReductionTree,
    upper_gram: &Matrix<R>,
) -> Result<Matrix<R>, FoamError> {
    let p = pairing_matrix(ev, lower, mid, upper)?;
    // P[i][j] = Σ_k X[k][i] G′[k][j], so G′ᵀ X = Pᵀ
    upper_gram
        .transpose()
        .solve(&p.transpose())
        .ok_or(FoamError::SingularGram)
}

/// Coefficients of `f: ∅ → W` in the basis of `tree` (a tree of `W`).
pub fn expand_in_basis<R: Ring>(
    f: &FoamWord,
    tree: &ReductionTree,
    pot: &Potential<R>,
) -> Result<Vec<R>, FoamError> {
    if f.codomain()? != tree.root {
        return Err(FoamError::Boundary(
            "foam does not end at the tree's web".into(),
        ));
    }
    let mut ev = Evaluator::new(pot.clone());
    let g = gram_matrix(&mut ev, tree)?;
    let ou = block_offsets(tree);
    let mut v = Matrix::zero(*ou.last().unwrap(), 1);
    for (j, pj) in tree.paths.iter().enumerate() {
        let mut b = FoamBuilder::new();
        let mut t = b.empty_track();
        f.play(&mut b, &mut t)?;
        b.play_path(&mut t, pj, Role::Cobasis)?;
        let foam = b.finish(&[&t])?;
        for (k, x) in ev.evaluate(&foam).into_iter().enumerate() {
            v.set(ou[j] + k, 0, x);
        }
    }
    // Σ_i c_i G[i][j] = ⟨f, c_j⟩
    Ok(g.transpose().solve(&v).ok_or(FoamError::SingularGram)?.data)
}
