use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coeff::{theta_value, CircleElem, Potential, Ring, TensorElem};

use super::ClosedFoam;

/// Sparse tensor with labelled indices.
#[derive(Clone, Debug)]
struct STensor<R> {
    labels: Vec<usize>,
    entries: HashMap<Vec<u8>, R>,
}

impl<R: Ring> STensor<R> {
    fn size_hint(&self) -> usize {
        self.entries.len().max(1)
    }

    fn contract(&self, o: &Self) -> Self {
        let shared: Vec<usize> = self
            .labels
            .iter()
            .copied()
            .filter(|l| o.labels.contains(l))
            .collect();
        let pa: Vec<usize> = shared
            .iter()
            .map(|l| self.labels.iter().position(|x| x == l).unwrap())
            .collect();
        let pb: Vec<usize> = shared
            .iter()
            .map(|l| o.labels.iter().position(|x| x == l).unwrap())
            .collect();
        let ra: Vec<usize> = (0..self.labels.len()).filter(|i| !pa.contains(i)).collect();
        let rb: Vec<usize> = (0..o.labels.len()).filter(|i| !pb.contains(i)).collect();
        let mut groups: HashMap<Vec<u8>, Vec<(Vec<u8>, &R)>> = HashMap::new();
        for (k, v) in &o.entries {
            let key: Vec<u8> = pb.iter().map(|&i| k[i]).collect();
            let rest: Vec<u8> = rb.iter().map(|&i| k[i]).collect();
            groups.entry(key).or_default().push((rest, v));
        }
        let mut out: HashMap<Vec<u8>, R> = HashMap::new();
        for (k, v) in &self.entries {
            let key: Vec<u8> = pa.iter().map(|&i| k[i]).collect();
            let Some(g) = groups.get(&key) else { continue };
            let mine: Vec<u8> = ra.iter().map(|&i| k[i]).collect();
            for (rest, w) in g {
                let mut idx = mine.clone();
                idx.extend_from_slice(rest);
                let p = v.mul(w);
                match out.get_mut(&idx) {
                    Some(x) => *x = x.add(&p),
                    None => {
                        out.insert(idx, p);
                    }
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        let mut labels: Vec<usize> = ra.iter().map(|&i| self.labels[i]).collect();
        labels.extend(rb.iter().map(|&i| o.labels[i]));
        STensor {
            labels,
            entries: out,
        }
    }
}

/// Evaluates closed pre-foams for a fixed potential, by cutting every facet
/// off its seams and contracting facet elements against theta values.
///
/// A facet of genus `g` with `d` dots and `b` boundary circles contributes
/// the element `Δ^{(b)}(x^d h^g) ∈ A^{⊗b}`, where `Δ` is the coproduct dual to
/// `ε` and `h = m(Δ(1))` the handle element; a closed facet contributes
/// `ε(x^d h^g)`. A seam with facets `(f₁, f₂, f₃)` in its oriented order
/// contributes `Θ(x^a, x^b, x^c) = θ(a, b, c)`.
pub struct Evaluator<R: Ring> {
    pub pot: Potential<R>,
    theta: HashMap<Vec<u8>, R>,
    delta1: TensorElem<R>,
    handle: CircleElem<R>,
    cache: HashMap<(u32, u32, usize), HashMap<Vec<u8>, R>>,
}

impl<R: Ring> Evaluator<R> {
    pub fn new(pot: Potential<R>) -> Self {
        let mut theta = HashMap::new();
        for i in 0..3u8 {
            for j in 0..3u8 {
                for k in 0..3u8 {
                    let v = theta_value((i as u32, j as u32, k as u32), &pot);
                    if !v.is_zero() {
                        theta.insert(vec![i, j, k], v);
                    }
                }
            }
        }
        let delta1 = coproduct_of_one(&pot);
        let handle = pot.derivative().neg();
        Evaluator {
            pot,
            theta,
            delta1,
            handle,
            cache: HashMap::new(),
        }
    }

    /// `−ω′(x)`.
    pub fn handle(&self) -> &CircleElem<R> {
        &self.handle
    }

    /// `Δ^{(b)}(x^d h^g)`; for `b = 0` the single entry is `ε(x^d h^g)`.
    pub fn facet_element(&mut self, d: u32, g: u32, b: usize) -> &HashMap<Vec<u8>, R> {
        if !self.cache.contains_key(&(d, g, b)) {
            let mut z = self.pot.x_pow(d as usize);
            for _ in 0..g {
                z = z.mul(&self.handle, &self.pot);
            }
            let map: HashMap<Vec<u8>, R> = if b == 0 {
                let e = crate::coeff::counit_eps(&z);
                if e.is_zero() {
                    HashMap::new()
                } else {
                    HashMap::from([(vec![], e)])
                }
            } else {
                let mut t = TensorElem::single(&z);
                for _ in 1..b {
                    t = self.comultiply_last(&t);
                }
                t.terms.into_iter().collect()
            };
            self.cache.insert((d, g, b), map);
        }
        &self.cache[&(d, g, b)]
    }

    fn comultiply_last(&self, t: &TensorElem<R>) -> TensorElem<R> {
        let mut out = TensorElem::zero(t.n + 1);
        for (e, c) in &t.terms {
            let last = e[e.len() - 1] as usize;
            // Δ(x^k) = (x^k ⊗ 1) Δ(1)
            let dk = self.delta1.act(0, &CircleElem::basis(last), &self.pot);
            for (f, c2) in &dk.terms {
                let mut idx = e[..e.len() - 1].to_vec();
                idx.extend_from_slice(f);
                out.add_term(idx, c.mul(c2));
            }
        }
        out
    }

    /// Value of a closed foam as a dense tensor over its open sites
    /// (row-major in site order).
    pub fn evaluate(&mut self, foam: &ClosedFoam) -> Vec<R> {
        self.evaluate_ordered(foam, None)
    }

    /// As [`Evaluator::evaluate`], contracting in a random order drawn from `seed`.
    pub fn evaluate_ordered(&mut self, foam: &ClosedFoam, seed: Option<u64>) -> Vec<R> {
        let nsites = foam.sites.len();
        let mut next_label = nsites;
        let mut tensors: Vec<STensor<R>> = vec![];
        let mut slot_labels: Vec<Vec<usize>> = vec![vec![]; foam.facets.len()];
        for tri in &foam.seams {
            let mut labels = vec![];
            for &f in tri {
                labels.push(next_label);
                slot_labels[f].push(next_label);
                next_label += 1;
            }
            tensors.push(STensor {
                labels,
                entries: self.theta.clone(),
            });
        }
        for (fi, f) in foam.facets.iter().enumerate() {
            let g = f.genus() as u32;
            let dims: Vec<usize> = f.sites.iter().map(|&s| foam.sites[s].len()).collect();
            let mut entries = HashMap::new();
            for combo in MixedRadix::new(&dims) {
                let extra: u32 = combo
                    .iter()
                    .zip(&f.sites)
                    .map(|(&l, &s)| foam.sites[s][l])
                    .sum();
                let elem = self.facet_element(f.dots + extra, g, f.boundary).clone();
                for (k, v) in elem {
                    let mut idx: Vec<u8> = combo.iter().map(|&l| l as u8).collect();
                    idx.extend_from_slice(&k);
                    entries.insert(idx, v);
                }
            }
            let mut labels = f.sites.clone();
            labels.extend_from_slice(&slot_labels[fi]);
            tensors.push(STensor { labels, entries });
        }
        let mut rng = seed.map(ChaCha8Rng::seed_from_u64);
        while tensors.len() > 1 {
            let (i, j) = match rng.as_mut() {
                Some(r) => {
                    let i = r.gen_range(0..tensors.len());
                    let mut j = r.gen_range(0..tensors.len() - 1);
                    if j >= i {
                        j += 1;
                    }
                    (i.min(j), i.max(j))
                }
                None => best_pair(&tensors),
            };
            let b = tensors.swap_remove(j);
            let a = tensors.swap_remove(i);
            tensors.push(a.contract(&b));
        }
        let dims: Vec<usize> = foam.sites.iter().map(|s| s.len()).collect();
        let total: usize = dims.iter().product();
        let mut out = vec![R::zero(); total];
        if let Some(t) = tensors.pop() {
            let perm: Vec<usize> = (0..nsites)
                .map(|s| t.labels.iter().position(|&l| l == s).unwrap())
                .collect();
            for (k, v) in t.entries {
                let mut idx = 0;
                for (s, &p) in perm.iter().enumerate() {
                    idx = idx * dims[s] + k[p] as usize;
                }
                out[idx] = v;
            }
        } else {
            out[0] = R::one();
        }
        out
    }
}

fn best_pair<R: Ring>(ts: &[STensor<R>]) -> (usize, usize) {
    let mut best: Option<(usize, usize, usize, bool)> = None;
    for i in 0..ts.len() {
        for j in i + 1..ts.len() {
            let shares = ts[i].labels.iter().any(|l| ts[j].labels.contains(l));
            let cost = ts[i].size_hint() * ts[j].size_hint();
            let better = match best {
                None => true,
                Some((_, _, c, s)) => (shares && !s) || (shares == s && cost < c),
            };
            if better {
                best = Some((i, j, cost, shares));
            }
        }
    }
    let (i, j, _, _) = best.unwrap();
    (i, j)
}

/// `Δ(1) = −(x²⊗1 + x⊗x + 1⊗x² + a₂(x⊗1 + 1⊗x) + a₁ 1⊗1)`.
pub fn coproduct_of_one<R: Ring>(pot: &Potential<R>) -> TensorElem<R> {
    let mut t = TensorElem::zero(2);
    let m1 = R::from_int(-1);
    for (i, j) in [(2u8, 0u8), (1, 1), (0, 2)] {
        t.add_term(vec![i, j], m1.clone());
    }
    t.add_term(vec![1, 0], pot.a2.neg());
    t.add_term(vec![0, 1], pot.a2.neg());
    t.add_term(vec![0, 0], pot.a1.neg());
    t
}

/// Iterates all label vectors of a mixed-radix system, last digit fastest.
pub struct MixedRadix {
    dims: Vec<usize>,
    cur: Option<Vec<usize>>,
}

impl MixedRadix {
    pub fn new(dims: &[usize]) -> Self {
        let cur = if dims.contains(&0) {
            None
        } else {
            Some(vec![0; dims.len()])
        };
        MixedRadix {
            dims: dims.to_vec(),
            cur,
        }
    }
}

impl Iterator for MixedRadix {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.cur.clone()?;
        let mut c = out.clone();
        let mut i = c.len();
        loop {
            if i == 0 {
                self.cur = None;
                break;
            }
            i -= 1;
            c[i] += 1;
            if c[i] < self.dims[i] {
                self.cur = Some(c);
                break;
            }
            c[i] = 0;
        }
        Some(out)
    }
}
