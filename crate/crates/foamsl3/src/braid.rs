//! Braid words, closure diagrams and transverse Markov moves.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BraidError {
    #[error("cannot parse braid {0:?}: {1}")]
    Parse(String, String),
    #[error("letter {letter} out of range for {strands} strands")]
    Letter { letter: i32, strands: usize },
    #[error("move {0:?} is not applicable")]
    Inapplicable(MarkovMove),
}

/// A word in the Artin generators; letter `k` is `σ_|k|` with the sign of `k`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct BraidWord {
    pub strands: usize,
    pub letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self, BraidError> {
        if strands == 0 {
            return Err(BraidError::Parse(
                String::new(),
                "need at least one strand".into(),
            ));
        }
        for &k in &letters {
            if k == 0 || k.unsigned_abs() as usize >= strands {
                return Err(BraidError::Letter { letter: k, strands });
            }
        }
        Ok(BraidWord { strands, letters })
    }

    pub fn unknot() -> Self {
        BraidWord {
            strands: 1,
            letters: vec![],
        }
    }

    pub fn writhe(&self) -> i64 {
        self.letters.iter().map(|k| k.signum() as i64).sum()
    }

    pub fn n_plus(&self) -> usize {
        self.letters.iter().filter(|k| **k > 0).count()
    }

    pub fn n_minus(&self) -> usize {
        self.letters.iter().filter(|k| **k < 0).count()
    }

    /// `sl = w − b`.
    pub fn self_linking(&self) -> i64 {
        self.writhe() - self.strands as i64
    }

    pub fn mirror(&self) -> Self {
        BraidWord {
            strands: self.strands,
            letters: self.letters.iter().map(|k| -k).collect(),
        }
    }

    /// Image of each strand position under the underlying permutation.
    pub fn permutation(&self) -> Vec<usize> {
        // track where the strand starting at position p ends
        let mut at: Vec<usize> = (0..self.strands).collect();
        for &k in &self.letters {
            let i = k.unsigned_abs() as usize - 1;
            at.swap(i, i + 1);
        }
        let mut perm = vec![0; self.strands];
        for (pos, &start) in at.iter().enumerate() {
            perm[start] = pos;
        }
        perm
    }

    pub fn component_count(&self) -> usize {
        let perm = self.permutation();
        let mut seen = vec![false; self.strands];
        let mut n = 0;
        for s in 0..self.strands {
            if !seen[s] {
                n += 1;
                let mut p = s;
                while !seen[p] {
                    seen[p] = true;
                    p = perm[p];
                }
            }
        }
        n
    }

    pub fn is_knot(&self) -> bool {
        self.component_count() == 1
    }

    pub fn closure_diagram(&self) -> LinkDiagram {
        LinkDiagram::closure(self)
    }

    pub fn apply_move(&self, m: &MarkovMove) -> Result<Self, BraidError> {
        let bad = || BraidError::Inapplicable(m.clone());
        let b = self.strands;
        let w = &self.letters;
        let out = match *m {
            MarkovMove::Conjugation { letter } => {
                if letter == 0 || letter.unsigned_abs() as usize >= b {
                    return Err(bad());
                }
                let mut v = vec![-letter];
                v.extend_from_slice(w);
                v.push(letter);
                BraidWord {
                    strands: b,
                    letters: v,
                }
            }
            MarkovMove::CyclicShift => {
                if w.is_empty() {
                    return Err(bad());
                }
                let mut v = w[1..].to_vec();
                v.push(w[0]);
                BraidWord {
                    strands: b,
                    letters: v,
                }
            }
            MarkovMove::BraidRelation { position: p } => {
                let kind = relation_at(w, p).ok_or_else(bad)?;
                let mut v = w.clone();
                match kind {
                    Relation::Cancel => {
                        v.drain(p..p + 2);
                    }
                    Relation::Commute => v.swap(p, p + 1),
                    Relation::Braid => {
                        let (x, y) = (w[p], w[p + 1]);
                        v[p] = y;
                        v[p + 1] = x;
                        v[p + 2] = y;
                    }
                }
                BraidWord {
                    strands: b,
                    letters: v,
                }
            }
            MarkovMove::InsertPair { position, letter } => {
                if position > w.len() || letter == 0 || letter.unsigned_abs() as usize >= b {
                    return Err(bad());
                }
                let mut v = w.clone();
                v.splice(position..position, [letter, -letter]);
                BraidWord {
                    strands: b,
                    letters: v,
                }
            }
            MarkovMove::PositiveStabilization => {
                let mut v = w.clone();
                v.push(b as i32);
                BraidWord {
                    strands: b + 1,
                    letters: v,
                }
            }
            MarkovMove::PositiveDestabilization => {
                let top = b as i32 - 1;
                let count = w.iter().filter(|k| k.abs() == top).count();
                if b < 2 || w.last() != Some(&top) || count != 1 {
                    return Err(bad());
                }
                BraidWord {
                    strands: b - 1,
                    letters: w[..w.len() - 1].to_vec(),
                }
            }
            MarkovMove::NegativeStabilization => {
                let mut v = w.clone();
                v.push(-(b as i32));
                BraidWord {
                    strands: b + 1,
                    letters: v,
                }
            }
        };
        Ok(out)
    }

    /// Every move from the transverse set that applies to `self`.
    pub fn applicable_moves(&self) -> Vec<MarkovMove> {
        let mut out = Vec::new();
        for i in 1..self.strands as i32 {
            out.push(MarkovMove::Conjugation { letter: i });
            out.push(MarkovMove::Conjugation { letter: -i });
        }
        if !self.letters.is_empty() {
            out.push(MarkovMove::CyclicShift);
        }
        for p in 0..self.letters.len() {
            if relation_at(&self.letters, p).is_some() {
                out.push(MarkovMove::BraidRelation { position: p });
            }
        }
        for p in 0..=self.letters.len() {
            for i in 1..self.strands as i32 {
                out.push(MarkovMove::InsertPair {
                    position: p,
                    letter: i,
                });
                out.push(MarkovMove::InsertPair {
                    position: p,
                    letter: -i,
                });
            }
        }
        out.push(MarkovMove::PositiveStabilization);
        if self
            .apply_move(&MarkovMove::PositiveDestabilization)
            .is_ok()
        {
            out.push(MarkovMove::PositiveDestabilization);
        }
        out
    }
}

enum Relation {
    Cancel,
    Commute,
    Braid,
}

fn relation_at(w: &[i32], p: usize) -> Option<Relation> {
    let (x, y) = (*w.get(p)?, *w.get(p + 1)?);
    if x == -y {
        return Some(Relation::Cancel);
    }
    if (x.abs() - y.abs()).abs() >= 2 {
        return Some(Relation::Commute);
    }
    let z = *w.get(p + 2)?;
    ((x.abs() - y.abs()).abs() == 1 && z == x && x.signum() == y.signum())
        .then_some(Relation::Braid)
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l: Vec<String> = self.letters.iter().map(|k| k.to_string()).collect();
        write!(f, "b={}; {}", self.strands, l.join(","))
    }
}

impl FromStr for BraidWord {
    type Err = BraidError;

    /// `b=2; 1,1,1`. The letter list may be empty (`b=1;`).
    fn from_str(s: &str) -> Result<Self, BraidError> {
        let err = |m: &str| BraidError::Parse(s.to_string(), m.to_string());
        let (head, tail) = s.split_once(';').unwrap_or((s, ""));
        let b = head
            .trim()
            .strip_prefix("b=")
            .ok_or_else(|| err("expected `b=<strands>;`"))?
            .trim()
            .parse::<usize>()
            .map_err(|_| err("bad strand count"))?;
        let letters = tail
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<i32>().map_err(|_| err("bad letter")))
            .collect::<Result<Vec<_>, _>>()?;
        BraidWord::new(b, letters)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Crossing {
    pub sign: i8,
    /// Left strand position (0-based); the crossing joins `pos` and `pos + 1`.
    pub pos: usize,
    /// Arcs `[in_left, in_right, out_left, out_right]`.
    pub arcs: [usize; 4],
}

/// Annular closure of a braid. Arcs are maximal vertical segments between
/// crossings; a position with no crossing is a single closed arc.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct LinkDiagram {
    pub strands: usize,
    pub crossings: Vec<Crossing>,
    pub n_arcs: usize,
    /// Positions whose arc never meets a crossing, with that arc's id.
    pub free_loops: Vec<(usize, usize)>,
}

impl LinkDiagram {
    fn closure(b: &BraidWord) -> Self {
        let n = b.letters.len();
        // crossings touching each position, in braid order
        let mut touching: Vec<Vec<usize>> = vec![vec![]; b.strands];
        for (k, &l) in b.letters.iter().enumerate() {
            let p = l.unsigned_abs() as usize - 1;
            touching[p].push(k);
            touching[p + 1].push(k);
        }
        let mut crossings: Vec<Crossing> = b
            .letters
            .iter()
            .map(|&l| Crossing {
                sign: l.signum() as i8,
                pos: l.unsigned_abs() as usize - 1,
                arcs: [0; 4],
            })
            .collect();
        let mut n_arcs = 0;
        let mut free_loops = vec![];
        for (p, ks) in touching.iter().enumerate() {
            if ks.is_empty() {
                free_loops.push((p, n_arcs));
                n_arcs += 1;
                continue;
            }
            for (j, &k) in ks.iter().enumerate() {
                let next = ks[(j + 1) % ks.len()];
                let a = n_arcs;
                n_arcs += 1;
                let (sk, sn) = (
                    usize::from(crossings[k].pos != p),
                    usize::from(crossings[next].pos != p),
                );
                crossings[k].arcs[2 + sk] = a;
                crossings[next].arcs[sn] = a;
            }
        }
        debug_assert!(n == crossings.len());
        LinkDiagram {
            strands: b.strands,
            crossings,
            n_arcs,
            free_loops,
        }
    }

    pub fn n_plus(&self) -> usize {
        self.crossings.iter().filter(|c| c.sign > 0).count()
    }

    pub fn n_minus(&self) -> usize {
        self.crossings.iter().filter(|c| c.sign < 0).count()
    }

    pub fn writhe(&self) -> i64 {
        self.n_plus() as i64 - self.n_minus() as i64
    }
}

/// Transverse Markov moves, plus negative stabilization for negative tests.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum MarkovMove {
    /// `w ↦ σ⁻¹ w σ` for `σ = letter`.
    Conjugation {
        letter: i32,
    },
    /// Move the first letter to the end.
    CyclicShift,
    /// `σσ⁻¹ ↦ 1`, far commutation, or `σᵢσⱼσᵢ ↦ σⱼσᵢσⱼ`, whichever applies at `position`.
    BraidRelation {
        position: usize,
    },
    /// Insert `σσ⁻¹` before `position`.
    InsertPair {
        position: usize,
        letter: i32,
    },
    PositiveStabilization,
    PositiveDestabilization,
    NegativeStabilization,
}

impl MarkovMove {
    pub fn is_transverse(&self) -> bool {
        !matches!(self, MarkovMove::NegativeStabilization)
    }
}

/// Bounds on the words a random sequence may pass through.
#[derive(Clone, Copy, Debug)]
pub struct MoveBounds {
    pub max_letters: usize,
    pub max_strands: usize,
}

impl Default for MoveBounds {
    fn default() -> Self {
        MoveBounds {
            max_letters: 6,
            max_strands: 4,
        }
    }
}

/// Deterministic random sequence of applicable transverse moves.
pub fn random_transverse_sequence(
    b: &BraidWord,
    length: usize,
    seed: u64,
    bounds: MoveBounds,
) -> Vec<MarkovMove> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cur = b.clone();
    let mut out = Vec::with_capacity(length);
    while out.len() < length {
        let moves: Vec<MarkovMove> = cur
            .applicable_moves()
            .into_iter()
            .filter(|m| {
                let next = cur.apply_move(m).expect("listed moves apply");
                next.letters.len() <= bounds.max_letters.max(b.letters.len())
                    && next.strands <= bounds.max_strands.max(b.strands)
            })
            .collect();
        if moves.is_empty() {
            break;
        }
        // bias towards moves that shrink or keep the word
        let m = if rng.gen_bool(0.5) {
            let keep: Vec<&MarkovMove> = moves
                .iter()
                .filter(|m| {
                    !matches!(
                        m,
                        MarkovMove::InsertPair { .. } | MarkovMove::PositiveStabilization
                    )
                })
                .collect();
            (*keep.choose(&mut rng).unwrap_or(&&moves[0])).clone()
        } else {
            moves.choose(&mut rng).expect("nonempty").clone()
        };
        cur = cur.apply_move(&m).expect("filtered");
        out.push(m);
    }
    out
}

pub fn apply_sequence(b: &BraidWord, moves: &[MarkovMove]) -> Result<BraidWord, BraidError> {
    moves.iter().try_fold(b.clone(), |w, m| w.apply_move(m))
}
