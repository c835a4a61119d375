//! Subcommand implementations for the `foamsl3` binary. Every command takes a
//! validated [`RunConfig`] and returns a [`Report`] holding both renderings.

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use foamsl3::braid::{
    apply_sequence, random_transverse_sequence, BraidWord, MarkovMove, MoveBounds,
};
use foamsl3::coeff::{Field, Potential, Ring, F2, F3, F5, Q, QU};
use foamsl3::complex::{bracket_euler_characteristic, build_complex, HomologyEntry};
use foamsl3::khsl2::psi_vanishes;
use foamsl3::transverse::{
    bennequin_check, beta_chain, c_for_braid, class_rank, class_vanishes, class_vanishes_over_pid,
    discriminant, homogenized, mirror_complex, root_multiplicity, Inequality,
};
use foamsl3::web::resolve;

pub mod selftest;

#[derive(Parser, Debug)]
#[command(
    name = "foamsl3",
    version,
    about = "Deformed sl3 foam homology and transverse invariants of braid closures"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Homology of the braid closure.
    Homology(RunArgs),
    /// The β-class of a braid for a root of the potential.
    Beta(RunArgs),
    /// Vanishing of the sl2 class ψ.
    Psi(RunArgs),
    /// Replay seeded random transverse Markov sequences and compare invariants.
    CheckInvariance(RunArgs),
    /// Symbolic identities and a small property suite.
    Selftest(RunArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RingTag {
    Q,
    F2,
    F3,
    F5,
    Qu,
}

#[derive(Args, Debug, Clone, Default)]
pub struct RunArgs {
    /// Braid word, e.g. "b=2; 1,1,1".
    #[arg(long)]
    pub braid: Option<String>,
    #[arg(long, value_enum)]
    pub ring: Option<RingTag>,
    /// Coefficients a2,a1,a0 of x³ + a2x² + a1x + a0.
    #[arg(long, conflicts_with = "roots", allow_hyphen_values = true)]
    pub potential: Option<String>,
    /// The three roots r1,r2,r3 of the potential.
    #[arg(long, allow_hyphen_values = true)]
    pub roots: Option<String>,
    #[arg(long, conflicts_with = "root_index", allow_hyphen_values = true)]
    pub root: Option<String>,
    /// 1-based index into --roots.
    #[arg(long)]
    pub root_index: Option<usize>,
    /// Work on the closure of the braid itself rather than of its mirror.
    #[arg(long)]
    pub mirror: bool,
    #[arg(long)]
    pub json: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Moves per random sequence.
    #[arg(long, default_value_t = 20)]
    pub moves: usize,
    /// Number of random sequences.
    #[arg(long, default_value_t = 10)]
    pub count: usize,
    /// Print every web resolution to stderr.
    #[arg(long)]
    pub dump_webs: bool,
    /// Append a negative stabilization to every sequence.
    #[arg(long, hide = true)]
    pub inject_negative_stabilization: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum PotentialSpec {
    Coefficients([String; 3]),
    Roots([String; 3]),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum RootSpec {
    Value(String),
    Index(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CommandKind {
    Homology,
    Beta,
    Psi,
    CheckInvariance,
    Selftest,
}

/// Everything a run depends on.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: CommandKind,
    pub braid: BraidWord,
    pub ring: RingTag,
    pub potential: PotentialSpec,
    pub root: Option<RootSpec>,
    pub mirror: bool,
    pub json: bool,
    pub seed: u64,
    pub moves: usize,
    pub count: usize,
    pub dump_webs: bool,
    pub inject_negative_stabilization: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Usage(String),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Internal(m) => write!(f, "internal fault: {m}"),
        }
    }
}

fn usage(m: impl std::fmt::Display) -> CliError {
    CliError::Usage(m.to_string())
}

fn internal(m: impl std::fmt::Display) -> CliError {
    CliError::Internal(m.to_string())
}

#[derive(Clone, Debug)]
pub struct Report {
    pub pass: bool,
    pub human: String,
    pub json: Value,
    /// Extra lines for stderr.
    pub diagnostics: Vec<String>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            serde_json::to_string_pretty(&self.json).expect("serializable")
        } else {
            self.human.clone()
        }
    }
}

fn triple(s: &str, what: &str) -> Result<[String; 3], CliError> {
    let v: Vec<String> = s.split(',').map(|x| x.trim().to_string()).collect();
    <[String; 3]>::try_from(v)
        .map_err(|_| usage(format!("{what} needs exactly three comma-separated values")))
}

impl RunConfig {
    pub fn from_args(command: CommandKind, a: &RunArgs) -> Result<Self, CliError> {
        let braid = match (&a.braid, command) {
            (Some(s), _) => s.parse::<BraidWord>().map_err(usage)?,
            (None, CommandKind::Selftest) => BraidWord::unknot(),
            (None, _) => return Err(usage("--braid is required")),
        };
        let potential = match (&a.potential, &a.roots) {
            (Some(p), None) => PotentialSpec::Coefficients(triple(p, "--potential")?),
            (None, Some(r)) => PotentialSpec::Roots(triple(r, "--roots")?),
            (None, None) => PotentialSpec::Coefficients(["0".into(), "0".into(), "0".into()]),
            (Some(_), Some(_)) => return Err(usage("--potential and --roots are exclusive")),
        };
        let root = match (&a.root, a.root_index) {
            (Some(x), None) => Some(RootSpec::Value(x.clone())),
            (None, Some(i)) => {
                if !matches!(potential, PotentialSpec::Roots(_)) {
                    return Err(usage("--root-index needs --roots"));
                }
                if !(1..=3).contains(&i) {
                    return Err(usage("--root-index must be 1, 2 or 3"));
                }
                Some(RootSpec::Index(i))
            }
            (None, None) => None,
            (Some(_), Some(_)) => return Err(usage("--root and --root-index are exclusive")),
        };
        Ok(RunConfig {
            command,
            braid,
            ring: a.ring.unwrap_or(RingTag::Q),
            potential,
            root,
            mirror: a.mirror,
            json: a.json,
            seed: a.seed,
            moves: a.moves,
            count: a.count,
            dump_webs: a.dump_webs,
            inject_negative_stabilization: a.inject_negative_stabilization,
        })
    }

    /// The braid acted on: its closure carries the homology and ψ, and its
    /// mirror closure carries β. `--mirror` swaps in the mirror braid.
    fn target(&self) -> BraidWord {
        if self.mirror {
            self.braid.mirror()
        } else {
            self.braid.clone()
        }
    }

    pub fn potential<R: Ring>(&self) -> Result<Potential<R>, CliError> {
        let parse = |v: &[String; 3]| -> Result<[R; 3], CliError> {
            Ok([
                R::parse(&v[0]).map_err(usage)?,
                R::parse(&v[1]).map_err(usage)?,
                R::parse(&v[2]).map_err(usage)?,
            ])
        };
        Ok(match &self.potential {
            PotentialSpec::Coefficients(c) => {
                let [a2, a1, a0] = parse(c)?;
                Potential::new(a2, a1, a0)
            }
            PotentialSpec::Roots(r) => Potential::from_roots(parse(r)?),
        })
    }

    /// The chosen root; defaults to the first listed root, or to `0` when it
    /// is a root.
    pub fn root<R: Ring>(&self, pot: &Potential<R>) -> Result<R, CliError> {
        let x = match (&self.root, &pot.roots) {
            (Some(RootSpec::Value(s)), _) => R::parse(s).map_err(usage)?,
            (Some(RootSpec::Index(i)), Some(r)) => r[i - 1].clone(),
            (None, Some(r)) => r[0].clone(),
            (Some(RootSpec::Index(_)), None) => return Err(usage("--root-index needs --roots")),
            (None, None) if pot.eval(&R::zero()).is_zero() => R::zero(),
            (None, None) => return Err(usage("no root given; pass --root or --roots")),
        };
        if !pot.eval(&x).is_zero() {
            return Err(usage(format!("{x} is not a root of the potential")));
        }
        Ok(x)
    }
}

macro_rules! over_field {
    ($tag:expr, $f:ident, $($arg:expr),*) => {
        match $tag {
            RingTag::Q => $f::<Q>($($arg),*),
            RingTag::F2 => $f::<F2>($($arg),*),
            RingTag::F3 => $f::<F3>($($arg),*),
            RingTag::F5 => $f::<F5>($($arg),*),
            RingTag::Qu => unreachable!("handled by the caller"),
        }
    };
}

pub fn run(cfg: &RunConfig) -> Result<Report, CliError> {
    match cfg.command {
        CommandKind::Homology => cmd_homology(cfg),
        CommandKind::Beta => cmd_beta(cfg),
        CommandKind::Psi => cmd_psi(cfg),
        CommandKind::CheckInvariance => cmd_check_invariance(cfg),
        CommandKind::Selftest => Ok(selftest::cmd_selftest()),
    }
}

fn homology_table(h: &[HomologyEntry], out: &mut String) {
    for e in h {
        let q = e.q.map_or("-".to_string(), |q| q.to_string());
        let _ = write!(out, "h={:<3} q={:<4} rank={}", e.h, q, e.rank);
        if !e.torsion.is_empty() {
            let t: Vec<String> = e
                .torsion
                .iter()
                .map(|t| format!("(U^{})x{}", t.k, t.mult))
                .collect();
            let _ = write!(out, " torsion={}", t.join(" + "));
        }
        out.push('\n');
    }
}

fn web_dump(cfg: &RunConfig) -> Result<Vec<String>, CliError> {
    if !cfg.dump_webs {
        return Ok(vec![]);
    }
    let d = cfg.target().closure_diagram();
    let n = d.crossings.len();
    (0..1usize << n)
        .map(|m| {
            let bits: Vec<u8> = (0..n).map(|k| (m >> k & 1) as u8).collect();
            let w = resolve(&d, &bits).map_err(internal)?;
            let b: String = bits.iter().map(|b| b.to_string()).collect();
            Ok(format!("resolution {b}:\n{}", w.dump()))
        })
        .collect()
}

pub fn cmd_homology(cfg: &RunConfig) -> Result<Report, CliError> {
    let diagnostics = web_dump(cfg)?;
    let d = cfg.target().closure_diagram();
    let (entries, levels, d_squared) = if cfg.ring == RingTag::Qu {
        let pot = homogenized(&cfg.potential::<Q>()?);
        let c = build_complex(&d, &pot).map_err(internal)?;
        (c.homology_over_pid(), None, c.verify_d_squared())
    } else {
        over_field!(cfg.ring, field_homology, &d, cfg)?
    };
    let mut human = format!("braid {}  ring {:?}\n", cfg.target(), cfg.ring);
    homology_table(&entries, &mut human);
    if let Some(l) = &levels {
        let _ = writeln!(human, "filtration levels {l:?}");
    }
    if !d_squared {
        human.push_str("d² ≠ 0\n");
    }
    Ok(Report {
        pass: d_squared,
        human,
        json: json!(entries),
        diagnostics,
    })
}

type FieldHomology = (Vec<HomologyEntry>, Option<Vec<i64>>, bool);

fn field_homology<F: Field>(
    d: &foamsl3::braid::LinkDiagram,
    cfg: &RunConfig,
) -> Result<FieldHomology, CliError> {
    let pot = cfg.potential::<F>()?;
    let c = build_complex(d, &pot).map_err(internal)?;
    let levels = (!c.graded).then(|| c.filtration_levels());
    Ok((c.homology_over_field(), levels, c.verify_d_squared()))
}

#[derive(Serialize)]
struct BetaJson {
    braid: String,
    sl: i64,
    root: String,
    multiplicity: usize,
    is_cycle: bool,
    degree: Option<i64>,
    class_vanishes: bool,
    /// Rank of the span of the classes of all three roots, when listed.
    class_rank: Option<usize>,
    c: Value,
    inequalities: Vec<Inequality>,
}

pub fn cmd_beta(cfg: &RunConfig) -> Result<Report, CliError> {
    let b = cfg.target();
    let out = if cfg.ring == RingTag::Qu {
        beta_qu(cfg, &b)?
    } else {
        over_field!(cfg.ring, beta_field, cfg, &b)?
    };
    let degree_ok = out.degree.is_none_or(|d| d == -2 * out.sl);
    let pass = out.is_cycle && degree_ok && out.inequalities.iter().all(|i| i.pass);
    let mut human = format!(
        "braid {}  sl {}  root {} (multiplicity {})\ncycle {}  degree {}  vanishes {}\n",
        out.braid,
        out.sl,
        out.root,
        out.multiplicity,
        out.is_cycle,
        out.degree.map_or("-".into(), |d| d.to_string()),
        out.class_vanishes
    );
    if let Some(r) = out.class_rank {
        let _ = writeln!(human, "classes of the three roots span rank {r}");
    }
    if !out.c.is_null() {
        let _ = writeln!(human, "c = {}", out.c);
    }
    for i in &out.inequalities {
        let _ = writeln!(
            human,
            "{:<16} {} <= {}  {}",
            i.name,
            i.lhs,
            i.rhs,
            if i.pass { "pass" } else { "FAIL" }
        );
    }
    Ok(Report {
        pass,
        human,
        json: serde_json::to_value(&out).expect("serializable"),
        diagnostics: vec![],
    })
}

fn beta_field<F: Field>(cfg: &RunConfig, b: &BraidWord) -> Result<BetaJson, CliError> {
    let pot = cfg.potential::<F>()?;
    let x1 = cfg.root(&pot)?;
    let c = mirror_complex(b, &pot).map_err(internal)?;
    let beta = beta_chain(&c, &x1).map_err(internal)?;
    let class_rank = match &pot.roots {
        Some(r) if !discriminant(&pot).is_zero() => {
            let all: Vec<_> = r
                .iter()
                .map(|x| beta_chain(&c, x))
                .collect::<Result<_, _>>()
                .map_err(internal)?;
            Some(class_rank(&c, &all.iter().collect::<Vec<_>>()))
        }
        _ => None,
    };
    Ok(BetaJson {
        braid: b.to_string(),
        sl: b.self_linking(),
        root: x1.to_string(),
        multiplicity: root_multiplicity(&pot, &x1),
        is_cycle: beta.is_cycle(&c),
        degree: beta.degree,
        class_vanishes: class_vanishes(&c, &beta),
        class_rank,
        c: Value::Null,
        inequalities: vec![],
    })
}

fn c_json(c: Option<u64>) -> Value {
    c.map_or(json!("inf"), |c| json!(c))
}

fn beta_qu(cfg: &RunConfig, b: &BraidWord) -> Result<BetaJson, CliError> {
    let pot = cfg.potential::<Q>()?;
    let x1 = cfg.root(&pot)?;
    let hp = homogenized(&pot);
    let ux1 = QU::u().mul(&QU::constant(x1.clone()));
    let c = mirror_complex(b, &hp).map_err(internal)?;
    let beta = beta_chain(&c, &ux1).map_err(internal)?;
    let distinct = !discriminant(&pot).is_zero();
    let (cval, inequalities) = if distinct {
        let cv = c_for_braid(b, &pot, &x1).map_err(internal)?;
        let ineq = if b.is_knot() {
            bennequin_check(b, &pot, &x1)
                .map_err(internal)?
                .inequalities
        } else {
            vec![]
        };
        (c_json(cv), ineq)
    } else {
        (Value::Null, vec![])
    };
    Ok(BetaJson {
        braid: b.to_string(),
        sl: b.self_linking(),
        root: ux1.to_string(),
        multiplicity: root_multiplicity(&pot, &x1),
        is_cycle: beta.is_cycle(&c),
        degree: beta.degree,
        class_vanishes: class_vanishes_over_pid(&c, &beta),
        class_rank: None,
        c: cval,
        inequalities,
    })
}

pub fn cmd_psi(cfg: &RunConfig) -> Result<Report, CliError> {
    let b = cfg.target();
    let v = match cfg.ring {
        RingTag::Qu => return Err(usage("psi needs a field: q, f2, f3 or f5")),
        t => over_field!(t, psi_vanishes, &b),
    };
    Ok(Report {
        pass: true,
        human: format!(
            "braid {b}  psi {}\n",
            if v { "vanishes" } else { "nonzero" }
        ),
        json: json!({ "braid": b.to_string(), "psi_vanishes": v }),
        diagnostics: vec![],
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Invariants {
    pub sl: i64,
    /// Graded Euler characteristic for `x³`.
    pub euler: String,
    pub class_vanishes: Option<bool>,
    pub psi_vanishes: Option<bool>,
    pub c: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct SequenceReport {
    pub index: usize,
    pub seed: u64,
    pub moves: Vec<MarkovMove>,
    pub final_braid: String,
    pub transverse: bool,
    pub invariants: Invariants,
    pub pass: bool,
}

fn field_invariants<F: Field>(
    cfg: &RunConfig,
    b: &BraidWord,
) -> Result<(Option<bool>, Option<bool>), CliError> {
    let pot = cfg.potential::<F>()?;
    let x1 = cfg.root(&pot)?;
    let c = mirror_complex(b, &pot).map_err(internal)?;
    let beta = beta_chain(&c, &x1).map_err(internal)?;
    Ok((Some(class_vanishes(&c, &beta)), Some(psi_vanishes::<F>(b))))
}

fn invariants(cfg: &RunConfig, b: &BraidWord) -> Result<Invariants, CliError> {
    let euler = bracket_euler_characteristic(&b.closure_diagram())
        .map_err(internal)?
        .to_string();
    let (class_vanishes, psi_vanishes, c) = if cfg.ring == RingTag::Qu {
        let pot = cfg.potential::<Q>()?;
        let x1 = cfg.root(&pot)?;
        (
            None,
            None,
            c_json(c_for_braid(b, &pot, &x1).map_err(internal)?),
        )
    } else {
        let (v, p) = over_field!(cfg.ring, field_invariants, cfg, b)?;
        (v, p, Value::Null)
    };
    Ok(Invariants {
        sl: b.self_linking(),
        euler,
        class_vanishes,
        psi_vanishes,
        c,
    })
}

/// Moves per sequence and strand bound; `ℚ[U]` computations get smaller words.
fn bounds(cfg: &RunConfig) -> MoveBounds {
    match cfg.ring {
        RingTag::Qu => MoveBounds {
            max_letters: 5,
            max_strands: 3,
        },
        _ => MoveBounds::default(),
    }
}

pub fn cmd_check_invariance(cfg: &RunConfig) -> Result<Report, CliError> {
    let b = cfg.target();
    let base = invariants(cfg, &b)?;
    let mut seqs = vec![];
    for index in 0..cfg.count {
        let seed = cfg.seed.wrapping_add(index as u64);
        let mut moves = random_transverse_sequence(&b, cfg.moves, seed, bounds(cfg));
        if cfg.inject_negative_stabilization {
            moves.push(MarkovMove::NegativeStabilization);
        }
        let transverse = moves.iter().all(MarkovMove::is_transverse);
        let end = apply_sequence(&b, &moves).map_err(internal)?;
        let inv = invariants(cfg, &end)?;
        let pass = transverse && inv == base;
        seqs.push(SequenceReport {
            index,
            seed,
            moves,
            final_braid: end.to_string(),
            transverse,
            invariants: inv,
            pass,
        });
    }
    let pass = seqs.iter().all(|s| s.pass);
    let mut human = format!(
        "braid {b}  seed {}  {} sequences of {} moves\nbase: sl {}  euler {}",
        cfg.seed, cfg.count, cfg.moves, base.sl, base.euler
    );
    if let Some(v) = base.class_vanishes {
        let _ = write!(human, "  beta vanishes {v}");
    }
    if let Some(v) = base.psi_vanishes {
        let _ = write!(human, "  psi vanishes {v}");
    }
    if !base.c.is_null() {
        let _ = write!(human, "  c {}", base.c);
    }
    human.push('\n');
    for s in &seqs {
        let why = if !s.transverse {
            " (non-transverse move)"
        } else if s.invariants != base {
            " (invariant changed)"
        } else {
            ""
        };
        let _ = writeln!(
            human,
            "#{:<3} {:<28} {}{why}",
            s.index,
            s.final_braid,
            if s.pass { "pass" } else { "FAIL" }
        );
    }
    let json = json!({
        "braid": b.to_string(),
        "seed": cfg.seed,
        "moves": cfg.moves,
        "count": cfg.count,
        "base": base,
        "sequences": seqs,
        "pass": pass,
    });
    Ok(Report {
        pass,
        human,
        json,
        diagnostics: vec![],
    })
}
