//! Generation of Hilbert-style proofs: library replay, Kalmár's
//! completeness argument, and the two targets proofs are emitted into
//! (object-level derivations inside a calculus, and meta-level derivations
//! over statements).

pub(crate) mod library;
mod sinks;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::deduction::{MacroError, StoreError};
use crate::formula::Symbol;
use crate::template::{eval, instantiate, leaves, match_template, Args, Lang, View};
use library::{Just, Library};

pub(crate) use sinks::{fact_name, MetaSink, ObjectSink};

#[derive(Debug, Error)]
pub enum ProofError {
    #[error("no lemma `{0}` in the library")]
    MissingLemma(String),
    #[error("{0} is not a tautology")]
    NotTautology(String),
    #[error("cannot handle {0}")]
    Unsupported(String),
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error(transparent)]
    Macro(#[from] MacroError),
}

/// A target for Hilbert proofs in language `L`.
pub(crate) trait Sink {
    type L: Lang;
    type Ref: Copy;

    fn library(&self) -> &'static Library;
    /// An instance `f` of axiom `n` of the basis.
    fn axiom(&mut self, n: usize, f: Self::L) -> Result<Self::Ref, ProofError>;
    /// An instance `f` of library lemma `name`.
    fn lemma(&mut self, name: &str, f: Self::L) -> Result<Self::Ref, ProofError>;
    fn mp(&mut self, major: Self::Ref, minor: Self::Ref) -> Result<Self::Ref, ProofError>;

    /// Proves `goal` by `build`; sinks may reuse or cache the result.
    fn subproof(
        &mut self,
        _goal: &Self::L,
        build: &mut dyn FnMut(&mut Self) -> Result<Self::Ref, ProofError>,
    ) -> Result<Self::Ref, ProofError>
    where
        Self: Sized,
    {
        build(self)
    }
}

/// Replays the proof of library lemma `name` with its placeholders bound by
/// `args`.
pub(crate) fn replay<S: Sink>(sink: &mut S, name: &str, args: &Args<S::L>) -> Result<S::Ref, ProofError> {
    let lemma = sink.library().lemma(name).ok_or_else(|| ProofError::MissingLemma(name.to_string()))?;
    let fallback = args.values().next().cloned();
    let mut refs: Vec<S::Ref> = Vec::with_capacity(lemma.proof.len());
    for line in &lemma.proof {
        let r = match &line.just {
            Just::Mp(a, b) => sink.mp(refs[*a], refs[*b])?,
            just => {
                let f = instantiate(&line.formula, args, fallback.as_ref())
                    .ok_or_else(|| ProofError::Unsupported(format!("instance of {}", line.formula)))?;
                match just {
                    Just::Ax(n) => sink.axiom(*n, f)?,
                    Just::Lem(dep) => sink.lemma(dep, f)?,
                    _ => unreachable!("library proofs have no hypotheses"),
                }
            }
        };
        refs.push(r);
    }
    Ok(*refs.last().expect("library proofs are non-empty"))
}

/// Placeholder bindings making lemma `name` yield `f`.
pub(crate) fn lemma_args<L: Lang>(lib: &Library, name: &str, f: &L) -> Result<Args<L>, ProofError> {
    let lemma = lib.lemma(name).ok_or_else(|| ProofError::MissingLemma(name.to_string()))?;
    let mut args = Args::new();
    if match_template(&lemma.statement, f, &mut args) {
        Ok(args)
    } else {
        Err(ProofError::Unsupported(format!("{f} as an instance of `{name}`")))
    }
}

fn sym(s: &str) -> Symbol {
    Symbol::new(s)
}

/// How a leaf of the formula being analysed is proved.
#[derive(Clone)]
pub(crate) enum Leaf {
    /// The `i`-th (1-based) hypothesis of the context, with its value.
    Hyp(usize, bool),
    /// A closed formula whose literal is library lemma `name` verbatim.
    Closed { value: bool, lemma: &'static str },
}

/// A context of hypotheses `l1 → (… → (ln → X))` and the proofs of leaves.
pub(crate) struct Context<L: Lang> {
    pub hyps: Vec<L>,
    pub leaves: BTreeMap<L, Leaf>,
}

impl<L: Lang> Context<L> {
    fn wrap(&self, x: L) -> L {
        self.hyps.iter().rev().fold(x, |acc, h| L::imp(h.clone(), acc))
    }

    fn value(&self, c: &L) -> Result<bool, ProofError> {
        if let Some(Leaf::Hyp(_, v) | Leaf::Closed { value: v, .. }) = self.leaves.get(c) {
            return Ok(*v);
        }
        Ok(match c.view() {
            View::Not(a) => !self.value(&a)?,
            View::Imp(a, b) => !self.value(&a)? || self.value(&b)?,
            View::And(a, b) => self.value(&a)? && self.value(&b)?,
            View::Or(a, b) => self.value(&a)? || self.value(&b)?,
            View::Eqv(a, b) => self.value(&a)? == self.value(&b)?,
            View::Top => true,
            View::Bot => false,
            View::Leaf => return Err(ProofError::Unsupported(format!("unknown leaf {c}"))),
        })
    }

    /// `c` if true, `¬c` if false.
    fn literal(&self, c: &L) -> Result<(L, bool), ProofError> {
        let v = self.value(c)?;
        Ok((if v { c.clone() } else { L::not(c.clone()) }, v))
    }

    fn args(&self, lemma_args: &[(&str, L)]) -> Args<L> {
        let mut args: Args<L> = self
            .hyps
            .iter()
            .enumerate()
            .map(|(i, h)| (sym(&format!("h{}", i + 1)), h.clone()))
            .collect();
        for (k, v) in lemma_args {
            args.insert(sym(k), v.clone());
        }
        args
    }
}

/// Proves `wrap(literal(c))` in context `ctx`. Proper subformulas go
/// through [`Sink::subproof`] so sinks may cache them.
pub(crate) fn fact<S: Sink>(sink: &mut S, ctx: &Context<S::L>, c: &S::L) -> Result<S::Ref, ProofError> {
    let n = ctx.hyps.len();
    if let Some(leaf) = ctx.leaves.get(c) {
        return match leaf {
            Leaf::Hyp(i, _) => {
                let name = format!("proj.{n}.{i}");
                let f = instantiate_lemma(sink, &name, &ctx.args(&[]))?;
                sink.lemma(&name, f)
            }
            Leaf::Closed { lemma, .. } => {
                let (lit, _) = ctx.literal(c)?;
                lifted0(sink, ctx, lemma, lit)
            }
        };
    }
    let child = |sink: &mut S, x: &S::L| -> Result<S::Ref, ProofError> {
        if ctx.leaves.contains_key(x) {
            return fact(sink, ctx, x);
        }
        let (lit, _) = ctx.literal(x)?;
        let goal = ctx.wrap(lit);
        sink.subproof(&goal, &mut |s: &mut S| fact(s, ctx, x))
    };
    match c.view() {
        View::Not(a) => {
            if ctx.value(&a)? {
                let fa = child(sink, &a)?;
                lifted1(sink, ctx, "dni", &[("p", a)], fa)
            } else {
                child(sink, &a)
            }
        }
        View::Imp(a, b) => {
            let (va, vb) = (ctx.value(&a)?, ctx.value(&b)?);
            if vb {
                let fb = child(sink, &b)?;
                lifted1(sink, ctx, "k", &[("p", b), ("q", a)], fb)
            } else if !va {
                let fa = child(sink, &a)?;
                lifted1(sink, ctx, "efq", &[("p", a), ("q", b)], fa)
            } else {
                let (fa, fb) = (child(sink, &a)?, child(sink, &b)?);
                lifted2(sink, ctx, "imp_f", &[("p", a), ("q", b)], fa, fb)
            }
        }
        View::And(a, b) => {
            let (va, vb) = (ctx.value(&a)?, ctx.value(&b)?);
            if va && vb {
                let (fa, fb) = (child(sink, &a)?, child(sink, &b)?);
                lifted2(sink, ctx, "and_t", &[("p", a), ("q", b)], fa, fb)
            } else if !va {
                let fa = child(sink, &a)?;
                lifted1(sink, ctx, "and_f1", &[("p", a), ("q", b)], fa)
            } else {
                let fb = child(sink, &b)?;
                lifted1(sink, ctx, "and_f2", &[("p", a), ("q", b)], fb)
            }
        }
        View::Or(a, b) => {
            let (va, vb) = (ctx.value(&a)?, ctx.value(&b)?);
            if va {
                let fa = child(sink, &a)?;
                lifted1(sink, ctx, "or_t1", &[("p", a), ("q", b)], fa)
            } else if vb {
                let fb = child(sink, &b)?;
                lifted1(sink, ctx, "or_t2", &[("p", a), ("q", b)], fb)
            } else {
                let (fa, fb) = (child(sink, &a)?, child(sink, &b)?);
                lifted2(sink, ctx, "or_f", &[("p", a), ("q", b)], fa, fb)
            }
        }
        View::Eqv(a, b) => {
            let name = match (ctx.value(&a)?, ctx.value(&b)?) {
                (true, true) => "eqv_tt",
                (false, false) => "eqv_ff",
                (true, false) => "eqv_tf",
                (false, true) => "eqv_ft",
            };
            let (fa, fb) = (child(sink, &a)?, child(sink, &b)?);
            lifted2(sink, ctx, name, &[("p", a), ("q", b)], fa, fb)
        }
        View::Top => lifted0(sink, ctx, "top", c.clone()),
        View::Bot => lifted0(sink, ctx, "not_bot", S::L::not(c.clone())),
        View::Leaf => Err(ProofError::Unsupported(format!("unknown leaf {c}"))),
    }
}

fn instantiate_lemma<S: Sink>(sink: &S, name: &str, args: &Args<S::L>) -> Result<S::L, ProofError> {
    let lemma = sink.library().lemma(name).ok_or_else(|| ProofError::MissingLemma(name.to_string()))?;
    instantiate(&lemma.statement, args, None)
        .ok_or_else(|| ProofError::Unsupported(format!("instance of `{name}`")))
}

fn lifted_name(kind: &str, n: usize, lemma: &str) -> String {
    if n == 0 {
        lemma.to_string()
    } else {
        format!("{kind}.{n}.{lemma}")
    }
}

/// `wrap(lit)` where `lit` is library lemma `lemma` verbatim.
fn lifted0<S: Sink>(sink: &mut S, ctx: &Context<S::L>, lemma: &str, lit: S::L) -> Result<S::Ref, ProofError> {
    let n = ctx.hyps.len();
    let base = lemma_args(sink.library(), lemma, &lit)?;
    let mut args = ctx.args(&[]);
    args.extend(base);
    let name = lifted_name("l0", n, lemma);
    let f = instantiate_lemma(sink, &name, &args)?;
    sink.lemma(&name, f)
}

fn lifted1<S: Sink>(
    sink: &mut S,
    ctx: &Context<S::L>,
    lemma: &str,
    lemma_args: &[(&str, S::L)],
    premise: S::Ref,
) -> Result<S::Ref, ProofError> {
    let name = lifted_name("l1", ctx.hyps.len(), lemma);
    let f = instantiate_lemma(sink, &name, &ctx.args(lemma_args))?;
    let l = sink.lemma(&name, f)?;
    sink.mp(l, premise)
}

fn lifted2<S: Sink>(
    sink: &mut S,
    ctx: &Context<S::L>,
    lemma: &str,
    lemma_args: &[(&str, S::L)],
    first: S::Ref,
    second: S::Ref,
) -> Result<S::Ref, ProofError> {
    let name = lifted_name("l2", ctx.hyps.len(), lemma);
    let f = instantiate_lemma(sink, &name, &ctx.args(lemma_args))?;
    let l = sink.lemma(&name, f)?;
    let half = sink.mp(l, first)?;
    sink.mp(half, second)
}

/// A falsifying assignment of `t`'s leaves, if any, in the order leaves
/// first occur; assignments are tried in lexicographic order with `true`
/// first.
pub(crate) fn falsifier<L: Lang>(t: &L) -> Option<Vec<(L, bool)>> {
    let mut ls = Vec::new();
    leaves(t, &mut ls);
    let n = ls.len();
    (0u64..1 << n).find_map(|bits| {
        let val: Vec<bool> = (0..n).map(|i| bits >> (n - 1 - i) & 1 == 0).collect();
        let ok = eval(t, &|x: &L| val[ls.iter().position(|l| l == x).expect("known leaf")]);
        (!ok).then(|| ls.iter().cloned().zip(val).collect())
    })
}

/// Proves a classical tautology by Kalmár's argument: for each assignment
/// of its leaves, the literal of `t` under the hypotheses fixing the
/// leaves; hypotheses are then eliminated by case analysis.
pub(crate) fn prove_tautology<S: Sink>(sink: &mut S, t: &S::L) -> Result<S::Ref, ProofError> {
    if falsifier(t).is_some() {
        return Err(ProofError::NotTautology(t.to_string()));
    }
    let mut ls = Vec::new();
    leaves(t, &mut ls);
    let mut prefix = Vec::new();
    combine(sink, t, &ls, &mut prefix)
}

fn combine<S: Sink>(sink: &mut S, t: &S::L, ls: &[S::L], prefix: &mut Vec<bool>) -> Result<S::Ref, ProofError> {
    let k = prefix.len();
    let hyps: Vec<S::L> = prefix
        .iter()
        .zip(ls)
        .map(|(&v, l)| if v { l.clone() } else { S::L::not(l.clone()) })
        .collect();
    if k == ls.len() {
        let ctx = Context {
            hyps,
            leaves: ls
                .iter()
                .zip(prefix.iter())
                .enumerate()
                .map(|(i, (l, &v))| (l.clone(), Leaf::Hyp(i + 1, v)))
                .collect(),
        };
        return fact(sink, &ctx, t);
    }
    prefix.push(true);
    let when_true = combine(sink, t, ls, prefix)?;
    prefix.pop();
    prefix.push(false);
    let when_false = combine(sink, t, ls, prefix)?;
    prefix.pop();
    let ctx = Context { hyps, leaves: BTreeMap::new() };
    let cases = [("p", ls[k].clone()), ("q", t.clone())];
    lifted2(sink, &ctx, "cases", &cases, when_true, when_false)
}
