//! Consequence relations on finite sets of atomic statements over a finite
//! universe, and the passage between relations and logics.
//!
//! A relation is stored as a bit table indexed by pairs of subsets of the
//! universe, so the engine is exponential in the number of atoms and
//! capped accordingly.

use std::collections::BTreeSet;
use std::fmt::{self, Write};

use thiserror::Error;

use crate::deduction::{content_lines, fragment};
use crate::formula::{Formula, Substitution};
use crate::statement::{Atom, Sign};
use crate::syntax::{ParseError, Tok};

/// Default cap on the number of atoms of a universe.
pub const DEFAULT_ATOM_CAP: usize = 8;
/// Largest cap a universe may be given.
pub const MAX_ATOM_CAP: usize = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConsequenceError {
    #[error("{found} atoms exceed the cap of {cap}")]
    TooManyAtoms { found: usize, cap: usize },
    #[error("atom {0} occurs twice in the universe")]
    DuplicateAtom(Atom),
    #[error("atom {0} is not in the universe")]
    NotInUniverse(Atom),
    #[error("structurality is defined for all-positive or all-negative sets only")]
    MixedPolarity,
    #[error("the relations are over different universes")]
    UniverseMismatch,
}

/// A finite set of atomic statements, in a fixed order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomUniverse {
    atoms: Vec<Atom>,
}

/// A subset of a universe as a bit mask over its atom indices.
type Mask = u32;

impl AtomUniverse {
    pub fn new(atoms: Vec<Atom>) -> Result<Self, ConsequenceError> {
        AtomUniverse::with_cap(atoms, DEFAULT_ATOM_CAP)
    }

    /// A universe with a cap other than [`DEFAULT_ATOM_CAP`]; the cap itself
    /// is bounded by [`MAX_ATOM_CAP`].
    pub fn with_cap(atoms: Vec<Atom>, cap: usize) -> Result<Self, ConsequenceError> {
        let cap = cap.min(MAX_ATOM_CAP);
        if atoms.len() > cap {
            return Err(ConsequenceError::TooManyAtoms { found: atoms.len(), cap });
        }
        let mut seen = BTreeSet::new();
        for a in &atoms {
            if !seen.insert(a) {
                return Err(ConsequenceError::DuplicateAtom(a.clone()));
            }
        }
        Ok(AtomUniverse { atoms })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// The distinct propositional parts of the atoms.
    pub fn formulas(&self) -> Vec<Formula> {
        let mut out: Vec<Formula> = Vec::new();
        for a in &self.atoms {
            if !out.contains(&a.body) {
                out.push(a.body.clone());
            }
        }
        out
    }

    fn index(&self, a: &Atom) -> Result<usize, ConsequenceError> {
        self.atoms.iter().position(|x| x == a).ok_or_else(|| ConsequenceError::NotInUniverse(a.clone()))
    }

    fn mask(&self, set: &[Atom]) -> Result<Mask, ConsequenceError> {
        set.iter().try_fold(0, |m, a| Ok(m | 1 << self.index(a)?))
    }

    fn set(&self, m: Mask) -> Vec<Atom> {
        (0..self.len()).filter(|i| m >> i & 1 == 1).map(|i| self.atoms[i].clone()).collect()
    }

    fn subsets(&self) -> Mask {
        1 << self.len()
    }
}

/// A binary relation on the subsets of a universe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationTable {
    universe: AtomUniverse,
    bits: Vec<u64>,
}

/// A pair of atom sets, premises first.
pub type SetPair = (Vec<Atom>, Vec<Atom>);

impl RelationTable {
    pub fn empty(universe: AtomUniverse) -> Self {
        let n = universe.subsets() as usize;
        RelationTable { bits: vec![0; (n * n).div_ceil(64)], universe }
    }

    pub fn universe(&self) -> &AtomUniverse {
        &self.universe
    }

    fn slot(&self, g: Mask, d: Mask) -> usize {
        g as usize * self.universe.subsets() as usize + d as usize
    }

    fn get(&self, g: Mask, d: Mask) -> bool {
        let i = self.slot(g, d);
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    /// Sets the pair; returns whether it was new.
    fn put(&mut self, g: Mask, d: Mask) -> bool {
        let i = self.slot(g, d);
        let was = self.bits[i / 64] >> (i % 64) & 1 == 1;
        self.bits[i / 64] |= 1 << (i % 64);
        !was
    }

    fn unset(&mut self, g: Mask, d: Mask) {
        let i = self.slot(g, d);
        self.bits[i / 64] &= !(1 << (i % 64));
    }

    /// Whether `gamma ⊢ delta`.
    pub fn holds(&self, gamma: &[Atom], delta: &[Atom]) -> Result<bool, ConsequenceError> {
        Ok(self.get(self.universe.mask(gamma)?, self.universe.mask(delta)?))
    }

    pub fn insert(&mut self, gamma: &[Atom], delta: &[Atom]) -> Result<bool, ConsequenceError> {
        let (g, d) = (self.universe.mask(gamma)?, self.universe.mask(delta)?);
        Ok(self.put(g, d))
    }

    pub fn remove(&mut self, gamma: &[Atom], delta: &[Atom]) -> Result<(), ConsequenceError> {
        let (g, d) = (self.universe.mask(gamma)?, self.universe.mask(delta)?);
        self.unset(g, d);
        Ok(())
    }

    /// Number of pairs in the relation.
    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn masks(&self) -> impl Iterator<Item = (Mask, Mask)> + '_ {
        let n = self.universe.subsets();
        (0..n).flat_map(move |g| (0..n).map(move |d| (g, d))).filter(|&(g, d)| self.get(g, d))
    }

    /// All pairs, ordered by premise mask and then conclusion mask.
    pub fn pairs(&self) -> Vec<SetPair> {
        self.masks().map(|(g, d)| (self.universe.set(g), self.universe.set(d))).collect()
    }

    /// The pairs in both relations.
    pub fn meet(&self, other: &RelationTable) -> Result<RelationTable, ConsequenceError> {
        if self.universe != other.universe {
            return Err(ConsequenceError::UniverseMismatch);
        }
        let bits = self.bits.iter().zip(&other.bits).map(|(a, b)| a & b).collect();
        Ok(RelationTable { universe: self.universe.clone(), bits })
    }

    /// Whether every pair of `self` is in `other`.
    pub fn is_subset(&self, other: &RelationTable) -> bool {
        self.universe == other.universe && self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }
}

/// The smallest consequence relation on the universe containing `seeds`:
/// the overlap pairs of (R) and the seeds, saturated under (M) and (T).
pub fn generate_relation(seeds: &[SetPair], universe: AtomUniverse) -> Result<RelationTable, ConsequenceError> {
    let mut rel = RelationTable::empty(universe);
    let n = rel.universe.subsets();
    for g in 0..n {
        for d in 0..n {
            if g & d != 0 {
                rel.put(g, d);
            }
        }
    }
    for (gamma, delta) in seeds {
        rel.insert(gamma, delta)?;
    }
    let atoms = rel.universe.len();
    loop {
        upward_close(&mut rel);
        let mut changed = false;
        for g in 0..n {
            for d in 0..n {
                if rel.get(g, d) {
                    continue;
                }
                let cut = (0..atoms).any(|i| rel.get(g | 1 << i, d) && rel.get(g, d | 1 << i));
                if cut {
                    rel.put(g, d);
                    changed = true;
                }
            }
        }
        if !changed {
            return Ok(rel);
        }
    }
}

/// Closes the relation under weakening on either side.
fn upward_close(rel: &mut RelationTable) {
    let n = rel.universe.subsets();
    let atoms = rel.universe.len();
    // Masks only grow along single-bit additions, so one ascending pass
    // over both indices propagates every pair to all its supersets.
    for g in 0..n {
        for d in 0..n {
            if rel.get(g, d) {
                for i in 0..atoms {
                    rel.put(g | 1 << i, d);
                    rel.put(g, d | 1 << i);
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Law {
    Reflexivity,
    Monotonicity,
    Cut,
}

impl Law {
    pub fn code(self) -> &'static str {
        match self {
            Law::Reflexivity => "R",
            Law::Monotonicity => "M",
            Law::Cut => "T",
        }
    }
}

/// A law instance the relation fails: `pair` is missing although the law
/// requires it, given `from` (for (M)) or the cut atom `cut` (for (T)).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub law: Law,
    pub pair: SetPair,
    pub from: Option<SetPair>,
    pub cut: Option<Atom>,
}

fn show_set(set: &[Atom]) -> String {
    let items: Vec<String> = set.iter().map(Atom::to_string).collect();
    format!("{{{}}}", items.join(", "))
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) missing {} |- {}", self.law.code(), show_set(&self.pair.0), show_set(&self.pair.1))?;
        if let Some((g, d)) = &self.from {
            write!(f, " though {} |- {}", show_set(g), show_set(d))?;
        }
        if let Some(a) = &self.cut {
            write!(f, " though both cut premises on {a} hold")?;
        }
        Ok(())
    }
}

/// Every instance of (R), single-atom (M) and (T) the relation fails.
/// Single-atom weakenings suffice: a relation closed under them is closed
/// under (M).
pub fn check_rmt(rel: &RelationTable) -> Vec<Violation> {
    let u = &rel.universe;
    let n = u.subsets();
    let mut out = Vec::new();
    for g in 0..n {
        for d in 0..n {
            let pair = || (u.set(g), u.set(d));
            if rel.get(g, d) {
                for i in 0..u.len() {
                    for (g2, d2) in [(g | 1 << i, d), (g, d | 1 << i)] {
                        if !rel.get(g2, d2) {
                            out.push(Violation {
                                law: Law::Monotonicity,
                                pair: (u.set(g2), u.set(d2)),
                                from: Some(pair()),
                                cut: None,
                            });
                        }
                    }
                }
                continue;
            }
            if g & d != 0 {
                out.push(Violation { law: Law::Reflexivity, pair: pair(), from: None, cut: None });
                continue;
            }
            for i in 0..u.len() {
                if rel.get(g | 1 << i, d) && rel.get(g, d | 1 << i) {
                    out.push(Violation { law: Law::Cut, pair: pair(), from: None, cut: Some(u.atoms[i].clone()) });
                    break;
                }
            }
        }
    }
    out.dedup();
    out
}

/// Checks one substitution instance of structurality: for positive sets,
/// `Γ ⊢ Δ` must give `σ(Γ) ⊢ σ(Δ)`; for negative sets, `σ(Γ) ⊢ σ(Δ)` must
/// give `Γ ⊢ Δ`.
pub fn check_structural_instance(
    rel: &RelationTable,
    gamma: &[Atom],
    delta: &[Atom],
    s: &Substitution,
) -> Result<bool, ConsequenceError> {
    let all = || gamma.iter().chain(delta);
    let positive = all().all(|a| a.sign == Sign::Asserted);
    let negative = all().all(|a| a.sign == Sign::Rejected);
    if !positive && !negative {
        return Err(ConsequenceError::MixedPolarity);
    }
    let image = |set: &[Atom]| -> Vec<Atom> { set.iter().map(|a| a.subst(s)).collect() };
    let plain = rel.holds(gamma, delta)?;
    let substituted = rel.holds(&image(gamma), &image(delta))?;
    Ok(if positive { !plain || substituted } else { !substituted || plain })
}

/// A pair of formula sets: the asserted and the rejected part.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LogicPair {
    pub asserted: BTreeSet<Formula>,
    pub rejected: BTreeSet<Formula>,
}

impl LogicPair {
    pub fn new(asserted: impl IntoIterator<Item = Formula>, rejected: impl IntoIterator<Item = Formula>) -> Self {
        LogicPair { asserted: asserted.into_iter().collect(), rejected: rejected.into_iter().collect() }
    }

    /// The atoms `⊕A` for asserted and `⊖A` for rejected `A`.
    pub fn atoms(&self) -> impl Iterator<Item = Atom> + '_ {
        self.asserted
            .iter()
            .map(|a| Atom::asserted(a.clone()))
            .chain(self.rejected.iter().map(|a| Atom::rejected(a.clone())))
    }
}

/// The logic of a relation: `A` is asserted when `⊢ ⊕A` and rejected when
/// `⊢ ⊖A`, for the atoms of the universe.
pub fn logic_of_relation(rel: &RelationTable) -> LogicPair {
    let mut out = LogicPair::default();
    for (i, a) in rel.universe.atoms.iter().enumerate() {
        if rel.get(0, 1 << i) {
            match a.sign {
                Sign::Asserted => out.asserted.insert(a.body.clone()),
                Sign::Rejected => out.rejected.insert(a.body.clone()),
            };
        }
    }
    out
}

/// The smallest relation with logic `l` (restricted to the universe):
/// `Γ ⊢ Δ` iff `Δ` meets `Γ` or one of the atoms of `l`.
pub fn min_relation_for_logic(l: &LogicPair, universe: AtomUniverse) -> RelationTable {
    let theorems: Mask = l
        .atoms()
        .filter_map(|a| universe.index(&a).ok())
        .fold(0, |m, i| m | 1 << i);
    let mut rel = RelationTable::empty(universe);
    let n = rel.universe.subsets();
    for g in 0..n {
        for d in 0..n {
            if d & (g | theorems) != 0 {
                rel.put(g, d);
            }
        }
    }
    rel
}

/// The classification of a logic over a finite set of formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Classification {
    pub coherent: bool,
    pub full: bool,
    pub standard: bool,
    pub trivial: bool,
    pub degenerate: bool,
}

impl Classification {
    /// Whether none of the named classes applies.
    pub fn other(&self) -> bool {
        !(self.coherent || self.full || self.trivial || self.degenerate)
    }

    pub fn labels(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        for (on, name) in [
            (self.coherent, "coherent"),
            (self.full, "full"),
            (self.standard, "standard"),
            (self.trivial, "trivial"),
            (self.degenerate, "degenerate"),
            (self.other(), "other"),
        ] {
            if on {
                out.push(name);
            }
        }
        out
    }
}

/// Classifies the logic given by membership tests over `universe`.
pub fn classify_with(
    universe: &[Formula],
    asserted: impl Fn(&Formula) -> bool,
    rejected: impl Fn(&Formula) -> bool,
) -> Classification {
    let (mut both, mut either, mut all_pos, mut all_neg, mut none) = (false, true, true, true, true);
    for f in universe {
        let (pos, neg) = (asserted(f), rejected(f));
        both |= pos && neg;
        either &= pos || neg;
        all_pos &= pos;
        all_neg &= neg;
        none &= !pos && !neg;
    }
    Classification {
        coherent: !both,
        full: either,
        standard: !both && either,
        trivial: all_pos && all_neg,
        degenerate: none,
    }
}

/// Classifies a finite logic over `universe`.
pub fn classify(l: &LogicPair, universe: &[Formula]) -> Classification {
    classify_with(universe, |f| l.asserted.contains(f), |f| l.rejected.contains(f))
}

/// A relation file: its universe and the pairs it lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationFile {
    pub universe: AtomUniverse,
    pub pairs: Vec<SetPair>,
}

/// Parses `universe {+p, -q}` followed by lines `{+p} |- {-q}`.
pub fn parse_relation(src: &str) -> Result<RelationFile, ParseError> {
    let mut lines = content_lines(src);
    let (line, col, text) = lines.next().ok_or_else(|| ParseError::new(1, 1, "expected `universe { ... }`"))?;
    let atoms = fragment(text, line, col, |p| {
        p.expect_keyword("universe")?;
        p.atom_set()
    })?;
    let universe = AtomUniverse::new(atoms).map_err(|e| ParseError::new(line, col, e.to_string()))?;
    let mut pairs = Vec::new();
    for (line, col, text) in lines {
        let pair = fragment(text, line, col, |p| {
            let gamma = p.atom_set()?;
            p.expect(&Tok::Turnstile)?;
            let delta = p.atom_set()?;
            for a in gamma.iter().chain(&delta) {
                if !universe.atoms.contains(a) {
                    return Err(p.error(format!("atom {a} is not in the universe")));
                }
            }
            Ok((gamma, delta))
        })?;
        pairs.push(pair);
    }
    Ok(RelationFile { universe, pairs })
}

pub fn print_relation(file: &RelationFile) -> String {
    let mut out = format!("universe {}\n", show_set(file.universe.atoms()));
    for (g, d) in &file.pairs {
        writeln!(out, "{} |- {}", show_set(g), show_set(d)).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_atom, parse_formula};

    fn atoms(src: &[&str]) -> Vec<Atom> {
        src.iter().map(|s| parse_atom(s).unwrap()).collect()
    }

    fn universe(src: &[&str]) -> AtomUniverse {
        AtomUniverse::new(atoms(src)).unwrap()
    }

    #[test]
    fn universe_limits() {
        assert!(matches!(
            AtomUniverse::new(atoms(&["+p", "+p"])),
            Err(ConsequenceError::DuplicateAtom(_))
        ));
        let many: Vec<Atom> = (0..9).map(|i| Atom::asserted(Formula::var(&format!("p{i}")))).collect();
        assert_eq!(
            AtomUniverse::new(many.clone()),
            Err(ConsequenceError::TooManyAtoms { found: 9, cap: 8 })
        );
        assert!(AtomUniverse::with_cap(many, 9).is_ok());
    }

    #[test]
    fn empty_seeds_give_overlap() {
        let rel = generate_relation(&[], universe(&["+p", "-p"])).unwrap();
        for (g, d) in rel.pairs() {
            assert!(g.iter().any(|a| d.contains(a)));
        }
        // 16 pairs of subsets of a two-element set, 7 of them disjoint.
        assert_eq!(rel.len(), 16 - 9);
    }

    #[test]
    fn chains_are_cut() {
        let u = universe(&["+p", "+q", "+r"]);
        let seeds = vec![(atoms(&["+p"]), atoms(&["+q"])), (atoms(&["+q"]), atoms(&["+r"]))];
        let rel = generate_relation(&seeds, u).unwrap();
        assert!(rel.holds(&atoms(&["+p"]), &atoms(&["+r"])).unwrap());
        assert!(rel.holds(&atoms(&["+p"]), &atoms(&["+q", "+r"])).unwrap());
        assert!(!rel.holds(&atoms(&["+r"]), &atoms(&["+p"])).unwrap());
        assert!(check_rmt(&rel).is_empty());
    }

    #[test]
    fn violations_are_named() {
        let u = universe(&["+p", "+q"]);
        let mut rel = generate_relation(&[], u.clone()).unwrap();
        rel.remove(&atoms(&["+p"]), &atoms(&["+p"])).unwrap();
        let v = check_rmt(&rel);
        assert!(v.iter().any(|v| v.law == Law::Reflexivity && v.pair == (atoms(&["+p"]), atoms(&["+p"]))));

        let seeds = vec![(vec![], atoms(&["+p"])), (atoms(&["+p"]), atoms(&["+q"]))];
        let mut rel = generate_relation(&seeds, u).unwrap();
        rel.remove(&[], &atoms(&["+q"])).unwrap();
        let v = check_rmt(&rel);
        assert!(v.iter().any(|v| v.law == Law::Cut && v.pair == (vec![], atoms(&["+q"]))));
    }

    #[test]
    fn minimal_relation_round_trip() {
        let u = universe(&["+(p -> p)", "-(p -> p)", "+p", "-p"]);
        let l = LogicPair::new([parse_formula("p -> p").unwrap()], [parse_formula("p").unwrap()]);
        let rel = min_relation_for_logic(&l, u);
        assert!(check_rmt(&rel).is_empty());
        assert!(rel.holds(&[], &atoms(&["+(p -> p)"])).unwrap());
        assert!(rel.holds(&[], &atoms(&["-p"])).unwrap());
        assert!(!rel.holds(&[], &atoms(&["+p"])).unwrap());
        assert_eq!(logic_of_relation(&rel), l);
        let c = classify(&l, &rel.universe().formulas());
        assert!(c.coherent && c.full && c.standard && !c.trivial && !c.degenerate);
    }

    #[test]
    fn classification_extremes() {
        let formulas = vec![parse_formula("p").unwrap(), parse_formula("q").unwrap()];
        let none = classify(&LogicPair::default(), &formulas);
        assert!(none.degenerate && none.coherent && !none.full);
        let all = LogicPair::new(formulas.clone(), formulas.clone());
        let c = classify(&all, &formulas);
        assert!(c.trivial && c.full && !c.coherent && !c.standard);
        let half = LogicPair::new([formulas[0].clone()], [formulas[0].clone()]);
        assert_eq!(classify(&half, &formulas).labels(), vec!["other"]);
        assert_eq!(logic_of_relation(&generate_relation(&[], universe(&["+p", "-q"])).unwrap()), LogicPair::default());
    }

    #[test]
    fn structural_instances() {
        let u = universe(&["+(p -> p)", "+(q -> q)", "-p", "-q", "-(p -> p)"]);
        let pp = parse_formula("p -> p").unwrap();
        let l = LogicPair::new([pp.clone(), parse_formula("q -> q").unwrap()], [Formula::var("p")]);
        let rel = min_relation_for_logic(&l, u);
        let s = Substitution::single("p", Formula::var("q"));
        assert!(check_structural_instance(&rel, &[], &atoms(&["+(p -> p)"]), &s).unwrap());
        assert!(check_structural_instance(&rel, &[], &atoms(&["-p"]), &Substitution::identity()).unwrap());
        // Rejection is only pulled back along substitutions: -p without
        // -(p -> p) is fine, -p without -q is not.
        let s = Substitution::single("p", pp);
        assert!(check_structural_instance(&rel, &[], &atoms(&["-p"]), &s).unwrap());
        let back = Substitution::single("q", Formula::var("p"));
        assert!(!check_structural_instance(&rel, &[], &atoms(&["-q"]), &back).unwrap());
        assert_eq!(
            check_structural_instance(&rel, &atoms(&["+(p -> p)"]), &atoms(&["-p"]), &s),
            Err(ConsequenceError::MixedPolarity)
        );
    }

    #[test]
    fn meet_requires_same_universe() {
        let a = generate_relation(&[], universe(&["+p"])).unwrap();
        let b = generate_relation(&[], universe(&["+q"])).unwrap();
        assert_eq!(a.meet(&b), Err(ConsequenceError::UniverseMismatch));
        assert!(a.meet(&a).unwrap().is_subset(&a));
    }

    #[test]
    fn relation_file_round_trip() {
        let src = "universe {+p, -q}  # header\n{+p} |- {-q}\n{} |- {+p}\n";
        let file = parse_relation(src).unwrap();
        assert_eq!(file.pairs.len(), 2);
        assert_eq!(parse_relation(&print_relation(&file)).unwrap(), file);
        let e = parse_relation("universe {+p}\n{+p} |- {+r}\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(parse_relation("{+p} |- {+p}\n").is_err());
    }
}
