//! Certified lemmas, per deductive system.
//!
//! A lemma enters the store only through [`LemmaStore::certify`], which
//! checks its derivation (without premises) against the system and the
//! lemmas already on file. On disk a store is a directory holding an
//! `index` file with lines `<system> <name>` in certification order and one
//! derivation file `<system>/<name>.mld` per lemma; loading re-certifies
//! every entry in order.

use std::collections::HashMap;
use std::fs;
use std::io;
use std::path::Path;

use thiserror::Error;

use super::format::{parse_derivation, print_derivation};
use super::{check_derivation, DeductiveSystem, Derivation, Rejection};
use crate::statement::Statement;
use crate::syntax::ParseError;

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("lemma `{0}` has premises")]
    HasPremises(String),
    #[error("lemma `{name}` rejected: {rejection}")]
    Rejected { name: String, rejection: Rejection },
    #[error("lemma `{name}` already stands for {existing}")]
    NameTaken { name: String, existing: Statement },
    #[error("invalid lemma name `{0}`")]
    BadName(String),
    #[error("lemma file for `{name}`: {error}")]
    Parse { name: String, error: ParseError },
    #[error("lemma `{name}` belongs to unknown system `{system}`")]
    UnknownSystem { system: String, name: String },
    #[error("lemma `{0}` was certified without keeping its derivation")]
    NotRetained(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Clone, Debug)]
struct Lemma {
    statement: Statement,
    derivation: Option<Derivation>,
}

#[derive(Clone, Debug, Default)]
struct Shelf {
    by_name: HashMap<String, Lemma>,
    by_statement: HashMap<Statement, String>,
    order: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct LemmaStore {
    shelves: HashMap<String, Shelf>,
    retain: bool,
}

impl Default for LemmaStore {
    fn default() -> Self {
        LemmaStore::new()
    }
}

pub(crate) fn valid_lemma_name(name: &str) -> bool {
    !name.is_empty()
        && name.chars().all(|c| c.is_ascii_alphanumeric() || "_.:-".contains(c))
}

impl LemmaStore {
    /// An empty store that keeps every certified derivation.
    pub fn new() -> Self {
        LemmaStore { shelves: HashMap::new(), retain: true }
    }

    /// Whether derivations are kept after certification. Dropping them
    /// saves memory in bulk runs; such lemmas cannot be saved.
    pub fn set_retain(&mut self, retain: bool) {
        self.retain = retain;
    }

    pub fn get(&self, system: &str, name: &str) -> Option<&Statement> {
        self.shelves.get(system)?.by_name.get(name).map(|l| &l.statement)
    }

    /// The name of a lemma for `a`, if one is certified.
    pub fn find(&self, system: &str, a: &Statement) -> Option<&str> {
        self.shelves.get(system)?.by_statement.get(a).map(String::as_str)
    }

    pub fn derivation(&self, system: &str, name: &str) -> Option<&Derivation> {
        self.shelves.get(system)?.by_name.get(name)?.derivation.as_ref()
    }

    /// Lemma names of `system` in certification order.
    pub fn names(&self, system: &str) -> Vec<&str> {
        self.shelves
            .get(system)
            .map(|s| s.order.iter().map(String::as_str).collect())
            .unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.shelves.values().map(|s| s.order.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Checks `d` and files its conclusion as lemma `name` of `ds`.
    /// Re-certifying a name for the same statement is a no-op.
    pub fn certify(&mut self, ds: &DeductiveSystem, name: &str, d: Derivation) -> Result<(), StoreError> {
        if !valid_lemma_name(name) {
            return Err(StoreError::BadName(name.to_string()));
        }
        if !d.premises.is_empty() {
            return Err(StoreError::HasPremises(name.to_string()));
        }
        check_derivation(ds, &d, self).map_err(|rejection| StoreError::Rejected {
            name: name.to_string(),
            rejection,
        })?;
        let statement = d.conclusion().expect("checked derivations are non-empty").clone();
        let shelf = self.shelves.entry(ds.name.clone()).or_default();
        if let Some(existing) = shelf.by_name.get(name) {
            if existing.statement == statement {
                return Ok(());
            }
            return Err(StoreError::NameTaken {
                name: name.to_string(),
                existing: existing.statement.clone(),
            });
        }
        shelf.by_statement.entry(statement.clone()).or_insert_with(|| name.to_string());
        shelf.order.push(name.to_string());
        let derivation = self.retain.then_some(d);
        shelf.by_name.insert(name.to_string(), Lemma { statement, derivation });
        Ok(())
    }

    /// Writes every lemma with its derivation under `dir`.
    pub fn save(&self, dir: &Path) -> Result<(), StoreError> {
        fs::create_dir_all(dir)?;
        let mut systems: Vec<&String> = self.shelves.keys().collect();
        systems.sort();
        let mut index = String::new();
        for system in systems {
            let shelf = &self.shelves[system];
            let sub = dir.join(system);
            fs::create_dir_all(&sub)?;
            for name in &shelf.order {
                let d = shelf.by_name[name]
                    .derivation
                    .as_ref()
                    .ok_or_else(|| StoreError::NotRetained(name.clone()))?;
                fs::write(sub.join(format!("{name}.mld")), print_derivation(system, d))?;
                index.push_str(&format!("{system} {name}\n"));
            }
        }
        fs::write(dir.join("index"), index)?;
        Ok(())
    }

    /// Re-certifies the lemmas saved under `dir`. A missing directory is an
    /// empty store.
    pub fn load(&mut self, dir: &Path, systems: &[&DeductiveSystem]) -> Result<usize, StoreError> {
        let index = match fs::read_to_string(dir.join("index")) {
            Ok(s) => s,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(0),
            Err(e) => return Err(e.into()),
        };
        let mut count = 0;
        for line in index.lines().filter(|l| !l.trim().is_empty()) {
            let (system, name) = line.trim().split_once(' ').unwrap_or((line.trim(), ""));
            if !valid_lemma_name(name) || !valid_lemma_name(system) {
                return Err(StoreError::BadName(line.to_string()));
            }
            let ds = systems.iter().find(|s| s.name == system).ok_or_else(|| {
                StoreError::UnknownSystem { system: system.to_string(), name: name.to_string() }
            })?;
            let src = fs::read_to_string(dir.join(system).join(format!("{name}.mld")))?;
            let file = parse_derivation(&src)
                .map_err(|error| StoreError::Parse { name: name.to_string(), error })?;
            self.certify(ds, name, file.derivation)?;
            count += 1;
        }
        Ok(count)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deduction::{Justification, MetaAxiom, MetaBinding};
    use crate::formula::Signature;
    use crate::syntax::parse_statement;

    fn one_step(s: &str) -> Derivation {
        let mut d = Derivation::default();
        d.push(parse_statement(s).unwrap(), Justification::MetaAxiom(MetaAxiom::K(1), MetaBinding::new()));
        d
    }

    #[test]
    fn certify_and_lookup() {
        let ds = DeductiveSystem::new("t", Signature::default());
        let mut store = LemmaStore::new();
        store.certify(&ds, "k", one_step("+p => (+q => +p)")).unwrap();
        let a = parse_statement("+p => (+q => +p)").unwrap();
        assert_eq!(store.get("t", "k"), Some(&a));
        assert_eq!(store.find("t", &a), Some("k"));
        assert!(store.get("other", "k").is_none());
        assert!(matches!(
            store.certify(&ds, "k", one_step("+q => (+q => +q)")),
            Err(StoreError::NameTaken { .. })
        ));
        assert!(matches!(
            store.certify(&ds, "bad", one_step("+p => +q")),
            Err(StoreError::Rejected { .. })
        ));
        assert!(matches!(store.certify(&ds, "a b", one_step("+p => (+q => +p)")), Err(StoreError::BadName(_))));
    }

    #[test]
    fn save_and_reload() {
        let ds = DeductiveSystem::new("t", Signature::default());
        let mut store = LemmaStore::new();
        store.certify(&ds, "k", one_step("+p => (+q => +p)")).unwrap();
        let mut d = Derivation::default();
        d.push(parse_statement("+p => (+q => +p)").unwrap(), Justification::Lemma("k".into()));
        store.certify(&ds, "k2", d).unwrap();
        let dir = std::env::temp_dir().join(format!("metalogic-store-{}", std::process::id()));
        store.save(&dir).unwrap();
        let mut fresh = LemmaStore::new();
        assert_eq!(fresh.load(&dir, &[&ds]).unwrap(), 2);
        assert_eq!(fresh.names("t"), vec!["k", "k2"]);
        fs::remove_dir_all(&dir).unwrap();
    }
}
