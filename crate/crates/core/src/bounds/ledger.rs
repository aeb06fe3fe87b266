use std::collections::{HashMap, HashSet};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::form::BoundForm;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Axiom,
    Derived,
}

/// One ledger record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub id: String,
    pub role: Role,
    pub form: BoundForm,
}

/// Axioms and derived bounds, in insertion order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Ledger {
    entries: Vec<Entry>,
    index: HashMap<String, usize>,
}

impl Ledger {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a bound; derived bounds must cite earlier entries, axioms a source.
    pub fn insert(&mut self, id: &str, form: BoundForm) -> Result<()> {
        if id.is_empty() {
            return Err(Error::Plan("empty entry id".into()));
        }
        if self.index.contains_key(id) {
            return Err(Error::Plan(format!("duplicate entry id {:?}", id)));
        }
        form.validate()?;
        let role = if form.provenance.is_axiom() {
            if form.provenance.citation.as_deref().is_none_or(str::is_empty) {
                return Err(Error::Plan(format!("axiom {:?} needs a citation", id)));
            }
            Role::Axiom
        } else {
            if form.provenance.inputs.is_empty() {
                return Err(Error::Plan(format!("derived entry {:?} lists no inputs", id)));
            }
            for i in &form.provenance.inputs {
                if !self.index.contains_key(i) {
                    return Err(Error::Plan(format!("entry {:?} cites unknown input {:?}", id, i)));
                }
            }
            Role::Derived
        };
        self.index.insert(id.to_string(), self.entries.len());
        self.entries.push(Entry { id: id.to_string(), role, form });
        Ok(())
    }

    pub fn get(&self, id: &str) -> Result<&BoundForm> {
        self.index
            .get(id)
            .map(|&i| &self.entries[i].form)
            .ok_or_else(|| Error::Plan(format!("no ledger entry {:?}", id)))
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn axioms(&self) -> impl Iterator<Item = &Entry> {
        self.entries.iter().filter(|e| e.role == Role::Axiom)
    }

    pub fn derived(&self) -> impl Iterator<Item = &Entry> {
        self.entries.iter().filter(|e| e.role == Role::Derived)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The entries `id` depends on, axioms first, ending with `id`.
    pub fn chain(&self, id: &str) -> Result<Vec<&Entry>> {
        self.get(id)?;
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        self.visit(id, &mut seen, &mut out);
        out.sort_by_key(|e| self.index[&e.id]);
        Ok(out)
    }

    fn visit<'a>(&'a self, id: &str, seen: &mut HashSet<String>, out: &mut Vec<&'a Entry>) {
        if !seen.insert(id.to_string()) {
            return;
        }
        let e = &self.entries[self.index[id]];
        for i in &e.form.provenance.inputs {
            self.visit(i, seen, out);
        }
        out.push(e);
    }

    /// Every derived entry's inputs precede it and its chain ends in axioms.
    pub fn validate(&self) -> Result<()> {
        for (k, e) in self.entries.iter().enumerate() {
            e.form.validate()?;
            match e.role {
                Role::Axiom => {
                    if !e.form.provenance.is_axiom() || e.form.provenance.citation.is_none() {
                        return Err(Error::Plan(format!("axiom {:?} lacks a citation", e.id)));
                    }
                }
                Role::Derived => {
                    if e.form.provenance.inputs.is_empty() {
                        return Err(Error::Plan(format!("derived entry {:?} lists no inputs", e.id)));
                    }
                    for i in &e.form.provenance.inputs {
                        match self.index.get(i) {
                            Some(&p) if p < k => {}
                            _ => {
                                return Err(Error::Plan(format!(
                                    "entry {:?} cites {:?} which does not precede it",
                                    e.id, i
                                )))
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// One JSON object per line, fields in declaration order.
    pub fn to_jsonl(&self) -> Result<String> {
        let mut s = String::new();
        for e in &self.entries {
            s.push_str(&serde_json::to_string(e).map_err(|err| Error::InvalidArgument(err.to_string()))?);
            s.push('\n');
        }
        Ok(s)
    }

    pub fn from_jsonl(text: &str) -> Result<Self> {
        let mut l = Ledger::new();
        for (n, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let e: Entry = serde_json::from_str(line)
                .map_err(|err| Error::InvalidArgument(format!("ledger line {}: {}", n + 1, err)))?;
            let expected = if e.form.provenance.is_axiom() { Role::Axiom } else { Role::Derived };
            if e.role != expected {
                return Err(Error::InvalidArgument(format!("ledger line {}: role does not match provenance", n + 1)));
            }
            l.insert(&e.id, e.form)?;
        }
        Ok(l)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_jsonl()?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_jsonl(&fs::read_to_string(path)?)
    }
}
