use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroundAtom {
    pub predicate: String,
    pub args: Vec<String>,
}

impl GroundAtom {
    pub fn new<S: Into<String>>(predicate: impl Into<String>, args: impl IntoIterator<Item = S>) -> Self {
        GroundAtom { predicate: predicate.into(), args: args.into_iter().map(Into::into).collect() }
    }

    /// `holding a` form used in diagnostics.
    pub fn plain(&self) -> String {
        let mut s = self.predicate.clone();
        for a in &self.args {
            s.push(' ');
            s.push_str(a);
        }
        s
    }
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.plain())
    }
}

/// A closed-world state: the set of atoms that hold.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct State {
    atoms: BTreeSet<GroundAtom>,
}

impl State {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn contains(&self, atom: &GroundAtom) -> bool {
        self.atoms.contains(atom)
    }

    pub fn insert(&mut self, atom: GroundAtom) -> bool {
        self.atoms.insert(atom)
    }

    pub fn remove(&mut self, atom: &GroundAtom) -> bool {
        self.atoms.remove(atom)
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Atoms in sorted order.
    pub fn iter(&self) -> impl Iterator<Item = &GroundAtom> {
        self.atoms.iter()
    }
}

impl FromIterator<GroundAtom> for State {
    fn from_iter<I: IntoIterator<Item = GroundAtom>>(iter: I) -> Self {
        State { atoms: iter.into_iter().collect() }
    }
}
