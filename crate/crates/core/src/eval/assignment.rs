use super::EvalError;
use crate::measure::MeasureSpace;
use crate::sets::CondSet;
use crate::values::CondNat;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;

/// A conditional assignment `β`: number variables to `L⁰(ℕ)`, set variables
/// to `𝒫`.
///
/// Maps are shared; `with_*` builds the variant `β[v/x]` without copying
/// values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    atom_count: usize,
    num: Arc<BTreeMap<String, CondNat>>,
    set: Arc<BTreeMap<String, CondSet>>,
}

impl Assignment {
    pub fn new(space: &MeasureSpace) -> Self {
        Self::with_atoms(space.atom_count())
    }

    pub fn with_atoms(atom_count: usize) -> Self {
        Self { atom_count, num: Arc::default(), set: Arc::default() }
    }

    pub fn atom_count(&self) -> usize {
        self.atom_count
    }

    pub fn num(&self, name: &str) -> Option<&CondNat> {
        self.num.get(name)
    }

    pub fn set(&self, name: &str) -> Option<&CondSet> {
        self.set.get(name)
    }

    pub fn nums(&self) -> impl Iterator<Item = (&String, &CondNat)> {
        self.num.iter()
    }

    pub fn sets(&self) -> impl Iterator<Item = (&String, &CondSet)> {
        self.set.iter()
    }

    /// `β[value/name]`.
    pub fn with_num(&self, name: &str, value: CondNat) -> Result<Self, EvalError> {
        self.check(name, value.atom_count())?;
        let mut next = self.clone();
        Arc::make_mut(&mut next.num).insert(name.to_string(), value);
        Ok(next)
    }

    /// `β[value/name]` for a set variable.
    pub fn with_set(&self, name: &str, value: CondSet) -> Result<Self, EvalError> {
        self.check(name, value.atom_count())?;
        let mut next = self.clone();
        Arc::make_mut(&mut next.set).insert(name.to_string(), value);
        Ok(next)
    }

    fn check(&self, name: &str, found: usize) -> Result<(), EvalError> {
        if found != self.atom_count {
            return Err(EvalError::SpaceMismatch { name: name.to_string(), expected: self.atom_count, found });
        }
        Ok(())
    }

    pub fn from_file(space: &MeasureSpace, file: AssignmentFile) -> Result<Self, EvalError> {
        let mut beta = Self::new(space);
        for (name, value) in file.num {
            if crate::formula::is_set_name(&name) {
                return Err(EvalError::Assignment(format!("`{name}` is not a number variable")));
            }
            beta = beta.with_num(&name, value)?;
        }
        for (name, value) in file.set {
            if !crate::formula::is_set_name(&name) {
                return Err(EvalError::Assignment(format!("`{name}` is not a set variable")));
            }
            beta = beta.with_set(&name, value)?;
        }
        Ok(beta)
    }

    pub fn from_json(space: &MeasureSpace, text: &str) -> Result<Self, EvalError> {
        let file: AssignmentFile = serde_json::from_str(text).map_err(|e| EvalError::Assignment(e.to_string()))?;
        Self::from_file(space, file)
    }

    pub fn to_file(&self) -> AssignmentFile {
        AssignmentFile { num: (*self.num).clone(), set: (*self.set).clone() }
    }
}

/// `{"num": {"y": ["2","3"]}, "set": {"X": {"carrier": [0], "fibers": [...]}}}`
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssignmentFile {
    #[serde(default)]
    pub num: BTreeMap<String, CondNat>,
    #[serde(default)]
    pub set: BTreeMap<String, CondSet>,
}
