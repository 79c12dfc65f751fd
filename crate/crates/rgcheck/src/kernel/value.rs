//! Values, variable names and bounded sequences.

use std::fmt;

/// A scalar value drawn from a declared finite universe.
///
/// `null` is an ordinary value: it is comparable for equality with every
/// other value and may appear inside sequences. Pushing `null` onto the
/// stack of the case studies is excluded only by that operation's
/// precondition, not by the type.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Value {
    Null,
    Int(i64),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Null => write!(f, "null"),
            Value::Int(n) => write!(f, "{n}"),
        }
    }
}

/// Identifier of a program or specification variable.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct VarName(pub String);

impl VarName {
    pub fn new(name: impl Into<String>) -> Self {
        VarName(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for VarName {
    fn from(s: &str) -> Self {
        VarName(s.to_string())
    }
}

impl fmt::Display for VarName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A finite sequence of values. Capacity bounds live in the declaration
/// ([`crate::kernel::VarKind::Seq`]); sequences exceeding a declared cap are
/// unrepresentable states rather than runtime errors.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct SeqVal(pub Vec<Value>);

impl SeqVal {
    pub fn empty() -> Self {
        SeqVal(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &SeqVal) -> SeqVal {
        let mut items = self.0.clone();
        items.extend_from_slice(&other.0);
        SeqVal(items)
    }

    pub fn append(&self, v: Value) -> SeqVal {
        let mut items = self.0.clone();
        items.push(v);
        SeqVal(items)
    }

    pub fn prepend(&self, v: Value) -> SeqVal {
        let mut items = Vec::with_capacity(self.0.len() + 1);
        items.push(v);
        items.extend_from_slice(&self.0);
        SeqVal(items)
    }

    /// `self` is an initial segment of `other`.
    pub fn prefix_of(&self, other: &SeqVal) -> bool {
        self.0.len() <= other.0.len() && other.0[..self.0.len()] == self.0[..]
    }

    /// `self` is a final segment of `other`.
    pub fn suffix_of(&self, other: &SeqVal) -> bool {
        self.0.len() <= other.0.len() && other.0[other.0.len() - self.0.len()..] == self.0[..]
    }

    pub fn head(&self) -> Option<Value> {
        self.0.first().copied()
    }

    pub fn tail(&self) -> Option<SeqVal> {
        if self.0.is_empty() {
            None
        } else {
            Some(SeqVal(self.0[1..].to_vec()))
        }
    }
}

impl fmt::Display for SeqVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}
