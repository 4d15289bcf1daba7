use std::fmt;

use crate::name::Name;
use crate::syntax::Type;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Binding {
    Term(Name, Type),
    Type(Name, Type),
}

impl Binding {
    pub fn name(&self) -> &Name {
        match self {
            Binding::Term(x, _) | Binding::Type(x, _) => x,
        }
    }
}

/// An ordered typing context. Later bindings may refer to earlier ones.
#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct Context {
    bindings: Vec<Binding>,
}

impl Context {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bindings(&self) -> &[Binding] {
        &self.bindings
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn push_term(&mut self, x: impl Into<Name>, ty: Type) {
        self.bindings.push(Binding::Term(x.into(), ty));
    }

    pub fn push_type(&mut self, x: impl Into<Name>, bound: Type) {
        self.bindings.push(Binding::Type(x.into(), bound));
    }

    pub fn with_term(&self, x: impl Into<Name>, ty: Type) -> Context {
        let mut out = self.clone();
        out.push_term(x, ty);
        out
    }

    pub fn with_type(&self, x: impl Into<Name>, bound: Type) -> Context {
        let mut out = self.clone();
        out.push_type(x, bound);
        out
    }

    pub fn binds(&self, x: &Name) -> bool {
        self.bindings.iter().any(|b| b.name() == x)
    }

    pub fn term_type(&self, x: &Name) -> Option<&Type> {
        self.bindings.iter().rev().find_map(|b| match b {
            Binding::Term(y, t) if y == x => Some(t),
            _ => None,
        })
    }

    pub fn type_bound(&self, x: &Name) -> Option<&Type> {
        self.bindings.iter().rev().find_map(|b| match b {
            Binding::Type(y, t) if y == x => Some(t),
            _ => None,
        })
    }

    /// Term-bound names, in binding order.
    pub fn term_names(&self) -> impl Iterator<Item = &Name> {
        self.bindings.iter().filter_map(|b| match b {
            Binding::Term(x, _) => Some(x),
            Binding::Type(..) => None,
        })
    }

    /// Whether every binding is a term binding.
    pub fn only_term_bindings(&self) -> bool {
        self.bindings.iter().all(|b| matches!(b, Binding::Term(..)))
    }

    /// Prefix of the context before binding `i`.
    pub fn prefix(&self, i: usize) -> Context {
        Context {
            bindings: self.bindings[..i].to_vec(),
        }
    }

    /// A variant of `x` not bound here and not satisfying `avoid`.
    pub fn fresh_for(&self, x: &Name, avoid: impl Fn(&Name) -> bool) -> Name {
        if !self.binds(x) && !avoid(x) {
            return x.clone();
        }
        x.fresh(|n| self.binds(n) || avoid(n))
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.bindings.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            match b {
                Binding::Term(x, t) => write!(f, "{x}: {t}")?,
                Binding::Type(x, t) => write!(f, "{x} <: {t}")?,
            }
        }
        Ok(())
    }
}
