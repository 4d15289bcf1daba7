use std::fmt;
use std::sync::Arc;

/// An identifier for a term or type variable.
///
/// Term and type variables live in separate syntactic positions, but the
/// renaming machinery treats them as one namespace so that a fresh name is
/// never confused with anything already in scope.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Name(Arc<str>);

impl Name {
    pub fn new(s: impl AsRef<str>) -> Self {
        Name(Arc::from(s.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The name with any `'N` freshening suffix removed.
    pub fn stem(&self) -> &str {
        match self.0.rfind('\'') {
            Some(i) if i > 0 && self.0[i + 1..].chars().all(|c| c.is_ascii_digit()) => &self.0[..i],
            _ => &self.0,
        }
    }

    /// First variant `stem'1`, `stem'2`, ... for which `taken` answers false.
    ///
    /// Deterministic: the result depends only on `self` and `taken`.
    pub fn fresh(&self, taken: impl Fn(&Name) -> bool) -> Name {
        let stem = self.stem();
        (1usize..)
            .map(|n| Name::new(format!("{stem}'{n}")))
            .find(|candidate| !taken(candidate))
            .expect("unbounded counter")
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Self {
        Name::new(s)
    }
}

impl From<String> for Name {
    fn from(s: String) -> Self {
        Name::new(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_skips_taken_names() {
        let x = Name::new("x");
        let taken = [Name::new("x'1"), Name::new("x'2")];
        assert_eq!(x.fresh(|n| taken.contains(n)).as_str(), "x'3");
    }

    #[test]
    fn fresh_restarts_from_stem() {
        let x = Name::new("x'7");
        assert_eq!(x.stem(), "x");
        assert_eq!(x.fresh(|_| false).as_str(), "x'1");
        assert_eq!(Name::new("don't").stem(), "don't");
    }
}
