//! Capture sets and their algebra.
//!
//! A capture set is either the universal set `{*}` or a finite set of term
//! variables. The universal set absorbs unions and survives differences;
//! a concrete set minus the universal set is empty.

use std::collections::BTreeSet;
use std::fmt;

use crate::name::Name;

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum CaptureSet {
    Universal,
    Concrete(BTreeSet<Name>),
}

impl CaptureSet {
    pub fn empty() -> Self {
        CaptureSet::Concrete(BTreeSet::new())
    }

    pub fn singleton(x: Name) -> Self {
        CaptureSet::Concrete(BTreeSet::from([x]))
    }

    pub fn of<I, N>(names: I) -> Self
    where
        I: IntoIterator<Item = N>,
        N: Into<Name>,
    {
        CaptureSet::Concrete(names.into_iter().map(Into::into).collect())
    }

    pub fn is_universal(&self) -> bool {
        matches!(self, CaptureSet::Universal)
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, CaptureSet::Concrete(s) if s.is_empty())
    }

    /// Membership, where the universal set contains every variable.
    pub fn contains(&self, x: &Name) -> bool {
        match self {
            CaptureSet::Universal => true,
            CaptureSet::Concrete(s) => s.contains(x),
        }
    }

    /// Names listed explicitly. Empty for the universal set.
    pub fn names(&self) -> impl Iterator<Item = &Name> {
        match self {
            CaptureSet::Universal => None,
            CaptureSet::Concrete(s) => Some(s.iter()),
        }
        .into_iter()
        .flatten()
    }

    pub fn union(&self, other: &CaptureSet) -> CaptureSet {
        match (self, other) {
            (CaptureSet::Concrete(a), CaptureSet::Concrete(b)) => {
                CaptureSet::Concrete(a.union(b).cloned().collect())
            }
            _ => CaptureSet::Universal,
        }
    }

    pub fn minus(&self, other: &CaptureSet) -> CaptureSet {
        match (self, other) {
            (CaptureSet::Universal, _) => CaptureSet::Universal,
            (CaptureSet::Concrete(_), CaptureSet::Universal) => CaptureSet::empty(),
            (CaptureSet::Concrete(a), CaptureSet::Concrete(b)) => {
                CaptureSet::Concrete(a.difference(b).cloned().collect())
            }
        }
    }

    /// `[x := c] self`: replaces `x` by the members of `c` when `x` is present.
    pub fn subst(&self, x: &Name, c: &CaptureSet) -> CaptureSet {
        if self.contains(x) {
            self.minus(&CaptureSet::singleton(x.clone())).union(c)
        } else {
            self.clone()
        }
    }

    /// Plain set inclusion (no dereferencing through a context).
    pub fn is_subset(&self, other: &CaptureSet) -> bool {
        match (self, other) {
            (_, CaptureSet::Universal) => true,
            (CaptureSet::Universal, CaptureSet::Concrete(_)) => false,
            (CaptureSet::Concrete(a), CaptureSet::Concrete(b)) => a.is_subset(b),
        }
    }
}

impl From<BTreeSet<Name>> for CaptureSet {
    fn from(s: BTreeSet<Name>) -> Self {
        CaptureSet::Concrete(s)
    }
}

impl fmt::Display for CaptureSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaptureSet::Universal => f.write_str("{*}"),
            CaptureSet::Concrete(s) => {
                f.write_str("{")?;
                for (i, x) in s.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str("}")
            }
        }
    }
}

impl fmt::Debug for CaptureSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cs(names: &[&str]) -> CaptureSet {
        CaptureSet::of(names.iter().copied())
    }

    #[test]
    fn union_with_universal_is_universal() {
        assert_eq!(
            cs(&["x"]).union(&CaptureSet::Universal),
            CaptureSet::Universal
        );
        assert_eq!(
            CaptureSet::Universal.union(&cs(&["x"])),
            CaptureSet::Universal
        );
    }

    #[test]
    fn universal_minus_anything_is_universal() {
        assert_eq!(
            CaptureSet::Universal.minus(&cs(&["x"])),
            CaptureSet::Universal
        );
        assert_eq!(
            CaptureSet::Universal.minus(&CaptureSet::Universal),
            CaptureSet::Universal
        );
    }

    #[test]
    fn concrete_difference() {
        assert_eq!(cs(&["x", "y"]).minus(&cs(&["x"])), cs(&["y"]));
        assert_eq!(cs(&["x", "y"]).minus(&CaptureSet::Universal), cs(&[]));
    }

    #[test]
    fn subst_cases() {
        let x = Name::new("x");
        assert_eq!(cs(&["x", "z"]).subst(&x, &cs(&["y"])), cs(&["y", "z"]));
        assert_eq!(cs(&["z"]).subst(&x, &cs(&["y"])), cs(&["z"]));
        assert_eq!(
            cs(&["x"]).subst(&x, &CaptureSet::Universal),
            CaptureSet::Universal
        );
        assert_eq!(
            CaptureSet::Universal.subst(&x, &cs(&["y"])),
            CaptureSet::Universal
        );
    }

    #[test]
    fn display() {
        assert_eq!(cs(&[]).to_string(), "{}");
        assert_eq!(cs(&["y", "x"]).to_string(), "{x, y}");
        assert_eq!(CaptureSet::Universal.to_string(), "{*}");
    }

    fn arb_set() -> impl Strategy<Value = CaptureSet> {
        prop_oneof![
            1 => Just(CaptureSet::Universal),
            4 => prop::collection::btree_set(prop::sample::select(vec!["a", "b", "c", "d"]), 0..4)
                .prop_map(CaptureSet::of),
        ]
    }

    proptest! {
        #[test]
        fn union_laws(a in arb_set(), b in arb_set(), c in arb_set()) {
            prop_assert_eq!(a.union(&b), b.union(&a));
            prop_assert_eq!(a.union(&b).union(&c), a.union(&b.union(&c)));
            prop_assert_eq!(a.union(&a), a.clone());
        }

        #[test]
        fn identity_substitution(a in arb_set(), x in prop::sample::select(vec!["a", "b", "z"])) {
            let x = Name::new(x);
            prop_assert_eq!(a.subst(&x, &CaptureSet::singleton(x.clone())), a);
        }
    }
}
