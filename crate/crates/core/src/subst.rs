//! Capture-avoiding substitutions.
//!
//! Three substitutions share one traversal:
//!
//! * `[x := v]` replaces a term variable in term position,
//! * `[x := C]` replaces a term variable inside capture sets,
//! * `[X := S]` replaces a type variable.
//!
//! Binders whose name would capture a free name of the replacement are
//! renamed, but only when the substituted variable actually occurs below
//! them, so untouched terms keep their source names.

use crate::capture::CaptureSet;
use crate::name::Name;
use crate::syntax::{FreeNames, Pretype, Term, Type};

#[derive(Clone, Copy)]
enum Replacement<'a> {
    Term(&'a Term),
    Capture(&'a CaptureSet),
    Type(&'a Type),
    /// Term variable renaming, applied in term positions and capture sets.
    Rename(&'a Name),
}

struct Subst<'a> {
    target: &'a Name,
    repl: Replacement<'a>,
    repl_free: FreeNames,
}

impl<'a> Subst<'a> {
    fn new(target: &'a Name, repl: Replacement<'a>) -> Self {
        let repl_free = match repl {
            Replacement::Term(t) => t.free_names(),
            Replacement::Capture(c) => FreeNames {
                terms: c.names().cloned().collect(),
                types: Default::default(),
            },
            Replacement::Type(t) => t.free_names(),
            Replacement::Rename(n) => FreeNames {
                terms: [n.clone()].into(),
                types: Default::default(),
            },
        };
        Subst {
            target,
            repl,
            repl_free,
        }
    }

    fn targets_term_var(&self) -> bool {
        !matches!(self.repl, Replacement::Type(_))
    }

    fn target_free_in(&self, free: &FreeNames) -> bool {
        if self.targets_term_var() {
            free.terms.contains(self.target)
        } else {
            free.types.contains(self.target)
        }
    }

    fn cset(&self, c: &CaptureSet) -> CaptureSet {
        match self.repl {
            Replacement::Capture(r) => c.subst(self.target, r),
            Replacement::Rename(n) => c.subst(self.target, &CaptureSet::singleton(n.clone())),
            _ => c.clone(),
        }
    }

    /// Replacement for a name in a term-position slot that must stay a name
    /// (`new x`, `do x`, pointer regions). Only variable replacements apply;
    /// a non-variable value leaves the slot unchanged, and the now-unbound
    /// name makes evaluation stop with an unbound-capability error.
    fn name_slot(&self, x: &Name) -> Name {
        if x != self.target {
            return x.clone();
        }
        match self.repl {
            Replacement::Term(Term::Var(y)) | Replacement::Rename(y) => y.clone(),
            _ => x.clone(),
        }
    }

    fn ty(&self, t: &Type) -> Type {
        match t {
            Type::Var(x) => match self.repl {
                Replacement::Type(s) if x == self.target => s.clone(),
                _ => t.clone(),
            },
            Type::Capt(c, u) => Type::Capt(self.cset(c), Box::new(self.pretype(u))),
        }
    }

    fn pretype(&self, u: &Pretype) -> Pretype {
        match u {
            Pretype::Top | Pretype::Bottom | Pretype::Base(_) | Pretype::Region => u.clone(),
            Pretype::Fun {
                param,
                param_ty,
                result,
            } => {
                let param_ty = self.ty(param_ty);
                let (param, result) = self.under_term_binders(&[param], result);
                Pretype::Fun {
                    param: param.into_iter().next().unwrap(),
                    param_ty,
                    result,
                }
            }
            Pretype::TFun {
                param,
                bound,
                result,
            } => {
                let bound = self.ty(bound);
                let (param, result) = self.under_type_binder(param, result);
                Pretype::TFun {
                    param,
                    bound,
                    result,
                }
            }
            Pretype::Return(t) => Pretype::Return(self.ty(t)),
            Pretype::Ptr(t) => Pretype::Ptr(self.ty(t)),
            Pretype::Eff(a, b) => Pretype::Eff(self.ty(a), self.ty(b)),
        }
    }

    fn term(&self, t: &Term) -> Term {
        match t {
            Term::Var(x) => match self.repl {
                Replacement::Term(v) if x == self.target => v.clone(),
                Replacement::Rename(n) if x == self.target => Term::Var(n.clone()),
                _ => t.clone(),
            },
            Term::Abs {
                param,
                param_ty,
                body,
            } => {
                let param_ty = self.ty(param_ty);
                let (mut names, body) = self.under_term_binders(&[param], &**body);
                Term::Abs {
                    param: names.remove(0),
                    param_ty,
                    body: Box::new(body),
                }
            }
            Term::TAbs { param, bound, body } => {
                let bound = self.ty(bound);
                let (param, body) = self.under_type_binder(param, &**body);
                Term::TAbs {
                    param,
                    bound,
                    body: Box::new(body),
                }
            }
            Term::App(f, a) => Term::App(Box::new(self.term(f)), Box::new(self.term(a))),
            Term::TApp(f, s) => Term::TApp(Box::new(self.term(f)), self.ty(s)),
            Term::Handle { cap, answer, body } => {
                let answer = self.ty(answer);
                let (mut names, body) = self.under_term_binders(&[cap], &**body);
                Term::Handle {
                    cap: names.remove(0),
                    answer,
                    body: Box::new(body),
                }
            }
            Term::Return { cap, value } => Term::Return {
                cap: Box::new(self.term(cap)),
                value: Box::new(self.term(value)),
            },
            Term::Region { handle, body } => {
                let (mut names, body) = self.under_term_binders(&[handle], &**body);
                Term::Region {
                    handle: names.remove(0),
                    body: Box::new(body),
                }
            }
            Term::New { region, elem, init } => Term::New {
                region: self.name_slot(region),
                elem: self.ty(elem),
                init: Box::new(self.term(init)),
            },
            Term::Deref(t) => Term::Deref(Box::new(self.term(t))),
            Term::HandleEff {
                cap,
                eff,
                arg,
                kont,
                handler,
                body,
            } => {
                let eff = self.ty(eff);
                let (mut hnames, handler) = self.under_term_binders(&[arg, kont], &**handler);
                let (mut bnames, body) = self.under_term_binders(&[cap], &**body);
                let kont = hnames.pop().unwrap();
                let arg = hnames.pop().unwrap();
                Term::HandleEff {
                    cap: bnames.remove(0),
                    eff,
                    arg,
                    kont,
                    handler: Box::new(handler),
                    body: Box::new(body),
                }
            }
            Term::Do { cap, arg } => Term::Do {
                cap: self.name_slot(cap),
                arg: Box::new(self.term(arg)),
            },
            Term::Ptr { loc, region, elem } => Term::Ptr {
                loc: *loc,
                region: self.name_slot(region),
                elem: self.ty(elem),
            },
        }
    }

    fn under_term_binders<S: Scope>(&self, binders: &[&Name], scope: &S) -> (Vec<Name>, S) {
        let names: Vec<Name> = binders.iter().map(|n| (*n).clone()).collect();
        if self.targets_term_var() && binders.contains(&self.target) {
            return (names, scope.clone());
        }
        let free = scope.free_names();
        if !self.target_free_in(&free) {
            return (names, scope.clone());
        }
        let mut scope = scope.clone();
        let mut out = Vec::with_capacity(names.len());
        for (i, y) in names.iter().enumerate() {
            if self.repl_free.terms.contains(y) {
                let fresh = y.fresh(|n| {
                    n == self.target
                        || self.repl_free.contains_any(n)
                        || free.contains_any(n)
                        || names.contains(n)
                        || out.contains(n)
                });
                // Later binders shadow earlier ones of the same name.
                if !names[i + 1..].contains(y) {
                    scope = scope.rename_term(y, &fresh);
                }
                out.push(fresh);
            } else {
                out.push(y.clone());
            }
        }
        (out, scope.apply(self))
    }

    fn under_type_binder<S: Scope>(&self, binder: &Name, scope: &S) -> (Name, S) {
        if !self.targets_term_var() && binder == self.target {
            return (binder.clone(), scope.clone());
        }
        let free = scope.free_names();
        if !self.target_free_in(&free) {
            return (binder.clone(), scope.clone());
        }
        if self.repl_free.types.contains(binder) {
            let fresh = binder.fresh(|n| {
                n == self.target || self.repl_free.contains_any(n) || free.contains_any(n)
            });
            let renamed = scope.rename_type(binder, &fresh);
            (fresh, renamed.apply(self))
        } else {
            (binder.clone(), scope.apply(self))
        }
    }
}

trait Scope: Clone {
    fn free_names(&self) -> FreeNames;
    fn apply(&self, s: &Subst<'_>) -> Self;
    fn rename_term(&self, from: &Name, to: &Name) -> Self {
        self.apply(&Subst::new(from, Replacement::Rename(to)))
    }
    fn rename_type(&self, from: &Name, to: &Name) -> Self {
        let to = Type::Var(to.clone());
        self.apply(&Subst::new(from, Replacement::Type(&to)))
    }
}

impl Scope for Term {
    fn free_names(&self) -> FreeNames {
        Term::free_names(self)
    }
    fn apply(&self, s: &Subst<'_>) -> Self {
        s.term(self)
    }
}

impl Scope for Type {
    fn free_names(&self) -> FreeNames {
        Type::free_names(self)
    }
    fn apply(&self, s: &Subst<'_>) -> Self {
        s.ty(self)
    }
}

impl Type {
    /// `[x := c] self`
    pub fn subst_capt(&self, x: &Name, c: &CaptureSet) -> Type {
        Subst::new(x, Replacement::Capture(c)).ty(self)
    }

    /// `[X := s] self`
    pub fn subst_type(&self, x: &Name, s: &Type) -> Type {
        Subst::new(x, Replacement::Type(s)).ty(self)
    }

    /// Renames the free term variable `from` to `to` in capture sets.
    pub fn rename_term_var(&self, from: &Name, to: &Name) -> Type {
        Subst::new(from, Replacement::Rename(to)).ty(self)
    }
}

impl Pretype {
    pub fn subst_capt(&self, x: &Name, c: &CaptureSet) -> Pretype {
        Subst::new(x, Replacement::Capture(c)).pretype(self)
    }

    pub fn subst_type(&self, x: &Name, s: &Type) -> Pretype {
        Subst::new(x, Replacement::Type(s)).pretype(self)
    }
}

impl Term {
    /// `[x := v] self`, term positions only.
    pub fn subst_term(&self, x: &Name, v: &Term) -> Term {
        Subst::new(x, Replacement::Term(v)).term(self)
    }

    /// `[x := c] self`, capture sets in type positions only.
    pub fn subst_capt(&self, x: &Name, c: &CaptureSet) -> Term {
        Subst::new(x, Replacement::Capture(c)).term(self)
    }

    /// `[X := s] self`
    pub fn subst_type(&self, x: &Name, s: &Type) -> Term {
        Subst::new(x, Replacement::Type(s)).term(self)
    }

    /// Renames the free term variable `from` to `to` everywhere it occurs.
    pub fn rename_term_var(&self, from: &Name, to: &Name) -> Term {
        Subst::new(from, Replacement::Rename(to)).term(self)
    }

    pub fn rename_type_var(&self, from: &Name, to: &Name) -> Term {
        let to = Type::Var(to.clone());
        Subst::new(from, Replacement::Type(&to)).term(self)
    }

    /// The value-passing substitution `[x := v][x := fv(v)] self` used by
    /// beta reduction: capture sets first, then term positions.
    pub fn instantiate(&self, x: &Name, v: &Term) -> Term {
        self.subst_capt(x, &v.fv_set()).subst_term(x, v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cs(names: &[&str]) -> CaptureSet {
        CaptureSet::of(names.iter().copied())
    }

    fn top(names: &[&str]) -> Type {
        Type::top(cs(names))
    }

    #[test]
    fn capture_substitution_in_types() {
        // {x} forall(y: {x} Top) {x, y} Top  with x := {}
        let t = Type::fun(cs(&["x"]), "y", top(&["x"]), top(&["x", "y"]));
        let want = Type::fun(cs(&[]), "y", top(&[]), top(&["y"]));
        assert_eq!(t.subst_capt(&Name::new("x"), &cs(&[])), want);
        let tv = Type::var("X");
        assert_eq!(tv.subst_capt(&Name::new("x"), &cs(&["a"])), tv);
    }

    #[test]
    fn capture_substitution_in_terms() {
        let t = Term::abs("y", top(&["x"]), Term::var("y"));
        let want = Term::abs("y", Type::top(CaptureSet::Universal), Term::var("y"));
        assert_eq!(t.subst_capt(&Name::new("x"), &CaptureSet::Universal), want);
    }

    #[test]
    fn capture_substitution_stops_at_shadowing_binder() {
        let t = Type::fun(cs(&["x"]), "x", top(&["x"]), top(&["x"]));
        let got = t.subst_capt(&Name::new("x"), &cs(&["z"]));
        assert_eq!(got, Type::fun(cs(&["z"]), "x", top(&["z"]), top(&["x"])));
    }

    #[test]
    fn capture_substitution_renames_colliding_binder() {
        // forall(y: {} Top) {x, y} Top  with x := {y}: the bound y must be renamed.
        let t = Type::fun(cs(&[]), "y", top(&[]), top(&["x", "y"]));
        let got = t.subst_capt(&Name::new("x"), &cs(&["y"]));
        assert_eq!(got, Type::fun(cs(&[]), "y'1", top(&[]), top(&["y", "y'1"])));
    }

    #[test]
    fn term_substitution_basics() {
        let id = Term::abs("y", top(&[]), Term::var("y"));
        assert_eq!(Term::var("x").subst_term(&Name::new("x"), &id), id);
        let shadow = Term::abs("x", top(&[]), Term::var("x"));
        assert_eq!(shadow.subst_term(&Name::new("x"), &id), shadow);
    }

    #[test]
    fn term_substitution_avoids_capture() {
        // \(y: {} Top) x  with x := y
        let t = Term::abs("y", top(&[]), Term::var("x"));
        let got = t.subst_term(&Name::new("x"), &Term::var("y"));
        assert_eq!(got, Term::abs("y'1", top(&[]), Term::var("y")));
    }

    #[test]
    fn type_substitution_replaces_all_positions() {
        // {} forall(x: X) X  with X := {*} Top
        let t = Type::fun(cs(&[]), "x", Type::var("X"), Type::var("X"));
        let univ = Type::top(CaptureSet::Universal);
        assert_eq!(
            t.subst_type(&Name::new("X"), &univ),
            Type::fun(cs(&[]), "x", univ.clone(), univ)
        );
    }

    #[test]
    fn type_substitution_renames_term_binder_mentioned_by_replacement() {
        // forall(y: {} Top) X  with X := {y} Top
        let t = Type::fun(cs(&[]), "y", top(&[]), Type::var("X"));
        let got = t.subst_type(&Name::new("X"), &top(&["y"]));
        assert_eq!(got, Type::fun(cs(&[]), "y'1", top(&[]), top(&["y"])));
    }

    #[test]
    fn name_slots_follow_variable_substitution() {
        let t = Term::New {
            region: Name::new("r"),
            elem: top(&["r"]),
            init: Box::new(Term::var("r")),
        };
        let got = t.rename_term_var(&Name::new("r"), &Name::new("s"));
        assert_eq!(
            got,
            Term::New {
                region: Name::new("s"),
                elem: top(&["s"]),
                init: Box::new(Term::var("s")),
            }
        );
    }

    #[test]
    fn instantiate_erases_parameter() {
        // body: \(y: {x} Top) x   with x := \(z: {} Top) z
        let body = Term::abs("y", top(&["x"]), Term::var("x"));
        let v = Term::abs("z", top(&[]), Term::var("z"));
        let got = body.instantiate(&Name::new("x"), &v);
        assert_eq!(got, Term::abs("y", top(&[]), v));
        assert!(!got.free_names().contains_any(&Name::new("x")));
    }
}
