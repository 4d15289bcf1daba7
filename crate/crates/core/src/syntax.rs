//! Types, pretypes and terms of the calculus, plus free-variable queries.

use std::collections::BTreeSet;

use crate::capture::CaptureSet;
use crate::name::Name;

/// A type is either a type variable, which stands for a complete type and
/// carries no capture set, or a pretype annotated with a capture set.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Type {
    Var(Name),
    Capt(CaptureSet, Box<Pretype>),
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Pretype {
    Top,
    /// Least pretype. Only synthesized for expressions that never return.
    Bottom,
    /// An opaque pretype constant declared by a program prelude.
    Base(Name),
    /// Dependent function `forall(param: param_ty) result`; `param` may occur
    /// in capture sets inside `result`.
    Fun {
        param: Name,
        param_ty: Type,
        result: Type,
    },
    /// Bounded type function `forall[param <: bound] result`.
    TFun {
        param: Name,
        bound: Type,
        result: Type,
    },
    Return(Type),
    Region,
    Ptr(Type),
    Eff(Type, Type),
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Term {
    Var(Name),
    Abs {
        param: Name,
        param_ty: Type,
        body: Box<Term>,
    },
    TAbs {
        param: Name,
        bound: Type,
        body: Box<Term>,
    },
    App(Box<Term>, Box<Term>),
    TApp(Box<Term>, Type),
    /// `handle cap : answer in body`, a block that can be left with `return`.
    Handle {
        cap: Name,
        answer: Type,
        body: Box<Term>,
    },
    /// `return cap value`
    Return {
        cap: Box<Term>,
        value: Box<Term>,
    },
    /// `region handle in body`
    Region {
        handle: Name,
        body: Box<Term>,
    },
    /// `new region [elem] init`
    New {
        region: Name,
        elem: Type,
        init: Box<Term>,
    },
    /// `!target`
    Deref(Box<Term>),
    /// `handle cap : eff = handler(arg, kont) => handler in body`
    HandleEff {
        cap: Name,
        eff: Type,
        arg: Name,
        kont: Name,
        handler: Box<Term>,
        body: Box<Term>,
    },
    /// `do cap arg`
    Do {
        cap: Name,
        arg: Box<Term>,
    },
    /// A runtime pointer into the frame of `region`. Never written in source.
    Ptr {
        loc: usize,
        region: Name,
        elem: Type,
    },
}

/// Free names split by namespace. Term variables include those occurring in
/// capture sets.
#[derive(Clone, Default, Debug, PartialEq, Eq)]
pub struct FreeNames {
    pub terms: BTreeSet<Name>,
    pub types: BTreeSet<Name>,
}

impl FreeNames {
    pub fn contains_term(&self, x: &Name) -> bool {
        self.terms.contains(x)
    }

    pub fn contains_any(&self, x: &Name) -> bool {
        self.terms.contains(x) || self.types.contains(x)
    }

    fn extend(&mut self, other: FreeNames) {
        self.terms.extend(other.terms);
        self.types.extend(other.types);
    }

    fn without_term(mut self, x: &Name) -> Self {
        self.terms.remove(x);
        self
    }

    fn without_type(mut self, x: &Name) -> Self {
        self.types.remove(x);
        self
    }
}

impl Type {
    pub fn var(x: impl Into<Name>) -> Type {
        Type::Var(x.into())
    }

    pub fn capt(c: CaptureSet, u: Pretype) -> Type {
        Type::Capt(c, Box::new(u))
    }

    pub fn top(c: CaptureSet) -> Type {
        Type::capt(c, Pretype::Top)
    }

    pub fn fun(c: CaptureSet, param: impl Into<Name>, param_ty: Type, result: Type) -> Type {
        Type::capt(
            c,
            Pretype::Fun {
                param: param.into(),
                param_ty,
                result,
            },
        )
    }

    pub fn tfun(c: CaptureSet, param: impl Into<Name>, bound: Type, result: Type) -> Type {
        Type::capt(
            c,
            Pretype::TFun {
                param: param.into(),
                bound,
                result,
            },
        )
    }

    pub fn free_names(&self) -> FreeNames {
        match self {
            Type::Var(x) => FreeNames {
                terms: BTreeSet::new(),
                types: BTreeSet::from([x.clone()]),
            },
            Type::Capt(c, u) => {
                let mut acc = u.free_names();
                acc.terms.extend(c.names().cloned());
                acc
            }
        }
    }

    /// Term variables mentioned in capture sets anywhere in the type.
    pub fn capture_vars(&self) -> BTreeSet<Name> {
        self.free_names().terms
    }

    /// Whether any `Return`, `Region`, `Ptr` or `Eff` pretype occurs.
    pub fn extension_pretypes(&self) -> crate::Extensions {
        let mut ext = crate::Extensions::none();
        self.visit_pretypes(&mut |u| match u {
            Pretype::Return(_) => ext.returns = true,
            Pretype::Region | Pretype::Ptr(_) => ext.regions = true,
            Pretype::Eff(..) => ext.effects = true,
            _ => {}
        });
        ext
    }

    pub fn contains_bottom(&self) -> bool {
        let mut found = false;
        self.visit_pretypes(&mut |u| found |= matches!(u, Pretype::Bottom));
        found
    }

    fn visit_pretypes(&self, f: &mut dyn FnMut(&Pretype)) {
        if let Type::Capt(_, u) = self {
            f(u);
            match &**u {
                Pretype::Top | Pretype::Bottom | Pretype::Base(_) | Pretype::Region => {}
                Pretype::Fun {
                    param_ty, result, ..
                } => {
                    param_ty.visit_pretypes(f);
                    result.visit_pretypes(f);
                }
                Pretype::TFun { bound, result, .. } => {
                    bound.visit_pretypes(f);
                    result.visit_pretypes(f);
                }
                Pretype::Return(t) | Pretype::Ptr(t) => t.visit_pretypes(f),
                Pretype::Eff(a, b) => {
                    a.visit_pretypes(f);
                    b.visit_pretypes(f);
                }
            }
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Type::Var(_) => 1,
            Type::Capt(_, u) => 1 + u.size(),
        }
    }
}

impl Pretype {
    pub fn free_names(&self) -> FreeNames {
        match self {
            Pretype::Top | Pretype::Bottom | Pretype::Base(_) | Pretype::Region => {
                FreeNames::default()
            }
            Pretype::Fun {
                param,
                param_ty,
                result,
            } => {
                let mut acc = param_ty.free_names();
                acc.extend(result.free_names().without_term(param));
                acc
            }
            Pretype::TFun {
                param,
                bound,
                result,
            } => {
                let mut acc = bound.free_names();
                acc.extend(result.free_names().without_type(param));
                acc
            }
            Pretype::Return(t) | Pretype::Ptr(t) => t.free_names(),
            Pretype::Eff(a, b) => {
                let mut acc = a.free_names();
                acc.extend(b.free_names());
                acc
            }
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Pretype::Top | Pretype::Bottom | Pretype::Base(_) | Pretype::Region => 1,
            Pretype::Fun {
                param_ty, result, ..
            } => 1 + param_ty.size() + result.size(),
            Pretype::TFun { bound, result, .. } => 1 + bound.size() + result.size(),
            Pretype::Return(t) | Pretype::Ptr(t) => 1 + t.size(),
            Pretype::Eff(a, b) => 1 + a.size() + b.size(),
        }
    }
}

impl Term {
    pub fn var(x: impl Into<Name>) -> Term {
        Term::Var(x.into())
    }

    pub fn abs(param: impl Into<Name>, param_ty: Type, body: Term) -> Term {
        Term::Abs {
            param: param.into(),
            param_ty,
            body: Box::new(body),
        }
    }

    pub fn tabs(param: impl Into<Name>, bound: Type, body: Term) -> Term {
        Term::TAbs {
            param: param.into(),
            bound,
            body: Box::new(body),
        }
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    pub fn tapp(f: Term, t: Type) -> Term {
        Term::TApp(Box::new(f), t)
    }

    /// Free variables in term position. Names that occur only inside capture
    /// sets of embedded types are not included.
    pub fn fv(&self) -> BTreeSet<Name> {
        let mut acc = BTreeSet::new();
        self.collect_fv(&mut acc, &mut Vec::new());
        acc
    }

    fn collect_fv(&self, acc: &mut BTreeSet<Name>, bound: &mut Vec<Name>) {
        let note = |x: &Name, bound: &Vec<Name>, acc: &mut BTreeSet<Name>| {
            if !bound.contains(x) {
                acc.insert(x.clone());
            }
        };
        match self {
            Term::Var(x) => note(x, bound, acc),
            Term::Abs { param, body, .. } => {
                bound.push(param.clone());
                body.collect_fv(acc, bound);
                bound.pop();
            }
            Term::TAbs { body, .. } => body.collect_fv(acc, bound),
            Term::App(f, a) => {
                f.collect_fv(acc, bound);
                a.collect_fv(acc, bound);
            }
            Term::TApp(f, _) => f.collect_fv(acc, bound),
            Term::Handle { cap, body, .. } => {
                bound.push(cap.clone());
                body.collect_fv(acc, bound);
                bound.pop();
            }
            Term::Return { cap, value } => {
                cap.collect_fv(acc, bound);
                value.collect_fv(acc, bound);
            }
            Term::Region { handle, body } => {
                bound.push(handle.clone());
                body.collect_fv(acc, bound);
                bound.pop();
            }
            Term::New { region, init, .. } => {
                note(region, bound, acc);
                init.collect_fv(acc, bound);
            }
            Term::Deref(t) => t.collect_fv(acc, bound),
            Term::HandleEff {
                cap,
                arg,
                kont,
                handler,
                body,
                ..
            } => {
                bound.push(arg.clone());
                bound.push(kont.clone());
                handler.collect_fv(acc, bound);
                bound.pop();
                bound.pop();
                bound.push(cap.clone());
                body.collect_fv(acc, bound);
                bound.pop();
            }
            Term::Do { cap, arg } => {
                note(cap, bound, acc);
                arg.collect_fv(acc, bound);
            }
            Term::Ptr { region, .. } => note(region, bound, acc),
        }
    }

    /// `fv` as a concrete capture set.
    pub fn fv_set(&self) -> CaptureSet {
        CaptureSet::Concrete(self.fv())
    }

    /// All free names: term positions, capture sets of embedded types and
    /// type variables.
    pub fn free_names(&self) -> FreeNames {
        match self {
            Term::Var(x) => FreeNames {
                terms: BTreeSet::from([x.clone()]),
                types: BTreeSet::new(),
            },
            Term::Abs {
                param,
                param_ty,
                body,
            } => {
                let mut acc = param_ty.free_names();
                acc.extend(body.free_names().without_term(param));
                acc
            }
            Term::TAbs { param, bound, body } => {
                let mut acc = bound.free_names();
                acc.extend(body.free_names().without_type(param));
                acc
            }
            Term::App(f, a) => {
                let mut acc = f.free_names();
                acc.extend(a.free_names());
                acc
            }
            Term::TApp(f, t) => {
                let mut acc = f.free_names();
                acc.extend(t.free_names());
                acc
            }
            Term::Handle { cap, answer, body } => {
                let mut acc = answer.free_names();
                acc.extend(body.free_names().without_term(cap));
                acc
            }
            Term::Return { cap, value } => {
                let mut acc = cap.free_names();
                acc.extend(value.free_names());
                acc
            }
            Term::Region { handle, body } => body.free_names().without_term(handle),
            Term::New { region, elem, init } => {
                let mut acc = elem.free_names();
                acc.extend(init.free_names());
                acc.terms.insert(region.clone());
                acc
            }
            Term::Deref(t) => t.free_names(),
            Term::HandleEff {
                cap,
                eff,
                arg,
                kont,
                handler,
                body,
            } => {
                let mut acc = eff.free_names();
                acc.extend(handler.free_names().without_term(arg).without_term(kont));
                acc.extend(body.free_names().without_term(cap));
                acc
            }
            Term::Do { cap, arg } => {
                let mut acc = arg.free_names();
                acc.terms.insert(cap.clone());
                acc
            }
            Term::Ptr { region, elem, .. } => {
                let mut acc = elem.free_names();
                acc.terms.insert(region.clone());
                acc
            }
        }
    }

    /// Whether the term uses any construct outside the core calculus.
    pub fn extensions_used(&self) -> crate::Extensions {
        let mut ext = crate::Extensions::none();
        self.visit(&mut |t| match t {
            Term::Handle { .. } | Term::Return { .. } => ext.returns = true,
            Term::Region { .. } | Term::New { .. } | Term::Deref(_) | Term::Ptr { .. } => {
                ext.regions = true
            }
            Term::HandleEff { .. } | Term::Do { .. } => ext.effects = true,
            _ => {}
        });
        ext
    }

    /// Pre-order traversal over all subterms, including `self`.
    pub fn visit(&self, f: &mut dyn FnMut(&Term)) {
        f(self);
        for child in self.children() {
            child.visit(f);
        }
    }

    /// Immediate subterms, left to right.
    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::Var(_) | Term::Ptr { .. } => vec![],
            Term::Abs { body, .. }
            | Term::TAbs { body, .. }
            | Term::Handle { body, .. }
            | Term::Region { body, .. } => vec![body],
            Term::App(f, a) => vec![f, a],
            Term::TApp(f, _) => vec![f],
            Term::Return { cap, value } => vec![cap, value],
            Term::New { init, .. } => vec![init],
            Term::Deref(t) => vec![t],
            Term::HandleEff { handler, body, .. } => vec![handler, body],
            Term::Do { arg, .. } => vec![arg],
        }
    }

    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }
}
