//! Plain System F<: : erasure from the capture calculus, embedding into it,
//! and a standalone algorithmic checker.

use std::collections::BTreeSet;
use std::fmt;

use crate::capture::CaptureSet;
use crate::name::Name;
use crate::syntax::{Pretype, Term, Type};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum FsubType {
    Top,
    Var(Name),
    Arrow(Box<FsubType>, Box<FsubType>),
    All(Name, Box<FsubType>, Box<FsubType>),
    Base(Name),
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum FsubTerm {
    Var(Name),
    Abs(Name, FsubType, Box<FsubTerm>),
    TAbs(Name, FsubType, Box<FsubTerm>),
    App(Box<FsubTerm>, Box<FsubTerm>),
    TApp(Box<FsubTerm>, FsubType),
}

#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
pub enum BridgeError {
    #[error("`{0}` has no System F<: counterpart")]
    Unsupported(&'static str),
    #[error("embedding needs an empty or universal capture set, got {0}")]
    BadCaptureSet(CaptureSet),
}

#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
#[error("{0}")]
pub struct FsubError(pub String);

// ---- erasure ----

pub fn erase_type(t: &Type) -> Result<FsubType, BridgeError> {
    match t {
        Type::Var(x) => Ok(FsubType::Var(x.clone())),
        Type::Capt(_, u) => erase_pretype(u),
    }
}

fn erase_pretype(u: &Pretype) -> Result<FsubType, BridgeError> {
    match u {
        Pretype::Top => Ok(FsubType::Top),
        Pretype::Base(n) => Ok(FsubType::Base(n.clone())),
        Pretype::Fun {
            param_ty, result, ..
        } => Ok(FsubType::Arrow(
            Box::new(erase_type(param_ty)?),
            Box::new(erase_type(result)?),
        )),
        Pretype::TFun {
            param,
            bound,
            result,
        } => Ok(FsubType::All(
            param.clone(),
            Box::new(erase_type(bound)?),
            Box::new(erase_type(result)?),
        )),
        Pretype::Bottom => Err(BridgeError::Unsupported("Bot")),
        Pretype::Return(_) => Err(BridgeError::Unsupported("Return")),
        Pretype::Region => Err(BridgeError::Unsupported("Region")),
        Pretype::Ptr(_) => Err(BridgeError::Unsupported("Ptr")),
        Pretype::Eff(..) => Err(BridgeError::Unsupported("Eff")),
    }
}

pub fn erase_term(t: &Term) -> Result<FsubTerm, BridgeError> {
    Ok(match t {
        Term::Var(x) => FsubTerm::Var(x.clone()),
        Term::Abs {
            param,
            param_ty,
            body,
        } => FsubTerm::Abs(
            param.clone(),
            erase_type(param_ty)?,
            Box::new(erase_term(body)?),
        ),
        Term::TAbs { param, bound, body } => FsubTerm::TAbs(
            param.clone(),
            erase_type(bound)?,
            Box::new(erase_term(body)?),
        ),
        Term::App(f, a) => FsubTerm::App(Box::new(erase_term(f)?), Box::new(erase_term(a)?)),
        Term::TApp(f, ty) => FsubTerm::TApp(Box::new(erase_term(f)?), erase_type(ty)?),
        Term::Handle { .. } | Term::Return { .. } => {
            return Err(BridgeError::Unsupported("return"))
        }
        Term::Region { .. } | Term::New { .. } | Term::Deref(_) | Term::Ptr { .. } => {
            return Err(BridgeError::Unsupported("region"))
        }
        Term::HandleEff { .. } | Term::Do { .. } => return Err(BridgeError::Unsupported("effect")),
    })
}

// ---- embedding ----

fn check_embedding_set(c: &CaptureSet) -> Result<(), BridgeError> {
    if c.is_universal() || c.is_empty() {
        Ok(())
    } else {
        Err(BridgeError::BadCaptureSet(c.clone()))
    }
}

/// Annotates every type constructor uniformly with `c`.
pub fn embed_type(t: &FsubType, c: &CaptureSet) -> Result<Type, BridgeError> {
    check_embedding_set(c)?;
    Ok(embed_ty(t, c))
}

fn embed_ty(t: &FsubType, c: &CaptureSet) -> Type {
    match t {
        FsubType::Top => Type::top(c.clone()),
        FsubType::Var(x) => Type::Var(x.clone()),
        FsubType::Base(n) => Type::capt(c.clone(), Pretype::Base(n.clone())),
        FsubType::Arrow(s, r) => Type::fun(c.clone(), "x", embed_ty(s, c), embed_ty(r, c)),
        FsubType::All(x, b, r) => Type::tfun(c.clone(), x.clone(), embed_ty(b, c), embed_ty(r, c)),
    }
}

pub fn embed_term(t: &FsubTerm, c: &CaptureSet) -> Result<Term, BridgeError> {
    check_embedding_set(c)?;
    Ok(embed_tm(t, c))
}

fn embed_tm(t: &FsubTerm, c: &CaptureSet) -> Term {
    match t {
        FsubTerm::Var(x) => Term::Var(x.clone()),
        FsubTerm::Abs(x, s, b) => Term::abs(x.clone(), embed_ty(s, c), embed_tm(b, c)),
        FsubTerm::TAbs(x, s, b) => Term::tabs(x.clone(), embed_ty(s, c), embed_tm(b, c)),
        FsubTerm::App(f, a) => Term::app(embed_tm(f, c), embed_tm(a, c)),
        FsubTerm::TApp(f, s) => Term::tapp(embed_tm(f, c), embed_ty(s, c)),
    }
}

// ---- substitution ----

impl FsubType {
    pub fn free_vars(&self) -> BTreeSet<Name> {
        match self {
            FsubType::Top | FsubType::Base(_) => BTreeSet::new(),
            FsubType::Var(x) => BTreeSet::from([x.clone()]),
            FsubType::Arrow(a, b) => {
                let mut s = a.free_vars();
                s.extend(b.free_vars());
                s
            }
            FsubType::All(x, b, r) => {
                let mut s = r.free_vars();
                s.remove(x);
                s.extend(b.free_vars());
                s
            }
        }
    }

    /// Capture-avoiding `[x := s] self`.
    pub fn subst(&self, x: &Name, s: &FsubType) -> FsubType {
        match self {
            FsubType::Top | FsubType::Base(_) => self.clone(),
            FsubType::Var(y) if y == x => s.clone(),
            FsubType::Var(_) => self.clone(),
            FsubType::Arrow(a, b) => {
                FsubType::Arrow(Box::new(a.subst(x, s)), Box::new(b.subst(x, s)))
            }
            FsubType::All(y, b, r) => {
                let b = b.subst(x, s);
                if y == x {
                    return FsubType::All(y.clone(), Box::new(b), r.clone());
                }
                let sfree = s.free_vars();
                if sfree.contains(y) && r.free_vars().contains(x) {
                    let rfree = r.free_vars();
                    let z = y.fresh(|n| sfree.contains(n) || rfree.contains(n) || n == x);
                    let r = r.subst(y, &FsubType::Var(z.clone()));
                    FsubType::All(z, Box::new(b), Box::new(r.subst(x, s)))
                } else {
                    FsubType::All(y.clone(), Box::new(b), Box::new(r.subst(x, s)))
                }
            }
        }
    }
}

// ---- checking ----

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum FsubBinding {
    Term(Name, FsubType),
    Type(Name, FsubType),
}

#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct FsubContext {
    pub bindings: Vec<FsubBinding>,
}

impl FsubContext {
    pub fn with_term(&self, x: Name, t: FsubType) -> Self {
        let mut c = self.clone();
        c.bindings.push(FsubBinding::Term(x, t));
        c
    }

    pub fn with_type(&self, x: Name, t: FsubType) -> Self {
        let mut c = self.clone();
        c.bindings.push(FsubBinding::Type(x, t));
        c
    }

    fn term(&self, x: &Name) -> Option<&FsubType> {
        self.bindings.iter().rev().find_map(|b| match b {
            FsubBinding::Term(y, t) if y == x => Some(t),
            _ => None,
        })
    }

    fn bound(&self, x: &Name) -> Option<&FsubType> {
        self.bindings.iter().rev().find_map(|b| match b {
            FsubBinding::Type(y, t) if y == x => Some(t),
            _ => None,
        })
    }

    fn binds(&self, x: &Name) -> bool {
        self.bindings.iter().any(|b| match b {
            FsubBinding::Term(y, _) | FsubBinding::Type(y, _) => y == x,
        })
    }
}

const DEPTH: usize = 512;

fn expose(ctx: &FsubContext, t: &FsubType) -> Result<FsubType, FsubError> {
    let mut cur = t.clone();
    for _ in 0..DEPTH {
        match &cur {
            FsubType::Var(x) => {
                cur = ctx
                    .bound(x)
                    .ok_or_else(|| FsubError(format!("unbound type variable `{x}`")))?
                    .clone();
            }
            _ => return Ok(cur),
        }
    }
    Err(FsubError("bound chain too deep".into()))
}

pub fn fsub_subtype(ctx: &FsubContext, a: &FsubType, b: &FsubType) -> Result<bool, FsubError> {
    sub(ctx, a, b, 0)
}

fn sub(ctx: &FsubContext, a: &FsubType, b: &FsubType, depth: usize) -> Result<bool, FsubError> {
    if depth > DEPTH {
        return Err(FsubError("subtyping depth limit exceeded".into()));
    }
    Ok(match (a, b) {
        (_, FsubType::Top) => true,
        (FsubType::Var(x), FsubType::Var(y)) if x == y => true,
        (FsubType::Var(x), _) => {
            let bound = ctx
                .bound(x)
                .ok_or_else(|| FsubError(format!("unbound type variable `{x}`")))?;
            sub(ctx, bound, b, depth + 1)?
        }
        (FsubType::Base(x), FsubType::Base(y)) => x == y,
        (FsubType::Arrow(s1, t1), FsubType::Arrow(s2, t2)) => {
            sub(ctx, s2, s1, depth + 1)? && sub(ctx, t1, t2, depth + 1)?
        }
        (FsubType::All(x1, b1, r1), FsubType::All(x2, b2, r2)) => {
            if !sub(ctx, b2, b1, depth + 1)? {
                return Ok(false);
            }
            let f1 = r1.free_vars();
            let f2 = r2.free_vars();
            let z = if x1 == x2 && !ctx.binds(x1) {
                x1.clone()
            } else {
                x1.fresh(|n| ctx.binds(n) || f1.contains(n) || f2.contains(n))
            };
            let zt = FsubType::Var(z.clone());
            let inner = ctx.with_type(z, (**b2).clone());
            sub(&inner, &r1.subst(x1, &zt), &r2.subst(x2, &zt), depth + 1)?
        }
        _ => false,
    })
}

fn wf(ctx: &FsubContext, t: &FsubType) -> Result<(), FsubError> {
    for x in t.free_vars() {
        if ctx.bound(&x).is_none() {
            return Err(FsubError(format!("unbound type variable `{x}`")));
        }
    }
    Ok(())
}

/// Synthesizes the minimal type of `t`.
pub fn fsub_check(ctx: &FsubContext, t: &FsubTerm) -> Result<FsubType, FsubError> {
    match t {
        FsubTerm::Var(x) => ctx
            .term(x)
            .cloned()
            .ok_or_else(|| FsubError(format!("unbound variable `{x}`"))),
        FsubTerm::Abs(x, s, body) => {
            wf(ctx, s)?;
            let r = fsub_check(&ctx.with_term(x.clone(), s.clone()), body)?;
            Ok(FsubType::Arrow(Box::new(s.clone()), Box::new(r)))
        }
        FsubTerm::TAbs(x, s, body) => {
            wf(ctx, s)?;
            let (z, body) = if ctx.binds(x) {
                let z = x.fresh(|n| ctx.binds(n) || term_mentions(body, n));
                let b = rename_type_in_term(body, x, &z);
                (z, b)
            } else {
                (x.clone(), (**body).clone())
            };
            let r = fsub_check(&ctx.with_type(z.clone(), s.clone()), &body)?;
            Ok(FsubType::All(z, Box::new(s.clone()), Box::new(r)))
        }
        FsubTerm::App(f, a) => {
            let tf = fsub_check(ctx, f)?;
            match expose(ctx, &tf)? {
                FsubType::Arrow(s, r) => {
                    let ta = fsub_check(ctx, a)?;
                    if fsub_subtype(ctx, &ta, &s)? {
                        Ok(*r)
                    } else {
                        Err(FsubError(format!(
                            "argument of type {ta} is not a subtype of {s}"
                        )))
                    }
                }
                other => Err(FsubError(format!("expected a function, found {other}"))),
            }
        }
        FsubTerm::TApp(f, s) => {
            wf(ctx, s)?;
            let tf = fsub_check(ctx, f)?;
            match expose(ctx, &tf)? {
                FsubType::All(x, b, r) => {
                    if fsub_subtype(ctx, s, &b)? {
                        Ok(r.subst(&x, s))
                    } else {
                        Err(FsubError(format!(
                            "type argument {s} is not within bound {b}"
                        )))
                    }
                }
                other => Err(FsubError(format!(
                    "expected a type function, found {other}"
                ))),
            }
        }
    }
}

fn term_mentions(t: &FsubTerm, n: &Name) -> bool {
    match t {
        FsubTerm::Var(x) => x == n,
        FsubTerm::Abs(x, s, b) | FsubTerm::TAbs(x, s, b) => {
            x == n || s.free_vars().contains(n) || term_mentions(b, n)
        }
        FsubTerm::App(f, a) => term_mentions(f, n) || term_mentions(a, n),
        FsubTerm::TApp(f, s) => term_mentions(f, n) || s.free_vars().contains(n),
    }
}

fn rename_type_in_term(t: &FsubTerm, from: &Name, to: &Name) -> FsubTerm {
    let v = FsubType::Var(to.clone());
    match t {
        FsubTerm::Var(_) => t.clone(),
        FsubTerm::Abs(x, s, b) => FsubTerm::Abs(
            x.clone(),
            s.subst(from, &v),
            Box::new(rename_type_in_term(b, from, to)),
        ),
        FsubTerm::TAbs(x, s, b) => {
            let s = s.subst(from, &v);
            if x == from {
                FsubTerm::TAbs(x.clone(), s, b.clone())
            } else {
                FsubTerm::TAbs(x.clone(), s, Box::new(rename_type_in_term(b, from, to)))
            }
        }
        FsubTerm::App(f, a) => FsubTerm::App(
            Box::new(rename_type_in_term(f, from, to)),
            Box::new(rename_type_in_term(a, from, to)),
        ),
        FsubTerm::TApp(f, s) => FsubTerm::TApp(
            Box::new(rename_type_in_term(f, from, to)),
            s.subst(from, &v),
        ),
    }
}

// ---- printing ----

impl fmt::Display for FsubType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FsubType::Top => f.write_str("Top"),
            FsubType::Var(x) | FsubType::Base(x) => write!(f, "{x}"),
            FsubType::Arrow(a, b) => {
                if matches!(**a, FsubType::Arrow(..) | FsubType::All(..)) {
                    write!(f, "({a}) -> {b}")
                } else {
                    write!(f, "{a} -> {b}")
                }
            }
            FsubType::All(x, b, r) => write!(f, "forall[{x} <: {b}] {r}"),
        }
    }
}

impl fmt::Display for FsubTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FsubTerm::Var(x) => write!(f, "{x}"),
            FsubTerm::Abs(x, s, b) => write!(f, "\\({x}: {s}) {b}"),
            FsubTerm::TAbs(x, s, b) => write!(f, "/\\[{x} <: {s}] {b}"),
            FsubTerm::App(g, a) => {
                match **g {
                    FsubTerm::Abs(..) | FsubTerm::TAbs(..) => write!(f, "({g})")?,
                    _ => write!(f, "{g}")?,
                }
                match **a {
                    FsubTerm::Var(_) => write!(f, " {a}"),
                    _ => write!(f, " ({a})"),
                }
            }
            FsubTerm::TApp(g, s) => match **g {
                FsubTerm::Abs(..) | FsubTerm::TAbs(..) => write!(f, "({g}) [{s}]"),
                _ => write!(f, "{g} [{s}]"),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn top() -> FsubType {
        FsubType::Top
    }

    fn arrow(a: FsubType, b: FsubType) -> FsubType {
        FsubType::Arrow(Box::new(a), Box::new(b))
    }

    #[test]
    fn erasure_drops_capture_sets() {
        assert_eq!(
            erase_type(&Type::top(CaptureSet::of(["x"]))).unwrap(),
            top()
        );
        let t = Type::fun(
            CaptureSet::empty(),
            "x",
            Type::top(CaptureSet::Universal),
            Type::top(CaptureSet::of(["x"])),
        );
        assert_eq!(erase_type(&t).unwrap(), arrow(top(), top()));
        let t = Type::tfun(
            CaptureSet::empty(),
            "X",
            Type::top(CaptureSet::empty()),
            Type::var("X"),
        );
        assert_eq!(
            erase_type(&t).unwrap(),
            FsubType::All(
                Name::new("X"),
                Box::new(top()),
                Box::new(FsubType::Var(Name::new("X")))
            )
        );
    }

    #[test]
    fn embedding_annotates_uniformly() {
        let t = embed_type(&arrow(top(), top()), &CaptureSet::empty()).unwrap();
        assert_eq!(
            t,
            Type::fun(
                CaptureSet::empty(),
                "x",
                Type::top(CaptureSet::empty()),
                Type::top(CaptureSet::empty())
            )
        );
        assert_eq!(
            embed_type(&top(), &CaptureSet::Universal).unwrap(),
            Type::top(CaptureSet::Universal)
        );
        assert!(embed_type(&top(), &CaptureSet::of(["x"])).is_err());
        assert_eq!(erase_type(&t).unwrap(), arrow(top(), top()));
    }

    #[test]
    fn checker_basics() {
        let ctx = FsubContext::default();
        let id = FsubTerm::Abs(
            Name::new("x"),
            top(),
            Box::new(FsubTerm::Var(Name::new("x"))),
        );
        assert_eq!(fsub_check(&ctx, &id).unwrap(), arrow(top(), top()));
        let x = FsubType::Var(Name::new("X"));
        let poly = FsubTerm::TAbs(
            Name::new("X"),
            top(),
            Box::new(FsubTerm::Abs(
                Name::new("x"),
                x,
                Box::new(FsubTerm::Var(Name::new("x"))),
            )),
        );
        let inst = FsubTerm::TApp(Box::new(poly), top());
        assert_eq!(fsub_check(&ctx, &inst).unwrap(), arrow(top(), top()));
        assert!(fsub_check(&ctx, &FsubTerm::Var(Name::new("x"))).is_err());
    }
}
