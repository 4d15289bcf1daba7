//! Well-formedness of types with polarity tracking.
//!
//! `Γ ; A+ ; A- ⊢ T wf` admits a term variable in a covariant capture set only
//! if it is in `A+`, and in a contravariant one only if it is in `A-`.
//! Parameter types are checked with the two sets swapped, and a function's
//! own parameter is added to `A+` only, so it can never occur in a
//! contravariant position of its own result.

use std::collections::BTreeSet;

use crate::capture::CaptureSet;
use crate::context::{Binding, Context};
use crate::error::{ErrorKind, TypeError};
use crate::name::Name;
use crate::syntax::{Pretype, Type};

pub type NameSet = BTreeSet<Name>;

pub fn wf_type(ctx: &Context, plus: &NameSet, minus: &NameSet, ty: &Type) -> Result<(), TypeError> {
    let mut plus = plus.clone();
    let mut minus = minus.clone();
    Wf { ctx: ctx.clone() }.ty(&mut plus, &mut minus, ty, true)
}

/// `Γ ⊢ T wf`, i.e. both polarity sets are the term variables of `Γ`.
pub fn wf_top_level(ctx: &Context, ty: &Type) -> Result<(), TypeError> {
    let dom: NameSet = ctx.term_names().cloned().collect();
    wf_type(ctx, &dom, &dom, ty)
}

/// Every binding is well-formed in the context before it, and names are
/// pairwise distinct.
pub fn wf_context(ctx: &Context) -> Result<(), TypeError> {
    for (i, b) in ctx.bindings().iter().enumerate() {
        let prefix = ctx.prefix(i);
        if prefix.binds(b.name()) {
            return Err(TypeError::ill_scoped(format!(
                "`{}` is bound twice in the context",
                b.name()
            )));
        }
        match b {
            Binding::Term(_, t) | Binding::Type(_, t) => wf_top_level(&prefix, t)?,
        }
    }
    Ok(())
}

struct Wf {
    ctx: Context,
}

impl Wf {
    /// `covariant` only tracks the orientation for diagnostics; the sets
    /// already encode what is allowed.
    fn ty(
        &mut self,
        plus: &mut NameSet,
        minus: &mut NameSet,
        ty: &Type,
        covariant: bool,
    ) -> Result<(), TypeError> {
        match ty {
            Type::Var(x) => {
                if self.ctx.type_bound(x).is_none() {
                    return Err(TypeError::ill_scoped(format!(
                        "unbound type variable `{x}`"
                    )));
                }
                Ok(())
            }
            Type::Capt(c, u) => {
                self.cset(plus, c, covariant)?;
                self.pretype(plus, minus, u, covariant)
            }
        }
    }

    fn cset(&self, plus: &NameSet, c: &CaptureSet, covariant: bool) -> Result<(), TypeError> {
        for x in c.names() {
            if self.ctx.term_type(x).is_none() {
                return Err(TypeError::ill_scoped(format!(
                    "unbound variable `{x}` in capture set"
                )));
            }
            if !plus.contains(x) {
                let position = if covariant {
                    "covariantly"
                } else {
                    "contravariantly"
                };
                return Err(TypeError::new(
                    ErrorKind::Polarity,
                    format!("variable `{x}` used {position} in its own scope"),
                ));
            }
        }
        Ok(())
    }

    fn swapped(
        &mut self,
        plus: &mut NameSet,
        minus: &mut NameSet,
        ty: &Type,
        covariant: bool,
    ) -> Result<(), TypeError> {
        self.ty(minus, plus, ty, !covariant)
    }

    fn pretype(
        &mut self,
        plus: &mut NameSet,
        minus: &mut NameSet,
        u: &Pretype,
        covariant: bool,
    ) -> Result<(), TypeError> {
        match u {
            Pretype::Top | Pretype::Bottom | Pretype::Base(_) | Pretype::Region => Ok(()),
            Pretype::Fun {
                param,
                param_ty,
                result,
            } => {
                self.swapped(plus, minus, param_ty, covariant)?;
                let (param, result) = self.fresh_term_binder(param, result);
                let saved = self.ctx.clone();
                self.ctx.push_term(param.clone(), param_ty.clone());
                let mut inner_plus = plus.clone();
                inner_plus.insert(param.clone());
                let mut inner_minus = minus.clone();
                inner_minus.remove(&param);
                let r = self.ty(&mut inner_plus, &mut inner_minus, &result, covariant);
                self.ctx = saved;
                r
            }
            Pretype::TFun {
                param,
                bound,
                result,
            } => {
                self.swapped(plus, minus, bound, covariant)?;
                let (param, result) = self.fresh_type_binder(param, result);
                let saved = self.ctx.clone();
                self.ctx.push_type(param, bound.clone());
                let r = self.ty(plus, minus, &result, covariant);
                self.ctx = saved;
                r
            }
            Pretype::Return(t) => self.ty(plus, minus, t, covariant),
            Pretype::Ptr(t) => {
                self.ty(plus, minus, t, covariant)?;
                self.swapped(plus, minus, t, covariant)
            }
            Pretype::Eff(a, b) => {
                self.swapped(plus, minus, a, covariant)?;
                self.ty(plus, minus, b, covariant)
            }
        }
    }

    /// Renames a binder that shadows an existing binding so that the
    /// context keeps distinct names.
    fn fresh_term_binder(&self, x: &Name, body: &Type) -> (Name, Type) {
        if !self.ctx.binds(x) {
            return (x.clone(), body.clone());
        }
        let free = body.free_names();
        let z = self.ctx.fresh_for(x, |n| free.contains_any(n));
        let body = body.rename_term_var(x, &z);
        (z, body)
    }

    fn fresh_type_binder(&self, x: &Name, body: &Type) -> (Name, Type) {
        if !self.ctx.binds(x) {
            return (x.clone(), body.clone());
        }
        let free = body.free_names();
        let z = self.ctx.fresh_for(x, |n| free.contains_any(n));
        let body = body.subst_type(x, &Type::Var(z.clone()));
        (z, body)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cs(names: &[&str]) -> CaptureSet {
        CaptureSet::of(names.iter().copied())
    }

    fn u(c: CaptureSet) -> Type {
        Type::capt(c, Pretype::Base(Name::new("U")))
    }

    #[test]
    fn parameter_in_contravariant_position_is_rejected() {
        // forall(x: {*} U) {} forall(y: {x} U) {y} U
        let inner = Type::fun(cs(&[]), "y", u(cs(&["x"])), u(cs(&["y"])));
        let f = Type::fun(cs(&[]), "x", u(CaptureSet::Universal), inner);
        let err = wf_top_level(&Context::new(), &f).unwrap_err();
        assert_eq!(err.kind, ErrorKind::Polarity);
        assert!(err.message.contains("`x`"));
    }

    #[test]
    fn parameter_in_covariant_position_is_fine() {
        let g = Type::fun(cs(&[]), "x", u(CaptureSet::Universal), u(cs(&["x"])));
        wf_top_level(&Context::new(), &g).unwrap();
    }

    #[test]
    fn context_variables_may_occur_anywhere() {
        let ctx = Context::new().with_term("x", u(CaptureSet::Universal));
        let t = Type::fun(cs(&[]), "y", u(cs(&["x"])), u(cs(&["y"])));
        wf_top_level(&ctx, &t).unwrap();
        wf_top_level(&ctx, &u(cs(&["x"]))).unwrap();
    }

    #[test]
    fn scoping() {
        wf_top_level(&Context::new(), &Type::top(cs(&[]))).unwrap();
        let err = wf_top_level(&Context::new(), &Type::top(cs(&["x"]))).unwrap_err();
        assert_eq!(err.kind, ErrorKind::IllScoped);
        let err = wf_top_level(&Context::new(), &Type::var("X")).unwrap_err();
        assert_eq!(err.kind, ErrorKind::IllScoped);
    }

    #[test]
    fn contexts() {
        wf_context(&Context::new()).unwrap();
        let bad = Context::new().with_term("x", Type::top(cs(&["y"])));
        assert_eq!(wf_context(&bad).unwrap_err().kind, ErrorKind::IllScoped);
        let good = Context::new()
            .with_term("y", Type::top(cs(&[])))
            .with_term("x", Type::top(cs(&["y"])));
        wf_context(&good).unwrap();
    }

    #[test]
    fn effect_argument_is_contravariant() {
        let ctx = Context::new();
        let eff = |a: Type, b: Type| Type::capt(CaptureSet::Universal, Pretype::Eff(a, b));
        // forall(x: {*} U) {} Eff[{x} U, {} U]: x in the argument slot is contravariant.
        let t = Type::fun(
            cs(&[]),
            "x",
            u(CaptureSet::Universal),
            eff(u(cs(&["x"])), u(cs(&[]))),
        );
        assert_eq!(
            wf_top_level(&ctx, &t).unwrap_err().kind,
            ErrorKind::Polarity
        );
        let t = Type::fun(
            cs(&[]),
            "x",
            u(CaptureSet::Universal),
            eff(u(cs(&[])), u(cs(&["x"]))),
        );
        wf_top_level(&ctx, &t).unwrap();
    }
}
