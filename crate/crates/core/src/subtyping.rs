//! Algorithmic subtyping for types and pretypes.

use crate::capture::CaptureSet;
use crate::capture_analysis::{cv, subcapture};
use crate::context::Context;
use crate::error::TypeError;
use crate::name::Name;
use crate::syntax::{Pretype, Type};

pub const DEFAULT_DEPTH_LIMIT: usize = 512;

/// `Γ ⊢ a <: b` with the default recursion limit.
pub fn subtype(ctx: &Context, a: &Type, b: &Type) -> Result<bool, TypeError> {
    Subtyper::new(DEFAULT_DEPTH_LIMIT).subtype(ctx, a, b)
}

pub fn subpretype(ctx: &Context, a: &Pretype, b: &Pretype) -> Result<bool, TypeError> {
    Subtyper::new(DEFAULT_DEPTH_LIMIT).subpretype(ctx, a, b, 0)
}

/// Both directions hold.
pub fn equivalent(ctx: &Context, a: &Type, b: &Type) -> Result<bool, TypeError> {
    Ok(subtype(ctx, a, b)? && subtype(ctx, b, a)?)
}

/// Replaces a leading type variable by its bound until a capture-annotated
/// type remains.
pub fn expose(ctx: &Context, ty: &Type) -> Result<Type, TypeError> {
    let mut cur = ty;
    for _ in 0..DEFAULT_DEPTH_LIMIT {
        match cur {
            Type::Capt(..) => return Ok(cur.clone()),
            Type::Var(x) => {
                cur = ctx
                    .type_bound(x)
                    .ok_or_else(|| TypeError::ill_scoped(format!("unbound type variable `{x}`")))?;
            }
        }
    }
    Err(TypeError::depth())
}

#[derive(Clone, Copy, Debug)]
pub struct Subtyper {
    pub depth_limit: usize,
}

/// Picks one binder name usable on both sides of a binder comparison.
fn common_binder(ctx: &Context, x1: &Name, x2: &Name, t1: &Type, t2: &Type) -> Name {
    let f1 = t1.free_names();
    let f2 = t2.free_names();
    if x1 == x2 && !ctx.binds(x1) {
        return x1.clone();
    }
    ctx.fresh_for(x1, |n| {
        (n != x1 && f1.contains_any(n)) || (n != x2 && f2.contains_any(n))
    })
}

impl Subtyper {
    pub fn new(depth_limit: usize) -> Self {
        Subtyper { depth_limit }
    }

    pub fn subtype(&self, ctx: &Context, a: &Type, b: &Type) -> Result<bool, TypeError> {
        self.sub(ctx, a, b, 0)
    }

    fn sub(&self, ctx: &Context, a: &Type, b: &Type, depth: usize) -> Result<bool, TypeError> {
        if depth > self.depth_limit {
            return Err(TypeError::depth());
        }
        match (a, b) {
            (Type::Var(x), Type::Var(y)) if x == y => {
                if ctx.type_bound(x).is_none() {
                    return Err(TypeError::ill_scoped(format!(
                        "unbound type variable `{x}`"
                    )));
                }
                Ok(true)
            }
            (Type::Var(x), _) => {
                let bound = ctx
                    .type_bound(x)
                    .ok_or_else(|| TypeError::ill_scoped(format!("unbound type variable `{x}`")))?;
                self.sub(ctx, bound, b, depth + 1)
            }
            (Type::Capt(c, u), Type::Var(y)) => {
                // Only the least pretype sits below a type variable.
                if matches!(**u, Pretype::Bottom) {
                    let target = cv(b, ctx)?;
                    subcapture(ctx, c, &target)
                } else {
                    if ctx.type_bound(y).is_none() {
                        return Err(TypeError::ill_scoped(format!(
                            "unbound type variable `{y}`"
                        )));
                    }
                    Ok(false)
                }
            }
            (Type::Capt(c1, u1), Type::Capt(c2, u2)) => {
                Ok(subcapture(ctx, c1, c2)? && self.subpretype(ctx, u1, u2, depth + 1)?)
            }
        }
    }

    fn subpretype(
        &self,
        ctx: &Context,
        a: &Pretype,
        b: &Pretype,
        depth: usize,
    ) -> Result<bool, TypeError> {
        use Pretype::*;
        if depth > self.depth_limit {
            return Err(TypeError::depth());
        }
        match (a, b) {
            (Bottom, _) | (_, Top) => Ok(true),
            (Base(x), Base(y)) => Ok(x == y),
            (Region, Region) => Ok(true),
            (
                Fun {
                    param: x1,
                    param_ty: s1,
                    result: t1,
                },
                Fun {
                    param: x2,
                    param_ty: s2,
                    result: t2,
                },
            ) => {
                if !self.sub(ctx, s2, s1, depth + 1)? {
                    return Ok(false);
                }
                let z = common_binder(ctx, x1, x2, t1, t2);
                let t1 = if *x1 == z {
                    t1.clone()
                } else {
                    t1.rename_term_var(x1, &z)
                };
                let t2 = if *x2 == z {
                    t2.clone()
                } else {
                    t2.rename_term_var(x2, &z)
                };
                let inner = ctx.with_term(z, s2.clone());
                self.sub(&inner, &t1, &t2, depth + 1)
            }
            (
                TFun {
                    param: x1,
                    bound: s1,
                    result: t1,
                },
                TFun {
                    param: x2,
                    bound: s2,
                    result: t2,
                },
            ) => {
                if !self.sub(ctx, s2, s1, depth + 1)? {
                    return Ok(false);
                }
                let z = common_binder(ctx, x1, x2, t1, t2);
                let zt = Type::Var(z.clone());
                let t1 = if *x1 == z {
                    t1.clone()
                } else {
                    t1.subst_type(x1, &zt)
                };
                let t2 = if *x2 == z {
                    t2.clone()
                } else {
                    t2.subst_type(x2, &zt)
                };
                let inner = ctx.with_type(z, s2.clone());
                self.sub(&inner, &t1, &t2, depth + 1)
            }
            (Return(t1), Return(t2)) | (Ptr(t1), Ptr(t2)) => {
                Ok(self.sub(ctx, t1, t2, depth + 1)? && self.sub(ctx, t2, t1, depth + 1)?)
            }
            (Eff(a1, b1), Eff(a2, b2)) => Ok(self.sub(ctx, a1, a2, depth + 1)?
                && self.sub(ctx, a2, a1, depth + 1)?
                && self.sub(ctx, b1, b2, depth + 1)?
                && self.sub(ctx, b2, b1, depth + 1)?),
            _ => Ok(false),
        }
    }
}

/// `Capt(c, Bottom)`, the type of expressions that never produce a value.
pub fn bottom() -> Type {
    Type::capt(CaptureSet::empty(), Pretype::Bottom)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cs(names: &[&str]) -> CaptureSet {
        CaptureSet::of(names.iter().copied())
    }

    fn logger(names: &[&str]) -> Type {
        Type::capt(cs(names), Pretype::Base(Name::new("Logger")))
    }

    fn u(c: CaptureSet) -> Type {
        Type::capt(c, Pretype::Base(Name::new("U")))
    }

    #[test]
    fn pure_logger_is_a_file_logger() {
        let ctx = Context::new().with_term("File", logger(&[]).clone());
        let ctx = ctx.with_term("F", Type::top(CaptureSet::Universal));
        assert!(subtype(&ctx, &logger(&[]), &logger(&["File"])).unwrap());
        assert!(!subtype(&ctx, &logger(&["F"]), &logger(&[])).unwrap());
    }

    #[test]
    fn dependent_parameter_capture_is_contravariant() {
        // {} forall(y: {} U) {y} U  is not below  {} forall(y: {*} U) {y} U
        let a = Type::fun(cs(&[]), "y", u(cs(&[])), u(cs(&["y"])));
        let b = Type::fun(cs(&[]), "y", u(CaptureSet::Universal), u(cs(&["y"])));
        assert!(!subtype(&Context::new(), &a, &b).unwrap());
        assert!(subtype(&Context::new(), &b, &a).unwrap());
    }

    #[test]
    fn reflexive_and_top() {
        let t = Type::fun(cs(&[]), "x", u(CaptureSet::Universal), u(cs(&["x"])));
        assert!(subtype(&Context::new(), &t, &t).unwrap());
        let top = Type::top(cs(&[]));
        assert!(subtype(&Context::new(), &t, &top).unwrap());
        assert!(subpretype(&Context::new(), &Pretype::Region, &Pretype::Top).unwrap());
    }

    #[test]
    fn alpha_renamed_functions() {
        let a = Type::fun(cs(&[]), "x", u(CaptureSet::Universal), u(cs(&["x"])));
        let b = Type::fun(cs(&[]), "z", u(CaptureSet::Universal), u(cs(&["z"])));
        assert!(equivalent(&Context::new(), &a, &b).unwrap());
    }

    #[test]
    fn type_variables() {
        let ctx = Context::new()
            .with_type("X", Type::top(cs(&[])))
            .with_type("Y", Type::var("X"));
        assert!(subtype(&ctx, &Type::var("Y"), &Type::var("X")).unwrap());
        assert!(subtype(&ctx, &Type::var("Y"), &Type::top(cs(&[]))).unwrap());
        assert!(!subtype(&ctx, &Type::var("X"), &Type::var("Y")).unwrap());
        assert!(!subtype(&ctx, &Type::top(cs(&[])), &Type::var("X")).unwrap());
        assert!(subtype(&ctx, &bottom(), &Type::var("X")).unwrap());
        assert_eq!(expose(&ctx, &Type::var("Y")).unwrap(), Type::top(cs(&[])));
    }

    #[test]
    fn bounded_quantifiers() {
        // forall[X <: {*} Top] X  <:  forall[Y <: {} Top] Y
        let a = Type::tfun(
            cs(&[]),
            "X",
            Type::top(CaptureSet::Universal),
            Type::var("X"),
        );
        let b = Type::tfun(cs(&[]), "Y", Type::top(cs(&[])), Type::var("Y"));
        assert!(subtype(&Context::new(), &a, &b).unwrap());
        assert!(!subtype(&Context::new(), &b, &a).unwrap());
    }
}
