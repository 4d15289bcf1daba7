//! The capture set of a type and the subcapturing judgment.

use std::cell::Cell;

use crate::capture::CaptureSet;
use crate::context::Context;
use crate::error::TypeError;
use crate::name::Name;
use crate::syntax::Type;

const CHASE_LIMIT: usize = 512;

thread_local! {
    static DEREFS: Cell<u64> = const { Cell::new(0) };
}

/// Number of variable dereference steps taken by `subcapture` on this thread.
pub fn deref_count() -> u64 {
    DEREFS.with(Cell::get)
}

/// `cv(T, Γ)`: the outer capture set, chasing type variables through their
/// declared bounds.
pub fn cv(ty: &Type, ctx: &Context) -> Result<CaptureSet, TypeError> {
    let mut cur = ty;
    for _ in 0..CHASE_LIMIT {
        match cur {
            Type::Capt(c, _) => return Ok(c.clone()),
            Type::Var(x) => {
                cur = ctx
                    .type_bound(x)
                    .ok_or_else(|| TypeError::ill_scoped(format!("unbound type variable `{x}`")))?;
            }
        }
    }
    Err(TypeError::depth())
}

/// Decides `Γ ⊢ c1 <: c2`.
///
/// Each variable of `c1` must either occur in `c2` or be bound to a type
/// whose capture set subcaptures `c2`. Variables typed by a type variable are
/// resolved through the variable's bound.
pub fn subcapture(ctx: &Context, c1: &CaptureSet, c2: &CaptureSet) -> Result<bool, TypeError> {
    let mut visiting = Vec::new();
    sub(ctx, c1, c2, &mut visiting)
}

fn sub(
    ctx: &Context,
    c1: &CaptureSet,
    c2: &CaptureSet,
    visiting: &mut Vec<Name>,
) -> Result<bool, TypeError> {
    if c2.is_universal() {
        return Ok(true);
    }
    let CaptureSet::Concrete(xs) = c1 else {
        return Ok(false);
    };
    for x in xs {
        if !elem_sub(ctx, x, c2, visiting)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn elem_sub(
    ctx: &Context,
    x: &Name,
    c2: &CaptureSet,
    visiting: &mut Vec<Name>,
) -> Result<bool, TypeError> {
    let ty = ctx
        .term_type(x)
        .ok_or_else(|| TypeError::ill_scoped(format!("unbound variable `{x}` in capture set")))?;
    if c2.contains(x) {
        return Ok(true);
    }
    // A cycle can only arise from an ill-formed context; treat it as failure.
    if visiting.contains(x) || visiting.len() > CHASE_LIMIT {
        return Ok(false);
    }
    let declared = cv(ty, ctx)?;
    DEREFS.with(|d| d.set(d.get() + 1));
    visiting.push(x.clone());
    let r = sub(ctx, &declared, c2, visiting);
    visiting.pop();
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Pretype;

    fn cs(names: &[&str]) -> CaptureSet {
        CaptureSet::of(names.iter().copied())
    }

    fn logger(names: &[&str]) -> Type {
        Type::capt(cs(names), Pretype::Base(Name::new("Logger")))
    }

    #[test]
    fn cv_cases() {
        let ctx = Context::new()
            .with_term("y", Type::top(CaptureSet::Universal))
            .with_type("X", Type::top(cs(&["y"])))
            .with_type("Y", Type::var("X"));
        assert_eq!(cv(&Type::top(cs(&["y"])), &ctx).unwrap(), cs(&["y"]));
        assert_eq!(cv(&Type::top(cs(&[])), &ctx).unwrap(), cs(&[]));
        assert_eq!(cv(&Type::var("X"), &ctx).unwrap(), cs(&["y"]));
        assert_eq!(cv(&Type::var("Y"), &ctx).unwrap(), cs(&["y"]));
        assert!(cv(&Type::var("Z"), &ctx).is_err());
    }

    #[test]
    fn variable_dereference() {
        let ctx = Context::new()
            .with_term("y", logger(&[]))
            .with_term("x", logger(&["y"]));
        assert!(subcapture(&ctx, &cs(&["x"]), &cs(&["y"])).unwrap());
        let ctx = Context::new()
            .with_term("y", Type::top(CaptureSet::Universal))
            .with_term("x", logger(&["y"]));
        assert!(!subcapture(&ctx, &cs(&["y"]), &cs(&["x"])).unwrap());
    }

    #[test]
    fn pure_variables_drop_out() {
        let ctx = Context::new()
            .with_term("y", Type::top(cs(&[])))
            .with_term("x", Type::top(CaptureSet::Universal));
        assert!(subcapture(&ctx, &cs(&["x", "y"]), &cs(&["x"])).unwrap());
        assert!(subcapture(&ctx, &cs(&[]), &cs(&[])).unwrap());
        assert!(!subcapture(&ctx, &cs(&["x"]), &cs(&[])).unwrap());
    }

    #[test]
    fn universal_is_top() {
        let ctx = Context::new().with_term("x", Type::top(cs(&[])));
        assert!(subcapture(&ctx, &CaptureSet::Universal, &CaptureSet::Universal).unwrap());
        assert!(!subcapture(&ctx, &CaptureSet::Universal, &cs(&["x"])).unwrap());
        assert!(subcapture(&ctx, &cs(&["x"]), &CaptureSet::Universal).unwrap());
    }

    #[test]
    fn unbound_member_is_ill_scoped() {
        let err = subcapture(&Context::new(), &cs(&["q"]), &cs(&[])).unwrap_err();
        assert_eq!(err.kind, crate::error::ErrorKind::IllScoped);
    }

    #[test]
    fn type_variable_bound_is_followed() {
        let ctx = Context::new()
            .with_type("X", Type::top(cs(&[])))
            .with_term("x", Type::var("X"));
        assert!(subcapture(&ctx, &cs(&["x"]), &cs(&[])).unwrap());
    }
}
