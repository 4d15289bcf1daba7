//! Type synthesis and checking.

use std::cell::RefCell;
use std::collections::BTreeMap;

use crate::capture::CaptureSet;
use crate::capture_analysis::{cv, subcapture};
use crate::context::Context;
use crate::error::{ErrorKind, EscapeVia, TypeError};
use crate::name::Name;
use crate::subtyping::{bottom, expose, Subtyper, DEFAULT_DEPTH_LIMIT};
use crate::syntax::{Pretype, Term, Type};
use crate::wf::{wf_context, wf_top_level};
use crate::Extensions;

/// Counts how often each typing rule fired.
#[derive(Clone, Default, Debug, PartialEq, Eq)]
pub struct Coverage {
    pub rules: BTreeMap<&'static str, u64>,
}

impl Coverage {
    pub fn get(&self, rule: &str) -> u64 {
        self.rules.get(rule).copied().unwrap_or(0)
    }

    pub fn merge(&mut self, other: &Coverage) {
        for (k, v) in &other.rules {
            *self.rules.entry(k).or_default() += v;
        }
    }
}

#[derive(Debug)]
pub struct Checker {
    pub extensions: Extensions,
    pub depth_limit: usize,
    coverage: RefCell<Coverage>,
    /// Parameters of the abstractions enclosing the term being checked.
    open_params: RefCell<Vec<Name>>,
}

impl Checker {
    pub fn new(extensions: Extensions) -> Self {
        Checker {
            extensions,
            depth_limit: DEFAULT_DEPTH_LIMIT,
            coverage: RefCell::default(),
            open_params: RefCell::default(),
        }
    }

    pub fn core() -> Self {
        Checker::new(Extensions::none())
    }

    pub fn coverage(&self) -> Coverage {
        self.coverage.borrow().clone()
    }

    fn hit(&self, rule: &'static str) {
        *self.coverage.borrow_mut().rules.entry(rule).or_default() += 1;
    }

    pub fn subtype(&self, ctx: &Context, a: &Type, b: &Type) -> Result<bool, TypeError> {
        Subtyper::new(self.depth_limit).subtype(ctx, a, b)
    }

    /// An upper bound of `s` and `t`, least where the two have the same shape.
    pub fn join(&self, ctx: &Context, s: &Type, t: &Type) -> Result<Type, TypeError> {
        if self.subtype(ctx, s, t)? {
            return Ok(t.clone());
        }
        if self.subtype(ctx, t, s)? {
            return Ok(s.clone());
        }
        let c = cv(s, ctx)?.union(&cv(t, ctx)?);
        if matches!(s, Type::Var(_)) || matches!(t, Type::Var(_)) {
            let (es, et) = (expose(ctx, s)?, expose(ctx, t)?);
            if matches!(es, Type::Var(_)) || matches!(et, Type::Var(_)) {
                return Ok(Type::top(c));
            }
            return self.join(ctx, &es, &et);
        }
        let (Type::Capt(_, u1), Type::Capt(_, u2)) = (s, t) else {
            return Ok(Type::top(c));
        };
        let u = match (&**u1, &**u2) {
            (
                Pretype::Fun {
                    param: p1,
                    param_ty: a1,
                    result: r1,
                },
                Pretype::Fun {
                    param: p2,
                    param_ty: a2,
                    result: r2,
                },
            ) => match self.meet_bound(ctx, a1, a2)? {
                Some(a) => {
                    let p = ctx.fresh_for(p1, |n| {
                        (n != p1 && r1.free_names().contains_any(n))
                            || (n != p2 && r2.free_names().contains_any(n))
                    });
                    let r1 = r1.rename_term_var(p1, &p);
                    let r2 = r2.rename_term_var(p2, &p);
                    let inner = ctx.with_term(p.clone(), a.clone());
                    Pretype::Fun {
                        param: p,
                        param_ty: a,
                        result: self.join(&inner, &r1, &r2)?,
                    }
                }
                None => Pretype::Top,
            },
            (
                Pretype::TFun {
                    param: x1,
                    bound: b1,
                    result: r1,
                },
                Pretype::TFun {
                    param: x2,
                    bound: b2,
                    result: r2,
                },
            ) => match self.meet_bound(ctx, b1, b2)? {
                Some(b) => {
                    let x = ctx.fresh_for(x1, |n| {
                        (n != x1 && r1.free_names().contains_any(n))
                            || (n != x2 && r2.free_names().contains_any(n))
                    });
                    let r1 = r1.subst_type(x1, &Type::Var(x.clone()));
                    let r2 = r2.subst_type(x2, &Type::Var(x.clone()));
                    let inner = ctx.with_type(x.clone(), b.clone());
                    Pretype::TFun {
                        param: x,
                        bound: b,
                        result: self.join(&inner, &r1, &r2)?,
                    }
                }
                None => Pretype::Top,
            },
            _ => Pretype::Top,
        };
        Ok(Type::Capt(c, Box::new(u)))
    }

    /// The smaller of two comparable types, for contravariant positions.
    fn meet_bound(&self, ctx: &Context, a: &Type, b: &Type) -> Result<Option<Type>, TypeError> {
        if self.subtype(ctx, a, b)? {
            Ok(Some(a.clone()))
        } else if self.subtype(ctx, b, a)? {
            Ok(Some(b.clone()))
        } else {
            Ok(None)
        }
    }

    /// `Γ ⊢ T wf`, also rejecting pretypes of disabled extensions.
    pub fn wf(&self, ctx: &Context, ty: &Type) -> Result<(), TypeError> {
        let used = ty.extension_pretypes();
        if let Some(missing) = used.missing_from(&self.extensions) {
            return Err(TypeError::new(
                ErrorKind::ExtensionDisabled,
                format!("type uses the `{missing}` extension, which is not enabled"),
            ));
        }
        if ty.contains_bottom() {
            return Err(TypeError::ill_scoped(
                "`Bot` cannot be written in annotations",
            ));
        }
        wf_top_level(ctx, ty)
    }

    /// Well-formedness of a context, including extension use.
    pub fn check_context(&self, ctx: &Context) -> Result<(), TypeError> {
        for b in ctx.bindings() {
            let (crate::context::Binding::Term(_, t) | crate::context::Binding::Type(_, t)) = b;
            if let Some(missing) = t.extension_pretypes().missing_from(&self.extensions) {
                return Err(TypeError::new(
                    ErrorKind::ExtensionDisabled,
                    format!("context uses the `{missing}` extension, which is not enabled"),
                ));
            }
        }
        wf_context(ctx)
    }

    fn require(&self, enabled: bool, what: &str, ext: &str) -> Result<(), TypeError> {
        if enabled {
            Ok(())
        } else {
            Err(TypeError::new(
                ErrorKind::ExtensionDisabled,
                format!("{what} requires the `{ext}` extension"),
            ))
        }
    }

    /// Checks `t` against `expected` by subsumption.
    pub fn check(&self, ctx: &Context, t: &Term, expected: &Type) -> Result<(), TypeError> {
        let found = self.synth(ctx, t)?;
        self.hit("sub");
        if self.subtype(ctx, &found, expected)? {
            Ok(())
        } else {
            Err(TypeError::mismatch(
                expected,
                &found,
                "term does not have the expected type",
            ))
        }
    }

    pub fn synth(&self, ctx: &Context, t: &Term) -> Result<Type, TypeError> {
        match t {
            Term::Var(x) => {
                self.hit("var");
                match ctx.term_type(x) {
                    Some(Type::Capt(_, u)) => {
                        Ok(Type::Capt(CaptureSet::singleton(x.clone()), u.clone()))
                    }
                    Some(tv @ Type::Var(_)) => Ok(tv.clone()),
                    None => Err(TypeError::ill_scoped(format!("unbound variable `{x}`"))),
                }
            }
            Term::Abs {
                param,
                param_ty,
                body,
            } => {
                self.hit("abs");
                self.wf(ctx, param_ty)?;
                let (z, body) = open_term_binder(ctx, param, body);
                let inner = ctx.with_term(z.clone(), param_ty.clone());
                self.open_params.borrow_mut().push(z.clone());
                let result = self.synth(&inner, &body);
                self.open_params.borrow_mut().pop();
                let (param, result) = close_term_binder(param, &z, result?);
                let ty = Type::fun(t.fv_set(), param, param_ty.clone(), result);
                wf_top_level(ctx, &ty)?;
                Ok(ty)
            }
            Term::TAbs { param, bound, body } => {
                self.hit("tabs");
                self.wf(ctx, bound)?;
                let (z, body) = open_type_binder(ctx, param, body);
                let inner = ctx.with_type(z.clone(), bound.clone());
                let result = self.synth(&inner, &body)?;
                let (param, result) = if z != *param && !result.free_names().contains_any(param) {
                    (
                        param.clone(),
                        result.subst_type(&z, &Type::Var(param.clone())),
                    )
                } else {
                    (z, result)
                };
                let ty = Type::tfun(t.fv_set(), param, bound.clone(), result);
                wf_top_level(ctx, &ty)?;
                Ok(ty)
            }
            Term::App(f, a) => {
                self.hit("app");
                let tf = self.synth(ctx, f)?;
                let exposed = expose(ctx, &tf)?;
                match &exposed {
                    Type::Capt(_, u) => match &**u {
                        Pretype::Fun {
                            param,
                            param_ty,
                            result,
                        } => {
                            let ta = self.synth(ctx, a)?;
                            if !self.subtype(ctx, &ta, param_ty)? {
                                return Err(TypeError::mismatch(
                                    param_ty,
                                    &ta,
                                    "argument does not match the parameter type",
                                ));
                            }
                            let c = cv(&ta, ctx)?;
                            Ok(result.subst_capt(param, &c))
                        }
                        Pretype::Bottom => {
                            self.synth(ctx, a)?;
                            Ok(bottom())
                        }
                        _ => Err(not_a(&tf, "function")),
                    },
                    Type::Var(_) => Err(not_a(&tf, "function")),
                }
            }
            Term::TApp(f, arg) => {
                self.hit("tapp");
                self.wf(ctx, arg)?;
                let tf = self.synth(ctx, f)?;
                let exposed = expose(ctx, &tf)?;
                match &exposed {
                    Type::Capt(_, u) => match &**u {
                        Pretype::TFun {
                            param,
                            bound,
                            result,
                        } => {
                            if !self.subtype(ctx, arg, bound)? {
                                return Err(TypeError::mismatch(
                                    bound,
                                    arg,
                                    "type argument is not within the bound",
                                ));
                            }
                            Ok(result.subst_type(param, arg))
                        }
                        Pretype::Bottom => Ok(bottom()),
                        _ => Err(not_a(&tf, "type function")),
                    },
                    Type::Var(_) => Err(not_a(&tf, "type function")),
                }
            }
            Term::Handle { cap, answer, body } => {
                self.hit("handle-return");
                self.require(self.extensions.returns, "`handle`", "returns")?;
                self.wf(ctx, answer)?;
                let (x, body) = open_term_binder(ctx, cap, body);
                let cap_ty = Type::capt(CaptureSet::Universal, Pretype::Return(answer.clone()));
                let inner = ctx.with_term(x.clone(), cap_ty);
                self.check(&inner, &body, answer)?;
                let c = cv(answer, &inner)?;
                if subcapture(&inner, &CaptureSet::singleton(x.clone()), &c)? {
                    return Err(TypeError::escape(
                        cap,
                        EscapeVia::ReturnAnswer,
                        Some(answer),
                    ));
                }
                Ok(answer.clone())
            }
            Term::Return { cap, value } => {
                self.hit("return");
                self.require(self.extensions.returns, "`return`", "returns")?;
                let tc = self.synth(ctx, cap)?;
                match expose(ctx, &tc)? {
                    Type::Capt(_, u) => match *u {
                        Pretype::Return(answer) => {
                            self.check(ctx, value, &answer)?;
                            Ok(bottom())
                        }
                        Pretype::Bottom => {
                            self.synth(ctx, value)?;
                            Ok(bottom())
                        }
                        _ => Err(not_a(&tc, "return capability")),
                    },
                    Type::Var(_) => Err(not_a(&tc, "return capability")),
                }
            }
            Term::Region { handle, body } => {
                self.hit("region");
                self.require(self.extensions.regions, "`region`", "regions")?;
                let (x, body) = open_term_binder(ctx, handle, body);
                let inner = ctx.with_term(
                    x.clone(),
                    Type::capt(CaptureSet::Universal, Pretype::Region),
                );
                let result = self.synth(&inner, &body)?;
                let c = cv(&result, &inner)?;
                if subcapture(&inner, &CaptureSet::singleton(x.clone()), &c)? {
                    return Err(TypeError::escape(
                        handle,
                        EscapeVia::RegionResult,
                        Some(&result),
                    ));
                }
                let avoided = avoid(&result, &x, &CaptureSet::Universal, true);
                if avoided.free_names().contains_term(&x) {
                    return Err(TypeError::escape(
                        handle,
                        EscapeVia::RegionResult,
                        Some(&result),
                    ));
                }
                let result = avoided;
                wf_top_level(ctx, &result)?;
                Ok(result)
            }
            Term::New { region, elem, init } => {
                self.hit("new");
                self.require(self.extensions.regions, "`new`", "regions")?;
                let rt = ctx
                    .term_type(region)
                    .ok_or_else(|| TypeError::ill_scoped(format!("unbound region `{region}`")))?;
                match expose(ctx, rt)? {
                    Type::Capt(_, u) if matches!(*u, Pretype::Region) => {}
                    _ => return Err(not_a(rt, "region handle")),
                }
                self.wf(ctx, elem)?;
                self.check(ctx, init, elem)?;
                Ok(Type::capt(
                    CaptureSet::singleton(region.clone()),
                    Pretype::Ptr(elem.clone()),
                ))
            }
            Term::Deref(target) => {
                self.hit("deref");
                self.require(self.extensions.regions, "`!`", "regions")?;
                let tt = self.synth(ctx, target)?;
                match expose(ctx, &tt)? {
                    Type::Capt(_, u) => match *u {
                        Pretype::Ptr(elem) => Ok(elem),
                        Pretype::Bottom => Ok(bottom()),
                        _ => Err(not_a(&tt, "pointer")),
                    },
                    Type::Var(_) => Err(not_a(&tt, "pointer")),
                }
            }
            Term::Ptr { region, elem, .. } => {
                self.hit("ptr");
                self.require(self.extensions.regions, "a pointer", "regions")?;
                let rt = ctx
                    .term_type(region)
                    .ok_or_else(|| TypeError::ill_scoped(format!("unbound region `{region}`")))?;
                match expose(ctx, rt)? {
                    Type::Capt(_, u) if matches!(*u, Pretype::Region) => {}
                    _ => return Err(not_a(rt, "region handle")),
                }
                self.wf(ctx, elem)?;
                Ok(Type::capt(
                    CaptureSet::singleton(region.clone()),
                    Pretype::Ptr(elem.clone()),
                ))
            }
            Term::HandleEff {
                cap,
                eff,
                arg,
                kont,
                handler,
                body,
            } => {
                self.hit("handle-effect");
                self.require(self.extensions.effects, "an effect handler", "effects")?;
                self.synth_handle_eff(ctx, cap, eff, arg, kont, handler, body)
            }
            Term::Do { cap, arg } => {
                self.hit("do");
                self.require(self.extensions.effects, "`do`", "effects")?;
                let tc = self.synth(ctx, &Term::Var(cap.clone()))?;
                match expose(ctx, &tc)? {
                    Type::Capt(_, u) => match *u {
                        Pretype::Eff(a, b) => {
                            self.check(ctx, arg, &a)?;
                            Ok(b)
                        }
                        Pretype::Bottom => {
                            self.synth(ctx, arg)?;
                            Ok(bottom())
                        }
                        _ => Err(not_a(&tc, "effect capability")),
                    },
                    Type::Var(_) => Err(not_a(&tc, "effect capability")),
                }
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn synth_handle_eff(
        &self,
        ctx: &Context,
        cap: &Name,
        eff: &Type,
        arg: &Name,
        kont: &Name,
        handler: &Term,
        body: &Term,
    ) -> Result<Type, TypeError> {
        self.wf(ctx, eff)?;
        let (a, b) = effect_signature(ctx, eff)?;
        let (x, body) = open_term_binder(ctx, cap, body);
        let singleton = CaptureSet::singleton(x.clone());
        let cap_ty = Type::capt(CaptureSet::Universal, Pretype::Eff(a.clone(), b.clone()));
        let inner = ctx.with_term(x.clone(), cap_ty);
        // (1a) the capability cannot flow out through effect arguments.
        if subcapture(&inner, &singleton, &cv(&a, &inner)?)? {
            return Err(TypeError::escape(cap, EscapeVia::EffectArgument, Some(&a)));
        }
        // (3) the handled program.
        let found = self.synth(&inner, &body)?;
        // (1b) nor through the answer.
        let admissible = |answer: &Type| -> Result<(), TypeError> {
            if subcapture(&inner, &singleton, &cv(answer, &inner)?)?
                || answer.free_names().contains_term(&x)
            {
                return Err(TypeError::escape(
                    cap,
                    EscapeVia::EffectAnswer,
                    Some(answer),
                ));
            }
            wf_top_level(ctx, answer)
        };
        if subcapture(&inner, &singleton, &cv(&found, &inner)?)? {
            return Err(TypeError::escape(
                cap,
                EscapeVia::EffectAnswer,
                Some(&found),
            ));
        }
        let open = self.open_params.borrow().clone();
        let mut answer = uncouple(
            &avoid(&found, &x, &CaptureSet::Universal, true),
            &open,
            true,
        );
        if answer.free_names().contains_term(&x) {
            return Err(TypeError::escape(
                cap,
                EscapeVia::EffectAnswer,
                Some(&found),
            ));
        }
        admissible(&answer)?;
        // (2) the handler clause.
        let mut fv_body = body.fv();
        fv_body.remove(&x);
        let mut fv_handler = handler.fv();
        fv_handler.remove(arg);
        fv_handler.remove(kont);
        let ck = CaptureSet::Concrete(fv_body.union(&fv_handler).cloned().collect());
        let y = if ctx.binds(arg) {
            ctx.fresh_for(arg, |n| handler.free_names().contains_any(n) || n == kont)
        } else {
            arg.clone()
        };
        let handler = if y != *arg {
            handler.rename_term_var(arg, &y)
        } else {
            handler.clone()
        };
        let with_y = ctx.with_term(y.clone(), a.clone());
        let k = if with_y.binds(kont) {
            with_y.fresh_for(kont, |n| handler.free_names().contains_any(n))
        } else {
            kont.clone()
        };
        let handler = if k != *kont {
            handler.rename_term_var(kont, &k)
        } else {
            handler
        };
        // The answer type is the body's type unless the handler clause needs
        // a wider one; each widening changes the continuation's type, so the
        // clause is re-checked.
        for _ in 0..ANSWER_WIDENINGS {
            let z = continuation_param(&with_y, &k, &answer);
            let kont_ty = Type::fun(ck.clone(), z, b.clone(), answer.clone());
            let handler_ctx = with_y.with_term(k.clone(), kont_ty);
            let result = self.synth(&handler_ctx, &handler)?;
            self.hit("sub");
            if self.subtype(&handler_ctx, &result, &answer)? {
                return Ok(answer);
            }
            let result = avoid(&result, &y, &cv(&a, ctx)?, true);
            let result = avoid(&result, &k, &ck, true);
            let names = result.free_names();
            if names.contains_any(&y) || names.contains_any(&k) {
                return Err(TypeError::mismatch(
                    &answer,
                    &result,
                    "handler clause does not have the answer type",
                ));
            }
            let wider = uncouple(&self.join(ctx, &answer, &result)?, &open, true);
            admissible(&wider)?;
            answer = wider;
        }
        Err(TypeError::mismatch(
            &answer,
            &answer,
            "no answer type fits the handler clause",
        ))
    }
}

/// The `A` and `B` of an `Eff[A, B]` annotation.
pub fn effect_signature(ctx: &Context, eff: &Type) -> Result<(Type, Type), TypeError> {
    match expose(ctx, eff)? {
        Type::Capt(_, u) => match *u {
            Pretype::Eff(a, b) => Ok((a, b)),
            _ => Err(not_a(eff, "effect type")),
        },
        Type::Var(_) => Err(not_a(eff, "effect type")),
    }
}

/// How often the effect handler rule widens its answer type before giving up.
const ANSWER_WIDENINGS: usize = 3;

/// Name of the continuation's parameter: fresh for the context and the answer.
pub fn continuation_param(ctx: &Context, avoid: &Name, answer: &Type) -> Name {
    let free = answer.free_names();
    ctx.fresh_for(&Name::new("z"), |n| n == avoid || free.contains_any(n))
}

/// The least supertype of `ty` not mentioning `x` below its top-level
/// capture set, where `x` is bound with capture set `bound`: `x` is dropped
/// from capture sets in negative positions and replaced by `bound` in
/// positive ones. Invariant pretypes mentioning `x` in a positive position
/// are widened to `Top`; in a negative one they are kept and the caller
/// reports the escape.
fn avoid(ty: &Type, x: &Name, bound: &CaptureSet, positive: bool) -> Type {
    let Type::Capt(c, u) = ty else {
        return ty.clone();
    };
    let c = if positive {
        c.subst(x, bound)
    } else {
        c.subst(x, &CaptureSet::empty())
    };
    let u = match &**u {
        Pretype::Fun {
            param,
            param_ty,
            result,
        } => Pretype::Fun {
            param: param.clone(),
            param_ty: avoid(param_ty, x, bound, !positive),
            result: avoid(result, x, bound, positive),
        },
        Pretype::TFun {
            param,
            bound: b,
            result,
        } => Pretype::TFun {
            param: param.clone(),
            bound: avoid(b, x, bound, !positive),
            result: avoid(result, x, bound, positive),
        },
        other if positive && other.free_names().contains_term(x) => Pretype::Top,
        other => other.clone(),
    };
    Type::Capt(c, Box::new(u))
}

/// Removes the parameters `open` from capture sets in contravariant
/// positions, which yields a supertype. Effect handler answer types are
/// normalized this way: the answer type is chosen by the checker, and an
/// enclosing abstraction must not find its own parameter in a contravariant
/// position of it.
fn uncouple(ty: &Type, open: &[Name], positive: bool) -> Type {
    let Type::Capt(c, u) = ty else {
        return ty.clone();
    };
    let c = match c {
        CaptureSet::Concrete(names) if !positive => CaptureSet::Concrete(
            names
                .iter()
                .filter(|n| !open.contains(n))
                .cloned()
                .collect(),
        ),
        _ => c.clone(),
    };
    let u = match &**u {
        Pretype::Fun {
            param,
            param_ty,
            result,
        } => Pretype::Fun {
            param: param.clone(),
            param_ty: uncouple(param_ty, open, !positive),
            result: uncouple(result, open, positive),
        },
        Pretype::TFun {
            param,
            bound,
            result,
        } => Pretype::TFun {
            param: param.clone(),
            bound: uncouple(bound, open, !positive),
            result: uncouple(result, open, positive),
        },
        other => other.clone(),
    };
    Type::Capt(c, Box::new(u))
}

fn not_a(ty: &Type, what: &str) -> TypeError {
    TypeError {
        found: Some(ty.clone()),
        ..TypeError::new(ErrorKind::NotAFunction, format!("expected a {what}"))
    }
}

/// Renames a term binder that collides with a context entry.
fn open_term_binder(ctx: &Context, x: &Name, body: &Term) -> (Name, Term) {
    if !ctx.binds(x) {
        return (x.clone(), body.clone());
    }
    let free = body.free_names();
    let z = ctx.fresh_for(x, |n| free.contains_any(n));
    (z.clone(), body.rename_term_var(x, &z))
}

fn open_type_binder(ctx: &Context, x: &Name, body: &Term) -> (Name, Term) {
    if !ctx.binds(x) {
        return (x.clone(), body.clone());
    }
    let free = body.free_names();
    let z = ctx.fresh_for(x, |n| free.contains_any(n));
    (z.clone(), body.rename_type_var(x, &z))
}

/// Restores the source name of a renamed binder in a synthesized type when
/// that does not capture anything.
fn close_term_binder(original: &Name, used: &Name, result: Type) -> (Name, Type) {
    if original == used || result.free_names().contains_any(original) {
        (used.clone(), result)
    } else {
        (original.clone(), result.rename_term_var(used, original))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cs(names: &[&str]) -> CaptureSet {
        CaptureSet::of(names.iter().copied())
    }

    fn univ_top() -> Type {
        Type::top(CaptureSet::Universal)
    }

    #[test]
    fn identity_on_tracked_values() {
        let id = Term::abs("x", univ_top(), Term::var("x"));
        let ty = Checker::core().synth(&Context::new(), &id).unwrap();
        assert_eq!(
            ty,
            Type::fun(cs(&[]), "x", univ_top(), Type::top(cs(&["x"])))
        );
    }

    #[test]
    fn identity_on_type_variable() {
        let ctx = Context::new().with_type("X", univ_top());
        let id = Term::abs("x", Type::var("X"), Term::var("x"));
        let ty = Checker::core().synth(&ctx, &id).unwrap();
        assert_eq!(ty, Type::fun(cs(&[]), "x", Type::var("X"), Type::var("X")));
    }

    #[test]
    fn application_substitutes_argument_capture() {
        // (\(x: {*} Top) x) c  with c: {*} Top  gives {c} Top
        let ctx = Context::new().with_term("c", univ_top());
        let t = Term::app(Term::abs("x", univ_top(), Term::var("x")), Term::var("c"));
        let ty = Checker::core().synth(&ctx, &t).unwrap();
        assert_eq!(ty, Type::top(cs(&["c"])));
    }

    #[test]
    fn shadowed_binders_are_renamed() {
        let ctx = Context::new().with_term("x", univ_top());
        let t = Term::abs("x", Type::top(cs(&[])), Term::var("x"));
        let ty = Checker::core().synth(&ctx, &t).unwrap();
        assert_eq!(
            ty,
            Type::fun(cs(&[]), "x", Type::top(cs(&[])), Type::top(cs(&["x"])))
        );
    }

    #[test]
    fn extensions_must_be_enabled() {
        let t = Term::Handle {
            cap: Name::new("r"),
            answer: Type::top(cs(&[])),
            body: Box::new(Term::abs("x", Type::top(cs(&[])), Term::var("x"))),
        };
        let err = Checker::core().synth(&Context::new(), &t).unwrap_err();
        assert_eq!(err.kind, ErrorKind::ExtensionDisabled);
        let ok = Checker::new(Extensions::all())
            .synth(&Context::new(), &t)
            .unwrap();
        assert_eq!(ok, Type::top(cs(&[])));
    }

    #[test]
    fn returning_the_capability_escapes() {
        let t = Term::Handle {
            cap: Name::new("r"),
            answer: univ_top(),
            body: Box::new(Term::var("r")),
        };
        let err = Checker::new(Extensions::all())
            .synth(&Context::new(), &t)
            .unwrap_err();
        assert_eq!(err.escaping_capability(), Some(&Name::new("r")));
    }

    #[test]
    fn region_pointers_cannot_escape() {
        let elem = Type::top(cs(&[]));
        let unit = Term::abs("u", elem.clone(), Term::var("u"));
        let alloc = Term::New {
            region: Name::new("r"),
            elem: elem.clone(),
            init: Box::new(unit.clone()),
        };
        let checker = Checker::new(Extensions::all());
        let leak = Term::Region {
            handle: Name::new("r"),
            body: Box::new(alloc.clone()),
        };
        let err = checker.synth(&Context::new(), &leak).unwrap_err();
        assert!(matches!(err.kind, ErrorKind::Escape { .. }));
        let fine = Term::Region {
            handle: Name::new("r"),
            body: Box::new(Term::Deref(Box::new(alloc))),
        };
        assert_eq!(checker.synth(&Context::new(), &fine).unwrap(), elem);
    }
}
