//! Algebraic properties of subcapturing, subtyping and well-formedness,
//! checked on generated contexts, capture sets and types.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use cctrack_core::capture_analysis::{cv, subcapture};
use cctrack_core::subtyping::subtype;
use cctrack_core::wf::{wf_top_level, wf_type};
use cctrack_core::{Binding, CaptureSet, Checker, Context, Extensions, Name, Pretype, Type};

use crate::gen::{GenConfig, Generator};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LawReport {
    pub law: &'static str,
    /// Instances where the law's premises held and the conclusion was tested.
    pub instances: usize,
    pub failures: Vec<String>,
}

impl LawReport {
    fn new(law: &'static str) -> Self {
        LawReport {
            law,
            instances: 0,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok && self.failures.len() < 5 {
            self.failures.push(detail());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub const LAWS: &[&str] = &[
    "subcapture-reflexivity",
    "subcapture-transitivity",
    "subcapture-subset",
    "subcapture-universal-top",
    "subcapture-pure-drop",
    "subtype-reflexivity",
    "subtype-transitivity",
    "monotone-substitution",
    "wf-weakening",
];

/// Runs every law until it has `count` instances, or gives up after a
/// bounded number of attempts.
pub fn check_all(seed: u64, count: usize) -> Vec<LawReport> {
    LAWS.iter()
        .enumerate()
        .map(|(i, law)| check_law(law, seed.wrapping_add(i as u64 * 0x9E37_79B9), count))
        .collect()
}

pub fn check_law(law: &'static str, seed: u64, count: usize) -> LawReport {
    let checker = Checker::new(Extensions::none());
    let cfg = GenConfig::default();
    let mut g = Generator::new(seed, cfg, &checker);
    let mut report = LawReport::new(law);
    let max_attempts = count.saturating_mul(50).max(100);
    let mut attempts = 0;
    while report.instances < count && attempts < max_attempts {
        attempts += 1;
        let ctx = g.context();
        match law {
            "subcapture-reflexivity" => {
                let c = random_set(&mut g, &ctx);
                report.record(sc(&ctx, &c, &c), || format!("{ctx} |- {c} <: {c}"));
            }
            "subcapture-transitivity" => {
                let c1 = random_set(&mut g, &ctx);
                let c2 = random_set(&mut g, &ctx);
                let c3 = random_set(&mut g, &ctx);
                if sc(&ctx, &c1, &c2) && sc(&ctx, &c2, &c3) {
                    report.record(sc(&ctx, &c1, &c3), || {
                        format!("{ctx} |- {c1} <: {c2} <: {c3} but not {c1} <: {c3}")
                    });
                }
            }
            "subcapture-subset" => {
                let c2 = concrete_set(&mut g, &ctx);
                let c1 = CaptureSet::of(c2.names().filter(|_| g.rng.gen_bool(0.5)).cloned());
                report.record(sc(&ctx, &c1, &c2), || format!("{ctx} |- {c1} <: {c2}"));
            }
            "subcapture-universal-top" => {
                let c = random_set(&mut g, &ctx);
                let ok = sc(&ctx, &c, &CaptureSet::Universal)
                    && sc(&ctx, &CaptureSet::Universal, &c) == c.is_universal();
                report.record(ok, || format!("{ctx} with {c}"));
            }
            "subcapture-pure-drop" => {
                let pure: Vec<Name> = ctx
                    .bindings()
                    .iter()
                    .filter_map(|b| match b {
                        Binding::Term(x, t @ Type::Capt(..))
                            if cv(t, &ctx).is_ok_and(|c| c.is_empty()) =>
                        {
                            Some(x.clone())
                        }
                        _ => None,
                    })
                    .collect();
                if let Some(x) = pure.choose(&mut g.rng) {
                    let c = CaptureSet::singleton(x.clone());
                    report.record(sc(&ctx, &c, &CaptureSet::empty()), || {
                        format!("{ctx} |- {c} <: {{}}")
                    });
                }
            }
            "subtype-reflexivity" => {
                let d = g.rng.gen_range(0..=3);
                let t = g.top_level_type(&ctx, d);
                report.record(st(&ctx, &t, &t), || format!("{ctx} |- {t} <: {t}"));
            }
            "subtype-transitivity" => {
                let d = g.rng.gen_range(0..=3);
                let t1 = g.top_level_type(&ctx, d);
                let t2 = widen(&mut g, &ctx, &t1);
                let t3 = widen(&mut g, &ctx, &t2);
                if st(&ctx, &t1, &t2) && st(&ctx, &t2, &t3) {
                    report.record(st(&ctx, &t1, &t3), || {
                        format!("{ctx} |- {t1} <: {t2} <: {t3} but not {t1} <: {t3}")
                    });
                }
            }
            "monotone-substitution" => {
                let x = Name::new("m");
                let d = g.rng.gen_range(0..=1);
                let s = g.top_level_type(&ctx, d);
                let inner = ctx.with_term(x.clone(), s);
                let dom: BTreeSet<Name> = ctx.term_names().cloned().collect();
                let mut plus = dom.clone();
                plus.insert(x.clone());
                let d = g.rng.gen_range(0..=3);
                let t = g.type_with_polarity(&inner, &plus, &dom, d);
                if wf_type(&inner, &plus, &dom, &t).is_err() {
                    continue;
                }
                let c2 = random_set(&mut g, &ctx);
                let c1 = match &c2 {
                    CaptureSet::Universal => random_set(&mut g, &ctx),
                    CaptureSet::Concrete(_) => {
                        CaptureSet::of(c2.names().filter(|_| g.rng.gen_bool(0.6)).cloned())
                    }
                };
                if sc(&ctx, &c1, &c2) {
                    let lo = t.subst_capt(&x, &c1);
                    let hi = t.subst_capt(&x, &c2);
                    report.record(st(&ctx, &lo, &hi), || {
                        format!("{ctx} |- [m := {c1}]{t} <: [m := {c2}]{t}")
                    });
                }
            }
            "wf-weakening" => {
                let d = g.rng.gen_range(0..=3);
                let t = g.top_level_type(&ctx, d);
                if wf_top_level(&ctx, &t).is_ok() {
                    let extra = g.top_level_type(&ctx, 1);
                    let bigger = ctx.with_term(Name::new("w"), extra);
                    report.record(wf_top_level(&bigger, &t).is_ok(), || {
                        format!("{t} wf in {ctx} but not after adding w")
                    });
                }
            }
            other => panic!("unknown law `{other}`"),
        }
    }
    report
}

fn sc(ctx: &Context, a: &CaptureSet, b: &CaptureSet) -> bool {
    subcapture(ctx, a, b).unwrap_or(false)
}

fn st(ctx: &Context, a: &Type, b: &Type) -> bool {
    subtype(ctx, a, b).unwrap_or(false)
}

fn concrete_set(g: &mut Generator<'_>, ctx: &Context) -> CaptureSet {
    let names: Vec<Name> = ctx.term_names().cloned().collect();
    CaptureSet::of(names.into_iter().filter(|_| g.rng.gen_bool(0.5)))
}

fn random_set(g: &mut Generator<'_>, ctx: &Context) -> CaptureSet {
    if g.rng.gen_bool(0.15) {
        CaptureSet::Universal
    } else {
        concrete_set(g, ctx)
    }
}

/// A supertype candidate: grows covariant capture sets, forgets structure
/// into `Top`, or replaces a type variable by its bound.
fn widen(g: &mut Generator<'_>, ctx: &Context, t: &Type) -> Type {
    match t {
        Type::Var(x) => match ctx.type_bound(x) {
            Some(b) if g.rng.gen_bool(0.5) => b.clone(),
            _ => t.clone(),
        },
        Type::Capt(c, u) => {
            let c2 = if g.rng.gen_bool(0.5) {
                c.union(&random_set(g, ctx))
            } else {
                c.clone()
            };
            let u2 = match &**u {
                _ if g.rng.gen_bool(0.2) => Pretype::Top,
                Pretype::Fun {
                    param,
                    param_ty,
                    result,
                } => {
                    let inner = ctx.with_term(param.clone(), param_ty.clone());
                    Pretype::Fun {
                        param: param.clone(),
                        param_ty: param_ty.clone(),
                        result: widen(g, &inner, result),
                    }
                }
                Pretype::TFun {
                    param,
                    bound,
                    result,
                } => {
                    let inner = ctx.with_type(param.clone(), bound.clone());
                    Pretype::TFun {
                        param: param.clone(),
                        bound: bound.clone(),
                        result: widen(g, &inner, result),
                    }
                }
                other => other.clone(),
            };
            Type::capt(c2, u2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laws_hold_on_small_runs() {
        for r in check_all(7, 200) {
            assert!(r.passed(), "{}: {:?}", r.law, r.failures);
            assert!(r.instances > 0, "{} never applied", r.law);
        }
    }
}
