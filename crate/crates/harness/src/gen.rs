//! Type-directed generation of well-typed programs.
//!
//! The generator picks a target type and builds a term for it by choosing
//! among the typing rules that can produce that type. Every finished sample
//! is confirmed by the real checker; candidates it rejects are discarded and
//! regenerated.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cctrack_core::capture_analysis::{cv, subcapture};
use cctrack_core::subtyping::expose;
use cctrack_core::wf::wf_context;
use cctrack_core::{Binding, CaptureSet, Checker, Context, Extensions, Name, Pretype, Term, Type};

type NameSet = BTreeSet<Name>;

/// How to populate the typing context of a sample.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ContextMode {
    /// Always empty, so programs are closed.
    Closed,
    /// A few random type and term bindings.
    Open,
    /// Each sample flips a coin.
    Mixed,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct GenConfig {
    pub max_depth: usize,
    pub extensions: Extensions,
    pub contexts: ContextMode,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_depth: 4,
            extensions: Extensions::none(),
            contexts: ContextMode::Mixed,
        }
    }
}

/// A program together with its context and synthesized type.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Sample {
    pub seed: u64,
    pub context: Context,
    pub term: Term,
    pub ty: Type,
    pub extensions: Extensions,
}

impl Sample {
    pub fn is_closed(&self) -> bool {
        self.context.is_empty()
    }
}

/// Bookkeeping returned alongside a sample.
#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct GenStats {
    /// Candidates the checker rejected before one was accepted.
    pub rejected: u64,
    /// How often each generation strategy produced a term.
    pub strategies: BTreeMap<&'static str, u64>,
}

const ATTEMPTS: usize = 64;

/// Generates one checked sample. Deterministic in `seed`.
pub fn generate(seed: u64, cfg: &GenConfig, checker: &Checker) -> (Sample, GenStats) {
    let mut g = Generator::new(seed, *cfg, checker);
    for _ in 0..ATTEMPTS {
        let ctx = match cfg.contexts {
            ContextMode::Closed => Context::new(),
            ContextMode::Open => g.context(),
            ContextMode::Mixed => {
                if g.rng.gen_bool(0.5) {
                    Context::new()
                } else {
                    g.context()
                }
            }
        };
        let depth = g.rng.gen_range(0..=2);
        let target = g.top_level_type(&ctx, depth);
        g.limits.clear();
        let mut used = BTreeMap::new();
        std::mem::swap(&mut used, &mut g.stats.strategies);
        let term = g.term_of(&ctx, &target, cfg.max_depth);
        let produced = std::mem::replace(&mut g.stats.strategies, used);
        if let Some(term) = term {
            if let Some(ty) = g.confirm(&ctx, &term, &target) {
                for (k, v) in produced {
                    *g.stats.strategies.entry(k).or_default() += v;
                }
                let sample = Sample {
                    seed,
                    context: ctx,
                    term,
                    ty,
                    extensions: cfg.extensions,
                };
                return (sample, g.stats);
            }
        }
        g.stats.rejected += 1;
    }
    // Every attempt failed; fall back to the identity on pure values.
    let term = Term::abs("x", Type::top(CaptureSet::empty()), Term::var("x"));
    let ty = checker
        .synth(&Context::new(), &term)
        .expect("the identity is well typed");
    let sample = Sample {
        seed,
        context: Context::new(),
        term,
        ty,
        extensions: cfg.extensions,
    };
    (sample, g.stats)
}

pub struct Generator<'c> {
    pub rng: ChaCha8Rng,
    cfg: GenConfig,
    checker: &'c Checker,
    next: usize,
    /// Capture bounds of the lambdas being built, with the context length at
    /// which each lambda started. Variables bound before that point may only
    /// be used if they subcapture the bound.
    limits: Vec<(usize, CaptureSet)>,
    stats: GenStats,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Strategy {
    Var,
    Intro,
    Beta,
    TypeBeta,
    AppVar,
    TAppVar,
    Return,
    Handle,
    Region,
    Alloc,
    HandleEff,
    Do,
}

impl Strategy {
    fn name(self) -> &'static str {
        match self {
            Strategy::Var => "var",
            Strategy::Intro => "intro",
            Strategy::Beta => "beta",
            Strategy::TypeBeta => "type-beta",
            Strategy::AppVar => "app-var",
            Strategy::TAppVar => "tapp-var",
            Strategy::Return => "return",
            Strategy::Handle => "handle",
            Strategy::Region => "region",
            Strategy::Alloc => "alloc",
            Strategy::HandleEff => "handle-effect",
            Strategy::Do => "do",
        }
    }
}

impl<'c> Generator<'c> {
    pub fn new(seed: u64, cfg: GenConfig, checker: &'c Checker) -> Self {
        Generator {
            rng: ChaCha8Rng::seed_from_u64(seed),
            cfg,
            checker,
            next: 0,
            limits: Vec::new(),
            stats: GenStats::default(),
        }
    }

    fn fresh(&mut self, stem: &str) -> Name {
        self.next += 1;
        Name::new(format!("{stem}{}", self.next))
    }

    fn confirm(&self, ctx: &Context, term: &Term, target: &Type) -> Option<Type> {
        self.checker.check_context(ctx).ok()?;
        let ty = self.checker.synth(ctx, term).ok()?;
        self.checker.subtype(ctx, &ty, target).ok()?.then_some(ty)
    }

    // ---- contexts and types ----

    /// A random well-formed context of up to four bindings.
    pub fn context(&mut self) -> Context {
        loop {
            let mut ctx = Context::new();
            for _ in 0..self.rng.gen_range(1..=4) {
                let depth = self.rng.gen_range(0..=1);
                let ty = self.top_level_type(&ctx, depth);
                if self.rng.gen_bool(0.3) {
                    let x = self.fresh("X");
                    ctx.push_type(x, ty);
                } else if matches!(ty, Type::Var(_)) && self.cfg.extensions.any() {
                    // With extensions variables are values, and substituting a
                    // variable typed by a type variable does not preserve
                    // types; closed programs never do so.
                    continue;
                } else {
                    let x = self.fresh("z");
                    ctx.push_term(x, ty);
                }
            }
            if wf_context(&ctx).is_ok() {
                return ctx;
            }
        }
    }

    /// A type well formed at the top level of `ctx`.
    pub fn top_level_type(&mut self, ctx: &Context, depth: usize) -> Type {
        let dom: NameSet = ctx.term_names().cloned().collect();
        let tvars = type_vars(ctx);
        self.ty(&dom, &dom, &tvars, depth)
    }

    /// A type over `ctx` using `pos` in covariant capture sets and `neg` in
    /// contravariant ones.
    pub fn type_with_polarity(
        &mut self,
        ctx: &Context,
        pos: &NameSet,
        neg: &NameSet,
        depth: usize,
    ) -> Type {
        let tvars = type_vars(ctx);
        self.ty(pos, neg, &tvars, depth)
    }

    /// A type whose capture sets only use `pos` at covariant positions and
    /// `neg` at contravariant ones.
    fn ty(&mut self, pos: &NameSet, neg: &NameSet, tvars: &[Name], depth: usize) -> Type {
        if !tvars.is_empty() && self.rng.gen_bool(0.2) {
            return Type::Var(tvars.choose(&mut self.rng).unwrap().clone());
        }
        let c = self.capture_set(pos);
        if depth == 0 {
            return Type::top(c);
        }
        match self.rng.gen_range(0..10) {
            0..=2 => Type::top(c),
            3..=7 => {
                let x = self.fresh("x");
                let s = self.ty(neg, pos, tvars, depth - 1);
                let mut inner = pos.clone();
                inner.insert(x.clone());
                let r = self.ty(&inner, neg, tvars, depth - 1);
                Type::fun(c, x, s, r)
            }
            _ => {
                let x = self.fresh("X");
                let b = self.ty(neg, pos, tvars, depth - 1);
                let mut inner = tvars.to_vec();
                inner.push(x.clone());
                let r = self.ty(pos, neg, &inner, depth - 1);
                Type::tfun(c, x, b, r)
            }
        }
    }

    fn capture_set(&mut self, allowed: &NameSet) -> CaptureSet {
        match self.rng.gen_range(0..10) {
            0..=2 => CaptureSet::Universal,
            3..=5 => CaptureSet::empty(),
            _ => CaptureSet::of(allowed.iter().filter(|_| self.rng.gen_bool(0.4)).cloned()),
        }
    }

    // ---- terms ----

    fn usable(&self, ctx: &Context, index: usize, x: &Name) -> bool {
        self.limits.iter().all(|(start, c)| {
            index >= *start
                || subcapture(ctx, &CaptureSet::singleton(x.clone()), c).unwrap_or(false)
        })
    }

    /// Term bindings that may be referenced here, with their declared types.
    fn usable_terms(&self, ctx: &Context) -> Vec<(Name, Type)> {
        let bindings = ctx.bindings();
        bindings
            .iter()
            .enumerate()
            .filter_map(|(i, b)| match b {
                Binding::Term(x, t) if self.usable(ctx, i, x) => Some((x.clone(), t.clone())),
                _ => None,
            })
            .collect()
    }

    fn strategies(&self, ctx: &Context, ty: &Type, depth: usize) -> Vec<(Strategy, u32)> {
        let ext = self.cfg.extensions;
        let mut out = vec![(Strategy::Var, 2)];
        if matches!(ty, Type::Capt(..)) {
            out.push((Strategy::Intro, 3));
        }
        if depth == 0 {
            return out;
        }
        out.extend([
            (Strategy::Beta, 3),
            (Strategy::TypeBeta, 2),
            (Strategy::AppVar, 3),
            (Strategy::TAppVar, 2),
        ]);
        let concrete = cv(ty, ctx).is_ok_and(|c| !c.is_universal());
        if ext.returns {
            out.push((Strategy::Return, 2));
            if concrete {
                out.push((Strategy::Handle, 3));
            }
        }
        if ext.regions {
            out.push((Strategy::Alloc, 2));
            if concrete {
                out.push((Strategy::Region, 3));
            }
        }
        if ext.effects {
            out.push((Strategy::Do, 2));
            if concrete {
                out.push((Strategy::HandleEff, 3));
            }
        }
        out
    }

    /// A term whose type should be a subtype of `ty`.
    fn term_of(&mut self, ctx: &Context, ty: &Type, depth: usize) -> Option<Term> {
        let options = self.strategies(ctx, ty, depth);
        for _ in 0..4 {
            let &(s, _) = options.choose_weighted(&mut self.rng, |o| o.1).ok()?;
            if let Some(t) = self.apply(s, ctx, ty, depth) {
                *self.stats.strategies.entry(s.name()).or_default() += 1;
                return Some(t);
            }
        }
        for s in [Strategy::Var, Strategy::Intro] {
            if let Some(t) = self.apply(s, ctx, ty, depth.min(1)) {
                *self.stats.strategies.entry(s.name()).or_default() += 1;
                return Some(t);
            }
        }
        None
    }

    fn apply(&mut self, s: Strategy, ctx: &Context, ty: &Type, depth: usize) -> Option<Term> {
        let below = depth.saturating_sub(1);
        match s {
            Strategy::Var => self.var(ctx, ty),
            Strategy::Intro => self.intro(ctx, ty, depth),
            Strategy::Beta => {
                let y = self.fresh("y");
                let d = self.rng.gen_range(0..=2);
                let s = self.top_level_type(ctx, d);
                let arg = self.term_of(ctx, &s, below)?;
                let body = self.term_of(&ctx.with_term(y.clone(), s.clone()), ty, below)?;
                Some(Term::app(Term::abs(y, s, body), arg))
            }
            Strategy::TypeBeta => {
                let x = self.fresh("X");
                let d = self.rng.gen_range(0..=1);
                let bound = self.top_level_type(ctx, d);
                let arg = self.narrow(ctx, &bound);
                let body = self.term_of(&ctx.with_type(x.clone(), bound.clone()), ty, below)?;
                Some(Term::tapp(Term::tabs(x, bound, body), arg))
            }
            Strategy::AppVar => {
                let fs: Vec<(Name, Type, Type)> = self
                    .usable_terms(ctx)
                    .into_iter()
                    .filter_map(|(f, t)| match expose(ctx, &t).ok()? {
                        Type::Capt(_, u) => match *u {
                            Pretype::Fun {
                                param_ty, result, ..
                            } => Some((f, param_ty, result)),
                            _ => None,
                        },
                        Type::Var(_) => None,
                    })
                    .collect();
                let (f, param_ty, _) = fs.choose(&mut self.rng)?.clone();
                let arg = self.term_of(ctx, &param_ty, below)?;
                let t = Term::app(Term::Var(f), arg);
                self.fits(ctx, &t, ty).then_some(t)
            }
            Strategy::TAppVar => {
                let fs: Vec<(Name, Type)> = self
                    .usable_terms(ctx)
                    .into_iter()
                    .filter_map(|(f, t)| match expose(ctx, &t).ok()? {
                        Type::Capt(_, u) => match *u {
                            Pretype::TFun { bound, .. } => Some((f, bound)),
                            _ => None,
                        },
                        Type::Var(_) => None,
                    })
                    .collect();
                let (f, bound) = fs.choose(&mut self.rng)?.clone();
                let arg = self.narrow(ctx, &bound);
                let t = Term::tapp(Term::Var(f), arg);
                self.fits(ctx, &t, ty).then_some(t)
            }
            Strategy::Return => {
                let caps: Vec<(Name, Type)> = self
                    .usable_terms(ctx)
                    .into_iter()
                    .filter_map(|(r, t)| match t {
                        Type::Capt(_, u) => match *u {
                            Pretype::Return(a) => Some((r, a)),
                            _ => None,
                        },
                        Type::Var(_) => None,
                    })
                    .collect();
                let (r, answer) = caps.choose(&mut self.rng)?.clone();
                let v = self.term_of(ctx, &answer, below)?;
                Some(Term::Return {
                    cap: Box::new(Term::Var(r)),
                    value: Box::new(v),
                })
            }
            Strategy::Handle => {
                let r = self.fresh("r");
                let cap_ty = Type::capt(CaptureSet::Universal, Pretype::Return(ty.clone()));
                let body = self.term_of(&ctx.with_term(r.clone(), cap_ty), ty, below)?;
                Some(Term::Handle {
                    cap: r,
                    answer: ty.clone(),
                    body: Box::new(body),
                })
            }
            Strategy::Region => {
                let r = self.fresh("r");
                let cap_ty = Type::capt(CaptureSet::Universal, Pretype::Region);
                let body = self.term_of(&ctx.with_term(r.clone(), cap_ty), ty, below)?;
                Some(Term::Region {
                    handle: r,
                    body: Box::new(body),
                })
            }
            Strategy::Alloc => {
                let regions: Vec<Name> = self
                    .usable_terms(ctx)
                    .into_iter()
                    .filter(|(_, t)| matches!(t, Type::Capt(_, u) if **u == Pretype::Region))
                    .map(|(r, _)| r)
                    .collect();
                let r = regions.choose(&mut self.rng)?.clone();
                let init = self.term_of(ctx, ty, below)?;
                let alloc = Term::New {
                    region: r.clone(),
                    elem: ty.clone(),
                    init: Box::new(init),
                };
                if self.rng.gen_bool(0.5) {
                    Some(Term::Deref(Box::new(alloc)))
                } else {
                    let p = self.fresh("p");
                    let ptr_ty = Type::capt(CaptureSet::singleton(r), Pretype::Ptr(ty.clone()));
                    let reader = Term::abs(p.clone(), ptr_ty, Term::Deref(Box::new(Term::Var(p))));
                    Some(Term::app(reader, alloc))
                }
            }
            Strategy::HandleEff => {
                let e = self.fresh("e");
                let a = self.concrete_type(ctx);
                let d = self.rng.gen_range(0..=1);
                let b = self.top_level_type(ctx, d);
                let eff = Type::capt(CaptureSet::Universal, Pretype::Eff(a.clone(), b.clone()));
                let body = self.term_of(&ctx.with_term(e.clone(), eff.clone()), ty, below)?;
                let y = self.fresh("y");
                let k = self.fresh("k");
                let z = self.fresh("z");
                let kont = Type::fun(CaptureSet::Universal, z, b, ty.clone());
                let hctx = ctx.with_term(y.clone(), a).with_term(k.clone(), kont);
                let handler = self.term_of(&hctx, ty, below)?;
                Some(Term::HandleEff {
                    cap: e,
                    eff,
                    arg: y,
                    kont: k,
                    handler: Box::new(handler),
                    body: Box::new(body),
                })
            }
            Strategy::Do => {
                let caps: Vec<(Name, Type, Type)> = self
                    .usable_terms(ctx)
                    .into_iter()
                    .filter_map(|(e, t)| match t {
                        Type::Capt(_, u) => match *u {
                            Pretype::Eff(a, b) => Some((e, a, b)),
                            _ => None,
                        },
                        Type::Var(_) => None,
                    })
                    .filter(|(_, _, b)| self.checker.subtype(ctx, b, ty).unwrap_or(false))
                    .collect();
                let (e, a, _) = caps.choose(&mut self.rng)?.clone();
                let arg = self.term_of(ctx, &a, below)?;
                Some(Term::Do {
                    cap: e,
                    arg: Box::new(arg),
                })
            }
        }
    }

    fn fits(&self, ctx: &Context, t: &Term, ty: &Type) -> bool {
        self.checker
            .synth(ctx, t)
            .and_then(|found| self.checker.subtype(ctx, &found, ty))
            .unwrap_or(false)
    }

    fn var(&mut self, ctx: &Context, ty: &Type) -> Option<Term> {
        let candidates: Vec<Name> = self
            .usable_terms(ctx)
            .into_iter()
            .filter(|(x, t)| {
                let own = match t {
                    Type::Capt(_, u) => Type::Capt(CaptureSet::singleton(x.clone()), u.clone()),
                    Type::Var(_) => t.clone(),
                };
                self.checker.subtype(ctx, &own, ty).unwrap_or(false)
            })
            .map(|(x, _)| x)
            .collect();
        candidates.choose(&mut self.rng).cloned().map(Term::Var)
    }

    /// An abstraction of type `ty`.
    fn intro(&mut self, ctx: &Context, ty: &Type, depth: usize) -> Option<Term> {
        let Type::Capt(c, u) = ty else { return None };
        let below = depth.saturating_sub(1);
        match &**u {
            Pretype::Top => {
                if depth == 0 || self.rng.gen_bool(0.3) {
                    let x = self.fresh("x");
                    let s = self.top_level_type(ctx, 0);
                    return Some(Term::abs(x.clone(), s, Term::Var(x)));
                }
                let d = self.rng.gen_range(1..=2);
                let shape = self.top_level_type(ctx, d);
                match shape {
                    Type::Capt(_, u) if *u != Pretype::Top => {
                        self.intro(ctx, &Type::Capt(c.clone(), u), below)
                    }
                    _ => self.intro(ctx, &Type::top(c.clone()), 0),
                }
            }
            Pretype::Fun {
                param,
                param_ty,
                result,
            } => {
                let x = self.fresh("x");
                let result = result.rename_term_var(param, &x);
                self.limits.push((ctx.len(), c.clone()));
                let body =
                    self.term_of(&ctx.with_term(x.clone(), param_ty.clone()), &result, below);
                self.limits.pop();
                Some(Term::abs(x, param_ty.clone(), body?))
            }
            Pretype::TFun {
                param,
                bound,
                result,
            } => {
                let x = self.fresh("X");
                let result = result.subst_type(param, &Type::Var(x.clone()));
                self.limits.push((ctx.len(), c.clone()));
                let body = self.term_of(&ctx.with_type(x.clone(), bound.clone()), &result, below);
                self.limits.pop();
                Some(Term::tabs(x, bound.clone(), body?))
            }
            _ => None,
        }
    }

    /// A type argument below `bound`: the bound itself, a type variable
    /// bounded by it, or the bound with its capture set emptied.
    fn narrow(&mut self, ctx: &Context, bound: &Type) -> Type {
        let mut options = vec![bound.clone()];
        for b in ctx.bindings() {
            if let Binding::Type(x, _) = b {
                let v = Type::Var(x.clone());
                if self.checker.subtype(ctx, &v, bound).unwrap_or(false) {
                    options.push(v);
                }
            }
        }
        if let Type::Capt(_, u) = bound {
            options.push(Type::Capt(CaptureSet::empty(), u.clone()));
        }
        options.choose(&mut self.rng).unwrap().clone()
    }

    /// A type whose capture set is not universal, chasing type variables.
    fn concrete_type(&mut self, ctx: &Context) -> Type {
        for _ in 0..8 {
            let d = self.rng.gen_range(0..=1);
            let t = self.top_level_type(ctx, d);
            if cv(&t, ctx).is_ok_and(|c| !c.is_universal()) {
                return t;
            }
        }
        Type::top(CaptureSet::empty())
    }
}

fn type_vars(ctx: &Context) -> Vec<Name> {
    ctx.bindings()
        .iter()
        .filter_map(|b| match b {
            Binding::Type(x, _) => Some(x.clone()),
            Binding::Term(..) => None,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_per_seed() {
        let cfg = GenConfig {
            extensions: Extensions::all(),
            ..GenConfig::default()
        };
        let checker = Checker::new(Extensions::all());
        for seed in 0..20 {
            let (a, _) = generate(seed, &cfg, &checker);
            let (b, _) = generate(seed, &cfg, &checker);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn samples_type_check() {
        let cfg = GenConfig {
            extensions: Extensions::all(),
            ..GenConfig::default()
        };
        let checker = Checker::new(Extensions::all());
        for seed in 0..50 {
            let (s, _) = generate(seed, &cfg, &checker);
            let ty = checker.synth(&s.context, &s.term).unwrap();
            assert_eq!(ty, s.ty);
        }
    }
}
