//! Small-step call-by-value evaluation.
//!
//! A state is decomposed into an evaluation context, represented as a list of
//! frames from the outside in, and a redex. Non-local control (returns and
//! effect operations) searches the frames for the binder of its capability.
//! Regions are backed by a store of frames that are marked dead, not removed,
//! when their block finishes, so that dangling accesses are observable.

use std::collections::BTreeSet;
use std::fmt;

use crate::capture::CaptureSet;
use crate::name::Name;
use crate::syntax::{Pretype, Term, Type};
use crate::Extensions;

pub const DEFAULT_FUEL: u64 = 100_000;

/// Deliberate evaluator faults, used to check that the test harness notices
/// broken semantics.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Mutation {
    /// Beta reduction substitutes in term positions only, leaving the
    /// parameter in capture sets.
    SkipCaptureSubst,
    /// Type application drops the type argument instead of substituting it.
    SkipTypeSubst,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum StuckReason {
    UnhandledEffect,
    DanglingDeref,
    UnboundCapability,
    NoRule,
}

impl StuckReason {
    pub fn tag(&self) -> &'static str {
        match self {
            StuckReason::UnhandledEffect => "unhandled-effect",
            StuckReason::DanglingDeref => "dangling-deref",
            StuckReason::UnboundCapability => "unbound-capability",
            StuckReason::NoRule => "no-rule",
        }
    }
}

impl fmt::Display for StuckReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RegionFrame {
    pub name: Name,
    pub live: bool,
    pub cells: Vec<(usize, Term)>,
}

impl RegionFrame {
    fn get(&self, loc: usize) -> Option<&Term> {
        self.cells.iter().find(|(l, _)| *l == loc).map(|(_, v)| v)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MachineState {
    pub term: Term,
    pub store: Vec<RegionFrame>,
    pub step_count: u64,
    pub next_loc: usize,
    pub extensions: Extensions,
    /// Name of the rule used by the most recent step.
    pub last_rule: Option<&'static str>,
    pub mutation: Option<Mutation>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum StepResult {
    Stepped(MachineState),
    Done(Term),
    Stuck(StuckReason, MachineState),
}

/// One layer of an evaluation context; the hole is the missing subterm.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Frame {
    AppFun(Term),
    AppArg(Term),
    TApp(Type),
    Handle {
        cap: Name,
        answer: Type,
    },
    ReturnCap(Term),
    ReturnValue(Term),
    Region(Name),
    New {
        region: Name,
        elem: Type,
    },
    Deref,
    HandleEff {
        cap: Name,
        eff: Type,
        arg: Name,
        kont: Name,
        handler: Term,
    },
    Do(Name),
}

impl Frame {
    pub fn plug(&self, hole: Term) -> Term {
        let b = Box::new(hole);
        match self.clone() {
            Frame::AppFun(a) => Term::App(b, Box::new(a)),
            Frame::AppArg(f) => Term::App(Box::new(f), b),
            Frame::TApp(t) => Term::TApp(b, t),
            Frame::Handle { cap, answer } => Term::Handle {
                cap,
                answer,
                body: b,
            },
            Frame::ReturnCap(v) => Term::Return {
                cap: b,
                value: Box::new(v),
            },
            Frame::ReturnValue(c) => Term::Return {
                cap: Box::new(c),
                value: b,
            },
            Frame::Region(handle) => Term::Region { handle, body: b },
            Frame::New { region, elem } => Term::New {
                region,
                elem,
                init: b,
            },
            Frame::Deref => Term::Deref(b),
            Frame::HandleEff {
                cap,
                eff,
                arg,
                kont,
                handler,
            } => Term::HandleEff {
                cap,
                eff,
                arg,
                kont,
                handler: Box::new(handler),
                body: b,
            },
            Frame::Do(cap) => Term::Do { cap, arg: b },
        }
    }

    /// The capability bound by this frame, if any.
    pub fn binds(&self) -> Option<&Name> {
        match self {
            Frame::Handle { cap, .. } | Frame::HandleEff { cap, .. } => Some(cap),
            Frame::Region(h) => Some(h),
            _ => None,
        }
    }
}

pub fn plug_all(frames: &[Frame], hole: Term) -> Term {
    frames.iter().rev().fold(hole, |acc, f| f.plug(acc))
}

pub fn is_value(t: &Term, ext: Extensions) -> bool {
    match t {
        Term::Abs { .. } | Term::TAbs { .. } => true,
        Term::Var(_) => ext.any(),
        Term::Ptr { .. } => ext.regions,
        _ => false,
    }
}

/// Splits a non-value into an evaluation context and a redex. `entered`
/// tells whether a region block with the given handle is already running.
pub fn decompose(
    t: &Term,
    ext: Extensions,
    entered: &dyn Fn(&Name) -> bool,
) -> Option<(Vec<Frame>, Term)> {
    if is_value(t, ext) {
        return None;
    }
    let mut frames = Vec::new();
    let mut cur = t;
    loop {
        let v = |t: &Term| is_value(t, ext);
        let next: Option<(Frame, &Term)> = match cur {
            Term::App(f, a) if !v(f) => Some((Frame::AppFun((**a).clone()), f)),
            Term::App(f, a) if !v(a) => Some((Frame::AppArg((**f).clone()), a)),
            Term::TApp(f, ty) if !v(f) => Some((Frame::TApp(ty.clone()), f)),
            Term::Handle { cap, answer, body } if !v(body) => Some((
                Frame::Handle {
                    cap: cap.clone(),
                    answer: answer.clone(),
                },
                body,
            )),
            Term::Return { cap, value } if !v(cap) => {
                Some((Frame::ReturnCap((**value).clone()), cap))
            }
            Term::Return { cap, value } if !v(value) => {
                Some((Frame::ReturnValue((**cap).clone()), value))
            }
            Term::Region { handle, body } if entered(handle) && !v(body) => {
                Some((Frame::Region(handle.clone()), body))
            }
            Term::New { region, elem, init } if !v(init) => Some((
                Frame::New {
                    region: region.clone(),
                    elem: elem.clone(),
                },
                init,
            )),
            Term::Deref(inner) if !v(inner) => Some((Frame::Deref, inner)),
            Term::HandleEff {
                cap,
                eff,
                arg,
                kont,
                handler,
                body,
            } if !v(body) => Some((
                Frame::HandleEff {
                    cap: cap.clone(),
                    eff: eff.clone(),
                    arg: arg.clone(),
                    kont: kont.clone(),
                    handler: (**handler).clone(),
                },
                body,
            )),
            Term::Do { cap, arg } if !v(arg) => Some((Frame::Do(cap.clone()), arg)),
            _ => None,
        };
        match next {
            Some((frame, inner)) => {
                frames.push(frame);
                cur = inner;
            }
            None => return Some((frames, cur.clone())),
        }
    }
}

/// Every name occurring in a term, bound or free, in any position.
pub fn all_names(t: &Term) -> BTreeSet<Name> {
    fn ty_names(ty: &Type, acc: &mut BTreeSet<Name>) {
        match ty {
            Type::Var(x) => {
                acc.insert(x.clone());
            }
            Type::Capt(c, u) => {
                acc.extend(c.names().cloned());
                match &**u {
                    Pretype::Fun {
                        param,
                        param_ty,
                        result,
                    } => {
                        acc.insert(param.clone());
                        ty_names(param_ty, acc);
                        ty_names(result, acc);
                    }
                    Pretype::TFun {
                        param,
                        bound,
                        result,
                    } => {
                        acc.insert(param.clone());
                        ty_names(bound, acc);
                        ty_names(result, acc);
                    }
                    Pretype::Return(t) | Pretype::Ptr(t) => ty_names(t, acc),
                    Pretype::Eff(a, b) => {
                        ty_names(a, acc);
                        ty_names(b, acc);
                    }
                    Pretype::Top | Pretype::Bottom | Pretype::Base(_) | Pretype::Region => {}
                }
            }
        }
    }
    let mut acc = BTreeSet::new();
    t.visit(&mut |s| match s {
        Term::Var(x) => {
            acc.insert(x.clone());
        }
        Term::Abs {
            param, param_ty, ..
        } => {
            acc.insert(param.clone());
            ty_names(param_ty, &mut acc);
        }
        Term::TAbs { param, bound, .. } => {
            acc.insert(param.clone());
            ty_names(bound, &mut acc);
        }
        Term::TApp(_, ty) => ty_names(ty, &mut acc),
        Term::Handle { cap, answer, .. } => {
            acc.insert(cap.clone());
            ty_names(answer, &mut acc);
        }
        Term::Region { handle, .. } => {
            acc.insert(handle.clone());
        }
        Term::New { region, elem, .. } | Term::Ptr { region, elem, .. } => {
            acc.insert(region.clone());
            ty_names(elem, &mut acc);
        }
        Term::HandleEff {
            cap,
            eff,
            arg,
            kont,
            ..
        } => {
            acc.extend([cap.clone(), arg.clone(), kont.clone()]);
            ty_names(eff, &mut acc);
        }
        Term::Do { cap, .. } => {
            acc.insert(cap.clone());
        }
        Term::App(..) | Term::Return { .. } | Term::Deref(_) => {}
    });
    acc
}

impl MachineState {
    pub fn new(term: Term, extensions: Extensions) -> Self {
        MachineState {
            term,
            store: Vec::new(),
            step_count: 0,
            next_loc: 0,
            extensions,
            last_rule: None,
            mutation: None,
        }
    }

    pub fn with_mutation(mut self, m: Option<Mutation>) -> Self {
        self.mutation = m;
        self
    }

    fn frame(&self, name: &Name) -> Option<&RegionFrame> {
        self.store.iter().rev().find(|f| &f.name == name)
    }

    fn frame_mut(&mut self, name: &Name) -> Option<&mut RegionFrame> {
        self.store.iter_mut().rev().find(|f| &f.name == name)
    }

    fn is_live(&self, name: &Name) -> bool {
        self.frame(name).is_some_and(|f| f.live)
    }

    pub fn dead_regions(&self) -> usize {
        self.store.iter().filter(|f| !f.live).count()
    }

    /// The current decomposition, if the term is not a value.
    pub fn decompose(&self) -> Option<(Vec<Frame>, Term)> {
        decompose(&self.term, self.extensions, &|n| self.is_live(n))
    }

    pub fn is_done(&self) -> bool {
        is_value(&self.term, self.extensions)
    }

    fn finish(mut self, frames: &[Frame], contractum: Term, rule: &'static str) -> StepResult {
        self.term = plug_all(frames, contractum);
        self.step_count += 1;
        self.last_rule = Some(rule);
        StepResult::Stepped(self)
    }

    fn stuck(self, reason: StuckReason) -> StepResult {
        StepResult::Stuck(reason, self)
    }

    pub fn step(mut self) -> StepResult {
        let Some((frames, redex)) = self.decompose() else {
            return StepResult::Done(self.term);
        };
        let ext = self.extensions;
        let val = |t: &Term| is_value(t, ext);
        match redex {
            Term::App(f, a) => match *f {
                Term::Abs { param, body, .. } => {
                    let contractum = if self.mutation == Some(Mutation::SkipCaptureSubst) {
                        body.subst_term(&param, &a)
                    } else {
                        body.instantiate(&param, &a)
                    };
                    self.finish(&frames, contractum, "beta-v")
                }
                _ => self.stuck(StuckReason::NoRule),
            },
            Term::TApp(f, ty) => match *f {
                Term::TAbs { param, body, .. } => {
                    let contractum = if self.mutation == Some(Mutation::SkipTypeSubst) {
                        *body
                    } else {
                        body.subst_type(&param, &ty)
                    };
                    self.finish(&frames, contractum, "beta-t")
                }
                _ => self.stuck(StuckReason::NoRule),
            },
            Term::Handle { cap, body, .. } => {
                if body.fv().contains(&cap) {
                    self.stuck(StuckReason::UnboundCapability)
                } else {
                    self.finish(&frames, retire(*body, &cap), "beta-return")
                }
            }
            Term::Return { cap, value } => {
                let Term::Var(x) = *cap else {
                    return self.stuck(StuckReason::NoRule);
                };
                match frames.iter().rposition(|f| f.binds() == Some(&x)) {
                    Some(i) if matches!(frames[i], Frame::Handle { .. }) => {
                        let mut value = *value;
                        for f in &frames[i..] {
                            if let Frame::Region(h) = f {
                                if let Some(r) = self.frame_mut(h) {
                                    r.live = false;
                                }
                            }
                            if let Some(cap) = f.binds() {
                                value = retire(value, cap);
                            }
                        }
                        self.finish(&frames[..i], value, "context-return")
                    }
                    _ => self.stuck(StuckReason::UnboundCapability),
                }
            }
            Term::Region { handle, body } if !self.is_live(&handle) => {
                // Entering: allocate a frame under a name unused anywhere.
                let mut taken = all_names(&self.term);
                taken.extend(self.store.iter().map(|f| f.name.clone()));
                let fresh = handle.fresh(|n| taken.contains(n));
                // Re-entering a finished block through a continuation copies
                // the cells it left behind.
                let cells = self
                    .frame(&handle)
                    .map(|f| f.cells.clone())
                    .unwrap_or_default();
                self.store.push(RegionFrame {
                    name: fresh.clone(),
                    live: true,
                    cells,
                });
                let body = body.rename_term_var(&handle, &fresh);
                self.finish(
                    &frames,
                    Term::Region {
                        handle: fresh,
                        body: Box::new(body),
                    },
                    "region-enter",
                )
            }
            Term::Region { handle, body } => {
                if let Some(f) = self.frame_mut(&handle) {
                    f.live = false;
                }
                self.finish(&frames, retire(*body, &handle), "region-exit")
            }
            Term::New { region, elem, init } => match self.frame(&region) {
                Some(f) if f.live => {
                    let loc = self.next_loc;
                    self.next_loc += 1;
                    self.frame_mut(&region)
                        .expect("frame exists")
                        .cells
                        .push((loc, *init));
                    self.finish(&frames, Term::Ptr { loc, region, elem }, "new")
                }
                Some(_) => self.stuck(StuckReason::DanglingDeref),
                None => self.stuck(StuckReason::UnboundCapability),
            },
            Term::Deref(target) => match *target {
                Term::Ptr { loc, region, .. } => match self.frame(&region) {
                    Some(f) if f.live => match f.get(loc) {
                        Some(v) => {
                            let v = v.clone();
                            self.finish(&frames, v, "deref")
                        }
                        None => self.stuck(StuckReason::DanglingDeref),
                    },
                    Some(_) => self.stuck(StuckReason::DanglingDeref),
                    None => self.stuck(StuckReason::UnboundCapability),
                },
                _ => self.stuck(StuckReason::NoRule),
            },
            Term::HandleEff { cap, body, .. } => {
                if body.fv().contains(&cap) {
                    self.stuck(StuckReason::UnboundCapability)
                } else {
                    self.finish(&frames, retire(*body, &cap), "beta-handle")
                }
            }
            Term::Do { cap, arg } => {
                debug_assert!(val(&arg));
                match frames.iter().rposition(|f| f.binds() == Some(&cap)) {
                    Some(i) => {
                        let Frame::HandleEff {
                            eff,
                            arg: y,
                            kont: k,
                            handler,
                            ..
                        } = &frames[i]
                        else {
                            return self.stuck(StuckReason::UnboundCapability);
                        };
                        // The argument moves into the handler clause, out of
                        // the scope of every frame the continuation captures.
                        let arg = frames[i..]
                            .iter()
                            .filter_map(Frame::binds)
                            .fold(*arg, retire);
                        let contractum = resume(&frames[i..], eff, y, k, handler, &arg);
                        self.finish(&frames[..i], contractum, "context-handle")
                    }
                    None => self.stuck(StuckReason::UnhandledEffect),
                }
            }
            Term::Var(_) | Term::Ptr { .. } | Term::Abs { .. } | Term::TAbs { .. } => {
                self.stuck(StuckReason::NoRule)
            }
        }
    }
}

/// A value leaving the scope of capability `cap` may still name it in type
/// annotations. The capability never occurs in term position there, so
/// substituting the empty set (which subcaptures its `{*}` binding) keeps
/// the value typable at a subtype of its former type.
fn retire(value: Term, cap: &Name) -> Term {
    value.subst_capt(cap, &CaptureSet::empty())
}

/// `[k := \(z: B) E[z]][y := v] s` for a handler frame at the head of
/// `frames`.
fn resume(frames: &[Frame], eff: &Type, y: &Name, k: &Name, handler: &Term, v: &Term) -> Term {
    let b = match eff {
        Type::Capt(_, u) => match &**u {
            Pretype::Eff(_, b) => b.clone(),
            _ => Type::top(CaptureSet::Universal),
        },
        Type::Var(_) => Type::top(CaptureSet::Universal),
    };
    let context = plug_all(frames, Term::Var(Name::new("#hole")));
    let mut taken = all_names(&context);
    taken.extend(all_names(handler));
    taken.extend(all_names(v));
    let z = Name::new("z").fresh(|n| taken.contains(n));
    let continuation = Term::abs(z.clone(), b, plug_all(frames, Term::Var(z.clone())));
    taken.insert(z);
    taken.extend(all_names(&continuation));
    // Rename the clause parameters away from everything the substitutions
    // introduce, so that the two substitutions can be applied in sequence.
    let y2 = y.fresh(|n| taken.contains(n));
    taken.insert(y2.clone());
    let k2 = k.fresh(|n| taken.contains(n));
    let s = handler.rename_term_var(y, &y2).rename_term_var(k, &k2);
    s.instantiate(&y2, v).instantiate(&k2, &continuation)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Outcome {
    Done(Term),
    Stuck(StuckReason, Term),
    OutOfFuel,
}

#[derive(Clone, Debug)]
pub struct Evaluation {
    pub outcome: Outcome,
    pub steps: u64,
    pub final_state: MachineState,
    /// Every intermediate state, starting with the initial one, if requested.
    pub trace: Vec<MachineState>,
}

#[derive(Clone, Copy, Debug)]
pub struct Evaluator {
    pub fuel: u64,
    pub extensions: Extensions,
    pub trace: bool,
    pub mutation: Option<Mutation>,
}

impl Evaluator {
    pub fn new(extensions: Extensions) -> Self {
        Evaluator {
            fuel: DEFAULT_FUEL,
            extensions,
            trace: false,
            mutation: None,
        }
    }

    pub fn run(&self, t: &Term) -> Evaluation {
        self.run_with(t, |_| {})
    }

    /// Runs to completion, calling `observe` on every state reached,
    /// including the initial one.
    pub fn run_with(&self, t: &Term, mut observe: impl FnMut(&MachineState)) -> Evaluation {
        let mut state = MachineState::new(t.clone(), self.extensions).with_mutation(self.mutation);
        let mut trace = Vec::new();
        loop {
            observe(&state);
            if self.trace {
                trace.push(state.clone());
            }
            if state.is_done() {
                return Evaluation {
                    outcome: Outcome::Done(state.term.clone()),
                    steps: state.step_count,
                    final_state: state,
                    trace,
                };
            }
            if state.step_count >= self.fuel {
                return Evaluation {
                    outcome: Outcome::OutOfFuel,
                    steps: state.step_count,
                    final_state: state,
                    trace,
                };
            }
            match state.step() {
                StepResult::Stepped(next) => state = next,
                StepResult::Done(_) => unreachable!("checked above"),
                StepResult::Stuck(reason, s) => {
                    return Evaluation {
                        outcome: Outcome::Stuck(reason, s.term.clone()),
                        steps: s.step_count,
                        final_state: s,
                        trace,
                    }
                }
            }
        }
    }
}

/// Evaluates with the given fuel and no tracing.
pub fn evaluate(t: &Term, fuel: u64, ext: Extensions) -> Evaluation {
    Evaluator {
        fuel,
        ..Evaluator::new(ext)
    }
    .run(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn top(names: &[&str]) -> Type {
        Type::top(CaptureSet::of(names.iter().copied()))
    }

    fn id(x: &str) -> Term {
        Term::abs(x, top(&[]), Term::var(x))
    }

    #[test]
    fn values() {
        let core = Extensions::none();
        assert!(is_value(&id("x"), core));
        assert!(!is_value(&Term::var("x"), core));
        assert!(is_value(
            &Term::var("x"),
            Extensions {
                returns: true,
                ..core
            }
        ));
        assert!(!is_value(
            &Term::app(Term::var("x"), Term::var("y")),
            Extensions::all()
        ));
    }

    #[test]
    fn beta_steps() {
        let ev = evaluate(&id("x"), 10, Extensions::none());
        assert_eq!(ev.outcome, Outcome::Done(id("x")));
        assert_eq!(ev.steps, 0);
        let ev = evaluate(&Term::app(id("x"), id("y")), 10, Extensions::none());
        assert_eq!(ev.outcome, Outcome::Done(id("y")));
        assert_eq!(ev.steps, 1);
    }

    #[test]
    fn beta_substitutes_capture_sets() {
        // (\(x: {*} U) \(y: {x} U) y) v  with fv(v) = {}
        let u = |c: CaptureSet| Type::capt(c, Pretype::Base(Name::new("U")));
        let f = Term::abs(
            "x",
            u(CaptureSet::Universal),
            Term::abs("y", u(CaptureSet::of(["x"])), Term::var("y")),
        );
        let ev = evaluate(&Term::app(f, id("v")), 10, Extensions::none());
        assert_eq!(
            ev.outcome,
            Outcome::Done(Term::abs("y", u(CaptureSet::empty()), Term::var("y")))
        );
    }

    #[test]
    fn omega_runs_out_of_fuel() {
        // (\(x: {*} T) x x) (\(x: {*} T) x x), untyped
        let t = Type::top(CaptureSet::Universal);
        let w = Term::abs("x", t, Term::app(Term::var("x"), Term::var("x")));
        let ev = evaluate(&Term::app(w.clone(), w), 100, Extensions::none());
        assert_eq!(ev.outcome, Outcome::OutOfFuel);
        assert_eq!(ev.steps, 100);
    }

    #[test]
    fn non_local_return() {
        let ext = Extensions::all();
        // handle r : T in (\(a: T) a) (return r v)
        let t = Term::Handle {
            cap: Name::new("r"),
            answer: top(&[]),
            body: Box::new(Term::app(
                id("a"),
                Term::Return {
                    cap: Box::new(Term::var("r")),
                    value: Box::new(id("v")),
                },
            )),
        };
        let ev = evaluate(&t, 10, ext);
        assert_eq!(ev.outcome, Outcome::Done(id("v")));
    }

    #[test]
    fn unhandled_and_escaping_capabilities_are_stuck() {
        let ext = Extensions::all();
        let t = Term::Do {
            cap: Name::new("e"),
            arg: Box::new(id("v")),
        };
        assert!(matches!(
            evaluate(&t, 10, ext).outcome,
            Outcome::Stuck(StuckReason::UnhandledEffect, _)
        ));
        let t = Term::Handle {
            cap: Name::new("r"),
            answer: top(&[]),
            body: Box::new(Term::abs("u", top(&[]), Term::var("r"))),
        };
        assert!(matches!(
            evaluate(&t, 10, ext).outcome,
            Outcome::Stuck(StuckReason::UnboundCapability, _)
        ));
    }

    #[test]
    fn regions_allocate_and_free() {
        let ext = Extensions::all();
        let alloc = Term::New {
            region: Name::new("r"),
            elem: top(&[]),
            init: Box::new(id("v")),
        };
        let ok = Term::Region {
            handle: Name::new("r"),
            body: Box::new(Term::Deref(Box::new(alloc.clone()))),
        };
        let ev = evaluate(&ok, 10, ext);
        assert_eq!(ev.outcome, Outcome::Done(id("v")));
        assert_eq!(ev.final_state.dead_regions(), 1);
        let leak = Term::Deref(Box::new(Term::Region {
            handle: Name::new("r"),
            body: Box::new(alloc),
        }));
        assert!(matches!(
            evaluate(&leak, 10, ext).outcome,
            Outcome::Stuck(StuckReason::DanglingDeref, _)
        ));
    }

    #[test]
    fn deep_handler_resumes() {
        let ext = Extensions::all();
        // handle e : {*} Eff[{} Top, {} Top] = handler(y, k) => k y in do e v
        let eff = Type::capt(CaptureSet::Universal, Pretype::Eff(top(&[]), top(&[])));
        let t = Term::HandleEff {
            cap: Name::new("e"),
            eff,
            arg: Name::new("y"),
            kont: Name::new("k"),
            handler: Box::new(Term::app(Term::var("k"), Term::var("y"))),
            body: Box::new(Term::Do {
                cap: Name::new("e"),
                arg: Box::new(id("v")),
            }),
        };
        let ev = evaluate(&t, 20, ext);
        assert_eq!(ev.outcome, Outcome::Done(id("v")));
    }
}
