//! Worked examples for capture sets, subcapturing, subtyping,
//! well-formedness, typing and evaluation, written against small programs.

#![allow(clippy::result_large_err)]

use cctrack_core::capture_analysis::{cv, subcapture};
use cctrack_core::eval::{evaluate, Outcome, StuckReason};
use cctrack_core::frontend::{parse_program, parse_term, parse_type, Aliases, Printer};
use cctrack_core::subtyping::{equivalent, expose, subtype};
use cctrack_core::wf::{wf_context, wf_top_level, wf_type};
use cctrack_core::{CaptureSet, Checker, Context, ErrorKind, Extensions, Name, Type};

struct Env {
    ctx: Context,
    aliases: Aliases,
}

impl Env {
    fn new(src: &str) -> Env {
        let program = parse_program(src, Extensions::none()).expect("prelude parses");
        Env {
            ctx: program.elaborate().context,
            aliases: program.aliases,
        }
    }

    fn ty(&self, src: &str) -> Type {
        parse_type(src, Extensions::none(), &self.aliases).expect("type parses")
    }

    fn synth(&self, src: &str) -> Result<Type, cctrack_core::TypeError> {
        let t = parse_term(src, Extensions::none(), &self.aliases).expect("term parses");
        Checker::core().synth(&self.ctx, &t)
    }

    fn print(&self, ty: &Type) -> String {
        Printer::with_aliases(&self.aliases).ty(ty)
    }
}

fn set(names: &[&str]) -> CaptureSet {
    CaptureSet::of(names.iter().copied())
}

const LOGGERS: &str = "
pretype Logger
assume-term y : {*} Logger
assume-term x : {y} Logger
";

#[test]
fn subcapture_through_a_variable_binding() {
    let env = Env::new(LOGGERS);
    assert!(subcapture(&env.ctx, &set(&["x"]), &set(&["y"])).unwrap());
}

#[test]
fn subcapture_does_not_run_backwards() {
    let env = Env::new(LOGGERS);
    assert!(!subcapture(&env.ctx, &set(&["y"]), &set(&["x"])).unwrap());
}

#[test]
fn pure_variables_drop_from_capture_sets() {
    let env = Env::new("assume-term y : {} Top\nassume-term x : {*} Top");
    assert!(subcapture(&env.ctx, &set(&["x", "y"]), &set(&["x"])).unwrap());
    assert!(!subcapture(&env.ctx, &set(&["x", "y"]), &set(&["y"])).unwrap());
}

#[test]
fn empty_set_subcaptures_everything() {
    let env = Env::new(LOGGERS);
    for c in [set(&[]), set(&["x"]), set(&["y"]), CaptureSet::Universal] {
        assert!(subcapture(&env.ctx, &set(&[]), &c).unwrap());
    }
}

#[test]
fn universal_is_only_below_itself() {
    let env = Env::new(LOGGERS);
    assert!(subcapture(&env.ctx, &CaptureSet::Universal, &CaptureSet::Universal).unwrap());
    assert!(!subcapture(&env.ctx, &CaptureSet::Universal, &set(&["x", "y"])).unwrap());
}

#[test]
fn subcapture_of_unbound_names_is_an_error() {
    let env = Env::new(LOGGERS);
    let err = subcapture(&env.ctx, &set(&["nope"]), &set(&[])).unwrap_err();
    assert_eq!(err.kind, ErrorKind::IllScoped);
}

#[test]
fn capture_set_of_types() {
    let env = Env::new("assume-term y : {*} Top\nassume-type X <: {y} Top\nassume-type Y <: X");
    assert_eq!(cv(&env.ty("{y} Top"), &env.ctx).unwrap(), set(&["y"]));
    assert_eq!(cv(&env.ty("{} Top"), &env.ctx).unwrap(), set(&[]));
    assert_eq!(cv(&env.ty("X"), &env.ctx).unwrap(), set(&["y"]));
    assert_eq!(cv(&env.ty("Y"), &env.ctx).unwrap(), set(&["y"]));
    assert_eq!(
        cv(&Type::var("Z"), &env.ctx).unwrap_err().kind,
        ErrorKind::IllScoped
    );
}

#[test]
fn subtyping_examples() {
    let env = Env::new("pretype U\npretype Logger\nassume-term File : {*} Logger");
    let yes = |a: &str, b: &str| subtype(&env.ctx, &env.ty(a), &env.ty(b)).unwrap();
    assert!(yes("{} Logger", "{File} Logger"));
    assert!(!yes("{File} Logger", "{} Logger"));
    assert!(!yes(
        "{} forall(y: {} U) {y} U",
        "{} forall(y: {*} U) {y} U"
    ));
    assert!(yes("{} forall(y: {*} U) {y} U", "{} forall(y: {} U) {y} U"));
    assert!(yes(
        "{} forall(x: {*} U) {} Top",
        "{} forall(x: {} U) {} Top"
    ));
    assert!(yes("{} forall(x: {*} Top) {x} Top", "{} Top"));
    assert!(yes(
        "{File} forall[X <: {} Top] X",
        "{File} forall[X <: {} Top] X"
    ));
}

#[test]
fn subtyping_with_type_variables() {
    let env = Env::new("assume-type X <: {} Top\nassume-type Y <: X");
    let yes = |a: &str, b: &str| subtype(&env.ctx, &env.ty(a), &env.ty(b)).unwrap();
    assert!(yes("X", "X"));
    assert!(yes("Y", "X"));
    assert!(yes("Y", "{*} Top"));
    assert!(!yes("X", "Y"));
    assert!(!yes("{} Top", "X"));
    assert_eq!(
        env.print(&expose(&env.ctx, &env.ty("Y")).unwrap()),
        "{} Top"
    );
}

#[test]
fn parameter_used_contravariantly_is_rejected() {
    let env = Env::new("pretype U");
    let f = env.ty("{} forall(x: {*} U) {} forall(y: {x} U) {y} U");
    assert_eq!(
        wf_top_level(&env.ctx, &f).unwrap_err().kind,
        ErrorKind::Polarity
    );
    let g = env.ty("{} forall(x: {*} U) {x} U");
    wf_top_level(&env.ctx, &g).unwrap();
}

#[test]
fn global_variables_may_occur_anywhere() {
    let env = Env::new("pretype U\nassume-term x : {*} U");
    let t = env.ty("{} forall(y: {x} U) {y} U");
    let dom: cctrack_core::wf::NameSet = [Name::new("x")].into_iter().collect();
    wf_type(&env.ctx, &dom, &dom, &t).unwrap();
    wf_top_level(&env.ctx, &env.ty("{x} U")).unwrap();
    assert_eq!(
        wf_top_level(&Context::new(), &Type::top(set(&["x"])))
            .unwrap_err()
            .kind,
        ErrorKind::IllScoped
    );
}

#[test]
fn contexts_refer_only_to_earlier_bindings() {
    wf_context(&Context::new()).unwrap();
    let mut bad = Context::new();
    bad.push_term("x", Type::top(set(&["y"])));
    assert_eq!(wf_context(&bad).unwrap_err().kind, ErrorKind::IllScoped);
    let mut good = Context::new();
    good.push_term("y", Type::top(set(&[])));
    good.push_term("x", Type::top(set(&["y"])));
    wf_context(&good).unwrap();
}

#[test]
fn identity_functions() {
    let env = Env::new("assume-type X <: {*} Top");
    let id = env.synth(r"\(x: {*} Top) x").unwrap();
    assert_eq!(env.print(&id), "{} forall(x: {*} Top) {x} Top");
    let poly = env.synth(r"\(x: X) x").unwrap();
    assert_eq!(env.print(&poly), "{} forall(x: X) X");
}

#[test]
fn checking_against_an_expected_type() {
    let env = Env::new(
        "pretype Logger\nassume-term Console : {*} Logger\nassume-term printLogger : {Console} Logger\nassume-term pureLogger : {} Logger\nassume-term File : {*} Logger",
    );
    let check = |term: &str, ty: &str| {
        let t = parse_term(term, Extensions::none(), &env.aliases).unwrap();
        Checker::core().check(&env.ctx, &t, &env.ty(ty))
    };
    check("pureLogger", "{File} Logger").unwrap();
    assert_eq!(
        check("printLogger", "{} Logger").unwrap_err().kind,
        ErrorKind::Mismatch
    );
    check("printLogger", "{*} Top").unwrap();
}

#[test]
fn value_types_carry_their_free_variables() {
    let env = Env::new("assume-term a : {*} Top\nassume-term b : {} Top");
    let ty = env.synth(r"\(z: {} Top) a").unwrap();
    match ty {
        Type::Capt(c, _) => assert_eq!(c, set(&["a"])),
        other => panic!("unexpected {other}"),
    }
    let ty = env.synth(r"\(z: {a} Top) b").unwrap();
    assert_eq!(env.print(&ty), "{b} forall(z: {a} Top) {b} Top");
}

#[test]
fn free_variables_ignore_capture_set_occurrences() {
    let fv = |src: &str| {
        let t = parse_term(src, Extensions::none(), &Aliases::default()).unwrap();
        t.fv_set()
    };
    // The worked example with binder and body the right way round.
    assert_eq!(fv(r"\(y: {*} Top) x"), set(&["x"]));
    assert_eq!(fv(r"\(x: {*} Top) y"), set(&["y"]));
    assert_eq!(fv(r"\(x: {*} Top) x"), set(&[]));
    assert_eq!(fv(r"\(z: {y} Top) z"), set(&[]));
}

#[test]
fn applying_the_coupled_function_drops_the_parameter() {
    let aliases = parse_program("pretype U", Extensions::none())
        .unwrap()
        .aliases;
    let t = parse_term(
        r"(\(x: {*} U) \(y: {x} U) y) (\(v: {} Top) v)",
        Extensions::none(),
        &aliases,
    )
    .unwrap();
    let ev = evaluate(&t, 10, Extensions::none());
    let expected = parse_term(r"\(y: {} U) y", Extensions::none(), &aliases).unwrap();
    assert_eq!(ev.outcome, Outcome::Done(expected));
    assert_eq!(ev.steps, 1);
}

#[test]
fn evaluation_examples() {
    let term = |s: &str| parse_term(s, Extensions::none(), &Aliases::default()).unwrap();
    let id = term(r"\(x: {} Top) x");
    let ev = evaluate(&id, 10, Extensions::none());
    assert_eq!((ev.outcome, ev.steps), (Outcome::Done(id.clone()), 0));
    let ev = evaluate(
        &term(r"(\(x: {} Top) x) (\(y: {} Top) y)"),
        10,
        Extensions::none(),
    );
    assert_eq!(ev.outcome, Outcome::Done(term(r"\(y: {} Top) y")));
    let omega = term(r"(\(x: {*} Top) x x) (\(x: {*} Top) x x)");
    assert_eq!(
        evaluate(&omega, 100, Extensions::none()).outcome,
        Outcome::OutOfFuel
    );
}

#[test]
fn unhandled_thunk_effect_gets_stuck() {
    let ext = Extensions {
        effects: true,
        ..Extensions::none()
    };
    let src = "
type Unit = {} forall[X <: {*} Top] {} forall(x: X) X
def unit = /\\[X <: {*} Top] \\(x: X) x
main handle x : {*} Eff[{*} forall(u: Unit) Unit, Unit] = handler(thunk, k) => thunk unit in
  handle y : {*} Eff[Unit, Unit] = handler(a, k2) => k2 a in
    do x (\\(u: Unit) do y unit)
";
    let program = parse_program(src, ext).unwrap();
    let main = program.elaborate().main.unwrap().term;
    match evaluate(&main, 1000, ext).outcome {
        Outcome::Stuck(StuckReason::UnhandledEffect, _) => {}
        other => panic!("expected an unhandled effect, got {other:?}"),
    }
}

#[test]
fn equivalence_is_mutual_subtyping() {
    let env = Env::new("assume-term xs : {} Top");
    let a = env.ty("{xs} forall(f: {*} Top) {} Top");
    let b = env.ty("{} forall(f: {*} Top) {} Top");
    assert!(equivalent(&env.ctx, &a, &b).unwrap());
    assert_ne!(a, b);
}
