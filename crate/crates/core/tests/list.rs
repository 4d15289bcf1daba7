//! Typings of the right-fold list encoding. The expected types of nil and
//! cons are derived by hand from the typing rules, rule by rule, and compared
//! by mutual subtyping.

use cctrack_core::frontend::{parse_program, parse_type, Program};
use cctrack_core::subtyping::{equivalent, subtype};
use cctrack_core::{Checker, Context, Extensions, Name, Pretype, Type};

const LIST: &str = r"
type Unit = {} forall[X <: {*} Top] {} forall(x: X) X
type Op[T, C] = {*} forall(v: T) {*} forall(s: C) C
type List[T] = {} forall[C <: {*} Top] {} forall(g: Op[T, C]) {g} forall(s: C) C

def nil = /\[T <: {*} Top] /\[C <: {*} Top] \(g: Op[T, C]) \(s: C) s

def cons = /\[T <: {*} Top] \(hd: T) \(tl: List[T])
  /\[C <: {*} Top] \(g: Op[T, C]) \(s: C) g hd (tl [C] g s)

def map = /\[A <: {} Top] /\[B <: {} Top] \(xs: List[A]) \(f: {*} forall(a: A) B)
  xs [List[B]] (\(elem: A) \(accum: List[B]) cons [B] (f elem) accum) (nil [B])

def map2 = /\[A <: {} Top] /\[B <: {} Top] \(f: {*} forall(a: A) B) \(xs: List[A])
  xs [List[B]] (\(elem: A) \(accum: List[B]) cons [B] (f elem) accum) (nil [B])

def pureMap = /\[A <: {} Top] /\[B <: {} Top] \(xs: List[A]) \(f: {} forall(a: A) B)
  xs [List[B]] (\(elem: A) \(accum: List[B]) cons [B] (f elem) accum) (nil [B])
";

struct Typed {
    program: Program,
    defs: Vec<(Name, Type)>,
}

impl Typed {
    fn new() -> Typed {
        let program = parse_program(LIST, Extensions::none()).unwrap();
        let defs = program.check(&Checker::core()).unwrap().defs;
        Typed { program, defs }
    }

    fn of(&self, name: &str) -> &Type {
        &self
            .defs
            .iter()
            .find(|(n, _)| n.as_str() == name)
            .unwrap()
            .1
    }

    fn ty(&self, src: &str) -> Type {
        parse_type(src, Extensions::none(), &self.program.aliases).unwrap()
    }

    fn assert_equivalent(&self, name: &str, expected: &str) {
        let found = self.of(name);
        let expected = self.ty(expected);
        assert!(
            equivalent(&Context::new(), found, &expected).unwrap(),
            "{name}: found {found}, expected {expected}"
        );
    }
}

#[test]
fn nil_type() {
    // \(s: C) s has no free variables, so every abstraction is pure.
    Typed::new().assert_equivalent(
        "nil",
        "{} forall[T <: {*} Top] {} forall[C <: {*} Top] {} forall(g: Op[T, C]) {} forall(s: C) C",
    );
}

#[test]
fn cons_type() {
    // The body g hd (tl [C] g s) has type C. Each abstraction captures
    // the free variables of its body minus its own parameter.
    Typed::new().assert_equivalent(
        "cons",
        "{} forall[T <: {*} Top] {} forall(hd: T) {hd} forall(tl: List[T])
           {hd, tl} forall[C <: {*} Top] {hd, tl} forall(g: Op[T, C]) {g, hd, tl} forall(s: C) C",
    );
}

#[test]
fn nil_is_a_list() {
    let t = Typed::new();
    let ctx = Context::new().with_type("E", t.ty("{*} Top"));
    let nil_e = match t.of("nil") {
        Type::Capt(_, u) => match u.as_ref() {
            Pretype::TFun { param, result, .. } => result.subst_type(param, &Type::var("E")),
            other => panic!("nil is not polymorphic: {other}"),
        },
        other => panic!("nil is not polymorphic: {other}"),
    };
    assert!(subtype(&ctx, &nil_e, &t.ty("List[E]")).unwrap());
}

#[test]
fn map_type() {
    Typed::new().assert_equivalent(
        "map",
        "{} forall[A <: {} Top] {} forall[B <: {} Top] {} forall(xs: List[A])
           {} forall(f: {*} forall(a: A) B) List[B]",
    );
}

#[test]
fn map2_captures_its_function_argument() {
    let t = Typed::new();
    t.assert_equivalent(
        "map2",
        "{} forall[A <: {} Top] {} forall[B <: {} Top] {} forall(f: {*} forall(a: A) B)
           {f} forall(xs: List[A]) List[B]",
    );
    let too_small = t.ty(
        "{} forall[A <: {} Top] {} forall[B <: {} Top] {} forall(f: {*} forall(a: A) B)
           {} forall(xs: List[A]) List[B]",
    );
    assert!(!subtype(&Context::new(), t.of("map2"), &too_small).unwrap());
}

#[test]
fn pure_map_type() {
    let t = Typed::new();
    t.assert_equivalent(
        "pureMap",
        "{} forall[A <: {} Top] {} forall[B <: {} Top] {} forall(xs: List[A])
           {} forall(f: {} forall(a: A) B) List[B]",
    );
    // map accepts every function pureMap accepts, not the other way round.
    assert!(subtype(&Context::new(), t.of("map"), t.of("pureMap")).unwrap());
    assert!(!subtype(&Context::new(), t.of("pureMap"), t.of("map")).unwrap());
}
