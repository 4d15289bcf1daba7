//! Invariants of substitution, free variables, printing and subcapturing
//! over randomly shaped (not necessarily well-typed) syntax.

use proptest::prelude::*;

use cctrack_core::alpha::{alpha_eq_term, alpha_eq_type};
use cctrack_core::capture_analysis::subcapture;
use cctrack_core::frontend::{parse_term, parse_type, Aliases, Printer};
use cctrack_core::{CaptureSet, Context, Extensions, Term, Type};

const NAMES: &[&str] = &["x", "y", "z", "f"];

fn name() -> impl Strategy<Value = &'static str> {
    prop::sample::select(NAMES)
}

fn capture_set() -> impl Strategy<Value = CaptureSet> {
    prop_oneof![
        1 => Just(CaptureSet::Universal),
        4 => prop::collection::btree_set(name(), 0..3).prop_map(CaptureSet::of),
    ]
}

fn ty() -> impl Strategy<Value = Type> {
    capture_set()
        .prop_map(Type::top)
        .prop_recursive(3, 12, 2, |inner| {
            prop_oneof![
                (capture_set(), name(), inner.clone(), inner.clone())
                    .prop_map(|(c, x, s, t)| Type::fun(c, x, s, t)),
                (capture_set(), inner.clone(), inner)
                    .prop_map(|(c, b, t)| Type::tfun(c, "X", b, t)),
            ]
        })
}

fn term() -> impl Strategy<Value = Term> {
    name()
        .prop_map(Term::var)
        .prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                (name(), ty(), inner.clone()).prop_map(|(x, s, b)| Term::abs(x, s, b)),
                (inner.clone(), inner.clone()).prop_map(|(f, a)| Term::app(f, a)),
                (ty(), inner.clone()).prop_map(|(b, t)| Term::tabs("X", b, t)),
                (inner, ty()).prop_map(|(f, t)| Term::tapp(f, t)),
            ]
        })
}

/// Closed abstractions, which are values in every configuration. Free
/// names are replaced by a pure identity in term positions and dropped from
/// capture sets.
fn value() -> impl Strategy<Value = Term> {
    (name(), ty(), term()).prop_map(|(x, s, b)| {
        let id = Term::abs("w", Type::top(CaptureSet::empty()), Term::var("w"));
        let t = Term::abs(x, s, b);
        let free = t.free_names().terms;
        free.iter().fold(t, |acc, n| {
            acc.subst_term(n, &id).subst_capt(n, &CaptureSet::empty())
        })
    })
}

fn reparse_term(t: &Term) -> Term {
    let src = Printer::plain().term(t);
    parse_term(&src, Extensions::none(), &Aliases::default())
        .unwrap_or_else(|e| panic!("printed term does not parse: {e}\n{src}"))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn capture_substitution_keeps_free_variables(t in term(), x in name(), c in capture_set()) {
        prop_assert_eq!(t.subst_capt(&x.into(), &c).fv(), t.fv());
    }

    #[test]
    fn term_substitution_removes_the_variable(t in term(), x in name(), v in value()) {
        prop_assert!(v.fv().is_empty());
        prop_assert!(!t.subst_term(&x.into(), &v).fv().contains(&x.into()));
    }

    #[test]
    fn instantiation_leaves_no_trace(t in term(), x in name(), v in value()) {
        prop_assert!(v.free_names().terms.is_empty());
        let out = t.instantiate(&x.into(), &v);
        prop_assert!(!out.free_names().contains_any(&x.into()));
    }

    #[test]
    fn substituting_an_absent_variable_is_identity(t in term(), v in value()) {
        let absent = "unused".into();
        prop_assert!(alpha_eq_term(&t.subst_term(&absent, &v), &t));
        prop_assert!(alpha_eq_term(&t.subst_capt(&absent, &CaptureSet::Universal), &t));
    }

    #[test]
    fn printed_terms_parse_back(t in term()) {
        let back = reparse_term(&t);
        prop_assert!(alpha_eq_term(&back, &t), "{} vs {}", back, t);
        prop_assert_eq!(Printer::plain().term(&back), Printer::plain().term(&t));
    }

    #[test]
    fn printed_types_parse_back(a in ty()) {
        let src = Printer::plain().ty(&a);
        let back = parse_type(&src, Extensions::none(), &Aliases::default()).unwrap();
        prop_assert!(alpha_eq_type(&back, &a));
    }

    #[test]
    fn renaming_a_binder_is_alpha_equivalent(s in ty(), b in term()) {
        let t = Term::abs("x", s.clone(), b.clone());
        let fresh = "x9";
        prop_assume!(!b.free_names().contains_any(&fresh.into()));
        let renamed = Term::abs(fresh, s, b.rename_term_var(&"x".into(), &fresh.into()));
        prop_assert!(alpha_eq_term(&t, &renamed));
    }

    #[test]
    fn subcapturing_is_reflexive_and_contains_subsets(
        bounds in prop::collection::vec(capture_set(), NAMES.len()),
        c in capture_set(),
        d in capture_set(),
    ) {
        let ctx = chain_context(&bounds);
        prop_assert!(subcapture(&ctx, &c, &c).unwrap());
        let u = c.union(&d);
        prop_assert!(subcapture(&ctx, &c, &u).unwrap());
        prop_assert!(subcapture(&ctx, &c, &CaptureSet::Universal).unwrap());
    }

    #[test]
    fn subcapturing_is_transitive(
        bounds in prop::collection::vec(capture_set(), NAMES.len()),
        a in capture_set(),
        b in capture_set(),
        c in capture_set(),
    ) {
        let ctx = chain_context(&bounds);
        if subcapture(&ctx, &a, &b).unwrap() && subcapture(&ctx, &b, &c).unwrap() {
            prop_assert!(subcapture(&ctx, &a, &c).unwrap());
        }
    }
}

/// Binds every name, each one's capture set mentioning only earlier names.
fn chain_context(bounds: &[CaptureSet]) -> Context {
    let mut ctx = Context::new();
    for (i, (x, c)) in NAMES.iter().zip(bounds).enumerate() {
        let earlier = &NAMES[..i];
        let c = match c {
            CaptureSet::Universal => CaptureSet::Universal,
            c => CaptureSet::of(
                c.names()
                    .map(|n| n.as_str())
                    .filter(|n| earlier.contains(n)),
            ),
        };
        ctx.push_term(*x, Type::top(c));
    }
    ctx
}
