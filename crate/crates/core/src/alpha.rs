//! Alpha-equivalence of types and terms.

use std::collections::BTreeSet;

use crate::capture::CaptureSet;
use crate::name::Name;
use crate::syntax::{Pretype, Term, Type};

#[derive(PartialEq, Eq, PartialOrd, Ord)]
enum Key<'a> {
    Bound(usize),
    Free(&'a Name),
}

#[derive(Default)]
struct Env {
    terms: Vec<(Name, Name)>,
    types: Vec<(Name, Name)>,
}

fn key_left<'a>(scope: &[(Name, Name)], x: &'a Name) -> Key<'a> {
    match scope.iter().rposition(|(l, _)| l == x) {
        Some(i) => Key::Bound(i),
        None => Key::Free(x),
    }
}

fn key_right<'a>(scope: &[(Name, Name)], x: &'a Name) -> Key<'a> {
    match scope.iter().rposition(|(_, r)| r == x) {
        Some(i) => Key::Bound(i),
        None => Key::Free(x),
    }
}

impl Env {
    fn same_term(&self, a: &Name, b: &Name) -> bool {
        key_left(&self.terms, a) == key_right(&self.terms, b)
    }

    fn same_type(&self, a: &Name, b: &Name) -> bool {
        key_left(&self.types, a) == key_right(&self.types, b)
    }

    fn cset(&self, a: &CaptureSet, b: &CaptureSet) -> bool {
        match (a, b) {
            (CaptureSet::Universal, CaptureSet::Universal) => true,
            (CaptureSet::Concrete(xs), CaptureSet::Concrete(ys)) => {
                let left: BTreeSet<Key> = xs.iter().map(|x| key_left(&self.terms, x)).collect();
                let right: BTreeSet<Key> = ys.iter().map(|y| key_right(&self.terms, y)).collect();
                left == right
            }
            _ => false,
        }
    }

    fn with_term<R>(&mut self, a: &Name, b: &Name, f: impl FnOnce(&mut Self) -> R) -> R {
        self.terms.push((a.clone(), b.clone()));
        let r = f(self);
        self.terms.pop();
        r
    }

    fn with_type<R>(&mut self, a: &Name, b: &Name, f: impl FnOnce(&mut Self) -> R) -> R {
        self.types.push((a.clone(), b.clone()));
        let r = f(self);
        self.types.pop();
        r
    }

    fn ty(&mut self, a: &Type, b: &Type) -> bool {
        match (a, b) {
            (Type::Var(x), Type::Var(y)) => self.same_type(x, y),
            (Type::Capt(c1, u1), Type::Capt(c2, u2)) => self.cset(c1, c2) && self.pretype(u1, u2),
            _ => false,
        }
    }

    fn pretype(&mut self, a: &Pretype, b: &Pretype) -> bool {
        use Pretype::*;
        match (a, b) {
            (Top, Top) | (Bottom, Bottom) | (Region, Region) => true,
            (Base(x), Base(y)) => x == y,
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
            ) => self.ty(s1, s2) && self.with_term(x1, x2, |e| e.ty(t1, t2)),
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
            ) => self.ty(s1, s2) && self.with_type(x1, x2, |e| e.ty(t1, t2)),
            (Return(t1), Return(t2)) | (Ptr(t1), Ptr(t2)) => self.ty(t1, t2),
            (Eff(a1, b1), Eff(a2, b2)) => self.ty(a1, a2) && self.ty(b1, b2),
            _ => false,
        }
    }

    fn term(&mut self, a: &Term, b: &Term) -> bool {
        use Term::*;
        match (a, b) {
            (Var(x), Var(y)) => self.same_term(x, y),
            (
                Abs {
                    param: x1,
                    param_ty: s1,
                    body: b1,
                },
                Abs {
                    param: x2,
                    param_ty: s2,
                    body: b2,
                },
            ) => self.ty(s1, s2) && self.with_term(x1, x2, |e| e.term(b1, b2)),
            (
                TAbs {
                    param: x1,
                    bound: s1,
                    body: b1,
                },
                TAbs {
                    param: x2,
                    bound: s2,
                    body: b2,
                },
            ) => self.ty(s1, s2) && self.with_type(x1, x2, |e| e.term(b1, b2)),
            (App(f1, a1), App(f2, a2)) => self.term(f1, f2) && self.term(a1, a2),
            (TApp(f1, t1), TApp(f2, t2)) => self.term(f1, f2) && self.ty(t1, t2),
            (
                Handle {
                    cap: x1,
                    answer: t1,
                    body: b1,
                },
                Handle {
                    cap: x2,
                    answer: t2,
                    body: b2,
                },
            ) => self.ty(t1, t2) && self.with_term(x1, x2, |e| e.term(b1, b2)),
            (Return { cap: c1, value: v1 }, Return { cap: c2, value: v2 }) => {
                self.term(c1, c2) && self.term(v1, v2)
            }
            (
                Region {
                    handle: x1,
                    body: b1,
                },
                Region {
                    handle: x2,
                    body: b2,
                },
            ) => self.with_term(x1, x2, |e| e.term(b1, b2)),
            (
                New {
                    region: r1,
                    elem: t1,
                    init: i1,
                },
                New {
                    region: r2,
                    elem: t2,
                    init: i2,
                },
            ) => self.same_term(r1, r2) && self.ty(t1, t2) && self.term(i1, i2),
            (Deref(t1), Deref(t2)) => self.term(t1, t2),
            (
                HandleEff {
                    cap: c1,
                    eff: e1,
                    arg: y1,
                    kont: k1,
                    handler: h1,
                    body: b1,
                },
                HandleEff {
                    cap: c2,
                    eff: e2,
                    arg: y2,
                    kont: k2,
                    handler: h2,
                    body: b2,
                },
            ) => {
                self.ty(e1, e2)
                    && self.with_term(y1, y2, |e| e.with_term(k1, k2, |e| e.term(h1, h2)))
                    && self.with_term(c1, c2, |e| e.term(b1, b2))
            }
            (Do { cap: c1, arg: a1 }, Do { cap: c2, arg: a2 }) => {
                self.same_term(c1, c2) && self.term(a1, a2)
            }
            (
                Ptr {
                    loc: l1,
                    region: r1,
                    elem: t1,
                },
                Ptr {
                    loc: l2,
                    region: r2,
                    elem: t2,
                },
            ) => l1 == l2 && self.same_term(r1, r2) && self.ty(t1, t2),
            _ => false,
        }
    }
}

pub fn alpha_eq_type(a: &Type, b: &Type) -> bool {
    Env::default().ty(a, b)
}

pub fn alpha_eq_pretype(a: &Pretype, b: &Pretype) -> bool {
    Env::default().pretype(a, b)
}

pub fn alpha_eq_term(a: &Term, b: &Term) -> bool {
    Env::default().term(a, b)
}
