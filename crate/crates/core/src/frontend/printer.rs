//! Surface-syntax printing with minimal parentheses.
//!
//! When an alias table is supplied, types that match a declared alias body
//! are printed with the alias name.

use std::collections::BTreeMap;
use std::fmt::{self, Write};

use crate::alpha::alpha_eq_pretype;
use crate::name::Name;
use crate::syntax::{Pretype, Term, Type};

use super::program::Aliases;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Prec {
    Top,
    Head,
    Arg,
}

#[derive(Clone, Copy, Default)]
pub struct Printer<'a> {
    aliases: Option<&'a Aliases>,
}

impl<'a> Printer<'a> {
    pub fn plain() -> Self {
        Printer { aliases: None }
    }

    pub fn with_aliases(aliases: &'a Aliases) -> Self {
        Printer {
            aliases: Some(aliases),
        }
    }

    pub fn ty(&self, t: &Type) -> String {
        let mut s = String::new();
        self.write_type(&mut s, t).expect("writing to a String");
        s
    }

    pub fn pretype(&self, u: &Pretype) -> String {
        let mut s = String::new();
        self.write_pretype(&mut s, u).expect("writing to a String");
        s
    }

    pub fn term(&self, t: &Term) -> String {
        let mut s = String::new();
        self.write_term(&mut s, t, Prec::Top)
            .expect("writing to a String");
        s
    }

    fn resugar_type(&self, t: &Type) -> Option<String> {
        let aliases = self.aliases?;
        for alias in aliases.types.iter().rev() {
            if matches!(&alias.body, Type::Var(v) if alias.params.contains(v)) {
                continue;
            }
            let mut binding = BTreeMap::new();
            if match_type(&alias.body, t, &alias.params, &mut binding) {
                let mut out = alias.name.to_string();
                if !alias.params.is_empty() {
                    out.push('[');
                    for (i, p) in alias.params.iter().enumerate() {
                        if i > 0 {
                            out.push_str(", ");
                        }
                        out.push_str(&self.ty(&binding[p]));
                    }
                    out.push(']');
                }
                return Some(out);
            }
        }
        None
    }

    fn resugar_pretype(&self, u: &Pretype) -> Option<&'a Name> {
        let aliases = self.aliases?;
        aliases
            .pretypes
            .iter()
            .rev()
            .find(|a| a.body.as_ref().is_some_and(|b| alpha_eq_pretype(b, u)))
            .map(|a| &a.name)
    }

    pub fn write_type(&self, out: &mut impl Write, t: &Type) -> fmt::Result {
        if let Some(s) = self.resugar_type(t) {
            return out.write_str(&s);
        }
        match t {
            Type::Var(x) => write!(out, "{x}"),
            Type::Capt(c, u) => {
                write!(out, "{c} ")?;
                self.write_pretype(out, u)
            }
        }
    }

    pub fn write_pretype(&self, out: &mut impl Write, u: &Pretype) -> fmt::Result {
        if let Some(name) = self.resugar_pretype(u) {
            return write!(out, "{name}");
        }
        match u {
            Pretype::Top => out.write_str("Top"),
            Pretype::Bottom => out.write_str("Bot"),
            Pretype::Base(n) => write!(out, "{n}"),
            Pretype::Fun {
                param,
                param_ty,
                result,
            } => {
                write!(out, "forall({param}: ")?;
                self.write_type(out, param_ty)?;
                out.write_str(") ")?;
                self.write_type(out, result)
            }
            Pretype::TFun {
                param,
                bound,
                result,
            } => {
                write!(out, "forall[{param} <: ")?;
                self.write_type(out, bound)?;
                out.write_str("] ")?;
                self.write_type(out, result)
            }
            Pretype::Return(t) => {
                out.write_str("Return[")?;
                self.write_type(out, t)?;
                out.write_str("]")
            }
            Pretype::Region => out.write_str("Region"),
            Pretype::Ptr(t) => {
                out.write_str("Ptr[")?;
                self.write_type(out, t)?;
                out.write_str("]")
            }
            Pretype::Eff(a, b) => {
                out.write_str("Eff[")?;
                self.write_type(out, a)?;
                out.write_str(", ")?;
                self.write_type(out, b)?;
                out.write_str("]")
            }
        }
    }

    fn write_term(&self, out: &mut impl Write, t: &Term, prec: Prec) -> fmt::Result {
        let binder = matches!(
            t,
            Term::Abs { .. }
                | Term::TAbs { .. }
                | Term::Handle { .. }
                | Term::Region { .. }
                | Term::HandleEff { .. }
        );
        let applicative = matches!(
            t,
            Term::App(..)
                | Term::TApp(..)
                | Term::Return { .. }
                | Term::New { .. }
                | Term::Do { .. }
        );
        let parens = (binder && prec != Prec::Top) || (applicative && prec == Prec::Arg);
        if parens {
            out.write_str("(")?;
        }
        match t {
            Term::Var(x) => write!(out, "{x}")?,
            Term::Abs {
                param,
                param_ty,
                body,
            } => {
                write!(out, "\\({param}: ")?;
                self.write_type(out, param_ty)?;
                out.write_str(") ")?;
                self.write_term(out, body, Prec::Top)?;
            }
            Term::TAbs { param, bound, body } => {
                write!(out, "/\\[{param} <: ")?;
                self.write_type(out, bound)?;
                out.write_str("] ")?;
                self.write_term(out, body, Prec::Top)?;
            }
            Term::App(f, a) => {
                self.write_term(out, f, Prec::Head)?;
                out.write_str(" ")?;
                self.write_term(out, a, Prec::Arg)?;
            }
            Term::TApp(f, ty) => {
                self.write_term(out, f, Prec::Head)?;
                out.write_str(" [")?;
                self.write_type(out, ty)?;
                out.write_str("]")?;
            }
            Term::Handle { cap, answer, body } => {
                write!(out, "handle {cap} : ")?;
                self.write_type(out, answer)?;
                out.write_str(" in ")?;
                self.write_term(out, body, Prec::Top)?;
            }
            Term::Return { cap, value } => {
                out.write_str("return ")?;
                self.write_term(out, cap, Prec::Arg)?;
                out.write_str(" ")?;
                self.write_term(out, value, Prec::Arg)?;
            }
            Term::Region { handle, body } => {
                write!(out, "region {handle} in ")?;
                self.write_term(out, body, Prec::Top)?;
            }
            Term::New { region, elem, init } => {
                write!(out, "new {region} [")?;
                self.write_type(out, elem)?;
                out.write_str("] ")?;
                self.write_term(out, init, Prec::Arg)?;
            }
            Term::Deref(target) => {
                out.write_str("!")?;
                self.write_term(out, target, Prec::Arg)?;
            }
            Term::HandleEff {
                cap,
                eff,
                arg,
                kont,
                handler,
                body,
            } => {
                write!(out, "handle {cap} : ")?;
                self.write_type(out, eff)?;
                write!(out, " = handler({arg}, {kont}) => ")?;
                self.write_term(out, handler, Prec::Top)?;
                out.write_str(" in ")?;
                self.write_term(out, body, Prec::Top)?;
            }
            Term::Do { cap, arg } => {
                write!(out, "do {cap} ")?;
                self.write_term(out, arg, Prec::Arg)?;
            }
            Term::Ptr { loc, region, .. } => write!(out, "<ptr {loc} in {region}>")?,
        }
        if parens {
            out.write_str(")")?;
        }
        Ok(())
    }
}

/// Structural match of an alias body against a type, binding parameters.
fn match_type(
    pattern: &Type,
    t: &Type,
    params: &[Name],
    binding: &mut BTreeMap<Name, Type>,
) -> bool {
    if let Type::Var(p) = pattern {
        if params.contains(p) {
            return match binding.get(p) {
                Some(bound) => bound == t,
                None => {
                    binding.insert(p.clone(), t.clone());
                    true
                }
            };
        }
    }
    match (pattern, t) {
        (Type::Var(a), Type::Var(b)) => a == b,
        (Type::Capt(c1, u1), Type::Capt(c2, u2)) => {
            c1 == c2 && match_pretype(u1, u2, params, binding)
        }
        _ => false,
    }
}

fn match_pretype(
    pattern: &Pretype,
    u: &Pretype,
    params: &[Name],
    binding: &mut BTreeMap<Name, Type>,
) -> bool {
    use Pretype::*;
    match (pattern, u) {
        (Top, Top) | (Bottom, Bottom) | (Region, Region) => true,
        (Base(a), Base(b)) => a == b,
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
        ) => x1 == x2 && match_type(s1, s2, params, binding) && match_type(t1, t2, params, binding),
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
            x1 == x2
                && !params.contains(x1)
                && match_type(s1, s2, params, binding)
                && match_type(t1, t2, params, binding)
        }
        (Return(a), Return(b)) | (Ptr(a), Ptr(b)) => match_type(a, b, params, binding),
        (Eff(a1, b1), Eff(a2, b2)) => {
            match_type(a1, a2, params, binding) && match_type(b1, b2, params, binding)
        }
        _ => false,
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Printer::plain().write_type(f, self)
    }
}

impl fmt::Display for Pretype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Printer::plain().write_pretype(f, self)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Printer::plain().write_term(f, self, Prec::Top)
    }
}
