//! Source programs: declarations, elaboration into a context plus closed
//! definitions, and checking.

use std::fmt::Write;

use crate::context::Context;
use crate::error::{Span, TypeError};
use crate::name::Name;
use crate::syntax::{Pretype, Term, Type};
use crate::typing::Checker;
use crate::Extensions;

use super::printer::Printer;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TypeAlias {
    pub name: Name,
    pub params: Vec<Name>,
    pub body: Type,
}

impl TypeAlias {
    /// The body with `args` substituted for the parameters simultaneously.
    pub fn instantiate(&self, args: &[Type]) -> Type {
        let placeholders: Vec<Name> = (0..self.params.len())
            .map(|i| Name::new(format!("#{i}")))
            .collect();
        let mut body = self.body.clone();
        for (p, h) in self.params.iter().zip(&placeholders) {
            body = body.subst_type(p, &Type::Var(h.clone()));
        }
        for (h, a) in placeholders.iter().zip(args) {
            body = body.subst_type(h, a);
        }
        body
    }
}

/// `pretype N = U`, or an opaque `pretype N` when `body` is `None`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PretypeAlias {
    pub name: Name,
    pub body: Option<Pretype>,
}

#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct Aliases {
    pub types: Vec<TypeAlias>,
    pub pretypes: Vec<PretypeAlias>,
}

impl Aliases {
    pub fn type_alias(&self, name: &Name) -> Option<&TypeAlias> {
        self.types.iter().rev().find(|a| &a.name == name)
    }

    pub fn pretype_alias(&self, name: &Name) -> Option<&PretypeAlias> {
        self.pretypes.iter().rev().find(|a| &a.name == name)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum DeclKind {
    AssumeTerm(Name, Type),
    AssumeType(Name, Type),
    TypeAlias(TypeAlias),
    PretypeAlias(PretypeAlias),
    Def(Name, Term),
    Main(Term),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Decl {
    pub kind: DeclKind,
    pub span: Span,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Program {
    /// Extensions requested by the program's own `ext` line.
    pub pragma: Extensions,
    /// Everything enabled while parsing: the pragma plus caller flags.
    pub extensions: Extensions,
    pub decls: Vec<Decl>,
    pub aliases: Aliases,
}

/// A named closed term ready for checking or evaluation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Item {
    pub name: Name,
    pub term: Term,
    pub span: Span,
}

/// A program with definitions inlined.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Elaborated {
    pub context: Context,
    pub defs: Vec<Item>,
    pub main: Option<Item>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Checked {
    pub defs: Vec<(Name, Type)>,
    pub main: Option<Type>,
}

impl Program {
    /// Collects assumptions into a context and substitutes every definition
    /// into the declarations that follow it.
    pub fn elaborate(&self) -> Elaborated {
        let mut context = Context::new();
        let mut defs: Vec<Item> = Vec::new();
        let mut main = None;
        let inline = |t: &Term, defs: &[Item]| {
            defs.iter()
                .rev()
                .fold(t.clone(), |acc, d| acc.instantiate(&d.name, &d.term))
        };
        for decl in &self.decls {
            match &decl.kind {
                DeclKind::AssumeTerm(x, t) => context.push_term(x.clone(), t.clone()),
                DeclKind::AssumeType(x, t) => context.push_type(x.clone(), t.clone()),
                DeclKind::TypeAlias(_) | DeclKind::PretypeAlias(_) => {}
                DeclKind::Def(x, t) => {
                    let term = inline(t, &defs);
                    defs.push(Item {
                        name: x.clone(),
                        term,
                        span: decl.span,
                    });
                }
                DeclKind::Main(t) => {
                    main = Some(Item {
                        name: Name::new("main"),
                        term: inline(t, &defs),
                        span: decl.span,
                    })
                }
            }
        }
        Elaborated {
            context,
            defs,
            main,
        }
    }

    /// Checks the context and synthesizes a type for every definition and
    /// the main term. Stops at the first error.
    pub fn check(&self, checker: &Checker) -> Result<Checked, TypeError> {
        let el = self.elaborate();
        checker.check_context(&el.context).map_err(|e| {
            let span = self
                .decls
                .iter()
                .find(|d| matches!(d.kind, DeclKind::AssumeTerm(..) | DeclKind::AssumeType(..)))
                .map(|d| d.span)
                .unwrap_or_default();
            e.with_span(span)
        })?;
        let mut defs = Vec::new();
        for d in &el.defs {
            let ty = checker
                .synth(&el.context, &d.term)
                .map_err(|e| e.with_span(d.span))?;
            defs.push((d.name.clone(), ty));
        }
        let main = match &el.main {
            Some(m) => Some(
                checker
                    .synth(&el.context, &m.term)
                    .map_err(|e| e.with_span(m.span))?,
            ),
            None => None,
        };
        Ok(Checked { defs, main })
    }

    /// A printer that resugars with every alias of the program.
    pub fn printer(&self) -> Printer<'_> {
        Printer::with_aliases(&self.aliases)
    }

    /// Source text that parses back to this program.
    pub fn print(&self) -> String {
        let mut out = String::new();
        let mut aliases = Aliases::default();
        let mut exts = Vec::new();
        for (on, name) in [
            (self.pragma.returns, "returns"),
            (self.pragma.regions, "regions"),
            (self.pragma.effects, "effects"),
        ] {
            if on {
                exts.push(name);
            }
        }
        if !exts.is_empty() {
            writeln!(out, "ext {}", exts.join(", ")).unwrap();
        }
        for decl in &self.decls {
            let p = Printer::with_aliases(&aliases);
            match &decl.kind {
                DeclKind::AssumeTerm(x, t) => writeln!(out, "assume-term {x} : {}", p.ty(t)),
                DeclKind::AssumeType(x, t) => writeln!(out, "assume-type {x} <: {}", p.ty(t)),
                DeclKind::TypeAlias(a) => {
                    let params = if a.params.is_empty() {
                        String::new()
                    } else {
                        let ps: Vec<String> = a.params.iter().map(|n| n.to_string()).collect();
                        format!("[{}]", ps.join(", "))
                    };
                    let r = writeln!(out, "type {}{params} = {}", a.name, p.ty(&a.body));
                    aliases.types.push(a.clone());
                    r
                }
                DeclKind::PretypeAlias(a) => {
                    let r = match &a.body {
                        Some(u) => writeln!(out, "pretype {} = {}", a.name, p.pretype(u)),
                        None => writeln!(out, "pretype {}", a.name),
                    };
                    aliases.pretypes.push(a.clone());
                    r
                }
                DeclKind::Def(x, t) => writeln!(out, "def {x} = {}", p.term(t)),
                DeclKind::Main(t) => writeln!(out, "main {}", p.term(t)),
            }
            .unwrap();
        }
        out
    }
}
