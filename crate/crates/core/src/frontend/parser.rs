//! Recursive-descent parser.
//!
//! Aliases are expanded while parsing, so the resulting trees only contain
//! core types. Extension keywords are reserved only when the corresponding
//! extension is enabled.

use crate::capture::CaptureSet;
use crate::error::Span;
use crate::name::Name;
use crate::syntax::{Pretype, Term, Type};
use crate::Extensions;

use super::lexer::{lex, Tok, Token};
use super::program::{Aliases, Decl, DeclKind, PretypeAlias, Program, TypeAlias};
use super::ParseError;

const DECL_KEYWORDS: &[&str] = &[
    "ext",
    "assume-term",
    "assume-type",
    "type",
    "pretype",
    "def",
    "main",
];

const CORE_KEYWORDS: &[&str] = &["Top", "Bot", "forall"];

type PResult<T> = Result<T, ParseError>;

pub struct Parser {
    toks: Vec<Token>,
    pos: usize,
    ext: Extensions,
    aliases: Aliases,
    /// Type variables in scope; they shadow aliases of the same name.
    bound_types: Vec<Name>,
}

/// Parses a whole program. `ext` is enabled in addition to any `ext` pragma.
pub fn parse_program(src: &str, ext: Extensions) -> PResult<Program> {
    Parser::new(src, ext, Aliases::default())?.program()
}

/// Parses a standalone term, using the given aliases.
pub fn parse_term(src: &str, ext: Extensions, aliases: &Aliases) -> PResult<Term> {
    let mut p = Parser::new(src, ext, aliases.clone())?;
    let t = p.term()?;
    p.expect_eof()?;
    Ok(t)
}

pub fn parse_type(src: &str, ext: Extensions, aliases: &Aliases) -> PResult<Type> {
    let mut p = Parser::new(src, ext, aliases.clone())?;
    let t = p.ty()?;
    p.expect_eof()?;
    Ok(t)
}

impl Parser {
    pub fn new(src: &str, ext: Extensions, aliases: Aliases) -> PResult<Self> {
        Ok(Parser {
            toks: lex(src)?,
            pos: 0,
            ext,
            aliases,
            bound_types: Vec::new(),
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>, expected: &[&str]) -> ParseError {
        ParseError {
            message: message.into(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            span: self.span(),
        }
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        self.error(format!("unexpected {}", self.peek().describe()), expected)
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&[&tok.describe()]))
        }
    }

    fn expect_eof(&mut self) -> PResult<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.unexpected(&["end of input"]))
        }
    }

    fn is_keyword(&self, s: &str) -> bool {
        DECL_KEYWORDS.contains(&s) || CORE_KEYWORDS.contains(&s) || self.extension_keyword(s)
    }

    fn extension_keyword(&self, s: &str) -> bool {
        let e = self.ext;
        match s {
            "in" | "handle" => e.returns || e.effects || (s == "in" && e.regions),
            "return" | "Return" => e.returns,
            "region" | "new" | "Region" | "Ptr" => e.regions,
            "do" | "handler" | "Eff" => e.effects,
            _ => false,
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw) && self.is_keyword(kw)
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        if self.at_keyword(kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> PResult<()> {
        if self.eat_keyword(kw) {
            Ok(())
        } else {
            Err(self.unexpected(&[&format!("`{kw}`")]))
        }
    }

    fn ident(&mut self) -> PResult<Name> {
        match self.peek().clone() {
            Tok::Ident(s) if !self.is_keyword(&s) => {
                self.bump();
                Ok(Name::new(s))
            }
            Tok::Ident(s) => Err(self.error(format!("`{s}` is a keyword"), &["identifier"])),
            _ => Err(self.unexpected(&["identifier"])),
        }
    }

    // ---- programs ----

    pub fn program(mut self) -> PResult<Program> {
        let mut pragma = Extensions::none();
        let mut decls = Vec::new();
        let mut seen_main = false;
        loop {
            let span = self.span();
            let kw = match self.peek() {
                Tok::Eof => break,
                Tok::Ident(s) if DECL_KEYWORDS.contains(&s.as_str()) => s.clone(),
                _ => return Err(self.unexpected(&["a declaration"])),
            };
            self.bump();
            let kind = match kw.as_str() {
                "ext" => {
                    if !decls.is_empty() {
                        return Err(ParseError {
                            message: "`ext` must come before all other declarations".into(),
                            expected: Vec::new(),
                            span,
                        });
                    }
                    loop {
                        let s = match self.bump().tok {
                            Tok::Ident(s) => s,
                            _ => {
                                return Err(self.error(
                                    "expected an extension name",
                                    &["returns", "regions", "effects"],
                                ))
                            }
                        };
                        match s.as_str() {
                            "returns" => pragma.returns = true,
                            "regions" => pragma.regions = true,
                            "effects" => pragma.effects = true,
                            other => {
                                return Err(ParseError {
                                    message: format!("unknown extension `{other}`"),
                                    expected: vec![
                                        "returns".into(),
                                        "regions".into(),
                                        "effects".into(),
                                    ],
                                    span,
                                })
                            }
                        }
                        if *self.peek() == Tok::Comma {
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    self.ext = self.ext.union(pragma);
                    continue;
                }
                "assume-term" => {
                    let x = self.ident()?;
                    self.expect(Tok::Colon)?;
                    DeclKind::AssumeTerm(x, self.ty()?)
                }
                "assume-type" => {
                    let x = self.ident()?;
                    self.expect(Tok::Subtype)?;
                    DeclKind::AssumeType(x, self.ty()?)
                }
                "type" => {
                    let name = self.ident()?;
                    let mut params = Vec::new();
                    if *self.peek() == Tok::LBracket {
                        self.bump();
                        loop {
                            params.push(self.ident()?);
                            if *self.peek() == Tok::Comma {
                                self.bump();
                            } else {
                                break;
                            }
                        }
                        self.expect(Tok::RBracket)?;
                    }
                    self.expect(Tok::Eq)?;
                    let depth = self.bound_types.len();
                    self.bound_types.extend(params.iter().cloned());
                    let body = self.ty();
                    self.bound_types.truncate(depth);
                    let alias = TypeAlias {
                        name,
                        params,
                        body: body?,
                    };
                    self.aliases.types.push(alias.clone());
                    DeclKind::TypeAlias(alias)
                }
                "pretype" => {
                    let name = self.ident()?;
                    let body = if *self.peek() == Tok::Eq {
                        self.bump();
                        Some(self.pretype()?)
                    } else {
                        None
                    };
                    let alias = PretypeAlias { name, body };
                    self.aliases.pretypes.push(alias.clone());
                    DeclKind::PretypeAlias(alias)
                }
                "def" => {
                    let x = self.ident()?;
                    self.expect(Tok::Eq)?;
                    DeclKind::Def(x, self.term()?)
                }
                "main" => {
                    if seen_main {
                        return Err(ParseError {
                            message: "a program has at most one `main`".into(),
                            expected: Vec::new(),
                            span,
                        });
                    }
                    seen_main = true;
                    DeclKind::Main(self.term()?)
                }
                _ => unreachable!("declaration keyword"),
            };
            let end = self.toks[self.pos.saturating_sub(1)].span.end;
            decls.push(Decl {
                kind,
                span: Span { end, ..span },
            });
        }
        Ok(Program {
            pragma,
            extensions: self.ext,
            decls,
            aliases: self.aliases,
        })
    }

    // ---- types ----

    pub fn ty(&mut self) -> PResult<Type> {
        match self.peek().clone() {
            Tok::LBrace => {
                let c = self.capture_set()?;
                let u = self.pretype()?;
                Ok(Type::capt(c, u))
            }
            Tok::LParen => {
                self.bump();
                let t = self.ty()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::Ident(s) if !self.is_keyword(&s) => {
                let span = self.span();
                let name = Name::new(&s);
                self.bump();
                if self.bound_types.contains(&name) {
                    return Ok(Type::Var(name));
                }
                if let Some(alias) = self.aliases.type_alias(&name).cloned() {
                    let mut args = Vec::new();
                    if !alias.params.is_empty() {
                        self.expect(Tok::LBracket)?;
                        loop {
                            args.push(self.ty()?);
                            if *self.peek() == Tok::Comma {
                                self.bump();
                            } else {
                                break;
                            }
                        }
                        self.expect(Tok::RBracket)?;
                    }
                    if args.len() != alias.params.len() {
                        return Err(ParseError {
                            message: format!(
                                "`{name}` takes {} type arguments, got {}",
                                alias.params.len(),
                                args.len()
                            ),
                            expected: Vec::new(),
                            span,
                        });
                    }
                    return Ok(alias.instantiate(&args));
                }
                if self.aliases.pretype_alias(&name).is_some() {
                    return Err(ParseError {
                        message: format!("pretype `{name}` needs a capture set"),
                        expected: vec!["`{`".into()],
                        span,
                    });
                }
                Ok(Type::Var(name))
            }
            _ => Err(self.unexpected(&["`{`", "type variable", "`(`"])),
        }
    }

    fn capture_set(&mut self) -> PResult<CaptureSet> {
        self.expect(Tok::LBrace)?;
        if *self.peek() == Tok::Star {
            self.bump();
            self.expect(Tok::RBrace)?;
            return Ok(CaptureSet::Universal);
        }
        let mut names = Vec::new();
        if *self.peek() != Tok::RBrace {
            loop {
                names.push(self.ident()?);
                if *self.peek() == Tok::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::RBrace)?;
        Ok(CaptureSet::of(names))
    }

    fn type_arg(&mut self) -> PResult<Type> {
        self.expect(Tok::LBracket)?;
        let t = self.ty()?;
        self.expect(Tok::RBracket)?;
        Ok(t)
    }

    pub fn pretype(&mut self) -> PResult<Pretype> {
        let span = self.span();
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let u = self.pretype()?;
                self.expect(Tok::RParen)?;
                Ok(u)
            }
            Tok::Ident(s) => match s.as_str() {
                "Top" => {
                    self.bump();
                    Ok(Pretype::Top)
                }
                "Bot" => Err(self.error("`Bot` cannot be written in source", &[])),
                "forall" => {
                    self.bump();
                    match self.peek() {
                        Tok::LParen => {
                            self.bump();
                            let x = self.ident()?;
                            self.expect(Tok::Colon)?;
                            let s = self.ty()?;
                            self.expect(Tok::RParen)?;
                            let t = self.ty()?;
                            Ok(Pretype::Fun {
                                param: x,
                                param_ty: s,
                                result: t,
                            })
                        }
                        Tok::LBracket => {
                            self.bump();
                            let x = self.ident()?;
                            self.expect(Tok::Subtype)?;
                            let s = self.ty()?;
                            self.expect(Tok::RBracket)?;
                            self.bound_types.push(x.clone());
                            let t = self.ty();
                            self.bound_types.pop();
                            Ok(Pretype::TFun {
                                param: x,
                                bound: s,
                                result: t?,
                            })
                        }
                        _ => Err(self.unexpected(&["`(`", "`[`"])),
                    }
                }
                "Return" if self.ext.returns => {
                    self.bump();
                    Ok(Pretype::Return(self.type_arg()?))
                }
                "Region" if self.ext.regions => {
                    self.bump();
                    Ok(Pretype::Region)
                }
                "Ptr" if self.ext.regions => {
                    self.bump();
                    Ok(Pretype::Ptr(self.type_arg()?))
                }
                "Eff" if self.ext.effects => {
                    self.bump();
                    self.expect(Tok::LBracket)?;
                    let a = self.ty()?;
                    self.expect(Tok::Comma)?;
                    let b = self.ty()?;
                    self.expect(Tok::RBracket)?;
                    Ok(Pretype::Eff(a, b))
                }
                _ if self.is_keyword(&s) => Err(self.unexpected(&["pretype"])),
                _ => {
                    let name = Name::new(&s);
                    self.bump();
                    match self.aliases.pretype_alias(&name) {
                        Some(PretypeAlias { body: Some(u), .. }) => Ok(u.clone()),
                        Some(PretypeAlias { body: None, .. }) => Ok(Pretype::Base(name)),
                        None => Err(ParseError {
                            message: format!("unknown pretype `{name}`"),
                            expected: vec!["pretype".into()],
                            span,
                        }),
                    }
                }
            },
            _ => Err(self.unexpected(&["pretype"])),
        }
    }

    // ---- terms ----

    fn starts_binder(&self) -> bool {
        matches!(self.peek(), Tok::Lambda | Tok::BigLambda)
            || self.at_keyword("handle")
            || self.at_keyword("region")
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Tok::LParen | Tok::Bang => true,
            Tok::Ident(s) => !self.is_keyword(s),
            _ => false,
        }
    }

    pub fn term(&mut self) -> PResult<Term> {
        match self.peek() {
            Tok::Lambda => {
                self.bump();
                self.expect(Tok::LParen)?;
                let x = self.ident()?;
                self.expect(Tok::Colon)?;
                let s = self.ty()?;
                self.expect(Tok::RParen)?;
                let body = self.term()?;
                Ok(Term::abs(x, s, body))
            }
            Tok::BigLambda => {
                self.bump();
                self.expect(Tok::LBracket)?;
                let x = self.ident()?;
                self.expect(Tok::Subtype)?;
                let s = self.ty()?;
                self.expect(Tok::RBracket)?;
                self.bound_types.push(x.clone());
                let body = self.term();
                self.bound_types.pop();
                Ok(Term::tabs(x, s, body?))
            }
            _ if self.at_keyword("handle") => {
                self.bump();
                let x = self.ident()?;
                self.expect(Tok::Colon)?;
                let t = self.ty()?;
                if *self.peek() == Tok::Eq && self.ext.effects {
                    self.bump();
                    self.expect_keyword("handler")?;
                    self.expect(Tok::LParen)?;
                    let y = self.ident()?;
                    self.expect(Tok::Comma)?;
                    let k = self.ident()?;
                    self.expect(Tok::RParen)?;
                    self.expect(Tok::FatArrow)?;
                    let s = self.term()?;
                    self.expect_keyword("in")?;
                    let body = self.term()?;
                    return Ok(Term::HandleEff {
                        cap: x,
                        eff: t,
                        arg: y,
                        kont: k,
                        handler: Box::new(s),
                        body: Box::new(body),
                    });
                }
                if !self.ext.returns {
                    return Err(self.unexpected(&["`=`"]));
                }
                self.expect_keyword("in")?;
                let body = self.term()?;
                Ok(Term::Handle {
                    cap: x,
                    answer: t,
                    body: Box::new(body),
                })
            }
            _ if self.at_keyword("region") => {
                self.bump();
                let x = self.ident()?;
                self.expect_keyword("in")?;
                let body = self.term()?;
                Ok(Term::Region {
                    handle: x,
                    body: Box::new(body),
                })
            }
            _ => self.application(),
        }
    }

    fn application(&mut self) -> PResult<Term> {
        let mut head = self.head()?;
        loop {
            if *self.peek() == Tok::LBracket {
                let t = self.type_arg()?;
                head = Term::tapp(head, t);
            } else if self.starts_atom() {
                let a = self.atom()?;
                head = Term::app(head, a);
            } else if self.starts_binder() {
                let a = self.term()?;
                return Ok(Term::app(head, a));
            } else {
                return Ok(head);
            }
        }
    }

    /// An atom, or a binder form when it is the final argument.
    fn last_arg(&mut self) -> PResult<Term> {
        if self.starts_binder() {
            self.term()
        } else {
            self.atom()
        }
    }

    fn head(&mut self) -> PResult<Term> {
        if self.eat_keyword("return") {
            let cap = self.atom()?;
            let value = self.last_arg()?;
            return Ok(Term::Return {
                cap: Box::new(cap),
                value: Box::new(value),
            });
        }
        if self.eat_keyword("do") {
            let cap = self.ident()?;
            let arg = self.last_arg()?;
            return Ok(Term::Do {
                cap,
                arg: Box::new(arg),
            });
        }
        if self.eat_keyword("new") {
            let region = self.ident()?;
            let elem = self.type_arg()?;
            let init = self.last_arg()?;
            return Ok(Term::New {
                region,
                elem,
                init: Box::new(init),
            });
        }
        self.atom()
    }

    fn atom(&mut self) -> PResult<Term> {
        match self.peek() {
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::Bang if self.ext.regions => {
                self.bump();
                let t = self.atom()?;
                Ok(Term::Deref(Box::new(t)))
            }
            Tok::Ident(_) => Ok(Term::Var(self.ident()?)),
            _ => Err(self.unexpected(&["term"])),
        }
    }
}
