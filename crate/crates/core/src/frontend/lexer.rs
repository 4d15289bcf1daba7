use crate::error::Span;

use super::ParseError;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Tok {
    Ident(String),
    LBrace,
    RBrace,
    Star,
    Comma,
    Colon,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Subtype,
    Lambda,
    BigLambda,
    Bang,
    Eq,
    FatArrow,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Star => "`*`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Colon => "`:`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Subtype => "`<:`".into(),
            Tok::Lambda => "`\\`".into(),
            Tok::BigLambda => "`/\\`".into(),
            Tok::Bang => "`!`".into(),
            Tok::Eq => "`=`".into(),
            Tok::FatArrow => "`=>`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

pub fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let mut line = 1;
    let mut line_start = 0;
    while i < chars.len() {
        let (off, c) = chars[i];
        let col = off - line_start + 1;
        let span_to = |end: usize| Span {
            start: off,
            end,
            line,
            col,
        };
        let peek = chars.get(i + 1).map(|&(_, c)| c);
        if c == '\n' {
            line += 1;
            line_start = off + 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '-' && peek == Some('-') {
            while i < chars.len() && chars[i].1 != '\n' {
                i += 1;
            }
            continue;
        }
        if is_ident_start(c) {
            let mut j = i;
            while j < chars.len() && is_ident_continue(chars[j].1) {
                j += 1;
            }
            let mut end = chars.get(j).map_or(src.len(), |&(o, _)| o);
            let mut text = src[off..end].to_string();
            if text == "assume" {
                for suffix in ["-term", "-type"] {
                    if src[end..].starts_with(suffix) {
                        let after = src[end + suffix.len()..].chars().next();
                        if !after.is_some_and(is_ident_continue) {
                            text.push_str(suffix);
                            end += suffix.len();
                            j += suffix.len();
                        }
                    }
                }
            }
            out.push(Token {
                tok: Tok::Ident(text),
                span: span_to(end),
            });
            i = j;
            continue;
        }
        let (tok, len) = match (c, peek) {
            ('<', Some(':')) => (Tok::Subtype, 2),
            ('/', Some('\\')) => (Tok::BigLambda, 2),
            ('=', Some('>')) => (Tok::FatArrow, 2),
            ('{', _) => (Tok::LBrace, 1),
            ('}', _) => (Tok::RBrace, 1),
            ('*', _) => (Tok::Star, 1),
            (',', _) => (Tok::Comma, 1),
            (':', _) => (Tok::Colon, 1),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            ('[', _) => (Tok::LBracket, 1),
            (']', _) => (Tok::RBracket, 1),
            ('\\', _) => (Tok::Lambda, 1),
            ('!', _) => (Tok::Bang, 1),
            ('=', _) => (Tok::Eq, 1),
            _ => {
                return Err(ParseError {
                    message: format!("unexpected character `{c}`"),
                    expected: Vec::new(),
                    span: span_to(off + c.len_utf8()),
                })
            }
        };
        out.push(Token {
            tok,
            span: span_to(off + len),
        });
        i += len;
    }
    let end = src.len();
    out.push(Token {
        tok: Tok::Eof,
        span: Span {
            start: end,
            end,
            line,
            col: end - line_start + 1,
        },
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(src: &str) -> Vec<Tok> {
        lex(src).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn basic_tokens() {
        assert_eq!(
            toks("\\(x: {*} Top) x -- comment\n/\\[X <: {} Top] y'1"),
            vec![
                Tok::Lambda,
                Tok::LParen,
                Tok::Ident("x".into()),
                Tok::Colon,
                Tok::LBrace,
                Tok::Star,
                Tok::RBrace,
                Tok::Ident("Top".into()),
                Tok::RParen,
                Tok::Ident("x".into()),
                Tok::BigLambda,
                Tok::LBracket,
                Tok::Ident("X".into()),
                Tok::Subtype,
                Tok::LBrace,
                Tok::RBrace,
                Tok::Ident("Top".into()),
                Tok::RBracket,
                Tok::Ident("y'1".into()),
                Tok::Eof,
            ]
        );
    }

    #[test]
    fn assume_keywords() {
        assert_eq!(
            toks("assume-term x assume-type"),
            vec![
                Tok::Ident("assume-term".into()),
                Tok::Ident("x".into()),
                Tok::Ident("assume-type".into()),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn positions() {
        let ts = lex("x\n  y").unwrap();
        assert_eq!((ts[1].span.line, ts[1].span.col), (2, 3));
        assert!(lex("x # y").is_err());
    }
}
