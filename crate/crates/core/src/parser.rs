//! Concrete syntax.
//!
//! ```text
//! term    ::= lam | app
//! lam     ::= '\' pattern '.' term
//! app     ::= atom+                  (left-associative)
//! atom    ::= var | const | '(' term ')'
//! pattern ::= patom+                 (left-associative; head of a compound
//!                                     spine must be a constant)
//! patom   ::= var | const | '(' pattern ')'
//! ```
//!
//! Identifiers starting with an uppercase letter are constants, lowercase
//! ones are variables. Pretty-printing (the `Display` impls) is the inverse:
//! parsing a printed term yields the term back.

use crate::error::{Error, Result};
use crate::syntax::{DataPattern, Pattern, Term};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Lambda,
    Dot,
    LParen,
    RParen,
    Ident(String),
}

struct Lexer {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    len: usize,
}

fn lex(input: &str) -> Result<Lexer> {
    let mut tokens = Vec::new();
    let mut chars = input.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '\\' | 'λ' => {
                tokens.push((i, Token::Lambda));
                chars.next();
            }
            '.' => {
                tokens.push((i, Token::Dot));
                chars.next();
            }
            '(' => {
                tokens.push((i, Token::LParen));
                chars.next();
            }
            ')' => {
                tokens.push((i, Token::RParen));
                chars.next();
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                let mut end = i;
                while let Some(&(j, c)) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' || c == '\'' {
                        end = j + c.len_utf8();
                        chars.next();
                    } else {
                        break;
                    }
                }
                tokens.push((start, Token::Ident(input[start..end].to_string())));
            }
            _ => {
                return Err(Error::Parse {
                    offset: i,
                    message: format!("unexpected character {c:?}"),
                })
            }
        }
    }
    Ok(Lexer { tokens, pos: 0, len: input.len() })
}

impl Lexer {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map(|(o, _)| *o).unwrap_or(self.len)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Token, what: &str) -> Result<()> {
        let offset = self.offset();
        match self.next() {
            Some(t) if t == want => Ok(()),
            _ => Err(Error::Parse { offset, message: format!("expected {what}") }),
        }
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse { offset: self.offset(), message: message.into() }
    }
}

fn is_const_name(name: &str) -> bool {
    name.chars().next().is_some_and(|c| c.is_ascii_uppercase())
}

/// Parse a term from its concrete syntax.
pub fn parse_term(input: &str) -> Result<Term> {
    let mut lx = lex(input)?;
    let t = term(&mut lx)?;
    if lx.peek().is_some() {
        return Err(lx.error("trailing input"));
    }
    Ok(t)
}

/// Parse a pattern from its concrete syntax.
pub fn parse_pattern(input: &str) -> Result<Pattern> {
    let mut lx = lex(input)?;
    let p = pattern(&mut lx)?;
    if lx.peek().is_some() {
        return Err(lx.error("trailing input"));
    }
    Ok(p)
}

fn term(lx: &mut Lexer) -> Result<Term> {
    if lx.peek() == Some(&Token::Lambda) {
        lx.next();
        let binder = pattern(lx)?;
        lx.expect(Token::Dot, "'.' after binder")?;
        let body = term(lx)?;
        return Ok(Term::Abs(binder, Box::new(body)));
    }
    let mut out = atom(lx)?.ok_or_else(|| lx.error("expected a term"))?;
    while let Some(next) = atom(lx)? {
        out = Term::App(Box::new(out), Box::new(next));
    }
    Ok(out)
}

fn atom(lx: &mut Lexer) -> Result<Option<Term>> {
    match lx.peek() {
        Some(Token::Ident(name)) => {
            let name = name.clone();
            lx.next();
            Ok(Some(if is_const_name(&name) {
                Term::Const(name)
            } else {
                Term::Var(name)
            }))
        }
        Some(Token::LParen) => {
            lx.next();
            let t = term(lx)?;
            lx.expect(Token::RParen, "')'")?;
            Ok(Some(t))
        }
        _ => Ok(None),
    }
}

fn pattern(lx: &mut Lexer) -> Result<Pattern> {
    let mut atoms = Vec::new();
    let mut offsets = Vec::new();
    loop {
        offsets.push(lx.offset());
        match lx.peek() {
            Some(Token::Ident(name)) => {
                let name = name.clone();
                lx.next();
                atoms.push(if is_const_name(&name) {
                    Pattern::Data(DataPattern::Const(name))
                } else {
                    Pattern::Var(name)
                });
            }
            Some(Token::LParen) => {
                lx.next();
                atoms.push(pattern(lx)?);
                lx.expect(Token::RParen, "')'")?;
            }
            _ => break,
        }
    }
    match atoms.len() {
        0 => Err(lx.error("expected a pattern")),
        1 => Ok(atoms.pop().unwrap()),
        _ => {
            let mut it = atoms.into_iter();
            let head = match it.next().unwrap() {
                Pattern::Data(d) => d,
                Pattern::Var(_) => {
                    return Err(Error::Parse {
                        offset: offsets[0],
                        message: "the head of a compound pattern must be a constant".to_string(),
                    })
                }
            };
            Ok(Pattern::Data(it.fold(head, |acc, p| {
                DataPattern::App(Box::new(acc), Box::new(p))
            })))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{abs, app, apps, cst, dapp, dcst, pvar, var};

    #[test]
    fn terms_round_trip() {
        for src in [
            "x",
            "A",
            "x y z",
            "\\x.x",
            "(\\x.x) A",
            "\\(A x).x y",
            "\\(A x (B y)).x",
            "A ((\\x.x) B)",
            "x (\\y.y)",
        ] {
            let t = parse_term(src).unwrap();
            let printed = t.to_string();
            let again = parse_term(&printed).unwrap();
            assert_eq!(t, again, "round trip failed for {src} -> {printed}");
        }
    }

    #[test]
    fn application_is_left_associative() {
        assert_eq!(
            parse_term("x y z").unwrap(),
            app(app(var("x"), var("y")), var("z"))
        );
    }

    #[test]
    fn lambda_body_extends_right() {
        assert_eq!(
            parse_term("\\x.x y").unwrap(),
            abs(pvar("x"), app(var("x"), var("y")))
        );
    }

    #[test]
    fn patterns_parse() {
        assert_eq!(parse_pattern("x").unwrap(), pvar("x"));
        assert_eq!(
            parse_pattern("(A x) y").unwrap(),
            Pattern::Data(dapp(dapp(dcst("A"), pvar("x")), pvar("y")))
        );
        // left-associative spine with nested grouping
        assert_eq!(
            parse_pattern("A (B x)").unwrap(),
            Pattern::Data(dapp(dcst("A"), Pattern::Data(dapp(dcst("B"), pvar("x")))))
        );
        assert_eq!(parse_pattern("A x y").unwrap(), parse_pattern("(A x) y").unwrap());
        assert!(parse_pattern("x y").is_err());
    }

    #[test]
    fn binder_patterns_parse_in_terms() {
        let t = parse_term("\\((A x)).x").unwrap();
        let u = parse_term("\\(A x).x").unwrap();
        assert_eq!(t, u);
        assert_eq!(
            t,
            abs(Pattern::Data(dapp(dcst("A"), pvar("x"))), var("x"))
        );
    }

    #[test]
    fn errors_are_reported() {
        assert!(parse_term("").is_err());
        assert!(parse_term("(x").is_err());
        assert!(parse_term("\\x x").is_err());
        assert!(parse_term("x ?").is_err());
    }

    #[test]
    fn constants_are_uppercase() {
        assert_eq!(parse_term("A b").unwrap(), app(cst("A"), var("b")));
        assert_eq!(
            parse_term("Cons x xs").unwrap(),
            apps(cst("Cons"), [var("x"), var("xs")])
        );
    }
}
