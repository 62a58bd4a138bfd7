use std::collections::BTreeSet;

use thiserror::Error;

use super::ast::Formula;

/// Name declarations used to resolve identifiers.
///
/// Agents must always be declared. Variables and atoms may be left open
/// (`None`), in which case they are inferred from the position an
/// identifier occupies.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Decl {
    pub agents: Vec<String>,
    pub vars: Option<BTreeSet<String>>,
    pub atoms: Option<BTreeSet<String>>,
}

impl Decl {
    pub fn with_agents<S: AsRef<str>>(agents: &[S]) -> Decl {
        Decl {
            agents: agents.iter().map(|a| a.as_ref().to_string()).collect(),
            vars: None,
            atoms: None,
        }
    }

    fn is_agent(&self, name: &str) -> bool {
        self.agents.iter().any(|a| a == name)
    }

    fn is_declared_var(&self, name: &str) -> bool {
        self.vars.as_ref().is_some_and(|v| v.contains(name))
    }

    fn is_declared_atom(&self, name: &str) -> bool {
        self.atoms.as_ref().is_some_and(|v| v.contains(name))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("undeclared {kind} `{name}` at offset {pos}")]
    Undeclared {
        kind: &'static str,
        name: String,
        pos: usize,
    },
    #[error("`{name}` at offset {pos} is declared as {declared} but used as {used}")]
    Confusion {
        name: String,
        pos: usize,
        declared: &'static str,
        used: &'static str,
    },
    #[error("name `{0}` is declared in more than one namespace")]
    OverlappingDecl(String),
}

const RESERVED: [&str; 7] = ["true", "false", "X", "U", "R", "F", "G"];

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LAngle,
    RAngle,
    LBrack,
    RBrack,
    LParen,
    RParen,
    Comma,
    Bang,
    Amp,
    Pipe,
    Arrow,
    DArrow,
    End,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let two = |s: &str| src[i..].starts_with(s);
        let (tok, len) = if two("<->") {
            (Tok::DArrow, 3)
        } else if two("<<") {
            (Tok::LAngle, 2)
        } else if two(">>") {
            (Tok::RAngle, 2)
        } else if two("[[") {
            (Tok::LBrack, 2)
        } else if two("]]") {
            (Tok::RBrack, 2)
        } else if two("->") {
            (Tok::Arrow, 2)
        } else if two("&&") {
            (Tok::Amp, 2)
        } else if two("||") {
            (Tok::Pipe, 2)
        } else {
            match c {
                b'(' => (Tok::LParen, 1),
                b')' => (Tok::RParen, 1),
                b',' => (Tok::Comma, 1),
                b'!' | b'~' => (Tok::Bang, 1),
                b'&' => (Tok::Amp, 1),
                b'|' => (Tok::Pipe, 1),
                c if c.is_ascii_alphabetic() || c == b'_' => {
                    let start = i;
                    let mut j = i;
                    while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_' || bytes[j] == b'\'')
                    {
                        j += 1;
                    }
                    out.push((Tok::Ident(src[start..j].to_string()), start));
                    i = j;
                    continue;
                }
                _ => {
                    return Err(ParseError::Syntax {
                        pos: i,
                        msg: format!("unexpected character `{}`", src[i..].chars().next().unwrap()),
                    })
                }
            }
        };
        out.push((tok, i));
        i += len;
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    decl: &'a Decl,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    fn error(&self, msg: String) -> ParseError {
        ParseError::Syntax {
            pos: self.offset(),
            msg,
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, usize), ParseError> {
        let pos = self.offset();
        match self.peek().clone() {
            Tok::Ident(s) if !RESERVED.contains(&s.as_str()) => {
                self.bump();
                Ok((s, pos))
            }
            _ => Err(self.error(format!("expected {what}"))),
        }
    }

    fn variable(&mut self) -> Result<String, ParseError> {
        let (name, pos) = self.ident("variable")?;
        if self.decl.is_agent(&name) {
            return Err(ParseError::Confusion {
                name,
                pos,
                declared: "an agent",
                used: "a variable",
            });
        }
        if self.decl.is_declared_atom(&name) {
            return Err(ParseError::Confusion {
                name,
                pos,
                declared: "an atom",
                used: "a variable",
            });
        }
        if self.decl.vars.is_some() && !self.decl.is_declared_var(&name) {
            return Err(ParseError::Undeclared {
                kind: "variable",
                name,
                pos,
            });
        }
        Ok(name)
    }

    fn agent(&mut self) -> Result<String, ParseError> {
        let (name, pos) = self.ident("agent")?;
        if self.decl.is_agent(&name) {
            return Ok(name);
        }
        if self.decl.is_declared_var(&name) {
            return Err(ParseError::Confusion {
                name,
                pos,
                declared: "a variable",
                used: "an agent",
            });
        }
        Err(ParseError::Undeclared {
            kind: "agent",
            name,
            pos,
        })
    }

    fn atom(&mut self, name: String, pos: usize) -> Result<Formula, ParseError> {
        if self.decl.is_agent(&name) {
            return Err(ParseError::Confusion {
                name,
                pos,
                declared: "an agent",
                used: "an atom",
            });
        }
        if self.decl.is_declared_var(&name) {
            return Err(ParseError::Confusion {
                name,
                pos,
                declared: "a variable",
                used: "an atom",
            });
        }
        if self.decl.atoms.is_some() && !self.decl.is_declared_atom(&name) {
            return Err(ParseError::Undeclared {
                kind: "atom",
                name,
                pos,
            });
        }
        Ok(Formula::Atom(name))
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let l = self.disjunction()?;
        match self.peek() {
            Tok::Arrow => {
                self.bump();
                let r = self.implication()?;
                Ok(Formula::implies(l, r))
            }
            Tok::DArrow => {
                self.bump();
                let r = self.implication()?;
                Ok(Formula::iff(l, r))
            }
            _ => Ok(l),
        }
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut l = self.conjunction()?;
        while *self.peek() == Tok::Pipe {
            self.bump();
            let r = self.conjunction()?;
            l = Formula::or(l, r);
        }
        Ok(l)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut l = self.temporal()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let r = self.temporal()?;
            l = Formula::and(l, r);
        }
        Ok(l)
    }

    fn temporal(&mut self) -> Result<Formula, ParseError> {
        let l = self.unary()?;
        match self.peek() {
            Tok::Ident(s) if s == "U" => {
                self.bump();
                let r = self.temporal()?;
                Ok(Formula::until(l, r))
            }
            Tok::Ident(s) if s == "R" => {
                self.bump();
                let r = self.temporal()?;
                Ok(Formula::release(l, r))
            }
            _ => Ok(l),
        }
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let pos = self.offset();
        match self.peek().clone() {
            Tok::Bang => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Ident(s) if s == "X" => {
                self.bump();
                Ok(Formula::next(self.unary()?))
            }
            Tok::Ident(s) if s == "F" => {
                self.bump();
                Ok(Formula::eventually(self.unary()?))
            }
            Tok::Ident(s) if s == "G" => {
                self.bump();
                Ok(Formula::always(self.unary()?))
            }
            Tok::Ident(s) if s == "true" => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::Ident(s) if s == "false" => {
                self.bump();
                Ok(Formula::False)
            }
            Tok::Ident(s) if s == "U" || s == "R" => {
                Err(self.error(format!("binary operator `{s}` without left operand")))
            }
            Tok::Ident(s) => {
                self.bump();
                self.atom(s, pos)
            }
            Tok::LAngle => {
                self.bump();
                let x = self.variable()?;
                self.expect(Tok::RAngle, "`>>`")?;
                Ok(Formula::exists(x, self.unary()?))
            }
            Tok::LBrack => {
                self.bump();
                let x = self.variable()?;
                self.expect(Tok::RBrack, "`]]`")?;
                Ok(Formula::forall(x, self.unary()?))
            }
            Tok::LParen => {
                if matches!(self.peek_at(1), Tok::Ident(_)) && *self.peek_at(2) == Tok::Comma {
                    self.bump();
                    let a = self.agent()?;
                    self.expect(Tok::Comma, "`,`")?;
                    let x = self.variable()?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(Formula::bind(a, x, self.unary()?))
                } else {
                    self.bump();
                    let f = self.implication()?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(f)
                }
            }
            Tok::End => Err(self.error("unexpected end of input".into())),
            t => Err(self.error(format!("unexpected token {t:?}"))),
        }
    }
}

/// Parses formula source against the given declarations.
pub fn parse(src: &str, decl: &Decl) -> Result<Formula, ParseError> {
    check_decl(decl)?;
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
        decl,
    };
    let f = p.implication()?;
    if *p.peek() != Tok::End {
        return Err(p.error("trailing input".into()));
    }
    Ok(f)
}

fn check_decl(decl: &Decl) -> Result<(), ParseError> {
    let mut seen = BTreeSet::new();
    for a in &decl.agents {
        if !seen.insert(a.as_str()) {
            return Err(ParseError::OverlappingDecl(a.clone()));
        }
    }
    let vars = decl.vars.iter().flatten();
    let atoms = decl.atoms.iter().flatten();
    for n in vars {
        if !seen.insert(n.as_str()) {
            return Err(ParseError::OverlappingDecl(n.clone()));
        }
    }
    for n in atoms {
        if !seen.insert(n.as_str()) {
            return Err(ParseError::OverlappingDecl(n.clone()));
        }
    }
    Ok(())
}

fn level(f: &Formula) -> u8 {
    match f {
        Formula::Or(..) => 1,
        Formula::And(..) => 2,
        Formula::Until(..) | Formula::Release(..) => 3,
        _ => 4,
    }
}

/// Prints a formula in the concrete syntax accepted by [`parse`], with the
/// fewest parentheses that preserve structure.
pub fn render(f: &Formula) -> String {
    let mut out = String::new();
    write(f, 0, &mut out);
    out
}

fn write(f: &Formula, min: u8, out: &mut String) {
    let wrap = level(f) < min;
    if wrap {
        out.push('(');
    }
    match f {
        Formula::True => out.push_str("true"),
        Formula::False => out.push_str("false"),
        Formula::Atom(p) => out.push_str(p),
        Formula::Not(g) => {
            out.push('!');
            write(g, 4, out);
        }
        Formula::Next(g) => {
            out.push_str("X ");
            write(g, 4, out);
        }
        Formula::Exists(x, g) => {
            out.push_str(&format!("<<{x}>> "));
            write(g, 4, out);
        }
        Formula::Forall(x, g) => {
            out.push_str(&format!("[[{x}]] "));
            write(g, 4, out);
        }
        Formula::Bind(a, x, g) => {
            out.push_str(&format!("({a},{x}) "));
            write(g, 4, out);
        }
        Formula::And(l, r) => {
            write(l, 2, out);
            out.push_str(" & ");
            write(r, 3, out);
        }
        Formula::Or(l, r) => {
            write(l, 1, out);
            out.push_str(" | ");
            write(r, 2, out);
        }
        Formula::Until(l, r) => {
            write(l, 4, out);
            out.push_str(" U ");
            write(r, 3, out);
        }
        Formula::Release(l, r) => {
            write(l, 4, out);
            out.push_str(" R ");
            write(r, 3, out);
        }
    }
    if wrap {
        out.push(')');
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(agents: &[&str]) -> Decl {
        Decl::with_agents(agents)
    }

    #[test]
    fn eventually_is_desugared() {
        let f = parse("<<x>> (a,x) F p", &d(&["a"])).unwrap();
        assert_eq!(
            f,
            Formula::exists("x", Formula::bind("a", "x", Formula::eventually(Formula::atom("p"))))
        );
    }

    #[test]
    fn precedence() {
        let f = parse("p & q | r -> s", &d(&[])).unwrap();
        let expect = Formula::implies(
            Formula::or(Formula::and(Formula::atom("p"), Formula::atom("q")), Formula::atom("r")),
            Formula::atom("s"),
        );
        assert_eq!(f, expect);
        let g = parse("X p U q U r", &d(&[])).unwrap();
        assert_eq!(
            g,
            Formula::until(
                Formula::next(Formula::atom("p")),
                Formula::until(Formula::atom("q"), Formula::atom("r"))
            )
        );
    }

    #[test]
    fn shared_strategy_example() {
        let f = parse("<<x>> [[y]] (a,x)(b,x)(c,y) G !fail", &d(&["a", "b", "c"])).unwrap();
        let body = Formula::always(Formula::not(Formula::atom("fail")));
        let expect = Formula::exists(
            "x",
            Formula::forall(
                "y",
                Formula::bind("a", "x", Formula::bind("b", "x", Formula::bind("c", "y", body))),
            ),
        );
        assert_eq!(f, expect);
    }

    #[test]
    fn confusion_and_undeclared() {
        assert!(matches!(
            parse("<<a>> p", &d(&["a"])),
            Err(ParseError::Confusion { .. })
        ));
        assert!(matches!(
            parse("(b,x) p", &d(&["a"])),
            Err(ParseError::Undeclared { kind: "agent", .. })
        ));
        assert!(matches!(parse("a", &d(&["a"])), Err(ParseError::Confusion { .. })));
        let mut decl = d(&["a"]);
        decl.atoms = Some(["p".to_string()].into());
        assert!(matches!(
            parse("q", &decl),
            Err(ParseError::Undeclared { kind: "atom", .. })
        ));
    }

    #[test]
    fn syntax_error_position() {
        match parse("p & (q", &d(&[])) {
            Err(ParseError::Syntax { pos, .. }) => assert_eq!(pos, 6),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn render_examples() {
        let decl = d(&["a"]);
        for src in [
            "p",
            "<<x>> (a,x) X p",
            "!(p & q)",
            "(p | q) & r",
            "X p U q",
            "(p U q) U r",
        ] {
            let f = parse(src, &decl).unwrap();
            assert_eq!(render(&f), src);
        }
    }
}
