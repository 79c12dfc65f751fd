//! Concrete syntax for commands, predicates, relations and temporal
//! formulas, with a canonical pretty-printer that round-trips.
//!
//! ```text
//! cmd  ::= cmd '|' cmd            (choice, loosest)
//!        | cmd '/\' cmd           (weak conjunction)
//!        | cmd ';' cmd
//!        | cmd '^w'               (omega iteration, tightest)
//!        | 'rely' '(' rel ')' | 'guar' '(' rel ')' | 'pre' '(' pred ')'
//!        | 'spec' frame? ':' '[' rel ']'
//!        | 'with' var ('await' pred)? '{' cmd '}'
//!        | 'terminate' tf | 'encode' tf | 'term'
//!        | 'envstep' '(' rel ')' | '(' cmd ')'
//! ```
//!
//! Binary operators associate to the right. Relations use the ASCII forms
//! `qu' = qu ++ [v]`, `qu = [res'] ++ qu'`, `qu' suffixof qu`,
//! `qu prefixof qu'`, `s' != s`, `id(x,y)`, `pre(p)`, `post(p)`; formulas
//! use `<>`, `[]`, `<>e(rel)`, `[]e(rel)`, `@e(rel)`/`@p(rel)`/`@a(rel)`
//! step atoms and predicate atoms.

use std::fmt::Write as _;

use thiserror::Error;

use crate::kernel::{
    Binding, Command, Frame, Item, SeqVal, StatePredicate, StateRelation, StepKindFilter,
    TemporalFormula, Value, VarName,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("syntax error at {line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Tok {
    Ident(String),
    Primed(String),
    Num(i64),
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Colon,
    Pipe,
    Bang,
    Hash,
    Lt,
    Eq,
    EqEq,
    Neq,
    AndAnd,
    OrOr,
    ConjOp,
    IterW,
    Diamond,
    Box_,
    PlusPlus,
    At,
}

struct Lexer<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

type Spanned = (Tok, usize, usize);

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src,
            bytes: src.as_bytes(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn error(&self, msg: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            col: self.col,
            msg: msg.into(),
        }
    }

    fn bump(&mut self, n: usize) {
        for _ in 0..n {
            if self.bytes.get(self.pos) == Some(&b'\n') {
                self.line += 1;
                self.col = 1;
            } else {
                self.col += 1;
            }
            self.pos += 1;
        }
    }

    fn lex(mut self) -> Result<Vec<Spanned>, ParseError> {
        let mut out = Vec::new();
        while self.pos < self.bytes.len() {
            let c = self.bytes[self.pos];
            if c.is_ascii_whitespace() {
                self.bump(1);
                continue;
            }
            if c == b'#' && self.src[self.pos..].starts_with("# ") {
                // '#' starts the length operator only when glued to an
                // identifier; a spaced '#' begins a comment line.
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                    self.bump(1);
                }
                continue;
            }
            let (line, col) = (self.line, self.col);
            let rest = &self.src[self.pos..];
            let two = |s: &str| rest.starts_with(s);
            let tok = if two("/\\") {
                self.bump(2);
                Tok::ConjOp
            } else if two("^w") {
                self.bump(2);
                Tok::IterW
            } else if two("<>") {
                self.bump(2);
                Tok::Diamond
            } else if two("[]") {
                self.bump(2);
                Tok::Box_
            } else if two("++") {
                self.bump(2);
                Tok::PlusPlus
            } else if two("&&") {
                self.bump(2);
                Tok::AndAnd
            } else if two("||") {
                self.bump(2);
                Tok::OrOr
            } else if two("!=") {
                self.bump(2);
                Tok::Neq
            } else if two("==") {
                self.bump(2);
                Tok::EqEq
            } else {
                match c {
                    b'(' => {
                        self.bump(1);
                        Tok::LParen
                    }
                    b')' => {
                        self.bump(1);
                        Tok::RParen
                    }
                    b'{' => {
                        self.bump(1);
                        Tok::LBrace
                    }
                    b'}' => {
                        self.bump(1);
                        Tok::RBrace
                    }
                    b'[' => {
                        self.bump(1);
                        Tok::LBracket
                    }
                    b']' => {
                        self.bump(1);
                        Tok::RBracket
                    }
                    b',' => {
                        self.bump(1);
                        Tok::Comma
                    }
                    b';' => {
                        self.bump(1);
                        Tok::Semi
                    }
                    b':' => {
                        self.bump(1);
                        Tok::Colon
                    }
                    b'|' => {
                        self.bump(1);
                        Tok::Pipe
                    }
                    b'!' => {
                        self.bump(1);
                        Tok::Bang
                    }
                    b'#' => {
                        self.bump(1);
                        Tok::Hash
                    }
                    b'<' => {
                        self.bump(1);
                        Tok::Lt
                    }
                    b'=' => {
                        self.bump(1);
                        Tok::Eq
                    }
                    b'@' => {
                        self.bump(1);
                        Tok::At
                    }
                    b'-' | b'0'..=b'9' => {
                        let start = self.pos;
                        if c == b'-' {
                            self.bump(1);
                        }
                        while self
                            .bytes
                            .get(self.pos)
                            .is_some_and(|b| b.is_ascii_digit())
                        {
                            self.bump(1);
                        }
                        let text = &self.src[start..self.pos];
                        let n = text
                            .parse::<i64>()
                            .map_err(|_| self.error(format!("bad number `{text}`")))?;
                        Tok::Num(n)
                    }
                    b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                        let start = self.pos;
                        while self
                            .bytes
                            .get(self.pos)
                            .is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_')
                        {
                            self.bump(1);
                        }
                        let name = self.src[start..self.pos].to_string();
                        if self.bytes.get(self.pos) == Some(&b'\'') {
                            self.bump(1);
                            Tok::Primed(name)
                        } else {
                            Tok::Ident(name)
                        }
                    }
                    other => {
                        return Err(self.error(format!("unexpected character `{}`", other as char)))
                    }
                }
            };
            out.push((tok, line, col));
        }
        Ok(out)
    }
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _, _)| t)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.pos + 1).map(|(t, _, _)| t)
    }

    fn next_tok(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map(|(_, l, c)| (*l, *c))
            .unwrap_or((1, 1))
    }

    fn error(&self, msg: impl Into<String>) -> ParseError {
        let (line, col) = self.here();
        ParseError {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        match self.next_tok() {
            Some(t) if t == tok => Ok(()),
            Some(t) => Err(ParseError {
                line: self.toks[self.pos - 1].1,
                col: self.toks[self.pos - 1].2,
                msg: format!("expected {tok:?}, found {t:?}"),
            }),
            None => Err(self.error(format!("expected {tok:?}, found end of input"))),
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.next_tok() {
            Some(Tok::Ident(s)) => Ok(s),
            other => Err(self.error(format!("expected identifier, found {other:?}"))),
        }
    }

    // ---- values and literals ----

    fn value(&mut self) -> Result<Value, ParseError> {
        match self.next_tok() {
            Some(Tok::Num(n)) => Ok(Value::Int(n)),
            Some(Tok::Ident(s)) if s == "null" => Ok(Value::Null),
            other => Err(self.error(format!("expected value, found {other:?}"))),
        }
    }

    /// A literal binding: scalar value or `[v, ...]` / `[]`.
    fn literal(&mut self) -> Result<Binding, ParseError> {
        match self.peek() {
            Some(Tok::Box_) => {
                self.pos += 1;
                Ok(Binding::Seq(SeqVal::empty()))
            }
            Some(Tok::LBracket) => {
                self.pos += 1;
                let mut items = Vec::new();
                if !self.eat(&Tok::RBracket) {
                    loop {
                        items.push(self.value()?);
                        if self.eat(&Tok::RBracket) {
                            break;
                        }
                        self.expect(Tok::Comma)?;
                    }
                }
                Ok(Binding::Seq(SeqVal(items)))
            }
            _ => Ok(Binding::Scalar(self.value()?)),
        }
    }

    // ---- predicates ----

    fn pred(&mut self) -> Result<StatePredicate, ParseError> {
        let mut acc = vec![self.pred_and()?];
        while self.eat(&Tok::OrOr) {
            acc.push(self.pred_and()?);
        }
        Ok(fold_right(acc, StatePredicate::or))
    }

    fn pred_and(&mut self) -> Result<StatePredicate, ParseError> {
        let mut acc = vec![self.pred_atom()?];
        while self.eat(&Tok::AndAnd) {
            acc.push(self.pred_atom()?);
        }
        Ok(fold_right(acc, StatePredicate::and))
    }

    fn pred_atom(&mut self) -> Result<StatePredicate, ParseError> {
        match self.peek() {
            Some(Tok::Bang) => {
                self.pos += 1;
                Ok(StatePredicate::not(self.pred_atom()?))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let p = self.pred()?;
                self.expect(Tok::RParen)?;
                Ok(p)
            }
            Some(Tok::Hash) => {
                self.pos += 1;
                let var = self.ident()?;
                self.expect(Tok::Lt)?;
                match self.next_tok() {
                    Some(Tok::Num(n)) if n >= 0 => Ok(StatePredicate::len_lt(var, n as usize)),
                    other => Err(self.error(format!("expected bound, found {other:?}"))),
                }
            }
            Some(Tok::Ident(s)) if s == "true" => {
                self.pos += 1;
                Ok(StatePredicate::True)
            }
            Some(Tok::Ident(s)) if s == "false" => {
                self.pos += 1;
                Ok(StatePredicate::False)
            }
            Some(Tok::Ident(_)) => {
                let var = self.ident()?;
                match self.next_tok() {
                    Some(Tok::Neq) => {
                        if self.peek() == Some(&Tok::Box_) {
                            self.pos += 1;
                            Ok(StatePredicate::NonEmpty(VarName::new(var)))
                        } else {
                            Ok(StatePredicate::Neq(VarName::new(var), self.literal()?))
                        }
                    }
                    Some(Tok::EqEq) => Ok(StatePredicate::Eq(VarName::new(var), self.literal()?)),
                    other => Err(self.error(format!("expected == or != , found {other:?}"))),
                }
            }
            other => Err(self.error(format!("expected predicate, found {other:?}"))),
        }
    }

    // ---- relations ----

    fn rel(&mut self) -> Result<StateRelation, ParseError> {
        let mut acc = vec![self.rel_and()?];
        while self.eat(&Tok::OrOr) {
            acc.push(self.rel_and()?);
        }
        Ok(fold_right(acc, StateRelation::or))
    }

    fn rel_and(&mut self) -> Result<StateRelation, ParseError> {
        let mut acc = vec![self.rel_atom()?];
        while self.eat(&Tok::AndAnd) {
            acc.push(self.rel_atom()?);
        }
        Ok(fold_right(acc, StateRelation::and))
    }

    fn item(&mut self) -> Result<Item, ParseError> {
        match self.next_tok() {
            Some(Tok::Num(n)) => Ok(Item::Lit(Value::Int(n))),
            Some(Tok::Ident(s)) if s == "null" => Ok(Item::Lit(Value::Null)),
            Some(Tok::Ident(s)) => Ok(Item::Var(VarName::new(s))),
            other => Err(self.error(format!("expected item, found {other:?}"))),
        }
    }

    fn rel_atom(&mut self) -> Result<StateRelation, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Bang) => {
                self.pos += 1;
                Ok(StateRelation::not(self.rel_atom()?))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let r = self.rel()?;
                self.expect(Tok::RParen)?;
                Ok(r)
            }
            Some(Tok::Ident(s)) if s == "true" => {
                self.pos += 1;
                Ok(StateRelation::Universal)
            }
            Some(Tok::Ident(s)) if s == "id" => {
                self.pos += 1;
                self.expect(Tok::LParen)?;
                let mut vars = Vec::new();
                if !self.eat(&Tok::RParen) {
                    loop {
                        vars.push(VarName::new(self.ident()?));
                        if self.eat(&Tok::RParen) {
                            break;
                        }
                        self.expect(Tok::Comma)?;
                    }
                }
                Ok(StateRelation::Id(vars))
            }
            Some(Tok::Ident(s)) if s == "pre" => {
                self.pos += 1;
                self.expect(Tok::LParen)?;
                let p = self.pred()?;
                self.expect(Tok::RParen)?;
                Ok(StateRelation::Pre(p))
            }
            Some(Tok::Ident(s)) if s == "post" => {
                self.pos += 1;
                self.expect(Tok::LParen)?;
                let p = self.pred()?;
                self.expect(Tok::RParen)?;
                Ok(StateRelation::Post(p))
            }
            Some(Tok::Primed(x)) => {
                self.pos += 1;
                match self.next_tok() {
                    Some(Tok::Eq) => {
                        // x' = x | x' = x ++ [item] | x' = [item] ++ x
                        if self.eat(&Tok::LBracket) {
                            let item = self.item()?;
                            self.expect(Tok::RBracket)?;
                            self.expect(Tok::PlusPlus)?;
                            let base = self.ident()?;
                            if base != x {
                                return Err(self.error(format!(
                                    "prepend must target the same variable, found `{base}` for `{x}'`"
                                )));
                            }
                            Ok(StateRelation::Prepend(VarName::new(x), item))
                        } else {
                            let base = self.ident()?;
                            if base != x {
                                return Err(self.error(format!(
                                    "expected `{x}` on the right of `{x}' =`"
                                )));
                            }
                            if self.eat(&Tok::PlusPlus) {
                                self.expect(Tok::LBracket)?;
                                let item = self.item()?;
                                self.expect(Tok::RBracket)?;
                                Ok(StateRelation::Append(VarName::new(x), item))
                            } else {
                                Ok(StateRelation::EqPrimed(VarName::new(x)))
                            }
                        }
                    }
                    Some(Tok::Neq) => {
                        let base = self.ident()?;
                        if base != x {
                            return Err(
                                self.error(format!("expected `{x}` on the right of `{x}' !=`"))
                            );
                        }
                        Ok(StateRelation::NeqPrimed(VarName::new(x)))
                    }
                    Some(Tok::Ident(kw)) if kw == "suffixof" => {
                        let base = self.ident()?;
                        if base != x {
                            return Err(self.error(format!(
                                "suffixof relates a variable to itself, found `{base}`"
                            )));
                        }
                        Ok(StateRelation::SuffixOf(VarName::new(x)))
                    }
                    other => Err(self.error(format!("expected relation operator, found {other:?}"))),
                }
            }
            Some(Tok::Ident(x)) => {
                self.pos += 1;
                match self.next_tok() {
                    Some(Tok::Ident(kw)) if kw == "prefixof" => match self.next_tok() {
                        Some(Tok::Primed(y)) if y == x => {
                            Ok(StateRelation::PrefixOf(VarName::new(x)))
                        }
                        other => Err(self.error(format!("expected `{x}'`, found {other:?}"))),
                    },
                    Some(Tok::Eq) => {
                        // x = [h'] ++ x'
                        self.expect(Tok::LBracket)?;
                        let head = match self.next_tok() {
                            Some(Tok::Primed(h)) => h,
                            other => {
                                return Err(
                                    self.error(format!("expected primed head, found {other:?}"))
                                )
                            }
                        };
                        self.expect(Tok::RBracket)?;
                        self.expect(Tok::PlusPlus)?;
                        match self.next_tok() {
                            Some(Tok::Primed(y)) if y == x => Ok(StateRelation::ConsHead(
                                VarName::new(x),
                                VarName::new(head),
                            )),
                            other => Err(self.error(format!("expected `{x}'`, found {other:?}"))),
                        }
                    }
                    other => Err(self.error(format!("expected relation operator, found {other:?}"))),
                }
            }
            other => Err(self.error(format!("expected relation, found {other:?}"))),
        }
    }

    // ---- temporal formulas ----

    fn tf(&mut self) -> Result<TemporalFormula, ParseError> {
        let mut acc = vec![self.tf_and()?];
        while self.eat(&Tok::OrOr) {
            acc.push(self.tf_and()?);
        }
        Ok(fold_right(acc, |a, b| TemporalFormula::Or(Box::new(a), Box::new(b))))
    }

    fn tf_and(&mut self) -> Result<TemporalFormula, ParseError> {
        let mut acc = vec![self.tf_atom()?];
        while self.eat(&Tok::AndAnd) {
            acc.push(self.tf_atom()?);
        }
        Ok(fold_right(acc, |a, b| TemporalFormula::And(Box::new(a), Box::new(b))))
    }

    fn step_kind(&mut self) -> Result<StepKindFilter, ParseError> {
        match self.next_tok() {
            Some(Tok::Ident(s)) if s == "e" => Ok(StepKindFilter::Env),
            Some(Tok::Ident(s)) if s == "p" => Ok(StepKindFilter::Pgm),
            Some(Tok::Ident(s)) if s == "a" => Ok(StepKindFilter::Any),
            other => Err(self.error(format!("expected step kind e/p/a, found {other:?}"))),
        }
    }

    fn tf_atom(&mut self) -> Result<TemporalFormula, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Diamond) => {
                self.pos += 1;
                if matches!(self.peek(), Some(Tok::Ident(s)) if s == "e")
                    && self.peek2() == Some(&Tok::LParen)
                {
                    self.pos += 1;
                    self.expect(Tok::LParen)?;
                    let r = self.rel()?;
                    self.expect(Tok::RParen)?;
                    Ok(TemporalFormula::Eventually(Box::new(
                        TemporalFormula::StepAtom(StepKindFilter::Env, r),
                    )))
                } else {
                    Ok(TemporalFormula::Eventually(Box::new(self.tf_atom()?)))
                }
            }
            Some(Tok::Box_) => {
                self.pos += 1;
                if matches!(self.peek(), Some(Tok::Ident(s)) if s == "e")
                    && self.peek2() == Some(&Tok::LParen)
                {
                    self.pos += 1;
                    self.expect(Tok::LParen)?;
                    let r = self.rel()?;
                    self.expect(Tok::RParen)?;
                    Ok(TemporalFormula::Always(Box::new(TemporalFormula::Not(
                        Box::new(TemporalFormula::StepAtom(
                            StepKindFilter::Env,
                            StateRelation::not(r),
                        )),
                    ))))
                } else {
                    Ok(TemporalFormula::Always(Box::new(self.tf_atom()?)))
                }
            }
            Some(Tok::Bang) => {
                self.pos += 1;
                Ok(TemporalFormula::Not(Box::new(self.tf_atom()?)))
            }
            Some(Tok::At) => {
                self.pos += 1;
                let kind = self.step_kind()?;
                self.expect(Tok::LParen)?;
                let r = self.rel()?;
                self.expect(Tok::RParen)?;
                Ok(TemporalFormula::StepAtom(kind, r))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let f = self.tf()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            // A braced compound predicate is one state atom.
            Some(Tok::LBrace) => {
                self.pos += 1;
                let p = self.pred()?;
                self.expect(Tok::RBrace)?;
                Ok(TemporalFormula::StateAtom(p))
            }
            Some(Tok::Ident(s)) if s == "true" && self.peek2() != Some(&Tok::EqEq) => {
                self.pos += 1;
                Ok(TemporalFormula::True)
            }
            Some(Tok::Ident(s)) if s == "false" && self.peek2() != Some(&Tok::EqEq) => {
                self.pos += 1;
                Ok(TemporalFormula::False)
            }
            _ => Ok(TemporalFormula::StateAtom(self.pred_atom()?)),
        }
    }

    // ---- commands ----

    fn cmd(&mut self) -> Result<Command, ParseError> {
        let mut acc = vec![self.cmd_conj()?];
        while self.eat(&Tok::Pipe) {
            acc.push(self.cmd_conj()?);
        }
        Ok(fold_right(acc, Command::choice))
    }

    fn cmd_conj(&mut self) -> Result<Command, ParseError> {
        let mut acc = vec![self.cmd_seq()?];
        while self.eat(&Tok::ConjOp) {
            acc.push(self.cmd_seq()?);
        }
        Ok(fold_right(acc, Command::conj))
    }

    fn cmd_seq(&mut self) -> Result<Command, ParseError> {
        let mut acc = vec![self.cmd_postfix()?];
        while self.eat(&Tok::Semi) {
            acc.push(self.cmd_postfix()?);
        }
        Ok(fold_right(acc, Command::seq))
    }

    fn cmd_postfix(&mut self) -> Result<Command, ParseError> {
        let mut c = self.cmd_atom()?;
        while self.eat(&Tok::IterW) {
            c = Command::iter_omega(c);
        }
        Ok(c)
    }

    fn cmd_atom(&mut self) -> Result<Command, ParseError> {
        match self.next_tok() {
            Some(Tok::LParen) => {
                let c = self.cmd()?;
                self.expect(Tok::RParen)?;
                Ok(c)
            }
            Some(Tok::Ident(kw)) => match kw.as_str() {
                "rely" => {
                    self.expect(Tok::LParen)?;
                    let r = self.rel()?;
                    self.expect(Tok::RParen)?;
                    Ok(Command::rely(r))
                }
                "guar" => {
                    self.expect(Tok::LParen)?;
                    let r = self.rel()?;
                    self.expect(Tok::RParen)?;
                    Ok(Command::guar(r))
                }
                "pre" => {
                    self.expect(Tok::LParen)?;
                    let p = self.pred()?;
                    self.expect(Tok::RParen)?;
                    Ok(Command::pre(p))
                }
                "spec" => {
                    let frame = if self.eat(&Tok::LBrace) {
                        let mut vars = std::collections::BTreeSet::new();
                        if !self.eat(&Tok::RBrace) {
                            loop {
                                vars.insert(VarName::new(self.ident()?));
                                if self.eat(&Tok::RBrace) {
                                    break;
                                }
                                self.expect(Tok::Comma)?;
                            }
                        }
                        Frame::Of(vars)
                    } else {
                        Frame::All
                    };
                    self.expect(Tok::Colon)?;
                    self.expect(Tok::LBracket)?;
                    let r = self.rel()?;
                    self.expect(Tok::RBracket)?;
                    Ok(Command::Spec { frame, post: r })
                }
                "with" => {
                    let var = self.ident()?;
                    let guard = if matches!(self.peek(), Some(Tok::Ident(s)) if s == "await") {
                        self.pos += 1;
                        Some(self.pred()?)
                    } else {
                        None
                    };
                    self.expect(Tok::LBrace)?;
                    let body = self.cmd()?;
                    self.expect(Tok::RBrace)?;
                    Ok(match guard {
                        None => Command::with(var, body),
                        Some(g) => Command::await_with(var, g, body),
                    })
                }
                "terminate" => Ok(Command::terminate(self.tf()?)),
                "encode" => Ok(Command::Encode(self.tf()?)),
                "term" => Ok(Command::Term),
                "envstep" => {
                    self.expect(Tok::LParen)?;
                    let r = self.rel()?;
                    self.expect(Tok::RParen)?;
                    Ok(Command::env_atomic(r))
                }
                other => Err(self.error(format!("unknown command keyword `{other}`"))),
            },
            other => Err(self.error(format!("expected command, found {other:?}"))),
        }
    }
}

fn fold_right<T>(mut items: Vec<T>, f: impl Fn(T, T) -> T) -> T {
    let mut acc = items.pop().expect("non-empty");
    while let Some(x) = items.pop() {
        acc = f(x, acc);
    }
    acc
}

/// Parses a command from its concrete syntax.
pub fn parse_command(text: &str) -> Result<Command, ParseError> {
    let toks = Lexer::new(text).lex()?;
    let mut p = Parser { toks, pos: 0 };
    let c = p.cmd()?;
    if p.pos != p.toks.len() {
        return Err(p.error("trailing input after command"));
    }
    Ok(c)
}

/// Parses a temporal formula.
pub fn parse_formula(text: &str) -> Result<TemporalFormula, ParseError> {
    let toks = Lexer::new(text).lex()?;
    let mut p = Parser { toks, pos: 0 };
    let f = p.tf()?;
    if p.pos != p.toks.len() {
        return Err(p.error("trailing input after formula"));
    }
    Ok(f)
}

// ---- printing ----

fn print_value(v: Value) -> String {
    v.to_string()
}

fn print_binding(b: &Binding) -> String {
    match b {
        Binding::Scalar(v) => print_value(*v),
        Binding::Seq(s) if s.is_empty() => "[]".into(),
        Binding::Seq(s) => {
            let items: Vec<String> = s.0.iter().map(|v| print_value(*v)).collect();
            format!("[{}]", items.join(","))
        }
    }
}

pub fn print_pred(p: &StatePredicate) -> String {
    print_pred_prec(p, 0)
}

fn print_pred_prec(p: &StatePredicate, prec: u8) -> String {
    let (s, my) = match p {
        StatePredicate::True => ("true".to_string(), 3),
        StatePredicate::False => ("false".to_string(), 3),
        StatePredicate::NonEmpty(x) => (format!("{x} != []"), 3),
        StatePredicate::LenLt(x, n) => (format!("#{x} < {n}"), 3),
        StatePredicate::Eq(x, b) => (format!("{x} == {}", print_binding(b)), 3),
        StatePredicate::Neq(x, b) => match b {
            Binding::Seq(s) if s.is_empty() => (format!("!({x} == [])"), 3),
            _ => (format!("{x} != {}", print_binding(b)), 3),
        },
        StatePredicate::Not(q) => (format!("!{}", print_pred_prec(q, 3)), 3),
        StatePredicate::And(a, b) => (
            format!("{} && {}", print_pred_prec(a, 3), print_pred_prec(b, 2)),
            2,
        ),
        StatePredicate::Or(a, b) => (
            format!("{} || {}", print_pred_prec(a, 2), print_pred_prec(b, 1)),
            1,
        ),
    };
    if my < prec {
        format!("({s})")
    } else {
        s
    }
}

fn print_item(i: &Item) -> String {
    match i {
        Item::Lit(v) => print_value(*v),
        Item::Var(x) => x.to_string(),
    }
}

pub fn print_rel(r: &StateRelation) -> String {
    print_rel_prec(r, 0)
}

fn print_rel_prec(r: &StateRelation, prec: u8) -> String {
    let (s, my) = match r {
        StateRelation::Universal => ("true".to_string(), 3),
        StateRelation::Id(vs) => (
            format!(
                "id({})",
                vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
            ),
            3,
        ),
        StateRelation::EqPrimed(x) => (format!("{x}' = {x}"), 3),
        StateRelation::NeqPrimed(x) => (format!("{x}' != {x}"), 3),
        StateRelation::PrefixOf(x) => (format!("{x} prefixof {x}'"), 3),
        StateRelation::SuffixOf(x) => (format!("{x}' suffixof {x}"), 3),
        StateRelation::Append(x, i) => (format!("{x}' = {x} ++ [{}]", print_item(i)), 3),
        StateRelation::Prepend(x, i) => (format!("{x}' = [{}] ++ {x}", print_item(i)), 3),
        StateRelation::ConsHead(x, h) => (format!("{x} = [{h}'] ++ {x}'"), 3),
        StateRelation::Pre(p) => (format!("pre({})", print_pred(p)), 3),
        StateRelation::Post(p) => (format!("post({})", print_pred(p)), 3),
        StateRelation::Not(q) => (format!("!{}", print_rel_prec(q, 3)), 3),
        StateRelation::And(a, b) => (
            format!("{} && {}", print_rel_prec(a, 3), print_rel_prec(b, 2)),
            2,
        ),
        StateRelation::Or(a, b) => (
            format!("{} || {}", print_rel_prec(a, 2), print_rel_prec(b, 1)),
            1,
        ),
    };
    if my < prec {
        format!("({s})")
    } else {
        s
    }
}

pub fn print_formula(f: &TemporalFormula) -> String {
    print_tf_prec(f, 0)
}

fn print_tf_prec(f: &TemporalFormula, prec: u8) -> String {
    // Derived forms first.
    if let TemporalFormula::Always(inner) = f {
        if let TemporalFormula::Not(atom) = inner.as_ref() {
            if let TemporalFormula::StepAtom(StepKindFilter::Env, StateRelation::Not(r)) =
                atom.as_ref()
            {
                return format!("[]e({})", print_rel(r));
            }
        }
    }
    if let TemporalFormula::Eventually(inner) = f {
        if let TemporalFormula::StepAtom(StepKindFilter::Env, r) = inner.as_ref() {
            return format!("<>e({})", print_rel(r));
        }
    }
    let (s, my) = match f {
        TemporalFormula::True => ("true".to_string(), 3),
        TemporalFormula::False => ("false".to_string(), 3),
        // Comparison atoms print bare; anything else is braced so it
        // reparses as one state atom rather than a formula combination.
        TemporalFormula::StateAtom(p) => match p {
            StatePredicate::NonEmpty(_)
            | StatePredicate::LenLt(..)
            | StatePredicate::Eq(..)
            | StatePredicate::Neq(..) => (print_pred_prec(p, 3), 3),
            _ => (format!("{{{}}}", print_pred(p)), 3),
        },
        TemporalFormula::StepAtom(kind, r) => {
            let k = match kind {
                StepKindFilter::Env => "e",
                StepKindFilter::Pgm => "p",
                StepKindFilter::Any => "a",
            };
            (format!("@{k}({})", print_rel(r)), 3)
        }
        TemporalFormula::Not(g) => (format!("!{}", print_tf_prec(g, 3)), 3),
        TemporalFormula::Eventually(g) => (format!("<>{}", print_tf_prec(g, 3)), 3),
        TemporalFormula::Always(g) => (format!("[]{}", print_tf_prec(g, 3)), 3),
        TemporalFormula::And(a, b) => (
            format!("{} && {}", print_tf_prec(a, 3), print_tf_prec(b, 2)),
            2,
        ),
        TemporalFormula::Or(a, b) => (
            format!("{} || {}", print_tf_prec(a, 2), print_tf_prec(b, 1)),
            1,
        ),
    };
    if my < prec {
        format!("({s})")
    } else {
        s
    }
}

/// Canonical concrete syntax; `parse_command(print_command(c)) == c`.
pub fn print_command(c: &Command) -> String {
    print_cmd_prec(c, 0)
}

fn print_cmd_prec(c: &Command, prec: u8) -> String {
    // terminate t normalizes to term | encode !t; print it back.
    if let Command::Choice(a, b) = c {
        if matches!(a.as_ref(), Command::Term) {
            if let Command::Encode(f) = b.as_ref() {
                let t = TemporalFormula::not(f.clone());
                let s = format!("terminate {}", print_formula(&t));
                return if prec > 0 { format!("({s})") } else { s };
            }
        }
    }
    let (s, my) = match c {
        Command::Choice(a, b) => (
            format!("{} | {}", print_cmd_prec(a, 1), print_cmd_prec(b, 0)),
            0,
        ),
        Command::Conj(a, b) => (
            format!("{} /\\ {}", print_cmd_prec(a, 2), print_cmd_prec(b, 1)),
            1,
        ),
        Command::Seq(a, b) => (
            format!("{} ; {}", print_cmd_prec(a, 3), print_cmd_prec(b, 2)),
            2,
        ),
        Command::IterOmega(inner) => (format!("{}^w", print_cmd_prec(inner, 4)), 3),
        Command::Rely(r) => (format!("rely({})", print_rel(r)), 4),
        Command::Guar(g) => (format!("guar({})", print_rel(g)), 4),
        Command::Pre(p) => (format!("pre({})", print_pred(p)), 4),
        Command::Spec { frame, post } => {
            let fr = match frame {
                Frame::All => String::new(),
                Frame::Of(vars) => {
                    let mut s = String::from(" {");
                    let names: Vec<String> = vars.iter().map(|v| v.to_string()).collect();
                    let _ = write!(s, "{}", names.join(","));
                    s.push('}');
                    s
                }
            };
            (format!("spec{fr} : [{}]", print_rel(post)), 4)
        }
        Command::With { resource, body } => (
            format!("with {resource} {{ {} }}", print_command(body)),
            4,
        ),
        Command::AwaitWith {
            resource,
            guard,
            body,
        } => (
            format!(
                "with {resource} await {} {{ {} }}",
                print_pred(guard),
                print_command(body)
            ),
            4,
        ),
        Command::EnvAtomic(r) => (format!("envstep({})", print_rel(r)), 4),
        Command::Term => ("term".to_string(), 4),
        Command::Encode(f) => (format!("encode {}", print_formula(f)), 4),
    };
    if my < prec {
        format!("({s})")
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::StatePredicate;

    fn roundtrip(c: &Command) {
        let text = print_command(c);
        let back = parse_command(&text).unwrap_or_else(|e| panic!("reparse `{text}`: {e}"));
        assert_eq!(&back, c, "round-trip through `{text}`");
    }

    #[test]
    fn parses_choice_and_iteration_structure() {
        let c = parse_command("term | envstep(s' != s)^w").unwrap();
        let expected = Command::choice(
            Command::Term,
            Command::iter_omega(Command::env_atomic(StateRelation::neq_primed("s"))),
        );
        assert_eq!(c, expected);
    }

    #[test]
    fn precedence_seq_binds_tighter_than_conj() {
        let c = parse_command("rely(true) /\\ pre(qu != []) ; term").unwrap();
        let expected = Command::conj(
            Command::rely(StateRelation::Universal),
            Command::seq(Command::pre(StatePredicate::non_empty("qu")), Command::Term),
        );
        assert_eq!(c, expected);
    }

    #[test]
    fn malformed_input_reports_position() {
        let err = parse_command("with {").unwrap_err();
        assert_eq!(err.line, 1);
        assert!(err.col > 1);
    }

    #[test]
    fn terminate_round_trips_through_normal_form() {
        let t = TemporalFormula::eventually(TemporalFormula::atom(StatePredicate::non_empty(
            "qu",
        )));
        roundtrip(&Command::terminate(t));
    }

    #[test]
    fn case_study_commands_round_trip() {
        use crate::casestudies::*;
        let figs = [
            queue_spec_srsw(),
            bounded_queue_await_spec(2).unwrap(),
            bounded_queue_terminate_spec(2).unwrap(),
            multi_client_terminate_spec(Fairness::Weak, 2),
            multi_client_terminate_spec(Fairness::Strong, 2),
            stack_explicit_spec(),
            stack_terminate_spec(),
        ];
        for f in &figs {
            roundtrip(&f.write);
            roundtrip(&f.read);
        }
    }

    #[test]
    fn formula_forms_round_trip() {
        for text in [
            "<>(qu != [])",
            "[](#qu < 2)",
            "[]e(s' = s)",
            "<>e(s' != s)",
            "[](<>(qu != []))",
            "!(<>(qu != []))",
            "@p(qu' = qu) && <>(v == null)",
        ] {
            let f = parse_formula(text).unwrap();
            let printed = print_formula(&f);
            assert_eq!(parse_formula(&printed).unwrap(), f, "via `{printed}`");
        }
    }
}
