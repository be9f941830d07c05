//! Text grammar for cyclotomic numbers, characters, modules and generator
//! expressions.
//!
//! ```text
//! cyc    := term (('+'|'-') term)*          term := unary (('*'|'/') unary)*
//! unary  := '-' unary | atom ('^' unary)?   atom := INT | 'z' | '(' cyc ')'
//! char   := 'eps' | 'chi' | 'chr(' ['free=[' cyc,* ']'] [','] ['tor=[' INT,* ']'] ')'
//! label  := 'V' INT '(' char ')' | 'W' INT '(' char ';' 'eta' '=' cyc ')'
//! module := [INT '*'] label ('+' [INT '*'] label)*
//! ring   := ['-'] prod (('+'|'-') prod)*
//! prod   := factor ('*' factor)*
//! factor := INT | char ['^' INT] | 'y' ['^' INT] | 'z' ['^' INT] | 'x[' cyc ']'
//!         | label | '(' ring ')' ['^' INT]
//! ```
//! In `cyc`, `z` is ζ_N; in `ring` it is the generator [V_{s+1}(ε)].

use hopfore::greenring::{Expr, Factor, XGen};
use hopfore::hopfdata::{Character, HopfParams};
use hopfore::weightmods::{Decomposition, Label, NonNilLabel};
use hopfore::CycNum;

use crate::CliError;

pub struct Parser<'a> {
    src: Vec<char>,
    pos: usize,
    n: u32,
    p: Option<&'a HopfParams>,
}

impl<'a> Parser<'a> {
    pub fn new(text: &str, p: &'a HopfParams) -> Parser<'a> {
        Parser { src: text.chars().collect(), pos: 0, n: p.n, p: Some(p) }
    }

    /// A parser for bare cyclotomic expressions in ℚ(ζ_N).
    pub fn numbers(text: &str, n: u32) -> Parser<'static> {
        Parser { src: text.chars().collect(), pos: 0, n, p: None }
    }

    fn err<T>(&self, msg: &str) -> Result<T, CliError> {
        Err(CliError::Syntax { pos: self.pos, msg: msg.to_string() })
    }

    fn params(&self) -> Result<&'a HopfParams, CliError> {
        self.p.ok_or_else(|| CliError::Syntax { pos: self.pos, msg: "no session parameters".into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), CliError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(&format!("expected '{c}'"))
        }
    }

    /// Consumes `kw` if it appears as a whole word.
    fn eat_word(&mut self, kw: &str) -> bool {
        self.skip_ws();
        let k: Vec<char> = kw.chars().collect();
        let end = self.pos + k.len();
        if end > self.src.len() || self.src[self.pos..end] != k[..] {
            return false;
        }
        if self.src.get(end).is_some_and(|c| c.is_alphanumeric() || *c == '_') {
            return false;
        }
        self.pos = end;
        true
    }

    fn at_digit(&mut self) -> bool {
        self.peek().is_some_and(|c| c.is_ascii_digit())
    }

    fn uint(&mut self) -> Result<u64, CliError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an integer");
        }
        let s: String = self.src[start..self.pos].iter().collect();
        s.parse().map_err(|_| CliError::Syntax { pos: start, msg: "integer too large".into() })
    }

    fn int(&mut self) -> Result<i64, CliError> {
        let neg = self.eat('-');
        let v = self.uint()? as i64;
        Ok(if neg { -v } else { v })
    }

    pub fn finish(&mut self) -> Result<(), CliError> {
        if self.peek().is_some() {
            return self.err("unexpected trailing input");
        }
        Ok(())
    }

    // -- cyclotomic expressions

    pub fn cyc(&mut self) -> Result<CycNum, CliError> {
        let mut acc = self.cyc_term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.cyc_term()?;
            } else if self.eat('-') {
                acc = &acc - &self.cyc_term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn cyc_term(&mut self) -> Result<CycNum, CliError> {
        let mut acc = self.cyc_unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.cyc_unary()?;
            } else if self.eat('/') {
                let at = self.pos;
                let d = self.cyc_unary()?;
                acc = acc.div(&d).map_err(|e| CliError::Syntax { pos: at, msg: e.to_string() })?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn cyc_unary(&mut self) -> Result<CycNum, CliError> {
        if self.eat('-') {
            return Ok(-self.cyc_unary()?);
        }
        let base = self.cyc_atom()?;
        if self.eat('^') {
            let at = self.pos;
            let e = self.cyc_unary()?;
            let Some(k) = e.as_integer() else {
                return Err(CliError::Syntax { pos: at, msg: "exponent must be an integer".into() });
            };
            return base.pow(k).map_err(|e| CliError::Syntax { pos: at, msg: e.to_string() });
        }
        Ok(base)
    }

    fn cyc_atom(&mut self) -> Result<CycNum, CliError> {
        if self.eat('(') {
            let v = self.cyc()?;
            self.expect(')')?;
            return Ok(v);
        }
        if self.eat_word("z") {
            return Ok(CycNum::root_of_unity(self.n, 1));
        }
        if self.at_digit() {
            let v = self.uint()?;
            let v = i64::try_from(v).map_err(|_| CliError::Syntax { pos: self.pos, msg: "integer too large".into() })?;
            return Ok(CycNum::from_int(self.n, v));
        }
        self.err("expected a number, 'z' or '('")
    }

    // -- characters and labels

    pub fn character(&mut self) -> Result<Character, CliError> {
        let p = self.params()?;
        if self.eat_word("eps") {
            return Ok(p.eps());
        }
        if self.eat_word("chi") {
            return Ok(p.chi.clone());
        }
        if !self.eat_word("chr") {
            return self.err("expected 'eps', 'chi' or 'chr(...)'");
        }
        self.expect('(')?;
        let mut free = Vec::new();
        let mut tor = Vec::new();
        loop {
            if self.eat(')') {
                break;
            }
            if self.eat_word("free") {
                self.expect('=')?;
                self.expect('[')?;
                if !self.eat(']') {
                    loop {
                        free.push(self.cyc()?);
                        if self.eat(']') {
                            break;
                        }
                        self.expect(',')?;
                    }
                }
            } else if self.eat_word("tor") {
                self.expect('=')?;
                self.expect('[')?;
                if !self.eat(']') {
                    loop {
                        tor.push(self.int()?);
                        if self.eat(']') {
                            break;
                        }
                        self.expect(',')?;
                    }
                }
            } else {
                return self.err("expected 'free=[...]' or 'tor=[...]'");
            }
            self.eat(',');
        }
        Character::new(&p.group, p.n, free, tor).map_err(CliError::Engine)
    }

    fn char_power(&mut self) -> Result<Character, CliError> {
        let c = self.character()?;
        if self.eat('^') {
            let k = self.int()?;
            return Ok(c.pow(k));
        }
        Ok(c)
    }

    fn at_label(&mut self) -> bool {
        self.skip_ws();
        matches!(self.src.get(self.pos), Some('V' | 'W'))
            && self.src.get(self.pos + 1).is_some_and(|c| c.is_ascii_digit())
    }

    pub fn label(&mut self) -> Result<Label, CliError> {
        let p = self.params()?;
        self.skip_ws();
        let kind = self.src.get(self.pos).copied();
        if !matches!(kind, Some('V') | Some('W')) {
            return self.err("expected 'V' or 'W'");
        }
        self.pos += 1;
        let t = self.uint()? as usize;
        if t == 0 {
            return self.err("module length must be positive");
        }
        self.expect('(')?;
        let c = self.character()?;
        let l = match kind {
            Some('V') => Label::nil(t, c),
            Some('W') => {
                if p.sprime.is_none() {
                    return Err(CliError::Engine(hopfore::Error::UnsupportedCase(
                        "W-modules exist only when |chi| < infinity".into(),
                    )));
                }
                self.expect(';')?;
                if !self.eat_word("eta") {
                    return self.err("expected 'eta='");
                }
                self.expect('=')?;
                let eta = self.cyc()?;
                Label::NonNil(NonNilLabel::new(t, &c, eta, p).map_err(CliError::Engine)?)
            }
            _ => unreachable!(),
        };
        self.expect(')')?;
        Ok(l)
    }

    pub fn module(&mut self) -> Result<Decomposition, CliError> {
        let mut d = Decomposition::new();
        loop {
            let k = if self.at_digit() {
                let k = self.uint()?;
                self.expect('*')?;
                k
            } else {
                1
            };
            let l = self.label()?;
            d.add_label(l, k);
            if !self.eat('+') {
                break;
            }
        }
        Ok(d)
    }

    // -- ring expressions

    pub fn ring(&mut self) -> Result<Expr, CliError> {
        let mut acc = if self.eat('-') { self.product()?.scaled(-1) } else { self.product()? };
        loop {
            if self.eat('+') {
                acc = acc.plus(self.product()?);
            } else if self.eat('-') {
                acc = acc.plus(self.product()?.scaled(-1));
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<Expr, CliError> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            acc = acc.times(&self.factor()?);
        }
        Ok(acc)
    }

    fn power_suffix(&mut self) -> Result<u32, CliError> {
        if self.eat('^') {
            Ok(self.uint()? as u32)
        } else {
            Ok(1)
        }
    }

    fn factor(&mut self) -> Result<Expr, CliError> {
        let p = self.params()?;
        if self.at_digit() {
            let k = self.uint()? as i64;
            return Ok(Expr::word(Vec::new()).scaled(k));
        }
        if self.eat('(') {
            let e = self.ring()?;
            self.expect(')')?;
            let k = self.power_suffix()?;
            return Ok(e.power(k));
        }
        if self.at_label() {
            return Ok(Expr::label(self.label()?));
        }
        if self.eat_word("y") {
            let k = self.power_suffix()?;
            return Ok(Expr::word(vec![Factor::Y; k as usize]));
        }
        if self.eat_word("z") {
            let k = self.power_suffix()?;
            return Ok(Expr::word(vec![Factor::Z; k as usize]));
        }
        self.skip_ws();
        if self.src.get(self.pos) == Some(&'x') && self.src.get(self.pos + 1) == Some(&'[') {
            self.pos += 1;
            self.expect('[')?;
            let at = self.pos;
            let root = self.cyc()?;
            self.expect(']')?;
            let x = XGen::new(root, p).map_err(|e| CliError::Syntax { pos: at, msg: e.to_string() })?;
            return Ok(Expr::word(vec![Factor::X(x)]));
        }
        let c = self.char_power()?;
        Ok(Expr::word(vec![Factor::Char(c)]))
    }
}

pub fn parse_cyc(text: &str, n: u32) -> Result<CycNum, CliError> {
    let mut ps = Parser::numbers(text, n);
    let v = ps.cyc()?;
    ps.finish()?;
    Ok(v)
}

pub fn parse_character(text: &str, p: &HopfParams) -> Result<Character, CliError> {
    let mut ps = Parser::new(text, p);
    let v = ps.character()?;
    ps.finish()?;
    Ok(v)
}

pub fn parse_module_expr(text: &str, p: &HopfParams) -> Result<Decomposition, CliError> {
    let mut ps = Parser::new(text, p);
    let v = ps.module()?;
    ps.finish()?;
    Ok(v)
}

pub fn parse_ring_expr(text: &str, p: &HopfParams) -> Result<Expr, CliError> {
    let mut ps = Parser::new(text, p);
    let v = ps.ring()?;
    ps.finish()?;
    Ok(v)
}
