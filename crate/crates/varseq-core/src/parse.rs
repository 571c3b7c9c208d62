//! Recursive-descent parsers for the expression, form and field grammars.
//!
//! Expressions: base variables by name, fiber variables `u`, `u[1]`,
//! `u[1,2]` with 1-based base positions, integers, rationals `p/q`,
//! operators `+ - * ^`, parentheses. Forms: covectors `dx1`, `w1[...]`,
//! `dU1[...]`, wedge `^`, sums, coefficient juxtaposition. Whitespace is
//! insignificant.

use crate::context::Ctx;
use crate::error::{Error, Result};
use crate::fields::ProjectableField;
use crate::form::{DiffForm, RawCov};
use crate::multiindex::MultiIndex;
use crate::section::Section;
use crate::Expr;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(i64),
    Ident(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Comma,
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

fn lex(s: &str) -> Result<Vec<(Tok, usize, usize)>> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = s.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l, co) = (line, col);
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            '(' | ')' | '[' | ']' | '+' | '-' | '*' | '/' | '^' | ',' => {
                chars.next();
                col += 1;
                let t = match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '/' => Tok::Slash,
                    '^' => Tok::Caret,
                    _ => Tok::Comma,
                };
                out.push((t, l, co));
            }
            c if c.is_ascii_digit() => {
                let mut v: i64 = 0;
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        v = v
                            .checked_mul(10)
                            .and_then(|v| v.checked_add((d as u8 - b'0') as i64))
                            .ok_or(Error::Parse {
                                line: l,
                                col: co,
                                msg: "integer literal too large".into(),
                            })?;
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                out.push((Tok::Num(v), l, co));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut name = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        name.push(d);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                out.push((Tok::Ident(name), l, co));
            }
            other => {
                return Err(Error::Parse {
                    line: l,
                    col: co,
                    msg: format!("unexpected character `{other}`"),
                });
            }
        }
    }
    Ok(out)
}

impl Lexer {
    fn new(s: &str) -> Result<Self> {
        Ok(Lexer {
            toks: lex(s)?,
            pos: 0,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _, _)| t)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.pos + 1).map(|(t, _, _)| t)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos.min(self.toks.len().saturating_sub(1)))
            .map(|(_, l, c)| (*l, *c))
            .unwrap_or((1, 1))
    }

    fn error(&self, msg: impl Into<String>) -> Error {
        let (line, col) = self.here();
        Error::Parse {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        match self.next() {
            Some(found) if found == t => Ok(()),
            _ => Err(self.error(format!("expected {t:?}"))),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }
}

/// Classified covector token from the form grammar.
enum CovTok {
    Raw(RawCov),
}

fn classify_covector(name: &str) -> Option<(char, usize)> {
    for (prefix, tag) in [("dx", 'x'), ("dU", 'd'), ("w", 'w')] {
        if let Some(rest) = name.strip_prefix(prefix) {
            if !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()) {
                return Some((tag, rest.parse::<usize>().ok()?));
            }
        }
    }
    None
}

struct Parser<'a> {
    lx: Lexer,
    ctx: &'a Ctx,
}

impl<'a> Parser<'a> {
    fn parse_uint_list(&mut self) -> Result<Vec<usize>> {
        self.lx.expect(Tok::LBracket)?;
        let mut out = Vec::new();
        if self.lx.peek() == Some(&Tok::RBracket) {
            self.lx.next();
            return Ok(out);
        }
        loop {
            match self.lx.next() {
                Some(Tok::Num(v)) if v >= 1 => out.push(v as usize),
                _ => return Err(self.lx.error("expected a 1-based base position")),
            }
            match self.lx.next() {
                Some(Tok::Comma) => continue,
                Some(Tok::RBracket) => break,
                _ => return Err(self.lx.error("expected `,` or `]`")),
            }
        }
        Ok(out)
    }

    fn index_from_positions(&mut self, entries: Vec<usize>) -> Result<MultiIndex> {
        let n = self.ctx.base_dim();
        for &e in &entries {
            if e > n {
                return Err(self.lx.error(format!(
                    "base position {e} out of range 1..{n}"
                )));
            }
        }
        Ok(MultiIndex::new(entries.into_iter().map(|e| e - 1).collect()))
    }

    fn parse_variable(&mut self, name: String) -> Result<Expr> {
        if let Some(i) = self.ctx.base_index(&name) {
            if self.lx.peek() == Some(&Tok::LBracket) {
                return Err(self.lx.error("base variables take no jet index"));
            }
            return Ok(Expr::base_var(i));
        }
        if let Some(a) = self.ctx.fiber_index(&name) {
            let index = if self.lx.peek() == Some(&Tok::LBracket) {
                let entries = self.parse_uint_list()?;
                self.index_from_positions(entries)?
            } else {
                MultiIndex::empty()
            };
            return Ok(Expr::fiber_var(a, index));
        }
        Err(self.lx.error(format!("variable not in context: {name}")))
    }

    fn parse_atom(&mut self) -> Result<Expr> {
        match self.lx.next() {
            Some(Tok::Num(v)) => Ok(Expr::int(v)),
            Some(Tok::Ident(name)) => self.parse_variable(name),
            Some(Tok::LParen) => {
                let e = self.parse_expr()?;
                self.lx.expect(Tok::RParen)?;
                Ok(e)
            }
            Some(Tok::Minus) => Ok(self.parse_factor()?.neg()),
            _ => Err(self.lx.error("expected a number, variable or `(`")),
        }
    }

    fn parse_factor(&mut self) -> Result<Expr> {
        let base = self.parse_atom()?;
        if self.lx.peek() == Some(&Tok::Caret) {
            self.lx.next();
            match self.lx.next() {
                Some(Tok::Num(v)) if v >= 0 => Ok(base.pow(v as u32)),
                _ => Err(self.lx.error("exponent must be a non-negative integer")),
            }
        } else {
            Ok(base)
        }
    }

    fn parse_term(&mut self) -> Result<Expr> {
        let mut acc = self.parse_factor()?;
        loop {
            match self.lx.peek() {
                Some(Tok::Star) => {
                    self.lx.next();
                    acc = acc.mul(&self.parse_factor()?);
                }
                Some(Tok::Slash) => {
                    self.lx.next();
                    let d = self.parse_factor()?;
                    acc = acc.div_constant(&d)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn parse_expr(&mut self) -> Result<Expr> {
        let mut acc = if self.lx.peek() == Some(&Tok::Minus) {
            self.lx.next();
            self.parse_term()?.neg()
        } else {
            self.parse_term()?
        };
        loop {
            match self.lx.peek() {
                Some(Tok::Plus) => {
                    self.lx.next();
                    acc = acc.add(&self.parse_term()?);
                }
                Some(Tok::Minus) => {
                    self.lx.next();
                    acc = acc.sub(&self.parse_term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn peek_covector(&self) -> bool {
        if let Some(Tok::Ident(name)) = self.lx.peek() {
            if let Some((tag, _)) = classify_covector(name) {
                // w/dU need a bracket to disambiguate from variables named w1
                if tag == 'x' {
                    return true;
                }
                return self.lx.peek2() == Some(&Tok::LBracket);
            }
        }
        false
    }

    fn parse_covector(&mut self) -> Result<CovTok> {
        let name = match self.lx.next() {
            Some(Tok::Ident(name)) => name,
            _ => return Err(self.lx.error("expected a covector")),
        };
        let (tag, num) = classify_covector(&name)
            .ok_or_else(|| self.lx.error(format!("unknown covector `{name}`")))?;
        match tag {
            'x' => {
                if num == 0 || num > self.ctx.base_dim() {
                    return Err(self.lx.error(format!(
                        "dx{num} out of range 1..{}",
                        self.ctx.base_dim()
                    )));
                }
                Ok(CovTok::Raw(RawCov::Dx(num - 1)))
            }
            tag => {
                if num == 0 || num > self.ctx.fiber_dim() {
                    return Err(self.lx.error(format!(
                        "fiber label {num} out of range 1..{}",
                        self.ctx.fiber_dim()
                    )));
                }
                let entries = self.parse_uint_list()?;
                let index = self.index_from_positions(entries)?;
                if tag == 'w' {
                    Ok(CovTok::Raw(RawCov::Contact(num - 1, index)))
                } else {
                    Ok(CovTok::Raw(RawCov::Dy(num - 1, index)))
                }
            }
        }
    }

    /// One additive form term: juxtaposed coefficient factors followed by a
    /// wedge chain of covectors (possibly empty for a 0-form term).
    fn parse_form_term(&mut self) -> Result<(Expr, Vec<RawCov>)> {
        let mut coeff = Expr::one();
        let mut covs: Vec<RawCov> = Vec::new();
        let mut saw_factor = false;
        loop {
            if self.peek_covector() {
                let CovTok::Raw(c) = self.parse_covector()?;
                covs.push(c);
                while self.lx.peek() == Some(&Tok::Caret) {
                    self.lx.next();
                    let CovTok::Raw(c) = self.parse_covector()?;
                    covs.push(c);
                }
                break;
            }
            match self.lx.peek() {
                Some(Tok::Plus) | Some(Tok::Minus) | None => break,
                Some(Tok::Star) => {
                    self.lx.next();
                }
                _ => {
                    let f = self.parse_factor()?;
                    // a factor may continue with * or / chains
                    coeff = coeff.mul(&f);
                    saw_factor = true;
                    while self.lx.peek() == Some(&Tok::Slash) {
                        self.lx.next();
                        let d = self.parse_factor()?;
                        coeff = coeff.div_constant(&d)?;
                    }
                }
            }
        }
        if covs.is_empty() && !saw_factor {
            return Err(self.lx.error("empty form term"));
        }
        Ok((coeff, covs))
    }

    fn parse_form(&mut self) -> Result<DiffForm> {
        let mut terms: Vec<(Expr, Vec<RawCov>, bool)> = Vec::new();
        let mut negative = false;
        if self.lx.peek() == Some(&Tok::Minus) {
            self.lx.next();
            negative = true;
        }
        loop {
            let (coeff, covs) = self.parse_form_term()?;
            terms.push((coeff, covs, negative));
            match self.lx.next() {
                Some(Tok::Plus) => negative = false,
                Some(Tok::Minus) => negative = true,
                None => break,
                _ => return Err(self.lx.error("expected `+`, `-` or end of form")),
            }
        }
        let degree = terms.first().map(|(_, c, _)| c.len()).unwrap_or(0);
        let mut order = 1usize;
        for (coeff, covs, _) in &terms {
            if covs.len() != degree {
                return Err(self.lx.error(format!(
                    "mixed degrees in one form: {} and {}",
                    degree,
                    covs.len()
                )));
            }
            order = order.max(coeff.effective_order());
            for c in covs {
                match c {
                    RawCov::Dx(_) => {}
                    RawCov::Contact(_, idx) => order = order.max(idx.len() + 1),
                    RawCov::Dy(_, idx) => order = order.max(idx.len()),
                }
            }
        }
        let ctx = self.ctx.clone();
        let mut out = DiffForm::zero(ctx, order, degree);
        for (coeff, covs, negative) in terms {
            let c = if negative { coeff.neg() } else { coeff };
            out.push_raw(&covs, c);
        }
        Ok(out)
    }
}

/// Parses an expression in jet coordinates against the chart.
pub fn parse_expr(ctx: &Ctx, s: &str) -> Result<Expr> {
    let mut p = Parser {
        lx: Lexer::new(s)?,
        ctx,
    };
    let e = p.parse_expr()?;
    if !p.lx.at_end() {
        return Err(p.lx.error("trailing input after expression"));
    }
    Ok(e)
}

/// Parses a differential form in the adapted cobasis grammar.
pub fn parse_form(ctx: &Ctx, s: &str) -> Result<DiffForm> {
    let mut p = Parser {
        lx: Lexer::new(s)?,
        ctx,
    };
    let f = p.parse_form()?;
    if !p.lx.at_end() {
        return Err(p.lx.error("trailing input after form"));
    }
    Ok(f)
}

/// Parses vector-field components `xi` (length n, base variables only) and
/// `Xi` (length m, base and order-0 fiber variables).
pub fn parse_field(ctx: &Ctx, xi: &[String], eta: &[String]) -> Result<ProjectableField> {
    let xi: Result<Vec<Expr>> = xi.iter().map(|s| parse_expr(ctx, s)).collect();
    let eta: Result<Vec<Expr>> = eta.iter().map(|s| parse_expr(ctx, s)).collect();
    ProjectableField::new(ctx.clone(), xi?, eta?)
}

/// Parses a section: one expression in base variables per fiber coordinate.
pub fn parse_section(ctx: &Ctx, comps: &[String]) -> Result<Section> {
    let comps: Result<Vec<Expr>> = comps.iter().map(|s| parse_expr(ctx, s)).collect();
    Section::new(ctx.clone(), comps?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::JetContext;
    use crate::text::{expr_to_text, form_to_text};

    #[test]
    fn parses_expressions() {
        let ctx = JetContext::simple(1, 1, 2);
        let e = parse_expr(&ctx, "(u + u[1])^2 - 1/2*x").unwrap();
        let u = Expr::fiber_var(0, MultiIndex::empty());
        let ux = Expr::fiber_var(0, MultiIndex::single(0));
        let expected = u
            .add(&ux)
            .pow(2)
            .sub(&Expr::ratio(1, 2).mul(&Expr::base_var(0)));
        assert_eq!(e, expected);
    }

    #[test]
    fn parses_symmetric_indices() {
        let ctx = JetContext::simple(2, 1, 2);
        let a = parse_expr(&ctx, "u[1,2]").unwrap();
        let b = parse_expr(&ctx, "u[2,1]").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_unknown_variables_and_bad_division() {
        let ctx = JetContext::simple(1, 1, 1);
        assert!(parse_expr(&ctx, "v + 1").is_err());
        assert!(parse_expr(&ctx, "1/u").is_err());
        assert!(parse_expr(&ctx, "u/2").is_ok());
    }

    #[test]
    fn parses_forms_with_juxtaposition_and_wedges() {
        let ctx = JetContext::simple(1, 1, 1);
        let f = parse_form(&ctx, "(1/2)*u[1]^2 dx1").unwrap();
        let expected = DiffForm::dx(ctx.clone(), 1, 0).scale(
            &Expr::fiber_var(0, MultiIndex::single(0))
                .pow(2)
                .div_constant(&Expr::int(2))
                .unwrap(),
        );
        assert!(f.equiv(&expected));

        let f = parse_form(&ctx, "u w1[]^dx1 - 2 dx1^w1[]").unwrap();
        assert_eq!(f.degree(), 2);
        assert!(parse_form(&ctx, "u dx1 - w1[]^dx1").is_err(), "mixed degrees");
        let g = parse_form(&ctx, "dU1[1]^dx1").unwrap();
        assert_eq!(g.degree(), 2);
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn round_trips_through_text() {
        let ctx = JetContext::simple(2, 2, 2);
        let texts = [
            "(1/3)*u1[1,2]^2 dx1^dx2",
            "(u2) w1[1]^dx2 + (x1) dx1^dx2",
            "(1 + u1*u2) w2[]^w1[2]",
        ];
        for t in texts {
            let f = parse_form(&ctx, t).unwrap();
            let rendered = form_to_text(&ctx, &f);
            let back = parse_form(&ctx, &rendered).unwrap();
            assert!(f.equiv(&back), "round trip failed for {t}: {rendered}");
        }
        let e = parse_expr(&ctx, "u1[1,1]*x2 - 5/7").unwrap();
        let back = parse_expr(&ctx, &expr_to_text(&ctx, &e)).unwrap();
        assert_eq!(e, back);
    }
}
