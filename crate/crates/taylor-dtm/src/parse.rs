//! Text format for ODE problems.
//!
//! ```text
//! problem   := stmt (';' stmt)*
//! stmt      := equation | condition | constdef
//! equation  := IDENT PRIMES '=' expr          (PRIMES = one or more ')
//! condition := IDENT PRIMES? '(' NUMBER ')' '=' NUMBER
//! constdef  := IDENT '=' NUMBER
//! expr      := term (('+'|'-') term)*
//! term      := factor (('*'|'/') factor)*
//! factor    := atom ('^' NUMBER)?
//! atom      := NUMBER | IDENT | 't' | '(' expr ')' | FUNC '(' expr ')' | '-' factor
//! FUNC      := 'exp' | 'log' | 'sin' | 'cos'
//! ```
//!
//! Precedence is `^` > unary `-` > `*` `/` > `+` `-`. Power exponents are
//! numeric literals. `t` is the reserved time variable. Named constants
//! (`lambda = 0.5`) are inlined at parse time. NUMBERs in conditions,
//! constant definitions and exponents accept an optional leading `-`.

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::problem::{Condition, Equation, OdeProblem};

const FUNCS: [&str; 4] = ["exp", "log", "sin", "cos"];

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(f64),
    Primes(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Semi,
    Assign,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn syntax(line: usize, col: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        col,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let mut line = 1;
    let mut col = 1;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tl, tc) = (line, col);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars);
            continue;
        }
        let tok = match c {
            '+' => {
                bump(&mut chars);
                Tok::Plus
            }
            '-' => {
                bump(&mut chars);
                Tok::Minus
            }
            '*' => {
                bump(&mut chars);
                Tok::Star
            }
            '/' => {
                bump(&mut chars);
                Tok::Slash
            }
            '^' => {
                bump(&mut chars);
                Tok::Caret
            }
            '(' => {
                bump(&mut chars);
                Tok::LParen
            }
            ')' => {
                bump(&mut chars);
                Tok::RParen
            }
            ';' => {
                bump(&mut chars);
                Tok::Semi
            }
            '=' => {
                bump(&mut chars);
                Tok::Assign
            }
            '\'' => {
                let mut n = 0;
                while chars.peek() == Some(&'\'') {
                    bump(&mut chars);
                    n += 1;
                }
                Tok::Primes(n)
            }
            _ if c.is_ascii_digit() => {
                let mut s = String::new();
                while chars.peek().is_some_and(|d| d.is_ascii_digit()) {
                    s.push(bump(&mut chars));
                }
                if chars.peek() == Some(&'.') {
                    s.push(bump(&mut chars));
                    while chars.peek().is_some_and(|d| d.is_ascii_digit()) {
                        s.push(bump(&mut chars));
                    }
                }
                if chars.peek().is_some_and(|&e| e == 'e' || e == 'E') {
                    // Exponent only if followed by digits (or sign+digits);
                    // otherwise the 'e' starts an identifier like 'exp'.
                    let mut probe = chars.clone();
                    probe.next();
                    let mut exp = String::new();
                    if probe.peek().is_some_and(|&s| s == '+' || s == '-') {
                        exp.push(*probe.peek().unwrap());
                        probe.next();
                    }
                    if probe.peek().is_some_and(|d| d.is_ascii_digit()) {
                        s.push(bump(&mut chars)); // e
                        if !exp.is_empty() {
                            s.push(bump(&mut chars)); // sign
                        }
                        while chars.peek().is_some_and(|d| d.is_ascii_digit()) {
                            s.push(bump(&mut chars));
                        }
                    }
                }
                let value: f64 = s
                    .parse()
                    .map_err(|_| syntax(tl, tc, format!("invalid number '{s}'")))?;
                Tok::Number(value)
            }
            _ if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while chars
                    .peek()
                    .is_some_and(|d| d.is_ascii_alphanumeric() || *d == '_')
                {
                    s.push(bump(&mut chars));
                }
                Tok::Ident(s)
            }
            other => return Err(syntax(tl, tc, format!("unexpected character '{other}'"))),
        };
        tokens.push(Token {
            tok,
            line: tl,
            col: tc,
        });
    }
    Ok(tokens)
}

struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
    end_line: usize,
    end_col: usize,
}

impl<'a> Parser<'a> {
    fn new(toks: &'a [Token], end_line: usize, end_col: usize) -> Self {
        Parser {
            toks,
            pos: 0,
            end_line,
            end_col,
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek_at(&self, ahead: usize) -> Option<&Tok> {
        self.toks.get(self.pos + ahead).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map(|t| (t.line, t.col))
            .unwrap_or((self.end_line, self.end_col))
    }

    fn next(&mut self) -> Option<&'a Token> {
        let t = self.toks.get(self.pos);
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: &Tok, what: &str) -> Result<&'a Token> {
        let (line, col) = self.here();
        match self.next() {
            Some(t) if &t.tok == want => Ok(t),
            Some(t) => Err(syntax(
                t.line,
                t.col,
                format!("expected {what}, found {}", describe(&t.tok)),
            )),
            None => Err(syntax(
                line,
                col,
                format!("expected {what}, found end of statement"),
            )),
        }
    }

    fn signed_number(&mut self, what: &str) -> Result<f64> {
        let mut sign = 1.0;
        if self.peek() == Some(&Tok::Minus) {
            self.next();
            sign = -1.0;
        }
        let (line, col) = self.here();
        match self.next() {
            Some(Token {
                tok: Tok::Number(v),
                ..
            }) => Ok(sign * v),
            Some(t) => Err(syntax(
                t.line,
                t.col,
                format!("expected {what}, found {}", describe(&t.tok)),
            )),
            None => Err(syntax(line, col, format!("expected {what}"))),
        }
    }

    fn parse_expr(&mut self) -> Result<Expr> {
        let mut lhs = self.parse_term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.next();
                    let rhs = self.parse_term()?;
                    lhs = Expr::Add(Box::new(lhs), Box::new(rhs));
                }
                Some(Tok::Minus) => {
                    self.next();
                    let rhs = self.parse_term()?;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn parse_term(&mut self) -> Result<Expr> {
        let mut lhs = self.parse_factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.next();
                    let rhs = self.parse_factor()?;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
                }
                Some(Tok::Slash) => {
                    self.next();
                    let rhs = self.parse_factor()?;
                    lhs = Expr::Div(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn parse_factor(&mut self) -> Result<Expr> {
        if self.peek() == Some(&Tok::Minus) {
            self.next();
            let inner = self.parse_factor()?;
            // Fold literal negation so inlined negative constants
            // round-trip through the printer.
            if let Expr::Const(c) = inner {
                return Ok(Expr::Const(-c));
            }
            return Ok(Expr::Neg(Box::new(inner)));
        }
        let atom = self.parse_atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.next();
            let e = self.signed_number("numeric exponent after '^'")?;
            return Ok(Expr::Pow(Box::new(atom), e));
        }
        Ok(atom)
    }

    fn parse_atom(&mut self) -> Result<Expr> {
        let (line, col) = self.here();
        match self.next() {
            Some(Token {
                tok: Tok::Number(v),
                ..
            }) => Ok(Expr::Const(*v)),
            Some(Token {
                tok: Tok::Ident(name),
                line,
                col,
            }) => {
                if name == "t" {
                    return Ok(Expr::Time);
                }
                if FUNCS.contains(&name.as_str()) {
                    self.expect(&Tok::LParen, &format!("'(' after '{name}'"))?;
                    let arg = Box::new(self.parse_expr()?);
                    self.expect(&Tok::RParen, "')'")?;
                    return Ok(match name.as_str() {
                        "exp" => Expr::Exp(arg),
                        "log" => Expr::Log(arg),
                        "sin" => Expr::Sin(arg),
                        _ => Expr::Cos(arg),
                    });
                }
                if self.peek() == Some(&Tok::LParen) {
                    return Err(syntax(
                        *line,
                        *col,
                        format!("unknown function '{name}' (only exp, log, sin, cos)"),
                    ));
                }
                Ok(Expr::Var(name.clone()))
            }
            Some(Token {
                tok: Tok::LParen, ..
            }) => {
                let inner = self.parse_expr()?;
                self.expect(&Tok::RParen, "')'")?;
                Ok(inner)
            }
            Some(t) => Err(syntax(
                t.line,
                t.col,
                format!("expected a value, found {}", describe(&t.tok)),
            )),
            None => Err(syntax(
                line,
                col,
                "expected a value, found end of statement",
            )),
        }
    }

    fn finished(&self) -> Result<()> {
        if let Some(t) = self.toks.get(self.pos) {
            return Err(syntax(
                t.line,
                t.col,
                format!("unexpected {} after statement", describe(&t.tok)),
            ));
        }
        Ok(())
    }
}

fn describe(tok: &Tok) -> String {
    match tok {
        Tok::Ident(s) => format!("identifier '{s}'"),
        Tok::Number(v) => format!("number '{v}'"),
        Tok::Primes(n) => format!("{n} prime(s)"),
        Tok::Plus => "'+'".into(),
        Tok::Minus => "'-'".into(),
        Tok::Star => "'*'".into(),
        Tok::Slash => "'/'".into(),
        Tok::Caret => "'^'".into(),
        Tok::LParen => "'('".into(),
        Tok::RParen => "')'".into(),
        Tok::Semi => "';'".into(),
        Tok::Assign => "'='".into(),
    }
}

enum RawStmt {
    Equation {
        var: String,
        order: usize,
        rhs: Expr,
        line: usize,
        col: usize,
    },
    Condition(Condition, usize, usize),
    ConstDef {
        name: String,
        value: f64,
        line: usize,
        col: usize,
    },
}

fn parse_stmt(toks: &[Token], end: (usize, usize)) -> Result<RawStmt> {
    let mut p = Parser::new(toks, end.0, end.1);
    let (line, col) = p.here();
    let head = match p.next() {
        Some(Token {
            tok: Tok::Ident(name),
            line,
            col,
        }) => (name.clone(), *line, *col),
        Some(t) => {
            return Err(syntax(
                t.line,
                t.col,
                format!(
                    "statement must start with a name, found {}",
                    describe(&t.tok)
                ),
            ))
        }
        None => return Err(syntax(line, col, "empty statement")),
    };
    let (name, hline, hcol) = head;

    let primes = if let Some(Tok::Primes(n)) = p.peek() {
        let n = *n;
        p.next();
        n
    } else {
        0
    };

    match p.peek() {
        Some(Tok::LParen) => {
            // condition: name primes? '(' NUMBER ')' '=' NUMBER
            p.next();
            let time = p.signed_number("a numeric time")?;
            p.expect(&Tok::RParen, "')'")?;
            p.expect(&Tok::Assign, "'='")?;
            let value = p.signed_number("a numeric value")?;
            p.finished()?;
            Ok(RawStmt::Condition(
                Condition {
                    var: name,
                    deriv: primes,
                    time,
                    value,
                },
                hline,
                hcol,
            ))
        }
        Some(Tok::Assign) => {
            p.next();
            if primes == 0 {
                // constdef when the right side is a bare signed number,
                // otherwise an order-0 equation (rejected at normalize).
                if matches!(p.peek(), Some(Tok::Number(_))) && p.peek_at(1).is_none() {
                    let value = p.signed_number("a number")?;
                    return Ok(RawStmt::ConstDef {
                        name,
                        value,
                        line: hline,
                        col: hcol,
                    });
                }
                if p.peek() == Some(&Tok::Minus)
                    && matches!(p.peek_at(1), Some(Tok::Number(_)))
                    && p.peek_at(2).is_none()
                {
                    let value = p.signed_number("a number")?;
                    return Ok(RawStmt::ConstDef {
                        name,
                        value,
                        line: hline,
                        col: hcol,
                    });
                }
            }
            let rhs = p.parse_expr()?;
            p.finished()?;
            Ok(RawStmt::Equation {
                var: name,
                order: primes,
                rhs,
                line: hline,
                col: hcol,
            })
        }
        Some(other) => {
            let (l, c) = p.here();
            let other = describe(other);
            Err(syntax(
                l,
                c,
                format!("expected '=', '(' or primes, found {other}"),
            ))
        }
        None => Err(syntax(
            end.0,
            end.1,
            "incomplete statement (expected '=', '(' or primes)",
        )),
    }
}

/// Substitutes named constants and validates variable references.
fn resolve(expr: &Expr, consts: &[(String, f64)], vars: &[String]) -> Result<Expr> {
    Ok(match expr {
        Expr::Const(_) | Expr::Time => expr.clone(),
        Expr::Var(name) => {
            if let Some((_, v)) = consts.iter().find(|(n, _)| n == name) {
                Expr::Const(*v)
            } else if vars.contains(name) {
                Expr::Var(name.clone())
            } else {
                return Err(Error::UndeclaredVariable(name.clone()));
            }
        }
        Expr::Neg(a) => match resolve(a, consts, vars)? {
            Expr::Const(c) => Expr::Const(-c),
            inner => Expr::Neg(Box::new(inner)),
        },
        Expr::Add(a, b) => Expr::Add(
            Box::new(resolve(a, consts, vars)?),
            Box::new(resolve(b, consts, vars)?),
        ),
        Expr::Sub(a, b) => Expr::Sub(
            Box::new(resolve(a, consts, vars)?),
            Box::new(resolve(b, consts, vars)?),
        ),
        Expr::Mul(a, b) => Expr::Mul(
            Box::new(resolve(a, consts, vars)?),
            Box::new(resolve(b, consts, vars)?),
        ),
        Expr::Div(a, b) => Expr::Div(
            Box::new(resolve(a, consts, vars)?),
            Box::new(resolve(b, consts, vars)?),
        ),
        Expr::Pow(a, e) => Expr::Pow(Box::new(resolve(a, consts, vars)?), *e),
        Expr::Exp(a) => Expr::Exp(Box::new(resolve(a, consts, vars)?)),
        Expr::Log(a) => Expr::Log(Box::new(resolve(a, consts, vars)?)),
        Expr::Sin(a) => Expr::Sin(Box::new(resolve(a, consts, vars)?)),
        Expr::Cos(a) => Expr::Cos(Box::new(resolve(a, consts, vars)?)),
    })
}

/// Parses problem text into a (raw, not yet normalized) [`OdeProblem`].
///
/// Higher-order equations are kept as written; run
/// [`OdeProblem::normalize`] before solving. Named constants are inlined,
/// variable references validated, duplicate definitions rejected.
pub fn parse_problem(text: &str) -> Result<OdeProblem> {
    let tokens = lex(text)?;

    let mut stmts: Vec<Vec<Token>> = Vec::new();
    let mut group = Vec::new();
    for t in tokens {
        if t.tok == Tok::Semi {
            if !group.is_empty() {
                stmts.push(std::mem::take(&mut group));
            }
        } else {
            group.push(t);
        }
    }
    if !group.is_empty() {
        stmts.push(group);
    }

    let mut equations: Vec<Equation> = Vec::new();
    let mut conditions: Vec<(Condition, usize, usize)> = Vec::new();
    let mut consts: Vec<(String, f64)> = Vec::new();

    for group in &stmts {
        let end = group.last().map(|t| (t.line, t.col + 1)).unwrap_or((1, 1));
        match parse_stmt(group, end)? {
            RawStmt::Equation {
                var,
                order,
                rhs,
                line,
                col,
            } => {
                if var == "t" || FUNCS.contains(&var.as_str()) {
                    return Err(syntax(line, col, format!("'{var}' is a reserved name")));
                }
                if equations.iter().any(|e| e.var == var) {
                    return Err(Error::OverdeterminedSystem(format!(
                        "'{var}' has more than one equation"
                    )));
                }
                equations.push(Equation { var, order, rhs });
            }
            RawStmt::Condition(c, line, col) => {
                if c.var == "t" || FUNCS.contains(&c.var.as_str()) {
                    return Err(syntax(line, col, format!("'{}' is a reserved name", c.var)));
                }
                conditions.push((c, line, col));
            }
            RawStmt::ConstDef {
                name,
                value,
                line,
                col,
            } => {
                if name == "t" || FUNCS.contains(&name.as_str()) {
                    return Err(syntax(line, col, format!("'{name}' is a reserved name")));
                }
                if consts.iter().any(|(n, _)| n == &name) {
                    return Err(Error::OverdeterminedSystem(format!(
                        "constant '{name}' defined twice"
                    )));
                }
                consts.push((name, value));
            }
        }
    }

    if equations.is_empty() {
        return Err(syntax(1, 1, "problem contains no differential equation"));
    }
    let vars: Vec<String> = equations.iter().map(|e| e.var.clone()).collect();
    for (name, _) in &consts {
        if vars.contains(name) {
            return Err(Error::OverdeterminedSystem(format!(
                "'{name}' is both a constant and a state variable"
            )));
        }
    }

    for eq in &mut equations {
        eq.rhs = resolve(&eq.rhs, &consts, &vars)?;
    }

    let mut seen: Vec<(String, usize, f64)> = Vec::new();
    for (c, _, _) in &conditions {
        if !vars.contains(&c.var) {
            return Err(Error::UndeclaredVariable(c.var.clone()));
        }
        if seen
            .iter()
            .any(|(v, d, t)| v == &c.var && *d == c.deriv && *t == c.time)
        {
            return Err(Error::OverdeterminedSystem(format!(
                "duplicate condition for {}{}({})",
                c.var,
                "'".repeat(c.deriv),
                c.time
            )));
        }
        seen.push((c.var.clone(), c.deriv, c.time));
    }
    if conditions.is_empty() {
        return Err(Error::MissingInitialCondition(
            "problem declares no conditions".to_string(),
        ));
    }

    let t0 = conditions
        .iter()
        .map(|(c, _, _)| c.time)
        .fold(f64::INFINITY, f64::min);
    let conditions = conditions.into_iter().map(|(c, _, _)| c).collect();
    Ok(OdeProblem::from_parts(equations, conditions, t0))
}

impl std::str::FromStr for OdeProblem {
    type Err = Error;

    fn from_str(s: &str) -> Result<OdeProblem> {
        parse_problem(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn var(name: &str) -> Expr {
        Expr::Var(name.to_string())
    }

    #[test]
    fn parses_scaled_linear_equation() {
        let p = parse_problem("x' = lambda*x; x(0)=1; lambda=0.5").unwrap();
        assert_eq!(p.variables(), vec!["x"]);
        assert_eq!(
            p.equations()[0].rhs,
            Expr::Mul(Box::new(Expr::Const(0.5)), Box::new(var("x")))
        );
        assert_eq!(p.conditions().len(), 1);
        assert_eq!(p.t0(), 0.0);
    }

    #[test]
    fn parses_riccati() {
        let p = parse_problem("x' = 1 + x^2; x(0)=0").unwrap();
        assert_eq!(
            p.equations()[0].rhs,
            Expr::Add(
                Box::new(Expr::Const(1.0)),
                Box::new(Expr::Pow(Box::new(var("x")), 2.0))
            )
        );
    }

    #[test]
    fn underdetermined_parse_fails_only_at_normalize() {
        let p = parse_problem("x' = y; y'' = x; x(0)=1; y(0)=0").unwrap();
        assert_eq!(p.total_order(), 3);
        assert_eq!(
            p.normalize(),
            Err(Error::ConditionCountMismatch {
                required: 3,
                given: 2
            })
        );
    }

    #[test]
    fn precedence_and_unary_minus() {
        let p = parse_problem("x' = -x^2 + 2*x/3 - 1; x(0)=1").unwrap();
        let expected = Expr::Sub(
            Box::new(Expr::Add(
                Box::new(Expr::Neg(Box::new(Expr::Pow(Box::new(var("x")), 2.0)))),
                Box::new(Expr::Div(
                    Box::new(Expr::Mul(Box::new(Expr::Const(2.0)), Box::new(var("x")))),
                    Box::new(Expr::Const(3.0)),
                )),
            )),
            Box::new(Expr::Const(1.0)),
        );
        assert_eq!(p.equations()[0].rhs, expected);
    }

    #[test]
    fn functions_and_time_variable() {
        let p = parse_problem("x' = exp(x)*sin(t); x(0)=0").unwrap();
        assert_eq!(
            p.equations()[0].rhs,
            Expr::Mul(
                Box::new(Expr::Exp(Box::new(var("x")))),
                Box::new(Expr::Sin(Box::new(Expr::Time)))
            )
        );
    }

    #[test]
    fn syntax_error_carries_position() {
        let err = parse_problem("x' = 1 +\n* x; x(0)=0").unwrap_err();
        match err {
            Error::Syntax { line, col, .. } => {
                assert_eq!(line, 2);
                assert_eq!(col, 1);
            }
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn undeclared_variable_is_rejected() {
        assert_eq!(
            parse_problem("x' = z; x(0)=1"),
            Err(Error::UndeclaredVariable("z".into()))
        );
        assert_eq!(
            parse_problem("x' = x; q(0)=1; x(0)=1"),
            Err(Error::UndeclaredVariable("q".into()))
        );
    }

    #[test]
    fn duplicates_are_overdetermined() {
        assert!(matches!(
            parse_problem("x' = x; x' = 2*x; x(0)=1"),
            Err(Error::OverdeterminedSystem(_))
        ));
        assert!(matches!(
            parse_problem("x' = x; x(0)=1; x(0)=2"),
            Err(Error::OverdeterminedSystem(_))
        ));
        assert!(matches!(
            parse_problem("x' = a*x; a = 1; a = 2; x(0)=1"),
            Err(Error::OverdeterminedSystem(_))
        ));
    }

    #[test]
    fn no_conditions_is_missing_initial() {
        assert!(matches!(
            parse_problem("x' = x"),
            Err(Error::MissingInitialCondition(_))
        ));
    }

    #[test]
    fn reserved_names_rejected() {
        assert!(matches!(
            parse_problem("t' = t; t(0)=0"),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            parse_problem("sin = 3; x' = x*sin; x(0)=1"),
            Err(Error::Syntax { .. })
        ));
    }

    #[test]
    fn signed_numbers_in_conditions_and_exponents() {
        let p = parse_problem("x' = x^-2; x(0) = -1.5").unwrap();
        assert_eq!(p.equations()[0].rhs, Expr::Pow(Box::new(var("x")), -2.0));
        assert_eq!(p.conditions()[0].value, -1.5);
    }

    #[test]
    fn higher_order_condition_mapping() {
        let p = parse_problem("x'' = -x; x(0)=0; x'(0)=1")
            .unwrap()
            .normalize()
            .unwrap();
        assert_eq!(p.variables(), vec!["x", "x_d1"]);
        assert_eq!(p.initial(), &[Some(0.0), Some(1.0)]);
    }

    #[test]
    fn scientific_notation_and_exp_disambiguation() {
        let p = parse_problem("x' = 1e-2*x + exp(x); x(0)=2e3").unwrap();
        assert_eq!(
            p.equations()[0].rhs,
            Expr::Add(
                Box::new(Expr::Mul(Box::new(Expr::Const(0.01)), Box::new(var("x")))),
                Box::new(Expr::Exp(Box::new(var("x"))))
            )
        );
        assert_eq!(p.conditions()[0].value, 2000.0);
    }

    #[test]
    fn round_trip_through_canonical_text() {
        let sources = [
            "x' = lambda*x; x(0)=1; lambda=0.5",
            "x' = 1 + x^2; x(0)=0",
            "x'' = -x; x(0)=0; x'(0)=1",
            "x' = exp(x)*sin(t); x(0)=0.25",
            "u' = v; v' = -u/(1 + t^2); u(0)=1; v(0)=-0.5",
        ];
        for src in sources {
            let p = parse_problem(src).unwrap();
            let q = parse_problem(&p.to_text()).unwrap();
            assert_eq!(p, q, "round trip failed for {src}");
        }
    }
}
