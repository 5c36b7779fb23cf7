//! Class expressions over `G(2, n)`.
//!
//! ```text
//! expr   := class | expr '*' expr | INT '*' expr
//! class  := ('c' INT | 'e' | 'p' INT | 'ctop') '(' bundle ')' | 'sigma' '(' INT [',' INT] ')'
//! bundle := 'S' | 'S*' | 'Sym' '(' INT ',' bundle ')'
//! ```

use std::fmt;

use num_bigint::BigInt;
use realgw_core::charclass::{Partition2, RootBundle, SchurClass};
use realgw_core::Rational;

/// Largest symmetric power accepted; `Sym^k` of a rank-`r` bundle has
/// `C(k + r - 1, r - 1)` roots.
pub const MAX_SYM: u32 = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// 0-based character offset.
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at column {}: {}", self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bundle {
    Taut,
    TautDual,
    Sym(u32, Box<Bundle>),
}

impl Bundle {
    pub fn roots(&self) -> RootBundle {
        match self {
            Bundle::Taut => RootBundle::taut(),
            Bundle::TautDual => RootBundle::taut_dual(),
            Bundle::Sym(k, b) => b.roots().sym(*k),
        }
    }

    pub fn rank(&self) -> u64 {
        match self {
            Bundle::Taut | Bundle::TautDual => 2,
            Bundle::Sym(k, b) => binomial(*k as u64 + b.rank() - 1, b.rank() - 1),
        }
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

impl fmt::Display for Bundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bundle::Taut => write!(f, "S"),
            Bundle::TautDual => write!(f, "S*"),
            Bundle::Sym(k, b) => write!(f, "Sym({k},{b})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Class {
    Chern(u32, Bundle),
    Euler(Bundle),
    Pontryagin(u32, Bundle),
    TopChern(Bundle),
    Sigma(u32, u32),
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Class::Chern(i, b) => write!(f, "c{i}({b})"),
            Class::Euler(b) => write!(f, "e({b})"),
            Class::Pontryagin(i, b) => write!(f, "p{i}({b})"),
            Class::TopChern(b) => write!(f, "ctop({b})"),
            Class::Sigma(a, 0) => write!(f, "sigma({a})"),
            Class::Sigma(a, b) => write!(f, "sigma({a},{b})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Leaf(Class),
    Scalar(BigInt, Box<Expr>),
    Product(Box<Expr>, Box<Expr>),
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Leaf(c) => write!(f, "{c}"),
            Expr::Scalar(k, e) => write!(f, "{k}*{e}"),
            Expr::Product(a, b) => write!(f, "{a}*{b}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassExpression {
    pub ambient_n: usize,
    pub root: Expr,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    LParen,
    RParen,
    Comma,
    Star,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::Int(k) => write!(f, "{k}"),
            Tok::LParen => write!(f, "'('"),
            Tok::RParen => write!(f, "')'"),
            Tok::Comma => write!(f, "','"),
            Tok::Star => write!(f, "'*'"),
        }
    }
}

fn lex(text: &str) -> Result<(Vec<(usize, Tok)>, usize), ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        match c {
            _ if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '(' => toks.push((i, Tok::LParen)),
            ')' => toks.push((i, Tok::RParen)),
            ',' => toks.push((i, Tok::Comma)),
            '*' => toks.push((i, Tok::Star)),
            _ if c.is_ascii_digit() => {
                while i + 1 < chars.len() && chars[i + 1].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..=i].iter().collect();
                toks.push((start, Tok::Int(s.parse().expect("digits"))));
            }
            _ if c.is_ascii_alphabetic() => {
                while i + 1 < chars.len() && chars[i + 1].is_ascii_alphabetic() {
                    i += 1;
                }
                toks.push((start, Tok::Ident(chars[start..=i].iter().collect())));
            }
            _ => {
                return Err(ParseError {
                    column: i,
                    message: format!("unexpected character '{c}'"),
                })
            }
        }
        i += 1;
    }
    Ok((toks, chars.len()))
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    n: usize,
}

impl Parser {
    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn error<T>(&self, column: usize, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            column,
            message: message.into(),
        })
    }

    fn unexpected<T>(&self, expected: &str) -> Result<T, ParseError> {
        match self.peek() {
            Some(t) => self.error(self.column(), format!("expected {expected}, found {t}")),
            None => self.error(self.end, format!("expected {expected}, found end of input")),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.unexpected(what)
        }
    }

    fn int(&mut self) -> Result<(usize, BigInt), ParseError> {
        match self.peek() {
            Some(Tok::Int(k)) => {
                let out = (self.column(), k.clone());
                self.pos += 1;
                Ok(out)
            }
            _ => self.unexpected("an integer"),
        }
    }

    fn small_int(&mut self) -> Result<(usize, u32), ParseError> {
        let (col, k) = self.int()?;
        match u32::try_from(&k) {
            Ok(v) => Ok((col, v)),
            Err(_) => self.error(col, format!("integer {k} out of range")),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            let rhs = self.factor()?;
            lhs = Expr::Product(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if let Some(Tok::Int(_)) = self.peek() {
            let (_, k) = self.int()?;
            self.expect(Tok::Star, "'*' after a scalar")?;
            let inner = self.factor()?;
            return Ok(Expr::Scalar(k, Box::new(inner)));
        }
        Ok(Expr::Leaf(self.class()?))
    }

    fn class(&mut self) -> Result<Class, ParseError> {
        let col = self.column();
        let name = match self.peek() {
            Some(Tok::Ident(s)) => s.clone(),
            _ => return self.unexpected("a class"),
        };
        self.pos += 1;
        match name.as_str() {
            "c" | "p" => {
                let (icol, i) = self.small_int()?;
                let b = self.bundle_arg()?;
                let rank = b.rank();
                if name == "c" {
                    if u64::from(i) > rank {
                        return self.error(icol, format!("c{i} out of range for {b} of rank {rank}"));
                    }
                    Ok(Class::Chern(i, b))
                } else {
                    if u64::from(i) > rank {
                        return self.error(icol, format!("p{i} out of range for {b} of complex rank {rank}"));
                    }
                    Ok(Class::Pontryagin(i, b))
                }
            }
            "e" => Ok(Class::Euler(self.bundle_arg()?)),
            "ctop" => Ok(Class::TopChern(self.bundle_arg()?)),
            "sigma" => {
                self.expect(Tok::LParen, "'('")?;
                let (acol, a) = self.small_int()?;
                let b = if self.peek() == Some(&Tok::Comma) {
                    self.pos += 1;
                    self.small_int()?.1
                } else {
                    0
                };
                self.expect(Tok::RParen, "')'")?;
                if b > a || a as usize > self.n - 2 {
                    return self.error(
                        acol,
                        format!("sigma({a},{b}) does not fit the 2x{} box of G(2,{})", self.n - 2, self.n),
                    );
                }
                Ok(Class::Sigma(a, b))
            }
            _ => self.error(col, format!("unknown class '{name}'")),
        }
    }

    fn bundle_arg(&mut self) -> Result<Bundle, ParseError> {
        self.expect(Tok::LParen, "'('")?;
        let b = self.bundle()?;
        self.expect(Tok::RParen, "')'")?;
        Ok(b)
    }

    fn bundle(&mut self) -> Result<Bundle, ParseError> {
        let col = self.column();
        let name = match self.peek() {
            Some(Tok::Ident(s)) => s.clone(),
            _ => return self.unexpected("a bundle"),
        };
        self.pos += 1;
        match name.as_str() {
            "S" => {
                if self.peek() == Some(&Tok::Star) {
                    self.pos += 1;
                    Ok(Bundle::TautDual)
                } else {
                    Ok(Bundle::Taut)
                }
            }
            "Sym" => {
                self.expect(Tok::LParen, "'('")?;
                let (kcol, k) = self.small_int()?;
                if k > MAX_SYM {
                    return self.error(kcol, format!("Sym power {k} exceeds {MAX_SYM}"));
                }
                self.expect(Tok::Comma, "','")?;
                let inner = self.bundle()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(Bundle::Sym(k, Box::new(inner)))
            }
            _ => self.error(col, format!("unknown bundle '{name}'")),
        }
    }
}

pub fn parse_class_expression(text: &str, ambient_n: usize) -> Result<ClassExpression, ParseError> {
    if ambient_n < 3 {
        return Err(ParseError {
            column: 0,
            message: format!("ambient G(2,{ambient_n}) needs n >= 3"),
        });
    }
    let (toks, end) = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end,
        n: ambient_n,
    };
    let root = p.expr()?;
    if p.pos < p.toks.len() {
        return p.unexpected("'*' or end of input");
    }
    Ok(ClassExpression { ambient_n, root })
}

fn eval_class(c: &Class, n: usize) -> realgw_core::Result<SchurClass> {
    match c {
        Class::Chern(i, b) => b.roots().chern(*i).to_schur(n),
        // The Euler class of the underlying oriented real bundle.
        Class::Euler(b) | Class::TopChern(b) => b.roots().top_chern().to_schur(n),
        Class::Pontryagin(i, b) => b.roots().pontryagin(*i).to_schur(n),
        Class::Sigma(a, b) => Ok(SchurClass::sigma(n, *a, *b)),
    }
}

fn eval_expr(e: &Expr, n: usize) -> realgw_core::Result<SchurClass> {
    match e {
        Expr::Leaf(c) => eval_class(c, n),
        Expr::Scalar(k, e) => Ok(eval_expr(e, n)?.scale(&Rational::from_integer(k.clone()))),
        Expr::Product(a, b) => eval_expr(a, n)?.mul(&eval_expr(b, n)?),
    }
}

impl ClassExpression {
    pub fn evaluate(&self) -> realgw_core::Result<SchurClass> {
        eval_expr(&self.root, self.ambient_n)
    }

    /// Number of class leaves.
    pub fn arity(&self) -> usize {
        fn go(e: &Expr) -> usize {
            match e {
                Expr::Leaf(_) => 1,
                Expr::Scalar(_, e) => go(e),
                Expr::Product(a, b) => go(a) + go(b),
            }
        }
        go(&self.root)
    }
}

/// Top-degree coefficient of `u`, or `None` if `u` has lower-degree parts.
pub fn top_integral(u: &SchurClass) -> Option<Rational> {
    let top = 2 * (u.ambient() as u32 - 2);
    let degrees = u.degrees();
    (degrees.is_empty() || degrees == [top]).then(|| u.coefficient(Partition2 { a: top / 2, b: top / 2 }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quintic_leaf() {
        let e = parse_class_expression("ctop(Sym(5,S*))", 5).unwrap();
        assert_eq!(e.root, Expr::Leaf(Class::TopChern(Bundle::Sym(5, Box::new(Bundle::TautDual)))));
        assert_eq!(e.evaluate().unwrap().integrate(), Rational::from_integer(2875.into()));
    }

    #[test]
    fn sigma_power() {
        let e = parse_class_expression("sigma(1)*sigma(1)*sigma(1)*sigma(1)", 4).unwrap();
        assert_eq!(e.arity(), 4);
        assert!(matches!(e.root, Expr::Product(_, ref r) if **r == Expr::Leaf(Class::Sigma(1, 0))));
        assert_eq!(e.evaluate().unwrap().integrate(), Rational::from_integer(2.into()));
    }

    #[test]
    fn errors_carry_columns() {
        let err = parse_class_expression("c3(", 5).unwrap_err();
        assert_eq!(err.column, 3);
        assert_eq!(parse_class_expression("c3(S*)", 5).unwrap_err().column, 1);
        assert_eq!(parse_class_expression("sigma(1) sigma(1)", 5).unwrap_err().column, 9);
        assert_eq!(parse_class_expression("sigma(1) + 1", 5).unwrap_err().column, 9);
        assert!(parse_class_expression("sigma(4)", 5).is_err());
        assert!(parse_class_expression("3", 5).is_err());
    }

    #[test]
    fn whitespace_and_scalars() {
        let a = parse_class_expression(" 2 * c 1 ( S * ) * sigma ( 2 , 1 ) ", 4).unwrap();
        let b = parse_class_expression("2*c1(S*)*sigma(2,1)", 4).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.evaluate().unwrap().integrate(), Rational::from_integer(2.into()));
        assert_eq!(a.root.to_string(), "2*c1(S*)*sigma(2,1)");
    }

    #[test]
    fn dual_signs() {
        let s = parse_class_expression("c1(S)", 4).unwrap().evaluate().unwrap();
        let d = parse_class_expression("c1(S*)", 4).unwrap().evaluate().unwrap();
        assert_eq!(s, d.scale(&Rational::from_integer((-1).into())));
    }
}
