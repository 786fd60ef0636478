use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    /// Tensor product `ox`.
    Tensor,
    Wedge,
    DotWedge,
    LContract,
    RContract,
    Mul,
    Div,
}

impl BinOp {
    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Tensor => 2,
            BinOp::Wedge | BinOp::DotWedge | BinOp::LContract | BinOp::RContract => 3,
            BinOp::Mul | BinOp::Div => 4,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Tensor => "ox",
            BinOp::Wedge => "^",
            BinOp::DotWedge => ".^",
            BinOp::LContract => "_|",
            BinOp::RContract => "|_",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }
}

const NEG_PREC: u8 = 5;
const ATOM_PREC: u8 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Comm,
    Acomm,
    Rev,
    Gi,
    Conj,
    Sinh,
    Cosh,
    Exp,
    S,
    Delta,
    Eps,
}

impl Func {
    pub const ALL: [Func; 11] = [
        Func::Comm,
        Func::Acomm,
        Func::Rev,
        Func::Gi,
        Func::Conj,
        Func::Sinh,
        Func::Cosh,
        Func::Exp,
        Func::S,
        Func::Delta,
        Func::Eps,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Comm => "comm",
            Func::Acomm => "acomm",
            Func::Rev => "rev",
            Func::Gi => "gi",
            Func::Conj => "conj",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Exp => "exp",
            Func::S => "S",
            Func::Delta => "Delta",
            Func::Eps => "eps",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Func::Comm | Func::Acomm => 2,
            _ => 1,
        }
    }

    fn lookup(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(Complex64),
    Sym(String),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
    /// `grade(a, k)`.
    Grade(Box<Expr>, usize),
}

impl Expr {
    pub fn bin(op: BinOp, a: Expr, b: Expr) -> Expr {
        Expr::Bin(op, Box::new(a), Box::new(b))
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Bin(op, ..) => op.precedence(),
            Expr::Neg(_) => NEG_PREC,
            Expr::Num(c) if c.re != 0.0 && c.im != 0.0 => BinOp::Add.precedence(),
            Expr::Num(c) if c.re.is_sign_negative() || c.im.is_sign_negative() => NEG_PREC,
            _ => ATOM_PREC,
        }
    }
}

fn write_number(f: &mut fmt::Formatter<'_>, c: Complex64) -> fmt::Result {
    let (re, im) = (c.re, c.im);
    if im == 0.0 {
        write!(f, "{re}")
    } else if re == 0.0 {
        write!(f, "{im}i")
    } else if im < 0.0 {
        write!(f, "{re} - {}i", -im)
    } else {
        write!(f, "{re} + {im}i")
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, e: &Expr, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    /// Prints with the minimal parentheses that parse back to the same tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(c) => write_number(f, *c),
            Expr::Sym(s) => f.write_str(s),
            Expr::Neg(a) => {
                f.write_str("-")?;
                write_child(f, a, a.precedence() < NEG_PREC)
            }
            Expr::Bin(op, a, b) => {
                let p = op.precedence();
                write_child(f, a, a.precedence() < p)?;
                write!(f, " {} ", op.symbol())?;
                write_child(f, b, b.precedence() <= p)
            }
            Expr::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (k, a) in args.iter().enumerate() {
                    if k > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
            Expr::Grade(a, k) => write!(f, "grade({a}, {k})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64, bool),
    Ident(String),
    Op(BinOp),
    Minus,
    LParen,
    RParen,
    Comma,
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn err(&self, offset: usize, message: impl Into<String>) -> Error {
        Error::SyntaxError {
            offset,
            message: message.into(),
        }
    }

    fn tokens(mut self) -> Result<Vec<(usize, Tok)>> {
        let mut out = Vec::new();
        loop {
            let (at, tok) = self.next()?;
            let end = tok == Tok::End;
            out.push((at, tok));
            if end {
                return Ok(out);
            }
        }
    }

    fn next(&mut self) -> Result<(usize, Tok)> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let at = self.pos;
        let Some(&c) = bytes.get(at) else {
            return Ok((at, Tok::End));
        };
        let peek = bytes.get(at + 1).copied();
        let (len, tok) = match c {
            b'(' => (1, Tok::LParen),
            b')' => (1, Tok::RParen),
            b',' => (1, Tok::Comma),
            b'+' => (1, Tok::Op(BinOp::Add)),
            b'-' => (1, Tok::Minus),
            b'*' => (1, Tok::Op(BinOp::Mul)),
            b'/' => (1, Tok::Op(BinOp::Div)),
            b'^' => (1, Tok::Op(BinOp::Wedge)),
            b'.' if peek == Some(b'^') => (2, Tok::Op(BinOp::DotWedge)),
            b'_' if peek == Some(b'|') => (2, Tok::Op(BinOp::LContract)),
            b'|' if peek == Some(b'_') => (2, Tok::Op(BinOp::RContract)),
            b'0'..=b'9' | b'.' => return self.number(),
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let mut end = at;
                while end < bytes.len() {
                    let d = bytes[end];
                    let ident_char = d.is_ascii_alphanumeric() || d == b'_';
                    if !ident_char || (d == b'_' && bytes.get(end + 1) == Some(&b'|')) {
                        break;
                    }
                    end += 1;
                }
                let word = &self.src[at..end];
                self.pos = end;
                let tok = if word == "ox" {
                    Tok::Op(BinOp::Tensor)
                } else {
                    Tok::Ident(word.to_string())
                };
                return Ok((at, tok));
            }
            _ => {
                let ch = self.src[at..].chars().next().unwrap_or('?');
                return Err(self.err(at, format!("unexpected character '{ch}'")));
            }
        };
        self.pos += len;
        Ok((at, tok))
    }

    fn number(&mut self) -> Result<(usize, Tok)> {
        let bytes = self.src.as_bytes();
        let at = self.pos;
        let mut end = at;
        while end < bytes.len() && (bytes[end].is_ascii_digit() || bytes[end] == b'.') {
            end += 1;
        }
        if end < bytes.len() && (bytes[end] == b'e' || bytes[end] == b'E') {
            let mut k = end + 1;
            if k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
                k += 1;
            }
            if k < bytes.len() && bytes[k].is_ascii_digit() {
                while k < bytes.len() && bytes[k].is_ascii_digit() {
                    k += 1;
                }
                end = k;
            }
        }
        let text = &self.src[at..end];
        let value: f64 = text
            .parse()
            .map_err(|_| self.err(at, format!("malformed number '{text}'")))?;
        let imaginary = bytes.get(end) == Some(&b'i')
            && !bytes
                .get(end + 1)
                .is_some_and(|d| d.is_ascii_alphanumeric() || *d == b'_');
        self.pos = if imaginary { end + 1 } else { end };
        Ok((at, Tok::Num(value, imaginary)))
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::SyntaxError {
            offset: self.offset(),
            message: message.into(),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.err(format!("expected {what}")))
        }
    }

    fn binary_op(&self, level: u8) -> Option<BinOp> {
        match self.peek() {
            Tok::Minus if level == 1 => Some(BinOp::Sub),
            Tok::Op(op) if op.precedence() == level => Some(*op),
            _ => None,
        }
    }

    fn expr(&mut self, level: u8) -> Result<Expr> {
        if level == NEG_PREC {
            return self.unary();
        }
        let mut lhs = self.expr(level + 1)?;
        while let Some(op) = self.binary_op(level) {
            self.bump();
            let rhs = self.expr(level + 1)?;
            lhs = Expr::bin(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Expr> {
        let at = self.offset();
        match self.bump() {
            Tok::Num(v, false) => Ok(Expr::Num(Complex64::new(v, 0.0))),
            Tok::Num(v, true) => Ok(Expr::Num(Complex64::new(0.0, v))),
            Tok::LParen => {
                let e = self.expr(1)?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Tok::Ident(name) => {
                if *self.peek() != Tok::LParen {
                    return Ok(Expr::Sym(name));
                }
                self.bump();
                if name == "grade" {
                    let a = self.expr(1)?;
                    self.expect(Tok::Comma, "',' in grade(a, k)")?;
                    let k = match self.bump() {
                        Tok::Num(v, false) if v >= 0.0 && v.fract() == 0.0 && v <= 64.0 => {
                            v as usize
                        }
                        _ => {
                            return Err(Error::SyntaxError {
                                offset: self.toks[self.pos - 1].0,
                                message: "grade expects a non-negative integer literal".into(),
                            })
                        }
                    };
                    self.expect(Tok::RParen, "')'")?;
                    return Ok(Expr::Grade(Box::new(a), k));
                }
                let func = Func::lookup(&name).ok_or(Error::UnknownFunction(name.clone()))?;
                let mut args = Vec::new();
                if *self.peek() != Tok::RParen {
                    loop {
                        args.push(self.expr(1)?);
                        if *self.peek() == Tok::Comma {
                            self.bump();
                        } else {
                            break;
                        }
                    }
                }
                self.expect(Tok::RParen, "')'")?;
                if args.len() != func.arity() {
                    return Err(Error::SyntaxError {
                        offset: at,
                        message: format!(
                            "{name} expects {} argument(s), got {}",
                            func.arity(),
                            args.len()
                        ),
                    });
                }
                Ok(Expr::Call(func, args))
            }
            Tok::End => Err(Error::SyntaxError {
                offset: at,
                message: "unexpected end of input".into(),
            }),
            other => Err(Error::SyntaxError {
                offset: at,
                message: format!("unexpected token {other:?}"),
            }),
        }
    }
}

/// Parses an expression. Precedence from loosest to tightest: `+ -`, `ox`,
/// `^ .^ _| |_`, `* /`, unary `-`; all binary operators are left
/// associative.
pub fn parse(text: &str) -> Result<Expr> {
    let toks = Lexer { src: text, pos: 0 }.tokens()?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr(1)?;
    if *p.peek() != Tok::End {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}
