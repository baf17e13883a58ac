//! Defining expressions `h(x, w)` for graph manifolds.
//!
//! Grammar (whitespace is insignificant):
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := unary ('*' unary)*
//! unary    := '-' unary | power
//! power    := atom ('^' exponent)?
//! exponent := INTEGER | NUMBER | '(' '-'? NUMBER ('/' NUMBER)? ')'
//! atom     := NUMBER | VAR | FUNC '(' expr ')' | '(' expr ')'
//! VAR      := 'x' INDEX | 'w' INDEX            (1-based)
//! FUNC     := 'Re' | 'Im' | 'conj' | 'abs2'
//! NUMBER   := decimal literal, optional exponent part (1e-3)
//! ```
//!
//! `x` variables are real, `w` variables complex. An integer exponent keeps
//! the type of its base; any other exponent needs a real base. The root of a
//! defining expression must be real.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Re,
    Im,
    Conj,
    Abs2,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Re => "Re",
            Func::Im => "Im",
            Func::Conj => "conj",
            Func::Abs2 => "abs2",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exponent {
    Int(i32),
    Real(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Num(f64),
    /// Real variable, 0-based.
    X(usize),
    /// Complex variable, 0-based.
    W(usize),
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Pow(Box<Node>, Exponent),
    Call(Func, Box<Node>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ty {
    Real,
    Complex,
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Num(v) if *v < 0.0 => write!(f, "(-{:?})", -v),
            Node::Num(v) => write!(f, "{v:?}"),
            Node::X(i) => write!(f, "x{}", i + 1),
            Node::W(i) => write!(f, "w{}", i + 1),
            Node::Neg(a) => write!(f, "(-{a})"),
            Node::Add(a, b) => write!(f, "({a} + {b})"),
            Node::Sub(a, b) => write!(f, "({a} - {b})"),
            Node::Mul(a, b) => write!(f, "({a} * {b})"),
            Node::Pow(a, Exponent::Int(k)) if *k < 0 => write!(f, "{a}^({k})"),
            Node::Pow(a, Exponent::Int(k)) => write!(f, "{a}^{k}"),
            Node::Pow(a, Exponent::Real(q)) => write!(f, "{a}^({q:?})"),
            Node::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

impl Node {
    fn type_of(&self) -> Result<Ty> {
        Ok(match self {
            Node::Num(_) | Node::X(_) => Ty::Real,
            Node::W(_) => Ty::Complex,
            Node::Neg(a) => a.type_of()?,
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) => {
                if a.type_of()? == Ty::Complex || b.type_of()? == Ty::Complex {
                    Ty::Complex
                } else {
                    Ty::Real
                }
            }
            Node::Pow(a, Exponent::Int(_)) => a.type_of()?,
            Node::Pow(a, Exponent::Real(_)) => {
                if a.type_of()? == Ty::Complex {
                    return Err(Error::Type {
                        node: self.to_string(),
                        message: "fractional power of a complex value".into(),
                    });
                }
                Ty::Real
            }
            Node::Call(Func::Conj, a) => a.type_of()?,
            Node::Call(_, a) => {
                a.type_of()?;
                Ty::Real
            }
        })
    }

    fn max_indices(&self, acc: &mut (usize, usize)) {
        match self {
            Node::Num(_) => {}
            Node::X(i) => acc.0 = acc.0.max(i + 1),
            Node::W(i) => acc.1 = acc.1.max(i + 1),
            Node::Neg(a) | Node::Pow(a, _) | Node::Call(_, a) => a.max_indices(acc),
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) => {
                a.max_indices(acc);
                b.max_indices(acc);
            }
        }
    }

    fn eval(&self, x: &[f64], w: &[Complex64]) -> Complex64 {
        match self {
            Node::Num(v) => Complex64::new(*v, 0.0),
            Node::X(i) => Complex64::new(x[*i], 0.0),
            Node::W(i) => w[*i],
            Node::Neg(a) => -a.eval(x, w),
            Node::Add(a, b) => a.eval(x, w) + b.eval(x, w),
            Node::Sub(a, b) => a.eval(x, w) - b.eval(x, w),
            Node::Mul(a, b) => a.eval(x, w) * b.eval(x, w),
            Node::Pow(a, Exponent::Int(k)) => a.eval(x, w).powi(*k),
            Node::Pow(a, Exponent::Real(q)) => Complex64::new(a.eval(x, w).re.powf(*q), 0.0),
            Node::Call(func, a) => {
                let v = a.eval(x, w);
                match func {
                    Func::Re => Complex64::new(v.re, 0.0),
                    Func::Im => Complex64::new(v.im, 0.0),
                    Func::Conj => v.conj(),
                    Func::Abs2 => Complex64::new(v.norm_sqr(), 0.0),
                }
            }
        }
    }
}

/// A type-checked real-valued expression in `x1..xl`, `w1..wn`.
#[derive(Clone, Debug, PartialEq)]
pub struct Expression {
    root: Node,
    source: String,
}

impl Expression {
    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// Smallest `(l, n)` signature containing every free variable.
    pub fn arity(&self) -> (usize, usize) {
        let mut acc = (0, 0);
        self.root.max_indices(&mut acc);
        acc
    }

    pub fn check_signature(&self, l: usize, n: usize) -> Result<()> {
        let (xl, wn) = self.arity();
        if xl > l {
            return Err(Error::UnknownIdentifier(format!(
                "x{xl} (signature has {l} real variables)"
            )));
        }
        if wn > n {
            return Err(Error::UnknownIdentifier(format!(
                "w{wn} (signature has {n} complex variables)"
            )));
        }
        Ok(())
    }

    /// Fully parenthesized rendering; parses back to an equal tree.
    pub fn pretty(&self) -> String {
        self.root.to_string()
    }

    /// Evaluates without dimension checks beyond the arity of the tree.
    pub fn eval(&self, x: &[f64], w: &[Complex64]) -> Result<f64> {
        let (xl, wn) = self.arity();
        if x.len() < xl {
            return Err(Error::DimensionMismatch {
                what: "real variables".into(),
                expected: xl,
                actual: x.len(),
            });
        }
        if w.len() < wn {
            return Err(Error::DimensionMismatch {
                what: "complex variables".into(),
                expected: wn,
                actual: w.len(),
            });
        }
        Ok(self.eval_unchecked(x, w))
    }

    pub(crate) fn eval_unchecked(&self, x: &[f64], w: &[Complex64]) -> f64 {
        self.root.eval(x, w).re
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num { value: f64, integral: bool },
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ if c.is_ascii_digit() || c == '.' => {
                let mut integral = true;
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    if bytes[i] == b'.' {
                        integral = false;
                    }
                    i += 1;
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        integral = false;
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text = &src[start..i];
                let value: f64 = text.parse().map_err(|_| Error::Syntax {
                    position: start,
                    message: format!("malformed number `{text}`"),
                })?;
                out.push((Tok::Num { value, integral }, start));
                continue;
            }
            _ if c.is_ascii_alphabetic() => {
                while i < bytes.len() && (bytes[i] as char).is_ascii_alphanumeric() {
                    i += 1;
                }
                out.push((Tok::Ident(src[start..i].to_string()), start));
                continue;
            }
            _ => {
                return Err(Error::Syntax {
                    position: i,
                    message: format!("unexpected character `{c}`"),
                })
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn position(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    fn error(&self, message: String) -> Error {
        Error::Syntax {
            position: self.position(),
            message,
        }
    }

    fn expr(&mut self) -> Result<Node> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Node::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Node::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Node> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Star {
            self.bump();
            lhs = Node::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Node> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let exp = self.exponent()?;
        Ok(Node::Pow(Box::new(base), exp))
    }

    fn exponent(&mut self) -> Result<Exponent> {
        match self.bump() {
            Tok::Num { value, integral } => Ok(number_exponent(value, integral, 1.0)),
            Tok::LParen => {
                let sign = if *self.peek() == Tok::Minus {
                    self.bump();
                    -1.0
                } else {
                    1.0
                };
                let (num, integral) = match self.bump() {
                    Tok::Num { value, integral } => (value, integral),
                    _ => return Err(self.error("expected exponent literal".into())),
                };
                let exp = if *self.peek() == Tok::Slash {
                    self.bump();
                    let den = match self.bump() {
                        Tok::Num { value, .. } => value,
                        _ => return Err(self.error("expected exponent denominator".into())),
                    };
                    if den == 0.0 {
                        return Err(self.error("zero exponent denominator".into()));
                    }
                    Exponent::Real(sign * num / den)
                } else if integral {
                    number_exponent(num, true, sign)
                } else {
                    Exponent::Real(sign * num)
                };
                self.expect(Tok::RParen, "`)` closing the exponent")?;
                Ok(exp)
            }
            _ => Err(Error::Syntax {
                position: self.toks[self.pos.saturating_sub(1)].1,
                message: "expected exponent".into(),
            }),
        }
    }

    fn atom(&mut self) -> Result<Node> {
        let position = self.position();
        match self.bump() {
            Tok::Num { value, .. } => Ok(Node::Num(value)),
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                let func = match name.as_str() {
                    "Re" => Some(Func::Re),
                    "Im" => Some(Func::Im),
                    "conj" => Some(Func::Conj),
                    "abs2" => Some(Func::Abs2),
                    _ => None,
                };
                if let Some(func) = func {
                    self.expect(Tok::LParen, "`(` after function name")?;
                    let arg = self.expr()?;
                    self.expect(Tok::RParen, "`)`")?;
                    return Ok(Node::Call(func, Box::new(arg)));
                }
                variable(&name)
            }
            Tok::End => Err(Error::Syntax {
                position,
                message: "unexpected end of input".into(),
            }),
            t => Err(Error::Syntax {
                position,
                message: format!("unexpected token {t:?}"),
            }),
        }
    }
}

fn number_exponent(value: f64, integral: bool, sign: f64) -> Exponent {
    if integral && value <= i32::MAX as f64 {
        Exponent::Int((sign * value) as i32)
    } else {
        Exponent::Real(sign * value)
    }
}

fn variable(name: &str) -> Result<Node> {
    let (kind, digits) = name.split_at(1);
    let index = digits
        .parse::<usize>()
        .ok()
        .filter(|&i| i >= 1 && !digits.starts_with('0'))
        .ok_or_else(|| Error::UnknownIdentifier(name.to_string()))?;
    match kind {
        "x" => Ok(Node::X(index - 1)),
        "w" => Ok(Node::W(index - 1)),
        _ => Err(Error::UnknownIdentifier(name.to_string())),
    }
}

/// Parses and type-checks a real-valued expression.
pub fn parse(source: &str) -> Result<Expression> {
    if source.trim().is_empty() {
        return Err(Error::Syntax {
            position: 0,
            message: "empty expression".into(),
        });
    }
    let mut p = Parser {
        toks: lex(source)?,
        pos: 0,
    };
    let root = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.error("trailing input".into()));
    }
    if root.type_of()? != Ty::Real {
        return Err(Error::Type {
            node: root.to_string(),
            message: "complex value where a real result is required".into(),
        });
    }
    Ok(Expression {
        root,
        source: source.to_string(),
    })
}

/// Parses and checks the free variables against the signature `(l, n)`.
pub fn parse_with(source: &str, l: usize, n: usize) -> Result<Expression> {
    let e = parse(source)?;
    e.check_signature(l, n)?;
    Ok(e)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DerivativeMode {
    Wirtinger,
    Real,
}

/// Base finite-difference step. The second level uses half of it.
pub const FD_STEP: f64 = 1e-3;
/// Largest coordinate magnitude accepted by the finite-difference oracle.
pub const FD_BOX: f64 = 0.5;

/// Second derivatives of an expression at a point.
///
/// `hessian` is indexed by the real coordinates `(x_1..x_l, u_1..u_n,
/// v_1..v_n)` with `w_j = u_j + i v_j`. In Wirtinger mode `mixed[i][j]` is
/// `∂²/∂w_i∂w̄_j` and `pure[i][j]` is `∂²/∂w_i∂w_j`, with
/// `∂/∂w = (∂/∂u - i∂/∂v)/2`.
#[derive(Clone, Debug)]
pub struct SecondDerivatives {
    pub hessian: DMatrix<f64>,
    pub mixed: Option<DMatrix<Complex64>>,
    pub pure: Option<DMatrix<Complex64>>,
}

struct RealPoint<'a> {
    e: &'a Expression,
    l: usize,
    n: usize,
}

impl RealPoint<'_> {
    fn eval(&self, p: &[f64]) -> f64 {
        let x = &p[..self.l];
        let w: Vec<Complex64> = (0..self.n)
            .map(|j| Complex64::new(p[self.l + j], p[self.l + self.n + j]))
            .collect();
        self.e.eval_unchecked(x, &w)
    }

    fn hessian(&self, p: &[f64], h: f64) -> DMatrix<f64> {
        let d = p.len();
        let f0 = self.eval(p);
        let mut hess = DMatrix::zeros(d, d);
        let mut q = p.to_vec();
        for i in 0..d {
            q[i] = p[i] + h;
            let fp = self.eval(&q);
            q[i] = p[i] - h;
            let fm = self.eval(&q);
            q[i] = p[i];
            hess[(i, i)] = (fp - 2.0 * f0 + fm) / (h * h);
            for j in 0..i {
                let mut corner = |si: f64, sj: f64| {
                    q[i] = p[i] + si * h;
                    q[j] = p[j] + sj * h;
                    let v = self.eval(&q);
                    q[i] = p[i];
                    q[j] = p[j];
                    v
                };
                let v = (corner(1.0, 1.0) - corner(1.0, -1.0) - corner(-1.0, 1.0)
                    + corner(-1.0, -1.0))
                    / (4.0 * h * h);
                hess[(i, j)] = v;
                hess[(j, i)] = v;
            }
        }
        hess
    }
}

/// Second derivatives by central differences with one Richardson level.
pub fn second_derivatives(
    e: &Expression,
    x: &[f64],
    w: &[Complex64],
    mode: DerivativeMode,
) -> Result<SecondDerivatives> {
    let (xl, wn) = e.arity();
    if x.len() < xl || w.len() < wn {
        return Err(Error::DimensionMismatch {
            what: "derivative point".into(),
            expected: xl + wn,
            actual: x.len() + w.len(),
        });
    }
    let (l, n) = (x.len(), w.len());
    let mut p: Vec<f64> = x.to_vec();
    p.extend(w.iter().map(|c| c.re));
    p.extend(w.iter().map(|c| c.im));
    if let Some(bad) = p.iter().find(|v| !(v.abs() <= FD_BOX)) {
        return Err(Error::Domain(format!(
            "coordinate {bad} outside the finite-difference box |·| <= {FD_BOX}"
        )));
    }
    if p.iter().any(|&v| v + FD_STEP / 2.0 == v) {
        return Err(Error::accuracy("finite-difference step underflow", FD_STEP));
    }
    let rp = RealPoint { e, l, n };
    let coarse = rp.hessian(&p, FD_STEP);
    let fine = rp.hessian(&p, FD_STEP / 2.0);
    let hessian = (fine * 4.0 - coarse) / 3.0;
    if hessian.iter().any(|v| !v.is_finite()) {
        return Err(Error::accuracy("non-finite second derivative", f64::NAN));
    }
    let asym = (&hessian - hessian.transpose()).amax();
    if asym > 1e-7 {
        return Err(Error::accuracy("asymmetric Hessian", asym));
    }
    let (mixed, pure) = match mode {
        DerivativeMode::Real => (None, None),
        DerivativeMode::Wirtinger => {
            let u = |i: usize| l + i;
            let v = |i: usize| l + n + i;
            let mixed = DMatrix::from_fn(n, n, |i, j| {
                Complex64::new(
                    hessian[(u(i), u(j))] + hessian[(v(i), v(j))],
                    hessian[(u(i), v(j))] - hessian[(v(i), u(j))],
                ) / 4.0
            });
            let pure = DMatrix::from_fn(n, n, |i, j| {
                Complex64::new(
                    hessian[(u(i), u(j))] - hessian[(v(i), v(j))],
                    -(hessian[(u(i), v(j))] + hessian[(v(i), u(j))]),
                ) / 4.0
            });
            let herm = (&mixed - mixed.adjoint())
                .iter()
                .map(|c| c.norm())
                .fold(0.0, f64::max);
            if herm > 1e-7 {
                return Err(Error::accuracy("non-hermitian Levi matrix", herm));
            }
            (Some(mixed), Some(pure))
        }
    };
    Ok(SecondDerivatives {
        hessian,
        mixed,
        pure,
    })
}

/// Gradient in the real coordinates `(x, u, v)` by Richardson-extrapolated
/// central differences.
pub fn gradient(e: &Expression, x: &[f64], w: &[Complex64]) -> Vec<f64> {
    let (l, n) = (x.len(), w.len());
    let rp = RealPoint { e, l, n };
    let mut p: Vec<f64> = x.to_vec();
    p.extend(w.iter().map(|c| c.re));
    p.extend(w.iter().map(|c| c.im));
    let mut q = p.clone();
    (0..p.len())
        .map(|i| {
            let mut central = |h: f64| {
                q[i] = p[i] + h;
                let a = rp.eval(&q);
                q[i] = p[i] - h;
                let b = rp.eval(&q);
                q[i] = p[i];
                (a - b) / (2.0 * h)
            };
            let c = central(FD_STEP);
            let f = central(FD_STEP / 2.0);
            (4.0 * f - c) / 3.0
        })
        .collect()
}
