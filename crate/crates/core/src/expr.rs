//! Parsing, evaluation and symbolic differentiation of coefficient
//! functions of time, e.g. `1 + 0.1*t` or `exp(-(t-5)^2)`.
//!
//! The grammar covers real constants, the variable `t`, the named
//! constants `pi` and `e`, unary negation, the binary operators
//! `+ - * / ^` and a fixed set of elementary functions. ASTs are
//! immutable after parsing and evaluation is a pure function, so they
//! can be shared freely between threads.

use std::fmt;

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
    Sinh,
    Cosh,
    Tanh,
    Abs,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Abs => "abs",
        }
    }

    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            "tanh" => Func::Tanh,
            "abs" => Func::Abs,
            _ => return None,
        })
    }

    fn apply(self, x: f64) -> f64 {
        match self {
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
            Func::Tan => x.tan(),
            Func::Exp => x.exp(),
            Func::Log => x.ln(),
            Func::Sqrt => x.sqrt(),
            Func::Sinh => x.sinh(),
            Func::Cosh => x.cosh(),
            Func::Tanh => x.tanh(),
            Func::Abs => x.abs(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Const(f64),
    Time,
    Neg(Box<ExprAst>),
    Bin(BinOp, Box<ExprAst>, Box<ExprAst>),
    Call(Func, Box<ExprAst>),
}

/// Parsed arithmetic expression in the time variable `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExprAst {
    node: Node,
    /// Byte offset of the node in the original source, kept for
    /// eval-time domain error reports. Synthetic nodes produced by
    /// differentiation inherit the offset of the node they came from.
    offset: usize,
}

impl ExprAst {
    fn new(node: Node, offset: usize) -> Self {
        ExprAst { node, offset }
    }

    fn constant(v: f64, offset: usize) -> Self {
        ExprAst::new(Node::Const(v), offset)
    }

    /// Evaluate at time `t`.
    ///
    /// Division by zero, `log`/`sqrt` outside their domain and any
    /// non-finite intermediate are hard errors; a NaN never escapes.
    pub fn eval(&self, t: f64) -> Result<f64, Error> {
        let v = match &self.node {
            Node::Const(c) => *c,
            Node::Time => t,
            Node::Neg(inner) => -inner.eval(t)?,
            Node::Bin(op, lhs, rhs) => {
                let a = lhs.eval(t)?;
                let b = rhs.eval(t)?;
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b == 0.0 {
                            return Err(Error::EvalDomain {
                                offset: self.offset,
                                reason: "division by zero".into(),
                            });
                        }
                        a / b
                    }
                    BinOp::Pow => a.powf(b),
                }
            }
            Node::Call(f, arg) => {
                let x = arg.eval(t)?;
                match f {
                    Func::Log if x <= 0.0 => {
                        return Err(Error::EvalDomain {
                            offset: self.offset,
                            reason: format!("log of non-positive argument {x}"),
                        })
                    }
                    Func::Sqrt if x < 0.0 => {
                        return Err(Error::EvalDomain {
                            offset: self.offset,
                            reason: format!("sqrt of negative argument {x}"),
                        })
                    }
                    _ => {}
                }
                f.apply(x)
            }
        };
        if !v.is_finite() {
            return Err(Error::EvalDomain {
                offset: self.offset,
                reason: format!("non-finite value {v}"),
            });
        }
        Ok(v)
    }

    /// Symbolic derivative d/dt. No simplification beyond dropping a
    /// few identically-zero branches; correctness only.
    pub fn differentiate(&self) -> ExprAst {
        let o = self.offset;
        match &self.node {
            Node::Const(_) => ExprAst::constant(0.0, o),
            Node::Time => ExprAst::constant(1.0, o),
            Node::Neg(inner) => ExprAst::new(Node::Neg(Box::new(inner.differentiate())), o),
            Node::Bin(op, lhs, rhs) => {
                let dl = lhs.differentiate();
                let dr = rhs.differentiate();
                match op {
                    BinOp::Add => bin(BinOp::Add, dl, dr, o),
                    BinOp::Sub => bin(BinOp::Sub, dl, dr, o),
                    BinOp::Mul => bin(
                        BinOp::Add,
                        bin(BinOp::Mul, dl, (**rhs).clone(), o),
                        bin(BinOp::Mul, (**lhs).clone(), dr, o),
                        o,
                    ),
                    BinOp::Div => {
                        // (u/v)' = (u'v - uv') / v^2
                        let num = bin(
                            BinOp::Sub,
                            bin(BinOp::Mul, dl, (**rhs).clone(), o),
                            bin(BinOp::Mul, (**lhs).clone(), dr, o),
                            o,
                        );
                        let den = bin(
                            BinOp::Pow,
                            (**rhs).clone(),
                            ExprAst::constant(2.0, o),
                            o,
                        );
                        bin(BinOp::Div, num, den, o)
                    }
                    BinOp::Pow => {
                        if let Node::Const(c) = rhs.node {
                            // (u^c)' = c * u^(c-1) * u'
                            bin(
                                BinOp::Mul,
                                bin(
                                    BinOp::Mul,
                                    ExprAst::constant(c, o),
                                    bin(
                                        BinOp::Pow,
                                        (**lhs).clone(),
                                        ExprAst::constant(c - 1.0, o),
                                        o,
                                    ),
                                    o,
                                ),
                                dl,
                                o,
                            )
                        } else {
                            // (u^v)' = u^v * (v' log u + v u'/u)
                            let term1 = bin(
                                BinOp::Mul,
                                dr,
                                ExprAst::new(Node::Call(Func::Log, Box::new((**lhs).clone())), o),
                                o,
                            );
                            let term2 = bin(
                                BinOp::Div,
                                bin(BinOp::Mul, (**rhs).clone(), dl, o),
                                (**lhs).clone(),
                                o,
                            );
                            bin(
                                BinOp::Mul,
                                (*self).clone(),
                                bin(BinOp::Add, term1, term2, o),
                                o,
                            )
                        }
                    }
                }
            }
            Node::Call(f, arg) => {
                let u = (**arg).clone();
                let du = arg.differentiate();
                let outer = match f {
                    Func::Sin => call(Func::Cos, u, o),
                    Func::Cos => ExprAst::new(Node::Neg(Box::new(call(Func::Sin, u, o))), o),
                    // 1/cos^2
                    Func::Tan => bin(
                        BinOp::Div,
                        ExprAst::constant(1.0, o),
                        bin(BinOp::Pow, call(Func::Cos, u, o), ExprAst::constant(2.0, o), o),
                        o,
                    ),
                    Func::Exp => call(Func::Exp, u, o),
                    Func::Log => bin(BinOp::Div, ExprAst::constant(1.0, o), u, o),
                    // 1/(2 sqrt u)
                    Func::Sqrt => bin(
                        BinOp::Div,
                        ExprAst::constant(1.0, o),
                        bin(
                            BinOp::Mul,
                            ExprAst::constant(2.0, o),
                            call(Func::Sqrt, u, o),
                            o,
                        ),
                        o,
                    ),
                    Func::Sinh => call(Func::Cosh, u, o),
                    Func::Cosh => call(Func::Sinh, u, o),
                    Func::Tanh => bin(
                        BinOp::Div,
                        ExprAst::constant(1.0, o),
                        bin(BinOp::Pow, call(Func::Cosh, u, o), ExprAst::constant(2.0, o), o),
                        o,
                    ),
                    // u / |u|, undefined at u = 0
                    Func::Abs => bin(
                        BinOp::Div,
                        u.clone(),
                        call(Func::Abs, u, o),
                        o,
                    ),
                };
                bin(BinOp::Mul, outer, du, o)
            }
        }
    }
}

fn bin(op: BinOp, lhs: ExprAst, rhs: ExprAst, offset: usize) -> ExprAst {
    ExprAst::new(Node::Bin(op, Box::new(lhs), Box::new(rhs)), offset)
}

fn call(f: Func, arg: ExprAst, offset: usize) -> ExprAst {
    ExprAst::new(Node::Call(f, Box::new(arg)), offset)
}

impl fmt::Display for ExprAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Fully parenthesized; round-trip fidelity at the value level
        // is all we promise.
        match &self.node {
            Node::Const(c) => write!(f, "{c}"),
            Node::Time => write!(f, "t"),
            Node::Neg(inner) => write!(f, "(-{inner})"),
            Node::Bin(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
            Node::Call(func, arg) => write!(f, "{}({arg})", func.name()),
        }
    }
}

/// Parse an expression in `t`.
pub fn parse(source: &str) -> Result<ExprAst, Error> {
    let tokens = tokenize(source)?;
    let mut p = Parser { tokens, pos: 0, len: source.len() };
    let ast = p.expr()?;
    match p.peek() {
        None => Ok(ast),
        Some(tok) => Err(Error::Syntax {
            offset: tok.offset,
            expected: "end of input".into(),
        }),
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    offset: usize,
}

fn tokenize(src: &str) -> Result<Vec<Token>, Error> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => { out.push(Token { tok: Tok::Plus, offset: i }); i += 1 }
            '-' => { out.push(Token { tok: Tok::Minus, offset: i }); i += 1 }
            '*' => { out.push(Token { tok: Tok::Star, offset: i }); i += 1 }
            '/' => { out.push(Token { tok: Tok::Slash, offset: i }); i += 1 }
            '^' => { out.push(Token { tok: Tok::Caret, offset: i }); i += 1 }
            '(' => { out.push(Token { tok: Tok::LParen, offset: i }); i += 1 }
            ')' => { out.push(Token { tok: Tok::RParen, offset: i }); i += 1 }
            '0'..='9' | '.' => {
                let start = i;
                while i < bytes.len() && matches!(bytes[i] as char, '0'..='9' | '.') {
                    i += 1;
                }
                // exponent part: 1e-3, 2.5E+7
                if i < bytes.len()
                    && matches!(bytes[i] as char, 'e' | 'E')
                    && i + 1 < bytes.len()
                    && matches!(bytes[i + 1] as char, '0'..='9' | '+' | '-')
                {
                    i += 2;
                    while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                        i += 1;
                    }
                }
                let text = &src[start..i];
                let v: f64 = text.parse().map_err(|_| Error::Syntax {
                    offset: start,
                    expected: "a numeric literal".into(),
                })?;
                out.push(Token { tok: Tok::Num(v), offset: start });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push(Token { tok: Tok::Ident(src[start..i].to_string()), offset: start });
            }
            _ => {
                return Err(Error::Syntax {
                    offset: i,
                    expected: format!("a token, found unexpected character '{c}'"),
                })
            }
        }
    }
    if out.is_empty() {
        return Err(Error::Syntax { offset: 0, expected: "a nonempty expression".into() });
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn eof_offset(&self) -> usize {
        self.len
    }

    // expr := term (('+'|'-') term)*
    fn expr(&mut self) -> Result<ExprAst, Error> {
        let mut lhs = self.term()?;
        while let Some(tok) = self.peek() {
            let (op, off) = match tok.tok {
                Tok::Plus => (BinOp::Add, tok.offset),
                Tok::Minus => (BinOp::Sub, tok.offset),
                _ => break,
            };
            self.pos += 1;
            let rhs = self.term()?;
            lhs = bin(op, lhs, rhs, off);
        }
        Ok(lhs)
    }

    // term := unary (('*'|'/') unary)*
    fn term(&mut self) -> Result<ExprAst, Error> {
        let mut lhs = self.unary()?;
        while let Some(tok) = self.peek() {
            let (op, off) = match tok.tok {
                Tok::Star => (BinOp::Mul, tok.offset),
                Tok::Slash => (BinOp::Div, tok.offset),
                _ => break,
            };
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = bin(op, lhs, rhs, off);
        }
        Ok(lhs)
    }

    // unary := '-' unary | power
    fn unary(&mut self) -> Result<ExprAst, Error> {
        if let Some(tok) = self.peek() {
            if tok.tok == Tok::Minus {
                let off = tok.offset;
                self.pos += 1;
                let inner = self.unary()?;
                return Ok(ExprAst::new(Node::Neg(Box::new(inner)), off));
            }
        }
        self.power()
    }

    // power := atom ('^' unary)?   (right-associative, exponent may
    // carry its own unary minus: 2^-3)
    fn power(&mut self) -> Result<ExprAst, Error> {
        let base = self.atom()?;
        if let Some(tok) = self.peek() {
            if tok.tok == Tok::Caret {
                let off = tok.offset;
                self.pos += 1;
                let exp = self.unary()?;
                return Ok(bin(BinOp::Pow, base, exp, off));
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<ExprAst, Error> {
        let tok = self.next().ok_or_else(|| Error::Syntax {
            offset: self.eof_offset(),
            expected: "a number, identifier or '('".into(),
        })?;
        match tok.tok {
            Tok::Num(v) => Ok(ExprAst::constant(v, tok.offset)),
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                if let Some(f) = Func::from_name(&name) {
                    let open = self.next().ok_or_else(|| Error::Syntax {
                        offset: self.eof_offset(),
                        expected: "'(' after function name".into(),
                    })?;
                    if open.tok != Tok::LParen {
                        return Err(Error::Syntax {
                            offset: open.offset,
                            expected: "'(' after function name".into(),
                        });
                    }
                    let arg = self.expr()?;
                    self.expect_rparen()?;
                    Ok(ExprAst::new(Node::Call(f, Box::new(arg)), tok.offset))
                } else {
                    match name.as_str() {
                        "t" => Ok(ExprAst::new(Node::Time, tok.offset)),
                        "pi" => Ok(ExprAst::constant(std::f64::consts::PI, tok.offset)),
                        "e" => Ok(ExprAst::constant(std::f64::consts::E, tok.offset)),
                        _ => Err(Error::UnknownIdentifier {
                            offset: tok.offset,
                            name,
                        }),
                    }
                }
            }
            _ => Err(Error::Syntax {
                offset: tok.offset,
                expected: "a number, identifier or '('".into(),
            }),
        }
    }

    fn expect_rparen(&mut self) -> Result<(), Error> {
        match self.next() {
            Some(Token { tok: Tok::RParen, .. }) => Ok(()),
            Some(tok) => Err(Error::Syntax { offset: tok.offset, expected: "')'".into() }),
            None => Err(Error::Syntax {
                offset: self.eof_offset(),
                expected: "')'".into(),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn eval(src: &str, t: f64) -> f64 {
        parse(src).unwrap().eval(t).unwrap()
    }

    #[test]
    fn constant_zero() {
        for t in [-3.0, 0.0, 17.5] {
            assert_eq!(eval("0", t), 0.0);
        }
    }

    #[test]
    fn linear_arithmetic() {
        assert_eq!(eval("1 + 0.1*t", 10.0), 2.0);
    }

    #[test]
    fn quarter_period_sine() {
        assert!((eval("sin(2*pi*t)", 0.25) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn square_and_exp() {
        assert_eq!(eval("t^2", 3.0), 9.0);
        assert_eq!(eval("exp(0)", 7.0), 1.0);
    }

    #[test]
    fn pole_is_domain_error() {
        let ast = parse("1/ (t-1)").unwrap();
        assert!(matches!(ast.eval(1.0), Err(Error::EvalDomain { .. })));
    }

    #[test]
    fn log_sqrt_domain_errors() {
        assert!(parse("log(t)").unwrap().eval(-1.0).is_err());
        assert!(parse("sqrt(t)").unwrap().eval(-4.0).is_err());
        // overflow lands as a non-finite error, not an Inf
        assert!(parse("exp(t)").unwrap().eval(1e9).is_err());
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(eval("2 + 3 * 4", 0.0), 14.0);
        assert_eq!(eval("2 ^ 3 ^ 2", 0.0), 512.0); // right-assoc
        assert_eq!(eval("8 / 4 / 2", 0.0), 1.0); // left-assoc
        assert_eq!(eval("-2^2", 0.0), -4.0); // ^ binds tighter than unary -
        assert_eq!(eval("2^-1", 0.0), 0.5);
    }

    #[test]
    fn syntax_error_carries_offset() {
        match parse("sin(") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("expected syntax error, got {other:?}"),
        }
        match parse("1 + @") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_identifier() {
        match parse("2*x") {
            Err(Error::UnknownIdentifier { name, .. }) => assert_eq!(name, "x"),
            other => panic!("expected unknown identifier, got {other:?}"),
        }
    }

    #[test]
    fn derivative_basics() {
        let d = parse("t").unwrap().differentiate();
        assert_eq!(d.eval(123.0).unwrap(), 1.0);
        let d = parse("sin(t)").unwrap().differentiate();
        assert!((d.eval(0.0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn derivative_cubic_matches_finite_difference() {
        let ast = parse("t^3 + 2*t").unwrap();
        let d = ast.differentiate();
        let t = 2.0;
        let h = 1e-6;
        let fd = (ast.eval(t + h).unwrap() - ast.eval(t - h).unwrap()) / (2.0 * h);
        assert!((d.eval(t).unwrap() - 14.0).abs() < 1e-9);
        assert!((d.eval(t).unwrap() - fd).abs() < 1e-6);
    }

    #[test]
    fn derivative_chain_rules() {
        let cases = [
            ("exp(-(t-5)^2)", 4.5),
            ("tan(t)", 0.7),
            ("tanh(t)", 0.3),
            ("log(1+t^2)", 1.3),
            ("sqrt(1+t^2)", 0.9),
            ("t^t", 1.7),
            ("abs(t-1)", 2.5),
            ("cosh(t)*sinh(t)", 0.4),
        ];
        for (src, t) in cases {
            let ast = parse(src).unwrap();
            let d = ast.differentiate();
            let h = 1e-6;
            let fd = (ast.eval(t + h).unwrap() - ast.eval(t - h).unwrap()) / (2.0 * h);
            let got = d.eval(t).unwrap();
            assert!(
                (got - fd).abs() <= 1e-5 * (1.0 + fd.abs()),
                "{src} at t={t}: symbolic {got}, fd {fd}"
            );
        }
    }

    // Random ASTs for the derivative and round-trip properties.
    fn arb_expr(depth: u32) -> BoxedStrategy<String> {
        if depth == 0 {
            prop_oneof![
                (0.1f64..3.0).prop_map(|v| format!("{v:.3}")),
                Just("t".to_string()),
            ]
            .boxed()
        } else {
            let sub = arb_expr(depth - 1);
            prop_oneof![
                (sub.clone(), sub.clone()).prop_map(|(a, b)| format!("({a} + {b})")),
                (sub.clone(), sub.clone()).prop_map(|(a, b)| format!("({a} - {b})")),
                (sub.clone(), sub.clone()).prop_map(|(a, b)| format!("({a} * {b})")),
                sub.clone().prop_map(|a| format!("sin({a})")),
                sub.clone().prop_map(|a| format!("cos({a})")),
                sub.clone().prop_map(|a| format!("exp(-({a})^2)")),
                sub.clone().prop_map(|a| format!("(-{a})")),
                arb_expr(0),
            ]
            .boxed()
        }
    }

    proptest! {
        #[test]
        fn derivative_matches_central_difference(
            src in arb_expr(4),
            ts in proptest::collection::vec(-2.0f64..2.0, 10),
        ) {
            let ast = parse(&src).unwrap();
            let d = ast.differentiate();
            let h = 1e-6;
            for t in ts {
                let (Ok(fp), Ok(fm)) = (ast.eval(t + h), ast.eval(t - h)) else { continue };
                let Ok(sym) = d.eval(t) else { continue };
                let fd = (fp - fm) / (2.0 * h);
                prop_assert!(
                    (sym - fd).abs() <= 1e-5 * (1.0 + sym.abs()),
                    "{} at t={}: symbolic {}, fd {}", src, t, sym, fd
                );
            }
        }

        #[test]
        fn print_parse_round_trip(
            src in arb_expr(4),
            ts in proptest::collection::vec(-2.0f64..2.0, 10),
        ) {
            let ast = parse(&src).unwrap();
            let reparsed = parse(&ast.to_string()).unwrap();
            for t in ts {
                match (ast.eval(t), reparsed.eval(t)) {
                    (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
                    (Err(_), Err(_)) => {}
                    (a, b) => prop_assert!(false, "mismatch: {:?} vs {:?}", a, b),
                }
            }
        }
    }
}
