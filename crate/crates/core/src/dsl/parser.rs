use crate::sim::GateKind;

use super::ast::*;
use super::lexer::{tokenize, Tok};
use super::{DslError, Pos, Result};

const RESERVED: [&str; 4] = ["kernel", "for", "in", "pi"];

#[derive(Clone, Copy, PartialEq)]
enum Slot {
    Qubit,
    Value,
}

fn signature(gate: GateKind) -> &'static [Slot] {
    use Slot::*;
    match gate {
        GateKind::H
        | GateKind::X
        | GateKind::Y
        | GateKind::Z
        | GateKind::S
        | GateKind::T
        | GateKind::Measure => &[Qubit],
        GateKind::Rx | GateKind::Ry | GateKind::Rz => &[Qubit, Value],
        GateKind::CX | GateKind::CZ | GateKind::Swap => &[Qubit, Qubit],
        GateKind::CPhase => &[Qubit, Qubit, Value],
        // control, first work qubit, work width, base, modulus
        GateKind::CModMul => &[Qubit, Qubit, Value, Value, Value],
    }
}

/// Parses one kernel definition.
pub fn parse_kernel(text: &str) -> Result<KernelSource> {
    let mut p = Parser {
        toks: tokenize(text)?,
        at: 0,
        register: String::new(),
        scalars: Vec::new(),
        loop_vars: Vec::new(),
    };
    p.kernel()
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    register: String,
    scalars: Vec<String>,
    loop_vars: Vec<String>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.at + 1).min(self.toks.len() - 1)].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn syntax<T>(&self, expected: &str) -> Result<T> {
        Err(DslError::Syntax {
            msg: format!("expected {expected}, found {}", self.peek().describe()),
            pos: self.pos(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Pos> {
        if *self.peek() == tok {
            Ok(self.bump().1)
        } else {
            self.syntax(what)
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, Pos)> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let pos = self.bump().1;
                Ok((s, pos))
            }
            _ => self.syntax(what),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<()> {
        match self.peek() {
            Tok::Ident(s) if s == kw => {
                self.bump();
                Ok(())
            }
            _ => self.syntax(&format!("'{kw}'")),
        }
    }

    fn binder(&mut self, what: &str) -> Result<String> {
        let (name, pos) = self.ident(what)?;
        if RESERVED.contains(&name.as_str()) {
            return Err(DslError::Syntax {
                msg: format!("'{name}' is reserved"),
                pos,
            });
        }
        Ok(name)
    }

    fn int(&mut self, what: &str) -> Result<u64> {
        match *self.peek() {
            Tok::Int(v) => {
                self.bump();
                Ok(v)
            }
            _ => self.syntax(what),
        }
    }

    fn kernel(&mut self) -> Result<KernelSource> {
        self.keyword("kernel")?;
        let name = self.binder("kernel name")?;
        self.expect(Tok::LParen, "'('")?;
        let reg_name = self.binder("register name")?;
        let size = if *self.peek() == Tok::LBracket {
            self.bump();
            let n = self.int("register size")? as usize;
            self.expect(Tok::RBracket, "']'")?;
            Some(n)
        } else {
            None
        };
        self.register = reg_name.clone();
        while *self.peek() == Tok::Comma {
            self.bump();
            let pos = self.pos();
            let p = self.binder("parameter name")?;
            if p == self.register || self.scalars.contains(&p) {
                return Err(DslError::Syntax {
                    msg: format!("duplicate parameter '{p}'"),
                    pos,
                });
            }
            self.scalars.push(p);
        }
        self.expect(Tok::RParen, "')' or ','")?;
        let body = self.block()?;
        if *self.peek() != Tok::Eof {
            return self.syntax("end of input");
        }
        Ok(KernelSource {
            name,
            register: Register {
                name: reg_name,
                size,
            },
            scalar_params: self.scalars.clone(),
            body,
        })
    }

    fn block(&mut self) -> Result<Vec<Stmt>> {
        self.expect(Tok::LBrace, "'{'")?;
        let mut out = Vec::new();
        while *self.peek() != Tok::RBrace {
            if *self.peek() == Tok::Eof {
                return self.syntax("'}'");
            }
            out.push(self.stmt()?);
        }
        self.bump();
        Ok(out)
    }

    fn stmt(&mut self) -> Result<Stmt> {
        let (name, pos) = self.ident("a gate name or 'for'")?;
        if name == "for" {
            return self.for_loop(pos).map(Stmt::For);
        }
        let gate = GateKind::from_name(&name).ok_or(DslError::UnknownGate {
            name: name.clone(),
            pos,
        })?;
        self.expect(Tok::LParen, "'('")?;
        let mut args = Vec::new();
        if *self.peek() != Tok::RParen {
            args.push(self.arg()?);
            while *self.peek() == Tok::Comma {
                self.bump();
                args.push(self.arg()?);
            }
        }
        self.expect(Tok::RParen, "')' or ','")?;
        self.expect(Tok::Semi, "';'")?;
        check_args(gate, &args, pos)?;
        Ok(Stmt::Gate(GateCall {
            gate,
            args,
            span: Span(pos),
        }))
    }

    fn for_loop(&mut self, pos: Pos) -> Result<ForLoop> {
        let var = self.binder("loop variable")?;
        self.keyword("in")?;
        let start = self.bound()?;
        self.expect(Tok::DotDot, "'..'")?;
        let end = self.bound()?;
        self.loop_vars.push(var.clone());
        let body = self.block();
        self.loop_vars.pop();
        Ok(ForLoop {
            var,
            start,
            end,
            body: body?,
            span: Span(pos),
        })
    }

    fn bound(&mut self) -> Result<Bound> {
        match self.peek().clone() {
            Tok::Int(v) => {
                self.bump();
                Ok(Bound::Lit(v as usize))
            }
            Tok::Ident(name) => {
                let pos = self.bump().1;
                if name != self.register {
                    return Err(DslError::UnboundIdentifier { name, pos });
                }
                self.expect(Tok::Dot, "'.'")?;
                let (m, mpos) = self.ident("'size'")?;
                if m != "size" {
                    return Err(DslError::Syntax {
                        msg: format!("registers only have 'size()', not '{m}'"),
                        pos: mpos,
                    });
                }
                self.expect(Tok::LParen, "'('")?;
                self.expect(Tok::RParen, "')'")?;
                Ok(Bound::RegisterSize)
            }
            _ => self.syntax("a loop bound"),
        }
    }

    fn arg(&mut self) -> Result<Arg> {
        if let (Tok::Ident(name), Tok::LBracket) = (self.peek().clone(), self.peek2()) {
            let pos = self.bump().1;
            if name != self.register {
                return Err(DslError::UnboundIdentifier { name, pos });
            }
            self.bump();
            let index = self.index()?;
            self.expect(Tok::RBracket, "']'")?;
            return Ok(Arg::Qubit(QubitRef {
                register: name,
                index,
                span: Span(pos),
            }));
        }
        self.expr().map(Arg::Expr)
    }

    fn index(&mut self) -> Result<Index> {
        match self.peek().clone() {
            Tok::Int(v) => {
                self.bump();
                Ok(Index::Lit(v as usize))
            }
            Tok::Ident(name) => {
                let pos = self.bump().1;
                if !self.loop_vars.contains(&name) {
                    return Err(if self.scalars.contains(&name) {
                        DslError::Syntax {
                            msg: format!("scalar '{name}' cannot index a register"),
                            pos,
                        }
                    } else {
                        DslError::UnboundIdentifier { name, pos }
                    });
                }
                let sign = match self.peek() {
                    Tok::Plus => 1,
                    Tok::Minus => -1,
                    _ => return Ok(Index::Var { name, offset: 0 }),
                };
                self.bump();
                let k = self.int("an integer offset")? as i64;
                Ok(Index::Var {
                    name,
                    offset: sign * k,
                })
            }
            _ => self.syntax("a qubit index"),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.term()?));
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.factor()?));
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        match self.peek().clone() {
            Tok::Minus => {
                self.bump();
                Ok(Expr::Neg(Box::new(self.factor()?)))
            }
            Tok::Int(v) => {
                self.bump();
                Ok(Expr::Int(v))
            }
            Tok::Float(v) => {
                self.bump();
                Ok(Expr::Num(v))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Tok::Ident(name) => {
                let pos = self.bump().1;
                if name == "pi" {
                    Ok(Expr::Pi)
                } else if self.loop_vars.contains(&name) || self.scalars.contains(&name) {
                    Ok(Expr::Var(name, Span(pos)))
                } else if name == self.register {
                    Err(DslError::Syntax {
                        msg: format!("register '{name}' used as a value"),
                        pos,
                    })
                } else {
                    Err(DslError::UnboundIdentifier { name, pos })
                }
            }
            _ => self.syntax("an expression"),
        }
    }
}

fn check_args(gate: GateKind, args: &[Arg], pos: Pos) -> Result<()> {
    let sig = signature(gate);
    let bad = |msg: String| DslError::BadArguments {
        gate: gate.name().to_owned(),
        msg,
        pos,
    };
    if args.len() != sig.len() {
        return Err(bad(format!(
            "expected {} argument(s), got {}",
            sig.len(),
            args.len()
        )));
    }
    for (i, (arg, slot)) in args.iter().zip(sig).enumerate() {
        match (arg, slot) {
            (Arg::Qubit(_), Slot::Qubit) | (Arg::Expr(_), Slot::Value) => {}
            (Arg::Expr(_), Slot::Qubit) => {
                return Err(bad(format!("argument {} must be a qubit", i + 1)))
            }
            (Arg::Qubit(_), Slot::Value) => {
                return Err(bad(format!("argument {} must be a value", i + 1)))
            }
        }
    }
    Ok(())
}
