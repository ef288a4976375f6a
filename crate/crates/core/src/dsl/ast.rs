use crate::sim::GateKind;

use super::Pos;

/// Source position attached to AST nodes. Spans never take part in
/// equality, so a re-parsed pretty-print compares equal to the original.
#[derive(Debug, Clone, Copy, Default)]
pub struct Span(pub Pos);

impl PartialEq for Span {
    fn eq(&self, _: &Span) -> bool {
        true
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelSource {
    pub name: String,
    pub register: Register,
    pub scalar_params: Vec<String>,
    pub body: Vec<Stmt>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Register {
    pub name: String,
    /// Declared size; `None` means the size is given at lowering.
    pub size: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Stmt {
    Gate(GateCall),
    For(ForLoop),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GateCall {
    pub gate: GateKind,
    pub args: Vec<Arg>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Arg {
    Qubit(QubitRef),
    Expr(Expr),
}

#[derive(Debug, Clone, PartialEq)]
pub struct QubitRef {
    pub register: String,
    pub index: Index,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Index {
    Lit(usize),
    /// Loop variable plus a constant offset.
    Var {
        name: String,
        offset: i64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForLoop {
    pub var: String,
    pub start: Bound,
    pub end: Bound,
    pub body: Vec<Stmt>,
    pub span: Span,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    Lit(usize),
    /// `q.size()`, resolved at lowering.
    RegisterSize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    pub fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Int(u64),
    Num(f64),
    Pi,
    /// Scalar parameter or loop variable.
    Var(String, Span),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
}
