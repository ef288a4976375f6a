use std::f64::consts::PI;

use crate::sim::{Circuit, GateKind, Instruction};

use super::ast::*;
use super::{DslError, Pos, Result};

/// Unrolls `src` into a flat circuit over `register_size` qubits, binding
/// the scalar parameters to `args` in declaration order.
pub fn lower(src: &KernelSource, register_size: usize, args: &[f64]) -> Result<Circuit> {
    if args.len() != src.scalar_params.len() {
        return Err(DslError::Arity {
            expected: src.scalar_params.len(),
            got: args.len(),
        });
    }
    if let Some(declared) = src.register.size {
        if declared != register_size {
            return Err(DslError::SizeMismatch {
                declared,
                given: register_size,
            });
        }
    }
    let mut cx = Lowering {
        size: register_size,
        scalars: src
            .scalar_params
            .iter()
            .cloned()
            .zip(args.iter().copied())
            .collect(),
        loops: Vec::new(),
        circuit: Circuit::new(src.name.clone(), register_size),
    };
    cx.block(&src.body)?;
    Ok(cx.circuit)
}

struct Lowering {
    size: usize,
    scalars: Vec<(String, f64)>,
    loops: Vec<(String, i64)>,
    circuit: Circuit,
}

impl Lowering {
    fn block(&mut self, body: &[Stmt]) -> Result<()> {
        for stmt in body {
            match stmt {
                Stmt::Gate(g) => {
                    let inst = self.instruction(g)?;
                    self.circuit.push(inst)?;
                }
                Stmt::For(l) => {
                    let start = self.bound(l.start);
                    let end = self.bound(l.end);
                    for v in start..end {
                        self.loops.push((l.var.clone(), v as i64));
                        let r = self.block(&l.body);
                        self.loops.pop();
                        r?;
                    }
                }
            }
        }
        Ok(())
    }

    fn bound(&self, b: Bound) -> usize {
        match b {
            Bound::Lit(v) => v,
            Bound::RegisterSize => self.size,
        }
    }

    fn loop_value(&self, name: &str) -> Option<i64> {
        self.loops
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|(_, v)| *v)
    }

    fn qubit(&self, arg: &Arg) -> Result<usize> {
        let Arg::Qubit(q) = arg else {
            unreachable!("argument shapes are checked by the parser")
        };
        let index = match &q.index {
            Index::Lit(i) => *i as i64,
            Index::Var { name, offset } => {
                self.loop_value(name)
                    .ok_or_else(|| DslError::UnboundIdentifier {
                        name: name.clone(),
                        pos: q.span.0,
                    })?
                    + offset
            }
        };
        if index < 0 || index as usize >= self.size {
            return Err(DslError::IndexOutOfBounds {
                index,
                size: self.size,
                pos: q.span.0,
            });
        }
        Ok(index as usize)
    }

    fn value(&self, arg: &Arg) -> Result<f64> {
        let Arg::Expr(e) = arg else {
            unreachable!("argument shapes are checked by the parser")
        };
        self.eval(e)
    }

    fn eval(&self, e: &Expr) -> Result<f64> {
        Ok(match e {
            Expr::Int(v) => *v as f64,
            Expr::Num(v) => *v,
            Expr::Pi => PI,
            Expr::Var(name, span) => {
                if let Some(v) = self.loop_value(name) {
                    v as f64
                } else if let Some((_, v)) = self.scalars.iter().find(|(n, _)| n == name) {
                    *v
                } else {
                    return Err(DslError::UnboundIdentifier {
                        name: name.clone(),
                        pos: span.0,
                    });
                }
            }
            Expr::Neg(inner) => -self.eval(inner)?,
            Expr::Bin(op, a, b) => {
                let (a, b) = (self.eval(a)?, self.eval(b)?);
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a / b,
                }
            }
        })
    }

    /// Integer-valued argument; plain integer literals keep full `u64` range.
    fn integer(&self, arg: &Arg, pos: Pos, what: &str) -> Result<u64> {
        if let Arg::Expr(Expr::Int(v)) = arg {
            return Ok(*v);
        }
        let v = self.value(arg)?;
        if v.fract() != 0.0 || !(0.0..=(1u64 << 53) as f64).contains(&v) {
            return Err(DslError::BadValue {
                msg: format!("{what} must be a non-negative integer, got {v}"),
                pos,
            });
        }
        Ok(v as u64)
    }

    fn instruction(&self, g: &GateCall) -> Result<Instruction> {
        let pos = g.span.0;
        let a = &g.args;
        Ok(match g.gate {
            GateKind::H => Instruction::H(self.qubit(&a[0])?),
            GateKind::X => Instruction::X(self.qubit(&a[0])?),
            GateKind::Y => Instruction::Y(self.qubit(&a[0])?),
            GateKind::Z => Instruction::Z(self.qubit(&a[0])?),
            GateKind::S => Instruction::S(self.qubit(&a[0])?),
            GateKind::T => Instruction::T(self.qubit(&a[0])?),
            GateKind::Measure => Instruction::Measure(self.qubit(&a[0])?),
            GateKind::Rx => Instruction::Rx(self.qubit(&a[0])?, self.value(&a[1])?),
            GateKind::Ry => Instruction::Ry(self.qubit(&a[0])?, self.value(&a[1])?),
            GateKind::Rz => Instruction::Rz(self.qubit(&a[0])?, self.value(&a[1])?),
            GateKind::CX => Instruction::CX {
                control: self.qubit(&a[0])?,
                target: self.qubit(&a[1])?,
            },
            GateKind::CZ => Instruction::CZ {
                control: self.qubit(&a[0])?,
                target: self.qubit(&a[1])?,
            },
            GateKind::Swap => Instruction::Swap(self.qubit(&a[0])?, self.qubit(&a[1])?),
            GateKind::CPhase => Instruction::CPhase {
                control: self.qubit(&a[0])?,
                target: self.qubit(&a[1])?,
                angle: self.value(&a[2])?,
            },
            GateKind::CModMul => {
                let work_start = self.qubit(&a[1])?;
                let work_len = self.integer(&a[2], pos, "work width")? as usize;
                if work_start + work_len > self.size {
                    return Err(DslError::IndexOutOfBounds {
                        index: (work_start + work_len) as i64 - 1,
                        size: self.size,
                        pos,
                    });
                }
                Instruction::CModMul {
                    control: self.qubit(&a[0])?,
                    work_start,
                    work_len,
                    a: self.integer(&a[3], pos, "base")?,
                    modulus: self.integer(&a[4], pos, "modulus")?,
                }
            }
        })
    }
}
