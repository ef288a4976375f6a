use std::fmt::{self, Write};

use super::ast::*;

/// Canonical layout: four-space indent, one statement per line, binary
/// operations fully parenthesized. Parsing the output yields an equal AST.
impl fmt::Display for KernelSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "kernel {}({}", self.name, self.register.name)?;
        if let Some(n) = self.register.size {
            write!(f, "[{n}]")?;
        }
        for p in &self.scalar_params {
            write!(f, ", {p}")?;
        }
        f.write_str(") {\n")?;
        write_block(f, &self.body, &self.register.name, 1)?;
        f.write_str("}\n")
    }
}

fn write_block(f: &mut fmt::Formatter<'_>, body: &[Stmt], reg: &str, depth: usize) -> fmt::Result {
    let pad = "    ".repeat(depth);
    for stmt in body {
        match stmt {
            Stmt::Gate(g) => {
                let args: Vec<String> = g.args.iter().map(arg_text).collect();
                writeln!(f, "{pad}{}({});", g.gate, args.join(", "))?;
            }
            Stmt::For(l) => {
                writeln!(
                    f,
                    "{pad}for {} in {}..{} {{",
                    l.var,
                    bound_text(l.start, reg),
                    bound_text(l.end, reg)
                )?;
                write_block(f, &l.body, reg, depth + 1)?;
                writeln!(f, "{pad}}}")?;
            }
        }
    }
    Ok(())
}

fn bound_text(b: Bound, reg: &str) -> String {
    match b {
        Bound::Lit(v) => v.to_string(),
        Bound::RegisterSize => format!("{reg}.size()"),
    }
}

fn arg_text(arg: &Arg) -> String {
    match arg {
        Arg::Qubit(q) => match &q.index {
            Index::Lit(i) => format!("{}[{i}]", q.register),
            Index::Var { name, offset: 0 } => format!("{}[{name}]", q.register),
            Index::Var { name, offset } if *offset > 0 => {
                format!("{}[{name} + {offset}]", q.register)
            }
            Index::Var { name, offset } => {
                format!("{}[{name} - {}]", q.register, offset.unsigned_abs())
            }
        },
        Arg::Expr(e) => {
            let mut s = String::new();
            write_expr(&mut s, e);
            s
        }
    }
}

fn write_expr(out: &mut String, e: &Expr) {
    match e {
        Expr::Int(v) => write!(out, "{v}").unwrap(),
        // Debug keeps a '.' or exponent, so the text lexes back as a float
        Expr::Num(v) => write!(out, "{v:?}").unwrap(),
        Expr::Pi => out.push_str("pi"),
        Expr::Var(name, _) => out.push_str(name),
        Expr::Neg(inner) => {
            out.push('-');
            write_expr(out, inner);
        }
        Expr::Bin(op, a, b) => {
            out.push('(');
            write_expr(out, a);
            write!(out, " {} ", op.symbol()).unwrap();
            write_expr(out, b);
            out.push(')');
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::dsl::parse_kernel;

    #[test]
    fn reparse_is_equal() {
        let src = "kernel k(q[4], a, b) { for i in 1..q.size() { CPhase(q[i - 1], q[i], a * -b + 0.25 / pi); } Rz(q[0], 1e-3); }";
        let k = parse_kernel(src).unwrap();
        let text = k.to_string();
        assert_eq!(parse_kernel(&text).unwrap(), k, "{text}");
    }
}
