use std::fmt::Write;

use super::ast::*;
use crate::algebra::PathLabel;

pub const HEADER: &str = "# fockline circuit";

/// Canonical text form; `parse(pretty_print(c)) == c` for every circuit the
/// parser can produce.
pub fn pretty_print(c: &Circuit) -> String {
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    if !c.paths.is_empty() {
        let labels: Vec<&str> = c.paths.iter().map(PathLabel::as_str).collect();
        let _ = writeln!(out, "paths {}", labels.join(","));
    }
    for p in &c.params {
        match p.default {
            Some(x) => {
                let _ = writeln!(out, "param {} = {}", p.name, x);
            }
            None => {
                let _ = writeln!(out, "param {}", p.name);
            }
        }
    }
    for s in &c.statements {
        match &s.kind {
            StatementKind::Source(src) => print_source(&mut out, src),
            StatementKind::Element(e) => print_element(&mut out, e),
        }
        out.push('\n');
    }
    out
}

fn print_source(out: &mut String, src: &Source) {
    let _ = match src {
        Source::Photon { path, h, v } => {
            write!(out, "source photon path={path} h={} v={}", print_expr(h), print_expr(v))
        }
        Source::Coherent { path, alpha, pol } => write!(
            out,
            "source coherent path={path} alpha={} pol={}",
            print_expr(alpha),
            pol.keyword()
        ),
        Source::Vacuum { path } => write!(out, "source vacuum path={path}"),
    };
}

fn ports(p: &[Option<PathLabel>; 2]) -> String {
    let s = |x: &Option<PathLabel>| x.as_ref().map_or("-".to_string(), |l| l.to_string());
    format!("{},{}", s(&p[0]), s(&p[1]))
}

pub(crate) fn print_element(out: &mut String, e: &ElementSpec) {
    let _ = match e {
        ElementSpec::Bs { eta, inputs, outputs } => write!(
            out,
            "bs eta={} in={} out={},{}",
            print_expr(eta),
            ports(inputs),
            outputs[0],
            outputs[1]
        ),
        ElementSpec::Pbs { inputs, outputs } => {
            write!(out, "pbs in={} out={},{}", ports(inputs), outputs[0], outputs[1])
        }
        ElementSpec::Pr { theta, path } => write!(out, "pr theta={} path={path}", print_expr(theta)),
        ElementSpec::Hwp { delta, path } => write!(out, "hwp delta={} path={path}", print_expr(delta)),
        ElementSpec::Basis { target, path } => write!(out, "basis {} path={path}", target.keyword()),
    };
}

pub fn element_text(e: &ElementSpec) -> String {
    let mut s = String::new();
    print_element(&mut s, e);
    s
}

const PREC_ADD: u8 = 1;
const PREC_MUL: u8 = 2;
const PREC_UNARY: u8 = 3;
const PREC_ATOM: u8 = 4;

fn precedence(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => PREC_ADD,
        Expr::Mul(..) | Expr::Div(..) => PREC_MUL,
        Expr::Neg(_) => PREC_UNARY,
        Expr::Num(_) | Expr::Pi | Expr::Param(_) | Expr::Call(..) => PREC_ATOM,
    }
}

pub fn print_expr(e: &Expr) -> String {
    let mut s = String::new();
    write_expr(&mut s, e);
    s
}

fn write_operand(out: &mut String, e: &Expr, min_prec: u8) {
    if precedence(e) < min_prec {
        out.push('(');
        write_expr(out, e);
        out.push(')');
    } else {
        write_expr(out, e);
    }
}

fn write_expr(out: &mut String, e: &Expr) {
    match e {
        Expr::Num(x) => {
            let _ = write!(out, "{x}");
        }
        Expr::Pi => out.push_str("pi"),
        Expr::Param(name) => out.push_str(name),
        Expr::Neg(inner) => {
            out.push('-');
            write_operand(out, inner, PREC_UNARY);
        }
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            write_operand(out, a, PREC_ADD);
            out.push_str(if matches!(e, Expr::Add(..)) { " + " } else { " - " });
            write_operand(out, b, PREC_ADD + 1);
        }
        Expr::Mul(a, b) | Expr::Div(a, b) => {
            write_operand(out, a, PREC_MUL);
            out.push(if matches!(e, Expr::Mul(..)) { '*' } else { '/' });
            write_operand(out, b, PREC_MUL + 1);
        }
        Expr::Call(f, arg) => {
            out.push_str(f.name());
            out.push('(');
            write_expr(out, arg);
            out.push(')');
        }
    }
}
