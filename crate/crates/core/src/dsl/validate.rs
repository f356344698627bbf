use std::collections::BTreeSet;
use std::fmt;

use super::ast::*;
use super::expr::{eval_expr, eval_real, ParamEnv};
use crate::algebra::PathLabel;

/// Photon amplitudes must satisfy |h|²+|v|² = 1 within this tolerance.
pub const NORMALIZATION_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl Diagnostic {
    fn at(line: usize, message: impl Into<String>) -> Self {
        Diagnostic {
            line,
            column: 1,
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

/// Static checks. The list is empty iff every referenced path is declared
/// (explicitly, or as an earlier element output), sources precede elements
/// on their paths, no two sources share a path, no element writes into a
/// path that already carries light it does not consume, and every free
/// name is a declared parameter. Constant expressions are range-checked.
pub fn validate(c: &Circuit) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    let declared_params: BTreeSet<&str> = c.params.iter().map(|p| p.name.as_str()).collect();
    let mut live: BTreeSet<PathLabel> = c.paths.iter().cloned().collect();
    let mut occupied: BTreeSet<PathLabel> = BTreeSet::new();
    let mut sourced: BTreeSet<PathLabel> = BTreeSet::new();
    let mut touched: BTreeSet<PathLabel> = BTreeSet::new();

    let check_names = |e: &Expr, line: usize, diags: &mut Vec<Diagnostic>| {
        for name in e.free_names() {
            if !declared_params.contains(name) {
                diags.push(Diagnostic::at(line, format!("undeclared parameter `{name}`")));
            }
        }
    };

    for stmt in &c.statements {
        let line = stmt.line;
        match &stmt.kind {
            StatementKind::Source(src) => {
                let path = src.path();
                if !c.paths.contains(path) {
                    diags.push(Diagnostic::at(line, format!("source on undeclared path `{path}`")));
                }
                if !sourced.insert(path.clone()) {
                    diags.push(Diagnostic::at(line, format!("second source on path `{path}`")));
                }
                if touched.contains(path) {
                    diags.push(Diagnostic::at(
                        line,
                        format!("source on path `{path}` follows an element on that path"),
                    ));
                }
                match src {
                    Source::Photon { h, v, .. } => {
                        check_names(h, line, &mut diags);
                        check_names(v, line, &mut diags);
                        if let (Some(h), Some(v)) = (constant(h), constant(v)) {
                            if let Some(msg) = photon_normalization(h, v) {
                                diags.push(Diagnostic::at(line, msg));
                            }
                        }
                        occupied.insert(path.clone());
                    }
                    Source::Coherent { alpha, .. } => {
                        check_names(alpha, line, &mut diags);
                        occupied.insert(path.clone());
                    }
                    Source::Vacuum { .. } => {}
                }
            }
            StatementKind::Element(e) => {
                let ins = e.input_paths();
                let outs = e.output_paths();
                for p in &ins {
                    if !live.contains(*p) {
                        diags.push(Diagnostic::at(line, format!("undeclared path `{p}`")));
                    }
                }
                if let ElementSpec::Bs { inputs, outputs, .. } | ElementSpec::Pbs { inputs, outputs } = e {
                    if let [Some(a), Some(b)] = inputs {
                        if a == b {
                            diags.push(Diagnostic::at(line, format!("input ports repeat path `{a}`")));
                        }
                    }
                    if outputs[0] == outputs[1] {
                        diags.push(Diagnostic::at(
                            line,
                            format!("output ports repeat path `{}`", outputs[0]),
                        ));
                    }
                }
                for p in &outs {
                    if !ins.contains(p) && occupied.contains(*p) {
                        diags.push(Diagnostic::at(
                            line,
                            format!("output path `{p}` already carries light not consumed by this element"),
                        ));
                    }
                }
                for expr in e.exprs() {
                    check_names(expr, line, &mut diags);
                    match constant_real(expr) {
                        Some(Err(msg)) => diags.push(Diagnostic::at(line, msg)),
                        Some(Ok(x)) if matches!(e, ElementSpec::Bs { .. }) && !(0.0..=1.0).contains(&x) => {
                            diags.push(Diagnostic::at(line, format!("eta={x} is outside [0, 1]")));
                        }
                        Some(Ok(_)) | None => {}
                    }
                }
                for p in &ins {
                    occupied.remove(*p);
                    touched.insert((*p).clone());
                }
                for p in outs {
                    live.insert(p.clone());
                    occupied.insert(p.clone());
                    touched.insert(p.clone());
                }
            }
        }
    }
    diags
}

/// Value of an expression without free names.
fn constant(e: &Expr) -> Option<num_complex::Complex64> {
    if e.free_names().is_empty() {
        eval_expr(e, &ParamEnv::new()).ok()
    } else {
        None
    }
}

fn constant_real(e: &Expr) -> Option<Result<f64, String>> {
    if !e.free_names().is_empty() {
        return None;
    }
    Some(eval_real(e, &ParamEnv::new()).map_err(|err| err.to_string()))
}

pub(crate) fn photon_normalization(h: num_complex::Complex64, v: num_complex::Complex64) -> Option<String> {
    let n2 = h.norm_sqr() + v.norm_sqr();
    if (n2 - 1.0).abs() > NORMALIZATION_TOL {
        Some(format!("photon amplitudes are not normalized: |h|²+|v|² = {n2}"))
    } else {
        None
    }
}
