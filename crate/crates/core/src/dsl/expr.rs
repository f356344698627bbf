use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use super::ast::{Expr, Func};

/// Imaginary parts above this are rejected in real-valued contexts.
pub const REAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("parameter `{0}` has no value")]
    UnboundParam(String),
    #[error("domain error: {0}")]
    DomainError(String),
}

/// Parameter bindings, name → real value.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ParamEnv {
    values: BTreeMap<String, f64>,
}

impl ParamEnv {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.set(name, value);
        self
    }

    pub fn set(&mut self, name: &str, value: f64) {
        self.values.insert(name.to_string(), value);
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.values.get(name).copied()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.values.keys().map(String::as_str)
    }
}

impl<S: Into<String>> FromIterator<(S, f64)> for ParamEnv {
    fn from_iter<T: IntoIterator<Item = (S, f64)>>(iter: T) -> Self {
        ParamEnv {
            values: iter.into_iter().map(|(k, v)| (k.into(), v)).collect(),
        }
    }
}

pub fn eval_expr(e: &Expr, env: &ParamEnv) -> Result<Complex64, EvalError> {
    let value = eval_inner(e, env)?;
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(EvalError::DomainError("result is not finite".into()));
    }
    Ok(value)
}

/// Evaluates and requires a real result.
pub fn eval_real(e: &Expr, env: &ParamEnv) -> Result<f64, EvalError> {
    let z = eval_expr(e, env)?;
    if z.im.abs() > REAL_TOL {
        return Err(EvalError::DomainError(format!(
            "expected a real value, got {} + {}i",
            z.re, z.im
        )));
    }
    Ok(z.re)
}

fn eval_inner(e: &Expr, env: &ParamEnv) -> Result<Complex64, EvalError> {
    Ok(match e {
        Expr::Num(x) => Complex64::new(*x, 0.0),
        Expr::Pi => Complex64::new(PI, 0.0),
        Expr::Param(name) => Complex64::new(env.get(name).ok_or_else(|| EvalError::UnboundParam(name.clone()))?, 0.0),
        Expr::Neg(a) => -eval_inner(a, env)?,
        Expr::Add(a, b) => eval_inner(a, env)? + eval_inner(b, env)?,
        Expr::Sub(a, b) => eval_inner(a, env)? - eval_inner(b, env)?,
        Expr::Mul(a, b) => eval_inner(a, env)? * eval_inner(b, env)?,
        Expr::Div(a, b) => {
            let num = eval_inner(a, env)?;
            let den = eval_inner(b, env)?;
            if den.norm() == 0.0 {
                return Err(EvalError::DomainError("division by zero".into()));
            }
            num / den
        }
        Expr::Call(f, arg) => {
            let x = eval_inner(arg, env)?;
            match f {
                Func::Cos => x.cos(),
                Func::Sin => x.sin(),
                Func::Cis => (Complex64::i() * x).exp(),
                Func::Sqrt => {
                    if x.im == 0.0 {
                        if x.re < 0.0 {
                            return Err(EvalError::DomainError(format!("sqrt of negative value {}", x.re)));
                        }
                        Complex64::new(x.re.sqrt(), 0.0)
                    } else {
                        x.sqrt()
                    }
                }
            }
        }
    })
}
