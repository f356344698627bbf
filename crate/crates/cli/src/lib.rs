//! The `fockline` command line: `check`, `simulate`, `explain`, `probs` and
//! `oracle`. Commands run in-process and return their exit code and output
//! streams, so the binary is a thin wrapper and tests need no subprocess.

pub mod args;
mod commands;
pub mod render;

use std::ffi::OsString;
use std::path::Path;

use clap::Parser;
use fockline_core::dsl::{
    bind, eval_real, parse_bytes, parse_expr, validate, BindError, BoundCircuit, Circuit, ParamEnv,
};
use fockline_core::oracle::DEFAULT_DIM_CAP;

use args::{Cli, CommonArgs};

pub const EXIT_OK: i32 = 0;
pub const EXIT_SYNTAX: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

/// Environment variable overriding the oracle's dimension cap.
pub const DIM_CAP_VAR: &str = "FOCKLINE_DIM_CAP";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Settings that come from the environment rather than the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Settings {
    pub dim_cap: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            dim_cap: DEFAULT_DIM_CAP,
        }
    }
}

impl Settings {
    pub fn from_env() -> Result<Self, String> {
        match std::env::var(DIM_CAP_VAR) {
            Err(_) => Ok(Settings::default()),
            Ok(v) => match v.trim().parse::<usize>() {
                Ok(cap) if cap > 0 => Ok(Settings { dim_cap: cap }),
                _ => Err(format!("{DIM_CAP_VAR}={v:?} is not a positive integer")),
            },
        }
    }
}

#[derive(Debug)]
pub(crate) enum CliError {
    Syntax(String),
    Validation(Vec<String>),
    Runtime(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Syntax(_) => EXIT_SYNTAX,
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Runtime(_) => EXIT_RUNTIME,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Syntax(m) | CliError::Runtime(m) => format!("{m}\n"),
            CliError::Validation(lines) => lines.iter().map(|l| format!("{l}\n")).collect(),
        }
    }
}

/// Parses `args` (including the program name) and runs the command, with
/// settings read from the environment.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Settings::from_env() {
        Ok(settings) => run_with(args, &settings),
        Err(e) => Output {
            code: EXIT_RUNTIME,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

pub fn run_with<I, T>(args: I, settings: &Settings) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output {
                    code: EXIT_RUNTIME,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Output {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let mut stdout = String::new();
    let mut stderr = String::new();
    let code = match commands::execute(cli.command, settings, &mut stdout, &mut stderr) {
        Ok(code) => code,
        Err(e) => {
            stderr.push_str(&e.message());
            e.code()
        }
    };
    Output { code, stdout, stderr }
}

pub(crate) fn load(path: &Path) -> Result<Circuit, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::Runtime(format!("{}: cannot read: {e}", path.display())))?;
    parse_bytes(&bytes).map_err(|e| CliError::Syntax(format!("{}:{e}", path.display())))
}

pub(crate) fn check_valid(path: &Path, c: &Circuit) -> Result<(), CliError> {
    let diags = validate(c);
    if diags.is_empty() {
        Ok(())
    } else {
        Err(CliError::Validation(
            diags.iter().map(|d| format!("{}:{d}", path.display())).collect(),
        ))
    }
}

/// `name=value` with a constant expression for the value.
pub(crate) fn parse_binding(text: &str) -> Result<(String, f64), CliError> {
    let bad = |why: String| CliError::Runtime(format!("invalid parameter binding `{text}`: {why}"));
    let (name, value) = text.split_once('=').ok_or_else(|| bad("expected NAME=VALUE".into()))?;
    let expr = parse_expr(value.trim()).map_err(|e| bad(e.to_string()))?;
    let x = eval_real(&expr, &ParamEnv::new()).map_err(|e| bad(e.to_string()))?;
    Ok((name.trim().to_string(), x))
}

pub(crate) fn load_bound(path: &Path, opts: &CommonArgs) -> Result<BoundCircuit, CliError> {
    let c = load(path)?;
    check_valid(path, &c)?;
    let env = opts
        .params
        .iter()
        .map(|p| parse_binding(p))
        .collect::<Result<ParamEnv, _>>()?;
    bind(&c, &env).map_err(|e| match e {
        BindError::Invalid(diags) => {
            CliError::Validation(diags.iter().map(|d| format!("{}:{d}", path.display())).collect())
        }
        other => CliError::Runtime(format!("{}: {other}", path.display())),
    })
}
