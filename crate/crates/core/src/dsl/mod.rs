//! The `.opt` circuit description language.
//!
//! ```text
//! paths <label>(,<label>)*
//! param <name> [= <number>]
//! source photon path=<p> h=<expr> v=<expr>
//! source coherent path=<p> alpha=<expr> pol=<+45|-45|H|V>
//! source vacuum path=<p>
//! bs eta=<expr> in=<p>,<p|-> out=<p>,<p>
//! pbs in=<p>,<p|-> out=<p>,<p>
//! pr theta=<expr> path=<p>
//! hwp delta=<expr> path=<p>
//! basis <RL|DIAG> path=<p>
//! ```
//!
//! `#` starts a comment, `-` is a vacuum input port, and output labels that
//! were never declared are declared by the element that produces them.

mod ast;
mod bind;
mod expr;
mod parser;
mod printer;
mod validate;

pub use ast::*;
pub use bind::{bind, resolve_env, BindError, BoundCircuit, BoundElement, BoundSource};
pub use expr::{eval_expr, eval_real, EvalError, ParamEnv, REAL_TOL};
pub use parser::{parse, parse_bytes, parse_expr, ParseError};
pub use printer::{element_text, pretty_print, print_expr, HEADER};
pub use validate::{validate, Diagnostic, NORMALIZATION_TOL};
