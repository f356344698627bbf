use num_complex::Complex64;

use super::ast::*;
use super::expr::{eval_expr, eval_real, EvalError, ParamEnv};
use super::printer::element_text;
use super::validate::{photon_normalization, validate, Diagnostic};
use crate::algebra::PathLabel;
use crate::elements::Element;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BindError {
    #[error("circuit has {} validation diagnostic(s); first: {}", .0.len(), .0[0])]
    Invalid(Vec<Diagnostic>),
    #[error("unknown parameter `{0}` (not declared in the circuit)")]
    UnknownParam(String),
    #[error("line {line}: {source}")]
    Eval { line: usize, source: EvalError },
    #[error("line {line}: beam splitter eta={eta} is outside [0, 1]")]
    EtaOutOfRange { line: usize, eta: f64 },
    #[error("line {line}: {message}")]
    Unnormalized { line: usize, message: String },
}

#[derive(Clone, Debug, PartialEq)]
pub enum BoundSource {
    /// `h·a†_H + v·a†_V` on one path.
    Photon {
        path: PathLabel,
        h: Complex64,
        v: Complex64,
    },
    Coherent {
        path: PathLabel,
        alpha: Complex64,
        pol: SourcePol,
    },
    Vacuum {
        path: PathLabel,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundElement {
    pub element: Element,
    pub line: usize,
    /// Source text of the element, e.g. `bs eta=1 - t in=3,- out=5,6`.
    pub text: String,
}

/// A circuit with every expression evaluated.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundCircuit {
    /// Every path (declared and auto-declared), canonically sorted.
    pub paths: Vec<PathLabel>,
    pub sources: Vec<BoundSource>,
    pub elements: Vec<BoundElement>,
}

impl BoundCircuit {
    pub fn photon_count(&self) -> u32 {
        self.sources
            .iter()
            .filter(|s| matches!(s, BoundSource::Photon { .. }))
            .count() as u32
    }

    pub fn has_coherent(&self) -> bool {
        self.sources.iter().any(|s| matches!(s, BoundSource::Coherent { .. }))
    }
}

/// Resolves parameter values: explicit bindings override in-file defaults.
pub fn resolve_env(c: &Circuit, env: &ParamEnv) -> Result<ParamEnv, BindError> {
    if let Some(unknown) = env.names().find(|n| c.param(n).is_none()) {
        return Err(BindError::UnknownParam(unknown.to_string()));
    }
    let mut full = ParamEnv::new();
    for p in &c.params {
        if let Some(x) = env.get(&p.name).or(p.default) {
            full.set(&p.name, x);
        }
    }
    Ok(full)
}

pub fn bind(c: &Circuit, env: &ParamEnv) -> Result<BoundCircuit, BindError> {
    let diags = validate(c);
    if !diags.is_empty() {
        return Err(BindError::Invalid(diags));
    }
    let env = resolve_env(c, env)?;
    let real = |e: &Expr, line: usize| eval_real(e, &env).map_err(|source| BindError::Eval { line, source });
    let complex = |e: &Expr, line: usize| eval_expr(e, &env).map_err(|source| BindError::Eval { line, source });

    let mut sources = Vec::new();
    for (src, line) in c.sources() {
        sources.push(match src {
            Source::Photon { path, h, v } => {
                let (h, v) = (complex(h, line)?, complex(v, line)?);
                if let Some(message) = photon_normalization(h, v) {
                    return Err(BindError::Unnormalized { line, message });
                }
                BoundSource::Photon {
                    path: path.clone(),
                    h,
                    v,
                }
            }
            Source::Coherent { path, alpha, pol } => BoundSource::Coherent {
                path: path.clone(),
                alpha: complex(alpha, line)?,
                pol: *pol,
            },
            Source::Vacuum { path } => BoundSource::Vacuum { path: path.clone() },
        });
    }

    let mut elements = Vec::new();
    for (spec, line) in c.elements() {
        let element = match spec {
            ElementSpec::Bs { eta, inputs, outputs } => {
                let eta = real(eta, line)?;
                if !(0.0..=1.0).contains(&eta) {
                    return Err(BindError::EtaOutOfRange { line, eta });
                }
                Element::BeamSplitter {
                    eta,
                    inputs: inputs.clone(),
                    outputs: outputs.clone(),
                }
            }
            ElementSpec::Pbs { inputs, outputs } => Element::PolarizingBeamSplitter {
                inputs: inputs.clone(),
                outputs: outputs.clone(),
            },
            ElementSpec::Pr { theta, path } => Element::PhaseRetarder {
                theta: real(theta, line)?,
                path: path.clone(),
            },
            ElementSpec::Hwp { delta, path } => Element::HalfWavePlate {
                delta: real(delta, line)?,
                path: path.clone(),
            },
            ElementSpec::Basis { target, path } => Element::BasisChange {
                target: *target,
                path: path.clone(),
            },
        };
        elements.push(BoundElement {
            element,
            line,
            text: element_text(spec),
        });
    }

    Ok(BoundCircuit {
        paths: c.all_paths(),
        sources,
        elements,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parser::parse;

    const TEXT: &str = "paths 1,2\nparam a = 0.5\nparam t\n\
                        source photon path=1 h=cos(a) v=sin(a)*cis(t)\n\
                        bs eta=t in=1,- out=1,2\n";

    #[test]
    fn defaults_and_overrides() {
        let c = parse(TEXT).unwrap();
        let b = bind(&c, &ParamEnv::new().with("t", 0.25)).unwrap();
        match &b.sources[0] {
            BoundSource::Photon { h, .. } => assert!((h.re - 0.5f64.cos()).abs() < 1e-15),
            other => panic!("{other:?}"),
        }
        assert!(matches!(b.elements[0].element, Element::BeamSplitter { eta, .. } if eta == 0.25));
        assert_eq!(b.elements[0].text, "bs eta=t in=1,- out=1,2");
        let b = bind(&c, &ParamEnv::new().with("t", 0.25).with("a", 0.0)).unwrap();
        assert!(matches!(&b.sources[0], BoundSource::Photon { h, .. } if h.re == 1.0));
    }

    #[test]
    fn bind_errors() {
        let c = parse(TEXT).unwrap();
        assert!(matches!(
            bind(&c, &ParamEnv::new()),
            Err(BindError::Eval {
                line: 4,
                source: EvalError::UnboundParam(_)
            })
        ));
        assert_eq!(
            bind(&c, &ParamEnv::new().with("zz", 1.0)),
            Err(BindError::UnknownParam("zz".into()))
        );
        assert!(matches!(
            bind(&c, &ParamEnv::new().with("t", 1.2)),
            Err(BindError::EtaOutOfRange { line: 5, .. })
        ));
        let c = parse("paths 1\nparam x\nsource photon path=1 h=x v=1\n").unwrap();
        assert!(matches!(
            bind(&c, &ParamEnv::new().with("x", 1.0)),
            Err(BindError::Unnormalized { line: 3, .. })
        ));
        let c = parse("paths 1\nbs eta=1.2 in=1,- out=1,2\n").unwrap();
        assert!(matches!(bind(&c, &ParamEnv::new()), Err(BindError::Invalid(_))));
    }

    #[test]
    fn all_paths_include_auto_declared() {
        let c = parse("paths 2\nbs eta=0.5 in=2,- out=10,1\n").unwrap();
        let b = bind(&c, &ParamEnv::new()).unwrap();
        let names: Vec<&str> = b.paths.iter().map(|p| p.as_str()).collect();
        assert_eq!(names, ["1", "10", "2"]);
    }
}
