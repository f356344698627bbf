use crate::algebra::PathLabel;
use crate::elements::BasisTarget;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Func {
    Cos,
    Sin,
    Sqrt,
    /// `cis(x) = e^{ix}`
    Cis,
}

impl Func {
    pub const ALL: [Func; 4] = [Func::Cos, Func::Sin, Func::Sqrt, Func::Cis];

    pub fn name(self) -> &'static str {
        match self {
            Func::Cos => "cos",
            Func::Sin => "sin",
            Func::Sqrt => "sqrt",
            Func::Cis => "cis",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

/// Parameter expression. Literals are finite and non-negative; negative
/// numbers parse as `Neg(Num(..))`.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    Pi,
    Param(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn num(x: f64) -> Expr {
        if x < 0.0 {
            Expr::Neg(Box::new(Expr::Num(-x)))
        } else {
            Expr::Num(x)
        }
    }

    pub fn param(name: &str) -> Expr {
        Expr::Param(name.to_string())
    }

    pub fn call(f: Func, arg: Expr) -> Expr {
        Expr::Call(f, Box::new(arg))
    }

    /// Free parameter names, each once, in first-occurrence order.
    pub fn free_names(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Expr::Num(_) | Expr::Pi => {}
            Expr::Param(name) => {
                if !out.contains(&name.as_str()) {
                    out.push(name);
                }
            }
            Expr::Neg(e) | Expr::Call(_, e) => e.collect_names(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.collect_names(out);
                b.collect_names(out);
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParamDecl {
    pub name: String,
    pub default: Option<f64>,
}

/// Linear polarization of a coherent pulse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SourcePol {
    Plus45,
    Minus45,
    H,
    V,
}

impl SourcePol {
    pub fn keyword(self) -> &'static str {
        match self {
            SourcePol::Plus45 => "+45",
            SourcePol::Minus45 => "-45",
            SourcePol::H => "H",
            SourcePol::V => "V",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Source {
    Photon {
        path: PathLabel,
        h: Expr,
        v: Expr,
    },
    Coherent {
        path: PathLabel,
        alpha: Expr,
        pol: SourcePol,
    },
    Vacuum {
        path: PathLabel,
    },
}

impl Source {
    pub fn path(&self) -> &PathLabel {
        match self {
            Source::Photon { path, .. } | Source::Coherent { path, .. } | Source::Vacuum { path } => path,
        }
    }
}

/// Unbound element: angles and reflectance are expressions.
#[derive(Clone, Debug, PartialEq)]
pub enum ElementSpec {
    Bs {
        eta: Expr,
        inputs: [Option<PathLabel>; 2],
        outputs: [PathLabel; 2],
    },
    Pbs {
        inputs: [Option<PathLabel>; 2],
        outputs: [PathLabel; 2],
    },
    Pr {
        theta: Expr,
        path: PathLabel,
    },
    Hwp {
        delta: Expr,
        path: PathLabel,
    },
    Basis {
        target: BasisTarget,
        path: PathLabel,
    },
}

impl ElementSpec {
    pub fn input_paths(&self) -> Vec<&PathLabel> {
        match self {
            ElementSpec::Bs { inputs, .. } | ElementSpec::Pbs { inputs, .. } => inputs.iter().flatten().collect(),
            ElementSpec::Pr { path, .. } | ElementSpec::Hwp { path, .. } | ElementSpec::Basis { path, .. } => {
                vec![path]
            }
        }
    }

    pub fn output_paths(&self) -> Vec<&PathLabel> {
        match self {
            ElementSpec::Bs { outputs, .. } | ElementSpec::Pbs { outputs, .. } => outputs.iter().collect(),
            ElementSpec::Pr { path, .. } | ElementSpec::Hwp { path, .. } | ElementSpec::Basis { path, .. } => {
                vec![path]
            }
        }
    }

    pub fn exprs(&self) -> Vec<&Expr> {
        match self {
            ElementSpec::Bs { eta, .. } => vec![eta],
            ElementSpec::Pr { theta, .. } => vec![theta],
            ElementSpec::Hwp { delta, .. } => vec![delta],
            ElementSpec::Pbs { .. } | ElementSpec::Basis { .. } => vec![],
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum StatementKind {
    Source(Source),
    Element(ElementSpec),
}

/// A source or element line. Equality ignores the line number so that
/// re-printed circuits compare equal.
#[derive(Clone, Debug)]
pub struct Statement {
    pub kind: StatementKind,
    pub line: usize,
}

impl PartialEq for Statement {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

/// A parsed circuit file. Statement order is evolution order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Circuit {
    /// Paths from `paths` lines, in declaration order.
    pub paths: Vec<PathLabel>,
    pub params: Vec<ParamDecl>,
    pub statements: Vec<Statement>,
}

impl Circuit {
    pub fn sources(&self) -> impl Iterator<Item = (&Source, usize)> {
        self.statements.iter().filter_map(|s| match &s.kind {
            StatementKind::Source(src) => Some((src, s.line)),
            _ => None,
        })
    }

    pub fn elements(&self) -> impl Iterator<Item = (&ElementSpec, usize)> {
        self.statements.iter().filter_map(|s| match &s.kind {
            StatementKind::Element(e) => Some((e, s.line)),
            _ => None,
        })
    }

    pub fn param(&self, name: &str) -> Option<&ParamDecl> {
        self.params.iter().find(|p| p.name == name)
    }

    /// Declared paths followed by labels first introduced as element outputs,
    /// sorted canonically.
    pub fn all_paths(&self) -> Vec<PathLabel> {
        let mut all: Vec<PathLabel> = self.paths.clone();
        for (e, _) in self.elements() {
            for p in e.output_paths() {
                if !all.contains(p) {
                    all.push(p.clone());
                }
            }
        }
        all.sort();
        all
    }
}
