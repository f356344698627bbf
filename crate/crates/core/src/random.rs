//! Seeded random circuits: physically valid ones for cross-checking the
//! backends, and structurally arbitrary ones for exercising the printer and
//! parser.

use std::f64::consts::PI;
use std::fmt::Write;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::PathLabel;
use crate::dsl::*;
use crate::elements::BasisTarget;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SourceKind {
    /// Single photons with random normalized polarization amplitudes.
    Photons,
    /// Coherent pulses with random complex amplitudes.
    Coherent,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomCircuitOptions {
    /// At least 2; paths are labeled `1`..`n`.
    pub max_paths: usize,
    pub max_sources: usize,
    pub max_elements: usize,
    pub sources: SourceKind,
}

impl Default for RandomCircuitOptions {
    fn default() -> Self {
        RandomCircuitOptions {
            max_paths: 4,
            max_sources: 2,
            max_elements: 8,
            sources: SourceKind::Photons,
        }
    }
}

/// A valid circuit of beam splitters, polarizing beam splitters, phase
/// retarders and basis changes. Two-port elements always take two live
/// paths and write back onto the same two, so no port is ever vacuum.
pub fn random_circuit<R: Rng + ?Sized>(rng: &mut R, opts: &RandomCircuitOptions) -> Circuit {
    assert!(opts.max_paths >= 2, "two-port elements need two paths");
    let n = rng.gen_range(2..=opts.max_paths);
    let labels: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let mut text = format!("paths {}\n", labels.join(","));

    let mut sourced = labels.clone();
    sourced.shuffle(rng);
    for path in sourced.iter().take(rng.gen_range(1..=opts.max_sources.clamp(1, n))) {
        match opts.sources {
            SourceKind::Photons => {
                let t: f64 = rng.gen_range(0.0..PI / 2.0);
                let (ph, pv): (f64, f64) = (rng.gen_range(-PI..PI), rng.gen_range(-PI..PI));
                let _ = writeln!(
                    text,
                    "source photon path={path} h=cos({t})*cis({ph}) v=sin({t})*cis({pv})"
                );
            }
            SourceKind::Coherent => {
                let r: f64 = rng.gen_range(0.1..1.5);
                let ph: f64 = rng.gen_range(-PI..PI);
                let pol = *[SourcePol::H, SourcePol::V, SourcePol::Plus45, SourcePol::Minus45]
                    .choose(rng)
                    .expect("non-empty");
                let _ = writeln!(
                    text,
                    "source coherent path={path} alpha={r}*cis({ph}) pol={}",
                    pol.keyword()
                );
            }
        }
    }

    for _ in 0..rng.gen_range(1..=opts.max_elements.max(1)) {
        let mut pair: Vec<&String> = labels.choose_multiple(rng, 2).collect();
        let (a, b) = (pair[0], pair[1]);
        if rng.gen_bool(0.5) {
            pair.reverse();
        }
        let (o1, o2) = (pair[0], pair[1]);
        let path = labels.choose(rng).expect("non-empty");
        let _ = match rng.gen_range(0..4) {
            0 => writeln!(text, "bs eta={} in={a},{b} out={o1},{o2}", rng.gen_range(0.0..=1.0)),
            1 => writeln!(text, "pbs in={a},{b} out={o1},{o2}"),
            2 => writeln!(text, "pr theta={} path={path}", rng.gen_range(-PI..PI)),
            _ => {
                let target = if rng.gen_bool(0.5) { "RL" } else { "DIAG" };
                writeln!(text, "basis {target} path={path}")
            }
        };
    }
    parse(&text).expect("generated circuits are syntactically valid")
}

/// `count` circuits from a ChaCha stream seeded with `seed`.
pub fn seeded_circuits(seed: u64, count: usize, opts: &RandomCircuitOptions) -> Vec<Circuit> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_circuit(&mut rng, opts)).collect()
}

const FUNCS: [Func; 4] = [Func::Cos, Func::Sin, Func::Sqrt, Func::Cis];

fn random_label<R: Rng + ?Sized>(rng: &mut R) -> String {
    const CHARS: &[u8] = b"abcXYZ0123456789_";
    (0..rng.gen_range(1..=3))
        .map(|_| *CHARS.choose(rng).expect("non-empty") as char)
        .collect()
}

fn random_number<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    match rng.gen_range(0..4) {
        0 => rng.gen_range(0..10) as f64,
        1 => rng.gen::<f64>(),
        2 => rng.gen::<f64>() * 10f64.powi(rng.gen_range(-12..12)),
        _ => [0.5, 0.25, 1e-7, 3.0e8][rng.gen_range(0..4)],
    }
}

/// A random expression of depth at most `depth`; literals are nonnegative
/// because the grammar spells negatives as unary minus.
pub fn random_expr<R: Rng + ?Sized>(rng: &mut R, names: &[String], depth: u32) -> Expr {
    let leaf = depth == 0 || rng.gen_bool(0.3);
    if leaf {
        return match rng.gen_range(0..3) {
            0 => Expr::Num(random_number(rng)),
            1 => Expr::Pi,
            _ => match names.choose(rng) {
                Some(n) => Expr::param(n),
                None => Expr::Num(random_number(rng)),
            },
        };
    }
    let sub = |rng: &mut R| Box::new(random_expr(rng, names, depth - 1));
    match rng.gen_range(0..6) {
        0 => Expr::Neg(sub(rng)),
        1 => Expr::Add(sub(rng), sub(rng)),
        2 => Expr::Sub(sub(rng), sub(rng)),
        3 => Expr::Mul(sub(rng), sub(rng)),
        4 => Expr::Div(sub(rng), sub(rng)),
        _ => Expr::Call(*FUNCS.choose(rng).expect("non-empty"), sub(rng)),
    }
}

/// A structurally arbitrary circuit: every statement form, random labels
/// and expressions, no guarantee of validity. Used for round-trip fuzzing.
pub fn random_ast<R: Rng + ?Sized>(rng: &mut R) -> Circuit {
    let mut c = Circuit::default();
    for _ in 0..rng.gen_range(0..5) {
        let l = PathLabel::new(random_label(rng));
        if !c.paths.contains(&l) {
            c.paths.push(l);
        }
    }
    let mut names: Vec<String> = Vec::new();
    for _ in 0..rng.gen_range(0..4) {
        let name = format!("k_{}", random_label(rng));
        if names.contains(&name) {
            continue;
        }
        names.push(name.clone());
        let default = if rng.gen_bool(0.5) {
            Some(random_number(rng) * if rng.gen_bool(0.5) { -1.0 } else { 1.0 })
        } else {
            None
        };
        c.params.push(ParamDecl { name, default });
    }
    let label = |rng: &mut R| match c.paths.choose(rng) {
        Some(p) if rng.gen_bool(0.8) => p.clone(),
        _ => PathLabel::new(random_label(rng)),
    };
    let mut statements = Vec::new();
    for line in 0..rng.gen_range(0..8) {
        let e = |rng: &mut R| random_expr(rng, &names, 3);
        let kind = match rng.gen_range(0..8) {
            0 => StatementKind::Source(Source::Photon {
                path: label(rng),
                h: e(rng),
                v: e(rng),
            }),
            1 => StatementKind::Source(Source::Coherent {
                path: label(rng),
                alpha: e(rng),
                pol: *[SourcePol::H, SourcePol::V, SourcePol::Plus45, SourcePol::Minus45]
                    .choose(rng)
                    .expect("non-empty"),
            }),
            2 => StatementKind::Source(Source::Vacuum { path: label(rng) }),
            3 | 4 => {
                let inputs = [
                    Some(label(rng)),
                    if rng.gen_bool(0.7) { Some(label(rng)) } else { None },
                ];
                let outputs = [label(rng), label(rng)];
                StatementKind::Element(if rng.gen_bool(0.5) {
                    ElementSpec::Bs {
                        eta: e(rng),
                        inputs,
                        outputs,
                    }
                } else {
                    ElementSpec::Pbs { inputs, outputs }
                })
            }
            5 => StatementKind::Element(ElementSpec::Pr {
                theta: e(rng),
                path: label(rng),
            }),
            6 => StatementKind::Element(ElementSpec::Hwp {
                delta: e(rng),
                path: label(rng),
            }),
            _ => StatementKind::Element(ElementSpec::Basis {
                target: if rng.gen_bool(0.5) {
                    BasisTarget::RL
                } else {
                    BasisTarget::Diag
                },
                path: label(rng),
            }),
        };
        statements.push(Statement { kind, line: line + 1 });
    }
    c.statements = statements;
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_circuits_are_valid_and_reproducible() {
        let opts = RandomCircuitOptions::default();
        let a = seeded_circuits(7, 50, &opts);
        assert_eq!(a, seeded_circuits(7, 50, &opts));
        for c in &a {
            assert!(validate(c).is_empty(), "{}", pretty_print(c));
            let bc = bind(c, &ParamEnv::new()).unwrap();
            assert!(bc.paths.len() <= 4);
            assert!((1..=2).contains(&bc.photon_count()));
        }
        let coherent = RandomCircuitOptions {
            sources: SourceKind::Coherent,
            ..opts
        };
        for c in seeded_circuits(3, 20, &coherent) {
            assert!(bind(&c, &ParamEnv::new()).unwrap().has_coherent());
        }
    }

    #[test]
    fn fuzzed_asts_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let c = random_ast(&mut rng);
            let text = pretty_print(&c);
            assert_eq!(parse(&text).unwrap(), c, "{text}");
        }
    }
}
