//! Formal meromorphic expressions: parsing, evaluation on matrix tuples with
//! singularity tracking, identity testing on random and generic matrices,
//! and inner-rank estimation from matrix evaluations.

mod generic;
mod parse;

pub use generic::{generic_evaluate, generic_is_zero, nonvanishing_point, CommPoly};
pub use parse::{parse_expression, parse_program, SyntaxError};

use crate::exactmath::{matrix_inverse, Mat, MatTuple, Scalar};
use crate::freealg::{NcPoly, NcSeries};
use crate::jet::{evaluate, evaluate_series};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// A named atom of a meromorphic expression: an nc polynomial or a truncated
/// nc power series.
#[derive(Clone, Debug, PartialEq)]
pub enum Atom {
    Poly(NcPoly),
    Series(NcSeries),
}

impl Atom {
    pub fn g(&self) -> usize {
        match self {
            Atom::Poly(p) => p.g(),
            Atom::Series(s) => s.g(),
        }
    }

    pub fn is_series(&self) -> bool {
        matches!(self, Atom::Series(_))
    }
}

/// Atom table shared by the nodes of an expression. Letters x1..xg are
/// implicit and do not appear here.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct AtomTable {
    pub g: usize,
    pub atoms: Vec<(String, Atom)>,
}

impl AtomTable {
    pub fn new(g: usize) -> Self {
        AtomTable {
            g,
            atoms: Vec::new(),
        }
    }

    pub fn register(&mut self, name: &str, atom: Atom) -> usize {
        self.g = self.g.max(atom.g());
        self.atoms.push((name.to_string(), atom));
        self.atoms.len() - 1
    }

    pub fn lookup(&self, name: &str) -> Option<usize> {
        self.atoms.iter().position(|(n, _)| n == name)
    }

    pub fn has_series(&self) -> bool {
        self.atoms.iter().any(|(_, a)| a.is_series())
    }

    /// Smallest truncation order among series atoms, if any.
    pub fn series_order(&self) -> Option<usize> {
        self.atoms
            .iter()
            .filter_map(|(_, a)| match a {
                Atom::Series(s) => Some(s.order()),
                Atom::Poly(_) => None,
            })
            .min()
    }
}

/// Abstract syntax of a formal rational expression over the atoms.
#[derive(Clone, Debug, PartialEq)]
pub enum MeroExpr {
    Const(Scalar),
    Letter(u16),
    Atom(usize),
    Sum(Vec<MeroExpr>),
    Prod(Vec<MeroExpr>),
    Inv(Box<MeroExpr>),
}

impl MeroExpr {
    /// Child-index path rendering for singularity witnesses.
    fn describe_path(path: &[usize]) -> String {
        if path.is_empty() {
            "root".to_string()
        } else {
            let steps: Vec<String> = path.iter().map(usize::to_string).collect();
            format!("root.{}", steps.join("."))
        }
    }

    /// True when no inverse node occurs.
    pub fn is_inversion_free(&self) -> bool {
        match self {
            MeroExpr::Const(_) | MeroExpr::Letter(_) | MeroExpr::Atom(_) => true,
            MeroExpr::Sum(xs) | MeroExpr::Prod(xs) => xs.iter().all(Self::is_inversion_free),
            MeroExpr::Inv(_) => false,
        }
    }

    /// Expand an inversion-free expression over polynomial atoms into an
    /// nc polynomial. Returns None when an inverse or series atom occurs.
    pub fn expand_polynomial(&self, atoms: &AtomTable) -> Option<NcPoly> {
        let g = atoms.g.max(1);
        match self {
            MeroExpr::Const(c) => Some(NcPoly::constant(g, c.clone())),
            MeroExpr::Letter(j) => Some(NcPoly::letter(g, *j)),
            MeroExpr::Atom(i) => match &atoms.atoms[*i].1 {
                Atom::Poly(p) => Some(pad_letters(p, g)),
                Atom::Series(_) => None,
            },
            MeroExpr::Sum(xs) => {
                let mut acc = NcPoly::zero(g);
                for x in xs {
                    acc = acc.add(&x.expand_polynomial(atoms)?).ok()?;
                }
                Some(acc)
            }
            MeroExpr::Prod(xs) => {
                let mut acc = NcPoly::one(g);
                for x in xs {
                    acc = acc.mul(&x.expand_polynomial(atoms)?).ok()?;
                }
                Some(acc)
            }
            MeroExpr::Inv(_) => None,
        }
    }
}

/// Re-embed a polynomial into a larger letter alphabet.
fn pad_letters(p: &NcPoly, g: usize) -> NcPoly {
    if p.g() == g {
        return p.clone();
    }
    let mut out = NcPoly::zero(g);
    for (w, c) in p.terms() {
        out.add_term(w.clone(), c);
    }
    out
}

/// Evaluation result: a matrix, or the AST path of the inverse node whose
/// argument was singular.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum EvalOutcome {
    Value(Mat),
    Undefined { path: String },
}

impl EvalOutcome {
    pub fn value(&self) -> Option<&Mat> {
        match self {
            EvalOutcome::Value(m) => Some(m),
            EvalOutcome::Undefined { .. } => None,
        }
    }
}

/// Bottom-up evaluation; inverse nodes turn singular arguments into an
/// Undefined outcome carrying the node's path.
pub fn evaluate_expr(expr: &MeroExpr, atoms: &AtomTable, x: &MatTuple) -> EvalOutcome {
    let mut path = Vec::new();
    eval_rec(expr, atoms, x, &mut path)
}

fn eval_rec(
    expr: &MeroExpr,
    atoms: &AtomTable,
    x: &MatTuple,
    path: &mut Vec<usize>,
) -> EvalOutcome {
    let n = x.size();
    match expr {
        MeroExpr::Const(c) => EvalOutcome::Value(Mat::identity(n).scale(c)),
        MeroExpr::Letter(j) => EvalOutcome::Value(x.component(*j as usize - 1).clone()),
        MeroExpr::Atom(i) => EvalOutcome::Value(match &atoms.atoms[*i].1 {
            Atom::Poly(p) => evaluate(&pad_letters(p, x.g()), x),
            Atom::Series(s) => evaluate_series(
                &NcSeries::from_poly(&pad_letters(s.as_poly(), x.g()), s.order()),
                x,
            ),
        }),
        MeroExpr::Sum(xs) => {
            let mut acc = Mat::zeros(n, n);
            for (k, item) in xs.iter().enumerate() {
                path.push(k);
                match eval_rec(item, atoms, x, path) {
                    EvalOutcome::Value(v) => acc = acc.add(&v),
                    undefined => return undefined,
                }
                path.pop();
            }
            EvalOutcome::Value(acc)
        }
        MeroExpr::Prod(xs) => {
            let mut acc = Mat::identity(n);
            for (k, item) in xs.iter().enumerate() {
                path.push(k);
                match eval_rec(item, atoms, x, path) {
                    EvalOutcome::Value(v) => acc = acc.mul(&v),
                    undefined => return undefined,
                }
                path.pop();
            }
            EvalOutcome::Value(acc)
        }
        MeroExpr::Inv(inner) => {
            path.push(0);
            let out = match eval_rec(inner, atoms, x, path) {
                EvalOutcome::Value(v) => match matrix_inverse(&v) {
                    Ok(inv) => EvalOutcome::Value(inv),
                    Err(_) => {
                        path.pop();
                        return EvalOutcome::Undefined {
                            path: MeroExpr::describe_path(path),
                        };
                    }
                },
                undefined => return undefined,
            };
            path.pop();
            out
        }
    }
}

/// Verdict of the identity test at one matrix size.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum SizeVerdict {
    /// every defined evaluation was zero; `defined` counts the sampled
    /// evaluations and is 0 when the verdict came from the symbolic route
    Zero { defined: usize },
    /// a defined nonzero evaluation exists
    Nonzero { witness: MatTuple, entry: Scalar },
    /// no defined evaluation was found within the retry budget
    AllUndefined,
}

/// Identity-test report for one size, with the truncation qualifier for
/// series-bearing expressions.
#[derive(Clone, Debug, Serialize)]
pub struct SizeReport {
    pub n: usize,
    #[serde(flatten)]
    pub verdict: SizeVerdict,
    /// verdicts mean "zero modulo words of degree > D" when true
    pub truncated: bool,
    pub truncation_order: Option<usize>,
    /// true when the verdict is certain: nonzero witnesses always are, and
    /// zero verdicts are exact when confirmed on generic matrices
    pub exact: bool,
}

/// Options for [`identity_test`].
#[derive(Clone, Debug)]
pub struct IdentityTestOptions {
    pub trials: usize,
    pub seed: u64,
    /// random integer entries are drawn uniformly from [-bound, bound]
    pub bound: i64,
    /// resamples per trial before a point counts as undefined
    pub retry_cap: usize,
    /// confirm verdicts of inversion-free polynomial expressions on generic
    /// matrices where feasible (sizes <= 2, expanded degree <= 6)
    pub symbolic: bool,
}

impl Default for IdentityTestOptions {
    fn default() -> Self {
        IdentityTestOptions {
            trials: 50,
            seed: 0,
            bound: 10,
            retry_cap: 20,
            symbolic: true,
        }
    }
}

const SYMBOLIC_SIZE_CAP: usize = 2;
const SYMBOLIC_DEGREE_CAP: usize = 6;

pub fn random_tuple(rng: &mut impl Rng, g: usize, n: usize, bound: i64) -> MatTuple {
    let comps = (0..g)
        .map(|_| Mat::from_fn(n, n, |_, _| Scalar::from_int(rng.gen_range(-bound..=bound))))
        .collect();
    MatTuple::new(comps).expect("square components")
}

/// Evaluate the expression at `trials` random integer tuples per size.
/// Nonzero verdicts are exact; Zero verdicts are probabilistic for the
/// polynomial parts and truncation-bounded for series atoms, except that
/// inversion-free polynomial expressions of low degree are confirmed exactly
/// on generic matrices at sizes <= 2. Within a trial, undefined samples are
/// redrawn up to the retry cap, so a size is declared AllUndefined only after
/// every trial exhausted its budget.
pub fn identity_test(
    expr: &MeroExpr,
    atoms: &AtomTable,
    sizes: &[usize],
    opts: &IdentityTestOptions,
) -> Vec<SizeReport> {
    let g = atoms.g.max(1);
    let truncated = atoms.has_series();
    let expanded = if opts.symbolic {
        expr.expand_polynomial(atoms)
            .filter(|p| p.degree().unwrap_or(0) <= SYMBOLIC_DEGREE_CAP)
    } else {
        None
    };
    sizes
        .iter()
        .map(|&n| {
            // one independent stream per size keeps reports stable under
            // reordering of the size list
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ (n as u64) << 32);
            let symbolic = expanded
                .as_ref()
                .filter(|_| n <= SYMBOLIC_SIZE_CAP)
                .and_then(|p| generic_evaluate(p, n).ok());
            if let Some(m) = &symbolic {
                if generic_is_zero(m) {
                    return SizeReport {
                        n,
                        verdict: SizeVerdict::Zero { defined: 0 },
                        truncated,
                        truncation_order: atoms.series_order(),
                        exact: true,
                    };
                }
            }
            let mut defined = 0usize;
            let mut nonzero: Option<(MatTuple, Scalar)> = None;
            for _ in 0..opts.trials {
                for _ in 0..opts.retry_cap.max(1) {
                    let x = random_tuple(&mut rng, g, n, opts.bound);
                    match evaluate_expr(expr, atoms, &x) {
                        EvalOutcome::Undefined { .. } => continue,
                        EvalOutcome::Value(v) => {
                            defined += 1;
                            if !v.is_zero() && nonzero.is_none() {
                                let entry = v
                                    .entries()
                                    .iter()
                                    .find(|e| !e.is_zero())
                                    .cloned()
                                    .unwrap_or_else(Scalar::zero);
                                nonzero = Some((x, entry));
                            }
                            break;
                        }
                    }
                }
                if nonzero.is_some() {
                    break;
                }
            }
            // a symbolically nonzero expression always has a constructible
            // witness, even if sampling missed it
            if nonzero.is_none() {
                if let Some(m) = &symbolic {
                    let entry = m
                        .iter()
                        .flatten()
                        .find(|e| !e.is_zero())
                        .expect("nonzero symbolic matrix");
                    let point = generic::nonvanishing_point(entry);
                    let x = MatTuple::from_coords(g, n, &point);
                    if let EvalOutcome::Value(v) = evaluate_expr(expr, atoms, &x) {
                        let entry = v
                            .entries()
                            .iter()
                            .find(|e| !e.is_zero())
                            .cloned()
                            .unwrap_or_else(Scalar::zero);
                        nonzero = Some((x, entry));
                    }
                }
            }
            let exact = nonzero.is_some();
            let verdict = match nonzero {
                Some((witness, entry)) => SizeVerdict::Nonzero { witness, entry },
                None if defined > 0 => SizeVerdict::Zero { defined },
                None => SizeVerdict::AllUndefined,
            };
            SizeReport {
                n,
                verdict,
                truncated,
                truncation_order: atoms.series_order(),
                exact,
            }
        })
        .collect()
}

/// Best observed rank ratio of a matrix of nc polynomials: the maximum of
/// rank(A(X)) / n over sampled X of sizes 1..=nmax, as an exact rational with
/// the witnessing size and point. Always a lower bound for the inner rank,
/// and equal to it when the maximum is attained; a ratio of min(rows, cols)
/// certifies fullness.
#[derive(Clone, Debug, Serialize)]
pub struct InnerRankReport {
    pub ratio: Scalar,
    pub witness_size: usize,
    pub witness: MatTuple,
    pub full: bool,
}

pub fn inner_rank_estimate(
    a: &[Vec<NcPoly>],
    nmax: usize,
    trials: usize,
    seed: u64,
    bound: i64,
) -> InnerRankReport {
    let d = a.len();
    let e = a.first().map_or(0, Vec::len);
    assert!(d > 0 && e > 0, "matrix must be nonempty");
    let g = a
        .iter()
        .flatten()
        .map(NcPoly::g)
        .max()
        .expect("nonempty matrix");
    let mut best: Option<(Scalar, usize, MatTuple)> = None;
    for n in 1..=nmax.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64) << 32);
        for _ in 0..trials.max(1) {
            let x = random_tuple(&mut rng, g, n, bound);
            let mut big = Mat::zeros(d * n, e * n);
            for (i, row) in a.iter().enumerate() {
                for (j, p) in row.iter().enumerate() {
                    big.set_block(i * n, j * n, &evaluate(&pad_letters(p, g), &x));
                }
            }
            let ratio = Scalar::new(big.rank().into(), n.into());
            if best.as_ref().is_none_or(|(b, _, _)| ratio > *b) {
                best = Some((ratio, n, x));
            }
        }
    }
    let (ratio, witness_size, witness) = best.expect("at least one sample");
    let full = ratio == Scalar::from_int(d.min(e) as i64);
    InnerRankReport {
        ratio,
        witness_size,
        witness,
        full,
    }
}
