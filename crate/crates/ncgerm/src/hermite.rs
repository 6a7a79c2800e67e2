//! Free Hermite interpolation: given separated semisimple points and target
//! jets satisfying the truncated lost-abbey conditions, find an nc polynomial
//! with those jets. Also computes the minimal feasible degree and bases of
//! vanishing-ideal slices.
//!
//! Everything reduces to one exact linear system per candidate degree: the
//! unknowns are word coefficients, and each column is the flattened jet of a
//! word at the interpolation points, obtained from block-bidiagonal
//! evaluations with shared prefix products. The degree search ascends from 0
//! and the particular solution of the elimination solver (free variables
//! zero) makes the output deterministic.

use crate::exactmath::{solve_linear, Mat, MatTuple, Scalar, SolveOutcome};
use crate::freealg::{words_up_to, NcPoly, Word};
use crate::guard::ResourceError;
use crate::jet::{basis_tuple, basis_tuples, block_bidiagonal, evaluate_words_at, Jet};
use crate::lac::check_lac_truncated;
use crate::structure::{are_separated, StructureError};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HermiteError {
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("no solution within the degree cap {cap}: {hint}")]
    Infeasible { cap: usize, hint: String },
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Resource(#[from] ResourceError),
}

/// Interpolation data: pairwise separated semisimple points, one target jet
/// per point (all of order at least `order`), and a degree cap for the
/// search.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InterpolationProblem {
    pub points: Vec<MatTuple>,
    pub targets: Vec<Jet>,
    #[serde(rename = "L")]
    pub order: usize,
    #[serde(rename = "Dmax", default = "default_degree_cap")]
    pub degree_cap: usize,
}

pub fn default_degree_cap() -> usize {
    12
}

impl InterpolationProblem {
    pub fn validate(&self) -> Result<(), HermiteError> {
        if self.points.is_empty() || self.points.len() != self.targets.len() {
            return Err(HermiteError::PreconditionFailed(
                "need one target jet per point".into(),
            ));
        }
        let g = self.points[0].g();
        for (i, (y, jet)) in self.points.iter().zip(&self.targets).enumerate() {
            if y.g() != g {
                return Err(HermiteError::PreconditionFailed(
                    "points use different letter counts".into(),
                ));
            }
            if jet.base() != y {
                return Err(HermiteError::PreconditionFailed(format!(
                    "target {i} is based at a different point"
                )));
            }
            if jet.order() < self.order {
                return Err(HermiteError::PreconditionFailed(format!(
                    "target {i} has order {} < requested {}",
                    jet.order(),
                    self.order
                )));
            }
            let report = check_lac_truncated(y, &jet.truncate(self.order), self.order)?;
            if !report.holds {
                return Err(HermiteError::PreconditionFailed(format!(
                    "target {i} violates the truncated lost-abbey conditions ({} violations)",
                    report.violations.len()
                )));
            }
        }
        match are_separated(&self.points) {
            Ok(true) => Ok(()),
            Ok(false) => Err(HermiteError::PreconditionFailed(
                "points are not separated".into(),
            )),
            Err(e) => Err(HermiteError::PreconditionFailed(format!(
                "separation test failed: {e}"
            ))),
        }
    }

    fn g(&self) -> usize {
        self.points[0].g()
    }

    /// Degree bound from the generation-degree estimate for the matrix
    /// algebra spanned by the interpolation data: 2N log2 N + 4N - 4 with
    /// N the total size of the block points (N = sum of point sizes when
    /// order = 0).
    pub fn theoretical_degree_bound(&self) -> usize {
        let l = self.order;
        let sizes_cubed: usize = self.points.iter().map(|y| y.size().pow(3)).sum();
        let n = if l == 0 {
            self.points.iter().map(MatTuple::size).sum::<usize>()
        } else {
            l * (l + 1) * self.g() * sizes_cubed
        };
        if n <= 1 {
            return 0;
        }
        // 2 N log2(N) + 4N - 4, rounded up through the bit length of N so
        // the cap stays integer-exact
        let log2_ceil = usize::BITS - (n - 1).leading_zeros();
        (2 * n)
            .saturating_mul(log2_ceil as usize)
            .saturating_add(4 * n - 4)
    }
}

/// Flatten jet data through `order` in the row order used by the
/// interpolation system: order, then tuple index, then entry (row-major).
pub fn flatten_jet(jet: &Jet, order: usize) -> Vec<Scalar> {
    let s = jet.base().size();
    let dim = jet.base().g() * s * s;
    let mut out = Vec::new();
    for ell in 0..=order {
        let map = jet.map(ell);
        for slots in basis_tuples(dim, ell) {
            out.extend(map.value_at(&slots).entries().iter().cloned());
        }
    }
    out
}

/// Flattened jets of every word at every point: the column of the
/// interpolation system for each word.
fn word_columns(
    points: &[MatTuple],
    order: usize,
    words: &[Word],
) -> Result<Vec<Vec<Scalar>>, ResourceError> {
    let rows: u128 = points
        .iter()
        .map(|y| {
            (0..=order as u32)
                .map(|ell| {
                    let dim = (y.g() * y.size() * y.size()) as u128;
                    dim.checked_pow(ell).unwrap_or(u128::MAX)
                })
                .sum::<u128>()
                .saturating_mul((y.size() * y.size()) as u128)
        })
        .sum();
    crate::guard::check_entries(rows.saturating_mul(words.len() as u128))?;
    let mut columns = vec![Vec::new(); words.len()];
    for y in points {
        let s = y.size();
        let g = y.g();
        crate::guard::check_entries(crate::guard::tensor_entries(s, g, order))?;
        let dim = g * s * s;
        for ell in 0..=order {
            for slots in basis_tuples(dim, ell) {
                let zs: Vec<MatTuple> = slots.iter().map(|&i| basis_tuple(g, s, i)).collect();
                let point = block_bidiagonal(y, &zs);
                let values = evaluate_words_at(words, &point);
                for (wi, big) in values.iter().enumerate() {
                    let block = big.block(0, ell * s, s, s);
                    columns[wi].extend(block.entries().iter().cloned());
                }
            }
        }
    }
    Ok(columns)
}

fn poly_from_coefficients(g: usize, words: &[Word], coeffs: &Mat) -> NcPoly {
    let mut p = NcPoly::zero(g);
    for (i, w) in words.iter().enumerate() {
        p.add_term(w.clone(), coeffs.at(i, 0));
    }
    p
}

fn solve_at_degree(
    prob: &InterpolationProblem,
    rhs: &[Scalar],
    degree: usize,
) -> Result<Option<NcPoly>, HermiteError> {
    let g = prob.g();
    let words = words_up_to(g, degree);
    let columns = word_columns(&prob.points, prob.order, &words)?;
    let rows = rhs.len();
    let a = Mat::from_fn(rows, words.len(), |r, c| columns[c][r].clone());
    let b = Mat::col_vec(rhs);
    match solve_linear(&a, &b).map_err(|e| HermiteError::PreconditionFailed(e.to_string()))? {
        SolveOutcome::Solution { x, .. } => Ok(Some(poly_from_coefficients(g, &words, &x))),
        SolveOutcome::Inconsistent => Ok(None),
    }
}

fn target_vector(prob: &InterpolationProblem) -> Vec<Scalar> {
    prob.targets
        .iter()
        .flat_map(|jet| flatten_jet(jet, prob.order))
        .collect()
}

/// Find an nc polynomial whose jets at the problem's points match the
/// targets through the requested order, trying degrees 0, 1, 2, ... up to
/// min(degree cap, theoretical bound).
pub fn interpolate(prob: &InterpolationProblem) -> Result<NcPoly, HermiteError> {
    prob.validate()?;
    let rhs = target_vector(prob);
    let bound = prob.theoretical_degree_bound();
    let cap = prob.degree_cap.min(bound);
    for d in 0..=cap {
        if let Some(p) = solve_at_degree(prob, &rhs, d)? {
            return Ok(p);
        }
    }
    Err(infeasible(cap, bound))
}

fn infeasible(cap: usize, bound: usize) -> HermiteError {
    let hint = if cap < bound {
        format!("degree cap {cap} hit before the theoretical bound {bound}; raise Dmax")
    } else {
        "infeasible within the theoretical degree bound; hypotheses are violated".to_string()
    };
    HermiteError::Infeasible { cap, hint }
}

/// The smallest degree at which the interpolation system is feasible.
pub fn min_degree(prob: &InterpolationProblem) -> Result<usize, HermiteError> {
    prob.validate()?;
    let rhs = target_vector(prob);
    let bound = prob.theoretical_degree_bound();
    let cap = prob.degree_cap.min(bound);
    for d in 0..=cap {
        if solve_at_degree(prob, &rhs, d)?.is_some() {
            return Ok(d);
        }
    }
    Err(infeasible(cap, bound))
}

/// Basis of the degree-at-most-d slice of the order-l vanishing ideal at Y:
/// polynomials killed by the block-bidiagonal points with l superdiagonal
/// slots, i.e. with all differentials through order l equal to zero.
pub fn vanishing_ideal_basis(
    y: &MatTuple,
    order: usize,
    degree: usize,
) -> Result<Vec<NcPoly>, ResourceError> {
    let g = y.g();
    let words = words_up_to(g, degree);
    let columns = word_columns(std::slice::from_ref(y), order, &words)?;
    let rows = columns[0].len();
    let a = Mat::from_fn(rows, words.len(), |r, c| columns[c][r].clone());
    Ok(a.kernel_basis()
        .iter()
        .map(|k| poly_from_coefficients(g, &words, k))
        .collect())
}
