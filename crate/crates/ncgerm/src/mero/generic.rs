//! Exact evaluation at tuples of generic matrices: matrices whose entries
//! are independent commuting indeterminates. The result of evaluating an nc
//! polynomial is a matrix of commutative polynomials, and its vanishing is an
//! exact identity test at that size.

use crate::exactmath::Scalar;
use crate::freealg::NcPoly;
use crate::guard::{check_entries, ResourceError};
use std::collections::BTreeMap;
use std::fmt;

/// A commutative polynomial in the generic-matrix entries xi^k_{ij},
/// indexed k-major then row-major: var index = k*n^2 + i*n + j. Monomials
/// are dense exponent vectors over those variables.
#[derive(Clone, PartialEq, Eq)]
pub struct CommPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u16>, Scalar>,
}

impl CommPoly {
    pub fn zero(nvars: usize) -> Self {
        CommPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        let mut out = CommPoly::zero(nvars);
        if !c.is_zero() {
            out.terms.insert(vec![0; nvars], c);
        }
        out
    }

    pub fn variable(nvars: usize, index: usize) -> Self {
        let mut exps = vec![0u16; nvars];
        exps[index] = 1;
        let mut out = CommPoly::zero(nvars);
        out.terms.insert(exps, Scalar::one());
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> Option<usize> {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as usize).sum())
            .max()
    }

    fn add_term(&mut self, exps: Vec<u16>, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
        }
    }

    pub fn add(&self, other: &CommPoly) -> CommPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        out
    }

    pub fn mul(&self, other: &CommPoly) -> CommPoly {
        let mut out = CommPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(exps, &(ca * cb));
            }
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> CommPoly {
        if c.is_zero() {
            return CommPoly::zero(self.nvars);
        }
        CommPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    /// Partial evaluation at one variable.
    pub fn substitute(&self, var: usize, value: &Scalar) -> CommPoly {
        let mut out = CommPoly::zero(self.nvars);
        for (exps, c) in &self.terms {
            let mut e = exps.clone();
            let power = e[var];
            e[var] = 0;
            out.add_term(e, &(c * &value.pow(power as u32)));
        }
        out
    }

    /// Degree in one variable.
    pub fn degree_in(&self, var: usize) -> usize {
        self.terms
            .keys()
            .map(|e| e[var] as usize)
            .max()
            .unwrap_or(0)
    }
}

/// A rational point where the polynomial does not vanish, found variable by
/// variable: a polynomial of degree d in one variable cannot vanish at all of
/// 0, 1, ..., d, so each substitution keeps the remainder nonzero.
pub fn nonvanishing_point(p: &CommPoly) -> Vec<Scalar> {
    assert!(!p.is_zero(), "zero polynomial has no nonvanishing point");
    let mut current = p.clone();
    let mut point = Vec::with_capacity(p.nvars);
    for var in 0..p.nvars {
        let d = current.degree_in(var);
        for c in 0..=d as i64 {
            let cand = current.substitute(var, &Scalar::from_int(c));
            if !cand.is_zero() {
                point.push(Scalar::from_int(c));
                current = cand;
                break;
            }
        }
        debug_assert_eq!(point.len(), var + 1);
    }
    debug_assert!(!current.is_zero());
    point
}

impl fmt::Debug for CommPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (i, &p) in e.iter().enumerate() {
                if p > 0 {
                    write!(f, "*v{i}")?;
                    if p > 1 {
                        write!(f, "^{p}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Evaluate p at the g-tuple of n x n generic matrices. The zero test of the
/// result is an exact polynomial identity test at size n.
pub fn generic_evaluate(p: &NcPoly, n: usize) -> Result<Vec<Vec<CommPoly>>, ResourceError> {
    let g = p.g();
    let nvars = g * n * n;
    let var = |k: usize, i: usize, j: usize| CommPoly::variable(nvars, k * n * n + i * n + j);
    let generic: Vec<Vec<Vec<CommPoly>>> = (0..g)
        .map(|k| {
            (0..n)
                .map(|i| (0..n).map(|j| var(k, i, j)).collect())
                .collect()
        })
        .collect();

    let identity: Vec<Vec<CommPoly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    CommPoly::constant(
                        nvars,
                        if i == j {
                            Scalar::one()
                        } else {
                            Scalar::zero()
                        },
                    )
                })
                .collect()
        })
        .collect();
    let zero_mat: Vec<Vec<CommPoly>> = (0..n)
        .map(|_| (0..n).map(|_| CommPoly::zero(nvars)).collect())
        .collect();

    let mat_mul = |a: &Vec<Vec<CommPoly>>, b: &Vec<Vec<CommPoly>>| -> Vec<Vec<CommPoly>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut acc = CommPoly::zero(nvars);
                        for k in 0..n {
                            if !a[i][k].is_zero() && !b[k][j].is_zero() {
                                acc = acc.add(&a[i][k].mul(&b[k][j]));
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect()
    };

    let mut acc = zero_mat;
    for (w, c) in p.terms() {
        let mut prod = identity.clone();
        for &j in w.letters() {
            prod = mat_mul(&prod, &generic[j as usize - 1]);
            let monomials: usize = prod.iter().flatten().map(CommPoly::num_terms).sum();
            check_entries(monomials as u128)?;
        }
        for i in 0..n {
            for j in 0..n {
                acc[i][j] = acc[i][j].add(&prod[i][j].scale(c));
            }
        }
    }
    Ok(acc)
}

/// True iff every entry of the generic evaluation is the zero polynomial.
pub fn generic_is_zero(m: &[Vec<CommPoly>]) -> bool {
    m.iter().flatten().all(CommPoly::is_zero)
}
