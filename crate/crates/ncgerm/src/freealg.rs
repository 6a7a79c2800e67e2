//! Noncommutative polynomials and truncated power series over g letters.
//!
//! Words are sequences of 1-based letter indices ordered degree-
//! lexicographically, so term maps have a canonical iteration order and
//! equality is exact. Series carry a truncation order D and every operation
//! drops words longer than D.

use crate::exactmath::Scalar;
use itertools::Itertools;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FreeAlgError {
    #[error("letter-count mismatch: {0} vs {1}")]
    LetterMismatch(usize, usize),
    #[error("truncation-order mismatch: {0} vs {1}")]
    TruncationMismatch(usize, usize),
    #[error("letter index {0} out of range 1..={1}")]
    LetterOutOfRange(u16, usize),
}

/// A word in the free monoid: a sequence of 1-based letter indices.
/// The empty word is the unit.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<u16>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(j: u16) -> Self {
        Word(vec![j])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn letters(&self) -> &[u16] {
        &self.0
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        // degree-lexicographic
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for (j, run) in &self.0.iter().chunk_by(|&&j| j) {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            let count = run.count();
            if count == 1 {
                write!(f, "x{j}")?;
            } else {
                write!(f, "x{j}^{count}")?;
            }
        }
        Ok(())
    }
}

/// All words of length exactly `d` over `g` letters, in lexicographic order.
pub fn words_of_degree(g: usize, d: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    for _ in 0..d {
        out = out
            .iter()
            .flat_map(|w| (1..=g as u16).map(move |j| w.concat(&Word::letter(j))))
            .collect();
    }
    out
}

/// All words of length at most `d`, in deglex order.
pub fn words_up_to(g: usize, d: usize) -> Vec<Word> {
    (0..=d).flat_map(|k| words_of_degree(g, k)).collect()
}

/// A noncommutative polynomial: finitely many word terms with nonzero
/// rational coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct NcPoly {
    g: usize,
    terms: BTreeMap<Word, Scalar>,
}

impl NcPoly {
    pub fn zero(g: usize) -> Self {
        NcPoly {
            g,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(g: usize) -> Self {
        NcPoly::monomial(g, Word::empty(), Scalar::one())
    }

    pub fn constant(g: usize, c: Scalar) -> Self {
        NcPoly::monomial(g, Word::empty(), c)
    }

    pub fn letter(g: usize, j: u16) -> Self {
        assert!(1 <= j && j as usize <= g, "letter out of range");
        NcPoly::monomial(g, Word::letter(j), Scalar::one())
    }

    pub fn monomial(g: usize, w: Word, c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(w, c);
        }
        NcPoly { g, terms }
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest word length, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Word::len).max()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, w: &Word) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, w: Word, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
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

    pub fn add(&self, other: &NcPoly) -> Result<NcPoly, FreeAlgError> {
        self.check_g(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &NcPoly) -> Result<NcPoly, FreeAlgError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> NcPoly {
        self.scale(&Scalar::from_int(-1))
    }

    pub fn scale(&self, c: &Scalar) -> NcPoly {
        if c.is_zero() {
            return NcPoly::zero(self.g);
        }
        NcPoly {
            g: self.g,
            terms: self.terms.iter().map(|(w, v)| (w.clone(), v * c)).collect(),
        }
    }

    /// Concatenation product of words with coefficientwise sums.
    pub fn mul(&self, other: &NcPoly) -> Result<NcPoly, FreeAlgError> {
        self.mul_truncated(other, None)
    }

    fn mul_truncated(&self, other: &NcPoly, cap: Option<usize>) -> Result<NcPoly, FreeAlgError> {
        self.check_g(other)?;
        let mut out = NcPoly::zero(self.g);
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                if let Some(d) = cap {
                    if wa.len() + wb.len() > d {
                        continue;
                    }
                }
                out.add_term(wa.concat(wb), &(ca * cb));
            }
        }
        Ok(out)
    }

    /// Sum of the terms of word length exactly `d`.
    pub fn homogeneous_component(&self, d: usize) -> NcPoly {
        NcPoly {
            g: self.g,
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() == d)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// Drop all terms of degree greater than `d`.
    pub fn truncate(&self, d: usize) -> NcPoly {
        NcPoly {
            g: self.g,
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() <= d)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    fn check_g(&self, other: &NcPoly) -> Result<(), FreeAlgError> {
        if self.g != other.g {
            Err(FreeAlgError::LetterMismatch(self.g, other.g))
        } else {
            Ok(())
        }
    }
}

impl fmt::Debug for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if w.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{w:?}")?;
            } else {
                write!(f, "{c}*{w:?}")?;
            }
        }
        Ok(())
    }
}

/// A truncated nc power series: terms of word length at most `order`.
/// The (x_1,...,x_g)-adic topology of full series is modeled by truncation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NcSeries {
    order: usize,
    poly: NcPoly,
}

impl NcSeries {
    /// Truncate a polynomial to a series of the given order.
    pub fn from_poly(p: &NcPoly, order: usize) -> Self {
        NcSeries {
            order,
            poly: p.truncate(order),
        }
    }

    pub fn zero(g: usize, order: usize) -> Self {
        NcSeries {
            order,
            poly: NcPoly::zero(g),
        }
    }

    pub fn g(&self) -> usize {
        self.poly.g()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// The polynomial representative (all stored terms).
    pub fn as_poly(&self) -> &NcPoly {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn add(&self, other: &NcSeries) -> Result<NcSeries, FreeAlgError> {
        self.check(other)?;
        Ok(NcSeries {
            order: self.order,
            poly: self.poly.add(&other.poly)?,
        })
    }

    /// Product truncated to the common order.
    pub fn mul(&self, other: &NcSeries) -> Result<NcSeries, FreeAlgError> {
        self.check(other)?;
        Ok(NcSeries {
            order: self.order,
            poly: self.poly.mul_truncated(&other.poly, Some(self.order))?,
        })
    }

    fn check(&self, other: &NcSeries) -> Result<(), FreeAlgError> {
        if self.g() != other.g() {
            return Err(FreeAlgError::LetterMismatch(self.g(), other.g()));
        }
        if self.order != other.order {
            return Err(FreeAlgError::TruncationMismatch(self.order, other.order));
        }
        Ok(())
    }
}

/// Right transduction (left backward shift): maps sum a_w w to sum a_{x_j w} w,
/// stripping a leading x_j and deleting words that do not start with it.
/// The result is exact on stored terms; its reliable order drops by one.
pub fn transduct(j: u16, f: &NcSeries) -> Result<NcSeries, FreeAlgError> {
    if j == 0 || j as usize > f.g() {
        return Err(FreeAlgError::LetterOutOfRange(j, f.g()));
    }
    Ok(NcSeries {
        order: f.order.saturating_sub(1),
        poly: transduct_poly(j, f.as_poly())?,
    })
}

/// Transduction on polynomials.
pub fn transduct_poly(j: u16, f: &NcPoly) -> Result<NcPoly, FreeAlgError> {
    if j == 0 || j as usize > f.g() {
        return Err(FreeAlgError::LetterOutOfRange(j, f.g()));
    }
    let mut out = NcPoly::zero(f.g());
    for (w, c) in f.terms() {
        if w.letters().first() == Some(&j) {
            out.add_term(Word(w.letters()[1..].to_vec()), c);
        }
    }
    Ok(out)
}

/// The alternating polynomial h_s in two letters: the signed sum over
/// permutations of s+1 distinct powers of x_1 separated by s copies of x_2.
/// Since I, A, ..., A^s are linearly dependent in M_s (Cayley-Hamilton),
/// h_s vanishes identically on pairs of s x s matrices. It is homogeneous of
/// degree s(s+1)/2 + s with (s+1)! terms.
pub fn alternating_poly(s: usize) -> NcPoly {
    assert!(s >= 1);
    let mut out = NcPoly::zero(2);
    for perm in (0..=s).permutations(s + 1) {
        let mut word = Vec::new();
        for (slot, &power) in perm.iter().enumerate() {
            word.extend(std::iter::repeat_n(1u16, power));
            if slot < s {
                word.push(2);
            }
        }
        let sign = if permutation_parity(&perm) {
            Scalar::from_int(-1)
        } else {
            Scalar::one()
        };
        out.add_term(Word(word), &sign);
    }
    out
}

/// True for odd permutations.
fn permutation_parity(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    let mut odd = false;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        if len % 2 == 0 {
            odd = !odd;
        }
    }
    odd
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    word: Vec<u16>,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    g: usize,
    terms: Vec<TermRepr>,
}

impl Serialize for NcPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        PolyRepr {
            g: self.g,
            terms: self
                .terms
                .iter()
                .map(|(w, c)| TermRepr {
                    word: w.0.clone(),
                    coeff: c.to_string(),
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for NcPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = PolyRepr::deserialize(deserializer)?;
        let mut out = NcPoly::zero(repr.g);
        for t in repr.terms {
            for &j in &t.word {
                if j == 0 || j as usize > repr.g {
                    return Err(D::Error::custom(format!(
                        "letter {j} out of range 1..={}",
                        repr.g
                    )));
                }
            }
            let c: Scalar = t.coeff.parse().map_err(D::Error::custom)?;
            out.add_term(Word(t.word), &c);
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    #[serde(flatten)]
    poly: NcPoly,
    order: usize,
}

impl Serialize for NcSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        SeriesRepr {
            poly: self.poly.clone(),
            order: self.order,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for NcSeries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = SeriesRepr::deserialize(deserializer)?;
        Ok(NcSeries::from_poly(&repr.poly, repr.order))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(j: u16) -> NcPoly {
        NcPoly::letter(2, j)
    }

    #[test]
    fn product_of_letters() {
        let p = x(1).mul(&x(2)).unwrap();
        assert_eq!(p.num_terms(), 1);
        assert_eq!(p.coeff(&Word(vec![1, 2])), Scalar::one());
    }

    #[test]
    fn difference_of_squares() {
        let one = NcPoly::one(2);
        let p = one.add(&x(1)).unwrap();
        let q = one.sub(&x(1)).unwrap();
        let prod = p.mul(&q).unwrap();
        let mut expect = NcPoly::one(2);
        expect.add_term(Word(vec![1, 1]), &Scalar::from_int(-1));
        assert_eq!(prod, expect);
    }

    #[test]
    fn commutator_squared_expands() {
        let comm = x(1)
            .mul(&x(2))
            .unwrap()
            .sub(&x(2).mul(&x(1)).unwrap())
            .unwrap();
        let sq = comm.mul(&comm).unwrap();
        assert_eq!(sq.coeff(&Word(vec![1, 2, 1, 2])), Scalar::one());
        assert_eq!(sq.coeff(&Word(vec![1, 2, 2, 1])), Scalar::from_int(-1));
        assert_eq!(sq.coeff(&Word(vec![2, 1, 1, 2])), Scalar::from_int(-1));
        assert_eq!(sq.coeff(&Word(vec![2, 1, 2, 1])), Scalar::one());
        assert_eq!(sq.num_terms(), 4);
    }

    #[test]
    fn mismatched_letter_counts_rejected() {
        let p = NcPoly::letter(2, 1);
        let q = NcPoly::letter(3, 1);
        assert!(matches!(p.mul(&q), Err(FreeAlgError::LetterMismatch(2, 3))));
    }

    #[test]
    fn homogeneous_components() {
        let p = NcPoly::one(2)
            .add(&x(1))
            .unwrap()
            .add(&x(1).mul(&x(2)).unwrap())
            .unwrap();
        assert_eq!(p.homogeneous_component(2), x(1).mul(&x(2)).unwrap());
        assert!(p.homogeneous_component(7).is_zero());
        let h2 = alternating_poly(2);
        assert_eq!(h2.homogeneous_component(5), h2);
    }

    #[test]
    fn transduction_strips_leading_letter() {
        let x1x2 = NcPoly::monomial(2, Word(vec![1, 2]), Scalar::one());
        let s = NcSeries::from_poly(&x1x2, 4);
        assert_eq!(transduct(1, &s).unwrap().as_poly(), &NcPoly::letter(2, 2));
        assert!(transduct(2, &s).unwrap().is_zero());
    }

    #[test]
    fn transduction_termwise() {
        // L1(1 + 3 x1 + 5 x1 x1 x2) = 3 + 5 x1 x2
        let mut p = NcPoly::one(2);
        p.add_term(Word(vec![1]), &Scalar::from_int(3));
        p.add_term(Word(vec![1, 1, 2]), &Scalar::from_int(5));
        let out = transduct_poly(1, &p).unwrap();
        let mut expect = NcPoly::constant(2, Scalar::from_int(3));
        expect.add_term(Word(vec![1, 2]), &Scalar::from_int(5));
        assert_eq!(out, expect);
    }

    #[test]
    fn alternating_poly_shape() {
        let h1 = alternating_poly(1);
        // s = 1: x2 x1 - x1 x2, the alternation of {I, A} around one x2
        let mut expect = NcPoly::monomial(2, Word(vec![2, 1]), Scalar::one());
        expect.add_term(Word(vec![1, 2]), &Scalar::from_int(-1));
        assert_eq!(h1, expect);

        for s in 1..=3 {
            let h = alternating_poly(s);
            let deg = s * (s + 1) / 2 + s;
            assert_eq!(h.num_terms(), (1..=s + 1).product::<usize>());
            assert_eq!(h.degree(), Some(deg));
            assert_eq!(h.homogeneous_component(deg), h);
        }
    }

    #[test]
    fn series_mul_truncates() {
        let x1 = NcPoly::letter(1, 1);
        let geom = NcSeries::from_poly(
            &(0..=3).fold(NcPoly::zero(1), |acc, k| {
                acc.add(&NcPoly::monomial(1, Word(vec![1; k]), Scalar::one()))
                    .unwrap()
            }),
            3,
        );
        let one_minus = NcSeries::from_poly(&NcPoly::one(1).sub(&x1).unwrap(), 3);
        let prod = geom.mul(&one_minus).unwrap();
        assert_eq!(prod.as_poly(), &NcPoly::one(1));
    }

    #[test]
    fn poly_json_round_trip() {
        let p = NcPoly::monomial(2, Word(vec![1, 2, 1]), "3/2".parse().unwrap());
        let js = serde_json::to_string(&p).unwrap();
        assert_eq!(js, r#"{"g":2,"terms":[{"word":[1,2,1],"coeff":"3/2"}]}"#);
        let back: NcPoly = serde_json::from_str(&js).unwrap();
        assert_eq!(back, p);
    }
}
