//! Evaluation of nc polynomials on matrix tuples and the higher differential
//! operators at a point, computed by block-upper-bidiagonal evaluation.
//!
//! Evaluating f at the (l+1)s-sized point with Y on the diagonal and the
//! tuples Z^1..Z^l on the superdiagonal produces f(Y) on the diagonal and the
//! l-th differential of f in the top-right block. Running this over basis
//! tuples fills the dense coefficient tensor of each differential; no
//! symbolic differentiation is involved. Jets additionally support the
//! convolution (Leibniz) product, inversion and ampliation.

use crate::exactmath::{Mat, MatTuple, Scalar};
use crate::freealg::{NcPoly, NcSeries, Word};
use crate::guard::{self, ResourceError};
use rayon::prelude::*;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::HashMap;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum JetError {
    #[error("basepoint mismatch between jets")]
    BasepointMismatch,
    #[error("jet orders differ: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("constant term is not invertible")]
    NotInvertible,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error(transparent)]
    Resource(#[from] ResourceError),
}

/// A multilinear map (M_s^g)^arity -> M_s stored as a dense coefficient
/// tensor: one s x s value per tuple of standard basis elements of M_s^g.
/// Basis elements are indexed by letter-major (j, p, q) with index
/// j*s^2 + p*s + q; tuple indices are slot-major over that base.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiMap {
    s: usize,
    g: usize,
    arity: usize,
    values: Vec<Mat>,
}

impl MultiMap {
    pub fn zero(s: usize, g: usize, arity: usize) -> Result<Self, ResourceError> {
        guard::check_entries(guard::tensor_entries(s, g, arity))?;
        let count = (g * s * s).pow(arity as u32);
        Ok(MultiMap {
            s,
            g,
            arity,
            values: vec![Mat::zeros(s, s); count],
        })
    }

    /// Arity-0 map: a single matrix.
    pub fn constant(g: usize, value: Mat) -> Self {
        assert!(value.is_square());
        MultiMap {
            s: value.rows(),
            g,
            arity: 0,
            values: vec![value],
        }
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Dimension of M_s^g (the number of basis inputs per slot).
    pub fn base_dim(&self) -> usize {
        self.g * self.s * self.s
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Mat::is_zero)
    }

    pub fn values(&self) -> &[Mat] {
        &self.values
    }

    /// Flat tuple index of per-slot basis indices.
    pub fn tuple_index(&self, slots: &[usize]) -> usize {
        debug_assert_eq!(slots.len(), self.arity);
        let dim = self.base_dim();
        slots.iter().fold(0, |acc, &i| acc * dim + i)
    }

    pub fn value_at(&self, slots: &[usize]) -> &Mat {
        &self.values[self.tuple_index(slots)]
    }

    pub fn set_value(&mut self, slots: &[usize], value: Mat) {
        let idx = self.tuple_index(slots);
        self.values[idx] = value;
    }

    /// Evaluate on arbitrary arguments given as coordinate vectors over the
    /// standard basis of M_s^g (multilinear expansion; skips zero coords).
    pub fn apply_coords(&self, args: &[Vec<Scalar>]) -> Mat {
        debug_assert_eq!(args.len(), self.arity);
        let dim = self.base_dim();
        let mut acc = Mat::zeros(self.s, self.s);
        let mut stack = vec![(0usize, 0usize, Scalar::one())];
        while let Some((slot, idx, coeff)) = stack.pop() {
            if slot == self.arity {
                acc = acc.add(&self.values[idx].scale(&coeff));
                continue;
            }
            for (c, x) in args[slot].iter().enumerate() {
                if !x.is_zero() {
                    stack.push((slot + 1, idx * dim + c, &coeff * x));
                }
            }
        }
        acc
    }

    /// Evaluate on matrix-tuple arguments.
    pub fn apply(&self, args: &[MatTuple]) -> Mat {
        let coords: Vec<Vec<Scalar>> = args.iter().map(MatTuple::to_coords).collect();
        self.apply_coords(&coords)
    }

    pub fn add(&self, other: &MultiMap) -> MultiMap {
        assert_eq!(
            (self.s, self.g, self.arity),
            (other.s, other.g, other.arity)
        );
        MultiMap {
            s: self.s,
            g: self.g,
            arity: self.arity,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &MultiMap) -> MultiMap {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> MultiMap {
        MultiMap {
            s: self.s,
            g: self.g,
            arity: self.arity,
            values: self.values.iter().map(|m| m.scale(c)).collect(),
        }
    }

    /// Blockwise extension to point size n*s: view tuples over M_{ns} as n x n
    /// block matrices of M_s tuples and apply the map along block paths, like
    /// matrix multiplication over the tensor algebra. On a tuple of basis
    /// elements only the chained block path survives.
    pub fn ampliate(&self, n: usize) -> Result<MultiMap, ResourceError> {
        assert!(n >= 1);
        let s = self.s;
        let ns = n * s;
        if self.arity == 0 {
            return Ok(MultiMap::constant(
                self.g,
                Mat::identity(n).kron(&self.values[0]),
            ));
        }
        let mut out = MultiMap::zero(ns, self.g, self.arity)?;
        let big_dim = out.base_dim();
        // decompose each big basis index into (letter, block row, block col, small index)
        let decode = |idx: usize| {
            let j = idx / (ns * ns);
            let rest = idx % (ns * ns);
            let p = rest / ns;
            let q = rest % ns;
            (j, p / s, q / s, j * s * s + (p % s) * s + (q % s))
        };
        let mut slots = vec![0usize; self.arity];
        loop {
            let parts: Vec<_> = slots.iter().map(|&i| decode(i)).collect();
            let chained = parts.windows(2).all(|w| w[0].2 == w[1].1);
            if chained {
                let small: Vec<usize> = parts.iter().map(|p| p.3).collect();
                let v = self.value_at(&small);
                if !v.is_zero() {
                    let row0 = parts[0].1 * s;
                    let col0 = parts[self.arity - 1].2 * s;
                    let mut big = Mat::zeros(ns, ns);
                    big.set_block(row0, col0, v);
                    out.set_value(&slots, big);
                }
            }
            // odometer over slots
            let mut k = self.arity;
            loop {
                if k == 0 {
                    return Ok(out);
                }
                k -= 1;
                slots[k] += 1;
                if slots[k] < big_dim {
                    break;
                }
                slots[k] = 0;
            }
        }
    }
}

/// A truncated formal nc germ: a basepoint and differentials of orders 0..=L.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Jet {
    base: MatTuple,
    maps: Vec<MultiMap>,
}

impl Jet {
    pub fn new(base: MatTuple, maps: Vec<MultiMap>) -> Result<Self, JetError> {
        for (ell, m) in maps.iter().enumerate() {
            if m.arity() != ell || m.s() != base.size() || m.g() != base.g() {
                return Err(JetError::ShapeMismatch(format!(
                    "map {ell} has arity {} at size {} (expected arity {ell} at size {})",
                    m.arity(),
                    m.s(),
                    base.size()
                )));
            }
        }
        if maps.is_empty() {
            return Err(JetError::ShapeMismatch("jet needs an order-0 map".into()));
        }
        Ok(Jet { base, maps })
    }

    /// Jet of the constant 1 about `base`.
    pub fn unit(base: MatTuple, order: usize) -> Result<Self, JetError> {
        let s = base.size();
        let g = base.g();
        let mut maps = vec![MultiMap::constant(g, Mat::identity(s))];
        for ell in 1..=order {
            maps.push(MultiMap::zero(s, g, ell)?);
        }
        Jet::new(base, maps)
    }

    pub fn base(&self) -> &MatTuple {
        &self.base
    }

    pub fn order(&self) -> usize {
        self.maps.len() - 1
    }

    pub fn map(&self, ell: usize) -> &MultiMap {
        &self.maps[ell]
    }

    pub fn maps(&self) -> &[MultiMap] {
        &self.maps
    }

    pub fn value(&self) -> &Mat {
        &self.maps[0].values()[0]
    }

    pub fn truncate(&self, order: usize) -> Jet {
        Jet {
            base: self.base.clone(),
            maps: self.maps[..=order.min(self.order())].to_vec(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.maps.iter().all(MultiMap::is_zero)
    }

    pub fn add(&self, other: &Jet) -> Result<Jet, JetError> {
        self.check_compatible(other)?;
        Ok(Jet {
            base: self.base.clone(),
            maps: self
                .maps
                .iter()
                .zip(&other.maps)
                .map(|(a, b)| a.add(b))
                .collect(),
        })
    }

    fn check_compatible(&self, other: &Jet) -> Result<(), JetError> {
        if self.base != other.base {
            return Err(JetError::BasepointMismatch);
        }
        if self.order() != other.order() {
            return Err(JetError::OrderMismatch(self.order(), other.order()));
        }
        Ok(())
    }
}

/// Substitute the tuple X for the letters of p; the unit word becomes the
/// identity matrix. Shared prefixes of the support are evaluated once.
pub fn evaluate(p: &NcPoly, x: &MatTuple) -> Mat {
    assert_eq!(p.g(), x.g(), "letter-count mismatch");
    let n = x.size();
    let words: Vec<&Word> = p.terms().map(|(w, _)| w).collect();
    let table = evaluate_words(&words, x);
    let mut acc = Mat::zeros(n, n);
    for (w, c) in p.terms() {
        acc = acc.add(&table[w.letters()].scale(c));
    }
    acc
}

/// Evaluate the truncated series via its polynomial representative.
pub fn evaluate_series(f: &NcSeries, x: &MatTuple) -> Mat {
    evaluate(f.as_poly(), x)
}

/// Evaluate many words at X, sharing prefix products; the output is aligned
/// with the input order.
pub fn evaluate_words_at(words: &[Word], x: &MatTuple) -> Vec<Mat> {
    let refs: Vec<&Word> = words.iter().collect();
    let table = evaluate_words(&refs, x);
    words.iter().map(|w| table[w.letters()].clone()).collect()
}

/// Evaluate a set of words at X, sharing prefix products.
/// Returns a map keyed by letter slices; includes every prefix.
fn evaluate_words<'w>(words: &[&'w Word], x: &MatTuple) -> HashMap<&'w [u16], Mat> {
    let n = x.size();
    let mut table: HashMap<&[u16], Mat> = HashMap::new();
    table.insert(&[], Mat::identity(n));
    for w in words {
        let letters = w.letters();
        for end in 1..=letters.len() {
            if table.contains_key(&letters[..end]) {
                continue;
            }
            let prefix = table[&letters[..end - 1]].clone();
            let next = prefix.mul(x.component(letters[end - 1] as usize - 1));
            table.insert(&letters[..end], next);
        }
    }
    table
}

/// Assemble the block-upper-bidiagonal point with Y repeated on the diagonal
/// and the given tuples on the superdiagonal.
pub fn block_bidiagonal(y: &MatTuple, zs: &[MatTuple]) -> MatTuple {
    let s = y.size();
    let blocks = zs.len() + 1;
    let n = blocks * s;
    let comps = (0..y.g())
        .map(|j| {
            let mut m = Mat::zeros(n, n);
            for b in 0..blocks {
                m.set_block(b * s, b * s, y.component(j));
            }
            for (b, z) in zs.iter().enumerate() {
                m.set_block(b * s, (b + 1) * s, z.component(j));
            }
            m
        })
        .collect();
    MatTuple::new(comps).expect("square blocks")
}

/// Basis element of M_s^g with index j*s^2 + p*s + q.
pub fn basis_tuple(g: usize, s: usize, index: usize) -> MatTuple {
    let sq = s * s;
    let j = index / sq;
    let rest = index % sq;
    let mut comps = vec![Mat::zeros(s, s); g];
    comps[j] = Mat::unit(s, rest / s, rest % s);
    MatTuple::new(comps).expect("square")
}

/// Enumerate per-slot basis indices for an arity-`arity` tensor at base
/// dimension `dim`, in tuple-index order.
pub fn basis_tuples(dim: usize, arity: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(dim.pow(arity as u32));
    let mut cur = vec![0usize; arity];
    loop {
        out.push(cur.clone());
        let mut k = arity;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            cur[k] += 1;
            if cur[k] < dim {
                break;
            }
            cur[k] = 0;
        }
    }
}

/// All differentials of p at Y through order L, one block-bidiagonal
/// evaluation per basis tuple, read off the top-right block.
pub fn jet_eval(p: &NcPoly, y: &MatTuple, order: usize) -> Result<Jet, JetError> {
    assert_eq!(p.g(), y.g(), "letter-count mismatch");
    let s = y.size();
    let g = y.g();
    guard::check_entries(guard::tensor_entries(s, g, order))?;
    let dim = g * s * s;
    let mut maps = vec![MultiMap::constant(g, evaluate(p, y))];
    for ell in 1..=order {
        let mut map = MultiMap::zero(s, g, ell)?;
        let tuples = basis_tuples(dim, ell);
        let values: Vec<Mat> = tuples
            .par_iter()
            .map(|slots| {
                let zs: Vec<MatTuple> = slots.iter().map(|&i| basis_tuple(g, s, i)).collect();
                let big = evaluate(p, &block_bidiagonal(y, &zs));
                big.block(0, ell * s, s, s)
            })
            .collect();
        map.values = values;
        maps.push(map);
    }
    Jet::new(y.clone(), maps)
}

/// Jet of a truncated series (its polynomial representative).
pub fn jet_eval_series(f: &NcSeries, y: &MatTuple, order: usize) -> Result<Jet, JetError> {
    jet_eval(f.as_poly(), y, order)
}

/// Convolution (Leibniz) product of jets at a common basepoint.
pub fn jet_mul(a: &Jet, b: &Jet) -> Result<Jet, JetError> {
    a.check_compatible(b)?;
    let s = a.base.size();
    let g = a.base.g();
    let order = a.order();
    let dim = g * s * s;
    let mut maps = Vec::with_capacity(order + 1);
    for ell in 0..=order {
        let mut map = MultiMap::zero(s, g, ell)?;
        for slots in basis_tuples(dim, ell) {
            let mut acc = Mat::zeros(s, s);
            for i in 0..=ell {
                let left = a.maps[i].value_at(&slots[..i]);
                let right = b.maps[ell - i].value_at(&slots[i..]);
                acc = acc.add(&left.mul(right));
            }
            map.set_value(&slots, acc);
        }
        maps.push(map);
    }
    Jet::new(a.base.clone(), maps)
}

/// Convolution inverse: b_0 = a_0^{-1} and
/// b_l = -a_0^{-1} * sum_{i=1..l} a_i convolved with b_{l-i}.
pub fn jet_inverse(a: &Jet) -> Result<Jet, JetError> {
    let s = a.base.size();
    let g = a.base.g();
    let dim = g * s * s;
    let inv0 = a.maps[0].values()[0]
        .inverse()
        .map_err(|_| JetError::NotInvertible)?;
    let mut maps = vec![MultiMap::constant(g, inv0.clone())];
    for ell in 1..=a.order() {
        let mut map = MultiMap::zero(s, g, ell)?;
        for slots in basis_tuples(dim, ell) {
            let mut acc = Mat::zeros(s, s);
            for i in 1..=ell {
                let left = a.maps[i].value_at(&slots[..i]);
                let right = maps[ell - i].value_at(&slots[i..]);
                acc = acc.add(&left.mul(right));
            }
            map.set_value(&slots, inv0.mul(&acc).neg());
        }
        maps.push(map);
    }
    Jet::new(a.base.clone(), maps)
}

/// True iff all products of the components of length n (the matrix size)
/// vanish, i.e. the nonunital algebra generated by Z is nilpotent.
pub fn is_jointly_nilpotent(z: &MatTuple) -> bool {
    let n = z.size();
    // span of products of length k, grown one letter at a time
    let mut span: Vec<Mat> = independent_subset(z.components().to_vec());
    for _ in 1..n {
        if span.is_empty() {
            return true;
        }
        let next: Vec<Mat> = span
            .iter()
            .flat_map(|m| z.components().iter().map(move |c| c.mul(m)))
            .collect();
        span = independent_subset(next);
    }
    span.is_empty()
}

/// Maximal linearly independent subset (in order), dropping zero matrices.
fn independent_subset(mats: Vec<Mat>) -> Vec<Mat> {
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    let mut kept = Vec::new();
    for m in mats {
        if m.is_zero() {
            continue;
        }
        let mut cand: Vec<Vec<Scalar>> = rows.clone();
        cand.push(m.entries().to_vec());
        let rank_before = rows.len();
        let stacked = Mat::from_rows(cand.clone());
        if stacked.rank() > rank_before {
            rows.push(m.entries().to_vec());
            kept.push(m);
        }
    }
    kept
}

#[derive(Serialize, Deserialize)]
struct MultiMapEntryRepr {
    #[serde(rename = "in")]
    inputs: Vec<[usize; 3]>,
    out: [usize; 2],
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct MultiMapRepr {
    s: usize,
    g: usize,
    arity: usize,
    entries: Vec<MultiMapEntryRepr>,
}

impl Serialize for MultiMap {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let s = self.s;
        let sq = s * s;
        let mut entries = Vec::new();
        for slots in basis_tuples(self.base_dim(), self.arity) {
            let v = self.value_at(&slots);
            for p in 0..s {
                for q in 0..s {
                    if !v.at(p, q).is_zero() {
                        entries.push(MultiMapEntryRepr {
                            inputs: slots
                                .iter()
                                .map(|&i| [i / sq + 1, (i % sq) / s + 1, (i % sq) % s + 1])
                                .collect(),
                            out: [p + 1, q + 1],
                            coeff: v.at(p, q).to_string(),
                        });
                    }
                }
            }
        }
        MultiMapRepr {
            s,
            g: self.g,
            arity: self.arity,
            entries,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MultiMap {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = MultiMapRepr::deserialize(deserializer)?;
        let mut out = MultiMap::zero(repr.s, repr.g, repr.arity).map_err(D::Error::custom)?;
        let s = repr.s;
        for e in repr.entries {
            if e.inputs.len() != repr.arity {
                return Err(D::Error::custom("entry arity mismatch"));
            }
            let mut slots = Vec::with_capacity(repr.arity);
            for [j, p, q] in &e.inputs {
                if *j < 1 || *j > repr.g || *p < 1 || *p > s || *q < 1 || *q > s {
                    return Err(D::Error::custom("basis index out of range"));
                }
                slots.push((j - 1) * s * s + (p - 1) * s + (q - 1));
            }
            let [p, q] = e.out;
            if p < 1 || p > s || q < 1 || q > s {
                return Err(D::Error::custom("output index out of range"));
            }
            let c: Scalar = e.coeff.parse().map_err(D::Error::custom)?;
            let idx = out.tuple_index(&slots);
            *out.values[idx].at_mut(p - 1, q - 1) = c;
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
struct JetRepr {
    #[serde(rename = "Y")]
    base: MatTuple,
    maps: Vec<MultiMap>,
}

impl Serialize for Jet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        JetRepr {
            base: self.base.clone(),
            maps: self.maps.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Jet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = JetRepr::deserialize(deserializer)?;
        Jet::new(repr.base, repr.maps).map_err(D::Error::custom)
    }
}
