//! Shared helpers for integration tests: deterministic random data and the
//! independent oracles (direct block-bidiagonal extraction, forced-value
//! propagation) that the implementation under test is checked against.

// each integration test target compiles this module separately and uses a
// different subset of it
#![allow(dead_code)]

use ncgerm::exactmath::{Mat, MatTuple, Scalar};
use ncgerm::freealg::{NcPoly, Word};
use ncgerm::jet::{basis_tuple, basis_tuples, Jet, MultiMap};
use ncgerm::structure::BimoduleOps;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn random_poly(rng: &mut StdRng, g: usize, max_degree: usize, terms: usize) -> NcPoly {
    let mut p = NcPoly::zero(g);
    for _ in 0..terms {
        let len = rng.gen_range(0..=max_degree);
        let word: Vec<u16> = (0..len).map(|_| rng.gen_range(1..=g as u16)).collect();
        p.add_term(Word(word), &Scalar::from_int(rng.gen_range(-4..=4)));
    }
    p
}

pub fn random_point(rng: &mut StdRng, g: usize, s: usize, bound: i64) -> MatTuple {
    MatTuple::new(
        (0..g)
            .map(|_| Mat::from_fn(s, s, |_, _| Scalar::from_int(rng.gen_range(-bound..=bound))))
            .collect(),
    )
    .unwrap()
}

pub fn random_invertible(rng: &mut StdRng, n: usize, bound: i64) -> Mat {
    loop {
        let m = Mat::from_fn(n, n, |_, _| Scalar::from_int(rng.gen_range(-bound..=bound)));
        if m.rank() == n {
            return m;
        }
    }
}

pub fn e12_e21() -> MatTuple {
    MatTuple::new(vec![Mat::unit(2, 0, 1), Mat::unit(2, 1, 0)]).unwrap()
}

/// Independent word evaluation: plain left-to-right fold, no prefix sharing.
pub fn eval_poly_direct(p: &NcPoly, x: &MatTuple) -> Mat {
    let n = x.size();
    let mut acc = Mat::zeros(n, n);
    for (w, c) in p.terms() {
        let mut prod = Mat::identity(n);
        for &j in w.letters() {
            prod = prod.mul(x.component(j as usize - 1));
        }
        acc = acc.add(&prod.scale(c));
    }
    acc
}

/// Independent block-bidiagonal assembly: Y on the diagonal, the given
/// tuples on the superdiagonal.
pub fn block_point_direct(y: &MatTuple, zs: &[MatTuple]) -> MatTuple {
    let s = y.size();
    let blocks = zs.len() + 1;
    let big = blocks * s;
    MatTuple::new(
        (0..y.g())
            .map(|j| {
                Mat::from_fn(big, big, |r, c| {
                    let (br, bc) = (r / s, c / s);
                    if br == bc {
                        y.component(j).at(r % s, c % s).clone()
                    } else if bc == br + 1 {
                        zs[br].component(j).at(r % s, c % s).clone()
                    } else {
                        Scalar::zero()
                    }
                })
            })
            .collect(),
    )
    .unwrap()
}

/// Extract the differential tensors of p at y directly from block-bidiagonal
/// evaluations, one evaluation per basis tuple, reading the top-right block.
pub fn jet_tensors_direct(p: &NcPoly, y: &MatTuple, order: usize) -> Vec<Vec<Mat>> {
    let s = y.size();
    let g = y.g();
    let dim = g * s * s;
    (0..=order)
        .map(|ell| {
            basis_tuples(dim, ell)
                .iter()
                .map(|slots| {
                    let zs: Vec<MatTuple> = slots.iter().map(|&i| basis_tuple(g, s, i)).collect();
                    let big = eval_poly_direct(p, &block_point_direct(y, &zs));
                    big.block(0, ell * s, s, s)
                })
                .collect()
        })
        .collect()
}

/// Basis of [M_s, Y] in tuple coordinates together with realizing matrices
/// S_i with [S_i, Y] = basis vector i.
pub fn commutator_basis(y: &MatTuple) -> (Vec<Vec<Scalar>>, Vec<Mat>) {
    let s = y.size();
    let mut basis: Vec<Vec<Scalar>> = Vec::new();
    let mut realizers = Vec::new();
    for i in 0..s * s {
        let smat = Mat::unit(s, i / s, i % s);
        let v = y.commutator_with(&smat).to_coords();
        if v.iter().all(Scalar::is_zero) {
            continue;
        }
        let mut cand = basis.clone();
        cand.push(v.clone());
        if Mat::from_rows(cand).rank() > basis.len() {
            basis.push(v);
            realizers.push(smat);
        }
    }
    (basis, realizers)
}

/// Basis of ker pi in tuple coordinates, read off the complementary
/// projection of the supplied operators.
pub fn kernel_basis_of(ops: &BimoduleOps) -> Vec<Vec<Scalar>> {
    let dim = ops.sigma.rows();
    let mut basis: Vec<Vec<Scalar>> = Vec::new();
    for i in 0..dim {
        let mut e = vec![Scalar::zero(); dim];
        e[i] = Scalar::one();
        let v = ops.sigma.apply(&e);
        if v.iter().all(Scalar::is_zero) {
            continue;
        }
        let mut cand = basis.clone();
        cand.push(v.clone());
        if Mat::from_rows(cand).rank() > basis.len() {
            basis.push(v);
        }
    }
    basis
}

/// Independent propagation solver. Values on tuples over the adapted basis
/// ([M_s,Y] basis followed by a ker pi basis) are forced by the constraint
/// system: zero on all-kernel tuples, and otherwise the chain rule at the
/// first commutator slot applied to the previous map. The standard tensor is
/// recovered by a change of basis in every slot. Together with a lost-abbey
/// check of the result this certifies that the constraint system has exactly
/// one solution.
pub fn propagate_forced(ops: &BimoduleOps, seed: &Jet, order: usize) -> Jet {
    let y = &ops.base;
    let s = y.size();
    let g = y.g();
    let dim = g * s * s;
    let (comm, realizers) = commutator_basis(y);
    let kernel = kernel_basis_of(ops);
    let k = comm.len();
    assert_eq!(k + kernel.len(), dim, "adapted basis must span");
    let adapted: Vec<Vec<Scalar>> = comm.iter().chain(kernel.iter()).cloned().collect();
    // columns are adapted vectors; inverse converts standard to adapted coords
    let a_mat = Mat::from_fn(dim, dim, |r, c| adapted[c][r].clone());
    let a_inv = a_mat.inverse().expect("adapted basis invertible");

    let mut maps: Vec<MultiMap> = seed.maps().to_vec();
    for ell in seed.order() + 1..=order {
        let prev = &maps[ell - 1];
        // values on adapted tuples
        let tuples = basis_tuples(dim, ell);
        let mut adapted_vals: Vec<Mat> = Vec::with_capacity(tuples.len());
        for slots in &tuples {
            let pos = slots.iter().position(|&a| a < k);
            let val = match pos {
                None => Mat::zeros(s, s),
                Some(pos) => {
                    let smat = &realizers[slots[pos]];
                    let rest: Vec<Vec<Scalar>> = slots
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| *i != pos)
                        .map(|(_, &a)| adapted[a].clone())
                        .collect();
                    if pos == 0 {
                        if ell == 1 {
                            smat.commutator(seed.value())
                        } else {
                            let mut shifted = rest.clone();
                            shifted[0] = MatTuple::from_coords(g, s, &rest[0])
                                .left_mul(smat)
                                .to_coords();
                            smat.mul(&prev.apply_coords(&rest))
                                .sub(&prev.apply_coords(&shifted))
                        }
                    } else if pos == ell - 1 {
                        let mut shifted = rest.clone();
                        let last = ell - 2;
                        shifted[last] = MatTuple::from_coords(g, s, &rest[last])
                            .right_mul(smat)
                            .to_coords();
                        prev.apply_coords(&shifted)
                            .sub(&prev.apply_coords(&rest).mul(smat))
                    } else {
                        let mut right = rest.clone();
                        right[pos - 1] = MatTuple::from_coords(g, s, &rest[pos - 1])
                            .right_mul(smat)
                            .to_coords();
                        let mut left = rest.clone();
                        left[pos] = MatTuple::from_coords(g, s, &rest[pos])
                            .left_mul(smat)
                            .to_coords();
                        prev.apply_coords(&right).sub(&prev.apply_coords(&left))
                    }
                }
            };
            adapted_vals.push(val);
        }
        // change basis back to the standard tensor, one slot at a time:
        // e_i = sum_a (a_inv)_{a,i} adapted_a
        let mut vals = adapted_vals;
        for slot in 0..ell {
            let mut next: Vec<Mat> = vec![Mat::zeros(s, s); vals.len()];
            let stride: usize = dim.pow((ell - 1 - slot) as u32);
            for (idx, _) in vals.iter().enumerate() {
                let digit = (idx / stride) % dim;
                // here digit currently indexes the standard basis slot being
                // produced; accumulate over adapted digits
                let base = idx - digit * stride;
                let mut acc = Mat::zeros(s, s);
                for a in 0..dim {
                    let coeff = a_inv.at(a, digit);
                    if !coeff.is_zero() {
                        acc = acc.add(&vals[base + a * stride].scale(coeff));
                    }
                }
                next[idx] = acc;
            }
            vals = next;
        }
        let mut map = MultiMap::zero(s, g, ell).unwrap();
        for (idx, slots) in basis_tuples(dim, ell).iter().enumerate() {
            map.set_value(slots, vals[idx].clone());
        }
        maps.push(map);
    }
    Jet::new(y.clone(), maps).unwrap()
}

/// All differentials through the jet's order vanish on tuples from the span.
pub fn vanishes_on_span_powers(jet: &Jet, span: &[Vec<Scalar>], from_order: usize) -> bool {
    for ell in from_order..=jet.order() {
        if ell == 0 {
            if !jet.value().is_zero() {
                return false;
            }
            continue;
        }
        let mut idx = vec![0usize; ell];
        loop {
            let args: Vec<Vec<Scalar>> = idx.iter().map(|&i| span[i].clone()).collect();
            if !jet.map(ell).apply_coords(&args).is_zero() {
                return false;
            }
            let mut k = ell;
            let mut done = false;
            loop {
                if k == 0 {
                    done = true;
                    break;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < span.len() {
                    break;
                }
                idx[k] = 0;
            }
            if done {
                break;
            }
        }
    }
    true
}
