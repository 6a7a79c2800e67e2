//! Minimal propagation of a truncated jet at a semisimple point, the induced
//! embedding of the generated algebra into germs, the growth-bound
//! recurrence, and the separated-point non-injectivity example.
//!
//! The propagation extends a sequence satisfying the truncated lost-abbey
//! conditions to any higher order so that every new map vanishes on powers of
//! ker pi. Each level is built by splitting one slot at a time into its
//! [M_s, Y] and ker pi parts and rewriting the commutator part through the
//! chain rules; staged maps f_{l,m} (first m slots already split) are
//! materialized as full tensors. When the slot being split is the last one,
//! the chain rule contributes a right-multiplication term through the staged
//! map f_{l-1,l-1}; that term vanishes for levels above the seed but not at
//! the seed level itself, so it is kept.

use crate::exactmath::{Mat, MatTuple, Scalar};
use crate::guard::ResourceError;
use crate::jet::{basis_tuple, basis_tuples, jet_mul, Jet, JetError, MultiMap};
use crate::lac::check_lac_truncated;
use crate::structure::{
    bimodule_ops, bimodule_ops_with_invariant, centralizer, generated_algebra, is_semisimple,
    BimoduleOps, StructureError,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PropagateError {
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("element {0} is not in the algebra generated by the point")]
    NotInAlgebra(usize),
    #[error("point is not semisimple")]
    NotSemisimple,
    #[error("points are not separated")]
    NotSeparated,
    #[error("no nonzero admissible map kills the requested directions")]
    Infeasible,
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(transparent)]
    Resource(#[from] ResourceError),
}

/// Input of the minimal propagation: the bimodule operators at the (semisimple)
/// basepoint, a seed jet satisfying the truncated conditions at its order, and
/// the target order. The operators are part of the configuration because the
/// propagation depends on the choice of the projection pi.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PropagationConfig {
    pub ops: BimoduleOps,
    pub seed: Jet,
    pub extend_to: usize,
}

struct Tables {
    dim: usize,
    s: usize,
    /// sigma applied to each basis vector, as coordinates
    sigma_cols: Vec<Vec<Scalar>>,
    /// (phi o pi) of each basis vector
    phi_pi: Vec<Mat>,
    /// coords of basis_tuple(a) * phi_pi[b]
    right_prod: Vec<Vec<Vec<Scalar>>>,
    /// coords of phi_pi[b] * basis_tuple(a)
    left_prod: Vec<Vec<Vec<Scalar>>>,
}

impl Tables {
    fn new(ops: &BimoduleOps) -> Tables {
        let y = &ops.base;
        let s = y.size();
        let g = y.g();
        let dim = g * s * s;
        let mut sigma_cols = Vec::with_capacity(dim);
        let mut phi_pi = Vec::with_capacity(dim);
        for i in 0..dim {
            let mut e = vec![Scalar::zero(); dim];
            e[i] = Scalar::one();
            sigma_cols.push(ops.sigma.apply(&e));
            let v = ops.phi.apply(&e);
            phi_pi.push(Mat::from_fn(s, s, |p, q| v[p * s + q].clone()));
        }
        let right_prod = (0..dim)
            .map(|a| {
                (0..dim)
                    .map(|b| basis_tuple(g, s, a).right_mul(&phi_pi[b]).to_coords())
                    .collect()
            })
            .collect();
        let left_prod = (0..dim)
            .map(|a| {
                (0..dim)
                    .map(|b| basis_tuple(g, s, a).left_mul(&phi_pi[b]).to_coords())
                    .collect()
            })
            .collect();
        Tables {
            dim,
            s,
            sigma_cols,
            phi_pi,
            right_prod,
            left_prod,
        }
    }

    fn basis_coords(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.dim];
        v[i] = Scalar::one();
        v
    }
}

/// One level of the slot-splitting sweep: from the staged maps of the
/// previous level (arity l-1, indices 0..=l-1) to the staged maps of level l.
fn propagate_level(
    tables: &Tables,
    g: usize,
    prev_stage: &[MultiMap],
    ell: usize,
    f0: &Mat,
) -> Result<Vec<MultiMap>, PropagateError> {
    let dim = tables.dim;
    let s = tables.s;
    let mut stage: Vec<Option<MultiMap>> = vec![None; ell + 1];
    stage[ell] = Some(MultiMap::zero(s, g, ell)?);
    for m in (0..ell).rev() {
        let mut map = MultiMap::zero(s, g, ell)?;
        for slots in basis_tuples(dim, ell) {
            let probe = slots[m];
            let corrector = &tables.phi_pi[probe];
            let val = if m == 0 {
                // split the first slot; first-slot chain rule on the
                // commutator part
                let mut args: Vec<Vec<Scalar>> = vec![tables.sigma_cols[probe].clone()];
                args.extend(slots[1..].iter().map(|&i| tables.basis_coords(i)));
                let t1 = stage[1].as_ref().expect("computed").apply_coords(&args);
                if ell == 1 {
                    t1.add(&corrector.commutator(f0))
                } else {
                    let rest: Vec<Vec<Scalar>> =
                        slots[1..].iter().map(|&i| tables.basis_coords(i)).collect();
                    let t2 = corrector.mul(&prev_stage[0].apply_coords(&rest));
                    let mut shifted = rest.clone();
                    shifted[0] = tables.left_prod[slots[1]][probe].clone();
                    let t3 = prev_stage[0].apply_coords(&shifted);
                    t1.add(&t2).sub(&t3)
                }
            } else {
                // split slot m+1 (0-based m); middle or last chain rule
                let mut args: Vec<Vec<Scalar>> =
                    slots.iter().map(|&i| tables.basis_coords(i)).collect();
                args[m] = tables.sigma_cols[probe].clone();
                let t1 = stage[m + 1].as_ref().expect("computed").apply_coords(&args);

                let mut args2: Vec<Vec<Scalar>> = Vec::with_capacity(ell - 1);
                args2.extend(slots[..m - 1].iter().map(|&i| tables.basis_coords(i)));
                args2.push(tables.right_prod[slots[m - 1]][probe].clone());
                args2.extend(slots[m + 1..].iter().map(|&i| tables.basis_coords(i)));
                let t2 = prev_stage[m - 1].apply_coords(&args2);

                let t3 = if m == ell - 1 {
                    // last slot: right multiplication through the staged map
                    // with every slot already split; nonzero only when the
                    // previous level is the seed itself
                    let args3: Vec<Vec<Scalar>> = slots[..ell - 1]
                        .iter()
                        .map(|&i| tables.basis_coords(i))
                        .collect();
                    prev_stage[ell - 1].apply_coords(&args3).mul(corrector)
                } else {
                    let mut args3: Vec<Vec<Scalar>> = Vec::with_capacity(ell - 1);
                    args3.extend(slots[..m].iter().map(|&i| tables.basis_coords(i)));
                    args3.push(tables.left_prod[slots[m + 1]][probe].clone());
                    args3.extend(slots[m + 2..].iter().map(|&i| tables.basis_coords(i)));
                    prev_stage[m].apply_coords(&args3)
                };
                t1.add(&t2).sub(&t3)
            };
            map.set_value(&slots, val);
        }
        stage[m] = Some(map);
    }
    Ok(stage
        .into_iter()
        .map(|m| m.expect("all computed"))
        .collect())
}

/// Extend the seed to `extend_to` so that the result satisfies the lost-abbey
/// conditions through that order and every new map vanishes on powers of
/// ker pi. The extension with these two properties is unique for the given pi.
pub fn propagate_minimal(cfg: &PropagationConfig) -> Result<Jet, PropagateError> {
    let y = &cfg.ops.base;
    if cfg.seed.base() != y {
        return Err(PropagateError::PreconditionFailed(
            "seed basepoint differs from the bimodule operators' point".into(),
        ));
    }
    let seed_order = cfg.seed.order();
    if cfg.extend_to < seed_order {
        return Err(PropagateError::PreconditionFailed(format!(
            "target order {} below seed order {seed_order}",
            cfg.extend_to
        )));
    }
    let report = check_lac_truncated(y, &cfg.seed, seed_order)?;
    if !report.holds {
        return Err(PropagateError::PreconditionFailed(format!(
            "seed violates the truncated lost-abbey conditions ({} violations)",
            report.violations.len()
        )));
    }

    let g = y.g();
    let tables = Tables::new(&cfg.ops);
    let f0 = cfg.seed.value().clone();
    let mut maps: Vec<MultiMap> = cfg.seed.maps().to_vec();
    // staged maps of the current top level; at the seed level every stage is
    // the seed map itself
    let mut prev_stage: Vec<MultiMap> = vec![cfg.seed.map(seed_order).clone(); seed_order + 1];
    for ell in seed_order + 1..=cfg.extend_to {
        let stage = propagate_level(&tables, g, &prev_stage, ell, &f0)?;
        maps.push(stage[0].clone());
        prev_stage = stage;
    }
    Ok(Jet::new(y.clone(), maps)?)
}

/// One-term propagations of elements of the algebra generated by Y. Each
/// element becomes the constant term of a jet whose higher maps vanish on
/// powers of ker pi; the assignment is verified to be multiplicative on the
/// supplied elements up to the requested order.
pub fn embed_algebra(
    y: &MatTuple,
    elements: &[Mat],
    order: usize,
) -> Result<Vec<Jet>, PropagateError> {
    if !is_semisimple(y)? {
        return Err(PropagateError::NotSemisimple);
    }
    let alg = generated_algebra(y)?;
    for (i, a) in elements.iter().enumerate() {
        if !alg.contains(a) {
            return Err(PropagateError::NotInAlgebra(i));
        }
    }
    let ops = bimodule_ops(y)?;
    let embed_one = |a: &Mat| -> Result<Jet, PropagateError> {
        let seed = Jet::new(y.clone(), vec![MultiMap::constant(y.g(), a.clone())])?;
        propagate_minimal(&PropagationConfig {
            ops: ops.clone(),
            seed,
            extend_to: order,
        })
    };
    let jets: Vec<Jet> = elements.iter().map(embed_one).collect::<Result<_, _>>()?;
    // multiplicativity check: jet(a b) = jet(a) * jet(b)
    for (i, a) in elements.iter().enumerate() {
        for (j, b) in elements.iter().enumerate() {
            let prod_jet = jet_mul(&jets[i], &jets[j])?;
            let direct = embed_one(&a.mul(b))?;
            if prod_jet != direct {
                return Err(PropagateError::PreconditionFailed(format!(
                    "embedding is not multiplicative on elements {i}, {j}"
                )));
            }
        }
    }
    Ok(jets)
}

/// The growth table c_{l,m} driven by the recursion
/// c_{l,m} = beta * max(c_{l,m+1}, alpha * (c_{l-1,m-1} + c_{l-1,m})),
/// with c_{0,0} = 1, c_{l,l} = 0 and c_{l,-1} = c_{l,0}.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GrowthSeq {
    pub alpha: Scalar,
    pub beta: Scalar,
    /// table[l][m] = c_{l,m} for 0 <= m <= l
    pub table: Vec<Vec<Scalar>>,
}

impl GrowthSeq {
    pub fn value(&self, ell: usize, m: usize) -> &Scalar {
        &self.table[ell][m]
    }
}

pub fn growth_bound(
    alpha: &Scalar,
    beta: &Scalar,
    lmax: usize,
) -> Result<GrowthSeq, PropagateError> {
    let positive = |x: &Scalar| !x.is_zero() && !x.is_negative();
    if !positive(alpha) || !positive(beta) {
        return Err(PropagateError::PreconditionFailed(
            "alpha and beta must be positive".into(),
        ));
    }
    let mut table: Vec<Vec<Scalar>> = vec![vec![Scalar::one()]];
    for ell in 1..=lmax {
        let mut row = vec![Scalar::zero(); ell + 1];
        // c_{l,l} = 0, then descend m; row l-1 covers m = 0..=l-1
        for m in (0..ell).rev() {
            let prev = &table[ell - 1];
            // c_{l-1,m-1} with the m = -1 convention folded in
            let left = if m == 0 { &prev[0] } else { &prev[m - 1] };
            let grow = alpha * &(left + &prev[m]);
            let candidate = if row[m + 1] > grow {
                row[m + 1].clone()
            } else {
                grow
            };
            row[m] = beta * &candidate;
        }
        table.push(row);
    }
    Ok(GrowthSeq {
        alpha: alpha.clone(),
        beta: beta.clone(),
        table,
    })
}

/// Coordinate span of the block-diagonal tuples (M_{s'} + M_{s''})^g inside
/// the tuple space of the direct sum point.
pub fn block_diagonal_span(g: usize, s_top: usize, s_bot: usize) -> Vec<Vec<Scalar>> {
    let s = s_top + s_bot;
    let sq = s * s;
    let mut span = Vec::new();
    for j in 0..g {
        for p in 0..s {
            for q in 0..s {
                let diagonal = (p < s_top && q < s_top) || (p >= s_top && q >= s_top);
                if diagonal {
                    let mut v = vec![Scalar::zero(); g * sq];
                    v[j * sq + p * s + q] = Scalar::one();
                    span.push(v);
                }
            }
        }
    }
    span
}

/// At the direct sum of two separated semisimple points, build a nonzero
/// admissible linear map killing both the commutator space and all
/// block-diagonal directions, and propagate it (with a projection pi that
/// preserves the block-diagonal subspace) so that every differential of the
/// result vanishes on block-diagonal tuples while the first one is nonzero.
pub fn separating_example(
    y_top: &MatTuple,
    y_bot: &MatTuple,
    order: usize,
) -> Result<Jet, PropagateError> {
    match crate::structure::are_separated(&[y_top.clone(), y_bot.clone()]) {
        Ok(true) => {}
        Ok(false) => return Err(PropagateError::NotSeparated),
        Err(StructureError::NotSemisimple) => return Err(PropagateError::NotSemisimple),
        Err(e) => return Err(e.into()),
    }
    let y = y_top.direct_sum(y_bot);
    let s = y.size();
    let g = y.g();
    let sq = s * s;
    let dim = g * sq;
    let span = block_diagonal_span(g, y_top.size(), y_bot.size());
    let ops = bimodule_ops_with_invariant(&y, Some(&span))?;
    let cent = centralizer(&y)?;

    // unknowns: the s^2 output entries of f on each basis vector of M_s^g
    let unknowns = dim * sq;
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    let push_kill = |v: &[Scalar], rows: &mut Vec<Vec<Scalar>>| {
        // f(v) = 0: one row per output entry
        for out in 0..sq {
            let mut row = vec![Scalar::zero(); unknowns];
            for (i, c) in v.iter().enumerate() {
                if !c.is_zero() {
                    row[i * sq + out] = c.clone();
                }
            }
            rows.push(row);
        }
    };
    for i in 0..sq {
        let smat = Mat::unit(s, i / s, i % s);
        push_kill(&y.commutator_with(&smat).to_coords(), &mut rows);
    }
    for v in &span {
        push_kill(v, &mut rows);
    }
    // centralizer equivariance: c f(e_a) = f(c e_a) and f(e_a c) = f(e_a) c
    for c in &cent.basis {
        for a in 0..dim {
            let ea = basis_tuple(g, s, a);
            let left_arg = ea.left_mul(c).to_coords();
            let right_arg = ea.right_mul(c).to_coords();
            for p in 0..s {
                for q in 0..s {
                    // row: (c * F_a)_{p,q} - sum_b (left_arg)_b (F_b)_{p,q} = 0
                    let mut row = vec![Scalar::zero(); unknowns];
                    for u in 0..s {
                        if !c.at(p, u).is_zero() {
                            row[a * sq + u * s + q] += &(c.at(p, u).clone());
                        }
                    }
                    for (b, coeff) in left_arg.iter().enumerate() {
                        if !coeff.is_zero() {
                            row[b * sq + p * s + q] -= coeff;
                        }
                    }
                    rows.push(row);

                    // row: sum_b (right_arg)_b (F_b)_{p,q} - (F_a * c)_{p,q} = 0
                    let mut row = vec![Scalar::zero(); unknowns];
                    for (b, coeff) in right_arg.iter().enumerate() {
                        if !coeff.is_zero() {
                            row[b * sq + p * s + q] += coeff;
                        }
                    }
                    for u in 0..s {
                        if !c.at(u, q).is_zero() {
                            row[a * sq + p * s + u] -= &(c.at(u, q).clone());
                        }
                    }
                    rows.push(row);
                }
            }
        }
    }
    let kernel = Mat::from_rows(rows).kernel_basis();
    let Some(first) = kernel.first() else {
        return Err(PropagateError::Infeasible);
    };
    let mut f1 = MultiMap::zero(s, g, 1)?;
    for a in 0..dim {
        f1.set_value(
            &[a],
            Mat::from_fn(s, s, |p, q| first.at(a * sq + p * s + q, 0).clone()),
        );
    }
    if f1.is_zero() {
        return Err(PropagateError::Infeasible);
    }

    let seed = Jet::new(y.clone(), vec![MultiMap::constant(g, Mat::zeros(s, s)), f1])?;
    propagate_minimal(&PropagationConfig {
        ops,
        seed,
        extend_to: order.max(1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::NcPoly;
    use crate::jet::{is_jointly_nilpotent, jet_eval};

    fn e12_e21() -> MatTuple {
        MatTuple::new(vec![Mat::unit(2, 0, 1), Mat::unit(2, 1, 0)]).unwrap()
    }

    fn kernel_span(ops: &BimoduleOps) -> Vec<Vec<Scalar>> {
        let dim = ops.sigma.rows();
        let mut span = Vec::new();
        for i in 0..dim {
            let mut e = vec![Scalar::zero(); dim];
            e[i] = Scalar::one();
            let v = ops.sigma.apply(&e);
            if v.iter().any(|x| !x.is_zero()) {
                span.push(v);
            }
        }
        span
    }

    fn vanishes_on_kernel_powers(jet: &Jet, ops: &BimoduleOps, from: usize) -> bool {
        let span = kernel_span(ops);
        for ell in from..=jet.order() {
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

    #[test]
    fn identity_seed_propagates_to_zero() {
        let y = e12_e21();
        let ops = bimodule_ops(&y).unwrap();
        let seed = Jet::unit(y.clone(), 0).unwrap();
        let out = propagate_minimal(&PropagationConfig {
            ops,
            seed,
            extend_to: 3,
        })
        .unwrap();
        for ell in 1..=3 {
            assert!(out.map(ell).is_zero());
        }
    }

    #[test]
    fn propagated_jets_satisfy_lac_and_minimality() {
        let y = e12_e21();
        let ops = bimodule_ops(&y).unwrap();
        let p = NcPoly::letter(2, 1)
            .mul(&NcPoly::letter(2, 2))
            .unwrap()
            .add(&NcPoly::letter(2, 1).scale(&Scalar::from_int(3)))
            .unwrap();
        let seed = jet_eval(&p, &y, 1).unwrap();
        let out = propagate_minimal(&PropagationConfig {
            ops: ops.clone(),
            seed,
            extend_to: 3,
        })
        .unwrap();
        let report = check_lac_truncated(&y, &out, 3).unwrap();
        assert!(report.holds, "violations: {:?}", report.violations.len());
        assert!(vanishes_on_kernel_powers(&out, &ops, 2));
        // the propagation generally differs from the polynomial jet
        let poly_jet = jet_eval(&p, &y, 3).unwrap();
        assert_ne!(out, poly_jet);
    }

    #[test]
    fn scalar_point_propagation_extends_by_zero() {
        let y = MatTuple::zeros(2, 1);
        let ops = bimodule_ops(&y).unwrap();
        let p = NcPoly::letter(2, 1).mul(&NcPoly::letter(2, 2)).unwrap();
        let seed = jet_eval(&p, &y, 1).unwrap();
        let out = propagate_minimal(&PropagationConfig {
            ops,
            seed: seed.clone(),
            extend_to: 3,
        })
        .unwrap();
        assert_eq!(out.truncate(1), seed);
        for ell in 2..=3 {
            assert!(out.map(ell).is_zero());
        }
    }

    #[test]
    fn rejects_invalid_seed() {
        let y = e12_e21();
        let ops = bimodule_ops(&y).unwrap();
        // a random non-lac tensor as seed
        let mut bad = MultiMap::zero(2, 2, 1).unwrap();
        bad.set_value(&[0], Mat::identity(2));
        let seed = Jet::new(
            y.clone(),
            vec![MultiMap::constant(2, Mat::identity(2)), bad],
        )
        .unwrap();
        assert!(matches!(
            propagate_minimal(&PropagationConfig {
                ops,
                seed,
                extend_to: 2
            }),
            Err(PropagateError::PreconditionFailed(_))
        ));
    }

    #[test]
    fn embed_identity_gives_unit_jet() {
        let y = e12_e21();
        let jets = embed_algebra(&y, &[Mat::identity(2)], 3).unwrap();
        assert_eq!(jets[0], Jet::unit(y, 3).unwrap());
    }

    #[test]
    fn embed_nilpotent_squares_to_zero() {
        let y = e12_e21();
        let a = Mat::unit(2, 0, 1);
        let jets = embed_algebra(&y, &[a], 4).unwrap();
        let f = &jets[0];
        assert!(!f.is_zero());
        let sq = jet_mul(f, f).unwrap();
        assert!(sq.is_zero());
    }

    #[test]
    fn embed_rejects_outside_elements() {
        // the generated algebra of a scalar point is just the scalars
        let y = MatTuple::zeros(2, 2);
        let a = Mat::unit(2, 0, 1);
        assert_eq!(
            embed_algebra(&y, &[a], 2).unwrap_err(),
            PropagateError::NotInAlgebra(0)
        );
    }

    #[test]
    fn growth_table_small_values() {
        let two = Scalar::from_int(2);
        let seq = growth_bound(&two, &two, 3).unwrap();
        assert_eq!(seq.value(0, 0), &Scalar::one());
        // c_{1,0} = 2 alpha beta
        assert_eq!(seq.value(1, 0), &Scalar::from_int(8));
        assert_eq!(seq.value(1, 1), &Scalar::zero());
        // c_{2,0} = 2 alpha^2 beta^3 for beta >= 2
        assert_eq!(seq.value(2, 0), &Scalar::from_int(64));
    }

    #[test]
    fn growth_rejects_nonpositive() {
        assert!(growth_bound(&Scalar::zero(), &Scalar::one(), 2).is_err());
        assert!(growth_bound(&Scalar::one(), &Scalar::from_int(-1), 2).is_err());
    }

    #[test]
    fn separating_example_shape() {
        let y_top = e12_e21();
        let y_bot = MatTuple::zeros(2, 1);
        let jet = separating_example(&y_top, &y_bot, 3).unwrap();
        assert!(jet.map(0).is_zero());
        assert!(!jet.map(1).is_zero());
        // vanishes on block-diagonal directions at every order
        let span = block_diagonal_span(2, 2, 1);
        for ell in 1..=3 {
            let mut idx = vec![0usize; ell];
            loop {
                let args: Vec<Vec<Scalar>> = idx.iter().map(|&i| span[i].clone()).collect();
                assert!(jet.map(ell).apply_coords(&args).is_zero());
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
        // nilpotent direction argument: the whole sequence still satisfies LAC
        let y = y_top.direct_sum(&y_bot);
        assert!(check_lac_truncated(&y, &jet, 3).unwrap().holds);
    }

    #[test]
    fn separating_example_rejects_similar_blocks() {
        let y = e12_e21();
        assert_eq!(
            separating_example(&y, &y, 2).unwrap_err(),
            PropagateError::NotSeparated
        );
    }

    #[test]
    fn nilpotent_direction_sanity() {
        // directions built from strictly upper triangular tuples stay
        // jointly nilpotent after the direct sum used in these tests
        let z = MatTuple::new(vec![Mat::unit(2, 0, 1), Mat::zeros(2, 2)]).unwrap();
        assert!(is_jointly_nilpotent(&z));
    }
}
