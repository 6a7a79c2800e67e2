//! Verification of the (truncated) lost-abbey conditions and admissibility.
//!
//! All conditions are linear in the map data, so they are checked by exact
//! tensor equality over basis inputs; no sampling is involved. For a chain
//! condition at order l, the commutator [S, Y] is placed in one slot (S runs
//! over a basis of M_s) and the remaining slots run over basis tuples. The
//! top-order module conditions quantify S over a basis of the centralizer.

use crate::exactmath::{Mat, MatTuple, Scalar};
use crate::jet::{basis_tuple, basis_tuples, Jet, MultiMap};
use crate::structure::{centralizer, StructureError};
use rayon::prelude::*;
use serde::Serialize;

/// Which displayed identity a violation refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConditionTag {
    /// order-0 condition [f_0, C(Y)] = 0
    Arity0,
    /// commutator in the first slot
    First,
    /// commutator in an interior slot
    Middle,
    /// commutator in the last slot
    Last,
    /// S f_L(Z^1, ...) = f_L(S Z^1, ...) for S in C(Y)
    ModuleLeft,
    /// f_L(..., Z^j S, Z^{j+1}, ...) = f_L(..., Z^j, S Z^{j+1}, ...)
    ModuleMiddle,
    /// f_L(..., Z^l S) = f_L(..., Z^l) S for S in C(Y)
    ModuleRight,
}

/// One failed identity: the tag, the order, where the probe sat, and the
/// largest absolute entry of lhs - rhs.
#[derive(Clone, Debug, Serialize)]
pub struct LacViolation {
    pub condition: ConditionTag,
    pub order: usize,
    /// index of the probe S in its basis (of M_s or of C(Y))
    pub probe: usize,
    /// basis indices of the remaining slots
    pub slots: Vec<usize>,
    /// slot position of the probe, where applicable
    pub position: usize,
    pub deviation: Scalar,
}

/// Outcome of a lost-abbey check. `holds` iff `violations` is empty.
#[derive(Clone, Debug, Serialize)]
pub struct LacReport {
    pub holds: bool,
    pub violations: Vec<LacViolation>,
}

impl LacReport {
    fn from_violations(violations: Vec<LacViolation>) -> Self {
        LacReport {
            holds: violations.is_empty(),
            violations,
        }
    }
}

fn max_abs_entry(m: &Mat) -> Scalar {
    m.entries()
        .iter()
        .map(Scalar::abs)
        .max()
        .unwrap_or_else(Scalar::zero)
}

#[allow(clippy::too_many_arguments)]
fn record(
    violations: &mut Vec<LacViolation>,
    condition: ConditionTag,
    order: usize,
    probe: usize,
    slots: &[usize],
    position: usize,
    lhs: &Mat,
    rhs: &Mat,
) {
    let diff = lhs.sub(rhs);
    if !diff.is_zero() {
        violations.push(LacViolation {
            condition,
            order,
            probe,
            slots: slots.to_vec(),
            position,
            deviation: max_abs_entry(&diff),
        });
    }
}

/// Check the truncated lost-abbey conditions of order `order` for the first
/// `order + 1` maps of the jet: chain rules linking consecutive maps for
/// every probe in a basis of M_s, plus the centralizer-module conditions at
/// the top order. For order 0 the condition is [f_0, C(Y)] = 0.
pub fn check_lac_truncated(
    y: &MatTuple,
    jet: &Jet,
    order: usize,
) -> Result<LacReport, StructureError> {
    assert!(jet.order() >= order, "jet too short for requested order");
    assert_eq!(jet.base(), y, "jet basepoint differs from Y");
    let s = y.size();
    let g = y.g();
    let dim = g * s * s;
    let cent = centralizer(y)?;
    let mut violations = Vec::new();

    let f0 = &jet.map(0).values()[0];
    if order == 0 {
        for (ci, c) in cent.basis.iter().enumerate() {
            record(
                &mut violations,
                ConditionTag::Arity0,
                0,
                ci,
                &[],
                0,
                &f0.commutator(c),
                &Mat::zeros(s, s),
            );
        }
        return Ok(LacReport::from_violations(violations));
    }

    // chain conditions for 1 <= l <= order; the per-probe checks are
    // independent and run in parallel
    for ell in 1..=order {
        let f_hi = jet.map(ell);
        let f_lo = jet.map(ell - 1);
        let probes: Vec<(usize, Vec<usize>)> = (0..s * s)
            .flat_map(|si| {
                basis_tuples(dim, ell - 1)
                    .into_iter()
                    .map(move |slots| (si, slots))
            })
            .collect();
        let found: Vec<LacViolation> = probes
            .par_iter()
            .flat_map(|(si, slots)| {
                let mut local = Vec::new();
                let smat = Mat::unit(s, si / s, si % s);
                let comm = y.commutator_with(&smat).to_coords();
                let rest: Vec<MatTuple> = slots.iter().map(|&i| basis_tuple(g, s, i)).collect();
                let rest_coords: Vec<Vec<Scalar>> = rest.iter().map(MatTuple::to_coords).collect();

                // first: f_l([S,Y], Z...) = S f_{l-1}(Z...) - f_{l-1}(S Z^1, ...)
                let mut args = vec![comm.clone()];
                args.extend(rest_coords.iter().cloned());
                let lhs = f_hi.apply_coords(&args);
                let rhs = if ell == 1 {
                    smat.commutator(f0)
                } else {
                    let mut shifted = rest_coords.clone();
                    shifted[0] = rest[0].left_mul(&smat).to_coords();
                    smat.mul(&f_lo.apply_coords(&rest_coords))
                        .sub(&f_lo.apply_coords(&shifted))
                };
                record(
                    &mut local,
                    ConditionTag::First,
                    ell,
                    *si,
                    slots,
                    0,
                    &lhs,
                    &rhs,
                );

                // middle: commutator in slot position j+1, 1 <= j <= l-2
                for j in 1..ell.saturating_sub(1) {
                    let mut args = rest_coords[..j].to_vec();
                    args.push(comm.clone());
                    args.extend(rest_coords[j..].iter().cloned());
                    let lhs = f_hi.apply_coords(&args);
                    let mut right_shift = rest_coords.clone();
                    right_shift[j - 1] = rest[j - 1].right_mul(&smat).to_coords();
                    let mut left_shift = rest_coords.clone();
                    left_shift[j] = rest[j].left_mul(&smat).to_coords();
                    let rhs = f_lo
                        .apply_coords(&right_shift)
                        .sub(&f_lo.apply_coords(&left_shift));
                    record(
                        &mut local,
                        ConditionTag::Middle,
                        ell,
                        *si,
                        slots,
                        j,
                        &lhs,
                        &rhs,
                    );
                }

                // last: f_l(Z..., [S,Y]) = f_{l-1}(..., Z^{l-1} S) - f_{l-1}(Z...) S
                if ell >= 2 {
                    let mut args = rest_coords.clone();
                    args.push(comm.clone());
                    let lhs = f_hi.apply_coords(&args);
                    let mut shifted = rest_coords.clone();
                    let last = ell - 2;
                    shifted[last] = rest[last].right_mul(&smat).to_coords();
                    let rhs = f_lo
                        .apply_coords(&shifted)
                        .sub(&f_lo.apply_coords(&rest_coords).mul(&smat));
                    record(
                        &mut local,
                        ConditionTag::Last,
                        ell,
                        *si,
                        slots,
                        ell - 1,
                        &lhs,
                        &rhs,
                    );
                }
                local
            })
            .collect();
        violations.extend(found);
    }

    // module conditions at the top order, S over a basis of C(Y)
    let f_top = jet.map(order);
    for (ci, c) in cent.basis.iter().enumerate() {
        for slots in basis_tuples(dim, order) {
            let tuples: Vec<MatTuple> = slots.iter().map(|&i| basis_tuple(g, s, i)).collect();
            let coords: Vec<Vec<Scalar>> = tuples.iter().map(MatTuple::to_coords).collect();
            let plain = f_top.apply_coords(&coords);

            let mut left = coords.clone();
            left[0] = tuples[0].left_mul(c).to_coords();
            record(
                &mut violations,
                ConditionTag::ModuleLeft,
                order,
                ci,
                &slots,
                0,
                &c.mul(&plain),
                &f_top.apply_coords(&left),
            );

            for j in 0..order - 1 {
                let mut a = coords.clone();
                a[j] = tuples[j].right_mul(c).to_coords();
                let mut b = coords.clone();
                b[j + 1] = tuples[j + 1].left_mul(c).to_coords();
                record(
                    &mut violations,
                    ConditionTag::ModuleMiddle,
                    order,
                    ci,
                    &slots,
                    j,
                    &f_top.apply_coords(&a),
                    &f_top.apply_coords(&b),
                );
            }

            let mut right = coords.clone();
            right[order - 1] = tuples[order - 1].right_mul(c).to_coords();
            record(
                &mut violations,
                ConditionTag::ModuleRight,
                order,
                ci,
                &slots,
                order - 1,
                &f_top.apply_coords(&right),
                &plain.mul(c),
            );
        }
    }

    Ok(LacReport::from_violations(violations))
}

/// Y-admissibility of a single multilinear map: the padded sequence
/// (0, ..., 0, f) satisfies the truncated conditions at order = arity(f).
pub fn check_admissible(y: &MatTuple, f: &MultiMap) -> Result<bool, StructureError> {
    let s = y.size();
    let g = y.g();
    assert_eq!((f.s(), f.g()), (s, g), "map shape differs from Y");
    if f.arity() == 0 {
        let jet = Jet::new(y.clone(), vec![f.clone()]).expect("arity-0 jet");
        return Ok(check_lac_truncated(y, &jet, 0)?.holds);
    }
    let mut maps = vec![crate::jet::MultiMap::constant(g, Mat::zeros(s, s))];
    for ell in 1..f.arity() {
        maps.push(MultiMap::zero(s, g, ell).map_err(|e| {
            StructureError::InternalCheckFailure(format!("padding allocation: {e}"))
        })?);
    }
    maps.push(f.clone());
    let jet = Jet::new(y.clone(), maps).expect("padded jet");
    Ok(check_lac_truncated(y, &jet, f.arity())?.holds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::NcPoly;
    use crate::jet::jet_eval;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn e12_e21() -> MatTuple {
        MatTuple::new(vec![Mat::unit(2, 0, 1), Mat::unit(2, 1, 0)]).unwrap()
    }

    fn random_poly(rng: &mut StdRng, g: usize, degree: usize, terms: usize) -> NcPoly {
        let mut p = NcPoly::zero(g);
        for _ in 0..terms {
            let len = rng.gen_range(0..=degree);
            let word: Vec<u16> = (0..len).map(|_| rng.gen_range(1..=g as u16)).collect();
            let coeff = Scalar::from_int(rng.gen_range(-4..=4));
            p.add_term(crate::freealg::Word(word), &coeff);
        }
        p
    }

    #[test]
    fn polynomial_jets_satisfy_lac() {
        let mut rng = StdRng::seed_from_u64(11);
        let y = e12_e21();
        for _ in 0..5 {
            let p = random_poly(&mut rng, 2, 3, 5);
            let jet = jet_eval(&p, &y, 2).unwrap();
            let report = check_lac_truncated(&y, &jet, 2).unwrap();
            assert!(report.holds, "violations: {:?}", report.violations);
        }
    }

    #[test]
    fn scalar_points_pass_vacuously() {
        // commutators with a scalar point vanish, and module conditions are
        // automatic at size 1, so arbitrary tensors pass
        let y = MatTuple::zeros(2, 1);
        let mut rng = StdRng::seed_from_u64(5);
        let mut maps = vec![MultiMap::constant(2, Mat::from_ints(&[&[3]]))];
        for ell in 1..=2 {
            let mut m = MultiMap::zero(1, 2, ell).unwrap();
            for slots in basis_tuples(2, ell) {
                m.set_value(&slots, Mat::from_ints(&[&[rng.gen_range(-5..=5)]]));
            }
            maps.push(m);
        }
        let jet = Jet::new(y.clone(), maps).unwrap();
        assert!(check_lac_truncated(&y, &jet, 2).unwrap().holds);
    }

    #[test]
    fn random_tensors_fail_with_witness() {
        let y = e12_e21();
        let mut rng = StdRng::seed_from_u64(7);
        let mut maps = vec![MultiMap::constant(2, Mat::identity(2))];
        let mut m = MultiMap::zero(2, 2, 1).unwrap();
        for slots in basis_tuples(8, 1) {
            m.set_value(
                &slots,
                Mat::from_fn(2, 2, |_, _| Scalar::from_int(rng.gen_range(-5..=5))),
            );
        }
        maps.push(m);
        let jet = Jet::new(y.clone(), maps).unwrap();
        let report = check_lac_truncated(&y, &jet, 1).unwrap();
        assert!(!report.holds);
        assert!(!report.violations.is_empty());
        assert!(report.violations.iter().all(|v| !v.deviation.is_zero()));
    }

    #[test]
    fn zero_map_is_admissible() {
        let y = e12_e21();
        let f = MultiMap::zero(2, 2, 2).unwrap();
        assert!(check_admissible(&y, &f).unwrap());
    }

    #[test]
    fn first_component_projection_is_not_admissible() {
        // Z -> Z_1 does not kill [M_2, Y]
        let y = e12_e21();
        let mut f = MultiMap::zero(2, 2, 1).unwrap();
        for i in 0..8 {
            let z = basis_tuple(2, 2, i);
            f.set_value(&[i], z.component(0).clone());
        }
        assert!(!check_admissible(&y, &f).unwrap());
    }

    #[test]
    fn admissible_from_vanishing_polynomial_differential() {
        // f = first differential of p with p(Y) = 0 at a semisimple point
        let y = e12_e21();
        let x1 = NcPoly::letter(2, 1);
        let x2 = NcPoly::letter(2, 2);
        let comm = x1.mul(&x2).unwrap().sub(&x2.mul(&x1).unwrap()).unwrap();
        // p = comm^2 - identity-value correction: p(Y) = (E11 - E22)^2 = I,
        // so subtract 1 to get p(Y) = 0
        let p = comm.mul(&comm).unwrap().sub(&NcPoly::one(2)).unwrap();
        assert!(crate::jet::evaluate(&p, &y).is_zero());
        let jet = jet_eval(&p, &y, 1).unwrap();
        assert!(check_admissible(&y, jet.map(1)).unwrap());
    }
}
