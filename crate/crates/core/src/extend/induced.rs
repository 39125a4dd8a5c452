//! The induced representation on `H`-valued functions with `xi(tn) = pi(n)^-1 xi(t)`,
//! realized by their values on the transversal (block `x` holds `xi(c(x))`), together
//! with multiplication operators and the right-translation unitaries `U_s xi(t) = V_s xi(ts)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::QuotientData;
use crate::matrices::{dist, repeat_diag, ComplexMatrix};
use crate::obstruction::TwistedActionData;
use crate::reps::UnitaryRep;

/// `(Ind pi)_t xi(r) = xi(t^-1 r)`.
pub fn induce(pi: &UnitaryRep, qd: &QuotientData) -> Result<UnitaryRep> {
    let g = pi.group().clone();
    let d = pi.dim();
    let nq = qd.order();
    let mats = (0..g.order())
        .map(|t| {
            let tinv = g.inv(t);
            let mut m = ComplexMatrix::zeros(d * nq, d * nq);
            for x in 0..nq {
                let (y, n) = qd.coset_factor(&g, g.mul(tinv, qd.section(x)));
                m.view_mut((x * d, y * d), (d, d)).copy_from(pi.mat(g.inv(n)));
            }
            m
        })
        .collect();
    UnitaryRep::of_group(g, mats, pi.tol())
}

/// `M(f)` multiplies block `x` by `f(x)`.
pub fn multiplication_rep(f: &[f64], d: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(d * f.len(), d * f.len());
    for (x, v) in f.iter().enumerate() {
        for i in 0..d {
            m[(x * d + i, x * d + i)] = (*v).into();
        }
    }
    m
}

fn indicator(nq: usize, z: usize) -> Vec<f64> {
    (0..nq).map(|x| if x == z { 1.0 } else { 0.0 }).collect()
}

/// Largest `|M(lt_s f) - Ind_s M(f) Ind_s*|` over `s` in `G` and indicator functions `f`,
/// where `lt_s f(uN) = f(s^-1 uN)`.
pub fn covariance_residual(ind: &UnitaryRep, qd: &QuotientData, d: usize) -> f64 {
    let g = ind.group();
    let q = qd.q_group();
    let nq = qd.order();
    let mut worst: f64 = 0.0;
    for s in 0..g.order() {
        let u = ind.mat(s);
        for z in 0..nq {
            let lhs = multiplication_rep(&indicator(nq, q.mul(qd.proj(s), z)), d);
            let rhs = u * multiplication_rep(&indicator(nq, z), d) * u.adjoint();
            worst = worst.max(dist(&lhs, &rhs));
        }
    }
    worst
}

/// `U_s xi(t) = V_s xi(ts)` for every `s` in `G`.
pub fn right_translation_unitaries(action: &TwistedActionData) -> Vec<ComplexMatrix> {
    let pi = action.pi();
    let g = pi.group();
    let qd = action.quotient();
    let d = pi.dim();
    let nq = qd.order();
    (0..g.order())
        .map(|s| {
            let vs = action.section().v(s);
            let mut m = ComplexMatrix::zeros(d * nq, d * nq);
            for y in 0..nq {
                let (z, n) = qd.coset_factor(g, g.mul(qd.section(y), s));
                m.view_mut((y * d, z * d), (d, d)).copy_from(&(vs * pi.mat(g.inv(n))));
            }
            m
        })
        .collect()
}

#[derive(Debug, Clone, Copy, Serialize, PartialEq)]
pub struct CrosscheckResiduals {
    /// `R_x R_y R_xy* = 1 (x) sigma(x,y)` with `R_x = U_{c(x)}`.
    pub omega: f64,
    /// `R_x (1 (x) T) R_x* = 1 (x) alpha_x(T)` over the commutant basis.
    pub beta: f64,
    /// Covariance of `(M, Ind pi)`.
    pub covariance: f64,
    /// `U_s M(f) U_s* = M(rt_sN f)` with `rt_tN f(uN) = f(utN)`.
    pub right_covariance: f64,
    /// `U_s` commutes with `Ind pi`.
    pub commutation: f64,
    pub induced_homomorphism: f64,
}

impl CrosscheckResiduals {
    pub fn max(&self) -> f64 {
        [
            self.omega,
            self.beta,
            self.covariance,
            self.right_covariance,
            self.commutation,
            self.induced_homomorphism,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

pub fn induced_crosscheck(action: &TwistedActionData) -> Result<CrosscheckResiduals> {
    let tol = action.tol();
    let pi = action.pi();
    let g = pi.group();
    let qd = action.quotient();
    let q = qd.q_group();
    let nq = qd.order();
    let d = pi.dim();
    let ind = induce(pi, qd)?;
    let induced_homomorphism = crate::reps::rep_validate(&ind).homomorphism;
    let u = right_translation_unitaries(action);
    let r = |x: usize| &u[qd.section(x)];

    let mut omega: f64 = 0.0;
    for x in 0..nq {
        for y in 0..nq {
            let lhs = r(x) * r(y) * r(q.mul(x, y)).adjoint();
            omega = omega.max(dist(&lhs, &repeat_diag(action.sigma(x, y), nq)));
        }
    }

    let basis = &action.commutant().basis;
    let mut beta: f64 = 0.0;
    for x in 0..nq {
        let a = action.alpha(x);
        for (j, t) in basis.iter().enumerate() {
            let mut image = ComplexMatrix::zeros(d, d);
            for (i, b) in basis.iter().enumerate() {
                image += b * a[(i, j)];
            }
            let lhs = r(x) * repeat_diag(t, nq) * r(x).adjoint();
            beta = beta.max(dist(&lhs, &repeat_diag(&image, nq)));
        }
    }

    let covariance = covariance_residual(&ind, qd, d);

    let mut right_covariance: f64 = 0.0;
    let mut commutation: f64 = 0.0;
    for s in 0..g.order() {
        let us = &u[s];
        let xs_inv = q.inv(qd.proj(s));
        for z in 0..nq {
            let lhs = us * multiplication_rep(&indicator(nq, z), d) * us.adjoint();
            let rhs = multiplication_rep(&indicator(nq, q.mul(z, xs_inv)), d);
            right_covariance = right_covariance.max(dist(&lhs, &rhs));
        }
        for t in 0..g.order() {
            commutation = commutation.max(dist(&(us * ind.mat(t)), &(ind.mat(t) * us)));
        }
    }

    let res = CrosscheckResiduals {
        omega,
        beta,
        covariance,
        right_covariance,
        commutation,
        induced_homomorphism,
    };
    if res.max() > 10.0 * tol {
        return Err(Error::inconsistent("induced-representation cross-check", res.max()));
    }
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::extend::tests::action_for;
    use crate::groups::{quotient_with_transversal, NormalSubgroup};
    use crate::matrices::{c64, scalar, DEFAULT_TOL};
    use crate::reps::rep_validate;
    use std::sync::Arc;

    fn z4() -> (UnitaryRep, QuotientData) {
        let g = Arc::new(catalog::cyclic(4));
        let n = NormalSubgroup::new(g.clone(), &[0, 2]).unwrap();
        let qd = quotient_with_transversal(&g, &n).unwrap();
        let pi = UnitaryRep::new(g, vec![0, 2], vec![scalar(c64(1.0, 0.0)), scalar(c64(-1.0, 0.0))], DEFAULT_TOL).unwrap();
        (pi, qd)
    }

    #[test]
    fn induced_character_from_z2_to_z4() {
        let (pi, qd) = z4();
        let ind = induce(&pi, &qd).unwrap();
        assert!(rep_validate(&ind).pass);
        let chars: Vec<f64> = (0..4).map(|t| ind.character(t).re).collect();
        assert_eq!(chars, vec![2.0, 0.0, -2.0, 0.0]);
    }

    #[test]
    fn induced_trivial_rep_is_the_quotient_regular_rep() {
        let g = Arc::new(catalog::dihedral(3));
        let n = NormalSubgroup::new(g.clone(), &[0, 1, 2]).unwrap();
        let qd = quotient_with_transversal(&g, &n).unwrap();
        let pi = UnitaryRep::trivial(g.clone(), vec![0, 1, 2], 1, DEFAULT_TOL);
        let ind = induce(&pi, &qd).unwrap();
        for t in 0..6 {
            let x = qd.proj(t);
            for y in 0..2 {
                // (lambda_x e_y) = e_{xy}
                let target = qd.q_group().mul(x, y);
                assert_eq!(ind.mat(t)[(target, y)], c64(1.0, 0.0));
            }
        }
    }

    #[test]
    fn q8_covariance_and_cross_check() {
        let g = Arc::new(catalog::quaternion_table());
        let n = NormalSubgroup::new(g.clone(), &[0, 4]).unwrap();
        let qd = quotient_with_transversal(&g, &n).unwrap();
        let pi = UnitaryRep::new(g, vec![0, 4], vec![scalar(c64(1.0, 0.0)), scalar(c64(-1.0, 0.0))], DEFAULT_TOL).unwrap();
        let ind = induce(&pi, &qd).unwrap();
        assert!(covariance_residual(&ind, &qd, 1) < 1e-12);
        let res = induced_crosscheck(&action_for(&pi, &qd, 1)).unwrap();
        assert!(res.omega < 1e-12);
        assert!(res.max() < 1e-10);
    }

    #[test]
    fn z4_omega_is_minus_one() {
        let (pi, qd) = z4();
        let act = action_for(&pi, &qd, 2);
        let u = right_translation_unitaries(&act);
        let r1 = &u[qd.section(1)];
        // R_1^2 xi(t) = -xi(t) up to the intertwiner phase, which cancels in omega
        let omega = r1 * r1 * u[0].adjoint();
        let sigma = act.sigma(1, 1)[(0, 0)];
        assert!(dist(&omega, &repeat_diag(&scalar(sigma), 2)) < 1e-12);
        let res = induced_crosscheck(&act).unwrap();
        assert!(res.max() < 1e-10);
    }
}
