//! `pi (x) 1` on `H (x) l^2(G/N)` always extends.
//!
//! Vectors are `H`-valued functions on `Q = G/N`, stored as `|Q|` consecutive blocks of
//! size `d` ordered by coset index, so `T (x) 1` is block diagonal with `T` repeated.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrices::{dist, identity, repeat_diag, ComplexMatrix};
use crate::obstruction::TwistedActionData;
use crate::reps::{rep_validate, UnitaryRep};

#[derive(Debug, Clone, Copy, Serialize, PartialEq)]
pub struct StabilizeResiduals {
    pub homomorphism: f64,
    pub unitarity: f64,
    /// `max_n |rho(n) - pi(n) (x) 1|`.
    pub restriction: f64,
    /// `nu_x beta_x(nu_y) omega(x,y) nu_xy* = 1` with `beta = alpha (x) id`, `omega = sigma (x) 1`.
    pub exterior: f64,
}

#[derive(Debug, Clone)]
pub struct Stabilized {
    pub rep: UnitaryRep,
    pub nu: Vec<ComplexMatrix>,
    pub residuals: StabilizeResiduals,
}

/// `(nu_x xi)(r) = sigma(x, x^-1 r^-1)* xi(rx)` and `rho(s) = nu_{sN} (V_s (x) 1)`.
pub fn stabilize(action: &TwistedActionData) -> Result<Stabilized> {
    let tol = action.tol();
    let pi = action.pi();
    let d = pi.dim();
    let q = action.q_group().clone();
    let nq = q.order();
    let big = d * nq;
    let g = pi.group().clone();
    let qd = action.quotient();

    let nu: Vec<ComplexMatrix> = (0..nq)
        .map(|x| {
            let mut m = ComplexMatrix::zeros(big, big);
            let xinv = q.inv(x);
            for r in 0..nq {
                let col = q.mul(r, x);
                let arg = q.mul(xinv, q.inv(r));
                m.view_mut((r * d, col * d), (d, d))
                    .copy_from(&action.sigma(x, arg).adjoint());
            }
            m
        })
        .collect();

    let id = identity(big);
    let mut exterior: f64 = 0.0;
    for x in 0..nq {
        let vx = repeat_diag(action.section().v(qd.section(x)), nq);
        for y in 0..nq {
            let beta = &vx * &nu[y] * vx.adjoint();
            let omega = repeat_diag(action.sigma(x, y), nq);
            let lhs = &nu[x] * beta * omega * nu[q.mul(x, y)].adjoint();
            exterior = exterior.max(dist(&lhs, &id));
        }
    }

    let mats = (0..g.order())
        .map(|s| &nu[qd.proj(s)] * repeat_diag(action.section().v(s), nq))
        .collect();
    let rep = UnitaryRep::of_group(g, mats, tol)?;
    let check = rep_validate(&rep);
    let restriction = pi
        .domain()
        .iter()
        .map(|&n| dist(rep.mat(n), &repeat_diag(pi.mat(n), nq)))
        .fold(0.0, f64::max);
    let residuals = StabilizeResiduals {
        homomorphism: check.homomorphism,
        unitarity: check.unitarity,
        restriction,
        exterior,
    };
    for (what, r) in [
        ("stabilized homomorphism", residuals.homomorphism),
        ("stabilized unitarity", residuals.unitarity),
        ("stabilized restriction to pi (x) 1", residuals.restriction),
        ("stabilized exterior equivalence", residuals.exterior),
    ] {
        if !(r <= 10.0 * tol) {
            return Err(Error::inconsistent(what, r));
        }
    }
    Ok(Stabilized { rep, nu, residuals })
}
