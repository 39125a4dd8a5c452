//! Section unitaries `V_s`, the twisted action `(alpha, sigma)` of `G/N` on the commutant
//! of `pi(N)`, and the projective extension `U = V`.

use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::{FiniteGroup, QuotientData};
use crate::matrices::{dist, frob_inner, identity, project_onto, ComplexMatrix};
use crate::reps::{
    characters_equal, commutant, conjugate_rep, intertwining_residual, unitary_intertwiner,
    CommutantBasis, ProjectiveRep, UnitaryRep,
};

/// Representatives per coset pair used to check that `sigma` descends to `Q x Q`.
pub const DESCENT_SAMPLES: usize = 3;

/// Unitaries `W_x` with `W_x pi(n) W_x* = pi(c(x) n c(x)^-1)` and `W_e = I`; the identity
/// is kept whenever it already intertwines.
/// Returns them with the total number of regenerations needed.
pub fn intertwiners<R: Rng>(
    pi: &UnitaryRep,
    qd: &QuotientData,
    rng: &mut R,
) -> Result<(Vec<ComplexMatrix>, usize)> {
    let mut w = vec![identity(pi.dim())];
    let mut regenerations = 0;
    for x in 1..qd.order() {
        let s = qd.section(x);
        let target = conjugate_rep(pi, s)?;
        if !characters_equal(pi, &target) {
            return Err(Error::NotInvariant { witness: s });
        }
        if intertwining_residual(&w[0], pi, &target) <= pi.tol() {
            w.push(w[0].clone());
            continue;
        }
        let (wx, attempts) = unitary_intertwiner(pi, &target, rng)?;
        regenerations += attempts;
        w.push(wx);
    }
    Ok((w, regenerations))
}

/// `V_s = W_{c(sN)} pi(c(sN)^-1 s)` for every `s` in `G`.
#[derive(Debug, Clone, Serialize)]
pub struct SectionUnitaries {
    #[serde(serialize_with = "crate::interchange::ser_matrix_vec")]
    v: Vec<ComplexMatrix>,
    #[serde(serialize_with = "crate::interchange::ser_matrix_vec")]
    w: Vec<ComplexMatrix>,
    /// Worst `|V_{sn} - V_s pi(n)|`.
    residual: f64,
}

impl SectionUnitaries {
    pub fn v(&self, s: usize) -> &ComplexMatrix {
        &self.v[s]
    }

    pub fn all(&self) -> &[ComplexMatrix] {
        &self.v
    }

    pub fn w(&self, x: usize) -> &ComplexMatrix {
        &self.w[x]
    }

    pub fn intertwiners(&self) -> &[ComplexMatrix] {
        &self.w
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }
}

pub fn section_unitaries(
    pi: &UnitaryRep,
    qd: &QuotientData,
    w: &[ComplexMatrix],
) -> Result<SectionUnitaries> {
    let g = pi.group().clone();
    let tol = pi.tol();
    if w.len() != qd.order() {
        return Err(Error::Shape(format!(
            "{} intertwiners for {} cosets",
            w.len(),
            qd.order()
        )));
    }
    let d = pi.dim();
    for (x, wx) in w.iter().enumerate() {
        if wx.shape() != (d, d) {
            return Err(Error::Shape(format!("intertwiner {x} has the wrong shape")));
        }
        let residual = if x == 0 {
            dist(wx, &identity(d))
        } else {
            intertwining_residual(wx, pi, &conjugate_rep(pi, qd.section(x))?)
        };
        if residual > tol {
            return Err(Error::BadWitness { coset: x, residual });
        }
    }
    let v: Vec<ComplexMatrix> = (0..g.order())
        .map(|s| {
            let (x, n) = qd.coset_factor(&g, s);
            &w[x] * pi.mat(n)
        })
        .collect();
    let mut residual: f64 = 0.0;
    for s in 0..g.order() {
        for &n in pi.domain() {
            residual = residual.max(dist(&v[g.mul(s, n)], &(&v[s] * pi.mat(n))));
        }
    }
    if residual > 10.0 * tol {
        return Err(Error::inconsistent("section unitaries V_sn = V_s pi(n)", residual));
    }
    Ok(SectionUnitaries {
        v,
        w: w.to_vec(),
        residual,
    })
}

/// Worst-case residuals of the twisted-action construction.
#[derive(Debug, Clone, Copy, Default, Serialize, PartialEq)]
pub struct ActionResiduals {
    /// `sigma` recomputed at other coset representatives.
    pub descent: f64,
    /// Distance of `sigma` values from the commutant.
    pub membership: f64,
    pub normalization: f64,
    /// `alpha_x alpha_y = Ad sigma(x,y) alpha_xy`.
    pub composition: f64,
    /// `alpha_x(sigma(y,z)) sigma(x,yz) = sigma(x,y) sigma(xy,z)`.
    pub cocycle: f64,
    pub alpha_identity: f64,
}

impl ActionResiduals {
    pub fn max(&self) -> f64 {
        [
            self.descent,
            self.membership,
            self.normalization,
            self.composition,
            self.cocycle,
            self.alpha_identity,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// The twisted action of `Q = G/N` on `pi(N)'` induced by a choice of section unitaries.
#[derive(Debug, Clone)]
pub struct TwistedActionData {
    pi: UnitaryRep,
    quotient: QuotientData,
    commutant: CommutantBasis,
    section: SectionUnitaries,
    sigma: Vec<ComplexMatrix>,
    alpha: Vec<ComplexMatrix>,
    residuals: ActionResiduals,
    tol: f64,
}

impl TwistedActionData {
    pub fn pi(&self) -> &UnitaryRep {
        &self.pi
    }

    pub fn quotient(&self) -> &QuotientData {
        &self.quotient
    }

    pub fn q_group(&self) -> &Arc<FiniteGroup> {
        self.quotient.q_group()
    }

    pub fn commutant(&self) -> &CommutantBasis {
        &self.commutant
    }

    pub fn section(&self) -> &SectionUnitaries {
        &self.section
    }

    pub fn sigma(&self, x: usize, y: usize) -> &ComplexMatrix {
        &self.sigma[x * self.quotient.order() + y]
    }

    pub fn sigma_table(&self) -> &[ComplexMatrix] {
        &self.sigma
    }

    /// Matrix of `T -> V_{c(x)} T V_{c(x)}*` in the commutant basis.
    pub fn alpha(&self, x: usize) -> &ComplexMatrix {
        &self.alpha[x]
    }

    /// `alpha_x(t)` computed by conjugation.
    pub fn apply_alpha(&self, x: usize, t: &ComplexMatrix) -> ComplexMatrix {
        let v = self.section.v(self.quotient.section(x));
        v * t * v.adjoint()
    }

    pub fn residuals(&self) -> &ActionResiduals {
        &self.residuals
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn is_scalar(&self) -> bool {
        self.commutant.is_scalar()
    }
}

fn coefficient_matrix(basis: &[ComplexMatrix], f: impl Fn(&ComplexMatrix) -> ComplexMatrix) -> ComplexMatrix {
    let k = basis.len();
    let mut a = ComplexMatrix::zeros(k, k);
    for (j, bj) in basis.iter().enumerate() {
        let img = f(bj);
        for (i, bi) in basis.iter().enumerate() {
            a[(i, j)] = frob_inner(bi, &img);
        }
    }
    a
}

/// Builds `sigma(x,y) = V_{c(x)} V_{c(y)} V_{c(x)c(y)}*` and `alpha_x = Ad V_{c(x)}`, and
/// checks descent to `Q` and the twisted-action axioms.
pub fn twisted_action<R: Rng>(
    pi: &UnitaryRep,
    qd: &QuotientData,
    section: &SectionUnitaries,
    rng: &mut R,
) -> Result<TwistedActionData> {
    let g = pi.group().clone();
    let q = qd.q_group().clone();
    let nq = q.order();
    let tol = pi.tol();
    let d = pi.dim();
    let comm = commutant(pi);
    let v = |s: usize| section.v(s);
    let sigma_at = |s: usize, t: usize| v(s) * v(t) * v(g.mul(s, t)).adjoint();

    let mut res = ActionResiduals::default();
    let mut sigma = Vec::with_capacity(nq * nq);
    for x in 0..nq {
        for y in 0..nq {
            let sxy = sigma_at(qd.section(x), qd.section(y));
            for _ in 0..DESCENT_SAMPLES {
                let cx = qd.coset(x);
                let cy = qd.coset(y);
                let s = cx[rng.gen_range(0..cx.len())];
                let t = cy[rng.gen_range(0..cy.len())];
                res.descent = res.descent.max(dist(&sigma_at(s, t), &sxy));
            }
            res.membership = res.membership.max(project_onto(&comm.basis, &sxy).1);
            if x == 0 || y == 0 {
                res.normalization = res.normalization.max(dist(&sxy, &identity(d)));
            }
            sigma.push(sxy);
        }
    }

    let alpha: Vec<ComplexMatrix> = (0..nq)
        .map(|x| {
            let vx = v(qd.section(x));
            coefficient_matrix(&comm.basis, |t| vx * t * vx.adjoint())
        })
        .collect();

    let (id_coeffs, _) = project_onto(&comm.basis, &identity(d));
    let id_vec = nalgebra::DVector::from_vec(id_coeffs);
    for a in &alpha {
        res.alpha_identity = res.alpha_identity.max((a * &id_vec - &id_vec).norm());
    }

    let sig = |x: usize, y: usize| &sigma[x * nq + y];
    for x in 0..nq {
        for y in 0..nq {
            let s = sig(x, y);
            let ad = coefficient_matrix(&comm.basis, |t| s * t * s.adjoint());
            let lhs = &alpha[x] * &alpha[y];
            let rhs = ad * &alpha[q.mul(x, y)];
            res.composition = res.composition.max(dist(&lhs, &rhs));
            let vx = v(qd.section(x));
            for z in 0..nq {
                let lhs = vx * sig(y, z) * vx.adjoint() * sig(x, q.mul(y, z));
                let rhs = s * sig(q.mul(x, y), z);
                res.cocycle = res.cocycle.max(dist(&lhs, &rhs));
            }
        }
    }

    let checks = [
        ("sigma descent to G/N", res.descent),
        ("sigma membership in the commutant", res.membership),
        ("sigma normalization", res.normalization),
        ("alpha composition", res.composition),
        ("twisted cocycle identity", res.cocycle),
        ("alpha fixes the identity", res.alpha_identity),
    ];
    for (what, r) in checks {
        if !(r <= 10.0 * tol) {
            return Err(Error::inconsistent(what, r));
        }
    }
    Ok(TwistedActionData {
        pi: pi.clone(),
        quotient: qd.clone(),
        commutant: comm,
        section: section.clone(),
        sigma,
        alpha,
        residuals: res,
        tol,
    })
}

/// `U_s = V_s` as a projective representation of `G` with multiplier `sigma(sN, tN)`;
/// requires a scalar commutant.
pub fn projective_extension(action: &TwistedActionData) -> Result<ProjectiveRep> {
    if !action.is_scalar() {
        return Err(Error::NonScalar {
            commutant_dim: action.commutant.dim,
        });
    }
    let g = action.pi.group().clone();
    let qd = &action.quotient;
    let n = g.order();
    let mut multiplier = Vec::with_capacity(n * n);
    for s in 0..n {
        for t in 0..n {
            let m = action.sigma(qd.proj(s), qd.proj(t));
            multiplier.push(m[(0, 0)]);
        }
    }
    let u = ProjectiveRep {
        group: g,
        dim: action.pi.dim(),
        mats: action.section.all().to_vec(),
        multiplier,
    };
    let resid = u.product_residual();
    if resid > 10.0 * action.tol {
        return Err(Error::inconsistent("projective extension U_s U_t = sigma U_st", resid));
    }
    Ok(u)
}
