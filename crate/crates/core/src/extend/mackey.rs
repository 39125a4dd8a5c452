//! `rho(s) = U_s (x) W_{sN}` for a projective extension `U` with multiplier `sigma` and a
//! projective representation `W` of `G/N` with multiplier `conj(sigma)`.

use rand::Rng;

use crate::cohomology::{decompose_projective, isotypic_classes, twisted_regular_rep, ScalarTwoCocycle};
use crate::error::{Error, Result};
use crate::groups::QuotientData;
use crate::matrices::{dist, identity, kron};
use crate::reps::{commutant, rep_validate, ProjectiveRep, UnitaryRep};

#[derive(Debug, Clone)]
pub struct MackeyTensor {
    pub rep: UnitaryRep,
    pub irreducible: bool,
    pub homomorphism: f64,
    /// `max_n |rho(n) - pi(n) (x) 1|`.
    pub restriction: f64,
}

/// One representative of each irreducible projective representation of `Q` with
/// multiplier `sigma`, read off the twisted regular representation.
pub fn projective_irreps<R: Rng>(sigma: &ScalarTwoCocycle, rng: &mut R) -> Result<Vec<ProjectiveRep>> {
    let tol = sigma.tol();
    let blocks = decompose_projective(&twisted_regular_rep(sigma)?, rng, tol)?;
    Ok(isotypic_classes(&blocks, tol)
        .into_iter()
        .map(|(k, _)| blocks[k].rep.clone())
        .collect())
}

pub fn mackey_tensor(
    u: &ProjectiveRep,
    pi: &UnitaryRep,
    qd: &QuotientData,
    w: &ProjectiveRep,
) -> Result<MackeyTensor> {
    let tol = pi.tol();
    let g = u.group.clone();
    let n = g.order();
    let mut mismatch: f64 = 0.0;
    for s in 0..n {
        for t in 0..n {
            let prod = u.multiplier(s, t) * w.multiplier(qd.proj(s), qd.proj(t));
            mismatch = mismatch.max((prod - 1.0).norm());
        }
    }
    if mismatch > 10.0 * tol {
        return Err(Error::MultiplierMismatch { residual: mismatch });
    }
    let mats = (0..n).map(|s| kron(&u.mats[s], &w.mats[qd.proj(s)])).collect();
    let rep = UnitaryRep::of_group(g, mats, 10.0 * tol)?;
    let check = rep_validate(&rep);
    if !check.pass {
        return Err(Error::inconsistent("tensor product homomorphism", check.homomorphism));
    }
    let one = identity(w.dim);
    let restriction = pi
        .domain()
        .iter()
        .map(|&m| dist(rep.mat(m), &kron(pi.mat(m), &one)))
        .fold(0.0, f64::max);
    if restriction > 10.0 * tol {
        return Err(Error::inconsistent("tensor product restricts to pi (x) 1", restriction));
    }
    let rep = rep.with_tol(tol);
    let irreducible = commutant(&rep).dim == 1;
    Ok(MackeyTensor {
        rep,
        irreducible,
        homomorphism: check.homomorphism,
        restriction,
    })
}
