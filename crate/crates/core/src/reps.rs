//! Unitary (and projective) matrix representations of finite groups and of normal
//! subgroups, characters, conjugation, intertwiners and commutants.

use std::collections::VecDeque;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::{FiniteGroup, QuotientData};
use crate::matrices::{
    all_finite, dist, identity, joint_commutant, polar_unitary, random_matrix, unitarity_residual,
    ComplexMatrix,
};

/// Attempts made by [`unitary_intertwiner`] before giving up.
pub const INTERTWINER_ATTEMPTS: usize = 8;

/// A unitary representation of a subgroup of `group` (possibly all of it), with one
/// matrix stored per element of its domain.
#[derive(Debug, Clone)]
pub struct UnitaryRep {
    group: Arc<FiniteGroup>,
    domain: Vec<usize>,
    position: Vec<Option<usize>>,
    dim: usize,
    mats: Vec<ComplexMatrix>,
    tol: f64,
}

#[derive(Debug, Clone, Copy, Serialize, PartialEq)]
pub struct RepResiduals {
    pub homomorphism: f64,
    pub unitarity: f64,
    pub identity: f64,
    pub pass: bool,
}

impl UnitaryRep {
    /// Representation of the subgroup `domain` (sorted element indices) with
    /// `mats[k]` the image of `domain[k]`. Shapes are checked; the homomorphism
    /// property is checked by [`rep_validate`].
    pub fn new(
        group: Arc<FiniteGroup>,
        domain: Vec<usize>,
        mats: Vec<ComplexMatrix>,
        tol: f64,
    ) -> Result<Self> {
        if domain.len() != mats.len() {
            return Err(Error::Shape(format!(
                "{} matrices for {} elements",
                mats.len(),
                domain.len()
            )));
        }
        if domain.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Shape("domain must be sorted without repeats".into()));
        }
        if domain.first() != Some(&0) {
            return Err(Error::Shape("domain must contain the identity".into()));
        }
        let dim = mats[0].nrows();
        for (g, m) in domain.iter().zip(&mats) {
            if m.shape() != (dim, dim) {
                return Err(Error::Shape(format!(
                    "matrix for element {g} is {}x{} (expected {dim}x{dim})",
                    m.nrows(),
                    m.ncols()
                )));
            }
            if !all_finite(m) {
                return Err(Error::Shape(format!("matrix for element {g} has non-finite entries")));
            }
        }
        let mut position = vec![None; group.order()];
        for (k, &g) in domain.iter().enumerate() {
            if g >= group.order() {
                return Err(Error::Shape(format!("element {g} is out of range")));
            }
            position[g] = Some(k);
        }
        Ok(UnitaryRep {
            group,
            domain,
            position,
            dim,
            mats,
            tol,
        })
    }

    /// Representation of the whole group from one matrix per element.
    pub fn of_group(group: Arc<FiniteGroup>, mats: Vec<ComplexMatrix>, tol: f64) -> Result<Self> {
        let domain = (0..group.order()).collect();
        Self::new(group, domain, mats, tol)
    }

    /// Completes a representation of the subgroup `domain` from images of some of its
    /// elements, propagating products breadth-first and rejecting inconsistent data.
    pub fn from_partial(
        group: Arc<FiniteGroup>,
        domain: &[usize],
        given: &[(usize, ComplexMatrix)],
        tol: f64,
    ) -> Result<Self> {
        let mut domain = domain.to_vec();
        domain.sort_unstable();
        domain.dedup();
        let dim = match given.first() {
            Some((_, m)) => m.nrows(),
            None => return Err(Error::Shape("no matrices given".into())),
        };
        let mut assigned: Vec<Option<ComplexMatrix>> = vec![None; group.order()];
        assigned[0] = Some(identity(dim));
        for (g, m) in given {
            if *g >= group.order() || domain.binary_search(g).is_err() {
                return Err(Error::Shape(format!("element {g} is outside the subgroup")));
            }
            if m.shape() != (dim, dim) {
                return Err(Error::Shape(format!("matrix for element {g} has the wrong shape")));
            }
            if let Some(prev) = &assigned[*g] {
                if dist(prev, m) > tol {
                    return Err(Error::Shape(format!("conflicting matrices for element {g}")));
                }
            }
            assigned[*g] = Some(m.clone());
        }
        let gens: Vec<(usize, ComplexMatrix)> = given.to_vec();
        let mut queue = VecDeque::from([0usize]);
        let mut visited = vec![false; group.order()];
        visited[0] = true;
        while let Some(x) = queue.pop_front() {
            let mx = assigned[x].clone().expect("visited elements are assigned");
            for (h, mh) in &gens {
                let p = group.mul(x, *h);
                let mp = &mx * mh;
                match &assigned[p] {
                    Some(prev) if dist(prev, &mp) > tol.max(1e-12) * 10.0 => {
                        return Err(Error::Shape(format!(
                            "given matrices violate the group law at element {p}"
                        )));
                    }
                    Some(_) => {}
                    None => assigned[p] = Some(mp),
                }
                if !visited[p] {
                    visited[p] = true;
                    queue.push_back(p);
                }
            }
        }
        let mut mats = Vec::with_capacity(domain.len());
        for &g in &domain {
            match assigned[g].take() {
                Some(m) if visited[g] => mats.push(m),
                _ => {
                    return Err(Error::Shape(format!(
                        "given elements do not generate the subgroup (missing {g})"
                    )))
                }
            }
        }
        Self::new(group, domain, mats, tol)
    }

    /// `g -> I_d` on the given subgroup.
    pub fn trivial(group: Arc<FiniteGroup>, domain: Vec<usize>, dim: usize, tol: f64) -> Self {
        let mats = vec![identity(dim); domain.len()];
        Self::new(group, domain, mats, tol).expect("trivial representation is well formed")
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn domain(&self) -> &[usize] {
        &self.domain
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn contains(&self, g: usize) -> bool {
        self.position.get(g).is_some_and(Option::is_some)
    }

    pub fn get(&self, g: usize) -> Option<&ComplexMatrix> {
        self.position.get(g).copied().flatten().map(|k| &self.mats[k])
    }

    /// Image of `g`. Panics if `g` is outside the domain.
    pub fn mat(&self, g: usize) -> &ComplexMatrix {
        self.get(g)
            .unwrap_or_else(|| panic!("element {g} is outside the representation's domain"))
    }

    pub fn mats(&self) -> &[ComplexMatrix] {
        &self.mats
    }

    pub fn character(&self, g: usize) -> Complex64 {
        self.mat(g).trace()
    }

    pub fn restrict(&self, members: &[usize]) -> Result<UnitaryRep> {
        let mut domain = members.to_vec();
        domain.sort_unstable();
        let mats = domain
            .iter()
            .map(|&g| {
                self.get(g)
                    .cloned()
                    .ok_or_else(|| Error::Shape(format!("element {g} is outside the domain")))
            })
            .collect::<Result<_>>()?;
        UnitaryRep::new(self.group.clone(), domain, mats, self.tol)
    }

    /// `g -> U rho(g) U*`.
    pub fn conjugated_by(&self, u: &ComplexMatrix) -> UnitaryRep {
        let mats = self.mats.iter().map(|m| u * m * u.adjoint()).collect();
        UnitaryRep { mats, ..self.clone() }
    }

    pub fn direct_sum(&self, other: &UnitaryRep) -> Result<UnitaryRep> {
        if self.domain != other.domain {
            return Err(Error::Shape("direct sum of representations on different domains".into()));
        }
        let mats = self
            .mats
            .iter()
            .zip(&other.mats)
            .map(|(a, b)| crate::matrices::block_diag(&[a, b]))
            .collect();
        UnitaryRep::new(self.group.clone(), self.domain.clone(), mats, self.tol)
    }

    /// Largest entrywise distance to another representation on the same domain.
    pub fn distance(&self, other: &UnitaryRep) -> f64 {
        if self.domain != other.domain || self.dim != other.dim {
            return f64::INFINITY;
        }
        self.mats
            .iter()
            .zip(&other.mats)
            .map(|(a, b)| dist(a, b))
            .fold(0.0, f64::max)
    }
}

/// Homomorphism, unitarity and identity residuals of a representation.
pub fn rep_validate(rep: &UnitaryRep) -> RepResiduals {
    let g = &rep.group;
    let mut homomorphism: f64 = 0.0;
    let mut unitarity: f64 = 0.0;
    for &a in &rep.domain {
        let ma = rep.mat(a);
        unitarity = unitarity.max(unitarity_residual(ma));
        for &b in &rep.domain {
            let ab = g.mul(a, b);
            let resid = match rep.get(ab) {
                Some(mab) => dist(&(ma * rep.mat(b)), mab),
                None => f64::INFINITY,
            };
            homomorphism = homomorphism.max(resid);
        }
    }
    let identity_resid = dist(rep.mat(0), &identity(rep.dim));
    RepResiduals {
        homomorphism,
        unitarity,
        identity: identity_resid,
        pass: homomorphism <= rep.tol && unitarity <= rep.tol && identity_resid <= rep.tol,
    }
}

/// `n -> pi(s n s^-1)` for `s` in the ambient group.
pub fn conjugate_rep(pi: &UnitaryRep, s: usize) -> Result<UnitaryRep> {
    let g = &pi.group;
    let mats = pi
        .domain
        .iter()
        .map(|&n| {
            let c = g.conjugate(s, n);
            pi.get(c).cloned().ok_or(Error::NotNormal { s, n })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(UnitaryRep {
        mats,
        ..pi.clone()
    })
}

/// Equality of characters elementwise within tolerance. For finite groups this decides
/// unitary equivalence.
pub fn characters_equal(a: &UnitaryRep, b: &UnitaryRep) -> bool {
    a.domain == b.domain
        && a.dim == b.dim
        && a.domain
            .iter()
            .all(|&g| (a.character(g) - b.character(g)).norm() <= a.tol.max(b.tol))
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Invariance {
    pub invariant: bool,
    /// Transversal elements `s` with `pi^s` inequivalent to `pi`.
    pub witnesses: Vec<usize>,
}

/// Decides whether `pi` (a representation of `N`) is equivalent to all its conjugates
/// `pi^s`; checking `s` over a transversal suffices.
pub fn is_g_invariant(pi: &UnitaryRep, qd: &QuotientData) -> Result<Invariance> {
    let mut witnesses = Vec::new();
    for &s in qd.transversal() {
        if !characters_equal(pi, &conjugate_rep(pi, s)?) {
            witnesses.push(s);
        }
    }
    Ok(Invariance {
        invariant: witnesses.is_empty(),
        witnesses,
    })
}

/// Largest residual of `W a(n) W* = b(n)` over the domain.
pub fn intertwining_residual(w: &ComplexMatrix, a: &UnitaryRep, b: &UnitaryRep) -> f64 {
    a.domain
        .iter()
        .map(|&n| dist(&(w * a.mat(n) * w.adjoint()), b.mat(n)))
        .fold(0.0, f64::max)
}

/// A unitary `W` with `W a(n) W* = b(n)`, obtained by group-averaging a random matrix and
/// taking its polar factor. Returns `W` and the number of regenerations needed.
pub fn unitary_intertwiner<R: Rng>(
    a: &UnitaryRep,
    b: &UnitaryRep,
    rng: &mut R,
) -> Result<(ComplexMatrix, usize)> {
    if !characters_equal(a, b) {
        return Err(Error::Numerical(
            "cannot intertwine representations with different characters".into(),
        ));
    }
    let d = a.dim;
    let scale = 1.0 / a.domain.len() as f64;
    let tol = a.tol.max(b.tol);
    for attempt in 0..INTERTWINER_ATTEMPTS {
        let x = random_matrix(d, d, rng);
        let mut avg = ComplexMatrix::zeros(d, d);
        for &n in &a.domain {
            avg += b.mat(n) * &x * a.mat(n).adjoint();
        }
        avg.scale_mut(scale);
        match polar_unitary(&avg, tol) {
            Ok(w) => {
                let resid = intertwining_residual(&w, a, b);
                if resid <= tol {
                    return Ok((w, attempt));
                }
            }
            Err(Error::Singular { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Err(Error::Numerical(format!(
        "no invertible intertwiner after {INTERTWINER_ATTEMPTS} attempts"
    )))
}

/// Orthonormal basis of the commutant `rep(domain)'`.
#[derive(Debug, Clone)]
pub struct CommutantBasis {
    pub basis: Vec<ComplexMatrix>,
    pub dim: usize,
}

impl CommutantBasis {
    pub fn is_scalar(&self) -> bool {
        self.dim == 1
    }

    /// True when all basis elements commute with each other.
    pub fn is_abelian(&self, tol: f64) -> bool {
        self.basis.iter().enumerate().all(|(i, a)| {
            self.basis[..i]
                .iter()
                .all(|b| dist(&(a * b), &(b * a)) <= tol)
        })
    }
}

pub fn commutant(rep: &UnitaryRep) -> CommutantBasis {
    let basis = joint_commutant(&rep.mats, rep.dim, rep.tol);
    let dim = basis.len();
    CommutantBasis { basis, dim }
}

pub fn is_irreducible(rep: &UnitaryRep) -> bool {
    commutant(rep).dim == 1
}

/// A projective representation: `mats[s] mats[t] = multiplier(s, t) mats[st]`.
#[derive(Debug, Clone)]
pub struct ProjectiveRep {
    pub group: Arc<FiniteGroup>,
    pub dim: usize,
    pub mats: Vec<ComplexMatrix>,
    /// Row-major `order x order` table.
    pub multiplier: Vec<Complex64>,
}

impl ProjectiveRep {
    pub fn multiplier(&self, s: usize, t: usize) -> Complex64 {
        self.multiplier[s * self.group.order() + t]
    }

    pub fn product_residual(&self) -> f64 {
        let n = self.group.order();
        let mut worst: f64 = 0.0;
        for s in 0..n {
            for t in 0..n {
                let lhs = &self.mats[s] * &self.mats[t];
                let rhs = self.mats[self.group.mul(s, t)].map(|z| z * self.multiplier(s, t));
                worst = worst.max(dist(&lhs, &rhs));
            }
        }
        worst
    }

    pub fn character(&self, s: usize) -> Complex64 {
        self.mats[s].trace()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::groups::{quotient_with_transversal, NormalSubgroup};
    use crate::matrices::{c64, from_real_rows, random_unitary, scalar, DEFAULT_TOL};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn q8_irrep() -> UnitaryRep {
        let g = Arc::new(catalog::quaternion_table());
        let i = ComplexMatrix::from_row_slice(2, 2, &[c64(0.0, 1.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(0.0, -1.0)]);
        let j = from_real_rows(&[&[0.0, 1.0], &[-1.0, 0.0]]);
        let gi = g.element("i").unwrap();
        let gj = g.element("j").unwrap();
        UnitaryRep::from_partial(g.clone(), &(0..8).collect::<Vec<_>>(), &[(gi, i), (gj, j)], DEFAULT_TOL).unwrap()
    }

    fn d4_rotation_character(value: Complex64) -> (Arc<FiniteGroup>, QuotientData, UnitaryRep) {
        let g = Arc::new(catalog::dihedral(4));
        let rot = g.subgroup_generated(&[1]);
        let n = NormalSubgroup::new(g.clone(), &rot).unwrap();
        let qd = quotient_with_transversal(&g, &n).unwrap();
        let pi = UnitaryRep::from_partial(g.clone(), &rot, &[(1, scalar(value))], DEFAULT_TOL).unwrap();
        (g, qd, pi)
    }

    #[test]
    fn trivial_and_sign_reps_validate_exactly() {
        let z2 = Arc::new(catalog::cyclic(2));
        let triv = UnitaryRep::trivial(z2.clone(), vec![0, 1], 1, DEFAULT_TOL);
        let r = rep_validate(&triv);
        assert_eq!((r.homomorphism, r.unitarity), (0.0, 0.0));
        let sign = UnitaryRep::of_group(z2, vec![scalar(c64(1.0, 0.0)), scalar(c64(-1.0, 0.0))], DEFAULT_TOL).unwrap();
        let r = rep_validate(&sign);
        assert!(r.pass);
        assert_eq!((r.homomorphism, r.unitarity), (0.0, 0.0));
    }

    #[test]
    fn quaternion_irrep_validates() {
        let rep = q8_irrep();
        let r = rep_validate(&rep);
        assert!(r.pass && r.homomorphism < 1e-12 && r.unitarity < 1e-12);
        let minus_one = rep.group().element("-1").unwrap();
        assert!(dist(rep.mat(minus_one), &identity(2).map(|z| -z)) < 1e-12);
    }

    #[test]
    fn partial_input_is_checked_against_the_table() {
        let g = Arc::new(catalog::cyclic(4));
        // generator mapped to -1 is fine, to i*... with wrong order fails
        assert!(UnitaryRep::from_partial(g.clone(), &[0, 1, 2, 3], &[(1, scalar(c64(-1.0, 0.0)))], DEFAULT_TOL).is_ok());
        let bad = UnitaryRep::from_partial(g.clone(), &[0, 1, 2, 3], &[(1, scalar(Complex64::from_polar(1.0, 0.3)))], DEFAULT_TOL);
        assert!(bad.is_err());
        // elements outside the subgroup are rejected
        assert!(UnitaryRep::from_partial(g, &[0, 2], &[(1, scalar(c64(1.0, 0.0)))], DEFAULT_TOL).is_err());
    }

    #[test]
    fn conjugation_inside_n_fixes_a_character() {
        let (_, _, pi) = d4_rotation_character(c64(0.0, 1.0));
        let c = conjugate_rep(&pi, 1).unwrap();
        assert_eq!(pi.distance(&c), 0.0);
    }

    #[test]
    fn reflection_inverts_rotation_character() {
        let (g, qd, pi) = d4_rotation_character(c64(0.0, 1.0));
        let refl = qd.section(1);
        assert_eq!(g.conjugate(refl, 1), g.inv(1));
        let c = conjugate_rep(&pi, refl).unwrap();
        assert!((c.mat(1)[(0, 0)] - c64(0.0, -1.0)).norm() < 1e-15);
        assert!(!characters_equal(&pi, &c));
        let inv = is_g_invariant(&pi, &qd).unwrap();
        assert!(!inv.invariant);
        assert_eq!(inv.witnesses, vec![refl]);
    }

    #[test]
    fn real_rotation_character_is_invariant() {
        let (_, qd, pi) = d4_rotation_character(c64(-1.0, 0.0));
        assert!(is_g_invariant(&pi, &qd).unwrap().invariant);
    }

    #[test]
    fn central_reps_are_invariant() {
        let g = Arc::new(catalog::quaternion_table());
        let n = NormalSubgroup::new(g.clone(), &g.center()).unwrap();
        let qd = quotient_with_transversal(&g, &n).unwrap();
        let pi = UnitaryRep::from_partial(g.clone(), n.members(), &[(4, scalar(c64(-1.0, 0.0)))], DEFAULT_TOL).unwrap();
        for s in 0..8 {
            assert_eq!(conjugate_rep(&pi, s).unwrap().distance(&pi), 0.0);
        }
        assert!(is_g_invariant(&pi, &qd).unwrap().invariant);
    }

    #[test]
    fn character_equality_ignores_summand_order() {
        let g = Arc::new(catalog::cyclic(3));
        let w = Complex64::from_polar(1.0, std::f64::consts::TAU / 3.0);
        let a = UnitaryRep::from_partial(g.clone(), &[0, 1, 2], &[(1, scalar(w))], DEFAULT_TOL).unwrap();
        let b = UnitaryRep::trivial(g.clone(), vec![0, 1, 2], 1, DEFAULT_TOL);
        assert!(characters_equal(&a, &a));
        assert!(characters_equal(&a.direct_sum(&b).unwrap(), &b.direct_sum(&a).unwrap()));
        assert!(!characters_equal(&a.direct_sum(&a).unwrap(), &b.direct_sum(&a).unwrap()));
    }

    #[test]
    fn intertwiner_of_a_rep_with_itself() {
        let rep = q8_irrep();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (w, _) = unitary_intertwiner(&rep, &rep, &mut rng).unwrap();
        assert!(intertwining_residual(&w, &rep, &rep) < 1e-9);
    }

    #[test]
    fn intertwiner_of_conjugated_pair() {
        let rep = q8_irrep();
        let a = rep.direct_sum(&UnitaryRep::trivial(rep.group().clone(), rep.domain().to_vec(), 1, DEFAULT_TOL)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let u = random_unitary(3, &mut rng);
        let b = a.conjugated_by(&u);
        let (w, _) = unitary_intertwiner(&a, &b, &mut rng).unwrap();
        assert!(unitarity_residual(&w) < 1e-9);
        assert!(intertwining_residual(&w, &a, &b) < 1e-9);
    }

    #[test]
    fn one_dimensional_intertwiner_is_a_phase() {
        let g = Arc::new(catalog::cyclic(2));
        let rep = UnitaryRep::of_group(g, vec![scalar(c64(1.0, 0.0)), scalar(c64(-1.0, 0.0))], DEFAULT_TOL).unwrap();
        let (w, _) = unitary_intertwiner(&rep, &rep, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        assert!((w[(0, 0)].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn commutant_dimensions() {
        let g = Arc::new(catalog::cyclic(2));
        let sign = UnitaryRep::of_group(g, vec![scalar(c64(1.0, 0.0)), scalar(c64(-1.0, 0.0))], DEFAULT_TOL).unwrap();
        assert!(is_irreducible(&sign));
        let twice = sign.direct_sum(&sign).unwrap();
        assert_eq!(commutant(&twice).dim, 4);
        assert!(!is_irreducible(&twice));
        assert_eq!(commutant(&q8_irrep()).dim, 1);
    }

    #[test]
    fn conjugation_composes() {
        let g = Arc::new(catalog::alternating4());
        let v4 = g.normal_subgroups().into_iter().find(|n| n.len() == 4).unwrap();
        let gens = g.generators_of(&v4);
        let pi = UnitaryRep::from_partial(
            g.clone(),
            &v4,
            &[(gens[0], scalar(c64(-1.0, 0.0))), (gens[1], scalar(c64(1.0, 0.0)))],
            DEFAULT_TOL,
        )
        .unwrap();
        for s in 0..12 {
            for t in 0..12 {
                let lhs = conjugate_rep(&conjugate_rep(&pi, s).unwrap(), t).unwrap();
                let rhs = conjugate_rep(&pi, g.mul(t, s)).unwrap();
                assert_eq!(lhs.distance(&rhs), 0.0);
            }
        }
    }

    #[test]
    fn invariance_verdict_ignores_transversal_choice() {
        let g = Arc::new(catalog::dihedral(4));
        let rot = g.subgroup_generated(&[1]);
        let n = NormalSubgroup::new(g.clone(), &rot).unwrap();
        let qd = quotient_with_transversal(&g, &n).unwrap();
        for value in [c64(0.0, 1.0), c64(-1.0, 0.0)] {
            let pi = UnitaryRep::from_partial(g.clone(), &rot, &[(1, scalar(value))], DEFAULT_TOL).unwrap();
            let base = is_g_invariant(&pi, &qd).unwrap().invariant;
            for seed in 0..3 {
                let other = qd.randomized(&mut ChaCha8Rng::seed_from_u64(seed));
                assert_eq!(is_g_invariant(&pi, &other).unwrap().invariant, base);
            }
        }
    }
}
