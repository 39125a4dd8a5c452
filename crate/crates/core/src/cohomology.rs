//! Scalar 2-cocycles on a finite group: cocycle checks, an exact triviality test over
//! the integers, class orders, and the twisted group algebra used as an independent
//! check of triviality.

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Signed;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::FiniteGroup;
use crate::matrices::{
    dist, eig_hermitian, identity, joint_commutant, smith_normal_form, to_f64, ComplexMatrix,
    IntegerMatrix, PhaseMatrix, SmithForm,
};
use crate::obstruction::TwistedActionData;
use crate::reps::ProjectiveRep;

/// A normalized `T`-valued 2-cocycle, stored as a row-major `|Q| x |Q|` table.
#[derive(Debug, Clone)]
pub struct ScalarTwoCocycle {
    group: Arc<FiniteGroup>,
    values: Vec<Complex64>,
    tol: f64,
}

impl ScalarTwoCocycle {
    /// Validates unit modulus and the cocycle identity; the identity row and column
    /// are snapped to exactly 1.
    pub fn new(group: Arc<FiniteGroup>, mut values: Vec<Complex64>, tol: f64) -> Result<Self> {
        let n = group.order();
        if values.len() != n * n {
            return Err(Error::Shape(format!(
                "cocycle table has {} entries (expected {})",
                values.len(),
                n * n
            )));
        }
        let modulus = values
            .iter()
            .map(|z| (z.norm() - 1.0).abs())
            .fold(0.0, f64::max);
        if modulus > 10.0 * tol {
            return Err(Error::inconsistent("cocycle modulus", modulus));
        }
        for k in 0..n {
            for idx in [k, k * n] {
                let resid = (values[idx] - 1.0).norm();
                if resid > 10.0 * tol {
                    return Err(Error::inconsistent("cocycle normalization", resid));
                }
                values[idx] = Complex64::new(1.0, 0.0);
            }
        }
        let c = ScalarTwoCocycle { group, values, tol };
        let resid = c.cocycle_residual();
        if resid > 10.0 * tol {
            return Err(Error::inconsistent("cocycle identity", resid));
        }
        Ok(c)
    }

    pub fn from_fn(
        group: Arc<FiniteGroup>,
        f: impl Fn(usize, usize) -> Complex64,
        tol: f64,
    ) -> Result<Self> {
        let n = group.order();
        let values = (0..n * n).map(|k| f(k / n, k % n)).collect();
        Self::new(group, values, tol)
    }

    pub fn trivial(group: Arc<FiniteGroup>, tol: f64) -> Self {
        let n = group.order();
        ScalarTwoCocycle {
            group,
            values: vec![Complex64::new(1.0, 0.0); n * n],
            tol,
        }
    }

    /// `(x, y) -> nu(xy) conj(nu(x) nu(y))` for `nu` with `nu(e) = 1`.
    pub fn coboundary(group: Arc<FiniteGroup>, nu: &[Complex64], tol: f64) -> Result<Self> {
        let g = group.clone();
        Self::from_fn(group, |x, y| nu[g.mul(x, y)] * (nu[x] * nu[y]).conj(), tol)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    #[inline]
    pub fn value(&self, x: usize, y: usize) -> Complex64 {
        self.values[x * self.group.order() + y]
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// `sigma(y,z) sigma(x,yz) = sigma(x,y) sigma(xy,z)`, worst case.
    pub fn cocycle_residual(&self) -> f64 {
        let g = &self.group;
        let n = g.order();
        let mut worst: f64 = 0.0;
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let lhs = self.value(y, z) * self.value(x, g.mul(y, z));
                    let rhs = self.value(x, y) * self.value(g.mul(x, y), z);
                    worst = worst.max((lhs - rhs).norm());
                }
            }
        }
        worst
    }

    pub fn pow(&self, k: usize) -> Self {
        let values = self.values.iter().map(|z| z.powu(k as u32)).collect();
        ScalarTwoCocycle {
            values,
            ..self.clone()
        }
    }

    pub fn conj(&self) -> Self {
        let values = self.values.iter().map(|z| z.conj()).collect();
        ScalarTwoCocycle {
            values,
            ..self.clone()
        }
    }

    pub fn product(&self, other: &ScalarTwoCocycle) -> Self {
        assert_eq!(self.values.len(), other.values.len());
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .collect();
        ScalarTwoCocycle {
            values,
            ..self.clone()
        }
    }

    pub fn phases(&self) -> PhaseMatrix {
        PhaseMatrix::from_values(self.order(), &self.values, self.tol)
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        self.values.chunks(self.order()).map(<[Complex64]>::to_vec).collect()
    }
}

/// Reads a scalar cocycle off a twisted action whose values are multiples of the identity.
pub fn normalize(action: &TwistedActionData, tol: f64) -> Result<ScalarTwoCocycle> {
    let q = action.quotient().q_group().clone();
    let n = q.order();
    let mut values = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let s = action.sigma(x, y);
            let d = s.nrows();
            let lambda = s.trace() / d as f64;
            let off = dist(s, &identity(d).map(|z| z * lambda));
            if off > tol {
                return Err(Error::NonScalar {
                    commutant_dim: action.commutant().dim,
                });
            }
            values.push(lambda);
        }
    }
    ScalarTwoCocycle::new(q, values, tol)
}

/// `nu: Q -> T` with `nu(e) = 1` and `sigma(x,y) = nu(xy) conj(nu(x) nu(y))`.
#[derive(Debug, Clone, Serialize)]
pub struct CoboundaryWitness {
    #[serde(serialize_with = "crate::interchange::ser_complex_vec")]
    pub nu: Vec<Complex64>,
    pub residual: f64,
}

/// Integer pairing of the phase vector with one left-kernel vector of the boundary map.
#[derive(Debug, Clone, Serialize)]
pub struct KernelPairing {
    pub index: usize,
    /// `y . a` reduced into `[0, 1)`.
    pub value: f64,
    pub l1_norm: f64,
}

#[derive(Debug, Clone)]
pub struct PhaseSolution {
    /// Solution `b` of `B b = a (mod 1)`, reduced into `[0, 1)`, when one exists.
    pub solution: Option<Vec<f64>>,
    /// Pairings whose value is not an integer.
    pub obstructions: Vec<KernelPairing>,
    pub kernel_rank: usize,
}

/// A linear system `B b = a (mod 1)` with integer `B`, decided exactly through the
/// Smith normal form of `B`: it is solvable iff `y . a` is an integer for every integer
/// row vector `y` with `y B = 0`.
#[derive(Debug)]
pub struct PhaseSystem {
    matrix: IntegerMatrix,
    snf: SmithForm,
    kernel: Vec<(Vec<f64>, f64)>,
    u_rows: Vec<Vec<f64>>,
    v_rows: Vec<Vec<f64>>,
}

impl PhaseSystem {
    pub fn new(matrix: IntegerMatrix) -> Self {
        let snf = smith_normal_form(&matrix);
        let rank = snf.rank;
        let as_f64 = |row: &[BigInt]| row.iter().map(to_f64).collect::<Vec<f64>>();
        let kernel = (rank..matrix.rows())
            .map(|i| {
                let row = snf.u.row(i);
                let l1 = row.iter().map(|x| to_f64(&x.abs())).sum::<f64>();
                (as_f64(row), l1)
            })
            .collect();
        let u_rows = (0..rank).map(|i| as_f64(snf.u.row(i))).collect();
        let v_rows = (0..matrix.cols()).map(|j| as_f64(snf.v.row(j))).collect();
        PhaseSystem {
            matrix,
            snf,
            kernel,
            u_rows,
            v_rows,
        }
    }

    pub fn matrix(&self) -> &IntegerMatrix {
        &self.matrix
    }

    pub fn smith(&self) -> &SmithForm {
        &self.snf
    }

    /// Largest absolute entry of the transforming matrices, a measure of how much
    /// floating-point cancellation the solve can suffer.
    pub fn transform_size(&self) -> f64 {
        to_f64(&self.snf.u.max_abs()).max(to_f64(&self.snf.v.max_abs()))
    }

    /// Solves `B b = a (mod 1)`. Every obstruction value of the system is known to be a
    /// multiple of `1/denominator_bound`; pairings that are neither within tolerance of
    /// an integer nor clearly away from one raise a precision error.
    pub fn solve(&self, a: &[f64], denominator_bound: usize, tol: f64) -> Result<PhaseSolution> {
        assert_eq!(a.len(), self.matrix.rows(), "phase vector has the wrong length");
        let dot = |y: &[f64]| y.iter().zip(a).map(|(p, q)| p * q).sum::<f64>();
        let mut obstructions = Vec::new();
        for (index, (y, l1)) in self.kernel.iter().enumerate() {
            let value = dot(y);
            let frac = value.rem_euclid(1.0);
            let defect = frac.min(1.0 - frac);
            let slack = tol * l1.max(1.0);
            if defect <= slack {
                continue;
            }
            let step = 1.0 / denominator_bound as f64;
            let off_grid = {
                let k = (frac / step).round();
                (frac - k * step).abs()
            };
            if defect < 0.5 * step && off_grid > slack || off_grid > slack && defect < 1e3 * slack {
                return Err(Error::Precision(format!(
                    "kernel pairing {index} has defect {defect:.3e} near the decision threshold {slack:.3e}; \
                     rerun with a tighter tolerance"
                )));
            }
            obstructions.push(KernelPairing {
                index,
                value: frac,
                l1_norm: *l1,
            });
        }
        if !obstructions.is_empty() {
            return Ok(PhaseSolution {
                solution: None,
                obstructions,
                kernel_rank: self.kernel.len(),
            });
        }
        // D c = U a + w with integer w chosen to keep c small; b = V c.
        let diag = self.snf.diagonal();
        let c: Vec<f64> = self
            .u_rows
            .iter()
            .zip(&diag)
            .map(|(u, d)| dot(u).rem_euclid(1.0) / to_f64(d))
            .collect();
        let b = self
            .v_rows
            .iter()
            .map(|v| {
                v.iter()
                    .zip(&c)
                    .map(|(vij, ci)| vij * ci)
                    .sum::<f64>()
                    .rem_euclid(1.0)
            })
            .collect();
        Ok(PhaseSolution {
            solution: Some(b),
            obstructions,
            kernel_rank: self.kernel.len(),
        })
    }
}

/// The boundary map on normalized 1-cochains of a finite group: unknowns `b(x)` for
/// `x != e`, one row `b(x) + b(y) - b(xy)` per pair of non-identity elements.
#[derive(Debug)]
pub struct CoboundarySystem {
    order: usize,
    system: PhaseSystem,
}

fn cache() -> &'static Mutex<HashMap<Vec<Vec<usize>>, Arc<CoboundarySystem>>> {
    static CACHE: OnceLock<Mutex<HashMap<Vec<Vec<usize>>, Arc<CoboundarySystem>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

impl CoboundarySystem {
    pub fn new(q: &FiniteGroup) -> Self {
        let n = q.order();
        let m = n.saturating_sub(1);
        let mut b = IntegerMatrix::zeros(m * m, m);
        for x in 1..n {
            for y in 1..n {
                let row = (x - 1) * m + (y - 1);
                let bump = |b: &mut IntegerMatrix, col: usize, by: i64| {
                    let cur = b.get(row, col).clone();
                    b.set(row, col, cur + by);
                };
                bump(&mut b, x - 1, 1);
                bump(&mut b, y - 1, 1);
                let xy = q.mul(x, y);
                if xy != 0 {
                    bump(&mut b, xy - 1, -1);
                }
            }
        }
        CoboundarySystem {
            order: n,
            system: PhaseSystem::new(b),
        }
    }

    /// Shared instance for a given multiplication table.
    pub fn for_group(q: &FiniteGroup) -> Arc<Self> {
        let key = q.table();
        if let Some(hit) = cache().lock().expect("cache lock").get(&key) {
            return hit.clone();
        }
        let sys = Arc::new(Self::new(q));
        cache().lock().expect("cache lock").insert(key, sys.clone());
        sys
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn boundary_matrix(&self) -> &IntegerMatrix {
        self.system.matrix()
    }

    pub fn phase_system(&self) -> &PhaseSystem {
        &self.system
    }
}

/// Audit record of a triviality test.
#[derive(Debug, Clone, Serialize)]
pub struct CoboundaryAnalysis {
    pub phases: Vec<Vec<f64>>,
    pub kernel_rank: usize,
    pub obstructions: Vec<KernelPairing>,
    pub witness: Option<CoboundaryWitness>,
}

pub fn analyze_coboundary(sigma: &ScalarTwoCocycle) -> Result<CoboundaryAnalysis> {
    let q = sigma.group().clone();
    let n = q.order();
    let phases = sigma.phases();
    let sys = CoboundarySystem::for_group(&q);
    let a: Vec<f64> = (1..n)
        .flat_map(|x| (1..n).map(move |y| (x, y)))
        .map(|(x, y)| phases.get(x, y))
        .collect();
    let sol = sys.system.solve(&a, n, sigma.tol())?;
    let witness = match sol.solution {
        None => None,
        Some(b) => {
            let mut nu = vec![Complex64::new(1.0, 0.0)];
            nu.extend(b.iter().map(|bx| Complex64::from_polar(1.0, -TAU * bx)));
            let residual = witness_residual(sigma, &nu);
            if residual > 10.0 * sigma.tol() {
                return Err(Error::inconsistent("coboundary witness", residual));
            }
            Some(CoboundaryWitness { nu, residual })
        }
    };
    Ok(CoboundaryAnalysis {
        phases: phases.rows(),
        kernel_rank: sol.kernel_rank,
        obstructions: sol.obstructions,
        witness,
    })
}

/// Largest `|sigma(x,y) - nu(xy) conj(nu(x) nu(y))|`.
pub fn witness_residual(sigma: &ScalarTwoCocycle, nu: &[Complex64]) -> f64 {
    let g = sigma.group();
    let n = g.order();
    let mut worst: f64 = 0.0;
    for x in 0..n {
        for y in 0..n {
            let delta = nu[g.mul(x, y)] * (nu[x] * nu[y]).conj();
            worst = worst.max((sigma.value(x, y) - delta).norm());
        }
    }
    worst
}

pub fn is_coboundary(sigma: &ScalarTwoCocycle) -> Result<Option<CoboundaryWitness>> {
    Ok(analyze_coboundary(sigma)?.witness)
}

/// Smallest `k >= 1` with `sigma^k` a coboundary.
pub fn class_order(sigma: &ScalarTwoCocycle) -> Result<usize> {
    let n = sigma.order();
    for k in 1..=n {
        if is_coboundary(&sigma.pow(k))?.is_some() {
            return Ok(k);
        }
    }
    Err(Error::inconsistent(
        format!("class order exceeds the group order {n}"),
        f64::NAN,
    ))
}

/// The `sigma`-twisted left regular representation: `L_x e_y = sigma(x,y) e_{xy}`.
pub fn twisted_regular_rep(sigma: &ScalarTwoCocycle) -> Result<ProjectiveRep> {
    let g = sigma.group().clone();
    let n = g.order();
    let mats = (0..n)
        .map(|x| {
            let mut l = ComplexMatrix::zeros(n, n);
            for y in 0..n {
                l[(g.mul(x, y), y)] = sigma.value(x, y);
            }
            l
        })
        .collect();
    let rep = ProjectiveRep {
        group: g,
        dim: n,
        mats,
        multiplier: sigma.values().to_vec(),
    };
    let resid = rep.product_residual();
    if resid > 10.0 * sigma.tol() {
        return Err(Error::inconsistent("twisted regular representation", resid));
    }
    Ok(rep)
}

/// An irreducible constituent found by [`decompose_projective`].
#[derive(Debug, Clone)]
pub struct ProjectiveBlock {
    pub dim: usize,
    /// Isometry from the block into the ambient space (columns orthonormal).
    pub basis: ComplexMatrix,
    pub rep: ProjectiveRep,
}

const SPLIT_ATTEMPTS: usize = 6;

/// Splits a projective representation into irreducible blocks by repeatedly
/// diagonalizing a random Hermitian element of its commutant.
pub fn decompose_projective<R: Rng>(
    rep: &ProjectiveRep,
    rng: &mut R,
    tol: f64,
) -> Result<Vec<ProjectiveBlock>> {
    let mut out = Vec::new();
    split(rep, identity(rep.dim), rng, tol, &mut out)?;
    Ok(out)
}

fn split<R: Rng>(
    rep: &ProjectiveRep,
    basis: ComplexMatrix,
    rng: &mut R,
    tol: f64,
    out: &mut Vec<ProjectiveBlock>,
) -> Result<()> {
    let d = rep.dim;
    let comm = joint_commutant(&rep.mats, d, tol);
    if comm.len() <= 1 {
        out.push(ProjectiveBlock {
            dim: d,
            basis,
            rep: rep.clone(),
        });
        return Ok(());
    }
    for _ in 0..SPLIT_ATTEMPTS {
        // random combination of the Hermitian and skew-Hermitian parts of the basis
        let mut h = ComplexMatrix::zeros(d, d);
        for b in &comm {
            let herm = (b + b.adjoint()).scale(0.5);
            let skew = (b - b.adjoint()).map(|z| z * Complex64::new(0.0, -0.5));
            h += herm.scale(rng.gen_range(-1.0..1.0)) + skew.scale(rng.gen_range(-1.0..1.0));
        }
        let (values, vecs) = eig_hermitian(&h, tol)?;
        let spread = (values[d - 1] - values[0]).max(1.0);
        let split_gap = 1e-4 * spread;
        let noise = 1e3 * tol.max(1e-12) * spread;
        if values
            .windows(2)
            .any(|w| (w[1] - w[0]) > noise && (w[1] - w[0]) <= split_gap)
        {
            continue;
        }
        let mut clusters: Vec<(usize, usize)> = Vec::new();
        let mut start = 0;
        for k in 1..=d {
            if k == d || values[k] - values[k - 1] > split_gap {
                clusters.push((start, k));
                start = k;
            }
        }
        if clusters.len() < 2 {
            continue;
        }
        for (lo, hi) in clusters {
            let e = vecs.columns(lo, hi - lo).into_owned();
            let mats: Vec<ComplexMatrix> = rep.mats.iter().map(|m| e.adjoint() * m * &e).collect();
            let sub = ProjectiveRep {
                group: rep.group.clone(),
                dim: hi - lo,
                mats,
                multiplier: rep.multiplier.clone(),
            };
            let resid = sub.product_residual();
            if resid > 10.0 * tol {
                return Err(Error::inconsistent("invariant subspace of a projective representation", resid));
            }
            split(&sub, &basis * &e, rng, tol, out)?;
        }
        return Ok(());
    }
    Err(Error::Precision(format!(
        "could not separate eigenvalue clusters of a {d}-dimensional commutant element"
    )))
}

/// Indices of pairwise inequivalent blocks with their multiplicities, comparing
/// characters (well defined for a fixed multiplier).
pub fn isotypic_classes(blocks: &[ProjectiveBlock], tol: f64) -> Vec<(usize, usize)> {
    let mut classes: Vec<(usize, usize)> = Vec::new();
    for (k, b) in blocks.iter().enumerate() {
        let n = b.rep.group.order();
        let same = classes.iter_mut().find(|(rep, _)| {
            let r = &blocks[*rep];
            r.dim == b.dim
                && (0..n).all(|x| (r.rep.character(x) - b.rep.character(x)).norm() <= 1e3 * tol)
        });
        match same {
            Some(entry) => entry.1 += 1,
            None => classes.push((k, 1)),
        }
    }
    classes
}

/// A coboundary witness read off a one-dimensional block `chi`, which satisfies
/// `chi(x) chi(y) = sigma(x,y) chi(xy)`; the witness is `conj(chi)`.
pub fn witness_from_blocks(blocks: &[ProjectiveBlock]) -> Option<Vec<Complex64>> {
    blocks
        .iter()
        .find(|b| b.dim == 1)
        .map(|b| b.rep.mats.iter().map(|m| m[(0, 0)].conj()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::matrices::{c64, DEFAULT_TOL};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn one() -> Complex64 {
        c64(1.0, 0.0)
    }

    pub(crate) fn klein_cocycle() -> ScalarTwoCocycle {
        // Q8/{±1} with transversal 1, i, j, k: sigma(x,y) = sign of c(x)c(y) relative to c(xy)
        let q8 = catalog::quaternion_table();
        let v4 = Arc::new(catalog::abelian(&[2, 2]));
        // Klein four as Z2 x Z2 indices 0..4 = (0,0),(0,1),(1,0),(1,1); map to 1, i, j, k
        let to_q8 = [0usize, 1, 2, 3];
        let from_pair = |x: usize| to_q8[x];
        ScalarTwoCocycle::from_fn(
            v4,
            move |x, y| {
                let p = q8.mul(from_pair(x), from_pair(y));
                if p >= 4 {
                    c64(-1.0, 0.0)
                } else {
                    one()
                }
            },
            DEFAULT_TOL,
        )
        .unwrap()
    }

    fn z2_minus_one() -> ScalarTwoCocycle {
        let z2 = Arc::new(catalog::cyclic(2));
        ScalarTwoCocycle::from_fn(z2, |x, y| if x == 1 && y == 1 { c64(-1.0, 0.0) } else { one() }, DEFAULT_TOL).unwrap()
    }

    #[test]
    fn klein_cocycle_table() {
        let s = klein_cocycle();
        // abelian Z2xZ2 product: i*j = k in Q8, so index 1 * index 2 = index 3
        assert_eq!(s.group().mul(1, 2), 3);
        assert_eq!(s.value(1, 2), one());
        assert_eq!(s.value(2, 1), c64(-1.0, 0.0));
        for x in 1..4 {
            assert_eq!(s.value(x, x), c64(-1.0, 0.0));
        }
    }

    #[test]
    fn z2_cocycle_is_trivial_with_quarter_turn_witness() {
        let s = z2_minus_one();
        let w = is_coboundary(&s).unwrap().expect("H^2(Z/2, T) = 0");
        assert!(w.residual < 1e-12);
        // oracle: exhaustive search over 8th roots of unity for nu(1)
        let roots: Vec<Complex64> = (0..8).map(|k| Complex64::from_polar(1.0, TAU * k as f64 / 8.0)).collect();
        let valid: Vec<Complex64> = roots
            .iter()
            .copied()
            .filter(|&r| witness_residual(&s, &[one(), r]) < 1e-12)
            .collect();
        assert_eq!(valid.len(), 2);
        assert!(valid.iter().any(|r| (r - w.nu[1]).norm() < 1e-12));
        assert!((w.nu[1] - c64(0.0, 1.0)).norm() < 1e-12 || (w.nu[1] - c64(0.0, -1.0)).norm() < 1e-12);
    }

    #[test]
    fn all_ones_cocycle_has_trivial_witness() {
        for g in [catalog::cyclic(5), catalog::dihedral(3), catalog::abelian(&[2, 2])] {
            let s = ScalarTwoCocycle::trivial(Arc::new(g), DEFAULT_TOL);
            let w = is_coboundary(&s).unwrap().unwrap();
            assert!(w.nu.iter().all(|z| (z - one()).norm() < 1e-12));
        }
    }

    #[test]
    fn klein_cocycle_is_nontrivial() {
        let s = klein_cocycle();
        let analysis = analyze_coboundary(&s).unwrap();
        assert!(analysis.witness.is_none());
        assert!(analysis.obstructions.iter().all(|p| (p.value - 0.5).abs() < 1e-12));
        // the antisymmetrizer y = e_(i,j) - e_(j,i) annihilates B and pairs to -1/2
        let sys = CoboundarySystem::for_group(s.group());
        let b = sys.boundary_matrix();
        let mut y = vec![BigInt::from(0); 9];
        y[0 * 3 + 1] = BigInt::from(1);
        y[1 * 3 + 0] = BigInt::from(-1);
        assert!(b.left_apply(&y).iter().all(|v| *v == BigInt::from(0)));
        let ph = s.phases();
        assert_eq!(ph.get(1, 2) - ph.get(2, 1), -0.5);
    }

    #[test]
    fn class_orders() {
        let z3 = Arc::new(catalog::cyclic(3));
        assert_eq!(class_order(&ScalarTwoCocycle::trivial(z3, DEFAULT_TOL)).unwrap(), 1);
        assert_eq!(class_order(&klein_cocycle()).unwrap(), 2);
        assert_eq!(class_order(&z2_minus_one()).unwrap(), 1);
    }

    #[test]
    fn twisted_regular_rep_of_z2() {
        let l = twisted_regular_rep(&z2_minus_one()).unwrap();
        let expected = crate::matrices::from_real_rows(&[&[0.0, -1.0], &[1.0, 0.0]]);
        assert_eq!(l.mats[1], expected);
        let triv = twisted_regular_rep(&ScalarTwoCocycle::trivial(Arc::new(catalog::cyclic(2)), DEFAULT_TOL)).unwrap();
        assert_eq!(triv.mats[1], crate::matrices::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]));
    }

    #[test]
    fn twisted_regular_rep_of_klein_cocycle() {
        let s = klein_cocycle();
        let l = twisted_regular_rep(&s).unwrap();
        assert_eq!(l.dim, 4);
        let lhs = &l.mats[1] * &l.mats[2];
        let rhs = l.mats[3].map(|z| z * s.value(1, 2));
        assert!(dist(&lhs, &rhs) < 1e-15);
        assert!(l.product_residual() < 1e-15);
    }

    #[test]
    fn decompositions() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let triv = ScalarTwoCocycle::trivial(Arc::new(catalog::cyclic(2)), DEFAULT_TOL);
        let blocks = decompose_projective(&twisted_regular_rep(&triv).unwrap(), &mut rng, DEFAULT_TOL).unwrap();
        assert_eq!(blocks.iter().map(|b| b.dim).collect::<Vec<_>>(), vec![1, 1]);

        let blocks = decompose_projective(&twisted_regular_rep(&z2_minus_one()).unwrap(), &mut rng, DEFAULT_TOL).unwrap();
        assert_eq!(blocks.iter().map(|b| b.dim).collect::<Vec<_>>(), vec![1, 1]);
        let mut chis: Vec<Complex64> = blocks.iter().map(|b| b.rep.mats[1][(0, 0)]).collect();
        chis.sort_by(|a, b| a.im.total_cmp(&b.im));
        assert!((chis[0] - c64(0.0, -1.0)).norm() < 1e-9 && (chis[1] - c64(0.0, 1.0)).norm() < 1e-9);

        let blocks = decompose_projective(&twisted_regular_rep(&klein_cocycle()).unwrap(), &mut rng, DEFAULT_TOL).unwrap();
        assert_eq!(blocks.iter().map(|b| b.dim).collect::<Vec<_>>(), vec![2, 2]);
        assert!(witness_from_blocks(&blocks).is_none());
        let classes = isotypic_classes(&blocks, DEFAULT_TOL);
        assert_eq!(classes, vec![(0, 2)]);
    }

    #[test]
    fn random_coboundaries_are_recognized_by_both_routes() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for g in [catalog::cyclic(6), catalog::dihedral(4), catalog::abelian(&[3, 3]), catalog::alternating4()] {
            let g = Arc::new(g);
            for _ in 0..5 {
                let mut nu: Vec<Complex64> = (0..g.order()).map(|_| Complex64::from_polar(1.0, rng.gen_range(0.0..TAU))).collect();
                nu[0] = one();
                let s = ScalarTwoCocycle::coboundary(g.clone(), &nu, DEFAULT_TOL).unwrap();
                let w = is_coboundary(&s).unwrap().expect("coboundaries are trivial");
                assert!(witness_residual(&s, &w.nu) < 1e-9);
                let blocks = decompose_projective(&twisted_regular_rep(&s).unwrap(), &mut rng, DEFAULT_TOL).unwrap();
                let chi = witness_from_blocks(&blocks).expect("a one-dimensional block exists");
                assert!(witness_residual(&s, &chi) < 1e-9);
            }
        }
    }

    #[test]
    fn class_orders_divide_group_order() {
        for (_, g) in catalog::groups_up_to_16().into_iter().filter(|(_, g)| g.order() <= 9) {
            let g = Arc::new(g);
            let s = ScalarTwoCocycle::trivial(g.clone(), DEFAULT_TOL);
            let k = class_order(&s).unwrap();
            assert_eq!(g.order() % k, 0);
        }
        let k = class_order(&klein_cocycle()).unwrap();
        assert_eq!(4 % k, 0);
    }

    #[test]
    fn non_cocycles_are_rejected() {
        let z3 = Arc::new(catalog::cyclic(3));
        let bad = ScalarTwoCocycle::from_fn(z3, |x, y| if (x, y) == (1, 1) { c64(-1.0, 0.0) } else { one() }, DEFAULT_TOL);
        assert!(matches!(bad, Err(Error::Inconsistent { .. })));
    }
}
