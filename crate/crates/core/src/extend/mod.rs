//! Extensions of a `G`-invariant representation of `N` to `G`: the converse construction
//! `rho(s) = nu_{sN} V_s`, stabilization, the tensor construction with projective
//! representations of `G/N`, and the induced-representation cross-check.

mod induced;
mod mackey;
mod search;
mod stabilize;

pub use induced::{
    covariance_residual, induce, multiplication_rep, induced_crosscheck, right_translation_unitaries,
    CrosscheckResiduals,
};
pub use mackey::{mackey_tensor, projective_irreps, MackeyTensor};
pub use search::{search_exterior_equivalence, SearchBudget, SearchResult};
pub use stabilize::{stabilize, Stabilized, StabilizeResiduals};

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::cohomology::{analyze_coboundary, normalize, CoboundaryAnalysis, PhaseSystem};
use crate::error::{Error, Result};
use crate::matrices::{dist, eig_hermitian, identity, phase_of, ComplexMatrix, IntegerMatrix};
use crate::obstruction::TwistedActionData;
use crate::reps::{rep_validate, UnitaryRep};

/// Largest `|nu_x alpha_x(nu_y) sigma(x,y) nu_xy* - 1|` over `Q x Q`.
pub fn exterior_residual(action: &TwistedActionData, nu: &[ComplexMatrix]) -> f64 {
    let q = action.q_group();
    let n = q.order();
    let d = action.pi().dim();
    let id = identity(d);
    let mut worst: f64 = 0.0;
    for x in 0..n {
        for y in 0..n {
            let lhs = &nu[x] * action.apply_alpha(x, &nu[y]) * action.sigma(x, y) * nu[q.mul(x, y)].adjoint();
            worst = worst.max(dist(&lhs, &id));
        }
    }
    worst
}

/// `rho(s) = nu_{sN} V_s`, checked to be a representation restricting to `pi`.
pub fn extension_from_nu(action: &TwistedActionData, nu: &[ComplexMatrix]) -> Result<UnitaryRep> {
    let tol = action.tol();
    let resid = exterior_residual(action, nu);
    if resid > 10.0 * tol {
        return Err(Error::inconsistent("exterior equivalence of the twisted action", resid));
    }
    let pi = action.pi();
    let g = pi.group().clone();
    let qd = action.quotient();
    let mats = (0..g.order())
        .map(|s| &nu[qd.proj(s)] * action.section().v(s))
        .collect();
    let rho = UnitaryRep::of_group(g, mats, 10.0 * tol)?;
    let check = rep_validate(&rho);
    if !check.pass {
        return Err(Error::inconsistent(
            "extension homomorphism",
            check.homomorphism.max(check.unitarity).max(check.identity),
        ));
    }
    let restriction = restriction_residual(&rho, pi);
    if restriction > tol {
        return Err(Error::inconsistent("extension restricts to pi", restriction));
    }
    Ok(rho.with_tol(tol))
}

/// `max_n |rho(n) - pi(n)|`.
pub fn restriction_residual(rho: &UnitaryRep, pi: &UnitaryRep) -> f64 {
    pi.domain()
        .iter()
        .map(|&n| dist(rho.mat(n), pi.mat(n)))
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone)]
pub enum ExtensionOutcome {
    Found(UnitaryRep),
    NotExtendable { reason: String },
    /// The search budget ran out without a certificate either way.
    Undecided { reason: String },
}

impl ExtensionOutcome {
    pub fn tag(&self) -> &'static str {
        match self {
            ExtensionOutcome::Found(_) => "found",
            ExtensionOutcome::NotExtendable { .. } => "not_extendable",
            ExtensionOutcome::Undecided { .. } => "undecided",
        }
    }

    pub fn extension(&self) -> Option<&UnitaryRep> {
        match self {
            ExtensionOutcome::Found(rho) => Some(rho),
            _ => None,
        }
    }

    /// `Some(true)` if found, `Some(false)` if refuted, `None` if undecided.
    pub fn decided(&self) -> Option<bool> {
        match self {
            ExtensionOutcome::Found(_) => Some(true),
            ExtensionOutcome::NotExtendable { .. } => Some(false),
            ExtensionOutcome::Undecided { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum ExtensionMethod {
    ScalarCocycle,
    AbelianCommutant,
    Search,
    OutOfBudget,
}

#[derive(Debug, Clone)]
pub struct ExtensionSearch {
    pub outcome: ExtensionOutcome,
    pub method: ExtensionMethod,
    /// Coboundary audit when the commutant is scalar.
    pub analysis: Option<CoboundaryAnalysis>,
    pub nu: Option<Vec<ComplexMatrix>>,
    pub exterior_residual: Option<f64>,
    /// Number of minimal central blocks of the commutant and their orbits under `alpha`.
    pub orbits: Option<Vec<Vec<usize>>>,
    pub search: Option<SearchResult>,
}

impl ExtensionSearch {
    fn new(outcome: ExtensionOutcome, method: ExtensionMethod) -> Self {
        ExtensionSearch {
            outcome,
            method,
            analysis: None,
            nu: None,
            exterior_residual: None,
            orbits: None,
            search: None,
        }
    }

    fn found(action: &TwistedActionData, method: ExtensionMethod, nu: Vec<ComplexMatrix>) -> Result<Self> {
        let rho = extension_from_nu(action, &nu)?;
        let mut out = Self::new(ExtensionOutcome::Found(rho), method);
        out.exterior_residual = Some(exterior_residual(action, &nu));
        out.nu = Some(nu);
        Ok(out)
    }
}

/// Tries to extend `pi` to `G`.
///
/// A scalar commutant is decided exactly by the coboundary test; an abelian commutant by
/// one integer phase system per `alpha`-orbit of minimal projections. Otherwise a bounded
/// numerical search is attempted, whose failure is reported as undecided.
pub fn find_extension<R: Rng>(
    action: &TwistedActionData,
    budget: &SearchBudget,
    rng: &mut R,
) -> Result<ExtensionSearch> {
    let tol = action.tol();
    let d = action.pi().dim();
    if action.is_scalar() {
        let sigma = normalize(action, tol)?;
        let analysis = analyze_coboundary(&sigma)?;
        let mut out = match &analysis.witness {
            Some(w) => {
                let nu = w.nu.iter().map(|z| identity(d).map(|e| e * z)).collect();
                ExtensionSearch::found(action, ExtensionMethod::ScalarCocycle, nu)?
            }
            None => ExtensionSearch::new(
                ExtensionOutcome::NotExtendable {
                    reason: "the scalar cocycle is not a coboundary".into(),
                },
                ExtensionMethod::ScalarCocycle,
            ),
        };
        out.analysis = Some(analysis);
        return Ok(out);
    }
    if action.commutant().is_abelian(tol) {
        return abelian_extension(action, rng);
    }
    let nq = action.q_group().order();
    if nq > budget.max_quotient_order || d > budget.max_dim {
        return Ok(ExtensionSearch::new(
            ExtensionOutcome::Undecided {
                reason: format!(
                    "non-abelian commutant with |G/N| = {nq} and dimension {d} is outside the search budget"
                ),
            },
            ExtensionMethod::OutOfBudget,
        ));
    }
    let result = search_exterior_equivalence(action, budget, rng)?;
    let mut out = match &result.nu {
        Some(nu) => ExtensionSearch::found(action, ExtensionMethod::Search, nu.clone())?,
        None => ExtensionSearch::new(
            ExtensionOutcome::Undecided {
                reason: format!(
                    "no exterior equivalence found in {} restarts (best residual {:.3e})",
                    result.restarts, result.best_residual
                ),
            },
            ExtensionMethod::Search,
        ),
    };
    out.search = Some(result);
    Ok(out)
}

const PROJECTION_ATTEMPTS: usize = 6;

/// Minimal projections of an abelian commutant, as isometries onto their ranges.
pub fn minimal_projections<R: Rng>(
    basis: &[ComplexMatrix],
    d: usize,
    rng: &mut R,
    tol: f64,
) -> Result<Vec<ComplexMatrix>> {
    let m = basis.len();
    for _ in 0..PROJECTION_ATTEMPTS {
        let mut h = ComplexMatrix::zeros(d, d);
        for b in basis {
            let herm = (b + b.adjoint()).scale(0.5);
            let skew = (b - b.adjoint()).map(|z| z * Complex64::new(0.0, -0.5));
            h += herm.scale(rng.gen_range(-1.0..1.0)) + skew.scale(rng.gen_range(-1.0..1.0));
        }
        let (values, vecs) = eig_hermitian(&h, tol)?;
        let gap = 1e-4 * (values[d - 1] - values[0]).max(1.0);
        let mut ranges = Vec::new();
        let mut start = 0;
        for k in 1..=d {
            if k == d || values[k] - values[k - 1] > gap {
                ranges.push(vecs.columns(start, k - start).into_owned());
                start = k;
            }
        }
        if ranges.len() == m {
            return Ok(ranges);
        }
    }
    Err(Error::Precision(format!(
        "could not resolve {m} minimal projections of the commutant"
    )))
}

fn abelian_extension<R: Rng>(action: &TwistedActionData, rng: &mut R) -> Result<ExtensionSearch> {
    let tol = action.tol();
    let d = action.pi().dim();
    let q = action.q_group().clone();
    let nq = q.order();
    let isometries = minimal_projections(&action.commutant().basis, d, rng, tol)?;
    let projections: Vec<ComplexMatrix> = isometries.iter().map(|e| e * e.adjoint()).collect();
    let m = projections.len();

    // alpha_x(P_j) = P_{perm[x][j]}
    let mut perm = vec![vec![0usize; m]; nq];
    for (x, row) in perm.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            let img = action.apply_alpha(x, &projections[j]);
            let (k, r) = projections
                .iter()
                .enumerate()
                .map(|(k, p)| (k, dist(&img, p)))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .expect("at least one projection");
            if r > 10.0 * tol {
                return Err(Error::inconsistent("alpha permutes minimal projections", r));
            }
            *slot = k;
        }
    }
    let mut inv = vec![vec![0usize; m]; nq];
    for x in 0..nq {
        for j in 0..m {
            inv[x][perm[x][j]] = j;
        }
    }

    // sigma(x,y) = sum_k sigma_k(x,y) P_k
    let mut sig = vec![vec![Complex64::new(0.0, 0.0); m]; nq * nq];
    for x in 0..nq {
        for y in 0..nq {
            let s = action.sigma(x, y);
            let mut rebuilt = ComplexMatrix::zeros(d, d);
            for k in 0..m {
                let e = &isometries[k];
                let z = (e.adjoint() * s * e).trace() / e.ncols() as f64;
                rebuilt += &projections[k] * z;
                sig[x * nq + y][k] = z;
            }
            let r = dist(&rebuilt, s);
            if r > 10.0 * tol {
                return Err(Error::inconsistent("sigma in the span of minimal projections", r));
            }
        }
    }

    let mut seen = vec![false; m];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for j in 0..m {
        if seen[j] {
            continue;
        }
        let mut orbit: Vec<usize> = (0..nq).map(|x| perm[x][j]).collect();
        orbit.sort_unstable();
        orbit.dedup();
        for &k in &orbit {
            seen[k] = true;
        }
        orbits.push(orbit);
    }

    // b_x(k) + b_y(x^-1 k) - b_xy(k) = a_k(x,y) (mod 1), nu_x(k) = exp(-2 pi i b_x(k))
    let mut phases = vec![vec![0.0f64; m]; nq];
    for orbit in &orbits {
        let w = orbit.len();
        let pos = |k: usize| orbit.binary_search(&k).expect("orbit is closed");
        let col = |x: usize, k: usize| (x - 1) * w + pos(k);
        let unknowns = (nq - 1) * w;
        let mut b = IntegerMatrix::zeros((nq - 1) * (nq - 1) * w, unknowns);
        let mut a = Vec::with_capacity(b.rows());
        let mut row = 0;
        for x in 1..nq {
            for y in 1..nq {
                for &k in orbit {
                    let mut bump = |c: usize, by: i64| {
                        let cur = b.get(row, c).clone();
                        b.set(row, c, cur + by);
                    };
                    bump(col(x, k), 1);
                    bump(col(y, inv[x][k]), 1);
                    let xy = q.mul(x, y);
                    if xy != 0 {
                        bump(col(xy, k), -1);
                    }
                    a.push(phase_of(sig[x * nq + y][k], tol));
                    row += 1;
                }
            }
        }
        let system = PhaseSystem::new(b);
        let sol = system.solve(&a, nq, tol)?;
        match sol.solution {
            None => {
                let mut out = ExtensionSearch::new(
                    ExtensionOutcome::NotExtendable {
                        reason: format!(
                            "the cocycle on the orbit of minimal projections {orbit:?} is nontrivial"
                        ),
                    },
                    ExtensionMethod::AbelianCommutant,
                );
                out.orbits = Some(orbits.clone());
                return Ok(out);
            }
            Some(bvals) => {
                for x in 1..nq {
                    for &k in orbit {
                        phases[x][k] = bvals[col(x, k)];
                    }
                }
            }
        }
    }
    let nu: Vec<ComplexMatrix> = (0..nq)
        .map(|x| {
            let mut v = ComplexMatrix::zeros(d, d);
            for k in 0..m {
                v += &projections[k] * Complex64::from_polar(1.0, -TAU * phases[x][k]);
            }
            v
        })
        .collect();
    let mut out = ExtensionSearch::found(action, ExtensionMethod::AbelianCommutant, nu)?;
    out.orbits = Some(orbits);
    Ok(out)
}
