//! Random-restart Levenberg-Marquardt search for unitaries `nu_x` in the commutant with
//! `nu_x alpha_x(nu_y) sigma(x,y) nu_xy* = 1`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::error::Result;
use crate::matrices::{exp_i_hermitian, frob_inner, identity, ComplexMatrix};
use crate::obstruction::TwistedActionData;

#[derive(Debug, Clone, Serialize)]
pub struct SearchBudget {
    pub max_quotient_order: usize,
    pub max_dim: usize,
    pub restarts: usize,
    pub iterations: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_quotient_order: 6,
            max_dim: 4,
            restarts: 12,
            iterations: 150,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchResult {
    #[serde(skip)]
    pub nu: Option<Vec<ComplexMatrix>>,
    pub restarts: usize,
    pub best_residual: f64,
}

/// Orthonormal basis (for `Re tr(a* b)`) of the Hermitian elements of a *-closed span.
fn hermitian_basis(basis: &[ComplexMatrix]) -> Vec<ComplexMatrix> {
    let mut out: Vec<ComplexMatrix> = Vec::new();
    for b in basis {
        let herm = (b + b.adjoint()).scale(0.5);
        let skew = (b - b.adjoint()).map(|z| z * Complex64::new(0.0, -0.5));
        for mut h in [herm, skew] {
            for e in &out {
                let c = frob_inner(e, &h).re;
                h -= e.scale(c);
            }
            let n = h.norm();
            if n > 1e-8 {
                out.push(h.unscale(n));
            }
        }
    }
    out
}

struct Problem<'a> {
    action: &'a TwistedActionData,
    gens: Vec<ComplexMatrix>,
    nq: usize,
    d: usize,
}

impl Problem<'_> {
    fn nus(&self, theta: &[f64]) -> Vec<ComplexMatrix> {
        let k = self.gens.len();
        let mut out = vec![identity(self.d)];
        for x in 1..self.nq {
            let mut h = ComplexMatrix::zeros(self.d, self.d);
            for (j, g) in self.gens.iter().enumerate() {
                h += g.scale(theta[(x - 1) * k + j]);
            }
            out.push(exp_i_hermitian(&h));
        }
        out
    }

    fn residual(&self, theta: &[f64]) -> DVector<f64> {
        let nu = self.nus(theta);
        let q = self.action.q_group();
        let id = identity(self.d);
        let mut r = Vec::with_capacity(2 * (self.nq - 1).pow(2) * self.d * self.d);
        for x in 1..self.nq {
            for y in 1..self.nq {
                let f = &nu[x] * self.action.apply_alpha(x, &nu[y]) * self.action.sigma(x, y)
                    * nu[q.mul(x, y)].adjoint()
                    - &id;
                for z in f.iter() {
                    r.push(z.re);
                    r.push(z.im);
                }
            }
        }
        DVector::from_vec(r)
    }

    fn jacobian(&self, theta: &[f64], r0: &DVector<f64>) -> DMatrix<f64> {
        let h = 1e-7;
        let mut j = DMatrix::zeros(r0.len(), theta.len());
        let mut t = theta.to_vec();
        for p in 0..theta.len() {
            t[p] += h;
            let col = (self.residual(&t) - r0) / h;
            j.set_column(p, &col);
            t[p] = theta[p];
        }
        j
    }
}

fn max_block_residual(r: &DVector<f64>) -> f64 {
    r.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

pub fn search_exterior_equivalence<R: Rng>(
    action: &TwistedActionData,
    budget: &SearchBudget,
    rng: &mut R,
) -> Result<SearchResult> {
    let tol = action.tol();
    let gens = hermitian_basis(&action.commutant().basis);
    let problem = Problem {
        action,
        nq: action.q_group().order(),
        d: action.pi().dim(),
        gens,
    };
    let params = (problem.nq - 1) * problem.gens.len();
    let mut best = f64::INFINITY;
    for restart in 0..budget.restarts {
        let mut theta: Vec<f64> = (0..params).map(|_| rng.gen_range(-PI..PI)).collect();
        let mut r = problem.residual(&theta);
        let mut cost = r.norm_squared();
        let mut lambda = 1e-3;
        for _ in 0..budget.iterations {
            if max_block_residual(&r) < 0.1 * tol {
                break;
            }
            let j = problem.jacobian(&theta, &r);
            let jt = j.transpose();
            let jtj = &jt * &j;
            let g = &jt * &r;
            let mut improved = false;
            for _ in 0..12 {
                let mut a = jtj.clone();
                for p in 0..params {
                    a[(p, p)] += lambda * (1.0 + jtj[(p, p)]);
                }
                let Some(step) = a.lu().solve(&(-&g)) else {
                    lambda *= 10.0;
                    continue;
                };
                let trial: Vec<f64> = theta.iter().zip(step.iter()).map(|(t, s)| t + s).collect();
                let rt = problem.residual(&trial);
                let ct = rt.norm_squared();
                if ct < cost {
                    theta = trial;
                    r = rt;
                    cost = ct;
                    lambda = (lambda * 0.3).max(1e-12);
                    improved = true;
                    break;
                }
                lambda *= 10.0;
            }
            if !improved {
                break;
            }
        }
        let nu = problem.nus(&theta);
        let resid = super::exterior_residual(action, &nu);
        best = best.min(resid);
        if resid < tol {
            return Ok(SearchResult {
                nu: Some(nu),
                restarts: restart + 1,
                best_residual: resid,
            });
        }
    }
    Ok(SearchResult {
        nu: None,
        restarts: budget.restarts,
        best_residual: best,
    })
}
