#![allow(dead_code)]

use std::collections::VecDeque;
use std::f64::consts::TAU;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use extendlab::extend::{find_extension, ExtensionSearch, SearchBudget};
use extendlab::groups::{quotient_with_transversal, FiniteGroup, NormalSubgroup, QuotientData};
use extendlab::matrices::{c64, scalar, DEFAULT_TOL};
use extendlab::obstruction::{intertwiners, section_unitaries, twisted_action, TwistedActionData};
use extendlab::reps::UnitaryRep;

/// Exponents `k` with `chi(g) = exp(2 pi i k(g) / e)`, for every homomorphism from the
/// subgroup `members` of `g` into the `e`-th roots of unity.
///
/// Brute force: every assignment of exponents to a generating set is propagated along
/// the Cayley graph and kept when no edge disagrees.
pub fn linear_characters(g: &FiniteGroup, members: &[usize], e: usize) -> Vec<Vec<usize>> {
    let gens = greedy_generators(g, members);
    let n = g.order();
    let total = e.pow(gens.len() as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let vals: Vec<usize> = (0..gens.len()).map(|k| code / e.pow(k as u32) % e).collect();
        let mut k = vec![usize::MAX; n];
        k[0] = 0;
        let mut queue = VecDeque::from([0]);
        let mut ok = true;
        while let Some(h) = queue.pop_front() {
            for (j, &s) in gens.iter().enumerate() {
                let t = g.mul(h, s);
                let want = (k[h] + vals[j]) % e;
                if k[t] == usize::MAX {
                    k[t] = want;
                    queue.push_back(t);
                } else if k[t] != want {
                    ok = false;
                    break;
                }
            }
            if !ok {
                break;
            }
        }
        if ok {
            out.push(members.iter().map(|&m| k[m]).collect());
        }
    }
    out
}

fn greedy_generators(g: &FiniteGroup, members: &[usize]) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut span = vec![0];
    for &m in members {
        if !span.contains(&m) {
            gens.push(m);
            span = g.subgroup_generated(&gens);
        }
    }
    gens
}

pub fn character_rep(g: &Arc<FiniteGroup>, members: &[usize], ks: &[usize], e: usize) -> UnitaryRep {
    let mats = ks
        .iter()
        .map(|&k| {
            let th = TAU * k as f64 / e as f64;
            scalar(c64(th.cos(), th.sin()))
        })
        .collect();
    UnitaryRep::new(g.clone(), members.to_vec(), mats, DEFAULT_TOL).unwrap()
}

pub fn is_invariant(g: &FiniteGroup, members: &[usize], ks: &[usize]) -> bool {
    let k_of = |m: usize| ks[members.iter().position(|&x| x == m).unwrap()];
    (0..g.order()).all(|s| members.iter().all(|&n| k_of(g.conjugate(s, n)) == k_of(n)))
}

/// Whether some character of `g` (given as exponents over all elements) restricts to `ks`.
pub fn extends(g_chars: &[Vec<usize>], members: &[usize], ks: &[usize]) -> bool {
    g_chars
        .iter()
        .any(|chi| members.iter().zip(ks).all(|(&m, &k)| chi[m] == k))
}

pub fn quotient(g: &Arc<FiniteGroup>, members: &[usize]) -> QuotientData {
    let n = NormalSubgroup::new(g.clone(), members).unwrap();
    quotient_with_transversal(g, &n).unwrap()
}

pub fn action(pi: &UnitaryRep, qd: &QuotientData, seed: u64) -> TwistedActionData {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (w, _) = intertwiners(pi, qd, &mut rng).unwrap();
    let section = section_unitaries(pi, qd, &w).unwrap();
    twisted_action(pi, qd, &section, &mut rng).unwrap()
}

pub fn extension(pi: &UnitaryRep, qd: &QuotientData, seed: u64) -> ExtensionSearch {
    let act = action(pi, qd, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    find_extension(&act, &SearchBudget::default(), &mut rng).unwrap()
}
