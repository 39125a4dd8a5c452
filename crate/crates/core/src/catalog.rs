//! Constructors for the small groups used by the bundled problems and tests.

use crate::groups::{FiniteGroup, DEFAULT_SIZE_CAP};

fn build(order: usize, mul: impl Fn(usize, usize) -> usize, labels: Option<Vec<String>>) -> FiniteGroup {
    let table = (0..order).map(|a| (0..order).map(|b| mul(a, b)).collect()).collect();
    FiniteGroup::from_table(table, labels).expect("catalog group tables are valid")
}

pub fn cyclic(n: usize) -> FiniteGroup {
    build(n, |a, b| (a + b) % n, None)
}

/// `<a, b | a^m = 1, b^n = a^t, b a b^-1 = a^k>`, element `a^i b^j` at index `i + m*j`.
/// Requires `k^n = 1 (mod m)` and `k*t = t (mod m)`.
pub fn metacyclic(m: usize, n: usize, k: usize, t: usize) -> FiniteGroup {
    let powk: Vec<usize> = (0..n)
        .scan(1usize, |acc, _| {
            let cur = *acc;
            *acc = *acc * k % m;
            Some(cur)
        })
        .collect();
    let labels = (0..m * n)
        .map(|x| format!("a^{} b^{}", x % m, x / m))
        .collect();
    build(
        m * n,
        |x, y| {
            let (i1, j1) = (x % m, x / m);
            let (i2, j2) = (y % m, y / m);
            let mut i = i1 + powk[j1] * i2;
            let mut j = j1 + j2;
            if j >= n {
                j -= n;
                i += t;
            }
            i % m + m * j
        },
        Some(labels),
    )
}

/// Dihedral group of order `2n`: rotation `a`, reflection `b`.
pub fn dihedral(n: usize) -> FiniteGroup {
    metacyclic(n, 2, n - 1, 0)
}

/// Dicyclic group of order `4n` (generalized quaternion when `n` is a power of 2).
pub fn dicyclic(n: usize) -> FiniteGroup {
    metacyclic(2 * n, 2, 2 * n - 1, n)
}

/// The quaternion group with labelled elements `1, i, j, k, -1, -i, -j, -k`.
pub fn quaternion_table() -> FiniteGroup {
    // unit products: (sign, unit) for units 1, i, j, k
    const UNIT: [[(bool, usize); 4]; 4] = [
        [(false, 0), (false, 1), (false, 2), (false, 3)],
        [(false, 1), (true, 0), (false, 3), (true, 2)],
        [(false, 2), (true, 3), (true, 0), (false, 1)],
        [(false, 3), (false, 2), (true, 1), (true, 0)],
    ];
    let labels = ["1", "i", "j", "k", "-1", "-i", "-j", "-k"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    build(
        8,
        |a, b| {
            let (neg, u) = UNIT[a % 4][b % 4];
            let sign = (a / 4 + b / 4 + neg as usize) % 2;
            u + 4 * sign
        },
        Some(labels),
    )
}

/// Heisenberg group of upper unitriangular 3x3 matrices over `Z/p`; `(a, b, c)` at
/// index `a + p*b + p^2*c`. The center is `{(0, 0, c)}`.
pub fn heisenberg(p: usize) -> FiniteGroup {
    let split = |x: usize| (x % p, x / p % p, x / (p * p));
    build(
        p * p * p,
        |x, y| {
            let (a1, b1, c1) = split(x);
            let (a2, b2, c2) = split(y);
            (a1 + a2) % p + p * ((b1 + b2) % p) + p * p * ((c1 + c2 + a1 * b2) % p)
        },
        None,
    )
}

pub fn alternating4() -> FiniteGroup {
    FiniteGroup::from_generators(4, &[vec![1, 2, 0, 3], vec![1, 0, 3, 2]], DEFAULT_SIZE_CAP)
        .expect("A4 is small")
}

pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> FiniteGroup {
    let m = h.order();
    build(
        g.order() * m,
        |x, y| g.mul(x / m, y / m) * m + h.mul(x % m, y % m),
        None,
    )
}

/// Abelian group `Z/n1 x Z/n2 x ...`.
pub fn abelian(factors: &[usize]) -> FiniteGroup {
    factors
        .iter()
        .fold(FiniteGroup::trivial(), |acc, &n| direct_product(&acc, &cyclic(n)))
}

/// Pauli group `{i^k X^a Z^b}` of order 16.
pub fn pauli() -> FiniteGroup {
    let split = |x: usize| (x % 4, x / 4 % 2, x / 8);
    build(
        16,
        |x, y| {
            let (k1, a1, b1) = split(x);
            let (k2, a2, b2) = split(y);
            (k1 + k2 + 2 * b1 * a2) % 4 + 4 * (a1 ^ a2) + 8 * (b1 ^ b2)
        },
        None,
    )
}

/// `(Z/4 x Z/2) x| Z/2` with `c a c^-1 = a b`; `a^i b^j c^l` at index `i + 4j + 8l`.
pub fn z4z2_semidirect_z2() -> FiniteGroup {
    let split = |x: usize| (x % 4, x / 4 % 2, x / 8);
    build(
        16,
        |x, y| {
            let (i1, j1, l1) = split(x);
            let (i2, j2, l2) = split(y);
            (i1 + i2) % 4 + 4 * ((j1 + j2 + l1 * i2) % 2) + 8 * ((l1 + l2) % 2)
        },
        None,
    )
}

/// Every group of order at most 16, one per isomorphism class.
pub fn groups_up_to_16() -> Vec<(String, FiniteGroup)> {
    let mut out: Vec<(String, FiniteGroup)> = Vec::new();
    let mut push = |name: &str, g: FiniteGroup| out.push((name.to_string(), g));
    for n in 1..=16 {
        push(&format!("Z{n}"), cyclic(n));
    }
    push("Z2xZ2", abelian(&[2, 2]));
    push("S3", dihedral(3));
    push("Z2xZ4", abelian(&[2, 4]));
    push("Z2^3", abelian(&[2, 2, 2]));
    push("D4", dihedral(4));
    push("Q8", quaternion_table());
    push("Z3xZ3", abelian(&[3, 3]));
    push("D5", dihedral(5));
    push("Z2xZ6", abelian(&[2, 6]));
    push("D6", dihedral(6));
    push("A4", alternating4());
    push("Dic3", dicyclic(3));
    push("D7", dihedral(7));
    push("Z4xZ4", abelian(&[4, 4]));
    push("Z2xZ8", abelian(&[2, 8]));
    push("Z2^2xZ4", abelian(&[2, 2, 4]));
    push("Z2^4", abelian(&[2, 2, 2, 2]));
    push("D8", dihedral(8));
    push("Q16", dicyclic(4));
    push("SD16", metacyclic(8, 2, 3, 0));
    push("M16", metacyclic(8, 2, 5, 0));
    push("Z4:Z4", metacyclic(4, 4, 3, 0));
    push("D4xZ2", direct_product(&dihedral(4), &cyclic(2)));
    push("Q8xZ2", direct_product(&quaternion_table(), &cyclic(2)));
    push("Pauli", pauli());
    push("(Z4xZ2):Z2", z4z2_semidirect_z2());
    out
}
