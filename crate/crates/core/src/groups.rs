//! Finite groups given by Cayley tables, normal subgroups, quotients and
//! coset transversals.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};

/// Default cap on the number of elements produced by [`FiniteGroup::from_generators`].
pub const DEFAULT_SIZE_CAP: usize = 10_000;

/// A finite group stored as a full Cayley table. The identity is always element 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<usize>,
    inv: Vec<usize>,
    labels: Option<Vec<String>>,
}

impl FiniteGroup {
    /// Builds a group from a Cayley table, checking closure, identity at index 0,
    /// inverses and associativity.
    pub fn from_table(table: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<Self> {
        let order = table.len();
        if order == 0 {
            return Err(Error::InvalidGroup("empty Cayley table".into()));
        }
        let mut mul = Vec::with_capacity(order * order);
        for (i, row) in table.iter().enumerate() {
            if row.len() != order {
                return Err(Error::InvalidGroup(format!(
                    "row {i} has length {} (expected {order})",
                    row.len()
                )));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= order) {
                return Err(Error::InvalidGroup(format!(
                    "row {i} contains out-of-range element {bad}"
                )));
            }
            mul.extend_from_slice(row);
        }
        if let Some(l) = &labels {
            if l.len() != order {
                return Err(Error::InvalidGroup(format!(
                    "{} labels for a group of order {order}",
                    l.len()
                )));
            }
        }
        for g in 0..order {
            if mul[g] != g || mul[g * order] != g {
                return Err(Error::InvalidGroup(
                    "element 0 must be a two-sided identity".into(),
                ));
            }
        }
        let mut inv = vec![usize::MAX; order];
        for g in 0..order {
            match (0..order).find(|&h| mul[g * order + h] == 0) {
                Some(h) if mul[h * order + g] == 0 => inv[g] = h,
                _ => {
                    return Err(Error::InvalidGroup(format!("element {g} has no inverse")));
                }
            }
        }
        let group = FiniteGroup {
            order,
            mul,
            inv,
            labels,
        };
        if let Some((a, b, c)) = group.associativity_violation() {
            return Err(Error::InvalidGroup(format!(
                "multiplication is not associative on ({a}, {b}, {c})"
            )));
        }
        Ok(group)
    }

    /// Closure of a set of permutations of `0..degree`, enumerated breadth-first from the
    /// identity with generators applied in the order given. Products compose right to left:
    /// `mul(a, b)` is the permutation `x -> a(b(x))`.
    pub fn from_generators(degree: usize, generators: &[Vec<usize>], cap: usize) -> Result<Self> {
        for (k, p) in generators.iter().enumerate() {
            if p.len() != degree {
                return Err(Error::InvalidGroup(format!(
                    "generator {k} has length {} (expected degree {degree})",
                    p.len()
                )));
            }
            let mut seen = vec![false; degree];
            for &x in p {
                if x >= degree || seen[x] {
                    return Err(Error::InvalidGroup(format!(
                        "generator {k} is not a permutation of 0..{degree}"
                    )));
                }
                seen[x] = true;
            }
        }
        let compose = |a: &[usize], b: &[usize]| -> Vec<usize> { b.iter().map(|&x| a[x]).collect() };

        let identity: Vec<usize> = (0..degree).collect();
        let mut elements = vec![identity.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(identity, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(g) = queue.pop_front() {
            for h in generators {
                let p = compose(&elements[g], h);
                if !index.contains_key(&p) {
                    if elements.len() == cap {
                        return Err(Error::SizeCap { cap });
                    }
                    index.insert(p.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(p);
                }
            }
        }

        let order = elements.len();
        let mut mul = vec![0; order * order];
        let mut inv = vec![0; order];
        for a in 0..order {
            for b in 0..order {
                let c = index[&compose(&elements[a], &elements[b])];
                mul[a * order + b] = c;
                if c == 0 {
                    inv[a] = b;
                }
            }
        }
        let labels = elements.iter().map(|p| perm_label(p)).collect();
        Ok(FiniteGroup {
            order,
            mul,
            inv,
            labels: Some(labels),
        })
    }

    pub fn trivial() -> Self {
        FiniteGroup {
            order: 1,
            mul: vec![0],
            inv: vec![0],
            labels: None,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// `s * n * s^-1`
    #[inline]
    pub fn conjugate(&self, s: usize, n: usize) -> usize {
        self.mul(self.mul(s, n), self.inv(s))
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, g: usize) -> String {
        match &self.labels {
            Some(l) => l[g].clone(),
            None => g.to_string(),
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.order {
            return Err(Error::InvalidGroup("label count differs from group order".into()));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Looks up an element by its label.
    pub fn element(&self, label: &str) -> Option<usize> {
        self.labels.as_ref()?.iter().position(|l| l == label)
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.mul.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut k = 1;
        let mut x = g;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn pow(&self, g: usize, k: usize) -> usize {
        (0..k).fold(0, |acc, _| self.mul(acc, g))
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn exponent(&self) -> usize {
        (0..self.order).fold(1, |acc, g| num_integer::lcm(acc, self.element_order(g)))
    }

    fn associativity_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.order;
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    /// Sorted element set of the subgroup generated by `gens`.
    pub fn subgroup_generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.order];
        inside[0] = true;
        let mut members = vec![0];
        let mut queue = VecDeque::from([0usize]);
        while let Some(g) = queue.pop_front() {
            for &h in gens {
                let p = self.mul(g, h);
                if !inside[p] {
                    inside[p] = true;
                    members.push(p);
                    queue.push_back(p);
                }
            }
        }
        members.sort_unstable();
        members
    }

    /// A greedy generating set of the subgroup with the given members.
    pub fn generators_of(&self, members: &[usize]) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![0usize];
        for &g in members {
            if span.binary_search(&g).is_err() {
                gens.push(g);
                span = self.subgroup_generated(&gens);
            }
        }
        gens
    }

    /// Conjugacy classes, each sorted, ordered by their smallest element.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.order];
        let mut classes = Vec::new();
        for g in 0..self.order {
            if seen[g] {
                continue;
            }
            let mut class: Vec<usize> = (0..self.order).map(|s| self.conjugate(s, g)).collect();
            class.sort_unstable();
            class.dedup();
            for &h in &class {
                seen[h] = true;
            }
            classes.push(class);
        }
        classes
    }

    /// All normal subgroups (as sorted member lists), found as closed unions of
    /// conjugacy classes. Intended for small groups.
    pub fn normal_subgroups(&self) -> Vec<Vec<usize>> {
        let classes = self.conjugacy_classes();
        let rest = &classes[1..];
        assert!(rest.len() < 24, "too many conjugacy classes to enumerate normal subgroups");
        let mut found = Vec::new();
        for mask in 0u32..(1 << rest.len()) {
            let mut members = vec![0usize];
            for (k, c) in rest.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    members.extend_from_slice(c);
                }
            }
            if self.order % members.len() != 0 {
                continue;
            }
            members.sort_unstable();
            let closed = members.iter().all(|&a| {
                members
                    .iter()
                    .all(|&b| members.binary_search(&self.mul(a, b)).is_ok())
            });
            if closed {
                found.push(members);
            }
        }
        found.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        found
    }

    pub fn center(&self) -> Vec<usize> {
        (0..self.order)
            .filter(|&z| (0..self.order).all(|g| self.mul(z, g) == self.mul(g, z)))
            .collect()
    }
}

/// A normal subgroup of a finite group, as a sorted member list.
#[derive(Debug, Clone)]
pub struct NormalSubgroup {
    parent: Arc<FiniteGroup>,
    members: Vec<usize>,
    position: Vec<Option<usize>>,
}

impl NormalSubgroup {
    pub fn new(parent: Arc<FiniteGroup>, members: &[usize]) -> Result<Self> {
        let mut members = members.to_vec();
        members.sort_unstable();
        members.dedup();
        if let Some(&bad) = members.iter().find(|&&m| m >= parent.order()) {
            return Err(Error::InvalidGroup(format!(
                "subgroup member {bad} is out of range"
            )));
        }
        let mut position = vec![None; parent.order()];
        for (i, &m) in members.iter().enumerate() {
            position[m] = Some(i);
        }
        if position[0].is_none() {
            return Err(Error::InvalidGroup("subgroup does not contain the identity".into()));
        }
        for &a in &members {
            if position[parent.inv(a)].is_none() {
                return Err(Error::InvalidGroup(format!(
                    "subgroup is not closed under inverses at {a}"
                )));
            }
            for &b in &members {
                if position[parent.mul(a, b)].is_none() {
                    return Err(Error::InvalidGroup(format!(
                        "subgroup is not closed under multiplication at ({a}, {b})"
                    )));
                }
            }
        }
        for s in 0..parent.order() {
            for &n in &members {
                if position[parent.conjugate(s, n)].is_none() {
                    return Err(Error::NotNormal { s, n });
                }
            }
        }
        Ok(NormalSubgroup {
            parent,
            members,
            position,
        })
    }

    pub fn whole(parent: Arc<FiniteGroup>) -> Self {
        let members: Vec<usize> = (0..parent.order()).collect();
        let position = members.iter().map(|&m| Some(m)).collect();
        NormalSubgroup {
            parent,
            members,
            position,
        }
    }

    pub fn trivial(parent: Arc<FiniteGroup>) -> Self {
        let mut position = vec![None; parent.order()];
        position[0] = Some(0);
        NormalSubgroup {
            parent,
            members: vec![0],
            position,
        }
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.position.get(g).is_some_and(|p| p.is_some())
    }

    /// Position of `g` within [`members`](Self::members).
    pub fn position(&self, g: usize) -> Option<usize> {
        self.position.get(g).copied().flatten()
    }
}

/// One-line notation `[p(0),p(1),...]`, the label of a permutation group element.
pub fn perm_label(p: &[usize]) -> String {
    let parts: Vec<String> = p.iter().map(usize::to_string).collect();
    format!("[{}]", parts.join(","))
}

/// The quotient `Q = G/N` with projection and a transversal (section) `Q -> G`.
#[derive(Debug, Clone)]
pub struct QuotientData {
    q_group: Arc<FiniteGroup>,
    proj: Vec<usize>,
    transversal: Vec<usize>,
    cosets: Vec<Vec<usize>>,
}

/// Enumerates `G/N`, picking the smallest element index in each coset as its
/// representative. Cosets are numbered by their smallest element, so the identity
/// coset is 0.
pub fn quotient_with_transversal(g: &FiniteGroup, n: &NormalSubgroup) -> Result<QuotientData> {
    let order = g.order();
    let mut proj = vec![usize::MAX; order];
    let mut cosets: Vec<Vec<usize>> = Vec::new();
    for s in 0..order {
        if proj[s] != usize::MAX {
            continue;
        }
        let idx = cosets.len();
        let mut coset: Vec<usize> = n.members().iter().map(|&m| g.mul(s, m)).collect();
        coset.sort_unstable();
        for &t in &coset {
            proj[t] = idx;
        }
        cosets.push(coset);
    }
    let transversal: Vec<usize> = cosets.iter().map(|c| c[0]).collect();
    let q = cosets.len();
    let table: Vec<Vec<usize>> = (0..q)
        .map(|x| {
            (0..q)
                .map(|y| proj[g.mul(transversal[x], transversal[y])])
                .collect()
        })
        .collect();
    let q_group = FiniteGroup::from_table(table, None)?;
    let qd = QuotientData {
        q_group: Arc::new(q_group),
        proj,
        transversal,
        cosets,
    };
    // Projection must be a homomorphism; this fails only if N was not normal.
    for s in 0..order {
        for t in 0..order {
            if qd.proj[g.mul(s, t)] != qd.q_group.mul(qd.proj[s], qd.proj[t]) {
                return Err(Error::InvalidGroup(format!(
                    "coset projection is not a homomorphism at ({s}, {t})"
                )));
            }
        }
    }
    Ok(qd)
}

impl QuotientData {
    pub fn q_group(&self) -> &Arc<FiniteGroup> {
        &self.q_group
    }

    pub fn order(&self) -> usize {
        self.q_group.order()
    }

    #[inline]
    pub fn proj(&self, s: usize) -> usize {
        self.proj[s]
    }

    #[inline]
    pub fn section(&self, x: usize) -> usize {
        self.transversal[x]
    }

    pub fn transversal(&self) -> &[usize] {
        &self.transversal
    }

    pub fn coset(&self, x: usize) -> &[usize] {
        &self.cosets[x]
    }

    /// Same quotient with a different choice of coset representatives.
    pub fn with_transversal(&self, transversal: Vec<usize>) -> Result<Self> {
        if transversal.len() != self.order() {
            return Err(Error::InvalidGroup("transversal has the wrong length".into()));
        }
        if transversal[0] != 0 {
            return Err(Error::InvalidGroup(
                "transversal must send the identity coset to the identity".into(),
            ));
        }
        for (x, &t) in transversal.iter().enumerate() {
            if self.proj.get(t) != Some(&x) {
                return Err(Error::InvalidGroup(format!(
                    "transversal element {t} does not lie in coset {x}"
                )));
            }
        }
        Ok(QuotientData {
            transversal,
            ..self.clone()
        })
    }

    /// Random representatives in every non-identity coset.
    pub fn randomized<R: Rng>(&self, rng: &mut R) -> Self {
        let mut transversal = vec![0];
        for coset in &self.cosets[1..] {
            transversal.push(coset[rng.gen_range(0..coset.len())]);
        }
        QuotientData {
            transversal,
            ..self.clone()
        }
    }

    /// Writes `s = c(x) * n` with `x = proj(s)` and `n` in `N`.
    pub fn coset_factor(&self, g: &FiniteGroup, s: usize) -> (usize, usize) {
        let x = self.proj[s];
        let n = g.mul(g.inv(self.transversal[x]), s);
        (x, n)
    }
}
