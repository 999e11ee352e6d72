//! Maximum pairwise-coprime subsets by branch and bound over prime masks.

use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use super::CertifyError;

/// Orbit-length data together with a largest pairwise-coprime choice of
/// lengths greater than one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitProfile {
    /// The full multiset of orbit lengths, sorted.
    pub lengths: Vec<u64>,
    /// Distinct, pairwise coprime, each > 1; sorted ascending.
    pub chosen: Vec<u64>,
    pub l: usize,
    /// Lower bound `2l` on the dimension of any equivariant embedding.
    pub bound: usize,
}

impl OrbitProfile {
    /// Builds a profile from arbitrary orbit lengths; lengths equal to one
    /// (fixed points) are kept in `lengths` but never chosen.
    pub fn from_orbit_lengths(lengths: &[u64]) -> Result<Self, CertifyError> {
        if lengths.contains(&0) {
            return Err(CertifyError::Domain("orbit length 0".into()));
        }
        let nontrivial: Vec<u64> = lengths.iter().copied().filter(|&w| w > 1).collect();
        let mut profile = max_coprime_subset(&nontrivial)?;
        let mut all = lengths.to_vec();
        all.sort_unstable();
        profile.lengths = all;
        Ok(profile)
    }
}

/// Prime factors of `n`, ascending, without multiplicity.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Largest set of distinct, pairwise coprime values drawn from `lengths`.
///
/// Ties are broken towards the lexicographically smallest ascending
/// sequence. Every input must be at least 2.
pub fn max_coprime_subset(lengths: &[u64]) -> Result<OrbitProfile, CertifyError> {
    if let Some(&bad) = lengths.iter().find(|&&w| w <= 1) {
        return Err(CertifyError::Domain(format!("length {bad} is not greater than 1")));
    }
    let mut distinct: Vec<u64> = lengths.to_vec();
    distinct.sort_unstable();
    distinct.dedup();

    let factors: Vec<Vec<u64>> = distinct.iter().map(|&w| prime_factors(w)).collect();
    let prime_index: BTreeMap<u64, usize> = factors
        .iter()
        .flatten()
        .copied()
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .enumerate()
        .map(|(i, p)| (p, i))
        .collect();
    let nprimes = prime_index.len();
    let masks: Vec<FixedBitSet> = factors
        .iter()
        .map(|fs| {
            let mut m = FixedBitSet::with_capacity(nprimes);
            for p in fs {
                m.insert(prime_index[p]);
            }
            m
        })
        .collect();

    let mut search = Search { masks: &masks, nprimes, best: Vec::new(), current: Vec::new() };
    search.descend(0, &FixedBitSet::with_capacity(nprimes));

    let chosen: Vec<u64> = search.best.iter().map(|&i| distinct[i]).collect();
    let mut all = lengths.to_vec();
    all.sort_unstable();
    let l = chosen.len();
    Ok(OrbitProfile { lengths: all, chosen, l, bound: 2 * l })
}

struct Search<'a> {
    masks: &'a [FixedBitSet],
    nprimes: usize,
    best: Vec<usize>,
    current: Vec<usize>,
}

impl Search<'_> {
    fn descend(&mut self, idx: usize, used: &FixedBitSet) {
        if self.current.len() > self.best.len() {
            self.best = self.current.clone();
        }
        if idx == self.masks.len() {
            return;
        }
        // Each further value needs a prime of its own and must avoid `used`.
        let compatible = self.masks[idx..].iter().filter(|m| m.is_disjoint(used)).count();
        let free_primes = self.nprimes - used.count_ones(..);
        if self.current.len() + compatible.min(free_primes) <= self.best.len() {
            return;
        }
        // Include first: reaching a maximum size this way first yields the
        // lexicographically smallest optimum.
        if self.masks[idx].is_disjoint(used) {
            let mut next = used.clone();
            next.union_with(&self.masks[idx]);
            self.current.push(idx);
            self.descend(idx + 1, &next);
            self.current.pop();
        }
        self.descend(idx + 1, used);
    }
}
