//! Counting Heisenberg groups with phase space of order `n²`.
//!
//! Up to equivalence a Heisenberg group is determined by its phase space
//! `K`, and `K` carries a non-degenerate form exactly when `K ≅ A × Â`. So
//! the classes with `|K| = n²` match the abelian groups `A` of order `n`.

use crate::arith::factorize;
use crate::group::FiniteAbelianGroup;
use crate::reduction::{exists_nondegenerate, half, orbit_census, OrbitCensus};
use crate::{Error, Limits, Result};

/// Largest order accepted by [`enumerate_abelian_groups`]; trial division
/// stays under a million steps.
pub const MAX_FACTOR_ORDER: u64 = 1_000_000_000_000;

/// Partitions of `n` into non-increasing parts, largest first part first.
pub fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(rest: u32, cap: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=rest.min(cap)).rev() {
            prefix.push(part);
            go(rest - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Every abelian group of the given order, once each, sorted by invariant
/// factors in decreasing lexicographic order (`(4)` before `(2, 2)`).
pub fn enumerate_abelian_groups(order: u64) -> Result<Vec<FiniteAbelianGroup>> {
    if order == 0 {
        return Err(Error::ZeroOrder(0));
    }
    if order > MAX_FACTOR_ORDER {
        return Err(Error::BoundExceeded { size: order as u128, bound: MAX_FACTOR_ORDER });
    }
    let mut chains: Vec<Vec<u64>> = vec![Vec::new()];
    for (p, e) in factorize(order) {
        let mut next = Vec::new();
        for chain in &chains {
            for lambda in partitions(e) {
                let len = chain.len().max(lambda.len());
                let merged: Vec<u64> = (0..len)
                    .map(|i| chain.get(i).copied().unwrap_or(1) * p.pow(lambda.get(i).copied().unwrap_or(0)))
                    .collect();
                next.push(merged);
            }
        }
        chains = next;
    }
    let mut groups: Vec<FiniteAbelianGroup> =
        chains.iter().map(|c| FiniteAbelianGroup::new(c)).collect::<Result<_>>()?;
    groups.sort_by(|a, b| b.factors().cmp(a.factors()));
    Ok(groups)
}

/// Phase spaces of order `n²` that carry a Heisenberg group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationRecord {
    pub order_n: u64,
    pub phase_groups: Vec<FiniteAbelianGroup>,
    pub count: usize,
}

/// Lists the `K` of order `n²` whose invariant factors pair up and checks
/// that `K ↦ A` is a bijection onto the abelian groups of order `n`.
pub fn classify_heisenberg(n: u64) -> Result<ClassificationRecord> {
    let square = n.checked_mul(n).ok_or(Error::BoundExceeded { size: n as u128 * n as u128, bound: MAX_FACTOR_ORDER })?;
    let phase_groups: Vec<FiniteAbelianGroup> =
        enumerate_abelian_groups(square)?.into_iter().filter(exists_nondegenerate).collect();
    let mut halves: Vec<FiniteAbelianGroup> =
        phase_groups.iter().map(|k| half(k).expect("filtered on pairing")).collect();
    halves.sort_by(|a, b| b.factors().cmp(a.factors()));
    if halves != enumerate_abelian_groups(n)? {
        return Err(Error::Invariant(format!("phase spaces of order {square} do not match the groups of order {n}")));
    }
    let count = phase_groups.len();
    Ok(ClassificationRecord { order_n: n, phase_groups, count })
}

/// Second route: all non-degenerate forms on each phase space form a single
/// automorphism orbit, so each `K` carries exactly one Heisenberg group.
pub fn confirm_single_orbits(record: &ClassificationRecord, limits: &Limits) -> Result<Vec<OrbitCensus>> {
    record
        .phase_groups
        .iter()
        .map(|k| {
            let census = orbit_census(k, limits)?;
            if census.forms == 0 || !census.single_orbit {
                return Err(Error::Invariant(format!("forms on {k} are not a single orbit")));
            }
            Ok(census)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factors(groups: &[FiniteAbelianGroup]) -> Vec<Vec<u64>> {
        groups.iter().map(|g| g.factors().to_vec()).collect()
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..=10).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
        assert_eq!(partitions(3), vec![vec![3], vec![2, 1], vec![1, 1, 1]]);
    }

    #[test]
    fn group_lists() {
        assert_eq!(factors(&enumerate_abelian_groups(1).unwrap()), vec![Vec::<u64>::new()]);
        assert_eq!(factors(&enumerate_abelian_groups(4).unwrap()), vec![vec![4], vec![2, 2]]);
        assert_eq!(factors(&enumerate_abelian_groups(12).unwrap()), vec![vec![12], vec![6, 2]]);
        assert_eq!(enumerate_abelian_groups(0), Err(Error::ZeroOrder(0)));
        assert!(enumerate_abelian_groups(MAX_FACTOR_ORDER + 1).is_err());
    }

    #[test]
    fn records() {
        let r = classify_heisenberg(1).unwrap();
        assert_eq!(r.count, 1);
        let r = classify_heisenberg(4).unwrap();
        assert_eq!(factors(&r.phase_groups), vec![vec![4, 4], vec![2, 2, 2, 2]]);
        let r = classify_heisenberg(8).unwrap();
        assert_eq!(factors(&r.phase_groups), vec![vec![8, 8], vec![4, 4, 2, 2], vec![2, 2, 2, 2, 2, 2]]);
        assert_eq!(r.count, 3);
    }

    #[test]
    fn orbit_route_small() {
        let lim = Limits::default();
        for n in 1..=4 {
            let r = classify_heisenberg(n).unwrap();
            assert_eq!(confirm_single_orbits(&r, &lim).unwrap().len(), r.count);
        }
    }
}
