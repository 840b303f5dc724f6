use serde::{Deserialize, Serialize};

use super::profile::{CohomologyProfile, Rank};
use super::spec::{two_pi_check, FillingSpec};
use crate::error::{Error, Result};

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Reduced cohomology of the join `S^(l-1) * T^k`, with `S^(-1) = ∅`.
///
/// ```
/// use catfill::filling_topology::{join_cohomology, Rank};
///
/// let st2 = join_cohomology(1, 2).unwrap();
/// assert_eq!(st2.rank(2), Rank::Finite(2));
/// assert_eq!(st2.rank(3), Rank::Finite(1));
/// ```
pub fn join_cohomology(l: usize, k: usize) -> Result<CohomologyProfile> {
    if l == 0 && k == 0 {
        return Err(Error::Empty);
    }
    if k == 0 {
        return Ok(CohomologyProfile::sphere(l as i32 - 1));
    }
    Ok(CohomologyProfile::from_pairs((1..=k).map(|j| ((l + j) as i32, Rank::Finite(binomial(k as u64, j as u64))))))
}

/// Cohomology of a connected sum of `top_dim`-dimensional pseudomanifolds.
pub fn connect_sum_cohomology(profiles: &[CohomologyProfile], top_dim: i32) -> Result<CohomologyProfile> {
    let mut out = CohomologyProfile::sphere(top_dim);
    for p in profiles {
        let top = p.rank(top_dim);
        if top != Rank::Finite(1) {
            return Err(Error::TopMismatch { top: top_dim, found: top.to_string() });
        }
        for (&q, &r) in &p.ranks {
            if q != top_dim {
                out.set(q, out.rank(q) + r);
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShellSequence {
    /// Profile of each shell, starting after the first swallow.
    pub shells: Vec<CohomologyProfile>,
    /// Direct limit under indefinite repetition of the schedule.
    pub colimit: CohomologyProfile,
}

/// Iterates connected sums along a shell schedule.
///
/// Each schedule entry lists the cusp indices whose cores the shell
/// swallows. The first shell starts from `S^n`.
///
/// ```
/// use catfill::filling_topology::{shell_sequence, CuspSpec, FillingSpec, Rank};
/// use catfill::model_spaces::LatticeTorus;
///
/// let cusp = CuspSpec::new(LatticeTorus::square(3, 7.0).unwrap(), vec![vec![1, 0, 0], vec![0, 1, 0]]).unwrap();
/// let spec = FillingSpec::new(3, vec![cusp]).unwrap();
/// let seq = shell_sequence(&spec, &[vec![0], vec![0]]).unwrap();
/// assert_eq!(seq.shells[1].rank(2), Rank::Finite(4));
/// assert_eq!(seq.colimit.rank(2), Rank::Infinite);
/// ```
pub fn shell_sequence(filling: &FillingSpec, schedule: &[Vec<usize>]) -> Result<ShellSequence> {
    if schedule.is_empty() {
        return Err(Error::ScheduleEmpty);
    }
    let n = filling.n as i32;
    let dims = filling.core_dims();
    let mut current = CohomologyProfile::sphere(n);
    let mut shells = Vec::with_capacity(schedule.len());
    let mut grows = CohomologyProfile::new();
    for (i, cores) in schedule.iter().enumerate() {
        let mut parts = vec![current];
        for &c in cores {
            let &(l, k) = dims
                .get(c)
                .ok_or_else(|| Error::Validation(format!("schedule shell {i} names cusp {c}, but there are {} cusps", dims.len())))?;
            let join = join_cohomology(l, k)?;
            for (&q, &r) in &join.ranks {
                if q != n {
                    grows.set(q, r);
                }
            }
            parts.push(join);
        }
        current = connect_sum_cohomology(&parts, n)?;
        shells.push(current.clone());
    }
    let mut colimit = CohomologyProfile::sphere(n);
    for &q in grows.ranks.keys() {
        colimit.set(q, Rank::Infinite);
    }
    Ok(ShellSequence { shells, colimit })
}

/// `shells` shells, each swallowing one core of every filling dimension
/// present, cycling through the cusps of each dimension.
pub fn round_robin(filling: &FillingSpec, shells: usize) -> Vec<Vec<usize>> {
    let mut by_dim: Vec<Vec<usize>> = vec![Vec::new(); filling.n + 1];
    for (i, c) in filling.cusps.iter().enumerate() {
        by_dim[c.torus_dim()].push(i);
    }
    (0..shells).map(|i| by_dim.iter().filter(|c| !c.is_empty()).map(|c| c[i % c.len()]).collect()).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupCohomology {
    /// `H^q(G; ZG)`.
    pub group: CohomologyProfile,
    /// Čech cohomology of the boundary.
    pub boundary: CohomologyProfile,
    pub s: usize,
    pub warnings: Vec<String>,
}

/// Closed-form group cohomology with group-ring coefficients.
///
/// ```
/// use catfill::filling_topology::{group_cohomology_table, Rank};
///
/// let (group, _) = group_cohomology_table(3, 3);
/// assert_eq!(group.rank(2), Rank::Infinite);
/// assert_eq!(group.rank(4), Rank::Finite(1));
/// ```
pub fn group_cohomology_table(n: usize, s: usize) -> (CohomologyProfile, CohomologyProfile) {
    let n = n as i32;
    let s = s as i32;
    let mut group = CohomologyProfile::sphere(n + 1);
    let mut boundary = CohomologyProfile::sphere(n);
    for q in (n - s + 2)..=n {
        group.set(q, Rank::Infinite);
    }
    for q in (n - s + 1)..n {
        boundary.set(q, Rank::Infinite);
    }
    (group, boundary)
}

pub fn group_cohomology(filling: &FillingSpec) -> Result<GroupCohomology> {
    let s = filling.s();
    let (group, boundary) = group_cohomology_table(filling.n, s);
    let mut warnings = Vec::new();
    for (i, c) in filling.cusps.iter().enumerate() {
        let check = two_pi_check(c)?;
        if !check.ok {
            warnings.push(format!("cusp {i}: filling torus systole {} does not exceed 2π", check.systole));
        }
    }
    Ok(GroupCohomology { group, boundary, s, warnings })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(pairs: &[(i32, u64)]) -> CohomologyProfile {
        CohomologyProfile::from_pairs(pairs.iter().map(|&(q, r)| (q, Rank::Finite(r))))
    }

    #[test]
    fn join_examples() {
        assert_eq!(join_cohomology(1, 1).unwrap(), p(&[(2, 1)]));
        assert_eq!(join_cohomology(1, 2).unwrap(), p(&[(2, 2), (3, 1)]));
        assert_eq!(join_cohomology(2, 1).unwrap(), p(&[(3, 1)]));
        assert_eq!(join_cohomology(0, 3).unwrap(), p(&[(1, 3), (2, 3), (3, 1)]));
        assert_eq!(join_cohomology(3, 0).unwrap(), p(&[(2, 1)]));
        assert_eq!(join_cohomology(0, 0), Err(Error::Empty));
    }

    #[test]
    fn connect_sum_examples() {
        let st2 = join_cohomology(1, 2).unwrap();
        assert_eq!(connect_sum_cohomology(std::slice::from_ref(&st2), 3).unwrap(), st2);
        assert_eq!(connect_sum_cohomology(&[p(&[(3, 1)]), p(&[(3, 1)])], 3).unwrap(), p(&[(3, 1)]));
        assert_eq!(connect_sum_cohomology(&[st2.clone(), p(&[(3, 1)])], 3).unwrap(), p(&[(2, 2), (3, 1)]));
        assert!(matches!(connect_sum_cohomology(&[p(&[(2, 1)])], 3), Err(Error::TopMismatch { top: 3, .. })));
    }
}
