use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

use super::cohomology::group_cohomology;
use super::profile::CohomologyProfile;
use super::spec::{two_pi_check, FillingSpec};
use crate::error::Result;

pub const SCHEDULE_NOTE: &str = "schedule is a model assumption: shells are combinatorial stand-ins for good shells";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CuspReport {
    pub systole: f64,
    pub two_pi_ok: bool,
    pub core_dim: usize,
    pub torus_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flags {
    pub is_manifold: bool,
    pub is_pd_group: bool,
    pub cat_minus_one: bool,
    pub isolated_flats: bool,
    pub flat_dims_present: BTreeSet<usize>,
    pub simply_connected_at_infinity: bool,
    pub systolic_excluded: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub n: usize,
    pub cusps: Vec<CuspReport>,
    pub s: usize,
    pub group_cohomology: CohomologyProfile,
    pub boundary_cohomology: CohomologyProfile,
    pub flags: Flags,
    pub warnings: Vec<String>,
    pub notes: Vec<String>,
}

impl InvariantReport {
    pub fn all_two_pi_ok(&self) -> bool {
        self.cusps.iter().all(|c| c.two_pi_ok)
    }
}

/// Flags for a filling with cusp cross-sections of dimension `n` and
/// filling tori of the given dimensions.
pub fn flags_for(n: usize, torus_dims: &[usize]) -> Flags {
    let manifold = torus_dims.iter().all(|&d| d == 1);
    let sc = torus_dims.iter().all(|&d| d != n);
    Flags {
        is_manifold: manifold,
        is_pd_group: manifold,
        cat_minus_one: torus_dims.iter().all(|&d| d + 1 >= n),
        isolated_flats: true,
        flat_dims_present: torus_dims.iter().filter(|&&d| d + 2 <= n).map(|&d| n - d).collect(),
        simply_connected_at_infinity: sc,
        systolic_excluded: sc,
    }
}

/// Cusp data, cohomology and flags of a filling.
///
/// ```
/// use catfill::filling_topology::{classify, CuspSpec, FillingSpec};
/// use catfill::model_spaces::LatticeTorus;
///
/// let cusp = CuspSpec::new(LatticeTorus::square(2, 7.0).unwrap(), vec![vec![1, 0]]).unwrap();
/// let report = classify(&FillingSpec::new(2, vec![cusp]).unwrap()).unwrap();
/// assert!(report.flags.is_manifold && report.flags.cat_minus_one);
/// ```
pub fn classify(filling: &FillingSpec) -> Result<InvariantReport> {
    let cusps = filling
        .cusps
        .iter()
        .map(|c| {
            let check = two_pi_check(c)?;
            Ok(CuspReport { systole: check.systole, two_pi_ok: check.ok, core_dim: filling.n - c.torus_dim(), torus_dim: c.torus_dim() })
        })
        .collect::<Result<Vec<_>>>()?;
    let cohomology = group_cohomology(filling)?;
    let dims: Vec<usize> = cusps.iter().map(|c| c.torus_dim).collect();
    Ok(InvariantReport {
        n: filling.n,
        cusps,
        s: cohomology.s,
        group_cohomology: cohomology.group,
        boundary_cohomology: cohomology.boundary,
        flags: flags_for(filling.n, &dims),
        warnings: cohomology.warnings,
        notes: vec![SCHEDULE_NOTE.to_string()],
    })
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

impl fmt::Display for InvariantReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n = {}, s = {}", self.n, self.s)?;
        writeln!(f, "cusp  systole     2pi  l  k")?;
        for (i, c) in self.cusps.iter().enumerate() {
            writeln!(f, "{i:<5} {:<11.6} {:<4} {}  {}", c.systole, yes(c.two_pi_ok), c.core_dim, c.torus_dim)?;
        }
        writeln!(f, "q   H^q(G;ZG)  H^q(boundary)")?;
        for q in 0..=self.n as i32 + 1 {
            writeln!(f, "{q:<3} {:<10} {}", self.group_cohomology.rank(q).to_string(), self.boundary_cohomology.rank(q))?;
        }
        let fl = &self.flags;
        let flat: Vec<String> = fl.flat_dims_present.iter().map(|d| d.to_string()).collect();
        writeln!(f, "manifold: {}", yes(fl.is_manifold))?;
        writeln!(f, "PD group: {}", yes(fl.is_pd_group))?;
        writeln!(f, "CAT(-1): {}", yes(fl.cat_minus_one))?;
        writeln!(f, "isolated flats: {} (flat dims: {})", yes(fl.isolated_flats), if flat.is_empty() { "none".into() } else { flat.join(", ") })?;
        writeln!(f, "simply connected at infinity: {}", yes(fl.simply_connected_at_infinity))?;
        writeln!(f, "systolic excluded: {}", yes(fl.systolic_excluded))?;
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        Ok(())
    }
}
