//! Filling specs, join and connected-sum cohomology, shell colimits and
//! classification flags.

mod classify;
mod cohomology;
mod integer;
mod profile;
mod spec;

pub use classify::{classify, flags_for, CuspReport, Flags, InvariantReport, SCHEDULE_NOTE};
pub use cohomology::{
    connect_sum_cohomology, group_cohomology, group_cohomology_table, join_cohomology, round_robin, shell_sequence, GroupCohomology,
    ShellSequence,
};
pub use integer::elementary_divisors;
pub use profile::{CohomologyProfile, Rank};
pub use spec::{two_pi_check, CuspSpec, FillingSpec, TwoPiCheck};
