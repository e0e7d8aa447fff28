//! Marked partitions and the odd-part bijections behind Bressoud-type
//! partition identities, with a truncated q-series engine to check the
//! identities coefficient by coefficient.
//!
//! The pieces, bottom up:
//!
//! * [`partition`]: partitions, the Gollnitz-Gordon marking and rows.
//! * [`sets`]: membership tests and enumerators for the partition families.
//! * [`types`] and [`classify`]: starting types, group types and the three
//!   families indexed by `(p, t)` with their twelve subsets.
//! * [`bijection`]: dilation, reduction, insertion, separation and the maps
//!   built from them.
//! * [`qseries`]: sum and product sides as truncated series.
//! * [`sweep`]: exhaustive round-trip and integrity drivers.

pub mod bijection;
pub mod classify;
pub mod error;
pub mod fixtures;
pub mod partition;
pub mod qseries;
pub mod sets;
pub mod sweep;
pub mod types;

pub use classify::{Analysis, Family, SubsetLabel};
pub use error::{Error, Result};
pub use partition::{Entry, Ext, MarkedPartition, Partition, Surgery};
pub use sets::BressoudParams;
