//! Exact verification of parity-bias inequalities for restricted partitions.
//!
//! The crate builds truncated generating functions over big integers, counts
//! the same partitions independently by enumeration and dynamic programming,
//! and compares the two sides of each inequality coefficient by coefficient.
//!
//! ```
//! use paritybias::{build_series, FamilyId, FamilyParams};
//! use paritybias::inequality::{verify_theorem, TheoremId, TheoremSpec};
//! use paritybias::oracle::{BiasSpec, ConstraintSpec, Oracle, OracleCaps};
//!
//! let po = build_series(FamilyId::Po, FamilyParams::none(), 8)?;
//! assert_eq!(po.coefficient(8)?, &2.into());
//!
//! let spec = TheoremSpec::new(TheoremId::ThmKimNew, Some(3))?;
//! let report = verify_theorem(&spec, 200, 200, OracleCaps::default())?;
//! assert!(report.holds);
//!
//! let oracle = Oracle::new(OracleCaps::default());
//! let c = ConstraintSpec::non_unitary();
//! let n = oracle.count_bias_dp(8, &c, BiasSpec::even_over_odd())?;
//! assert_eq!(n, 5u32.into());
//! # Ok::<(), paritybias::Error>(())
//! ```

pub mod error;
pub mod genfunc;
pub mod identities;
pub mod inequality;
pub mod oracle;
pub mod report;
pub mod series;

pub use error::{Disagreement, Error, Result};
pub use genfunc::{build_series, list_families, FamilyId, FamilyParams};
pub use identities::{check_identity, CheckResult, IdentityCheck, IdentityId};
pub use oracle::{BiasSpec, ConstraintSpec, Oracle, OracleCaps, Partition};
pub use series::{FormalSeries, Monomial};
