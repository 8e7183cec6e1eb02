//! Fitting, comparison and validation of heavy-tailed distributions.
//!
//! The typical workflow on a data set:
//!
//! 1. load observations into a [`Sample`] ([`io::load_sample`], or the
//!    bundled [`io::moby`] word frequencies),
//! 2. pick a family and find the threshold above which it fits best
//!    ([`fit::estimate_xmin`]),
//! 3. quantify uncertainty ([`resample::bootstrap`]) and test plausibility
//!    ([`resample::bootstrap_p`]),
//! 4. compare against an alternative family ([`compare::compare_distributions`]).
//!
//! ```
//! use heavytail::{fit, io, Family, Model};
//!
//! let data = io::moby();
//! let template = Model::new(Family::DiscretePowerLaw, 1.0)?;
//! let opts = fit::ScanOptions { xmins: Some(vec![7.0]), pars: None };
//! let est = fit::estimate_xmin(&template, &data, &opts)?;
//! assert!((est.params[0] - 1.953).abs() < 1e-3);
//! # Ok::<(), heavytail::Error>(())
//! ```

pub mod compare;
pub mod dists;
pub mod error;
pub mod fit;
pub mod io;
pub mod resample;

pub use compare::{compare_distributions, ComparisonResult};
pub use dists::{hurwitz_zeta, Family, Model, Moment, Support};
pub use error::{Error, Result};
pub use fit::{ParsEstimate, XminEstimate};
pub use io::{FitReport, Sample, Table};
pub use resample::{BodyMode, BootstrapConfig, BootstrapResult, GofResult};
