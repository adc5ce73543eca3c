//! Numerical toolkit for operators on semi-Hilbertian spaces.

pub mod audit;
pub mod blockops;
pub mod error;
pub mod fuzz;
pub mod inequalities;
pub mod io;
pub mod linalg;
pub mod pde;
pub mod search;
pub mod semihilbert;

pub use audit::AuditRow;
pub use error::{Error, Result};
pub use fuzz::{CampaignReport, GenSpec};
pub use inequalities::{BoundParams, BoundReport, Instance};
pub use io::MatrixFile;
pub use linalg::{ComplexMatrix, RadiusBracket, Spectrum, C64};
pub use pde::EllipticSpec;
pub use semihilbert::{ReducedOperator, SemiInnerContext};
