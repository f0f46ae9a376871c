//! Permutations of GF(2^(2m)) with boomerang uniformity 4 from the
//! generalized butterfly structure, with the field arithmetic, equation
//! solvers and table analysis needed to construct and check them.
//!
//! ```
//! use butterfly_bct::{analysis, butterfly::Quadrinomial, tower::TowerCtx};
//!
//! let tower = TowerCtx::with_modulus(3, None).unwrap();
//! let f = Quadrinomial::new(&tower, 1, 0b010).unwrap().table();
//! assert!(f.is_permutation());
//! assert_eq!(analysis::delta_uniformity(&f), 4);
//! assert_eq!(analysis::boomerang_uniformity(&f).unwrap(), 4);
//! ```

pub mod analysis;
pub mod butterfly;
pub mod diagnostics;
pub mod error;
pub mod field;
pub mod par;
pub mod solvers;
pub mod tower;
pub mod verify;

pub use analysis::{Mode, SBoxTable, SpectrumKind, SpectrumTable};
pub use butterfly::{ButterflyParams, Quadrinomial};
pub use error::{Error, Result};
pub use field::{FieldCtx, FieldEl};
pub use par::Exec;
pub use tower::{TowerCtx, TowerEl};
