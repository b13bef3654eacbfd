pub mod bc;
pub mod cst;
pub mod dimension;
pub mod error;
pub mod ext;
pub mod filtration;
pub mod hn;
pub mod isocrystal;
pub mod matrix;
pub mod poly;
pub mod polygon;
pub mod random;
pub mod rational;
pub mod sheaf;
pub mod subspace;

pub use bc::{check_exact, height_functor_rank, BCObject, ExactSequence, Node, Piece, QBCObject};
pub use cst::{battery, build_modification, dichotomy, mv_check, BatteryReport, SyntheticCohomology};
pub use dimension::Dimension;
pub use error::{Error, Result};
pub use ext::{ext_tables, ExtResult, Label};
pub use filtration::{Flag, HodgeData};
pub use hn::{
    enumerate_subobjects, fn4_reduce, hn_filtration, is_acyclic, is_weakly_admissible, vst_dimension,
    FilteredPhiModule, SearchOptions, Status, Verdict,
};
pub use isocrystal::PhiModule;
pub use matrix::RatMatrix;
pub use polygon::{newton_polygon, Polygon};
pub use rational::Rational;
pub use sheaf::FFSheaf;
pub use subspace::Subspace;
