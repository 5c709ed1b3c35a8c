//! Exact computations with quiver representations: Cartan and Coxeter data, root systems,
//! ditalgebra reductions, Hom/Ext through the σ-map, Auslander–Reiten knitting and
//! exceptional module families over extended Dynkin quivers.

pub mod error;
pub mod exactlin;
pub mod pathdit;
pub mod quiver;
pub mod repcat;
pub mod rootlat;
pub mod arknit;
pub mod euclid;

pub use error::{Error, Result};
