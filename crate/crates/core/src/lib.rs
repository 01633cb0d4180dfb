//! Exact computations with bimodules over the radical-square-zero Nakayama
//! algebras `Λ_n`: tensor products, Krull–Schmidt decompositions, cells, and
//! the simple transitive birepresentations of the string cells.

pub mod algebra;
pub mod bimodule;
pub mod birep;
pub mod catalog;
pub mod cells;
pub mod decompose;
pub mod error;
pub mod linalg;
pub mod quiver;
pub mod scalar;
pub mod tensor;

pub use algebra::{CoverVertex, NakayamaAlgebra, TorusAlgebra, Vertex};
pub use bimodule::{Bimodule, BimoduleMap};
pub use birep::{cell_birep, classify, FinitaryBirep, LocalizationSpec};
pub use catalog::{construct, Family, StringLabel};
pub use decompose::{cell_of, decompose, Catalog, CellTag, DecompositionReport};
pub use error::{Error, Result};
pub use linalg::ExactMatrix;
pub use scalar::Scalar;
pub use tensor::{tensor, tensor_map};
