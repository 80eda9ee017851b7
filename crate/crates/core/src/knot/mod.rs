//! Knot diagrams, HOMFLY polynomials and identification of lattice polygons.

pub mod diagram;
pub mod homfly;
pub mod identify;
pub mod kauffman;
pub mod nomenclature;
pub mod poly;
pub mod project;
pub mod reduce;
pub mod table;

pub use diagram::{Crossing, KnotDiagram};
pub use homfly::{homfly, HomflyEngine};
pub use identify::Identifier;
pub use kauffman::{kauffman, KauffmanEngine};
pub use nomenclature::Nomenclature;
pub use poly::LaurentPoly2;
pub use table::{Identification, KnotRecord, KnotTable, KnotType};
