//! Finite-group cohomology, extensions and embedding problems on Cayley tables.

pub mod abelian;
pub mod cochain;
pub mod corpus;
pub mod embedding;
pub mod error;
pub mod extensions;
pub mod gmodule;
pub mod groups;
pub mod json;
pub mod linalg;
pub mod products;
