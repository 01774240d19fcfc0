pub mod error;
pub mod index;
pub mod linalg;
pub mod parse;
pub mod pbw;
pub mod poly;
pub mod rational;
pub mod weyl;
pub mod witt;
pub mod smash;
pub mod glmod;
pub mod whittaker;
pub mod derham;
pub mod weighting;
pub mod acceptance;
pub mod cli;
