pub mod achronal;
pub mod analysis;
pub mod boundary;
pub mod causal;
pub mod cli;
pub mod csv;
pub mod geometry;
pub mod group;
pub mod isometry;
pub mod kerr;
pub mod scenario;
