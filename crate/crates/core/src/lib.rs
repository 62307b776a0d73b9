pub mod numerics;
pub mod spectrum;
pub mod krylov;
pub mod bounds;
pub mod analysis;
pub mod experiment;
