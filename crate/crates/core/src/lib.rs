pub mod cli;
pub mod error;
pub mod functionals;
pub mod gasdyn;
pub mod riemann;
pub mod tracking;
pub mod validation;
pub mod waves;
