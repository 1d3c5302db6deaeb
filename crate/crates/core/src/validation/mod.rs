pub mod convergence;
pub mod detachment;
pub mod oracle;
pub mod residual;
