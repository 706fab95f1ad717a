pub mod cli;
pub mod curves;
pub mod explorer;
pub mod exprops;
pub mod geometry;
pub mod interval;
pub mod lemma_checks;
pub mod local_opt;
pub mod scalar;
pub mod support_sphere;
