pub mod audit;
pub mod clique;
pub mod estimate;
pub mod rate;
