pub mod analyze;
pub mod compare;
pub mod regenerate;
pub mod stats;
