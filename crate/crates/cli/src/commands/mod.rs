pub mod figure;
pub mod fit;
pub mod sweep;
pub mod validate;
