pub mod interpolate;
pub mod list;
pub mod predict;
mod ratios;
pub mod transform;
pub mod type_fit;
pub mod verify;
