pub mod cli;
pub mod cohesion;
pub mod kernel;
pub mod loader;
pub mod model;
pub mod stdlib;
pub mod syntax;
