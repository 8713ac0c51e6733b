pub mod commands;
pub mod render;
pub mod scene;

pub use commands::{run, Cli, Outcome};
pub use scene::{emit_scene, parse_scene, Scene, SceneError};
