//! Front ends for the xtag engine: SVG rendering and the HTTP service.

pub mod render;
pub mod server;
