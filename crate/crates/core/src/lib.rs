//! Balanced Voronoi separators and separator-as-hitting-set solvers.

pub mod config;
pub mod cover;
pub mod delaunay;
pub mod error;
pub mod features;
pub mod gen;
pub mod geom;
pub mod halfflat;
pub mod instance;
pub mod io;
pub mod kdtree;
mod linalg;
pub mod lp;
pub mod separator;
pub mod solvers;
pub mod verify;

pub use config::Config;
pub use error::{Error, Result};
pub use geom::{Ball, BallSign, Point, Simplex, Sphere};
