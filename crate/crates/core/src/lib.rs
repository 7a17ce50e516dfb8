//! Face morph detection by physical reflection analysis.
//!
//! A facial morph blends two people's photographs into one image. When the
//! blended faces have different 3-D geometry, the specular highlights on the
//! skin end up in physically impossible places for either person. This crate
//! checks that consistency:
//!
//! 1. estimate the direction to each light source from the catch-lights in
//!    the eyes ([`eye`]),
//! 2. align a 3-D face mesh to the image and rasterize per-pixel surface
//!    normals ([`pose`]),
//! 3. synthesize the expected skin highlights with a Torrance-Sparrow
//!    reflection model ([`brdf`], [`highlight`]),
//! 4. compare them against the highlights actually detected in the image
//!    ([`highlight`]).
//!
//! [`morph`] generates morphing attacks for testing the detector, and
//! [`oracle`] is an independent ray tracer that renders ground-truth scenes
//! so the whole pipeline can be validated without human-subject data.
//! [`pipeline`] wires the stages into the batch commands exposed by the CLI.

pub mod brdf;
pub mod config;
pub mod error;
pub mod eye;
pub mod geometry;
pub mod highlight;
pub mod image;
pub mod morph;
pub mod oracle;
pub mod pipeline;
pub mod pose;
mod raster;
pub mod synth;

pub use error::{Error, Result};
