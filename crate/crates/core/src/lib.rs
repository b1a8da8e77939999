//! Matroid support, matroidal, Tutte, flag and Feynman polynomials, with exact
//! identity checks, jet-scheme point probes and Frobenius split certificates.

pub mod constructions;
pub mod error;
pub mod feynman;
pub mod fixtures;
pub mod flags;
pub mod fsing;
pub mod graph;
pub mod jets;
pub mod json;
pub mod linalg;
pub mod matroid;
pub mod poly;

pub use error::{Error, Result};
pub use graph::Multigraph;
pub use linalg::RatMatrix;
pub use matroid::{column_matroid, graphic, special_handle, uniform, Matroid};
pub use poly::{Field, Poly, Rat, Var};
pub use constructions::{msp_build, tutte_poly, BasisCoeffs, DPart, Singleton, SingletonData};
pub use feynman::{FeynmanDiagram, FeynmanIntegrand, Kinematics};
pub use flags::{FlagMatroid, FlagPoly};
pub use fsing::FregCertificate;
pub use jets::JetRing;
