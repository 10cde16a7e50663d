//! SL(d) cocycles over circle rotations and their continuous-time
//! extensions over suspension flows.
//!
//! The crate covers the full pipeline: fixed-size linear algebra
//! ([`linalg`]), the driving dynamics ([`driving`]), discrete cocycles
//! ([`cocycle`]), homotopy classification and contraction of generator loops
//! ([`homotopy`]), generator fields and the RK4 fundamental solution
//! ([`extension`]) and Lyapunov/Oseledets estimators ([`spectral`]).

pub mod cocycle;
pub mod driving;
pub mod error;
pub mod extension;
pub mod homotopy;
pub mod linalg;
pub mod spectral;
pub mod tol;

pub use cocycle::{block_embed, half_speed, DiscreteCocycle, Generator, HermanConvention, HermanParameters};
pub use driving::{frac, Alpha, CircleRotation, MappingTorusPoint, SuspensionFlow};
pub use error::{Error, Result};
pub use extension::{
    extend_half_speed, extend_sl2_via_embedding, natural_extension, verify_extension, ContinuousCocycle, Extension,
    ExtensionVariant, GeneratorField, IntegratorConfig, VerificationReport,
};
pub use homotopy::{
    build_homotopy_sl2, build_homotopy_sl3, classify, concatenate, is_nullhomotopic, winding_number, HomotopyClass,
    HomotopyPath, Loop,
};
pub use linalg::{Mat, RotationMatrix, SlMatrix, SpdFactor, TracelessMatrix, UnitQuaternion, Vector};
