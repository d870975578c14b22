pub mod diagnostics;
pub mod error;
pub mod fusion;
pub mod io;
pub mod kr_algebra;
pub mod real_structure;
pub mod real_verlinde;
pub mod root_system;

pub use diagnostics::{Check, Report};
pub use error::{Error, Result};
pub use kr_algebra::{KPlusCoefficient, KRCoefficient, SpincClassification};
pub use fusion::{FusionTable, Guards, LevelWeights, SMatrix, VirtualCharacter};
pub use real_structure::{EpsilonSpec, Preset, RealInvolutionDatum, TypeDecomposition};
pub use real_verlinde::{RKRElement, RealBasisElement, RealIdealGenerator, RealVerlinde};
pub use root_system::{CartanType, Family, RootDatum, Weight};
