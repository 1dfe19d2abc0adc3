//! Validated parameters bundled with everything derived from them once.

use crate::dispersion::StructuralPoints;
use crate::error::Result;
use crate::model::{validate, CharacteristicPoints, ExchangeRegime, WaveguideParams};

/// Shared evaluation context. Cheap to clone and immutable, so one instance
/// can be handed to any number of worker threads.
#[derive(Debug, Clone)]
pub struct Waveguide {
    pub params: WaveguideParams,
    pub points: CharacteristicPoints,
    pub regime: ExchangeRegime,
    pub structure: StructuralPoints,
}

impl Waveguide {
    pub fn new(params: WaveguideParams) -> Result<Self> {
        let v = validate(params)?;
        let structure = StructuralPoints::compute(&v.params)?;
        Ok(Self {
            params: v.params,
            points: v.points,
            regime: v.regime,
            structure,
        })
    }

    pub fn preset() -> Self {
        Self::new(WaveguideParams::preset()).expect("preset parameters are valid")
    }

    /// Strip `|Im ω| < h` where the principal sheet is analytic.
    pub fn strip_height(&self) -> f64 {
        self.structure.strip_height()
    }
}
