//! Characteristic elements, Koszul homology and Akashi series for modules over
//! the Iwasawa algebra `Z_p[[T]]`, computed at explicit finite precision.

pub mod assembler;
pub mod charel;
pub mod determinantal;
pub mod elliptic;
pub mod error;
pub mod json;
pub mod koszul;
pub mod matrix;
pub mod modules;
pub mod oracle;
pub mod padic;
mod poly;
pub mod random;
pub mod series;
pub mod weierstrass;
pub mod zpn;

pub use assembler::{
    assemble_gl2, assemble_main, cyclotomic_bookkeeping, euler_characteristic_correction, require_assumptions,
    Assumption, EulerCharCorrection, FormulaReport, LocalOptions, SplitPlace, GL2_ASSUMPTIONS, MAIN_ASSUMPTIONS,
};
pub use charel::{CharElement, CharQuotient};
pub use determinantal::determinantal_divisor;
pub use elliptic::{
    count_points, euler_factor_at_one, local_correction_series, mu_valuation, CurveData, EulerFactor,
    FrobeniusConvention, LocalPlaceData, Reduction,
};
pub use error::{Error, ErrorClass, Result};
pub use koszul::{
    akashi_series, koszul_homology, verify_multiplicativity, AkashiOptions, AkashiResult, ModuleMap, SigmaBase,
    SigmaModule,
};
pub use matrix::SeriesMatrix;
pub use modules::{rank_one_twist, FiniteFormModule, FlatModule, PresentationModule, TwistConvention};
pub use padic::{PadicInt, Valuation, Zp};
pub use series::LambdaSeries;
pub use weierstrass::{normalize_mod_units, prepare as weierstrass_prepare, WeierstrassDecomposition};
