//! Scaled quantum Zeno products `p_{N,α}(τ) = p(τ N^{α-1})^N` evaluated on
//! spectral measures, together with oracles that predict their `N → ∞`
//! limit and cross-check the evaluation by brute-force convolution.

pub mod convolution;
pub mod engine;
pub mod error;
pub mod exponent;
pub mod oracle;
pub mod quadrature;
pub mod spectral;

pub use convolution::{
    convolve_pp, self_convolve, verify_powers_equal_convolution, ConvolvedMeasure,
};
pub use engine::{
    log_survival, scaled_zeno_product, survival_probability, taylor_check, zeno_product,
    LogProbability, TaylorCheck, ZenoParams,
};
pub use error::{Error, Result};
pub use exponent::{Exponent, RationalExponent};
pub use oracle::{
    almost_everywhere_fraction, analyze_commensurability, lattice_membership, predict_limit,
    predict_limit_with, recurrence_schedule, recurrence_subsequence, verify_prediction,
    CommensurabilityResult, OracleConfig, Regime, RegimePrediction, Trend, VerificationPoint,
    VerificationReport,
};
pub use spectral::{
    char_fn, mean, scale_measure, shift_measure, validate, variance, zeno_time, AbsContMeasure,
    CantorMeasure, EnergyAtom, ExtendedReal, Mixture, MixtureComponent, PurePointMeasure,
    SpectralMeasure, SpectralType, ZenoTime,
};
