//! Time-frequency analysis on the cyclic group `Z_n^d`.
//!
//! The crate is a finite model of the Gabor-analytic machinery used to study
//! Schatten-class Fourier integral operators:
//!
//! - [`signal`]: signals on `Z_n^d`, time-frequency shifts, the unitary DFT,
//!   the short-time Fourier transform and the discrete Wiener amalgam norm.
//! - [`frames`]: Gabor systems on separable lattices, frame operators, dual and
//!   canonical tight windows.
//! - [`mixed`]: permutations, the slice / FIO-slice / FIO-symbol taxonomy and
//!   nested `l^p` norms of multi-axis arrays.
//! - [`fio`]: symbol and phase tables, both forms of discretized Fourier
//!   integral operators, chirps, quadratic phases and the frame slicing family.
//! - [`schatten`]: singular values and Schatten `p`-norms.
//! - [`lab`]: the experiment harness and the `fiolab` command line.
//!
//! Phases are measured in cycles throughout: a phase table `psi` acts through
//! `exp(2 pi i psi)`.

#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod fio;
pub mod frames;
pub mod io;
pub mod lab;
pub mod mixed;
pub mod operator;
pub mod schatten;
pub mod signal;

pub use error::{Error, Result};
pub use fio::{PhaseTable, QuadraticPhase, SliceFamily, SymbolTable};
pub use frames::{FrameBounds, GaborSystem, LatticeCoefficients};
pub use mixed::{Exponent, ExponentVector, Permutation, PermutationClass};
pub use operator::OperatorMatrix;
pub use schatten::SingularSpectrum;
pub use signal::{FiniteSignal, TFArray, C64};
