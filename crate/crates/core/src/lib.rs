//! Atomic Kapitza-Dirac diffraction by standing light waves whose wavelength
//! is comparable to the size of the atom.
//!
//! * [`potentials`]: time-averaged lightshift and induced-quadrupole potential;
//! * [`diffraction`]: Raman-Nath patterns from Bessel series, with an FFT oracle;
//! * [`feasibility`]: regime, intensity, timing, ionization and photon-count estimates;
//! * [`fitting`]: recovery of grating phases and polarizabilities from peak intensities.

pub mod bessel;
pub mod cli;
pub mod diffraction;
pub mod feasibility;
pub mod fitting;
pub mod potentials;
pub mod scenario;
pub mod units;
pub mod verify;

