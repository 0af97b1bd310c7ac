//! Pseudospectral simulation of the 2D incompressible Navier-Stokes equations
//! on the periodic torus driven by additive white noise `h(x) dW`.

pub mod spectral;
pub mod noise;
pub mod dynamics;
pub mod experiments;
pub mod io;
pub mod cli;
