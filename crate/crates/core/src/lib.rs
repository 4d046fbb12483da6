//! Affine frequency division multiplexing (AFDM) over doubly selective
//! channels.
//!
//! The crate is organised bottom-up:
//!
//! - [`daft`]: the discrete affine Fourier transform pair and [`AfdmConfig`].
//! - [`channel`]: integer delay/Doppler multipath channels, both as a
//!   sample-level time-domain simulation and as sparse DAFT-domain matrices.
//! - [`pilot`]: superimposed pilot grids.
//! - [`estimation`]: MMSE channel estimation and path thresholding.
//! - [`detection`]: Gray-mapped PSK, pilot cancellation and message-passing
//!   detection (plus an exhaustive ML oracle for small frames).
//! - [`receiver`]: the iterative estimation/detection loop.

pub mod channel;
pub mod daft;
pub mod detection;
pub mod error;
pub mod estimation;
pub mod pilot;
pub mod receiver;
pub mod sparse;

pub use num_complex::Complex64;

pub use channel::{ChannelPath, ChannelRealization};
pub use daft::{AfdmConfig, Daft, DaftFrame};
pub use detection::{MpOutput, MpParams, SymbolAlphabet};
pub use error::{AfdmError, Result};
pub use estimation::{ChannelPrior, EstimationResult, MmseEstimator};
pub use pilot::PilotConfig;
pub use receiver::{IterationRecord, Receiver, ReceiverParams, ReceiverReport};
pub use sparse::{SparseChannel, Tap};
