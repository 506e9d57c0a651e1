//! Experimental sequence: Fock-state preparation, spin reset, blue-sideband
//! readout scans and population fits.

mod fit;
mod nnls;
mod prep;
mod rabi;
mod readout;

pub use fit::{default_n_max, fit_populations, FitWarning, PopulationFit, ILL_CONDITIONED};
pub use prep::{
    plan_fock_prep, simulate_sequence, PrepPlan, PulseKind, PulseStep, SequenceOutcome,
};
pub use rabi::{
    fit_flop_scan, flop_scan, rabi_ratio_report, FlopFit, FlopScan, RabiReport,
};
pub use readout::{
    readout_signal, sample_probabilities, simulate_bsb_scan, spin_reset, ReadoutScan,
    Sampling, SignalPolarity,
};
