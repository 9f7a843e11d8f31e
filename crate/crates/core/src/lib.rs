//! Compile sets of binary vectors into explicit Boolean threshold network
//! decoders and check their correctness, width and error claims by exact
//! simulation.
//!
//! * [`perfect`]: decoders of width `max(⌈n/B⌉+B, BD)` that reproduce every vector.
//! * [`approx`]: narrower decoders of width `max(⌈n/B⌉+B, (B-1)D+1)` whose
//!   average Hamming error is at most `D(1/(B·2^B) + 1/n)`.
//! * [`verify`] and [`bounds`]: simulation harness and closed-form bounds.

pub mod approx;
pub mod bitvec;
pub mod bounds;
pub mod codec;
pub mod error;
pub mod net;
pub mod netlist;
pub mod perfect;
pub mod unit;
pub mod vectors;
pub mod verify;

pub use approx::{
    build_approx_decoder, build_approx_decoder_b3, build_approx_decoder_uncorrected, chi,
    count_patterns, predict_output, weight_fn, PatternStats,
};
pub use bitvec::BitVec;
pub use bounds::{lower_bound, width_formulas, BoundsReport};
pub use codec::{CodecBundle, Encoder, Mode};
pub use error::{Error, Result};
pub use net::{eval_net, metrics, LayeredNet, NetMetrics};
pub use netlist::{parse_netlist, write_netlist};
pub use perfect::{build_encoder, build_gamma_layer, build_perfect_decoder, optimal_b};
pub use unit::{eval_unit, make_equality_recognizer, make_vector_recognizer, ThresholdUnit};
pub use vectors::{assign_codes, code_width, CodeAssignment, VectorSet};
pub use verify::{
    gen_random_set, measure_error, oracle_equivalence, verify_perfect, Distribution, ErrorReport,
    InstanceSpec, MonteCarlo, OracleCheck, Rational,
};
