pub mod compare;
pub mod evaluate;
pub mod fit;
pub mod parity;
pub mod sequential;
pub mod synth;
pub mod validate_market;
