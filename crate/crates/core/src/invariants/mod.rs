//! Lens space d-invariants and the signature obstruction to band surgery.

pub mod lens;
pub mod obstruction;

pub use lens::{chirally_cosmetic_lens, d_lens, is_square_free, self_conjugate_spins, DCache, LensSpace, Rational};
pub use obstruction::{
    band_obstruction, classification_csv, classification_matrix, delta_from_signature, murasugi_congruence_check,
    table_classification, ObstructionVerdict, PairVerdict, Reason, Status,
};
