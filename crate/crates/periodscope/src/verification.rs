//! Verification checks over the built-in examples (filled in below).
pub struct Placeholder;
