//! Slopes of colored links and tangles.
//!
//! Diagrams (PD codes, braid words, 2-string tangles) become Wirtinger presentations; Fox
//! calculus turns those into Laurent matrices, and the slope of a distinguished component is
//! read off the kernel of its peripheral pair at a character, exactly in cyclotomic fields
//! when possible. Around that sit Alexander and Conway polynomials with a Torres cross-check,
//! the Burau route for closed braids, tangle slopes with skein checks, the splice correction
//! terms, and a bundled corpus of golden cases.

pub mod cyclotomic;
pub mod error;
pub mod laurent;
pub mod linalg;
pub mod par;
pub mod presentation;
pub mod diagram;
pub mod charspec;
pub mod slope;
pub mod burau;
pub mod alexander;
pub mod splice;
pub mod tangle;
pub mod corpus;
