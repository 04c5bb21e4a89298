//! Scalar abstractions.
//!
//! Scores (affinity, centrality, utility) only need ordered-field arithmetic,
//! so the scoring and evaluation layers are generic over [`Score`] and run on
//! `f32`, `f64` or an exact rational. Text vectorization needs square roots
//! and logarithms and is generic over [`Real`].

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, Num, ToPrimitive};

/// Ordered field element usable as an affinity / utility value.
pub trait Score:
    Num + Copy + PartialOrd + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Lossy conversion from `f64`. Panics only for non-finite input.
    fn from_f64_lossy(v: f64) -> Self {
        Self::from_f64(v).expect("finite value representable in score type")
    }

    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in score type")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Closed unit interval check.
    fn in_unit_interval(self) -> bool {
        self >= Self::zero() && self <= Self::one()
    }
}

impl<T> Score for T where
    T: Num + Copy + PartialOrd + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
}

/// Floating point scalar used by the TF-IDF vectorizer.
pub trait Real: Score + Float {}

impl<T> Real for T where T: Score + Float {}

/// Total order on scores, treating incomparable pairs (NaN) as equal.
pub(crate) fn cmp_scores<T: Score>(a: T, b: T) -> std::cmp::Ordering {
    a.partial_cmp(&b).unwrap_or(std::cmp::Ordering::Equal)
}
