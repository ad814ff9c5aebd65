//! The max-plus semiring `(ℝ ∪ {⊥}, ⊕ = max, ⊗ = +)`.
//!
//! `⊥` (bottom, standing for −∞) is a tagged state rather than an
//! `f64::NEG_INFINITY` payload, so `⊗` can never form `−∞ + ∞`. The carrier has
//! no top element and NaN is rejected at construction, which makes the induced
//! order `a ≤ b ⇔ a ⊕ b = b` a total order.
//!
//! `⊕` is exact. `⊗` is floating-point addition, so it is exact only while the
//! sums are representable (integers, dyadic grids); see the law tests below.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::{format_real, Error, Real, Result};

/// A tropical scalar: a finite real or bottom.
#[derive(Clone, Copy, PartialEq)]
pub struct Tropical<T> {
    value: Option<T>,
}

impl<T: Real> Tropical<T> {
    /// Finite value. NaN and infinities are rejected.
    pub fn new(x: T) -> Result<Self> {
        if x.is_nan() {
            Err(Error::NotANumber)
        } else if x.is_infinite() {
            Err(Error::NonFinite(x.to_f64().unwrap_or(f64::NAN)))
        } else {
            Ok(Self { value: Some(x) })
        }
    }

    /// Like [`Tropical::new`] but maps `-inf` to bottom.
    pub fn from_extended(x: T) -> Result<Self> {
        if x == T::neg_infinity() {
            Ok(Self::bottom())
        } else {
            Self::new(x)
        }
    }

    /// The additive identity ⊥.
    pub const fn bottom() -> Self {
        Self { value: None }
    }

    /// The multiplicative identity 0.
    pub fn unit() -> Self {
        Self {
            value: Some(T::zero()),
        }
    }

    pub fn is_bottom(&self) -> bool {
        self.value.is_none()
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_some()
    }

    pub fn finite(self) -> Option<T> {
        self.value
    }

    /// The value as an extended real, bottom becoming `-inf`.
    pub fn to_extended(self) -> T {
        self.value.unwrap_or_else(T::neg_infinity)
    }

    /// Applies `f` to a finite value; bottom stays bottom.
    pub fn map_finite(self, f: impl FnOnce(T) -> T) -> Result<Self> {
        match self.value {
            Some(x) => Self::new(f(x)),
            None => Ok(self),
        }
    }
}

/// `a ⊕ b = max(a, b)` with ⊥ below every finite value.
pub fn trop_add<T: Real>(a: Tropical<T>, b: Tropical<T>) -> Tropical<T> {
    match (a.value, b.value) {
        (Some(x), Some(y)) => Tropical {
            value: Some(if y > x { y } else { x }),
        },
        (Some(_), None) => a,
        (None, _) => b,
    }
}

/// `a ⊗ b = a + b`; ⊥ is absorbing.
pub fn trop_mul<T: Real>(a: Tropical<T>, b: Tropical<T>) -> Tropical<T> {
    match (a.value, b.value) {
        (Some(x), Some(y)) => Tropical { value: Some(x + y) },
        _ => Tropical::bottom(),
    }
}

/// The order induced by idempotent addition: `a ≤ b ⇔ a ⊕ b = b`.
pub fn trop_leq<T: Real>(a: Tropical<T>, b: Tropical<T>) -> bool {
    trop_add(a, b) == b
}

impl<T: Real> Eq for Tropical<T> {}

impl<T: Real> Ord for Tropical<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.value, other.value) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            // NaN never reaches the carrier.
            (Some(x), Some(y)) => x.partial_cmp(&y).expect("NaN in tropical scalar"),
        }
    }
}

impl<T: Real> PartialOrd for Tropical<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Real> Add for Tropical<T> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        trop_add(self, rhs)
    }
}

impl<T: Real> Mul for Tropical<T> {
    type Output = Self;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: Self) -> Self {
        trop_mul(self, rhs)
    }
}

impl<T: Real> Zero for Tropical<T> {
    fn zero() -> Self {
        Self::bottom()
    }

    fn is_zero(&self) -> bool {
        self.is_bottom()
    }
}

impl<T: Real> One for Tropical<T> {
    fn one() -> Self {
        Self::unit()
    }
}

impl<T: Real> Default for Tropical<T> {
    fn default() -> Self {
        Self::bottom()
    }
}

impl<T: Real> fmt::Display for Tropical<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value {
            Some(x) => f.write_str(&format_real(x)),
            None => f.write_str("-inf"),
        }
    }
}

impl<T: fmt::Debug> fmt::Debug for Tropical<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            Some(x) => write!(f, "Tropical({x:?})"),
            None => f.write_str("Tropical(-inf)"),
        }
    }
}

impl<T: Real> FromStr for Tropical<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "-inf" {
            return Ok(Self::bottom());
        }
        // Rust's float parser also accepts "inf"/"nan"; `new` rejects them.
        let x: T = s
            .parse()
            .map_err(|_| Error::Parse(format!("not a tropical literal: {s:?}")))?;
        Self::new(x)
    }
}

impl<T: Real> TryFrom<f64> for Tropical<T> {
    type Error = Error;

    fn try_from(x: f64) -> Result<Self> {
        Self::from_extended(T::from_f64(x).ok_or(Error::NotANumber)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type S = Tropical<f64>;

    fn t(x: f64) -> S {
        S::new(x).unwrap()
    }

    const BOT: S = S::bottom();

    #[test]
    fn add_examples() {
        assert_eq!(trop_add(t(3.0), t(5.0)), t(5.0));
        assert_eq!(trop_add(t(2.0), t(2.0)), t(2.0));
        assert_eq!(trop_add(BOT, t(4.0)), t(4.0));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(trop_mul(t(3.0), t(5.0)), t(8.0));
        assert_eq!(trop_mul(t(7.0), t(0.0)), t(7.0));
        assert_eq!(trop_mul(BOT, t(7.0)), BOT);
    }

    #[test]
    fn leq_examples() {
        assert!(trop_leq(t(2.0), t(5.0)));
        assert!(trop_leq(BOT, t(-1e300)));
        assert!(trop_leq(BOT, BOT));
        assert!(!trop_leq(t(5.0), t(2.0)));
    }

    #[test]
    fn rejects_nan_and_infinities() {
        assert_eq!(S::new(f64::NAN), Err(Error::NotANumber));
        assert!(matches!(S::new(f64::INFINITY), Err(Error::NonFinite(_))));
        assert!(matches!(
            S::new(f64::NEG_INFINITY),
            Err(Error::NonFinite(_))
        ));
        assert_eq!(S::from_extended(f64::NEG_INFINITY), Ok(BOT));
        assert!(S::from_extended(f64::INFINITY).is_err());
    }

    #[test]
    fn text_rendering() {
        assert_eq!(BOT.to_string(), "-inf");
        assert_eq!(t(4.0).to_string(), "4");
        assert_eq!(t(-0.5).to_string(), "-0.5");
        assert_eq!("-inf".parse::<S>(), Ok(BOT));
        assert_eq!(" 2.25 ".parse::<S>(), Ok(t(2.25)));
        assert!("nan".parse::<S>().is_err());
        assert!("inf".parse::<S>().is_err());
        assert!(matches!("x".parse::<S>(), Err(Error::Parse(_))));
    }

    #[test]
    fn num_traits_identities() {
        assert!(S::zero().is_zero());
        assert_eq!(S::one(), t(0.0));
        assert_eq!(t(3.0) * S::one(), t(3.0));
        assert_eq!(t(3.0) + S::zero(), t(3.0));
    }

    #[test]
    fn works_over_f32() {
        let a = Tropical::<f32>::new(1.5).unwrap();
        let b = Tropical::<f32>::new(2.0).unwrap();
        assert_eq!((a + b).finite(), Some(2.0));
        assert_eq!((a * b).finite(), Some(3.5));
        assert_eq!((a * Tropical::bottom()).finite(), None);
    }

    // Dyadic grid k/1024 with |k| < 2^30: sums of three stay exact in f64.
    fn grid() -> impl Strategy<Value = S> {
        prop_oneof![
            1 => Just(BOT),
            6 => (-(1i64 << 30)..(1i64 << 30)).prop_map(|k| t(k as f64 / 1024.0)),
        ]
    }

    fn any_finite() -> impl Strategy<Value = S> {
        prop_oneof![
            1 => Just(BOT),
            6 => (-1e12f64..1e12).prop_map(t),
        ]
    }

    proptest! {
        #[test]
        fn add_is_idempotent_commutative_associative(a in any_finite(), b in any_finite(), c in any_finite()) {
            prop_assert_eq!(a + a, a);
            prop_assert_eq!(a + b, b + a);
            prop_assert_eq!((a + b) + c, a + (b + c));
        }

        #[test]
        fn mul_laws_on_grid(a in grid(), b in grid(), c in grid()) {
            prop_assert_eq!(a * b, b * a);
            prop_assert_eq!((a * b) * c, a * (b * c));
            prop_assert_eq!(a * S::unit(), a);
            prop_assert_eq!(a * BOT, BOT);
        }

        // max then add versus add then max use identical summands, and rounding is monotone.
        #[test]
        fn distributive_for_any_finite(a in any_finite(), b in any_finite(), c in any_finite()) {
            prop_assert_eq!(a * (b + c), (a * b) + (a * c));
            prop_assert_eq!((b + c) * a, (b * a) + (c * a));
        }

        #[test]
        fn leq_is_total_order(a in any_finite(), b in any_finite(), c in any_finite()) {
            prop_assert!(trop_leq(a, a));
            prop_assert!(trop_leq(a, b) || trop_leq(b, a));
            if trop_leq(a, b) && trop_leq(b, a) {
                prop_assert_eq!(a, b);
            }
            if trop_leq(a, b) && trop_leq(b, c) {
                prop_assert!(trop_leq(a, c));
            }
            prop_assert_eq!(trop_leq(a, b), a <= b);
        }

        #[test]
        fn text_round_trip(a in any_finite()) {
            prop_assert_eq!(a.to_string().parse::<S>().unwrap(), a);
        }
    }
}
