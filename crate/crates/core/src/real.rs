use std::fmt::{Debug, Display, LowerExp};
use std::str::FromStr;

use num_traits::{Float, FromPrimitive};

/// Floating-point carrier for tropical values: `f32` or `f64`.
pub trait Real:
    Float + FromPrimitive + Debug + Display + LowerExp + FromStr + Send + Sync + 'static
{
    /// Converts a literal; every `f64` constant used by the crate is representable.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal out of range")
    }

    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count out of range")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Shortest round-trip decimal rendering.
///
/// Plain decimal for magnitudes in `[1e-5, 1e16)` and zero, exponent form
/// otherwise (`9.6e-22`). Non-finite values render as `inf`, `-inf`, `NaN`.
pub fn format_real<T: Real>(x: T) -> String {
    if x.is_nan() {
        return "NaN".to_string();
    }
    if x.is_infinite() {
        return if x > T::zero() { "inf" } else { "-inf" }.to_string();
    }
    let a = x.abs();
    if a == T::zero() || (a >= T::lit(1e-5) && a < T::lit(1e16)) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_integers_without_fraction() {
        assert_eq!(format_real(8.0_f64), "8");
        assert_eq!(format_real(-5.0_f64), "-5");
        assert_eq!(format_real(0.0_f64), "0");
    }

    #[test]
    fn formats_small_and_large_with_exponent() {
        assert_eq!(format_real(9.6e-22_f64), "9.6e-22");
        assert_eq!(format_real(2.5e17_f64), "2.5e17");
        assert_eq!(format_real(0.1_f64), "0.1");
        assert_eq!(format_real(f64::INFINITY), "inf");
    }

    #[test]
    fn rendering_round_trips() {
        for &x in &[
            0.1_f64,
            1.0 / 3.0,
            3.407_605_964_444_38,
            1e-300,
            6.02e23,
            -7.25,
        ] {
            let s = format_real(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
    }
}
