//! Signed log-domain scalars.
//!
//! Creation-rate brackets contain factors like e^(lambda*t1) with
//! lambda*t1 ~ 1e13, far outside f64 range, while the surrounding algebra
//! still needs signs and additions. [`LogVal`] stores a real number as a
//! sign and the base-10 logarithm of its magnitude; products, quotients,
//! powers, and signed sums stay exact in the exponent no matter how large
//! the magnitude grows.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

const LN_10: f64 = std::f64::consts::LN_10;
const LOG10_E: f64 = std::f64::consts::LOG10_E;

/// A real number as (sign, log10 |x|). Zero is sign 0 with magnitude -inf.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogVal {
    sign: i8,
    log10_abs: f64,
}

impl LogVal {
    pub const ZERO: LogVal = LogVal {
        sign: 0,
        log10_abs: f64::NEG_INFINITY,
    };

    pub const ONE: LogVal = LogVal {
        sign: 1,
        log10_abs: 0.0,
    };

    /// Converts from a finite f64. Panics on NaN; infinities are rejected
    /// by every call site via prior validation.
    pub fn from_f64(x: f64) -> LogVal {
        assert!(!x.is_nan(), "LogVal::from_f64(NaN)");
        if x == 0.0 {
            LogVal::ZERO
        } else {
            LogVal {
                sign: if x > 0.0 { 1 } else { -1 },
                log10_abs: x.abs().log10(),
            }
        }
    }

    /// Builds a value directly from its sign and log10 magnitude.
    pub fn from_log10(sign: i8, log10_abs: f64) -> LogVal {
        assert!(matches!(sign, -1 | 0 | 1), "LogVal sign must be -1, 0, or 1");
        if sign == 0 {
            LogVal::ZERO
        } else {
            LogVal { sign, log10_abs }
        }
    }

    /// e^x as a log-domain value, for any finite x.
    pub fn exp(x: f64) -> LogVal {
        LogVal {
            sign: 1,
            log10_abs: x * LOG10_E,
        }
    }

    /// e^x - 1 as a log-domain value, exact for both tiny and huge x.
    pub fn exp_m1(x: f64) -> LogVal {
        // f64::exp overflows just above 709; switch to the log-domain form
        // where e^-x underflows harmlessly instead.
        if x > 709.0 {
            LogVal {
                sign: 1,
                log10_abs: x * LOG10_E + (-(-x).exp()).ln_1p() / LN_10,
            }
        } else {
            LogVal::from_f64(x.exp_m1())
        }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn log10_abs(&self) -> f64 {
        self.log10_abs
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn is_positive(&self) -> bool {
        self.sign > 0
    }

    /// Signed f64 value; overflows to +-inf and underflows to 0 outside
    /// the representable range.
    pub fn to_f64(&self) -> f64 {
        self.sign as f64 * 10f64.powf(self.log10_abs)
    }

    /// True when the magnitude falls outside normal f64 range.
    pub fn exceeds_f64(&self) -> bool {
        self.sign != 0 && self.log10_abs.abs() > 308.0
    }

    pub fn neg(self) -> LogVal {
        LogVal {
            sign: -self.sign,
            log10_abs: self.log10_abs,
        }
    }

    pub fn mul(self, rhs: LogVal) -> LogVal {
        if self.sign == 0 || rhs.sign == 0 {
            return LogVal::ZERO;
        }
        LogVal {
            sign: self.sign * rhs.sign,
            log10_abs: self.log10_abs + rhs.log10_abs,
        }
    }

    pub fn div(self, rhs: LogVal) -> LogVal {
        assert!(rhs.sign != 0, "LogVal division by zero");
        if self.sign == 0 {
            return LogVal::ZERO;
        }
        LogVal {
            sign: self.sign * rhs.sign,
            log10_abs: self.log10_abs - rhs.log10_abs,
        }
    }

    pub fn square(self) -> LogVal {
        if self.sign == 0 {
            return LogVal::ZERO;
        }
        LogVal {
            sign: 1,
            log10_abs: 2.0 * self.log10_abs,
        }
    }

    /// Signed addition. When magnitudes differ by more than ~17 decades the
    /// smaller operand vanishes, exactly as in fixed-precision arithmetic.
    pub fn add(self, rhs: LogVal) -> LogVal {
        if self.sign == 0 {
            return rhs;
        }
        if rhs.sign == 0 {
            return self;
        }
        let (big, small) = if self.log10_abs >= rhs.log10_abs {
            (self, rhs)
        } else {
            (rhs, self)
        };
        // ratio = |small| / |big| in [0, 1]
        let ratio = 10f64.powf(small.log10_abs - big.log10_abs);
        if big.sign == small.sign {
            LogVal {
                sign: big.sign,
                log10_abs: big.log10_abs + ratio.ln_1p() / LN_10,
            }
        } else if ratio >= 1.0 {
            // equal magnitudes, opposite signs
            LogVal::ZERO
        } else {
            LogVal {
                sign: big.sign,
                log10_abs: big.log10_abs + (-ratio).ln_1p() / LN_10,
            }
        }
    }

    pub fn sub(self, rhs: LogVal) -> LogVal {
        self.add(rhs.neg())
    }

    /// Total order consistent with the signed real values.
    pub fn cmp_value(&self, rhs: &LogVal) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match self.sign.cmp(&rhs.sign) {
            Ordering::Equal => {}
            other => return other,
        }
        match self.sign {
            0 => Ordering::Equal,
            1 => self.log10_abs.partial_cmp(&rhs.log10_abs).unwrap(),
            _ => rhs.log10_abs.partial_cmp(&self.log10_abs).unwrap(),
        }
    }

    /// Pairwise sum over a slice; deterministic for a fixed element order.
    pub fn pairwise_sum(vals: &[LogVal]) -> LogVal {
        match vals.len() {
            0 => LogVal::ZERO,
            1 => vals[0],
            n => {
                let (lo, hi) = vals.split_at(n / 2);
                LogVal::pairwise_sum(lo).add(LogVal::pairwise_sum(hi))
            }
        }
    }
}

/// Serialized as sign, log10 magnitude (null for zero), and the f64 value
/// (null when not representable). JSON has no infinities.
impl Serialize for LogVal {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("LogVal", 3)?;
        s.serialize_field("sign", &self.sign)?;
        let log10 = if self.sign == 0 { None } else { Some(self.log10_abs) };
        s.serialize_field("log10_abs", &log10)?;
        let value = self.to_f64();
        s.serialize_field("value", &if value.is_finite() { Some(value) } else { None })?;
        s.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64, rel: f64) {
        let scale = a.abs().max(b.abs()).max(f64::MIN_POSITIVE);
        assert!((a - b).abs() <= rel * scale, "{a} vs {b} (rel {rel})");
    }

    #[test]
    fn roundtrip_preserves_value() {
        for &x in &[3.5, -2.75e-40, 1e300, -1.0, 0.0] {
            assert_close(LogVal::from_f64(x).to_f64(), x, 1e-14);
        }
        assert_eq!(LogVal::from_f64(0.0), LogVal::ZERO);
    }

    #[test]
    fn arithmetic_matches_f64_in_range() {
        let a = LogVal::from_f64(3.25);
        let b = LogVal::from_f64(-1.5);
        assert_close(a.add(b).to_f64(), 1.75, 1e-14);
        assert_close(a.sub(b).to_f64(), 4.75, 1e-14);
        assert_close(a.mul(b).to_f64(), -4.875, 1e-14);
        assert_close(a.div(b).to_f64(), -13.0 / 6.0, 1e-14);
        assert_close(b.square().to_f64(), 2.25, 1e-14);
    }

    #[test]
    fn opposite_signs_cancel_exactly() {
        let a = LogVal::from_f64(7.0);
        assert!(a.add(a.neg()).is_zero());
    }

    #[test]
    fn exp_m1_agrees_with_f64_for_small_exponents() {
        for &x in &[1e-8, 0.5, 10.0, 700.0, -3.0, -500.0] {
            assert_close(LogVal::exp_m1(x).to_f64(), x.exp_m1(), 1e-13);
        }
    }

    #[test]
    fn exp_m1_handles_huge_exponents() {
        let v = LogVal::exp_m1(1e7);
        assert_eq!(v.sign(), 1);
        assert_close(v.log10_abs(), 1e7 * std::f64::consts::LOG10_E, 1e-14);
        assert!(v.exceeds_f64());
    }

    #[test]
    fn sum_of_distant_magnitudes_keeps_the_larger() {
        let big = LogVal::from_log10(1, 100.0);
        let small = LogVal::from_log10(1, 0.0);
        assert_eq!(big.add(small), big);
    }

    #[test]
    fn ordering_follows_signed_value() {
        use std::cmp::Ordering::*;
        let neg_big = LogVal::from_f64(-1e10);
        let neg_small = LogVal::from_f64(-1.0);
        let pos = LogVal::from_f64(2.0);
        assert_eq!(neg_big.cmp_value(&neg_small), Less);
        assert_eq!(neg_small.cmp_value(&pos), Less);
        assert_eq!(pos.cmp_value(&pos), Equal);
        assert_eq!(LogVal::ZERO.cmp_value(&pos), Less);
    }

    #[test]
    fn pairwise_sum_matches_sequential() {
        let vals: Vec<LogVal> = (1..=9).map(|i| LogVal::from_f64(i as f64)).collect();
        assert_close(LogVal::pairwise_sum(&vals).to_f64(), 45.0, 1e-13);
    }
}
